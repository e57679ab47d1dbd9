//! Mutable representation of a sumset `Σ AP(i, A[i])` over `Z_p`, together
//! with the marking table and the journal of applied operations.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::modmath::{add_mod, mul_mod};

/// Cache hint for `slice[idx]`; out-of-range indices are ignored.
#[inline]
fn prefetch_slot<T>(slice: &[T], idx: usize) {
    #[cfg(target_arch = "x86_64")]
    if let Some(slot) = slice.get(idx) {
        // SAFETY: prefetching has no architectural effect and the pointer is
        // in bounds.
        unsafe {
            use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
            _mm_prefetch::<_MM_HINT_T0>((slot as *const T).cast());
        }
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = (slice, idx);
}

/// Multiplicity array `A` over `Z_p` plus its cached weight, diversity and
/// the accumulated global shift.
///
/// `A[i]` is the length of the progression with difference `i`; the sumset
/// represented is `g + Σ_i AP(i, A[i])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueState {
    modulus: usize,
    lengths: Vec<i64>,
    weight: i64,
    diversity: usize,
    shift: usize,
}

impl ResidueState {
    /// Builds the state for the prime-case lemma: exactly `p - 1` nonzero
    /// residues.
    pub fn from_values(p: usize, values: &[usize]) -> Result<Self> {
        if p < 2 {
            return Err(Error::ModulusTooSmall(p as u64));
        }
        if values.len() != p - 1 {
            return Err(Error::WrongCount {
                expected: p - 1,
                got: values.len(),
            });
        }
        let mut lengths = vec![0i64; p];
        for (index, &v) in values.iter().enumerate() {
            if v >= p {
                return Err(Error::OutOfRange {
                    index,
                    value: v as u64,
                    bound: p as u64,
                });
            }
            if v == 0 {
                return Err(Error::ZeroValue {
                    index,
                    modulus: p as u64,
                });
            }
            lengths[v] += 1;
        }
        Ok(Self::from_lengths(lengths))
    }

    /// Builds a state from an explicit multiplicity array; `lengths.len()` is
    /// the modulus and `lengths[0]` must be zero.
    pub fn from_lengths(lengths: Vec<i64>) -> Self {
        assert!(lengths.len() >= 2, "modulus must be at least 2");
        assert_eq!(lengths[0], 0, "difference 0 cannot carry length");
        assert!(lengths.iter().all(|&l| l >= 0), "negative length");
        let weight = lengths.iter().sum();
        let diversity = lengths.iter().filter(|&&l| l > 0).count();
        Self {
            modulus: lengths.len(),
            lengths,
            weight,
            diversity,
            shift: 0,
        }
    }

    #[inline]
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// `A[i]`.
    #[inline]
    pub fn len(&self, i: usize) -> i64 {
        self.lengths[i]
    }

    pub fn lengths(&self) -> &[i64] {
        &self.lengths
    }

    /// `W = Σ A[i]`.
    #[inline]
    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// `s = |{i : A[i] > 0}|`.
    #[inline]
    pub fn diversity(&self) -> usize {
        self.diversity
    }

    /// Global shift `g`.
    #[inline]
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub(crate) fn add_shift(&mut self, delta: usize) {
        self.shift = add_mod(self.shift, delta % self.modulus, self.modulus);
    }

    /// Hints that `A[i]` is about to be read.
    #[inline]
    pub(crate) fn prefetch_len(&self, i: usize) {
        prefetch_slot(&self.lengths, i);
    }

    /// Sets `A[i]` keeping `W` and `s` in sync.
    #[inline]
    pub(crate) fn set_len(&mut self, i: usize, new: i64) {
        debug_assert!(new >= 0);
        debug_assert!(i != 0 || new == 0);
        let old = self.lengths[i];
        self.weight += new - old;
        match (old > 0, new > 0) {
            (false, true) => self.diversity += 1,
            (true, false) => self.diversity -= 1,
            _ => {}
        }
        self.lengths[i] = new;
    }

    /// Operation 0-Drop: shortens `A[i]` to `new_count`. Dropped length is
    /// never consumed by recovery, so nothing is journaled.
    pub fn drop_to(&mut self, i: usize, new_count: i64) -> Result<()> {
        let current = self.lengths[i];
        if new_count < 0 || new_count > current {
            return Err(Error::DropOutOfRange {
                index: i,
                requested: new_count,
                current,
            });
        }
        self.set_len(i, new_count);
        Ok(())
    }

    /// Nonzero differences in increasing order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.lengths
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(i, _)| i)
    }

    /// Recomputes `W` and `s` from scratch and compares with the caches.
    pub fn check_caches(&self) -> Result<()> {
        let w: i64 = self.lengths.iter().sum();
        let s = self.lengths.iter().filter(|&&l| l > 0).count();
        if w != self.weight {
            return Err(Error::Invariant(format!(
                "cached W={} but recomputed W={w}",
                self.weight
            )));
        }
        if s != self.diversity {
            return Err(Error::Invariant(format!(
                "cached s={} but recomputed s={s}",
                self.diversity
            )));
        }
        Ok(())
    }
}

/// Cell marks `(c, i)` written on cell `c·i`, and the per-difference counter
/// `C[i]` of marked multiples.
///
/// Each cell packs `c` in the high and `i` in the low 32 bits; `c == 0`
/// means the cell is empty.
#[derive(Debug, Clone)]
pub struct MarkTable {
    modulus: usize,
    cells: Vec<u64>,
    counts: Vec<u32>,
    marked: usize,
}

impl MarkTable {
    pub fn new(n: usize) -> Self {
        Self {
            modulus: n,
            cells: vec![0; n],
            counts: vec![0; n],
            marked: 0,
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Mark on `cell`, if any, as `(c, i)`.
    #[inline]
    pub fn get(&self, cell: usize) -> Option<(i64, usize)> {
        match self.cells[cell] {
            0 => None,
            m => Some(((m >> 32) as i64, m as u32 as usize)),
        }
    }

    /// Hints that `cell` is about to be probed.
    #[inline]
    pub(crate) fn prefetch(&self, cell: usize) {
        prefetch_slot(&self.cells, cell);
    }

    /// Hints that `C[i]` is about to be read.
    #[inline]
    pub(crate) fn prefetch_count(&self, i: usize) {
        prefetch_slot(&self.counts, i);
    }

    /// `C[i]`.
    #[inline]
    pub fn count(&self, i: usize) -> i64 {
        self.counts[i] as i64
    }

    /// Number of nonempty cells, always equal to `Σ C[i]`.
    pub fn marked_cells(&self) -> usize {
        self.marked
    }

    pub fn is_empty(&self) -> bool {
        self.marked == 0
    }

    /// Writes `(C[i] + 1, i)` on its cell, which must be empty.
    #[inline]
    pub(crate) fn push_mark(&mut self, i: usize) -> usize {
        let c = self.counts[i] + 1;
        let cell = mul_mod(c as usize, i, self.modulus);
        debug_assert_eq!(self.cells[cell], 0, "cell {cell} already marked");
        self.cells[cell] = (c as u64) << 32 | i as u64;
        self.counts[i] = c;
        self.marked += 1;
        cell
    }

    /// Removes the marks `(e, i)` for `keep < e <= C[i]` and sets `C[i] = keep`.
    pub(crate) fn truncate(&mut self, i: usize, keep: i64) {
        let keep = keep.max(0) as u32;
        let top = self.counts[i];
        if top <= keep {
            return;
        }
        let n = self.modulus;
        let mut cell = mul_mod(keep as usize + 1, i, n);
        for _ in keep..top {
            debug_assert_eq!(self.cells[cell] as u32 as usize, i);
            self.cells[cell] = 0;
            cell = add_mod(cell, i, n);
        }
        self.marked -= (top - keep) as usize;
        self.counts[i] = keep;
    }

    /// Empties the table.
    pub fn clear(&mut self) {
        if self.marked == 0 {
            return;
        }
        self.cells.fill(0);
        self.counts.fill(0);
        self.marked = 0;
    }

    /// Every `(cell, c, i)` currently marked.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, usize)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(cell, &m)| (cell, (m >> 32) as i64, m as u32 as usize))
    }

    #[cfg(test)]
    pub(crate) fn counts_mut(&mut self) -> &mut [u32] {
        &mut self.counts
    }
}

/// Which container an Operation-2 result was credited to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pool {
    /// Added straight into `A`.
    Main,
    /// Added to the growth step's next-generation accumulator.
    Next,
}

/// One journaled transformation.
///
/// Trim journals one `Op1` per collision, so that variant is kept to 32-bit
/// fields; the rarer fusion records are boxed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    /// `c·gain = d·lose`; `batches` copies of `d` units of `lose` were
    /// exchanged for `c` units of `gain` each. `gain_before` is `A[gain]`
    /// before the exchange.
    Op1 {
        gain: u32,
        lose: u32,
        c: u32,
        d: u32,
        batches: u32,
        gain_before: u32,
    },
    Op2(Box<Fusion>),
    /// End of a growth pass: the next-generation pool was folded into `A`.
    /// Each entry is `(z, A[z] before folding)` for every `z` the pool held.
    Merge {
        entries: Vec<(usize, i64)>,
    },
}

/// `c·i = d·j` with `gcd(c, d) = 1`. `AP(i, len_i) + AP(j, len_j)` was
/// replaced by `F·z + AP(z, added)` where `z = i/d = j/c` and
/// `F = (c-1)(d-1)`. `base` is the length of `z` in the credited pool just
/// before `added` was credited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fusion {
    pub i: usize,
    pub j: usize,
    pub c: i64,
    pub d: i64,
    pub len_i: i64,
    pub len_j: i64,
    pub z: usize,
    pub added: i64,
    pub base: i64,
    pub pool: Pool,
}

/// Append-only journal of applied transformations, in chronological order.
#[derive(Debug, Clone, Default)]
pub struct OpLog {
    records: Vec<Record>,
}

impl OpLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub(crate) fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// FIFO ring of candidate indices with an in-queue flag per index.
#[derive(Debug, Clone)]
pub struct Worklist {
    queue: VecDeque<u32>,
    queued: Vec<bool>,
}

impl Worklist {
    pub fn new(n: usize) -> Self {
        Self {
            queue: VecDeque::new(),
            queued: vec![false; n],
        }
    }

    /// Inserts `i` unless it is already waiting.
    #[inline]
    pub fn push(&mut self, i: usize) {
        if !self.queued[i] {
            self.queued[i] = true;
            self.queue.push_back(i as u32);
        }
    }

    #[inline]
    pub fn pop(&mut self) -> Option<usize> {
        let i = self.queue.pop_front()? as usize;
        self.queued[i] = false;
        Some(i)
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }
}

/// Checks every structural invariant tying `state` and `marks` together.
///
/// Linear in `p`; meant for tests and instrumented runs.
pub fn assert_invariants(state: &ResidueState, marks: &MarkTable) -> Result<()> {
    let n = state.modulus();
    if marks.modulus() != n {
        return Err(Error::Invariant("mark table modulus mismatch".into()));
    }
    state.check_caches()?;
    if state.len(0) != 0 {
        return Err(Error::Invariant("A[0] != 0".into()));
    }
    let mut total_c = 0i64;
    for i in 1..n {
        let c = marks.count(i);
        if c > state.len(i) {
            return Err(Error::Invariant(format!(
                "C[i]<=A[i] fails at i={i}: C={c}, A={}",
                state.len(i)
            )));
        }
        for e in 1..=c {
            let cell = mul_mod(e as usize, i, n);
            if marks.get(cell) != Some((e, i)) {
                return Err(Error::Invariant(format!(
                    "cell {cell} should carry mark ({e},{i}) but holds {:?}",
                    marks.get(cell)
                )));
            }
        }
        total_c += c;
    }
    let mut nonempty = 0i64;
    for (cell, c, i) in marks.iter() {
        nonempty += 1;
        if i == 0 || i >= n || c < 1 || c as usize >= n {
            return Err(Error::Invariant(format!(
                "malformed mark ({c},{i}) at {cell}"
            )));
        }
        if mul_mod(c as usize, i, n) != cell {
            return Err(Error::Invariant(format!(
                "mark ({c},{i}) sits on wrong cell {cell}"
            )));
        }
        if c > state.len(i) {
            return Err(Error::Invariant(format!(
                "mark ({c},{i}) exceeds A[i]={}",
                state.len(i)
            )));
        }
    }
    if nonempty != total_c || nonempty as usize != marks.marked_cells() {
        return Err(Error::Invariant(format!(
            "sum of C is {total_c} but {nonempty} cells are marked"
        )));
    }
    if total_c > n as i64 - 1 {
        return Err(Error::Invariant(format!("sum of C is {total_c} > n-1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_examples() {
        let s = ResidueState::from_values(5, &[1, 1, 1, 1]).unwrap();
        assert_eq!(s.lengths(), &[0, 4, 0, 0, 0]);
        assert_eq!((s.weight(), s.diversity(), s.shift()), (4, 1, 0));

        let s = ResidueState::from_values(5, &[1, 2, 3, 4]).unwrap();
        assert_eq!(s.lengths(), &[0, 1, 1, 1, 1]);
        assert_eq!((s.weight(), s.diversity()), (4, 4));

        let s = ResidueState::from_values(7, &[3, 3, 5, 5, 5, 6]).unwrap();
        assert_eq!((s.len(3), s.len(5), s.len(6)), (2, 3, 1));
        assert_eq!((s.weight(), s.diversity()), (6, 3));
    }

    #[test]
    fn init_rejects_bad_input() {
        assert_eq!(
            ResidueState::from_values(5, &[1, 0, 1, 1]).unwrap_err(),
            Error::ZeroValue {
                index: 1,
                modulus: 5
            }
        );
        assert_eq!(
            ResidueState::from_values(5, &[1, 1, 1]).unwrap_err(),
            Error::WrongCount {
                expected: 4,
                got: 3
            }
        );
        assert!(matches!(
            ResidueState::from_values(5, &[1, 1, 7, 1]),
            Err(Error::OutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn drop_examples() {
        let mut lengths = vec![0i64; 7];
        lengths[3] = 5;
        lengths[1] = 1;
        let base = ResidueState::from_lengths(lengths);

        let mut s = base.clone();
        s.drop_to(3, 5).unwrap();
        assert_eq!(s, base);

        let mut s = base.clone();
        s.drop_to(3, 0).unwrap();
        assert_eq!((s.len(3), s.weight(), s.diversity()), (0, 1, 1));

        let mut s = base.clone();
        s.drop_to(3, 2).unwrap();
        assert_eq!((s.len(3), s.weight(), s.diversity()), (2, 3, 2));

        assert!(matches!(s.drop_to(3, 3), Err(Error::DropOutOfRange { .. })));
        assert!(matches!(
            s.drop_to(3, -1),
            Err(Error::DropOutOfRange { .. })
        ));
        s.check_caches().unwrap();
    }

    #[test]
    fn invariants_detect_injected_violation() {
        let s = ResidueState::from_values(7, &[3, 3, 5, 5, 5, 6]).unwrap();
        let mut m = MarkTable::new(7);
        assert_invariants(&s, &m).unwrap();
        m.push_mark(3);
        m.push_mark(3);
        assert_invariants(&s, &m).unwrap();
        m.counts_mut()[3] = 3;
        let err = assert_invariants(&s, &m).unwrap_err();
        assert!(err.to_string().contains("C[i]<=A[i]"), "{err}");
    }

    #[test]
    fn truncate_removes_top_marks() {
        let mut m = MarkTable::new(11);
        for _ in 0..4 {
            m.push_mark(3);
        }
        assert_eq!(m.marked_cells(), 4);
        m.truncate(3, 1);
        assert_eq!(m.count(3), 1);
        assert_eq!(m.marked_cells(), 1);
        assert_eq!(m.get(3), Some((1, 3)));
        assert_eq!(m.get(6), None);
        assert_eq!(m.get(1), None); // 4·3 = 12 ≡ 1
    }

    #[test]
    fn worklist_is_fifo_without_duplicates() {
        let mut w = Worklist::new(5);
        w.push(3);
        w.push(1);
        w.push(3);
        assert_eq!(w.len(), 2);
        assert_eq!(w.pop(), Some(3));
        w.push(3);
        assert_eq!(w.pop(), Some(1));
        assert_eq!(w.pop(), Some(3));
        assert_eq!(w.pop(), None);
    }
}
