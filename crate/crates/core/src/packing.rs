//! Packing phase: growing a covered set `S ⊂ Z_n` one progression at a time.
//!
//! Every inserted cell remembers how it was reached, so a construction for
//! any covered residue can be read back by walking the chain of origins.

use crate::error::{Error, Result};
use crate::modmath::{ceil_log2, mul_mod, sub_mod, InverseTable};
use crate::state::MarkTable;

/// How a cell entered the covered set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// `c` copies of difference `i`; cell 0 is `Base { c: 0, i: 0 }`.
    Base { c: i64, i: usize },
    /// One more copy of `b` on top of the cell `t - b`.
    Pack { b: usize },
}

/// Boolean membership plus per-cell origin.
///
/// Origins are packed into two `u32` arrays: `(c, i)` with `c >= 1` for a
/// base cell, `(0, b)` for a packed one and `(0, 0)` for cell 0.
#[derive(Debug, Clone)]
pub struct CoverageSet {
    n: usize,
    member: Vec<bool>,
    origin_c: Vec<u32>,
    origin_i: Vec<u32>,
    size: usize,
    cursor: usize,
    order: Vec<u32>,
}

impl CoverageSet {
    /// `S = {0}`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut member = vec![false; n];
        member[0] = true;
        Self {
            n,
            member,
            origin_c: vec![0; n],
            origin_i: vec![0; n],
            size: 1,
            cursor: 1,
            order: vec![0],
        }
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_full(&self) -> bool {
        self.size == self.n
    }

    /// Always 0.
    pub fn any_member(&self) -> usize {
        0
    }

    /// Smallest non-member at or after the cursor. Membership only grows, so
    /// the cursor never moves back.
    pub fn any_nonmember(&mut self) -> Option<usize> {
        while self.cursor < self.n && self.member[self.cursor] {
            self.cursor += 1;
        }
        (self.cursor < self.n).then_some(self.cursor)
    }

    pub fn insert(&mut self, x: usize, origin: Origin) -> Result<()> {
        if self.member[x] {
            return Err(Error::Invariant(format!("cell {x} inserted twice")));
        }
        let (c, i) = match origin {
            Origin::Base { c, i } => {
                if c < 1 {
                    return Err(Error::Invariant(format!("base cell {x} with c={c}")));
                }
                (c as u32, i as u32)
            }
            Origin::Pack { b } => {
                if b == 0 {
                    return Err(Error::ZeroDifference);
                }
                (0, b as u32)
            }
        };
        self.member[x] = true;
        self.origin_c[x] = c;
        self.origin_i[x] = i;
        self.size += 1;
        self.order.push(x as u32);
        Ok(())
    }

    pub fn origin(&self, x: usize) -> Option<Origin> {
        if !self.member[x] {
            return None;
        }
        Some(match (self.origin_c[x], self.origin_i[x]) {
            (0, 0) => Origin::Base { c: 0, i: 0 },
            (0, b) => Origin::Pack { b: b as usize },
            (c, i) => Origin::Base {
                c: c as i64,
                i: i as usize,
            },
        })
    }

    /// Cells in insertion order.
    pub fn insertion_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().map(|&x| x as usize)
    }

    /// Replays insertions and checks that every base cell equals `c·i` and
    /// every packed cell `t` had `t - b` covered before it.
    pub fn check_chain(&self) -> Result<()> {
        let n = self.n;
        let mut seen = vec![false; n];
        for x in self.insertion_order() {
            match self.origin(x).expect("ordered cells are members") {
                Origin::Base { c, i } => {
                    if mul_mod(c as usize, i, n) != x {
                        return Err(Error::Invariant(format!("base cell {x} is not {c}·{i}")));
                    }
                }
                Origin::Pack { b } => {
                    let prev = sub_mod(x, b % n, n);
                    if !seen[prev] {
                        return Err(Error::Invariant(format!(
                            "cell {x} packed with step {b} before {prev} was covered"
                        )));
                    }
                }
            }
            seen[x] = true;
        }
        Ok(())
    }
}

/// Finds `c ∉ S` with `c - b ∈ S` by binary search over the rescaled line
/// `r ↦ r·b`, starting from `x = 0 ∈ S` and `y = t/b` for some `t ∉ S`.
/// `S` is not modified.
pub fn add_single(set: &mut CoverageSet, b: usize, inv: &InverseTable) -> Result<usize> {
    let n = set.modulus();
    if b.is_multiple_of(n) {
        return Err(Error::ZeroDifference);
    }
    let t = set.any_nonmember().ok_or(Error::SetFull)?;
    let (mut x, mut y) = (0usize, inv.div(t, b));
    while y - x > 1 {
        let mid = x + (y - x) / 2;
        if set.contains(mul_mod(mid, b, n)) {
            x = mid;
        } else {
            y = mid;
        }
    }
    Ok(mul_mod(y, b, n))
}

/// Invocation statistics of one [`fillgap_add_ap`] call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FillStats {
    pub calls: u64,
    pub max_depth: u32,
}

struct Frame {
    x: usize,
    y: usize,
    mid: usize,
    stage: u8,
}

/// Adds `min(k, n - |S|)` cells to `S`, each one step `b` beyond a cell
/// already covered, so that `S ∪ T ⊂ S + AP(b, k)`.
///
/// Runs the recursive gap-filling search on the rescaled line (position `r`
/// stands for cell `r·b`) with an explicit stack. Returns the new cells in
/// insertion order.
pub fn fillgap_add_ap(
    set: &mut CoverageSet,
    b: usize,
    k: i64,
    inv: &InverseTable,
) -> Result<(Vec<usize>, FillStats)> {
    let n = set.modulus();
    if b.is_multiple_of(n) {
        return Err(Error::ZeroDifference);
    }
    let want = (k.max(0) as usize).min(n - set.size());
    let mut added = Vec::with_capacity(want);
    let mut stats = FillStats::default();
    let depth_bound = ceil_log2(n as u64);
    let cell = |r: usize| mul_mod(r, b, n);
    let mut stack: Vec<Frame> = Vec::with_capacity(depth_bound as usize + 1);

    while added.len() < want {
        let t = set.any_nonmember().ok_or(Error::SetFull)?;
        stack.push(Frame {
            x: set.any_member(),
            y: inv.div(t, b),
            mid: 0,
            stage: 0,
        });
        while !stack.is_empty() {
            let depth = stack.len() as u32;
            let top = stack.last_mut().expect("nonempty stack");
            let (x, y) = (top.x, top.y);
            match top.stage {
                0 => {
                    stats.calls += 1;
                    stats.max_depth = stats.max_depth.max(depth);
                    if depth > depth_bound {
                        return Err(Error::Invariant(format!(
                            "fillgap depth {depth} exceeds {depth_bound}"
                        )));
                    }
                    if added.len() >= want {
                        stack.pop();
                        continue;
                    }
                    if (x + 1) % n == y {
                        set.insert(cell(y), Origin::Pack { b })?;
                        added.push(cell(y));
                        stack.pop();
                        continue;
                    }
                    let y_lift = if y > x { y } else { y + n };
                    let mid = ((x + y_lift) / 2) % n;
                    top.mid = mid;
                    top.stage = 1;
                    if !set.contains(cell(mid)) {
                        stack.push(Frame {
                            x,
                            y: mid,
                            mid: 0,
                            stage: 0,
                        });
                    }
                }
                1 => {
                    top.stage = 2;
                    let mid = top.mid;
                    let before = (y + n - 1) % n;
                    if !set.contains(cell(before)) {
                        stack.push(Frame {
                            x: mid,
                            y: before,
                            mid: 0,
                            stage: 0,
                        });
                    }
                }
                _ => {
                    if added.len() < want {
                        set.insert(cell(y), Origin::Pack { b })?;
                        added.push(cell(y));
                    }
                    stack.pop();
                }
            }
        }
    }
    Ok((added, stats))
}

/// `S = {0} ∪ {c·i : (c, i) marked}`, each marked cell recorded as a base.
pub fn seed_from_marks(marks: &MarkTable) -> Result<CoverageSet> {
    let mut set = CoverageSet::new(marks.modulus());
    for (cell, c, i) in marks.iter() {
        set.insert(cell, Origin::Base { c, i })?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set_of(n: usize, cells: &[usize]) -> CoverageSet {
        let mut s = CoverageSet::new(n);
        for &c in cells {
            s.insert(c, Origin::Base { c: 1, i: c }).unwrap();
        }
        s
    }

    #[test]
    fn add_single_examples() {
        let inv = InverseTable::new(5).unwrap();
        assert_eq!(add_single(&mut set_of(5, &[]), 1, &inv).unwrap(), 1);
        assert_eq!(add_single(&mut set_of(5, &[2]), 2, &inv).unwrap(), 4);
        let inv = InverseTable::new(7).unwrap();
        assert_eq!(add_single(&mut set_of(7, &[3]), 3, &inv).unwrap(), 6);
        let inv = InverseTable::new(3).unwrap();
        assert_eq!(
            add_single(&mut set_of(3, &[1, 2]), 1, &inv),
            Err(Error::SetFull)
        );
    }

    #[test]
    fn add_single_contract_exhaustive() {
        for n in [5usize, 7, 11] {
            let inv = InverseTable::new(n).unwrap();
            for mask in 0u32..1 << (n - 1) {
                let cells: Vec<usize> = (1..n).filter(|&x| mask >> (x - 1) & 1 == 1).collect();
                if cells.len() == n - 1 {
                    continue;
                }
                for b in 1..n {
                    let mut s = set_of(n, &cells);
                    let c = add_single(&mut s, b, &inv).unwrap();
                    assert!(!s.contains(c));
                    assert!(s.contains((c + n - b) % n));
                }
            }
        }
    }

    #[test]
    fn fillgap_examples() {
        let inv = InverseTable::new(7).unwrap();
        let mut s = CoverageSet::new(7);
        let (t, _) = fillgap_add_ap(&mut s, 1, 3, &inv).unwrap();
        let mut sorted = t.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3]);
        s.check_chain().unwrap();

        let mut s = CoverageSet::new(7);
        let (t, _) = fillgap_add_ap(&mut s, 2, 3, &inv).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|x| [2, 4, 6].contains(x)));
        s.check_chain().unwrap();

        let inv = InverseTable::new(5).unwrap();
        let mut s = set_of(5, &[1, 2, 3]);
        let (t, _) = fillgap_add_ap(&mut s, 1, 3, &inv).unwrap();
        assert_eq!(t, vec![4]);
        assert!(s.is_full());
        let (t, _) = fillgap_add_ap(&mut s, 1, 3, &inv).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn fillgap_random_contract() {
        let n = 1009;
        let inv = InverseTable::new(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut s = CoverageSet::new(n);
            let density = rng.gen_range(0.0..0.9);
            for x in 1..n {
                if rng.gen_bool(density) {
                    s.insert(x, Origin::Base { c: 1, i: x }).unwrap();
                }
            }
            let b = rng.gen_range(1..n);
            let k = rng.gen_range(1..200i64);
            let before = s.size();
            let (t, stats) = fillgap_add_ap(&mut s, b, k, &inv).unwrap();
            assert_eq!(t.len(), (k as usize).min(n - before));
            assert!(stats.calls <= 2 * (ceil_log2(n as u64) as u64 + k as u64));
            s.check_chain().unwrap();
        }
    }

    #[test]
    fn seed_examples() {
        let marks = MarkTable::new(7);
        let s = seed_from_marks(&marks).unwrap();
        assert_eq!(s.size(), 1);

        let mut marks = MarkTable::new(7);
        marks.push_mark(3);
        marks.push_mark(3);
        let s = seed_from_marks(&marks).unwrap();
        assert!(s.contains(0) && s.contains(3) && s.contains(6));
        assert_eq!(s.size(), 3);
        assert_eq!(s.origin(6), Some(Origin::Base { c: 2, i: 3 }));
        assert_eq!(s.origin(0), Some(Origin::Base { c: 0, i: 0 }));
        s.check_chain().unwrap();
    }
}
