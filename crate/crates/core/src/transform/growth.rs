use crate::modmath::{gcd, mul_mod, pow_third, InverseTable};
use crate::probe::Probe;
use crate::state::{Fusion, MarkTable, OpLog, Pool, Record, ResidueState, Worklist};

use super::enrich::{enrichment_step, EnrichOutcome};
use super::ops::{frobenius_floor, fused_length};
use super::trim::{trim_step, TrimOutcome};
use super::SpecialCase;

/// Weight multiple the growth step enriches to before trimming.
const GROWTH_ENRICH_MULTIPLE: i64 = 10;

/// Next-generation accumulator: progressions produced during a growth pass,
/// kept apart from `A` until the pass ends.
#[derive(Debug, Clone)]
pub struct NextPool {
    lengths: Vec<i64>,
    touched: Vec<usize>,
}

impl NextPool {
    pub fn new(n: usize) -> Self {
        Self {
            lengths: vec![0; n],
            touched: Vec::new(),
        }
    }

    pub fn len(&self, z: usize) -> i64 {
        self.lengths[z]
    }

    fn credit(&mut self, z: usize, amount: i64) -> i64 {
        let base = self.lengths[z];
        if base == 0 {
            self.touched.push(z);
        }
        self.lengths[z] = base + amount;
        base
    }

    /// Differences holding length, in first-credited order.
    pub fn differences(&self) -> &[usize] {
        &self.touched
    }

    pub fn total(&self) -> i64 {
        self.touched.iter().map(|&z| self.lengths[z]).sum()
    }
}

/// Resolves a growth-pass collision `a·i = b·j` where `a, b` need not be
/// coprime, crediting the fused progression to `next`.
///
/// With `g = gcd(a, b)` the pair `(a/g, b/g)` is coprime and
/// `AP(i, A[i]) + AP(j, A[j])` contains a shift of `AP(z, u)` for
/// `z = i·g/b`, `u = A[i]·b/g + A[j]·a/g - 2(a/g - 1)(b/g - 1)`; when
/// `A[i] >= 2a` and `A[j] >= 2b` this is at least `2ab/g`.
/// Both source progressions are emptied. Returns `z`.
#[allow(clippy::too_many_arguments)]
pub fn resolve_collision_noncoprime(
    state: &mut ResidueState,
    log: &mut OpLog,
    inv: &InverseTable,
    next: &mut NextPool,
    i: usize,
    j: usize,
    a: i64,
    b: i64,
) -> usize {
    let n = state.modulus();
    assert!(i != j, "collision of {i} with itself");
    assert_eq!(mul_mod(a as usize, i, n), mul_mod(b as usize, j, n));
    let (len_i, len_j) = (state.len(i), state.len(j));
    assert!(
        len_i >= 2 * a && len_j >= 2 * b,
        "growth collision needs A[i] >= 2a and A[j] >= 2b"
    );
    let g = gcd(a as u64, b as u64) as i64;
    let (c, d) = (a / g, b / g);
    let z = inv.div(i, d as usize);
    debug_assert_eq!(z, inv.div(j, c as usize));
    let added = fused_length(c, d, len_i, len_j);
    debug_assert!(added >= 2 * a * b / g);
    state.set_len(i, 0);
    state.set_len(j, 0);
    state.add_shift(mul_mod(frobenius_floor(c, d) as usize % n, z, n));
    let base = next.credit(z, added);
    log.push(Record::Op2(Box::new(Fusion {
        i,
        j,
        c,
        d,
        len_i,
        len_j,
        z,
        added,
        base,
        pool: Pool::Next,
    })));
    z
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthOutcome {
    /// The collision pass produced the required number of long progressions.
    Grown,
    /// Enough progressions were already long; the rest were dropped.
    LongShortcut,
    /// The pass ran out of candidates before the collision quota; everything
    /// was kept (the weight is still at least `p - 1`) and `k` is unchanged.
    Stalled,
    Special(SpecialCase),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthReport {
    pub k_in: i64,
    pub k_out: i64,
    pub outcome: GrowthOutcome,
    pub collisions: u64,
    pub collisions_required: u64,
    /// Multiples available to the collision pass when it started.
    pub markable: u64,
    pub diversity_after: usize,
    pub weight_after: i64,
}

/// One growth step from parameter `k`.
///
/// Enrich to `W >= 10p`, trim through phase `k`, then either keep the
/// progressions already longer than `k^{4/3}` or cap everything at `k^{4/3}`
/// and run a single marking pass over multiples `c ∈ [k/2, A[i]/2]`. Every
/// collision fuses its two progressions into a next-generation progression of
/// length at least `k^{5/3}/4`; those are not marked again in the same pass.
/// After `⌈p / (k^{5/3}/4)⌉` collisions the old progressions are dropped and
/// the new ones, trimmed to a minimal prefix totalling at least `p`, replace
/// them.
pub fn growth_step(
    state: &mut ResidueState,
    marks: &mut MarkTable,
    log: &mut OpLog,
    inv: &InverseTable,
    k: i64,
    mut probe: Option<&mut Probe>,
) -> GrowthReport {
    assert!(k >= 1);
    marks.clear();
    let e = enrichment_step(
        state,
        marks,
        log,
        inv,
        GROWTH_ENRICH_MULTIPLE,
        probe.as_deref_mut(),
    );
    if let EnrichOutcome::Special(sc) = e.outcome {
        return special_exit(state, k, sc);
    }
    marks.clear();
    let t = trim_step(state, marks, log, k, probe);
    if let TrimOutcome::Special(sc) = t.outcome {
        return special_exit(state, k, sc);
    }
    marks.clear();

    growth_pass(state, log, inv, k)
}

fn special_exit(state: &ResidueState, k: i64, sc: SpecialCase) -> GrowthReport {
    GrowthReport {
        k_in: k,
        k_out: k,
        outcome: GrowthOutcome::Special(sc),
        collisions: 0,
        collisions_required: 0,
        markable: 0,
        diversity_after: state.diversity(),
        weight_after: state.weight(),
    }
}

/// The collision pass of a growth step, run on a state already trimmed
/// through phase `k` (no `c·i = d·j` with `c <= min(k, A[i])`,
/// `d <= min(k, A[j])`).
pub fn growth_pass(
    state: &mut ResidueState,
    log: &mut OpLog,
    inv: &InverseTable,
    k: i64,
) -> GrowthReport {
    growth_pass_with_quota(state, log, inv, k, None)
}

/// [`growth_pass`] with the collision quota optionally overridden, so tests
/// can reach the replacement branch on instances small enough to build.
pub(crate) fn growth_pass_with_quota(
    state: &mut ResidueState,
    log: &mut OpLog,
    inv: &InverseTable,
    k: i64,
    quota: Option<i64>,
) -> GrowthReport {
    assert!(k >= 1);
    let n = state.modulus();
    let n_len = n as i64;
    let mut report = GrowthReport {
        k_in: k,
        k_out: k,
        outcome: GrowthOutcome::Stalled,
        collisions: 0,
        collisions_required: 0,
        markable: 0,
        diversity_after: 0,
        weight_after: 0,
    };
    let finish = |state: &ResidueState, mut r: GrowthReport, outcome| {
        r.outcome = outcome;
        r.diversity_after = state.diversity();
        r.weight_after = state.weight();
        r
    };

    let k43 = pow_third(k as u64, 4) as i64;
    let k53_4 = ((pow_third(k as u64, 5) / 4) as i64).max(1);

    let long_total: i64 = state
        .support()
        .map(|i| state.len(i))
        .filter(|&l| l >= k43)
        .sum();
    if long_total >= n_len {
        keep_longest(state, n_len);
        report.k_out = k43;
        return finish(state, report, GrowthOutcome::LongShortcut);
    }
    let capped: Vec<usize> = state.support().filter(|&i| state.len(i) > k43).collect();
    for i in capped {
        state.set_len(i, k43);
    }

    // Single marking pass over multiples c in [lo, A[i]/2].
    let lo = ((k + 1) / 2).max(1);
    let needed = quota.unwrap_or((n_len + k53_4 - 1) / k53_4);
    report.collisions_required = needed as u64;
    let mut cell_c = vec![0u32; n];
    let mut cell_i = vec![0u32; n];
    let mut next_c = vec![0u32; n];
    let mut work = Worklist::new(n);
    for i in state.support() {
        let hi = state.len(i) / 2;
        if hi >= lo {
            report.markable += (hi - lo + 1) as u64;
            next_c[i] = lo as u32;
            work.push(i);
        }
    }
    let mut pool = NextPool::new(n);
    let clear_marks = |cell_c: &mut [u32], cell_i: &mut [u32], i: usize, top: u32| {
        for c in lo as usize..top as usize {
            let cell = mul_mod(c, i, n);
            debug_assert_eq!(cell_i[cell] as usize, i);
            cell_c[cell] = 0;
            cell_i[cell] = 0;
        }
    };
    while (report.collisions as i64) < needed {
        let Some(i) = work.pop() else { break };
        let c = next_c[i] as i64;
        if state.len(i) == 0 || c > state.len(i) / 2 {
            continue;
        }
        let cell = mul_mod(c as usize, i, n);
        if cell_c[cell] == 0 {
            cell_c[cell] = c as u32;
            cell_i[cell] = i as u32;
            next_c[i] += 1;
            if next_c[i] as i64 <= state.len(i) / 2 {
                work.push(i);
            }
            continue;
        }
        let (d, j) = (cell_c[cell] as i64, cell_i[cell] as usize);
        let g = gcd(c as u64, d as u64) as i64;
        // The trim through phase k rules out small reduced ratios.
        assert!(
            c / g > k || d / g > k,
            "growth collision ({c},{i}) vs ({d},{j}) reduces below phase {k}"
        );
        assert!(
            g == 1 || (g as i128).pow(3) < k as i128,
            "gcd {g} too large for phase {k}"
        );
        clear_marks(&mut cell_c, &mut cell_i, i, next_c[i]);
        clear_marks(&mut cell_c, &mut cell_i, j, next_c[j]);
        let z = resolve_collision_noncoprime(state, log, inv, &mut pool, i, j, c, d);
        assert!(
            pool.len(z) >= k53_4,
            "fused length {} below {k53_4}",
            pool.len(z)
        );
        report.collisions += 1;
    }

    let grown = report.collisions as i64 >= needed;
    if grown {
        let live: Vec<usize> = state.support().collect();
        for i in live {
            state.set_len(i, 0);
        }
    }
    let entries: Vec<(usize, i64)> = pool
        .differences()
        .iter()
        .map(|&z| (z, state.len(z)))
        .collect();
    for &(z, before) in &entries {
        state.set_len(z, before + pool.len(z));
    }
    log.push(Record::Merge { entries });
    if let Some(&z) = pool
        .differences()
        .iter()
        .find(|&&z| state.len(z) >= n_len - 1)
    {
        return finish(
            state,
            report,
            GrowthOutcome::Special(SpecialCase::Saturated(z)),
        );
    }
    if grown {
        keep_longest(state, n_len);
        report.k_out = k53_4;
        finish(state, report, GrowthOutcome::Grown)
    } else {
        finish(state, report, GrowthOutcome::Stalled)
    }
}

/// Drops everything except a longest-first prefix of progressions whose
/// lengths total at least `need`.
pub(crate) fn keep_longest(state: &mut ResidueState, need: i64) {
    let mut order: Vec<usize> = state.support().collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(state.len(i)), i));
    let mut total = 0i64;
    for i in order {
        if total >= need {
            state.set_len(i, 0);
        } else {
            total += state.len(i);
        }
    }
}
