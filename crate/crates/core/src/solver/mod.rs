//! Subset-sum solvers for `p - 1` nonzero residues modulo a prime `p`.
//!
//! Every pipeline ends the same way: a demand vector over the final state's
//! differences is rewritten through the operation journal into a demand over
//! input values, and then into input positions.

mod recover;

use std::fmt;
use std::str::FromStr;

pub use recover::{
    assign_indices, replay_log, special_construct_i, special_construct_ii, walk_packing,
    DemandVector,
};

use crate::error::{Error, Result};
use crate::modmath::{is_prime, sub_mod, InverseTable};
use crate::oracle::dp_subset_solve;
use crate::packing::{add_single, fillgap_add_ap, seed_from_marks, CoverageSet, Origin};
use crate::state::{MarkTable, OpLog, ResidueState};
use crate::transform::{
    detect_special_case, enrichment_step, growth_step, keep_longest, trim_step, EnrichOutcome,
    GrowthOutcome, GrowthReport, SpecialCase, TrimOutcome,
};

/// Which procedure produced a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Dp,
    NLogN,
    Practical,
    Theoretical,
    SpecialI,
    SpecialII,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dp => "dp",
            Method::NLogN => "nlogn",
            Method::Practical => "practical",
            Method::Theoretical => "theoretical",
            Method::SpecialI => "special_I",
            Method::SpecialII => "special_II",
        })
    }
}

/// A subset of the input positions whose values sum to `target` mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub target: usize,
    /// 0-based, strictly increasing.
    pub indices: Vec<usize>,
    pub value_sum: usize,
    pub method: Method,
}

/// Solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dp,
    NLogN,
    Practical,
    Theoretical,
    Auto,
}

/// Moduli below this use the reachability DP under [`Algorithm::Auto`].
pub const AUTO_DP_BELOW: usize = 64;

/// Smallest modulus for which the theoretical pipeline runs its growth loop.
pub const P_MIN: usize = 1 << 20;

impl Algorithm {
    /// Replaces `Auto` by a concrete choice for modulus `n`.
    pub fn resolve(self, n: usize, allow_theoretical: bool) -> Algorithm {
        match self {
            Algorithm::Auto if n < AUTO_DP_BELOW => Algorithm::Dp,
            Algorithm::Auto if allow_theoretical && n >= P_MIN => Algorithm::Theoretical,
            Algorithm::Auto => Algorithm::Practical,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::NLogN => "nlogn",
            Algorithm::Practical => "practical",
            Algorithm::Theoretical => "theoretical",
            Algorithm::Auto => "auto",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "dp" => Algorithm::Dp,
            "nlogn" => Algorithm::NLogN,
            "practical" => Algorithm::Practical,
            "theoretical" => Algorithm::Theoretical,
            "auto" => Algorithm::Auto,
            _ => return Err(format!("unknown algorithm '{s}'")),
        })
    }
}

/// Solves with the chosen algorithm; `Auto` never picks the theoretical one.
pub fn solve_lemma2(
    p: usize,
    values: &[usize],
    target: usize,
    algorithm: Algorithm,
) -> Result<ConstructionResult> {
    match algorithm.resolve(p, false) {
        Algorithm::Dp => solve_lemma2_dp(p, values, target),
        Algorithm::NLogN => solve_lemma2_nlogn(p, values, target),
        Algorithm::Theoretical => solve_lemma2_theoretical(p, values, target),
        _ => solve_lemma2_practical(p, values, target),
    }
}

fn prepare(p: usize, values: &[usize], target: usize) -> Result<ResidueState> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p as u64));
    }
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if target >= p {
        return Err(Error::OutOfRange {
            index: 0,
            value: target as u64,
            bound: p as u64,
        });
    }
    ResidueState::from_values(p, values)
}

fn finish(
    values: &[usize],
    p: usize,
    target: usize,
    demand: &DemandVector,
    method: Method,
) -> Result<ConstructionResult> {
    let indices = assign_indices(values, demand)?;
    let value_sum = indices.iter().fold(0usize, |acc, &i| (acc + values[i]) % p);
    if value_sum != target {
        return Err(Error::Invariant(format!(
            "{method} construction sums to {value_sum}, expected {target}"
        )));
    }
    Ok(ConstructionResult {
        target,
        indices,
        value_sum,
        method,
    })
}

fn special_demand(
    sc: SpecialCase,
    state: &ResidueState,
    marks: &MarkTable,
    inv: &InverseTable,
    target: usize,
) -> Result<(DemandVector, Method)> {
    Ok(match sc {
        SpecialCase::Saturated(i) => (
            special_construct_i(i, target, state.shift(), inv),
            Method::SpecialI,
        ),
        SpecialCase::ExactCover => (
            special_construct_ii(marks, target, state.shift())?,
            Method::SpecialII,
        ),
    })
}

/// Trim phase cap for the practical pipeline.
pub fn practical_phase(p: usize) -> i64 {
    (usize::BITS - 1 - p.leading_zeros()).max(2) as i64
}

/// Reachability DP, `O(p²)`.
pub fn solve_lemma2_dp(p: usize, values: &[usize], target: usize) -> Result<ConstructionResult> {
    prepare(p, values, target)?;
    let indices = dp_subset_solve(p, values, target)
        .ok_or_else(|| Error::Invariant(format!("no subset reaches {target}")))?;
    let value_sum = indices.iter().fold(0usize, |acc, &i| (acc + values[i]) % p);
    Ok(ConstructionResult {
        target,
        indices,
        value_sum,
        method: Method::Dp,
    })
}

/// Baseline: grow `S` from `{0}` one input value at a time by binary search.
pub fn solve_lemma2_nlogn(p: usize, values: &[usize], target: usize) -> Result<ConstructionResult> {
    prepare(p, values, target)?;
    let inv = InverseTable::new(p)?;
    let mut set = CoverageSet::new(p);
    for &b in values {
        if set.is_full() {
            break;
        }
        let c = add_single(&mut set, b, &inv)?;
        set.insert(c, Origin::Pack { b })?;
    }
    let mut demand = DemandVector::new(p);
    walk_packing(&set, target, &mut demand)?;
    finish(values, p, target, &demand, Method::NLogN)
}

/// Trim to phase `max(2, ⌊log₂ p⌋)`, seed `S` with the marked cells, pack the
/// unmarked remainder of every progression, and recover.
pub fn solve_lemma2_practical(
    p: usize,
    values: &[usize],
    target: usize,
) -> Result<ConstructionResult> {
    let mut state = prepare(p, values, target)?;
    let inv = InverseTable::new(p)?;
    let mut marks = MarkTable::new(p);
    let mut log = OpLog::new();

    let special = detect_special_case(&state, &marks).or_else(|| {
        match trim_step(&mut state, &mut marks, &mut log, practical_phase(p), None).outcome {
            TrimOutcome::Special(sc) => Some(sc),
            TrimOutcome::PhaseComplete => None,
        }
    });
    let (mut demand, method) = match special {
        Some(sc) => special_demand(sc, &state, &marks, &inv, target)?,
        None => {
            let mut set = seed_from_marks(&marks)?;
            for i in 1..p {
                if set.is_full() {
                    break;
                }
                let rest = state.len(i) - marks.count(i);
                if rest > 0 {
                    fillgap_add_ap(&mut set, i, rest, &inv)?;
                }
            }
            let mut demand = DemandVector::new(p);
            walk_packing(&set, sub_mod(target, state.shift(), p), &mut demand)?;
            (demand, Method::Practical)
        }
    };
    replay_log(&log, &inv, &mut demand, target, state.shift())?;
    finish(values, p, target, &demand, method)
}

/// Parameters of the theoretical pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoreticalConfig {
    /// Below this modulus the practical pipeline runs instead.
    pub p_min: usize,
    /// Starting phase of the growth loop.
    pub k0: i64,
}

impl Default for TheoreticalConfig {
    fn default() -> Self {
        Self {
            p_min: P_MIN,
            k0: 1000,
        }
    }
}

/// What the theoretical pipeline did besides producing a construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoreticalTrace {
    pub delegated: bool,
    pub growth: Vec<GrowthReport>,
    /// Number of progressions handed to the packer.
    pub packed_progressions: usize,
}

pub fn solve_lemma2_theoretical(
    p: usize,
    values: &[usize],
    target: usize,
) -> Result<ConstructionResult> {
    solve_lemma2_theoretical_with(p, values, target, &TheoreticalConfig::default()).map(|r| r.0)
}

/// Enrich to `W >= 2p`, trim to phase `k0`, keep only progressions of length
/// at least `k0`, grow until `k >= log₂ p`, cut the total length to `p - 1`,
/// pack from `{0}` and recover.
pub fn solve_lemma2_theoretical_with(
    p: usize,
    values: &[usize],
    target: usize,
    config: &TheoreticalConfig,
) -> Result<(ConstructionResult, TheoreticalTrace)> {
    let mut trace = TheoreticalTrace::default();
    if p < config.p_min {
        prepare(p, values, target)?;
        trace.delegated = true;
        return Ok((solve_lemma2_practical(p, values, target)?, trace));
    }
    let mut state = prepare(p, values, target)?;
    let inv = InverseTable::new(p)?;
    let mut marks = MarkTable::new(p);
    let mut log = OpLog::new();
    let special =
        theoretical_transform(&mut state, &mut marks, &mut log, &inv, config, &mut trace)?;
    let (mut demand, method) = match special {
        Some(sc) => special_demand(sc, &state, &marks, &inv, target)?,
        None => {
            let mut set = CoverageSet::new(p);
            let support: Vec<usize> = state.support().collect();
            trace.packed_progressions = support.len();
            for i in support {
                if set.is_full() {
                    break;
                }
                fillgap_add_ap(&mut set, i, state.len(i), &inv)?;
            }
            if !set.is_full() {
                return Err(Error::Invariant(format!(
                    "packing covered {} of {p} residues",
                    set.size()
                )));
            }
            let mut demand = DemandVector::new(p);
            walk_packing(&set, sub_mod(target, state.shift(), p), &mut demand)?;
            (demand, Method::Theoretical)
        }
    };
    replay_log(&log, &inv, &mut demand, target, state.shift())?;
    Ok((finish(values, p, target, &demand, method)?, trace))
}

fn theoretical_transform(
    state: &mut ResidueState,
    marks: &mut MarkTable,
    log: &mut OpLog,
    inv: &InverseTable,
    config: &TheoreticalConfig,
    trace: &mut TheoreticalTrace,
) -> Result<Option<SpecialCase>> {
    let p = state.modulus();
    let n = p as i64;
    if let Some(sc) = detect_special_case(state, marks) {
        return Ok(Some(sc));
    }
    if let EnrichOutcome::Special(sc) = enrichment_step(state, marks, log, inv, 2, None).outcome {
        return Ok(Some(sc));
    }
    marks.clear();
    let k0 = config.k0.max(1);
    if let TrimOutcome::Special(sc) = trim_step(state, marks, log, k0, None).outcome {
        return Ok(Some(sc));
    }
    marks.clear();

    let short: Vec<usize> = state.support().filter(|&i| state.len(i) < k0).collect();
    let short_total: i64 = short.iter().map(|&i| state.len(i)).sum();
    if state.weight() - short_total < n {
        return Err(Error::Invariant(format!(
            "only {} length left after dropping progressions shorter than {k0}",
            state.weight() - short_total
        )));
    }
    for i in short {
        state.drop_to(i, 0)?;
    }
    keep_longest(state, n);

    let mut k = k0;
    loop {
        let report = growth_step(state, marks, log, inv, k, None);
        trace.growth.push(report);
        match report.outcome {
            GrowthOutcome::Special(sc) => return Ok(Some(sc)),
            GrowthOutcome::Stalled => break,
            GrowthOutcome::Grown | GrowthOutcome::LongShortcut => {
                if report.k_out <= k {
                    break;
                }
                k = report.k_out;
            }
        }
        if k >= 64 || (1u128 << k) >= p as u128 {
            break;
        }
    }

    if state.weight() < n - 1 {
        return Err(Error::Invariant(format!(
            "growth left weight {} below p - 1",
            state.weight()
        )));
    }
    keep_longest(state, n - 1);
    let excess = state.weight() - (n - 1);
    if excess > 0 {
        let shortest = state
            .support()
            .min_by_key(|&i| (state.len(i), i))
            .expect("nonempty support");
        state.drop_to(shortest, state.len(shortest) - excess)?;
    }
    Ok(None)
}
