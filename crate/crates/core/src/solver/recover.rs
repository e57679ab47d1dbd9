//! Turning a finished state back into a subset of the input.

use crate::error::{Error, Result};
use crate::modmath::{add_mod, mul_mod, sub_mod, InverseTable};
use crate::packing::{CoverageSet, Origin};
use crate::state::{Fusion, MarkTable, OpLog, Pool, Record};
use crate::transform::{frobenius_floor, two_coin_solve};

/// Copies of each difference a construction uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandVector {
    d: Vec<i64>,
}

impl DemandVector {
    pub fn new(n: usize) -> Self {
        Self { d: vec![0; n] }
    }

    pub fn modulus(&self) -> usize {
        self.d.len()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.d
    }

    pub(crate) fn add(&mut self, i: usize, copies: i64) {
        self.d[i] += copies;
    }

    /// `Σ D[i]·i mod n`.
    pub fn value(&self) -> usize {
        let n = self.d.len();
        self.d.iter().enumerate().fold(0, |acc, (i, &c)| {
            add_mod(acc, mul_mod((c.rem_euclid(n as i64)) as usize, i, n), n)
        })
    }
}

/// Every residue is some multiple of `i` below `n`: `D[i] = (target - g)/i`.
pub fn special_construct_i(
    i: usize,
    target: usize,
    shift: usize,
    inv: &InverseTable,
) -> DemandVector {
    let n = inv.modulus();
    let mut demand = DemandVector::new(n);
    demand.add(i, inv.div(sub_mod(target, shift, n), i) as i64);
    demand
}

/// The marks partition `[1, n-1]`: read `(c, i)` off cell `target - g`.
pub fn special_construct_ii(
    marks: &MarkTable,
    target: usize,
    shift: usize,
) -> Result<DemandVector> {
    let n = marks.modulus();
    let mut demand = DemandVector::new(n);
    let cell = sub_mod(target, shift, n);
    if cell == 0 {
        return Ok(demand);
    }
    let (c, i) = marks
        .get(cell)
        .ok_or_else(|| Error::Invariant(format!("exact cover leaves cell {cell} unmarked")))?;
    demand.add(i, c);
    Ok(demand)
}

/// Follows origins back from `start` to a base cell, adding one copy of `b`
/// for every packed step and `c` copies of `i` for the base `(c, i)`.
pub fn walk_packing(set: &CoverageSet, start: usize, demand: &mut DemandVector) -> Result<()> {
    let n = set.modulus();
    let mut t = start;
    for _ in 0..=n {
        match set.origin(t) {
            None => {
                return Err(Error::Invariant(format!(
                    "packing chain reaches uncovered cell {t}"
                )))
            }
            Some(Origin::Pack { b }) => {
                demand.add(b, 1);
                t = sub_mod(t, b, n);
            }
            Some(Origin::Base { c, i }) => {
                if c > 0 {
                    demand.add(i, c);
                }
                return Ok(());
            }
        }
    }
    Err(Error::Invariant(format!(
        "packing chain from {start} does not terminate"
    )))
}

/// Undoes the journal newest-first, rewriting `demand` from the final state's
/// differences into the input's.
///
/// `shift` is the global shift of the final state. After every record the
/// demand (both pools) still sums to `target - g`, with `g` the shift in force
/// at that point of the forward run; on return the shift is spent and
/// `demand` sums to `target`.
pub fn replay_log(
    log: &OpLog,
    inv: &InverseTable,
    demand: &mut DemandVector,
    target: usize,
    shift: usize,
) -> Result<()> {
    let n = inv.modulus();
    let mut next = vec![0i64; n];
    let mut next_total = 0i64;
    let mut g = shift;
    let mut sum = demand.value();
    let lift = |x: i64| (x.rem_euclid(n as i64)) as usize;
    let contribution = |copies: i64, i: usize| mul_mod(lift(copies), i, n);
    if sum != sub_mod(target, g, n) {
        return Err(Error::Invariant(format!(
            "initial demand sums to {sum}, expected {}",
            sub_mod(target, g, n)
        )));
    }

    for (pos, record) in log.records().iter().enumerate().rev() {
        match *record {
            Record::Op1 {
                gain,
                lose,
                c,
                d,
                batches,
                gain_before,
            } => {
                let (gain, lose) = (gain as usize, lose as usize);
                let (c, d, batches) = (c as i64, d as i64, batches as i64);
                let excess = demand.get(gain) - gain_before as i64;
                if excess > 0 {
                    let chunks = (excess + c - 1) / c;
                    if chunks > batches {
                        return Err(forensic(pos, record, "more chunks than batches"));
                    }
                    demand.add(gain, -chunks * c);
                    demand.add(lose, chunks * d);
                    // c·gain = d·lose, so the sum is unchanged.
                }
            }
            Record::Op2(ref fusion) => {
                let Fusion {
                    i,
                    j,
                    c,
                    d,
                    len_i,
                    len_j,
                    z,
                    base,
                    added,
                    pool,
                } = **fusion;
                let held = match pool {
                    Pool::Main => demand.get(z),
                    Pool::Next => next[z],
                };
                let m = (held - base).max(0);
                if m > added {
                    return Err(forensic(
                        pos,
                        record,
                        "more copies than the fusion produced",
                    ));
                }
                let f = frobenius_floor(c, d);
                let (a, b) = two_coin_solve(d, c, len_i, len_j, f + m)
                    .map_err(|e| forensic(pos, record, &e.to_string()))?;
                match pool {
                    Pool::Main => demand.add(z, -m),
                    Pool::Next => {
                        next[z] -= m;
                        next_total -= m;
                    }
                }
                demand.add(i, a);
                demand.add(j, b);
                // m·z left, a·i + b·j = (f + m)·z arrived.
                sum = add_mod(sum, contribution(f, z), n);
                g = sub_mod(g, contribution(f, z), n);
            }
            Record::Merge { ref entries } => {
                for &(z, before) in entries {
                    let extra = demand.get(z) - before;
                    if extra > 0 {
                        demand.add(z, -extra);
                        next[z] += extra;
                        next_total += extra;
                    }
                }
            }
        }
        if sum != sub_mod(target, g, n) {
            return Err(forensic(pos, record, "demand sum drifted"));
        }
    }
    if g != 0 {
        return Err(Error::Invariant(format!("shift {g} left after replay")));
    }
    if next_total != 0 {
        return Err(Error::Invariant(format!(
            "{next_total} next-generation copies were never attributed"
        )));
    }
    if let Some(i) = demand.as_slice().iter().position(|&x| x < 0) {
        return Err(Error::Invariant(format!(
            "negative demand at difference {i}"
        )));
    }
    debug_assert_eq!(demand.value(), target);
    Ok(())
}

fn forensic(pos: usize, record: &Record, why: &str) -> Error {
    Error::Invariant(format!(
        "replay failed at log position {pos} ({record:?}): {why}"
    ))
}

/// Picks `D[v]` input positions holding value `v`, for every `v`. Positions
/// come out increasing.
pub fn assign_indices(values: &[usize], demand: &DemandVector) -> Result<Vec<usize>> {
    let mut need = demand.as_slice().to_vec();
    if need.first().copied().unwrap_or(0) != 0 {
        return Err(Error::Invariant("demand on difference 0".into()));
    }
    let mut picked = Vec::new();
    for (index, &v) in values.iter().enumerate() {
        if need[v] > 0 {
            need[v] -= 1;
            picked.push(index);
        }
    }
    if let Some(v) = need.iter().position(|&x| x > 0) {
        return Err(Error::Invariant(format!(
            "demand for value {v} exceeds its multiplicity by {}",
            need[v]
        )));
    }
    Ok(picked)
}
