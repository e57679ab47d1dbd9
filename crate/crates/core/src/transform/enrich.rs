use crate::modmath::{mul_mod, InverseTable};
use crate::probe::{Probe, Variant};
use crate::state::{MarkTable, OpLog, ResidueState, Worklist};

use super::ops::apply_op2;
use super::SpecialCase;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnrichOutcome {
    TargetReached,
    Special(SpecialCase),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnrichReport {
    pub target_multiple: i64,
    pub outcome: EnrichOutcome,
    pub final_weight: i64,
    pub collisions: u64,
}

/// Marks multiples until `W >= r_target·p`, resolving collisions with
/// Operation 2. Diversity never increases.
///
/// Candidates live in a FIFO worklist; each pop marks the smallest unmarked
/// multiple `C[i] + 1` and re-queues `i` while it has room, so marking goes
/// round-robin across differences.
pub fn enrichment_step(
    state: &mut ResidueState,
    marks: &mut MarkTable,
    log: &mut OpLog,
    inv: &InverseTable,
    r_target: i64,
    mut probe: Option<&mut Probe>,
) -> EnrichReport {
    let n = state.modulus();
    let target = r_target * n as i64;
    let limit = n as i64 - 1;
    let mut collisions = 0u64;
    let report = |state: &ResidueState, outcome, collisions| EnrichReport {
        target_multiple: r_target,
        outcome,
        final_weight: state.weight(),
        collisions,
    };
    if state.weight() >= target {
        return report(state, EnrichOutcome::TargetReached, 0);
    }
    if let Some(p) = probe.as_deref_mut() {
        p.begin(Variant::Enrichment, state, marks);
    }

    let mut work = Worklist::new(n);
    for i in state.support() {
        if marks.count(i) < state.len(i) {
            work.push(i);
        }
    }
    while let Some(i) = work.pop() {
        let c = marks.count(i) + 1;
        if c > state.len(i) {
            continue;
        }
        let cell = mul_mod(c as usize, i, n);
        match marks.get(cell) {
            None => {
                marks.push_mark(i);
                if let Some(p) = probe.as_deref_mut() {
                    p.on_mark(state, marks, c, i);
                }
                if c < state.len(i) {
                    work.push(i);
                }
            }
            Some((d, j)) => {
                let before = (state.weight(), state.len(i), state.len(j));
                if let Some(p) = probe.as_deref_mut() {
                    p.on_collision(c, i, d, j);
                }
                let z = apply_op2(state, marks, log, inv, i, j, c, d);
                collisions += 1;
                if let Some(p) = probe.as_deref_mut() {
                    p.after_resolution(state, marks, i, j, before);
                }
                if state.len(z) >= limit {
                    return report(
                        state,
                        EnrichOutcome::Special(SpecialCase::Saturated(z)),
                        collisions,
                    );
                }
                if state.weight() >= target {
                    return report(state, EnrichOutcome::TargetReached, collisions);
                }
                work.push(z);
            }
        }
    }
    report(
        state,
        EnrichOutcome::Special(SpecialCase::ExactCover),
        collisions,
    )
}
