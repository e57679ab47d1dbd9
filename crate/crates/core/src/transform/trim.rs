use crate::modmath::mul_mod;
use crate::probe::{Probe, Variant};
use crate::state::{MarkTable, OpLog, ResidueState};

use super::ops::apply_op1;
use super::SpecialCase;

/// How many candidates ahead the marking loop prefetches its cell.
const PREFETCH_DISTANCE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrimOutcome {
    PhaseComplete,
    Special(SpecialCase),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrimReport {
    /// Last phase that ran to completion.
    pub phase_reached: i64,
    pub outcome: TrimOutcome,
    /// Markings performed, counting re-markings of freed cells.
    pub cells_marked: u64,
}

/// Runs the trim process through phase `k_target`, resolving collisions with
/// Operation 1.
///
/// Phase `c` marks `(c, i)` for every `i` with `C[i] = c - 1 < c <= A[i]`, in
/// the order those `i` were marked during phase `c - 1`. The marking table
/// must be empty on entry.
///
/// On `PhaseComplete` every `i` has either `A[i] = C[i] <= k` or
/// `A[i] > C[i] = k`, so no two multiples `(c, i), (d, j)` with
/// `c <= min(k, A[i])`, `d <= min(k, A[j])` share a cell.
pub fn trim_step(
    state: &mut ResidueState,
    marks: &mut MarkTable,
    log: &mut OpLog,
    k_target: i64,
    mut probe: Option<&mut Probe>,
) -> TrimReport {
    assert!(k_target >= 1, "trim target phase must be positive");
    assert!(marks.is_empty(), "trim starts from an empty mark table");
    let n = state.modulus();
    let limit = state.modulus() as i64 - 1;
    let k_target = k_target.min(limit.max(1));
    if let Some(p) = probe.as_deref_mut() {
        p.begin(Variant::Trim, state, marks);
    }

    let mut current: Vec<u32> = state.support().map(|i| i as u32).collect();
    let mut next: Vec<u32> = Vec::with_capacity(current.len());
    let mut cells_marked = 0u64;

    for c in 1..=k_target {
        if current.is_empty() {
            return TrimReport {
                phase_reached: c - 1,
                outcome: TrimOutcome::Special(SpecialCase::ExactCover),
                cells_marked,
            };
        }
        for (pos, &i) in current.iter().enumerate() {
            // Two-stage prefetch: the cell far ahead, then the owner of the
            // cell nearer ahead, which a collision will read.
            if let Some(&ahead) = current.get(pos + PREFETCH_DISTANCE) {
                marks.prefetch(mul_mod(c as usize, ahead as usize, n));
            }
            if let Some(&ahead) = current.get(pos + PREFETCH_DISTANCE / 2) {
                if let Some((_, j)) = marks.get(mul_mod(c as usize, ahead as usize, n)) {
                    state.prefetch_len(j);
                    marks.prefetch_count(j);
                }
            }
            let i = i as usize;
            // Anything failing this test already has A[i] = C[i] and stays so.
            if marks.count(i) != c - 1 || state.len(i) < c {
                continue;
            }
            let cell = mul_mod(c as usize, i, n);
            if let Some((d, j)) = marks.get(cell) {
                let before = (state.weight(), state.len(i), state.len(j));
                if let Some(p) = probe.as_deref_mut() {
                    p.on_collision(c, i, d, j);
                }
                assert!(
                    d < c,
                    "trim collision with a later phase: ({c},{i}) vs ({d},{j})"
                );
                apply_op1(state, marks, log, i, j, c, d);
                if let Some(p) = probe.as_deref_mut() {
                    p.after_resolution(state, marks, i, j, before);
                }
                if state.len(i) >= limit {
                    return TrimReport {
                        phase_reached: c - 1,
                        outcome: TrimOutcome::Special(SpecialCase::Saturated(i)),
                        cells_marked,
                    };
                }
                debug_assert!(marks.get(cell).is_none());
            }
            marks.push_mark(i);
            cells_marked += 1;
            if let Some(p) = probe.as_deref_mut() {
                p.on_mark(state, marks, c, i);
            }
            next.push(i as u32);
        }
        std::mem::swap(&mut current, &mut next);
        next.clear();
    }

    let k = k_target;
    let live = current
        .iter()
        .any(|&i| marks.count(i as usize) == k && state.len(i as usize) > k);
    TrimReport {
        phase_reached: k,
        outcome: if live {
            TrimOutcome::PhaseComplete
        } else {
            TrimOutcome::Special(SpecialCase::ExactCover)
        },
        cells_marked,
    }
}
