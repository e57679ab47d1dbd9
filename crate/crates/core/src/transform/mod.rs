//! Transformation phase: collision resolution and the trim, enrichment and
//! growth processes that reshape the sumset before packing.

mod enrich;
mod growth;
mod ops;
mod trim;

pub use enrich::{enrichment_step, EnrichOutcome, EnrichReport};
pub(crate) use growth::keep_longest;
pub use growth::{
    growth_pass, growth_step, resolve_collision_noncoprime, GrowthOutcome, GrowthReport, NextPool,
};
pub use ops::{apply_op1, apply_op2, frobenius_floor, fused_length, two_coin_solve};
pub use trim::{trim_step, TrimOutcome, TrimReport};

use crate::state::{MarkTable, ResidueState};

/// Early terminations that end the whole transformation phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialCase {
    /// `A[i] >= p - 1`: every residue is a multiple `c·i` with `c <= p - 1`.
    Saturated(usize),
    /// Every `A[i] = C[i]`: the marked multiples cover `[1, p-1]` exactly.
    ExactCover,
}

/// Pure inspection for the two early-termination conditions.
pub fn detect_special_case(state: &ResidueState, marks: &MarkTable) -> Option<SpecialCase> {
    let n = state.modulus() as i64;
    if let Some(i) = (1..state.modulus()).find(|&i| state.len(i) >= n - 1) {
        return Some(SpecialCase::Saturated(i));
    }
    let all_full = (1..state.modulus()).all(|i| marks.count(i) == state.len(i));
    (all_full && state.weight() > 0).then_some(SpecialCase::ExactCover)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detect_examples() {
        let mut lengths = vec![0i64; 7];
        lengths[3] = 6;
        let s = ResidueState::from_lengths(lengths);
        let m = MarkTable::new(7);
        assert_eq!(detect_special_case(&s, &m), Some(SpecialCase::Saturated(3)));

        let s = ResidueState::from_values(5, &[1, 2, 3, 4]).unwrap();
        let mut m = MarkTable::new(5);
        assert_eq!(detect_special_case(&s, &m), None);
        for i in 1..5 {
            m.push_mark(i);
        }
        assert_eq!(detect_special_case(&s, &m), Some(SpecialCase::ExactCover));
        assert!(m.get(0).is_none());
    }
}
