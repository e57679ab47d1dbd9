//! Optional instrumentation for the marking processes.
//!
//! A [`Probe`] passed to `trim_step` / `enrichment_step` watches every
//! marking and collision and records a violation whenever one of the
//! marking claims fails. Solvers run without one.

use crate::modmath::gcd;
use crate::state::{assert_invariants, MarkTable, ResidueState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Trim,
    Enrichment,
}

#[derive(Debug, Default, Clone)]
pub struct Probe {
    /// Re-run the full `assert_invariants` scan after every collision.
    pub deep: bool,
    pub markings: u64,
    pub collisions: u64,
    violations: Vec<String>,
    variant: Option<Variant>,
    last_c: i64,
    terminal: Vec<bool>,
}

impl Probe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn deep() -> Self {
        Self {
            deep: true,
            ..Self::default()
        }
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, msg: String) {
        self.violations.push(msg);
    }

    pub(crate) fn begin(&mut self, variant: Variant, state: &ResidueState, marks: &MarkTable) {
        self.variant = Some(variant);
        self.last_c = 0;
        self.terminal = vec![false; state.modulus()];
        if variant == Variant::Trim {
            for i in 1..state.modulus() {
                self.terminal[i] = state.len(i) > 0 && marks.count(i) == state.len(i);
            }
        }
    }

    pub(crate) fn on_mark(&mut self, state: &ResidueState, marks: &MarkTable, c: i64, i: usize) {
        self.markings += 1;
        let n = state.modulus();
        if marks.marked_cells() > n - 1 {
            self.fail(format!(
                "claim 5: {} cells marked with n={n}",
                marks.marked_cells()
            ));
        }
        if self.variant == Some(Variant::Trim) {
            if c < self.last_c {
                self.fail(format!(
                    "claim 6: marking ({c},{i}) after a marking with c={}",
                    self.last_c
                ));
            }
            self.last_c = c;
            if self.terminal[i] {
                self.fail(format!(
                    "claim 9: marking ({c},{i}) after A[i]=C[i] was reached"
                ));
            }
            if marks.count(i) == state.len(i) {
                self.terminal[i] = true;
            }
        }
    }

    pub(crate) fn on_collision(&mut self, c: i64, i: usize, d: i64, j: usize) {
        self.collisions += 1;
        if gcd(c as u64, d as u64) != 1 {
            self.fail(format!(
                "claim 2: collision ({c},{i}) vs ({d},{j}) has gcd > 1"
            ));
        }
        if self.variant == Some(Variant::Trim) && d >= c {
            self.fail(format!(
                "claim 6: collision ({c},{i}) vs older mark ({d},{j}) with d >= c"
            ));
        }
        if i == j {
            self.fail(format!("note 1: self-collision on difference {i}"));
        }
    }

    /// Called after a collision has been resolved and cleaned up.
    /// `before` holds `(W, A[i], A[j])` from just before the resolution.
    pub(crate) fn after_resolution(
        &mut self,
        state: &ResidueState,
        marks: &MarkTable,
        i: usize,
        j: usize,
        before: (i64, i64, i64),
    ) {
        let (w, ai, aj) = before;
        if state.weight() < w {
            self.fail(format!(
                "claim 3: W decreased from {w} to {}",
                state.weight()
            ));
        }
        if self.variant == Some(Variant::Trim) {
            if state.len(i) < ai {
                self.fail(format!(
                    "claim 7: marker {i} shrank from {ai} to {}",
                    state.len(i)
                ));
            }
            if state.len(j) > aj {
                self.fail(format!("claim 7: A[{j}] grew while not being the marker"));
            }
            if self.terminal[i] && state.len(i) != ai {
                self.fail(format!("claim 9: terminal difference {i} changed length"));
            }
            if marks.count(j) != state.len(j) {
                self.fail(format!(
                    "claim 8: {j} lost marks but C={} != A={}",
                    marks.count(j),
                    state.len(j)
                ));
            }
            self.terminal[j] = true;
        }
        if self.deep {
            if let Err(e) = assert_invariants(state, marks) {
                self.fail(format!("claim 4/invariants: {e}"));
            }
        }
    }
}
