//! Checking proposed solutions against their instances.

use std::fmt;

/// Why a proposed solution was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    IndexOutOfRange { index: usize, len: usize },
    DuplicateIndex(usize),
    WrongCount { expected: usize, got: usize },
    SumMismatch { expected: u64, got: u64 },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::IndexOutOfRange { index, len } => {
                write!(f, "index out of range: {index} not in [0, {len})")
            }
            Rejection::DuplicateIndex(i) => write!(f, "duplicate index: {i}"),
            Rejection::WrongCount { expected, got } => {
                write!(f, "wrong count: expected {expected}, got {got}")
            }
            Rejection::SumMismatch { expected, got } => {
                write!(f, "sum mismatch: expected {expected}, got {got}")
            }
        }
    }
}

fn selected_sum(modulus: u64, values: &[i64], indices: &[usize]) -> Result<u64, Rejection> {
    let mut seen = vec![false; values.len()];
    let mut sum = 0u64;
    for &i in indices {
        if i >= values.len() {
            return Err(Rejection::IndexOutOfRange {
                index: i,
                len: values.len(),
            });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Rejection::DuplicateIndex(i));
        }
        sum = (sum + values[i].rem_euclid(modulus as i64) as u64) % modulus;
    }
    Ok(sum)
}

/// Accepts iff `indices` are distinct, in range and their values sum to
/// `target` mod `p`. Indices are 0-based.
pub fn verify_lemma(
    p: u64,
    values: &[i64],
    target: u64,
    indices: &[usize],
) -> Result<(), Rejection> {
    let got = selected_sum(p, values, indices)?;
    if got != target % p {
        return Err(Rejection::SumMismatch {
            expected: target % p,
            got,
        });
    }
    Ok(())
}

/// Accepts iff exactly `n` distinct in-range indices are given and their
/// values sum to 0 mod `n`.
pub fn verify_egz(n: u64, values: &[i64], indices: &[usize]) -> Result<(), Rejection> {
    let got = selected_sum(n, values, indices)?;
    if indices.len() as u64 != n {
        return Err(Rejection::WrongCount {
            expected: n as usize,
            got: indices.len(),
        });
    }
    if got != 0 {
        return Err(Rejection::SumMismatch { expected: 0, got });
    }
    Ok(())
}
