//! Collision resolution primitives.

use crate::error::{Error, Result};
use crate::modmath::{ext_gcd, gcd, mul_mod, InverseTable};
use crate::state::{Fusion, MarkTable, OpLog, Pool, Record, ResidueState};

/// Frobenius bound `(c-1)(d-1) = cd - c - d + 1`: every integer at least this
/// large is a nonnegative combination of coprime `c` and `d`.
#[inline]
pub fn frobenius_floor(c: i64, d: i64) -> i64 {
    (c - 1) * (d - 1)
}

/// Length of the progression obtained by fusing `AP(i, len_i) + AP(j, len_j)`
/// where `c·i = d·j`, `gcd(c, d) = 1`: `len_i·d + len_j·c - 2(c-1)(d-1)`.
#[inline]
pub fn fused_length(c: i64, d: i64, len_i: i64, len_j: i64) -> i64 {
    let u =
        len_i as i128 * d as i128 + len_j as i128 * c as i128 - 2 * frobenius_floor(c, d) as i128;
    i64::try_from(u).expect("fused length overflows i64")
}

/// Operation 1 on a collision of the new mark `(c, i)` with `(d, j)`, `c > d`.
///
/// Moves `y = ⌊A[j]/d⌋` batches: `A[i] += y·c`, `A[j] -= y·d`, then drops the
/// marks of `j` above its new length. Returns `y`.
pub fn apply_op1(
    state: &mut ResidueState,
    marks: &mut MarkTable,
    log: &mut OpLog,
    i: usize,
    j: usize,
    c: i64,
    d: i64,
) -> i64 {
    let n = state.modulus();
    assert!(i != j, "op1 on a single difference {i}");
    assert!(c > d && d >= 1, "op1 needs c > d >= 1, got c={c} d={d}");
    assert_eq!(
        mul_mod(c as usize, i, n),
        mul_mod(d as usize, j, n),
        "op1 on non-colliding pair"
    );
    assert!(
        state.len(i) >= c && state.len(j) >= d,
        "op1 lengths too short"
    );
    debug_assert_eq!(gcd(c as u64, d as u64), 1);

    let gain_before = state.len(i);
    let batches = state.len(j) / d;
    state.set_len(i, gain_before + batches * c);
    state.set_len(j, state.len(j) - batches * d);
    if marks.count(j) > state.len(j) {
        marks.truncate(j, state.len(j));
    }
    let narrow = |x: i64| u32::try_from(x).expect("op1 field exceeds u32");
    log.push(Record::Op1 {
        gain: i as u32,
        lose: j as u32,
        c: narrow(c),
        d: narrow(d),
        batches: narrow(batches),
        gain_before: narrow(gain_before),
    });
    batches
}

/// Operation 2 on a collision `c·i = d·j` with coprime `c, d`.
///
/// Both progressions are consumed (their marks removed) and
/// `z = i/d = j/c` gains `A[i]·d + A[j]·c - 2(c-1)(d-1)`; the global shift
/// grows by `(c-1)(d-1)·z`. Returns `z`.
#[allow(clippy::too_many_arguments)]
pub fn apply_op2(
    state: &mut ResidueState,
    marks: &mut MarkTable,
    log: &mut OpLog,
    inv: &InverseTable,
    i: usize,
    j: usize,
    c: i64,
    d: i64,
) -> usize {
    let n = state.modulus();
    assert!(i != j && c != d, "op2 on a single difference {i}");
    assert!(c >= 1 && d >= 1);
    assert_eq!(gcd(c as u64, d as u64), 1, "op2 needs coprime multiples");
    assert!(
        state.len(i) >= c && state.len(j) >= d,
        "op2 lengths too short"
    );
    let z = inv.div(i, d as usize % n);
    assert_eq!(z, inv.div(j, c as usize % n), "op2 on non-colliding pair");

    let (len_i, len_j) = (state.len(i), state.len(j));
    let added = fused_length(c, d, len_i, len_j);
    marks.truncate(i, 0);
    marks.truncate(j, 0);
    state.set_len(i, 0);
    state.set_len(j, 0);
    let base = state.len(z);
    state.set_len(z, base + added);
    state.add_shift(mul_mod(frobenius_floor(c, d) as usize % n, z, n));
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
        pool: Pool::Main,
    })));
    z
}

/// Finds `a'·w + b'·v = target` with `0 <= a' <= t`, `0 <= b' <= s`.
///
/// Requires `gcd(w, v) = 1`, `t >= v`, `s >= w` and `target` inside
/// `[F, t·w + s·v - F]` where `F = (w-1)(v-1)`; every such target has a
/// solution.
pub fn two_coin_solve(w: i64, v: i64, t: i64, s: i64, target: i64) -> Result<(i64, i64)> {
    assert!(w >= 1 && v >= 1 && t >= 0 && s >= 0);
    let f = frobenius_floor(w, v) as i128;
    let hi = t as i128 * w as i128 + s as i128 * v as i128 - f;
    let (lo_i, hi_i) = (f as i64, hi.min(i64::MAX as i128) as i64);
    let window_err = Error::OutsideWindow {
        target,
        lo: lo_i,
        hi: hi_i,
    };
    if (target as i128) < f || target as i128 > hi {
        return Err(window_err);
    }
    let (g, x, _) = ext_gcd(w, v)?;
    if g != 1 {
        return Err(Error::Invariant(format!(
            "two_coin_solve: gcd({w},{v}) = {g}"
        )));
    }
    let (w, v, t, s, target) = (w as i128, v as i128, t as i128, s as i128, target as i128);
    // a' ≡ target·w⁻¹ (mod v); w⁻¹ ≡ x.
    let residue = (target % v * (x as i128 % v)).rem_euclid(v);
    // a' must also satisfy (target - s·v)/w <= a' <= min(t, target/w).
    let lower = (target - s * v).max(0);
    let lower = (lower + w - 1) / w;
    let upper = t.min(target / w);
    let a = lower + (residue - lower).rem_euclid(v);
    if a > upper {
        return Err(window_err);
    }
    let b = (target - a * w) / v;
    debug_assert_eq!(a * w + b * v, target);
    debug_assert!(b >= 0 && b <= s);
    Ok((a as i64, b as i64))
}
