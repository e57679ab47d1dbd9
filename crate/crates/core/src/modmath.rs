//! Number-theoretic primitives shared by the rest of the crate.

use crate::error::{Error, Result};

/// Multiplicative inverses of every nonzero residue modulo a prime.
///
/// Built in linear time from `inv[i] = -(n / i) * inv[n % i] (mod n)`.
#[derive(Debug, Clone)]
pub struct InverseTable {
    modulus: usize,
    inv: Vec<u32>,
}

impl InverseTable {
    /// Builds the table for a prime modulus `n`. Primality is not checked.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::ModulusTooSmall(n as u64));
        }
        assert!(n <= u32::MAX as usize, "modulus {n} does not fit the table");
        let mut inv = vec![0u32; n];
        inv[1] = 1;
        let m = n as u64;
        for i in 2..n {
            let q = m / i as u64;
            let r = inv[n % i] as u64;
            inv[i] = ((m - q * r % m) % m) as u32;
        }
        Ok(Self { modulus: n, inv })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Inverse of `i`; `i` must be a nonzero residue.
    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        debug_assert!(i != 0 && i < self.modulus);
        self.inv[i] as usize
    }

    /// `a / b` modulo the table's prime.
    #[inline]
    pub fn div(&self, a: usize, b: usize) -> usize {
        mul_mod(a, self.inv(b), self.modulus)
    }

    /// Raw table, `inv[0]` is an unused zero.
    pub fn as_slice(&self) -> &[u32] {
        &self.inv
    }
}

pub fn batch_inverses(n: usize) -> Result<InverseTable> {
    InverseTable::new(n)
}

#[inline]
pub fn mul_mod(a: usize, b: usize, n: usize) -> usize {
    if (a | b) >> 32 == 0 {
        ((a as u64 * b as u64) % n as u64) as usize
    } else {
        ((a as u128 * b as u128) % n as u128) as usize
    }
}

#[inline]
pub fn add_mod(a: usize, b: usize, n: usize) -> usize {
    let s = a + b;
    if s >= n {
        s - n
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: usize, b: usize, n: usize) -> usize {
    if a >= b {
        a - b
    } else {
        a + n - b
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    assert!(a >= 0 && b >= 0, "ext_gcd expects nonnegative inputs");
    if a == 0 && b == 0 {
        return Err(Error::ZeroGcd);
    }
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    Ok((r0 as i64, x0 as i64, y0 as i64))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest prime factor of `n` by trial division.
pub fn smallest_prime_factor(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::ModulusTooSmall(n));
    }
    if n.is_multiple_of(2) {
        return Ok(2);
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return Ok(d);
        }
        d += 2;
    }
    Ok(n)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_prime_factor(n) == Ok(n)
}

/// Least prime `>= n` (2 for `n <= 2`).
pub fn next_prime_at_least(n: u64) -> u64 {
    let mut m = n.max(2);
    while !is_prime(m) {
        m += 1;
    }
    m
}

/// Stable permutation sorting `values` (each below `bound`) in O(len + bound).
pub fn counting_sort_permutation(values: &[usize], bound: usize) -> Result<Vec<usize>> {
    let mut start = vec![0usize; bound + 1];
    for (index, &v) in values.iter().enumerate() {
        if v >= bound {
            return Err(Error::OutOfRange {
                index,
                value: v as u64,
                bound: bound as u64,
            });
        }
        start[v + 1] += 1;
    }
    for b in 0..bound {
        start[b + 1] += start[b];
    }
    let mut perm = vec![0usize; values.len()];
    for (index, &v) in values.iter().enumerate() {
        perm[start[v]] = index;
        start[v] += 1;
    }
    Ok(perm)
}

/// `floor(cbrt(x))` by integer Newton iteration.
pub fn icbrt(x: u128) -> u128 {
    if x < 8 {
        return u128::from(x > 0);
    }
    let bits = 128 - x.leading_zeros();
    // 2^ceil(bits/3) is an upper bound for the root.
    let mut r: u128 = 1 << bits.div_ceil(3);
    loop {
        let next = (2 * r + x / (r * r)) / 3;
        if next >= r {
            break;
        }
        r = next;
    }
    while r * r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// `floor(k^(num/3))` for the exponents used by the growth step.
pub fn pow_third(k: u64, num: u32) -> u64 {
    assert!(k <= 1 << 24, "growth parameter {k} out of range");
    icbrt((k as u128).pow(num)) as u64
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u32 {
    assert!(n >= 1);
    64 - (n - 1).leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let t7 = InverseTable::new(7).unwrap();
        assert_eq!(t7.inv(1), 1);
        assert_eq!(t7.inv(2), 4);
        let t5 = InverseTable::new(5).unwrap();
        assert_eq!(&t5.as_slice()[1..], &[1, 3, 2, 4]);
        assert_eq!(InverseTable::new(1).unwrap_err(), Error::ModulusTooSmall(1));
    }

    #[test]
    fn inverses_for_all_primes_up_to_10007() {
        for p in (2..=10007u64).filter(|&p| is_prime(p)) {
            let t = InverseTable::new(p as usize).unwrap();
            for i in 1..p as usize {
                assert_eq!(i as u64 * t.inv(i) as u64 % p, 1, "p={p} i={i}");
            }
        }
    }

    #[test]
    fn ext_gcd_examples() {
        assert_eq!(ext_gcd(1, 0).unwrap(), (1, 1, 0));
        let (g, x, y) = ext_gcd(6, 4).unwrap();
        assert_eq!(g, 2);
        assert_eq!(6 * x + 4 * y, 2);
        let (g, x, y) = ext_gcd(3, 2).unwrap();
        assert_eq!((g, 3 * x + 2 * y), (1, 1));
        assert_eq!(ext_gcd(0, 0), Err(Error::ZeroGcd));
        assert_eq!(ext_gcd(0, 9).unwrap().0, 9);
    }

    #[test]
    fn smallest_factor_examples() {
        assert_eq!(smallest_prime_factor(12), Ok(2));
        assert_eq!(smallest_prime_factor(35), Ok(5));
        assert_eq!(smallest_prime_factor(97), Ok(97));
        assert_eq!(smallest_prime_factor(1), Err(Error::ModulusTooSmall(1)));
        assert_eq!(next_prime_at_least(1 << 18), 262147);
    }

    #[test]
    fn counting_sort_examples() {
        assert_eq!(
            counting_sort_permutation(&[2, 0, 1], 3).unwrap(),
            vec![1, 2, 0]
        );
        assert!(counting_sort_permutation(&[], 3).unwrap().is_empty());
        assert_eq!(
            counting_sort_permutation(&[3, 3, 1, 3], 4).unwrap(),
            vec![2, 0, 1, 3]
        );
        assert!(matches!(
            counting_sort_permutation(&[0, 5], 5),
            Err(Error::OutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn integer_roots() {
        assert_eq!(pow_third(1000, 4), 10_000);
        assert_eq!(pow_third(1000, 5), 100_000);
        assert_eq!(pow_third(1000, 1), 10);
        assert_eq!(pow_third(10_000, 4), 215_443);
        for x in 0..5000u128 {
            let r = icbrt(x);
            assert!(r * r * r <= x && (r + 1).pow(3) > x, "x={x}");
        }
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
    }
}
