//! Zero-sum `n`-subsets of `2n - 1` integers.

use crate::error::{Error, Result};
use crate::modmath::{counting_sort_permutation, is_prime, smallest_prime_factor};
use crate::solver::{solve_lemma2, Algorithm};

/// Prime case: `p` of the `2p - 1` residues summing to 0 mod `p`.
///
/// Sort the values; if `a_i = a_{i+p-1}` for some `i` those `p` equal values
/// are the answer. Otherwise every `b_i = a_{i+p} - a_i` (`1 <= i < p`) is
/// nonzero, and a subset `I` with `Σ_I b_i = -Σ_{i<=p} a_i` turns
/// `{a_1, …, a_p}` into a zero-sum selection by swapping `a_i` for `a_{i+p}`.
/// Returns 0-based positions, increasing.
pub fn solve_prime(p: usize, values: &[u64], algorithm: Algorithm) -> Result<Vec<usize>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if values.len() != 2 * p - 1 {
        return Err(Error::WrongCount {
            expected: 2 * p - 1,
            got: values.len(),
        });
    }
    let reduced: Vec<usize> = values.iter().map(|&v| (v % p as u64) as usize).collect();
    let perm = counting_sort_permutation(&reduced, p)?;
    let a = |k: usize| reduced[perm[k]];

    if let Some(start) = (0..p).find(|&k| a(k) == a(k + p - 1)) {
        let mut picked: Vec<usize> = perm[start..start + p].to_vec();
        picked.sort_unstable();
        return Ok(picked);
    }

    let diffs: Vec<usize> = (0..p - 1).map(|k| a(k + p) - a(k)).collect();
    let head: usize = (0..p).map(a).sum::<usize>() % p;
    let target = (p - head) % p;
    let swap = solve_lemma2(p, &diffs, target, algorithm)?;

    let mut chosen: Vec<usize> = (0..p).collect();
    for &k in &swap.indices {
        chosen[k] = k + p;
    }
    let mut picked: Vec<usize> = chosen.into_iter().map(|k| perm[k]).collect();
    picked.sort_unstable();
    Ok(picked)
}

/// Any `n >= 1`: `n` of the `2n - 1` values with sum divisible by `n`.
///
/// For composite `n = p·a` (`p` the least prime factor), `2a - 1` disjoint
/// zero-sum `p`-subsets are extracted from a pool of at least `2p - 1`
/// values; their sums `X` are divisible by `p`, and a zero-sum `a`-subset of
/// the `X/p` (mod `a`) picks the groups to keep. Returns 0-based positions,
/// increasing.
pub fn solve_general(n: usize, values: &[i64], algorithm: Algorithm) -> Result<Vec<usize>> {
    solve_general_with(n, values, algorithm, false)
}

/// [`solve_general`] where `Auto` may pick the theoretical pipeline for
/// large prime factors.
pub fn solve_general_with(
    n: usize,
    values: &[i64],
    algorithm: Algorithm,
    allow_theoretical: bool,
) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::ModulusTooSmall(0));
    }
    if values.len() != 2 * n - 1 {
        return Err(Error::WrongCount {
            expected: 2 * n - 1,
            got: values.len(),
        });
    }
    let reduced: Vec<u64> = values
        .iter()
        .map(|&v| v.rem_euclid(n as i64) as u64)
        .collect();
    solve_reduced(n, &reduced, algorithm, allow_theoretical)
}

fn solve_reduced(
    n: usize,
    values: &[u64],
    algorithm: Algorithm,
    allow_theoretical: bool,
) -> Result<Vec<usize>> {
    if n == 1 {
        return Ok(vec![0]);
    }
    let p = smallest_prime_factor(n as u64)? as usize;
    if p == n {
        return solve_prime(p, values, algorithm.resolve(p, allow_theoretical));
    }
    let a = n / p;
    let sub_algorithm = algorithm.resolve(p, allow_theoretical);

    let mut carry: Vec<usize> = (0..p - 1).collect();
    let mut fresh = p - 1;
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(2 * a - 1);
    let mut quotients: Vec<u64> = Vec::with_capacity(2 * a - 1);
    for _ in 0..2 * a - 1 {
        let remaining = carry.len() + values.len() - fresh;
        if remaining < 2 * p - 1 {
            return Err(Error::Invariant(format!(
                "pool holds {remaining} values, need {}",
                2 * p - 1
            )));
        }
        let mut window = std::mem::take(&mut carry);
        window.extend(fresh..fresh + p);
        fresh += p;
        let sub: Vec<u64> = window.iter().map(|&k| values[k]).collect();
        let picked = solve_prime(p, &sub, sub_algorithm)?;
        let mut taken = vec![false; window.len()];
        for &k in &picked {
            taken[k] = true;
        }
        let group: Vec<usize> = picked.iter().map(|&k| window[k]).collect();
        carry = (0..window.len())
            .filter(|&k| !taken[k])
            .map(|k| window[k])
            .collect();
        let x: u64 = group.iter().map(|&k| values[k]).sum();
        if !x.is_multiple_of(p as u64) {
            return Err(Error::Invariant(format!(
                "group sum {x} not divisible by {p}"
            )));
        }
        groups.push(group);
        quotients.push((x / p as u64) % a as u64);
    }

    let keep = solve_reduced(a, &quotients, algorithm, allow_theoretical)?;
    let mut picked: Vec<usize> = keep
        .iter()
        .flat_map(|&g| groups[g].iter().copied())
        .collect();
    picked.sort_unstable();
    Ok(picked)
}
