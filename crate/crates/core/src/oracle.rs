//! Brute-force references: subset-sum DP with witnesses, exact sumsets of
//! progressions, and exhaustive zero-sum search for tiny instances.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

const SUMSET_LENGTH_LIMIT: i64 = 10_000;
const EGZ_BRUTE_LIMIT: usize = 12;

/// Reachability DP over `Z_p` with one parent link per residue.
///
/// Returns 0-based indices, increasing, of a subset of `values` summing to
/// `target` modulo `p`, or `None` if no subset does. Runs in `O(len · p)`.
pub fn dp_subset_solve(p: usize, values: &[usize], target: usize) -> Option<Vec<usize>> {
    assert!(p >= 1);
    let target = target % p;
    // parent[r] = (item, previous residue); the root has item == usize::MAX.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; p];
    parent[0] = Some((usize::MAX, 0));
    let mut reached = vec![0usize];
    for (item, &v) in values.iter().enumerate() {
        if parent[target].is_some() {
            break;
        }
        let v = v % p;
        let snapshot = reached.len();
        for k in 0..snapshot {
            let r = reached[k];
            let s = (r + v) % p;
            if parent[s].is_none() {
                parent[s] = Some((item, r));
                reached.push(s);
            }
        }
    }
    parent[target]?;
    let mut picked = Vec::new();
    let mut r = target;
    while let Some((item, prev)) = parent[r] {
        if item == usize::MAX {
            break;
        }
        picked.push(item);
        r = prev;
    }
    picked.reverse();
    Some(picked)
}

/// Exact sumset `Σ AP(a, k)` in `Z_n` by repeated boolean convolution.
pub fn brute_sumset(aps: &[(usize, i64)], n: usize) -> Result<BTreeSet<usize>> {
    if n < 1 {
        return Err(Error::ModulusTooSmall(n as u64));
    }
    let total: i64 = aps.iter().map(|&(_, k)| k).sum();
    if total > SUMSET_LENGTH_LIMIT || aps.iter().any(|&(_, k)| k < 0) {
        return Err(Error::ScaleGuard(format!(
            "total progression length {total} exceeds {SUMSET_LENGTH_LIMIT}"
        )));
    }
    let mut cur = vec![false; n];
    cur[0] = true;
    for &(a, k) in aps {
        let step = a % n;
        for _ in 0..k {
            let mut next = cur.clone();
            for (x, &on) in cur.iter().enumerate() {
                if on {
                    next[(x + step) % n] = true;
                }
            }
            if next == cur {
                break;
            }
            cur = next;
        }
    }
    Ok(cur
        .iter()
        .enumerate()
        .filter(|(_, &on)| on)
        .map(|(x, _)| x)
        .collect())
}

/// Finds `n` of the `2n - 1` values with sum divisible by `n` by a
/// (count, residue) DP. Only for `n <= 12`.
pub fn egz_brute(n: usize, values: &[u64]) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::ModulusTooSmall(0));
    }
    if n > EGZ_BRUTE_LIMIT {
        return Err(Error::ScaleGuard(format!(
            "egz_brute needs n <= {EGZ_BRUTE_LIMIT}, got {n}"
        )));
    }
    if values.len() != 2 * n - 1 {
        return Err(Error::WrongCount {
            expected: 2 * n - 1,
            got: values.len(),
        });
    }
    // reach[c][r]: parent (item, previous residue) of a c-subset with sum r.
    let mut reach = vec![vec![None::<(usize, usize)>; n]; n + 1];
    reach[0][0] = Some((usize::MAX, 0));
    for (item, &v) in values.iter().enumerate() {
        let v = (v % n as u64) as usize;
        for c in (1..=n).rev() {
            for r in 0..n {
                if reach[c - 1][r].is_some() {
                    let s = (r + v) % n;
                    if reach[c][s].is_none() {
                        reach[c][s] = Some((item, r));
                    }
                }
            }
        }
    }
    if reach[n][0].is_none() {
        return Err(Error::Invariant(format!("no zero-sum {n}-subset found")));
    }
    let mut picked = Vec::with_capacity(n);
    let (mut c, mut r) = (n, 0);
    while c > 0 {
        let (item, prev) = reach[c][r].expect("parent chain is complete");
        picked.push(item);
        c -= 1;
        r = prev;
    }
    picked.sort_unstable();
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset_sum(values: &[usize], idx: &[usize], p: usize) -> usize {
        idx.iter().map(|&i| values[i]).sum::<usize>() % p
    }

    #[test]
    fn dp_examples() {
        let v = [1, 1, 1, 1];
        let w = dp_subset_solve(5, &v, 2).unwrap();
        assert_eq!(w.len(), 2);

        let v = [3, 3, 5, 5, 5, 6];
        let w = dp_subset_solve(7, &v, 1).unwrap();
        assert_eq!(subset_sum(&v, &w, 7), 1);

        assert_eq!(dp_subset_solve(7, &[2], 3), None);
        assert_eq!(dp_subset_solve(7, &[2], 0), Some(vec![]));
    }

    #[test]
    fn dp_matches_enumeration() {
        for p in 2..=13usize {
            let values: Vec<usize> = (0..p).map(|x| (x * x + 3) % p).collect();
            let mut reachable = vec![false; p];
            for mask in 0u32..1 << values.len() {
                let s: usize = (0..values.len())
                    .filter(|&b| mask >> b & 1 == 1)
                    .map(|b| values[b])
                    .sum();
                reachable[s % p] = true;
            }
            for (t, &hit) in reachable.iter().enumerate() {
                let w = dp_subset_solve(p, &values, t);
                assert_eq!(w.is_some(), hit, "p={p} t={t}");
                if let Some(w) = w {
                    assert_eq!(subset_sum(&values, &w, p), t);
                }
            }
        }
    }

    #[test]
    fn sumset_examples() {
        let all = brute_sumset(&[(2, 3), (3, 2)], 7).unwrap();
        assert_eq!(all.len(), 7);
        let ap = brute_sumset(&[(1, 4)], 11).unwrap();
        assert_eq!(ap, (0..=4).collect());
        assert_eq!(brute_sumset(&[], 9).unwrap(), BTreeSet::from([0]));
        assert!(matches!(
            brute_sumset(&[(1, 20_000)], 7),
            Err(Error::ScaleGuard(_))
        ));
    }

    #[test]
    fn egz_brute_examples() {
        let w = egz_brute(2, &[0, 1, 2]).unwrap();
        assert_eq!(w, vec![0, 2]);
        assert_eq!(egz_brute(1, &[7]).unwrap(), vec![0]);
        let v = [1, 1, 1, 2, 2];
        let w = egz_brute(3, &v).unwrap();
        assert_eq!(w.iter().map(|&i| v[i]).sum::<u64>() % 3, 0);
        assert!(egz_brute(13, &[0; 25]).is_err());
    }
}
