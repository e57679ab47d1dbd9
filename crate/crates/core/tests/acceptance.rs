//! Acceptance criteria 1-8, one PASS/FAIL line each.
//!
//! Everything runs inside one test so the timing criterion is not disturbed
//! by sibling tests running in parallel.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use egz_core::egz::solve_general;
use egz_core::instance::{generate, Distribution, Mode};
use egz_core::modmath::{ceil_log2, gcd, is_prime, next_prime_at_least, pow_third, InverseTable};
use egz_core::oracle::{brute_sumset, dp_subset_solve, egz_brute};
use egz_core::packing::{add_single, fillgap_add_ap, CoverageSet};
use egz_core::probe::Probe;
use egz_core::solver::{
    assign_indices, replay_log, solve_lemma2_nlogn, solve_lemma2_practical, special_construct_i,
    walk_packing, DemandVector,
};
use egz_core::state::{MarkTable, OpLog, ResidueState};
use egz_core::transform::{
    apply_op2, enrichment_step, frobenius_floor, fused_length, growth_step, trim_step,
    two_coin_solve, GrowthOutcome, SpecialCase,
};
use egz_core::verify::{verify_egz, verify_lemma};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn report(id: u32, pass: bool, elapsed: Duration, detail: String) -> Line {
    println!(
        "criterion {id}: {} ({:.2}s) {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    Line { id, pass, detail }
}

fn as_usize(values: &[i64]) -> Vec<usize> {
    values.iter().map(|&v| v as usize).collect()
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let mut failures = 0u64;
    let mut checked = 0u64;
    for p in (2..=61u64).filter(|&p| is_prime(p)) {
        let p = p as usize;
        for seed in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed * 1000 + p as u64);
            let values: Vec<usize> = (0..p - 1).map(|_| rng.gen_range(1..p)).collect();
            let signed: Vec<i64> = values.iter().map(|&v| v as i64).collect();
            for t in 0..p {
                checked += 1;
                let ok = dp_subset_solve(p, &values, t).is_some()
                    && solve_lemma2_practical(p, &values, t)
                        .map(|r| verify_lemma(p as u64, &signed, t as u64, &r.indices).is_ok())
                        .unwrap_or(false);
                if !ok {
                    failures += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(60);
    report(
        1,
        pass,
        elapsed,
        format!("{checked} targets, {failures} failures"),
    )
}

fn criterion_2() -> Line {
    let start = Instant::now();
    let mut failures = 0u64;
    let dists = [
        Distribution::Uniform,
        Distribution::FewDistinct(3),
        Distribution::AdversarialEqual,
    ];
    for n in 1..=30usize {
        for seed in 0..1000u64 {
            let inst = generate(Mode::Egz, n, seed, dists[seed as usize % 3]);
            let ok = match solve_general(n, &inst.values, egz_core::Algorithm::Auto) {
                Ok(idx) => idx.len() == n && verify_egz(n as u64, &inst.values, &idx).is_ok(),
                Err(_) => false,
            };
            let brute_ok = n > 10 || {
                let reduced: Vec<u64> = inst.values.iter().map(|&v| v as u64).collect();
                egz_brute(n, &reduced)
                    .map(|idx| verify_egz(n as u64, &inst.values, &idx).is_ok())
                    .unwrap_or(false)
            };
            if !(ok && brute_ok) {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(120);
    report(
        2,
        pass,
        elapsed,
        format!("30000 instances, {failures} failures"),
    )
}

fn criterion_3() -> Line {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut cases = 0u64;
    let p = 1009usize;
    let inv = InverseTable::new(p).unwrap();
    for v in 2..=8i64 {
        for w in 1..v {
            if gcd(w as u64, v as u64) != 1 {
                continue;
            }
            for t in v..=3 * v {
                for s in w..=3 * w {
                    cases += 1;
                    // Window: every integer in [F, tw + sv - F] is a·w + b·v
                    // with 0 <= a <= t, 0 <= b <= s.
                    let f = frobenius_floor(w, v);
                    let u = fused_length(v, w, t, s);
                    if u != t * w + s * v - 2 * (v * w - v - w + 1) {
                        violations.push(format!("length w={w} v={v} t={t} s={s}"));
                    }
                    let reach: BTreeSet<i64> = (0..=t)
                        .flat_map(|a| (0..=s).map(move |b| a * w + b * v))
                        .collect();
                    for x in f..=f + u {
                        let solved = two_coin_solve(w, v, t, s, x)
                            .map(|(a, b)| a * w + b * v == x && a <= t && b <= s)
                            .unwrap_or(false);
                        if !reach.contains(&x) || !solved {
                            violations.push(format!("window w={w} v={v} t={t} s={s} x={x}"));
                        }
                    }

                    // Fusion in Z_p: AP(wz, t) + AP(vz, s) contains a shift
                    // of AP(z, u).
                    for z in [1usize, 2, 500, 1008] {
                        let (i, j) = (w as usize * z % p, v as usize * z % p);
                        let mut lengths = vec![0i64; p];
                        lengths[i] = t;
                        lengths[j] = s;
                        let mut state = ResidueState::from_lengths(lengths);
                        let mut marks = MarkTable::new(p);
                        let mut log = OpLog::new();
                        let got = apply_op2(&mut state, &mut marks, &mut log, &inv, i, j, v, w);
                        let full = brute_sumset(&[(i, t), (j, s)], p).unwrap();
                        let fused = brute_sumset(&[(got, state.len(got))], p).unwrap();
                        let g = state.shift();
                        if got != z
                            || state.len(z) != u
                            || !fused.iter().all(|&x| full.contains(&((x + g) % p)))
                        {
                            violations.push(format!("fusion w={w} v={v} t={t} s={s} z={z}"));
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed < Duration::from_secs(10);
    let first = violations.first().cloned().unwrap_or_default();
    report(
        3,
        pass,
        elapsed,
        format!(
            "{cases} (w,v,t,s) cases, {} violations {first}",
            violations.len()
        ),
    )
}

struct TrimRun {
    n: usize,
    k: i64,
    cells_marked: u64,
}

/// Criterion 4 corpus; the trim runs are kept for criterion 6.
fn criterion_4(trims: &mut Vec<TrimRun>) -> Line {
    let start = Instant::now();
    let primes = [101usize, 1009, 10007];
    let mut violations: Vec<String> = Vec::new();
    let (mut markings, mut collisions) = (0u64, 0u64);
    for run in 0..100u64 {
        let p = primes[run as usize % 3];
        let dist = match run % 4 {
            0 | 1 => Distribution::Uniform,
            2 => Distribution::FewDistinct(1 + (run as usize % 17)),
            _ => Distribution::AdversarialEqual,
        };
        let inst = generate(Mode::Lemma, p, run, dist);
        let mut state = ResidueState::from_values(p, &as_usize(&inst.values)).unwrap();
        let mut marks = MarkTable::new(p);
        let mut log = OpLog::new();
        let mut probe = if p <= 1009 {
            Probe::deep()
        } else {
            Probe::new()
        };
        if run % 2 == 0 {
            let log2 = ceil_log2(p as u64) as i64;
            let k = [log2, 2 * log2, (p as f64).sqrt() as i64][(run as usize / 2) % 3];
            let r = trim_step(&mut state, &mut marks, &mut log, k, Some(&mut probe));
            trims.push(TrimRun {
                n: p,
                k: k.min(p as i64 - 1),
                cells_marked: r.cells_marked,
            });
        } else {
            let inv = InverseTable::new(p).unwrap();
            let r = [2i64, 4, 10][(run as usize / 2) % 3];
            enrichment_step(&mut state, &mut marks, &mut log, &inv, r, Some(&mut probe));
        }
        markings += probe.markings;
        collisions += probe.collisions;
        violations.extend(probe.violations().iter().map(|v| format!("run {run}: {v}")));
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed < Duration::from_secs(30);
    let first = violations.first().cloned().unwrap_or_default();
    report(
        4,
        pass,
        elapsed,
        format!(
            "100 runs, {markings} markings, {collisions} collisions, {} violations {first}",
            violations.len()
        ),
    )
}

fn criterion_5() -> Line {
    let start = Instant::now();
    let n = 10007usize;
    let inv = InverseTable::new(n).unwrap();
    let bound_log = ceil_log2(n as u64) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = 0u64;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut set = CoverageSet::new(n);
        let seeds = rng.gen_range(0..2000);
        for _ in 0..seeds {
            let b = rng.gen_range(1..n);
            if set.is_full() {
                break;
            }
            add_single(&mut set, b, &inv).unwrap();
        }
        let b = rng.gen_range(1..n);
        let k = rng.gen_range(1..=3000i64);
        let (_, stats) = fillgap_add_ap(&mut set, b, k, &inv).unwrap();
        let bound = 2 * (bound_log + k as u64);
        worst = worst.max(stats.calls as f64 / bound as f64);
        if stats.calls > bound {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        5,
        violations == 0,
        elapsed,
        format!("1000 cases, {violations} violations, max calls/bound {worst:.3}"),
    )
}

fn criterion_6(trims: &[TrimRun]) -> Line {
    let start = Instant::now();
    let mut violations = 0u64;
    let mut worst = 0.0f64;
    for t in trims {
        let harmonic: f64 = (1..=t.k).map(|c| 1.0 / c as f64).sum();
        let bound = t.n as f64 * harmonic + t.n as f64;
        worst = worst.max(t.cells_marked as f64 / bound);
        if t.cells_marked as f64 > bound {
            violations += 1;
        }
    }
    let pass = violations == 0 && !trims.is_empty();
    report(
        6,
        pass,
        start.elapsed(),
        format!(
            "{} trim runs, {violations} violations, max marked/bound {worst:.3}",
            trims.len()
        ),
    )
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn criterion_7() -> Line {
    let start = Instant::now();
    let seeds = 7u64;
    let exps = 18..=22u32;
    // times[e][seed]
    let mut times: Vec<Vec<f64>> = Vec::new();
    let mut nlogn_top = Vec::new();
    let mut wrong = 0u64;
    for e in exps.clone() {
        let mut row = Vec::new();
        for seed in 0..seeds {
            let inst = generate(Mode::Lemma, 1 << e, seed, Distribution::Uniform);
            let values = as_usize(&inst.values);
            let p = inst.modulus;
            let t0 = Instant::now();
            let r = solve_lemma2_practical(p, &values, inst.target);
            row.push(t0.elapsed().as_secs_f64());
            match r {
                Ok(r)
                    if verify_lemma(p as u64, &inst.values, inst.target as u64, &r.indices)
                        .is_ok() => {}
                _ => wrong += 1,
            }
            if e == 22 {
                let t0 = Instant::now();
                let r = solve_lemma2_nlogn(p, &values, inst.target);
                nlogn_top.push(t0.elapsed().as_secs_f64());
                if r.is_err() {
                    wrong += 1;
                }
            }
        }
        times.push(row);
    }
    let ratios: Vec<f64> = (0..times.len() - 1)
        .map(|e| {
            median(
                (0..seeds as usize)
                    .map(|s| times[e + 1][s] / times[e][s])
                    .collect(),
            )
        })
        .collect();
    let practical_top = median(times[times.len() - 1].clone());
    let nlogn_top = median(nlogn_top);
    let pass = wrong == 0 && ratios.iter().all(|&r| r <= 2.5) && practical_top < nlogn_top;
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    report(
        7,
        pass,
        start.elapsed(),
        format!(
            "doubling ratios [{}], at 2^22 practical {:.1}ms vs nlogn {:.1}ms",
            ratio_text.join(", "),
            practical_top * 1e3,
            nlogn_top * 1e3
        ),
    )
}

fn criterion_8() -> Line {
    let start = Instant::now();
    let inst = generate(
        Mode::Lemma,
        (1 << 20) + 1,
        7,
        Distribution::FewDistinct(100),
    );
    let p = inst.modulus;
    let values = as_usize(&inst.values);
    let inv = InverseTable::new(p).unwrap();
    let mut state = ResidueState::from_values(p, &values).unwrap();
    let mut marks = MarkTable::new(p);
    let mut log = OpLog::new();
    let k = 1000i64;
    let growth = growth_step(&mut state, &mut marks, &mut log, &inv, k, None);
    let limit = p / pow_third(k as u64, 4) as usize;
    let survivors = state.diversity();

    // Recover 100 targets from the post-step state.
    let packing = match growth.outcome {
        GrowthOutcome::Special(_) => None,
        _ => {
            let mut set = CoverageSet::new(p);
            let support: Vec<usize> = state.support().collect();
            for i in support {
                if set.is_full() {
                    break;
                }
                fillgap_add_ap(&mut set, i, state.len(i), &inv).unwrap();
            }
            Some(set)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut verified = 0u64;
    for _ in 0..100 {
        let target = rng.gen_range(0..p);
        let demand = match (growth.outcome, &packing) {
            (GrowthOutcome::Special(SpecialCase::Saturated(i)), _) => {
                Ok(special_construct_i(i, target, state.shift(), &inv))
            }
            (GrowthOutcome::Special(SpecialCase::ExactCover), _) => {
                egz_core::solver::special_construct_ii(&marks, target, state.shift())
            }
            (_, Some(set)) => {
                let mut d = DemandVector::new(p);
                let start = (target + p - state.shift()) % p;
                walk_packing(set, start, &mut d).map(|_| d)
            }
            (_, None) => unreachable!(),
        };
        let ok = demand
            .and_then(|mut d| {
                replay_log(&log, &inv, &mut d, target, state.shift())?;
                assign_indices(&values, &d)
            })
            .map(|idx| verify_lemma(p as u64, &inst.values, target as u64, &idx).is_ok())
            .unwrap_or(false);
        if ok {
            verified += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = survivors <= limit && verified == 100 && elapsed < Duration::from_secs(60);
    report(
        8,
        pass,
        elapsed,
        format!(
            "p={p}, outcome {:?}, s'={survivors} (limit {limit}), {verified}/100 targets verified",
            growth.outcome
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let mut lines = Vec::new();
    let mut trims = Vec::new();
    lines.push(criterion_1());
    lines.push(criterion_2());
    lines.push(criterion_3());
    lines.push(criterion_4(&mut trims));
    lines.push(criterion_5());
    lines.push(criterion_6(&trims));
    lines.push(criterion_7());
    lines.push(criterion_8());
    let failed: Vec<String> = lines
        .iter()
        .filter(|l| !l.pass)
        .map(|l| format!("criterion {}: {}", l.id, l.detail))
        .collect();
    assert!(failed.is_empty(), "failed: {failed:#?}");
}

#[test]
fn next_prime_used_for_criterion_8_is_above_2_20() {
    assert!(next_prime_at_least((1 << 20) + 1) > 1 << 20);
}
