//! Seeded instance generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::modmath::next_prime_at_least;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `n` followed by `2n - 1` values.
    Egz,
    /// `p k` followed by `p - 1` nonzero residues.
    Lemma,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "egz" => Ok(Mode::Egz),
            "lemma" => Ok(Mode::Lemma),
            _ => Err(format!("unknown mode '{s}' (expected egz or lemma)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    Uniform,
    /// Values drawn from `d` distinct residues.
    FewDistinct(usize),
    /// `n - 1` copies of one value, the rest uniform.
    AdversarialEqual,
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "uniform" {
            return Ok(Distribution::Uniform);
        }
        if s == "adversarial-equal" {
            return Ok(Distribution::AdversarialEqual);
        }
        if let Some(d) = s.strip_prefix("few-distinct:") {
            return match d.parse::<usize>() {
                Ok(d) if d >= 1 => Ok(Distribution::FewDistinct(d)),
                _ => Err(format!("bad distinct count in '{s}'")),
            };
        }
        Err(format!(
            "unknown distribution '{s}' (expected uniform, few-distinct:D or adversarial-equal)"
        ))
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Uniform => f.write_str("uniform"),
            Distribution::FewDistinct(d) => write!(f, "few-distinct:{d}"),
            Distribution::AdversarialEqual => f.write_str("adversarial-equal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub mode: Mode,
    /// `n` in egz mode, the prime `p` in lemma mode.
    pub modulus: usize,
    /// Lemma target; 0 in egz mode.
    pub target: usize,
    pub values: Vec<i64>,
}

impl Instance {
    /// Text form read by `egz solve`.
    pub fn to_text(&self) -> String {
        let mut out = match self.mode {
            Mode::Egz => format!("{}\n", self.modulus),
            Mode::Lemma => format!("{} {}\n", self.modulus, self.target),
        };
        let body: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        out.push_str(&body.join(" "));
        out.push('\n');
        out
    }
}

/// Draws `count` values in `[lo, modulus)` following `dist`.
fn draw(
    rng: &mut ChaCha8Rng,
    count: usize,
    lo: usize,
    modulus: usize,
    dist: Distribution,
    n: usize,
) -> Vec<i64> {
    let span = modulus - lo;
    match dist {
        Distribution::Uniform => (0..count)
            .map(|_| rng.gen_range(lo..modulus) as i64)
            .collect(),
        Distribution::FewDistinct(d) => {
            let pool: Vec<usize> = rand::seq::index::sample(rng, span, d.min(span))
                .into_iter()
                .map(|x| x + lo)
                .collect();
            (0..count)
                .map(|_| *pool.choose(rng).expect("nonempty pool") as i64)
                .collect()
        }
        Distribution::AdversarialEqual => {
            let v = rng.gen_range(lo..modulus) as i64;
            let equal = n.saturating_sub(1).min(count);
            let mut values = vec![v; equal];
            values.extend((equal..count).map(|_| rng.gen_range(lo..modulus) as i64));
            values.shuffle(rng);
            values
        }
    }
}

/// Deterministic instance for `(mode, n, seed, dist)`.
///
/// Lemma mode rounds `n` up to the least prime `p >= n` and draws `p - 1`
/// nonzero residues and a target in `[0, p)`.
pub fn generate(mode: Mode, n: usize, seed: u64, dist: Distribution) -> Instance {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        Mode::Egz => Instance {
            mode,
            modulus: n,
            target: 0,
            values: draw(&mut rng, 2 * n - 1, 0, n, dist, n),
        },
        Mode::Lemma => {
            let p = next_prime_at_least(n as u64) as usize;
            let values = draw(&mut rng, p - 1, 1, p, dist, p);
            let target = rng.gen_range(0..p);
            Instance {
                mode,
                modulus: p,
                target,
                values,
            }
        }
    }
}
