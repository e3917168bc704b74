//! Seeded cross-checks of the closed forms against the brute-force oracle.
//!
//! Each suite draws its own channels from a ChaCha8 stream seeded by the
//! caller, so a report is reproducible from `(suite, samples, seed)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{ExtremalChannel, QubitChannel};
use crate::discrim::{
    classify, classify_channels, compute_params, max_distance_entangled, max_distance_single,
    success_probability,
};
use crate::error::{Error, Result};
use crate::oracle::{
    brute_max_entangled, brute_max_single, delta_entangled, helstrom, simulate, Probe,
    SearchConfig, SearchMode,
};

/// Agreement required between closed forms and the oracle.
pub const ORACLE_TOL: f64 = 1e-6;
/// Samples whose smallest classification margin is below this are skipped
/// by the tree suite.
pub const SLACK_FILTER: f64 = 1e-3;
/// Half-width of the Monte-Carlo acceptance band, in binomial sigmas.
pub const SIGMA_BAND: f64 = 4.0;
/// Trials per Monte-Carlo pair.
pub const MC_TRIALS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Lemma1,
    Lemma2,
    /// Quasi-extreme pairs never gain from entanglement. Library only.
    QuasiExtreme,
    Tree,
    Montecarlo,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma1" => Ok(Self::Lemma1),
            "lemma2" => Ok(Self::Lemma2),
            "tree" => Ok(Self::Tree),
            "montecarlo" => Ok(Self::Montecarlo),
            other => Err(Error::Config(format!("unknown verify mode `{other}`"))),
        }
    }
}

/// One checked sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub channel1: String,
    pub channel2: String,
    /// Closed-form (or predicted) value.
    pub expected: f64,
    /// Oracle (or empirical) value.
    pub observed: f64,
    /// The quantity compared against `tolerance`.
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub requested: usize,
    /// Samples actually checked; the tree suite skips near-boundary draws.
    pub checked: usize,
    pub tolerance: f64,
    pub max_deviation: f64,
    /// Largest `expected − observed`. For lemma2 this is how far the full
    /// search fell short of the closed form; it is informational only.
    pub max_shortfall: f64,
    pub failures: Vec<Sample>,
    pub passed: bool,
}

impl Report {
    fn from_samples(
        suite: Suite,
        seed: u64,
        requested: usize,
        tolerance: f64,
        s: Vec<Sample>,
    ) -> Self {
        let max_deviation = s.iter().fold(0.0f64, |m, x| m.max(x.deviation));
        let max_shortfall = s
            .iter()
            .fold(f64::NEG_INFINITY, |m, x| m.max(x.expected - x.observed))
            .max(0.0);
        let failures: Vec<Sample> = s.iter().filter(|x| !x.passed).cloned().collect();
        Self {
            suite,
            seed,
            requested,
            checked: s.len(),
            tolerance,
            max_deviation,
            max_shortfall,
            passed: failures.is_empty(),
            failures,
        }
    }
}

pub fn random_extremal<R: Rng>(rng: &mut R) -> ExtremalChannel {
    ExtremalChannel::new(rng.gen_range(0.0..=PI), rng.gen_range(0.0..=PI))
        .expect("angles drawn in range")
}

/// Extremal with `sin θ = sin φ`; picks `θ = φ` or `θ = π − φ` evenly.
pub fn random_quasi_extreme<R: Rng>(rng: &mut R) -> ExtremalChannel {
    let phi = rng.gen_range(0.0..=PI);
    let theta = if rng.gen::<bool>() { phi } else { PI - phi };
    ExtremalChannel::new(phi, theta).expect("angles drawn in range")
}

/// A mixture of two random extremal maps with uniform weight.
pub fn random_mixture<R: Rng>(rng: &mut R) -> QubitChannel {
    let lambda = rng.gen_range(0.0..=1.0);
    QubitChannel::mixture(lambda, random_extremal(rng), random_extremal(rng))
        .expect("weight drawn in range")
}

/// Extremal or mixture with equal odds.
pub fn random_channel<R: Rng>(rng: &mut R) -> QubitChannel {
    if rng.gen::<bool>() {
        random_mixture(rng)
    } else {
        QubitChannel::from(random_extremal(rng))
    }
}

fn pairs<F>(n: usize, seed: u64, mut draw: F) -> Vec<(QubitChannel, QubitChannel)>
where
    F: FnMut(&mut ChaCha8Rng) -> QubitChannel,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

fn sample(
    c1: &QubitChannel,
    c2: &QubitChannel,
    expected: f64,
    observed: f64,
    deviation: f64,
    tol: f64,
) -> Sample {
    Sample {
        channel1: c1.literal(),
        channel2: c2.literal(),
        expected,
        observed,
        deviation,
        passed: deviation <= tol,
    }
}

/// Closed-form single-probe maximum against the Bloch-sphere search.
pub fn lemma1(samples: usize, seed: u64, cfg: &SearchConfig) -> Result<Report> {
    let mut out = Vec::with_capacity(samples);
    for (c1, c2) in pairs(samples, seed, |r| random_extremal(r).into()) {
        let closed = max_distance_single(&compute_params(&c1, &c2)).value;
        let brute = brute_max_single(&c1, &c2, cfg)?.distance.value;
        out.push(sample(
            &c1,
            &c2,
            closed,
            brute,
            (closed - brute).abs(),
            ORACLE_TOL,
        ));
    }
    Ok(Report::from_samples(
        Suite::Lemma1,
        seed,
        samples,
        ORACLE_TOL,
        out,
    ))
}

/// Closed-form entangled maximum against the Schmidt-probe search, and the
/// Schmidt search against the search over all two-qubit probes.
pub fn lemma2(samples: usize, seed: u64, cfg: &SearchConfig) -> Result<Report> {
    let mut out = Vec::with_capacity(samples);
    for (c1, c2) in pairs(samples, seed, |r| random_extremal(r).into()) {
        let closed = max_distance_entangled(&compute_params(&c1, &c2)).value;
        let restricted = brute_max_entangled(&c1, &c2, cfg, SearchMode::Restricted)?
            .distance
            .value;
        let full = brute_max_entangled(&c1, &c2, cfg, SearchMode::Full)?
            .distance
            .value;
        // `full` is reported as observed; the deviation covers both checks.
        let deviation = (closed - restricted).abs().max(full - restricted);
        out.push(sample(&c1, &c2, closed, full, deviation, ORACLE_TOL));
    }
    Ok(Report::from_samples(
        Suite::Lemma2,
        seed,
        samples,
        ORACLE_TOL,
        out,
    ))
}

/// Entangled minus single oracle maxima for quasi-extreme pairs, searching
/// all two-qubit probes.
pub fn quasi_extreme(samples: usize, seed: u64, cfg: &SearchConfig) -> Result<Report> {
    let mut out = Vec::with_capacity(samples);
    for (c1, c2) in pairs(samples, seed, |r| random_quasi_extreme(r).into()) {
        let single = brute_max_single(&c1, &c2, cfg)?.distance.value;
        let ent = brute_max_entangled(&c1, &c2, cfg, SearchMode::Full)?
            .distance
            .value;
        out.push(sample(&c1, &c2, single, ent, ent - single, ORACLE_TOL));
    }
    Ok(Report::from_samples(
        Suite::QuasiExtreme,
        seed,
        samples,
        ORACLE_TOL,
        out,
    ))
}

/// Classifier verdicts against the oracle gap, skipping draws whose
/// smallest margin is under [`SLACK_FILTER`]. A sample's deviation is 0 on
/// agreement and 1 otherwise.
pub fn tree(samples: usize, seed: u64, cfg: &SearchConfig) -> Result<Report> {
    let mut out = Vec::with_capacity(samples);
    for (c1, c2) in pairs(samples, seed, random_channel) {
        let verdict = classify_channels(&c1, &c2);
        if verdict.min_abs_margin() < SLACK_FILTER {
            continue;
        }
        let single = brute_max_single(&c1, &c2, cfg)?.distance.value;
        let ent = brute_max_entangled(&c1, &c2, cfg, SearchMode::Restricted)?
            .distance
            .value;
        let gap = ent - single;
        let agree = verdict.useful == (gap > ORACLE_TOL);
        let deviation = if agree { 0.0 } else { 1.0 };
        out.push(sample(
            &c1,
            &c2,
            f64::from(u8::from(verdict.useful)),
            gap,
            deviation,
            0.5,
        ));
    }
    Ok(Report::from_samples(Suite::Tree, seed, samples, 0.5, out))
}

/// First pair in a seeded stream whose classification is useful, clear of
/// the boundary, with a closed-form gap of at least `min_gap`.
pub fn find_useful_pair(
    seed: u64,
    min_gap: f64,
    max_draws: usize,
) -> Option<(QubitChannel, QubitChannel)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_draws {
        let c1 = random_channel(&mut rng);
        let c2 = random_channel(&mut rng);
        let p = compute_params(&c1, &c2);
        let verdict = classify(&p);
        let gap = max_distance_entangled(&p).value - max_distance_single(&p).value;
        if verdict.useful && verdict.min_abs_margin() >= SLACK_FILTER && gap >= min_gap {
            return Some((c1, c2));
        }
    }
    None
}

/// The fixed Monte-Carlo pairs: identity vs full damping, two damping maps,
/// and the first useful pair from `seed`.
pub fn montecarlo_pairs(seed: u64) -> Result<Vec<(QubitChannel, QubitChannel)>> {
    let useful = find_useful_pair(seed, 0.05, 100_000).ok_or(Error::Degenerate(
        "no useful pair found in the seeded stream",
    ))?;
    Ok(vec![
        (
            QubitChannel::identity(),
            QubitChannel::amplitude_damping(PI / 2.0)?,
        ),
        (
            QubitChannel::extremal(PI / 3.0, 0.0)?,
            QubitChannel::extremal(PI / 6.0, 0.0)?,
        ),
        useful,
    ])
}

/// Empirical Helstrom success with the oracle's entangled probe against
/// `(1 + D/2)/2`, with `D` the closed-form entangled maximum. Deviation is
/// in binomial sigmas; a zero-variance prediction must match exactly.
pub fn montecarlo(
    pairs: &[(QubitChannel, QubitChannel)],
    trials: u64,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<Report> {
    let mut out = Vec::with_capacity(pairs.len());
    for (k, (c1, c2)) in pairs.iter().enumerate() {
        let predicted = success_probability(
            max_distance_entangled(&compute_params(c1, c2))
                .value
                .min(2.0),
        )?;
        let empirical = run_optimal(c1, c2, trials, seed.wrapping_add(k as u64), cfg)?;
        let sigma = (predicted * (1.0 - predicted) / trials as f64).sqrt();
        let deviation = if sigma > 0.0 {
            (empirical - predicted).abs() / sigma
        } else if (empirical - predicted).abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        out.push(sample(c1, c2, predicted, empirical, deviation, SIGMA_BAND));
    }
    Ok(Report::from_samples(
        Suite::Montecarlo,
        seed,
        pairs.len(),
        SIGMA_BAND,
        out,
    ))
}

/// Simulated success of the oracle's best entangled probe with its
/// Helstrom measurement.
pub fn run_optimal(
    c1: &QubitChannel,
    c2: &QubitChannel,
    trials: u64,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<f64> {
    let best = brute_max_entangled(c1, c2, cfg, SearchMode::Restricted)?;
    let Probe::Entangled(psi) = best.probe else {
        unreachable!("entangled search returns an entangled probe")
    };
    let m = helstrom(&delta_entangled(c1, c2, &psi));
    simulate(c1, c2, &best.probe, &m, trials, seed)
}

/// Runs one suite with its default sample source.
pub fn run(suite: Suite, samples: usize, seed: u64, cfg: &SearchConfig) -> Result<Report> {
    match suite {
        Suite::Lemma1 => lemma1(samples, seed, cfg),
        Suite::Lemma2 => lemma2(samples, seed, cfg),
        Suite::QuasiExtreme => quasi_extreme(samples, seed, cfg),
        Suite::Tree => tree(samples, seed, cfg),
        Suite::Montecarlo => {
            let pairs = montecarlo_pairs(seed)?;
            let n = samples.min(pairs.len());
            montecarlo(&pairs[..n], MC_TRIALS, seed, cfg)
        }
    }
}
