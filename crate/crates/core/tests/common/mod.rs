#![allow(dead_code)]

use medbf::datamodel::{derive_stats, DerivedStats, RawGroups, SummaryMoments};
use medbf::engine::{Alternative, Direction, TestSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|BF_a / BF_b − 1|` from two log Bayes factors.
pub fn rel_log(a: f64, b: f64) -> f64 {
    (a - b).exp_m1().abs()
}

pub fn moments(n_x: usize, n_y: usize, mean_x: f64, mean_y: f64, sd_x: f64, sd_y: f64) -> SummaryMoments {
    SummaryMoments::new(n_x, n_y, mean_x, mean_y, sd_x, sd_y).unwrap()
}

pub fn stats_of(m: &SummaryMoments) -> DerivedStats {
    derive_stats(&(*m).into()).unwrap()
}

/// Summary statistics with group sizes in `n_range` and a standardized
/// difference in `[-1.2, 1.2]`.
pub fn random_moments(rng: &mut impl Rng, n_lo: usize, n_hi: usize) -> SummaryMoments {
    let n_x = rng.random_range(n_lo..=n_hi);
    let n_y = rng.random_range(n_lo..=n_hi);
    let sd_x = rng.random_range(0.5..2.0);
    let sd_y = rng.random_range(0.5..2.0);
    let mean_x = rng.random_range(-1.0..1.0);
    let d = rng.random_range(-1.2..1.2);
    moments(n_x, n_y, mean_x, mean_x + d * 0.5 * (sd_x + sd_y), sd_x, sd_y)
}

pub fn random_raw(rng: &mut impl Rng, n_lo: usize, n_hi: usize) -> RawGroups {
    let n_x = rng.random_range(n_lo..=n_hi);
    let n_y = rng.random_range(n_lo..=n_hi);
    let shift = rng.random_range(-1.0..1.0);
    let sd = rng.random_range(0.5..2.0);
    let gx = Normal::new(0.0, sd).unwrap();
    let gy = Normal::new(shift, sd).unwrap();
    let x = (0..n_x).map(|_| gx.sample(rng)).collect();
    let y = (0..n_y).map(|_| gy.sample(rng)).collect();
    RawGroups::new(x, y).unwrap()
}

pub fn random_scale(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.2..2.0)
}

pub fn random_direction(rng: &mut impl Rng) -> Direction {
    if rng.random_bool(0.5) {
        Direction::High
    } else {
        Direction::Low
    }
}

/// One spec of each design with random margins, direction and scale.
/// Unstandardized margins are drawn in units of `sd`.
pub fn random_specs(rng: &mut impl Rng, sd: f64) -> [TestSpec; 3] {
    let r = random_scale(rng);
    let alt = if rng.random_bool(0.5) {
        Alternative::OneSided
    } else {
        Alternative::TwoSided
    };
    let std_margin = rng.random_bool(0.5);
    let unit = if std_margin { 1.0 } else { sd };
    let nim = rng.random_range(0.05..1.0) * unit;
    let std_interval = rng.random_bool(0.5);
    let unit = if std_interval { 1.0 } else { sd };
    let equiv = if rng.random_bool(0.1) {
        TestSpec::point_equivalence()
    } else {
        let lo = -rng.random_range(0.05..0.8) * unit;
        let hi = rng.random_range(0.05..0.8) * unit;
        TestSpec::equivalence(lo, hi, std_interval)
    };
    [
        TestSpec::superiority(alt),
        TestSpec::non_inferiority(nim, std_margin),
        equiv,
    ]
    .map(|s| s.with_prior_scale(r).with_direction(random_direction(rng)))
}

pub fn sleep_study_args() -> Vec<&'static str> {
    vec![
        "medbf",
        "infer",
        "--n-x",
        "193",
        "--n-y",
        "205",
        "--mean-x",
        "4.7",
        "--mean-y",
        "4.8",
        "--ci-margin",
        "0.19",
        "--ci-level",
        "0.95",
        "--ni-margin",
        "1",
        "--direction",
        "low",
    ]
}

/// Run the CLI in-process, returning (status, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = medbf::cli::parse_and_run(args.iter().copied(), &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}
