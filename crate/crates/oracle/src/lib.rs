//! Brute-force reference values for testing `medbf`.
//!
//! Nothing here shares numerical code with the engine. The noncentral t
//! density is a trapezoid sum over the chi-square scale mixture, and every
//! integral over δ is a trapezoid sum on a fixed grid uniform in
//! `θ = atan(δ/r)`. Under that map the Cauchy(0, r) prior times the Jacobian
//! is the constant `1/π`, so prior masses are exact and each region
//! integral is `(1/π) ∫ L(r tan θ) dθ`.
//!
//! Regions are written in the original orientation of δ: for
//! `Direction::Low` the non-inferiority split sits at `+nim`, the
//! one-sided superiority alternative is `δ < 0`, and the equivalence
//! interval `(L, U)` on the benefit scale becomes `(−U, −L)`.

use std::f64::consts::{FRAC_PI_2, PI};

use medbf::datamodel::DerivedStats;
use medbf::engine::{Alternative, CauchyPrior, Design, Direction, TestSpec};
use statrs::function::gamma::ln_gamma;

/// Fixed trapezoid grid over δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Integration range; infinite ends are allowed.
    pub span: (f64, f64),
    /// Nodes per region; odd and at least 100 001.
    pub nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            span: (f64::NEG_INFINITY, f64::INFINITY),
            nodes: 1_000_001,
        }
    }
}

impl GridSpec {
    pub const MIN_NODES: usize = 100_001;

    pub fn with_nodes(nodes: usize) -> Self {
        Self {
            nodes,
            ..Self::default()
        }
    }

    /// Cauchy(0, r) mass inside the span.
    pub fn prior_coverage(&self, scale: f64) -> f64 {
        (theta(self.span.1, scale) - theta(self.span.0, scale)) / PI
    }

    fn check(&self, scale: f64) {
        assert!(
            self.nodes % 2 == 1 && self.nodes >= Self::MIN_NODES,
            "grid nodes must be odd and >= {}, got {}",
            Self::MIN_NODES,
            self.nodes
        );
        assert!(
            self.prior_coverage(scale) >= 1.0 - 1e-10,
            "grid span {:?} covers too little prior mass",
            self.span
        );
    }
}

fn theta(delta: f64, scale: f64) -> f64 {
    if delta == f64::INFINITY {
        FRAC_PI_2
    } else if delta == f64::NEG_INFINITY {
        -FRAC_PI_2
    } else {
        (delta / scale).atan()
    }
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Noncentral t density with `df` degrees of freedom, integrated over the
/// chi scale.
///
/// With `s = √(V/ν)`, `V ~ χ²_ν` and `u = ln s`,
/// `f(t) = ∫ exp[(ν+1)u − (t eᵘ − λ)²/2 − ν e²ᵘ/2 + C] du`.
#[derive(Debug, Clone, Copy)]
pub struct MixtureT {
    df: f64,
    c: f64,
}

impl MixtureT {
    pub fn new(df: f64) -> Self {
        assert!(df > 0.0 && df.is_finite(), "df must be positive, got {df}");
        let nu = df;
        let c = -0.5 * (2.0 * PI).ln() + 0.5 * nu * (0.5 * nu).ln() + 2f64.ln() - ln_gamma(0.5 * nu);
        Self { df, c }
    }

    /// `steps_per_sigma` sets the node density relative to the width of the
    /// integrand's peak in `u`.
    pub fn log_density(&self, t: f64, ncp: f64, steps_per_sigma: f64) -> f64 {
        assert!(t.is_finite() && ncp.is_finite(), "t = {t}, ncp = {ncp}");
        let nu = self.df;
        let g = |u: f64| {
            let s = u.exp();
            let z = t * s - ncp;
            (nu + 1.0) * u - 0.5 * z * z - 0.5 * nu * s * s
        };

        // stationary point of g: (ν + t²)s² − tλ s − (ν + 1) = 0
        let a = nu + t * t;
        let b = t * ncp;
        let disc = (b * b + 4.0 * a * (nu + 1.0)).sqrt();
        let s_star = if b >= 0.0 {
            (b + disc) / (2.0 * a)
        } else {
            2.0 * (nu + 1.0) / (disc - b)
        };
        let u_star = s_star.ln();
        let sigma = 1.0 / (a * s_star * s_star + nu + 1.0).sqrt();
        let h = sigma / steps_per_sigma;

        // g is unimodal, so the peak bounds every node
        let peak = g(u_star);
        let mut sum = 1.0;
        for dir in [-1.0, 1.0] {
            let mut k = 1.0;
            loop {
                let v = g(u_star + dir * k * h) - peak;
                sum += v.exp();
                if v < -40.0 || k > 1e7 {
                    break;
                }
                k += 1.0;
            }
        }
        peak + self.c + sum.ln() + h.ln()
    }
}

/// Log noncentral t density by trapezoid integration over the chi scale;
/// see [`MixtureT`].
pub fn mixture_log_density_with(t: f64, df: f64, ncp: f64, steps_per_sigma: f64) -> f64 {
    MixtureT::new(df).log_density(t, ncp, steps_per_sigma)
}

/// [`mixture_log_density_with`] at four nodes per peak width.
pub fn mixture_log_density(t: f64, df: f64, ncp: f64) -> f64 {
    mixture_log_density_with(t, df, ncp, 4.0)
}

/// Mixture node density inside grid integrals; trapezoid error on the
/// mixture is below 1e-9 for df >= 3.
const GRID_STEPS_PER_SIGMA: f64 = 2.0;

struct Likelihood {
    t: f64,
    df: f64,
    sqrt_n: f64,
    mixture: MixtureT,
}

impl Likelihood {
    fn new(stats: &DerivedStats) -> Self {
        let df = stats.n_x + stats.n_y - 2.0;
        Self {
            t: stats.t_obs,
            df,
            sqrt_n: (stats.n_x * stats.n_y / (stats.n_x + stats.n_y)).sqrt(),
            mixture: MixtureT::new(df),
        }
    }

    fn log_at(&self, delta: f64) -> f64 {
        if !delta.is_finite() {
            return f64::NEG_INFINITY;
        }
        self.mixture.log_density(self.t, delta * self.sqrt_n, GRID_STEPS_PER_SIGMA)
    }
}

/// `ln ∫_a^b L(δ) Cauchy(δ; r) dδ` on `nodes` points uniform in θ.
fn ln_region(lik: &Likelihood, scale: f64, a: f64, b: f64, nodes: usize) -> f64 {
    let (ta, tb) = (theta(a, scale), theta(b, scale));
    let h = (tb - ta) / (nodes - 1) as f64;
    let logs: Vec<f64> = (0..nodes)
        .map(|i| {
            let th = if i == nodes - 1 { tb } else { ta + i as f64 * h };
            let delta = if th.abs() == FRAC_PI_2 {
                th.signum() * f64::INFINITY
            } else {
                scale * th.tan()
            };
            let w = if i == 0 || i == nodes - 1 { 0.5f64.ln() } else { 0.0 };
            lik.log_at(delta) + w
        })
        .collect();
    log_sum_exp(&logs) + h.ln() - PI.ln()
}

fn prior_mass(scale: f64, a: f64, b: f64) -> f64 {
    (theta(b, scale) - theta(a, scale)) / PI
}

/// Region-odds log BF `ln{[m(A)/P(A)] / [m(B)/P(B)]}` with each side a union
/// of intervals.
fn ln_odds(lik: &Likelihood, scale: f64, num: &[(f64, f64)], den: &[(f64, f64)], grid: &GridSpec) -> f64 {
    let side = |parts: &[(f64, f64)]| {
        let (lo, hi) = grid.span;
        let clipped: Vec<(f64, f64)> = parts
            .iter()
            .map(|&(a, b)| (a.max(lo), b.min(hi)))
            .filter(|(a, b)| a < b)
            .collect();
        let ln_m = log_sum_exp(
            &clipped
                .iter()
                .map(|&(a, b)| ln_region(lik, scale, a, b, grid.nodes))
                .collect::<Vec<_>>(),
        );
        let p: f64 = parts.iter().map(|&(a, b)| prior_mass(scale, a, b)).sum();
        ln_m - p.ln()
    };
    side(num) - side(den)
}

fn standardized(value: f64, is_std: bool, stats: &DerivedStats) -> f64 {
    if is_std {
        value
    } else {
        value / stats.sd_pooled
    }
}

/// Natural log of the Bayes factor in the orientation the engine reports
/// (`BF10` for superiority and non-inferiority, `BF01` for equivalence).
pub fn grid_log_bf(stats: &DerivedStats, prior: &CauchyPrior, spec: &TestSpec, grid: &GridSpec) -> f64 {
    let r = prior.scale();
    grid.check(r);
    let lik = Likelihood::new(stats);
    let ninf = f64::NEG_INFINITY;
    let inf = f64::INFINITY;
    let low = spec.direction == Direction::Low;

    match spec.design {
        Design::Superiority { alternative } => {
            let ln_m0 = mixture_log_density(lik.t, lik.df, 0.0);
            let (a, b) = match (alternative, low) {
                (Alternative::TwoSided, _) => (ninf, inf),
                (Alternative::OneSided, false) => (0.0, inf),
                (Alternative::OneSided, true) => (ninf, 0.0),
            };
            let (a, b) = (a.max(grid.span.0), b.min(grid.span.1));
            ln_region(&lik, r, a, b, grid.nodes) - prior_mass(r, a, b).ln() - ln_m0
        }
        Design::NonInferiority { margin } => {
            let nim = standardized(margin.value, margin.standardized, stats);
            if low {
                ln_odds(&lik, r, &[(ninf, nim)], &[(nim, inf)], grid)
            } else {
                ln_odds(&lik, r, &[(-nim, inf)], &[(ninf, -nim)], grid)
            }
        }
        Design::Equivalence {
            lower,
            upper,
            standardized: is_std,
        } => {
            let lo = standardized(lower, is_std, stats);
            let hi = standardized(upper, is_std, stats);
            if lo == 0.0 && hi == 0.0 {
                let ln_evidence = ln_region(&lik, r, grid.span.0, grid.span.1, grid.nodes)
                    - grid.prior_coverage(r).ln();
                return lik.log_at(0.0) - ln_evidence;
            }
            let (lo, hi) = if low { (-hi, -lo) } else { (lo, hi) };
            ln_odds(&lik, r, &[(lo, hi)], &[(ninf, lo), (hi, inf)], grid)
        }
    }
}

pub fn grid_bf(stats: &DerivedStats, prior: &CauchyPrior, spec: &TestSpec, grid: &GridSpec) -> f64 {
    grid_log_bf(stats, prior, spec, grid).exp()
}

/// Savage–Dickey `BF01` at `delta0` from a finite difference of the grid
/// posterior CDF: `[P(δ0 ± ε | D) / 2ε] / prior(δ0)`.
pub fn grid_savage_dickey(stats: &DerivedStats, prior: &CauchyPrior, delta0: f64, eps: f64, grid: &GridSpec) -> f64 {
    let r = prior.scale();
    grid.check(r);
    let lik = Likelihood::new(stats);
    let ln_evidence = ln_region(&lik, r, grid.span.0, grid.span.1, grid.nodes) - grid.prior_coverage(r).ln();
    let ln_window = ln_region(&lik, r, delta0 - eps, delta0 + eps, 2001);
    let post_density = (ln_window - ln_evidence).exp() / (2.0 * eps);
    let z = delta0 / r;
    let prior_density = 1.0 / (PI * r * (1.0 + z * z));
    post_density / prior_density
}

/// Argmax of the unnormalized posterior on `nodes` points uniform over `[lo, hi]`.
pub fn grid_posterior_mode(stats: &DerivedStats, prior: &CauchyPrior, lo: f64, hi: f64, nodes: usize) -> f64 {
    assert!(lo < hi && nodes >= 2);
    let r = prior.scale();
    let lik = Likelihood::new(stats);
    let h = (hi - lo) / (nodes - 1) as f64;
    let mut best = (f64::NEG_INFINITY, lo);
    for i in 0..nodes {
        let d = lo + i as f64 * h;
        let v = lik.log_at(d) - (1.0 + (d / r).powi(2)).ln();
        if v > best.0 {
            best = (v, d);
        }
    }
    best.1
}
