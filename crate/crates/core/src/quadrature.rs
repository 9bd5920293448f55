//! Adaptive Gauss–Kronrod integration of log-scale integrands.
//!
//! Integrands are supplied as `ln f(x)`. Each panel is evaluated relative to
//! its own largest sample and panels are combined with log-sum-exp, so the
//! result `ln ∫ f` is representable even when `∫ f` under- or overflows f64.
//!
//! Panels use the 21-point Kronrod extension of the 10-point Gauss rule
//! (QUADPACK QK21) with the QUADPACK error heuristic. Infinite endpoints are
//! mapped onto `[0, 1)`:
//!
//! ```text
//! [a, +inf):  x = a + u / (1 − u),   dx = du / (1 − u)^2
//! (−inf, b]:  x = b − u / (1 − u),   dx = du / (1 − u)^2
//! ```
//!
//! and the real line is split at a breakpoint first. The panel with the
//! largest error estimate is bisected until the summed error meets
//! `max(rel_tol · I, abs_tol · peak)`, where `peak` is the largest integrand
//! value seen (in the mapped variable).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("invalid interval ({lower}, {upper}): need lower < upper")]
    InvalidInterval { lower: f64, upper: f64 },
    #[error("invalid quadrature settings: {0}")]
    InvalidSettings(&'static str),
    #[error("log-integrand is NaN at x = {x}")]
    NanIntegrand { x: f64 },
    #[error("integral over ({lower}, {upper}) vanishes numerically")]
    Vanishing { lower: f64, upper: f64 },
    #[error(
        "no convergence after {subdivisions} subdivisions: \
         ln(estimate) = {log_estimate}, ln(error bound) = {log_error}"
    )]
    NotConverged {
        log_estimate: f64,
        log_error: f64,
        subdivisions: usize,
    },
}

/// An integration region; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self, QuadratureError> {
        if lower.is_nan() || upper.is_nan() || !(lower < upper) {
            return Err(QuadratureError::InvalidInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn real_line() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn above(lower: f64) -> Result<Self, QuadratureError> {
        Self::new(lower, f64::INFINITY)
    }

    pub fn below(upper: f64) -> Result<Self, QuadratureError> {
        Self::new(f64::NEG_INFINITY, upper)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    pub fn is_real_line(&self) -> bool {
        self.lower == f64::NEG_INFINITY && self.upper == f64::INFINITY
    }

    /// Overlap of two intervals, `None` when it is empty or a single point.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lower.max(other.lower), self.upper.min(other.upper)).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    /// Absolute tolerance on the linear-scale integral, measured in units of
    /// the largest integrand value encountered.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(QuadratureError::InvalidSettings("rel_tol must be > 0"));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(QuadratureError::InvalidSettings("abs_tol must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadratureError::InvalidSettings(
                "max_subdivisions must be >= 1",
            ));
        }
        Ok(())
    }
}

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}`; `-inf` for an empty slice.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY || hi == f64::INFINITY {
        return hi;
    }
    hi + values.iter().map(|v| (v - hi).exp()).sum::<f64>().ln()
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `x = origin + u / (1 − u)`
    Upward { origin: f64 },
    /// `x = origin − u / (1 − u)`
    Downward { origin: f64 },
}

impl Map {
    fn log_integrand<F: Fn(f64) -> f64>(&self, f: &F, v: f64) -> (f64, f64) {
        match *self {
            Map::Identity => (v, f(v)),
            Map::Upward { origin } => {
                let w = 1.0 - v;
                let x = origin + v / w;
                (x, f(x) - 2.0 * w.ln())
            }
            Map::Downward { origin } => {
                let w = 1.0 - v;
                let x = origin - v / w;
                (x, f(x) - 2.0 * w.ln())
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    map: Map,
    lo: f64,
    hi: f64,
    log_value: f64,
    log_error: f64,
    log_peak: f64,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / resasc).powf(1.5);
        e = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        if floor > e {
            e = floor;
        }
    }
    e
}

fn eval_panel<F: Fn(f64) -> f64>(
    f: &F,
    map: Map,
    lo: f64,
    hi: f64,
) -> Result<Panel, QuadratureError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut logs = [0.0f64; 21];
    let mut idx = 0;
    for &node in XGK.iter().take(10) {
        for v in [center - half * node, center + half * node] {
            let (x, lf) = map.log_integrand(f, v);
            if lf.is_nan() {
                return Err(QuadratureError::NanIntegrand { x });
            }
            logs[idx] = lf;
            idx += 1;
        }
    }
    let (xc, lc) = map.log_integrand(f, center);
    if lc.is_nan() {
        return Err(QuadratureError::NanIntegrand { x: xc });
    }
    logs[20] = lc;

    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return Ok(Panel {
            map,
            lo,
            hi,
            log_value: f64::NEG_INFINITY,
            log_error: f64::NEG_INFINITY,
            log_peak: f64::NEG_INFINITY,
        });
    }
    if peak == f64::INFINITY {
        return Err(QuadratureError::NanIntegrand { x: xc });
    }

    let vals: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();
    let fc = vals[20];
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut resabs = res_k.abs();
    for j in 0..10 {
        let pair = vals[2 * j] + vals[2 * j + 1];
        res_k += WGK[j] * pair;
        resabs += WGK[j] * (vals[2 * j].abs() + vals[2 * j + 1].abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * pair;
        }
    }
    let mean = 0.5 * res_k;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((vals[2 * j] - mean).abs() + (vals[2 * j + 1] - mean).abs());
    }
    let err = rescale_error((res_k - res_g) * half, resabs * half, resasc * half);
    let value = res_k * half;

    Ok(Panel {
        map,
        lo,
        hi,
        log_value: if value > 0.0 { peak + value.ln() } else { f64::NEG_INFINITY },
        log_error: if err > 0.0 { peak + err.ln() } else { f64::NEG_INFINITY },
        log_peak: peak,
    })
}

/// Mapped pieces `(map, lo, hi)` covering `region` split at `points`.
fn segments(region: Interval, points: &[f64]) -> Vec<(Map, f64, f64)> {
    let mut cuts: Vec<f64> = points
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > region.lower && *p < region.upper)
        .collect();
    if region.is_real_line() && cuts.is_empty() {
        cuts.push(0.0);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut knots = Vec::with_capacity(cuts.len() + 2);
    knots.push(region.lower);
    knots.extend(cuts);
    knots.push(region.upper);

    knots
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            if a.is_finite() && b.is_finite() {
                (Map::Identity, a, b)
            } else if a.is_finite() {
                (Map::Upward { origin: a }, 0.0, 1.0)
            } else {
                (Map::Downward { origin: b }, 0.0, 1.0)
            }
        })
        .collect()
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    region: Interval,
    points: &[f64],
    settings: &QuadratureSettings,
) -> Result<f64, QuadratureError> {
    settings.validate()?;
    let mut panels = segments(region, points)
        .into_iter()
        .map(|(map, lo, hi)| eval_panel(f, map, lo, hi))
        .collect::<Result<Vec<_>, _>>()?;

    let ln_rel = settings.rel_tol.ln();
    let ln_abs = if settings.abs_tol > 0.0 {
        settings.abs_tol.ln()
    } else {
        f64::NEG_INFINITY
    };
    let mut scratch = Vec::with_capacity(panels.len());

    loop {
        scratch.clear();
        scratch.extend(panels.iter().map(|p| p.log_value));
        let log_total = log_sum_exp(&scratch);
        scratch.clear();
        scratch.extend(panels.iter().map(|p| p.log_error));
        let log_err = log_sum_exp(&scratch);
        let log_peak = panels
            .iter()
            .map(|p| p.log_peak)
            .fold(f64::NEG_INFINITY, f64::max);

        if log_peak == f64::NEG_INFINITY {
            return Err(QuadratureError::Vanishing {
                lower: region.lower,
                upper: region.upper,
            });
        }
        let log_tol = (ln_rel + log_total).max(ln_abs + log_peak);
        if log_err <= log_tol {
            if log_total == f64::NEG_INFINITY {
                return Err(QuadratureError::Vanishing {
                    lower: region.lower,
                    upper: region.upper,
                });
            }
            return Ok(log_total);
        }

        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.log_error.total_cmp(&b.1.log_error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.lo + p.hi);
        if panels.len() >= settings.max_subdivisions || mid <= p.lo || mid >= p.hi {
            return Err(QuadratureError::NotConverged {
                log_estimate: log_total,
                log_error: log_err,
                subdivisions: panels.len(),
            });
        }
        panels[worst] = eval_panel(f, p.map, p.lo, mid)?;
        panels.push(eval_panel(f, p.map, mid, p.hi)?);
    }
}

/// `ln ∫_region exp(log_f(x)) dx` with caller-supplied breakpoints.
///
/// Breakpoints outside the open region are ignored. Callers that know where
/// the integrand's mass sits (a mode, a scale) should pass it here.
pub fn integrate_log_with_points<F: Fn(f64) -> f64>(
    log_f: F,
    region: Interval,
    points: &[f64],
    settings: &QuadratureSettings,
) -> Result<f64, QuadratureError> {
    adapt(&log_f, region, points, settings)
}

/// `ln ∫_region exp(log_f(x)) dx`.
///
/// The mode of `log_f` is located first (coarse probe, then golden-section
/// refinement) and the region is pre-split around it at multiples of the
/// local curvature scale.
pub fn integrate_log<F: Fn(f64) -> f64>(
    log_f: F,
    region: Interval,
    settings: &QuadratureSettings,
) -> Result<f64, QuadratureError> {
    let seeds = probe_seeds(&log_f, region);
    adapt(&log_f, region, &seeds, settings)
}

fn probe_seeds<F: Fn(f64) -> f64>(f: &F, region: Interval) -> Vec<f64> {
    const PROBES: usize = 64;
    let to_x = |s: f64| -> f64 {
        // s in (0, 1)
        match (region.lower.is_finite(), region.upper.is_finite()) {
            (true, true) => region.lower + s * (region.upper - region.lower),
            (true, false) => region.lower + s / (1.0 - s),
            (false, true) => region.upper - (1.0 - s) / s,
            (false, false) => (std::f64::consts::PI * (s - 0.5)).tan(),
        }
    };
    let xs: Vec<f64> = (1..PROBES)
        .map(|i| to_x(i as f64 / PROBES as f64))
        .collect();
    let best = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (i, f(x)))
        .filter(|(_, v)| !v.is_nan())
        .max_by(|a, b| a.1.total_cmp(&b.1));
    let Some((i, best_val)) = best else {
        return Vec::new();
    };
    if best_val == f64::NEG_INFINITY {
        return Vec::new();
    }
    let lo = if i == 0 { xs[0].min(to_x(0.5 / PROBES as f64)) } else { xs[i - 1] };
    let hi = if i + 1 == xs.len() {
        xs[i].max(to_x(1.0 - 0.5 / PROBES as f64))
    } else {
        xs[i + 1]
    };
    let mode = locate_mode(f, lo, hi);
    let width = curvature_scale(f, mode).unwrap_or(0.25 * (hi - lo));
    let mut seeds = vec![mode];
    for k in [1.0, 4.0, 16.0, 64.0] {
        seeds.push(mode - k * width);
        seeds.push(mode + k * width);
    }
    seeds
}

/// `1 / sqrt(−f'')` at `x` by central differences, when the curvature is negative.
fn curvature_scale<F: Fn(f64) -> f64>(f: &F, x: f64) -> Option<f64> {
    let h = 1e-4 * x.abs().max(1e-2);
    let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (d2 < 0.0 && d2.is_finite()).then(|| 1.0 / (-d2).sqrt())
}

/// Maximizer of `f` on the bracket `[lower, upper]` by golden-section search.
///
/// Returns a local maximum; for unimodal `f` this is the mode.
pub fn locate_mode<F: Fn(f64) -> f64>(f: F, lower: f64, upper: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = if lower <= upper { (lower, upper) } else { (upper, lower) };
    let score = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = score(c);
    let mut fd = score(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (a.abs() + b.abs()).max(1e-12) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(d);
        }
    }
    0.5 * (a + b)
}
