//! Strip and band predictions, counting functions, slope fits, the
//! Poisson-type trace sum and the verification report.
//!
//! Widths are coefficients `w` of `log |Re lambda|`: a free region is
//! `Im lambda > -w log |Re lambda|`, a band of depth `w` is counted by
//! [`counting_function`].

use crate::models::Resonance;
use num_complex::Complex64;
use serde::ser::Serializer;
use serde::Serialize;
use thiserror::Error;

/// Minimum number of resonances for [`fit_log_strip`].
pub const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("smoothing schedule is empty")]
    EmptySchedule,
    #[error("schedule has no entry for N = {0}")]
    MissingEntry(f64),
    #[error("L must be positive, got {0}")]
    NonpositiveL(f64),
    #[error("D_max must be positive, got {0}")]
    NonpositiveDmax(f64),
    #[error("diameter must be positive, got {0}")]
    NonpositiveDiam(f64),
    #[error("{found} resonances in the fit window, need at least {needed}")]
    TooFewPoints { found: usize, needed: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Coefficient of `log |Re lambda|`, possibly the unbounded sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Width {
    Finite(f64),
    Infinite,
}

impl Width {
    pub fn value(self) -> f64 {
        match self {
            Width::Finite(w) => w,
            Width::Infinite => f64::INFINITY,
        }
    }

    fn from_f64(w: f64) -> Self {
        if w.is_infinite() {
            Width::Infinite
        } else {
            Width::Finite(w)
        }
    }
}

impl Serialize for Width {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Width::Finite(w) => s.serialize_f64(*w),
            Width::Infinite => s.serialize_str("inf"),
        }
    }
}

impl std::fmt::Display for Width {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Width::Finite(w) => write!(f, "{w}"),
            Width::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StripSource {
    Smoothing,
    Converse,
    ConicFree,
    ConicBand,
    DeltaObstacle,
}

impl std::str::FromStr for StripSource {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smoothing" => Ok(Self::Smoothing),
            "converse" => Ok(Self::Converse),
            "conic_free" => Ok(Self::ConicFree),
            "conic_band" => Ok(Self::ConicBand),
            "delta_obstacle" => Ok(Self::DeltaObstacle),
            other => Err(AnalysisError::InvalidInput(format!("unknown prediction source `{other}`"))),
        }
    }
}

/// Constants of the resolvent estimate; never determined here, kept so that
/// reports have a slot for externally fitted values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolventExponents {
    pub c: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripPrediction {
    pub width: Width,
    pub delta: f64,
    pub lambda0: Option<f64>,
    pub source: StripSource,
    /// Large-`N` limit of the width, when the source has one.
    pub asymptote: Option<Width>,
    /// `D_max` came from a capped enumeration, so the width is only an upper bound.
    pub upper_bound_on_width: bool,
    /// `D_plus` behind a band prediction.
    pub d_plus: Option<f64>,
    pub statement: Option<String>,
    pub resolvent_exponents: Option<ResolventExponents>,
    pub warnings: Vec<String>,
}

impl StripPrediction {
    fn new(width: f64, delta: f64, source: StripSource) -> Self {
        let mut warnings = Vec::new();
        let width = if width < 0.0 {
            warnings.push(format!("width {width} clamped to 0: delta too large"));
            Width::Finite(0.0)
        } else {
            Width::from_f64(width)
        };
        Self {
            width,
            delta,
            lambda0: None,
            source,
            asymptote: None,
            upper_bound_on_width: false,
            d_plus: None,
            statement: None,
            resolvent_exponents: None,
            warnings,
        }
    }

    pub fn clamped(&self) -> bool {
        !self.warnings.is_empty()
    }

    /// Same prediction with the width multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.width = match self.width {
            Width::Finite(w) => Width::Finite(w * factor),
            Width::Infinite => Width::Infinite,
        };
        out
    }
}

// ---------------------------------------------------------------------------
// smoothing schedules

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingSchedule {
    /// `(N, T_N)` pairs.
    pub entries: Vec<(f64, f64)>,
    pub r0: f64,
    pub r1: f64,
}

impl SmoothingSchedule {
    pub fn new(entries: Vec<(f64, f64)>, r0: f64, r1: f64) -> Result<Self, AnalysisError> {
        if entries.iter().any(|&(n, t)| !(n > 0.0 && t > 0.0 && n.is_finite() && t.is_finite())) {
            return Err(AnalysisError::InvalidInput("schedule entries must be positive".into()));
        }
        if !(r1 > r0) {
            return Err(AnalysisError::InvalidInput(format!("need R1 > R0, got R0 = {r0}, R1 = {r1}")));
        }
        Ok(Self { entries, r0, r1 })
    }

    pub fn time(&self, n: f64) -> Option<f64> {
        self.entries.iter().find(|e| (e.0 - n).abs() <= 1e-12 * n.max(1.0)).map(|e| e.1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarT {
    /// `inf T_N / N` over the entries.
    pub inf: f64,
    pub argmin: f64,
    /// Least-squares slope of `T_N` against `N`; needs two distinct `N`.
    pub limit_estimate: Option<f64>,
    /// `(N, M)` with `T_{N+M} > T_N + T_M`.
    pub subadditivity_violations: Vec<(f64, f64)>,
}

impl BarT {
    pub fn subadditive(&self) -> bool {
        self.subadditivity_violations.is_empty()
    }
}

pub fn bar_t(schedule: &SmoothingSchedule) -> Result<BarT, AnalysisError> {
    let e = &schedule.entries;
    let (argmin, inf) = e
        .iter()
        .map(|&(n, t)| (n, t / n))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(AnalysisError::EmptySchedule)?;
    let limit_estimate = least_squares(&e.to_vec()).map(|f| f.0);
    let mut violations = Vec::new();
    for (i, &(n, tn)) in e.iter().enumerate() {
        for &(m, tm) in &e[i..] {
            if let Some(tnm) = schedule.time(n + m) {
                if tnm > tn + tm + 1e-12 * (tn + tm) {
                    violations.push((n, m));
                }
            }
        }
    }
    Ok(BarT {
        inf,
        argmin,
        limit_estimate,
        subadditivity_violations: violations,
    })
}

/// `(slope, intercept, rms)` of a least-squares line, `None` without two distinct abscissae.
fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
    Some((slope, intercept, rms))
}

/// Width `1/T - delta`, with `T = 0` giving the unbounded sentinel.
pub fn strip_from_bar_t(tbar: f64, delta: f64, source: StripSource) -> StripPrediction {
    if tbar == 0.0 {
        return StripPrediction::new(f64::INFINITY, delta, source);
    }
    StripPrediction::new(1.0 / tbar - delta, delta, source)
}

/// Width `(N - 1) / T' - delta` with `T' = T_N + R0 + 2 R1 + 3`.
pub fn strip_from_smoothing(schedule: &SmoothingSchedule, n: f64, delta: f64) -> Result<StripPrediction, AnalysisError> {
    if !(delta > 0.0) {
        return Err(AnalysisError::InvalidInput("delta must be positive".into()));
    }
    let tn = schedule.time(n).ok_or(AnalysisError::MissingEntry(n))?;
    let t_prime = tn + schedule.r0 + 2.0 * schedule.r1 + 3.0;
    let mut p = StripPrediction::new((n - 1.0) / t_prime - delta, delta, StripSource::Smoothing);
    let tbar = bar_t(schedule)?.inf;
    p.asymptote = Some(strip_from_bar_t(tbar, delta, StripSource::Smoothing).width);
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConverseSmoothing {
    pub t_n: f64,
    pub bar_t: f64,
}

/// `T_N = (N + M + T + 2) / L`, with limit `T_N / N -> 1/L`.
pub fn smoothing_from_strip(l: f64, m: f64, t: f64, n: f64) -> Result<ConverseSmoothing, AnalysisError> {
    if !(l > 0.0) {
        return Err(AnalysisError::NonpositiveL(l));
    }
    Ok(ConverseSmoothing {
        t_n: (n + m + t + 2.0) / l,
        bar_t: 1.0 / l,
    })
}

/// Free strip `(d - 1) / (2 D_max) - delta`.
pub fn conic_strip(d: u32, d_max: f64, capped: bool, delta: f64) -> Result<StripPrediction, AnalysisError> {
    if d < 2 {
        return Err(AnalysisError::InvalidInput(format!("dimension {d} < 2")));
    }
    if !(d_max > 0.0) || !d_max.is_finite() {
        return Err(AnalysisError::NonpositiveDmax(d_max));
    }
    let mut p = StripPrediction::new((d as f64 - 1.0) / (2.0 * d_max) - delta, delta, StripSource::ConicFree);
    p.upper_bound_on_width = capped;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BandPrediction {
    Band(StripPrediction),
    /// No closed strictly diffractive geodesic with nonzero coefficient.
    EmptyBand,
}

/// Band of depth `(d - 1) / (2 D_plus) + delta`.
pub fn conic_band(d: u32, d_plus: f64, delta: f64) -> BandPrediction {
    if !(d_plus > 0.0 && d_plus.is_finite()) {
        return BandPrediction::EmptyBand;
    }
    let depth = (d as f64 - 1.0) / (2.0 * d_plus);
    let mut p = StripPrediction::new(depth + delta, delta, StripSource::ConicBand);
    p.d_plus = Some(d_plus);
    p.asymptote = Some(Width::Finite(depth));
    p.statement = Some(format!("-Im lambda_n / log Re lambda_n -> {depth}"));
    BandPrediction::Band(p)
}

/// Free strip `1 / diam - delta` for a delta potential supported on a set of that diameter.
pub fn delta_obstacle_strip(diam: f64, delta: f64) -> Result<StripPrediction, AnalysisError> {
    if !(diam > 0.0) {
        return Err(AnalysisError::NonpositiveDiam(diam));
    }
    Ok(StripPrediction::new(1.0 / diam - delta, delta, StripSource::DeltaObstacle))
}

// ---------------------------------------------------------------------------
// resonance sets

/// Resonances with `|Re| <= r` and `Im >= -rho log |Re|`, counted with multiplicity.
pub fn counting_function(resonances: &[Resonance], r: f64, rho: f64) -> u64 {
    resonances
        .iter()
        .filter(|x| {
            let re = x.lambda.re.abs();
            re <= r && x.lambda.im >= -rho * re.ln()
        })
        .map(|x| x.multiplicity as u64)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
    pub points: usize,
}

/// Least-squares fit of `-Im lambda` against `log Re lambda` over
/// resonances with `Re` in the window (each root counted once).
pub fn fit_log_strip(resonances: &[Resonance], window: (f64, f64)) -> Result<LogFit, AnalysisError> {
    if !(window.0 > 0.0 && window.1 > window.0) {
        return Err(AnalysisError::InvalidInput(format!("bad fit window {window:?}")));
    }
    let pts: Vec<(f64, f64)> = resonances
        .iter()
        .filter(|x| x.lambda.re >= window.0 && x.lambda.re <= window.1)
        .map(|x| (x.lambda.re.ln(), -x.lambda.im))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(AnalysisError::TooFewPoints {
            found: pts.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let (slope, intercept, rms) = least_squares(&pts).ok_or(AnalysisError::TooFewPoints {
        found: 1,
        needed: MIN_FIT_POINTS,
    })?;
    Ok(LogFit {
        slope,
        intercept,
        rms,
        points: pts.len(),
    })
}

/// Least damped resonance (largest `Im`) in each bin `[k h, (k + 1) h)` of
/// `Re > 0`; the string of resonances that bounds a free region.
pub fn leading_envelope(resonances: &[Resonance], bin_width: f64) -> Vec<Resonance> {
    let mut best: std::collections::BTreeMap<u64, &Resonance> = std::collections::BTreeMap::new();
    for r in resonances.iter().filter(|r| r.lambda.re > 0.0) {
        let bin = (r.lambda.re / bin_width).floor() as u64;
        let slot = best.entry(bin).or_insert(r);
        if r.lambda.im > slot.lambda.im {
            *slot = r;
        }
    }
    best.into_values().cloned().collect()
}

/// Upper half of the positive real parts present, `[(lo + hi) / 2, hi]`.
pub fn default_fit_window(resonances: &[Resonance]) -> Option<(f64, f64)> {
    let re: Vec<f64> = resonances.iter().map(|x| x.lambda.re).filter(|&r| r > 0.0).collect();
    let lo = re.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = re.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (hi > lo).then_some((0.5 * (lo + hi), hi))
}

/// `s(t) = sum m(lambda) e^{-i lambda t}` at each `t`.
pub fn poisson_trace(resonances: &[Resonance], t_grid: &[f64]) -> Vec<Complex64> {
    t_grid
        .iter()
        .map(|&t| {
            resonances
                .iter()
                .map(|x| x.multiplicity as f64 * (Complex64::new(0.0, -t) * x.lambda).exp())
                .sum()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// verification

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    NoData,
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub details: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violator {
    pub re: f64,
    pub im: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub fitted: Option<LogFit>,
    pub violators: Vec<Violator>,
    pub prediction: StripPrediction,
    pub lambda0: f64,
    /// Smallest onset for which the free-region check passes.
    pub smallest_passing_lambda0: f64,
    pub growth_exponent: Option<f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// The bound curve `-width log Re` (`-inf` for the unbounded sentinel).
pub fn bound_curve(width: Width, re: f64) -> f64 {
    match width {
        Width::Finite(w) => -w * re.ln(),
        Width::Infinite => f64::NEG_INFINITY,
    }
}

fn above_curve(width: Width, z: Complex64) -> bool {
    z.re > 1.0 && z.im > bound_curve(width, z.re)
}

pub const FREE_REGION_CHECK: &str = "free_region";
pub const BAND_CHECK: &str = "band";

/// Checks a resonance set against a prediction.
///
/// The free-region check looks for resonances with `Re > lambda0` above
/// `Im = -width log Re`. The band check is informational: it fits the growth
/// exponent of `r -> N(r, width)` on a logarithmic grid.
pub fn verify_band(resonances: &[Resonance], prediction: &StripPrediction, lambda0: f64) -> VerificationReport {
    let width = prediction.width;
    let violators: Vec<Violator> = resonances
        .iter()
        .filter(|x| x.lambda.re > lambda0 && above_curve(width, x.lambda))
        .map(|x| Violator {
            re: x.lambda.re,
            im: x.lambda.im,
            bound: bound_curve(width, x.lambda.re),
        })
        .collect();
    let smallest_passing_lambda0 = resonances
        .iter()
        .filter(|x| above_curve(width, x.lambda))
        .map(|x| x.lambda.re)
        .fold(0.0, f64::max);

    let mut checks = vec![Check {
        name: FREE_REGION_CHECK.into(),
        status: if violators.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail },
        details: format!(
            "{} resonances with Re > {lambda0} above Im = -{width} log Re; smallest passing lambda0 = {smallest_passing_lambda0}",
            violators.len()
        ),
    }];

    let r_max = resonances.iter().map(|x| x.lambda.re.abs()).fold(0.0, f64::max);
    let mut growth_exponent = None;
    let band = if r_max <= 1.0 {
        Check {
            name: BAND_CHECK.into(),
            status: CheckStatus::NoData,
            details: "no data".into(),
        }
    } else {
        let rho = width.value().min(1e6);
        let r_min = (r_max / 10.0).max(1.0 + 1e-9);
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|k| r_min * (r_max / r_min).powf(k as f64 / 9.0))
            .map(|r| (r, counting_function(resonances, r, rho)))
            .filter(|&(_, n)| n > 0)
            .map(|(r, n)| (r.ln(), (n as f64).ln()))
            .collect();
        growth_exponent = least_squares(&pts).map(|f| f.0);
        match growth_exponent {
            Some(p) => Check {
                name: BAND_CHECK.into(),
                status: CheckStatus::Info,
                details: format!("N(r, {width}) grows like r^{p:.4} for r in [{r_min:.4}, {r_max:.4}]"),
            },
            None => Check {
                name: BAND_CHECK.into(),
                status: CheckStatus::NoData,
                details: "no data".into(),
            },
        }
    };
    checks.push(band);

    let fitted = default_fit_window(resonances).and_then(|w| fit_log_strip(resonances, w).ok());
    VerificationReport {
        checks,
        fitted,
        violators,
        prediction: prediction.clone(),
        lambda0,
        smallest_passing_lambda0,
        growth_exponent,
    }
}
