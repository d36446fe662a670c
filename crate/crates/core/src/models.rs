//! Resonance conditions for the solvable models.
//!
//! Delta potentials on a line: in each gap the solution is
//! `a e^{i lambda x} + b e^{-i lambda x}`. Starting from a purely outgoing
//! wave on the left, `(a, b) = (0, 1)`, each delta at `x_j` with strength `c_j`
//! maps `(a, b)` through
//!
//! ```text
//! a' = a + g (a + b E^-2),   b' = b - g (a E^2 + b),   g = c_j / (2 i lambda),  E = e^{i lambda x_j}
//! ```
//!
//! and a resonance is a `lambda` at which the final incoming coefficient `b`
//! vanishes. For one delta this gives `1 + i c / (2 lambda)`.
//!
//! Delta shell of radius `R` and strength `V` on the plane: angular mode `m`
//! resonates where `1 + (i pi R V / 2) J_m(lambda R) H_m(lambda R) = 0`.

use crate::io::fmt_f64;
use crate::rootfind::{subdivide_and_locate, RootError, RootOptions, SearchBox};
use crate::scene::{DeltaCircleScene, DeltaLineScene, Scene};
use crate::specfun::{self, SpecfunError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

/// Largest angular mode accepted for the circle model.
pub const MAX_MODE: u32 = 20;
/// Required distance between a search box and `lambda = 0` (and the cut).
pub const ORIGIN_MARGIN: f64 = 0.1;
/// Width of the tiles a search box is cut into before root finding.
pub const TILE_WIDTH: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("resonance condition evaluated at lambda = 0")]
    ZeroFrequency,
    #[error("ContourThroughZero: {0}")]
    ContourThroughZero(String),
    #[error("search box comes within {ORIGIN_MARGIN} of the branch cut (-inf, 0]")]
    BranchCut,
    #[error("mode {0} above the cap {MAX_MODE}")]
    ModeOutOfRange(u32),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error("root finding failed: {0}")]
    Root(RootError),
    #[error("scene model `{0}` has no resonance solver")]
    Unsupported(&'static str),
    #[error("resonance table: {0}")]
    Table(String),
}

impl From<RootError> for ModelError {
    fn from(e: RootError) -> Self {
        match e {
            RootError::ZeroOnContour(z) => {
                ModelError::ContourThroughZero(format!("resonance condition vanishes on the contour near {z}"))
            }
            other => ModelError::Root(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resonance {
    pub lambda: Complex64,
    pub multiplicity: u32,
    /// `|f(lambda)|` for the function the root was polished on.
    pub residual: f64,
    pub model_tag: String,
    pub mode_index: Option<u32>,
    /// Bound or antibound state: a root on the imaginary axis, possibly with `Im > 0`.
    pub on_imaginary_axis: bool,
    /// Roots from separate cells closer than the cluster radius were merged.
    pub clustered: bool,
}

impl Resonance {
    /// A resonance not tied to a model, for synthetic sets.
    pub fn synthetic(lambda: Complex64, multiplicity: u32) -> Self {
        Self {
            lambda,
            multiplicity,
            residual: 0.0,
            model_tag: "synthetic".into(),
            mode_index: None,
            on_imaginary_axis: lambda.re.abs() < 1e-8,
            clustered: false,
        }
    }
}

fn transfer(positions: &[f64], strengths: &[f64], lambda: Complex64, cleared: bool) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let two_i_lambda = Complex64::new(0.0, 2.0) * lambda;
    let x0 = positions.first().copied().unwrap_or(0.0);
    let (mut a, mut b) = (Complex64::new(0.0, 0.0), one);
    for (&x, &c) in positions.iter().zip(strengths) {
        if c == 0.0 {
            continue;
        }
        // translation invariance keeps exponentials small
        let e2 = (Complex64::new(0.0, 2.0) * lambda * (x - x0)).exp();
        if cleared {
            let na = (two_i_lambda + c) * a + c * b / e2;
            let nb = -c * e2 * a + (two_i_lambda - c) * b;
            (a, b) = (na, nb);
        } else {
            let g = c / two_i_lambda;
            let na = a + g * (a + b / e2);
            let nb = b - g * (a * e2 + b);
            (a, b) = (na, nb);
        }
    }
    b
}

/// Resonance determinant multiplied by `(2 i lambda)^n` (`n` nonzero deltas);
/// entire in `lambda`.
pub fn delta_line_determinant(scene: &DeltaLineScene, lambda: Complex64) -> Result<Complex64, ModelError> {
    delta_line_determinant_raw(&scene.positions, &scene.strengths, lambda)
}

/// [`delta_line_determinant`] on bare arrays; zero strengths are allowed and skipped.
pub fn delta_line_determinant_raw(
    positions: &[f64],
    strengths: &[f64],
    lambda: Complex64,
) -> Result<Complex64, ModelError> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(ModelError::ZeroFrequency);
    }
    Ok(transfer(positions, strengths, lambda, true))
}

/// The determinant without cleared denominators, tending to 1 at high
/// frequency. Same zeros away from the origin; this is what the root finder uses.
pub fn delta_line_normalized(scene: &DeltaLineScene, lambda: Complex64) -> Result<Complex64, ModelError> {
    delta_line_normalized_raw(&scene.positions, &scene.strengths, lambda)
}

pub fn delta_line_normalized_raw(
    positions: &[f64],
    strengths: &[f64],
    lambda: Complex64,
) -> Result<Complex64, ModelError> {
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(ModelError::ZeroFrequency);
    }
    Ok(transfer(positions, strengths, lambda, false))
}

/// `F_m(lambda) = 1 + (i pi R V / 2) J_m(lambda R) H_m(lambda R)`.
pub fn delta_circle_mode_function(
    scene: &DeltaCircleScene,
    m: u32,
    lambda: Complex64,
) -> Result<Complex64, ModelError> {
    if m > MAX_MODE {
        return Err(ModelError::ModeOutOfRange(m));
    }
    let one = Complex64::new(1.0, 0.0);
    if scene.strength == 0.0 {
        return Ok(one);
    }
    let z = lambda * scene.radius;
    let j = specfun::bessel_j(m, z)?;
    let h = specfun::hankel1(m, z)?;
    let k = Complex64::new(0.0, std::f64::consts::PI * scene.radius * scene.strength / 2.0);
    Ok(one + k * j * h)
}

/// Which modes to solve and how to search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchSettings {
    pub bx: SearchBox,
    pub tol: f64,
    /// Circle model: modes `0..=max_mode`.
    pub max_mode: u32,
    pub tile_width: f64,
}

impl SearchSettings {
    pub fn new(bx: SearchBox, tol: f64) -> Self {
        Self {
            bx,
            tol,
            max_mode: MAX_MODE,
            tile_width: TILE_WIDTH,
        }
    }
}

fn distance_to_interval(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

fn check_origin(bx: &SearchBox) -> Result<(), ModelError> {
    let dx = distance_to_interval(0.0, bx.re_min, bx.re_max);
    let dy = distance_to_interval(0.0, bx.im_min, bx.im_max);
    if dx.hypot(dy) < ORIGIN_MARGIN {
        return Err(ModelError::ContourThroughZero(format!(
            "search box {:?} is within {ORIGIN_MARGIN} of lambda = 0",
            bx
        )));
    }
    Ok(())
}

fn check_cut(bx: &SearchBox) -> Result<(), ModelError> {
    let dx = bx.re_min.max(0.0);
    let dy = distance_to_interval(0.0, bx.im_min, bx.im_max);
    if dx.hypot(dy) < ORIGIN_MARGIN {
        return Err(ModelError::BranchCut);
    }
    Ok(())
}

// a function that cannot be evaluated poisons the contour; NaN makes the
// root finder stop with NonFinite instead of guessing
fn or_nan(v: Result<Complex64, ModelError>) -> Complex64 {
    v.unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

fn tiles_for(bx: &SearchBox, tile_width: f64) -> Vec<SearchBox> {
    let nx = (bx.width() / tile_width).ceil().max(1.0) as usize;
    bx.tiles(nx, 1)
}

fn solve_tiles<F>(f: &F, tiles: &[SearchBox], opts: &RootOptions) -> Result<Vec<(Complex64, u32, f64, bool)>, ModelError>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let per_tile: Vec<Result<_, RootError>> = tiles
        .par_iter()
        .map(|t| subdivide_and_locate(f, t, opts))
        .collect();
    let mut out = Vec::new();
    for r in per_tile {
        for root in r?.roots {
            out.push((root.z, root.multiplicity, root.residual, root.clustered));
        }
    }
    Ok(out)
}

fn domain_error(e: ModelError) -> ModelError {
    match e {
        ModelError::Root(RootError::NonFinite(z)) => ModelError::Specfun(SpecfunError::DomainExceeded { order: 0, z }),
        other => other,
    }
}

/// All resonances inside the box, sorted by `(Re, Im)` and, for the circle
/// model, by mode within ties.
pub fn find_resonances(scene: &Scene, settings: &SearchSettings) -> Result<Vec<Resonance>, ModelError> {
    check_origin(&settings.bx)?;
    let opts = RootOptions {
        tol: settings.tol,
        ..Default::default()
    };
    let tiles = tiles_for(&settings.bx, settings.tile_width);
    let mut out = Vec::new();
    match scene {
        Scene::DeltaLine(s) => {
            let f = |z: Complex64| or_nan(delta_line_normalized(s, z));
            for (z, m, res, clustered) in solve_tiles(&f, &tiles, &opts)? {
                out.push(Resonance {
                    lambda: z,
                    multiplicity: m,
                    residual: res,
                    model_tag: "delta_line".into(),
                    mode_index: None,
                    on_imaginary_axis: z.re.abs() < 1e-8,
                    clustered,
                });
            }
        }
        Scene::DeltaCircle(s) => {
            check_cut(&settings.bx)?;
            if settings.max_mode > MAX_MODE {
                return Err(ModelError::ModeOutOfRange(settings.max_mode));
            }
            // every corner must be evaluable before any work is spent
            for m in 0..=settings.max_mode {
                for c in settings.bx.corners() {
                    delta_circle_mode_function(s, m, c)?;
                }
            }
            let per_mode: Vec<Result<Vec<_>, ModelError>> = (0..=settings.max_mode)
                .into_par_iter()
                .map(|m| {
                    let f = |z: Complex64| or_nan(delta_circle_mode_function(s, m, z));
                    solve_tiles(&f, &tiles, &opts)
                        .map(|v| v.into_iter().map(|r| (m, r)).collect())
                        .map_err(domain_error)
                })
                .collect();
            for r in per_mode {
                for (mode, (z, m, res, clustered)) in r? {
                    out.push(Resonance {
                        lambda: z,
                        multiplicity: m,
                        residual: res,
                        model_tag: "delta_circle".into(),
                        mode_index: Some(mode),
                        on_imaginary_axis: z.re.abs() < 1e-8,
                        clustered,
                    });
                }
            }
        }
        other => return Err(ModelError::Unsupported(other.model_name())),
    }
    sort_resonances(&mut out);
    Ok(out)
}

pub fn sort_resonances(v: &mut [Resonance]) {
    v.sort_by(|a, b| {
        a.lambda
            .re
            .total_cmp(&b.lambda.re)
            .then(a.lambda.im.total_cmp(&b.lambda.im))
            .then(a.mode_index.cmp(&b.mode_index))
    });
}

/// Result of [`find_resonances_with_retries`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub resonances: Vec<Resonance>,
    pub seed: u64,
    pub attempts: usize,
    pub box_used: SearchBox,
}

pub const MAX_RETRIES: usize = 5;
pub const MAX_SHIFT: f64 = 1e-4;

/// Reruns [`find_resonances`] on boxes shifted by a seeded random offset of at
/// most `1e-4` when a contour passes through a resonance; at most five retries.
pub fn find_resonances_with_retries(
    scene: &Scene,
    settings: &SearchSettings,
    seed: u64,
) -> Result<SearchOutcome, ModelError> {
    // precondition failures are not retried
    check_origin(&settings.bx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = *settings;
    let mut attempt = 0;
    loop {
        match find_resonances(scene, &current) {
            Ok(resonances) => {
                return Ok(SearchOutcome {
                    resonances,
                    seed,
                    attempts: attempt + 1,
                    box_used: current.bx,
                })
            }
            Err(ModelError::ContourThroughZero(_)) | Err(ModelError::Root(RootError::ConservationViolated { .. }))
                if attempt < MAX_RETRIES =>
            {
                attempt += 1;
                current.bx = settings.bx.shifted(
                    rng.gen_range(-MAX_SHIFT..=MAX_SHIFT),
                    rng.gen_range(-MAX_SHIFT..=MAX_SHIFT),
                );
            }
            Err(e) => return Err(e),
        }
    }
}

/// Evaluates the function a resonance was polished on.
pub fn resonance_function(scene: &Scene, mode: Option<u32>, lambda: Complex64) -> Result<Complex64, ModelError> {
    match scene {
        Scene::DeltaLine(s) => delta_line_normalized(s, lambda),
        Scene::DeltaCircle(s) => delta_circle_mode_function(s, mode.unwrap_or(0), lambda),
        other => Err(ModelError::Unsupported(other.model_name())),
    }
}

// ---------------------------------------------------------------------------
// CSV

pub const RESONANCE_HEADER: [&str; 6] = ["model", "mode", "re_lambda", "im_lambda", "multiplicity", "residual"];

#[derive(Debug, Deserialize)]
struct ResonanceRow {
    model: String,
    mode: String,
    re_lambda: f64,
    im_lambda: f64,
    multiplicity: u32,
    residual: f64,
}

pub fn write_resonance_csv<W: std::io::Write>(out: W, resonances: &[Resonance]) -> Result<(), ModelError> {
    let table = |e: csv::Error| ModelError::Table(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESONANCE_HEADER).map_err(table)?;
    for r in resonances {
        w.write_record([
            r.model_tag.clone(),
            r.mode_index.map(|m| m.to_string()).unwrap_or_default(),
            fmt_f64(r.lambda.re),
            fmt_f64(r.lambda.im),
            r.multiplicity.to_string(),
            fmt_f64(r.residual),
        ])
        .map_err(table)?;
    }
    w.flush().map_err(|e| ModelError::Table(e.to_string()))
}

pub fn read_resonance_csv<R: std::io::Read>(input: R) -> Result<Vec<Resonance>, ModelError> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(|e| ModelError::Table(e.to_string()))?;
    if headers.iter().ne(RESONANCE_HEADER) {
        return Err(ModelError::Table(format!(
            "expected header {}, found {}",
            RESONANCE_HEADER.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for row in rd.deserialize::<ResonanceRow>() {
        let row = row.map_err(|e| ModelError::Table(e.to_string()))?;
        let mode_index = if row.mode.is_empty() {
            None
        } else {
            Some(row.mode.parse().map_err(|_| ModelError::Table(format!("bad mode `{}`", row.mode)))?)
        };
        let lambda = Complex64::new(row.re_lambda, row.im_lambda);
        out.push(Resonance {
            lambda,
            multiplicity: row.multiplicity,
            residual: row.residual,
            model_tag: row.model,
            mode_index,
            on_imaginary_axis: lambda.re.abs() < 1e-8,
            clustered: false,
        });
    }
    Ok(out)
}

pub fn read_resonance_file(path: &Path) -> Result<Vec<Resonance>, ModelError> {
    let f = std::fs::File::open(path).map_err(|e| ModelError::Table(format!("{}: {e}", path.display())))?;
    read_resonance_csv(f)
}
