//! Command-line front end: `geodesics`, `resonances`, `verify` and `trace`.
//!
//! Exit codes: 0 success, 1 verification failed, 2 bad input (scene
//! invariants, missing or unreadable files, usage), 3 numerical failure.
//! Every file written gets a `<file>.manifest.json` next to it recording the
//! command and parameters; reruns with the same manifest give identical bytes.

use crate::analysis::{self, BandPrediction, StripPrediction, StripSource};
use crate::geodesics::{self, GeodesicError, DEFAULT_REFLECTION_CAP};
use crate::io::fmt_f64;
use crate::models::{self, ModelError, SearchSettings};
use crate::rootfind::SearchBox;
use crate::scene::{self, Scene, SceneError};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable overriding the worker pool size.
pub const THREADS_ENV: &str = "CONRES_THREADS";

#[derive(Debug, Parser)]
#[command(name = "conres", version, about = "Resonance strips and bands: geometry, solvable models, verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cone-to-cone geodesics of a polygon or cone-surface scene, with D_max and D_plus.
    Geodesics {
        scene: PathBuf,
        #[arg(long, default_value_t = DEFAULT_REFLECTION_CAP)]
        max_reflections: usize,
        /// Segment table; only the summary is printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resonances of a delta_line or delta_circle scene inside a box.
    Resonances {
        scene: PathBuf,
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true, required = true)]
        re: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true, required = true)]
        im: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Circle model: solve modes 0..=MODES.
        #[arg(long, default_value_t = models::MAX_MODE)]
        modes: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Resonance table; written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks a resonance table against a predicted strip or band.
    Verify {
        scene: PathBuf,
        resonances: PathBuf,
        /// delta_obstacle, conic_free or conic_band.
        #[arg(long)]
        prediction: String,
        /// Multiplies the predicted width.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda0: f64,
        #[arg(long, default_value_t = DEFAULT_REFLECTION_CAP)]
        max_reflections: usize,
        /// JSON report; written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot data with columns re,neg_im,bound.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// |s(t)| for the trace sum over a resonance table.
    Trace {
        resonances: PathBuf,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        dt: f64,
        /// Trace table; written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<SceneError> for CliError {
    fn from(e: SceneError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GeodesicError> for CliError {
    fn from(e: GeodesicError) -> Self {
        match e {
            GeodesicError::Cycle(_) | GeodesicError::BrokenChain(..) => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Table(m) => CliError::Input(m),
            ModelError::Unsupported(_) => CliError::Input(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<analysis::AnalysisError> for CliError {
    fn from(e: analysis::AnalysisError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Everything needed to reproduce one output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub scene: Option<String>,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, scene: Option<&Path>) -> Self {
        Self {
            command: command.into(),
            scene: scene.map(|p| p.display().to_string()),
            parameters: BTreeMap::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            outputs: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, v: impl Serialize) {
        self.parameters.insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_manifest(manifest: &RunManifest) -> Result<(), CliError> {
    for out in &manifest.outputs {
        let path = manifest_path(Path::new(out));
        let text = serde_json::to_string_pretty(manifest).expect("manifest serializes") + "\n";
        std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8], manifest: &mut RunManifest) -> Result<(), CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| io_err(p, e))?;
            manifest.outputs.push(p.display().to_string());
        }
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Input(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}

pub fn load_scene(path: &Path) -> Result<Scene, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(scene::parse_scene(&text)?)
}

fn cmd_geodesics(scene_path: &Path, cap: usize, out: Option<&Path>) -> Result<i32, CliError> {
    let scene = load_scene(scene_path)?;
    let summary = match &scene {
        Scene::Polygon(p) => {
            let report = scene::validate_polygon(p);
            for c in &report.checks {
                eprintln!("{}: {:?} {}", c.name, c.status, c.details);
            }
            geodesics::analyze_polygon(p, cap)?
        }
        Scene::ConeSurface(s) => geodesics::analyze_surface(s)?,
        other => {
            return Err(CliError::Input(format!(
                "geodesics needs a polygon or cone_surface scene, got {}",
                other.model_name()
            )))
        }
    };
    let mut manifest = RunManifest::new("geodesics", Some(scene_path));
    manifest.param("max_reflections", cap);
    if let Some(p) = out {
        let mut buf = Vec::new();
        geodesics::write_segments_csv(&summary.segments, &mut buf).map_err(|e| io_err(p, e))?;
        emit(Some(p), &buf, &mut manifest)?;
        write_manifest(&manifest)?;
    }
    println!("{}", summary.d_max.summary());
    println!("{}", summary.d_plus.summary());
    println!("vanishing_kernel_junctions={}", summary.d_plus.vanishing_junctions.len());
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_resonances(
    scene_path: &Path,
    re: &[f64],
    im: &[f64],
    tol: f64,
    modes: u32,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let scene = load_scene(scene_path)?;
    let bx = SearchBox::new(re[0], re[1], im[0], im[1]).map_err(|e| CliError::Input(e.to_string()))?;
    if !(tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive, got {tol}")));
    }
    let settings = SearchSettings {
        max_mode: modes,
        ..SearchSettings::new(bx, tol)
    };
    let outcome = models::find_resonances_with_retries(&scene, &settings, seed)?;
    let mut buf = Vec::new();
    models::write_resonance_csv(&mut buf, &outcome.resonances)?;
    let mut manifest = RunManifest::new("resonances", Some(scene_path));
    manifest.param("re", re);
    manifest.param("im", im);
    manifest.param("tol", tol);
    manifest.param("modes", modes);
    manifest.param("attempts", outcome.attempts);
    manifest.param("box_used", outcome.box_used);
    manifest.seed = Some(seed);
    emit(out, &buf, &mut manifest)?;
    write_manifest(&manifest)?;
    eprintln!("{} resonances", outcome.resonances.len());
    Ok(EXIT_OK)
}

/// The prediction a scene supports for the given source.
pub fn prediction_for_scene(
    scene: &Scene,
    source: StripSource,
    delta: f64,
    max_reflections: usize,
) -> Result<BandPrediction, CliError> {
    let conic = |scene: &Scene| -> Result<geodesics::GeodesicSummary, CliError> {
        match scene {
            Scene::Polygon(p) => Ok(geodesics::analyze_polygon(p, max_reflections)?),
            Scene::ConeSurface(s) => Ok(geodesics::analyze_surface(s)?),
            other => Err(CliError::Input(format!(
                "conic predictions need a polygon or cone_surface scene, got {}",
                other.model_name()
            ))),
        }
    };
    match source {
        StripSource::DeltaObstacle => {
            let diam = match scene {
                Scene::DeltaLine(s) => s.diameter(),
                Scene::DeltaCircle(s) => s.diameter(),
                other => {
                    return Err(CliError::Input(format!(
                        "delta_obstacle needs a delta scene, got {}",
                        other.model_name()
                    )))
                }
            };
            Ok(BandPrediction::Band(analysis::delta_obstacle_strip(diam, delta)?))
        }
        StripSource::ConicFree => {
            let s = conic(scene)?;
            Ok(BandPrediction::Band(analysis::conic_strip(
                2,
                s.d_max.value,
                s.d_max.cap.is_some(),
                delta,
            )?))
        }
        StripSource::ConicBand => Ok(analysis::conic_band(2, conic(scene)?.d_plus.value, delta)),
        StripSource::Smoothing | StripSource::Converse => Err(CliError::Input(
            "smoothing and converse predictions need a smoothing schedule, not a scene".into(),
        )),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    scene_path: &Path,
    csv_path: &Path,
    source: &str,
    scale: f64,
    delta: f64,
    lambda0: f64,
    max_reflections: usize,
    out: Option<&Path>,
    plot: Option<&Path>,
) -> Result<i32, CliError> {
    let scene = load_scene(scene_path)?;
    let resonances = models::read_resonance_file(csv_path)?;
    let source: StripSource = source.parse()?;
    let mut manifest = RunManifest::new("verify", Some(scene_path));
    manifest.param("resonances", csv_path.display().to_string());
    manifest.param("prediction", source);
    manifest.param("scale", scale);
    manifest.param("delta", delta);
    manifest.param("lambda0", lambda0);
    manifest.param("max_reflections", max_reflections);

    let prediction: StripPrediction = match prediction_for_scene(&scene, source, delta, max_reflections)? {
        BandPrediction::Band(p) => p.scaled(scale),
        BandPrediction::EmptyBand => {
            let text = serde_json::to_string_pretty(&json!({ "prediction": "empty_band", "checks": [] }))
                .expect("json")
                + "\n";
            emit(out, text.as_bytes(), &mut manifest)?;
            write_manifest(&manifest)?;
            eprintln!("EMPTY_BAND");
            return Ok(EXIT_OK);
        }
    };
    let mut prediction = prediction;
    prediction.lambda0 = Some(lambda0);
    let report = analysis::verify_band(&resonances, &prediction, lambda0);
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    emit(out, text.as_bytes(), &mut manifest)?;
    if let Some(p) = plot {
        let mut w = csv::Writer::from_writer(Vec::new());
        let rows = std::iter::once(["re".to_string(), "neg_im".into(), "bound".into()]).chain(
            resonances.iter().map(|r| {
                [
                    fmt_f64(r.lambda.re),
                    fmt_f64(-r.lambda.im),
                    fmt_f64(-analysis::bound_curve(prediction.width, r.lambda.re)),
                ]
            }),
        );
        for row in rows {
            w.write_record(&row).map_err(|e| io_err(p, e))?;
        }
        let bytes = w.into_inner().map_err(|e| io_err(p, e))?;
        emit(Some(p), &bytes, &mut manifest)?;
    }
    write_manifest(&manifest)?;
    let passed = report.passed();
    eprintln!("{}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_trace(csv_path: &Path, tmax: f64, dt: f64, out: Option<&Path>) -> Result<i32, CliError> {
    if !(dt > 0.0 && tmax >= dt) {
        return Err(CliError::Input(format!("need 0 < dt <= tmax, got dt = {dt}, tmax = {tmax}")));
    }
    let resonances = models::read_resonance_file(csv_path)?;
    let n = (tmax / dt + 1e-9).floor() as usize;
    let grid: Vec<f64> = (1..=n).map(|k| k as f64 * dt).collect();
    let s = analysis::poisson_trace(&resonances, &grid);
    let mut w = csv::Writer::from_writer(Vec::new());
    let table = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record(["t", "abs_s"]).map_err(table)?;
    for (t, v) in grid.iter().zip(&s) {
        w.write_record([fmt_f64(*t), fmt_f64(v.norm())]).map_err(table)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    let mut manifest = RunManifest::new("trace", None);
    manifest.param("resonances", csv_path.display().to_string());
    manifest.param("tmax", tmax);
    manifest.param("dt", dt);
    emit(out, &bytes, &mut manifest)?;
    write_manifest(&manifest)?;
    Ok(EXIT_OK)
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn dispatch(cli: Cli) -> Result<i32, CliError> {
    configure_threads();
    match cli.command {
        Command::Geodesics {
            scene,
            max_reflections,
            out,
        } => cmd_geodesics(&scene, max_reflections, out.as_deref()),
        Command::Resonances {
            scene,
            re,
            im,
            tol,
            modes,
            seed,
            out,
        } => cmd_resonances(&scene, &re, &im, tol, modes, seed, out.as_deref()),
        Command::Verify {
            scene,
            resonances,
            prediction,
            scale,
            delta,
            lambda0,
            max_reflections,
            out,
            plot,
        } => cmd_verify(
            &scene,
            &resonances,
            &prediction,
            scale,
            delta,
            lambda0,
            max_reflections,
            out.as_deref(),
            plot.as_deref(),
        ),
        Command::Trace {
            resonances,
            tmax,
            dt,
            out,
        } => cmd_trace(&resonances, tmax, dt, out.as_deref()),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_resonance_flags() {
        let cli = Cli::try_parse_from([
            "conres", "resonances", "s.json", "--re", "-1", "1", "--im", "0.5", "1.5", "--tol", "1e-12",
        ])
        .unwrap();
        match cli.command {
            Command::Resonances { re, im, tol, seed, .. } => {
                assert_eq!(re, vec![-1.0, 1.0]);
                assert_eq!(im, vec![0.5, 1.5]);
                assert_eq!(tol, 1e-12);
                assert_eq!(seed, 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(
            manifest_path(Path::new("out/res.csv")),
            PathBuf::from("out/res.csv.manifest.json")
        );
    }

    #[test]
    fn missing_scene_is_input_error() {
        assert_eq!(run(["conres", "geodesics", "/nonexistent/scene.json"]), EXIT_INPUT);
    }
}
