//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use conres::analysis::{
    self, bar_t, conic_band, counting_function, fit_log_strip, poisson_trace, smoothing_from_strip,
    strip_from_smoothing, BandPrediction, SmoothingSchedule, Width,
};
use conres::cycle::{max_mean_cycle, Digraph};
use conres::diffraction::{diffraction_kernel, is_geometric_point, kernel_abel_sum, DiffractionError};
use conres::geodesics::{analyze_polygon, analyze_surface};
use conres::models::{find_resonances, Resonance, SearchSettings};
use conres::rootfind::{subdivide_and_locate, RootOptions, SearchBox};
use conres::scene::{parse_scene, DeltaCircleScene, DeltaLineScene, Scene};
use conres::specfun::{wronskian_relative_residual, wronskian_residual};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn report(name: &str, ok: bool, details: String) {
    println!("{} {name}: {details}", if ok { "PASS" } else { "FAIL" });
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// two deltas of strength 1 at 0 and 1, all resonances with 0.1 <= Re <= 500
struct TwoDelta {
    all: Vec<Resonance>,
    window: Vec<Resonance>,
    window_time: Duration,
}

fn two_delta() -> &'static TwoDelta {
    static SET: OnceLock<TwoDelta> = OnceLock::new();
    SET.get_or_init(|| {
        let scene = Scene::DeltaLine(DeltaLineScene::new(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap());
        let t = Instant::now();
        let window = find_resonances(
            &scene,
            &SearchSettings::new(SearchBox::new(50.0, 500.0, -9.0, 0.5).unwrap(), 1e-10),
        )
        .unwrap();
        let window_time = t.elapsed();
        let mut all = find_resonances(
            &scene,
            &SearchSettings::new(SearchBox::new(0.1, 50.0, -9.0, 0.5).unwrap(), 1e-10),
        )
        .unwrap();
        all.extend(window.iter().cloned());
        TwoDelta {
            all,
            window,
            window_time,
        }
    })
}

#[test]
fn two_delta_log_strip_slope() {
    let set = two_delta();
    let fit = fit_log_strip(&set.window, (50.0, 500.0)).unwrap();
    let rel = (fit.slope - 1.0).abs();
    let fast = set.window_time < Duration::from_secs(60);
    let residuals_ok = set.window.iter().all(|r| r.residual < 1e-8);
    let ok = rel < 0.1 && fast && residuals_ok;
    report(
        "two_delta_log_strip_slope",
        ok,
        format!(
            "{} resonances, slope {:.6} (|slope - 1| = {rel:.4}, tol 0.1), intercept {:.4}, rms {:.2e}, runtime {:.2?} (limit 60 s)",
            set.window.len(),
            fit.slope,
            fit.intercept,
            fit.rms,
            set.window_time
        ),
    );
    assert!(ok);
}

#[test]
fn two_delta_counting_growth() {
    let set = two_delta();
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [100.0, 300.0, 500.0] {
        let n: u32 = set.all.iter().filter(|x| x.lambda.re > 0.0 && x.lambda.re <= r).map(|x| x.multiplicity).sum();
        let expected = r / PI;
        let rel = (n as f64 - expected).abs() / expected;
        ok &= rel < 0.15;
        // the same count through the counting function with a deep band
        let deep = counting_function(&set.all, r, 10.0);
        parts.push(format!("r={r}: N={n} vs r/pi={expected:.2} (rel {rel:.4}, counting_function {deep})"));
    }
    report("two_delta_counting_growth", ok, format!("{} (tol 0.15)", parts.join("; ")));
    assert!(ok);
}

#[test]
fn trace_peak_at_round_trip() {
    let set = two_delta();
    let grid: Vec<f64> = (0..=2000).map(|k| 1.9 + k as f64 * 1e-4).collect();
    let s: Vec<f64> = poisson_trace(&set.window, &grid).iter().map(|v| v.norm()).collect();
    let peaks: Vec<f64> = (1..grid.len() - 1)
        .filter(|&k| s[k] > s[k - 1] && s[k] >= s[k + 1])
        .map(|k| grid[k])
        .filter(|t| (t - 2.0).abs() <= 0.05)
        .collect();
    let ok = !peaks.is_empty();
    let best = peaks
        .iter()
        .copied()
        .min_by(|a, b| (a - 2.0).abs().total_cmp(&(b - 2.0).abs()));
    report(
        "trace_peak_at_round_trip",
        ok,
        format!("local maxima of |s(t)| within 0.05 of t = 2: {peaks:?}; nearest {best:?}"),
    );
    assert!(ok);
}

#[test]
fn disc_shell_free_region() {
    let scene = Scene::DeltaCircle(DeltaCircleScene::new(1.0, 5.0).unwrap());
    let t = Instant::now();
    let set = find_resonances(
        &scene,
        &SearchSettings::new(SearchBox::new(0.1, 40.0, -8.0, 0.5).unwrap(), 1e-10),
    )
    .unwrap();
    let elapsed = t.elapsed();
    // offset from the least damped resonance per unit of Re, upper half of the range
    let envelope = analysis::leading_envelope(&set, 1.0);
    let window = analysis::default_fit_window(&envelope).unwrap();
    let fit = fit_log_strip(&envelope, window).unwrap();
    let c0 = -fit.intercept;
    let worst = set
        .iter()
        .map(|r| -r.lambda.im - ((0.5 - 0.1) * r.lambda.re.ln() - c0))
        .fold(f64::INFINITY, f64::min);
    let ok = !set.is_empty()
        && worst >= 0.0
        && elapsed < Duration::from_secs(600)
        && set.iter().all(|r| r.residual < 1e-8 && r.lambda.im < 0.0);
    report(
        "disc_shell_free_region",
        ok,
        format!(
            "{} resonances (modes 0..=20), fitted slope {:.4}, ratio to 1/(2R) {:.4}, C0 {c0:.4}, min margin {worst:.4}, runtime {elapsed:.2?} (limit 600 s)",
            set.len(),
            fit.slope,
            fit.slope / 0.5
        ),
    );
    assert!(ok);
}

#[test]
fn kernel_matches_abel_sum() {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for rho in [2.5 * PI, 3.0 * PI, 10.0 * PI / 3.0, 4.0 * PI] {
        for s in [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            let Ok(k) = diffraction_kernel(rho, s) else { continue };
            let a = kernel_abel_sum(rho, s, 1.0 - 1e-3, 100_000);
            worst = worst.max((k - a).norm());
            points += 1;
        }
    }
    let mut zero_max: f64 = 0.0;
    for rho in [2.0 * PI, PI, 2.0 * PI / 3.0] {
        for s in [0.0, 0.1, rho / 4.0, rho / 2.0 - 0.1, rho / 2.0] {
            match diffraction_kernel(rho, s) {
                Ok(k) => zero_max = zero_max.max(k.norm()),
                // pi + rho Z is the geometric set, not a diffractive separation
                Err(DiffractionError::GeometricSingularity { .. }) if is_geometric_point(rho, s) => {}
                Err(_) => zero_max = f64::INFINITY,
            }
        }
    }
    let singular = matches!(diffraction_kernel(4.0 * PI, PI), Err(DiffractionError::GeometricSingularity { .. }));
    let near_ok = diffraction_kernel(4.0 * PI, PI - 1e-3).is_ok() && diffraction_kernel(4.0 * PI, PI + 1e-3).is_ok();
    let anchor = (diffraction_kernel(4.0 * PI, 0.0).unwrap() - c(0.0, -1.0 / (4.0 * PI))).norm();
    let ok = worst < 1e-2 && zero_max < 1e-12 && singular && near_ok && anchor < 1e-15;
    report(
        "kernel_matches_abel_sum",
        ok,
        format!(
            "{points} grid points, max |closed - Abel| {worst:.3e} (tol 1e-2); max |K| at rho = 2pi/k {zero_max:.1e} (tol 1e-12); singular at s = pi: {singular}; regular at pi +- 1e-3: {near_ok}"
        ),
    );
    assert!(ok);
}

/// Uniform `(m, z)` with `m <= 40`, `|z| <= 120`, `|Im z| <= 25`, and
/// `Re z > 0` or `|z| <= 1`.
fn random_domain_point(rng: &mut ChaCha8Rng) -> (u32, Complex64) {
    let m = rng.gen_range(0..=40u32);
    loop {
        let z = c(rng.gen_range(-120.0..120.0), rng.gen_range(-25.0..25.0));
        let inside = z.norm() <= 120.0 && (z.re > 0.0 || z.norm() <= 1.0) && z.norm() > 0.0;
        if inside {
            return (m, z);
        }
    }
}

#[test]
fn wronskian_on_random_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst = (0.0f64, 0u32, c(0.0, 0.0));
    let mut failures = 0;
    let mut worst_relative: f64 = 0.0;
    for _ in 0..200 {
        let (m, z) = random_domain_point(&mut rng);
        let r = wronskian_residual(m, z).unwrap();
        if !(r < 1e-10) {
            failures += 1;
        }
        if !(r <= worst.0) {
            worst = (r, m, z);
        }
        worst_relative = worst_relative.max(wronskian_relative_residual(m, z).unwrap());
    }
    let ok = failures == 0;
    report(
        "wronskian_on_random_grid",
        ok,
        format!(
            "{failures}/200 points with residual >= 1e-10; worst {:.3e} at m = {}, z = {}; worst relative residual {worst_relative:.3e}",
            worst.0, worst.1, worst.2
        ),
    );
    assert!(ok);
}

fn planted(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut roots: Vec<Complex64> = Vec::new();
    while roots.len() < 6 {
        let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if roots.iter().all(|r| (r - z).norm() >= 0.3) {
            roots.push(z);
        }
    }
    roots
}

fn expand(roots: &[Complex64]) -> Vec<Complex64> {
    // coefficients, highest degree first
    let mut coef = vec![c(1.0, 0.0)];
    for r in roots {
        let mut next = coef.clone();
        next.push(c(0.0, 0.0));
        for (k, a) in coef.iter().enumerate() {
            next[k + 1] -= a * r;
        }
        coef = next;
    }
    coef
}

#[test]
fn planted_roots_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let bx = SearchBox::new(-1.37, 1.41, -1.43, 1.33).unwrap();
    let opts = RootOptions {
        tol: 1e-13,
        ..Default::default()
    };
    let mut worst: f64 = 0.0;
    let mut conserved = true;
    let mut counts_ok = true;
    let trials = 20;
    for _ in 0..trials {
        let roots = planted(&mut rng);
        let coef = expand(&roots);
        let f = |z: Complex64| coef.iter().fold(c(0.0, 0.0), |acc, a| acc * z + a);
        let found = subdivide_and_locate(&f, &bx, &opts).unwrap();
        conserved &= found.conservation.iter().all(|r| r.parent == r.children)
            && found.total_multiplicity() == found.winding;
        counts_ok &= found.roots.len() == 6 && found.winding == 6;
        for r in &roots {
            let d = found.roots.iter().map(|x| (x.z - r).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    let sin_box = SearchBox::new(0.1, 10.0, -1.0, 1.0).unwrap();
    let sin_count = conres::rootfind::winding_number(&|z: Complex64| z.sin(), &sin_box, &RootOptions::default()).unwrap();
    let ok = worst < 1e-8 && conserved && counts_ok && sin_count == 3;
    report(
        "planted_roots_recovered",
        ok,
        format!(
            "{trials} degree-6 polynomials: max root error {worst:.2e} (tol 1e-8), conservation at every level: {conserved}, sin count on [0.1,10]x[-1,1]: {sin_count}"
        ),
    );
    assert!(ok);
}

fn brute_force_max_mean(g: &Digraph) -> Option<f64> {
    // simple cycles through their smallest node
    fn dfs(g: &Digraph, start: usize, v: usize, visited: &mut Vec<bool>, len: usize, w: f64, best: &mut Option<f64>) {
        for e in g.edges.iter().filter(|e| e.from == v) {
            if e.to == start {
                let mean = (w + e.weight) / (len + 1) as f64;
                if best.is_none_or(|b| mean > b) {
                    *best = Some(mean);
                }
            } else if e.to > start && !visited[e.to] {
                visited[e.to] = true;
                dfs(g, start, e.to, visited, len + 1, w + e.weight, best);
                visited[e.to] = false;
            }
        }
    }
    let mut best = None;
    for s in 0..g.n {
        let mut visited = vec![false; g.n];
        visited[s] = true;
        dfs(g, s, s, &mut visited, 0, 0.0, &mut best);
    }
    best
}

#[test]
fn geometry_and_cycles() {
    let tri = match parse_scene(r#"{"model":"polygon","vertices":[[0,0],[4,0],[0,3]]}"#).unwrap() {
        Scene::Polygon(p) => p,
        _ => unreachable!(),
    };
    let summary = analyze_polygon(&tri, 3).unwrap();
    let dmax_ok = summary.d_max.value == 5.0 && summary.d_max.summary() == "D_max>=5.0 (cap=3)";

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let mut g = Digraph::new(n);
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(0.3) {
                    g.add_edge(a, b, rng.gen_range(-10.0..10.0));
                }
            }
        }
        let karp = max_mean_cycle(&g).ok().map(|c| c.mean);
        let brute = brute_force_max_mean(&g);
        let same = match (karp, brute) {
            (Some(a), Some(b)) => (a - b).abs() <= 1e-9 * (1.0 + b.abs()),
            (None, None) => true,
            _ => false,
        };
        agree += same as usize;
    }

    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenes/integer_cones.json")).unwrap();
    let Scene::ConeSurface(surface) = parse_scene(&text).unwrap() else { panic!("cone surface expected") };
    let dplus = analyze_surface(&surface).unwrap().d_plus.value;
    let empty = conic_band(2, dplus, 0.1) == BandPrediction::EmptyBand;
    let ok = dmax_ok && agree == 200 && dplus == f64::NEG_INFINITY && empty;
    report(
        "geometry_and_cycles",
        ok,
        format!(
            "triangle {} ; Karp = brute force on {agree}/200 graphs; integer-angle surface D_plus = {dplus}, EmptyBand: {empty}",
            summary.d_max.summary()
        ),
    );
    assert!(ok);
}

#[test]
fn formula_plumbing() {
    let schedule = SmoothingSchedule::new(vec![(6.0, 10.0)], 1.0, 2.0).unwrap();
    let strip = strip_from_smoothing(&schedule, 6.0, 0.01).unwrap();
    let strip_ok = strip.width == Width::Finite(5.0 / 18.0 - 0.01);
    let converse_ok = smoothing_from_strip(2.0, 1.0, 3.0, 10.0).unwrap().t_n == 8.0
        && smoothing_from_strip(1.0, 0.0, 0.0, 0.0).unwrap().t_n == 2.0;
    let mut round_trip = Vec::new();
    for l in [0.5, 1.0, 2.0, 4.0] {
        let entries = (1..=100)
            .map(|n| (n as f64, smoothing_from_strip(l, 1.0, 3.0, n as f64).unwrap().t_n))
            .collect();
        let s = SmoothingSchedule::new(entries, 1.0, 2.0).unwrap();
        let b = bar_t(&s).unwrap();
        round_trip.push((l, b.limit_estimate.unwrap(), b.subadditive()));
    }
    let trip_ok = round_trip.iter().all(|&(l, t, sub)| t == 1.0 / l && sub);
    let ok = strip_ok && converse_ok && trip_ok;
    report(
        "formula_plumbing",
        ok,
        format!(
            "strip width {} (expected 5/18 - 0.01); T_N(2,1,3,10) = 8: {converse_ok}; round trip (L, T bar, subadditive): {round_trip:?}",
            strip.width
        ),
    );
    assert!(ok);
}
