//! All zeros of a holomorphic function in a rectangle.
//!
//! The zero count inside a box is the winding number of `f` along its
//! boundary, tracked as a sum of principal-value phase increments between
//! consecutive samples. Sides start with a fixed number of samples and any
//! interval whose phase step exceeds `max_phase_step` is bisected. Boxes with
//! positive winding are quadrisected until Newton's method from the cell
//! centre lands inside a cell of winding one, or the cell is smaller than
//! `min_cell_diameter`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("function vanishes on (or numerically at) the contour near {0}")]
    ZeroOnContour(Complex64),
    #[error("function is not finite at {0}")]
    NonFinite(Complex64),
    #[error("winding quadrature did not converge after {0} doublings")]
    NonConvergentQuadrature(u32),
    #[error("subdivision depth {0} exceeded")]
    DepthExceeded(usize),
    #[error("Newton iteration from {start} did not converge (|f| = {residual:e})")]
    NoConvergence { start: Complex64, residual: f64 },
    #[error("children windings sum to {children} but parent has {parent}")]
    ConservationViolated { parent: i64, children: i64 },
    #[error("invalid search box: {0}")]
    InvalidBox(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, RootError> {
        let b = Self {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        if !(re_max > re_min && im_max > im_min) || ![re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) {
            return Err(RootError::InvalidBox(format!("{b:?}")));
        }
        Ok(b)
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }

    /// Counterclockwise corners starting bottom-left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    pub fn shifted(&self, dre: f64, dim: f64) -> Self {
        Self {
            re_min: self.re_min + dre,
            re_max: self.re_max + dre,
            im_min: self.im_min + dim,
            im_max: self.im_max + dim,
        }
    }

    /// Four children split at the given fractions of width and height.
    pub fn quadrisect(&self, fx: f64, fy: f64) -> [SearchBox; 4] {
        let xm = self.re_min + fx * self.width();
        let ym = self.im_min + fy * self.height();
        [
            SearchBox { re_max: xm, im_max: ym, ..*self },
            SearchBox { re_min: xm, im_max: ym, ..*self },
            SearchBox { re_min: xm, im_min: ym, ..*self },
            SearchBox { re_max: xm, im_min: ym, ..*self },
        ]
    }

    /// Grid of `nx * ny` tiles covering the box, row-major from bottom-left.
    pub fn tiles(&self, nx: usize, ny: usize) -> Vec<SearchBox> {
        let xs: Vec<f64> = (0..=nx)
            .map(|i| if i == nx { self.re_max } else { self.re_min + self.width() * i as f64 / nx as f64 })
            .collect();
        let ys: Vec<f64> = (0..=ny)
            .map(|j| if j == ny { self.im_max } else { self.im_min + self.height() * j as f64 / ny as f64 })
            .collect();
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                out.push(SearchBox {
                    re_min: xs[i],
                    re_max: xs[i + 1],
                    im_min: ys[j],
                    im_max: ys[j + 1],
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootOptions {
    pub samples_per_side: usize,
    pub max_doublings: u32,
    pub max_phase_step: f64,
    pub tol: f64,
    pub min_cell_diameter: f64,
    pub max_depth: usize,
    pub cluster_radius: f64,
    pub newton_max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            samples_per_side: 64,
            max_doublings: 16,
            max_phase_step: PI / 4.0,
            tol: 1e-10,
            min_cell_diameter: 1e-3,
            max_depth: 40,
            cluster_radius: 1e-6,
            newton_max_iter: 50,
        }
    }
}

fn eval_checked<F: Fn(Complex64) -> Complex64>(f: &F, z: Complex64) -> Result<Complex64, RootError> {
    let v = f(z);
    if !v.is_finite() {
        return Err(RootError::NonFinite(z));
    }
    if v == Complex64::new(0.0, 0.0) {
        return Err(RootError::ZeroOnContour(z));
    }
    Ok(v)
}

fn refine_step<F: Fn(Complex64) -> Complex64>(
    f: &F,
    (za, fa): (Complex64, Complex64),
    (zb, fb): (Complex64, Complex64),
    max_step: f64,
    min_len: f64,
) -> Result<f64, RootError> {
    let step = (fb / fa).arg();
    if step.abs() <= max_step {
        return Ok(step);
    }
    if (zb - za).norm() < min_len {
        return Err(RootError::ZeroOnContour(0.5 * (za + zb)));
    }
    let zm = 0.5 * (za + zb);
    let fm = eval_checked(f, zm)?;
    Ok(refine_step(f, (za, fa), (zm, fm), max_step, min_len)?
        + refine_step(f, (zm, fm), (zb, fb), max_step, min_len)?)
}

/// Total phase change of `f` along the boundary of `bx` with `n` base samples per side.
fn boundary_phase<F: Fn(Complex64) -> Complex64>(
    f: &F,
    bx: &SearchBox,
    n: usize,
    opts: &RootOptions,
) -> Result<f64, RootError> {
    let corners = bx.corners();
    let min_len = 1e-13 * (1.0 + bx.diameter().max(corners[0].norm()));
    let mut total = 0.0;
    for side in 0..4 {
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        let mut prev = (a, eval_checked(f, a)?);
        for k in 1..=n {
            let z = if k == n { b } else { a + (b - a) * (k as f64 / n as f64) };
            let cur = (z, eval_checked(f, z)?);
            total += refine_step(f, prev, cur, opts.max_phase_step, min_len)?;
            prev = cur;
        }
    }
    Ok(total)
}

/// Number of zeros of `f` inside `bx`, counted with multiplicity.
pub fn winding_number<F: Fn(Complex64) -> Complex64>(
    f: &F,
    bx: &SearchBox,
    opts: &RootOptions,
) -> Result<i64, RootError> {
    let mut n = opts.samples_per_side.max(4);
    for _ in 0..=opts.max_doublings {
        let raw = boundary_phase(f, bx, n, opts)? / TAU;
        let rounded = raw.round();
        if (raw - rounded).abs() < 0.25 {
            return Ok(rounded as i64);
        }
        n *= 2;
    }
    Err(RootError::NonConvergentQuadrature(opts.max_doublings))
}

/// Newton iteration with backtracking. Uses `deriv` when supplied, otherwise a
/// central difference with step `1e-6 (1 + |z|)`.
pub fn newton_polish<F, D>(
    f: &F,
    z0: Complex64,
    tol: f64,
    max_iter: usize,
    deriv: Option<&D>,
) -> Result<Complex64, RootError>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let mut z = z0;
    let mut fz = f(z);
    for _ in 0..max_iter {
        if !fz.is_finite() {
            break;
        }
        if fz.norm() < tol {
            return Ok(z);
        }
        let d = match deriv {
            Some(d) => d(z),
            None => central_difference(f, z),
        };
        if d == Complex64::new(0.0, 0.0) || !d.is_finite() {
            break;
        }
        let step = fz / d;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let cand = z - step * scale;
            let fc = f(cand);
            if fc.is_finite() && fc.norm() < fz.norm() {
                z = cand;
                fz = fc;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if fz.is_finite() && fz.norm() < tol {
        return Ok(z);
    }
    Err(RootError::NoConvergence {
        start: z0,
        residual: fz.norm(),
    })
}

/// Steps `z - m f/f'` toward a zero of known multiplicity `m`, stopping when
/// the step stops shrinking. Plain Newton only converges linearly there.
pub fn refine_multiple<F: Fn(Complex64) -> Complex64>(f: &F, z0: Complex64, m: u32, max_iter: usize) -> Complex64 {
    let mut z = z0;
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        let fz = f(z);
        let d = central_difference(f, z);
        if fz == Complex64::new(0.0, 0.0) || d == Complex64::new(0.0, 0.0) || !(fz / d).is_finite() {
            break;
        }
        let step = fz / d * m as f64;
        if step.norm() >= last {
            break;
        }
        last = step.norm();
        z -= step;
        if last <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

pub fn central_difference<F: Fn(Complex64) -> Complex64>(f: &F, z: Complex64) -> Complex64 {
    let h = 1e-6 * (1.0 + z.norm());
    (f(z + h) - f(z - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub z: Complex64,
    pub multiplicity: u32,
    pub residual: f64,
    /// Set when distinct cells produced roots within the cluster radius.
    pub clustered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationRecord {
    pub depth: usize,
    pub parent: i64,
    pub children: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Located {
    pub roots: Vec<Root>,
    pub winding: i64,
    pub conservation: Vec<ConservationRecord>,
}

impl Located {
    pub fn total_multiplicity(&self) -> i64 {
        self.roots.iter().map(|r| r.multiplicity as i64).sum()
    }
}

const SPLIT_FRACTIONS: [f64; 6] = [0.5, 0.4871, 0.5129, 0.4637, 0.5363, 0.4411];

struct Locator<'a, F> {
    f: &'a F,
    opts: &'a RootOptions,
    roots: Vec<Root>,
    records: Vec<ConservationRecord>,
}

impl<'a, F: Fn(Complex64) -> Complex64> Locator<'a, F> {
    fn accept(&mut self, z: Complex64, multiplicity: u32) {
        self.roots.push(Root {
            z,
            multiplicity,
            residual: (self.f)(z).norm(),
            clustered: false,
        });
    }

    fn polish(&self, z0: Complex64) -> Result<Complex64, RootError> {
        newton_polish(
            self.f,
            z0,
            self.opts.tol,
            self.opts.newton_max_iter,
            None::<&fn(Complex64) -> Complex64>,
        )
    }

    fn visit(&mut self, bx: SearchBox, winding: i64, depth: usize) -> Result<(), RootError> {
        if winding <= 0 {
            return Ok(());
        }
        let center = bx.center();
        if winding == 1 {
            if let Ok(z) = self.polish(center) {
                // a zero of higher order on a cell edge shows up as winding 1 on both sides
                let z = refine_multiple(self.f, z, 1, self.opts.newton_max_iter);
                if bx.contains(z, 0.0) {
                    self.accept(z, 1);
                    return Ok(());
                }
            }
        }
        if bx.diameter() < self.opts.min_cell_diameter {
            let mut z = self.polish(center)?;
            let refined = refine_multiple(self.f, z, winding as u32, self.opts.newton_max_iter);
            if bx.contains(refined, bx.diameter()) {
                z = refined;
            }
            self.accept(z, winding as u32);
            return Ok(());
        }
        if depth >= self.opts.max_depth {
            return Err(RootError::DepthExceeded(depth));
        }
        let mut last_err = None;
        for &fx in &SPLIT_FRACTIONS {
            let fy = 1.0 - fx;
            let children = bx.quadrisect(fx, fy);
            let windings: Result<Vec<i64>, RootError> = children
                .iter()
                .map(|c| winding_number(self.f, c, self.opts))
                .collect();
            match windings {
                Ok(ws) => {
                    let sum: i64 = ws.iter().sum();
                    if sum != winding {
                        last_err = Some(RootError::ConservationViolated {
                            parent: winding,
                            children: sum,
                        });
                        continue;
                    }
                    self.records.push(ConservationRecord {
                        depth,
                        parent: winding,
                        children: sum,
                    });
                    for (c, w) in children.into_iter().zip(ws) {
                        self.visit(c, w, depth + 1)?;
                    }
                    return Ok(());
                }
                Err(e @ RootError::ZeroOnContour(_)) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last_err.expect("at least one split attempted"))
    }
}

fn merge_clusters(mut roots: Vec<Root>, radius: f64) -> Vec<Root> {
    roots.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(prev) = out.iter_mut().rev().take_while(|p| r.z.re - p.z.re <= radius).find(|p| (p.z - r.z).norm() <= radius) {
            prev.multiplicity += r.multiplicity;
            prev.clustered = true;
            prev.residual = prev.residual.min(r.residual);
            continue;
        }
        out.push(r);
    }
    out
}

/// Every zero in `bx` with its multiplicity, sorted by `(Re, Im)`.
pub fn subdivide_and_locate<F: Fn(Complex64) -> Complex64>(
    f: &F,
    bx: &SearchBox,
    opts: &RootOptions,
) -> Result<Located, RootError> {
    let winding = winding_number(f, bx, opts)?;
    let mut loc = Locator {
        f,
        opts,
        roots: Vec::new(),
        records: Vec::new(),
    };
    loc.visit(*bx, winding, 0)?;
    let roots = merge_clusters(loc.roots, opts.cluster_radius);
    Ok(Located {
        roots,
        winding,
        conservation: loc.records,
    })
}

/// Outcome of [`locate_with_retries`], including the perturbation actually used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetryReport {
    pub located: Located,
    pub seed: u64,
    pub attempts: usize,
    pub box_used: SearchBox,
}

pub const MAX_RETRIES: usize = 5;
pub const MAX_SHIFT: f64 = 1e-4;

/// Runs [`subdivide_and_locate`], shifting the box by a seeded random offset
/// of at most `1e-4` and retrying (up to five times) when a contour hits a zero.
pub fn locate_with_retries<F: Fn(Complex64) -> Complex64>(
    f: &F,
    bx: &SearchBox,
    opts: &RootOptions,
    seed: u64,
) -> Result<RetryReport, RootError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = *bx;
    let mut attempt = 0;
    loop {
        match subdivide_and_locate(f, &current, opts) {
            Ok(located) => {
                return Ok(RetryReport {
                    located,
                    seed,
                    attempts: attempt + 1,
                    box_used: current,
                })
            }
            Err(RootError::ZeroOnContour(_)) | Err(RootError::ConservationViolated { .. })
                if attempt < MAX_RETRIES =>
            {
                attempt += 1;
                current = bx.shifted(
                    rng.gen_range(-MAX_SHIFT..=MAX_SHIFT),
                    rng.gen_range(-MAX_SHIFT..=MAX_SHIFT),
                );
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn winding_examples() {
        let o = RootOptions::default();
        let b = SearchBox::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        assert_eq!(winding_number(&|z: Complex64| z * z + 1.0, &b, &o).unwrap(), 2);
        let b = SearchBox::new(0.1, 10.0, -1.0, 1.0).unwrap();
        assert_eq!(winding_number(&|z: Complex64| z.sin(), &b, &o).unwrap(), 3);
        let b = SearchBox::new(0.0, 2.0, 0.0, 2.0).unwrap();
        let a = c(1.0, 1.0);
        assert_eq!(winding_number(&|z: Complex64| (z - a).powi(3), &b, &o).unwrap(), 3);
    }

    #[test]
    fn zero_on_contour_detected() {
        let o = RootOptions::default();
        let b = SearchBox::new(-1.0, 1.0, 0.0, 2.0).unwrap();
        assert!(matches!(
            winding_number(&|z: Complex64| z, &b, &o),
            Err(RootError::ZeroOnContour(_))
        ));
    }

    #[test]
    fn locates_plus_minus_i() {
        let o = RootOptions {
            tol: 1e-12,
            ..Default::default()
        };
        let b = SearchBox::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let loc = subdivide_and_locate(&|z: Complex64| z * z + 1.0, &b, &o).unwrap();
        assert_eq!(loc.roots.len(), 2);
        assert!((loc.roots[0].z - c(0.0, -1.0)).norm() < 1e-10);
        assert!((loc.roots[1].z - c(0.0, 1.0)).norm() < 1e-10);
        assert!(loc.roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn locates_sine_zeros() {
        let b = SearchBox::new(0.1, 10.0, -1.0, 1.0).unwrap();
        let loc = subdivide_and_locate(&|z: Complex64| z.sin(), &b, &RootOptions::default()).unwrap();
        let zs: Vec<f64> = loc.roots.iter().map(|r| r.z.re).collect();
        assert_eq!(zs.len(), 3);
        for (k, z) in zs.iter().enumerate() {
            assert!((z - PI * (k + 1) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn newton_examples() {
        let f = |z: Complex64| z * z + 1.0;
        let d = |z: Complex64| 2.0 * z;
        let a = newton_polish(&f, c(0.0, 0.9), 1e-14, 50, None::<&fn(Complex64) -> Complex64>).unwrap();
        assert!((a - c(0.0, 1.0)).norm() < 1e-12);
        let b = newton_polish(&f, c(0.0, 0.9), 1e-14, 50, Some(&d)).unwrap();
        assert!((a - b).norm() < 1e-9);
        let g = |z: Complex64| (z - 1.0) * (z - 1.0);
        let r = newton_polish(&g, c(1.3, 0.1), 1e-10, 50, None::<&fn(Complex64) -> Complex64>).unwrap();
        assert!(g(r).norm() < 1e-10);
    }

    #[test]
    fn newton_reports_failure() {
        // real starting point: iterates stay real, where |z^2 + 1| >= 1
        let f = |z: Complex64| z * z + 1.0;
        assert!(matches!(
            newton_polish(&f, c(0.5, 0.0), 1e-10, 50, None::<&fn(Complex64) -> Complex64>),
            Err(RootError::NoConvergence { .. })
        ));
    }

    #[test]
    fn triple_root_multiplicity() {
        let a = c(1.0, 1.0);
        let b = SearchBox::new(0.0, 2.1, 0.0, 2.1).unwrap();
        let loc = subdivide_and_locate(&|z: Complex64| (z - a).powi(3), &b, &RootOptions::default()).unwrap();
        assert_eq!(loc.total_multiplicity(), 3);
        assert!(loc.roots.iter().all(|r| (r.z - a).norm() < 1e-3));
    }

    #[test]
    fn invalid_box() {
        assert!(SearchBox::new(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn double_zero_is_refined() {
        let a = Complex64::new(1.0, 1.0);
        let f = |z: Complex64| z.sin() * (z - a) * (z - a);
        let bx = SearchBox::new(0.5, 1.7, 0.5, 1.5).unwrap();
        let found = subdivide_and_locate(&f, &bx, &RootOptions::default()).unwrap();
        assert_eq!(found.roots.len(), 1, "{:?}", found);
        assert_eq!(found.roots[0].multiplicity, 2);
        assert!((found.roots[0].z - a).norm() < 1e-7, "{}", found.roots[0].z);
    }
}
