//! Schwartz kernel of `exp(-i pi nu)` on a circular link and chain diffraction
//! coefficients.
//!
//! On a circle of length `rho` the operator `nu = sqrt(-Laplacian)` has
//! eigenvalues `2 pi |k| / rho` with eigenfunctions `exp(2 pi i k s / rho)`.
//! The eigenfunction series for the kernel of `exp(-i pi nu)` diverges
//! pointwise; its Abel limit is
//!
//! ```text
//! K(s) = i sin(beta) / (rho (cos(beta) - cos(2 pi s / rho))),  beta = 2 pi^2 / rho
//! ```
//!
//! which is singular exactly when `s = +-pi (mod rho)`, the geometric relation.
//! [`kernel_abel_sum`] evaluates the damped series directly and serves as the
//! independent check.

use crate::geodesics::DiffractiveChain;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

/// Distance from pi (radians) below which a junction counts as geometric.
pub const STRICTNESS_TOL: f64 = 1e-9;
/// Kernel magnitudes at or below this are treated as zero.
pub const KERNEL_ZERO_THRESHOLD: f64 = 1e-10;
const DENOMINATOR_TOL: f64 = 1e-12;
/// `beta / pi` within this of an integer means `sin(beta)` vanishes exactly.
const INTEGER_SNAP: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffractionError {
    #[error("kernel is singular at s = {separation} (geometric relation, rho = {rho})")]
    GeometricSingularity { rho: f64, separation: f64 },
    #[error("link length must be positive, got {0}")]
    NonpositiveLinkLength(f64),
    #[error("chain is not strictly diffractive (junction {junction} has separation {separation})")]
    NotStrictlyDiffractive { junction: usize, separation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEvaluation {
    pub rho: f64,
    pub separation: f64,
    pub value: Complex64,
}

/// Signed distance from `s` to the nearest point of `target + rho Z`.
fn periodic_offset(s: f64, target: f64, rho: f64) -> f64 {
    let r = (s - target).rem_euclid(rho);
    if r > rho / 2.0 {
        r - rho
    } else {
        r
    }
}

/// `sin(beta)`, returning an exact zero when `beta` is an integer multiple of pi.
fn snapped_sin(beta: f64) -> f64 {
    let q = beta / PI;
    if (q - q.round()).abs() < INTEGER_SNAP {
        0.0
    } else {
        beta.sin()
    }
}

/// True when `s` sits on the singular set `+-pi (mod rho)`.
pub fn is_geometric_point(rho: f64, s: f64) -> bool {
    periodic_offset(s, PI, rho).abs() < STRICTNESS_TOL
        || periodic_offset(s, -PI, rho).abs() < STRICTNESS_TOL
}

/// Closed-form kernel of `exp(-i pi nu)` on a circle of length `rho` at link distance `s`.
pub fn diffraction_kernel(rho: f64, s: f64) -> Result<Complex64, DiffractionError> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(DiffractionError::NonpositiveLinkLength(rho));
    }
    let singular = DiffractionError::GeometricSingularity { rho, separation: s };
    if is_geometric_point(rho, s) {
        return Err(singular);
    }
    let beta = 2.0 * PI * PI / rho;
    let sin_beta = snapped_sin(beta);
    if sin_beta == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let denom = beta.cos() - (2.0 * PI * s / rho).cos();
    if denom.abs() <= DENOMINATOR_TOL {
        return Err(singular);
    }
    Ok(Complex64::new(0.0, sin_beta / (rho * denom)))
}

pub fn evaluate_kernel(rho: f64, s: f64) -> Result<KernelEvaluation, DiffractionError> {
    diffraction_kernel(rho, s).map(|value| KernelEvaluation {
        rho,
        separation: s,
        value,
    })
}

/// Damped spectral sum `(1/rho) sum_{|k|<=kmax} r^|k| exp(-i pi 2pi|k|/rho) exp(2 pi i k s/rho)`.
pub fn kernel_abel_sum(rho: f64, s: f64, damping: f64, kmax: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let theta = 2.0 * PI * s / rho;
    let beta = 2.0 * PI * PI / rho;
    let mut weight = 1.0;
    for k in 1..=kmax {
        weight *= damping;
        if weight == 0.0 {
            break;
        }
        let kf = k as f64;
        // k and -k combine into 2 cos(k theta)
        let phase = Complex64::from_polar(1.0, -beta * kf);
        acc += phase * (2.0 * weight * (kf * theta).cos());
    }
    acc / rho
}

/// Every junction separation differs from pi by at least [`STRICTNESS_TOL`].
pub fn is_strictly_diffractive(chain: &DiffractiveChain) -> bool {
    chain
        .junctions
        .iter()
        .all(|j| (j.separation - PI).abs() >= STRICTNESS_TOL)
}

/// Product of kernel magnitudes over the junctions of a strictly diffractive chain.
pub fn diffraction_coefficient(chain: &DiffractiveChain) -> Result<f64, DiffractionError> {
    let mut product = 1.0;
    for (idx, j) in chain.junctions.iter().enumerate() {
        if (j.separation - PI).abs() < STRICTNESS_TOL {
            return Err(DiffractionError::NotStrictlyDiffractive {
                junction: idx,
                separation: j.separation,
            });
        }
        product *= diffraction_kernel(j.rho, j.separation)?.norm();
    }
    Ok(product)
}

/// Junction admissibility used for `D+_max`: strictly diffractive, off the
/// singular set, and with kernel magnitude above [`KERNEL_ZERO_THRESHOLD`].
pub fn admissible_junction(rho: f64, separation: f64) -> bool {
    if (separation - PI).abs() < STRICTNESS_TOL {
        return false;
    }
    matches!(diffraction_kernel(rho, separation), Ok(k) if k.norm() > KERNEL_ZERO_THRESHOLD)
}

/// Rows `(rho, s, re, im)` for a kernel table; singular points are skipped.
pub fn kernel_table(rhos: &[f64], separations: &[f64]) -> Vec<KernelEvaluation> {
    rhos.iter()
        .flat_map(|&rho| separations.iter().map(move |&s| (rho, s)))
        .filter_map(|(rho, s)| evaluate_kernel(rho, s).ok())
        .collect()
}

pub fn write_kernel_csv<W: std::io::Write>(
    rows: &[KernelEvaluation],
    out: W,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rho", "s", "re", "im"])?;
    for r in rows {
        w.write_record([
            crate::io::fmt_f64(r.rho),
            crate::io::fmt_f64(r.separation),
            crate::io::fmt_f64(r.value.re),
            crate::io::fmt_f64(r.value.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{DiffractiveChain, Junction};

    fn chain_with(junctions: Vec<(f64, f64)>) -> DiffractiveChain {
        DiffractiveChain {
            segments: vec![],
            closed: false,
            total_length: 0.0,
            junctions: junctions
                .into_iter()
                .map(|(rho, separation)| Junction {
                    cone: 0,
                    rho,
                    separation,
                })
                .collect(),
            n_gamma: 0,
        }
    }

    #[test]
    fn kernel_at_rho_4pi() {
        let k = diffraction_kernel(4.0 * PI, 0.0).unwrap();
        assert!(k.re.abs() < 1e-15);
        assert!((k.im + 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((k.im + 0.0795775).abs() < 1e-7);
    }

    #[test]
    fn flat_plane_diffracts_nothing() {
        for s in [0.0, 0.3, 1.0, 2.0, 3.0] {
            assert_eq!(diffraction_kernel(2.0 * PI, s).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn singular_at_geometric_point() {
        assert!(matches!(
            diffraction_kernel(4.0 * PI, PI),
            Err(DiffractionError::GeometricSingularity { .. })
        ));
        assert!(matches!(
            diffraction_kernel(2.0 * PI, PI),
            Err(DiffractionError::GeometricSingularity { .. })
        ));
        assert!(diffraction_kernel(4.0 * PI, PI - 1e-3).is_ok());
    }

    #[test]
    fn abel_sum_limits() {
        let rho = 3.0 * PI;
        let s = 0.7;
        assert!((kernel_abel_sum(rho, s, 1e-300, 10) - Complex64::new(1.0 / rho, 0.0)).norm() < 1e-15);
        let a = kernel_abel_sum(rho, s, 0.9, 2000);
        let b = kernel_abel_sum(rho, -s, 0.9, 2000);
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn strictness() {
        assert!(is_strictly_diffractive(&chain_with(vec![(4.0 * PI, PI / 2.0), (4.0 * PI, PI / 3.0)])));
        assert!(!is_strictly_diffractive(&chain_with(vec![(4.0 * PI, PI)])));
        assert!(is_strictly_diffractive(&chain_with(vec![])));
    }

    #[test]
    fn coefficients() {
        let c = diffraction_coefficient(&chain_with(vec![(4.0 * PI, 0.0)])).unwrap();
        assert!((c - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(diffraction_coefficient(&chain_with(vec![(4.0 * PI, 0.0), (2.0 * PI, 1.0)])).unwrap(), 0.0);
        assert_eq!(diffraction_coefficient(&chain_with(vec![])).unwrap(), 1.0);
        assert!(matches!(
            diffraction_coefficient(&chain_with(vec![(4.0 * PI, PI)])),
            Err(DiffractionError::NotStrictlyDiffractive { junction: 0, .. })
        ));
    }

    #[test]
    fn admissibility() {
        assert!(admissible_junction(3.0 * PI, 0.5));
        assert!(!admissible_junction(3.0 * PI, PI));
        assert!(!admissible_junction(PI, 0.5));
        assert!(!admissible_junction(2.0 * PI / 3.0, 0.2));
    }
}
