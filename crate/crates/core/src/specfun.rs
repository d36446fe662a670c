//! Integer-order Bessel `J_m` and Hankel `H^(1)_m` of complex argument.
//!
//! Evaluation is delegated to the `complex-bessel` crate (a port of Amos'
//! algorithm 644); this module owns the accepted domain, the derivative
//! convention and the accuracy checks.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

pub const MAX_ORDER: u32 = 60;
pub const MAX_ABS: f64 = 120.0;
pub const MAX_ABS_IM: f64 = 25.0;
/// Hankel arguments with `Re z <= 0` are accepted inside this radius.
pub const SMALL_RADIUS: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("argument outside the evaluation domain: order {order}, z = {z}")]
    DomainExceeded { order: u32, z: Complex64 },
    #[error("argument {0} lies on the branch cut (-inf, 0]")]
    BranchCut(Complex64),
    #[error("evaluation failed for order {order} at z = {z}: {message}")]
    Evaluation {
        order: u32,
        z: Complex64,
        message: String,
    },
}

/// Accepted `(m, z)` region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalDomain {
    pub max_order: u32,
    pub max_abs: f64,
    pub max_abs_im: f64,
}

impl Default for EvalDomain {
    fn default() -> Self {
        Self {
            max_order: MAX_ORDER,
            max_abs: MAX_ABS,
            max_abs_im: MAX_ABS_IM,
        }
    }
}

impl EvalDomain {
    pub fn contains_entire(&self, m: u32, z: Complex64) -> bool {
        m <= self.max_order && z.norm() <= self.max_abs && z.im.abs() <= self.max_abs_im && z.is_finite()
    }

    pub fn contains_cut_plane(&self, m: u32, z: Complex64) -> bool {
        self.contains_entire(m, z) && (z.re > 0.0 || z.norm() <= SMALL_RADIUS)
    }
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

fn amos_j(m: u32, z: Complex64) -> Result<Complex64, SpecfunError> {
    complex_bessel::besselj(m as f64, z).map_err(|e| SpecfunError::Evaluation {
        order: m,
        z,
        message: e.to_string(),
    })
}

fn amos_h1(m: u32, z: Complex64) -> Result<Complex64, SpecfunError> {
    complex_bessel::hankel1(m as f64, z).map_err(|e| SpecfunError::Evaluation {
        order: m,
        z,
        message: e.to_string(),
    })
}

/// `J_m(z)`; entire in `z`, evaluated through parity for `Re z < 0`.
pub fn bessel_j(m: u32, z: Complex64) -> Result<Complex64, SpecfunError> {
    if !EvalDomain::default().contains_entire(m, z) {
        return Err(SpecfunError::DomainExceeded { order: m, z });
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(if m == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    }
    if z.re < 0.0 {
        let v = amos_j(m, -z)?;
        return Ok(if m.is_multiple_of(2) { v } else { -v });
    }
    amos_j(m, z)
}

/// `H^(1)_m(z) = J_m(z) + i Y_m(z)` on the principal branch.
pub fn hankel1(m: u32, z: Complex64) -> Result<Complex64, SpecfunError> {
    if on_cut(z) {
        return Err(SpecfunError::BranchCut(z));
    }
    if !EvalDomain::default().contains_cut_plane(m, z) {
        return Err(SpecfunError::DomainExceeded { order: m, z });
    }
    amos_h1(m, z)
}

/// `J'_m(z) = (J_{m-1} - J_{m+1}) / 2`, with `J_{-1} = -J_1`.
pub fn bessel_j_deriv(m: u32, z: Complex64) -> Result<Complex64, SpecfunError> {
    if m > MAX_ORDER {
        return Err(SpecfunError::DomainExceeded { order: m, z });
    }
    let lower = if m == 0 { -bessel_j_unchecked(1, z)? } else { bessel_j(m - 1, z)? };
    Ok((lower - bessel_j_unchecked(m + 1, z)?) / 2.0)
}

/// `H'_m(z) = (H_{m-1} - H_{m+1}) / 2`, with `H_{-1} = -H_1`.
pub fn hankel1_deriv(m: u32, z: Complex64) -> Result<Complex64, SpecfunError> {
    if m > MAX_ORDER {
        return Err(SpecfunError::DomainExceeded { order: m, z });
    }
    hankel1(m, z)?;
    let lower = if m == 0 { -amos_h1(1, z)? } else { amos_h1(m - 1, z)? };
    Ok((lower - amos_h1(m + 1, z)?) / 2.0)
}

// order m + 1 is needed by the derivative at the top of the domain
fn bessel_j_unchecked(m: u32, z: Complex64) -> Result<Complex64, SpecfunError> {
    let domain = EvalDomain {
        max_order: MAX_ORDER + 1,
        ..Default::default()
    };
    if !domain.contains_entire(m, z) {
        return Err(SpecfunError::DomainExceeded { order: m, z });
    }
    if z.re < 0.0 {
        let v = amos_j(m, -z)?;
        return Ok(if m.is_multiple_of(2) { v } else { -v });
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(if m == 0 { 1.0 } else { 0.0 }, 0.0));
    }
    amos_j(m, z)
}

/// Normalized Wronskian residual `|J H' - J' H - 2i/(pi z)| * |pi z / 2|`.
pub fn wronskian_residual(m: u32, z: Complex64) -> Result<f64, SpecfunError> {
    let j = bessel_j(m, z)?;
    let jp = bessel_j_deriv(m, z)?;
    let h = hankel1(m, z)?;
    let hp = hankel1_deriv(m, z)?;
    let expected = Complex64::new(0.0, 2.0) / (PI * z);
    Ok((j * hp - jp * h - expected).norm() * (PI * z / 2.0).norm())
}

/// The same residual divided by the size of the products that cancel in it,
/// `(|J H'| + |J' H|) |pi z / 2|`; a conditioning-aware accuracy measure.
pub fn wronskian_relative_residual(m: u32, z: Complex64) -> Result<f64, SpecfunError> {
    let j = bessel_j(m, z)?;
    let jp = bessel_j_deriv(m, z)?;
    let h = hankel1(m, z)?;
    let hp = hankel1_deriv(m, z)?;
    let expected = Complex64::new(0.0, 2.0) / (PI * z);
    let scale = ((j * hp).norm() + (jp * h).norm()).max(expected.norm());
    Ok((j * hp - jp * h - expected).norm() / scale)
}

/// Relative three-term recurrence residual for `J`.
pub fn recurrence_residual(m: u32, z: Complex64) -> Result<f64, SpecfunError> {
    if m == 0 {
        return Err(SpecfunError::DomainExceeded { order: m, z });
    }
    let a = bessel_j(m - 1, z)?;
    let b = bessel_j_unchecked(m + 1, z)?;
    let c = bessel_j(m, z)? * (2.0 * m as f64) / z;
    let scale = a.norm().max(b.norm()).max(c.norm());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((a + b - c).norm() / scale)
}
