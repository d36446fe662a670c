//! The diffraction kernel on cones of several link lengths, checked against
//! an Abel-damped spectral sum.

use conres::diffraction::{diffraction_kernel, kernel_abel_sum};
use std::f64::consts::PI;

fn main() {
    println!("{:>8} {:>8} {:>14} {:>14}", "rho/pi", "s", "Im K", "Im Abel");
    for rho in [2.5 * PI, 3.0 * PI, 4.0 * PI, 2.0 * PI] {
        for s in [0.0, 0.5, 1.5, PI - 0.01] {
            match diffraction_kernel(rho, s) {
                Ok(k) => {
                    let a = kernel_abel_sum(rho, s, 0.999, 50_000);
                    println!("{:>8.3} {:>8.3} {:>14.6e} {:>14.6e}", rho / PI, s, k.im, a.im);
                }
                Err(e) => println!("{:>8.3} {:>8.3} {e}", rho / PI, s),
            }
        }
    }
    // the geometric direction s = pi is excluded
    println!("{:?}", diffraction_kernel(4.0 * PI, PI));
}
