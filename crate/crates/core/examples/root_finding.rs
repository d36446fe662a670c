//! Argument-principle root finding on an entire function with a double zero.

use conres::rootfind::{locate_with_retries, RootOptions, SearchBox};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // sin(z) (z - 1 - i)^2 on a box holding 0, pi, 2 pi and the double zero
    let a = Complex64::new(1.0, 1.0);
    let f = |z: Complex64| z.sin() * (z - a) * (z - a);
    let bx = SearchBox::new(-0.5, 7.0, -1.0, 1.5)?;
    let report = locate_with_retries(&f, &bx, &RootOptions::default(), 1)?;
    println!("winding number {} (attempts {})", report.located.winding, report.attempts);
    for r in &report.located.roots {
        println!("  {:.12} {:+.12}i  multiplicity {}  |f| = {:.1e}", r.z.re, r.z.im, r.multiplicity, r.residual);
    }
    let levels = report.located.conservation.iter().map(|c| c.depth).max().unwrap_or(0);
    println!("{} cells checked over {levels} levels", report.located.conservation.len());
    Ok(())
}
