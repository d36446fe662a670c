//! Resonances of two point interactions on the line and the logarithmic
//! strip they fill.

use conres::analysis::{counting_function, delta_obstacle_strip, fit_log_strip, verify_band};
use conres::models::{find_resonances, SearchSettings};
use conres::rootfind::SearchBox;
use conres::scene::{DeltaLineScene, Scene};
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let line = DeltaLineScene::new(vec![0.0, 1.0], vec![1.0, 1.0])?;
    let diam = line.diameter();
    let scene = Scene::DeltaLine(line);
    let settings = SearchSettings::new(SearchBox::new(0.1, 2000.0, -12.0, 0.5)?, 1e-10);
    let set = find_resonances(&scene, &settings)?;
    println!("{} resonances with 0.1 <= Re <= 2000", set.len());
    for r in set.iter().take(5) {
        println!("  {:.6} {:+.6}i  |D| = {:.1e}", r.lambda.re, r.lambda.im, r.residual);
    }

    let fit = fit_log_strip(&set, (50.0, 2000.0))?;
    println!("-Im = {:.4} log Re + {:.4} (rms {:.1e})", fit.slope, fit.intercept, fit.rms);
    for r in [100.0, 500.0, 2000.0] {
        println!("N({r}) = {} vs r/pi = {:.1}", counting_function(&set, r, 2.0), r / PI);
    }

    let prediction = delta_obstacle_strip(diam, 0.0)?;
    for scale in [0.9, 1.1] {
        let report = verify_band(&set, &prediction.scaled(scale), 50.0);
        println!(
            "width x {scale}: {} ({} violators, smallest passing onset {:.1})",
            if report.passed() { "PASS" } else { "FAIL" },
            report.violators.len(),
            report.smallest_passing_lambda0
        );
    }
    Ok(())
}
