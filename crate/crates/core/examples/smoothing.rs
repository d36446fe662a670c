//! Smoothing schedules and the strips they give, in both directions.

use conres::analysis::{bar_t, smoothing_from_strip, strip_from_smoothing, SmoothingSchedule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // T_N = (N + 3) / 2, a schedule with limit 1/2
    let entries: Vec<(f64, f64)> = (1..=12).map(|n| (n as f64, (n as f64 + 3.0) / 2.0)).collect();
    let schedule = SmoothingSchedule::new(entries, 1.0, 2.0)?;
    let b = bar_t(&schedule)?;
    println!("inf T_N/N = {:.4} at N = {}, slope estimate {:?}", b.inf, b.argmin, b.limit_estimate);
    let strip = strip_from_smoothing(&schedule, 12.0, 0.01)?;
    println!("strip width from N = 12: {}", strip.width);

    for l in [0.5, 1.0, 2.0] {
        let c = smoothing_from_strip(l, 1.0, 3.0, 10.0)?;
        println!("strip width {l}: T_10 = {:.3}, limit {:.3}", c.t_n, c.bar_t);
    }
    Ok(())
}
