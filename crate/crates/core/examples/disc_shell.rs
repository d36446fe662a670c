//! Resonances of a circular delta shell, mode by mode, and the least damped
//! envelope that bounds them.

use conres::analysis::{default_fit_window, fit_log_strip, leading_envelope};
use conres::models::{find_resonances, SearchSettings};
use conres::rootfind::SearchBox;
use conres::scene::{DeltaCircleScene, Scene};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scene = Scene::DeltaCircle(DeltaCircleScene::new(1.0, 5.0)?);
    let mut settings = SearchSettings::new(SearchBox::new(0.1, 40.0, -8.0, 0.5)?, 1e-10);
    settings.max_mode = 20;
    let set = find_resonances(&scene, &settings)?;
    println!("{} resonances for modes 0..=20", set.len());
    for m in [0, 5, 20] {
        let first = set.iter().filter(|r| r.mode_index == Some(m)).take(3);
        let text: Vec<String> = first.map(|r| format!("{:.4}{:+.4}i", r.lambda.re, r.lambda.im)).collect();
        println!("  m = {m:>2}: {}", text.join(", "));
    }
    let envelope = leading_envelope(&set, 1.0);
    let window = default_fit_window(&envelope).ok_or("empty envelope")?;
    let fit = fit_log_strip(&envelope, window)?;
    println!(
        "envelope over Re in [{:.1}, {:.1}]: -Im = {:.4} log Re + {:.4}",
        window.0, window.1, fit.slope, fit.intercept
    );
    Ok(())
}
