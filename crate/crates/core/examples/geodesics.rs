//! Diffractive geodesics of a polygonal scene: `D_max`, `D_plus` and the
//! conic strip they imply.
//!
//! `cargo run --example geodesics [scene.json]`

use conres::analysis::{conic_band, conic_strip, BandPrediction};
use conres::geodesics::{analyze_polygon, analyze_surface};
use conres::scene::{parse_scene, Scene};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenes/right_triangle.json").into());
    let scene = parse_scene(&std::fs::read_to_string(&path)?)?;
    let summary = match &scene {
        Scene::Polygon(p) => analyze_polygon(p, 3)?,
        Scene::ConeSurface(s) => analyze_surface(s)?,
        other => return Err(format!("{} has no geodesics", other.model_name()).into()),
    };
    println!("{} segments", summary.segments.len());
    for s in summary.segments.iter().take(8) {
        println!(
            "  {} -> {}  length {:.4}  reflections {:?}",
            s.from, s.to, s.length, s.reflection_edges
        );
    }
    println!("{}", summary.d_max_straight.summary());
    println!("{}", summary.d_max.summary());
    println!("{}", summary.d_plus.summary());

    let strip = conic_strip(2, summary.d_max.value, summary.d_max.cap.is_some(), 0.01)?;
    println!("free strip width {} (upper bound only: {})", strip.width, strip.upper_bound_on_width);
    match conic_band(2, summary.d_plus.value, 0.01) {
        BandPrediction::Band(p) => println!("band width {}", p.width),
        BandPrediction::EmptyBand => println!("no resonance band predicted"),
    }
    Ok(())
}
