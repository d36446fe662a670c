//! Cone-to-cone geodesics on polygon exteriors.
//!
//! Straight segments come from a visibility test against the closed polygon;
//! billiard segments come from unfolding the exterior across edge sequences.
//! Angles at a vertex are measured counterclockwise from the edge towards the
//! predecessor vertex, so they lie in `[0, w]` with `w` the exterior wedge.

use crate::cycle::{self, CycleError, Digraph};
use crate::diffraction;
use crate::geom::{self, orient, point_segment_distance, reflect_across, Point2, Polygon};
use crate::scene::{cone_points, ConePoint, ConeSurfaceScene, PolygonScene, SceneError};
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::TAU;
use thiserror::Error;

pub const DEFAULT_REFLECTION_CAP: usize = 3;
pub const HARD_REFLECTION_LIMIT: usize = 12;
const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("reflection depth {requested} exceeds hard limit {limit}")]
    CapExceeded { requested: usize, limit: usize },
    #[error("angle {angle} outside [0, {wedge}]")]
    AngleOutOfRange { angle: f64, wedge: f64 },
    #[error("no segments supplied")]
    EmptyInput,
    #[error("chain broken between segments {0} and {1}")]
    BrokenChain(usize, usize),
    #[error("segment references unknown cone {0}")]
    UnknownCone(usize),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicSegment {
    pub from: usize,
    pub to: usize,
    pub reflection_edges: Vec<usize>,
    pub length: f64,
    pub departure_angle: f64,
    pub arrival_angle: f64,
    /// Polyline from `from` to `to` through the reflection points; empty when
    /// the segment did not come from polygon geometry.
    #[serde(skip)]
    pub path: Vec<Point2>,
}

impl GeodesicSegment {
    /// Same geodesic traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut edges = self.reflection_edges.clone();
        edges.reverse();
        let mut path = self.path.clone();
        path.reverse();
        Self {
            from: self.to,
            to: self.from,
            reflection_edges: edges,
            length: self.length,
            departure_angle: self.arrival_angle,
            arrival_angle: self.departure_angle,
            path,
        }
    }

    fn canonical_order(&self, other: &Self) -> Ordering {
        self.length
            .total_cmp(&other.length)
            .then(self.from.cmp(&other.from))
            .then(self.to.cmp(&other.to))
            .then(self.reflection_edges.cmp(&other.reflection_edges))
    }
}

fn sort_canonical(segments: &mut [GeodesicSegment]) {
    segments.sort_by(|a, b| a.canonical_order(b));
}

/// Exterior angle of direction `dir` at vertex `i`, in `[0, 2pi)`.
fn exterior_angle(scene: &PolygonScene, i: usize, dir: Point2) -> f64 {
    let a = geom::wrap_2pi(dir.angle() - scene.reference_direction(i));
    if a > TAU - ANGLE_TOL {
        0.0
    } else {
        a
    }
}

struct LegChecker<'a> {
    poly: Polygon<'a>,
    collinear_area: f64,
}

impl<'a> LegChecker<'a> {
    fn new(scene: &'a PolygonScene) -> Self {
        let (w, h) = geom::bbox_extent(scene.vertices());
        Self {
            poly: scene.polygon(),
            collinear_area: crate::scene::COLLINEAR_REL_AREA * w * h,
        }
    }

    /// The closed segment `pq` stays in the closed exterior and meets no
    /// vertex other than those listed in `endpoints`.
    fn leg_valid(&self, p: Point2, q: Point2, endpoints: &[usize]) -> bool {
        let verts = self.poly.vertices;
        let len = p.dist(q);
        if len <= self.poly.eps {
            return false;
        }
        for (k, &v) in verts.iter().enumerate() {
            if endpoints.contains(&k) {
                continue;
            }
            let d = q - p;
            let t = (v - p).dot(d) / d.dot(d);
            if t > -1e-12 && t < 1.0 + 1e-12 {
                let area = orient(p, q, v).abs() / 2.0;
                if area < self.collinear_area || point_segment_distance(v, p, q) <= self.poly.eps {
                    return false;
                }
            }
        }
        let mut cuts = vec![0.0, 1.0];
        for i in 0..self.poly.len() {
            let (a, b) = self.poly.edge(i);
            if let Some((t, u)) = geom::line_intersection(p, q, a, b) {
                if (-1e-12..=1.0 + 1e-12).contains(&u) && t > 0.0 && t < 1.0 {
                    cuts.push(t);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2).all(|w| {
            if w[1] - w[0] < 1e-14 {
                return true;
            }
            let mid = p.lerp(q, 0.5 * (w[0] + w[1]));
            !self.poly.strictly_contains(mid)
        })
    }
}

/// Straight segments between distinct vertices lying in the closed exterior.
/// One segment per unordered pair, oriented from the lower vertex index.
pub fn visibility_geodesics(scene: &PolygonScene) -> Vec<GeodesicSegment> {
    let checker = LegChecker::new(scene);
    let v = scene.vertices();
    let n = v.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if checker.leg_valid(v[i], v[j], &[i, j]) {
                out.push(GeodesicSegment {
                    from: i,
                    to: j,
                    reflection_edges: Vec::new(),
                    length: v[i].dist(v[j]),
                    departure_angle: exterior_angle(scene, i, v[j] - v[i]),
                    arrival_angle: exterior_angle(scene, j, v[i] - v[j]),
                    path: vec![v[i], v[j]],
                });
            }
        }
    }
    sort_canonical(&mut out);
    out
}

/// Reflected path from vertex `from` to vertex `to` bouncing off `edges` in
/// order, if the unfolded straight line realizes it.
fn unfold_path(
    scene: &PolygonScene,
    checker: &LegChecker<'_>,
    from: usize,
    to: usize,
    edges: &[usize],
) -> Option<GeodesicSegment> {
    let poly = scene.polygon();
    let v = scene.vertices();
    let a = v[from];

    // image of the target: sigma_1 o ... o sigma_k (B)
    let mut target = v[to];
    for &e in edges.iter().rev() {
        let (p, q) = poly.edge(e);
        target = reflect_across(target, p, q);
    }

    let mut points = vec![a];
    let mut last_t = 0.0;
    for (j, &e) in edges.iter().enumerate() {
        // image edge: sigma_1 o ... o sigma_{j-1} (e_j)
        let (mut p, mut q) = poly.edge(e);
        for &prev in edges[..j].iter().rev() {
            let (r, s) = poly.edge(prev);
            p = reflect_across(p, r, s);
            q = reflect_across(q, r, s);
        }
        let (t, u) = geom::line_intersection(a, target, p, q)?;
        if !(t > last_t + 1e-12 && t < 1.0 - 1e-12 && u > 1e-9 && u < 1.0 - 1e-9) {
            return None;
        }
        last_t = t;
        // fold back: sigma_{j-1} o ... o sigma_1 (Q_j)
        let mut point = a.lerp(target, t);
        for &prev in &edges[..j] {
            let (r, s) = poly.edge(prev);
            point = reflect_across(point, r, s);
        }
        points.push(point);
    }
    points.push(v[to]);

    for (j, &e) in edges.iter().enumerate() {
        let (p, q) = poly.edge(e);
        // both neighbours of the bounce on the exterior (right) side
        if orient(p, q, points[j]) >= 0.0 || orient(p, q, points[j + 2]) >= 0.0 {
            return None;
        }
    }
    for (k, leg) in points.windows(2).enumerate() {
        let mut ends = Vec::with_capacity(2);
        if k == 0 {
            ends.push(from);
        }
        if k + 2 == points.len() {
            ends.push(to);
        }
        if !checker.leg_valid(leg[0], leg[1], &ends) {
            return None;
        }
    }

    let n_pts = points.len();
    Some(GeodesicSegment {
        from,
        to,
        reflection_edges: edges.to_vec(),
        length: a.dist(target),
        departure_angle: exterior_angle(scene, from, points[1] - a),
        arrival_angle: exterior_angle(scene, to, points[n_pts - 2] - v[to]),
        path: points,
    })
}

fn edge_sequences(n_edges: usize, len: usize) -> Vec<Vec<usize>> {
    let mut seqs: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        seqs = seqs
            .into_iter()
            .flat_map(|s| {
                (0..n_edges)
                    .filter(|&e| s.last() != Some(&e))
                    .map(|e| {
                        let mut t = s.clone();
                        t.push(e);
                        t
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    seqs
}

/// Straight segments plus billiard segments with up to `max_reflections`
/// bounces. Duplicates (same endpoints and reflection sequence up to
/// reversal) are removed; output is canonically sorted.
pub fn reflected_geodesics(
    scene: &PolygonScene,
    max_reflections: usize,
) -> Result<Vec<GeodesicSegment>, GeodesicError> {
    if max_reflections > HARD_REFLECTION_LIMIT {
        return Err(GeodesicError::CapExceeded {
            requested: max_reflections,
            limit: HARD_REFLECTION_LIMIT,
        });
    }
    let mut out = visibility_geodesics(scene);
    let n = scene.vertices().len();
    let checker = LegChecker::new(scene);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    for depth in 1..=max_reflections {
        let seqs = edge_sequences(n, depth);
        let mut found: Vec<GeodesicSegment> = pairs
            .par_iter()
            .flat_map_iter(|&(i, j)| {
                let checker = &checker;
                seqs.iter().filter_map(move |s| {
                    if i == j {
                        let mut rev = s.clone();
                        rev.reverse();
                        if rev < *s {
                            return None;
                        }
                    }
                    unfold_path(scene, checker, i, j, s)
                })
            })
            .collect();
        out.append(&mut found);
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// Link distance on the doubled cone between arrival and departure directions:
/// `min(x, rho - x)` with `x = theta_in + theta_out`.
pub fn link_separation(
    cone: &ConePoint,
    arrival_angle: f64,
    departure_angle: f64,
) -> Result<f64, GeodesicError> {
    let w = cone.link_length / 2.0;
    for angle in [arrival_angle, departure_angle] {
        if !(angle >= -ANGLE_TOL && angle <= w + ANGLE_TOL) {
            return Err(GeodesicError::AngleOutOfRange { angle, wedge: w });
        }
    }
    let x = (arrival_angle + departure_angle).clamp(0.0, cone.link_length);
    Ok(x.min(cone.link_length - x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DMax {
    pub value: f64,
    /// Reflection cap used for enumeration; `None` when the input set is exhaustive.
    pub cap: Option<usize>,
}

impl DMax {
    /// Summary text, e.g. `D_max>=5.0 (cap=3)`.
    pub fn summary(&self) -> String {
        match self.cap {
            Some(cap) => format!("D_max>={:?} (cap={cap})", self.value),
            None => format!("D_max={:?}", self.value),
        }
    }
}

/// Longest supplied segment; a lower bound for `D_max` when enumeration is capped.
pub fn d_max(segments: &[GeodesicSegment], cap: Option<usize>) -> Result<DMax, GeodesicError> {
    segments
        .iter()
        .map(|s| s.length)
        .max_by(f64::total_cmp)
        .map(|value| DMax { value, cap })
        .ok_or(GeodesicError::EmptyInput)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Junction {
    pub cone: usize,
    pub rho: f64,
    pub separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffractiveChain {
    pub segments: Vec<GeodesicSegment>,
    pub closed: bool,
    pub total_length: f64,
    pub junctions: Vec<Junction>,
    pub n_gamma: usize,
}

fn cone_by_id(cones: &[ConePoint], id: usize) -> Result<&ConePoint, GeodesicError> {
    cones
        .iter()
        .find(|c| c.id == id)
        .ok_or(GeodesicError::UnknownCone(id))
}

/// Chains head-to-tail segments, computing link separations at every
/// diffraction. A closed chain includes the junction at its base cone once.
pub fn build_chain(
    segments: &[GeodesicSegment],
    cones: &[ConePoint],
) -> Result<DiffractiveChain, GeodesicError> {
    if segments.is_empty() {
        return Err(GeodesicError::EmptyInput);
    }
    let mut junctions = Vec::new();
    for (i, pair) in segments.windows(2).enumerate() {
        if pair[0].to != pair[1].from {
            return Err(GeodesicError::BrokenChain(i, i + 1));
        }
        let cone = cone_by_id(cones, pair[0].to)?;
        junctions.push(Junction {
            cone: cone.id,
            rho: cone.link_length,
            separation: link_separation(cone, pair[0].arrival_angle, pair[1].departure_angle)?,
        });
    }
    let first = &segments[0];
    let last = segments.last().unwrap();
    let closed = last.to == first.from;
    if closed {
        let cone = cone_by_id(cones, last.to)?;
        junctions.push(Junction {
            cone: cone.id,
            rho: cone.link_length,
            separation: link_separation(cone, last.arrival_angle, first.departure_angle)?,
        });
    }
    Ok(DiffractiveChain {
        segments: segments.to_vec(),
        closed,
        total_length: segments.iter().map(|s| s.length).sum(),
        n_gamma: junctions.len(),
        junctions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DPlus {
    /// `-inf` when no admissible closed chain exists.
    pub value: f64,
    /// Witness closed chain as directed segments.
    pub witness: Vec<GeodesicSegment>,
    /// Strictly diffractive junctions dropped only because the kernel vanishes there.
    pub vanishing_junctions: Vec<Junction>,
}

impl DPlus {
    pub fn summary(&self) -> String {
        format!("D_plus={:?}", self.value)
    }
}

/// Directed versions of the segments, both orientations, deduplicated.
pub fn directed_segments(segments: &[GeodesicSegment]) -> Vec<GeodesicSegment> {
    let mut out: Vec<GeodesicSegment> = Vec::with_capacity(2 * segments.len());
    for s in segments {
        let r = s.reversed();
        let same = r.from == s.from
            && r.to == s.to
            && r.reflection_edges == s.reflection_edges
            && r.departure_angle == s.departure_angle;
        out.push(s.clone());
        if !same {
            out.push(r);
        }
    }
    out
}

/// Junction graph on directed segments: `a -> b` whenever `a` ends where `b`
/// starts and `admissible(cone, separation)` holds; weight is `b.length`.
pub fn junction_graph<P>(
    cones: &[ConePoint],
    directed: &[GeodesicSegment],
    admissible: P,
) -> Result<Digraph, GeodesicError>
where
    P: Fn(&ConePoint, f64) -> bool,
{
    let mut g = Digraph::new(directed.len());
    for (ia, a) in directed.iter().enumerate() {
        let cone = cone_by_id(cones, a.to)?;
        for (ib, b) in directed.iter().enumerate() {
            if b.from != a.to {
                continue;
            }
            let sep = link_separation(cone, a.arrival_angle, b.departure_angle)?;
            if admissible(cone, sep) {
                g.add_edge(ia, ib, b.length);
            }
        }
    }
    Ok(g)
}

/// Largest length-per-diffraction ratio over admissible closed chains.
pub fn d_plus_max_with<P>(
    cones: &[ConePoint],
    segments: &[GeodesicSegment],
    admissible: P,
) -> Result<DPlus, GeodesicError>
where
    P: Fn(&ConePoint, f64) -> bool,
{
    let directed = directed_segments(segments);
    if directed.is_empty() {
        return Ok(DPlus {
            value: f64::NEG_INFINITY,
            witness: Vec::new(),
            vanishing_junctions: Vec::new(),
        });
    }
    let g = junction_graph(cones, &directed, admissible)?;
    match cycle::max_mean_cycle(&g) {
        Ok(c) => {
            // edge a->b contributes b; rotate so the chain reads in order
            let witness = c
                .edges
                .iter()
                .map(|&e| directed[g.edges[e].to].clone())
                .collect();
            Ok(DPlus {
                value: c.mean,
                witness,
                vanishing_junctions: Vec::new(),
            })
        }
        Err(CycleError::NoCycle) => Ok(DPlus {
            value: f64::NEG_INFINITY,
            witness: Vec::new(),
            vanishing_junctions: Vec::new(),
        }),
        Err(e) => Err(e.into()),
    }
}

/// `D+_max` with the default admissibility: strictly diffractive junction with
/// nonzero diffraction kernel.
pub fn d_plus_max(cones: &[ConePoint], segments: &[GeodesicSegment]) -> Result<DPlus, GeodesicError> {
    let mut out = d_plus_max_with(cones, segments, |c, s| {
        diffraction::admissible_junction(c.link_length, s)
    })?;
    out.vanishing_junctions = vanishing_junctions(cones, segments)?;
    Ok(out)
}

/// Junctions that are strictly diffractive but where `|K|` is below
/// [`diffraction::KERNEL_ZERO_THRESHOLD`], deduplicated by cone and separation.
pub fn vanishing_junctions(cones: &[ConePoint], segments: &[GeodesicSegment]) -> Result<Vec<Junction>, GeodesicError> {
    let directed = directed_segments(segments);
    let mut out: Vec<Junction> = Vec::new();
    for a in &directed {
        let cone = cone_by_id(cones, a.to)?;
        for b in directed.iter().filter(|b| b.from == a.to) {
            let sep = link_separation(cone, a.arrival_angle, b.departure_angle)?;
            let weak = match diffraction::diffraction_kernel(cone.link_length, sep) {
                Ok(k) => k.norm() <= diffraction::KERNEL_ZERO_THRESHOLD,
                Err(_) => false,
            };
            let seen = out
                .iter()
                .any(|j| j.cone == cone.id && (j.separation - sep).abs() < 1e-12);
            if weak && !seen {
                out.push(Junction {
                    cone: cone.id,
                    rho: cone.link_length,
                    separation: sep,
                });
            }
        }
    }
    Ok(out)
}

/// Geometry summary for a polygon scene.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicSummary {
    pub segments: Vec<GeodesicSegment>,
    pub d_max_straight: DMax,
    pub d_max: DMax,
    pub d_plus: DPlus,
}

pub fn analyze_polygon(
    scene: &PolygonScene,
    max_reflections: usize,
) -> Result<GeodesicSummary, GeodesicError> {
    let cones = cone_points(scene)?;
    let straight = visibility_geodesics(scene);
    let segments = reflected_geodesics(scene, max_reflections)?;
    let d_plus = d_plus_max(&cones, &segments)?;
    Ok(GeodesicSummary {
        d_max_straight: d_max(&straight, Some(0))?,
        d_max: d_max(&segments, Some(max_reflections))?,
        d_plus,
        segments,
    })
}

/// Segments of an explicitly described cone surface.
pub fn surface_segments(scene: &ConeSurfaceScene) -> Vec<GeodesicSegment> {
    let mut out: Vec<GeodesicSegment> = scene
        .segments
        .iter()
        .map(|s| GeodesicSegment {
            from: s.from,
            to: s.to,
            reflection_edges: Vec::new(),
            length: s.length,
            departure_angle: s.theta_out,
            arrival_angle: s.theta_in,
            path: Vec::new(),
        })
        .collect();
    sort_canonical(&mut out);
    out
}

pub fn analyze_surface(scene: &ConeSurfaceScene) -> Result<GeodesicSummary, GeodesicError> {
    let cones = scene.cone_points();
    let segments = surface_segments(scene);
    let d = d_max(&segments, None)?;
    Ok(GeodesicSummary {
        d_max_straight: d,
        d_max: d,
        d_plus: d_plus_max(&cones, &segments)?,
        segments,
    })
}

/// CSV with columns `from,to,length,reflections,theta_in,theta_out`, where
/// `theta_in` is the arrival angle at `to` and `theta_out` the departure angle
/// at `from`. Reflection edges are `;`-separated.
pub fn write_segments_csv<W: std::io::Write>(
    segments: &[GeodesicSegment],
    out: W,
) -> Result<(), csv::Error> {
    use crate::io::fmt_f64;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["from", "to", "length", "reflections", "theta_in", "theta_out"])?;
    for s in segments {
        let refl = s
            .reflection_edges
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            s.from.to_string(),
            s.to.to_string(),
            fmt_f64(s.length),
            refl,
            fmt_f64(s.arrival_angle),
            fmt_f64(s.departure_angle),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A chain as a JSON array of indices into `segments` (matching on endpoints,
/// reflection sequence and orientation).
pub fn chain_to_json(chain: &[GeodesicSegment], segments: &[GeodesicSegment]) -> serde_json::Value {
    let ids: Vec<Option<usize>> = chain
        .iter()
        .map(|c| {
            segments.iter().position(|s| {
                (s.from == c.from && s.to == c.to && s.reflection_edges == c.reflection_edges)
                    || {
                        let r = s.reversed();
                        r.from == c.from && r.to == c.to && r.reflection_edges == c.reflection_edges
                    }
            })
        })
        .collect();
    serde_json::json!(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::BoundaryCondition;
    use std::f64::consts::PI;

    fn poly(v: &[(f64, f64)]) -> PolygonScene {
        PolygonScene::new(
            v.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
            BoundaryCondition::Dirichlet,
            false,
        )
        .unwrap()
    }

    fn right_triangle() -> PolygonScene {
        poly(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)])
    }

    fn unit_square() -> PolygonScene {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn triangle_visibility() {
        let segs = visibility_geodesics(&right_triangle());
        let lengths: Vec<f64> = segs.iter().map(|s| s.length).collect();
        assert_eq!(lengths, vec![3.0, 4.0, 5.0]);
    }

    #[test]
    fn square_edges_only() {
        let segs = visibility_geodesics(&unit_square());
        assert_eq!(segs.len(), 4);
        assert!(segs.iter().all(|s| s.length == 1.0));
        // grazing along the edge to the predecessor has angle 0
        let s01 = segs.iter().find(|s| s.from == 0 && s.to == 1).unwrap();
        assert!(s01.departure_angle.abs() < 1e-12 || (s01.departure_angle - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn zero_reflections_equal_visibility() {
        let s = unit_square();
        assert_eq!(reflected_geodesics(&s, 0).unwrap(), visibility_geodesics(&s));
        assert!(matches!(
            reflected_geodesics(&s, 13),
            Err(GeodesicError::CapExceeded { requested: 13, .. })
        ));
    }

    #[test]
    fn square_unfolding_across_bottom_edge() {
        let s = unit_square();
        let checker = LegChecker::new(&s);
        // (0,0) -> (1,1) bouncing off edge 0 (y = 0): image (1,-1), length sqrt 2,
        // but the bounce point lies at a vertex of that edge; not realized.
        assert!(unfold_path(&s, &checker, 0, 2, &[0]).is_none());
        let img = reflect_across(Point2::new(1.0, 1.0), Point2::new(0.0, 0.0), Point2::new(1.0, 0.0));
        assert_eq!(img, Point2::new(1.0, -1.0));
    }

    #[test]
    fn link_separation_conventions() {
        let flat = ConePoint::from_link_length(0, 2.0 * PI);
        assert_eq!(link_separation(&flat, 0.3, PI - 0.3).unwrap(), PI);
        let square = ConePoint::from_link_length(0, 3.0 * PI);
        assert!((link_separation(&square, PI / 2.0, PI / 2.0).unwrap() - PI).abs() < 1e-15);
        assert!((link_separation(&square, PI / 4.0, PI / 4.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!(matches!(
            link_separation(&square, 5.0, 0.1),
            Err(GeodesicError::AngleOutOfRange { .. })
        ));
    }

    #[test]
    fn d_max_examples() {
        let segs = visibility_geodesics(&right_triangle());
        let d = d_max(&segs, Some(0)).unwrap();
        assert_eq!(d.value, 5.0);
        assert_eq!(d_max(&segs[..1], None).unwrap().value, 3.0);
        assert_eq!(d_max(&[], None), Err(GeodesicError::EmptyInput));
        assert_eq!(
            DMax {
                value: 5.0,
                cap: Some(3)
            }
            .summary(),
            "D_max>=5.0 (cap=3)"
        );
    }

    fn seg(from: usize, to: usize, length: f64) -> GeodesicSegment {
        GeodesicSegment {
            from,
            to,
            reflection_edges: vec![],
            length,
            departure_angle: 0.2,
            arrival_angle: 0.3,
            path: vec![],
        }
    }

    #[test]
    fn chain_counting() {
        let cones: Vec<ConePoint> = (0..4).map(|i| ConePoint::from_link_length(i, 3.0 * PI)).collect();
        let open = build_chain(&[seg(0, 1, 1.0)], &cones).unwrap();
        assert_eq!((open.n_gamma, open.closed), (0, false));
        let closed = build_chain(&[seg(0, 1, 1.0), seg(1, 0, 2.0)], &cones).unwrap();
        assert_eq!((closed.n_gamma, closed.closed), (2, true));
        assert_eq!(closed.total_length, 3.0);
        let three = build_chain(&[seg(0, 1, 1.0), seg(1, 2, 1.0), seg(2, 3, 1.0)], &cones).unwrap();
        assert_eq!(three.n_gamma, 2);
        assert_eq!(three.junctions.iter().map(|j| j.cone).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(
            build_chain(&[seg(0, 1, 1.0), seg(2, 3, 1.0)], &cones),
            Err(GeodesicError::BrokenChain(0, 1))
        );
    }

    #[test]
    fn d_plus_two_cones() {
        let cones: Vec<ConePoint> = (0..2).map(|i| ConePoint::from_link_length(i, 3.0 * PI)).collect();
        let d = d_plus_max(&cones, &[seg(0, 1, 2.5)]).unwrap();
        assert_eq!(d.value, 2.5);
        assert_eq!(d.summary(), "D_plus=2.5");
    }

    #[test]
    fn d_plus_vanishing_kernels() {
        let cones = vec![
            ConePoint::from_link_length(0, PI),
            ConePoint::from_link_length(1, 2.0 * PI / 3.0),
        ];
        let d = d_plus_max(&cones, &[seg(0, 1, 2.0)]).unwrap();
        assert_eq!(d.value, f64::NEG_INFINITY);
        assert_eq!(d.summary(), "D_plus=-inf");
    }
}
