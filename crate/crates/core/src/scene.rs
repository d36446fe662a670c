//! Scattering configurations: parsing, invariant checks and cone-point data.
//!
//! A scene document is a UTF-8 JSON object whose `"model"` key selects one of
//! `polygon`, `delta_line`, `delta_circle` or `cone_surface`. Angles never
//! appear in polygon input; they are derived from the vertices.

use crate::geom::{self, orient, Point2, Polygon};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Angle tolerance (radians) for a vertex to count as flat.
pub const FLAT_ANGLE_TOL: f64 = 1e-9;
/// Relative area threshold for the collinearity test.
pub const COLLINEAR_REL_AREA: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("malformed scene document: {0}")]
    MalformedDocument(String),
    #[error("unknown scene model {0:?}")]
    UnknownModel(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("degenerate angle at vertex {vertex}: interior angle is pi")]
    DegenerateAngle { vertex: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    #[default]
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonScene {
    vertices: Vec<Point2>,
    pub boundary_condition: BoundaryCondition,
    pub nontrapping_asserted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaLineScene {
    pub positions: Vec<f64>,
    pub strengths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaCircleScene {
    pub radius: f64,
    pub strength: f64,
}

/// A Euclidean surface with cone points described directly by its link
/// lengths and cone-to-cone geodesic segments, bypassing polygon geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSurfaceScene {
    pub link_lengths: Vec<f64>,
    pub segments: Vec<SurfaceSegment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSegment {
    pub from: usize,
    pub to: usize,
    pub length: f64,
    /// Arrival angle at `to`, measured inside the half-link `(0, rho/2)`.
    pub theta_in: f64,
    /// Departure angle at `from`.
    pub theta_out: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scene {
    Polygon(PolygonScene),
    DeltaLine(DeltaLineScene),
    DeltaCircle(DeltaCircleScene),
    ConeSurface(ConeSurfaceScene),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConePoint {
    pub id: usize,
    pub position: Point2,
    /// Interior angle of the polygon at the vertex.
    pub interior_angle: f64,
    /// Exterior wedge opening `2pi - alpha`.
    pub wedge_angle: f64,
    /// Length of the link circle on the doubled exterior.
    pub link_length: f64,
}

impl ConePoint {
    /// Cone point with a prescribed link length; used for cone surfaces.
    pub fn from_link_length(id: usize, link_length: f64) -> Self {
        Self {
            id,
            position: Point2::new(f64::NAN, f64::NAN),
            interior_angle: f64::NAN,
            wedge_angle: link_length / 2.0,
            link_length,
        }
    }
}

impl PolygonScene {
    /// Validated constructor. Clockwise input is reversed to counterclockwise.
    pub fn new(
        vertices: Vec<Point2>,
        boundary_condition: BoundaryCondition,
        nontrapping_asserted: bool,
    ) -> Result<Self, SceneError> {
        let scene = Self::new_unchecked(vertices, boundary_condition, nontrapping_asserted);
        if let Some(v) = scene.first_invariant_violation() {
            return Err(SceneError::InvariantViolation(v));
        }
        Ok(scene)
    }

    /// Builds a scene without checking invariants. Only orientation is normalized.
    pub fn new_unchecked(
        mut vertices: Vec<Point2>,
        boundary_condition: BoundaryCondition,
        nontrapping_asserted: bool,
    ) -> Self {
        if vertices.len() >= 3 && geom::signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Self {
            vertices,
            boundary_condition,
            nontrapping_asserted,
        }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn polygon(&self) -> Polygon<'_> {
        Polygon::new(&self.vertices)
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    /// Interior angle at vertex `i`, in `(0, 2pi)` for a counterclockwise polygon.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        let v = self.vertices[i];
        let next = self.vertices[(i + 1) % n] - v;
        let prev = self.vertices[(i + n - 1) % n] - v;
        // counterclockwise sweep from `next` to `prev` covers the interior
        geom::wrap_2pi(prev.angle() - next.angle())
    }

    /// Direction angle of the edge from vertex `i` to its predecessor; exterior
    /// angles at `i` are measured counterclockwise from here.
    pub fn reference_direction(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        (self.vertices[(i + n - 1) % n] - self.vertices[i]).angle()
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| self.interior_angle(i) < PI)
    }

    fn collinear_triple(&self) -> Option<(usize, usize, usize)> {
        let v = &self.vertices;
        let (w, h) = geom::bbox_extent(v);
        let threshold = COLLINEAR_REL_AREA * w * h;
        let n = v.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if orient(v[i], v[j], v[k]).abs() / 2.0 < threshold {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    fn self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let (c, d) = (self.vertices[j], self.vertices[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn first_invariant_violation(&self) -> Option<String> {
        let n = self.vertices.len();
        if n < 3 {
            return Some("polygon needs at least three vertices".into());
        }
        if self.vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Some("vertex coordinates must be finite".into());
        }
        if let Some((i, j, k)) = self.collinear_triple() {
            return Some(format!("three vertices collinear ({i}, {j}, {k})"));
        }
        if let Some((i, j)) = self.self_intersection() {
            return Some(format!("polygon not simple (edges {i} and {j} intersect)"));
        }
        for i in 0..n {
            let a = self.interior_angle(i);
            if (a - PI).abs() < FLAT_ANGLE_TOL {
                return Some(format!("interior angle equal to pi at vertex {i}"));
            }
        }
        None
    }
}

fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

impl DeltaLineScene {
    pub fn new(positions: Vec<f64>, strengths: Vec<f64>) -> Result<Self, SceneError> {
        if positions.is_empty() {
            return Err(SceneError::InvariantViolation(
                "delta line needs at least one delta".into(),
            ));
        }
        if positions.len() != strengths.len() {
            return Err(SceneError::InvariantViolation(
                "positions and strengths differ in length".into(),
            ));
        }
        if positions.iter().chain(&strengths).any(|v| !v.is_finite()) {
            return Err(SceneError::InvariantViolation(
                "positions and strengths must be finite".into(),
            ));
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SceneError::InvariantViolation(
                "positions not strictly increasing".into(),
            ));
        }
        if strengths.contains(&0.0) {
            return Err(SceneError::InvariantViolation(
                "delta strengths must be nonzero".into(),
            ));
        }
        Ok(Self {
            positions,
            strengths,
        })
    }

    /// Diameter of the support, `x_last - x_first`.
    pub fn diameter(&self) -> f64 {
        self.positions.last().unwrap() - self.positions[0]
    }
}

impl DeltaCircleScene {
    pub fn new(radius: f64, strength: f64) -> Result<Self, SceneError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(SceneError::InvariantViolation("radius must be positive".into()));
        }
        if !strength.is_finite() {
            return Err(SceneError::InvariantViolation("strength must be finite".into()));
        }
        Ok(Self { radius, strength })
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

impl ConeSurfaceScene {
    pub fn new(link_lengths: Vec<f64>, segments: Vec<SurfaceSegment>) -> Result<Self, SceneError> {
        if link_lengths.is_empty() {
            return Err(SceneError::InvariantViolation("cone surface needs a cone".into()));
        }
        if link_lengths.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(SceneError::InvariantViolation("link lengths must be positive".into()));
        }
        for (k, s) in segments.iter().enumerate() {
            let n = link_lengths.len();
            if s.from >= n || s.to >= n {
                return Err(SceneError::InvariantViolation(format!(
                    "segment {k} references an unknown cone"
                )));
            }
            if !(s.length > 0.0 && s.length.is_finite()) {
                return Err(SceneError::InvariantViolation(format!(
                    "segment {k} has nonpositive length"
                )));
            }
            let within = |theta: f64, rho: f64| (0.0..=rho / 2.0).contains(&theta);
            if !within(s.theta_out, link_lengths[s.from]) || !within(s.theta_in, link_lengths[s.to]) {
                return Err(SceneError::InvariantViolation(format!(
                    "segment {k} angles outside the half link"
                )));
            }
        }
        Ok(Self {
            link_lengths,
            segments,
        })
    }

    pub fn cone_points(&self) -> Vec<ConePoint> {
        self.link_lengths
            .iter()
            .enumerate()
            .map(|(i, &rho)| ConePoint::from_link_length(i, rho))
            .collect()
    }
}

/// One ConePoint per vertex, in vertex order, with `rho = 2 (2pi - alpha)`.
pub fn cone_points(scene: &PolygonScene) -> Result<Vec<ConePoint>, SceneError> {
    (0..scene.vertices.len())
        .map(|i| {
            let alpha = scene.interior_angle(i);
            if (alpha - PI).abs() < FLAT_ANGLE_TOL {
                return Err(SceneError::DegenerateAngle { vertex: i });
            }
            let w = TAU - alpha;
            Ok(ConePoint {
                id: i,
                position: scene.vertices[i],
                interior_angle: alpha,
                wedge_angle: w,
                link_length: 2.0 * w,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// documents

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonDoc {
    #[allow(dead_code)]
    model: String,
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    boundary_condition: BoundaryCondition,
    #[serde(default)]
    nontrapping_asserted: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaLineDoc {
    #[allow(dead_code)]
    model: String,
    positions: Vec<f64>,
    strengths: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaCircleDoc {
    #[allow(dead_code)]
    model: String,
    #[serde(rename = "R")]
    radius: f64,
    #[serde(rename = "V")]
    strength: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeSurfaceDoc {
    #[allow(dead_code)]
    model: String,
    link_lengths: Vec<f64>,
    segments: Vec<SurfaceSegment>,
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, SceneError> {
    serde_json::from_value(v).map_err(|e| SceneError::MalformedDocument(e.to_string()))
}

/// Parses and validates a scene document.
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| SceneError::MalformedDocument(e.to_string()))?;
    let model = match value.get("model") {
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(SceneError::UnknownModel(other.to_string())),
        None => return Err(SceneError::MalformedDocument("missing \"model\" key".into())),
    };
    match model.as_str() {
        "polygon" => {
            let doc: PolygonDoc = from_value(value)?;
            let vertices = doc.vertices.iter().map(|&[x, y]| Point2::new(x, y)).collect();
            Ok(Scene::Polygon(PolygonScene::new(
                vertices,
                doc.boundary_condition,
                doc.nontrapping_asserted,
            )?))
        }
        "delta_line" => {
            let doc: DeltaLineDoc = from_value(value)?;
            Ok(Scene::DeltaLine(DeltaLineScene::new(doc.positions, doc.strengths)?))
        }
        "delta_circle" => {
            let doc: DeltaCircleDoc = from_value(value)?;
            Ok(Scene::DeltaCircle(DeltaCircleScene::new(doc.radius, doc.strength)?))
        }
        "cone_surface" => {
            let doc: ConeSurfaceDoc = from_value(value)?;
            Ok(Scene::ConeSurface(ConeSurfaceScene::new(doc.link_lengths, doc.segments)?))
        }
        other => Err(SceneError::UnknownModel(other.to_string())),
    }
}

impl Scene {
    /// Serializes back to a scene document; `parse_scene` inverts this.
    pub fn to_document(&self) -> String {
        let v = match self {
            Scene::Polygon(p) => serde_json::json!({
                "model": "polygon",
                "vertices": p.vertices.iter().map(|q| [q.x, q.y]).collect::<Vec<_>>(),
                "boundary_condition": p.boundary_condition,
                "nontrapping_asserted": p.nontrapping_asserted,
            }),
            Scene::DeltaLine(d) => serde_json::json!({
                "model": "delta_line",
                "positions": d.positions,
                "strengths": d.strengths,
            }),
            Scene::DeltaCircle(c) => serde_json::json!({
                "model": "delta_circle",
                "R": c.radius,
                "V": c.strength,
            }),
            Scene::ConeSurface(s) => serde_json::json!({
                "model": "cone_surface",
                "link_lengths": s.link_lengths,
                "segments": s.segments,
            }),
        };
        v.to_string()
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Scene::Polygon(_) => "polygon",
            Scene::DeltaLine(_) => "delta_line",
            Scene::DeltaCircle(_) => "delta_circle",
            Scene::ConeSurface(_) => "cone_surface",
        }
    }
}

// ---------------------------------------------------------------------------
// validation report

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssumptionStatus {
    Verified,
    AssertedByUser,
    NeedsAssertion,
    /// Holds for flat polygon exteriors; recorded as asserted, not proved.
    AssertedFlatGeometry,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub status: AssumptionStatus,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model: &'static str,
    pub checks: Vec<AssumptionCheck>,
}

impl ValidationReport {
    pub fn status_of(&self, name: &str) -> Option<AssumptionStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    pub fn has_violation(&self) -> bool {
        self.checks.iter().any(|c| c.status == AssumptionStatus::Violated)
    }
}

pub const CHECK_NONTRAPPING: &str = "nontrapping";
pub const CHECK_NO_THREE_COLLINEAR: &str = "no-three-cone-points-collinear";
pub const CHECK_NON_CONJUGACY: &str = "non-conjugacy";
pub const CHECK_SIMPLE: &str = "simple-polygon";
pub const CHECK_ANGLES: &str = "angles";

pub fn validate(scene: &Scene) -> ValidationReport {
    match scene {
        Scene::Polygon(p) => validate_polygon(p),
        other => ValidationReport {
            model: other.model_name(),
            checks: vec![AssumptionCheck {
                name: "invariants",
                status: AssumptionStatus::Verified,
                details: "checked at construction".into(),
            }],
        },
    }
}

pub fn validate_polygon(p: &PolygonScene) -> ValidationReport {
    use AssumptionStatus::*;
    let mut checks = Vec::new();

    let simple = p.vertices.len() >= 3 && p.self_intersection().is_none();
    checks.push(AssumptionCheck {
        name: CHECK_SIMPLE,
        status: if simple { Verified } else { Violated },
        details: match p.self_intersection() {
            Some((i, j)) => format!("edges {i} and {j} intersect"),
            None => String::new(),
        },
    });

    let collinear = p.collinear_triple();
    checks.push(AssumptionCheck {
        name: CHECK_NO_THREE_COLLINEAR,
        status: if collinear.is_some() { Violated } else { Verified },
        details: collinear
            .map(|(i, j, k)| format!("vertices {i}, {j}, {k} collinear"))
            .unwrap_or_default(),
    });

    let flat: Vec<usize> = (0..p.vertices.len())
        .filter(|&i| (p.interior_angle(i) - PI).abs() < FLAT_ANGLE_TOL)
        .collect();
    checks.push(AssumptionCheck {
        name: CHECK_ANGLES,
        status: if flat.is_empty() { Verified } else { Violated },
        details: if flat.is_empty() {
            String::new()
        } else {
            format!("flat vertices {flat:?}")
        },
    });

    let (status, details) = if !simple {
        (NotApplicable, "polygon not simple".to_string())
    } else if p.is_convex() {
        (Verified, "convex obstacle".to_string())
    } else if p.nontrapping_asserted {
        (AssertedByUser, "nonconvex; nontrapping asserted by user".to_string())
    } else {
        (NeedsAssertion, "nonconvex; set nontrapping_asserted".to_string())
    };
    checks.push(AssumptionCheck {
        name: CHECK_NONTRAPPING,
        status,
        details,
    });

    checks.push(AssumptionCheck {
        name: CHECK_NON_CONJUGACY,
        status: AssertedFlatGeometry,
        details: "flat polygon exterior".into(),
    });

    ValidationReport {
        model: "polygon",
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PolygonScene {
        PolygonScene::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(0.0, 1.0),
            ],
            BoundaryCondition::Dirichlet,
            false,
        )
        .unwrap()
    }

    #[test]
    fn parses_delta_line() {
        let s = parse_scene(r#"{"model":"delta_line","positions":[0,1],"strengths":[1,1]}"#).unwrap();
        assert_eq!(
            s,
            Scene::DeltaLine(DeltaLineScene {
                positions: vec![0.0, 1.0],
                strengths: vec![1.0, 1.0]
            })
        );
    }

    #[test]
    fn rejects_collinear_polygon() {
        let err = parse_scene(r#"{"model":"polygon","vertices":[[0,0],[1,0],[2,0],[0,1]]}"#)
            .unwrap_err();
        match err {
            SceneError::InvariantViolation(msg) => assert!(msg.contains("three vertices collinear")),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn parses_delta_circle_with_diameter() {
        let s = parse_scene(r#"{"model":"delta_circle","R":1.0,"V":5.0}"#).unwrap();
        let Scene::DeltaCircle(c) = s else { panic!() };
        assert_eq!((c.radius, c.strength, c.diameter()), (1.0, 5.0, 2.0));
    }

    #[test]
    fn error_kinds() {
        assert!(matches!(parse_scene("{"), Err(SceneError::MalformedDocument(_))));
        assert!(matches!(
            parse_scene(r#"{"model":"sphere"}"#),
            Err(SceneError::UnknownModel(_))
        ));
        assert!(matches!(
            parse_scene(r#"{"model":"delta_line","positions":[1,0],"strengths":[1,1]}"#),
            Err(SceneError::InvariantViolation(_))
        ));
        assert!(matches!(
            parse_scene(r#"{"model":"delta_circle","R":0,"V":1}"#),
            Err(SceneError::InvariantViolation(_))
        ));
        assert!(matches!(
            parse_scene(r#"{"model":"delta_line","positions":[],"strengths":[]}"#),
            Err(SceneError::InvariantViolation(_))
        ));
    }

    #[test]
    fn square_cone_points() {
        let cones = cone_points(&square()).unwrap();
        assert_eq!(cones.len(), 4);
        for c in &cones {
            assert!((c.interior_angle - PI / 2.0).abs() < 1e-12);
            assert!((c.link_length - 3.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn equilateral_cone_points() {
        let h = 3f64.sqrt() / 2.0;
        let tri = PolygonScene::new(
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)],
            BoundaryCondition::Neumann,
            false,
        )
        .unwrap();
        for c in cone_points(&tri).unwrap() {
            assert!((c.link_length - 10.0 * PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn right_triangle_positions_preserved() {
        let v = vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.0, 3.0)];
        let tri = PolygonScene::new(v.clone(), BoundaryCondition::Dirichlet, false).unwrap();
        let cones = cone_points(&tri).unwrap();
        assert_eq!(cones.iter().map(|c| c.position).collect::<Vec<_>>(), v);
        assert_eq!(cones.iter().map(|c| c.id).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let tri = PolygonScene::new(
            vec![Point2::new(0.0, 0.0), Point2::new(0.0, 3.0), Point2::new(4.0, 0.0)],
            BoundaryCondition::Dirichlet,
            false,
        )
        .unwrap();
        assert!(geom::signed_area(tri.vertices()) > 0.0);
    }

    #[test]
    fn self_intersecting_rejected() {
        let bow = PolygonScene::new(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(2.0, 2.0),
                Point2::new(2.0, 0.0),
                Point2::new(0.0, 2.1),
            ],
            BoundaryCondition::Dirichlet,
            false,
        );
        assert!(matches!(bow, Err(SceneError::InvariantViolation(m)) if m.contains("not simple")));
    }

    #[test]
    fn degenerate_angle_reported_by_cone_points() {
        let p = PolygonScene::new_unchecked(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(2.0, 0.0),
                Point2::new(1.0, 1.0),
            ],
            BoundaryCondition::Dirichlet,
            false,
        );
        assert_eq!(cone_points(&p), Err(SceneError::DegenerateAngle { vertex: 1 }));
    }

    #[test]
    fn validation_statuses() {
        let convex = Scene::Polygon(
            PolygonScene::new(
                vec![
                    Point2::new(0.0, 0.0),
                    Point2::new(3.0, 0.0),
                    Point2::new(2.5, 2.0),
                    Point2::new(0.2, 1.5),
                ],
                BoundaryCondition::Dirichlet,
                false,
            )
            .unwrap(),
        );
        let r = validate(&convex);
        assert_eq!(r.status_of(CHECK_NONTRAPPING), Some(AssumptionStatus::Verified));
        assert_eq!(
            r.status_of(CHECK_NON_CONJUGACY),
            Some(AssumptionStatus::AssertedFlatGeometry)
        );

        let l_shape = vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.1, 1.05),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.1),
        ];
        let nonconvex = PolygonScene::new(l_shape.clone(), BoundaryCondition::Dirichlet, false).unwrap();
        assert!(!nonconvex.is_convex());
        assert_eq!(
            validate_polygon(&nonconvex).status_of(CHECK_NONTRAPPING),
            Some(AssumptionStatus::NeedsAssertion)
        );
        let asserted = PolygonScene::new(l_shape, BoundaryCondition::Dirichlet, true).unwrap();
        assert_eq!(
            validate_polygon(&asserted).status_of(CHECK_NONTRAPPING),
            Some(AssumptionStatus::AssertedByUser)
        );

        let collinear = PolygonScene::new_unchecked(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(2.0, 0.0),
                Point2::new(0.0, 1.0),
            ],
            BoundaryCondition::Dirichlet,
            false,
        );
        let r = validate_polygon(&collinear);
        assert_eq!(
            r.status_of(CHECK_NO_THREE_COLLINEAR),
            Some(AssumptionStatus::Violated)
        );
        assert!(r.has_violation());
    }
}
