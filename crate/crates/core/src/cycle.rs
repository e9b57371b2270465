//! Certified crossing limit cycles of three-zone systems.
//!
//! A closure solution is only a candidate: the four corners must be crossing
//! points and each arc must run, under its own zone's flow, from one corner to
//! the next without leaving the zone. The certificate records the evidence.

use serde::{Deserialize, Serialize};

use crate::closure::{residuals_three_zone, solve, ClosureBranch, ClosureOutcome};
use crate::flow::{
    classify_boundary_point, flight_time, flow, orbit_samples, CrossingClassification,
    CrossingLabel,
};
use crate::model::{PiecewiseSystem, Point, SwitchingLine, ZoneId, ZoneLayout};

/// Samples per arc in the certificate polyline unless the caller asks otherwise.
pub const DEFAULT_ARC_SAMPLES: usize = 256;

/// Largest accepted distance between an arc's end and the next corner.
pub const ARC_CLOSURE_TOL: f64 = 1e-8;

/// Closure residuals must be below this times `1 + coefficient scale`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// One arc of the cycle, traversed by a single zone field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub zone: ZoneId,
    /// Index into the corner list of the arc's start.
    pub from: usize,
    /// Index into the corner list of the arc's end.
    pub to: usize,
}

/// Arcs in traversal order: right zone from `(1, y0)` to `(1, y1)`, center zone
/// down to `(-1, y2)`, left zone to `(-1, y3)`, center zone back to `(1, y0)`.
pub const ARCS: [Arc; 4] = [
    Arc {
        zone: ZoneId::Right,
        from: 0,
        to: 1,
    },
    Arc {
        zone: ZoneId::Center,
        from: 1,
        to: 2,
    },
    Arc {
        zone: ZoneId::Left,
        from: 2,
        to: 3,
    },
    Arc {
        zone: ZoneId::Center,
        from: 3,
        to: 0,
    },
];

/// `(1, y0)`, `(1, y1)`, `(-1, y2)`, `(-1, y3)`.
pub fn corners([y0, y1, y2, y3]: [f64; 4]) -> [Point; 4] {
    [
        Point::new(1.0, y0),
        Point::new(1.0, y1),
        Point::new(-1.0, y2),
        Point::new(-1.0, y3),
    ]
}

fn corner_line(index: usize) -> SwitchingLine {
    if index < 2 {
        SwitchingLine::Right
    } else {
        SwitchingLine::Left
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerCrossing {
    pub point: Point,
    pub line: SwitchingLine,
    pub classification: CrossingClassification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub configuration: String,
    pub branch: ClosureBranch,
    /// `[y0, y1, y2, y3]`
    pub ordinates: [f64; 4],
    pub corners: [Point; 4],
    pub crossings: Vec<CornerCrossing>,
    /// Closure residuals at the ordinates.
    pub residuals: [f64; 4],
    pub residual_norm: f64,
    /// Flight times of the arcs in [`ARCS`] order.
    pub flight_times: [f64; 4],
    /// Distance between each arc's computed end point and the next corner.
    pub arc_gaps: [f64; 4],
    pub period: f64,
    /// Closed polyline through all arcs, starting and ending at `(1, y0)`.
    pub polyline: Vec<Point>,
}

impl CycleCertificate {
    /// Products of the adjacent normal velocities at `(-1, y2)`, `(-1, y3)`,
    /// `(1, y0)`, `(1, y1)`; all positive for crossing corners.
    pub fn crossing_products(&self) -> [f64; 4] {
        let p = |i: usize| self.crossings[i].classification.product;
        [p(2), p(3), p(0), p(1)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CycleOutcome {
    Found {
        certificate: Box<CycleCertificate>,
    },
    NotFound {
        closure: ClosureOutcome,
        reason: String,
    },
}

impl CycleOutcome {
    pub fn certificate(&self) -> Option<&CycleCertificate> {
        match self {
            CycleOutcome::Found { certificate } => Some(certificate),
            CycleOutcome::NotFound { .. } => None,
        }
    }
}

pub fn find_limit_cycle(system: &PiecewiseSystem) -> Option<CycleCertificate> {
    match search_limit_cycle(system, DEFAULT_ARC_SAMPLES) {
        CycleOutcome::Found { certificate } => Some(*certificate),
        CycleOutcome::NotFound { .. } => None,
    }
}

/// Solves the closure equations and certifies the candidate, if any.
pub fn search_limit_cycle(system: &PiecewiseSystem, samples_per_arc: usize) -> CycleOutcome {
    let closure = solve(system);
    let ordinates = match &closure {
        ClosureOutcome::UniqueCycleCandidate { ordinates, .. } => *ordinates,
        other => {
            let reason = other.branch().description().to_string();
            return CycleOutcome::NotFound { closure, reason };
        }
    };
    match certify(system, ordinates, closure.branch(), samples_per_arc) {
        Ok(certificate) => CycleOutcome::Found {
            certificate: Box::new(certificate),
        },
        Err(reason) => CycleOutcome::NotFound { closure, reason },
    }
}

/// Builds a certificate for given ordinates, or explains why they do not form
/// a crossing periodic orbit.
pub fn certify(
    system: &PiecewiseSystem,
    ordinates: [f64; 4],
    branch: ClosureBranch,
    samples_per_arc: usize,
) -> Result<CycleCertificate, String> {
    if system.layout() != ZoneLayout::ThreeZone {
        return Err("cycle certification needs a three-zone layout".into());
    }
    let residuals = residuals_three_zone(system, ordinates).map_err(|e| e.to_string())?;
    let residual_norm = residuals.max_abs();
    let residual_cutoff = RESIDUAL_TOL * (1.0 + system.coefficient_scale());
    if residual_norm > residual_cutoff {
        return Err(format!(
            "closure residual {residual_norm:e} exceeds {residual_cutoff:e}"
        ));
    }
    let corners = corners(ordinates);

    let mut crossings = Vec::with_capacity(4);
    for (i, &point) in corners.iter().enumerate() {
        let line = corner_line(i);
        let classification =
            classify_boundary_point(system, point, line).map_err(|e| e.to_string())?;
        if classification.label != CrossingLabel::Crossing {
            return Err(format!(
                "corner ({}, {}) is a {:?} point",
                point.x, point.y, classification.label
            ));
        }
        crossings.push(CornerCrossing {
            point,
            line,
            classification,
        });
    }

    let mut flight_times = [0.0; 4];
    let mut arc_gaps = [0.0; 4];
    let mut polyline = Vec::with_capacity(4 * samples_per_arc + 1);
    for (k, arc) in ARCS.iter().enumerate() {
        let field = system.field(arc.zone).expect("three-zone layout");
        let (start, end) = (corners[arc.from], corners[arc.to]);
        let t = flight_time(field, start, end.x).map_err(|e| {
            format!(
                "arc in zone {} from ({}, {}): {e}",
                arc.zone, start.x, start.y
            )
        })?;
        let gap = flow(field, start, t).distance(end);
        if gap > ARC_CLOSURE_TOL * (1.0 + end.norm()) {
            return Err(format!(
                "arc in zone {} ends {gap:e} away from ({}, {})",
                arc.zone, end.x, end.y
            ));
        }
        flight_times[k] = t;
        arc_gaps[k] = gap;
        let samples = orbit_samples(field, start, t, samples_per_arc);
        let take = if k == 3 {
            samples.len()
        } else {
            samples.len() - 1
        };
        polyline.extend_from_slice(&samples[..take]);
    }
    if let Some(last) = polyline.last_mut() {
        *last = corners[0];
    }

    let mut values = [0.0; 4];
    values.copy_from_slice(&residuals.values);
    Ok(CycleCertificate {
        configuration: system.configuration(),
        branch,
        ordinates,
        corners,
        crossings,
        residuals: values,
        residual_norm,
        flight_times,
        arc_gaps,
        period: flight_times.iter().sum(),
        polyline,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Re-derives every quantity in a certificate from the system alone.
pub fn verify_certificate(system: &PiecewiseSystem, cert: &CycleCertificate) -> VerificationReport {
    let mut checks = Vec::new();
    let mut push = |name: String, measured: f64, threshold: f64| {
        checks.push(Check {
            name,
            passed: measured <= threshold,
            measured,
            threshold,
        });
    };
    let layout_ok = system.layout() == ZoneLayout::ThreeZone;
    push(
        "three-zone layout".into(),
        if layout_ok { 0.0 } else { 1.0 },
        0.0,
    );
    if !layout_ok {
        return VerificationReport { checks };
    }

    let residual_cutoff = RESIDUAL_TOL * (1.0 + system.coefficient_scale());
    let residual = residuals_three_zone(system, cert.ordinates)
        .map(|r| r.max_abs())
        .unwrap_or(f64::INFINITY);
    push("closure residual".into(), residual, residual_cutoff);

    let expected = corners(cert.ordinates);
    let corner_error = expected
        .iter()
        .zip(&cert.corners)
        .fold(0.0f64, |m, (a, b)| m.max(a.distance(*b)));
    push("corners match ordinates".into(), corner_error, 0.0);

    let [y0, y1, y2, y3] = cert.ordinates;
    push("y1 < y0".into(), if y1 < y0 { 0.0 } else { y1 - y0 }, 0.0);
    push("y2 < y3".into(), if y2 < y3 { 0.0 } else { y2 - y3 }, 0.0);

    for (i, &point) in expected.iter().enumerate() {
        let line = corner_line(i);
        let product = classify_boundary_point(system, point, line)
            .ok()
            .filter(|c| c.label == CrossingLabel::Crossing)
            .map(|c| c.product);
        // measured is the negated product: crossing corners give a negative value
        push(
            format!("crossing at ({}, {})", point.x, point.y),
            product.map_or(f64::INFINITY, |p| -p),
            0.0,
        );
    }

    let mut period = 0.0;
    for (k, arc) in ARCS.iter().enumerate() {
        let field = system.field(arc.zone).expect("three-zone layout");
        let (start, end) = (expected[arc.from], expected[arc.to]);
        let label = format!("arc {} in zone {}", k + 1, arc.zone);
        match flight_time(field, start, end.x) {
            Ok(t) => {
                period += t;
                push(
                    format!("{label} flight time"),
                    (t - cert.flight_times[k]).abs(),
                    1e-9 * (1.0 + t),
                );
                push(
                    format!("{label} closes"),
                    flow(field, start, t).distance(end),
                    ARC_CLOSURE_TOL * (1.0 + end.norm()),
                );
            }
            Err(_) => push(format!("{label} flight time"), f64::INFINITY, 0.0),
        }
    }
    push(
        "period".into(),
        (period - cert.period).abs(),
        1e-9 * (1.0 + period),
    );
    VerificationReport { checks }
}

/// Returns `true` if `point` is a crossing point of `line` where the flow
/// enters the zone on the right.
pub fn enters_right(system: &PiecewiseSystem, point: Point, line: SwitchingLine) -> bool {
    classify_boundary_point(system, point, line)
        .map(|c| c.label == CrossingLabel::Crossing && c.right_derivative > 0.0)
        .unwrap_or(false)
}
