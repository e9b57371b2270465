//! Closed-form flows of affine Hamiltonian fields, flight times between
//! switching lines, and crossing classification of boundary points.
//!
//! With `M = [[a, b], [c, -a]]` one has `M^2 = (a^2 + b c) I`, so
//! `exp(t M) = cos(w t) I + sin(w t)/w M` for a center (`a^2 + b c = -w^2`) and
//! `cosh(l t) I + sinh(l t)/l M` for a saddle (`a^2 + b c = l^2`). The flow from
//! `x0` is `p + exp(t M)(x0 - p)` with `p` the singular point.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::FlowError;
use crate::model::{LinearHamiltonianField, PiecewiseSystem, Point, SingularKind, SwitchingLine};
use crate::numeric::bisect;

/// Normal velocities at or below this magnitude count as tangential.
pub const TANGENCY_TOL: f64 = 1e-10;

/// A point farther than this from a switching line is not on it.
pub const ON_LINE_TOL: f64 = 1e-9;

/// `exp(t M) v` for the field's linear part.
pub fn propagate_linear(field: &LinearHamiltonianField, v: Point, t: f64) -> Point {
    let d = field.discriminant();
    let (even, odd) = if d < 0.0 {
        let w = (-d).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else {
        let l = d.sqrt();
        ((l * t).cosh(), (l * t).sinh() / l)
    };
    v * even + field.apply_linear(v) * odd
}

/// Position at time `t` of the orbit through `start`, ignoring zone boundaries.
pub fn flow(field: &LinearHamiltonianField, start: Point, t: f64) -> Point {
    let p = field.singular_point();
    p + propagate_linear(field, start - p, t)
}

/// `n + 1` equally spaced samples of the orbit over `[0, duration]`.
pub fn orbit_samples(
    field: &LinearHamiltonianField,
    start: Point,
    duration: f64,
    n: usize,
) -> Vec<Point> {
    let n = n.max(1);
    let mut samples: Vec<Point> = (0..=n)
        .map(|i| flow(field, start, duration * i as f64 / n as f64))
        .collect();
    samples[0] = start;
    samples
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingLabel {
    /// Both sides push across the line in the same direction.
    Crossing,
    /// Both sides push toward the line.
    Sliding,
    /// Both sides push away from the line.
    Escaping,
    /// One side is tangent to the line.
    Tangency,
}

/// Normal (`x`) components of the two adjacent fields at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingClassification {
    pub label: CrossingLabel,
    /// Field of the zone on the left (`x` below the line).
    pub left_derivative: f64,
    /// Field of the zone on the right (`x` above the line).
    pub right_derivative: f64,
    pub product: f64,
}

pub fn classify_normals(left_derivative: f64, right_derivative: f64) -> CrossingClassification {
    let label = if left_derivative.abs() <= TANGENCY_TOL || right_derivative.abs() <= TANGENCY_TOL {
        CrossingLabel::Tangency
    } else if left_derivative * right_derivative > 0.0 {
        CrossingLabel::Crossing
    } else if left_derivative > 0.0 {
        CrossingLabel::Sliding
    } else {
        CrossingLabel::Escaping
    };
    CrossingClassification {
        label,
        left_derivative,
        right_derivative,
        product: left_derivative * right_derivative,
    }
}

pub fn classify_boundary_point(
    system: &PiecewiseSystem,
    point: Point,
    line: SwitchingLine,
) -> Result<CrossingClassification, FlowError> {
    let (left, right) = system
        .layout()
        .sides(line)
        .ok_or(FlowError::LineNotInLayout { line })?;
    if (point.x - line.abscissa()).abs() > ON_LINE_TOL {
        return Err(FlowError::NotOnSwitchingLine { point, line });
    }
    let on_line = Point::new(line.abscissa(), point.y);
    let normal = |zone| {
        system
            .field(zone)
            .expect("adjacent zones belong to layout")
            .vector_field(on_line)
            .x
    };
    Ok(classify_normals(normal(left), normal(right)))
}

/// Time for the orbit of `field` from `start` (on a vertical line) to first meet
/// `x = target` with a transversal crossing, moving away from `start` immediately.
///
/// When `target` is the abscissa of `start` this is the return time to the same
/// line; otherwise the orbit must head toward `target` at departure.
pub fn flight_time(
    field: &LinearHamiltonianField,
    start: Point,
    target: f64,
) -> Result<f64, FlowError> {
    let v0 = field.vector_field(start).x;
    if v0.abs() <= TANGENCY_TOL {
        return Err(FlowError::TangentialContact { target, time: 0.0 });
    }
    let same_line = (start.x - target).abs() <= ON_LINE_TOL;
    if !same_line && (target - start.x).signum() != v0.signum() {
        return Err(FlowError::NeverReaches { start, target });
    }
    // sign of the normal velocity on arrival
    let arrival = if same_line { -v0.signum() } else { v0.signum() };
    let p = field.singular_point();
    let sing = field.classify();
    let a = start.x - p.x;
    let d = target - p.x;
    let never = FlowError::NeverReaches { start, target };

    let (t, v) = match sing.kind {
        SingularKind::Center => {
            // x - p.x = R cos(w t - phi)
            let w = sing.modulus;
            let b = v0 / w;
            let r = a.hypot(b);
            let cos = d / r;
            if cos.is_nan() || cos.abs() > 1.0 {
                return Err(never);
            }
            let theta = if arrival < 0.0 {
                cos.acos()
            } else {
                -cos.acos()
            };
            let phi = b.atan2(a);
            let period = TAU / w;
            let mut t = (theta + phi).rem_euclid(TAU) / w;
            if t <= 1e-12 * period {
                t += period;
            }
            (t, -r * w * theta.sin())
        }
        SingularKind::Saddle => {
            // x - p.x = ((A + B) u + (A - B) / u) / 2 with u = exp(l t)
            let l = sing.modulus;
            let b = v0 / l;
            let (pp, qq) = (a + b, a - b);
            let velocity = |u: f64| 0.5 * l * (pp * u - qq / u);
            let candidates: Vec<f64> = if same_line {
                vec![qq / pp]
            } else {
                crate::numeric::solve_quadratic(pp, -2.0 * d, qq).to_vec()
            };
            let u = candidates
                .into_iter()
                .filter(|&u| u.is_finite() && u > 1.0 && velocity(u).signum() == arrival)
                .fold(f64::INFINITY, f64::min);
            if !u.is_finite() {
                return Err(never);
            }
            (u.ln() / l, velocity(u))
        }
    };
    if !t.is_finite() || t <= 0.0 {
        return Err(never);
    }
    if v.abs() <= TANGENCY_TOL {
        return Err(FlowError::TangentialContact { target, time: t });
    }
    Ok(t)
}

/// Flight time found by sampling the closed-form orbit on a uniform grid of
/// `steps` intervals over `[0, t_max]` and bisecting the first sign change of
/// `x(t) - target`. Independent of the phase/quadratic algebra in
/// [`flight_time`]; used to cross-check it.
pub fn flight_time_scan(
    field: &LinearHamiltonianField,
    start: Point,
    target: f64,
    t_max: f64,
    steps: usize,
) -> Option<f64> {
    let g = |t: f64| flow(field, start, t).x - target;
    let dt = t_max / steps as f64;
    let mut t_prev = dt;
    let mut g_prev = g(t_prev);
    for i in 2..=steps {
        let t = dt * i as f64;
        let g_t = g(t);
        if g_prev == 0.0 {
            return Some(t_prev);
        }
        if (g_t < 0.0) != (g_prev < 0.0) {
            return Some(bisect(g, t_prev, t, 1e-15 * (1.0 + t)));
        }
        t_prev = t;
        g_prev = g_t;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ZoneLayout;

    fn field(a: f64, b: f64, c: f64, alpha: f64, beta: f64) -> LinearHamiltonianField {
        LinearHamiltonianField::new(a, b, c, alpha, beta).unwrap()
    }

    #[test]
    fn flow_at_zero_is_identity() {
        let f = field(4.0, 2.0, -10.0, -4.0, -4.0);
        let p = Point::new(0.3, -1.7);
        assert!(flow(&f, p, 0.0).distance(p) < 1e-15);
    }

    #[test]
    fn center_orbit_is_periodic() {
        let f = field(0.0, 2.0, -2.0, 2.0 / 3.0, 2.0 / 3.0);
        let p = Point::new(1.0, 0.4);
        let period = TAU / 2.0;
        assert!(flow(&f, p, period).distance(p) < 1e-13);
    }

    #[test]
    fn saddle_flow_matches_derivative() {
        let f = field(1.0, 1.0, 15.0, -1.0, -31.0);
        let p = Point::new(1.0, 0.5);
        let h = 1e-6;
        let numeric = (flow(&f, p, 0.3 + h) - flow(&f, p, 0.3 - h)) * (0.5 / h);
        let exact = f.vector_field(flow(&f, p, 0.3));
        assert!(numeric.distance(exact) < 1e-6 * (1.0 + exact.norm()));
    }

    #[test]
    fn flight_time_ccc_right_arc() {
        let f = field(4.0, 2.0, -10.0, -4.0, -4.0);
        let y0 = 31.0 / 48.0 * (1259.0f64 / 235.0).sqrt();
        let t = flight_time(&f, Point::new(1.0, y0), 1.0).unwrap();
        let closed = 0.5 * (20832.0 * 295865f64.sqrt() / 25320661.0).atan();
        assert!((t - closed).abs() < 1e-12, "{t} vs {closed}");
        assert!((flow(&f, Point::new(1.0, y0), t).y + y0).abs() < 1e-12);
    }

    #[test]
    fn flight_time_agrees_with_scan() {
        let cases = [
            (
                field(0.0, 2.0, -2.0, 2.0 / 3.0, 2.0 / 3.0),
                Point::new(1.0, -2.0),
                -1.0,
            ),
            (
                field(0.0, 2.0, -2.0, 2.0 / 3.0, 2.0 / 3.0),
                Point::new(-1.0, 1.0),
                1.0,
            ),
            (
                field(1.0, 1.0, 15.0, -1.0, -31.0),
                Point::new(1.0, 2.0),
                1.0,
            ),
            (
                field(1.0, 1.0, 35.0, 0.6, 71.4),
                Point::new(-1.0, -1.0),
                -1.0,
            ),
        ];
        for (f, p, target) in cases {
            let t = flight_time(&f, p, target).unwrap();
            let s = flight_time_scan(&f, p, target, 2.0 * t + 1.0, 400_000).unwrap();
            assert!((t - s).abs() < 1e-10, "{t} vs {s}");
        }
    }

    #[test]
    fn flight_time_rejects_wrong_direction_and_tangency() {
        let f = field(0.0, 2.0, -2.0, 2.0 / 3.0, 2.0 / 3.0);
        // moving right from x = 1 cannot reach x = -1 first
        assert!(matches!(
            flight_time(&f, Point::new(1.0, 1.0), -1.0),
            Err(FlowError::NeverReaches { .. })
        ));
        // x-component 2y + 2/3 vanishes at y = -1/3
        assert!(matches!(
            flight_time(&f, Point::new(1.0, -1.0 / 3.0), 1.0),
            Err(FlowError::TangentialContact { .. })
        ));
        // small circle around the singular point (1/3, -1/3) misses x = -1
        assert!(matches!(
            flight_time(&f, Point::new(1.0, -0.5), -1.0),
            Err(FlowError::NeverReaches { .. })
        ));
    }

    #[test]
    fn classification_labels() {
        assert_eq!(classify_normals(1.0, 2.0).label, CrossingLabel::Crossing);
        assert_eq!(classify_normals(-1.0, -2.0).label, CrossingLabel::Crossing);
        assert_eq!(classify_normals(1.0, -2.0).label, CrossingLabel::Sliding);
        assert_eq!(classify_normals(-1.0, 2.0).label, CrossingLabel::Escaping);
        assert_eq!(classify_normals(0.0, 2.0).label, CrossingLabel::Tangency);
    }

    #[test]
    fn boundary_point_checks_line() {
        let f = field(0.0, 1.0, -1.0, 0.0, 0.0);
        let sys = PiecewiseSystem::two_zone(f, f);
        assert_eq!(sys.layout(), ZoneLayout::TwoZone);
        assert!(matches!(
            classify_boundary_point(&sys, Point::new(1.0, 0.0), SwitchingLine::Right),
            Err(FlowError::LineNotInLayout { .. })
        ));
        assert!(matches!(
            classify_boundary_point(&sys, Point::new(0.5, 0.0), SwitchingLine::Center),
            Err(FlowError::NotOnSwitchingLine { .. })
        ));
        let c = classify_boundary_point(&sys, Point::new(0.0, 2.0), SwitchingLine::Center).unwrap();
        assert_eq!(c.label, CrossingLabel::Crossing);
        assert_eq!(c.product, 4.0);
    }
}
