//! Numerical oracle: fixed-step RK4 integration of the piecewise field with
//! event location at switching lines, the first-return map on `x = 1`, and
//! bisection for its fixed point.
//!
//! Nothing here uses the closed-form flows or the closure equations, so a cycle
//! found this way independently confirms a certificate.

use std::io::Write;

use serde::Serialize;

use crate::error::PoincareError;
use crate::flow::{classify_boundary_point, CrossingLabel};
use crate::model::{LinearHamiltonianField, PiecewiseSystem, Point, SwitchingLine, ZoneId};

/// Event points are located until `|x - line|` falls below this.
pub const EVENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Target accuracy; the RK4 step is `tol^(1/4) / (1 + largest modulus)`.
    pub tol: f64,
    /// Give up after this much time without reaching the stop condition.
    pub t_max: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            t_max: 100.0,
        }
    }
}

impl IntegratorOptions {
    fn validate(&self) -> Result<(), PoincareError> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(PoincareError::InvalidSettings("tol must lie in (0, 1)"));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(PoincareError::InvalidSettings(
                "t_max must be positive and finite",
            ));
        }
        Ok(())
    }

    pub fn step_size(&self, system: &PiecewiseSystem) -> f64 {
        let modulus = system
            .fields()
            .iter()
            .map(|f| f.discriminant().abs().sqrt())
            .fold(0.0, f64::max);
        self.tol.powf(0.25) / (1.0 + modulus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub zone: ZoneId,
}

/// A transversal passage through a switching line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub point: Point,
    pub line: SwitchingLine,
    /// Zone the orbit enters.
    pub into: ZoneId,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
}

impl Trajectory {
    pub fn points(&self) -> Vec<Point> {
        self.samples.iter().map(|s| Point::new(s.x, s.y)).collect()
    }

    /// Writes `t,x,y,zone` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(out);
        for sample in &self.samples {
            writer.serialize(sample)?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn rk4_step(field: &LinearHamiltonianField, p: Point, h: f64) -> Point {
    let k1 = field.vector_field(p);
    let k2 = field.vector_field(p + k1 * (0.5 * h));
    let k3 = field.vector_field(p + k2 * (0.5 * h));
    let k4 = field.vector_field(p + k3 * h);
    p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

enum Stop {
    AtTime,
    /// First event entering this zone through this line.
    OnEntry(SwitchingLine, ZoneId),
}

/// Zone to start in from `start`: the containing zone, or for a point on a
/// switching line the zone the flow crosses into.
pub fn starting_zone(system: &PiecewiseSystem, start: Point) -> Result<ZoneId, PoincareError> {
    let layout = system.layout();
    if let Some(zone) = layout.zone_at(start.x) {
        return Ok(zone);
    }
    let line = layout
        .line_at(start.x)
        .expect("off-strip points lie on a line");
    let (left, right) = layout.sides(line).expect("line belongs to layout");
    let c = classify_boundary_point(system, start, line).expect("point lies on line");
    if c.label != CrossingLabel::Crossing {
        return Err(PoincareError::SlidingEncountered {
            label: c.label,
            point: start,
            line,
            time: 0.0,
        });
    }
    Ok(if c.right_derivative > 0.0 {
        right
    } else {
        left
    })
}

/// Integrates from `start` for `duration`, recording every step.
pub fn integrate(
    system: &PiecewiseSystem,
    start: Point,
    duration: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory, PoincareError> {
    match integrate_partial(system, start, duration, opts) {
        (traj, None) => Ok(traj),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`integrate`], but keeps the part computed before a failure (for
/// example reaching a sliding segment) next to the error.
pub fn integrate_partial(
    system: &PiecewiseSystem,
    start: Point,
    duration: f64,
    opts: &IntegratorOptions,
) -> (Trajectory, Option<PoincareError>) {
    let zone = match starting_zone(system, start) {
        Ok(zone) => zone,
        Err(e) => return (Trajectory::default(), Some(e)),
    };
    let opts = IntegratorOptions {
        t_max: duration,
        ..*opts
    };
    let mut traj = Trajectory::default();
    let err = run(system, start, zone, &opts, Stop::AtTime, true, &mut traj).err();
    (traj, err)
}

fn run(
    system: &PiecewiseSystem,
    start: Point,
    mut zone: ZoneId,
    opts: &IntegratorOptions,
    stop: Stop,
    record: bool,
    traj: &mut Trajectory,
) -> Result<(), PoincareError> {
    opts.validate()?;
    let layout = system.layout();
    let h_max = opts.step_size(system);
    let mut t = 0.0;
    let mut p = start;
    if record {
        traj.samples.push(Sample {
            t,
            x: p.x,
            y: p.y,
            zone,
        });
    }
    while t < opts.t_max {
        let field = system.field(zone).expect("zone belongs to layout");
        let (lo, hi) = layout.strip(zone).expect("zone belongs to layout");
        let h = h_max.min(opts.t_max - t);
        let next = rk4_step(field, p, h);
        let exit = if next.x <= lo {
            Some(lo)
        } else if next.x >= hi {
            Some(hi)
        } else {
            None
        };
        let Some(boundary) = exit else {
            t += h;
            p = next;
            if record {
                traj.samples.push(Sample {
                    t,
                    x: p.x,
                    y: p.y,
                    zone,
                });
            }
            continue;
        };

        // shrink the step until the end point sits on the boundary
        let inside = (p.x - boundary).signum();
        let (mut a, mut b) = (0.0, h);
        let mut hit = next;
        let mut dt = h;
        for _ in 0..200 {
            dt = 0.5 * (a + b);
            hit = rk4_step(field, p, dt);
            let g = hit.x - boundary;
            if g.abs() <= EVENT_TOL {
                break;
            }
            if g.signum() == inside {
                a = dt;
            } else {
                b = dt;
            }
            if b - a <= f64::EPSILON * (1.0 + t) {
                return Err(PoincareError::StepUnderflow { time: t });
            }
        }
        t += dt;
        p = Point::new(boundary, hit.y);
        let line = layout.line_at(boundary).expect("strip ends are lines");
        let c = classify_boundary_point(system, p, line).expect("point lies on line");
        if c.label != CrossingLabel::Crossing {
            return Err(PoincareError::SlidingEncountered {
                label: c.label,
                point: p,
                line,
                time: t,
            });
        }
        let (left, right) = layout.sides(line).expect("line belongs to layout");
        zone = if c.right_derivative > 0.0 {
            right
        } else {
            left
        };
        let event = Event {
            t,
            point: p,
            line,
            into: zone,
        };
        traj.events.push(event);
        if record {
            traj.samples.push(Sample {
                t,
                x: p.x,
                y: p.y,
                zone,
            });
        }
        if let Stop::OnEntry(l, z) = stop {
            if l == line && z == zone {
                return Ok(());
            }
        }
    }
    match stop {
        Stop::AtTime => Ok(()),
        Stop::OnEntry(..) => Err(PoincareError::NoReturn { t_max: opts.t_max }),
    }
}

/// First return to `x = 1` of the orbit leaving `(1, y)` into the right zone,
/// as `(y', t)`.
pub fn return_map_with_time(
    system: &PiecewiseSystem,
    y: f64,
    opts: &IntegratorOptions,
) -> Result<(f64, f64), PoincareError> {
    let start = Point::new(SwitchingLine::Right.abscissa(), y);
    let line = SwitchingLine::Right;
    let (_, right) = system
        .layout()
        .sides(line)
        .ok_or(PoincareError::InvalidSettings(
            "return map needs a three-zone layout",
        ))?;
    let entering = classify_boundary_point(system, start, line)
        .map(|c| c.label == CrossingLabel::Crossing && c.right_derivative > 0.0)
        .unwrap_or(false);
    if !entering {
        return Err(PoincareError::NotEnteringSection { point: start });
    }
    let mut traj = Trajectory::default();
    run(
        system,
        start,
        right,
        opts,
        Stop::OnEntry(line, right),
        false,
        &mut traj,
    )?;
    let last = traj.events.last().expect("stopped on an event");
    Ok((last.point.y, last.t))
}

pub fn return_map(
    system: &PiecewiseSystem,
    y: f64,
    opts: &IntegratorOptions,
) -> Result<f64, PoincareError> {
    return_map_with_time(system, y, opts).map(|(y, _)| y)
}

/// `P(y) - y`
pub fn displacement(
    system: &PiecewiseSystem,
    y: f64,
    opts: &IntegratorOptions,
) -> Result<f64, PoincareError> {
    return_map(system, y, opts).map(|p| p - y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub y: f64,
    pub period: f64,
    pub displacement: f64,
    /// Secant slope of the displacement across the initial bracket. Negative
    /// means the return map contracts toward the fixed point. Reported as a
    /// diagnostic only.
    pub displacement_slope: f64,
}

/// Bisection on the displacement over `[lo, hi]` until the bracket is below
/// `y_tol`.
pub fn fixed_point(
    system: &PiecewiseSystem,
    lo: f64,
    hi: f64,
    y_tol: f64,
    opts: &IntegratorOptions,
) -> Result<FixedPoint, PoincareError> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut d_lo = displacement(system, lo, opts)?;
    let d_hi = displacement(system, hi, opts)?;
    if d_lo.signum() == d_hi.signum() && d_lo != 0.0 && d_hi != 0.0 {
        return Err(PoincareError::BadBracket { lo, hi, d_lo, d_hi });
    }
    let displacement_slope = (d_hi - d_lo) / (hi - lo);
    while hi - lo > y_tol {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let d_mid = displacement(system, mid, opts)?;
        if d_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    let (p, period) = return_map_with_time(system, y, opts)?;
    Ok(FixedPoint {
        y,
        period,
        displacement: p - y,
        displacement_slope,
    })
}
