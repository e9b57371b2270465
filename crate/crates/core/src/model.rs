//! Zone fields, zone layouts and the piecewise system built from them.
//!
//! Every zone carries the affine Hamiltonian field
//!
//! ```text
//! X(x, y) = (a x + b y + alpha, c x - a y + beta)
//! H(x, y) = (b/2) y^2 - (c/2) x^2 + a x y + alpha y - beta x
//! ```
//!
//! with `X = (dH/dy, -dH/dx)`. The linear part `[[a, b], [c, -a]]` squares to
//! `(a^2 + b c) I`, so its eigenvalues are `+-sqrt(a^2 + b c)`: a saddle when the
//! quantity is positive and a center when it is negative. Zero is excluded at
//! construction.
//!
//! Switching lines are fixed at `x = 0` (two zones) or `x = -1` and `x = 1`
//! (three zones). Systems with other parallel lines must be mapped onto these
//! by an affine change of coordinates before construction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// `|a^2 + b c|` must exceed this for a field to have an isolated singular point.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Relative tolerance for coefficient equalities in the continuity test.
pub const CONTINUITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One zone's affine Hamiltonian field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearHamiltonianField {
    a: f64,
    b: f64,
    c: f64,
    alpha: f64,
    beta: f64,
}

impl LinearHamiltonianField {
    pub fn new(a: f64, b: f64, c: f64, alpha: f64, beta: f64) -> Result<Self, ModelError> {
        for (name, value) in [
            ("a", a),
            ("b", b),
            ("c", c),
            ("alpha", alpha),
            ("beta", beta),
        ] {
            if !value.is_finite() {
                return Err(ModelError::NonFinite { name, value });
            }
        }
        let determinant = a * a + b * c;
        if determinant.abs() <= DEGENERACY_TOL {
            return Err(ModelError::DegenerateField { determinant });
        }
        Ok(Self {
            a,
            b,
            c,
            alpha,
            beta,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `[a, b, c, alpha, beta]`
    pub fn coefficients(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.alpha, self.beta]
    }

    /// `a^2 + b c`; the linear part squares to this multiple of the identity.
    pub fn discriminant(&self) -> f64 {
        self.a * self.a + self.b * self.c
    }

    pub fn hamiltonian(&self, p: Point) -> f64 {
        let Point { x, y } = p;
        0.5 * self.b * y * y - 0.5 * self.c * x * x + self.a * x * y + self.alpha * y
            - self.beta * x
    }

    pub fn vector_field(&self, p: Point) -> Point {
        Point::new(
            self.a * p.x + self.b * p.y + self.alpha,
            self.c * p.x - self.a * p.y + self.beta,
        )
    }

    /// Linear part applied to a displacement.
    pub fn apply_linear(&self, v: Point) -> Point {
        Point::new(self.a * v.x + self.b * v.y, self.c * v.x - self.a * v.y)
    }

    /// The unique zero of the field, ignoring zone boundaries.
    pub fn singular_point(&self) -> Point {
        let d = self.discriminant();
        Point::new(
            -(self.a * self.alpha + self.b * self.beta) / d,
            -(self.c * self.alpha - self.a * self.beta) / d,
        )
    }

    pub fn classify(&self) -> Singularity {
        let d = self.discriminant();
        let kind = if d < 0.0 {
            SingularKind::Center
        } else {
            SingularKind::Saddle
        };
        Singularity {
            kind,
            modulus: d.abs().sqrt(),
            location: self.singular_point(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularKind {
    Center,
    Saddle,
}

impl SingularKind {
    pub fn letter(self) -> char {
        match self {
            SingularKind::Center => 'C',
            SingularKind::Saddle => 'S',
        }
    }
}

/// Type and location of a zone field's singular point.
///
/// `modulus` is `omega` for a center (eigenvalues `+-i omega`) and `lambda` for a
/// saddle (eigenvalues `+-lambda`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub kind: SingularKind,
    pub modulus: f64,
    pub location: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ZoneId {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "C")]
    Center,
    #[serde(rename = "R")]
    Right,
}

impl ZoneId {
    pub fn letter(self) -> char {
        match self {
            ZoneId::Left => 'L',
            ZoneId::Center => 'C',
            ZoneId::Right => 'R',
        }
    }
}

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// `Left` is `x = -1`, `Center` is `x = 0`, `Right` is `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SwitchingLine {
    #[serde(rename = "sigma_l")]
    Left,
    #[serde(rename = "sigma_c")]
    Center,
    #[serde(rename = "sigma_r")]
    Right,
}

impl SwitchingLine {
    pub fn abscissa(self) -> f64 {
        match self {
            SwitchingLine::Left => -1.0,
            SwitchingLine::Center => 0.0,
            SwitchingLine::Right => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SwitchingLine::Left => "Σ_L",
            SwitchingLine::Center => "Σ_C",
            SwitchingLine::Right => "Σ_R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZoneLayout {
    /// Zones `x < 0` and `x > 0`.
    #[serde(rename = "two")]
    TwoZone,
    /// Zones `x < -1`, `-1 < x < 1` and `x > 1`.
    #[serde(rename = "three")]
    ThreeZone,
}

impl ZoneLayout {
    pub fn name(self) -> &'static str {
        match self {
            ZoneLayout::TwoZone => "two-zone",
            ZoneLayout::ThreeZone => "three-zone",
        }
    }

    pub fn zones(self) -> &'static [ZoneId] {
        match self {
            ZoneLayout::TwoZone => &[ZoneId::Left, ZoneId::Right],
            ZoneLayout::ThreeZone => &[ZoneId::Left, ZoneId::Center, ZoneId::Right],
        }
    }

    /// Lines ordered by abscissa.
    pub fn lines(self) -> &'static [SwitchingLine] {
        match self {
            ZoneLayout::TwoZone => &[SwitchingLine::Center],
            ZoneLayout::ThreeZone => &[SwitchingLine::Left, SwitchingLine::Right],
        }
    }

    pub fn has_line(self, line: SwitchingLine) -> bool {
        self.lines().contains(&line)
    }

    /// Zones on the left and on the right of a switching line.
    pub fn sides(self, line: SwitchingLine) -> Option<(ZoneId, ZoneId)> {
        match (self, line) {
            (ZoneLayout::TwoZone, SwitchingLine::Center) => Some((ZoneId::Left, ZoneId::Right)),
            (ZoneLayout::ThreeZone, SwitchingLine::Left) => Some((ZoneId::Left, ZoneId::Center)),
            (ZoneLayout::ThreeZone, SwitchingLine::Right) => Some((ZoneId::Center, ZoneId::Right)),
            _ => None,
        }
    }

    /// Open strip `(lower, upper)` of a zone; unbounded sides are infinite.
    pub fn strip(self, zone: ZoneId) -> Option<(f64, f64)> {
        match (self, zone) {
            (ZoneLayout::TwoZone, ZoneId::Left) => Some((f64::NEG_INFINITY, 0.0)),
            (ZoneLayout::TwoZone, ZoneId::Right) => Some((0.0, f64::INFINITY)),
            (ZoneLayout::ThreeZone, ZoneId::Left) => Some((f64::NEG_INFINITY, -1.0)),
            (ZoneLayout::ThreeZone, ZoneId::Center) => Some((-1.0, 1.0)),
            (ZoneLayout::ThreeZone, ZoneId::Right) => Some((1.0, f64::INFINITY)),
            (ZoneLayout::TwoZone, ZoneId::Center) => None,
        }
    }

    /// Zone whose open strip contains `x`; `None` on a switching line.
    pub fn zone_at(self, x: f64) -> Option<ZoneId> {
        self.zones().iter().copied().find(|&z| {
            let (lo, hi) = self.strip(z).expect("zone belongs to layout");
            lo < x && x < hi
        })
    }

    pub fn line_at(self, x: f64) -> Option<SwitchingLine> {
        self.lines().iter().copied().find(|l| l.abscissa() == x)
    }
}

/// Zone layout plus one field per zone, ordered left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSystem {
    layout: ZoneLayout,
    fields: Vec<LinearHamiltonianField>,
}

impl PiecewiseSystem {
    pub fn new(
        layout: ZoneLayout,
        fields: Vec<LinearHamiltonianField>,
    ) -> Result<Self, ModelError> {
        let expected = layout.zones().len();
        if fields.len() != expected {
            return Err(ModelError::FieldCount {
                layout: layout.name(),
                expected,
                got: fields.len(),
            });
        }
        Ok(Self { layout, fields })
    }

    pub fn two_zone(left: LinearHamiltonianField, right: LinearHamiltonianField) -> Self {
        Self {
            layout: ZoneLayout::TwoZone,
            fields: vec![left, right],
        }
    }

    pub fn three_zone(
        left: LinearHamiltonianField,
        center: LinearHamiltonianField,
        right: LinearHamiltonianField,
    ) -> Self {
        Self {
            layout: ZoneLayout::ThreeZone,
            fields: vec![left, center, right],
        }
    }

    pub fn layout(&self) -> ZoneLayout {
        self.layout
    }

    pub fn fields(&self) -> &[LinearHamiltonianField] {
        &self.fields
    }

    pub fn field(&self, zone: ZoneId) -> Option<&LinearHamiltonianField> {
        let index = self.layout.zones().iter().position(|&z| z == zone)?;
        self.fields.get(index)
    }

    pub fn left(&self) -> &LinearHamiltonianField {
        &self.fields[0]
    }

    pub fn right(&self) -> &LinearHamiltonianField {
        &self.fields[self.fields.len() - 1]
    }

    pub fn center(&self) -> Option<&LinearHamiltonianField> {
        self.field(ZoneId::Center)
    }

    /// Largest coefficient magnitude over all zones.
    pub fn coefficient_scale(&self) -> f64 {
        self.fields
            .iter()
            .flat_map(|f| f.coefficients())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Singularity types left to right, e.g. `"SCC"`.
    pub fn configuration(&self) -> String {
        self.fields
            .iter()
            .map(|f| f.classify().kind.letter())
            .collect()
    }

    /// Checks `X_i = X_j` along every switching line.
    pub fn continuity(&self) -> ContinuityReport {
        let tol = CONTINUITY_TOL * (1.0 + self.coefficient_scale());
        let mut violations = Vec::new();
        let mut require = |value: f64, what: String| {
            if value.abs() > tol {
                violations.push(format!("{what} (mismatch {value:e})"));
            }
        };
        match self.layout {
            ZoneLayout::TwoZone => {
                let (l, r) = (self.left(), self.right());
                require(r.a - l.a, "a_R = a_L".into());
                require(r.b - l.b, "b_R = b_L".into());
                require(r.alpha - l.alpha, "alpha_R = alpha_L".into());
                require(r.beta - l.beta, "beta_R = beta_L".into());
            }
            ZoneLayout::ThreeZone => {
                let (l, c, r) = (&self.fields[0], &self.fields[1], &self.fields[2]);
                require(r.a - c.a, "a_R = a_C".into());
                require(l.a - c.a, "a_L = a_C".into());
                require(r.b - c.b, "b_R = b_C".into());
                require(l.b - c.b, "b_L = b_C".into());
                require(r.alpha - c.alpha, "alpha_R = alpha_C".into());
                require(l.alpha - c.alpha, "alpha_L = alpha_C".into());
                require(
                    r.beta - c.beta - c.c + r.c,
                    "beta_R - beta_C - c_C + c_R = 0".into(),
                );
                require(
                    l.beta - c.beta - l.c + c.c,
                    "beta_L - beta_C - c_L + c_C = 0".into(),
                );
            }
        }
        ContinuityReport {
            continuous: violations.is_empty(),
            violations,
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.continuity().continuous
    }

    /// Reports for each zone whether its field's singular point lies strictly
    /// inside the zone's strip.
    pub fn singular_points(&self) -> Vec<ZoneSingularity> {
        self.layout
            .zones()
            .iter()
            .zip(&self.fields)
            .map(|(&zone, field)| {
                let singularity = field.classify();
                let (lo, hi) = self.layout.strip(zone).expect("zone belongs to layout");
                let x = singularity.location.x;
                ZoneSingularity {
                    zone,
                    singularity,
                    in_zone: lo < x && x < hi,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub continuous: bool,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneSingularity {
    pub zone: ZoneId,
    pub singularity: Singularity,
    pub in_zone: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(a: f64, b: f64, c: f64, alpha: f64, beta: f64) -> LinearHamiltonianField {
        LinearHamiltonianField::new(a, b, c, alpha, beta).unwrap()
    }

    #[test]
    fn hamiltonian_vanishes_at_origin() {
        let f = field(1.3, -0.2, 4.0, 2.5, -7.0);
        assert_eq!(f.hamiltonian(Point::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn hamiltonian_example_left_field() {
        let f = field(4.0, 8.0, -2.5, 1.5, 11.0 / 4.0);
        // (b/2)0 - (c/2)(1) + 0 + 0 - beta(-1) = 5/4 + 11/4
        assert!((f.hamiltonian(Point::new(-1.0, 0.0)) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn field_values() {
        let f = field(0.0, 2.0, -2.0, 2.0 / 3.0, 2.0 / 3.0);
        let v = f.vector_field(Point::new(1.0, 0.0));
        assert!((v.x - 2.0 / 3.0).abs() < 1e-15);
        assert!((v.y + 4.0 / 3.0).abs() < 1e-15);

        let g = field(0.3, 1.0, -2.0, 0.0, 0.0);
        assert_eq!(g.vector_field(Point::default()), Point::default());
    }

    #[test]
    fn classification_of_example_moduli() {
        let s = field(4.0, 8.0, -2.5, 0.0, 0.0).classify();
        assert_eq!(s.kind, SingularKind::Center);
        assert!((s.modulus - 2.0).abs() < 1e-15);

        let s = field(1.0, 1.0, 35.0, 0.0, 0.0).classify();
        assert_eq!(s.kind, SingularKind::Saddle);
        assert!((s.modulus - 6.0).abs() < 1e-15);

        let s = field(0.0, 1.0, -1.0, 0.0, 0.0).classify();
        assert_eq!(s.kind, SingularKind::Center);
        assert_eq!(s.modulus, 1.0);
        assert_eq!(s.location, Point::new(0.0, 0.0));
    }

    #[test]
    fn singular_point_cancels_field() {
        let f = field(0.0, 2.0, -2.0, 2.0 / 3.0, 2.0 / 3.0);
        let p = f.singular_point();
        // 2y + 2/3 = 0 and -2x + 2/3 = 0
        assert!((p.x - 1.0 / 3.0).abs() < 1e-15);
        assert!((p.y + 1.0 / 3.0).abs() < 1e-15);
        assert!(f.vector_field(p).norm() < 1e-15);
    }

    #[test]
    fn degenerate_field_rejected() {
        let err = LinearHamiltonianField::new(1.0, 1.0, -1.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, ModelError::DegenerateField { .. }));
        assert!(LinearHamiltonianField::new(0.0, 0.0, 5.0, 1.0, 1.0).is_err());
        assert!(LinearHamiltonianField::new(f64::NAN, 1.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn field_count_checked() {
        let f = field(0.0, 1.0, -1.0, 0.0, 0.0);
        let err = PiecewiseSystem::new(ZoneLayout::ThreeZone, vec![f, f]).unwrap_err();
        assert_eq!(
            err,
            ModelError::FieldCount {
                layout: "three-zone",
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn continuity_two_zone() {
        let f = field(0.5, 1.0, -3.0, 0.2, 0.1);
        assert!(PiecewiseSystem::two_zone(f, f).is_continuous());

        // c may differ across x = 0
        let g = field(0.5, 1.0, 7.0, 0.2, 0.1);
        assert!(PiecewiseSystem::two_zone(f, g).is_continuous());

        let h = field(0.5, 1.0, -3.0, 0.3, 0.1);
        let report = PiecewiseSystem::two_zone(f, h).continuity();
        assert!(!report.continuous);
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn continuity_three_zone_by_construction() {
        let (a, b, alpha) = (0.4, 1.5, -0.3);
        let (c_l, c_c, c_r) = (2.0, -1.0, 3.0);
        let beta_c = 0.7;
        let beta_r = beta_c + c_c - c_r;
        let beta_l = beta_c + c_l - c_c;
        let sys = PiecewiseSystem::three_zone(
            field(a, b, c_l, alpha, beta_l),
            field(a, b, c_c, alpha, beta_c),
            field(a, b, c_r, alpha, beta_r),
        );
        assert!(sys.is_continuous());
        for line in [SwitchingLine::Left, SwitchingLine::Right] {
            let (lz, rz) = sys.layout().sides(line).unwrap();
            for y in [-3.0, 0.0, 2.5] {
                let p = Point::new(line.abscissa(), y);
                let d =
                    sys.field(lz).unwrap().vector_field(p) - sys.field(rz).unwrap().vector_field(p);
                assert!(d.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_point_positions() {
        let left = field(0.0, 1.0, -1.0, 0.0, 2.0); // singular point at x = 2... on the wrong side
        let right = field(0.0, 1.0, -1.0, 0.0, 1.0);
        let sys = PiecewiseSystem::two_zone(field(0.0, 1.0, -1.0, 0.0, -1.0), right);
        let report = sys.singular_points();
        assert_eq!(report[0].zone, ZoneId::Left);
        assert!((report[0].singularity.location.x + 1.0).abs() < 1e-15);
        assert!(report[0].in_zone);
        assert!(report[1].in_zone);
        assert!(!PiecewiseSystem::two_zone(left, right).singular_points()[0].in_zone);

        // exactly on x = 0: strict inequality puts it in neither zone
        let on_line = field(0.0, 1.0, -1.0, 0.0, 0.0);
        let report = PiecewiseSystem::two_zone(on_line, on_line).singular_points();
        assert!(report.iter().all(|z| !z.in_zone));
    }

    #[test]
    fn layout_geometry() {
        let l = ZoneLayout::ThreeZone;
        assert_eq!(l.zone_at(0.3), Some(ZoneId::Center));
        assert_eq!(l.zone_at(-1.0), None);
        assert_eq!(l.zone_at(1.5), Some(ZoneId::Right));
        assert_eq!(
            l.sides(SwitchingLine::Right),
            Some((ZoneId::Center, ZoneId::Right))
        );
        assert_eq!(l.sides(SwitchingLine::Center), None);
        assert_eq!(ZoneLayout::TwoZone.zone_at(-0.1), Some(ZoneId::Left));
    }
}
