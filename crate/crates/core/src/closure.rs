//! Closure equations of crossing periodic orbits and their exhaustive solution.
//!
//! A crossing periodic orbit of a three-zone system meets `x = 1` at `(1, y0)`,
//! `(1, y1)` with `y1 < y0` and `x = -1` at `(-1, y2)`, `(-1, y3)` with `y2 < y3`.
//! Since each zone's Hamiltonian is constant along its arc,
//!
//! ```text
//! H_R(1, y1) = H_R(1, y0)     H_C(1, y0)  = H_C(-1, y3)
//! H_L(-1, y3) = H_L(-1, y2)   H_C(-1, y2) = H_C(1, y1)
//! ```
//!
//! The outer equations factor as `(y1 - y0) * linear`, so for `b_R b_L != 0` they
//! give `y0` as a function of `y1` and `y2` as a function of `y3`. Substituting
//! into the inner equations leaves two hyperbolas with the same axes in the
//! `(y1, y3)` plane; their difference is linear, so there are at most two
//! intersections. Swapping `(y0, y1, y2, y3) -> (y1, y0, y3, y2)` maps solutions
//! to solutions and reverses both orderings, hence at most one ordered solution.
//!
//! Every degenerate coefficient pattern (`b_R`, `b_L` or `b_C` zero) is handled
//! by an explicit branch of [`solve_three_zone`]; two-zone systems never have an
//! isolated solution ([`solve_two_zone`]).

use serde::{Deserialize, Serialize};

use crate::error::ClosureError;
use crate::model::{LinearHamiltonianField, PiecewiseSystem, ZoneLayout};
use crate::numeric::{solve_quadratic, QuadraticRoots, ZeroTest, DISPATCH_TOL};

/// Relative margin for the strict orderings `y1 < y0` and `y2 < y3`.
pub const ORDER_TOL: f64 = 1e-10;

/// Each hyperbola equation equals `factor * residual` after eliminating the
/// outer arcs: the first matches the `H_C(1, y0) = H_C(-1, y3)` residual, the
/// second the `H_C(-1, y2) = H_C(1, y1)` residual.
pub const HYPERBOLA_RESIDUAL_FACTORS: [f64; 2] = [1.0, -1.0];

/// Left-hand sides of the Hamiltonian-matching equations at trial ordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureResiduals {
    pub values: Vec<f64>,
}

impl ClosureResiduals {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `(-(1/2)(y0 - y1)(b_R(y0 + y1) + 2 alpha_R), (1/2)(y0 - y1)(b_L(y0 + y1) + 2 alpha_L))`
pub fn residuals_two_zone(
    system: &PiecewiseSystem,
    y0: f64,
    y1: f64,
) -> Result<ClosureResiduals, ClosureError> {
    require_layout(system, ZoneLayout::TwoZone)?;
    let (l, r) = (system.left(), system.right());
    let gap = y0 - y1;
    let sum = y0 + y1;
    Ok(ClosureResiduals {
        values: vec![
            -0.5 * gap * (r.b() * sum + 2.0 * r.alpha()),
            0.5 * gap * (l.b() * sum + 2.0 * l.alpha()),
        ],
    })
}

/// The four closure residuals in the order right arc, upper center arc, left
/// arc, lower center arc.
pub fn residuals_three_zone(
    system: &PiecewiseSystem,
    ordinates: [f64; 4],
) -> Result<ClosureResiduals, ClosureError> {
    require_layout(system, ZoneLayout::ThreeZone)?;
    let (l, c, r) = three(system);
    Ok(ClosureResiduals {
        values: three_zone_residual_values(l, c, r, ordinates).to_vec(),
    })
}

fn three_zone_residual_values(
    l: &LinearHamiltonianField,
    c: &LinearHamiltonianField,
    r: &LinearHamiltonianField,
    [y0, y1, y2, y3]: [f64; 4],
) -> [f64; 4] {
    [
        0.5 * (y1 - y0) * (r.b() * (y0 + y1) + 2.0 * (r.a() + r.alpha())),
        0.5 * (y0 - y3) * (c.b() * (y0 + y3) + 2.0 * c.alpha()) - 2.0 * c.beta()
            + c.a() * (y0 + y3),
        0.5 * (y3 - y2) * (l.b() * (y2 + y3) - 2.0 * (l.a() - l.alpha())),
        0.5 * (y2 - y1) * (c.b() * (y1 + y2) + 2.0 * c.alpha()) + 2.0 * c.beta()
            - c.a() * (y1 + y2),
    ]
}

/// Solves the outer closure equations for `y0(y1)` and `y2(y3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterElimination {
    b_right: f64,
    shift_right: f64,
    b_left: f64,
    shift_left: f64,
}

impl OuterElimination {
    /// `y0 = (-b_R y1 - 2(a_R + alpha_R)) / b_R`
    pub fn y0_of_y1(&self, y1: f64) -> f64 {
        (-self.b_right * y1 - 2.0 * self.shift_right) / self.b_right
    }

    /// `y2 = (-b_L y3 - 2(alpha_L - a_L)) / b_L`
    pub fn y2_of_y3(&self, y3: f64) -> f64 {
        (-self.b_left * y3 - 2.0 * self.shift_left) / self.b_left
    }
}

pub fn eliminate_outer(system: &PiecewiseSystem) -> Result<OuterElimination, ClosureError> {
    require_layout(system, ZoneLayout::ThreeZone)?;
    let (l, _, r) = three(system);
    let zero = zero_test(system);
    if zero.is_zero(r.b()) || zero.is_zero(l.b()) {
        return Err(ClosureError::OuterZoneDegenerate);
    }
    Ok(OuterElimination {
        b_right: r.b(),
        shift_right: r.a() + r.alpha(),
        b_left: l.b(),
        shift_left: l.alpha() - l.a(),
    })
}

/// Coefficients of the two hyperbolas
///
/// ```text
/// (y1 - A)^2 / K - (y3 - B)^2 / K - C = 0
/// (y1 - D)^2 / K - (y3 - E)^2 / K - C = 0
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaCoefficients {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl HyperbolaCoefficients {
    /// Left-hand sides of both hyperbola equations.
    pub fn evaluate(&self, y1: f64, y3: f64) -> [f64; 2] {
        [
            ((y1 - self.a).powi(2) - (y3 - self.b).powi(2)) / self.k - self.c,
            ((y1 - self.d).powi(2) - (y3 - self.e).powi(2)) / self.k - self.c,
        ]
    }

    /// The equivalent system: the first hyperbola times `K`, and the
    /// difference of the two (times `K`), which is linear.
    ///
    /// Returns `([1, -2A, A^2 - B^2 - KC, 2B], [2(A - D), 2(E - B), D^2 - E^2 + B^2 - A^2])`
    /// where the quadratic reads `y1^2 - 2A y1 - y3^2 + 2B y3 + (A^2 - B^2 - KC)`.
    fn linear_part(&self) -> (f64, f64, f64) {
        let (a, b, d, e) = (self.a, self.b, self.d, self.e);
        (2.0 * (a - d), 2.0 * (e - b), d * d - e * e + b * b - a * a)
    }
}

pub fn hyperbola_coefficients(
    system: &PiecewiseSystem,
) -> Result<HyperbolaCoefficients, ClosureError> {
    let _ = eliminate_outer(system)?;
    let (l, c, r) = three(system);
    if zero_test(system).is_zero(c.b()) {
        return Err(ClosureError::InnerZoneDegenerate);
    }
    let (b_l, b_c, b_r) = (l.b(), c.b(), r.b());
    let (a_c, alpha_c, beta_c) = (c.a(), c.alpha(), c.beta());
    Ok(HyperbolaCoefficients {
        k: 2.0 / b_c,
        a: (b_r * (a_c + alpha_c) - 2.0 * b_c * (r.a() + r.alpha())) / (b_c * b_r),
        b: (a_c - alpha_c) / b_c,
        c: 2.0 * (a_c * alpha_c + b_c * beta_c) / b_c,
        d: -(a_c + alpha_c) / b_c,
        e: (b_l * (alpha_c - a_c) - 2.0 * b_c * (l.alpha() - l.a())) / (b_c * b_l),
    })
}

/// Which case of the closure analysis produced an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureBranch {
    ContinuousTwoZoneDrift,
    ContinuousTwoZoneFree,
    ContinuousTwoZoneFamily,
    TwoZoneRightDrift,
    TwoZoneLeftDrift,
    TwoZoneFree,
    TwoZoneRightNeutral,
    TwoZoneLeftNeutral,
    TwoZoneProportional,
    TwoZoneIncompatible,
    ContinuousThreeZoneFlat,
    ContinuousThreeZoneFamily,
    RightArcOpen,
    LeftArcOpen,
    AllFlatMatchedCenter,
    RightAndCenterFlat,
    LeftAndCenterFlat,
    CenterFlatInconsistent,
    OuterFlatCenterLinear,
    OuterFlat,
    RightFlatCenterLinear,
    RightFlat,
    LeftFlatCenterLinear,
    LeftFlat,
    CenterFlatConsistent,
    HyperbolasCoincide,
    LineOnHyperbola,
    HyperbolaIntersection,
    NoOrderedIntersection,
}

impl ClosureBranch {
    pub fn description(self) -> &'static str {
        use ClosureBranch::*;
        match self {
            ContinuousTwoZoneDrift => {
                "continuous two-zone system, b = 0 and alpha != 0: no periodic orbit"
            }
            ContinuousTwoZoneFree => {
                "continuous two-zone system, b = alpha = 0: continuum of periodic orbits"
            }
            ContinuousTwoZoneFamily => {
                "continuous two-zone system, b != 0: continuum y0 = -(b y1 + 2 alpha)/b"
            }
            TwoZoneRightDrift => "two zones, b_R = 0 and alpha_R != 0: no periodic orbit",
            TwoZoneLeftDrift => "two zones, b_L = 0 and alpha_L != 0: no periodic orbit",
            TwoZoneFree => {
                "two zones, b_R = alpha_R = b_L = alpha_L = 0: continuum of periodic orbits"
            }
            TwoZoneRightNeutral => {
                "two zones, b_R = alpha_R = 0, b_L != 0: continuum y0 = -(b_L y1 + 2 alpha_L)/b_L"
            }
            TwoZoneLeftNeutral => {
                "two zones, b_L = alpha_L = 0, b_R != 0: continuum y0 = -(b_R y1 + 2 alpha_R)/b_R"
            }
            TwoZoneProportional => {
                "two zones, alpha_L/b_L = alpha_R/b_R: continuum y0 = -(b_R y1 + 2 alpha_R)/b_R"
            }
            TwoZoneIncompatible => {
                "two zones, alpha_L/b_L != alpha_R/b_R: no periodic orbit"
            }
            ContinuousThreeZoneFlat => "continuous three-zone system, b = 0: no periodic orbit",
            ContinuousThreeZoneFamily => {
                "continuous three-zone system, b != 0: continuum parametrized by y1"
            }
            RightArcOpen => "b_R = 0 and a_R + alpha_R != 0: no periodic orbit",
            LeftArcOpen => "b_L = 0 and a_L - alpha_L != 0: no periodic orbit",
            AllFlatMatchedCenter => {
                "b_R = a_R + alpha_R = b_L = a_L - alpha_L = b_C = alpha_C - a_C = 0: no periodic orbit"
            }
            RightAndCenterFlat => {
                "b_R = a_R + alpha_R = b_C = alpha_C - a_C = 0, b_L != 0: no periodic orbit"
            }
            LeftAndCenterFlat => {
                "b_L = a_L - alpha_L = b_C = alpha_C - a_C = 0, b_R != 0: no periodic orbit"
            }
            CenterFlatInconsistent => {
                "b_C = 0, b_R b_L != 0 and the center equations are inconsistent: no periodic orbit"
            }
            OuterFlatCenterLinear => {
                "b_R = a_R + alpha_R = b_L = a_L - alpha_L = b_C = 0, alpha_C != a_C: continuum of periodic orbits"
            }
            OuterFlat => {
                "b_R = a_R + alpha_R = b_L = a_L - alpha_L = 0, b_C != 0: continuum of periodic orbits"
            }
            RightFlatCenterLinear => {
                "b_R = a_R + alpha_R = b_C = 0, alpha_C != a_C, b_L != 0: continuum of periodic orbits"
            }
            RightFlat => "b_R = a_R + alpha_R = 0, b_L b_C != 0: continuum of periodic orbits",
            LeftFlatCenterLinear => {
                "b_L = a_L - alpha_L = b_C = 0, alpha_C != a_C, b_R != 0: continuum of periodic orbits"
            }
            LeftFlat => "b_L = a_L - alpha_L = 0, b_R b_C != 0: continuum of periodic orbits",
            CenterFlatConsistent => {
                "b_C = 0, b_R b_L != 0 and the center equations coincide: continuum of periodic orbits"
            }
            HyperbolasCoincide => {
                "A = D and B = E: the hyperbolas coincide, continuum of periodic orbits"
            }
            LineOnHyperbola => {
                "the linear equation lies on the first hyperbola: continuum of periodic orbits"
            }
            HyperbolaIntersection => "hyperbolas meet at a unique ordered point: limit cycle candidate",
            NoOrderedIntersection => {
                "hyperbolas have no intersection with y1 < y0 and y2 < y3: no periodic orbit"
            }
        }
    }
}

/// Closed-form one-parameter family of closure solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parametrization {
    /// Two zones: `y0 = -(b y1 + 2 alpha) / b`.
    Reflection { b: f64, alpha: f64 },
    /// Continuous three zones with shared `a`, `b`, `alpha`:
    ///
    /// ```text
    /// y0 = (-b y1 - 2(a + alpha)) / b
    /// y2 = (a - alpha + sqrt(S)) / b
    /// y3 = (a - alpha - sqrt(S)) / b
    /// S  = a^2 + 2a(b y1 - alpha) + (b y1 + alpha)^2 - 4 b beta_C
    /// ```
    ContinuousThreeZone {
        a: f64,
        b: f64,
        alpha: f64,
        beta_c: f64,
    },
}

impl Parametrization {
    /// Full ordinate tuple for a given `y1`, `(y0, y1)` or `(y0, y1, y2, y3)`.
    /// `None` where the family has no real member.
    pub fn evaluate(&self, y1: f64) -> Option<Vec<f64>> {
        match *self {
            Parametrization::Reflection { b, alpha } => Some(vec![-(b * y1 + 2.0 * alpha) / b, y1]),
            Parametrization::ContinuousThreeZone {
                a,
                b,
                alpha,
                beta_c,
            } => {
                let s = a * a + 2.0 * a * (b * y1 - alpha) + (b * y1 + alpha).powi(2)
                    - 4.0 * b * beta_c;
                if s < 0.0 {
                    return None;
                }
                let root = s.sqrt();
                Some(vec![
                    (-b * y1 - 2.0 * (a + alpha)) / b,
                    y1,
                    (a - alpha + root) / b,
                    (a - alpha - root) / b,
                ])
            }
        }
    }
}

/// Result of the closure analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ClosureOutcome {
    NoSolution {
        branch: ClosureBranch,
    },
    UniqueCycleCandidate {
        branch: ClosureBranch,
        /// `[y0, y1, y2, y3]`
        ordinates: [f64; 4],
    },
    Continuum {
        branch: ClosureBranch,
        description: String,
        parametrization: Option<Parametrization>,
    },
}

impl ClosureOutcome {
    pub fn branch(&self) -> ClosureBranch {
        match self {
            ClosureOutcome::NoSolution { branch }
            | ClosureOutcome::UniqueCycleCandidate { branch, .. }
            | ClosureOutcome::Continuum { branch, .. } => *branch,
        }
    }

    pub fn candidate(&self) -> Option<[f64; 4]> {
        match self {
            ClosureOutcome::UniqueCycleCandidate { ordinates, .. } => Some(*ordinates),
            _ => None,
        }
    }

    pub fn is_candidate(&self) -> bool {
        self.candidate().is_some()
    }

    fn none(branch: ClosureBranch) -> Self {
        ClosureOutcome::NoSolution { branch }
    }

    fn continuum(branch: ClosureBranch, parametrization: Option<Parametrization>) -> Self {
        ClosureOutcome::Continuum {
            branch,
            description: branch.description().to_string(),
            parametrization,
        }
    }
}

/// Dispatches on the layout.
pub fn solve(system: &PiecewiseSystem) -> ClosureOutcome {
    match system.layout() {
        ZoneLayout::TwoZone => solve_two_zone(system),
        ZoneLayout::ThreeZone => solve_three_zone(system),
    }
    .expect("layout matches solver")
}

pub fn solve_two_zone(system: &PiecewiseSystem) -> Result<ClosureOutcome, ClosureError> {
    use ClosureBranch::*;
    require_layout(system, ZoneLayout::TwoZone)?;
    let zero = zero_test(system);
    let (l, r) = (system.left(), system.right());
    let (b_r, alpha_r, b_l, alpha_l) = (r.b(), r.alpha(), l.b(), l.alpha());

    if system.is_continuous() {
        return Ok(match (zero.is_zero(b_r), zero.is_zero(alpha_r)) {
            (true, false) => ClosureOutcome::none(ContinuousTwoZoneDrift),
            (true, true) => ClosureOutcome::continuum(ContinuousTwoZoneFree, None),
            (false, _) => ClosureOutcome::continuum(
                ContinuousTwoZoneFamily,
                Some(Parametrization::Reflection {
                    b: b_r,
                    alpha: alpha_r,
                }),
            ),
        });
    }

    if zero.is_zero(b_r) && !zero.is_zero(alpha_r) {
        return Ok(ClosureOutcome::none(TwoZoneRightDrift));
    }
    if zero.is_zero(b_l) && !zero.is_zero(alpha_l) {
        return Ok(ClosureOutcome::none(TwoZoneLeftDrift));
    }
    Ok(match (zero.is_zero(b_r), zero.is_zero(b_l)) {
        (true, true) => ClosureOutcome::continuum(TwoZoneFree, None),
        (true, false) => ClosureOutcome::continuum(
            TwoZoneRightNeutral,
            Some(Parametrization::Reflection {
                b: b_l,
                alpha: alpha_l,
            }),
        ),
        (false, true) => ClosureOutcome::continuum(
            TwoZoneLeftNeutral,
            Some(Parametrization::Reflection {
                b: b_r,
                alpha: alpha_r,
            }),
        ),
        (false, false) => {
            // both residuals vanish iff y0 + y1 = -2 alpha/b for both zones
            let (shift_r, shift_l) = (alpha_r / b_r, alpha_l / b_l);
            let cutoff = DISPATCH_TOL * (1.0 + shift_r.abs().max(shift_l.abs()));
            if (shift_r - shift_l).abs() <= cutoff {
                ClosureOutcome::continuum(
                    TwoZoneProportional,
                    Some(Parametrization::Reflection {
                        b: b_r,
                        alpha: alpha_r,
                    }),
                )
            } else {
                ClosureOutcome::none(TwoZoneIncompatible)
            }
        }
    })
}

pub fn solve_three_zone(system: &PiecewiseSystem) -> Result<ClosureOutcome, ClosureError> {
    use ClosureBranch::*;
    require_layout(system, ZoneLayout::ThreeZone)?;
    let zero = zero_test(system);
    let (l, c, r) = three(system);

    if system.is_continuous() {
        let b = c.b();
        return Ok(if zero.is_zero(b) {
            ClosureOutcome::none(ContinuousThreeZoneFlat)
        } else {
            ClosureOutcome::continuum(
                ContinuousThreeZoneFamily,
                Some(Parametrization::ContinuousThreeZone {
                    a: c.a(),
                    b,
                    alpha: c.alpha(),
                    beta_c: c.beta(),
                }),
            )
        });
    }

    let b_r = !zero.is_zero(r.b());
    let b_l = !zero.is_zero(l.b());
    let b_c = !zero.is_zero(c.b());
    let shift_r = !zero.is_zero(r.a() + r.alpha());
    let shift_l = !zero.is_zero(l.a() - l.alpha());
    let shift_c = !zero.is_zero(c.alpha() - c.a());

    if !b_r && shift_r {
        return Ok(ClosureOutcome::none(RightArcOpen));
    }
    if !b_l && shift_l {
        return Ok(ClosureOutcome::none(LeftArcOpen));
    }
    // From here a zero b_R (b_L) comes with a zero a_R + alpha_R (a_L - alpha_L).
    let outcome = match (b_r, b_l, b_c) {
        (false, false, false) if !shift_c => ClosureOutcome::none(AllFlatMatchedCenter),
        (false, false, false) => ClosureOutcome::continuum(OuterFlatCenterLinear, None),
        (false, false, true) => ClosureOutcome::continuum(OuterFlat, None),
        (false, true, false) if !shift_c => ClosureOutcome::none(RightAndCenterFlat),
        (false, true, false) => ClosureOutcome::continuum(RightFlatCenterLinear, None),
        (false, true, true) => ClosureOutcome::continuum(RightFlat, None),
        (true, false, false) if !shift_c => ClosureOutcome::none(LeftAndCenterFlat),
        (true, false, false) => ClosureOutcome::continuum(LeftFlatCenterLinear, None),
        (true, false, true) => ClosureOutcome::continuum(LeftFlat, None),
        (true, true, false) => {
            let m = center_flat_consistency(l, c, r);
            let scale = system.coefficient_scale();
            if ZeroTest::with_scale(scale.powi(3)).is_zero(m) {
                ClosureOutcome::continuum(CenterFlatConsistent, None)
            } else {
                ClosureOutcome::none(CenterFlatInconsistent)
            }
        }
        (true, true, true) => solve_generic(system)?,
    };
    Ok(outcome)
}

/// `b_R alpha_C (a_L - alpha_L) + a_C b_R (alpha_L - a_L)
///  + b_L (a_R + alpha_R)(a_C + alpha_C) + 2 b_L b_R beta_C`
///
/// With `b_C = 0` both center equations are linear in `(y1, y3)` after the
/// outer eliminations and share their normal; this quantity vanishes exactly
/// when they coincide.
pub fn center_flat_consistency(
    l: &LinearHamiltonianField,
    c: &LinearHamiltonianField,
    r: &LinearHamiltonianField,
) -> f64 {
    r.b() * c.alpha() * (l.a() - l.alpha())
        + c.a() * r.b() * (l.alpha() - l.a())
        + l.b() * (r.a() + r.alpha()) * (c.a() + c.alpha())
        + 2.0 * l.b() * r.b() * c.beta()
}

/// Real solutions of the generic (`b_L b_C b_R != 0`) closure system, before the
/// ordering filter.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraicSolutions {
    Finite(Vec<[f64; 4]>),
    Infinite(ClosureBranch),
}

pub fn algebraic_solutions(system: &PiecewiseSystem) -> Result<AlgebraicSolutions, ClosureError> {
    let elim = eliminate_outer(system)?;
    let h = hyperbola_coefficients(system)?;
    let scale = 1.0 + h.a.abs().max(h.b.abs()).max(h.d.abs()).max(h.e.abs());
    let cutoff = DISPATCH_TOL * scale;
    if (h.a - h.d).abs() <= cutoff && (h.b - h.e).abs() <= cutoff {
        return Ok(AlgebraicSolutions::Infinite(
            ClosureBranch::HyperbolasCoincide,
        ));
    }
    let points = match intersect_hyperbolas(&h) {
        Some(points) => points,
        None => return Ok(AlgebraicSolutions::Infinite(ClosureBranch::LineOnHyperbola)),
    };
    Ok(AlgebraicSolutions::Finite(
        points
            .into_iter()
            .map(|(y1, y3)| {
                let (y1, y3) = polish(&h, y1, y3);
                [elim.y0_of_y1(y1), y1, elim.y2_of_y3(y3), y3]
            })
            .collect(),
    ))
}

/// Strict `y1 < y0` and `y2 < y3`, with a relative margin.
pub fn is_ordered([y0, y1, y2, y3]: [f64; 4]) -> bool {
    y0 - y1 > ORDER_TOL * (1.0 + y0.abs() + y1.abs())
        && y3 - y2 > ORDER_TOL * (1.0 + y2.abs() + y3.abs())
}

fn solve_generic(system: &PiecewiseSystem) -> Result<ClosureOutcome, ClosureError> {
    let solutions = match algebraic_solutions(system)? {
        AlgebraicSolutions::Infinite(branch) => return Ok(ClosureOutcome::continuum(branch, None)),
        AlgebraicSolutions::Finite(s) => s,
    };
    let mut ordered = solutions.into_iter().filter(|s| is_ordered(*s));
    let first = ordered.next();
    debug_assert!(
        ordered.next().is_none(),
        "swap symmetry allows one ordered solution"
    );
    Ok(match first {
        Some(ordinates) => ClosureOutcome::UniqueCycleCandidate {
            branch: ClosureBranch::HyperbolaIntersection,
            ordinates,
        },
        None => ClosureOutcome::none(ClosureBranch::NoOrderedIntersection),
    })
}

/// Intersections of the two hyperbolas in the `(y1, y3)` plane, through the
/// linear difference equation. `None` when the solution set is a whole line.
fn intersect_hyperbolas(h: &HyperbolaCoefficients) -> Option<Vec<(f64, f64)>> {
    let (p, q, r) = h.linear_part();
    let kc = h.k * h.c;
    let roots = if p.abs() >= q.abs() {
        // y1 = m y3 + n
        let (m, n) = (-q / p, -r / p);
        let u = n - h.a;
        let roots = solve_quadratic(m * m - 1.0, 2.0 * (m * u + h.b), u * u - h.b * h.b - kc);
        if roots == QuadraticRoots::All {
            return None;
        }
        roots
            .to_vec()
            .into_iter()
            .map(|y3| (m * y3 + n, y3))
            .collect()
    } else {
        // y3 = m y1 + n
        let (m, n) = (-p / q, -r / q);
        let w = n - h.b;
        let roots = solve_quadratic(1.0 - m * m, -2.0 * (h.a + m * w), h.a * h.a - w * w - kc);
        if roots == QuadraticRoots::All {
            return None;
        }
        roots
            .to_vec()
            .into_iter()
            .map(|y1| (y1, m * y1 + n))
            .collect()
    };
    Some(roots)
}

/// A couple of Newton steps on the hyperbola pair; kept only if they help.
fn polish(h: &HyperbolaCoefficients, mut y1: f64, mut y3: f64) -> (f64, f64) {
    let size = |v: [f64; 2]| v[0].abs().max(v[1].abs());
    let mut best = size(h.evaluate(y1, y3));
    for _ in 0..3 {
        if best == 0.0 {
            break;
        }
        let [f1, f2] = h.evaluate(y1, y3);
        let (j11, j12) = (2.0 * (y1 - h.a) / h.k, -2.0 * (y3 - h.b) / h.k);
        let (j21, j22) = (2.0 * (y1 - h.d) / h.k, -2.0 * (y3 - h.e) / h.k);
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let n1 = y1 - (f1 * j22 - f2 * j12) / det;
        let n3 = y3 - (j11 * f2 - j21 * f1) / det;
        let trial = size(h.evaluate(n1, n3));
        if trial.is_nan() || trial >= best {
            break;
        }
        (y1, y3, best) = (n1, n3, trial);
    }
    (y1, y3)
}

fn require_layout(system: &PiecewiseSystem, layout: ZoneLayout) -> Result<(), ClosureError> {
    if system.layout() == layout {
        Ok(())
    } else {
        Err(ClosureError::LayoutMismatch {
            expected: layout.name(),
        })
    }
}

fn three(
    system: &PiecewiseSystem,
) -> (
    &LinearHamiltonianField,
    &LinearHamiltonianField,
    &LinearHamiltonianField,
) {
    let f = system.fields();
    (&f[0], &f[1], &f[2])
}

fn zero_test(system: &PiecewiseSystem) -> ZeroTest {
    ZeroTest::with_scale(system.coefficient_scale())
}
