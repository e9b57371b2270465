//! Small scalar numerics shared by the solvers.

/// Relative cutoff below which a coefficient counts as zero for branch dispatch.
pub const DISPATCH_TOL: f64 = 1e-10;

/// Relative width of the band `[-tol, 0]` in which a discriminant is clamped to 0.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

/// Scale-aware zero test: `|v| <= DISPATCH_TOL * (1 + scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTest {
    cutoff: f64,
}

impl ZeroTest {
    pub fn with_scale(scale: f64) -> Self {
        Self {
            cutoff: DISPATCH_TOL * (1.0 + scale.abs()),
        }
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn is_zero(&self, v: f64) -> bool {
        v.abs() <= self.cutoff
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadraticRoots {
    None,
    One(f64),
    /// Ascending; equal for a (clamped) double root.
    Two(f64, f64),
    /// Every value is a root.
    All,
}

impl QuadraticRoots {
    pub fn to_vec(self) -> Vec<f64> {
        match self {
            QuadraticRoots::None | QuadraticRoots::All => Vec::new(),
            QuadraticRoots::One(r) => vec![r],
            QuadraticRoots::Two(r1, r2) => vec![r1, r2],
        }
    }
}

/// Real roots of `a x^2 + b x + c = 0`.
///
/// Coefficients are dispatched as zero with [`ZeroTest`] scaled by the largest
/// coefficient. Roots come from the cancellation-free pair `q / a`, `c / q`.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> QuadraticRoots {
    let zero = ZeroTest::with_scale(a.abs().max(b.abs()).max(c.abs()));
    if zero.is_zero(a) {
        if zero.is_zero(b) {
            return if zero.is_zero(c) {
                QuadraticRoots::All
            } else {
                QuadraticRoots::None
            };
        }
        return QuadraticRoots::One(-c / b);
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc >= -DISCRIMINANT_TOL * (b * b + (4.0 * a * c).abs()) {
            disc = 0.0;
        } else {
            return QuadraticRoots::None;
        }
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b = 0 and disc = 0, hence c = 0
        return QuadraticRoots::Two(0.0, 0.0);
    }
    let (r1, r2) = (q / a, c / q);
    if r1 <= r2 {
        QuadraticRoots::Two(r1, r2)
    } else {
        QuadraticRoots::Two(r2, r1)
    }
}

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite signs (or zero).
///
/// Stops when the bracket is narrower than `x_tol` or `f` vanishes exactly.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        if (hi - lo).abs() <= x_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
