//! Closed-form reference data for the bundled examples, evaluated
//! independently of the solver.

#![allow(dead_code)]

use pwlham::{LinearHamiltonianField, PiecewiseSystem};
use rand::Rng;

pub fn field(a: f64, b: f64, c: f64, alpha: f64, beta: f64) -> LinearHamiltonianField {
    LinearHamiltonianField::new(a, b, c, alpha, beta).unwrap()
}

/// Exact `[y0, y1, y2, y3]` of each bundled example, by name.
pub fn exact_ordinates() -> Vec<(&'static str, [f64; 4])> {
    let s1 = (1259.0f64 / 235.0).sqrt();
    let s5 = 5f64.sqrt();
    let s27 = (2.0f64 / 7.0).sqrt();
    let s73 = (7.0f64 / 3.0).sqrt();
    let s21 = 21f64.sqrt();
    let s26 = 26f64.sqrt();
    let s132 = (13.0f64 / 2.0).sqrt();
    let s43 = (43.0f64 / 470.0).sqrt();
    vec![
        (
            "CCC",
            [
                31.0 / 48.0 * s1,
                -31.0 / 48.0 * s1,
                5.0 / 16.0 - s1 / 3.0,
                5.0 / 16.0 + s1 / 3.0,
            ],
        ),
        (
            "SCC",
            [
                2.0 * s5 / 3.0,
                -2.0 * s5 / 3.0,
                (1.0 - s5) / 3.0,
                (1.0 + s5) / 3.0,
            ],
        ),
        (
            "SCS",
            [
                18.0 / 5.0 * s27,
                -18.0 / 5.0 * s27,
                0.4 - 2.0 * s27,
                0.4 + 2.0 * s27,
            ],
        ),
        (
            "CSC",
            [
                5.0 / 12.0 * s73,
                -5.0 / 12.0 * s73,
                0.25 - 7.0 * s21 / 36.0,
                0.25 + 7.0 * s21 / 36.0,
            ],
        ),
        (
            "SSS",
            [
                (43.0 * s26 - 12.0) / 240.0,
                -(43.0 * s26 + 12.0) / 240.0,
                -3.0 / 8.0 * s132,
                3.0 / 8.0 * s132,
            ],
        ),
        (
            "SSC",
            [
                43.0 / 24.0 * s43 - 0.1,
                -43.0 / 24.0 * s43 - 0.1,
                -17.0 / 8.0 * s43,
                17.0 / 8.0 * s43,
            ],
        ),
    ]
}

/// Printed approximations of the crossing products at `(-1, y2)`, `(-1, y3)`,
/// `(1, y0)`, `(1, y1)` for the CCC example.
pub const CCC_PRODUCTS: [f64; 4] = [1.5518, 17.4969, 10.9315, 6.9452];

/// Closed forms of the CCC flight times in the right and left zones.
pub fn ccc_outer_flight_times() -> (f64, f64) {
    let r = 295865f64.sqrt();
    (
        0.5 * (20832.0 * r / 25320661.0).atan(),
        0.5 * (12.0 * r / 7201.0).atan(),
    )
}

pub fn coefficient<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-3.0..3.0)
}

/// A random nondegenerate field.
pub fn random_field<R: Rng>(rng: &mut R) -> LinearHamiltonianField {
    loop {
        let c = [(); 5].map(|_| coefficient(rng));
        if (c[0] * c[0] + c[1] * c[2]).abs() > 1e-3 {
            return field(c[0], c[1], c[2], c[3], c[4]);
        }
    }
}

/// A random field where `b = 0` or `alpha = +-a` each occur with
/// probability 0.15, to reach the degenerate closure cases.
pub fn random_sparse_field<R: Rng>(rng: &mut R) -> LinearHamiltonianField {
    loop {
        let mut c = [(); 5].map(|_| coefficient(rng));
        if rng.gen_bool(0.15) {
            c[1] = 0.0;
        }
        if rng.gen_bool(0.15) {
            c[3] = if rng.gen_bool(0.5) { c[0] } else { -c[0] };
        }
        if let Ok(f) = LinearHamiltonianField::new(c[0], c[1], c[2], c[3], c[4]) {
            if f.discriminant().abs() > 1e-3 {
                return f;
            }
        }
    }
}

/// Continuous two-zone system: equal `a`, `b`, `alpha`, `beta`, different `c`.
pub fn random_continuous_two_zone<R: Rng>(rng: &mut R) -> PiecewiseSystem {
    loop {
        let (a, b, alpha, beta) = (
            coefficient(rng),
            coefficient(rng),
            coefficient(rng),
            coefficient(rng),
        );
        let (c_l, c_r) = (coefficient(rng), coefficient(rng));
        if let (Ok(l), Ok(r)) = (
            LinearHamiltonianField::new(a, b, c_l, alpha, beta),
            LinearHamiltonianField::new(a, b, c_r, alpha, beta),
        ) {
            return PiecewiseSystem::two_zone(l, r);
        }
    }
}

/// Continuous three-zone system with `|b| >= 0.1`.
pub fn random_continuous_three_zone<R: Rng>(rng: &mut R) -> PiecewiseSystem {
    loop {
        let (a, alpha, beta_c) = (coefficient(rng), coefficient(rng), coefficient(rng));
        let b = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (c_l, c_c, c_r) = (coefficient(rng), coefficient(rng), coefficient(rng));
        let fields = (
            LinearHamiltonianField::new(a, b, c_l, alpha, beta_c + c_l - c_c),
            LinearHamiltonianField::new(a, b, c_c, alpha, beta_c),
            LinearHamiltonianField::new(a, b, c_r, alpha, beta_c + c_c - c_r),
        );
        if let (Ok(l), Ok(c), Ok(r)) = fields {
            return PiecewiseSystem::three_zone(l, c, r);
        }
    }
}

pub fn random_two_zone<R: Rng>(rng: &mut R) -> PiecewiseSystem {
    loop {
        let sys = PiecewiseSystem::two_zone(random_sparse_field(rng), random_sparse_field(rng));
        if !sys.is_continuous() {
            return sys;
        }
    }
}

pub fn random_three_zone<R: Rng>(rng: &mut R) -> PiecewiseSystem {
    loop {
        let sys =
            PiecewiseSystem::three_zone(random_field(rng), random_field(rng), random_field(rng));
        if !sys.is_continuous() {
            return sys;
        }
    }
}

/// Like [`random_three_zone`] but with degenerate coefficient patterns mixed in.
pub fn random_sparse_three_zone<R: Rng>(rng: &mut R) -> PiecewiseSystem {
    loop {
        let sys = PiecewiseSystem::three_zone(
            random_sparse_field(rng),
            random_sparse_field(rng),
            random_sparse_field(rng),
        );
        if !sys.is_continuous() {
            return sys;
        }
    }
}
