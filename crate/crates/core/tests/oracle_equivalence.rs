//! Compares the algebraic solver with a brute-force search: a grid of Newton
//! starts on the Hamiltonian-matching equations in `(y1, y3)`.

mod common;

use pwlham::closure::solve;
use pwlham::{PiecewiseSystem, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const WINDOW: f64 = 6.0;

/// Ordered solutions with `|y1|, |y3| < WINDOW`, found without the hyperbola
/// reduction.
fn brute_force(sys: &PiecewiseSystem) -> Vec<[f64; 4]> {
    let f = sys.fields();
    let (l, c, r) = (&f[0], &f[1], &f[2]);
    let h = |field: &pwlham::LinearHamiltonianField, x: f64, y: f64| {
        field.hamiltonian(Point::new(x, y))
    };
    // the other ordinate on the same level set of a vertical line: H(x, y) is
    // (b/2) y^2 + (a x + alpha) y + ..., so the two roots sum to -2(a x + alpha)/b
    let partner = |field: &pwlham::LinearHamiltonianField, x: f64, y: f64| {
        -2.0 * (field.a() * x + field.alpha()) / field.b() - y
    };
    let full = |y1: f64, y3: f64| [partner(r, 1.0, y1), y1, partner(l, -1.0, y3), y3];
    let equations = |y1: f64, y3: f64| {
        let [y0, _, y2, _] = full(y1, y3);
        [
            h(c, 1.0, y0) - h(c, -1.0, y3),
            h(c, -1.0, y2) - h(c, 1.0, y1),
        ]
    };
    let mut found: Vec<[f64; 4]> = Vec::new();
    let n = 24;
    for i in 0..=n {
        for j in 0..=n {
            let mut y1 = -WINDOW + 2.0 * WINDOW * i as f64 / n as f64;
            let mut y3 = -WINDOW + 2.0 * WINDOW * j as f64 / n as f64;
            for _ in 0..60 {
                let [f1, f2] = equations(y1, y3);
                let e = 1e-7;
                let [a1, a2] = equations(y1 + e, y3);
                let [b1, b2] = equations(y1, y3 + e);
                let (j11, j21, j12, j22) =
                    ((a1 - f1) / e, (a2 - f2) / e, (b1 - f1) / e, (b2 - f2) / e);
                let det = j11 * j22 - j12 * j21;
                if det.abs() < 1e-14 {
                    break;
                }
                y1 -= (f1 * j22 - f2 * j12) / det;
                y3 -= (j11 * f2 - j21 * f1) / det;
                if !(y1.is_finite() && y3.is_finite()) {
                    break;
                }
            }
            let [f1, f2] = equations(y1, y3);
            if !(f1.abs() < 1e-10 && f2.abs() < 1e-10 && y1.abs() < WINDOW && y3.abs() < WINDOW) {
                continue;
            }
            let s = full(y1, y3);
            let ordered = s[0] - s[1] > 1e-6 && s[3] - s[2] > 1e-6;
            if ordered
                && !found
                    .iter()
                    .any(|g| (g[1] - y1).abs() + (g[3] - y3).abs() < 1e-6)
            {
                found.push(s);
            }
        }
    }
    found
}

#[test]
fn solver_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0eac1e);
    let (mut compared, mut with_cycle) = (0, 0);
    while compared < 20 {
        let sys = common::random_three_zone(&mut rng);
        let fields = sys.fields();
        if fields.iter().any(|f| f.b().abs() < 0.2) {
            continue;
        }
        let solver: Vec<[f64; 4]> = solve(&sys)
            .candidate()
            .into_iter()
            .filter(|s| s[1].abs() < WINDOW - 0.5 && s[3].abs() < WINDOW - 0.5)
            .collect();
        // candidates near the window edge are skipped on both sides
        if solve(&sys)
            .candidate()
            .is_some_and(|s| (s[1].abs() - WINDOW).abs() < 0.5 || (s[3].abs() - WINDOW).abs() < 0.5)
        {
            continue;
        }
        let brute = brute_force(&sys);
        assert_eq!(
            solver.len(),
            brute.len(),
            "solver {solver:?} vs brute force {brute:?}"
        );
        for (a, b) in solver.iter().zip(&brute) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-8, "{a:?} vs {b:?}");
            }
        }
        with_cycle += solver.len();
        compared += 1;
    }
    assert!(
        with_cycle >= 3,
        "only {with_cycle} systems with an ordered solution"
    );
}
