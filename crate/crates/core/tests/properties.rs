mod common;

use proptest::prelude::*;

use pwlham::closure::{residuals_three_zone, residuals_two_zone, solve, Parametrization};
use pwlham::flow::{flight_time, flight_time_scan, flow};
use pwlham::io::{parse_system, system_to_json, to_pretty_json};
use pwlham::{ClosureOutcome, LinearHamiltonianField, PiecewiseSystem, Point};

use common::field;

fn coef() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

prop_compose! {
    fn any_field()(a in coef(), b in coef(), c in coef(), alpha in coef(), beta in coef())
        -> Option<LinearHamiltonianField>
    {
        LinearHamiltonianField::new(a, b, c, alpha, beta)
            .ok()
            .filter(|f| f.discriminant().abs() > 1e-3)
    }
}

fn a_field() -> impl Strategy<Value = LinearHamiltonianField> {
    any_field().prop_filter_map("degenerate", |f| f)
}

fn point() -> impl Strategy<Value = Point> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn three_zone() -> impl Strategy<Value = PiecewiseSystem> {
    (a_field(), a_field(), a_field()).prop_map(|(l, c, r)| PiecewiseSystem::three_zone(l, c, r))
}

proptest! {
    #[test]
    fn field_is_symplectic_gradient(f in a_field(), p in point()) {
        let h = 1e-4;
        let dx = (f.hamiltonian(Point::new(p.x + h, p.y)) - f.hamiltonian(Point::new(p.x - h, p.y))) / (2.0 * h);
        let dy = (f.hamiltonian(Point::new(p.x, p.y + h)) - f.hamiltonian(Point::new(p.x, p.y - h))) / (2.0 * h);
        let v = f.vector_field(p);
        prop_assert!((v.x - dy).abs() < 1e-7);
        prop_assert!((v.y + dx).abs() < 1e-7);
    }

    #[test]
    fn flow_conserves_energy(f in a_field(), p in point(), t in 0.0..1.0f64) {
        let q = flow(&f, p, t);
        let scale = 1.0 + f.hamiltonian(p).abs() + 3.0 * q.norm() * q.norm();
        prop_assert!((f.hamiltonian(q) - f.hamiltonian(p)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn flow_is_a_group(f in a_field(), p in point(), s in -1.0..1.0f64, t in -1.0..1.0f64) {
        let composed = flow(&f, flow(&f, p, s), t);
        let direct = flow(&f, p, s + t);
        prop_assert!(composed.distance(direct) <= 1e-11 * (1.0 + direct.norm() + p.norm()));
    }

    #[test]
    fn flow_solves_the_ode(f in a_field(), p in point(), t in 0.0..1.0f64) {
        let h = 1e-5;
        let derivative = (flow(&f, p, t + h) - flow(&f, p, t - h)) * (0.5 / h);
        let exact = f.vector_field(flow(&f, p, t));
        prop_assert!(derivative.distance(exact) <= 1e-5 * (1.0 + exact.norm()));
    }

    #[test]
    fn swapped_ordinates_negate_and_permute_residuals(
        sys in three_zone(),
        y in prop::array::uniform4(-3.0..3.0f64),
    ) {
        let r = residuals_three_zone(&sys, y).unwrap().values;
        let s = residuals_three_zone(&sys, [y[1], y[0], y[3], y[2]]).unwrap().values;
        let tol = 1e-12 * (1.0 + r.iter().chain(&s).fold(0.0f64, |m, v| m.max(v.abs())));
        prop_assert!((s[0] + r[0]).abs() <= tol);
        prop_assert!((s[1] + r[3]).abs() <= tol);
        prop_assert!((s[2] + r[2]).abs() <= tol);
        prop_assert!((s[3] + r[1]).abs() <= tol);
    }

    #[test]
    fn residuals_are_hamiltonian_differences(
        sys in three_zone(),
        y in prop::array::uniform4(-3.0..3.0f64),
    ) {
        let [y0, y1, y2, y3] = y;
        let f = sys.fields();
        let h = |i: usize, x: f64, y: f64| f[i].hamiltonian(Point::new(x, y));
        let oracle = [
            h(2, 1.0, y1) - h(2, 1.0, y0),
            h(1, 1.0, y0) - h(1, -1.0, y3),
            h(0, -1.0, y3) - h(0, -1.0, y2),
            h(1, -1.0, y2) - h(1, 1.0, y1),
        ];
        let r = residuals_three_zone(&sys, y).unwrap().values;
        for (a, b) in r.iter().zip(oracle) {
            prop_assert!((a - b).abs() <= 1e-11 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn candidates_are_ordered_roots(sys in three_zone()) {
        if let ClosureOutcome::UniqueCycleCandidate { ordinates, .. } = solve(&sys) {
            let [y0, y1, y2, y3] = ordinates;
            prop_assert!(y1 < y0 && y2 < y3);
            let size = ordinates.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let r = residuals_three_zone(&sys, ordinates).unwrap().max_abs();
            prop_assert!(r <= 1e-9 * (1.0 + sys.coefficient_scale()) * size * size, "residual {}", r);
        }
    }

    #[test]
    fn two_zone_never_isolated(l in a_field(), r in a_field()) {
        let sys = PiecewiseSystem::two_zone(l, r);
        let outcome = solve(&sys);
        prop_assert!(!outcome.is_candidate());
        if let ClosureOutcome::Continuum { parametrization: Some(p @ Parametrization::Reflection { .. }), .. } = outcome {
            for y1 in [-2.0, -0.3, 1.7] {
                let ys = p.evaluate(y1).unwrap();
                let res = residuals_two_zone(&sys, ys[0], ys[1]).unwrap();
                prop_assert!(res.max_abs() < 1e-9);
            }
        }
    }

    #[test]
    fn proportional_two_zone_has_reflection_family(
        b in 0.2..3.0f64, ratio in -2.0..2.0f64, k in 0.3..3.0f64, a_l in coef(), a_r in coef(),
    ) {
        // alpha_L / b_L = alpha_R / b_R with b_R = k b_L
        let l = LinearHamiltonianField::new(a_l, b, 1.0, ratio * b, 0.5);
        let r = LinearHamiltonianField::new(a_r, k * b, -1.0, ratio * k * b, 0.5);
        prop_assume!(l.is_ok() && r.is_ok());
        let sys = PiecewiseSystem::two_zone(l.unwrap(), r.unwrap());
        prop_assume!(!sys.is_continuous());
        let outcome = solve(&sys);
        let is_continuum = matches!(outcome, ClosureOutcome::Continuum { parametrization: Some(_), .. });
        prop_assert!(is_continuum, "{:?}", outcome);
    }

    #[test]
    fn closed_form_flight_time_matches_scan(f in a_field(), y in -3.0..3.0f64, from_right: bool, to_right: bool) {
        let start = Point::new(if from_right { 1.0 } else { -1.0 }, y);
        let target = if to_right { 1.0 } else { -1.0 };
        if let Ok(t) = flight_time(&f, start, target) {
            prop_assume!(f.vector_field(flow(&f, start, t)).x.abs() > 1e-3);
            let scan = flight_time_scan(&f, start, target, 1.5 * t + 0.1, 20_000);
            prop_assert!(scan.is_some());
            prop_assert!((scan.unwrap() - t).abs() < 1e-10, "{} vs {:?}", t, scan);
            let end = flow(&f, start, t);
            prop_assert!((end.x - target).abs() < 1e-9 * (1.0 + end.norm()));
        }
    }

    #[test]
    fn io_round_trip(sys in three_zone()) {
        let text = to_pretty_json(&system_to_json(&sys, Some("random")));
        let back = parse_system(&text).unwrap();
        prop_assert_eq!(back.system, sys);
    }
}

#[test]
fn continuous_family_members_close() {
    // a fixed continuous system checked against the Hamiltonian directly
    let sys = PiecewiseSystem::three_zone(
        field(0.3, -0.9, 2.0, 0.4, 0.8),
        field(0.3, -0.9, 1.0, 0.4, -0.2),
        field(0.3, -0.9, -0.5, 0.4, 1.3),
    );
    assert!(sys.is_continuous());
    let ClosureOutcome::Continuum {
        parametrization: Some(p),
        ..
    } = solve(&sys)
    else {
        panic!("expected a parametrized continuum");
    };
    let ys = p.evaluate(3.0).unwrap();
    let f = sys.fields();
    let at = |x: f64, y: f64| Point::new(x, y);
    assert!((f[2].hamiltonian(at(1.0, ys[1])) - f[2].hamiltonian(at(1.0, ys[0]))).abs() < 1e-12);
    assert!((f[0].hamiltonian(at(-1.0, ys[3])) - f[0].hamiltonian(at(-1.0, ys[2]))).abs() < 1e-12);
}
