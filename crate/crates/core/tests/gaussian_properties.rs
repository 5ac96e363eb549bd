use cvqkd_core::gaussian::{
    condition_on_homodyne, epr_cm, symplectic_eigenvalues, symplectic_form, von_neumann_entropy,
    CovarianceMatrix, Quadrature,
};
use cvqkd_core::{oneway, twoway, OneWayParams, TwoWayParams};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

/// Symplectic eigenvalues via `-(V^½ Ω V^½)²`, a symmetric PSD matrix whose
/// eigenvalues are the squared symplectic eigenvalues, each twice.
fn spectrum_via_symmetric_route(v: &DMatrix<f64>) -> Vec<f64> {
    let n = v.nrows() / 2;
    let eig = SymmetricEigen::new(v.clone());
    let sqrt_v = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let a = &sqrt_v * symplectic_form(n) * &sqrt_v;
    let sq = -(&a * &a);
    let sq = (&sq + sq.transpose()) * 0.5;
    let mut vals: Vec<f64> = SymmetricEigen::new(sq)
        .eigenvalues
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    vals.sort_by(f64::total_cmp);
    vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

fn rotation(n: usize, mode: usize, angle: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n, 2 * n);
    let (sin, cos) = angle.sin_cos();
    s[(2 * mode, 2 * mode)] = cos;
    s[(2 * mode, 2 * mode + 1)] = sin;
    s[(2 * mode + 1, 2 * mode)] = -sin;
    s[(2 * mode + 1, 2 * mode + 1)] = cos;
    s
}

fn squeezer(n: usize, mode: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n, 2 * n);
    s[(2 * mode, 2 * mode)] = (-r).exp();
    s[(2 * mode + 1, 2 * mode + 1)] = r.exp();
    s
}

fn beam_splitter(n: usize, i: usize, j: usize, t: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n, 2 * n);
    let (a, b) = (t.sqrt(), (1.0 - t).sqrt());
    for q in 0..2 {
        let (x, y) = (2 * i + q, 2 * j + q);
        s[(x, x)] = a;
        s[(x, y)] = b;
        s[(y, x)] = -b;
        s[(y, y)] = a;
    }
    s
}

/// `S diag(ν) Sᵀ` for a symplectic `S` built from squeezers, rotations and beam splitters.
fn random_state(nus: &[f64], squeeze: &[f64], angles: &[f64], splits: &[f64]) -> DMatrix<f64> {
    let n = nus.len();
    let mut v = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        2 * n,
        nus.iter().flat_map(|&x| [x, x]),
    ));
    let mut s = DMatrix::identity(2 * n, 2 * n);
    for k in 0..n {
        s = squeezer(n, k, squeeze[k]) * s;
        s = rotation(n, k, angles[k]) * s;
    }
    for (k, &split) in splits.iter().enumerate().take(n.saturating_sub(1)) {
        s = beam_splitter(n, k, k + 1, split) * s;
    }
    v = &s * v * s.transpose();
    (&v + v.transpose()) * 0.5
}

fn state_strategy(max_modes: usize) -> impl Strategy<Value = (Vec<f64>, DMatrix<f64>)> {
    (1..=max_modes).prop_flat_map(|n| {
        (
            prop::collection::vec(1.0..20.0f64, n),
            prop::collection::vec(-1.0..1.0f64, n),
            prop::collection::vec(0.0..std::f64::consts::TAU, n),
            prop::collection::vec(0.05..0.95f64, n),
        )
            .prop_map(|(nus, sq, ang, bs)| {
                let v = random_state(&nus, &sq, &ang, &bs);
                let mut sorted = nus.clone();
                sorted.sort_by(f64::total_cmp);
                (sorted, v)
            })
    })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_recovers_williamson_values((nus, v) in state_strategy(4)) {
        let spec = symplectic_eigenvalues(&v).unwrap();
        prop_assert_eq!(spec.len(), nus.len());
        for (a, b) in spec.values().iter().zip(&nus) {
            prop_assert!(rel_close(*a, *b, 1e-8), "{} vs {}", a, b);
        }
    }

    #[test]
    fn spectrum_agrees_with_symmetric_route((_nus, v) in state_strategy(4)) {
        let spec = symplectic_eigenvalues(&v).unwrap();
        let oracle = spectrum_via_symmetric_route(&v);
        for (a, b) in spec.values().iter().zip(&oracle) {
            prop_assert!(rel_close(*a, *b, 1e-8), "{} vs {}", a, b);
        }
    }

    #[test]
    fn spectrum_product_is_sqrt_det((_nus, v) in state_strategy(4)) {
        let spec = symplectic_eigenvalues(&v).unwrap();
        let det = v.clone().determinant();
        prop_assert!(rel_close(spec.product(), det.sqrt(), 1e-8));
    }

    #[test]
    fn spectrum_invariant_under_passive_symplectics(
        (_nus, v) in state_strategy(3),
        angle in 0.0..std::f64::consts::TAU,
        t in 0.01..0.99f64,
    ) {
        let n = v.nrows() / 2;
        let base = symplectic_eigenvalues(&v).unwrap();
        let mut s = rotation(n, 0, angle);
        if n > 1 {
            s = beam_splitter(n, 0, n - 1, t) * s;
        }
        let moved = &s * &v * s.transpose();
        let moved = (&moved + moved.transpose()) * 0.5;
        let after = symplectic_eigenvalues(&moved).unwrap();
        for (a, b) in base.values().iter().zip(after.values()) {
            prop_assert!(rel_close(*a, *b, 1e-8));
        }
    }

    #[test]
    fn entropy_is_nonnegative((_nus, v) in state_strategy(4)) {
        let cm = CovarianceMatrix::new(v).unwrap();
        prop_assert!(von_neumann_entropy(&cm) >= 0.0);
    }

    #[test]
    fn homodyne_on_pure_state_does_not_exceed_reduced_entropy(
        sq in prop::collection::vec(-1.0..1.0f64, 3),
        ang in prop::collection::vec(0.0..std::f64::consts::TAU, 3),
        bs in prop::collection::vec(0.05..0.95f64, 3),
        p_quadrature in any::<bool>(),
    ) {
        let v = random_state(&[1.0, 1.0, 1.0], &sq, &ang, &bs);
        let joint = CovarianceMatrix::new(v).unwrap();
        let quad = if p_quadrature { Quadrature::P } else { Quadrature::Q };
        let cond = condition_on_homodyne(&joint, &[0, 1], 2, quad).unwrap();
        let reduced = joint.reduced(&[0, 1]).unwrap();
        prop_assert!(cond.entropy() <= reduced.entropy() + 1e-9);
        // conditioning a pure state leaves it pure
        prop_assert!(cond.entropy() < 1e-6);
    }

    #[test]
    fn oneway_eve_states_are_physical(
        v0 in 1.0..50.0f64, va in 0.1..1e4f64, t in 0.01..0.99f64, w in 1.0..20.0f64,
    ) {
        let p = OneWayParams::new(v0, va, t, w).unwrap();
        prop_assert!(oneway::eve_cm(&p).is_ok());
        prop_assert!(oneway::eve_cm_given_a(&p).is_ok());
        prop_assert!(oneway::eve_cm_given_b(&p).is_ok());
    }

    #[test]
    fn twoway_eve_states_are_physical(
        v0 in 1.0..50.0f64, mu in 0.1..1e4f64, t in 0.01..0.99f64, w in 1.0..20.0f64,
    ) {
        let p = TwoWayParams::new(v0, mu, t, w).unwrap();
        prop_assert!(twoway::eve_cm(&p, mu, mu).is_ok());
        prop_assert!(twoway::eve_cm(&p, 0.0, mu).is_ok());
        prop_assert!(twoway::eve_cm_given_b(&p).is_ok());
    }

    #[test]
    fn excess_noise_round_trip(w in 1.0..1e3f64, t in 0.001..0.999f64) {
        let n = oneway::excess_noise_from_w(w, t).unwrap();
        let back = oneway::w_from_excess_noise(n, t).unwrap();
        prop_assert!(rel_close(back, w, 1e-12));
    }
}

#[test]
fn epr_entropy_is_zero() {
    for w in [1.0, 2.0, 10.0, 100.0] {
        assert!(von_neumann_entropy(&epr_cm(w).unwrap()).abs() <= 1e-9);
    }
}
