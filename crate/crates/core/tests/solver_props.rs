mod common;

use common::*;
use nilborn::scenarios::{build_cascade, build_diamond, build_double_diamond, DiamondAmplitudes};
use nilborn::{
    born_approximation, build_transfer_operator, direct_inverse_oracle, direct_solve_oracle,
    Amplitude, BornSonSystem, DenseMatrix, DiagonalOperator, NormKind, SparseOperator, StateVector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_naive(m: &DenseMatrix) -> Naive {
    (0..m.dim()).map(|r| m.row(r).to_vec()).collect()
}

fn identity_minus(t: &SparseOperator) -> Naive {
    let mut m = naive_identity(t.dim());
    for (r, c, z) in t.entries() {
        m[r][c] -= z;
    }
    m
}

fn scenario_systems() -> Vec<BornSonSystem> {
    let a = |re, im| Amplitude::new(re, im);
    let d = DiamondAmplitudes::new(a(0.3, 1.2), a(-2.0, 0.4), a(1.1, -0.7), a(4.0, 0.0));
    let e = DiamondAmplitudes::new(a(1.0, 0.0), a(2.5, -1.0), a(-0.2, 0.9), a(0.6, 0.6));
    vec![
        build_cascade(&[a(0.7, 0.1), a(-1.3, 2.0)]).unwrap(),
        build_cascade(&[a(2.0, 0.0); 7]).unwrap(),
        build_diamond(d).unwrap(),
        build_double_diamond(d, e).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_collapse_matches_lu(seed in any::<u64>(), n in 1usize..=30, density in 0.05f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = BornSonSystem::new(dag(&mut rng, n, density, 0.0, 5.0)).unwrap();
        let phi = state(&mut rng, n);
        let exp = sys.solve_exact(&phi).unwrap();
        prop_assert_eq!(exp.term_count(), sys.depth() + 1);
        prop_assert!(sys.operator().matvec(exp.terms.last().unwrap()).unwrap().is_zero());
        let lu = direct_solve_oracle(sys.operator(), &phi).unwrap();
        prop_assert!(vec_rel_diff(&exp.total, &lu) <= 1e-9);
        for order in sys.depth()..sys.depth() + 3 {
            prop_assert_eq!(&born_approximation(sys.operator(), &phi, order).unwrap(), &exp.total);
        }
    }

    #[test]
    fn finite_inverse_matches_lu_inverse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = BornSonSystem::new(dag(&mut rng, 10, 0.35, 0.0, 2.0)).unwrap();
        let inv = to_naive(&sys.finite_neumann_inverse());
        let lu = to_naive(&direct_inverse_oracle(sys.operator()).unwrap());
        prop_assert!(rel_diff(&inv, &lu) <= 1e-10);
    }

    #[test]
    fn collapse_needs_no_small_norm(seed in any::<u64>(), n in 2usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = 1e6;
        let t = dag(&mut rng, n, 0.4, 0.5, 1.5).scaled(Amplitude::new(lambda, 0.0));
        let sys = BornSonSystem::new(t).unwrap();
        let inv = to_naive(&sys.finite_neumann_inverse());
        let a = identity_minus(sys.operator());
        let residual = rel_diff(&naive_mul(&a, &inv), &naive_identity(n)) * (n as f64).sqrt();
        prop_assert!(residual <= 1e-6 * frobenius(&a) * frobenius(&inv), "{residual}");
    }

    #[test]
    fn resolvent_inverts_e_minus_h(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = dag(&mut rng, n, 0.4, 0.0, 2.0);
        let h0 = DiagonalOperator::new((0..n).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap();
        let energy = Amplitude::new(rng.random_range(-5.0..5.0), 0.5);
        let t = build_transfer_operator(&h0, &v, energy).unwrap();
        let sys = BornSonSystem::new(t).unwrap();
        let g0 = h0.free_resolvent(energy).unwrap();
        let g = to_naive(&sys.full_resolvent(&g0).unwrap());
        let mut e_minus_h = naive(&v);
        for row in e_minus_h.iter_mut() {
            for z in row.iter_mut() {
                *z = -*z;
            }
        }
        for (i, row) in e_minus_h.iter_mut().enumerate() {
            row[i] += energy - h0.diagonal()[i];
        }
        let prod = naive_mul(&g, &e_minus_h);
        let id = naive_identity(n);
        for (p, e) in prod.iter().flatten().zip(id.iter().flatten()) {
            prop_assert!((p - e).norm() <= 1e-9);
        }
    }

    #[test]
    fn t_matrix_matches_lu(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = dag(&mut rng, n, 0.4, 0.0, 2.0);
        let h0 = DiagonalOperator::new((0..n).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap();
        let energy = Amplitude::new(rng.random_range(-5.0..5.0), 0.5);
        let sys = BornSonSystem::new(build_transfer_operator(&h0, &v, energy).unwrap()).unwrap();
        let tm = to_naive(&sys.t_matrix(&v).unwrap());
        let by_construction = naive_mul(&naive(&v), &to_naive(&sys.finite_neumann_inverse()));
        prop_assert!(rel_diff(&tm, &by_construction) <= 1e-15);
        let lu = naive_mul(&naive(&v), &to_naive(&direct_inverse_oracle(sys.operator()).unwrap()));
        prop_assert!(rel_diff(&tm, &lu) <= 1e-10);
    }
}

#[test]
fn telescoping_on_scenarios() {
    for sys in scenario_systems() {
        let n = sys.dim();
        let prod = naive_mul(
            &identity_minus(sys.operator()),
            &to_naive(&sys.finite_neumann_inverse()),
        );
        let id = naive_identity(n);
        for (p, e) in prod.iter().flatten().zip(id.iter().flatten()) {
            assert!((p - e).norm() <= 1e-10);
        }
    }
}

#[test]
fn determinant_is_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let n = rng.random_range(1..=50);
        let sys = BornSonSystem::new(dag(&mut rng, n, 0.2, 0.0, 5.0)).unwrap();
        assert!((sys.det_check() - 1.0).norm() <= 1e-9);
    }
    for sys in scenario_systems() {
        assert!((sys.det_check() - 1.0).norm() <= 1e-12);
    }
}

#[test]
fn determinant_with_large_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..20 {
        let sys = BornSonSystem::new(dag(&mut rng, 50, 0.1, 0.0, 1e3)).unwrap();
        let det = sys.det_check();
        assert!((det - 1.0).norm() <= 1e-6, "{det}");
    }
}

#[test]
fn convergent_series_meets_lu() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let n = rng.random_range(2..=8);
        let t = scaled_operator(&mut rng, n, 0.5, 0.5);
        let phi = state(&mut rng, n);
        let series = born_approximation(&t, &phi, 60).unwrap();
        let lu = direct_solve_oracle(&t, &phi).unwrap();
        let diff = series.sub(&lu).unwrap().norm(NormKind::Inf);
        assert!(diff <= 1e-12, "{diff}");
    }
}

#[test]
fn dimension_errors() {
    let sys = BornSonSystem::new(SparseOperator::zero(2)).unwrap();
    assert!(sys.solve_exact(&StateVector::zeros(3)).is_err());
    assert!(sys.full_resolvent(&[Amplitude::default(); 3]).is_err());
}
