mod common;

use common::*;
use nilborn::scenarios::{
    build_cascade, build_diamond, classify_interference, DiamondAmplitudes, InterferenceRegime,
};
use nilborn::{born_approximation, direct_solve_oracle, path_sum_entry, Amplitude, StateVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_diamond(rng: &mut ChaCha8Rng) -> DiamondAmplitudes {
    DiamondAmplitudes::new(
        amplitude(rng, 0.01, 5.0),
        amplitude(rng, 0.01, 5.0),
        amplitude(rng, 0.01, 5.0),
        amplitude(rng, 0.01, 5.0),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn four_routes_to_the_final_amplitude(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_diamond(&mut rng);
        let sys = build_diamond(a).unwrap();
        let report = classify_interference(&sys).unwrap();
        let phi = StateVector::basis(4, 0).unwrap();
        let closed_form = a.t42 * a.t21 + a.t43 * a.t31;
        let candidates = [
            sys.solve_exact(&phi).unwrap().total[3],
            path_sum_entry(sys.graph(), 0, 3, 2),
            direct_solve_oracle(sys.operator(), &phi).unwrap()[3],
        ];
        for z in candidates {
            prop_assert!((z - report.a4).norm() <= 1e-12 * report.a4.norm());
            prop_assert!((z - closed_form).norm() <= 1e-12 * closed_form.norm());
        }
        prop_assert_eq!(report.a4, report.path_contributions[0].amplitude + report.path_contributions[1].amplitude);
    }

    #[test]
    fn first_order_never_reaches_the_final_state(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = build_diamond(random_diamond(&mut rng)).unwrap();
        let phi = StateVector::basis(4, 0).unwrap();
        let first = born_approximation(sys.operator(), &phi, 1).unwrap();
        let exact = sys.solve_exact(&phi).unwrap().total;
        prop_assert!(first[3].re == 0.0 && first[3].im == 0.0);
        let report = classify_interference(&sys).unwrap();
        prop_assert_eq!(report.a4_born1, Amplitude::new(0.0, 0.0));
        prop_assert_eq!(report.relative_error_born1, Some(1.0));
        prop_assert!(exact[3] != first[3]);
    }

    #[test]
    fn dark_state_survives_rescaling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = random_diamond(&mut rng);
        a.t43 = -a.t42 * a.t21 / a.t31;
        for lambda in [1e-3, 1.0, 1e3, 1e6] {
            let scaled = a.scaled(lambda);
            let report = classify_interference(&build_diamond(scaled).unwrap()).unwrap();
            prop_assert_eq!(report.regime, InterferenceRegime::DarkState);
            let incoherent = report.path_contributions.iter().map(|p| p.amplitude.norm()).sum::<f64>();
            prop_assert!(report.a4.norm() <= 1e-12 * incoherent);
        }
    }
}

#[test]
fn cascade_reproduces_the_ladder_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (t21, t32) = (amplitude(&mut rng, 0.0, 5.0), amplitude(&mut rng, 0.0, 5.0));
        let sys = build_cascade(&[t21, t32]).unwrap();
        let psi = sys
            .solve_exact(&StateVector::basis(3, 2).unwrap())
            .unwrap()
            .total;
        let want = [t21 * t32, t32, Amplitude::new(1.0, 0.0)];
        for (got, want) in psi.iter().zip(want) {
            assert!((got - want).norm() <= 1e-15 * want.norm().max(1.0));
        }
    }
}
