mod common;

use photon_npt_core::moments::{hankel_scaled, mandel_statistics, moment_sequence};
use photon_npt_core::states::*;
use photon_npt_core::{
    classicality_check, default_max_order, validate_pnd, HankelKind, PhotonNumberDistribution, DEFAULT_TOL,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pnd_strategy(max_len: usize) -> impl Strategy<Value = PhotonNumberDistribution> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..1.0], 2..=max_len).prop_filter_map("nonzero mass", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-6).then(|| validate_pnd(&raw.iter().map(|x| x / total).collect::<Vec<_>>(), 0.0).unwrap())
    })
}

fn psd(m: &nalgebra::DMatrix<f64>) -> bool {
    let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    common::min_sym_eig(m) >= -1e-10 * scale
}

proptest! {
    #[test]
    fn log_moments_match_factorials(pnd in pnd_strategy(17)) {
        let ms = moment_sequence(&pnd);
        for n in 0..=pnd.n_max() {
            let exact = common::factorial(n) * pnd.prob(n);
            if exact > 0.0 {
                prop_assert!(((ms.q(n) - exact) / exact).abs() <= 1e-13);
            } else {
                prop_assert_eq!(ms.ln_q(n), None);
            }
        }
    }

    #[test]
    fn scaled_hankel_is_congruent_to_raw(pnd in pnd_strategy(17), order in 0usize..=6) {
        let ms = moment_sequence(&pnd);
        for kind in HankelKind::BOTH {
            let scaled = hankel_scaled(&ms, kind, order).unwrap();
            let raw = common::raw_hankel(&pnd, kind, order);
            let d = common::congruence_diagonal(kind, order);
            let congruent = &d * &raw * &d;
            for (x, y) in scaled.iter().zip(congruent.iter()) {
                prop_assert!((x - y).abs() <= 1e-13 * y.abs().max(1e-300) || (x == y));
            }
            // entries are probabilities times binomial weights
            prop_assert!(scaled.iter().all(|x| (0.0..=1.0).contains(x)));
            // same inertia: a definite negative eigenvalue in one shows in the other
            let (ms_min, raw_min) = (common::min_sym_eig(&scaled), common::min_sym_eig(&raw));
            if ms_min < -1e-9 { prop_assert!(raw_min < 0.0); }
            if raw_min < -1e-6 * raw.iter().fold(0.0f64, |a, x| a.max(x.abs())) { prop_assert!(ms_min < 0.0); }
        }
    }

    #[test]
    fn variance_bounds_antibunching(pnd in pnd_strategy(12)) {
        let s = mandel_statistics(&pnd);
        prop_assert!(s.antibunching_value >= -s.mean - 1e-12);
        if let Some(q) = s.mandel_q { prop_assert!(q >= -1.0 - 1e-12); }
    }

    #[test]
    fn detections_persist_at_higher_orders(pnd in pnd_strategy(10)) {
        let ms = moment_sequence(&pnd);
        let cert = classicality_check(&pnd, 12, DEFAULT_TOL).unwrap();
        if let (Some(kind), Some(order)) = (cert.detecting_kind, cert.detecting_order) {
            for higher in order..=12 {
                let h = hankel_scaled(&ms, kind, higher).unwrap();
                prop_assert!(!psd(&h), "kind {:?} order {} lost detection at {}", kind, order, higher);
            }
        }
    }
}

#[test]
fn classical_families_pass_every_order() {
    let mut fixtures = Vec::new();
    for mu in [0.5, 1.0, 2.0, 5.0] {
        fixtures.push(make_poisson(mu, 1e-14).unwrap());
    }
    for nbar in [0.5, 1.0, 5.0] {
        fixtures.push(make_thermal(nbar, 1e-14).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        fixtures.push(common::random_poisson_mixture(&mut rng, 1e-14));
    }
    for pnd in &fixtures {
        let cert = classicality_check(pnd, 10, DEFAULT_TOL).unwrap();
        assert!(!cert.is_nonclassical());
        assert!(cert.min_eigenvalue >= -1e-10, "{cert:?}");
    }
}

#[test]
fn named_nonclassical_fixtures_detected_and_monotone() {
    let fixtures = [
        make_fock(1),
        make_fock(2),
        make_fock(5),
        make_binomial(2, 0.5).unwrap(),
        make_binomial(6, 0.3).unwrap(),
        make_vacuum_two_mixture(0.25).unwrap(),
        make_vacuum_two_mixture(0.5).unwrap(),
        make_mixture(&[make_fock(1), make_fock(0)], &[0.5, 0.5]).unwrap(),
    ];
    for pnd in &fixtures {
        let cert = classicality_check(pnd, default_max_order(pnd), DEFAULT_TOL).unwrap();
        assert!(cert.is_nonclassical(), "{pnd:?}");
        let ms = moment_sequence(pnd);
        let (kind, order) = (cert.detecting_kind.unwrap(), cert.detecting_order.unwrap());
        for higher in order..=20 {
            assert!(!psd(&hankel_scaled(&ms, kind, higher).unwrap()));
        }
    }
}

#[test]
fn vacuum_two_mixture_is_bunched_but_nonclassical() {
    let pnd = make_vacuum_two_mixture(0.25).unwrap();
    assert!((mandel_statistics(&pnd).antibunching_value - 0.25).abs() < 1e-15);
    let cert = classicality_check(&pnd, 4, DEFAULT_TOL).unwrap();
    assert_eq!(cert.detecting_kind, Some(HankelKind::LTilde));
    assert!((cert.min_eigenvalue + 0.5 / (4.0 * std::f64::consts::SQRT_2)).abs() < 1e-12);
}

#[test]
fn antibunching_implies_nonclassical() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for _ in 0..4000 {
        let pnd = common::random_pnd(&mut rng, 10);
        let stats = mandel_statistics(&pnd);
        if stats.antibunching_value >= -1e-12 {
            continue;
        }
        checked += 1;
        let cert = classicality_check(&pnd, default_max_order(&pnd), DEFAULT_TOL).unwrap();
        assert!(cert.is_nonclassical(), "{stats:?} {pnd:?}");
    }
    assert!(checked > 500, "only {checked} antibunched draws");
}

#[test]
fn near_poisson_antibunching_sits_below_tolerance() {
    // antibunching -M eta^2 = -2e-11: real, but the first-order Hankel negativity is
    // of the same size and so below the 1e-10 PSD tolerance
    let pnd = make_binomial(20, 1e-6).unwrap();
    let stats = mandel_statistics(&pnd);
    assert!(stats.antibunching_value < -1e-12);
    assert!(!classicality_check(&pnd, default_max_order(&pnd), DEFAULT_TOL).unwrap().is_nonclassical());
    assert!(classicality_check(&pnd, 1, 1e-14).unwrap().is_nonclassical());
}
