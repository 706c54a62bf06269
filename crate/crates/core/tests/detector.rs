use proptest::prelude::*;
use su11_core::detector::add_gaussian_noise;
use su11_core::oracles::{tmsv_n_max, tmsv_state};
use su11_core::wigner::displaced_distribution;
use su11_core::{
    apply_loss, parity_from_histogram, sample_shots, truncate_resolution, wigner_grid,
    wigner_origin, GridSpec, JointPhotonDistribution, NoiseConfig, Protocol, SaturationPolicy,
    ShotConfig, SqueezeParam, TwoModeState,
};

fn distribution() -> impl Strategy<Value = JointPhotonDistribution> {
    (1usize..8)
        .prop_flat_map(|n| {
            prop::collection::vec(0.0f64..1.0, (n + 1) * (n + 1)).prop_map(move |v| (n, v))
        })
        .prop_filter_map("nonzero mass", |(n, v)| {
            let total: f64 = v.iter().sum();
            (total > 0.0)
                .then(|| {
                    JointPhotonDistribution::new(n, v.iter().map(|x| x / total).collect(), 0.0).ok()
                })
                .flatten()
        })
}

fn max_diff(a: &JointPhotonDistribution, b: &JointPhotonDistribution) -> f64 {
    a.probabilities()
        .iter()
        .zip(b.probabilities())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loss_conserves_mass(d in distribution(), ea in 0.0f64..=1.0, eb in 0.0f64..=1.0) {
        let out = apply_loss(&d, ea, eb).unwrap();
        prop_assert!((out.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!(out.probabilities().iter().all(|p| *p >= 0.0));
    }

    #[test]
    fn loss_composes_multiplicatively(
        d in distribution(),
        e in prop::array::uniform4(0.0f64..=1.0),
    ) {
        let twice = apply_loss(&apply_loss(&d, e[0], e[1]).unwrap(), e[2], e[3]).unwrap();
        let once = apply_loss(&d, e[0] * e[2], e[1] * e[3]).unwrap();
        prop_assert!(max_diff(&twice, &once) < 1e-12);
    }

    #[test]
    fn saturation_policies_account_for_all_mass(d in distribution(), n in 0usize..8) {
        let kept = truncate_resolution(&d, n, SaturationPolicy::Discard);
        prop_assert!((kept.total_mass() - 1.0).abs() < 1e-12);
        let clipped = truncate_resolution(&d, n, SaturationPolicy::Clip);
        prop_assert!((clipped.grid_mass() - 1.0).abs() < 1e-12);
        prop_assert_eq!(clipped.discarded_mass(), 0.0);
    }
}

#[test]
fn total_loss_leaves_the_vacuum() {
    let d = JointPhotonDistribution::new(2, vec![0.1, 0.2, 0.0, 0.3, 0.0, 0.1, 0.0, 0.2, 0.1], 0.0)
        .unwrap();
    let out = apply_loss(&d, 0.0, 0.0).unwrap();
    assert!((out.get(0, 0) - 1.0).abs() < 1e-15);
}

#[test]
fn shot_noise_shrinks_as_one_over_root_n() {
    let state = tmsv_state(0.8, 0.0, tmsv_n_max(0.8, 1e-22)).unwrap();
    let p = SqueezeParam::new(0.5, 2.0).unwrap();
    let (dist, _, _) = displaced_distribution(&state, p, &Default::default()).unwrap();
    let exact = wigner_origin(&dist);
    let (w1, e1) =
        parity_from_histogram(&sample_shots(&dist, &ShotConfig::new(10_000, 5).unwrap()).unwrap());
    let (w4, e4) =
        parity_from_histogram(&sample_shots(&dist, &ShotConfig::new(40_000, 5).unwrap()).unwrap());
    let ratio = e4 / e1;
    assert!((ratio - 0.5).abs() < 0.05, "stderr ratio {ratio}");
    assert!((w1 - exact).abs() < 5.0 * e1);
    assert!((w4 - exact).abs() < 5.0 * e4);
}

#[test]
fn shot_means_scatter_like_their_stderr() {
    let dist = JointPhotonDistribution::new(1, vec![0.5, 0.1, 0.1, 0.3], 0.0).unwrap();
    let exact = wigner_origin(&dist);
    let z: Vec<f64> = (0..200)
        .map(|seed| {
            let h = sample_shots(&dist, &ShotConfig::new(500, seed).unwrap()).unwrap();
            let (w, e) = parity_from_histogram(&h);
            (w - exact) / e
        })
        .collect();
    let mean = z.iter().sum::<f64>() / z.len() as f64;
    let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (z.len() - 1) as f64;
    assert!(mean.abs() < 0.25, "mean z {mean}");
    assert!((var - 1.0).abs() < 0.25, "z variance {var}");
}

#[test]
fn noise_has_the_requested_scale_and_is_seeded() {
    let grid = GridSpec::uniform(0.0, 2.0, 40, 50).unwrap();
    let field = wigner_grid(&TwoModeState::vacuum(), &grid, &Protocol::default()).unwrap();
    let cfg = NoiseConfig::new(20.0, 11).unwrap();
    let a = add_gaussian_noise(&field, &cfg).unwrap();
    let b = add_gaussian_noise(&field, &cfg).unwrap();
    assert_eq!(a.values(), b.values());
    let c = add_gaussian_noise(&field, &NoiseConfig::new(20.0, 12).unwrap()).unwrap();
    assert_ne!(a.values(), c.values());

    let resid: Vec<f64> = a
        .values()
        .iter()
        .zip(field.values())
        .map(|(x, y)| x - y)
        .collect();
    let sd = (resid.iter().map(|r| r * r).sum::<f64>() / resid.len() as f64).sqrt();
    // the vacuum field peaks at 1, so σ = 1/20
    assert!((sd - 0.05).abs() < 0.005, "noise sd {sd}");
}

#[test]
fn noisy_squeezed_vacuum_turns_negative_for_most_seeds() {
    let state = tmsv_state(3.0, 0.0, tmsv_n_max(3.0, 1e-22)).unwrap();
    let grid = GridSpec::uniform(0.0, 1.5, 16, 16).unwrap();
    let field = wigner_grid(&state, &grid, &Protocol::default()).unwrap();
    assert!(field.min() > 0.0);
    let negative = (0..100)
        .filter(|&seed| {
            add_gaussian_noise(&field, &NoiseConfig::new(30.0, seed).unwrap())
                .unwrap()
                .min()
                < 0.0
        })
        .count();
    eprintln!("negative minimum in {negative}/100 seeds on τ ≤ 1.5");
    assert!(negative >= 50);
}
