use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use su11_core::{
    apply_squeeze, wigner_at, ModeOccupation, Sign, SqueezeOptions, SqueezeParam, TwoModeState,
};

fn state_from(n_max: usize, raw: &[(f64, f64)]) -> Option<TwoModeState> {
    let mut s = TwoModeState::zeros(n_max);
    let mut it = raw.iter().cycle();
    for a in 0..=n_max {
        for b in 0..=n_max - a {
            let (re, im) = *it.next()?;
            s.set(ModeOccupation::new(a, b), Complex64::new(re, im))
                .ok()?;
        }
    }
    s.normalize().ok()
}

fn small_state() -> impl Strategy<Value = TwoModeState> {
    (
        1usize..=4,
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 15),
    )
        .prop_filter_map("nonzero state", |(n, raw)| state_from(n, &raw))
}

fn param() -> impl Strategy<Value = SqueezeParam> {
    (0.0f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(t, c)| SqueezeParam::new(t, c).unwrap())
}

fn block_norms(s: &TwoModeState) -> BTreeMap<i64, f64> {
    let mut out = BTreeMap::new();
    for (o, a) in s.iter() {
        *out.entry(o.difference()).or_insert(0.0) += a.norm_sqr();
    }
    out.retain(|_, v| *v > 1e-300);
    out
}

fn annihilate_a(s: &TwoModeState) -> TwoModeState {
    let entries: Vec<_> = s
        .iter()
        .filter(|(o, _)| o.n_a > 0)
        .map(|(o, a)| {
            (
                ModeOccupation::new(o.n_a - 1, o.n_b),
                a * (o.n_a as f64).sqrt(),
            )
        })
        .collect();
    TwoModeState::from_entries(s.n_max(), entries).unwrap()
}

fn create_b(s: &TwoModeState) -> TwoModeState {
    let n = s.n_max() + 1;
    let entries: Vec<_> = s
        .iter()
        .map(|(o, a)| {
            (
                ModeOccupation::new(o.n_a, o.n_b + 1),
                a * ((o.n_b + 1) as f64).sqrt(),
            )
        })
        .collect();
    TwoModeState::from_entries(n, entries).unwrap()
}

fn combine(x: &TwoModeState, cx: Complex64, y: &TwoModeState, cy: Complex64) -> TwoModeState {
    let n = x.n_max().max(y.n_max());
    let entries = x
        .iter()
        .map(|(o, a)| (o, a * cx))
        .chain(y.iter().map(|(o, a)| (o, a * cy)));
    TwoModeState::from_entries(n, entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn squeezing_preserves_the_norm(s in small_state(), p in param()) {
        let out = apply_squeeze(&s, p, Sign::Plus, &SqueezeOptions::default()).unwrap();
        prop_assert!((out.state.norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn opposite_squeeze_undoes(s in small_state(), p in param()) {
        let opts = SqueezeOptions::default();
        let there = apply_squeeze(&s, p, Sign::Plus, &opts).unwrap();
        let back = apply_squeeze(&there.state, p, Sign::Minus, &opts).unwrap();
        prop_assert!(back.state.max_abs_diff(&s) < 1e-9);
    }

    #[test]
    fn casimir_sectors_keep_their_weight(s in small_state(), p in param()) {
        // each difference block is one irrep, so its weight is conserved
        let out = apply_squeeze(&s, p, Sign::Plus, &SqueezeOptions::default()).unwrap();
        let (before, after) = (block_norms(&s), block_norms(&out.state));
        prop_assert_eq!(before.len(), after.len());
        for (d, w) in &before {
            prop_assert!((w - after[d]).abs() < 1e-10, "d = {}", d);
        }
    }

    #[test]
    fn bogoliubov_transformation(s in small_state(), p in param()) {
        // a S = S (cosh r a + e^{iχ} sinh r b†) with r = τ/2
        let opts = SqueezeOptions::default();
        let r = 0.5 * p.tau();
        let lhs = annihilate_a(&apply_squeeze(&s, p, Sign::Plus, &opts).unwrap().state);
        let mixed = combine(
            &annihilate_a(&s),
            Complex64::new(r.cosh(), 0.0),
            &create_b(&s),
            Complex64::from_polar(r.sinh(), p.chi()),
        );
        let rhs = apply_squeeze(&mixed, p, Sign::Plus, &opts).unwrap().state;
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-6);
    }

    #[test]
    fn rotating_the_state_rotates_the_wigner_function(
        s in small_state(),
        p in param(),
        alpha in 0.0f64..std::f64::consts::TAU,
    ) {
        // S(ζe^{iα}) = R S(ζ) R† with R = e^{iα(n_a+n_b)/2}, and R commutes with parity
        let rotated = TwoModeState::from_entries(
            s.n_max(),
            s.iter().map(|(o, a)| {
                let phase = -0.5 * alpha * (o.n_a + o.n_b) as f64;
                (o, a * Complex64::from_polar(1.0, phase))
            }),
        )
        .unwrap();
        let turned = SqueezeParam::new(p.tau(), p.chi() + alpha).unwrap();
        let w1 = wigner_at(&s, turned).unwrap();
        let w2 = wigner_at(&rotated, p).unwrap();
        prop_assert!((w1 - w2).abs() < 1e-10);
    }

    #[test]
    fn wigner_values_are_bounded(s in small_state(), p in param()) {
        let w = wigner_at(&s, p).unwrap();
        prop_assert!(w.abs() <= 1.0 + 1e-10);
    }

    #[test]
    fn balanced_states_are_azimuth_free(tau in 0.0f64..2.5, chi in 0.0f64..6.0, n in 0usize..4) {
        // a single Fock state carries no phase reference
        let s = TwoModeState::fock(n, n, n).unwrap();
        let a = wigner_at(&s, SqueezeParam::new(tau, 0.0).unwrap()).unwrap();
        let b = wigner_at(&s, SqueezeParam::new(tau, chi).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}
