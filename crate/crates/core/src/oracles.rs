//! Reference values for the sampling pipeline.
//!
//! Closed forms for the squeezed vacuum, the vacuum and the biphoton, plus
//! evaluators that share no code with the block exponential: a full-space
//! Taylor propagator, a Fock-expansion sum over closed-form matrix elements,
//! and a direct evaluation of `⟨ψ|S(2ζ)Π|ψ⟩`.
//!
//! Some closed forms are kept in two flavours. The `Verbatim` variants follow
//! the literal closed forms, whose squeeze coefficients drop the vacuum
//! normalization `1/cosh(τ/2)`; the normalized variants restore it and agree
//! with the measured statistics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::closed_form::real_squeeze_element;
use crate::algebra::squeeze::{edge_mass, initial_guard};
use crate::algebra::{
    apply_squeeze, squeeze_matrix_element_closed, Sign, SqueezeOptions, SqueezeParam,
};
use crate::error::{invalid_param, Result};
use crate::fock::{parity_sign, ModeOccupation, TwoModeState};

/// Smallest truncation whose squeezed-vacuum tail `tanh^{2(n+1)}(τ₀/2)` is below `tail`.
pub fn tmsv_n_max(tau0: f64, tail: f64) -> usize {
    let t2 = (0.5 * tau0).tanh().powi(2);
    if t2 == 0.0 {
        return 0;
    }
    let n = (tail.ln() / t2.ln()).ceil() - 1.0;
    n.max(0.0) as usize
}

/// `S(ζ₀)|0,0⟩ = Σ e^{inχ₀} tanh^n(τ₀/2)/cosh(τ₀/2) |n,n⟩`, cut at `n_max`.
pub fn tmsv_state(tau0: f64, chi0: f64, n_max: usize) -> Result<TwoModeState> {
    let p = SqueezeParam::new(tau0, chi0)?;
    let (t, c) = ((0.5 * p.tau()).tanh(), (0.5 * p.tau()).cosh());
    let mut amp = 1.0 / c;
    let mut s = TwoModeState::zeros(n_max);
    for n in 0..=n_max {
        s.set(
            ModeOccupation::new(n, n),
            Complex64::from_polar(amp, n as f64 * p.chi()),
        )?;
        amp *= t;
    }
    Ok(s)
}

/// Which prefactor the displaced squeezed-vacuum formula uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prefactor {
    /// `1/(4cosh²(τ'/2))` taken verbatim; the distribution then sums to 1/4.
    Verbatim,
    /// `1/cosh²(τ'/2)`, which makes the distribution sum to one.
    #[default]
    Normalized,
}

/// `cosh²(τ'/2)` of the composed displacement `S(ζ)S(ζ₀) ∼ S(ζ')`, read off
/// the vacuum element of the composed block unitaries.
pub fn composed_cosh_sq(p0: SqueezeParam, p: SqueezeParam) -> Result<f64> {
    let opts = SqueezeOptions::default();
    let first = apply_squeeze(&TwoModeState::vacuum(), p0, Sign::Plus, &opts)?;
    let both = apply_squeeze(&first.state, p, Sign::Plus, &opts)?;
    let u00 = both.state.amplitude(ModeOccupation::new(0, 0));
    Ok(1.0 / u00.norm_sqr())
}

/// `P_n` of `S(ζ)S(ζ₀)|0,0⟩` on the pair diagonal, `n = 0..=n_max`.
pub fn displaced_tmsv_distribution(
    p0: SqueezeParam,
    p: SqueezeParam,
    n_max: usize,
    prefactor: Prefactor,
) -> Result<Vec<f64>> {
    let xi0 = p0.to_disk().xi();
    let xi = p.to_disk().xi();
    let phase = ((1.0 + xi * xi0.conj()) / (1.0 + xi.conj() * xi0)).norm_sqr();
    let ratio = ((xi0 + xi) / (1.0 + xi * xi0.conj())).norm_sqr();
    let c2 = composed_cosh_sq(p0, p)?;
    let pre = match prefactor {
        Prefactor::Verbatim => 1.0 / (4.0 * c2),
        Prefactor::Normalized => 1.0 / c2,
    } * phase;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut r = 1.0;
    for _ in 0..=n_max {
        out.push(pre * r);
        r *= ratio;
    }
    Ok(out)
}

fn partial_alternating<F: Fn(usize) -> f64>(term: F, n_terms: Option<usize>, ratio: f64) -> f64 {
    // without a cut, run until terms are negligible; ratio < 1 is the decay of |term|
    let cap = n_terms.unwrap_or_else(|| {
        if ratio <= 0.0 {
            8
        } else {
            ((1e-18f64.ln() / ratio.ln()).ceil() as usize).saturating_add(64)
        }
    });
    (0..=cap)
        .map(|n| if n % 2 == 0 { term(n) } else { -term(n) })
        .sum()
}

/// Verbatim vacuum section `Σ_{n≤N} (−1)ⁿ|ξ|²ⁿ`, which tends to `1/(1+|ξ|²)`.
pub fn vacuum_wigner_closed(p: SqueezeParam, n_resolve: Option<usize>) -> f64 {
    let x2 = p.to_disk().xi().norm_sqr();
    match n_resolve {
        None => 1.0 / (1.0 + x2),
        Some(_) => partial_alternating(|n| x2.powi(n as i32), n_resolve, x2),
    }
}

/// Vacuum section with normalized statistics; the full sum is `1/cosh τ`.
pub fn vacuum_wigner_operational(p: SqueezeParam, n_resolve: Option<usize>) -> f64 {
    let h = 0.5 * p.tau();
    match n_resolve {
        None => 1.0 / p.tau().cosh(),
        Some(_) => {
            let (t2, c2) = (h.tanh().powi(2), h.cosh().powi(2));
            partial_alternating(|n| t2.powi(n as i32) / c2, n_resolve, t2)
        }
    }
}

/// Verbatim biphoton section
/// `cosh⁻²(τ/2) Σ_{n≤N} (−1)ⁿ tanh²ⁿ(τ/2) |n/sinh(τ/2) − sinh(τ/2)|²`.
pub fn biphoton_wigner_closed(p: SqueezeParam, n_resolve: Option<usize>) -> f64 {
    let h = 0.5 * p.tau();
    if h == 0.0 {
        // only the n = 1 term survives the limit
        return if n_resolve == Some(0) { 0.0 } else { -1.0 };
    }
    let (s, c, t2) = (h.sinh(), h.cosh(), h.tanh().powi(2));
    let term = |n: usize| {
        let x = n as f64 / s - s;
        t2.powi(n as i32) * x * x / (c * c)
    };
    partial_alternating(term, n_resolve, t2)
}

/// Biphoton section from normalized squeeze matrix elements.
pub fn biphoton_wigner_operational(p: SqueezeParam, n_resolve: Option<usize>) -> f64 {
    let one = ModeOccupation::new(1, 1);
    let t2 = (0.5 * p.tau()).tanh().powi(2);
    let term = |n: usize| real_squeeze_element(ModeOccupation::new(n, n), one, p.tau()).powi(2);
    partial_alternating(term, n_resolve, t2)
}

/// Full-space two-mode grid used by the brute-force propagator.
struct FullSpace {
    n: usize,
}

impl FullSpace {
    fn w(&self) -> usize {
        self.n + 1
    }

    /// `y = (ζ a†b† − ζ* ab) x` over the whole lattice.
    fn generator(&self, zeta: Complex64, x: &[Complex64], y: &mut [Complex64]) {
        let w = self.w();
        y.iter_mut().for_each(|v| *v = Complex64::default());
        for na in 0..w {
            for nb in 0..w {
                let v = x[na * w + nb];
                if v == Complex64::default() {
                    continue;
                }
                if na < self.n && nb < self.n {
                    let c = (((na + 1) * (nb + 1)) as f64).sqrt();
                    y[(na + 1) * w + nb + 1] += zeta * c * v;
                }
                if na > 0 && nb > 0 {
                    let c = ((na * nb) as f64).sqrt();
                    y[(na - 1) * w + nb - 1] -= zeta.conj() * c * v;
                }
            }
        }
    }

    /// `exp(ζ a†b† − ζ* ab) x` by scaled Taylor steps.
    fn propagate(&self, zeta: Complex64, x: &[Complex64]) -> Vec<Complex64> {
        // ‖G‖ ≤ 2|ζ|(n+1); keep each step's norm below one
        let bound = 2.0 * zeta.norm() * (self.n + 1) as f64;
        let steps = bound.ceil().max(1.0) as usize;
        let h = zeta / steps as f64;
        let mut v = x.to_vec();
        let mut term = vec![Complex64::default(); v.len()];
        let mut next = vec![Complex64::default(); v.len()];
        for _ in 0..steps {
            term.copy_from_slice(&v);
            let mut acc = v.clone();
            for k in 1..60 {
                self.generator(h, &term, &mut next);
                let inv = 1.0 / k as f64;
                let mut size = 0.0f64;
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = n * inv;
                    size = size.max(t.norm_sqr());
                }
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += t;
                }
                if size < 1e-36 {
                    break;
                }
            }
            v = acc;
        }
        v
    }
}

fn to_full(state: &TwoModeState, n: usize) -> Vec<Complex64> {
    let w = n + 1;
    let mut v = vec![Complex64::default(); w * w];
    for (o, a) in state.iter() {
        if o.n_a <= n && o.n_b <= n {
            v[o.n_a * w + o.n_b] = a;
        }
    }
    v
}

/// `S(−ζ)|ψ⟩` propagated in the full two-mode space, with the truncation
/// doubled until the outer edge of the lattice is empty to `1e−15`.
pub fn brute_force_displace(state: &TwoModeState, p: SqueezeParam) -> Result<TwoModeState> {
    let support = state.support_max();
    let mut guard = initial_guard(p.tau(), support, 10);
    for _ in 0..10 {
        let n = support + guard;
        let space = FullSpace { n };
        let v = space.propagate(-p.zeta(), &to_full(state, n));
        let out = TwoModeState::from_entries(
            n,
            v.iter()
                .enumerate()
                .map(|(i, a)| (ModeOccupation::new(i / (n + 1), i % (n + 1)), *a)),
        )?;
        if edge_mass(&out, (guard / 8).max(2)) < 1e-15 {
            return Ok(out);
        }
        guard *= 2;
    }
    Err(invalid_param!(
        "brute-force truncation did not converge at τ = {}",
        p.tau()
    ))
}

/// Parity sum of the full-space propagated state.
pub fn brute_force_wigner(state: &TwoModeState, p: SqueezeParam) -> Result<f64> {
    let out = brute_force_displace(state, p)?;
    Ok(out
        .iter()
        .map(|(o, a)| parity_sign(o) as f64 * a.norm_sqr())
        .sum())
}

/// `Σ_n (−1)^{min} |Σ_m ⟨n|S(−ζ)|m⟩ ψ_m|²` over closed-form matrix elements,
/// output occupations up to `n_out`.
pub fn fock_expansion_wigner(state: &TwoModeState, p: SqueezeParam, n_out: usize) -> f64 {
    let support: Vec<(ModeOccupation, Complex64)> = state
        .iter()
        .filter(|(_, a)| *a != Complex64::default())
        .collect();
    let minus = p.negated();
    let mut w = 0.0;
    for na in 0..=n_out {
        for nb in 0..=n_out {
            let o = ModeOccupation::new(na, nb);
            let amp: Complex64 = support
                .iter()
                .filter(|(i, _)| i.difference() == o.difference())
                .map(|(i, a)| squeeze_matrix_element_closed(o, *i, minus) * a)
                .sum();
            w += parity_sign(o) as f64 * amp.norm_sqr();
        }
    }
    w
}

/// `⟨ψ|S(2ζ)Π|ψ⟩` from the matrix of `S(2ζ)` restricted to the support of `ψ`.
///
/// Returns the full complex value so callers can check its imaginary part.
pub fn factor_two_wigner(state: &TwoModeState, p: SqueezeParam) -> Complex64 {
    let support: Vec<(ModeOccupation, Complex64)> = state
        .iter()
        .filter(|(_, a)| *a != Complex64::default())
        .collect();
    let double = p.scaled(2.0);
    let mut acc = Complex64::default();
    for (o, ao) in &support {
        for (i, ai) in &support {
            if o.difference() != i.difference() {
                continue;
            }
            let s = squeeze_matrix_element_closed(*o, *i, double);
            acc += ao.conj() * s * (parity_sign(*i) as f64) * ai;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wigner::wigner_at;

    fn param(tau: f64, chi: f64) -> SqueezeParam {
        SqueezeParam::new(tau, chi).unwrap()
    }

    #[test]
    fn tmsv_amplitudes() {
        let s = tmsv_state(0.0, 0.0, 5).unwrap();
        assert_eq!(s.max_abs_diff(&TwoModeState::vacuum()), 0.0);
        let s = tmsv_state(1.0, 0.0, 40).unwrap();
        let a = s.amplitude(ModeOccupation::new(1, 1)).re;
        assert!((a - 0.5f64.tanh() / 0.5f64.cosh()).abs() < 1e-15);
        assert!((a - 0.4098).abs() < 1e-4);
        for tau in [0.5, 1.0] {
            let s = tmsv_state(tau, 0.4, 40).unwrap();
            assert!((s.norm_sq() - 1.0).abs() < 1e-12, "τ₀ = {tau}");
        }
        // at τ₀ = 2 the tail beyond n = 40 is tanh(1)^82 ≈ 2e-10
        let s = tmsv_state(2.0, 0.4, 40).unwrap();
        assert!((s.norm_sq() - 1.0).abs() > 1e-10);
        let s = tmsv_state(2.0, 0.4, tmsv_n_max(2.0, 1e-13)).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tmsv_truncation_helper() {
        let n = tmsv_n_max(1.0, 1e-12);
        let t2 = 0.5f64.tanh().powi(2);
        assert!(t2.powi(n as i32 + 1) < 1e-12);
        assert!(t2.powi(n as i32) >= 1e-12);
        assert_eq!(tmsv_n_max(0.0, 1e-12), 0);
    }

    #[test]
    fn displaced_tmsv_limits() {
        let p0 = param(1.0, 0.0);
        let no_shift =
            displaced_tmsv_distribution(p0, SqueezeParam::origin(), 30, Prefactor::Normalized)
                .unwrap();
        let t2 = 0.5f64.tanh().powi(2);
        let c2 = 0.5f64.cosh().powi(2);
        for (n, p) in no_shift.iter().enumerate() {
            assert!((p - t2.powi(n as i32) / c2).abs() < 1e-12);
        }
        let from_vac = displaced_tmsv_distribution(
            SqueezeParam::origin(),
            param(0.7, 2.0),
            30,
            Prefactor::Normalized,
        )
        .unwrap();
        let t2 = 0.35f64.tanh().powi(2);
        for (n, p) in from_vac.iter().enumerate() {
            assert!((p - t2.powi(n as i32) / 0.35f64.cosh().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn verbatim_prefactor_sums_to_a_quarter() {
        let d =
            displaced_tmsv_distribution(param(1.0, 0.3), param(0.7, 1.4), 400, Prefactor::Verbatim)
                .unwrap();
        assert!((d.iter().sum::<f64>() - 0.25).abs() < 1e-10);
        let d = displaced_tmsv_distribution(
            param(1.0, 0.3),
            param(0.7, 1.4),
            400,
            Prefactor::Normalized,
        )
        .unwrap();
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vacuum_sections() {
        assert_eq!(vacuum_wigner_closed(SqueezeParam::origin(), None), 1.0);
        let p = param(1.0, 0.0);
        assert!((vacuum_wigner_closed(p, None) - 0.8240).abs() < 1e-4);
        assert!((vacuum_wigner_operational(p, None) - 0.6480).abs() < 1e-4);
        assert!((vacuum_wigner_closed(p, Some(200)) - vacuum_wigner_closed(p, None)).abs() < 1e-14);
        assert!(
            (vacuum_wigner_operational(p, Some(200)) - vacuum_wigner_operational(p, None)).abs()
                < 1e-14
        );
        // the verbatim form is the normalized one times cosh²(τ/2)
        let ratio = vacuum_wigner_closed(p, Some(30)) / vacuum_wigner_operational(p, Some(30));
        assert!((ratio - 0.5f64.cosh().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn biphoton_sections() {
        assert_eq!(biphoton_wigner_closed(SqueezeParam::origin(), None), -1.0);
        assert!((biphoton_wigner_closed(param(1e-5, 0.0), None) + 1.0).abs() < 1e-8);
        let p = param(1.0, 0.0);
        let op = biphoton_wigner_operational(p, None);
        let pipeline = wigner_at(&TwoModeState::fock(1, 1, 1).unwrap(), p).unwrap();
        assert!((op - pipeline).abs() < 1e-12);
        let ratio = biphoton_wigner_closed(p, None) / op;
        assert!((ratio - 0.5f64.cosh().powi(2)).abs() < 1e-10, "{ratio}");
    }

    #[test]
    fn brute_force_vacuum() {
        let v = TwoModeState::vacuum();
        assert!(
            (brute_force_wigner(&v, param(1.0, 0.0)).unwrap() - 1.0 / 1f64.cosh()).abs() < 1e-12
        );
        assert_eq!(brute_force_wigner(&v, SqueezeParam::origin()).unwrap(), 1.0);
    }

    #[test]
    fn independent_evaluators_agree() {
        let psi = TwoModeState::from_entries(
            3,
            [
                (ModeOccupation::new(0, 0), Complex64::new(0.6, 0.0)),
                (ModeOccupation::new(2, 1), Complex64::new(0.0, 0.48)),
                (ModeOccupation::new(1, 2), Complex64::new(0.36, 0.0)),
                (ModeOccupation::new(3, 3), Complex64::new(0.3, -0.2)),
                (ModeOccupation::new(2, 2), Complex64::new(0.0, 0.0)),
            ],
        )
        .unwrap()
        .normalize()
        .unwrap();
        for &(tau, chi) in &[(0.3, 0.0), (1.0, 0.8), (1.5, 3.0)] {
            let p = param(tau, chi);
            let w = wigner_at(&psi, p).unwrap();
            assert!((brute_force_wigner(&psi, p).unwrap() - w).abs() < 1e-10);
            assert!((fock_expansion_wigner(&psi, p, 60) - w).abs() < 1e-8);
            let f2 = factor_two_wigner(&psi, p);
            assert!(f2.im.abs() < 1e-12);
            assert!((f2.re - w).abs() < 1e-10);
        }
    }
}
