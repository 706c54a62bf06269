//! Two-mode squeeze matrix elements from the normally ordered disentangling
//!
//! `S(ζ) = exp(ξK₊) · exp(−2 ln cosh(τ/2) K₀) · exp(−ξ*K₋)`, `ξ = tanh(τ/2)e^{iχ}`,
//!
//! which turns every Fock matrix element into a finite sum. This path shares
//! no code with the block exponential and serves as its oracle.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::coords::SqueezeParam;
use crate::fock::ModeOccupation;

const LN_FACT_TABLE: usize = 4096;

pub(crate) fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..LN_FACT_TABLE {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    });
    if n < LN_FACT_TABLE {
        table[n]
    } else {
        let mut acc = table[LN_FACT_TABLE - 1];
        for i in LN_FACT_TABLE..=n {
            acc += (i as f64).ln();
        }
        acc
    }
}

/// `(ln tanh(τ/2), ln cosh(τ/2))` without cancellation for large `τ`.
fn ln_tanh_cosh(tau: f64) -> (f64, f64) {
    let e = (-tau).exp();
    let ln_t = (-e).ln_1p() - e.ln_1p();
    let ln_c = 0.5 * tau + e.ln_1p() - std::f64::consts::LN_2;
    (ln_t, ln_c)
}

/// Real part of `⟨out|S(τ/2)|in⟩`, i.e. the element at `χ = 0`.
///
/// For general `χ` the element is this value times `e^{iχ(m_out − m_in)}`.
pub(crate) fn real_squeeze_element(out: ModeOccupation, inp: ModeOccupation, tau: f64) -> f64 {
    if out.difference() != inp.difference() {
        return 0.0;
    }
    if tau == 0.0 {
        return if out == inp { 1.0 } else { 0.0 };
    }
    let (na, nb) = (inp.n_a, inp.n_b);
    let (oa, ob) = (out.n_a, out.n_b);
    let m = inp.pair_level();
    let mo = out.pair_level();
    let (ln_t, ln_c) = ln_tanh_cosh(tau);
    let ln_norm = 0.5 * (ln_factorial(na) + ln_factorial(nb) + ln_factorial(oa) + ln_factorial(ob));

    let mut sum = 0.0;
    for j in m.saturating_sub(mo)..=m {
        let l = j + mo - m;
        let ln_mag = ln_norm
            - ln_factorial(j)
            - ln_factorial(l)
            - ln_factorial(na - j)
            - ln_factorial(nb - j)
            + (j + l) as f64 * ln_t
            - (na + nb + 1 - 2 * j) as f64 * ln_c;
        let term = ln_mag.exp();
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// `⟨out|S(ζ)|in⟩` in closed form; zero when the photon-number differences differ.
pub fn squeeze_matrix_element_closed(
    out: ModeOccupation,
    inp: ModeOccupation,
    p: SqueezeParam,
) -> Complex64 {
    let r = real_squeeze_element(out, inp, p.tau());
    if r == 0.0 {
        return Complex64::default();
    }
    let shift = out.pair_level() as f64 - inp.pair_level() as f64;
    Complex64::from_polar(r, shift * p.chi())
}
