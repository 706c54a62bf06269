//! Hyperbolic d-functions `d^k_{μ'μ}(τ)`.
//!
//! The rotation generator is fixed so that `d^k_{μ'μ}(τ)` equals the element
//! `⟨μ'|S(τ/2)|μ⟩` of the squeeze operator at real positive `ζ` inside the
//! irrep `k`. With this choice `d^{1/2}_{1/2,1/2}(τ) = 1/cosh(τ/2)` and in
//! general `d^k_{kk}(τ) = cosh^{−2k}(τ/2)`.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use super::closed_form::real_squeeze_element;
use super::squeeze::BlockEigen;
use crate::error::{invalid_param, Error, Result};
use crate::fock::{HalfInt, ModeOccupation};
use crate::num::Num;

fn check_labels(k: HalfInt, mu: HalfInt) -> Result<usize> {
    if k.doubled() < 1 {
        return Err(Error::InvalidIrrep(format!("k = {k} must be positive")));
    }
    match mu.int_diff(k) {
        Some(l) if l >= 0 => Ok(l as usize),
        _ => Err(Error::InvalidIrrep(format!(
            "μ = {mu} is not k = {k} plus a nonnegative integer"
        ))),
    }
}

/// A single element `d^k_{μ'μ}(τ)`.
pub fn dfunction_element(k: HalfInt, mu_prime: HalfInt, mu: HalfInt, tau: f64) -> Result<f64> {
    let lp = check_labels(k, mu_prime)?;
    let l = check_labels(k, mu)?;
    if !tau.is_finite() {
        return Err(invalid_param!("tau = {tau} must be finite"));
    }
    Ok(element_by_level(k, lp, l, tau))
}

/// `d^k` indexed by pair levels `μ' − k` and `μ − k`; negative `τ` uses
/// `d(−τ) = d(τ)ᵀ`.
pub(crate) fn element_by_level(k: HalfInt, level_prime: usize, level: usize, tau: f64) -> f64 {
    let d = k.doubled() - 1;
    let (out, inp) = if tau >= 0.0 {
        (level_prime, level)
    } else {
        (level, level_prime)
    };
    real_squeeze_element(
        ModeOccupation::on_diagonal(d, out),
        ModeOccupation::on_diagonal(d, inp),
        tau.abs(),
    )
}

/// `d^k_{μ'μ}(τ)` for `k ≤ μ, μ' ≤ mu_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DFunctionTable {
    k: HalfInt,
    tau: f64,
    values: DMatrix<f64>,
}

impl DFunctionTable {
    pub fn k(&self) -> HalfInt {
        self.k
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn mu_max(&self) -> HalfInt {
        self.k.add_int(self.values.nrows() as i64 - 1)
    }

    /// Matrix indexed by levels: entry `(μ' − k, μ − k)`.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// `d^k_{μ'μ}`; `None` outside the table.
    pub fn get(&self, mu_prime: HalfInt, mu: HalfInt) -> Option<f64> {
        let r = mu_prime.int_diff(self.k)?;
        let c = mu.int_diff(self.k)?;
        let n = self.values.nrows() as i64;
        if (0..n).contains(&r) && (0..n).contains(&c) {
            Some(self.values[(r as usize, c as usize)])
        } else {
            None
        }
    }

    /// CSV with columns `k,mu_prime,mu,tau,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,mu_prime,mu,tau,value\n");
        let n = self.values.nrows();
        for r in 0..n {
            for c in 0..n {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    self.k,
                    self.k.add_int(r as i64),
                    self.k.add_int(c as i64),
                    Num(self.tau),
                    Num(self.values[(r, c)])
                );
            }
        }
        s
    }
}

/// Table of `d^k(τ)` over `μ, μ' ∈ [k, mu_max]` from the finite-sum formula.
///
/// Stable for arbitrarily large `τ`.
pub fn dfunction(k: HalfInt, tau: f64, mu_max: HalfInt) -> Result<DFunctionTable> {
    let top = check_labels(k, mu_max)?;
    if !tau.is_finite() {
        return Err(invalid_param!("tau = {tau} must be finite"));
    }
    let values = DMatrix::from_fn(top + 1, top + 1, |r, c| element_by_level(k, r, c, tau));
    Ok(DFunctionTable { k, tau, values })
}

/// The same table by exponentiating the truncated irrep block.
///
/// `guard` extra levels absorb truncation leakage; the cost grows with
/// `sinh²(τ/2)`, so this is meant for moderate `τ` and cross-checks.
pub fn dfunction_by_exponential(
    k: HalfInt,
    tau: f64,
    mu_max: HalfInt,
    guard: usize,
) -> Result<DFunctionTable> {
    let top = check_labels(k, mu_max)?;
    if !tau.is_finite() {
        return Err(invalid_param!("tau = {tau} must be finite"));
    }
    let abs_d = (k.doubled() - 1) as u64;
    let eig = BlockEigen::cached(abs_d, top + 1 + guard.max(1));
    let u = eig.unitary(0.5 * tau, 0.0);
    let values = DMatrix::from_fn(top + 1, top + 1, |r, c| u[(r, c)].re);
    Ok(DFunctionTable { k, tau, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF: HalfInt = HalfInt::HALF;

    #[test]
    fn identity_at_zero() {
        let t = dfunction(HalfInt::from_int(1), 0.0, HalfInt::from_int(5)).unwrap();
        assert_eq!(t.values(), &DMatrix::identity(5, 5));
    }

    #[test]
    fn lowest_weight_element() {
        for &tau in &[0.3, 1.0, 4.0, 25.0] {
            let v = dfunction_element(HALF, HALF, HALF, tau).unwrap();
            assert!((v - 1.0 / (0.5 * tau).cosh()).abs() < 1e-14 * (1.0 + 1.0 / v));
            let k = HalfInt::from_doubled(5);
            let v = dfunction_element(k, k, k, tau).unwrap();
            let want = (0.5 * tau).cosh().powf(-5.0);
            assert!(((v - want) / want).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_decays_monotonically() {
        let k = HalfInt::from_int(1);
        let mut prev = 1.0;
        for i in 1..60 {
            let v = dfunction_element(k, k, k, 0.25 * i as f64).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn exponential_route_agrees() {
        for kd in 1..=4 {
            let k = HalfInt::from_doubled(kd);
            let top = k.add_int(6);
            for &tau in &[0.5, 1.7, 3.0] {
                let a = dfunction(k, tau, top).unwrap();
                let b = dfunction_by_exponential(k, tau, top, 400).unwrap();
                assert!((a.values() - b.values()).amax() < 1e-10, "k={k} τ={tau}");
            }
        }
    }

    #[test]
    fn negative_argument_transposes() {
        let k = HalfInt::from_doubled(3);
        let a = dfunction(k, 1.1, k.add_int(4)).unwrap();
        let b = dfunction(k, -1.1, k.add_int(4)).unwrap();
        assert!((a.values().transpose() - b.values()).amax() < 1e-15);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(dfunction(HalfInt::from_int(1), 1.0, HALF).is_err());
        assert!(dfunction_element(HalfInt::from_int(1), HALF, HalfInt::from_int(1), 1.0).is_err());
        assert!(dfunction(HalfInt::from_int(0), 1.0, HalfInt::from_int(1)).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = dfunction(HalfInt::from_int(1), 0.0, HalfInt::from_int(2)).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,mu_prime,mu,tau,value"));
        assert_eq!(lines.next(), Some("1,1,1,0,1"));
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(t.get(HalfInt::from_int(2), HalfInt::from_int(1)), Some(0.0));
        assert_eq!(t.get(HalfInt::from_int(3), HalfInt::from_int(1)), None);
    }
}
