use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid_param, Result};
use crate::fock::HalfInt;

/// `⟨m+1|K₊|m⟩` on the diagonal with `|n_a − n_b| = abs_d`.
///
/// With `k = (abs_d + 1)/2` and `μ = m + k` this is `√((μ+k)(μ−k+1))`.
pub fn pair_coupling(abs_d: u64, m: usize) -> f64 {
    (((m + 1) as f64) * ((m as u64 + abs_d + 1) as f64)).sqrt()
}

/// The su(1,1) generators restricted to one fixed-difference diagonal,
/// truncated to pair levels `m = 0..=m_max`.
#[derive(Debug, Clone)]
pub struct DifferenceBlock {
    d: i64,
    m_max: usize,
    k0: DMatrix<Complex64>,
    kp: DMatrix<Complex64>,
    km: DMatrix<Complex64>,
}

pub fn block_generators(d: i64, m_max: usize) -> Result<DifferenceBlock> {
    if m_max < 1 {
        return Err(invalid_param!(
            "block truncation m_max = {m_max} must be at least 1"
        ));
    }
    let n = m_max + 1;
    let abs_d = d.unsigned_abs();
    let k = 0.5 * (abs_d as f64 + 1.0);
    let k0 = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new(r as f64 + k, 0.0)
        } else {
            Complex64::default()
        }
    });
    let kp = DMatrix::from_fn(n, n, |r, c| {
        if r == c + 1 {
            Complex64::new(pair_coupling(abs_d, c), 0.0)
        } else {
            Complex64::default()
        }
    });
    let km = kp.adjoint();
    Ok(DifferenceBlock {
        d,
        m_max,
        k0,
        kp,
        km,
    })
}

impl DifferenceBlock {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn dim(&self) -> usize {
        self.m_max + 1
    }

    pub fn bargmann_k(&self) -> HalfInt {
        HalfInt::from_doubled(self.d.abs() + 1)
    }

    pub fn k0(&self) -> &DMatrix<Complex64> {
        &self.k0
    }

    pub fn k_plus(&self) -> &DMatrix<Complex64> {
        &self.kp
    }

    pub fn k_minus(&self) -> &DMatrix<Complex64> {
        &self.km
    }

    /// Sub-diagonal of `K₊`, the real couplings of the block.
    pub fn couplings(&self) -> Vec<f64> {
        (0..self.m_max).map(|m| self.kp[(m + 1, m)].re).collect()
    }

    /// `K₀² − ½(K₊K₋ + K₋K₊)` on the truncated block.
    pub fn casimir(&self) -> DMatrix<Complex64> {
        let half = Complex64::new(0.5, 0.0);
        &self.k0 * &self.k0 - (&self.kp * &self.km + &self.km * &self.kp) * half
    }

    /// `ζK₊ − ζ*K₋`.
    pub fn squeeze_generator(&self, zeta: Complex64) -> DMatrix<Complex64> {
        &self.kp * zeta - &self.km * zeta.conj()
    }
}
