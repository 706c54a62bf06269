//! Recovering the density matrix of one irrep from its Wigner function.
//!
//! The azimuthal Fourier component `q` of `W(ζ/2)` is a combination of the
//! d-functions `d^k_{ν+q,ν}(τ)` weighted by `(−1)^{ν−k} ψ*_{ν+q} ψ_ν`. The
//! literal projection integrates against one d-function with the prefactor
//! `(2k−1)/2π`. Over `∫dτ sinh τ` alone these d-functions are not mutually
//! orthogonal, so the default kernel projects onto all of them and solves the
//! small Gram system instead.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::dfunction::element_by_level;
use crate::algebra::SqueezeParam;
use crate::error::{invalid_param, Error, Result};
use crate::fock::HalfInt;
use crate::num::Num;

/// Nodes and weights for `∫₀^{τ_max} dτ sinh τ ∫₀^{2π} dχ`.
///
/// The radial rule is Gauss-Legendre in `u = tanh(τ/2)`, where the measure
/// becomes `4u du/(1−u²)²` and products of d-functions with `k ≥ 1` turn
/// into polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    tau_nodes: Vec<f64>,
    tau_weights: Vec<f64>,
    chi_nodes: Vec<f64>,
    tau_max: f64,
}

impl QuadratureGrid {
    pub fn new(tau_max: f64, tau_count: usize, chi_count: usize) -> Result<Self> {
        if !(tau_max > 0.0) || !tau_max.is_finite() {
            return Err(invalid_param!(
                "tau_max = {tau_max} must be positive and finite"
            ));
        }
        let n = NonZeroUsize::new(tau_count)
            .ok_or_else(|| invalid_param!("need at least one τ node"))?;
        if chi_count == 0 {
            return Err(invalid_param!("need at least one χ node"));
        }
        // 1 − u_max without cancellation
        let gap = 2.0 / ((tau_max).exp() + 1.0);
        let u_max = 1.0 - gap;
        let rule = GaussLegendre::new(n);
        let mut tau_nodes = Vec::with_capacity(tau_count);
        let mut tau_weights = Vec::with_capacity(tau_count);
        for &(x, w) in rule.as_node_weight_pairs() {
            let u = 0.5 * u_max * (1.0 + x);
            let one_minus_u = gap + 0.5 * u_max * (1.0 - x);
            let one_plus_u = 1.0 + u;
            let tau = (one_plus_u / one_minus_u).ln();
            let jac = 4.0 * u / (one_minus_u * one_plus_u).powi(2);
            tau_nodes.push(tau);
            tau_weights.push(0.5 * u_max * w * jac);
        }
        let chi_nodes = (0..chi_count)
            .map(|j| TAU * j as f64 / chi_count as f64)
            .collect();
        Ok(Self {
            tau_nodes,
            tau_weights,
            chi_nodes,
            tau_max,
        })
    }

    pub fn tau_nodes(&self) -> &[f64] {
        &self.tau_nodes
    }

    pub fn tau_weights(&self) -> &[f64] {
        &self.tau_weights
    }

    pub fn chi_nodes(&self) -> &[f64] {
        &self.chi_nodes
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// `∫₀^{τ_max} dτ sinh τ f(τ)`.
    pub fn integrate_tau<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.tau_nodes
            .iter()
            .zip(&self.tau_weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// How the measured field is projected onto the d-functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// One d-function per element with the `(2k−1)/2π` prefactor.
    Projection,
    /// Project onto every d-function of the Fourier component and solve the
    /// Gram system.
    #[default]
    GramCorrected,
}

/// Where the field is evaluated for a quadrature node at `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArgumentScaling {
    /// `W(ζ/2)`: the field is sampled at `τ/2`.
    #[default]
    Half,
    /// `W(ζ)`: the field is sampled at `τ`.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReconstructOptions {
    pub kernel: Kernel,
    pub scaling: ArgumentScaling,
}

/// Quality indicators of one reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `max |ρ − ρ†|` before symmetrization.
    pub hermiticity_residual: f64,
    /// Largest condition number among the Gram systems (1 for projection).
    pub gram_condition: f64,
    /// Field evaluations spent.
    pub evaluations: usize,
    pub trace: f64,
}

/// `ρ^{(k)}`: entry `(μ' − k, μ − k)` holds `⟨k,μ'|ρ|k,μ⟩`.
///
/// For `k ≥ 1` both signs of `n_a − n_b` share the label `k`; the block is
/// the sum of their contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepDensityBlock {
    k: HalfInt,
    rho: DMatrix<Complex64>,
    diagnostics: Diagnostics,
}

impl IrrepDensityBlock {
    pub fn k(&self) -> HalfInt {
        self.k
    }

    pub fn mu_max(&self) -> HalfInt {
        self.k.add_int(self.rho.nrows() as i64 - 1)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// `⟨k,μ'|ρ|k,μ⟩`.
    pub fn get(&self, mu_prime: HalfInt, mu: HalfInt) -> Option<Complex64> {
        let r = mu_prime.int_diff(self.k)?;
        let c = mu.int_diff(self.k)?;
        let n = self.rho.nrows() as i64;
        ((0..n).contains(&r) && (0..n).contains(&c)).then(|| self.rho[(r as usize, c as usize)])
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &DMatrix<Complex64>) -> f64 {
        (&self.rho - other)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// CSV with columns `k,mu,mu_prime,re,im`, where the value is `⟨μ'|ρ|μ⟩`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,mu,mu_prime,re,im\n");
        let n = self.rho.nrows();
        for c in 0..n {
            for r in 0..n {
                let z = self.rho[(r, c)];
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    self.k,
                    self.k.add_int(c as i64),
                    self.k.add_int(r as i64),
                    Num(z.re),
                    Num(z.im)
                );
            }
        }
        s
    }
}

fn check_k(k: HalfInt) -> Result<()> {
    if k.doubled() < 2 {
        return Err(Error::InvalidIrrep(format!(
            "k = {k}: the inversion prefactor 2k − 1 vanishes below k = 1"
        )));
    }
    Ok(())
}

/// Samples `W` on the quadrature grid and returns the azimuthal Fourier
/// coefficients `f_q(τ_i) = (1/2π)∫dχ W e^{−iqχ}` for `|q| ≤ q_max`.
fn fourier_components<F>(
    wigner_eval: &F,
    grid: &QuadratureGrid,
    scaling: ArgumentScaling,
    q_max: usize,
) -> Result<Vec<Vec<Complex64>>>
where
    F: Fn(SqueezeParam) -> Result<f64> + Sync,
{
    let arg = match scaling {
        ArgumentScaling::Half => 0.5,
        ArgumentScaling::Full => 1.0,
    };
    let nc = grid.chi_nodes.len();
    let nodes: Vec<(f64, f64)> = grid
        .tau_nodes
        .iter()
        .flat_map(|&t| grid.chi_nodes.iter().map(move |&c| (t, c)))
        .collect();
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&(t, c)| wigner_eval(SqueezeParam::new(arg * t, c)?))
        .collect::<Result<_>>()?;

    let width = 2 * q_max + 1;
    let mut out = vec![vec![Complex64::default(); grid.tau_nodes.len()]; width];
    for (i, row) in values.chunks(nc).enumerate() {
        for (qi, comp) in out.iter_mut().enumerate() {
            let q = qi as f64 - q_max as f64;
            let s: Complex64 = row
                .iter()
                .zip(&grid.chi_nodes)
                .map(|(&w, &c)| w * Complex64::from_polar(1.0, -q * c))
                .sum();
            comp[i] = s / nc as f64;
        }
    }
    Ok(out)
}

/// Reconstructs `ρ^{(k)}` on levels `μ − k = 0..=levels` from a Wigner
/// evaluator.
pub fn reconstruct_irrep<F>(
    wigner_eval: F,
    k: HalfInt,
    levels: usize,
    grid: &QuadratureGrid,
    opts: &ReconstructOptions,
) -> Result<IrrepDensityBlock>
where
    F: Fn(SqueezeParam) -> Result<f64> + Sync,
{
    check_k(k)?;
    let n = levels + 1;
    if grid.chi_nodes.len() < 2 * n - 1 {
        return Err(invalid_param!(
            "{} χ nodes alias Fourier components up to ±{levels}; need at least {}",
            grid.chi_nodes.len(),
            2 * n - 1
        ));
    }
    let comps = fourier_components(&wigner_eval, grid, opts.scaling, levels)?;
    let two_k_minus_one = (k.doubled() - 1) as f64;

    // x[(a, b)] = (−1)^{b} ψ*_a ψ_b with a, b pair levels
    let mut x = DMatrix::<Complex64>::zeros(n, n);
    let mut gram_condition: f64 = 1.0;
    for q in -(levels as i64)..=(levels as i64) {
        let f = &comps[(q + levels as i64) as usize];
        let pairs: Vec<(usize, usize)> = (0..n)
            .filter_map(|b| {
                let a = b as i64 + q;
                (0..n as i64).contains(&a).then_some((a as usize, b))
            })
            .collect();
        // d-function values for each pair at every radial node
        let basis: Vec<Vec<f64>> = pairs
            .iter()
            .map(|&(a, b)| {
                grid.tau_nodes
                    .iter()
                    .map(|&t| element_by_level(k, a, b, t))
                    .collect()
            })
            .collect();
        let proj: Vec<Complex64> = basis
            .iter()
            .map(|g| {
                g.iter()
                    .zip(f)
                    .zip(&grid.tau_weights)
                    .map(|((gi, fi), w)| fi * (gi * w))
                    .sum()
            })
            .collect();

        let sol: Vec<Complex64> = match opts.kernel {
            Kernel::Projection => proj.iter().map(|p| p * two_k_minus_one).collect(),
            Kernel::GramCorrected => {
                let m = pairs.len();
                let gram = DMatrix::from_fn(m, m, |r, c| {
                    basis[r]
                        .iter()
                        .zip(&basis[c])
                        .zip(&grid.tau_weights)
                        .map(|((a, b), w)| a * b * w)
                        .sum::<f64>()
                });
                let eig = gram.clone().symmetric_eigenvalues();
                let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                });
                gram_condition = gram_condition.max(hi / lo);
                let chol = gram
                    .cholesky()
                    .ok_or_else(|| invalid_param!("Gram matrix of component {q} is singular"))?;
                let re = chol.solve(&DVector::from_iterator(m, proj.iter().map(|z| z.re)));
                let im = chol.solve(&DVector::from_iterator(m, proj.iter().map(|z| z.im)));
                re.iter()
                    .zip(im.iter())
                    .map(|(&r, &i)| Complex64::new(r, i))
                    .collect()
            }
        };
        for (&(a, b), v) in pairs.iter().zip(sol) {
            x[(a, b)] = v;
        }
    }

    // ⟨a|ρ|b⟩ = ψ_a ψ*_b = conj(ψ*_a ψ_b) = conj((−1)^b x_ab)
    let raw = DMatrix::from_fn(n, n, |a, b| {
        let s = if b % 2 == 0 { 1.0 } else { -1.0 };
        (x[(a, b)] * s).conj()
    });
    let hermiticity_residual = (&raw - raw.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let rho = (&raw + raw.adjoint()).map(|z| z * 0.5);
    let trace = rho.diagonal().iter().map(|z| z.re).sum();
    Ok(IrrepDensityBlock {
        k,
        rho,
        diagnostics: Diagnostics {
            hermiticity_residual,
            gram_condition,
            evaluations: grid.tau_nodes.len() * grid.chi_nodes.len(),
            trace,
        },
    })
}

/// An index pair `(μ, μ')` of one d-function, as pair levels above `k`.
pub type LevelPair = (usize, usize);

/// `∫ dτ sinh τ d^k_a(τ) d^k_b(τ) − δ_ab/(2k−1)` for every pair of listed
/// index pairs.
pub fn orthogonality_residual(
    k: HalfInt,
    pairs: &[LevelPair],
    grid: &QuadratureGrid,
) -> Result<DMatrix<f64>> {
    check_k(k)?;
    let target = 1.0 / (k.doubled() - 1) as f64;
    let basis: Vec<Vec<f64>> = pairs
        .iter()
        .map(|&(a, b)| {
            grid.tau_nodes
                .iter()
                .map(|&t| element_by_level(k, a, b, t))
                .collect()
        })
        .collect();
    let m = pairs.len();
    Ok(DMatrix::from_fn(m, m, |r, c| {
        let v: f64 = basis[r]
            .iter()
            .zip(&basis[c])
            .zip(&grid.tau_weights)
            .map(|((x, y), w)| x * y * w)
            .sum();
        v - if r == c { target } else { 0.0 }
    }))
}

/// Every pair `(μ, μ + ν)` with both levels in `0..=levels`.
pub fn all_level_pairs(levels: usize) -> Vec<LevelPair> {
    (0..=levels)
        .flat_map(|a| (0..=levels).map(move |b| (a, b)))
        .collect()
}
