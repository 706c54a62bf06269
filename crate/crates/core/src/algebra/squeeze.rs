//! Two-mode squeezing by fixed-difference blocks.
//!
//! The squeeze operator conserves `n_a − n_b`, so it acts independently on
//! every diagonal of the amplitude grid. On one diagonal the generator
//! `ζK₊ − ζ*K₋` is tridiagonal and anti-Hermitian. Writing `ζ = θe^{iχ}`,
//!
//! `ζK₊ − ζ*K₋ = P (−iθ T) P†`,  `P = diag(e^{im(χ+π/2)})`,
//!
//! where `T` is the real symmetric tridiagonal matrix of pair couplings. One
//! eigendecomposition `T = V Λ Vᵀ` therefore serves every `(τ, χ)`:
//! `S = P V e^{−iθΛ} Vᵀ P†`, unitary to rounding error.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use super::coords::SqueezeParam;
use super::generators::{pair_coupling, DifferenceBlock};
use crate::error::{invalid_param, Result};
use crate::fock::TwoModeState;

/// Direction of the displacement: `S(ζ)` or `S(−ζ) = S†(ζ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Eigensystem of the coupling matrix of one diagonal block.
#[derive(Debug)]
pub struct BlockEigen {
    abs_d: u64,
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl BlockEigen {
    fn compute(abs_d: u64, len: usize) -> Self {
        let t = DMatrix::from_fn(len, len, |r, c| {
            if r == c + 1 {
                pair_coupling(abs_d, c)
            } else if c == r + 1 {
                pair_coupling(abs_d, r)
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        Self {
            abs_d,
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    /// Cached eigensystem for the block of `|n_a − n_b| = abs_d` with `len` levels.
    pub fn cached(abs_d: u64, len: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<BlockEigen>>>> = OnceLock::new();
        const MAX_ENTRIES: usize = 512;

        let cache = CACHE.get_or_init(Default::default);
        if let Some(e) = cache.lock().expect("cache lock").get(&(abs_d, len)) {
            return Arc::clone(e);
        }
        let fresh = Arc::new(Self::compute(abs_d, len));
        let mut map = cache.lock().expect("cache lock");
        if map.len() >= MAX_ENTRIES {
            map.clear();
        }
        Arc::clone(map.entry((abs_d, len)).or_insert(fresh))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn abs_d(&self) -> u64 {
        self.abs_d
    }

    fn gauge(&self, chi: f64) -> Vec<Complex64> {
        let phase = chi + std::f64::consts::FRAC_PI_2;
        (0..self.len())
            .map(|m| Complex64::from_polar(1.0, m as f64 * phase))
            .collect()
    }

    /// `exp(ζK₊ − ζ*K₋) x` with `ζ = θe^{iχ}`; `x` may be shorter than the block.
    pub fn apply(&self, theta: f64, chi: f64, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let gauge = self.gauge(chi);
        let g: Vec<Complex64> = x
            .iter()
            .zip(&gauge)
            .map(|(xm, pm)| xm * pm.conj())
            .collect();
        // eigenvectors are stored column-major, so walk whole columns
        let data = self.vectors.as_slice();
        let mut y = vec![Complex64::default(); n];
        for j in 0..n {
            let col = &data[j * n..(j + 1) * n];
            let c: Complex64 = col.iter().zip(&g).map(|(v, gm)| gm * *v).sum();
            let c = c * Complex64::from_polar(1.0, -theta * self.values[j]);
            if c == Complex64::default() {
                continue;
            }
            for (ym, v) in y.iter_mut().zip(col) {
                *ym += c * *v;
            }
        }
        for (ym, pm) in y.iter_mut().zip(&gauge) {
            *ym *= pm;
        }
        y
    }

    /// The full block matrix `exp(ζK₊ − ζ*K₋)`.
    pub fn unitary(&self, theta: f64, chi: f64) -> DMatrix<Complex64> {
        let n = self.len();
        let gauge = self.gauge(chi);
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        let phases = DMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::from_polar(1.0, -theta * self.values[r])
            } else {
                Complex64::default()
            }
        });
        let core = &v * phases * v.transpose();
        DMatrix::from_fn(n, n, |r, c| gauge[r] * core[(r, c)] * gauge[c].conj())
    }
}

/// `exp(ζK₊ − ζ*K₋)` on a truncated difference block.
pub fn squeeze_block_unitary(block: &DifferenceBlock, p: SqueezeParam) -> DMatrix<Complex64> {
    let eig = BlockEigen::cached(block.d().unsigned_abs(), block.dim());
    eig.unitary(0.5 * p.tau(), p.chi())
}

/// Truncation control for [`apply_squeeze`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeOptions {
    /// Largest probability tolerated in the outer edge of the enlarged grid.
    /// Interior amplitude errors scale like its square root.
    pub tail_tol: f64,
    /// Smallest guard band added to the input truncation.
    pub min_guard: usize,
    /// How many times the guard may grow before giving up with a warning.
    pub max_refinements: u32,
    /// Use exactly this output truncation instead of choosing one.
    pub fixed_n_out: Option<usize>,
}

impl Default for SqueezeOptions {
    fn default() -> Self {
        Self {
            tail_tol: 1e-20,
            min_guard: 10,
            max_refinements: 8,
            fixed_n_out: None,
        }
    }
}

/// Output of [`apply_squeeze`].
#[derive(Debug, Clone)]
pub struct Squeezed {
    pub state: TwoModeState,
    /// Probability found in the outer edge of the output grid; a proxy for
    /// the amplitude that reached the truncation and was reflected.
    pub leakage: f64,
    pub guard: usize,
    /// Set when `leakage` still exceeds the tolerance.
    pub tail_warning: bool,
}

/// Initial guard band `max(min, ⌈3 sinh²(τ/2)(n_support + 1)⌉)`.
pub fn initial_guard(tau: f64, support: usize, min_guard: usize) -> usize {
    let s = (0.5 * tau).sinh();
    let g = (3.0 * s * s * (support as f64 + 1.0)).ceil();
    min_guard.max(g.min(1e7) as usize)
}

fn edge_width(guard: usize) -> usize {
    (guard / 8).max(2)
}

/// Mass in the outer `width` shells of the grid.
pub(crate) fn edge_mass(state: &TwoModeState, width: usize) -> f64 {
    let lim = state.n_max().saturating_sub(width);
    state
        .iter()
        .filter(|(o, _)| o.n_a.max(o.n_b) > lim)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

fn squeeze_on_grid(
    state: &TwoModeState,
    p: SqueezeParam,
    sign: Sign,
    n_out: usize,
) -> TwoModeState {
    let theta = sign.factor() * 0.5 * p.tau();
    let chi = p.chi();
    let diagonals: Vec<(i64, Vec<Complex64>)> = state
        .differences()
        .into_par_iter()
        .filter_map(|d| {
            let abs_d = d.unsigned_abs() as usize;
            if abs_d > n_out {
                return None;
            }
            let len = n_out + 1 - abs_d;
            let x = state.diagonal(d);
            let y = if theta == 0.0 {
                let mut y = x;
                y.resize(len, Complex64::default());
                y
            } else {
                BlockEigen::cached(abs_d as u64, len).apply(theta, chi, &x)
            };
            Some((d, y))
        })
        .collect();
    let mut out = TwoModeState::zeros(n_out);
    for (d, y) in diagonals {
        out.set_diagonal(d, &y);
    }
    out
}

/// Applies `S(±ζ)` to `state`, diagonal by diagonal.
///
/// The result lives on a grid enlarged by a guard band. Unless a fixed output
/// truncation is requested, the guard grows until the probability in the
/// outer edge of the grid drops below `tail_tol`.
pub fn apply_squeeze(
    state: &TwoModeState,
    p: SqueezeParam,
    sign: Sign,
    opts: &SqueezeOptions,
) -> Result<Squeezed> {
    if !(opts.tail_tol > 0.0) {
        return Err(invalid_param!(
            "tail_tol = {} must be positive",
            opts.tail_tol
        ));
    }
    let n_in = state.n_max();
    if let Some(n_out) = opts.fixed_n_out {
        if n_out < n_in {
            return Err(invalid_param!(
                "fixed output truncation {n_out} is below the input truncation {n_in}"
            ));
        }
        let guard = n_out - n_in;
        let out = squeeze_on_grid(state, p, sign, n_out);
        let leakage = edge_mass(&out, edge_width(guard.max(opts.min_guard)));
        return Ok(Squeezed {
            state: out,
            leakage,
            guard,
            tail_warning: leakage > opts.tail_tol,
        });
    }

    let mut guard = initial_guard(p.tau(), state.support_max(), opts.min_guard);
    let mut refinements = 0;
    loop {
        let out = squeeze_on_grid(state, p, sign, n_in + guard);
        let leakage = edge_mass(&out, edge_width(guard));
        if leakage <= opts.tail_tol || refinements >= opts.max_refinements || p.tau() == 0.0 {
            return Ok(Squeezed {
                state: out,
                leakage,
                guard,
                tail_warning: leakage > opts.tail_tol,
            });
        }
        guard = next_guard(&out, n_in, guard, opts.tail_tol);
        refinements += 1;
    }
}

/// Mass beyond each shell: `tail[n]` sums the shells `max(n_a, n_b) > n`.
fn tail_profile(state: &TwoModeState) -> Vec<f64> {
    let mut shells = vec![0.0; state.n_max() + 1];
    for (o, a) in state.iter() {
        shells[o.n_a.max(o.n_b)] += a.norm_sqr();
    }
    let mut tail = vec![0.0; shells.len()];
    let mut acc = 0.0;
    for n in (0..shells.len()).rev() {
        tail[n] = acc;
        acc += shells[n];
    }
    tail
}

/// Guard for the next attempt. The tail of a squeezed state falls off
/// geometrically, so its decay between two interior shells predicts where it
/// crosses `tail_tol`; doubling is the fallback when the fit is unusable.
fn next_guard(out: &TwoModeState, n_in: usize, guard: usize, tail_tol: f64) -> usize {
    let (lo, hi) = (guard + guard / 4, 4 * guard);
    let n_out = out.n_max();
    let (n1, n2) = (n_out - guard / 2, n_out - guard / 4);
    if n2 <= n1 {
        return 2 * guard;
    }
    let tail = tail_profile(out);
    let (t1, t2) = (tail[n1], tail[n2]);
    let rate = (t2 / t1).ln() / (n2 - n1) as f64;
    if !(t2 > 0.0 && rate < 0.0 && rate.is_finite()) {
        return 2 * guard;
    }
    // shell where the tail drops to tail_tol, which must sit an edge width inside
    let target = n2 as f64 + (tail_tol / t2).ln() / rate;
    let wanted = (target - n_in as f64) * 8.0 / 7.0 * 1.1;
    (wanted.ceil() as usize).clamp(lo, hi)
}

/// Chooses one output truncation adequate for every listed parameter, so a
/// grid of evaluations can share the cached block eigensystems.
pub fn plan_truncation(
    state: &TwoModeState,
    params: &[SqueezeParam],
    sign: Sign,
    opts: &SqueezeOptions,
) -> Result<usize> {
    let n_in = state.n_max();
    let max_tau = params.iter().map(|p| p.tau()).fold(0.0, f64::max);
    // the widest spread sits at the largest τ; probe each azimuth there
    let probes: Vec<SqueezeParam> = params
        .iter()
        .filter(|p| p.tau() == max_tau)
        .copied()
        .collect();
    if probes.is_empty() || max_tau == 0.0 {
        return Ok(n_in + opts.min_guard);
    }
    // every probe runs at the same truncation so they share one eigensystem
    let support = state.support_max();
    let mut guard = initial_guard(max_tau, support, opts.min_guard);
    for _ in 0..opts.max_refinements {
        let outs: Vec<TwoModeState> = probes
            .par_iter()
            .map(|&p| squeeze_on_grid(state, p, sign, n_in + guard))
            .collect();
        let failing: Vec<&TwoModeState> = outs
            .iter()
            .filter(|o| edge_mass(o, edge_width(guard)) > opts.tail_tol)
            .collect();
        if failing.is_empty() {
            return Ok(n_in + guard);
        }
        guard = failing
            .iter()
            .map(|o| next_guard(o, n_in, guard, opts.tail_tol))
            .max()
            .unwrap_or(2 * guard);
    }
    Ok(n_in + guard)
}
