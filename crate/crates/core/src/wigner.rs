//! The sampling protocol: displace the state by `S†(ζ)`, record the joint
//! photon-number histogram and weight it by the SU(1,1) parity.
//!
//! `W(ζ) = ⟨ψ|S(ζ) Π S†(ζ)|ψ⟩ = Σ (−1)^{min(n_a,n_b)} |⟨n_a,n_b|S(−ζ)|ψ⟩|²`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{apply_squeeze, plan_truncation, Sign, SqueezeOptions, SqueezeParam};
use crate::detector::{
    add_gaussian_noise, parity_from_histogram, sample_shots_stream, DetectorConfig, NoiseConfig,
    ShotConfig,
};
use crate::error::{invalid_param, Error, Result};
use crate::fock::{parity_sign, JointPhotonDistribution, TwoModeState, NORM_TOLERANCE};
use crate::num::Num;

/// Which picture a grid is meant to be rendered in. Both coordinate sets are
/// always exported; the tag records how the radial nodes were laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordinateTag {
    #[default]
    Hyperboloid,
    Disk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    tau_values: Vec<f64>,
    chi_values: Vec<f64>,
    #[serde(default)]
    coords: CoordinateTag,
}

impl GridSpec {
    pub fn new(tau_values: Vec<f64>, chi_values: Vec<f64>, coords: CoordinateTag) -> Result<Self> {
        if tau_values.is_empty() || chi_values.is_empty() {
            return Err(invalid_param!(
                "grid must have at least one τ and one χ value"
            ));
        }
        if tau_values.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(invalid_param!("τ values must be finite and nonnegative"));
        }
        if tau_values.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid_param!("τ values must be ascending"));
        }
        if chi_values.iter().any(|c| !(0.0..TAU).contains(c)) {
            return Err(invalid_param!("χ values must lie in [0, 2π)"));
        }
        Ok(Self {
            tau_values,
            chi_values,
            coords,
        })
    }

    /// `tau_count` evenly spaced τ in `[tau_start, tau_stop]` and `chi_count`
    /// evenly spaced azimuths starting at 0.
    pub fn uniform(
        tau_start: f64,
        tau_stop: f64,
        tau_count: usize,
        chi_count: usize,
    ) -> Result<Self> {
        Self::new(
            linspace(tau_start, tau_stop, tau_count)?,
            azimuths(chi_count)?,
            CoordinateTag::Hyperboloid,
        )
    }

    /// Radii evenly spaced in `|ξ| ∈ [0, xi_max]`, for disk renderings.
    pub fn disk(xi_max: f64, radial_count: usize, chi_count: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&xi_max) {
            return Err(invalid_param!("disk radius {xi_max} must lie in [0, 1)"));
        }
        let taus = linspace(0.0, xi_max, radial_count)?
            .into_iter()
            .map(|r| 2.0 * r.atanh())
            .collect();
        Self::new(taus, azimuths(chi_count)?, CoordinateTag::Disk)
    }

    pub fn tau_values(&self) -> &[f64] {
        &self.tau_values
    }

    pub fn chi_values(&self) -> &[f64] {
        &self.chi_values
    }

    pub fn coords(&self) -> CoordinateTag {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.tau_values.len() * self.chi_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order: τ outer, χ inner.
    pub fn params(&self) -> Vec<SqueezeParam> {
        self.tau_values
            .iter()
            .flat_map(|&t| {
                self.chi_values
                    .iter()
                    .map(move |&c| SqueezeParam::new(t, c).expect("validated grid"))
            })
            .collect()
    }
}

fn linspace(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(invalid_param!("a grid axis needs at least one node"));
    }
    if !(start >= 0.0) || !(stop >= start) || !stop.is_finite() {
        return Err(invalid_param!("bad τ range {start}:{stop}"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                stop
            } else {
                start + step * i as f64
            }
        })
        .collect())
}

fn azimuths(count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(invalid_param!("a grid axis needs at least one node"));
    }
    Ok((0..count).map(|j| TAU * j as f64 / count as f64).collect())
}

/// Sampled values on a grid, with the probability mass each point lost to
/// truncation or detector saturation.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    grid: GridSpec,
    values: Vec<f64>,
    tail: Vec<f64>,
    stderr: Option<Vec<f64>>,
    warnings: usize,
}

impl WignerField {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    /// Per-point standard error when the field came from finite shots.
    pub fn stderr(&self) -> Option<&[f64]> {
        self.stderr.as_deref()
    }

    /// Points whose truncation leakage exceeded the tolerance.
    pub fn warnings(&self) -> usize {
        self.warnings
    }

    pub fn get(&self, tau_index: usize, chi_index: usize) -> f64 {
        self.values[tau_index * self.grid.chi_values.len() + chi_index]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with columns `tau,chi,n0,n1,n2,re_xi,im_xi,w,tail`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,chi,n0,n1,n2,re_xi,im_xi,w,tail\n");
        for ((p, w), t) in self.grid.params().iter().zip(&self.values).zip(&self.tail) {
            let n = p.to_hyperboloid();
            let xi = p.to_disk().xi();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                Num(p.tau()),
                Num(p.chi()),
                Num(n.n0),
                Num(n.n1),
                Num(n.n2),
                Num(xi.re),
                Num(xi.im),
                Num(*w),
                Num(*t)
            );
        }
        s
    }
}

/// How each point is measured.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Protocol {
    pub detector: DetectorConfig,
    /// Finite statistics; `None` uses the exact histogram.
    pub shots: Option<ShotConfig>,
    /// Additive noise on the sampled field (grids only).
    pub noise: Option<NoiseConfig>,
    pub squeeze: SqueezeOptions,
}

/// One simulated measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSample {
    pub w: f64,
    /// Probability lost to truncation plus any the detector discarded.
    pub tail: f64,
    pub stderr: Option<f64>,
    pub tail_warning: bool,
}

/// `Σ (−1)^{min(n_a,n_b)} P(n_a, n_b)`, the parity-weighted histogram.
pub fn wigner_origin(dist: &JointPhotonDistribution) -> f64 {
    dist.iter()
        .filter(|(_, p)| *p != 0.0)
        .map(|(o, p)| parity_sign(o) as f64 * p)
        .sum()
}

fn require_normalized(state: &TwoModeState) -> Result<()> {
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq });
    }
    Ok(())
}

/// Measured distribution of a state whose norm may have leaked through the
/// truncation edge; the missing mass is reported as discarded.
pub(crate) fn leaky_distribution(state: &TwoModeState) -> JointPhotonDistribution {
    let w = state.n_max() + 1;
    let mut probs = vec![0.0; w * w];
    for (o, a) in state.iter() {
        probs[o.n_a * w + o.n_b] = a.norm_sqr();
    }
    let lost = (1.0 - probs.iter().sum::<f64>()).clamp(0.0, 1.0);
    JointPhotonDistribution::from_parts(state.n_max(), probs, lost)
}

/// Photon statistics of `S†(ζ)|ψ⟩` as an ideal detector sees them.
pub fn displaced_distribution(
    state: &TwoModeState,
    p: SqueezeParam,
    opts: &SqueezeOptions,
) -> Result<(JointPhotonDistribution, f64, bool)> {
    require_normalized(state)?;
    let s = apply_squeeze(state, p, Sign::Minus, opts)?;
    Ok((leaky_distribution(&s.state), s.leakage, s.tail_warning))
}

/// `W(ζ)` with an ideal detector and automatic truncation.
pub fn wigner_at(state: &TwoModeState, p: SqueezeParam) -> Result<f64> {
    Ok(wigner_point(state, p, &Protocol::default(), 0)?.w)
}

/// One point of the protocol; `stream` selects the RNG stream for shots.
pub fn wigner_point(
    state: &TwoModeState,
    p: SqueezeParam,
    protocol: &Protocol,
    stream: u64,
) -> Result<PointSample> {
    protocol.detector.validate()?;
    if protocol.detector.is_ideal() && protocol.shots.is_none() {
        // parity sum straight from the amplitudes, skipping the dense histogram
        require_normalized(state)?;
        let s = apply_squeeze(state, p, Sign::Minus, &protocol.squeeze)?;
        let (mut w, mut kept) = (0.0, 0.0);
        for (o, a) in s.state.iter() {
            let q = a.norm_sqr();
            w += parity_sign(o) as f64 * q;
            kept += q;
        }
        return Ok(PointSample {
            w,
            tail: s.leakage.max((1.0 - kept).clamp(0.0, 1.0)),
            stderr: None,
            tail_warning: s.tail_warning,
        });
    }
    let (dist, leakage, tail_warning) = displaced_distribution(state, p, &protocol.squeeze)?;
    let measured = protocol.detector.apply(&dist)?;
    let tail = leakage.max(measured.discarded_mass());
    let (w, stderr) = match &protocol.shots {
        Some(cfg) => {
            let h = sample_shots_stream(&measured, cfg, stream)?;
            let (w, se) = parity_from_histogram(&h);
            (w, Some(se))
        }
        None => (wigner_origin(&measured), None),
    };
    Ok(PointSample {
        w,
        tail,
        stderr,
        tail_warning,
    })
}

/// Samples every grid point as an independent experiment.
///
/// Points run in parallel; the result does not depend on the schedule, and
/// point `i` (row-major) draws its shots from RNG stream `i`.
pub fn wigner_grid(
    state: &TwoModeState,
    grid: &GridSpec,
    protocol: &Protocol,
) -> Result<WignerField> {
    require_normalized(state)?;
    let params = grid.params();
    let mut squeeze = protocol.squeeze;
    if squeeze.fixed_n_out.is_none() {
        // one truncation for the whole grid lets every point share eigensystems
        squeeze.fixed_n_out = Some(plan_truncation(state, &params, Sign::Minus, &squeeze)?);
    }
    let point_protocol = Protocol {
        squeeze,
        ..*protocol
    };
    let samples: Vec<PointSample> = params
        .par_iter()
        .enumerate()
        .map(|(i, &p)| wigner_point(state, p, &point_protocol, i as u64))
        .collect::<Result<_>>()?;

    let field = WignerField {
        grid: grid.clone(),
        values: samples.iter().map(|s| s.w).collect(),
        tail: samples.iter().map(|s| s.tail).collect(),
        stderr: protocol
            .shots
            .map(|_| samples.iter().map(|s| s.stderr.unwrap_or(0.0)).collect()),
        warnings: samples.iter().filter(|s| s.tail_warning).count(),
    };
    match &protocol.noise {
        Some(cfg) => add_gaussian_noise(&field, cfg),
        None => Ok(field),
    }
}

/// Parity sum restricted to `n_a, n_b ≤ n_resolve`, without renormalizing.
pub fn resolution_truncated_wigner(
    state: &TwoModeState,
    p: SqueezeParam,
    n_resolve: usize,
) -> Result<f64> {
    let (dist, _, _) = displaced_distribution(state, p, &SqueezeOptions::default())?;
    Ok(dist
        .iter()
        .filter(|(o, _)| o.n_a <= n_resolve && o.n_b <= n_resolve)
        .map(|(o, q)| parity_sign(o) as f64 * q)
        .sum())
}
