//! Photon-number-resolving detector model: efficiency loss, finite
//! resolution, finite shot statistics and additive noise on sampled fields.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::fock::{parity_sign, JointPhotonDistribution, ModeOccupation};
use crate::wigner::WignerField;

/// What a saturating detector does with counts above its resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SaturationPolicy {
    /// Drop the event; its probability is reported as discarded mass.
    #[default]
    Discard,
    /// Record the event at the largest resolvable count.
    Clip,
}

impl std::str::FromStr for SaturationPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "discard" => Ok(Self::Discard),
            "clip" => Ok(Self::Clip),
            other => Err(format!(
                "unknown saturation policy '{other}' (discard | clip)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub eta_a: f64,
    pub eta_b: f64,
    /// Largest resolvable count per mode; `None` resolves everything.
    pub n_resolve: Option<usize>,
    #[serde(default)]
    pub policy: SaturationPolicy,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self::ideal()
    }
}

impl DetectorConfig {
    pub const fn ideal() -> Self {
        Self {
            eta_a: 1.0,
            eta_b: 1.0,
            n_resolve: None,
            policy: SaturationPolicy::Discard,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_eta(self.eta_a)?;
        check_eta(self.eta_b)
    }

    pub fn is_ideal(&self) -> bool {
        self.eta_a == 1.0 && self.eta_b == 1.0 && self.n_resolve.is_none()
    }

    /// Loss followed by the resolution limit.
    pub fn apply(&self, dist: &JointPhotonDistribution) -> Result<JointPhotonDistribution> {
        let lossy = apply_loss(dist, self.eta_a, self.eta_b)?;
        Ok(match self.n_resolve {
            Some(n) => truncate_resolution(&lossy, n, self.policy),
            None => lossy,
        })
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(invalid_param!("efficiency {eta} outside [0, 1]"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Peak `|W|` over the noise standard deviation; infinity disables noise.
    pub snr: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn new(snr: f64, seed: u64) -> Result<Self> {
        if !(snr > 0.0) {
            return Err(invalid_param!("snr = {snr} must be positive"));
        }
        Ok(Self { snr, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotConfig {
    pub shots: u64,
    pub seed: u64,
}

impl ShotConfig {
    pub fn new(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(invalid_param!("shots must be at least 1"));
        }
        Ok(Self { shots, seed })
    }
}

/// Seeded generator for one independent stream of a run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `B[n][m] = C(n, m) ηᵐ (1−η)ⁿ⁻ᵐ` for `0 ≤ m ≤ n ≤ n_max`, row-major.
fn binomial_table(n_max: usize, eta: f64) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![1.0]);
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|m| {
                let keep = if m > 0 { eta * prev[m - 1] } else { 0.0 };
                let lose = if m < n { (1.0 - eta) * prev[m] } else { 0.0 };
                keep + lose
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Each photon reaching mode `a` (`b`) is counted with probability `η_a` (`η_b`).
pub fn apply_loss(
    dist: &JointPhotonDistribution,
    eta_a: f64,
    eta_b: f64,
) -> Result<JointPhotonDistribution> {
    check_eta(eta_a)?;
    check_eta(eta_b)?;
    if eta_a == 1.0 && eta_b == 1.0 {
        return Ok(dist.clone());
    }
    let n = dist.n_max();
    let w = n + 1;
    let ba = binomial_table(n, eta_a);
    let bb = binomial_table(n, eta_b);
    let p = dist.probabilities();

    // mode b first: q[na][mb] = Σ_nb B_b[nb][mb] p[na][nb]
    let mut q = vec![0.0; w * w];
    for na in 0..w {
        for nb in 0..w {
            let v = p[na * w + nb];
            if v == 0.0 {
                continue;
            }
            for (mb, b) in bb[nb].iter().enumerate() {
                q[na * w + mb] += b * v;
            }
        }
    }
    let mut out = vec![0.0; w * w];
    for na in 0..w {
        for (ma, a) in ba[na].iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for mb in 0..w {
                out[ma * w + mb] += a * q[na * w + mb];
            }
        }
    }
    Ok(JointPhotonDistribution::from_parts(
        n,
        out,
        dist.discarded_mass(),
    ))
}

/// Applies a detector that resolves at most `n_resolve` photons per mode.
pub fn truncate_resolution(
    dist: &JointPhotonDistribution,
    n_resolve: usize,
    policy: SaturationPolicy,
) -> JointPhotonDistribution {
    let n = dist.n_max();
    if n_resolve >= n {
        return dist.clone();
    }
    let w = n_resolve + 1;
    let mut out = vec![0.0; w * w];
    let mut discarded = dist.discarded_mass();
    for (o, p) in dist.iter() {
        if o.n_a <= n_resolve && o.n_b <= n_resolve {
            out[o.n_a * w + o.n_b] += p;
        } else {
            match policy {
                SaturationPolicy::Discard => discarded += p,
                SaturationPolicy::Clip => {
                    out[o.n_a.min(n_resolve) * w + o.n_b.min(n_resolve)] += p;
                }
            }
        }
    }
    JointPhotonDistribution::from_parts(n_resolve, out, discarded.min(1.0))
}

/// Event counts of a finite-statistics run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    n_max: usize,
    counts: Vec<u64>,
    /// Events lost to the detector's saturation policy or the grid edge.
    discarded: u64,
    shots: u64,
    seed: u64,
}

impl Histogram {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn count(&self, n_a: usize, n_b: usize) -> u64 {
        if n_a > self.n_max || n_b > self.n_max {
            return 0;
        }
        self.counts[n_a * (self.n_max + 1) + n_b]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeOccupation, u64)> + '_ {
        let w = self.n_max + 1;
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &c)| (ModeOccupation::new(i / w, i % w), c))
    }

    /// Relative frequencies; discarded events become discarded mass.
    pub fn empirical(&self) -> JointPhotonDistribution {
        let s = self.shots as f64;
        JointPhotonDistribution::from_parts(
            self.n_max,
            self.counts.iter().map(|&c| c as f64 / s).collect(),
            self.discarded as f64 / s,
        )
    }

    /// Histogram CSV with columns `na,nb,count_or_prob`; zero rows are skipped.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("na,nb,count_or_prob\n");
        for (o, c) in self.iter().filter(|(_, c)| *c != 0) {
            let _ = writeln!(out, "{},{},{}", o.n_a, o.n_b, c);
        }
        out
    }
}

/// Draws `cfg.shots` detection events from `dist` on stream 0 of `cfg.seed`.
pub fn sample_shots(dist: &JointPhotonDistribution, cfg: &ShotConfig) -> Result<Histogram> {
    sample_shots_stream(dist, cfg, 0)
}

/// As [`sample_shots`], on an explicit RNG stream so parallel callers stay
/// reproducible.
pub fn sample_shots_stream(
    dist: &JointPhotonDistribution,
    cfg: &ShotConfig,
    stream: u64,
) -> Result<Histogram> {
    if cfg.shots == 0 {
        return Err(invalid_param!("shots must be at least 1"));
    }
    let mut rng = stream_rng(cfg.seed, stream);
    let probs = dist.probabilities();
    let mut counts = vec![0u64; probs.len()];

    // multinomial as a chain of conditional binomials
    let mut remaining = cfg.shots;
    let mut mass_left: f64 = dist.total_mass();
    for (c, &p) in counts.iter_mut().zip(probs) {
        if remaining == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let frac = (p / mass_left).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, frac)
            .map_err(|e| invalid_param!("binomial draw: {e}"))?
            .sample(&mut rng);
        *c = draw;
        remaining -= draw;
        mass_left = (mass_left - p).max(0.0);
    }
    // what is left falls into the discarded bin (or is rounding residue)
    Ok(Histogram {
        n_max: dist.n_max(),
        counts,
        discarded: remaining,
        shots: cfg.shots,
        seed: cfg.seed,
    })
}

/// Mean and standard error of the parity `(−1)^{min(n_a, n_b)}` over events.
///
/// Discarded events score zero, so the mean estimates the same partial sum
/// as the ideal parity-weighted histogram.
pub fn parity_from_histogram(hist: &Histogram) -> (f64, f64) {
    let n = hist.shots as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (o, c) in hist.iter() {
        if c == 0 {
            continue;
        }
        sum += parity_sign(o) as f64 * c as f64;
        sum_sq += c as f64;
    }
    let mean = sum / n;
    if hist.shots < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// Adds iid Gaussian noise with `σ = max|W| / snr` to every sampled value.
pub fn add_gaussian_noise(field: &WignerField, cfg: &NoiseConfig) -> Result<WignerField> {
    if !(cfg.snr > 0.0) {
        return Err(invalid_param!("snr = {} must be positive", cfg.snr));
    }
    let peak = field.values().iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let sigma = peak / cfg.snr;
    let mut out = field.clone();
    if sigma == 0.0 || !sigma.is_finite() {
        return Ok(out);
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| invalid_param!("noise: {e}"))?;
    let mut rng = stream_rng(cfg.seed, 0);
    for w in out.values_mut() {
        *w += normal.sample(&mut rng);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(a: usize, b: usize, n: usize) -> JointPhotonDistribution {
        JointPhotonDistribution::point(ModeOccupation::new(a, b), n).unwrap()
    }

    fn tmsv_dist(tau0: f64, n: usize) -> JointPhotonDistribution {
        let t2 = (0.5 * tau0).tanh().powi(2);
        let c2 = (0.5 * tau0).cosh().powi(2);
        let mut p = vec![0.0; (n + 1) * (n + 1)];
        let mut tail = 1.0;
        for k in 0..=n {
            let v = t2.powi(k as i32) / c2;
            p[k * (n + 1) + k] = v;
            tail -= v;
        }
        JointPhotonDistribution::new(n, p, tail.max(0.0)).unwrap()
    }

    #[test]
    fn loss_limits() {
        let d = tmsv_dist(1.0, 20);
        assert_eq!(apply_loss(&d, 1.0, 1.0).unwrap(), d);
        let z = apply_loss(&d, 0.0, 0.0).unwrap();
        assert!((z.get(0, 0) - d.grid_mass()).abs() < 1e-15);
        assert!(apply_loss(&d, 1.2, 1.0).is_err());
        assert!(apply_loss(&d, 0.5, -0.1).is_err());
    }

    #[test]
    fn single_photon_loss() {
        let d = apply_loss(&point(1, 1, 3), 0.8, 1.0).unwrap();
        assert!((d.get(1, 1) - 0.8).abs() < 1e-15);
        assert!((d.get(0, 1) - 0.2).abs() < 1e-15);
        assert!((d.grid_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn loss_acts_mode_by_mode() {
        let d = tmsv_dist(1.4, 25);
        let joint = apply_loss(&d, 0.7, 0.55).unwrap();
        let split = apply_loss(&apply_loss(&d, 0.7, 1.0).unwrap(), 1.0, 0.55).unwrap();
        assert!(joint.total_variation(&split) < 1e-14);
    }

    #[test]
    fn resolution_discard_and_clip() {
        let d = point(12, 12, 15);
        let c = truncate_resolution(&d, 10, SaturationPolicy::Clip);
        assert_eq!(c.get(10, 10), 1.0);
        assert_eq!(c.n_max(), 10);
        let x = truncate_resolution(&d, 10, SaturationPolicy::Discard);
        assert_eq!(x.discarded_mass(), 1.0);
        assert_eq!(truncate_resolution(&d, 20, SaturationPolicy::Discard), d);
    }

    #[test]
    fn tmsv_resolution_tail() {
        let d = tmsv_dist(1.0, 60);
        let x = truncate_resolution(&d, 10, SaturationPolicy::Discard);
        let t2 = 0.5f64.tanh().powi(2);
        let want = t2.powi(11) / (0.5f64.cosh().powi(2) * (1.0 - t2));
        assert!((x.discarded_mass() - want).abs() < 1e-15);
        assert!(want < 1e-7);
        assert!((x.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_mass_shots() {
        let d = point(1, 1, 4);
        let h = sample_shots(&d, &ShotConfig::new(1000, 7).unwrap()).unwrap();
        assert_eq!(h.count(1, 1), 1000);
        assert_eq!(h.empirical(), d);
        assert_eq!(parity_from_histogram(&h), (-1.0, 0.0));
    }

    #[test]
    fn shots_are_reproducible_and_concentrate() {
        let d = tmsv_dist(1.0, 40);
        let cfg = ShotConfig::new(100_000, 42).unwrap();
        let a = sample_shots(&d, &cfg).unwrap();
        assert_eq!(a, sample_shots(&d, &cfg).unwrap());
        assert_ne!(a, sample_shots_stream(&d, &cfg, 1).unwrap());
        assert!(a.empirical().total_variation(&d) < 0.02);
        assert!((a.empirical().total_mass() - 1.0).abs() < 1e-12);

        let exact: f64 = d.iter().map(|(o, p)| parity_sign(o) as f64 * p).sum();
        let (est, se) = parity_from_histogram(&a);
        assert!((est - exact).abs() < 3.0 * se, "{est} vs {exact} ± {se}");
    }

    #[test]
    fn balanced_parity_standard_error() {
        let mut p = vec![0.0; 4];
        p[0] = 0.5;
        p[3] = 0.5;
        let d = JointPhotonDistribution::new(1, p, 0.0).unwrap();
        let h = sample_shots(&d, &ShotConfig::new(10_000, 3).unwrap()).unwrap();
        let (est, se) = parity_from_histogram(&h);
        assert!(est.abs() < 0.05);
        assert!((se * 100.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn policy_parses() {
        assert_eq!(
            "clip".parse::<SaturationPolicy>(),
            Ok(SaturationPolicy::Clip)
        );
        assert!("drop".parse::<SaturationPolicy>().is_err());
    }
}
