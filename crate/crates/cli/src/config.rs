//! Run configuration: built-in defaults, then the config file, then flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use su11_core::detector::{DetectorConfig, NoiseConfig, SaturationPolicy, ShotConfig};
use su11_core::oracles::{tmsv_n_max, tmsv_state, Prefactor};
use su11_core::reconstruction::{ArgumentScaling, Kernel, QuadratureGrid, ReconstructOptions};
use su11_core::wigner::{CoordinateTag, GridSpec, Protocol};
use su11_core::{HalfInt, SqueezeOptions, SqueezeParam, TwoModeState};

use crate::Failure;

/// Probability left beyond the cut of a squeezed-vacuum preset. Missing
/// amplitude enters W linearly, so this is the square of the accuracy wanted.
const PRESET_TAIL: f64 = 1e-22;

/// Every knob of a run. The effective value of this struct is echoed next to
/// the outputs, and feeding the echo back in reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `vacuum`, `biphoton`, `tmsv(τ₀,χ₀)`, `fock(n_a,n_b)` or a state file.
    pub state: String,
    /// Truncation for presets; chosen from the squeezed-vacuum tail if absent.
    pub n_max: Option<usize>,
    /// `start:stop:count` in τ.
    pub grid_tau: String,
    pub grid_chi: usize,
    pub coords: CoordinateTag,
    /// Displacement used by `histogram`.
    pub tau: f64,
    pub chi: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub n_resolve: Option<usize>,
    pub policy: SaturationPolicy,
    pub snr: Option<f64>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub tail_tol: f64,
    /// Largest tolerated `|pipeline − oracle|` in `compare-oracle`.
    pub tolerance: f64,
    pub oracle_variant: Prefactor,
    /// Bargmann index for `reconstruct`, e.g. `1` or `3/2`.
    pub k: String,
    pub levels: usize,
    pub tau_max: f64,
    pub tau_nodes: usize,
    pub chi_nodes: usize,
    pub kernel: Kernel,
    pub scaling: ArgumentScaling,
    pub evaluator: Evaluator,
    /// Treat truncation warnings as failures (exit code 3).
    pub strict: bool,
    pub out: PathBuf,
}

/// Where `reconstruct` gets its field values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluator {
    /// `⟨ψ|S(2ζ)Π|ψ⟩` from closed-form matrix elements; exact at any τ.
    #[default]
    Exact,
    /// The simulated protocol, detector model and shots included.
    Sampled,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            state: "vacuum".into(),
            n_max: None,
            grid_tau: "0:2:21".into(),
            grid_chi: 16,
            coords: CoordinateTag::Hyperboloid,
            tau: 0.0,
            chi: 0.0,
            eta_a: 1.0,
            eta_b: 1.0,
            n_resolve: None,
            policy: SaturationPolicy::Discard,
            snr: None,
            shots: None,
            seed: 0,
            tail_tol: SqueezeOptions::default().tail_tol,
            tolerance: 1e-8,
            oracle_variant: Prefactor::Normalized,
            k: "1".into(),
            levels: 3,
            tau_max: 20.0,
            tau_nodes: 64,
            chi_nodes: 32,
            kernel: Kernel::GramCorrected,
            scaling: ArgumentScaling::Half,
            evaluator: Evaluator::Exact,
            strict: false,
            out: PathBuf::from("su11-out"),
        }
    }
}

/// A named preset or a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum,
    Biphoton,
    Tmsv { tau0: f64, chi0: f64 },
    Fock { n_a: usize, n_b: usize },
    File(PathBuf),
}

fn call_args<'a>(s: &'a str, name: &str) -> Option<Vec<&'a str>> {
    let inner = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.split(',').map(str::trim).collect())
}

impl StateSpec {
    pub fn parse(s: &str) -> Result<Self, Failure> {
        let s = s.trim();
        let bad = |what: &str| Failure::usage(format!("bad state '{s}': {what}"));
        match s {
            "vacuum" => return Ok(Self::Vacuum),
            "biphoton" => return Ok(Self::Biphoton),
            _ => {}
        }
        if let Some(args) = call_args(s, "tmsv") {
            let [t, c] = args[..] else {
                return Err(bad("expected tmsv(tau0,chi0)"));
            };
            let tau0 = t.parse().map_err(|_| bad("tau0 is not a number"))?;
            let chi0 = c.parse().map_err(|_| bad("chi0 is not a number"))?;
            return Ok(Self::Tmsv { tau0, chi0 });
        }
        if let Some(args) = call_args(s, "fock") {
            let [a, b] = args[..] else {
                return Err(bad("expected fock(na,nb)"));
            };
            let n_a = a.parse().map_err(|_| bad("na is not a count"))?;
            let n_b = b.parse().map_err(|_| bad("nb is not a count"))?;
            return Ok(Self::Fock { n_a, n_b });
        }
        let path = Path::new(s);
        if path.is_file() {
            return Ok(Self::File(path.to_path_buf()));
        }
        Err(bad(
            "not a preset (vacuum, biphoton, tmsv(t,c), fock(a,b)) or an existing file",
        ))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }

    pub fn state_spec(&self) -> Result<StateSpec, Failure> {
        StateSpec::parse(&self.state)
    }

    pub fn build_state(&self) -> Result<TwoModeState, Failure> {
        let st = match self.state_spec()? {
            StateSpec::Vacuum => TwoModeState::vacuum(),
            StateSpec::Biphoton => TwoModeState::fock(1, 1, self.n_max.unwrap_or(1).max(1))?,
            StateSpec::Fock { n_a, n_b } => TwoModeState::fock(
                n_a,
                n_b,
                self.n_max.unwrap_or(n_a.max(n_b)).max(n_a.max(n_b)),
            )?,
            StateSpec::Tmsv { tau0, chi0 } => {
                let n = self.n_max.unwrap_or_else(|| tmsv_n_max(tau0, PRESET_TAIL));
                tmsv_state(tau0, chi0, n)?
            }
            StateSpec::File(path) => TwoModeState::read(path)?,
        };
        Ok(st)
    }

    pub fn grid(&self) -> Result<GridSpec, Failure> {
        let parts: Vec<&str> = self.grid_tau.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(Failure::usage(format!(
                "grid-tau '{}' must look like start:stop:count",
                self.grid_tau
            )));
        };
        let bad = || {
            Failure::usage(format!(
                "grid-tau '{}' has a malformed field",
                self.grid_tau
            ))
        };
        let start: f64 = a.parse().map_err(|_| bad())?;
        let stop: f64 = b.parse().map_err(|_| bad())?;
        let count: usize = n.parse().map_err(|_| bad())?;
        let mut grid = match self.coords {
            CoordinateTag::Hyperboloid => GridSpec::uniform(start, stop, count, self.grid_chi)?,
            // radii spaced evenly in |ξ| between the images of start and stop
            CoordinateTag::Disk => {
                let (r0, r1) = ((0.5 * start).tanh(), (0.5 * stop).tanh());
                let taus = (0..count)
                    .map(|i| {
                        let f = if count == 1 {
                            0.0
                        } else {
                            i as f64 / (count - 1) as f64
                        };
                        2.0 * (r0 + f * (r1 - r0)).atanh()
                    })
                    .collect();
                let chis = GridSpec::uniform(0.0, 0.0, 1, self.grid_chi)?
                    .chi_values()
                    .to_vec();
                GridSpec::new(taus, chis, CoordinateTag::Disk)?
            }
        };
        if grid.is_empty() {
            grid = GridSpec::uniform(0.0, 0.0, 1, 1)?;
        }
        Ok(grid)
    }

    pub fn point(&self) -> Result<SqueezeParam, Failure> {
        Ok(SqueezeParam::new(self.tau, self.chi)?)
    }

    pub fn detector(&self) -> Result<DetectorConfig, Failure> {
        let d = DetectorConfig {
            eta_a: self.eta_a,
            eta_b: self.eta_b,
            n_resolve: self.n_resolve,
            policy: self.policy,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn shot_config(&self) -> Result<Option<ShotConfig>, Failure> {
        Ok(match self.shots {
            Some(n) => Some(ShotConfig::new(n, self.seed)?),
            None => None,
        })
    }

    pub fn noise_config(&self) -> Result<Option<NoiseConfig>, Failure> {
        // a distinct seed stream from the shots keeps the two sources independent
        Ok(match self.snr {
            Some(snr) => Some(NoiseConfig::new(snr, self.seed ^ 0x9e37_79b9_7f4a_7c15)?),
            None => None,
        })
    }

    pub fn squeeze_options(&self) -> Result<SqueezeOptions, Failure> {
        if !(self.tail_tol > 0.0) {
            return Err(Failure::usage(format!(
                "tail-tol {} must be positive",
                self.tail_tol
            )));
        }
        Ok(SqueezeOptions {
            tail_tol: self.tail_tol,
            ..Default::default()
        })
    }

    pub fn protocol(&self) -> Result<Protocol, Failure> {
        Ok(Protocol {
            detector: self.detector()?,
            shots: self.shot_config()?,
            noise: self.noise_config()?,
            squeeze: self.squeeze_options()?,
        })
    }

    pub fn bargmann_k(&self) -> Result<HalfInt, Failure> {
        let bad = || {
            Failure::usage(format!(
                "k '{}' must be an integer or a half-integer n/2",
                self.k
            ))
        };
        let k = match self.k.split_once('/') {
            Some((num, "2")) => HalfInt::from_doubled(num.trim().parse().map_err(|_| bad())?),
            Some(_) => return Err(bad()),
            None => HalfInt::from_int(self.k.trim().parse().map_err(|_| bad())?),
        };
        Ok(k)
    }

    pub fn quadrature(&self) -> Result<QuadratureGrid, Failure> {
        Ok(QuadratureGrid::new(
            self.tau_max,
            self.tau_nodes,
            self.chi_nodes,
        )?)
    }

    pub fn reconstruct_options(&self) -> ReconstructOptions {
        ReconstructOptions {
            kernel: self.kernel,
            scaling: self.scaling,
        }
    }
}
