use std::fmt::Write as _;
use std::path::Path;

use su11_core::detector::{sample_shots, Histogram};
use su11_core::oracles::{
    biphoton_wigner_closed, biphoton_wigner_operational, brute_force_wigner,
    displaced_tmsv_distribution, factor_two_wigner, vacuum_wigner_closed,
    vacuum_wigner_operational, Prefactor,
};
use su11_core::reconstruction::reconstruct_irrep;
use su11_core::wigner::{displaced_distribution, wigner_grid, wigner_point, Protocol};
use su11_core::{JointPhotonDistribution, Num, SqueezeParam};

use crate::config::{Evaluator, RunConfig, StateSpec};
use crate::Failure;

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn escalate(cfg: &RunConfig, warnings: usize) -> Result<(), Failure> {
    if warnings > 0 {
        eprintln!("warning: {warnings} point(s) lost more than tail-tol to the truncation edge");
        if cfg.strict {
            return Err(Failure {
                code: 3,
                message: "truncation warnings escalated by --strict".into(),
            });
        }
    }
    Ok(())
}

pub fn prepare(cfg: &RunConfig) -> Result<(), Failure> {
    let state = cfg.build_state()?;
    let path = cfg.out.join("state.json");
    state.write(&path)?;
    let norm_sq = state.norm_sq();
    println!("wrote {}", path.display());
    println!("norm = {}", norm_sq.sqrt());
    println!("tail mass = {}", (1.0 - norm_sq).max(0.0));
    Ok(())
}

pub fn wigner(cfg: &RunConfig) -> Result<(), Failure> {
    let state = cfg.build_state()?;
    let grid = cfg.grid()?;
    let field = wigner_grid(&state, &grid, &cfg.protocol()?)?;
    let path = cfg.out.join("wigner.csv");
    write(&path, &field.to_csv())?;
    println!(
        "wrote {} ({} points, W in [{}, {}])",
        path.display(),
        grid.len(),
        field.min(),
        field.max()
    );
    escalate(cfg, field.warnings())
}

fn diagonal_csv(dist: &JointPhotonDistribution) -> String {
    let mut s = String::from("n,p\n");
    for (n, p) in dist.pair_diagonal().iter().enumerate() {
        let _ = writeln!(s, "{n},{}", Num(*p));
    }
    s
}

fn histogram_diagonal_csv(h: &Histogram) -> String {
    let mut s = String::from("n,count\n");
    for n in 0..=h.n_max() {
        let _ = writeln!(s, "{n},{}", h.count(n, n));
    }
    s
}

pub fn histogram(cfg: &RunConfig) -> Result<(), Failure> {
    let state = cfg.build_state()?;
    let (ideal, _, warn) = displaced_distribution(&state, cfg.point()?, &cfg.squeeze_options()?)?;
    let measured = cfg.detector()?.apply(&ideal)?;
    let hist_path = cfg.out.join("histogram.csv");
    let diag_path = cfg.out.join("diagonal.csv");
    match cfg.shot_config()? {
        Some(shots) => {
            let h = sample_shots(&measured, &shots)?;
            write(&hist_path, &h.to_csv())?;
            write(&diag_path, &histogram_diagonal_csv(&h))?;
            println!("{} shots, {} discarded", h.shots(), h.discarded());
        }
        None => {
            write(&hist_path, &measured.to_csv())?;
            write(&diag_path, &diagonal_csv(&measured))?;
            println!("discarded mass = {}", measured.discarded_mass());
        }
    }
    println!("wrote {} and {}", hist_path.display(), diag_path.display());
    escalate(cfg, usize::from(warn))
}

/// Stream index for a quadrature node, fixed by its coordinates.
fn node_stream(p: SqueezeParam) -> u64 {
    p.tau().to_bits() ^ p.chi().to_bits().rotate_left(29)
}

pub fn reconstruct(cfg: &RunConfig) -> Result<(), Failure> {
    let state = cfg.build_state()?;
    let k = cfg.bargmann_k()?;
    let grid = cfg.quadrature()?;
    let opts = cfg.reconstruct_options();
    let block = match cfg.evaluator {
        Evaluator::Exact => reconstruct_irrep(
            |p| Ok(factor_two_wigner(&state, p).re),
            k,
            cfg.levels,
            &grid,
            &opts,
        )?,
        Evaluator::Sampled => {
            let protocol = Protocol {
                noise: None,
                ..cfg.protocol()?
            };
            reconstruct_irrep(
                |p| Ok(wigner_point(&state, p, &protocol, node_stream(p))?.w),
                k,
                cfg.levels,
                &grid,
                &opts,
            )?
        }
    };
    let path = cfg.out.join("irrep_block.csv");
    write(&path, &block.to_csv())?;
    let d = block.diagnostics();
    println!("wrote {}", path.display());
    println!(
        "trace = {}, hermiticity residual = {:e}, gram condition = {:e}, evaluations = {}",
        d.trace, d.hermiticity_residual, d.gram_condition, d.evaluations
    );
    Ok(())
}

fn oracle_value(cfg: &RunConfig, spec: &StateSpec, p: SqueezeParam) -> Result<f64, Failure> {
    let verbatim = cfg.oracle_variant == Prefactor::Verbatim;
    Ok(match spec {
        StateSpec::Vacuum if verbatim => vacuum_wigner_closed(p, None),
        StateSpec::Vacuum => vacuum_wigner_operational(p, None),
        StateSpec::Biphoton if verbatim => biphoton_wigner_closed(p, None),
        StateSpec::Biphoton => biphoton_wigner_operational(p, None),
        StateSpec::Tmsv { tau0, chi0 } => {
            // the lab displaces by S(−ζ), so the composed state is S(−ζ)S(ζ₀)|0,0⟩
            let p0 = SqueezeParam::new(*tau0, *chi0)?;
            let minus = p.negated();
            let ratio = {
                let (a, b) = (p0.to_disk().xi(), minus.to_disk().xi());
                ((a + b) / (1.0 + b * a.conj())).norm_sqr()
            };
            let n = if ratio > 0.0 {
                ((1e-18f64.ln() / ratio.ln()).ceil() as usize).max(1)
            } else {
                1
            };
            displaced_tmsv_distribution(p0, minus, n, cfg.oracle_variant)?
                .iter()
                .enumerate()
                .map(|(n, q)| if n % 2 == 0 { *q } else { -q })
                .sum()
        }
        StateSpec::Fock { .. } | StateSpec::File(_) => brute_force_wigner(&cfg.build_state()?, p)?,
    })
}

pub fn compare_oracle(cfg: &RunConfig) -> Result<(), Failure> {
    let spec = cfg.state_spec()?;
    let state = cfg.build_state()?;
    let grid = cfg.grid()?;
    let protocol = Protocol {
        squeeze: cfg.squeeze_options()?,
        ..Default::default()
    };
    let field = wigner_grid(&state, &grid, &protocol)?;
    let mut csv = String::from("tau,chi,pipeline,oracle,abs_diff\n");
    let mut worst: f64 = 0.0;
    for (p, w) in grid.params().iter().zip(field.values()) {
        let o = oracle_value(cfg, &spec, *p)?;
        let d = (w - o).abs();
        worst = worst.max(d);
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            Num(p.tau()),
            Num(p.chi()),
            Num(*w),
            Num(o),
            Num(d)
        );
    }
    let path = cfg.out.join("compare.csv");
    write(&path, &csv)?;
    println!("wrote {}", path.display());
    println!(
        "max |pipeline - oracle| = {worst:e} (tolerance {:e})",
        cfg.tolerance
    );
    if !(worst <= cfg.tolerance) {
        return Err(Failure {
            code: 2,
            message: format!("tolerance breached: {worst:e} > {:e}", cfg.tolerance),
        });
    }
    escalate(cfg, field.warnings())
}
