use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sgwigner::coherence::{
    coherence_curve, decoherence_time_auto, fit_power_law, diffusion_estimate_time, DecoherencePoint,
    DeltaMethod, DeltaOptions, PowerLawFit,
};
use sgwigner::grid::{
    auto_window_with, export_curves_csv, export_field, export_fit_csv, export_json,
    export_td_table, import_td_table, write_atomic,
};
use sgwigner::marginals::moments;
use sgwigner::params::{viscosity, VacuumConfig};
use sgwigner::pde::{
    diag_validation_scenario, offdiag_validation_scenario, validate_diag, validate_offdiag,
    Limiter, ValidationRun,
};
use sgwigner::{estimate_gamma, sample, ExportFormat, FieldKind, PhaseSpaceGrid, Scenario};

use crate::args::{Cli, Command, ConfigArg};
use crate::{usage, Failure};

type Outcome = std::result::Result<(), Failure>;

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Derive { config, times, gammas } => derive(&load(&config)?, &times, &gammas),
        Command::Evolve {
            config,
            times,
            kind,
            out,
            format,
            n_sigmas,
            window,
            nz,
            np,
        } => {
            let scn = load(&config)?;
            if !(n_sigmas >= 3.0) {
                return Err(Failure::Usage(format!("--n-sigmas must be >= 3, got {n_sigmas}")));
            }
            evolve(&scn, &times, kind, &out, format, n_sigmas, window.as_deref(), nz, np)
        }
        Command::Marginals {
            config,
            t_max,
            out,
            points,
            gammas,
        } => {
            if points < 2 {
                return Err(Failure::Usage("--points must be >= 2".into()));
            }
            marginals(&load(&config)?, t_max, &out, points, &gammas)
        }
        Command::Coherence {
            config,
            gammas,
            out,
            method,
            t_max,
        } => coherence(&load(&config)?, &gammas, &out, method, t_max),
        Command::Fit { input, out } => fit(&input, out.as_deref()),
        Command::OracleCompare {
            nondim,
            out,
            n,
            limiter,
            t_end,
        } => {
            if !nondim {
                return Err(Failure::Usage(
                    "oracle-compare only runs nondimensional cases; pass --nondim".into(),
                ));
            }
            if n < 16 || n % 2 != 0 {
                return Err(Failure::Usage(format!("--n must be even and >= 16, got {n}")));
            }
            if !(t_end > 0.0 && t_end.is_finite()) {
                return Err(Failure::Usage(format!("--t-end must be > 0, got {t_end}")));
            }
            oracle_compare(&out, n, limiter, t_end)
        }
        Command::EstimateGamma { vacuum } => estimate(vacuum.as_deref()),
    }
}

fn load(config: &ConfigArg) -> std::result::Result<Scenario, Failure> {
    match &config.config {
        Some(path) => Scenario::from_json_file(path).map_err(usage),
        None => Ok(Scenario::silver_sg()),
    }
}

fn out_dir(dir: &Path) -> Outcome {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))
}

fn derive(scn: &Scenario, times: &[f64], gammas: &[f64]) -> Outcome {
    let d = scn.derived();
    println!("lambda = {:.10e} J/T", d.lambda);
    println!("D = {:.10e} kg^2 m^2/s^3", d.diffusion);
    println!("gamma = {:.10e} 1/s", scn.gamma());
    if scn.gamma() > 0.0 {
        println!("D/gamma = {:.10e}", d.diffusion / scn.gamma());
    }
    println!("2 D sigma^2/(gamma hbar^2) = {:.4e}", scn.width_ratio());
    println!();
    println!("t_s,tau");
    for &t in times {
        println!("{t:.10e},{:.10e}", scn.tau(t));
    }
    if !gammas.is_empty() {
        println!();
        println!("gamma,D,D_over_gamma");
        for &g in gammas {
            let s = scn.with_gamma(g).map_err(usage)?;
            let dd = s.diffusion();
            println!("{g:.10e},{dd:.10e},{:.10e}", dd / g);
        }
    }
    Ok(())
}

fn file_stem(kind: FieldKind) -> String {
    match kind {
        FieldKind::DiagPlus => "diag-plus".into(),
        FieldKind::DiagMinus => "diag-minus".into(),
        k => k.name().into(),
    }
}

#[allow(clippy::too_many_arguments)]
fn evolve(
    scn: &Scenario,
    times: &[f64],
    kind: FieldKind,
    out: &Path,
    format: ExportFormat,
    n_sigmas: f64,
    window: Option<&[f64]>,
    nz: usize,
    np: usize,
) -> Outcome {
    out_dir(out)?;
    for (k, &t) in times.iter().enumerate() {
        let grid = match window {
            Some(w) => PhaseSpaceGrid::symmetric(w[0], w[1], nz, np).map_err(usage)?,
            None => auto_window_with(t, scn, n_sigmas, nz, np).map_err(usage)?,
        };
        let field = sample(kind, t, &grid, scn)?;
        let path = out.join(format!("{}_{k:03}.{}", file_stem(kind), format.extension()));
        export_field(&field, &path, format)?;
        println!(
            "t = {t:.6e} s -> {} ({}x{}, z in [{:.4e}, {:.4e}] m, integral {:.6})",
            path.display(),
            nz,
            np,
            grid.z_min(),
            grid.z_max(),
            field.integral()
        );
    }
    Ok(())
}

fn marginals(scn: &Scenario, t_max: f64, out: &Path, points: usize, gammas: &[f64]) -> Outcome {
    out_dir(out)?;
    let rates = if gammas.is_empty() { vec![scn.gamma()] } else { gammas.to_vec() };
    let mut text = String::from("gamma,t,z_c,p_c,sigma_z,sigma_p\n");
    for g in rates {
        let s = scn.with_gamma(g).map_err(usage)?;
        for k in 0..points {
            let t = t_max * k as f64 / (points - 1) as f64;
            let m = moments(t, &s);
            let _ = writeln!(
                text,
                "{g:.16e},{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                m.z_c, m.p_c, m.sigma_z, m.sigma_p
            );
        }
        let m = moments(t_max, &s);
        println!(
            "gamma = {g:.3e}: at t = {t_max:.3e} s z_c = {:.4e} m, p_c = {:.4e}, sigma_z = {:.4e} m, sigma_p = {:.4e}",
            m.z_c, m.p_c, m.sigma_z, m.sigma_p
        );
    }
    let path = out.join("marginals.csv");
    write_atomic(&path, text.as_bytes())?;
    println!("wrote {}", path.display());
    Ok(())
}

fn spans_four_decades(gammas: &[f64]) -> bool {
    let lo = gammas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = gammas.iter().cloned().fold(0.0, f64::max);
    gammas.len() >= 4 && (hi / lo).log10() >= 4.0 - 1e-9
}

fn coherence(scn: &Scenario, gammas: &[f64], out: &Path, method: DeltaMethod, t_max: f64) -> Outcome {
    out_dir(out)?;
    let scenarios = gammas
        .iter()
        .map(|&g| scn.with_gamma(g).map_err(usage))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let opts = DeltaOptions {
        method,
        ..DeltaOptions::default()
    };
    let curves = scenarios
        .par_iter()
        .map(|s| coherence_curve(s, t_max, opts))
        .collect::<sgwigner::Result<Vec<_>>>()?;
    let points = scenarios
        .par_iter()
        .map(|s| {
            Ok(DecoherencePoint {
                gamma: s.gamma(),
                t_d: decoherence_time_auto(s)?,
                t_estimate: diffusion_estimate_time(s),
            })
        })
        .collect::<sgwigner::Result<Vec<_>>>()?;
    export_curves_csv(&curves, &out.join("delta_curves.csv"))?;
    export_td_table(&points, &out.join("td_table.csv"))?;
    println!("gamma,t_d,t_estimate");
    for p in &points {
        println!("{:.6e},{:.10e},{:.6e}", p.gamma, p.t_d, p.t_estimate);
    }
    if spans_four_decades(gammas) {
        let data: Vec<(f64, f64)> = points.iter().map(|p| (p.gamma, p.t_d)).collect();
        let f = fit_power_law(&data)?;
        export_fit_csv(&f, &out.join("fit.csv"))?;
        print_fit(&f);
    } else {
        println!("(fit skipped: needs >= 4 rates spanning four decades)");
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn print_fit(f: &PowerLawFit) {
    println!("a = {:.6e} +- {:.2e} s", f.a, f.stderr_a);
    println!("b = {:.6} +- {:.6}", f.b, f.stderr_b);
    println!("rms residual of ln t_d = {:.3e} over {} points", f.residual, f.n);
    if f.flagged() {
        println!("warning: residual above {} , not a clean power law", sgwigner::coherence::RESIDUAL_FLAG);
    }
}

fn fit(input: &Path, out: Option<&Path>) -> Outcome {
    let data = import_td_table(input).map_err(usage)?;
    let f = fit_power_law(&data)?;
    print_fit(&f);
    if let Some(path) = out {
        export_json(&f, path)?;
    }
    Ok(())
}

fn oracle_compare(out: &Path, n: usize, limiter: Limiter, t_end: f64) -> Outcome {
    out_dir(out)?;
    let diag = diag_validation_scenario();
    let off = offdiag_validation_scenario();
    let mut runs: Vec<ValidationRun> = Vec::new();
    for size in [n / 2, n] {
        runs.push(validate_diag(&diag, t_end, size, limiter)?.0);
        runs.push(validate_offdiag(&off, t_end, size, limiter)?.0);
    }
    let mut text = String::from("case,n,limiter,t_end,steps,dt,l2_error,mass_drift\n");
    for r in &runs {
        let _ = writeln!(
            text,
            "{},{},{},{:.16e},{},{:.16e},{:.16e},{:.16e}",
            r.case,
            r.n,
            r.limiter.name(),
            r.t_end,
            r.report.steps,
            r.report.dt,
            r.l2_error,
            r.report.mass_drift()
        );
        println!(
            "{:<8} n = {:>4}: relative L2 = {:.3e} ({} steps, {:.1} s)",
            r.case, r.n, r.l2_error, r.report.steps, r.seconds
        );
    }
    for case in ["diag", "offdiag"] {
        let err = |size: usize| runs.iter().find(|r| r.case == case && r.n == size).map(|r| r.l2_error);
        if let (Some(c), Some(f)) = (err(n / 2), err(n)) {
            println!("{case:<8} error ratio {}->{}: {:.2}", n / 2, n, c / f);
        }
    }
    // wall-clock times only go to the JSON report so the CSV is reproducible
    let summary: PathBuf = out.join("oracle_summary.csv");
    write_atomic(&summary, text.as_bytes())?;
    export_json(&runs, &out.join("oracle_runs.json"))?;
    println!("wrote {}", summary.display());
    Ok(())
}

fn estimate(vacuum: Option<&Path>) -> Outcome {
    let cfg = match vacuum {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
            VacuumConfig::from_json_str(&text).map_err(usage)?
        }
        None => VacuumConfig::default(),
    };
    let (vac, mass) = cfg.resolve().map_err(usage)?;
    println!("mu = {:.6e} kg/s", viscosity(&vac));
    println!("gamma = {:.6e} 1/s", estimate_gamma(&vac, mass));
    Ok(())
}
