use std::fs;
use std::path::{Path, PathBuf};

use threeagent_core::experiments::{
    multiplier_table, run_spec, ShockKind, ShockSpec, SpendingUnits,
};
use threeagent_core::io::{fmt_num, irf_csv, multiplier_json, scan_csv, scan_json};
use threeagent_core::regions::{region_summary, scan, Axis, GridSpec};
use threeagent_core::transition::apply_explicit_entries;
use threeagent_core::{
    complete_transition_matrix, parse_config, Calibration, Economy, FiscalMode,
    Var, Variant,
};

use crate::manifest::{io_err, OutputSet, RunManifest};
use crate::{verify, Cli, CliError, Command, Common, FiscalArg, UnitsArg};

const DEFAULT_OUT: &str = "output";

/// Parameters and variant after applying the config file and flags.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub cal: Calibration,
    pub variant: Variant,
}

pub fn resolve(common: &Common) -> Result<Resolved, CliError> {
    let mut cal = Calibration::default();
    let mut variant = Variant::THREE;
    let mut entries = Vec::new();
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let cfg = parse_config(&text)?;
        cal = cfg.calibration;
        variant = cfg.variant();
        entries = cfg.transition_entries;
    }
    if let Some(name) = &common.variant {
        variant = Variant::from_economy(name)?.with_fiscal(variant.fiscal);
    }
    if let Some(f) = common.fiscal_mode {
        variant.fiscal = match f {
            FiscalArg::Nominal => FiscalMode::Nominal,
            FiscalArg::Real => FiscalMode::Real,
        };
    }
    if let Some(v) = common.phi_pi {
        cal.set("phi_pi", v)?;
    }
    if let Some(v) = common.gamma_t {
        cal.set("gamma_T", v)?;
    }
    variant.validate()?;
    let effective = cal.for_variant(&variant);
    effective.validate(&variant)?;
    let tm = complete_transition_matrix(&effective, &variant)?;
    if !entries.is_empty() {
        apply_explicit_entries(&tm, &entries)?;
    }
    Ok(Resolved { cal, variant })
}

fn fiscal_name(v: &Variant) -> &'static str {
    match v.fiscal {
        FiscalMode::Nominal => "nominal",
        FiscalMode::Real => "real",
    }
}

fn manifest_for(command: &str, args: &[String], r: &Resolved) -> Result<RunManifest, CliError> {
    let cal = serde_json::to_value(r.cal).map_err(|e| CliError::Io(e.to_string()))?;
    let variant = serde_json::to_value(r.variant).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(RunManifest::new(command, args, variant, cal))
}

/// Entry point shared by `main` and manifest replay. `args` excludes the
/// program name.
pub fn run(cli: &Cli, args: &[String]) -> Result<(), CliError> {
    if let Command::Verify { manifest } = &cli.command {
        return match manifest {
            Some(path) => verify::replay(path),
            None => verify::battery(&resolve(&cli.common)?),
        };
    }
    let resolved = resolve(&cli.common)?;
    let (name, set) = produce(cli, &resolved, false)?;
    let Some(set) = set else { return Ok(()) };
    let dir = cli.common.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let mut manifest = manifest_for(name, args, &resolved)?;
    let path = set.write(&dir, &mut manifest)?;
    eprintln!("wrote {} file(s) and {}", set.files.len(), path.display());
    Ok(())
}

/// Runs a command and returns its outputs without touching the disk.
/// `steady` only produces files when asked to.
pub fn produce(cli: &Cli, r: &Resolved, files: bool) -> Result<(&'static str, Option<OutputSet>), CliError> {
    match &cli.command {
        Command::Steady => steady(r, files || cli.common.out.is_some()).map(|s| ("steady", s)),
        Command::Irf {
            shock,
            size,
            sign,
            horizon,
            units,
        } => irf(r, shock, *size, *sign, *horizon, *units).map(|s| ("irf", Some(s))),
        Command::Multipliers { horizon } => {
            multipliers(r, cli.common.variant.is_some(), *horizon).map(|s| ("multipliers", Some(s)))
        }
        Command::Scan { grid } => scan_cmd(r, grid).map(|s| ("scan", Some(s))),
        Command::Verify { .. } => Err(CliError::Usage("verify produces no outputs".into())),
    }
}

fn steady(r: &Resolved, write: bool) -> Result<Option<OutputSet>, CliError> {
    let econ = Economy::new(&r.cal, r.variant)?;
    let ss = &econ.steady;
    let mut csv = String::from("variable,value\n");
    println!("{:<16} {:>20}", "variable", "value");
    for v in Var::ALL {
        let x = ss.get(*v);
        println!("{:<16} {:>20.12}", v.name(), x);
        csv.push_str(&format!("{},{}\n", v.name(), fmt_num(x)));
    }
    let c = &econ.cal;
    let weighted = c.pop_k * ss.tau[0] + c.pop_s * ss.tau[1] + c.pop_h * ss.tau[2];
    let extra = [
        ("psi", ss.psi),
        ("F", ss.fixed_cost),
        ("tau_K", ss.tau[0]),
        ("tau_S", ss.tau[1]),
        ("tau_H", ss.tau[2]),
        ("tau_weighted_sum", weighted),
        ("max_residual", ss.max_residual),
    ];
    for (name, x) in extra {
        println!("{name:<16} {x:>20.12e}");
        csv.push_str(&format!("{name},{}\n", fmt_num(x)));
    }
    if !write {
        return Ok(None);
    }
    let stem = format!("steady_{}_{}", r.variant.economy_name(), fiscal_name(&r.variant));
    let mut set = OutputSet::new(stem.clone());
    set.add(format!("{stem}.csv"), csv);
    Ok(Some(set))
}

/// Signed shock size from `--size` and `--sign`.
pub fn signed_size(kind: ShockKind, size: Option<f64>, sign: Option<i8>) -> Result<f64, CliError> {
    let base = size.unwrap_or_else(|| kind.default_size());
    match sign {
        None => Ok(base),
        Some(s @ (1 | -1)) => Ok(f64::from(s) * base.abs()),
        Some(s) => Err(CliError::Usage(format!("--sign must be +1 or -1, got {s}"))),
    }
}

fn irf(
    r: &Resolved,
    shock: &str,
    size: Option<f64>,
    sign: Option<i8>,
    horizon: usize,
    units: UnitsArg,
) -> Result<OutputSet, CliError> {
    let kind: ShockKind = shock.parse()?;
    let size = signed_size(kind, size, sign)?;
    let econ = Economy::new(&r.cal, r.variant)?;
    let mut spec = ShockSpec::new(kind, size, horizon, &econ.cal)?;
    if units == UnitsArg::Level {
        spec.spending_units = SpendingUnits::OwnLevel;
    }
    let stem = format!(
        "irf_{}_{}_phi{}_gammaT{}_{}_{}",
        kind,
        size,
        econ.cal.phi_pi,
        econ.cal.gamma_t,
        r.variant.economy_name(),
        fiscal_name(&r.variant)
    );
    let result = run_spec(&econ, stem.clone(), &spec)?;
    eprintln!("classification: {}", result.classification);
    eprintln!("liquidity premium gap: {:e}", result.prop1_gap);
    eprintln!("resource constraint residual: {:e}", result.resource_gap);
    eprintln!("bond market residual: {:e}", result.bond_market_gap);
    if let Some(m) = &result.multipliers {
        eprintln!("impact multiplier: {:.4}", m.impact);
        eprintln!("cumulative multiplier ({}q): {:.4}", m.horizon, m.cumulative_15q);
    }
    let mut set = OutputSet::new(stem.clone());
    set.add(format!("{stem}.csv"), irf_csv(&result.irf));
    Ok(set)
}

fn multipliers(r: &Resolved, explicit_variant: bool, horizon: usize) -> Result<OutputSet, CliError> {
    let variants = if explicit_variant {
        vec![r.variant]
    } else {
        vec![
            Variant::THREE.with_fiscal(r.variant.fiscal),
            Variant::TWO.with_fiscal(r.variant.fiscal),
        ]
    };
    let mut reports = Vec::new();
    for v in &variants {
        reports.extend(multiplier_table(&r.cal, *v, horizon)?);
    }
    println!(
        "{:<12} {:>7} {:>8} {:>10} {:>12}",
        "variant", "phi_pi", "gamma_T", "impact", "cumulative"
    );
    for m in &reports {
        println!(
            "{:<12} {:>7} {:>8} {:>10.4} {:>12.4}",
            m.variant, m.regime.phi_pi, m.regime.gamma_t, m.impact, m.cumulative_15q
        );
    }
    let names: Vec<_> = variants.iter().map(|v| v.economy_name()).collect();
    let stem = format!("multipliers_{}_{}_h{horizon}", names.join("-"), fiscal_name(&r.variant));
    let mut set = OutputSet::new(stem.clone());
    set.add(format!("{stem}.json"), multiplier_json(&reports)?);
    Ok(set)
}

fn scan_cmd(r: &Resolved, grid: &[String]) -> Result<OutputSet, CliError> {
    let spec = match grid {
        [] => GridSpec::policy_default(r.variant),
        [a, b] => GridSpec::new(a.parse::<Axis>()?, b.parse::<Axis>()?, r.variant),
        _ => {
            return Err(CliError::Usage(format!(
                "--grid must be given twice or not at all, got {} value(s)",
                grid.len()
            )))
        }
    };
    let map = scan(&spec, &r.cal)?;
    let summary = region_summary(&map);
    for (label, n) in &summary.counts {
        println!("{label:<14} {n}");
    }
    println!("{:<14} {}", "boundary", summary.boundary.len());
    let stem = format!(
        "scan_{}_{}_{}_{}",
        spec.axis1.name,
        spec.axis2.name,
        r.variant.economy_name(),
        fiscal_name(&r.variant)
    );
    let mut set = OutputSet::new(stem.clone());
    set.add(format!("{stem}.csv"), scan_csv(&map));
    set.add(format!("{stem}.json"), scan_json(&map)?);
    Ok(set)
}

/// Recomputes the outputs recorded in a manifest into `dir`.
pub fn replay_into(manifest: &RunManifest, dir: &Path) -> Result<RunManifest, CliError> {
    use clap::Parser;
    let mut argv = vec!["threeagent".to_string()];
    argv.extend(manifest.args.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.to_string()))?;
    let resolved = resolve(&cli.common)?;
    let (name, set) = produce(&cli, &resolved, true)?;
    let set = set.ok_or_else(|| CliError::Mismatch(format!("`{name}` produced no files")))?;
    let mut fresh = manifest_for(name, &manifest.args, &resolved)?;
    set.write(dir, &mut fresh)?;
    Ok(fresh)
}
