//! Self-check battery and manifest replay.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use threeagent_core::experiments::{run_spec, sign_battery, Check, ShockKind, ShockSpec};
use threeagent_core::model::{budget_residuals, capitalist_budget_residual};
use threeagent_core::perturbation::{solve_economy, spectral_radius, SOLVENT_TOL};
use threeagent_core::steady::STEADY_STATE_TOL;
use threeagent_core::{Classification, Economy, Variant};

use crate::commands::{replay_into, Resolved};
use crate::manifest::{read_manifest, sha256_hex};
use crate::CliError;

const IDENTITY_TOL: f64 = 1e-8;
const VERIFY_HORIZON: usize = 200;

fn report(checks: &[Check]) -> Result<(), CliError> {
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {:<36} {}", c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}

pub fn battery(r: &Resolved) -> Result<(), CliError> {
    let mut checks = Vec::new();
    let econ = Economy::new(&r.cal, r.variant)?;
    let c = &econ.cal;

    let shares = [c.pop_k, c.pop_s, c.pop_h];
    let moved = econ.transition.propagate(&shares);
    let drift = (0..3).fold(0.0_f64, |m, i| m.max((moved[i] - shares[i]).abs()));
    checks.push(Check::new("population shares invariant", drift < 1e-12, format!("drift {drift:.2e}")));

    let ss = &econ.steady;
    checks.push(Check::new(
        "steady-state residual",
        ss.max_residual <= STEADY_STATE_TOL,
        format!("{:.2e}", ss.max_residual),
    ));
    let weighted = c.pop_k * ss.tau[0] + c.pop_s * ss.tau[1] + c.pop_h * ss.tau[2];
    checks.push(Check::new("transfers net to zero", weighted.abs() < 1e-10, format!("{weighted:.2e}")));
    let at_rest = budget_residuals(&econ, &ss.values, &ss.values);
    let implied = capitalist_budget_residual(&econ, &ss.values, &ss.values);
    let worst = at_rest.iter().fold(implied.abs(), |m, v| m.max(v.abs()));
    checks.push(Check::new("budgets balance at rest", worst < 1e-10, format!("{worst:.2e}")));

    let (j, sol) = solve_economy(&econ)?;
    let rep = &sol.eigen_report;
    checks.push(Check::new(
        "classification",
        true,
        format!(
            "{} ({} explosive, {} required{})",
            sol.classification,
            rep.n_explosive,
            rep.n_required,
            if rep.boundary_warning { ", near unit circle" } else { "" }
        ),
    ));

    if sol.classification != Classification::Determinate {
        println!("note: {} regime, impulse-response checks skipped", sol.classification);
        return report(&checks);
    }

    let p = &sol.policy()?.p;
    let solvent = (&j.a * p * p + &j.b * p + &j.c).abs().max();
    checks.push(Check::new("solvent residual", solvent < SOLVENT_TOL, format!("{solvent:.2e}")));
    let rho = spectral_radius(p);
    checks.push(Check::new("solution stable", rho < 1.0, format!("spectral radius {rho:.6}")));

    for kind in ShockKind::ALL {
        let spec = ShockSpec::new(kind, kind.default_size(), VERIFY_HORIZON, &econ.cal)?;
        let res = run_spec(&econ, kind.to_string(), &spec)?;
        checks.push(Check::new(
            format!("{kind}: liquidity premium identity"),
            res.prop1_gap < IDENTITY_TOL,
            format!("{:.2e}", res.prop1_gap),
        ));
        checks.push(Check::new(
            format!("{kind}: resource constraint"),
            res.resource_gap < IDENTITY_TOL,
            format!("{:.2e}", res.resource_gap),
        ));
        checks.push(Check::new(
            format!("{kind}: bond market clears"),
            res.bond_market_gap < IDENTITY_TOL,
            format!("{:.2e}", res.bond_market_gap),
        ));
        let peak = res.irf.max_abs();
        let tail = res
            .irf
            .series
            .iter()
            .filter_map(|s| s.values.last())
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        checks.push(Check::new(
            format!("{kind}: responses die out"),
            tail <= 1e-3 * peak,
            format!("tail {tail:.2e} vs peak {peak:.2e}"),
        ));
    }

    if r.variant == Variant::THREE {
        checks.extend(sign_battery(&r.cal)?);
    }
    report(&checks)
}

/// Re-derives the input hash of a manifest, recomputes its outputs in a
/// scratch directory and compares hashes.
pub fn replay(path: &Path) -> Result<(), CliError> {
    let recorded = read_manifest(path)?;
    let mut problems = Vec::new();
    if recorded.derive_input_hash() != recorded.input_hash {
        problems.push("recorded input hash does not match the recorded inputs".to_string());
    }

    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let scratch = std::env::temp_dir().join(format!("threeagent-verify-{}-{nanos}", std::process::id()));
    let fresh = replay_into(&recorded, &scratch);
    let _ = fs::remove_dir_all(&scratch);
    let fresh = fresh?;

    if fresh.input_hash != recorded.input_hash {
        problems.push("inputs resolve differently now (config file or defaults changed)".to_string());
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    for out in &recorded.outputs {
        let regenerated = fresh.outputs.iter().find(|o| o.file == out.file);
        match regenerated {
            Some(o) if o.sha256 == out.sha256 => println!("PASS {} reproduced", out.file),
            Some(_) => problems.push(format!("{} differs when recomputed", out.file)),
            None => problems.push(format!("{} was not regenerated", out.file)),
        }
        if let Ok(bytes) = fs::read(dir.join(&out.file)) {
            if sha256_hex(&bytes) != out.sha256 {
                problems.push(format!("{} on disk does not match its recorded hash", out.file));
            }
        }
    }
    for p in &problems {
        println!("FAIL {p}");
    }
    if problems.is_empty() {
        println!("manifest {} reproduced", path.display());
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("{} problem(s) replaying {}", problems.len(), path.display())))
    }
}
