//! Text output: CSV with fixed formatting and JSON summaries.
//!
//! Numbers are written with 12 significant digits in scientific notation,
//! '.' as decimal separator and '\n' line endings, so outputs diff cleanly
//! across platforms.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::error::{ModelError, Result};
use crate::experiments::{ImpulseSet, MultiplierReport};
use crate::perturbation::{EigenReport, StructuralJacobians};
use crate::regions::{region_summary, DeterminacyMap};

/// Formats `x` with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        // Also folds negative zero.
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    format!("{x:.11e}")
}

/// Impulse responses as `variable,t,value,unit` rows.
pub fn irf_csv(irf: &ImpulseSet) -> String {
    let mut out = String::from("variable,t,value,unit\n");
    for s in &irf.series {
        for (t, v) in s.values.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", s.name, t, fmt_num(*v), s.unit.label());
        }
    }
    out
}

/// Determinacy map as
/// `axis1_value,axis2_value,classification,n_explosive_eigen,n_predetermined`.
pub fn scan_csv(map: &DeterminacyMap) -> String {
    let mut out =
        String::from("axis1_value,axis2_value,classification,n_explosive_eigen,n_predetermined\n");
    for c in &map.cells {
        let n_exp = c.n_explosive.map(|n| n.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(c.axis1_value),
            fmt_num(c.axis2_value),
            c.label,
            n_exp,
            c.n_predetermined
        );
    }
    out
}

/// Companion JSON for a scan: the grid specification, label counts and
/// boundary cells.
pub fn scan_json(map: &DeterminacyMap) -> Result<String> {
    let summary = region_summary(map);
    let counts: serde_json::Map<String, serde_json::Value> = summary
        .counts
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let infeasible: Vec<_> = map
        .cells
        .iter()
        .filter_map(|c| c.reason.as_ref().map(|r| json!({"i": c.i, "j": c.j, "reason": r})))
        .collect();
    to_json(&json!({
        "grid": map.grid,
        "counts": counts,
        "boundary": summary.boundary,
        "infeasible": infeasible,
    }))
}

/// Multipliers in the layout of the published table: one block per
/// economy, passive money first, passive before less passive fiscal policy.
pub fn multiplier_json(reports: &[MultiplierReport]) -> Result<String> {
    let mut blocks = serde_json::Map::new();
    for r in reports {
        let block = blocks
            .entry(r.variant.clone())
            .or_insert_with(|| json!({"columns": [], "impact": [], "cumulative": [], "horizon": r.horizon}));
        let monetary = if r.regime.phi_pi > 1.0 { "active" } else { "passive" };
        block["columns"]
            .as_array_mut()
            .expect("array")
            .push(json!({"monetary": monetary, "phi_pi": r.regime.phi_pi, "gamma_T": r.regime.gamma_t}));
        block["impact"].as_array_mut().expect("array").push(json!(r.impact));
        block["cumulative"]
            .as_array_mut()
            .expect("array")
            .push(json!(r.cumulative_15q));
    }
    to_json(&serde_json::Value::Object(blocks))
}

/// Debug dump of the structural matrices as `matrix,row,col,value` rows
/// (nonzero entries only), followed by the eigenvalue moduli.
pub fn jacobian_dump_csv(j: &StructuralJacobians, report: Option<&EigenReport>) -> String {
    let mut out = String::from("matrix,row,col,value\n");
    for (name, m) in [("A", &j.a), ("B", &j.b), ("C", &j.c), ("D", &j.d)] {
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let v = m[(r, c)];
                if v != 0.0 {
                    let _ = writeln!(out, "{name},{r},{c},{}", fmt_num(v));
                }
            }
        }
    }
    if let Some(rep) = report {
        for (k, m) in rep.moduli.iter().enumerate() {
            let _ = writeln!(out, "eig_modulus,{k},0,{}", fmt_num(*m));
        }
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| ModelError::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
