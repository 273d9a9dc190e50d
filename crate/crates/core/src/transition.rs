//! Type-switching probabilities between capitalist (K), saver (S) and
//! hand-to-mouth (H) households.

use serde::{Deserialize, Serialize};

use crate::calibration::{AgentCount, Calibration, Variant};
use crate::error::{ModelError, Result};

/// Household types, in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HouseholdType {
    K = 0,
    S = 1,
    H = 2,
}

/// Row-stochastic matrix `lambda[from][to]` with the population shares it
/// is meant to preserve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub lambda: [[f64; 3]; 3],
    pub stationary_shares: [f64; 3],
}

const ROW_TOL: f64 = 1e-12;

const ENTRY_NAMES: [[&str; 3]; 3] = [
    ["lambda_KK", "lambda_KS", "lambda_KH"],
    ["lambda_SK", "lambda_SS", "lambda_SH"],
    ["lambda_HK", "lambda_HS", "lambda_HH"],
];

impl TransitionMatrix {
    pub fn identity(shares: [f64; 3]) -> Self {
        let mut lambda = [[0.0; 3]; 3];
        for (i, row) in lambda.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        TransitionMatrix {
            lambda,
            stationary_shares: shares,
        }
    }

    #[inline]
    pub fn get(&self, from: HouseholdType, to: HouseholdType) -> f64 {
        self.lambda[from as usize][to as usize]
    }

    /// `shares' Λ`.
    pub fn propagate(&self, shares: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|i| shares[i] * self.lambda[i][j]).sum();
        }
        out
    }

    /// Checks nonnegativity, row sums and left-invariance of the shares.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.lambda.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&p) {
                    return Err(ModelError::InvalidTransition(format!(
                        "{} = {p} lies outside [0, 1]",
                        ENTRY_NAMES[i][j]
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_TOL {
                return Err(ModelError::InvalidTransition(format!(
                    "row {i} sums to {sum}, not 1"
                )));
            }
        }
        let moved = self.propagate(&self.stationary_shares);
        for (a, b) in moved.iter().zip(&self.stationary_shares) {
            if (a - b).abs() > ROW_TOL {
                return Err(ModelError::InvalidTransition(format!(
                    "shares {:?} are not left-invariant (mapped to {moved:?})",
                    self.stationary_shares
                )));
            }
        }
        Ok(())
    }
}

/// Fills the five remaining probabilities from the four anchors so that the
/// calibrated shares are stationary. No feasibility check.
pub fn complete_unchecked(cal: &Calibration) -> TransitionMatrix {
    let (pk, ps, ph) = (cal.pop_k, cal.pop_s, cal.pop_h);
    let lkk = cal.lambda_kk;
    let lkh = cal.lambda_kh;
    let lhk = cal.lambda_hk;
    let lss = cal.lambda_ss;

    let lks = 1.0 - lkk - lkh;
    let lsk = ((1.0 - lkk) * pk - lhk * ph) / ps;
    let lhs = ((1.0 - lss) * ps - lks * pk) / ph;
    let lsh = 1.0 - lss - lsk;
    let lhh = 1.0 - lhk - lhs;

    TransitionMatrix {
        lambda: [[lkk, lks, lkh], [lsk, lss, lsh], [lhk, lhs, lhh]],
        stationary_shares: [pk, ps, ph],
    }
}

/// Two-state chain between K and H; the empty saver row redistributes
/// according to the stationary shares so the chain stays irreducible.
fn complete_two_agent(cal: &Calibration) -> TransitionMatrix {
    let (pk, ph) = (cal.pop_k, cal.pop_h);
    let lkk = cal.lambda_kk;
    let lkh = 1.0 - lkk;
    let lhk = pk * lkh / ph;
    TransitionMatrix {
        lambda: [[lkk, 0.0, lkh], [pk, 0.0, ph], [lhk, 0.0, 1.0 - lhk]],
        stationary_shares: [pk, 0.0, ph],
    }
}

/// Completes the transition matrix for the calibration (already adjusted
/// for its variant) and rejects any probability outside `[0, 1]`.
pub fn complete_transition_matrix(cal: &Calibration, variant: &Variant) -> Result<TransitionMatrix> {
    let tm = match variant.agents {
        AgentCount::Three => complete_unchecked(cal),
        AgentCount::Two => complete_two_agent(cal),
    };
    for (i, row) in tm.lambda.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if !p.is_finite() || !(-1e-15..=1.0 + 1e-15).contains(&p) {
                return Err(ModelError::InfeasibleProbability {
                    entry: ENTRY_NAMES[i][j],
                    value: p,
                });
            }
        }
    }
    tm.validate()?;
    Ok(tm)
}

/// Names of the five probabilities implied by the anchors.
pub const DERIVED_ENTRIES: [&str; 5] = ["lambda_SK", "lambda_KS", "lambda_HS", "lambda_SH", "lambda_HH"];

/// Overwrites completed entries with explicitly configured ones, then
/// checks the matrix invariants and agreement with the completion.
pub fn apply_explicit_entries(tm: &TransitionMatrix, entries: &[(String, f64)]) -> Result<TransitionMatrix> {
    let mut out = *tm;
    for (name, value) in entries {
        let (i, j) = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .find(|&(i, j)| ENTRY_NAMES[i][j] == name)
            .ok_or_else(|| ModelError::Config(format!("unknown transition entry `{name}`")))?;
        out.lambda[i][j] = *value;
    }
    out.validate()?;
    for (i, row) in out.lambda.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if (p - tm.lambda[i][j]).abs() > ROW_TOL {
                return Err(ModelError::InvalidTransition(format!(
                    "{} = {p} disagrees with the value {} implied by the anchors",
                    ENTRY_NAMES[i][j], tm.lambda[i][j]
                )));
            }
        }
    }
    Ok(out)
}

/// Solves the two-equation fixed point of the population laws of motion,
/// with the hand-to-mouth share following by normalization.
///
/// A singular system means the chain is reducible and the stationary
/// distribution is not unique; the error then carries the matrix's own
/// shares if they are invariant.
pub fn stationary_shares(tm: &TransitionMatrix) -> Result<[f64; 3]> {
    let l = &tm.lambda;
    // Pk = lkk Pk + lsk Ps + lhk (1 - Pk - Ps)
    // Ps = lks Pk + lss Ps + lhs (1 - Pk - Ps)
    let a11 = 1.0 - l[0][0] + l[2][0];
    let a12 = -l[1][0] + l[2][0];
    let a21 = -l[0][1] + l[2][1];
    let a22 = 1.0 - l[1][1] + l[2][1];
    let b1 = l[2][0];
    let b2 = l[2][1];
    let det = a11 * a22 - a12 * a21;
    let scale = a11.abs().max(a12.abs()).max(a21.abs()).max(a22.abs()).max(1.0);
    if det.abs() <= 1e-12 * scale * scale {
        return Err(ModelError::AmbiguousStationary {
            candidate: tm.stationary_shares,
        });
    }
    let pk = (b1 * a22 - a12 * b2) / det;
    let ps = (a11 * b2 - a21 * b1) / det;
    Ok([pk, ps, 1.0 - pk - ps])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn baseline() -> TransitionMatrix {
        complete_transition_matrix(&Calibration::default(), &Variant::THREE).unwrap()
    }

    #[test]
    fn baseline_completion_matches_calibration_table() {
        let tm = baseline();
        let l = tm.lambda;
        assert!((l[1][0] - 0.0131).abs() < 5e-5);
        assert!((l[0][1] - 0.18).abs() < 1e-12);
        assert!((l[2][1] - 0.0850).abs() < 5e-5);
        assert!((l[1][2] - 0.0369).abs() < 5e-5);
        assert!((l[2][2] - 0.8609).abs() < 5e-5);
    }

    #[test]
    fn identity_anchors_give_identity() {
        let cal = Calibration {
            lambda_kk: 1.0,
            lambda_kh: 0.0,
            lambda_hk: 0.0,
            lambda_ss: 1.0,
            ..Default::default()
        };
        let tm = complete_transition_matrix(&cal, &Variant::THREE).unwrap();
        assert_eq!(tm.lambda, TransitionMatrix::identity([0.1, 0.7, 0.2]).lambda);
        match stationary_shares(&tm) {
            Err(ModelError::AmbiguousStationary { candidate }) => {
                assert_eq!(candidate, [0.1, 0.7, 0.2])
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_completion_names_entry() {
        // Capitalists too sticky for the baseline inflow from H.
        let cal = Calibration {
            lambda_kk: 0.9,
            ..Default::default()
        };
        match complete_transition_matrix(&cal, &Variant::THREE) {
            Err(ModelError::InfeasibleProbability { entry, value }) => {
                assert_eq!(entry, "lambda_SK");
                assert!(value < 0.0);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn corrupted_row_is_rejected() {
        let mut tm = baseline();
        tm.lambda[0][0] += 0.1;
        let err = tm.validate().unwrap_err();
        assert!(err.to_string().contains("row 0"), "{err}");
    }

    #[test]
    fn explicit_entries_checked() {
        let tm = baseline();
        let ok = apply_explicit_entries(&tm, &[("lambda_KS".into(), 0.18)]).unwrap();
        assert!((ok.lambda[0][1] - tm.lambda[0][1]).abs() < 1e-12);
        let err = apply_explicit_entries(&tm, &[("lambda_KS".into(), 0.28)]).unwrap_err();
        assert!(err.to_string().contains("row 0 sums to 1.1"), "{err}");
    }

    #[test]
    fn two_agent_chain() {
        let v = Variant::TWO;
        let cal = Calibration::default().for_variant(&v);
        let tm = complete_transition_matrix(&cal, &v).unwrap();
        let s = stationary_shares(&tm).unwrap();
        assert!((s[0] - 0.8).abs() < 1e-12 && s[1].abs() < 1e-12 && (s[2] - 0.2).abs() < 1e-12);
    }
}
