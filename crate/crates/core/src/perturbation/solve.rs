//! First-order rational-expectations solution.
//!
//! The policy matrix `P` is the minimal solvent of `A P^2 + B P + C = 0`,
//! computed by cyclic reduction. Determinacy is classified independently by
//! counting the generalized eigenvalues of the first-order companion pencil
//! outside the unit circle. The pencil may have infinite eigenvalues (static
//! equations), so eigenvalues are obtained through a shift-and-invert
//! transform `nu = 1 / (s - lambda)` that maps them to zero.

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use super::jacobian::StructuralJacobians;
use crate::error::{ModelError, Result};

/// Eigenvalues with modulus above `1 + UNIT_CIRCLE_TOL` count as explosive.
pub const UNIT_CIRCLE_TOL: f64 = 1e-6;
/// Eigenvalues this close to the unit circle raise a boundary warning.
pub const BOUNDARY_BAND: f64 = 1e-4;
/// Contract bound on the solvent and impact residuals.
pub const SOLVENT_TOL: f64 = 1e-8;

const CR_MAX_ITER: usize = 200;
const CR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// Unique stable solution.
    Determinate,
    /// Too few explosive roots: a continuum of stable solutions.
    Indeterminate,
    /// Too many explosive roots: no stable solution.
    Explosive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Determinate => "determinate",
            Classification::Indeterminate => "indeterminate",
            Classification::Explosive => "explosive",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    /// Moduli of the generalized eigenvalues in ascending order; infinite
    /// eigenvalues are reported as `f64::INFINITY`.
    pub moduli: Vec<f64>,
    pub n_explosive: usize,
    /// Number of explosive roots required for determinacy.
    pub n_required: usize,
    pub n_predetermined: usize,
    /// Set when some finite eigenvalue lies within `BOUNDARY_BAND` of the
    /// unit circle.
    pub boundary_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    /// Current variables on lagged variables.
    pub p: DMatrix<f64>,
    /// Current variables on shock innovations.
    pub q: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearSolution {
    pub classification: Classification,
    pub eigen_report: EigenReport,
    /// Present only for determinate systems.
    pub policy: Option<Policy>,
}

impl LinearSolution {
    pub fn policy(&self) -> Result<&Policy> {
        self.policy.as_ref().ok_or_else(|| {
            ModelError::NotDeterminate(format!(
                "{} ({} explosive roots, {} required)",
                self.classification, self.eigen_report.n_explosive, self.eigen_report.n_required
            ))
        })
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Companion pencil `E s(t+1) = F s(t)` on `s(t) = [x(t-1) states; x(t)]`.
fn companion_pencil(j: &StructuralJacobians, states: &[usize]) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = j.n_vars();
    let nb = states.len();
    let dim = n + nb;
    let mut e = DMatrix::zeros(dim, dim);
    let mut f = DMatrix::zeros(dim, dim);
    e.view_mut((0, nb), (n, n)).copy_from(&j.a);
    f.view_mut((0, nb), (n, n)).copy_from(&(-&j.b));
    for (k, &col) in states.iter().enumerate() {
        for row in 0..n {
            f[(row, k)] = -j.c[(row, col)];
        }
        e[(n + k, k)] = 1.0;
        f[(n + k, nb + col)] = 1.0;
    }
    (e, f)
}

const SHIFTS: [f64; 5] = [1.618_033_988_749_895, -1.324_717_957_244_746, 2.414_213_562_373_095, -0.754_877_666_246_693, 3.302_775_637_731_995];

const SCHUR_MAX_ITER: usize = 20_000;

/// Eigenvalues through a real Schur decomposition with a bounded number of
/// QR sweeps.
fn bounded_eigenvalues(m: DMatrix<f64>) -> Option<Vec<Complex<f64>>> {
    nalgebra::Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER)
        .map(|schur| schur.complex_eigenvalues().iter().copied().collect())
}

/// Generalized eigenvalues of `F v = lambda E v`.
fn pencil_eigenvalues(e: &DMatrix<f64>, f: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let dim = e.nrows();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let scale = max_abs(e).max(max_abs(f)).max(1.0);
    let mut candidates: Vec<(f64, f64)> = SHIFTS
        .iter()
        .map(|&s| {
            let u = (e * s - f).lu().u();
            let min_pivot = u.diagonal().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
            (min_pivot / (scale * s.abs().max(1.0)), s)
        })
        .filter(|(quality, _)| *quality > 1e-13)
        .collect();
    if candidates.is_empty() {
        return Err(ModelError::Solver(
            "companion pencil is singular for every trial shift".into(),
        ));
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, s) in candidates {
        let Some(m) = (e * s - f).lu().solve(e) else {
            continue;
        };
        let tiny = 1e-14 * max_abs(&m).max(1.0);
        let Some(nu) = bounded_eigenvalues(m) else {
            continue;
        };
        return Ok(nu
            .iter()
            .map(|z| {
                if z.norm() <= tiny {
                    Complex::new(f64::INFINITY, 0.0)
                } else {
                    Complex::new(s, 0.0) - Complex::new(1.0, 0.0) / z
                }
            })
            .collect());
    }
    Err(ModelError::Solver(
        "eigenvalue iteration did not converge for any shift".into(),
    ))
}

fn eigen_report(j: &StructuralJacobians, states: &[usize]) -> Result<EigenReport> {
    j.validate()?;
    let (e, f) = companion_pencil(j, states);
    let eig = pencil_eigenvalues(&e, &f)?;
    let mut moduli: Vec<f64> = eig
        .iter()
        .map(|z| if z.re.is_infinite() { f64::INFINITY } else { z.norm() })
        .collect();
    moduli.sort_by(|a, b| a.total_cmp(b));
    let n_explosive = moduli.iter().filter(|m| **m > 1.0 + UNIT_CIRCLE_TOL).count();
    let boundary_warning = moduli
        .iter()
        .any(|m| m.is_finite() && (m - 1.0).abs() < BOUNDARY_BAND);
    Ok(EigenReport {
        moduli,
        n_explosive,
        n_required: j.n_vars(),
        n_predetermined: states.len(),
        boundary_warning,
    })
}

fn classify(report: &EigenReport) -> Classification {
    use std::cmp::Ordering::*;
    match report.n_explosive.cmp(&report.n_required) {
        Equal => Classification::Determinate,
        Less => Classification::Indeterminate,
        Greater => Classification::Explosive,
    }
}

/// Blanchard-Kahn classification without building the solvent.
///
/// `states` lists the variables whose lags are states; its length is the
/// number of predetermined variables.
pub fn classify_determinacy(j: &StructuralJacobians, states: &[usize]) -> Result<(Classification, EigenReport)> {
    let report = eigen_report(j, states)?;
    Ok((classify(&report), report))
}

/// Minimal solvent of `A X^2 + B X + C = 0` by cyclic reduction.
pub fn cyclic_reduction(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = b.nrows();
    let mut a0 = c.clone();
    let mut a1 = b.clone();
    let mut a2 = a.clone();
    let mut a1_hat = b.clone();
    let scale = max_abs(a).max(max_abs(b)).max(max_abs(c)).max(1.0);
    let mut converged = max_abs(&a0) <= CR_TOL * scale || max_abs(&a2) <= CR_TOL * scale;
    let mut iter = 0;
    while !converged {
        if iter == CR_MAX_ITER {
            return Err(ModelError::Solver(format!(
                "cyclic reduction did not converge in {CR_MAX_ITER} iterations"
            )));
        }
        let lu = a1.clone().lu();
        let inv_a0 = lu
            .solve(&a0)
            .ok_or_else(|| ModelError::Solver("singular pivot block in cyclic reduction".into()))?;
        let inv_a2 = lu
            .solve(&a2)
            .ok_or_else(|| ModelError::Solver("singular pivot block in cyclic reduction".into()))?;
        let a2_inv_a0 = &a2 * &inv_a0;
        let a0_inv_a2 = &a0 * &inv_a2;
        let next_a0 = -(&a0 * &inv_a0);
        let next_a2 = -(&a2 * &inv_a2);
        a1 -= &a2_inv_a0 + &a0_inv_a2;
        a1_hat -= &a2_inv_a0;
        a0 = next_a0;
        a2 = next_a2;
        if a1.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Solver("cyclic reduction diverged".into()));
        }
        converged = max_abs(&a0) <= CR_TOL * scale || max_abs(&a2) <= CR_TOL * scale;
        iter += 1;
    }
    let x = a1_hat
        .lu()
        .solve(&(-c))
        .ok_or_else(|| ModelError::Solver("singular final block in cyclic reduction".into()))?;
    debug_assert_eq!(x.nrows(), n);
    Ok(x)
}

/// Largest eigenvalue modulus of a square matrix; NaN when the eigenvalue
/// iteration fails to converge.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    bounded_eigenvalues(m.clone())
        .map(|eig| eig.iter().fold(0.0_f64, |acc, z| acc.max(z.norm())))
        .unwrap_or(f64::NAN)
}

/// Solves the linear rational-expectations model. Determinate systems get a
/// policy `(P, Q)` satisfying the solvent contract; other classifications
/// are returned without a policy.
pub fn solve_linear_re(j: &StructuralJacobians, states: &[usize]) -> Result<LinearSolution> {
    let (classification, report) = classify_determinacy(j, states)?;
    if classification != Classification::Determinate {
        return Ok(LinearSolution {
            classification,
            eigen_report: report,
            policy: None,
        });
    }
    let p = cyclic_reduction(&j.a, &j.b, &j.c)?;
    let solvent_residual = max_abs(&(&j.a * &p * &p + &j.b * &p + &j.c));
    if !(solvent_residual < SOLVENT_TOL) {
        return Err(ModelError::Solver(format!(
            "solvent residual {solvent_residual:e} exceeds tolerance"
        )));
    }
    let rho = spectral_radius(&p);
    if !(rho < 1.0 + SOLVENT_TOL) {
        return Err(ModelError::Solver(format!(
            "solvent has spectral radius {rho}, expected a stable one"
        )));
    }
    let impact = &j.a * &p + &j.b;
    let q = impact
        .lu()
        .solve(&(-&j.d))
        .ok_or_else(|| ModelError::Solver("A P + B is singular".into()))?;
    Ok(LinearSolution {
        classification,
        eigen_report: report,
        policy: Some(Policy { p, q }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: f64, b: f64, c: f64) -> StructuralJacobians {
        StructuralJacobians {
            a: DMatrix::from_element(1, 1, a),
            b: DMatrix::from_element(1, 1, b),
            c: DMatrix::from_element(1, 1, c),
            d: DMatrix::from_element(1, 1, 1.0),
        }
    }

    #[test]
    fn scalar_stable_root() {
        let j = scalar(1.0, -2.5, 1.0);
        let sol = solve_linear_re(&j, &[0]).unwrap();
        assert_eq!(sol.classification, Classification::Determinate);
        let p = sol.policy().unwrap().p[(0, 0)];
        // Roots of x^2 - 2.5 x + 1 are 0.5 and 2.
        assert!((p - 0.5).abs() < 1e-14);
        let q = sol.policy().unwrap().q[(0, 0)];
        assert!((q - (-1.0 / (0.5 - 2.5))).abs() < 1e-14);
    }

    #[test]
    fn scalar_two_stable_roots_is_indeterminate() {
        // x^2 - 0.9x + 0.2 = (x - 0.4)(x - 0.5)
        let (class, report) = classify_determinacy(&scalar(1.0, -0.9, 0.2), &[0]).unwrap();
        assert_eq!(class, Classification::Indeterminate);
        assert_eq!(report.n_explosive, 0);
    }

    #[test]
    fn scalar_two_unstable_roots_is_explosive() {
        // (x - 2)(x - 3)
        let (class, _) = classify_determinacy(&scalar(1.0, -5.0, 6.0), &[0]).unwrap();
        assert_eq!(class, Classification::Explosive);
    }

    #[test]
    fn static_system() {
        let b = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 4.0]);
        let d = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let j = StructuralJacobians {
            a: DMatrix::zeros(2, 2),
            b: b.clone(),
            c: DMatrix::zeros(2, 2),
            d: d.clone(),
        };
        let sol = solve_linear_re(&j, &[]).unwrap();
        assert_eq!(sol.classification, Classification::Determinate);
        let pol = sol.policy().unwrap();
        assert_eq!(pol.p, DMatrix::zeros(2, 2));
        let expected = -b.lu().solve(&d).unwrap();
        assert!((&pol.q - expected).abs().max() < 1e-14);
    }

    #[test]
    fn boundary_warning_near_unit_root() {
        // Roots 1.00005 and 3.
        let r = 1.00005;
        let j = scalar(1.0, -(r + 3.0), 3.0 * r);
        let (class, report) = classify_determinacy(&j, &[0]).unwrap();
        assert!(report.boundary_warning);
        assert_eq!(class, Classification::Explosive);
    }
}
