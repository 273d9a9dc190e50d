//! Synthetic rational-expectations systems with a known stable solvent.
//!
//! With `A = L`, `B = -L(S + P)`, `C = L S P`, the matrix polynomial factors
//! as `L (λ - S)(λ - P)`, so its roots are the eigenvalues of `S` and `P` and
//! `P` is a solvent. Choosing `|eig(P)| < 1 < |eig(S)|` makes `P` the unique
//! stable one.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, Schur};
use threeagent_core::perturbation::StructuralJacobians;

pub fn near_identity(n: usize, entries: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } + 0.15 * entries[i * n + j])
}

pub fn with_spectrum(basis: &DMatrix<f64>, eig: &[f64]) -> DMatrix<f64> {
    let inv = basis.clone().try_inverse().expect("well-conditioned basis");
    basis * DMatrix::from_diagonal(&DVector::from_row_slice(eig)) * inv
}

pub struct Synthetic {
    pub j: StructuralJacobians,
    pub p: DMatrix<f64>,
}

pub fn build(n: usize, stable: &[f64], unstable: &[f64], mix: &[f64]) -> Synthetic {
    let l = near_identity(n, &mix[..n * n]);
    let v = near_identity(n, &mix[n * n..2 * n * n]);
    let w = near_identity(n, &mix[2 * n * n..3 * n * n]);
    let p = with_spectrum(&v, stable);
    let s = with_spectrum(&w, unstable);
    let d = DMatrix::from_fn(n, 1, |i, _| mix[3 * n * n + i]);
    Synthetic {
        j: StructuralJacobians {
            a: l.clone(),
            b: -(&l * (&s + &p)),
            c: &l * &s * &p,
            d,
        },
        p,
    }
}

/// Root-selection oracle: eigenvectors of the companion matrix for the
/// stable roots, each found as the null vector of `M - λI` by SVD.
pub fn brute_force_solvent(j: &StructuralJacobians) -> DMatrix<f64> {
    let n = j.n_vars();
    let ainv = j.a.clone().try_inverse().expect("invertible lead matrix");
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, n), (n, n)).fill_with_identity();
    m.view_mut((n, 0), (n, n)).copy_from(&(-&ainv * &j.c));
    m.view_mut((n, n), (n, n)).copy_from(&(-&ainv * &j.b));
    let roots = Schur::try_new(m.clone(), f64::EPSILON, 10_000)
        .expect("schur converges")
        .complex_eigenvalues();
    let stable: Vec<f64> = roots.iter().filter(|z| z.norm() < 1.0).map(|z| z.re).collect();
    assert_eq!(stable.len(), n);
    let mut x1 = DMatrix::zeros(n, n);
    let mut x2 = DMatrix::zeros(n, n);
    for (k, lam) in stable.iter().enumerate() {
        let shifted = &m - DMatrix::identity(2 * n, 2 * n) * *lam;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors");
        let smallest = svd.singular_values.imin();
        let v = v_t.row(smallest).transpose();
        x1.column_mut(k).copy_from(&v.rows(0, n));
        x2.column_mut(k).copy_from(&v.rows(n, n));
    }
    x2 * x1.try_inverse().expect("stable eigenvectors span the lag space")
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
}
