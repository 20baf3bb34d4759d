//! Thin wrappers over nalgebra's symmetric eigensolver.
//!
//! nalgebra's implicit QR can return NaN on strongly graded matrices (entries
//! spanning ~80 orders of magnitude, as in the transposed output of a weak
//! binomial input). Those cases fall back to cyclic Jacobi, which stays accurate
//! on graded input.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::fock::Complex64;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations. Rotations are
/// skipped once `|a_pq| <= eps sqrt(|a_pp| |a_qq|)`, the relative criterion that
/// keeps small eigenvalues of graded matrices accurate.
pub fn jacobi_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                if apq.abs() <= f64::EPSILON * libm::sqrt(app.abs()) * libm::sqrt(aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let (arp, arq) = (a[(r, p)], a[(r, q)]);
                    let new_p = c * arp - s * arq;
                    let new_q = s * arp + c * arq;
                    a[(r, p)] = new_p;
                    a[(p, r)] = new_p;
                    a[(r, q)] = new_q;
                    a[(q, r)] = new_q;
                }
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
        if !rotated {
            break;
        }
    }
    sorted(a.diagonal().iter().copied().collect())
}

/// Real symmetric `[[A, -B], [B, A]]` for `A + iB`; its spectrum is that of the
/// Hermitian matrix with every eigenvalue doubled.
fn realified(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = m[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    if m.nrows() == 1 {
        return alloc::vec![m[(0, 0)]];
    }
    let ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    if ev.iter().all(|x| x.is_finite()) {
        sorted(ev)
    } else {
        jacobi_eigenvalues(m)
    }
}

/// Ascending eigenvalues of a complex Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    if m.nrows() == 1 {
        return alloc::vec![m[(0, 0)].re];
    }
    let ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    if ev.iter().all(|x| x.is_finite()) {
        sorted(ev)
    } else {
        jacobi_eigenvalues(&realified(m)).into_iter().step_by(2).collect()
    }
}

/// Smallest eigenvalue, `+inf` for an empty matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

pub fn max_abs_entry(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
}

/// `exp(theta * K)` for real antisymmetric `K`, through the Hermitian matrix `iK`:
/// with `iK = V diag(l) V^H`, `exp(theta K) = V diag(exp(-i theta l)) V^H`.
pub fn expm_antisymmetric(k: &DMatrix<f64>, theta: f64) -> DMatrix<Complex64> {
    let n = k.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let h = k.map(|x| Complex64::new(0.0, x));
    let eig = SymmetricEigen::new(h);
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| {
            let phi = -theta * l;
            Complex64::new(libm::cos(phi), libm::sin(phi))
        }),
    ));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}
