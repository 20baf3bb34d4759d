//! Independent oracles shared by the integration tests. Nothing here goes
//! through the log-domain code paths of the library.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use photon_npt_core::fock::Complex64;
use photon_npt_core::states::{make_mixture, make_poisson};
use photon_npt_core::{validate_pnd, HankelKind, PhotonNumberDistribution, TwoModeBasis, TwoModeIndex};
use rand::Rng;

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Raw Hankel matrix `[q_{n+m+shift}]` with `q_n = n! p(n)` from plain products.
pub fn raw_hankel(pnd: &PhotonNumberDistribution, kind: HankelKind, order: usize) -> DMatrix<f64> {
    let s = kind.shift();
    DMatrix::from_fn(order + 1, order + 1, |n, m| {
        let k = n + m + s;
        factorial(k) * pnd.prob(k)
    })
}

/// Diagonal congruence factors `D` with `H = D L D`.
pub fn congruence_diagonal(kind: HankelKind, order: usize) -> DMatrix<f64> {
    DMatrix::from_fn(order + 1, order + 1, |i, j| {
        if i != j {
            return 0.0;
        }
        let n = i as f64;
        match kind {
            HankelKind::L => 1.0 / (2f64.powf(n) * factorial(i)),
            HankelKind::LTilde => 1.0 / (2f64.powf(n + 0.5) * (factorial(i + 1) * factorial(i)).sqrt()),
        }
    })
}

/// `p_a(k) = sum_n p(n) C(n,k) / 2^n`.
pub fn binomial_split(pnd: &PhotonNumberDistribution) -> Vec<f64> {
    (0..=pnd.n_max())
        .map(|k| (k..=pnd.n_max()).map(|n| pnd.prob(n) * binomial(n, k) / 2f64.powi(n as i32)).sum())
        .collect()
}

/// Closed-form output element straight from the formula, plain arithmetic.
pub fn output_element(pnd: &PhotonNumberDistribution, row: TwoModeIndex, col: TwoModeIndex) -> f64 {
    if row.total() != col.total() {
        return 0.0;
    }
    let t = col.total();
    factorial(t) * pnd.prob(t)
        / (2f64.powi(t as i32)
            * (factorial(row.n_a) * factorial(row.n_b) * factorial(col.n_a) * factorial(col.n_b)).sqrt())
}

/// Random complete PND with `n_max` in `1..=max_n`; roughly a third of entries zeroed.
pub fn random_pnd<R: Rng>(rng: &mut R, max_n: usize) -> PhotonNumberDistribution {
    loop {
        let n_max = rng.gen_range(1..=max_n);
        let raw: Vec<f64> = (0..=n_max).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() }).collect();
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            continue;
        }
        let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
        return validate_pnd(&probs, 0.0).unwrap();
    }
}

/// Random PND with exactly `terms` nonzero entries placed among `0..=n_max`.
pub fn random_sparse_pnd<R: Rng>(rng: &mut R, terms: usize, n_max: usize) -> PhotonNumberDistribution {
    let mut probs = vec![0.0; n_max + 1];
    let mut placed = 0;
    while placed < terms {
        let n = rng.gen_range(0..=n_max);
        if probs[n] == 0.0 {
            probs[n] = rng.gen_range(0.05..1.0);
            placed += 1;
        }
    }
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    validate_pnd(&probs, 0.0).unwrap()
}

/// Random mixture of 1..=5 Poisson components with means in (0, 4].
pub fn random_poisson_mixture<R: Rng>(rng: &mut R, tail: f64) -> PhotonNumberDistribution {
    let k = rng.gen_range(1..=5);
    let comps: Vec<_> = (0..k).map(|_| make_poisson(rng.gen_range(0.05..4.0), tail).unwrap()).collect();
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let head: f64 = weights[..k - 1].iter().sum();
    weights[k - 1] = 1.0 - head;
    make_mixture(&comps, &weights).unwrap()
}

/// Random Hermitian matrix with unit trace on a basis.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_fn(dim, dim, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    m = &m + m.adjoint();
    for i in 0..dim {
        m[(i, i)].im = 0.0;
    }
    let tr = m.trace().re;
    let shift = (1.0 - tr) / dim as f64;
    for i in 0..dim {
        m[(i, i)].re += shift;
    }
    m
}

/// Dense `a` and `b` on a basis: `a|n_a,n_b> = sqrt(n_a)|n_a-1,n_b>`.
pub fn lowering_ops(basis: &TwoModeBasis) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let d = basis.dim();
    let mut a = DMatrix::zeros(d, d);
    let mut b = DMatrix::zeros(d, d);
    for (c, idx) in basis.indices().iter().enumerate() {
        if idx.n_a > 0 {
            let r = basis.position(TwoModeIndex::new(idx.n_a - 1, idx.n_b)).unwrap();
            a[(r, c)] = Complex::new((idx.n_a as f64).sqrt(), 0.0);
        }
        if idx.n_b > 0 {
            let r = basis.position(TwoModeIndex::new(idx.n_a, idx.n_b - 1)).unwrap();
            b[(r, c)] = Complex::new((idx.n_b as f64).sqrt(), 0.0);
        }
    }
    (a, b)
}

pub fn matrix_power(m: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    let mut out = DMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

pub fn min_sym_eig(m: &DMatrix<f64>) -> f64 {
    nalgebra::SymmetricEigen::new(m.clone()).eigenvalues.min()
}
