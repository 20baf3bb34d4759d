//! Truncated two-mode Fock space.
//!
//! Two truncations appear in this crate. Beam-splitter outputs live on the
//! *total-number* triangle `n_a + n_b <= N`, since the splitter conserves total
//! photon number. Partially transposed matrices live on the *per-mode* box
//! `n_a, n_b <= N`: transposing the b-mode indices of a triangle-supported
//! matrix produces entries such as `<0,0|PT|1,1>` whose row and column sit
//! outside the triangle but inside the box.
//!
//! Both bases are ordered block-by-total-number, ascending `n_a` within a block.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// `|z|` without std.
pub(crate) fn cabs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Probabilities in `[-NEGATIVE_ZERO_CLAMP, 0)` are treated as float noise and clamped to zero.
pub const NEGATIVE_ZERO_CLAMP: f64 = 1e-15;
/// Allowed excess of the probability sum above one.
pub const NORMALIZATION_SLACK: f64 = 1e-12;
/// Entrywise Hermiticity tolerance for states.
pub const HERMITIAN_TOL: f64 = 1e-14;

/// A validated, truncated photon-number distribution `p(0..=n_max)`.
///
/// `tail_bound` is a declared upper bound on the mass beyond `n_max`. A zero
/// tail bound means the distribution is complete: `p(n) = 0` for `n > n_max`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhotonNumberDistribution {
    probs: Vec<f64>,
    tail_bound: f64,
}

impl PhotonNumberDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// True when no mass is declared beyond the cutoff.
    pub fn is_complete(&self) -> bool {
        self.tail_bound == 0.0
    }

    /// `p(n)`, zero beyond the cutoff.
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Zero-pads the distribution to a larger cutoff. Leaves it unchanged if
    /// `n_max` is already at least `n`.
    pub fn padded_to(&self, n: usize) -> Self {
        let mut probs = self.probs.clone();
        if probs.len() < n + 1 {
            probs.resize(n + 1, 0.0);
        }
        Self { probs, tail_bound: self.tail_bound }
    }
}

/// Validates raw probabilities into a [`PhotonNumberDistribution`].
///
/// Accepts sums in `[1 - tail_bound - 1e-12, 1 + 1e-12]`. A single-entry input
/// is padded with `p(1) = 0` so that `n_max >= 1`.
pub fn validate_pnd(raw_probs: &[f64], tail_bound: f64) -> Result<PhotonNumberDistribution> {
    if raw_probs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !tail_bound.is_finite() || tail_bound < 0.0 {
        return Err(Error::InvalidTailBound(tail_bound));
    }
    let mut probs = Vec::with_capacity(raw_probs.len().max(2));
    for (index, &value) in raw_probs.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFiniteProbability { index });
        }
        if value < -NEGATIVE_ZERO_CLAMP {
            return Err(Error::NegativeProbability { index, value });
        }
        probs.push(value.max(0.0));
    }
    if probs.len() == 1 {
        probs.push(0.0);
    }
    let sum: f64 = probs.iter().sum();
    let lower = 1.0 - tail_bound - NORMALIZATION_SLACK;
    let upper = 1.0 + NORMALIZATION_SLACK;
    if !(lower..=upper).contains(&sum) {
        return Err(Error::NormalizationError { sum, lower, upper });
    }
    Ok(PhotonNumberDistribution { probs, tail_bound })
}

/// A product-basis label `|n_a, n_b>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TwoModeIndex {
    pub n_a: usize,
    pub n_b: usize,
}

impl TwoModeIndex {
    pub const fn new(n_a: usize, n_b: usize) -> Self {
        Self { n_a, n_b }
    }

    pub const fn total(&self) -> usize {
        self.n_a + self.n_b
    }
}

/// Which finite set of product states a basis spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// `n_a + n_b <= N`.
    TotalNumber(usize),
    /// `n_a <= N` and `n_b <= N`.
    PerMode(usize),
}

impl Truncation {
    pub fn cutoff(&self) -> usize {
        match *self {
            Truncation::TotalNumber(n) | Truncation::PerMode(n) => n,
        }
    }

    pub fn contains(&self, idx: TwoModeIndex) -> bool {
        match *self {
            Truncation::TotalNumber(n) => idx.total() <= n,
            Truncation::PerMode(n) => idx.n_a <= n && idx.n_b <= n,
        }
    }
}

/// Ordered product basis with O(1) reverse lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeBasis {
    truncation: Truncation,
    indices: Vec<TwoModeIndex>,
    // (n_a, n_b) -> position, over the (N+1)^2 bounding box
    lookup: Vec<Option<usize>>,
}

impl TwoModeBasis {
    pub fn new(truncation: Truncation) -> Self {
        let n = truncation.cutoff();
        let max_total = match truncation {
            Truncation::TotalNumber(_) => n,
            Truncation::PerMode(_) => 2 * n,
        };
        let mut indices = Vec::new();
        for total in 0..=max_total {
            let lo = total.saturating_sub(n);
            let hi = total.min(n);
            for n_a in lo..=hi {
                indices.push(TwoModeIndex::new(n_a, total - n_a));
            }
        }
        let mut lookup = vec![None; (n + 1) * (n + 1)];
        for (pos, idx) in indices.iter().enumerate() {
            lookup[idx.n_a * (n + 1) + idx.n_b] = Some(pos);
        }
        Self { truncation, indices, lookup }
    }

    pub fn total_number(n_tot: usize) -> Self {
        Self::new(Truncation::TotalNumber(n_tot))
    }

    pub fn per_mode(n: usize) -> Self {
        Self::new(Truncation::PerMode(n))
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn cutoff(&self) -> usize {
        self.truncation.cutoff()
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[TwoModeIndex] {
        &self.indices
    }

    pub fn index(&self, pos: usize) -> TwoModeIndex {
        self.indices[pos]
    }

    pub fn position(&self, idx: TwoModeIndex) -> Option<usize> {
        let n = self.cutoff();
        if idx.n_a > n || idx.n_b > n {
            return None;
        }
        self.lookup[idx.n_a * (n + 1) + idx.n_b]
    }

    /// Positions of the states with total photon number `total`, contiguous by construction.
    pub fn block_range(&self, total: usize) -> core::ops::Range<usize> {
        let start = self.indices.partition_point(|i| i.total() < total);
        let end = self.indices.partition_point(|i| i.total() <= total);
        start..end
    }
}

/// The total-number-truncated basis `{(n_a, n_b) : n_a + n_b <= n_tot}`, in
/// block-by-total order with ascending `n_a` inside each block.
pub fn index_map(n_tot: usize) -> Vec<TwoModeIndex> {
    TwoModeBasis::total_number(n_tot).indices
}

/// A dense Hermitian operator on a truncated two-mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    basis: TwoModeBasis,
    matrix: DMatrix<Complex64>,
}

impl TwoModeState {
    /// Wraps a matrix, checking shape and Hermiticity.
    pub fn new(basis: TwoModeBasis, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != basis.dim() || matrix.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: matrix.nrows() });
        }
        check_hermitian(&matrix, HERMITIAN_TOL)?;
        Ok(Self { basis, matrix })
    }

    pub(crate) fn from_parts(basis: TwoModeBasis, matrix: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dim());
        Self { basis, matrix }
    }

    pub fn zeros(basis: TwoModeBasis) -> Self {
        let d = basis.dim();
        Self { basis, matrix: DMatrix::zeros(d, d) }
    }

    pub fn basis(&self) -> &TwoModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `N_tot` (or the per-mode cutoff for box-shaped operators).
    pub fn cutoff(&self) -> usize {
        self.basis.cutoff()
    }

    /// `<row|rho|col>`, zero for labels outside the basis.
    pub fn element(&self, row: TwoModeIndex, col: TwoModeIndex) -> Complex64 {
        match (self.basis.position(row), self.basis.position(col)) {
            (Some(r), Some(c)) => self.matrix[(r, c)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(rho^2)`; for Hermitian `rho` this is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Tr(rho (n_a + n_b))`.
    pub fn mean_total_number(&self) -> f64 {
        self.basis.indices().iter().enumerate().map(|(i, idx)| idx.total() as f64 * self.matrix[(i, i)].re).sum()
    }

    /// Largest `|M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix).0
    }

    /// Re-expresses the operator on another basis: shared labels keep their
    /// entries, new labels get zero rows and columns, dropped labels are discarded.
    pub fn embedded_in(&self, basis: &TwoModeBasis) -> Self {
        let mut out = Self::zeros(basis.clone());
        let map: Vec<Option<usize>> = self.basis.indices().iter().map(|&idx| basis.position(idx)).collect();
        for (i, ti) in map.iter().enumerate() {
            let Some(ti) = *ti else { continue };
            for (j, tj) in map.iter().enumerate() {
                if let Some(tj) = *tj {
                    out.matrix[(ti, tj)] = self.matrix[(i, j)];
                }
            }
        }
        out
    }

    /// Full spectrum of the Hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// Largest entrywise difference to another state, after embedding both into the
    /// per-mode box that contains them.
    pub fn max_abs_diff(&self, other: &TwoModeState) -> f64 {
        let n = self.cutoff().max(other.cutoff());
        let boxed = TwoModeBasis::per_mode(n);
        let a = self.embedded_in(&boxed);
        let b = other.embedded_in(&boxed);
        a.matrix.iter().zip(b.matrix.iter()).map(|(x, y)| cabs(x - y)).fold(0.0, f64::max)
    }
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> (f64, usize, usize) {
    let mut worst = (0.0, 0, 0);
    for r in 0..m.nrows() {
        for c in r..m.ncols() {
            let d = cabs(m[(r, c)] - m[(c, r)].conj());
            if d > worst.0 {
                worst = (d, r, c);
            }
        }
    }
    worst
}

pub(crate) fn check_hermitian(m: &DMatrix<Complex64>, tol: f64) -> Result<()> {
    let (deviation, row, col) = hermiticity_defect(m);
    if deviation > tol {
        return Err(Error::NonHermitian { row, col, deviation });
    }
    Ok(())
}

/// Photon-number distribution of mode a: `p_a(k) = sum_{n_b} <k,n_b|rho|k,n_b>`.
pub fn marginal_pnd_a(state: &TwoModeState) -> Result<PhotonNumberDistribution> {
    check_hermitian(&state.matrix, HERMITIAN_TOL)?;
    let n = state.cutoff();
    let mut probs = vec![0.0; n + 1];
    for (i, idx) in state.basis.indices().iter().enumerate() {
        let value = state.matrix[(i, i)].re;
        if value < -NEGATIVE_ZERO_CLAMP {
            return Err(Error::NegativeDiagonal { index: i, value });
        }
        probs[idx.n_a] += value.max(0.0);
    }
    let sum: f64 = probs.iter().sum();
    validate_pnd(&probs, (1.0 - sum).max(0.0))
}
