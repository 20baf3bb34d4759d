//! Partial transposition and NPT detection for the beam-splitter output.
//!
//! Partial transposes live on the per-mode box `n_a, n_b <= N` (see [`crate::fock`]).
//! The transposed output state conserves `n_a - n_b`, so [`pt_closed_form`] keeps it
//! as one real symmetric block per difference.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::fock::{
    check_hermitian, Complex64, PhotonNumberDistribution, TwoModeBasis, TwoModeIndex, TwoModeState, HERMITIAN_TOL,
};
use crate::linalg::{max_abs_entry, symmetric_eigenvalues};
use crate::moments::{
    check_order, check_tolerance, mandel_statistics, moment_sequence, negative_beyond_tol, HankelKind, MomentSequence,
};
use crate::special::{ln_factorials, LN_2};

/// `<a,b|PT(rho)|a',b'> = <a,b'|rho|a',b>`, on the per-mode box of the input's cutoff.
/// Labels whose source lies outside the input basis get zero.
pub fn partial_transpose(state: &TwoModeState) -> Result<TwoModeState> {
    check_hermitian(state.matrix(), HERMITIAN_TOL)?;
    let basis = TwoModeBasis::per_mode(state.cutoff());
    let idx = basis.indices();
    let matrix = DMatrix::from_fn(basis.dim(), basis.dim(), |r, c| {
        let (row, col) = (idx[r], idx[c]);
        state.element(TwoModeIndex::new(row.n_a, col.n_b), TwoModeIndex::new(col.n_a, row.n_b))
    });
    Ok(TwoModeState::from_parts(basis, matrix))
}

/// Closed-form element
/// `<a',b'|PT|a,b> = delta_{a'+b, a+b'} q_{a+b'} / (2^{a+b'} sqrt(a'! b'! a! b!))`.
struct PtElements {
    ms: MomentSequence,
    lf: Vec<f64>,
}

impl PtElements {
    fn new(pnd: &PhotonNumberDistribution, max_label: usize) -> Self {
        Self { ms: moment_sequence(pnd), lf: ln_factorials(max_label) }
    }

    fn get(&self, row: TwoModeIndex, col: TwoModeIndex) -> f64 {
        if row.n_a + col.n_b != col.n_a + row.n_b {
            return 0.0;
        }
        let k = col.n_a + row.n_b;
        let Some(lq) = self.ms.ln_q(k) else { return 0.0 };
        let lf = &self.lf;
        let ln_den = 0.5 * (lf[row.n_a] + lf[row.n_b] + lf[col.n_a] + lf[col.n_b]);
        libm::exp(lq - k as f64 * LN_2 - ln_den)
    }
}

/// One fixed-`n_a - n_b` block of the transposed output.
#[derive(Debug, Clone, PartialEq)]
pub struct PtBlock {
    pub difference: isize,
    pub indices: Vec<TwoModeIndex>,
    pub matrix: DMatrix<f64>,
}

/// Transposed output state, block-diagonal in `n_a - n_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTransposeBlocks {
    cutoff: usize,
    blocks: Vec<PtBlock>,
}

impl PartialTransposeBlocks {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn blocks(&self) -> &[PtBlock] {
        &self.blocks
    }

    /// Ascending spectrum over all blocks.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.blocks.iter().flat_map(|b| symmetric_eigenvalues(&b.matrix)).collect();
        all.sort_by(|a, b| a.total_cmp(b));
        all
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.iter().map(|b| max_abs_entry(&b.matrix)).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.matrix.trace()).sum()
    }

    /// Dense operator on the per-mode box.
    pub fn to_dense(&self) -> TwoModeState {
        let basis = TwoModeBasis::per_mode(self.cutoff);
        let mut m = DMatrix::zeros(basis.dim(), basis.dim());
        for block in &self.blocks {
            let pos: Vec<usize> = block.indices.iter().map(|&i| basis.position(i).expect("in box")).collect();
            for (i, &r) in pos.iter().enumerate() {
                for (j, &c) in pos.iter().enumerate() {
                    m[(r, c)] = Complex64::new(block.matrix[(i, j)], 0.0);
                }
            }
        }
        TwoModeState::from_parts(basis, m)
    }
}

/// Partial transpose of the beam-splitter output, straight from the photon statistics.
pub fn pt_closed_form(pnd: &PhotonNumberDistribution) -> PartialTransposeBlocks {
    let n = pnd.n_max();
    let elements = PtElements::new(pnd, n);
    let blocks = (-(n as isize)..=n as isize)
        .map(|d| {
            let indices: Vec<TwoModeIndex> = (0..=n)
                .filter_map(|n_a| {
                    let n_b = n_a as isize - d;
                    (0..=n as isize).contains(&n_b).then(|| TwoModeIndex::new(n_a, n_b as usize))
                })
                .collect();
            let k = indices.len();
            let matrix = DMatrix::from_fn(k, k, |i, j| elements.get(indices[i], indices[j]));
            PtBlock { difference: d, indices, matrix }
        })
        .collect();
    PartialTransposeBlocks { cutoff: n, blocks }
}

/// The principal submatrices of the transposed output that reproduce the Hankel
/// hierarchy: rows `|n, n>` for `H`, rows `|n, n+1>` for `H~`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubmatrixKind {
    H,
    HTilde,
}

impl SubmatrixKind {
    pub const BOTH: [SubmatrixKind; 2] = [SubmatrixKind::H, SubmatrixKind::HTilde];

    pub fn hankel(&self) -> HankelKind {
        match self {
            SubmatrixKind::H => HankelKind::L,
            SubmatrixKind::HTilde => HankelKind::LTilde,
        }
    }

    /// Row labels `|n, n + shift>` for `n = 0..=order`.
    pub fn labels(&self, order: usize) -> Vec<TwoModeIndex> {
        let shift = self.hankel().shift();
        (0..=order).map(|n| TwoModeIndex::new(n, n + shift)).collect()
    }

    fn method(&self) -> NptMethod {
        match self {
            SubmatrixKind::H => NptMethod::SubmatrixH,
            SubmatrixKind::HTilde => NptMethod::SubmatrixHTilde,
        }
    }
}

/// `H(N)` or `H~(N)`, read off the closed-form transposed output.
pub fn principal_submatrix(pnd: &PhotonNumberDistribution, kind: SubmatrixKind, order: usize) -> Result<DMatrix<f64>> {
    let elements = PtElements::new(pnd, order + 1);
    check_order(&elements.ms, kind.hankel(), order)?;
    let labels = kind.labels(order);
    Ok(DMatrix::from_fn(order + 1, order + 1, |i, j| elements.get(labels[i], labels[j])))
}

/// Gram matrix of `PT(rho_out)` on `{1, a b}`:
/// `[[1, <n>/2], [<n>/2, (<n^2> - <n>)/4]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WitnessMatrix2x2 {
    pub entries: [[f64; 2]; 2],
    pub det: f64,
}

impl WitnessMatrix2x2 {
    pub fn min_eigenvalue(&self) -> f64 {
        let [[a, b], [_, d]] = self.entries;
        let half_trace = 0.5 * (a + d);
        let radius = libm::hypot(0.5 * (a - d), b);
        half_trace - radius
    }
}

/// Antibunching witness. Fires when the determinant is below `-tol`, i.e. when
/// `<dn^2> - <n> < -4 tol`.
pub fn witness_2x2(pnd: &PhotonNumberDistribution, tol: f64) -> (WitnessMatrix2x2, bool) {
    let stats = mandel_statistics(pnd);
    let off = 0.5 * stats.mean;
    let corner = 0.25 * (stats.second_moment - stats.mean);
    let entries = [[1.0, off], [off, corner]];
    let det = corner - off * off;
    (WitnessMatrix2x2 { entries, det }, det < -tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NptVerdict {
    Npt,
    NoDetection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum NptMethod {
    #[cfg_attr(feature = "serde", serde(rename = "witness_2x2"))]
    Witness2x2,
    #[cfg_attr(feature = "serde", serde(rename = "submatrix_H"))]
    SubmatrixH,
    #[cfg_attr(feature = "serde", serde(rename = "submatrix_H_tilde"))]
    SubmatrixHTilde,
    #[cfg_attr(feature = "serde", serde(rename = "full_spectrum"))]
    FullSpectrum,
}

impl NptMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NptMethod::Witness2x2 => "witness_2x2",
            NptMethod::SubmatrixH => "submatrix_H",
            NptMethod::SubmatrixHTilde => "submatrix_H_tilde",
            NptMethod::FullSpectrum => "full_spectrum",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NptCertificate {
    pub verdict: NptVerdict,
    /// Cheapest detector that fired: witness, then `H(N)`, `H~(N)` by ascending `N`,
    /// then the full spectrum.
    pub method: Option<NptMethod>,
    pub detecting_order: Option<usize>,
    pub min_pt_eigenvalue: f64,
    pub log_negativity: f64,
    pub witness_det: f64,
    pub max_order_tested: usize,
}

impl NptCertificate {
    pub fn is_npt(&self) -> bool {
        self.verdict == NptVerdict::Npt
    }
}

/// `log2` of the trace norm of the trace-normalised spectrum, `log2(1 + 2 N / Tr)`
/// with `N` the summed magnitude of the negative eigenvalues.
pub fn log_negativity(eigenvalues: &[f64]) -> f64 {
    let trace: f64 = eigenvalues.iter().sum();
    let negative: f64 = eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    if trace <= 0.0 || negative == 0.0 {
        return 0.0;
    }
    libm::log1p(2.0 * negative / trace) / LN_2
}

/// Runs every detector and settles the verdict on the full transposed spectrum.
pub fn npt_certificate(pnd: &PhotonNumberDistribution, max_order: usize, tol: f64) -> Result<NptCertificate> {
    check_tolerance(tol)?;
    let (witness, witness_fires) = witness_2x2(pnd, tol);

    let mut first: Option<(NptMethod, Option<usize>)> = witness_fires.then_some((NptMethod::Witness2x2, None));
    let mut max_order_tested = 0;
    for order in 0..=max_order {
        let mut tested = false;
        for kind in SubmatrixKind::BOTH {
            let Ok(h) = principal_submatrix(pnd, kind, order) else { continue };
            tested = true;
            if first.is_none() && negative_beyond_tol(&h, tol).1 {
                first = Some((kind.method(), Some(order)));
            }
        }
        if !tested {
            break;
        }
        max_order_tested = order;
    }

    let pt = pt_closed_form(pnd);
    let spectrum = pt.eigenvalues();
    let min_pt_eigenvalue = spectrum.first().copied().unwrap_or(0.0);
    let is_npt = min_pt_eigenvalue < -tol * pt.max_abs_entry().max(1.0);
    let (verdict, method, detecting_order) = if is_npt {
        let (m, o) = first.unwrap_or((NptMethod::FullSpectrum, None));
        (NptVerdict::Npt, Some(m), o)
    } else {
        (NptVerdict::NoDetection, None, None)
    };
    Ok(NptCertificate {
        verdict,
        method,
        detecting_order,
        min_pt_eigenvalue,
        log_negativity: log_negativity(&spectrum),
        witness_det: witness.det,
        max_order_tested,
    })
}
