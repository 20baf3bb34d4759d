//! Phase-invariant classicality of photon statistics.
//!
//! A distribution is classical in the phase-invariant sense iff the Hankel
//! matrices `L(N) = [q_{n+m}]` and `L~(N) = [q_{n+m+1}]`, `q_n = n! p(n)`, are
//! positive semidefinite for every `N`. Raw `q_n` overflow doubles near
//! `n = 170`, so every test here runs on the congruent matrices
//! `D L D` with positive diagonal `D`; Sylvester's law of inertia keeps the
//! verdict unchanged and all scaled entries are bounded by one.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::PhotonNumberDistribution;
use crate::linalg::{max_abs_entry, min_eigenvalue};
use crate::special::{ln_factorial, LN_2};

/// Default relative tolerance for PSD tests.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Upper limit on the default Hankel order.
pub const MAX_DEFAULT_ORDER: usize = 20;

/// `q_n = n! p(n)` stored as logarithms; `None` marks an exact zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    log_q: Vec<Option<f64>>,
    complete: bool,
}

impl MomentSequence {
    pub fn n_max(&self) -> usize {
        self.log_q.len() - 1
    }

    /// Whether `q_n` is known: inside the cutoff, or anywhere for a complete distribution.
    pub fn is_known(&self, n: usize) -> bool {
        n < self.log_q.len() || self.complete
    }

    /// `ln q_n`, or `None` when `q_n = 0` (including beyond the cutoff of a complete PND).
    pub fn ln_q(&self, n: usize) -> Option<f64> {
        self.log_q.get(n).copied().flatten()
    }

    pub fn q(&self, n: usize) -> f64 {
        self.ln_q(n).map_or(0.0, libm::exp)
    }
}

pub fn moment_sequence(pnd: &PhotonNumberDistribution) -> MomentSequence {
    let log_q =
        pnd.probs().iter().enumerate().map(|(n, &p)| (p > 0.0).then(|| libm::log(p) + ln_factorial(n))).collect();
    MomentSequence { log_q, complete: pnd.is_complete() }
}

/// Mean, second moment, and the antibunching quantity `<n^2> - <n>^2 - <n>`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MandelStatistics {
    pub mean: f64,
    pub second_moment: f64,
    pub antibunching_value: f64,
    /// `antibunching_value / mean`; undefined for the vacuum.
    pub mandel_q: Option<f64>,
}

impl MandelStatistics {
    pub fn is_antibunched(&self, tol: f64) -> bool {
        self.antibunching_value < -tol
    }
}

pub fn mandel_statistics(pnd: &PhotonNumberDistribution) -> MandelStatistics {
    let (mean, second_moment) = pnd.probs().iter().enumerate().fold((0.0, 0.0), |(m1, m2), (n, &p)| {
        let n = n as f64;
        (m1 + n * p, m2 + n * n * p)
    });
    let antibunching_value = second_moment - mean * mean - mean;
    let mandel_q = (mean > 0.0).then(|| antibunching_value / mean);
    MandelStatistics { mean, second_moment, antibunching_value, mandel_q }
}

/// The two Hankel families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HankelKind {
    /// `[q_{n+m}]`
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    L,
    /// `[q_{n+m+1}]`
    #[cfg_attr(feature = "serde", serde(rename = "L_tilde"))]
    LTilde,
}

impl HankelKind {
    pub const BOTH: [HankelKind; 2] = [HankelKind::L, HankelKind::LTilde];

    /// Shift of the moment index: 0 for `L`, 1 for `L~`.
    pub fn shift(&self) -> usize {
        match self {
            HankelKind::L => 0,
            HankelKind::LTilde => 1,
        }
    }

    /// Highest moment index entering the order-`order` matrix.
    pub fn highest_moment(&self, order: usize) -> usize {
        2 * order + self.shift()
    }
}

pub(crate) fn check_order(ms: &MomentSequence, kind: HankelKind, order: usize) -> Result<()> {
    let needed = kind.highest_moment(order);
    if ms.is_known(needed) {
        Ok(())
    } else {
        Err(Error::OrderTooLarge { kind, order, needed, n_max: ms.n_max() })
    }
}

/// `ln` of the positive diagonal congruence factor for row `n`:
/// `2^n n!` for `L`, `2^{n+1/2} sqrt((n+1)! n!)` for `L~`.
fn ln_scale(kind: HankelKind, n: usize) -> f64 {
    match kind {
        HankelKind::L => n as f64 * LN_2 + ln_factorial(n),
        HankelKind::LTilde => (n as f64 + 0.5) * LN_2 + 0.5 * (ln_factorial(n + 1) + ln_factorial(n)),
    }
}

/// The congruence-scaled Hankel matrix of size `order + 1`.
///
/// Kind `L`: `q_{n+m} / (2^{n+m} n! m!)`. Kind `L~`:
/// `q_{n+m+1} / (2^{n+m+1} sqrt((n+1)! n! (m+1)! m!))`.
pub fn hankel_scaled(ms: &MomentSequence, kind: HankelKind, order: usize) -> Result<DMatrix<f64>> {
    check_order(ms, kind, order)?;
    let scales: Vec<f64> = (0..=order).map(|n| ln_scale(kind, n)).collect();
    Ok(DMatrix::from_fn(order + 1, order + 1, |n, m| {
        ms.ln_q(n + m + kind.shift()).map_or(0.0, |lq| libm::exp(lq - scales[n] - scales[m]))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClassicalityVerdict {
    ClassicalUpToOrder,
    Nonclassical,
}

/// Outcome of a Hankel-hierarchy scan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassicalityCertificate {
    pub verdict: ClassicalityVerdict,
    pub detecting_kind: Option<HankelKind>,
    pub detecting_order: Option<usize>,
    /// Minimum eigenvalue of the detecting scaled matrix, or of all tested ones
    /// when nothing was detected.
    pub min_eigenvalue: f64,
    pub max_order_tested: usize,
}

impl ClassicalityCertificate {
    pub fn is_nonclassical(&self) -> bool {
        self.verdict == ClassicalityVerdict::Nonclassical
    }
}

/// Default order policy. A complete distribution has every moment available, so it
/// is scanned up to `n_max` (by which point finite support always shows); a
/// truncated one only up to `(n_max - 1) / 2`, where the L~ matrix still uses
/// stored moments. Both are clamped to `[1, 20]`.
pub fn default_max_order(pnd: &PhotonNumberDistribution) -> usize {
    let raw = if pnd.is_complete() { pnd.n_max() } else { (pnd.n_max() - 1) / 2 };
    raw.clamp(1, MAX_DEFAULT_ORDER)
}

/// Smallest eigenvalue of a matrix measured against `-tol * max(max|entry|, 1)`.
pub(crate) fn negative_beyond_tol(m: &DMatrix<f64>, tol: f64) -> (f64, bool) {
    let min = min_eigenvalue(m);
    (min, min < -tol * max_abs_entry(m).max(1.0))
}

pub(crate) fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "tol".into(), value: tol, reason: "must be > 0" })
    }
}

/// Scans `L(N)`, `L~(N)` for `N = 0..=max_order` (as far as moments allow) and
/// reports the first non-PSD matrix. Smaller `N` wins; `L` before `L~` at equal `N`.
pub fn classicality_check(
    pnd: &PhotonNumberDistribution,
    max_order: usize,
    tol: f64,
) -> Result<ClassicalityCertificate> {
    if max_order < 1 {
        return Err(Error::InvalidParameter {
            name: "max_order".into(),
            value: max_order as f64,
            reason: "must be >= 1",
        });
    }
    check_tolerance(tol)?;
    let ms = moment_sequence(pnd);
    check_order(&ms, HankelKind::L, 1)?;

    let mut overall_min = f64::INFINITY;
    let mut max_order_tested = 0;
    for order in 0..=max_order {
        let mut tested = false;
        for kind in HankelKind::BOTH {
            let Ok(h) = hankel_scaled(&ms, kind, order) else { continue };
            tested = true;
            let (min, negative) = negative_beyond_tol(&h, tol);
            overall_min = overall_min.min(min);
            if negative {
                return Ok(ClassicalityCertificate {
                    verdict: ClassicalityVerdict::Nonclassical,
                    detecting_kind: Some(kind),
                    detecting_order: Some(order),
                    min_eigenvalue: min,
                    max_order_tested: order,
                });
            }
        }
        if !tested {
            break;
        }
        max_order_tested = order;
    }
    Ok(ClassicalityCertificate {
        verdict: ClassicalityVerdict::ClassicalUpToOrder,
        detecting_kind: None,
        detecting_order: None,
        min_eigenvalue: overall_min,
        max_order_tested,
    })
}
