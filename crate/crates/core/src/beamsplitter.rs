//! 50:50 beam splitter acting on `rho_a (x) |0><0|`.
//!
//! Two independent constructions of the output state:
//!
//! * [`output_closed_form`] evaluates
//!   `<a',b'|rho_out|a,b> = delta_{a'+b', a+b} q_{a+b} / (2^{a+b} sqrt(a'! b'! a! b!))`
//!   in log domain.
//! * [`output_numeric`] builds the unitary `U = exp(theta (a^dag b - a b^dag))` on each
//!   total-number block, fixes the sign of `theta` by demanding
//!   `U a U^-1 = (a + b)/sqrt2` and `U b U^-1 = (b - a)/sqrt2`, and conjugates the input.
//!
//! The generator conserves total photon number, so each block exponential is exact
//! on the truncated space.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{cabs, Complex64, PhotonNumberDistribution, TwoModeBasis, TwoModeIndex, TwoModeState};
use crate::linalg::expm_antisymmetric;
use crate::moments::moment_sequence;
use crate::special::{ln_factorials, LN_2};

/// Residual above which a candidate unitary is rejected.
pub const HEISENBERG_TOL: f64 = 1e-8;

/// Amplitudes of `U|n,0> = sum_r amps[r] |r, n-r>`, `amps[r] = sqrt(C(n,r)) / 2^{n/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitAmplitudes {
    pub n: usize,
    pub amps: Vec<f64>,
}

pub fn split_amplitudes(n: usize) -> SplitAmplitudes {
    let lf = ln_factorials(n);
    let amps = (0..=n).map(|r| libm::exp(0.5 * (lf[n] - lf[r] - lf[n - r]) - 0.5 * n as f64 * LN_2)).collect();
    SplitAmplitudes { n, amps }
}

/// Output state from the closed-form matrix elements, on the total-number
/// triangle with `N_tot = n_max`. Entries between different total-number blocks
/// are exactly zero.
pub fn output_closed_form(pnd: &PhotonNumberDistribution) -> TwoModeState {
    let n_tot = pnd.n_max();
    let basis = TwoModeBasis::total_number(n_tot);
    let ms = moment_sequence(pnd);
    let lf = ln_factorials(n_tot);
    let mut matrix = DMatrix::zeros(basis.dim(), basis.dim());
    for total in 0..=n_tot {
        let Some(lq) = ms.ln_q(total) else { continue };
        let prefactor = lq - total as f64 * LN_2;
        let range = basis.block_range(total);
        for r in range.clone() {
            let row = basis.index(r);
            for c in range.clone() {
                let col = basis.index(c);
                let ln_den = 0.5 * (lf[row.n_a] + lf[row.n_b] + lf[col.n_a] + lf[col.n_b]);
                matrix[(r, c)] = Complex64::new(libm::exp(prefactor - ln_den), 0.0);
            }
        }
    }
    TwoModeState::from_parts(basis, matrix)
}

/// `a` and `b` restricted to map block `total` onto block `total - 1`.
fn lowering_blocks(total: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let mut a = DMatrix::zeros(total, total + 1);
    let mut b = DMatrix::zeros(total, total + 1);
    // column k is |k, total-k>
    for k in 0..=total {
        if k > 0 {
            a[(k - 1, k)] = Complex64::new(libm::sqrt(k as f64), 0.0);
        }
        if k < total {
            b[(k, k)] = Complex64::new(libm::sqrt((total - k) as f64), 0.0);
        }
    }
    (a, b)
}

/// `a^dag b - a b^dag` on block `total`.
fn generator_block(total: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(total + 1, total + 1);
    for n_a in 0..total {
        let hop = libm::sqrt(((n_a + 1) * (total - n_a)) as f64);
        k[(n_a + 1, n_a)] += hop;
        k[(n_a, n_a + 1)] -= hop;
    }
    k
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|&z| cabs(z)).fold(0.0, f64::max)
}

/// Block-diagonal beam-splitter unitary on the total-number triangle.
#[derive(Debug, Clone)]
pub struct BeamSplitterUnitary {
    n_tot: usize,
    theta: f64,
    blocks: Vec<DMatrix<Complex64>>,
}

impl BeamSplitterUnitary {
    fn with_angle(n_tot: usize, theta: f64) -> Self {
        let blocks = (0..=n_tot).map(|t| expm_antisymmetric(&generator_block(t), theta)).collect();
        Self { n_tot, theta, blocks }
    }

    /// Builds the unitary, trying `theta = +pi/4` and `-pi/4` and keeping the one
    /// whose Heisenberg action matches the 50:50 rotation.
    pub fn new(n_tot: usize) -> Result<Self> {
        let mut best = f64::INFINITY;
        for theta in [FRAC_PI_4, -FRAC_PI_4] {
            let u = Self::with_angle(n_tot, theta);
            let residual = u.heisenberg_residual();
            if residual <= HEISENBERG_TOL {
                return Ok(u);
            }
            best = best.min(residual);
        }
        Err(Error::HeisenbergCheckFailed { residual: best })
    }

    pub fn n_tot(&self) -> usize {
        self.n_tot
    }

    /// Rotation angle of the generator `a^dag b - a b^dag`.
    pub fn angle(&self) -> f64 {
        self.theta
    }

    pub fn block(&self, total: usize) -> &DMatrix<Complex64> {
        &self.blocks[total]
    }

    /// Largest entrywise deviation from the four relations
    /// `U a U^-1 = (a+b)/sqrt2`, `U b U^-1 = (b-a)/sqrt2`,
    /// `U^-1 a U = (a-b)/sqrt2`, `U^-1 b U = (b+a)/sqrt2`,
    /// checked on every block (lowering operators are exact under total-number truncation).
    pub fn heisenberg_residual(&self) -> f64 {
        let s = FRAC_1_SQRT_2;
        let mut worst = 0.0f64;
        for total in 1..=self.n_tot {
            let (a, b) = lowering_blocks(total);
            let hi = &self.blocks[total];
            let lo = &self.blocks[total - 1];
            let fwd_a = lo * &a * hi.adjoint() - (&a + &b).scale(s);
            let fwd_b = lo * &b * hi.adjoint() - (&b - &a).scale(s);
            let inv_a = lo.adjoint() * &a * hi - (&a - &b).scale(s);
            let inv_b = lo.adjoint() * &b * hi - (&b + &a).scale(s);
            for m in [fwd_a, fwd_b, inv_a, inv_b] {
                worst = worst.max(max_abs(&m));
            }
        }
        worst
    }

    /// Largest entrywise deviation of `U^dag U` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|u| {
                let n = u.nrows();
                max_abs(&(u.adjoint() * u - DMatrix::<Complex64>::identity(n, n)))
            })
            .fold(0.0, f64::max)
    }

    /// Dense matrix on the total-number triangle.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let basis = TwoModeBasis::total_number(self.n_tot);
        let mut m = DMatrix::zeros(basis.dim(), basis.dim());
        for (total, block) in self.blocks.iter().enumerate() {
            let start = basis.block_range(total).start;
            m.view_mut((start, start), block.shape()).copy_from(block);
        }
        m
    }

    /// `U rho U^dag`, block by block. `state` must live on the same triangle.
    pub fn conjugate(&self, state: &TwoModeState) -> Result<TwoModeState> {
        let basis = TwoModeBasis::total_number(self.n_tot);
        if *state.basis() != basis {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: state.dim() });
        }
        let rho = state.matrix();
        let mut out = DMatrix::zeros(basis.dim(), basis.dim());
        for (t, ut) in self.blocks.iter().enumerate() {
            let rt = basis.block_range(t);
            for (s, us) in self.blocks.iter().enumerate() {
                let rs = basis.block_range(s);
                let sub = rho.view((rt.start, rs.start), (rt.len(), rs.len()));
                if sub.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                    continue;
                }
                let img = ut * sub * us.adjoint();
                out.view_mut((rt.start, rs.start), img.shape()).copy_from(&img);
            }
        }
        Ok(TwoModeState::from_parts(basis, out))
    }
}

/// `rho_a (x) |0><0|` on the triangle with `N_tot = n_max`.
pub fn input_state(pnd: &PhotonNumberDistribution) -> TwoModeState {
    let basis = TwoModeBasis::total_number(pnd.n_max());
    let mut matrix = DMatrix::zeros(basis.dim(), basis.dim());
    for (n, &p) in pnd.probs().iter().enumerate() {
        let pos = basis.position(TwoModeIndex::new(n, 0)).expect("|n,0> lies in the triangle");
        matrix[(pos, pos)] = Complex64::new(p, 0.0);
    }
    TwoModeState::from_parts(basis, matrix)
}

/// Output state through the exponentiated unitary.
pub fn output_numeric(pnd: &PhotonNumberDistribution) -> Result<TwoModeState> {
    let u = BeamSplitterUnitary::new(pnd.n_max())?;
    u.conjugate(&input_state(pnd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::*;

    #[test]
    fn split_amplitude_examples() {
        assert_eq!(split_amplitudes(0).amps, alloc::vec![1.0]);
        let a1 = split_amplitudes(1).amps;
        assert!(a1.iter().all(|x| (x - FRAC_1_SQRT_2).abs() < 1e-15));
        let a2 = split_amplitudes(2).amps;
        assert!((a2[0] - 0.5).abs() < 1e-15 && (a2[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((a2[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn vacuum_maps_to_vacuum() {
        let out = output_closed_form(&make_fock(0));
        let vac = TwoModeIndex::new(0, 0);
        assert_eq!(out.element(vac, vac).re, 1.0);
        assert_eq!(out.trace().re, 1.0);
        let num = output_numeric(&make_fock(0)).unwrap();
        assert!(out.max_abs_diff(&num) < 1e-14);
    }

    #[test]
    fn single_photon_splits_symmetrically() {
        let out = output_closed_form(&make_fock(1));
        let block = [TwoModeIndex::new(0, 1), TwoModeIndex::new(1, 0)];
        for r in block {
            for c in block {
                assert!((out.element(r, c).re - 0.5).abs() < 1e-15);
            }
        }
        assert!((out.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_two_mixture_element() {
        let out = output_closed_form(&make_vacuum_two_mixture(0.25).unwrap());
        let v = out.element(TwoModeIndex::new(2, 0), TwoModeIndex::new(1, 1)).re;
        assert!((v - 0.5 / (4.0 * core::f64::consts::SQRT_2)).abs() < 1e-15);
    }

    #[test]
    fn generator_sign_is_negative_quarter_turn() {
        let u = BeamSplitterUnitary::new(4).unwrap();
        assert_eq!(u.angle(), -FRAC_PI_4);
        assert!(u.unitarity_residual() < 1e-12);
        assert!(u.heisenberg_residual() < 1e-12);
        let wrong = BeamSplitterUnitary::with_angle(4, FRAC_PI_4);
        assert!(wrong.heisenberg_residual() > 0.1);
    }

    #[test]
    fn conjugate_rejects_foreign_basis() {
        let u = BeamSplitterUnitary::new(2).unwrap();
        let state = TwoModeState::zeros(TwoModeBasis::total_number(3));
        assert!(u.conjugate(&state).is_err());
    }
}
