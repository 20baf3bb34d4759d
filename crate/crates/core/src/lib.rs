//! Certifies NPT entanglement at the output of a 50:50 beam splitter fed with a
//! phase-invariant single-mode state and vacuum.
//!
//! The only input is a photon-number distribution `p(n)`. From it the crate builds
//!
//! * the moment sequence `q_n = n! p(n)` and the Hankel hierarchy `L(N)`, `L~(N)`
//!   deciding phase-invariant classicality ([`moments`]);
//! * the two-mode output state, by closed form and by an exponentiated unitary
//!   ([`beamsplitter`]);
//! * its partial transpose and three NPT detectors: the antibunching witness, the
//!   principal submatrices `H(N)`, `H~(N)` congruent to the Hankel matrices, and the
//!   full spectrum ([`npt`]).
//!
//! Nonclassical statistics always show up as a negative partial-transpose eigenvalue;
//! the certificates carry the detecting order so that chain can be checked.
//!
//! ```
//! use photon_npt_core::{npt, states, DEFAULT_TOL};
//!
//! let single_photon = states::make_fock(1);
//! let cert = npt::npt_certificate(&single_photon, 1, DEFAULT_TOL).unwrap();
//! assert!(cert.is_npt());
//! assert!((cert.log_negativity - 1.0).abs() < 1e-12);
//! ```

#![no_std]

extern crate alloc;

pub mod beamsplitter;
mod error;
pub mod fock;
pub mod linalg;
pub mod moments;
pub mod npt;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use fock::{
    index_map, marginal_pnd_a, validate_pnd, PhotonNumberDistribution, TwoModeBasis, TwoModeIndex, TwoModeState,
};
pub use moments::{classicality_check, default_max_order, ClassicalityCertificate, HankelKind, DEFAULT_TOL};
pub use npt::{npt_certificate, NptCertificate, NptMethod, NptVerdict};
pub use states::{Family, FamilySpec};
