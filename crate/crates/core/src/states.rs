//! Named photon-number distribution families.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{validate_pnd, PhotonNumberDistribution};
use crate::special::ln_binomial;

/// Hard cap on the cutoff of truncated infinite families.
pub const N_MAX_CAP: usize = 4096;
/// Largest accepted tail target for Poisson and thermal families.
pub const MAX_TAIL_TARGET: f64 = 1e-6;

fn invalid(name: &str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name: name.to_string(), value, reason }
}

// Summation rounding allowance folded into declared tail bounds.
fn rounding_allowance(n_max: usize) -> f64 {
    (n_max + 1) as f64 * f64::EPSILON
}

fn check_tail_target(tail_target: f64) -> Result<()> {
    if !(tail_target > 0.0 && tail_target <= MAX_TAIL_TARGET) {
        return Err(invalid("tail_target", tail_target, "must lie in (0, 1e-6]"));
    }
    Ok(())
}

/// Fock state `|m>`.
pub fn make_fock(m: usize) -> PhotonNumberDistribution {
    let mut probs = vec![0.0; m.max(1) + 1];
    probs[m] = 1.0;
    validate_pnd(&probs, 0.0).expect("Fock distribution is valid")
}

/// Coherent-state statistics `e^{-mu} mu^n / n!`, truncated where the
/// term-ratio bound `p(n+1) / (1 - mu/(n+2))` on the remainder drops below `tail_target`.
pub fn make_poisson(mu: f64, tail_target: f64) -> Result<PhotonNumberDistribution> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(invalid("mu", mu, "must be finite and >= 0"));
    }
    check_tail_target(tail_target)?;
    if mu == 0.0 {
        return validate_pnd(&[1.0], 0.0);
    }
    let ln_mu = libm::log(mu);
    let ln_p = |n: usize| -mu + n as f64 * ln_mu - crate::special::ln_factorial(n);
    let remainder_bound = |n: usize| {
        let ratio = mu / (n + 2) as f64;
        if ratio >= 1.0 {
            f64::INFINITY
        } else {
            libm::exp(ln_p(n + 1)) / (1.0 - ratio)
        }
    };
    let n_max = (1..=N_MAX_CAP)
        .find(|&n| remainder_bound(n) < tail_target)
        .ok_or(Error::TailNotReachable { tail_target, cap: N_MAX_CAP })?;
    let probs: Vec<f64> = (0..=n_max).map(|n| libm::exp(ln_p(n))).collect();
    validate_pnd(&probs, remainder_bound(n_max) + rounding_allowance(n_max))
}

/// Thermal (geometric) statistics `nbar^n / (1+nbar)^{n+1}`. The remainder beyond
/// `n_max` is exactly `(nbar/(1+nbar))^{n_max+1}`.
pub fn make_thermal(nbar: f64, tail_target: f64) -> Result<PhotonNumberDistribution> {
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(invalid("nbar", nbar, "must be finite and >= 0"));
    }
    check_tail_target(tail_target)?;
    if nbar == 0.0 {
        return validate_pnd(&[1.0], 0.0);
    }
    let ln_r = libm::log(nbar) - libm::log1p(nbar);
    let remainder = |n: usize| libm::exp((n + 1) as f64 * ln_r);
    let n_max = (1..=N_MAX_CAP)
        .find(|&n| remainder(n) < tail_target)
        .ok_or(Error::TailNotReachable { tail_target, cap: N_MAX_CAP })?;
    let ln_norm = libm::log1p(nbar);
    let probs: Vec<f64> = (0..=n_max).map(|n| libm::exp(n as f64 * ln_r - ln_norm)).collect();
    validate_pnd(&probs, remainder(n_max) + rounding_allowance(n_max))
}

/// Binomial statistics `C(M,n) eta^n (1-eta)^{M-n}`: `M` photons each kept with
/// probability `eta`. Sub-Poissonian for every `eta > 0`.
pub fn make_binomial(m: usize, eta: f64) -> Result<PhotonNumberDistribution> {
    if m < 1 {
        return Err(invalid("M", m as f64, "must be >= 1"));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid("eta", eta, "must lie in [0, 1]"));
    }
    let probs: Vec<f64> = (0..=m)
        .map(|n| {
            if eta == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else if eta == 1.0 {
                if n == m {
                    1.0
                } else {
                    0.0
                }
            } else {
                libm::exp(ln_binomial(m, n) + n as f64 * libm::log(eta) + (m - n) as f64 * libm::log1p(-eta))
            }
        })
        .collect();
    validate_pnd(&probs, 0.0)
}

/// `(1 - lambda)|0><0| + lambda|2><2|`: bunched for `lambda < 1/2`, yet nonclassical
/// for every `lambda > 0`.
pub fn make_vacuum_two_mixture(lambda: f64) -> Result<PhotonNumberDistribution> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid("lambda", lambda, "must lie in [0, 1]"));
    }
    validate_pnd(&[1.0 - lambda, 0.0, lambda], 0.0)
}

/// Pointwise convex combination. The tail bound is the weighted sum of component tails.
pub fn make_mixture(components: &[PhotonNumberDistribution], weights: &[f64]) -> Result<PhotonNumberDistribution> {
    if components.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mismatch = || Error::WeightMismatch { components: components.len(), weights: weights.len() };
    if components.len() != weights.len() {
        return Err(mismatch());
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(mismatch());
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(mismatch());
    }
    let n_max = components.iter().map(PhotonNumberDistribution::n_max).max().unwrap_or(1);
    let mut probs = vec![0.0; n_max + 1];
    let mut tail = 0.0;
    for (c, &w) in components.iter().zip(weights) {
        for (acc, p) in probs.iter_mut().zip(c.probs()) {
            *acc += w * p;
        }
        tail += w * c.tail_bound();
    }
    validate_pnd(&probs, tail)
}

/// The generated families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    Fock,
    Poisson,
    Thermal,
    Binomial,
    VacuumTwoMixture,
    Mixture,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Fock => "fock",
            Family::Poisson => "poisson",
            Family::Thermal => "thermal",
            Family::Binomial => "binomial",
            Family::VacuumTwoMixture => "vacuum_two_mixture",
            Family::Mixture => "mixture",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error for an unrecognised family name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownFamily(pub String);

impl fmt::Display for UnknownFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown family `{}` (expected fock, poisson, thermal, binomial, vacuum-two-mixture, mixture)",
            self.0
        )
    }
}

impl FromStr for Family {
    type Err = UnknownFamily;

    /// Accepts both `vacuum-two-mixture` and `vacuum_two_mixture`.
    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        let normalized = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match normalized.as_str() {
            "fock" => Family::Fock,
            "poisson" | "coherent" => Family::Poisson,
            "thermal" => Family::Thermal,
            "binomial" => Family::Binomial,
            "vacuum_two_mixture" => Family::VacuumTwoMixture,
            "mixture" => Family::Mixture,
            _ => return Err(UnknownFamily(s.to_string())),
        })
    }
}

/// A named family with its parameters.
///
/// Parameter names: `m` (fock), `mu` (poisson), `nbar` (thermal), `M` and `eta`
/// (binomial), `lambda` (vacuum_two_mixture). A mixture takes numbered
/// components: each index `i` has one of `m_i`, `mu_i`, `nbar_i` plus a weight `w_i`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilySpec {
    pub name: Family,
    pub params: BTreeMap<String, f64>,
    pub tail_target: f64,
}

fn integer_param(name: &str, value: f64) -> Result<usize> {
    let rounded = libm::round(value);
    if !(value.is_finite() && value >= 0.0 && (value - rounded).abs() <= 1e-9) {
        return Err(invalid(name, value, "must be a nonnegative integer"));
    }
    Ok(rounded as usize)
}

impl FamilySpec {
    pub fn new(name: Family, tail_target: f64) -> Self {
        Self { name, params: BTreeMap::new(), tail_target }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn get(&self, key: &str) -> Result<f64> {
        self.params.get(key).copied().ok_or_else(|| Error::MissingParameter(key.to_string()))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::UnknownParameter(k.clone())),
            None => Ok(()),
        }
    }

    /// Generates the distribution, validating every parameter eagerly.
    pub fn build(&self) -> Result<PhotonNumberDistribution> {
        match self.name {
            Family::Fock => {
                self.only(&["m"])?;
                Ok(make_fock(integer_param("m", self.get("m")?)?))
            }
            Family::Poisson => {
                self.only(&["mu"])?;
                make_poisson(self.get("mu")?, self.tail_target)
            }
            Family::Thermal => {
                self.only(&["nbar"])?;
                make_thermal(self.get("nbar")?, self.tail_target)
            }
            Family::Binomial => {
                self.only(&["M", "eta"])?;
                make_binomial(integer_param("M", self.get("M")?)?, self.get("eta")?)
            }
            Family::VacuumTwoMixture => {
                self.only(&["lambda"])?;
                make_vacuum_two_mixture(self.get("lambda")?)
            }
            Family::Mixture => self.build_mixture(),
        }
    }

    fn build_mixture(&self) -> Result<PhotonNumberDistribution> {
        // index -> (component kind and its parameter value, weight)
        type Slot<'a> = (Option<(&'a str, f64)>, Option<f64>);
        let mut slots: BTreeMap<usize, Slot> = BTreeMap::new();
        for (key, &value) in &self.params {
            let (prefix, index) = key
                .rsplit_once('_')
                .and_then(|(p, i)| i.parse::<usize>().ok().map(|i| (p, i)))
                .ok_or_else(|| Error::UnknownParameter(key.clone()))?;
            let slot = slots.entry(index).or_default();
            match prefix {
                "w" => slot.1 = Some(value),
                "m" | "mu" | "nbar" => {
                    if slot.0.is_some() {
                        return Err(invalid(key, value, "component already has a parameter"));
                    }
                    slot.0 = Some((prefix, value));
                }
                _ => return Err(Error::UnknownParameter(key.clone())),
            }
        }
        let mut components = Vec::with_capacity(slots.len());
        let mut weights = Vec::with_capacity(slots.len());
        for (index, (component, weight)) in slots {
            let (kind, value) = component
                .ok_or_else(|| Error::MissingParameter(alloc::format!("m_{index}|mu_{index}|nbar_{index}")))?;
            let weight = weight.ok_or_else(|| Error::MissingParameter(alloc::format!("w_{index}")))?;
            let pnd = match kind {
                "m" => make_fock(integer_param(&alloc::format!("m_{index}"), value)?),
                "mu" => make_poisson(value, self.tail_target)?,
                _ => make_thermal(value, self.tail_target)?,
            };
            components.push(pnd);
            weights.push(weight);
        }
        make_mixture(&components, &weights)
    }
}
