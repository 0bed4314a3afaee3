//! Post-selection engine and its brute-force oracle.
//!
//! [`postselect`] computes every amplitude of a post-selected pattern from
//! permanents. [`brute_force_output`] never forms a permanent: it multiplies
//! out the product of input creation operators, substituting
//! `a^dag_{F,k} -> sum_l U^(F)[k][l] b^dag_{F,l}` one photon at a time, and
//! collects coefficients per output Fock configuration. The two routes share
//! nothing beyond the input description, which is what makes the second a
//! useful check on the first.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    enumerate_assignments, enumerate_patterns, InternalAssignment, InternalLabel, OutputPattern,
    PhotonFactor, PhotonicState,
};
use crate::permanent::{check_inputs, transition_amplitude, LabelUnitaries};

/// Photon-number ceiling for the oracle and for exhaustive distributions.
pub const ORACLE_MAX_PHOTONS: usize = 8;

/// Probabilities below this are treated as exact interference zeros.
pub const SUPPRESSION_TOL: f64 = 1e-10;

/// The slice of the output state that matches one photon-number pattern,
/// normalized to the probability of detecting that pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostselectedState {
    pattern: OutputPattern,
    amplitudes: Vec<(InternalAssignment, Complex64)>,
    probability: f64,
}

impl PostselectedState {
    /// Builds a state from raw amplitudes; the probability is their squared norm.
    pub fn from_amplitudes(
        pattern: OutputPattern,
        amplitudes: Vec<(InternalAssignment, Complex64)>,
    ) -> Result<Self> {
        if amplitudes.iter().any(|(a, _)| !a.refines(&pattern)) {
            return Err(Error::AssignmentMismatch);
        }
        let probability = amplitudes.iter().map(|(_, z)| z.norm_sqr()).sum();
        Ok(Self {
            pattern,
            amplitudes,
            probability,
        })
    }

    pub fn pattern(&self) -> &OutputPattern {
        &self.pattern
    }

    pub fn amplitudes(&self) -> &[(InternalAssignment, Complex64)] {
        &self.amplitudes
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn amplitude(&self, a: &InternalAssignment) -> Complex64 {
        self.amplitudes
            .iter()
            .find(|(b, _)| b == a)
            .map(|(_, z)| *z)
            .unwrap_or_default()
    }

    /// Assignments whose weight `|amp|^2` exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<&InternalAssignment> {
        self.amplitudes
            .iter()
            .filter(|(_, z)| z.norm_sqr() > tol)
            .map(|(a, _)| a)
            .collect()
    }

    /// Total weight per number of `eta` photons, indexed by that number.
    pub fn weight_by_eta_count(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.pattern.total() + 1];
        for (a, z) in &self.amplitudes {
            w[a.eta_total()] += z.norm_sqr();
        }
        w
    }
}

/// Amplitudes of every internal assignment of `pattern`.
pub fn postselect(
    factors: &[PhotonFactor],
    unitaries: &LabelUnitaries,
    pattern: &OutputPattern,
    prefactor: Complex64,
) -> Result<PostselectedState> {
    check_inputs(factors, unitaries)?;
    if pattern.modes() != unitaries.modes() {
        return Err(Error::PatternModes {
            expected: unitaries.modes(),
            got: pattern.modes(),
        });
    }
    if pattern.total() != factors.len() {
        return Err(Error::PhotonCountMismatch {
            inputs: factors.len(),
            outputs: pattern.total(),
        });
    }
    let amplitudes = enumerate_assignments(pattern)
        .into_par_iter()
        .map(|a| {
            let amp = transition_amplitude(factors, unitaries, pattern, &a, prefactor)?;
            Ok((a, amp))
        })
        .collect::<Result<Vec<_>>>()?;
    PostselectedState::from_amplitudes(pattern.clone(), amplitudes)
}

pub fn success_probability(s: &PostselectedState) -> f64 {
    s.amplitudes.iter().map(|(_, z)| z.norm_sqr()).sum()
}

/// Best overlap with `(|mu..mu> + e^{i phi} |eta..eta>)/sqrt(2)` over `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzFidelity {
    pub fidelity: f64,
    /// Maximizing `phi` in `(-pi, pi]`.
    pub relative_phase: f64,
}

/// Fidelity of the normalized post-selected state with the closest GHZ
/// state built from the pattern's all-`mu` and all-`eta` assignments.
///
/// For amplitudes `a` (all `mu`) and `b` (all `eta`) of a state with norm
/// `p`, the optimum is `(|a| + |b|)^2 / (2 p)` at `phi = arg(b conj(a))`.
/// A state with zero norm reports fidelity 0 and phase 0.
pub fn ghz_fidelity(s: &PostselectedState) -> Result<GhzFidelity> {
    if s.pattern.total() == 0 {
        return Err(Error::EmptyPattern);
    }
    let norm = s.probability;
    if norm <= 0.0 {
        return Ok(GhzFidelity {
            fidelity: 0.0,
            relative_phase: 0.0,
        });
    }
    let a = s.amplitude(&InternalAssignment::uniform(&s.pattern, InternalLabel::Mu));
    let b = s.amplitude(&InternalAssignment::uniform(&s.pattern, InternalLabel::Eta));
    let fidelity = ((a.norm() + b.norm()).powi(2) / (2.0 * norm)).min(1.0);
    let mut phase = (b * a.conj()).arg();
    if phase <= -PI {
        phase += 2.0 * PI;
    }
    Ok(GhzFidelity {
        fidelity,
        relative_phase: phase,
    })
}

const KEY_BITS: usize = 4;
const KEY_SLOTS: usize = 128 / KEY_BITS;

/// Complete output state by expanding the product of transformed creation
/// operators.
///
/// Keys pack four bits per `(mode, label)` slot, which bounds the network
/// at 16 modes alongside the photon-number guard.
pub fn brute_force_output(
    factors: &[PhotonFactor],
    unitaries: &LabelUnitaries,
    prefactor: Complex64,
) -> Result<PhotonicState> {
    check_inputs(factors, unitaries)?;
    if factors.len() > ORACLE_MAX_PHOTONS {
        return Err(Error::TooManyPhotons {
            photons: factors.len(),
            limit: ORACLE_MAX_PHOTONS,
        });
    }
    let modes = unitaries.modes();
    let slots = 2 * modes;
    if slots > KEY_SLOTS {
        return Err(Error::DimensionMismatch {
            expected: KEY_SLOTS / 2,
            got: modes,
        });
    }

    // coefficient of prod (b^dag_slot)^n_slot, not yet Fock-normalized
    let mut poly: BTreeMap<u128, Complex64> = BTreeMap::new();
    poly.insert(0, prefactor);
    for f in factors {
        let k = f.in_mode() - 1;
        let mut terms = Vec::with_capacity(slots);
        for l in 0..modes {
            for label in InternalLabel::ALL {
                let coef = f.amp(label) * unitaries.get(label)[(k, l)];
                if coef != Complex64::default() {
                    terms.push((PhotonicState::slot(l + 1, label), coef));
                }
            }
        }
        let mut next: BTreeMap<u128, Complex64> = BTreeMap::new();
        for (&key, &c) in &poly {
            for &(slot, coef) in &terms {
                *next.entry(key + (1u128 << (KEY_BITS * slot))).or_default() += c * coef;
            }
        }
        poly = next;
    }

    let amplitudes = poly
        .into_iter()
        .map(|(key, c)| {
            let occ: Vec<u8> = (0..slots)
                .map(|s| ((key >> (KEY_BITS * s)) & 0xf) as u8)
                .collect();
            let fact: f64 = occ
                .iter()
                .map(|&n| (1..=n as u32).map(f64::from).product::<f64>())
                .product();
            (occ, c * fact.sqrt())
        })
        .collect();
    Ok(PhotonicState::new(modes, amplitudes))
}

/// Probability of every spatial pattern, summed over internal labels, in
/// [`enumerate_patterns`] order.
pub fn full_distribution(
    factors: &[PhotonFactor],
    unitaries: &LabelUnitaries,
    prefactor: Complex64,
) -> Result<Vec<(OutputPattern, f64)>> {
    check_inputs(factors, unitaries)?;
    if factors.len() > ORACLE_MAX_PHOTONS {
        return Err(Error::TooManyPhotons {
            photons: factors.len(),
            limit: ORACLE_MAX_PHOTONS,
        });
    }
    enumerate_patterns(factors.len(), unitaries.modes())
        .into_par_iter()
        .map(|p| {
            let prob = enumerate_assignments(&p)
                .iter()
                .map(|a| {
                    transition_amplitude(factors, unitaries, &p, a, prefactor).map(|z| z.norm_sqr())
                })
                .sum::<Result<f64>>()?;
            Ok((p, prob))
        })
        .collect()
}
