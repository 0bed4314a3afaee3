//! Photons with one binary internal degree of freedom, output photon-number
//! patterns and their refinements by internal label.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitude normalization tolerance for a single photon.
pub const PHOTON_NORM_TOL: f64 = 1e-12;

/// Orthonormal internal basis `{|mu>, |eta>}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InternalLabel {
    Mu,
    Eta,
}

impl InternalLabel {
    pub const ALL: [InternalLabel; 2] = [InternalLabel::Mu, InternalLabel::Eta];

    pub fn index(self) -> usize {
        match self {
            InternalLabel::Mu => 0,
            InternalLabel::Eta => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            InternalLabel::Mu => 'm',
            InternalLabel::Eta => 'h',
        }
    }
}

/// One input photon: `(amp_mu a^dag_{mu,k} + amp_eta a^dag_{eta,k})` on input
/// mode `k` (one-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonFactor {
    in_mode: usize,
    amp_mu: Complex64,
    amp_eta: Complex64,
}

impl PhotonFactor {
    pub fn new(in_mode: usize, amp_mu: Complex64, amp_eta: Complex64) -> Result<Self> {
        if in_mode == 0 {
            return Err(Error::ModeOutOfRange {
                index: in_mode,
                modes: usize::MAX,
            });
        }
        let norm = amp_mu.norm_sqr() + amp_eta.norm_sqr();
        if (norm - 1.0).abs() > PHOTON_NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            in_mode,
            amp_mu,
            amp_eta,
        })
    }

    /// A photon in a pure `|mu>` state.
    pub fn mu(in_mode: usize) -> Result<Self> {
        Self::new(in_mode, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn eta(in_mode: usize) -> Result<Self> {
        Self::new(in_mode, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn in_mode(&self) -> usize {
        self.in_mode
    }

    pub fn amp(&self, label: InternalLabel) -> Complex64 {
        match label {
            InternalLabel::Mu => self.amp_mu,
            InternalLabel::Eta => self.amp_eta,
        }
    }

    pub fn amp_mu(&self) -> Complex64 {
        self.amp_mu
    }

    pub fn amp_eta(&self) -> Complex64 {
        self.amp_eta
    }
}

/// Photon count per output mode, `|n_1, ..., n_M>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutputPattern {
    counts: Vec<usize>,
}

impl OutputPattern {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    /// One photon in each of `n` modes.
    pub fn all_ones(n: usize) -> Self {
        Self::new(vec![1; n])
    }

    /// `photons` photons in the (one-based) `mode`, none elsewhere.
    pub fn single_mode(modes: usize, mode: usize, photons: usize) -> Result<Self> {
        if mode == 0 || mode > modes {
            return Err(Error::ModeOutOfRange { index: mode, modes });
        }
        let mut counts = vec![0; modes];
        counts[mode - 1] = photons;
        Ok(Self::new(counts))
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// No mode holds more than one photon.
    pub fn is_single_occupancy(&self) -> bool {
        self.counts.iter().all(|&n| n <= 1)
    }

    /// The sorted multiset of occupied (one-based) modes, each listed `n_l` times.
    pub fn mode_list(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(l, &n)| std::iter::repeat_n(l + 1, n))
            .collect()
    }
}

impl fmt::Display for OutputPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Split of every output mode's photons into `mu` and `eta` photons.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InternalAssignment {
    mu: Vec<usize>,
    eta: Vec<usize>,
}

impl InternalAssignment {
    pub fn new(mu: Vec<usize>, eta: Vec<usize>) -> Result<Self> {
        if mu.len() != eta.len() {
            return Err(Error::DimensionMismatch {
                expected: mu.len(),
                got: eta.len(),
            });
        }
        Ok(Self { mu, eta })
    }

    /// One photon per listed label, mode by mode.
    pub fn from_labels(labels: &[InternalLabel]) -> Self {
        let mu = labels
            .iter()
            .map(|&l| usize::from(l == InternalLabel::Mu))
            .collect();
        let eta = labels
            .iter()
            .map(|&l| usize::from(l == InternalLabel::Eta))
            .collect();
        Self { mu, eta }
    }

    /// All photons of `pattern` carry `label`.
    pub fn uniform(pattern: &OutputPattern, label: InternalLabel) -> Self {
        let zeros = vec![0; pattern.modes()];
        let full = pattern.counts().to_vec();
        match label {
            InternalLabel::Mu => Self {
                mu: full,
                eta: zeros,
            },
            InternalLabel::Eta => Self {
                mu: zeros,
                eta: full,
            },
        }
    }

    pub fn modes(&self) -> usize {
        self.mu.len()
    }

    /// Occupation of `label` in the one-based `mode`.
    pub fn count(&self, label: InternalLabel, mode: usize) -> usize {
        match label {
            InternalLabel::Mu => self.mu[mode - 1],
            InternalLabel::Eta => self.eta[mode - 1],
        }
    }

    pub fn counts(&self, label: InternalLabel) -> &[usize] {
        match label {
            InternalLabel::Mu => &self.mu,
            InternalLabel::Eta => &self.eta,
        }
    }

    pub fn mu_total(&self) -> usize {
        self.mu.iter().sum()
    }

    /// Number of photons in `|eta>`.
    pub fn eta_total(&self) -> usize {
        self.eta.iter().sum()
    }

    pub fn pattern(&self) -> OutputPattern {
        OutputPattern::new(self.mu.iter().zip(&self.eta).map(|(a, b)| a + b).collect())
    }

    pub fn refines(&self, pattern: &OutputPattern) -> bool {
        self.pattern() == *pattern
    }

    /// `prod_{F,l} n_{F,l}!` as a float.
    pub fn occupation_factorial(&self) -> f64 {
        self.mu
            .iter()
            .chain(&self.eta)
            .map(|&n| (1..=n).map(|k| k as f64).product::<f64>())
            .product()
    }
}

/// Single-occupancy assignments render as one character per output mode
/// (`m` for mu, `h` for eta, `.` for an empty mode); anything else renders
/// as the two occupation lists, e.g. `m=[2,0] h=[1,0]`.
impl fmt::Display for InternalAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pattern().is_single_occupancy() {
            for (m, e) in self.mu.iter().zip(&self.eta) {
                let ch = match (m, e) {
                    (1, 0) => 'm',
                    (0, 1) => 'h',
                    _ => '.',
                };
                write!(f, "{ch}")?;
            }
            Ok(())
        } else {
            let list = |v: &[usize]| {
                v.iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            write!(f, "m=[{}] h=[{}]", list(&self.mu), list(&self.eta))
        }
    }
}

impl FromStr for InternalAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownName(s.to_string());
        if let Some(rest) = s.strip_prefix("m=[") {
            let (mu, rest) = rest.split_once("] h=[").ok_or_else(bad)?;
            let eta = rest.strip_suffix(']').ok_or_else(bad)?;
            let parse = |t: &str| -> Result<Vec<usize>> {
                if t.is_empty() {
                    return Ok(vec![]);
                }
                t.split(',')
                    .map(|x| x.trim().parse().map_err(|_| bad()))
                    .collect()
            };
            return Self::new(parse(mu)?, parse(eta)?);
        }
        let mut mu = Vec::with_capacity(s.len());
        let mut eta = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let (m, e) = match ch {
                'm' => (1, 0),
                'h' => (0, 1),
                '.' => (0, 0),
                _ => return Err(bad()),
            };
            mu.push(m);
            eta.push(e);
        }
        Self::new(mu, eta)
    }
}

/// All compositions of `total_photons` into `modes` parts, in descending
/// lexicographic order: `(2,0), (1,1), (0,2)`.
pub fn enumerate_patterns(total_photons: usize, modes: usize) -> Vec<OutputPattern> {
    fn rec(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<OutputPattern>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(OutputPattern::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(remaining - first, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes == 0 {
        return out;
    }
    rec(
        total_photons,
        modes,
        &mut Vec::with_capacity(modes),
        &mut out,
    );
    out
}

/// Every way of splitting each mode's photons into `mu` and `eta`.
///
/// Mode 1 varies slowest and each mode runs from all-`mu` to all-`eta`, so
/// single-occupancy patterns come out as `mm, mh, hm, hh`.
pub fn enumerate_assignments(pattern: &OutputPattern) -> Vec<InternalAssignment> {
    let counts = pattern.counts();
    let total: usize = counts.iter().map(|&n| n + 1).product();
    let mut out = Vec::with_capacity(total);
    // eta occupation per mode, odometer with the last mode fastest
    let mut eta = vec![0usize; counts.len()];
    loop {
        let mu = counts.iter().zip(&eta).map(|(n, e)| n - e).collect();
        out.push(InternalAssignment {
            mu,
            eta: eta.clone(),
        });
        let mut pos = counts.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if eta[pos] < counts[pos] {
                eta[pos] += 1;
                break;
            }
            eta[pos] = 0;
        }
    }
}

/// A state over output Fock configurations, keyed by the occupation of every
/// `(mode, label)` slot. Slot `2 (l - 1) + label.index()` holds the photons
/// of label `label` in the one-based output mode `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonicState {
    modes: usize,
    amplitudes: BTreeMap<Vec<u8>, Complex64>,
}

impl PhotonicState {
    pub fn new(modes: usize, amplitudes: BTreeMap<Vec<u8>, Complex64>) -> Self {
        Self { modes, amplitudes }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|z| z.norm_sqr()).sum()
    }

    pub fn slot(mode: usize, label: InternalLabel) -> usize {
        2 * (mode - 1) + label.index()
    }

    fn key(&self, a: &InternalAssignment) -> Vec<u8> {
        let mut key = vec![0u8; 2 * self.modes];
        for l in 1..=self.modes {
            for label in InternalLabel::ALL {
                key[Self::slot(l, label)] = a.count(label, l) as u8;
            }
        }
        key
    }

    pub fn amplitude(&self, a: &InternalAssignment) -> Complex64 {
        if a.modes() != self.modes {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes
            .get(&self.key(a))
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Amplitudes of every assignment refining `pattern`, in
    /// [`enumerate_assignments`] order.
    pub fn slice(&self, pattern: &OutputPattern) -> Vec<(InternalAssignment, Complex64)> {
        enumerate_assignments(pattern)
            .into_iter()
            .map(|a| {
                let amp = self.amplitude(&a);
                (a, amp)
            })
            .collect()
    }

    /// Probability of detecting `pattern`, summed over internal labels.
    pub fn pattern_probability(&self, pattern: &OutputPattern) -> f64 {
        self.slice(pattern).iter().map(|(_, z)| z.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use InternalLabel::{Eta, Mu};

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn patterns_small() {
        let p: Vec<Vec<usize>> = enumerate_patterns(2, 2)
            .iter()
            .map(|p| p.counts().to_vec())
            .collect();
        assert_eq!(p, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let z = enumerate_patterns(0, 3);
        assert_eq!(z, vec![OutputPattern::new(vec![0, 0, 0])]);
    }

    #[test]
    fn pattern_counts_match_stars_and_bars() {
        for n in 1..=8 {
            let pats = enumerate_patterns(n, n);
            assert_eq!(pats.len(), binomial(2 * n - 1, n), "n={n}");
            let mut sorted = pats.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), pats.len());
            assert!(pats.iter().all(|p| p.total() == n));
            // strictly descending order
            assert!(pats.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn assignments_small() {
        let strs: Vec<String> = enumerate_assignments(&OutputPattern::all_ones(2))
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(strs, vec!["mm", "mh", "hm", "hh"]);

        let two = enumerate_assignments(&OutputPattern::new(vec![2, 0]));
        assert_eq!(two.len(), 3);
        assert_eq!((two[0].mu_total(), two[0].eta_total()), (2, 0));
        assert_eq!((two[1].mu_total(), two[1].eta_total()), (1, 1));
        assert_eq!((two[2].mu_total(), two[2].eta_total()), (0, 2));

        assert_eq!(enumerate_assignments(&OutputPattern::all_ones(3)).len(), 8);
    }

    #[test]
    fn labels_round_trip_through_strings() {
        let a = InternalAssignment::from_labels(&[Mu, Eta, Eta]);
        assert_eq!(a.to_string(), "mhh");
        assert_eq!("mhh".parse::<InternalAssignment>().unwrap(), a);

        let b = InternalAssignment::new(vec![2, 0], vec![1, 0]).unwrap();
        assert_eq!(b.to_string(), "m=[2,0] h=[1,0]");
        assert_eq!(b.to_string().parse::<InternalAssignment>().unwrap(), b);

        let c = InternalAssignment::new(vec![1, 0], vec![0, 0]).unwrap();
        assert_eq!(c.to_string(), "m.");
        assert!("mx".parse::<InternalAssignment>().is_err());
    }

    #[test]
    fn photon_normalization_enforced() {
        let s = 1.0 / 2f64.sqrt();
        assert!(PhotonFactor::new(1, Complex64::new(s, 0.0), Complex64::new(0.0, s)).is_ok());
        assert!(matches!(
            PhotonFactor::new(1, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            Err(Error::NotNormalized { .. })
        ));
        assert!(PhotonFactor::mu(0).is_err());
    }

    #[test]
    fn mode_list_and_factorials() {
        let p = OutputPattern::new(vec![2, 0, 1]);
        assert_eq!(p.mode_list(), vec![1, 1, 3]);
        let a = InternalAssignment::new(vec![2, 0, 0], vec![0, 0, 1]).unwrap();
        assert!(a.refines(&p));
        assert_eq!(a.occupation_factorial(), 2.0);
        assert_eq!(
            OutputPattern::single_mode(3, 2, 3).unwrap().counts(),
            &[0, 3, 0]
        );
        assert!(OutputPattern::single_mode(3, 4, 3).is_err());
    }

    proptest::proptest! {
        #[test]
        fn assignment_count_is_product(counts in proptest::collection::vec(0usize..4, 1..6)) {
            let p = OutputPattern::new(counts.clone());
            let all = enumerate_assignments(&p);
            let expected: usize = counts.iter().map(|n| n + 1).product();
            proptest::prop_assert_eq!(all.len(), expected);
            proptest::prop_assert!(all.iter().all(|a| a.refines(&p)));
            let mut dedup = all.clone();
            dedup.sort();
            dedup.dedup();
            proptest::prop_assert_eq!(dedup.len(), all.len());
        }
    }
}
