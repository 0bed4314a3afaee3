//! The GHZ generation schemes, suppression-law predictors and closed-form
//! success probabilities.
//!
//! Every scheme carries its global normalization inside the photon
//! amplitudes (each photon is a normalized qubit), so the scheme prefactor
//! is 1 throughout.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{brute_force_output, full_distribution, postselect, PostselectedState};
use crate::fock::{OutputPattern, PhotonFactor, PhotonicState};
use crate::numeric::{build_2n_port, build_dft, compose, embed_two_mode, swap2, ComplexMatrix};
use crate::permanent::LabelUnitaries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeKind {
    /// One photon per mode of an `N`-port DFT splitter, phase-twisted qubits.
    #[serde(rename = "odd")]
    OddN,
    /// Two orthogonal photons in every second mode of an `N`-port DFT splitter.
    #[serde(rename = "even")]
    EvenN,
    /// `N` photons in the first half of the `2N`-port network.
    #[serde(rename = "2n")]
    TwoNPort,
    /// All `N` photons detected in one output mode of the DFT splitter.
    #[serde(rename = "single-mode")]
    SingleMode,
    /// `|+>` photons through a chain of `N - 1` polarizing beam splitters.
    #[serde(rename = "pbs")]
    PbsCascade,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::OddN,
        SchemeKind::EvenN,
        SchemeKind::TwoNPort,
        SchemeKind::SingleMode,
        SchemeKind::PbsCascade,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::OddN => "odd",
            SchemeKind::EvenN => "even",
            SchemeKind::TwoNPort => "2n",
            SchemeKind::SingleMode => "single-mode",
            SchemeKind::PbsCascade => "pbs",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "odd" | "odd-n" => Ok(SchemeKind::OddN),
            "even" | "even-n" => Ok(SchemeKind::EvenN),
            "2n" | "two-n-port" | "2n-port" => Ok(SchemeKind::TwoNPort),
            "single-mode" | "single" | "sms" => Ok(SchemeKind::SingleMode),
            "pbs" | "pbs-cascade" => Ok(SchemeKind::PbsCascade),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// A fully specified input, network and detection target.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeInstance {
    pub kind: SchemeKind,
    pub n: usize,
    pub factors: Vec<PhotonFactor>,
    pub unitaries: LabelUnitaries,
    pub target: OutputPattern,
    pub prefactor: Complex64,
}

impl SchemeInstance {
    pub fn postselect(&self) -> Result<PostselectedState> {
        postselect(&self.factors, &self.unitaries, &self.target, self.prefactor)
    }

    pub fn brute_force(&self) -> Result<PhotonicState> {
        brute_force_output(&self.factors, &self.unitaries, self.prefactor)
    }

    pub fn full_distribution(&self) -> Result<Vec<(OutputPattern, f64)>> {
        full_distribution(&self.factors, &self.unitaries, self.prefactor)
    }

    /// Exact success probability where one is known in closed form.
    pub fn closed_form_reference(&self) -> Option<f64> {
        let name = match self.kind {
            SchemeKind::TwoNPort => ClosedForm::P2N,
            SchemeKind::SingleMode => ClosedForm::SingleMode,
            SchemeKind::PbsCascade => ClosedForm::Pbs,
            SchemeKind::OddN | SchemeKind::EvenN => return None,
        };
        closed_form(name, self.n).ok()
    }

    /// Same input and target on a different network.
    pub fn with_unitaries(mut self, unitaries: LabelUnitaries) -> Self {
        self.unitaries = unitaries;
        self
    }
}

fn theta(k: usize, n: usize) -> f64 {
    (k as f64 - 1.0) * 2.0 * PI / n as f64
}

fn qubit(in_mode: usize, mu: Complex64, eta: Complex64) -> Result<PhotonFactor> {
    let s = 1.0 / 2f64.sqrt();
    PhotonFactor::new(in_mode, mu * s, eta * s)
}

/// The phase-twisted input `prod_k (e^{-i theta_k} a^dag_mu + e^{i theta_k} a^dag_eta)/sqrt(2)`
/// with `theta_k = (k-1) 2 pi / n`, into the `n`-port DFT, for any `n`.
///
/// Only odd `n` (and the special case `n = 4`) yields a GHZ state; even `n`
/// not divisible by four suppresses every coincidence.
pub fn odd_phase_input(n: usize) -> Result<SchemeInstance> {
    if n == 0 {
        return Err(Error::InvalidScheme("n must be at least 1".into()));
    }
    let factors = (1..=n)
        .map(|k| {
            let t = theta(k, n);
            qubit(
                k,
                Complex64::from_polar(1.0, -t),
                Complex64::from_polar(1.0, t),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchemeInstance {
        kind: SchemeKind::OddN,
        n,
        factors,
        unitaries: LabelUnitaries::shared(build_dft(n)?),
        target: OutputPattern::all_ones(n),
        prefactor: Complex64::new(1.0, 0.0),
    })
}

pub fn make_odd_scheme(n: usize) -> Result<SchemeInstance> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidScheme(format!(
            "odd scheme needs odd n, got {n}"
        )));
    }
    odd_phase_input(n)
}

/// The odd-scheme input at `n = 4` (the `|+ - + ->` configuration up to
/// local phases), which survives with `N_2 in {1, 3}`.
pub fn make_odd_scheme_special_n4() -> Result<SchemeInstance> {
    odd_phase_input(4)
}

/// Which modes the even scheme feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvenStart {
    /// Modes `1, 3, 5, ...`.
    #[default]
    First,
    /// Modes `2, 4, 6, ...`.
    Second,
}

pub fn make_even_scheme(n: usize) -> Result<SchemeInstance> {
    make_even_scheme_from(n, EvenStart::First)
}

/// Two orthogonal photons `(1, +-e^{i theta_kappa})/sqrt(2)` in input mode
/// `2 kappa - 1` (or `2 kappa`), `theta_kappa = (kappa-1) 2 pi / n`.
pub fn make_even_scheme_from(n: usize, start: EvenStart) -> Result<SchemeInstance> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidScheme(format!(
            "even scheme needs even n >= 2, got {n}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut factors = Vec::with_capacity(n);
    for kappa in 1..=n / 2 {
        let mode = match start {
            EvenStart::First => 2 * kappa - 1,
            EvenStart::Second => 2 * kappa,
        };
        let phase = Complex64::from_polar(1.0, theta(kappa, n));
        factors.push(qubit(mode, one, phase)?);
        factors.push(qubit(mode, one, -phase)?);
    }
    Ok(SchemeInstance {
        kind: SchemeKind::EvenN,
        n,
        factors,
        unitaries: LabelUnitaries::shared(build_dft(n)?),
        target: OutputPattern::all_ones(n),
        prefactor: one,
    })
}

fn plain_phase_factors(n: usize) -> Result<Vec<PhotonFactor>> {
    (1..=n)
        .map(|k| {
            qubit(
                k,
                Complex64::new(1.0, 0.0),
                Complex64::from_polar(1.0, theta(k, n)),
            )
        })
        .collect()
}

/// `prod_k (a^dag_mu + e^{i theta_k} a^dag_eta)/sqrt(2)` into the first `n`
/// inputs of the `2n`-port network, one photon in each of the first `n`
/// outputs.
pub fn make_2n_scheme(n: usize) -> Result<SchemeInstance> {
    if n == 0 {
        return Err(Error::InvalidScheme("n must be at least 1".into()));
    }
    let mut counts = vec![0; 2 * n];
    counts[..n].fill(1);
    Ok(SchemeInstance {
        kind: SchemeKind::TwoNPort,
        n,
        factors: plain_phase_factors(n)?,
        unitaries: LabelUnitaries::shared(build_2n_port(n)?),
        target: OutputPattern::new(counts),
        prefactor: Complex64::new(1.0, 0.0),
    })
}

/// Same input as [`make_2n_scheme`] into the `n`-port DFT, all `n` photons
/// detected in output mode `mode` (one-based).
pub fn make_single_mode_scheme(n: usize, mode: usize) -> Result<SchemeInstance> {
    if n == 0 {
        return Err(Error::InvalidScheme("n must be at least 1".into()));
    }
    Ok(SchemeInstance {
        kind: SchemeKind::SingleMode,
        n,
        factors: plain_phase_factors(n)?,
        unitaries: LabelUnitaries::shared(build_dft(n)?),
        target: OutputPattern::single_mode(n, mode, n)?,
        prefactor: Complex64::new(1.0, 0.0),
    })
}

/// `|+>` photons through a PBS chain on neighbouring mode pairs
/// `(1,2), (2,3), ..., (n-1,n)`, applied left to right. `mu` is transmitted
/// (identity); `eta` is reflected by a real swap at every splitter.
pub fn make_pbs_cascade(n: usize) -> Result<SchemeInstance> {
    if n < 2 {
        return Err(Error::InvalidScheme(format!(
            "PBS cascade needs n >= 2, got {n}"
        )));
    }
    let mut reflect = ComplexMatrix::identity(n);
    for i in 1..n {
        reflect = compose(&reflect, &embed_two_mode(n, i, i + 1, &swap2())?)?;
    }
    let one = Complex64::new(1.0, 0.0);
    let factors = (1..=n)
        .map(|k| qubit(k, one, one))
        .collect::<Result<Vec<_>>>()?;
    Ok(SchemeInstance {
        kind: SchemeKind::PbsCascade,
        n,
        factors,
        unitaries: LabelUnitaries::per_label(ComplexMatrix::identity(n), reflect)?,
        target: OutputPattern::all_ones(n),
        prefactor: one,
    })
}

/// Builds the named scheme; `mode` is only used by the single-mode scheme.
pub fn make_scheme(kind: SchemeKind, n: usize, mode: usize) -> Result<SchemeInstance> {
    match kind {
        SchemeKind::OddN => make_odd_scheme(n),
        SchemeKind::EvenN => make_even_scheme(n),
        SchemeKind::TwoNPort => make_2n_scheme(n),
        SchemeKind::SingleMode => make_single_mode_scheme(n, mode),
        SchemeKind::PbsCascade => make_pbs_cascade(n),
    }
}

/// Zero-transmission rule for one indistinguishable photon per input of the
/// `n`-port DFT: a pattern can only occur if the sum of its (one-based)
/// occupied modes, with multiplicity, is divisible by `n`.
pub fn ztl_allowed(pattern: &OutputPattern, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    pattern.mode_list().iter().sum::<usize>() % n == 0
}

/// Numbers of `eta` photons that can appear in a coincidence event.
pub fn internal_survivors(kind: SchemeKind, n: usize) -> Result<BTreeSet<usize>> {
    if n == 0 {
        return Err(Error::InvalidScheme("n must be at least 1".into()));
    }
    Ok(match kind {
        SchemeKind::OddN if n % 2 == 1 => BTreeSet::from([0, n]),
        SchemeKind::OddN if n.is_multiple_of(4) => BTreeSet::from([n / 4, 3 * n / 4]),
        SchemeKind::OddN => BTreeSet::new(),
        SchemeKind::EvenN
        | SchemeKind::TwoNPort
        | SchemeKind::SingleMode
        | SchemeKind::PbsCascade => BTreeSet::from([0, n]),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosedForm {
    /// `(N!)^2 / (2^{N-1} N^{2N})`
    P2N,
    /// `1 / 2^{N-1}`
    Pbs,
    /// `N! / (2^{N-1} N^N)`, rough estimate for the odd scheme.
    TildeOdd,
    /// `N! / (2^{N/2-1} N^N)`, rough estimate for the even scheme.
    TildeEven,
    /// `N! / (2^{N-1} N^N)`
    SingleMode,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 5] = [
        ClosedForm::P2N,
        ClosedForm::Pbs,
        ClosedForm::TildeOdd,
        ClosedForm::TildeEven,
        ClosedForm::SingleMode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::P2N => "P_2N",
            ClosedForm::Pbs => "P_PBS",
            ClosedForm::TildeOdd => "P_TILDE_ODD",
            ClosedForm::TildeEven => "P_TILDE_EVEN",
            ClosedForm::SingleMode => "P_SINGLE_MODE",
        }
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClosedForm::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn closed_form(name: ClosedForm, n: usize) -> Result<f64> {
    if n == 0 || (name == ClosedForm::Pbs && n < 2) {
        return Err(Error::InvalidScheme(format!(
            "{} undefined at n = {n}",
            name.name()
        )));
    }
    let nf = n as f64;
    let nn = nf.powi(n as i32);
    Ok(match name {
        ClosedForm::P2N => factorial(n).powi(2) / (2f64.powi(n as i32 - 1) * nn * nn),
        ClosedForm::Pbs => 1.0 / 2f64.powi(n as i32 - 1),
        ClosedForm::TildeOdd | ClosedForm::SingleMode => {
            factorial(n) / (2f64.powi(n as i32 - 1) * nn)
        }
        ClosedForm::TildeEven => factorial(n) / (2f64.powf(nf / 2.0 - 1.0) * nn),
    })
}

/// Single-photon overlap `<psi_p | psi_q>` of the internal states.
pub fn overlap(p: &PhotonFactor, q: &PhotonFactor) -> Complex64 {
    p.amp_mu().conj() * q.amp_mu() + p.amp_eta().conj() * q.amp_eta()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::is_unitary;

    #[test]
    fn odd_scheme_phases() {
        let s = make_odd_scheme(3).unwrap();
        let r = 1.0 / 2f64.sqrt();
        for (k, want) in [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0].iter().enumerate() {
            let f = s.factors[k];
            assert_eq!(f.in_mode(), k + 1);
            assert!((f.amp_mu() - Complex64::from_polar(r, -want)).norm() < 1e-15);
            assert!((f.amp_eta() - Complex64::from_polar(r, *want)).norm() < 1e-15);
        }
        assert!(make_odd_scheme(4).is_err());
        assert!(make_odd_scheme(6).is_err());
        assert_eq!(make_odd_scheme_special_n4().unwrap().n, 4);
    }

    #[test]
    fn constructor_guards() {
        assert!(make_even_scheme(3).is_err());
        assert!(make_even_scheme(0).is_err());
        assert!(make_2n_scheme(0).is_err());
        assert!(make_pbs_cascade(1).is_err());
        assert!(make_single_mode_scheme(3, 4).is_err());
        assert!(make_single_mode_scheme(3, 0).is_err());
    }

    #[test]
    fn even_scheme_layout() {
        let s = make_even_scheme(6).unwrap();
        let modes: Vec<usize> = s.factors.iter().map(|f| f.in_mode()).collect();
        assert_eq!(modes, vec![1, 1, 3, 3, 5, 5]);
        // paired photons are orthogonal
        for pair in s.factors.chunks(2) {
            assert!(overlap(&pair[0], &pair[1]).norm() < 1e-15);
        }
        let s2 = make_even_scheme_from(4, EvenStart::Second).unwrap();
        let modes: Vec<usize> = s2.factors.iter().map(|f| f.in_mode()).collect();
        assert_eq!(modes, vec![2, 2, 4, 4]);
    }

    #[test]
    fn pbs_reflection_is_cyclic_shift() {
        let s = make_pbs_cascade(4).unwrap();
        let eta = s.unitaries.get(crate::fock::InternalLabel::Eta);
        assert!(is_unitary(eta, 1e-12));
        // photon 1 rides every reflection to the last mode, the rest step down one
        for (row, col) in [(0, 3), (1, 0), (2, 1), (3, 2)] {
            assert_eq!(eta[(row, col)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn ztl_examples() {
        assert!(ztl_allowed(&OutputPattern::new(vec![3, 0, 0]), 3));
        assert!(!ztl_allowed(&OutputPattern::new(vec![2, 1, 0]), 3));
        assert!(!ztl_allowed(&OutputPattern::new(vec![1, 1]), 2));
        assert!(ztl_allowed(&OutputPattern::new(vec![1, 1, 1]), 3));
    }

    #[test]
    fn survivor_predictions() {
        assert_eq!(
            internal_survivors(SchemeKind::OddN, 5).unwrap(),
            BTreeSet::from([0, 5])
        );
        assert!(internal_survivors(SchemeKind::OddN, 6).unwrap().is_empty());
        assert!(internal_survivors(SchemeKind::OddN, 10).unwrap().is_empty());
        assert_eq!(
            internal_survivors(SchemeKind::OddN, 4).unwrap(),
            BTreeSet::from([1, 3])
        );
        assert_eq!(
            internal_survivors(SchemeKind::OddN, 8).unwrap(),
            BTreeSet::from([2, 6])
        );
        for kind in [
            SchemeKind::EvenN,
            SchemeKind::TwoNPort,
            SchemeKind::SingleMode,
        ] {
            assert_eq!(internal_survivors(kind, 6).unwrap(), BTreeSet::from([0, 6]));
        }
    }

    #[test]
    fn closed_forms() {
        assert!((closed_form(ClosedForm::Pbs, 3).unwrap() - 0.25).abs() < 1e-15);
        assert!((closed_form(ClosedForm::P2N, 2).unwrap() - 0.125).abs() < 1e-15);
        assert!((closed_form(ClosedForm::SingleMode, 2).unwrap() - 0.25).abs() < 1e-15);
        for n in 1..=12 {
            assert_eq!(
                closed_form(ClosedForm::TildeOdd, n).unwrap(),
                closed_form(ClosedForm::SingleMode, n).unwrap()
            );
        }
        // N=4 even estimate: 24 / (2 * 256)
        assert!((closed_form(ClosedForm::TildeEven, 4).unwrap() - 24.0 / 512.0).abs() < 1e-15);
        assert!(closed_form(ClosedForm::Pbs, 1).is_err());
        assert!(closed_form(ClosedForm::P2N, 0).is_err());
        assert_eq!("p_2n".parse::<ClosedForm>().unwrap(), ClosedForm::P2N);
        assert!("P_FOO".parse::<ClosedForm>().is_err());
    }

    #[test]
    fn overlaps() {
        let mu = PhotonFactor::mu(1).unwrap();
        let eta = PhotonFactor::eta(1).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let plus = PhotonFactor::new(1, Complex64::new(r, 0.0), Complex64::new(r, 0.0)).unwrap();
        assert_eq!(overlap(&mu, &eta), Complex64::new(0.0, 0.0));
        assert_eq!(overlap(&mu, &mu), Complex64::new(1.0, 0.0));
        assert!((overlap(&plus, &mu) - Complex64::new(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scheme_names_parse() {
        for k in SchemeKind::ALL {
            assert_eq!(k.name().parse::<SchemeKind>().unwrap(), k);
        }
        assert_eq!("ODD_N".parse::<SchemeKind>().unwrap(), SchemeKind::OddN);
        assert_eq!(
            "TWO_N_PORT".parse::<SchemeKind>().unwrap(),
            SchemeKind::TwoNPort
        );
        assert_eq!(
            "PBS_CASCADE".parse::<SchemeKind>().unwrap(),
            SchemeKind::PbsCascade
        );
        assert!("w-state".parse::<SchemeKind>().is_err());
    }
}
