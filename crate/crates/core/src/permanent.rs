//! Matrix permanents and the bosonic transition amplitudes built on them.
//!
//! [`perm_ryser`] is the production kernel (Ryser's inclusion-exclusion
//! formula with Gray-code ordered row-sum updates, `O(2^n n)`).
//! [`perm_naive`] enumerates all `n!` permutations and serves as its oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{InternalAssignment, InternalLabel, OutputPattern, PhotonFactor};
use crate::numeric::ComplexMatrix;

/// Largest dimension accepted by [`perm_naive`].
pub const NAIVE_MAX_DIM: usize = 10;
/// Largest dimension accepted by [`perm_ryser`].
pub const RYSER_MAX_DIM: usize = 30;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Permanent by direct summation over the symmetric group.
pub fn perm_naive(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.dim();
    if n > NAIVE_MAX_DIM {
        return Err(Error::PermanentTooLarge {
            dim: n,
            limit: NAIVE_MAX_DIM,
        });
    }
    fn rec(m: &ComplexMatrix, row: usize, used: u32, partial: Complex64) -> Complex64 {
        let n = m.dim();
        if row == n {
            return partial;
        }
        let mut acc = ZERO;
        for col in 0..n {
            if used & (1 << col) == 0 {
                acc += rec(m, row + 1, used | (1 << col), partial * m[(row, col)]);
            }
        }
        acc
    }
    Ok(rec(m, 0, 0, ONE))
}

/// Permanent by Ryser's formula,
/// `perm(M) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} M[i][j]`,
/// visiting column subsets in Gray-code order so each step adds or removes a
/// single column from the running row sums.
pub fn perm_ryser(m: &ComplexMatrix) -> Result<Complex64> {
    let n = m.dim();
    if n > RYSER_MAX_DIM {
        return Err(Error::PermanentTooLarge {
            dim: n,
            limit: RYSER_MAX_DIM,
        });
    }
    if n == 1 {
        return Ok(m[(0, 0)]);
    }
    let mut row_sums = vec![ZERO; n];
    let mut in_set: u64 = 0;
    let mut total = ZERO;
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        let bit = 1u64 << col;
        in_set ^= bit;
        if in_set & bit != 0 {
            for (r, s) in row_sums.iter_mut().enumerate() {
                *s += m[(r, col)];
            }
        } else {
            for (r, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(r, col)];
            }
        }
        let prod = row_sums.iter().fold(ONE, |acc, s| acc * s);
        if in_set.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { -total })
}

/// Label-conditioned network: photons in `|mu>` see `mu`, photons in
/// `|eta>` see `eta`. Label-independent interferometers use the same matrix
/// for both.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelUnitaries {
    mu: ComplexMatrix,
    eta: ComplexMatrix,
}

impl LabelUnitaries {
    pub fn shared(u: ComplexMatrix) -> Self {
        Self {
            mu: u.clone(),
            eta: u,
        }
    }

    pub fn per_label(mu: ComplexMatrix, eta: ComplexMatrix) -> Result<Self> {
        if mu.dim() != eta.dim() {
            return Err(Error::DimensionMismatch {
                expected: mu.dim(),
                got: eta.dim(),
            });
        }
        Ok(Self { mu, eta })
    }

    pub fn get(&self, label: InternalLabel) -> &ComplexMatrix {
        match label {
            InternalLabel::Mu => &self.mu,
            InternalLabel::Eta => &self.eta,
        }
    }

    pub fn modes(&self) -> usize {
        self.mu.dim()
    }

    pub fn is_label_independent(&self) -> bool {
        self.mu == self.eta
    }
}

/// Checks that the inputs fit the network and returns the photon number.
pub(crate) fn check_inputs(factors: &[PhotonFactor], unitaries: &LabelUnitaries) -> Result<usize> {
    let modes = unitaries.modes();
    if let Some(f) = factors.iter().find(|f| f.in_mode() > modes) {
        return Err(Error::ModeOutOfRange {
            index: f.in_mode(),
            modes,
        });
    }
    Ok(factors.len())
}

/// Square matrix whose permanent is the (unnormalized) amplitude of
/// `assignment`: one row per input photon, one column per detected photon,
/// with column `(F, l)` repeated `n_{F,l}` times.
pub fn amplitude_matrix(
    factors: &[PhotonFactor],
    unitaries: &LabelUnitaries,
    assignment: &InternalAssignment,
) -> Result<ComplexMatrix> {
    check_inputs(factors, unitaries)?;
    if assignment.modes() != unitaries.modes() {
        return Err(Error::PatternModes {
            expected: unitaries.modes(),
            got: assignment.modes(),
        });
    }
    let mut columns: Vec<(InternalLabel, usize)> = Vec::with_capacity(factors.len());
    for l in 1..=assignment.modes() {
        for label in InternalLabel::ALL {
            for _ in 0..assignment.count(label, l) {
                columns.push((label, l - 1));
            }
        }
    }
    if columns.len() != factors.len() {
        return Err(Error::PhotonCountMismatch {
            inputs: factors.len(),
            outputs: columns.len(),
        });
    }
    let mut entries = Vec::with_capacity(columns.len() * columns.len());
    for f in factors {
        let k = f.in_mode() - 1;
        for &(label, l) in &columns {
            entries.push(unitaries.get(label)[(k, l)] * f.amp(label));
        }
    }
    ComplexMatrix::new(columns.len(), entries)
}

/// Amplitude of the normalized output Fock state selected by `assignment`:
/// `prefactor * perm(M) / sqrt(prod_{F,l} n_{F,l}!)`.
pub fn transition_amplitude(
    factors: &[PhotonFactor],
    unitaries: &LabelUnitaries,
    pattern: &OutputPattern,
    assignment: &InternalAssignment,
    prefactor: Complex64,
) -> Result<Complex64> {
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
    if !assignment.refines(pattern) {
        return Err(Error::AssignmentMismatch);
    }
    if factors.is_empty() {
        return Ok(prefactor);
    }
    let m = amplitude_matrix(factors, unitaries, assignment)?;
    let perm = perm_ryser(&m)?;
    Ok(prefactor * perm / assignment.occupation_factorial().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::build_dft;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn naive_small_cases() {
        let h = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert!(perm_naive(&h).unwrap().norm() < 1e-15);
        assert!((perm_naive(&ComplexMatrix::identity(3)).unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn unnormalized_dft3_by_hand() {
        // F[k][l] = w^(k l); the six permutations of S3 written out
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let f = |k: u32, l: u32| w.powu(k * l);
        let by_hand = f(0, 0) * f(1, 1) * f(2, 2)
            + f(0, 0) * f(1, 2) * f(2, 1)
            + f(0, 1) * f(1, 0) * f(2, 2)
            + f(0, 1) * f(1, 2) * f(2, 0)
            + f(0, 2) * f(1, 0) * f(2, 1)
            + f(0, 2) * f(1, 1) * f(2, 0);
        assert!((by_hand - c(-3.0, 0.0)).norm() < 1e-12);

        let m = build_dft(3).unwrap().scale(c(3f64.sqrt(), 0.0));
        assert!((perm_naive(&m).unwrap() - c(-3.0, 0.0)).norm() < 1e-12);
        assert!((perm_ryser(&m).unwrap() - c(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ryser_identity_and_ones() {
        for n in 1..=20 {
            let p = perm_ryser(&ComplexMatrix::identity(n)).unwrap();
            assert!((p - ONE).norm() < 1e-12, "n={n}");
        }
        for n in 1..=10 {
            let ones = ComplexMatrix::from_real_rows(&vec![vec![1.0; n]; n]).unwrap();
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            let p = perm_ryser(&ones).unwrap();
            assert!(
                (p.re - fact).abs() / fact < 1e-12 && p.im.abs() < 1e-9,
                "n={n}"
            );
        }
    }

    #[test]
    fn size_guards() {
        assert!(matches!(
            perm_naive(&ComplexMatrix::identity(11)),
            Err(Error::PermanentTooLarge { dim: 11, limit: 10 })
        ));
        assert!(matches!(
            perm_ryser(&ComplexMatrix::identity(31)),
            Err(Error::PermanentTooLarge { dim: 31, limit: 30 })
        ));
    }

    #[test]
    fn single_entry() {
        let m = ComplexMatrix::new(1, vec![c(0.3, -0.7)]).unwrap();
        assert_eq!(perm_ryser(&m).unwrap(), c(0.3, -0.7));
        assert_eq!(perm_naive(&m).unwrap(), c(0.3, -0.7));
    }

    #[test]
    fn hong_ou_mandel() {
        let u = LabelUnitaries::shared(build_dft(2).unwrap());
        let photons = [PhotonFactor::mu(1).unwrap(), PhotonFactor::mu(2).unwrap()];
        let coinc = OutputPattern::all_ones(2);
        let mm = InternalAssignment::uniform(&coinc, InternalLabel::Mu);
        let amp = transition_amplitude(&photons, &u, &coinc, &mm, ONE).unwrap();
        assert!(amp.norm() < 1e-15);

        let bunched = OutputPattern::new(vec![2, 0]);
        let two_mu = InternalAssignment::uniform(&bunched, InternalLabel::Mu);
        let amp = transition_amplitude(&photons, &u, &bunched, &two_mu, ONE).unwrap();
        assert!((amp.norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn amplitude_errors() {
        let u = LabelUnitaries::shared(build_dft(2).unwrap());
        let photons = [PhotonFactor::mu(1).unwrap()];
        let coinc = OutputPattern::all_ones(2);
        let mm = InternalAssignment::uniform(&coinc, InternalLabel::Mu);
        assert!(matches!(
            transition_amplitude(&photons, &u, &coinc, &mm, ONE),
            Err(Error::PhotonCountMismatch { .. })
        ));
        let two = [PhotonFactor::mu(1).unwrap(), PhotonFactor::mu(2).unwrap()];
        let wrong = InternalAssignment::uniform(&OutputPattern::new(vec![2, 0]), InternalLabel::Mu);
        assert_eq!(
            transition_amplitude(&two, &u, &coinc, &wrong, ONE),
            Err(Error::AssignmentMismatch)
        );
        let off_network = [PhotonFactor::mu(3).unwrap(), PhotonFactor::mu(1).unwrap()];
        assert!(matches!(
            transition_amplitude(&off_network, &u, &coinc, &mm, ONE),
            Err(Error::ModeOutOfRange { .. })
        ));
        assert!(matches!(
            transition_amplitude(&two, &u, &OutputPattern::all_ones(3), &mm, ONE),
            Err(Error::PatternModes { .. })
        ));
    }
}
