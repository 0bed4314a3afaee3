//! Dense complex matrices and the interferometer unitaries used by the
//! generation schemes.
//!
//! Matrix storage is row-major and indexed from zero. Everything that talks
//! about optical *modes* (embedding pairs, photon input modes, detection
//! modes) is indexed from one.
//!
//! Row `k` of a network matrix holds the amplitudes for a photon entering
//! mode `k`: the creation operator of input `k` maps to
//! `sum_l U[k][l] b_l^dagger`. With that convention, a photon that first
//! crosses network `a` and then network `b` sees the product `a * b`, which
//! is exactly what [`compose`] returns.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when a constructor checks its own output for unitarity.
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: bad.len(),
            });
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.entries.chunks(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    fn matmul(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.entries[r * n + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product on mismatched dimensions");
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The `n`-mode symmetric multiport: `U[k][l] = w^(k l) / sqrt(n)` with
/// `w = exp(2 pi i / n)` and zero-based `k, l`.
///
/// The exponent is reduced modulo `n` before evaluating the phase, so every
/// entry is one of the `n` exactly-placed roots of unity.
pub fn build_dft(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let norm = 1.0 / (n as f64).sqrt();
    let mut m = ComplexMatrix::zeros(n);
    for k in 0..n {
        for l in 0..n {
            let exponent = (k * l) % n;
            m[(k, l)] = Complex64::from_polar(norm, 2.0 * PI * exponent as f64 / n as f64);
        }
    }
    Ok(m)
}

/// The `2n`-mode network `[[A, (1 - A A^dag)^(1/2)], [(1 - A^dag A)^(1/2), -A^dag]]`
/// with every entry of the `n x n` block `A` equal to `1/n`.
///
/// `A A^dag = A^dag A = J/n` where `J` is the all-ones matrix. `J/n` is a
/// rank-one projector, so both square-root blocks equal `1 - J/n` exactly.
pub fn build_2n_port(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let a = 1.0 / n as f64;
    let mut m = ComplexMatrix::zeros(2 * n);
    for r in 0..n {
        for c in 0..n {
            let delta = if r == c { 1.0 } else { 0.0 };
            m[(r, c)] = Complex64::new(a, 0.0);
            m[(r, c + n)] = Complex64::new(delta - a, 0.0);
            m[(r + n, c)] = Complex64::new(delta - a, 0.0);
            m[(r + n, c + n)] = Complex64::new(-a, 0.0);
        }
    }
    Ok(m)
}

/// Identity on `n` modes with the two-mode block acting on modes `i < j`
/// (one-based) replaced by `g`.
pub fn embed_two_mode(n: usize, i: usize, j: usize, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: g.dim(),
        });
    }
    if i == 0 || i > n {
        return Err(Error::ModeOutOfRange { index: i, modes: n });
    }
    if j == 0 || j > n {
        return Err(Error::ModeOutOfRange { index: j, modes: n });
    }
    if i >= j {
        return Err(Error::InvalidModePair { i, j });
    }
    if !is_unitary(g, UNITARY_TOL) {
        return Err(Error::NotUnitary { tol: UNITARY_TOL });
    }
    let (a, b) = (i - 1, j - 1);
    let mut m = ComplexMatrix::identity(n);
    m[(a, a)] = g[(0, 0)];
    m[(a, b)] = g[(0, 1)];
    m[(b, a)] = g[(1, 0)];
    m[(b, b)] = g[(1, 1)];
    Ok(m)
}

/// Network `a` followed by network `b`.
pub fn compose(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a * b)
}

/// `max |(m^dag m - 1)_{rc}| < tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    let gram = &m.dagger() * m;
    gram.max_abs_diff(&ComplexMatrix::identity(m.dim())) < tol
}

/// Real two-mode swap `[[0, 1], [1, 0]]`.
pub fn swap2() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).expect("2x2")
}
