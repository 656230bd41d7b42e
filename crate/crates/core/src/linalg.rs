//! Dense complex matrices and vectors for small Hilbert spaces.
//!
//! Everything in this crate lives in dimension ≤ ~15 (qubits, qutrits, and
//! truncated two-mode Fock spaces), so matrices are stored as plain row-major
//! `Vec<Complex64>` and all algorithms are direct. The Hermitian
//! eigendecomposition uses cyclic Jacobi rotations, which keeps matrix
//! exponentials exactly unitary up to the eigensolver tolerance.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Absolute tolerance below which a matrix counts as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("matrix is not Hermitian: max |m - m†| = {max_violation:.3e} at ({row}, {col})")]
    NotHermitian {
        max_violation: f64,
        row: usize,
        col: usize,
    },

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("matrix is not unitary: max |u u† - I| = {0:.3e}")]
    NotUnitary(f64),
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from nested rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Build from real nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let converted: Vec<Vec<C64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> ComplexMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= factor;
        }
        out
    }

    pub fn scale_re(&self, factor: f64) -> ComplexMatrix {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Apply to a vector: self * v.
    pub fn matvec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matvec dimension mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[i] += self[(i, j)] * v[j];
            }
        }
        ComplexVector::new(out)
    }

    /// Largest elementwise |a - b|.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Max elementwise |m - m†|, with its location.
    pub fn hermiticity_violation(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = (self[(i, j)] - self[(j, i)].conj()).norm();
                if v > worst.0 {
                    worst = (v, i, j);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_violation().0 <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// (m + m†)/2.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        (self + &self.dagger()).scale_re(0.5)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> C64 {
        assert!(self.is_square(), "det requires a square matrix");
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = C64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot = col;
            let mut best = a[col * n + col].norm();
            for row in col + 1..n {
                let mag = a[row * n + col].norm();
                if mag > best {
                    best = mag;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let diag = a[col * n + col];
            det *= diag;
            for row in col + 1..n {
                let factor = a[row * n + col] / diag;
                for j in col..n {
                    let above = a[col * n + j];
                    a[row * n + j] -= factor * above;
                }
            }
        }
        det
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns eigenvalues in ascending order with matching eigenvector
    /// columns; `m == V diag(w) V†` and `V` unitary to working precision.
    pub fn eigh(&self) -> Result<Eigendecomposition, LinalgError> {
        let (violation, row, col) = self.hermiticity_violation();
        if !self.is_square() || violation > HERMITICITY_TOL {
            return Err(LinalgError::NotHermitian {
                max_violation: violation,
                row,
                col,
            });
        }
        let n = self.rows;
        let mut a = self.hermitian_part();
        let mut v = ComplexMatrix::identity(n);
        let scale = 1.0 + a.max_abs_entry();
        let tol = 1e-15 * scale;
        let max_sweeps = 200;

        for sweep in 0..=max_sweeps {
            let mut off = 0.0_f64;
            for p in 0..n {
                for q in p + 1..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= tol {
                let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
                pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
                let eigenvalues: Vec<f64> = pairs.iter().map(|&(w, _)| w).collect();
                let mut vectors = ComplexMatrix::zeros(n, n);
                for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
                    for i in 0..n {
                        vectors[(i, new_col)] = v[(i, old_col)];
                    }
                }
                return Ok(Eigendecomposition {
                    eigenvalues,
                    eigenvectors: vectors,
                });
            }
            if sweep == max_sweeps {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q, tol);
                }
            }
        }
        Err(LinalgError::NoConvergence(max_sweeps))
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigvalsh(&self) -> Result<Vec<f64>, LinalgError> {
        Ok(self.eigh()?.eigenvalues)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let product = self.matmul(&self.dagger());
        product
            .max_abs_diff(&ComplexMatrix::identity(self.rows))
            .map(|d| d <= tol)
            .unwrap_or(false)
    }
}

/// One Jacobi rotation annihilating the (p, q) off-diagonal entry.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, tol: f64) {
    let apq = a[(p, q)];
    let h = apq.norm();
    if h <= tol {
        return;
    }
    let n = a.dim();
    // Phase that makes the (p, q) entry real, then a real Jacobi angle.
    let phase = apq / h;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * h);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // Unitary J: J[p][p] = c, J[p][q] = s*phase, J[q][p] = -s*conj(phase), J[q][q] = c.
    let jpq = phase * s;
    let jqp = -phase.conj() * s;

    // A <- J† A J: update columns then rows.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c + aiq * jqp;
        a[(i, q)] = aip * jpq + aiq * c;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c + aqj * jqp.conj();
        a[(q, j)] = apj * jpq.conj() + aqj * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    // V <- V J (accumulate eigenvectors as columns).
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c + viq * jqp;
        v[(i, q)] = vip * jpq + viq * c;
    }
}

/// Hermitian eigendecomposition: `matrix == V diag(w) V†`.
pub struct Eigendecomposition {
    /// Ascending real eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Eigenvector columns, unitary.
    pub eigenvectors: ComplexMatrix,
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e += o;
        }
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e -= o;
        }
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let e = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", e.re, e.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Dense complex vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// Computational basis vector |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// ⟨self|other⟩ (conjugate-linear in self).
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// |self⟩⟨other|.
    pub fn outer(&self, other: &ComplexVector) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), other.dim());
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                m[(i, j)] = self.entries[i] * other.entries[j].conj();
            }
        }
        m
    }

    pub fn scale(&self, factor: C64) -> ComplexVector {
        ComplexVector::new(self.entries.iter().map(|e| e * factor).collect())
    }

    pub fn add(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), other.dim());
        ComplexVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), other.dim());
        ComplexVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.entries[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexVector [")?;
        for e in &self.entries {
            write!(f, " {:+.4}{:+.4}i", e.re, e.im)?;
        }
        write!(f, " ]")
    }
}

/// ab - ba.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    check_same_square(a, b)?;
    Ok(&a.matmul(b) - &b.matmul(a))
}

/// ab + ba.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    check_same_square(a, b)?;
    Ok(&a.matmul(b) + &b.matmul(a))
}

fn check_same_square(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(), LinalgError> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch(
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
        ));
    }
    Ok(())
}

/// exp(i s h) for Hermitian h, via spectral decomposition.
///
/// The result is unitary by construction up to the eigensolver tolerance.
pub fn expm_hermitian_phase(h: &ComplexMatrix, s: f64) -> Result<ComplexMatrix, LinalgError> {
    let decomp = h.eigh()?;
    let n = h.dim();
    let phases: Vec<C64> = decomp
        .eigenvalues
        .iter()
        .map(|&w| C64::from_polar(1.0, s * w))
        .collect();
    let v = &decomp.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        for i in 0..n {
            let left = v[(i, k)] * phases[k];
            for j in 0..n {
                out[(i, j)] += left * v[(j, k)].conj();
            }
        }
    }
    Ok(out)
}
