//! Adjoint (octet) representation maps and octet-vector products.
//!
//! A unitary u acting on states induces an orthogonal rotation of Bloch
//! components, R_ik(u) = (1/2) Tr[g_i u g_k u†] over the generator basis:
//! SU(2) → SO(3) through the Pauli set and SU(3) → SO(8) through the
//! Gell-Mann set. The map is a homomorphism, R(u)R(u') = R(uu'), and the
//! image inside SO(8) is only an eight-parameter subgroup.
//!
//! Octet vectors a, b ∈ R⁸ carry one invariant scalar and two covariant
//! products built from the structure constants:
//! a·b = Σ a_r b_r, (a ∧ b)_r = f_rst a_s b_t, (a ∗ b)_r = √3 d_rst a_s b_t.

use thiserror::Error;

use crate::bloch::BlochVector8;
use crate::generators::{gell_mann_cached, pauli_cached, structure_constants_cached, GeneratorSet};
use crate::linalg::ComplexMatrix;

const UNITARITY_TOL: f64 = 1e-10;
const ORTHOGONALITY_TOL: f64 = 1e-10;
const DETERMINANT_TOL: f64 = 1e-9;
const IM_RESIDUE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum AdjointError {
    #[error("input is not unitary within {tol:e} (|u u† - I| = {violation:.3e})")]
    NotUnitary { violation: f64, tol: f64 },

    #[error("expected a {expected}x{expected} unitary, got {got}x{got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("adjoint image failed {check}: residual {residual:.3e}")]
    NotOrthogonal { check: &'static str, residual: f64 },

    #[error("trace formula produced imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),
}

/// A real orthogonal, unimodular matrix (dim 3 or 8 here).
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl OrthogonalMatrix {
    fn validated(dim: usize, entries: Vec<f64>) -> Result<Self, AdjointError> {
        let m = Self { dim, entries };
        let mut gram_residual = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                let dot: f64 = (0..dim).map(|k| m.get(i, k) * m.get(j, k)).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                gram_residual = gram_residual.max((dot - expected).abs());
            }
        }
        if gram_residual > ORTHOGONALITY_TOL {
            return Err(AdjointError::NotOrthogonal {
                check: "R R^T = I",
                residual: gram_residual,
            });
        }
        let det = m.det();
        if (det - 1.0).abs() > DETERMINANT_TOL {
            return Err(AdjointError::NotOrthogonal {
                check: "det R = 1",
                residual: (det - 1.0).abs(),
            });
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn det(&self) -> f64 {
        let complex = ComplexMatrix::from_real_rows(
            &(0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
                .collect::<Vec<_>>(),
        );
        complex.det().re
    }

    pub fn matmul(&self, other: &OrthogonalMatrix) -> OrthogonalMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        OrthogonalMatrix { dim: n, entries }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn apply_octet(&self, v: &OctetVector) -> OctetVector {
        assert_eq!(self.dim, 8);
        let rotated = self.apply(&v.0);
        OctetVector(rotated.try_into().expect("dimension 8"))
    }

    pub fn max_abs_diff(&self, other: &OrthogonalMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }
}

fn adjoint_matrix(
    u: &ComplexMatrix,
    generators: &GeneratorSet,
) -> Result<OrthogonalMatrix, AdjointError> {
    let dim = generators.dimension();
    if u.rows() != dim || u.cols() != dim {
        return Err(AdjointError::WrongDimension {
            expected: dim,
            got: u.rows(),
        });
    }
    let gram = u.matmul(&u.dagger());
    let violation = gram
        .max_abs_diff(&ComplexMatrix::identity(dim))
        .expect("same dimensions");
    if violation > UNITARITY_TOL {
        return Err(AdjointError::NotUnitary {
            violation,
            tol: UNITARITY_TOL,
        });
    }
    let count = generators.len();
    let u_dag = u.dagger();
    // R_ik = (1/2) Tr[g_i u g_k u†]; precompute the conjugated generators.
    let conjugated: Vec<ComplexMatrix> = (1..=count)
        .map(|k| u.matmul(generators.get(k)).matmul(&u_dag))
        .collect();
    let mut entries = vec![0.0; count * count];
    for i in 0..count {
        for (k, conj) in conjugated.iter().enumerate() {
            let t = generators.get(i + 1).matmul(conj).trace() * 0.5;
            if t.im.abs() > IM_RESIDUE_TOL {
                return Err(AdjointError::ImaginaryResidue(t.im.abs()));
            }
            entries[i * count + k] = t.re;
        }
    }
    OrthogonalMatrix::validated(count, entries)
}

/// SO(3) image of a 2x2 unitary: R_ik = (1/2) Re Tr[σ_i u σ_k u†].
pub fn adjoint_so3(u: &ComplexMatrix) -> Result<OrthogonalMatrix, AdjointError> {
    adjoint_matrix(u, pauli_cached())
}

/// SO(8) image of a 3x3 unitary: R_ik = (1/2) Re Tr[λ_i u λ_k u†].
pub fn adjoint_so8(u: &ComplexMatrix) -> Result<OrthogonalMatrix, AdjointError> {
    adjoint_matrix(u, gell_mann_cached())
}

/// Eight real components of an adjoint (octet) vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OctetVector(pub [f64; 8]);

impl OctetVector {
    pub fn zero() -> Self {
        Self([0.0; 8])
    }

    /// Unit vector along the 1-based axis r.
    pub fn axis(r: usize) -> Self {
        let mut v = [0.0; 8];
        v[r - 1] = 1.0;
        Self(v)
    }

    pub fn component(&self, index_1based: usize) -> f64 {
        self.0[index_1based - 1]
    }

    pub fn max_abs_diff(&self, other: &OctetVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<BlochVector8> for OctetVector {
    fn from(n: BlochVector8) -> Self {
        Self(n.0)
    }
}

/// Invariant scalar product Σ a_r b_r.
pub fn octet_dot(a: &OctetVector, b: &OctetVector) -> f64 {
    a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum()
}

/// Antisymmetric product (a ∧ b)_r = f_rst a_s b_t.
pub fn octet_wedge(a: &OctetVector, b: &OctetVector) -> OctetVector {
    let c = structure_constants_cached();
    let mut out = [0.0; 8];
    for r in 1..=8 {
        let mut sum = 0.0;
        for s in 1..=8 {
            let a_s = a.component(s);
            if a_s == 0.0 {
                continue;
            }
            for t in 1..=8 {
                sum += c.f(r, s, t) * a_s * b.component(t);
            }
        }
        out[r - 1] = sum;
    }
    OctetVector(out)
}

/// Symmetric product (a ∗ b)_r = √3 d_rst a_s b_t.
pub fn octet_star(a: &OctetVector, b: &OctetVector) -> OctetVector {
    let c = structure_constants_cached();
    let sqrt3 = 3.0_f64.sqrt();
    let mut out = [0.0; 8];
    for r in 1..=8 {
        let mut sum = 0.0;
        for s in 1..=8 {
            let a_s = a.component(s);
            if a_s == 0.0 {
                continue;
            }
            for t in 1..=8 {
                sum += c.d(r, s, t) * a_s * b.component(t);
            }
        }
        out[r - 1] = sqrt3 * sum;
    }
    OctetVector(out)
}
