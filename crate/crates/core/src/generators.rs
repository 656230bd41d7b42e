//! Pauli and Gell-Mann generator sets with their SU(3) structure constants
//! and Casimir operators.
//!
//! The structure constants are not hard-coded: they are computed from the
//! trace formulas f_rst = Im Tr([λ_r, λ_s] λ_t)/4 and
//! d_rst = Re Tr({λ_r, λ_s} λ_t)/4, so the textbook table of independent
//! components becomes a test fixture instead of a transcription hazard.
//!
//! Indices are 1-based in documentation and serialized output; internal
//! storage is 0-based and never leaks.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{anticommutator, commutator, ComplexMatrix};

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("generator {index} is not Hermitian within {tol:e}")]
    NotHermitian { index: usize, tol: f64 },

    #[error("generator {index} is not traceless within {tol:e}")]
    NotTraceless { index: usize, tol: f64 },

    #[error("Tr[g_{r} g_{s}] != 2 delta_rs within {tol:e}")]
    NotOrthonormal { r: usize, s: usize, tol: f64 },
}

/// An ordered set of traceless Hermitian generators normalized to
/// Tr[g_r g_s] = 2 δ_rs.
#[derive(Clone)]
pub struct GeneratorSet {
    dimension: usize,
    matrices: Vec<ComplexMatrix>,
}

impl GeneratorSet {
    const TOL: f64 = 1e-12;

    fn validated(dimension: usize, matrices: Vec<ComplexMatrix>) -> Result<Self, GeneratorError> {
        for (k, m) in matrices.iter().enumerate() {
            if !m.is_hermitian(Self::TOL) {
                return Err(GeneratorError::NotHermitian {
                    index: k + 1,
                    tol: Self::TOL,
                });
            }
            if m.trace().norm() > Self::TOL {
                return Err(GeneratorError::NotTraceless {
                    index: k + 1,
                    tol: Self::TOL,
                });
            }
        }
        for r in 0..matrices.len() {
            for s in 0..matrices.len() {
                let overlap = matrices[r].matmul(&matrices[s]).trace();
                let expected = if r == s { 2.0 } else { 0.0 };
                if (overlap - C64::new(expected, 0.0)).norm() > Self::TOL {
                    return Err(GeneratorError::NotOrthonormal {
                        r: r + 1,
                        s: s + 1,
                        tol: Self::TOL,
                    });
                }
            }
        }
        Ok(Self {
            dimension,
            matrices,
        })
    }

    /// Bypasses validation; for deliberately corrupted fixtures in the
    /// self-check suite only.
    pub fn from_matrices_unchecked(dimension: usize, matrices: Vec<ComplexMatrix>) -> Self {
        Self {
            dimension,
            matrices,
        }
    }

    /// Hilbert-space dimension the generators act on (2 or 3).
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// 1-based access, matching the conventional σ_i / λ_i numbering.
    pub fn get(&self, index_1based: usize) -> &ComplexMatrix {
        &self.matrices[index_1based - 1]
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }
}

/// The Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli_set() -> GeneratorSet {
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let s1 = ComplexMatrix::from_rows(&[vec![zero, one], vec![one, zero]]);
    let s2 = ComplexMatrix::from_rows(&[vec![zero, -i], vec![i, zero]]);
    let s3 = ComplexMatrix::from_rows(&[vec![one, zero], vec![zero, -one]]);
    GeneratorSet::validated(2, vec![s1, s2, s3]).expect("Pauli set satisfies the invariants")
}

/// The Gell-Mann matrices λ₁..λ₈ (λ₈ carries the 1/√3 prefactor).
pub fn gell_mann_set() -> GeneratorSet {
    let i = C64::new(0.0, 1.0);
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let t = 1.0 / 3.0_f64.sqrt();
    let l1 = ComplexMatrix::from_rows(&[vec![z, o, z], vec![o, z, z], vec![z, z, z]]);
    let l2 = ComplexMatrix::from_rows(&[vec![z, -i, z], vec![i, z, z], vec![z, z, z]]);
    let l3 = ComplexMatrix::from_rows(&[vec![o, z, z], vec![z, -o, z], vec![z, z, z]]);
    let l4 = ComplexMatrix::from_rows(&[vec![z, z, o], vec![z, z, z], vec![o, z, z]]);
    let l5 = ComplexMatrix::from_rows(&[vec![z, z, -i], vec![z, z, z], vec![i, z, z]]);
    let l6 = ComplexMatrix::from_rows(&[vec![z, z, z], vec![z, z, o], vec![z, o, z]]);
    let l7 = ComplexMatrix::from_rows(&[vec![z, z, z], vec![z, z, -i], vec![z, i, z]]);
    let l8 = ComplexMatrix::from_real_rows(&[
        vec![t, 0.0, 0.0],
        vec![0.0, t, 0.0],
        vec![0.0, 0.0, -2.0 * t],
    ]);
    GeneratorSet::validated(3, vec![l1, l2, l3, l4, l5, l6, l7, l8])
        .expect("Gell-Mann set satisfies the invariants")
}

/// Shared Pauli set for hot paths.
pub fn pauli_cached() -> &'static GeneratorSet {
    static SET: OnceLock<GeneratorSet> = OnceLock::new();
    SET.get_or_init(pauli_set)
}

/// Shared Gell-Mann set for hot paths.
pub fn gell_mann_cached() -> &'static GeneratorSet {
    static SET: OnceLock<GeneratorSet> = OnceLock::new();
    SET.get_or_init(gell_mann_set)
}

/// Shared structure constants for hot paths.
pub fn structure_constants_cached() -> &'static StructureConstants {
    static CONSTANTS: OnceLock<StructureConstants> = OnceLock::new();
    CONSTANTS.get_or_init(structure_constants)
}

/// The SU(3) structure constants: fully antisymmetric f and fully
/// symmetric d, indexed 1..8 through [`StructureConstants::f`] /
/// [`StructureConstants::d`].
pub struct StructureConstants {
    f: Vec<f64>,
    d: Vec<f64>,
}

impl StructureConstants {
    fn flat(r: usize, s: usize, t: usize) -> usize {
        debug_assert!((1..=8).contains(&r) && (1..=8).contains(&s) && (1..=8).contains(&t));
        (r - 1) * 64 + (s - 1) * 8 + (t - 1)
    }

    /// f_rst with 1-based indices.
    pub fn f(&self, r: usize, s: usize, t: usize) -> f64 {
        self.f[Self::flat(r, s, t)]
    }

    /// d_rst with 1-based indices.
    pub fn d(&self, r: usize, s: usize, t: usize) -> f64 {
        self.d[Self::flat(r, s, t)]
    }

    /// Entries with |value| above `threshold`, as (r, s, t, value) with
    /// 1-based indices in lexicographic order.
    pub fn nonzero_f(&self, threshold: f64) -> Vec<(usize, usize, usize, f64)> {
        Self::collect_nonzero(&self.f, threshold)
    }

    pub fn nonzero_d(&self, threshold: f64) -> Vec<(usize, usize, usize, f64)> {
        Self::collect_nonzero(&self.d, threshold)
    }

    fn collect_nonzero(tensor: &[f64], threshold: f64) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for r in 1..=8 {
            for s in 1..=8 {
                for t in 1..=8 {
                    let v = tensor[Self::flat(r, s, t)];
                    if v.abs() > threshold {
                        out.push((r, s, t, v));
                    }
                }
            }
        }
        out
    }
}

/// Computes f and d from the trace formulas over the Gell-Mann set.
pub fn structure_constants() -> StructureConstants {
    let lambda = gell_mann_set();
    let mut f = vec![0.0_f64; 8 * 8 * 8];
    let mut d = vec![0.0_f64; 8 * 8 * 8];
    for r in 1..=8 {
        for s in 1..=8 {
            let comm = commutator(lambda.get(r), lambda.get(s)).expect("same dimension");
            let anti = anticommutator(lambda.get(r), lambda.get(s)).expect("same dimension");
            for t in 1..=8 {
                let f_val = comm.matmul(lambda.get(t)).trace().im / 4.0;
                let d_val = anti.matmul(lambda.get(t)).trace().re / 4.0;
                f[StructureConstants::flat(r, s, t)] = f_val;
                d[StructureConstants::flat(r, s, t)] = d_val;
            }
        }
    }
    StructureConstants { f, d }
}

/// The two SU(3) Casimir operators: c1 = Σ λᵢ² and c2 = Σ d_ijk λᵢλⱼλₖ.
/// Both commute with every generator.
pub fn casimirs() -> (ComplexMatrix, ComplexMatrix) {
    let lambda = gell_mann_set();
    let constants = structure_constants();
    let mut c1 = ComplexMatrix::zeros(3, 3);
    for i in 1..=8 {
        c1 = &c1 + &lambda.get(i).matmul(lambda.get(i));
    }
    let mut c2 = ComplexMatrix::zeros(3, 3);
    for i in 1..=8 {
        for j in 1..=8 {
            for k in 1..=8 {
                let coeff = constants.d(i, j, k);
                if coeff == 0.0 {
                    continue;
                }
                let product = lambda.get(i).matmul(lambda.get(j)).matmul(lambda.get(k));
                c2 = &c2 + &product.scale_re(coeff);
            }
        }
    }
    (c1, c2)
}
