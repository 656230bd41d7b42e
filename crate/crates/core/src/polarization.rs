//! Stokes operators on truncated two-mode Fock spaces and the depolarization
//! models built from them.
//!
//! The basis |N,k⟩ = |k⟩₊ ⊗ |N−k⟩₋ is ordered by ascending total photon
//! number N and, within a block, descending k, so the single-photon block is
//! (|1,1⟩, |1,0⟩) and S₃ restricted to it is diag(1, −1). Ladder actions:
//!
//! ```text
//! S₊|N,k⟩ = 2√((N−k)(k+1)) |N,k+1⟩      S₀|N,k⟩ = N |N,k⟩
//! S₋|N,k⟩ = 2√((N−k+1)k) |N,k−1⟩        S₃|N,k⟩ = (2k−N) |N,k⟩
//! ```
//!
//! Model construction bridges the superoperator convention
//! L[C]ρ = 2CρC† − {C†C, ρ} onto the engine's D[Γ]ρ = ΓρΓ† − ½{Γ†Γ, ρ}
//! through (γ/2)·L[C] = D[√γ·C]; every rate you see folded into a jump
//! operator below comes from that one rule.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::bloch::DensityMatrix;
use crate::linalg::ComplexMatrix;
use crate::lindblad::{LindbladError, LindbladModel};

/// Expectation of S₀ below which the degree of polarization is undefined.
const VACUUM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum PolarizationError {
    #[error("degree of polarization undefined: <S0> = {0:.3e} (vacuum-supported state)")]
    VacuumSupported(f64),

    #[error("the atomic-bath model requires a single-N block basis")]
    AtomicBathNeedsSingleBlock,

    #[error("the lossy model needs the vacuum-inclusive full basis")]
    LossyNeedsFullBasis,

    #[error("no closed-form polarization decay for the lossy model")]
    NoClosedForm,

    #[error("negative rate {0}")]
    NegativeRate(f64),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("operator dimension {got} does not match basis dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Model(#[from] LindbladError),
}

/// Truncated two-mode Fock basis, optionally restricted to one N block.
#[derive(Clone, Debug)]
pub struct TwoModeBasis {
    n_max: usize,
    states: Vec<(usize, usize)>,
}

impl TwoModeBasis {
    /// All |N,k⟩ with N ≤ n_max: dimension (n_max+1)(n_max+2)/2.
    pub fn new(n_max: usize) -> Self {
        let mut states = Vec::with_capacity((n_max + 1) * (n_max + 2) / 2);
        for n in 0..=n_max {
            for k in (0..=n).rev() {
                states.push((n, k));
            }
        }
        Self { n_max, states }
    }

    /// The (N+1)-dimensional block of fixed total photon number.
    pub fn single_block(n: usize) -> Self {
        Self {
            n_max: n,
            states: (0..=n).rev().map(|k| (n, k)).collect(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// (N, k) labels in basis order.
    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn index_of(&self, n: usize, k: usize) -> Option<usize> {
        self.states.iter().position(|&s| s == (n, k))
    }

    pub fn is_single_block(&self) -> bool {
        self.states.windows(2).all(|pair| pair[0].0 == pair[1].0)
    }

    pub fn includes_vacuum(&self) -> bool {
        self.states.first() == Some(&(0, 0))
    }

    /// Projector onto the basis state |N,k⟩.
    pub fn number_state(&self, n: usize, k: usize) -> DensityMatrix {
        let index = self.index_of(n, k).expect("state in basis");
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        m[(index, index)] = C64::new(1.0, 0.0);
        DensityMatrix::new(m).expect("projector is a valid state")
    }

    /// Largest |entry| connecting different N blocks.
    pub fn max_off_block_magnitude(&self, m: &ComplexMatrix) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if self.states[i].0 != self.states[j].0 {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// The Stokes operators on a basis.
#[derive(Clone)]
pub struct StokesOperatorSet {
    pub s0: ComplexMatrix,
    pub s1: ComplexMatrix,
    pub s2: ComplexMatrix,
    pub s3: ComplexMatrix,
    pub s_plus: ComplexMatrix,
    pub s_minus: ComplexMatrix,
}

/// Builds S₀, S₁, S₂, S₃, S± from the ladder matrix elements; all are
/// block-diagonal in N.
pub fn stokes_operators(basis: &TwoModeBasis) -> StokesOperatorSet {
    let dim = basis.dim();
    let mut s0 = ComplexMatrix::zeros(dim, dim);
    let mut s3 = ComplexMatrix::zeros(dim, dim);
    let mut s_plus = ComplexMatrix::zeros(dim, dim);
    let mut s_minus = ComplexMatrix::zeros(dim, dim);
    for (col, &(n, k)) in basis.states().iter().enumerate() {
        s0[(col, col)] = C64::new(n as f64, 0.0);
        s3[(col, col)] = C64::new(2.0 * k as f64 - n as f64, 0.0);
        if k < n {
            let row = basis.index_of(n, k + 1).expect("within block");
            let amplitude = 2.0 * (((n - k) * (k + 1)) as f64).sqrt();
            s_plus[(row, col)] = C64::new(amplitude, 0.0);
        }
        if k > 0 {
            let row = basis.index_of(n, k - 1).expect("within block");
            let amplitude = 2.0 * (((n - k + 1) * k) as f64).sqrt();
            s_minus[(row, col)] = C64::new(amplitude, 0.0);
        }
    }
    let s1 = (&s_plus + &s_minus).scale_re(0.5);
    let s2 = (&s_plus - &s_minus).scale(C64::new(0.0, -0.5));
    StokesOperatorSet {
        s0,
        s1,
        s2,
        s3,
        s_plus,
        s_minus,
    }
}

/// Two-mode annihilation operators on the full truncated basis:
/// a₊|N,k⟩ = √k |N−1,k−1⟩ and a₋|N,k⟩ = √(N−k) |N−1,k⟩.
pub fn annihilation_operators(basis: &TwoModeBasis) -> (ComplexMatrix, ComplexMatrix) {
    let dim = basis.dim();
    let mut a_plus = ComplexMatrix::zeros(dim, dim);
    let mut a_minus = ComplexMatrix::zeros(dim, dim);
    for (col, &(n, k)) in basis.states().iter().enumerate() {
        if k > 0 {
            if let Some(row) = basis.index_of(n - 1, k - 1) {
                a_plus[(row, col)] = C64::new((k as f64).sqrt(), 0.0);
            }
        }
        if n > k {
            if let Some(row) = basis.index_of(n - 1, k) {
                a_minus[(row, col)] = C64::new(((n - k) as f64).sqrt(), 0.0);
            }
        }
    }
    (a_plus, a_minus)
}

/// Which depolarization dynamics to build, with rates in 1/time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolarizationModelKind {
    /// Photon loss into a zero-temperature bath: Σ_s (γ_s/2) L[a_s].
    Lossy { gamma_plus: f64, gamma_minus: f64 },
    /// Number-conserving scattering: Σ_s (γ_s/2) L[a_s†a_s].
    PureDephasing { gamma_plus: f64, gamma_minus: f64 },
    /// Dispersive coupling to a randomized atomic bath:
    /// −iω[S₀, ·] + 2γ L[S₀] + γ L[S₊] + γ L[S₋].
    AtomicBath { gamma: f64, omega: f64 },
}

impl PolarizationModelKind {
    fn validate(&self) -> Result<(), PolarizationError> {
        let rates: &[f64] = match self {
            PolarizationModelKind::Lossy {
                gamma_plus,
                gamma_minus,
            }
            | PolarizationModelKind::PureDephasing {
                gamma_plus,
                gamma_minus,
            } => &[*gamma_plus, *gamma_minus],
            PolarizationModelKind::AtomicBath { gamma, .. } => &[*gamma],
        };
        for &rate in rates {
            if rate < 0.0 {
                return Err(PolarizationError::NegativeRate(rate));
            }
        }
        Ok(())
    }
}

/// Assembles the Lindblad model for a depolarization process.
///
/// Jump registration applies (γ/2)L[C] = D[√γ·C] throughout:
/// the lossy terms (γ_s/2)L[a_s] become jumps √γ_s·a_s, the pure-dephasing
/// terms (γ_s/2)L[a_s†a_s] become √γ_s·a_s†a_s, and the atomic-bath terms
/// 2γL[S₀], γL[S±] become 2√γ·S₀ and √(2γ)·S±.
pub fn build_model(
    kind: PolarizationModelKind,
    basis: &TwoModeBasis,
) -> Result<LindbladModel, PolarizationError> {
    kind.validate()?;
    let dim = basis.dim();
    match kind {
        PolarizationModelKind::Lossy {
            gamma_plus,
            gamma_minus,
        } => {
            if !basis.includes_vacuum() {
                return Err(PolarizationError::LossyNeedsFullBasis);
            }
            let (a_plus, a_minus) = annihilation_operators(basis);
            Ok(LindbladModel::new(
                ComplexMatrix::zeros(dim, dim),
                vec![
                    a_plus.scale_re(gamma_plus.sqrt()),
                    a_minus.scale_re(gamma_minus.sqrt()),
                ],
            )?)
        }
        PolarizationModelKind::PureDephasing {
            gamma_plus,
            gamma_minus,
        } => {
            let mut number_plus = ComplexMatrix::zeros(dim, dim);
            let mut number_minus = ComplexMatrix::zeros(dim, dim);
            for (i, &(n, k)) in basis.states().iter().enumerate() {
                number_plus[(i, i)] = C64::new(k as f64, 0.0);
                number_minus[(i, i)] = C64::new((n - k) as f64, 0.0);
            }
            Ok(LindbladModel::new(
                ComplexMatrix::zeros(dim, dim),
                vec![
                    number_plus.scale_re(gamma_plus.sqrt()),
                    number_minus.scale_re(gamma_minus.sqrt()),
                ],
            )?)
        }
        PolarizationModelKind::AtomicBath { gamma, omega } => {
            if !basis.is_single_block() {
                return Err(PolarizationError::AtomicBathNeedsSingleBlock);
            }
            let ops = stokes_operators(basis);
            // The −iω[S₀, ρ] term vanishes identically on a single block
            // (S₀ = N·I there); it is kept for fidelity to the model.
            Ok(LindbladModel::new(
                ops.s0.scale_re(omega),
                vec![
                    ops.s0.scale_re(2.0 * gamma.sqrt()),
                    ops.s_plus.scale_re((2.0 * gamma).sqrt()),
                    ops.s_minus.scale_re((2.0 * gamma).sqrt()),
                ],
            )?)
        }
    }
}

/// Expectations (⟨S₀⟩, ⟨S₁⟩, ⟨S₂⟩, ⟨S₃⟩); imaginary residues are discarded
/// (the operators are Hermitian).
pub fn stokes_expectations(rho: &DensityMatrix, ops: &StokesOperatorSet) -> [f64; 4] {
    let expect = |op: &ComplexMatrix| rho.matrix().matmul(op).trace().re;
    [
        expect(&ops.s0),
        expect(&ops.s1),
        expect(&ops.s2),
        expect(&ops.s3),
    ]
}

/// P = √(⟨S₁⟩² + ⟨S₂⟩² + ⟨S₃⟩²)/⟨S₀⟩, undefined on vacuum-supported states.
pub fn degree_of_polarization(
    rho: &DensityMatrix,
    ops: &StokesOperatorSet,
) -> Result<f64, PolarizationError> {
    let [s0, s1, s2, s3] = stokes_expectations(rho, ops);
    if s0 <= VACUUM_TOL {
        return Err(PolarizationError::VacuumSupported(s0));
    }
    Ok((s1 * s1 + s2 * s2 + s3 * s3).sqrt() / s0)
}

/// Closed-form P(t) for the single-photon block, from the Bloch components
/// s = (⟨S₁⟩, ⟨S₂⟩, ⟨S₃⟩) at t = 0:
///
/// - pure dephasing (γ' = γ₊ + γ₋):
///   P(t) = √(s_x² e^(−γ′t) + s_y² e^(−γ′t) + s_z²);
/// - atomic bath (γ' = 8γ):
///   P(t) = e^(−γ′t) √(s_x² + s_y² + s_z² e^(−2γ′t));
/// - lossy: no closed form (compare trajectories instead).
pub fn analytic_polarization_decay(
    kind: PolarizationModelKind,
    s0: [f64; 3],
    t: f64,
) -> Result<f64, PolarizationError> {
    if t < 0.0 {
        return Err(PolarizationError::NegativeTime(t));
    }
    kind.validate()?;
    let [sx, sy, sz] = s0;
    match kind {
        PolarizationModelKind::PureDephasing {
            gamma_plus,
            gamma_minus,
        } => {
            let decay = (-(gamma_plus + gamma_minus) * t).exp();
            Ok((sx * sx * decay + sy * sy * decay + sz * sz).sqrt())
        }
        PolarizationModelKind::AtomicBath { gamma, .. } => {
            let rate = 8.0 * gamma;
            let envelope = (-rate * t).exp();
            Ok(envelope * (sx * sx + sy * sy + sz * sz * (-2.0 * rate * t).exp()).sqrt())
        }
        PolarizationModelKind::Lossy { .. } => Err(PolarizationError::NoClosedForm),
    }
}

/// Σ_i (⟨S_i²⟩ − ⟨S_i⟩²) − 2⟨S₀⟩, which is non-negative for every state
/// except the two-mode vacuum (where it sits exactly on the −0 boundary).
pub fn uncertainty_check(rho: &DensityMatrix, ops: &StokesOperatorSet) -> f64 {
    let variance = |op: &ComplexMatrix| {
        let mean = rho.matrix().matmul(op).trace().re;
        let mean_sq = rho.matrix().matmul(&op.matmul(op)).trace().re;
        mean_sq - mean * mean
    };
    let s0 = rho.matrix().matmul(&ops.s0).trace().re;
    variance(&ops.s1) + variance(&ops.s2) + variance(&ops.s3) - 2.0 * s0
}

/// Classical Stokes parameters (S₀, S₁, S₂, S₃) of two orthogonal complex
/// amplitudes with relative phase δ = arg E₋ − arg E₊:
/// S₀ = |E₊|² + |E₋|², S₁ = |E₊|² − |E₋|², S₂ = 2|E₊||E₋|cos δ,
/// S₃ = 2|E₊||E₋|sin δ.
pub fn classical_stokes(e_plus: C64, e_minus: C64) -> [f64; 4] {
    let cross = e_plus.conj() * e_minus;
    [
        e_plus.norm_sqr() + e_minus.norm_sqr(),
        e_plus.norm_sqr() - e_minus.norm_sqr(),
        2.0 * cross.re,
        2.0 * cross.im,
    ]
}

/// Rebuilds a matrix in a permuted basis: `permutation[new] = old`.
pub fn reorder_basis(m: &ComplexMatrix, permutation: &[usize]) -> ComplexMatrix {
    let n = permutation.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = m[(permutation[i], permutation[j])];
        }
    }
    out
}
