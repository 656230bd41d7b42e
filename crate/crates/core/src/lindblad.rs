//! Lindblad models, the master-equation right-hand side, a fixed-step RK4
//! trajectory integrator, and the closed-form dephasing solution used as an
//! oracle for it.
//!
//! The dissipator convention is D[Γ]ρ = ΓρΓ† − ½{Γ†Γ, ρ}, with rates folded
//! into the jump operators (Γ = √rate · operator). For Hermitian jumps the
//! Γ†ρΓ and ΓρΓ† orderings coincide.
//!
//! The qutrit dephasing model (H = (Ω/2)λ₃, Γ = √η λ₃) admits the exact
//! solution implemented in [`analytic_dephasing_solution`]: populations
//! constant, ρ₁₂ ∝ e^(−iΩ−2η)t, ρ₁₃ ∝ e^(−iΩ/2−η/2)t, ρ₂₃ ∝ e^(iΩ/2−η/2)t.
//! The ρ₂₃ decay exponent is fixed by the ODE ρ̇₂₃ = ρ₂₃(iΩ−η)/2 and by
//! Hermiticity with ρ₃₂; a growing exponent would violate both.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::bloch::{BlochError, BlochVector8, DensityMatrix};
use crate::generators::gell_mann_cached;
use crate::linalg::{ComplexMatrix, ComplexVector};

/// Positivity floor for numerically integrated states.
pub const EVOLVED_PSD_TOL: f64 = -1e-7;
/// Hermiticity tolerance for model Hamiltonians.
const HAMILTONIAN_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LindbladError {
    #[error("Hamiltonian is not Hermitian within {tol:e} (violation {violation:.3e})")]
    HamiltonianNotHermitian { violation: f64, tol: f64 },

    #[error("operator dimensions disagree: Hamiltonian is {expected}, found {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix entries are not finite")]
    NotFinite,

    #[error("positivity violated at t = {time}: min eigenvalue {min_eigenvalue:.3e}")]
    PositivityViolation { time: f64, min_eigenvalue: f64 },

    #[error("state became non-finite (NaN/Inf) at t = {time}")]
    NumericalBlowup { time: f64 },

    #[error("invalid integration setup: {0}")]
    InvalidSetup(String),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error(transparent)]
    State(#[from] BlochError),
}

/// A Hamiltonian plus jump operators with rates folded in (√rate · operator).
#[derive(Clone)]
pub struct LindbladModel {
    hamiltonian: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
}

impl LindbladModel {
    pub fn new(
        hamiltonian: ComplexMatrix,
        jumps: Vec<ComplexMatrix>,
    ) -> Result<Self, LindbladError> {
        if !hamiltonian.is_finite() || jumps.iter().any(|j| !j.is_finite()) {
            return Err(LindbladError::NotFinite);
        }
        let (violation, _, _) = hamiltonian.hermiticity_violation();
        if !hamiltonian.is_square() || violation > HAMILTONIAN_TOL {
            return Err(LindbladError::HamiltonianNotHermitian {
                violation,
                tol: HAMILTONIAN_TOL,
            });
        }
        let dim = hamiltonian.dim();
        for jump in &jumps {
            if !jump.is_square() || jump.dim() != dim {
                return Err(LindbladError::DimensionMismatch {
                    expected: dim,
                    got: jump.rows(),
                });
            }
        }
        Ok(Self { hamiltonian, jumps })
    }

    /// The qutrit dephasing model: H = (Ω/2) λ₃, Γ = √η λ₃.
    pub fn dephasing3(omega: f64, eta: f64) -> Self {
        let lambda3 = gell_mann_cached().get(3);
        Self::new(
            lambda3.scale_re(omega / 2.0),
            vec![lambda3.scale_re(eta.sqrt())],
        )
        .expect("λ₃ is Hermitian")
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// dρ/dt = −i[H, ρ] + Σ_i (Γ_i ρ Γ_i† − ½{Γ_i†Γ_i, ρ}).
    ///
    /// The result is Hermitian and traceless for any jumps (Hermitian or
    /// not), which is what keeps the flow trace-preserving.
    pub fn rhs(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix, LindbladError> {
        if !rho.is_square() || rho.dim() != self.dim() {
            return Err(LindbladError::DimensionMismatch {
                expected: self.dim(),
                got: rho.rows(),
            });
        }
        let i = C64::new(0.0, 1.0);
        let h_rho = self.hamiltonian.matmul(rho);
        let rho_h = rho.matmul(&self.hamiltonian);
        let mut out = (&h_rho - &rho_h).scale(-i);
        for jump in &self.jumps {
            out = &out + &dissipator(jump, rho);
        }
        Ok(out)
    }

    /// Same right-hand side on a validated state.
    pub fn rhs_density(&self, rho: &DensityMatrix) -> Result<ComplexMatrix, LindbladError> {
        self.rhs(rho.matrix())
    }
}

/// D[Γ]ρ = ΓρΓ† − ½{Γ†Γ, ρ}.
pub fn dissipator(jump: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let jump_dag = jump.dagger();
    let sandwich = jump.matmul(rho).matmul(&jump_dag);
    let number = jump_dag.matmul(jump);
    let anti = &number.matmul(rho) + &rho.matmul(&number);
    &sandwich - &anti.scale_re(0.5)
}

/// Time-ordered density-matrix samples from one integration run.
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    model: LindbladModel,
    max_trace_drift: f64,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn model(&self) -> &LindbladModel {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest |Tr ρ(t) − 1| seen across all samples.
    pub fn max_trace_drift(&self) -> f64 {
        self.max_trace_drift
    }

    /// Per-sample (t, n₁..n₈, r, purity) rows for a qutrit trajectory.
    pub fn observables(&self) -> Result<Vec<ObservableRow>, LindbladError> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, rho)| {
                let n = rho.bloch_vector()?;
                Ok(ObservableRow {
                    time: t,
                    bloch: n,
                    radius: n.radius(),
                    purity: rho.purity(),
                })
            })
            .collect()
    }
}

/// One row of the trajectory observable table.
#[derive(Clone, Copy, Debug)]
pub struct ObservableRow {
    pub time: f64,
    pub bloch: BlochVector8,
    pub radius: f64,
    pub purity: f64,
}

/// Integrates dρ/dt with classical fixed-step RK4.
///
/// After each step the state is re-Hermitized as (ρ + ρ†)/2. Samples are
/// recorded every `sample_every` steps plus the final time; each sample is
/// validated (Hermitian, positive within −1e-7, finite) and the positivity
/// or NaN failure is reported with the offending time.
pub fn evolve(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_end: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory, LindbladError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(LindbladError::InvalidSetup(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if t_end < 0.0 {
        return Err(LindbladError::InvalidSetup(format!(
            "t_end must be non-negative, got {t_end}"
        )));
    }
    if rho0.dim() != model.dim() {
        return Err(LindbladError::DimensionMismatch {
            expected: model.dim(),
            got: rho0.dim(),
        });
    }
    let sample_every = sample_every.max(1);
    let steps = (t_end / dt).round() as usize;

    let mut times = Vec::with_capacity(steps / sample_every + 2);
    let mut states = Vec::with_capacity(steps / sample_every + 2);
    let mut max_trace_drift = 0.0_f64;

    let mut record = |t: f64,
                      m: &ComplexMatrix,
                      drift: &mut f64|
     -> Result<(), LindbladError> {
        if !m.is_finite() {
            return Err(LindbladError::NumericalBlowup { time: t });
        }
        let state = DensityMatrix::with_psd_tolerance(m.clone(), EVOLVED_PSD_TOL).map_err(
            |err| match err {
                BlochError::NotPositive { min_eigenvalue } => LindbladError::PositivityViolation {
                    time: t,
                    min_eigenvalue,
                },
                BlochError::NotFinite => LindbladError::NumericalBlowup { time: t },
                other => LindbladError::State(other),
            },
        )?;
        *drift = drift.max((m.trace() - C64::new(1.0, 0.0)).norm());
        times.push(t);
        states.push(state);
        Ok(())
    };

    let mut current = rho0.matrix().clone();
    record(0.0, &current, &mut max_trace_drift)?;

    for step in 1..=steps {
        let k1 = model.rhs(&current)?;
        let k2 = model.rhs(&(&current + &k1.scale_re(dt / 2.0)))?;
        let k3 = model.rhs(&(&current + &k2.scale_re(dt / 2.0)))?;
        let k4 = model.rhs(&(&current + &k3.scale_re(dt)))?;
        let increment = &(&k1 + &k4) + &(&k2 + &k3).scale_re(2.0);
        current = &current + &increment.scale_re(dt / 6.0);
        current = current.hermitian_part();
        if step % sample_every == 0 || step == steps {
            record(step as f64 * dt, &current, &mut max_trace_drift)?;
        }
    }

    Ok(Trajectory {
        times,
        states,
        model: model.clone(),
        max_trace_drift,
    })
}

/// Amplitudes and rates of the dephasing model's initial pure state
/// δ₁|1⟩ + δ₂|2⟩ + δ₃|3⟩ with Σ|δ_i|² = 1.
#[derive(Clone, Copy, Debug)]
pub struct DephasingParams {
    pub delta: [C64; 3],
    pub omega: f64,
    pub eta: f64,
}

impl DephasingParams {
    pub fn new(delta: [C64; 3], omega: f64, eta: f64) -> Result<Self, LindbladError> {
        let norm: f64 = delta.iter().map(|d| d.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(LindbladError::InvalidSetup(format!(
                "|δ|² must be 1, got {norm}"
            )));
        }
        if eta < 0.0 {
            return Err(LindbladError::InvalidSetup(format!(
                "η must be non-negative, got {eta}"
            )));
        }
        Ok(Self { delta, omega, eta })
    }

    /// Equal-weight superposition (1, 1, 1)/√3.
    pub fn uniform(omega: f64, eta: f64) -> Self {
        let d = C64::new(1.0 / 3.0_f64.sqrt(), 0.0);
        Self::new([d, d, d], omega, eta).expect("normalized by construction")
    }

    pub fn model(&self) -> LindbladModel {
        LindbladModel::dephasing3(self.omega, self.eta)
    }

    pub fn initial_state(&self) -> DensityMatrix {
        let psi = ComplexVector::new(self.delta.to_vec());
        DensityMatrix::pure(&psi).expect("normalized amplitudes")
    }
}

/// Exact dephasing-model state at time t:
///
/// ```text
/// ρ₁₁, ρ₂₂, ρ₃₃ constant at |δ₁|², |δ₂|², |δ₃|²
/// ρ₁₂(t) = δ₁δ₂* e^(−iΩ−2η)t
/// ρ₁₃(t) = δ₁δ₃* e^(−iΩ/2−η/2)t
/// ρ₂₃(t) = δ₂δ₃* e^(+iΩ/2−η/2)t
/// ```
///
/// with the lower triangle fixed by Hermiticity.
pub fn analytic_dephasing_solution(
    p: &DephasingParams,
    t: f64,
) -> Result<DensityMatrix, LindbladError> {
    if t < 0.0 {
        return Err(LindbladError::NegativeTime(t));
    }
    let [d1, d2, d3] = p.delta;
    let omega = p.omega;
    let eta = p.eta;
    let exp = |re: f64, im: f64| C64::new(re * t, im * t).exp();
    let rho12 = d1 * d2.conj() * exp(-2.0 * eta, -omega);
    let rho13 = d1 * d3.conj() * exp(-eta / 2.0, -omega / 2.0);
    let rho23 = d2 * d3.conj() * exp(-eta / 2.0, omega / 2.0);
    let m = ComplexMatrix::from_rows(&[
        vec![C64::new(d1.norm_sqr(), 0.0), rho12, rho13],
        vec![rho12.conj(), C64::new(d2.norm_sqr(), 0.0), rho23],
        vec![rho13.conj(), rho23.conj(), C64::new(d3.norm_sqr(), 0.0)],
    ]);
    Ok(DensityMatrix::new(m)?)
}
