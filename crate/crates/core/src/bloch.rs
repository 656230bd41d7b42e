//! Density matrices, 8-component Bloch vectors, sphere parameters, and the
//! non-unit ray ansatz connecting them.
//!
//! The conventions used throughout:
//!
//! - qutrit Bloch components n_i = (√3/2) Tr[ρ λ_i], so that
//!   ρ = I/3 + Σ_i (n_i/√3) λ_i and pure states sit at radius 1;
//! - qubit Bloch components n_i = Tr[ρ σ_i];
//! - the non-unit ray
//!   |ψ⟩ = √r (e^{i(α−γ)} sinθ cosφ, e^{i(β−χ)} sinθ sinφ, e^{iξ} cosθ)
//!   with ⟨ψ|ψ⟩ = r, whose Bloch image has radius exactly r.
//!
//! The ray carries three phase combinations ((β−χ)−(α−γ), (α−γ)−ξ, (β−χ)−ξ),
//! one of which is redundant through the overall phase, so recovering
//! parameters from a density matrix is done in the gauge γ = χ = β = 0:
//! ξ is read off the (n₇, n₆) arctangent relation and α from the (n₅, n₄)
//! one. Recovery is exact (up to that gauge) for states in the image of the
//! ray map; for other mixed states the parameters are a formal best effort
//! and [`BlochParameters::roundtrip_residual`] reports the gap.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::generators::{gell_mann_cached, pauli_cached};
use crate::linalg::{ComplexMatrix, ComplexVector};

pub(crate) const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Largest tolerated |Im| on a quantity that must come out real.
const IM_RESIDUE_TOL: f64 = 1e-12;
/// Hermiticity / trace tolerance for density-matrix validation.
const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues may undershoot zero by this much and still count as physical.
const PSD_TOL: f64 = -1e-9;
/// Below this radius the sphere parameters are considered degenerate.
const DEGENERATE_RADIUS: f64 = 1e-9;
/// Below this magnitude an angle-pair arctangent is indeterminate.
const PAIR_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum BlochError {
    #[error("matrix is not Hermitian within {tol:e} (violation {violation:.3e})")]
    NotHermitian { violation: f64, tol: f64 },

    #[error("trace is {trace} instead of 1")]
    TraceNotOne { trace: C64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix entries are not finite")]
    NotFinite,

    #[error("expected a {expected}x{expected} matrix, got {got}x{got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("Bloch radius {radius} exceeds 1 (unphysical)")]
    RadiusTooLarge { radius: f64 },

    #[error("negative radius {0}")]
    NegativeRadius(f64),

    #[error("Bloch component n{index} has imaginary residue {magnitude:.3e}")]
    ImaginaryResidue { index: usize, magnitude: f64 },

    #[error("state is degenerate: Bloch radius {radius:.3e} below {threshold:e}")]
    Degenerate { radius: f64, threshold: f64 },

    #[error("angle {angle} is indeterminate: |({pair})| = {magnitude:.3e} below {threshold:e}")]
    IndeterminateAngle {
        angle: &'static str,
        pair: &'static str,
        magnitude: f64,
        threshold: f64,
    },

    #[error("ray has zero norm")]
    ZeroNormRay,
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates with the default tolerances (Hermiticity and trace 1e-10,
    /// eigenvalues ≥ -1e-9).
    pub fn new(m: ComplexMatrix) -> Result<Self, BlochError> {
        Self::with_psd_tolerance(m, PSD_TOL)
    }

    /// Validates with a caller-chosen positivity floor; numerically
    /// integrated states use a looser -1e-7.
    pub fn with_psd_tolerance(m: ComplexMatrix, psd_tol: f64) -> Result<Self, BlochError> {
        if !m.is_finite() {
            return Err(BlochError::NotFinite);
        }
        let (violation, _, _) = m.hermiticity_violation();
        if !m.is_square() || violation > DENSITY_TOL {
            return Err(BlochError::NotHermitian {
                violation,
                tol: DENSITY_TOL,
            });
        }
        let trace = m.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(BlochError::TraceNotOne { trace });
        }
        let eigenvalues = m
            .eigvalsh()
            .expect("Hermiticity was validated before the eigensolve");
        let min_eigenvalue = eigenvalues[0];
        if min_eigenvalue < psd_tol {
            return Err(BlochError::NotPositive { min_eigenvalue });
        }
        Ok(Self { m })
    }

    /// Normalized projector |ψ⟩⟨ψ| / ⟨ψ|ψ⟩.
    pub fn pure(psi: &ComplexVector) -> Result<Self, BlochError> {
        let norm_sqr = psi.norm_sqr();
        if norm_sqr <= 0.0 {
            return Err(BlochError::ZeroNormRay);
        }
        let m = psi.outer(psi).scale_re(1.0 / norm_sqr);
        Self::new(m)
    }

    /// The maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            m: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Tr[ρ²], in [1/d, 1] for valid states.
    pub fn purity(&self) -> f64 {
        self.m.matmul(&self.m).trace().re
    }

    /// Bloch vector of a 3x3 state: n_i = (√3/2) Tr[ρ λ_i].
    pub fn bloch_vector(&self) -> Result<BlochVector8, BlochError> {
        if self.dim() != 3 {
            return Err(BlochError::WrongDimension {
                expected: 3,
                got: self.dim(),
            });
        }
        bloch_components(&self.m)
    }

    /// Bloch vector of a 2x2 state: n_i = Tr[ρ σ_i].
    pub fn bloch3(&self) -> Result<[f64; 3], BlochError> {
        if self.dim() != 2 {
            return Err(BlochError::WrongDimension {
                expected: 2,
                got: self.dim(),
            });
        }
        let sigma = pauli_cached();
        let mut out = [0.0; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let t = self.m.matmul(sigma.get(i + 1)).trace();
            if t.im.abs() > IM_RESIDUE_TOL {
                return Err(BlochError::ImaginaryResidue {
                    index: i + 1,
                    magnitude: t.im.abs(),
                });
            }
            *slot = t.re;
        }
        Ok(out)
    }

    /// Overlap (u, v) and inversion (w) combinations of a 3x3 state.
    pub fn overlap_inversion(&self) -> Result<OverlapInversion, BlochError> {
        if self.dim() != 3 {
            return Err(BlochError::WrongDimension {
                expected: 3,
                got: self.dim(),
            });
        }
        let m = &self.m;
        let u = |a: usize, b: usize| (m[(a, b)] + m[(b, a)]).re;
        let v = |a: usize, b: usize| (C64::new(0.0, 1.0) * (m[(a, b)] - m[(b, a)])).re;
        Ok(OverlapInversion {
            u12: u(0, 1),
            u13: u(0, 2),
            u23: u(1, 2),
            v12: v(0, 1),
            v13: v(0, 2),
            v23: v(1, 2),
            w2: (m[(0, 0)] - m[(1, 1)]).re,
            w3: 0.5 * (m[(0, 0)] + m[(1, 1)] - (m[(2, 2)] + m[(2, 2)])).re,
        })
    }

    /// Sphere parameters of a 3x3 state, gauge γ = χ = β = 0.
    pub fn parameters(&self) -> Result<BlochParameters, BlochError> {
        let n = self.bloch_vector()?;
        parameters_from_bloch(&n)
    }
}

fn bloch_components(m: &ComplexMatrix) -> Result<BlochVector8, BlochError> {
    let lambda = gell_mann_cached();
    let mut n = [0.0_f64; 8];
    for (i, slot) in n.iter_mut().enumerate() {
        let t = m.matmul(lambda.get(i + 1)).trace() * (SQRT3 / 2.0);
        if t.im.abs() > IM_RESIDUE_TOL {
            return Err(BlochError::ImaginaryResidue {
                index: i + 1,
                magnitude: t.im.abs(),
            });
        }
        *slot = t.re;
    }
    Ok(BlochVector8(n))
}

/// Eight real Bloch components n₁..n₈.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector8(pub [f64; 8]);

impl BlochVector8 {
    pub fn zero() -> Self {
        Self([0.0; 8])
    }

    /// 1-based component access.
    pub fn component(&self, index_1based: usize) -> f64 {
        self.0[index_1based - 1]
    }

    pub fn radius(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &BlochVector8) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// ρ = I/3 + Σ_i (n_i/√3) λ_i, validated physical (the SU(3) Bloch ball
    /// is a proper subset of the unit sphere, so positivity is checked
    /// explicitly rather than trusting r ≤ 1).
    pub fn to_density(&self) -> Result<DensityMatrix, BlochError> {
        let radius = self.radius();
        if radius * radius > 1.0 + 1e-9 {
            return Err(BlochError::RadiusTooLarge { radius });
        }
        let lambda = gell_mann_cached();
        let mut m = ComplexMatrix::identity(3).scale_re(1.0 / 3.0);
        for i in 1..=8 {
            let coeff = self.component(i) / SQRT3;
            if coeff != 0.0 {
                m = &m + &lambda.get(i).scale_re(coeff);
            }
        }
        DensityMatrix::new(m)
    }
}

/// Overlap and population-inversion combinations of the density-matrix
/// entries: u_mn = ρ_mn + ρ_nm, v_mn = i(ρ_mn − ρ_nm), w₂ = ρ₁₁ − ρ₂₂,
/// w₃ = (ρ₁₁ + ρ₂₂ − 2ρ₃₃)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapInversion {
    pub u12: f64,
    pub u13: f64,
    pub u23: f64,
    pub v12: f64,
    pub v13: f64,
    pub v23: f64,
    pub w2: f64,
    pub w3: f64,
}

/// Sphere coordinates (r, θ, φ) plus the five ray phases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochParameters {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub chi: f64,
    pub xi: f64,
}

impl BlochParameters {
    /// Purely radial/angular parameters with all phases zero.
    pub fn sphere(r: f64, theta: f64, phi: f64) -> Self {
        Self {
            r,
            theta,
            phi,
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            chi: 0.0,
            xi: 0.0,
        }
    }

    /// The non-unit ray
    /// √r (e^{i(α−γ)} sinθ cosφ, e^{i(β−χ)} sinθ sinφ, e^{iξ} cosθ),
    /// of squared norm exactly r.
    pub fn ray(&self) -> Result<ComplexVector, BlochError> {
        if self.r < 0.0 {
            return Err(BlochError::NegativeRadius(self.r));
        }
        let sqrt_r = self.r.sqrt();
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        Ok(ComplexVector::new(vec![
            C64::from_polar(sqrt_r * st * cp, self.alpha - self.gamma),
            C64::from_polar(sqrt_r * st * sp, self.beta - self.chi),
            C64::from_polar(sqrt_r * ct, self.xi),
        ]))
    }

    /// The closed-form Bloch components of the ray, used as the analytic
    /// oracle for [`bloch_from_ray`]:
    ///
    /// ```text
    /// n₁ =  √3 r sin²θ sinφ cosφ cos(B−A)     n₅ = −√3 r sinθ cosθ cosφ sin(A−ξ)
    /// n₂ =  √3 r sin²θ sinφ cosφ sin(B−A)     n₆ =  √3 r sinθ cosθ sinφ cos(B−ξ)
    /// n₃ = (√3/2) r sin²θ (cos²φ − sin²φ)     n₇ = −√3 r sinθ cosθ sinφ sin(B−ξ)
    /// n₄ =  √3 r sinθ cosθ cosφ cos(A−ξ)      n₈ =  r (1 − 3cos²θ)/2
    /// ```
    ///
    /// with A = α−γ and B = β−χ. Σ n_i² = r² identically.
    pub fn closed_form_bloch(&self) -> BlochVector8 {
        let r = self.r;
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        let a = self.alpha - self.gamma;
        let b = self.beta - self.chi;
        let xi = self.xi;
        BlochVector8([
            SQRT3 * r * st * st * sp * cp * (b - a).cos(),
            SQRT3 * r * st * st * sp * cp * (b - a).sin(),
            (SQRT3 / 2.0) * r * st * st * (cp * cp - sp * sp),
            SQRT3 * r * st * ct * cp * (a - xi).cos(),
            -SQRT3 * r * st * ct * cp * (a - xi).sin(),
            SQRT3 * r * st * ct * sp * (b - xi).cos(),
            -SQRT3 * r * st * ct * sp * (b - xi).sin(),
            r * (1.0 - 3.0 * ct * ct) / 2.0,
        ])
    }

    /// Max Bloch-component gap between this parameter tuple's ray and a
    /// target state. Zero (to rounding) iff the state is in the ray image.
    pub fn roundtrip_residual(&self, rho: &DensityMatrix) -> Result<f64, BlochError> {
        let from_ray = bloch_from_ray(&self.ray()?)?;
        let from_density = rho.bloch_vector()?;
        Ok(from_ray.max_abs_diff(&from_density))
    }
}

/// Bloch vector of a (possibly non-unit) dim-3 ray: n_i = (√3/2)⟨ψ|λ_i|ψ⟩.
///
/// Agrees exactly with the Bloch vector of the projector |ψ⟩⟨ψ| and is
/// invariant under a global phase on ψ.
pub fn bloch_from_ray(psi: &ComplexVector) -> Result<BlochVector8, BlochError> {
    if psi.dim() != 3 {
        return Err(BlochError::WrongDimension {
            expected: 3,
            got: psi.dim(),
        });
    }
    bloch_components(&psi.outer(psi))
}

/// Recovers sphere parameters from a Bloch vector in the gauge γ = χ = β = 0.
///
/// θ and φ use principal (non-negative) square roots, so θ, φ ∈ [0, π/2];
/// inputs whose generating ray sits on another branch come back re-gauged
/// through the extracted phases and still reproduce the same Bloch vector.
pub fn parameters_from_bloch(n: &BlochVector8) -> Result<BlochParameters, BlochError> {
    let r = n.radius();
    if r <= DEGENERATE_RADIUS {
        return Err(BlochError::Degenerate {
            radius: r,
            threshold: DEGENERATE_RADIUS,
        });
    }
    let pair12 = n.component(1).hypot(n.component(2));
    let pair45 = n.component(4).hypot(n.component(5));
    let pair67 = n.component(6).hypot(n.component(7));
    for (angle, pair, magnitude) in [
        ("beta - chi - alpha + gamma", "n1, n2", pair12),
        ("alpha - gamma - xi", "n4, n5", pair45),
        ("beta - chi + xi", "n6, n7", pair67),
    ] {
        if magnitude < PAIR_TOL {
            return Err(BlochError::IndeterminateAngle {
                angle,
                pair,
                magnitude,
                threshold: PAIR_TOL,
            });
        }
    }

    let cos_theta_sqr = ((1.0 - 2.0 * n.component(8) / r) / 3.0).clamp(0.0, 1.0);
    let theta = cos_theta_sqr.sqrt().clamp(0.0, 1.0).acos();
    let sin_theta_sqr = (1.0 - cos_theta_sqr).max(f64::MIN_POSITIVE);
    // ρ₁₁ − ρ₂₂ = (2/√3) n₃ for the unit-trace state and the ray alike.
    let cos_phi_sqr =
        (0.5 * (1.0 + (2.0 * n.component(3) / SQRT3) / (r * sin_theta_sqr))).clamp(0.0, 1.0);
    let phi = cos_phi_sqr.sqrt().clamp(0.0, 1.0).acos();

    // atan2(n₅, n₄) = ξ − (α−γ) and atan2(n₇, n₆) = ξ − (β−χ) in the
    // principal branch; with γ = χ = β = 0 the third relation is ξ itself.
    let xi = n.component(7).atan2(n.component(6));
    let alpha = xi - n.component(5).atan2(n.component(4));
    Ok(BlochParameters {
        r,
        theta,
        phi,
        alpha,
        beta: 0.0,
        gamma: 0.0,
        chi: 0.0,
        xi,
    })
}

/// r² evaluated directly from the density-matrix entries:
///
/// ```text
/// (3/4)[(ρ₁₂+ρ₂₁)² − (ρ₁₂−ρ₂₁)² + (ρ₁₁−ρ₂₂)²
///       + (ρ₁₃+ρ₃₁)² − (ρ₁₃−ρ₃₁)²
///       + (ρ₂₃+ρ₃₂)² − (ρ₂₃−ρ₃₂)²] + (1/4)(ρ₁₁+ρ₂₂−2ρ₃₃)²
/// ```
///
/// The difference terms enter negatively; for Hermitian ρ they are purely
/// imaginary, so their squares are negative real and the total matches
/// Σ n_i². The tiny imaginary residue is discarded.
pub fn radius_sqr_from_matrix_elements(rho: &DensityMatrix) -> Result<f64, BlochError> {
    if rho.dim() != 3 {
        return Err(BlochError::WrongDimension {
            expected: 3,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    let sq = |z: C64| z * z;
    let mut total = C64::new(0.0, 0.0);
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        total += sq(m[(a, b)] + m[(b, a)]) - sq(m[(a, b)] - m[(b, a)]);
    }
    total += sq(m[(0, 0)] - m[(1, 1)]);
    let w = m[(0, 0)] + m[(1, 1)] - (m[(2, 2)] + m[(2, 2)]);
    Ok((total * 0.75 + sq(w) * 0.25).re)
}
