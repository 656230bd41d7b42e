//! Relative (Pancharatnam) phases, Bargmann invariants, total/dynamic/
//! geometric phase decomposition, the connection one-form, and the
//! quasicyclic Berry-phase line integral.
//!
//! Conventions:
//!
//! - `relative_phase(a, b) = arg⟨a|b⟩` in (−π, π], defined only when the
//!   overlap modulus exceeds 1e-12;
//! - the Bargmann phase is the argument of the cyclic product
//!   ⟨ψ₀|ψ₁⟩⟨ψ₁|ψ₂⟩···⟨ψ_N|ψ₀⟩, invariant under per-state rescaling and
//!   re-phasing;
//! - the geometric phase of a discretized curve is the negative accumulated
//!   argument of consecutive overlaps, reported both raw (windings kept) and
//!   wrapped to (−π, π];
//! - [`dynamic_phase`] evaluates −Im ∫⟨ψ|dψ⟩/⟨ψ|ψ⟩ as written;
//!   [`phase_decomposition`] bookkeeps the sign so that its `dynamic` field
//!   satisfies geometric = total − dynamic, consistent with the Pancharatnam
//!   product and the Berry line integral of the connection
//!   K = Im⟨ψ|dψ⟩/⟨ψ|ψ⟩;
//! - the quasicyclic Berry phase over a closed parameter loop is
//!   −∮ {sin²θ [cos²φ d(α−γ) + sin²φ d(β−χ)] + cos²θ dξ}, independent of r.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::bloch::{BlochError, BlochParameters};
use crate::linalg::ComplexVector;

/// Overlap modulus below which a relative phase is undefined.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;
/// Closure tolerance for loops and closed trajectories.
const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("relative phase undefined: |overlap| = {modulus:.3e} below {threshold:e}")]
    UndefinedPhase { modulus: f64, threshold: f64 },

    #[error("states {first} and {second} are orthogonal (|overlap| = {modulus:.3e})")]
    OrthogonalPair {
        first: usize,
        second: usize,
        modulus: f64,
    },

    #[error("segment {segment} joins near-orthogonal rays (|overlap| = {modulus:.3e})")]
    OrthogonalSegment { segment: usize, modulus: f64 },

    #[error("need at least {need} states, got {got}")]
    TooFewStates { need: usize, got: usize },

    #[error("times must be strictly increasing (violated at index {0})")]
    TimesNotIncreasing(usize),

    #[error("times and rays differ in length: {times} vs {rays}")]
    LengthMismatch { times: usize, rays: usize },

    #[error("gauge phase list has length {got}, expected {expected}")]
    GaugeLengthMismatch { expected: usize, got: usize },

    #[error("trajectory is not closed: endpoint ray gap {gap:.3e} exceeds {threshold:e}")]
    NotClosed { gap: f64, threshold: f64 },

    #[error("ray has near-zero norm {0:.3e}")]
    ZeroNormRay(f64),

    #[error("rays must have dimension 3, got {0}")]
    WrongDimension(usize),

    #[error(transparent)]
    Bloch(#[from] BlochError),
}

/// arg⟨a|b⟩ in (−π, π].
pub fn relative_phase(a: &ComplexVector, b: &ComplexVector) -> Result<f64, PhaseError> {
    let overlap = a.inner(b);
    let modulus = overlap.norm();
    if modulus <= ORTHOGONALITY_TOL {
        return Err(PhaseError::UndefinedPhase {
            modulus,
            threshold: ORTHOGONALITY_TOL,
        });
    }
    Ok(overlap.arg())
}

/// arg⟨ψ(t₀)|ψ(t)⟩, the total phase between two snapshots of a curve.
pub fn total_phase(psi0: &ComplexVector, psit: &ComplexVector) -> Result<f64, PhaseError> {
    relative_phase(psi0, psit)
}

/// Argument of the cyclic Bargmann product over n ≥ 3 states.
///
/// Accumulated as a sum of per-factor principal arguments and wrapped to
/// (−π, π]; each state's scale and phase appears once plain and once
/// conjugated, so the result is invariant under ψ_k → c_k ψ_k for any
/// nonzero complex c_k.
pub fn bargmann_phase(states: &[ComplexVector]) -> Result<f64, PhaseError> {
    if states.len() < 3 {
        return Err(PhaseError::TooFewStates {
            need: 3,
            got: states.len(),
        });
    }
    let mut total = 0.0;
    for (k, state) in states.iter().enumerate() {
        let next = &states[(k + 1) % states.len()];
        let overlap = state.inner(next);
        let modulus = overlap.norm();
        if modulus <= ORTHOGONALITY_TOL {
            return Err(PhaseError::OrthogonalPair {
                first: k,
                second: (k + 1) % states.len(),
                modulus,
            });
        }
        total += overlap.arg();
    }
    Ok(wrap_angle(total))
}

/// Wraps an angle to (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

/// A phase carried both with windings intact and wrapped to (−π, π].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingPhase {
    pub raw: f64,
    pub wrapped: f64,
}

impl WindingPhase {
    fn from_raw(raw: f64) -> Self {
        Self {
            raw,
            wrapped: wrap_angle(raw),
        }
    }
}

/// A time-ordered sequence of dim-3 rays (non-unit norms allowed).
///
/// Construction rejects non-increasing times, near-zero rays, and
/// consecutive near-orthogonal pairs (phases across such a jump are
/// meaningless and must never default to anything).
pub struct RayTrajectory {
    times: Vec<f64>,
    rays: Vec<ComplexVector>,
}

impl RayTrajectory {
    pub fn new(times: Vec<f64>, rays: Vec<ComplexVector>) -> Result<Self, PhaseError> {
        if times.len() != rays.len() {
            return Err(PhaseError::LengthMismatch {
                times: times.len(),
                rays: rays.len(),
            });
        }
        if rays.is_empty() {
            return Err(PhaseError::TooFewStates { need: 1, got: 0 });
        }
        for (k, pair) in times.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(PhaseError::TimesNotIncreasing(k + 1));
            }
        }
        for (k, ray) in rays.iter().enumerate() {
            if ray.dim() != 3 {
                return Err(PhaseError::WrongDimension(ray.dim()));
            }
            let norm_sqr = ray.norm_sqr();
            if norm_sqr <= ORTHOGONALITY_TOL {
                return Err(PhaseError::ZeroNormRay(norm_sqr.sqrt()));
            }
            if k > 0 {
                let modulus = rays[k - 1].inner(ray).norm();
                if modulus <= ORTHOGONALITY_TOL {
                    return Err(PhaseError::OrthogonalSegment {
                        segment: k - 1,
                        modulus,
                    });
                }
            }
        }
        Ok(Self { times, rays })
    }

    /// Uniform-time trajectory over [0, 1].
    pub fn from_rays(rays: Vec<ComplexVector>) -> Result<Self, PhaseError> {
        let n = rays.len().max(1);
        let times = (0..n).map(|k| k as f64 / n as f64).collect();
        Self::new(times, rays)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rays(&self) -> &[ComplexVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn first(&self) -> &ComplexVector {
        &self.rays[0]
    }

    pub fn last(&self) -> &ComplexVector {
        self.rays.last().expect("non-empty by construction")
    }

    fn endpoint_gap(&self) -> f64 {
        self.first()
            .entries()
            .iter()
            .zip(self.last().entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Per-sample U(1) re-phasing ψ'_k = e^{iβ_k} ψ_k; norms are untouched.
    ///
    /// For β with matching endpoints (mod 2π) the wrapped geometric phase of
    /// the result equals the original's up to discretization error.
    pub fn gauge_transform(&self, beta: &[f64]) -> Result<RayTrajectory, PhaseError> {
        if beta.len() != self.len() {
            return Err(PhaseError::GaugeLengthMismatch {
                expected: self.len(),
                got: beta.len(),
            });
        }
        let rays = self
            .rays
            .iter()
            .zip(beta)
            .map(|(ray, &phase)| ray.scale(C64::from_polar(1.0, phase)))
            .collect();
        RayTrajectory::new(self.times.clone(), rays)
    }
}

/// Discrete Pancharatnam geometric phase of a trajectory:
/// −Σ_k arg⟨ψ_k|ψ_k+1⟩, with the closing overlap ⟨ψ_N|ψ₀⟩ included only for
/// closed trajectories (whose last ray must equal the first within 1e-12).
///
/// Per-segment principal arguments are summed, so windings beyond ±π
/// survive in `raw`; `wrapped` folds them back for comparison with closed
/// forms stated mod 2π.
pub fn pancharatnam_phase(tr: &RayTrajectory, closed: bool) -> Result<WindingPhase, PhaseError> {
    if tr.len() < 2 {
        return Err(PhaseError::TooFewStates {
            need: 2,
            got: tr.len(),
        });
    }
    if closed {
        let gap = tr.endpoint_gap();
        if gap > CLOSURE_TOL {
            return Err(PhaseError::NotClosed {
                gap,
                threshold: CLOSURE_TOL,
            });
        }
    }
    let mut accumulated = 0.0;
    for (k, pair) in tr.rays().windows(2).enumerate() {
        let overlap = pair[0].inner(&pair[1]);
        let modulus = overlap.norm();
        if modulus <= ORTHOGONALITY_TOL {
            return Err(PhaseError::OrthogonalSegment {
                segment: k,
                modulus,
            });
        }
        accumulated += overlap.arg();
    }
    if closed {
        let closing = tr.last().inner(tr.first());
        let modulus = closing.norm();
        if modulus <= ORTHOGONALITY_TOL {
            return Err(PhaseError::OrthogonalSegment {
                segment: tr.len() - 1,
                modulus,
            });
        }
        accumulated += closing.arg();
    }
    Ok(WindingPhase::from_raw(-accumulated))
}

/// −Im ∫ ⟨ψ|dψ⟩/⟨ψ|ψ⟩ over the trajectory, by symmetric first-order overlap
/// differences (forward and reversed-endpoint evaluations averaged, which is
/// trapezoid-accurate on smooth trajectories).
pub fn dynamic_phase(tr: &RayTrajectory) -> Result<f64, PhaseError> {
    if tr.len() < 2 {
        return Err(PhaseError::TooFewStates {
            need: 2,
            got: tr.len(),
        });
    }
    let mut integral = 0.0;
    for pair in tr.rays().windows(2) {
        let difference = pair[1].sub(&pair[0]);
        let forward = pair[0].inner(&difference).im / pair[0].norm_sqr();
        let backward = pair[1].inner(&difference).im / pair[1].norm_sqr();
        integral += 0.5 * (forward + backward);
    }
    Ok(-integral)
}

/// Value of the connection one-form K = Im⟨ψ|dψ⟩/⟨ψ|ψ⟩ at a point.
pub fn connection_value(psi: &ComplexVector, dpsi: &ComplexVector) -> Result<f64, PhaseError> {
    let norm_sqr = psi.norm_sqr();
    if norm_sqr <= ORTHOGONALITY_TOL {
        return Err(PhaseError::ZeroNormRay(norm_sqr.sqrt()));
    }
    Ok(psi.inner(dpsi).im / norm_sqr)
}

/// Total = arg⟨ψ(t₀)|ψ(t)⟩, dynamic sign-fixed so that
/// geometric = total − dynamic reproduces the Pancharatnam product on closed
/// trajectories; `geometric_raw` keeps windings, `geometric` is wrapped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDecomposition {
    pub total: f64,
    pub dynamic: f64,
    pub geometric_raw: f64,
    pub geometric: f64,
}

/// Splits the endpoint phase of a trajectory into dynamic and geometric
/// parts.
///
/// [`dynamic_phase`] carries a leading minus; consistency of
/// geometric = total − dynamic with the Pancharatnam product (checked by the
/// unitary-evolution tests) requires the decomposition's `dynamic` to be the
/// integral of the connection itself, i.e. the negation of that value.
pub fn phase_decomposition(tr: &RayTrajectory) -> Result<PhaseDecomposition, PhaseError> {
    let total = total_phase(tr.first(), tr.last())?;
    let dynamic = -dynamic_phase(tr)?;
    let geometric_raw = total - dynamic;
    Ok(PhaseDecomposition {
        total,
        dynamic,
        geometric_raw,
        geometric: wrap_angle(geometric_raw),
    })
}

/// Which sphere parameter a loop segment sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAngle {
    Alpha,
    Beta,
    Gamma,
    Chi,
    Xi,
}

impl SweepAngle {
    fn apply(self, p: &mut BlochParameters, value: f64) {
        match self {
            SweepAngle::Alpha => p.alpha = value,
            SweepAngle::Beta => p.beta = value,
            SweepAngle::Gamma => p.gamma = value,
            SweepAngle::Chi => p.chi = value,
            SweepAngle::Xi => p.xi = value,
        }
    }
}

/// A closed path sampled in parameter space: the first and last tuples must
/// generate the same ray within 1e-12.
pub struct ParameterLoop {
    samples: Vec<BlochParameters>,
}

impl ParameterLoop {
    pub fn new(samples: Vec<BlochParameters>) -> Result<Self, PhaseError> {
        if samples.len() < 2 {
            return Err(PhaseError::TooFewStates {
                need: 2,
                got: samples.len(),
            });
        }
        let first = samples.first().expect("checked").ray()?;
        let last = samples.last().expect("checked").ray()?;
        let gap = first
            .entries()
            .iter()
            .zip(last.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if gap > CLOSURE_TOL {
            return Err(PhaseError::NotClosed {
                gap,
                threshold: CLOSURE_TOL,
            });
        }
        Ok(Self { samples })
    }

    /// Linear sweeps of phase angles over `segments` steps, starting and
    /// ending at `base` (each sweep must span a multiple of 2π for the ray
    /// to close).
    pub fn from_linear_sweeps(
        base: BlochParameters,
        sweeps: &[(SweepAngle, f64, f64)],
        segments: usize,
    ) -> Result<Self, PhaseError> {
        let n = segments.max(1);
        let samples = (0..=n)
            .map(|k| {
                let fraction = k as f64 / n as f64;
                let mut p = base;
                for &(angle, from, to) in sweeps {
                    angle.apply(&mut p, from + (to - from) * fraction);
                }
                p
            })
            .collect();
        Self::new(samples)
    }

    pub fn samples(&self) -> &[BlochParameters] {
        &self.samples
    }

    /// The loop's rays as a uniform-time trajectory.
    pub fn trajectory(&self) -> Result<RayTrajectory, PhaseError> {
        let rays: Result<Vec<_>, _> = self.samples.iter().map(|p| p.ray()).collect();
        RayTrajectory::from_rays(rays?)
    }
}

/// Quasicyclic Berry phase over a closed parameter loop:
///
/// −∮ {sin²θ [cos²φ d(α−γ) + sin²φ d(β−χ)] + cos²θ dξ}
///
/// by trapezoid quadrature on the parameter increments. The d(β−χ) term
/// carries sin²φ (the bracket reproduces Im⟨ψ|dψ⟩/⟨ψ|ψ⟩ of the ray ansatz,
/// which is directly testable); the integrand contains no r.
pub fn berry_phase_quasicyclic(parameter_loop: &ParameterLoop) -> Result<f64, PhaseError> {
    let samples = parameter_loop.samples();
    let weight_ag = |p: &BlochParameters| {
        let st = p.theta.sin();
        let cp = p.phi.cos();
        st * st * cp * cp
    };
    let weight_bc = |p: &BlochParameters| {
        let st = p.theta.sin();
        let sp = p.phi.sin();
        st * st * sp * sp
    };
    let weight_xi = |p: &BlochParameters| {
        let ct = p.theta.cos();
        ct * ct
    };
    let mut integral = 0.0;
    for pair in samples.windows(2) {
        let (p0, p1) = (&pair[0], &pair[1]);
        let d_ag = (p1.alpha - p1.gamma) - (p0.alpha - p0.gamma);
        let d_bc = (p1.beta - p1.chi) - (p0.beta - p0.chi);
        let d_xi = p1.xi - p0.xi;
        integral += 0.5 * (weight_ag(p0) + weight_ag(p1)) * d_ag;
        integral += 0.5 * (weight_bc(p0) + weight_bc(p1)) * d_bc;
        integral += 0.5 * (weight_xi(p0) + weight_xi(p1)) * d_xi;
    }
    Ok(-integral)
}

/// arg⟨ψ(t₀)|ψ(t)⟩ for two parameter tuples, through the factored closed
/// form: with A = sinθ_t cosφ_t sinθ₀ cosφ₀, B = sinθ_t sinφ_t sinθ₀ sinφ₀,
/// C = cosθ_t cosθ₀ and the phase increments Δa = (α−γ)_t − (α−γ)₀,
/// Δb = (β−χ)_t − (β−χ)₀, Δξ = ξ_t − ξ₀,
///
/// ```text
/// X = A cosΔa + B cosΔb + C cosΔξ
/// Y = A sinΔa + B sinΔb + C sinΔξ
/// φ_tot = atan2(Y, X)
/// ```
///
/// X and Y are the real and imaginary parts of the ansatz inner product
/// (up to the positive factor √(r₀ r_t), which drops out of the argument).
pub fn total_phase_closed_form(p0: &BlochParameters, pt: &BlochParameters) -> f64 {
    let a = (pt.theta.sin() * pt.phi.cos()) * (p0.theta.sin() * p0.phi.cos());
    let b = (pt.theta.sin() * pt.phi.sin()) * (p0.theta.sin() * p0.phi.sin());
    let c = pt.theta.cos() * p0.theta.cos();
    let da = (pt.alpha - pt.gamma) - (p0.alpha - p0.gamma);
    let db = (pt.beta - pt.chi) - (p0.beta - p0.chi);
    let dxi = pt.xi - p0.xi;
    let x = a * da.cos() + b * db.cos() + c * dxi.cos();
    let y = a * da.sin() + b * db.sin() + c * dxi.sin();
    y.atan2(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm_hermitian_phase;
    use crate::{bloch, generators};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn v3(entries: [(f64, f64); 3]) -> ComplexVector {
        ComplexVector::new(entries.iter().map(|&(re, im)| C64::new(re, im)).collect())
    }

    fn xi_loop(theta: f64, segments: usize) -> ParameterLoop {
        ParameterLoop::from_linear_sweeps(
            BlochParameters::sphere(1.0, theta, FRAC_PI_4),
            &[(SweepAngle::Xi, 0.0, 2.0 * PI)],
            segments,
        )
        .unwrap()
    }

    #[test]
    fn relative_phase_examples() {
        let a = v3([(1.0, 0.0), (0.5, 0.0), (0.0, 0.0)]);
        let scaled = a.scale(C64::new(2.5, 0.0));
        assert_eq!(relative_phase(&a, &scaled).unwrap(), 0.0);

        let rotated = a.scale(C64::from_polar(1.0, PI / 3.0));
        assert!((relative_phase(&a, &rotated).unwrap() - PI / 3.0).abs() < 1e-15);

        let b = v3([(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let orthogonal = v3([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(
            relative_phase(&b, &orthogonal),
            Err(PhaseError::UndefinedPhase { .. })
        ));
    }

    #[test]
    fn bargmann_degenerate_triple_vanishes() {
        let psi = v3([(1.0, 0.0), (0.3, 0.2), (0.0, 0.0)]);
        let phi = v3([(0.4, 0.0), (1.0, 0.0), (0.1, 0.0)]);
        let phase = bargmann_phase(&[psi.clone(), psi, phi]).unwrap();
        assert!(phase.abs() < 1e-15);
    }

    #[test]
    fn bargmann_qubit_triple_embedded_in_dim_3() {
        let s = 1.0 / 2.0_f64.sqrt();
        let states = [
            v3([(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]),
            v3([(s, 0.0), (s, 0.0), (0.0, 0.0)]),
            v3([(s, 0.0), (0.0, s), (0.0, 0.0)]),
        ];
        let phase = bargmann_phase(&states).unwrap();
        assert!((phase - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn bargmann_is_cyclically_invariant_and_gauge_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let states: Vec<ComplexVector> = (0..5)
            .map(|_| bloch::test_support::random_ray(&mut rng, 3))
            .collect();
        let reference = bargmann_phase(&states).unwrap();

        let mut shifted = states.clone();
        shifted.rotate_left(2);
        assert!((bargmann_phase(&shifted).unwrap() - reference).abs() < 1e-12);

        let rescaled: Vec<ComplexVector> = states
            .iter()
            .map(|s| {
                s.scale(C64::from_polar(
                    rng.gen_range(0.1..3.0),
                    rng.gen_range(-PI..PI),
                ))
            })
            .collect();
        assert!((bargmann_phase(&rescaled).unwrap() - reference).abs() < 1e-12);
    }

    #[test]
    fn bargmann_rejects_orthogonal_pairs() {
        let states = [
            ComplexVector::basis(3, 0),
            ComplexVector::basis(3, 1),
            ComplexVector::basis(3, 2),
        ];
        match bargmann_phase(&states) {
            Err(PhaseError::OrthogonalPair { first, second, .. }) => {
                assert_eq!((first, second), (0, 1));
            }
            other => panic!("expected OrthogonalPair, got {other:?}"),
        }
    }

    #[test]
    fn constant_trajectory_has_zero_phases() {
        let psi = v3([(0.6, 0.1), (0.2, -0.3), (0.5, 0.0)]);
        let tr = RayTrajectory::from_rays(vec![psi.clone(), psi.clone(), psi]).unwrap();
        assert!(pancharatnam_phase(&tr, false).unwrap().raw.abs() < 1e-15);
        assert!(dynamic_phase(&tr).unwrap().abs() < 1e-15);
        let decomposition = phase_decomposition(&tr).unwrap();
        assert!(decomposition.total.abs() < 1e-15);
        assert!(decomposition.dynamic.abs() < 1e-15);
        assert!(decomposition.geometric.abs() < 1e-15);
    }

    #[test]
    fn xi_loop_pancharatnam_matches_the_closed_form() {
        // ξ: 0 → 2π at θ = π/3 gives −2π cos²θ = −π/2.
        let tr = xi_loop(FRAC_PI_3, 10_000).trajectory().unwrap();
        let phase = pancharatnam_phase(&tr, true).unwrap();
        assert!((phase.raw + FRAC_PI_2).abs() < 1e-3, "raw = {}", phase.raw);
    }

    #[test]
    fn pancharatnam_is_invariant_under_positive_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let tr = xi_loop(FRAC_PI_3, 200).trajectory().unwrap();
        let scaled: Vec<ComplexVector> = tr
            .rays()
            .iter()
            .map(|ray| ray.scale(C64::new(rng.gen_range(0.2..4.0), 0.0)))
            .collect();
        let scaled_tr = RayTrajectory::from_rays(scaled).unwrap();
        // The endpoint scales differ, so the loop no longer closes exactly;
        // compare the open-path products.
        let a = pancharatnam_phase(&tr, false).unwrap().raw;
        let b = pancharatnam_phase(&scaled_tr, false).unwrap().raw;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn total_phase_examples() {
        let p = BlochParameters::sphere(1.0, FRAC_PI_2, 0.3);
        let psi0 = p.ray().unwrap();
        assert_eq!(total_phase(&psi0, &psi0).unwrap(), 0.0);

        // ξ shift with θ = π/2: no third component, total phase 0.
        let mut shifted = p;
        shifted.xi = 1.1;
        let psi1 = shifted.ray().unwrap();
        assert!(total_phase(&psi0, &psi1).unwrap().abs() < 1e-15);

        // ξ shift with θ = 0: pure phase Δ.
        let pole = BlochParameters::sphere(1.0, 0.0, 0.0);
        let mut pole_shifted = pole;
        pole_shifted.xi = 0.8;
        let phase = total_phase(&pole.ray().unwrap(), &pole_shifted.ray().unwrap()).unwrap();
        assert!((phase - 0.8).abs() < 1e-15);
    }

    #[test]
    fn dynamic_phase_of_a_xi_sweep() {
        // ξ(t) = ωt for t in [0, T]: −Im∫⟨ψ|ψ̇⟩/⟨ψ|ψ⟩ dt = −ωT cos²θ.
        let theta = FRAC_PI_3;
        let omega = 1.7;
        let t_end = 2.0;
        let n = 10_000;
        let rays: Vec<ComplexVector> = (0..=n)
            .map(|k| {
                let t = t_end * k as f64 / n as f64;
                let mut p = BlochParameters::sphere(0.7, theta, 0.4);
                p.xi = omega * t;
                p.ray().unwrap()
            })
            .collect();
        let tr = RayTrajectory::from_rays(rays).unwrap();
        let expected = -omega * t_end * theta.cos().powi(2);
        assert!((dynamic_phase(&tr).unwrap() - expected).abs() < 2e-3);
    }

    #[test]
    fn dynamic_phase_of_a_global_phase_sweep() {
        let psi0 = v3([(0.5, 0.2), (0.3, -0.4), (0.6, 0.0)]);
        let n = 10_000;
        let beta_end = 1.9;
        let rays: Vec<ComplexVector> = (0..=n)
            .map(|k| {
                let beta = beta_end * k as f64 / n as f64;
                psi0.scale(C64::from_polar(1.0, beta))
            })
            .collect();
        let tr = RayTrajectory::from_rays(rays).unwrap();
        assert!((dynamic_phase(&tr).unwrap() + beta_end).abs() < 2e-3);
    }

    #[test]
    fn pure_phase_evolution_has_no_geometric_content() {
        // θ = 0, ξ: 0 → Δ: total Δ, dynamic Δ, geometric 0.
        let delta = 0.9;
        let n = 2_000;
        let rays: Vec<ComplexVector> = (0..=n)
            .map(|k| {
                let mut p = BlochParameters::sphere(1.0, 0.0, 0.0);
                p.xi = delta * k as f64 / n as f64;
                p.ray().unwrap()
            })
            .collect();
        let tr = RayTrajectory::from_rays(rays).unwrap();
        let decomposition = phase_decomposition(&tr).unwrap();
        assert!((decomposition.total - delta).abs() < 1e-12);
        assert!((decomposition.dynamic - delta).abs() < 2e-3);
        assert!(decomposition.geometric.abs() < 2e-3);
    }

    #[test]
    fn decomposition_matches_pancharatnam_on_the_closed_loop() {
        let tr = xi_loop(FRAC_PI_3, 10_000).trajectory().unwrap();
        let decomposition = phase_decomposition(&tr).unwrap();
        let discrete = pancharatnam_phase(&tr, true).unwrap();
        assert!((decomposition.geometric - discrete.wrapped).abs() < 1e-3);
        assert!((decomposition.geometric + FRAC_PI_2).abs() < 1e-3);
    }

    #[test]
    fn connection_value_examples() {
        let psi = v3([(0.5, 0.1), (0.2, 0.0), (0.7, -0.3)]);
        assert!(connection_value(&psi, &psi).unwrap().abs() < 1e-15);
        let i_psi = psi.scale(C64::new(0.0, 1.0));
        assert!((connection_value(&psi, &i_psi).unwrap() - 1.0).abs() < 1e-15);

        // dψ from a dξ variation picks up cos²θ dξ.
        let p = BlochParameters::sphere(0.9, FRAC_PI_3, 0.8);
        let dxi = 1e-6;
        let mut p_shifted = p;
        p_shifted.xi = dxi;
        let psi = p.ray().unwrap();
        let dpsi = p_shifted.ray().unwrap().sub(&psi);
        let k = connection_value(&psi, &dpsi).unwrap();
        assert!((k - FRAC_PI_3.cos().powi(2) * dxi).abs() < 1e-12);
    }

    #[test]
    fn berry_phase_of_the_xi_loop() {
        let phase = berry_phase_quasicyclic(&xi_loop(FRAC_PI_3, 1_000)).unwrap();
        assert!((phase + FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn berry_phase_of_an_alpha_loop_on_the_equator() {
        // Only (α−γ) sweeps 2π at θ = π/2, φ = 0: −∮ sin²θ cos²φ dα = −2π.
        let base = BlochParameters::sphere(1.0, FRAC_PI_2, 0.0);
        let alpha_loop =
            ParameterLoop::from_linear_sweeps(base, &[(SweepAngle::Alpha, 0.0, 2.0 * PI)], 500)
                .unwrap();
        let phase = berry_phase_quasicyclic(&alpha_loop).unwrap();
        assert!((phase + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn berry_phase_is_independent_of_radius() {
        for segments in [37, 200] {
            let sweeps = [
                (SweepAngle::Xi, 0.0, 2.0 * PI),
                (SweepAngle::Beta, 0.0, 2.0 * PI),
            ];
            let small = ParameterLoop::from_linear_sweeps(
                BlochParameters::sphere(0.3, FRAC_PI_3, 1.1),
                &sweeps,
                segments,
            )
            .unwrap();
            let unit = ParameterLoop::from_linear_sweeps(
                BlochParameters::sphere(1.0, FRAC_PI_3, 1.1),
                &sweeps,
                segments,
            )
            .unwrap();
            let a = berry_phase_quasicyclic(&small).unwrap();
            let b = berry_phase_quasicyclic(&unit).unwrap();
            assert_eq!(a, b, "the integrand contains no r");
        }
    }

    #[test]
    fn open_loops_are_rejected() {
        let base = BlochParameters::sphere(1.0, FRAC_PI_3, FRAC_PI_4);
        assert!(matches!(
            ParameterLoop::from_linear_sweeps(base, &[(SweepAngle::Xi, 0.0, PI)], 100),
            Err(PhaseError::NotClosed { .. })
        ));
    }

    #[test]
    fn three_routes_agree_and_discretization_error_shrinks() {
        let theta = FRAC_PI_3;
        let exact = -2.0 * PI * theta.cos().powi(2);
        let mut previous_gap = f64::INFINITY;
        for segments in [1_000usize, 10_000, 100_000] {
            let parameter_loop = xi_loop(theta, segments);
            let tr = parameter_loop.trajectory().unwrap();
            let discrete = pancharatnam_phase(&tr, true).unwrap().raw;
            let decomposed = phase_decomposition(&tr).unwrap().geometric;
            let line_integral = berry_phase_quasicyclic(&parameter_loop).unwrap();
            assert!((discrete - exact).abs() < 1e-3);
            assert!((wrap_angle(decomposed - wrap_angle(exact))).abs() < 1e-3);
            assert!((line_integral - exact).abs() < 1e-12);
            let gap = (discrete - exact).abs();
            assert!(
                gap < previous_gap || gap < 1e-12,
                "discretization error must shrink: {gap} vs {previous_gap}"
            );
            previous_gap = gap;
        }
    }

    #[test]
    fn gauge_transform_examples() {
        let tr = xi_loop(FRAC_PI_3, 5_000).trajectory().unwrap();
        let n = tr.len();

        let zero = vec![0.0; n];
        let unchanged = tr.gauge_transform(&zero).unwrap();
        for (a, b) in tr.rays().iter().zip(unchanged.rays()) {
            assert_eq!(a, b);
        }

        // β linear 0 → 2π: closed gauge, geometric phase unchanged.
        let beta: Vec<f64> = (0..n)
            .map(|k| 2.0 * PI * k as f64 / (n - 1) as f64)
            .collect();
        let transformed = tr.gauge_transform(&beta).unwrap();
        let before = phase_decomposition(&tr).unwrap().geometric;
        let after = phase_decomposition(&transformed).unwrap().geometric;
        assert!((wrap_angle(after - before)).abs() < 2e-3);
        for (a, b) in tr.rays().iter().zip(transformed.rays()) {
            // Unit-modulus factors preserve the norm; allow one ulp of
            // rounding from the complex multiply.
            let gap = (a.norm_sqr() - b.norm_sqr()).abs();
            assert!(gap <= 4.0 * f64::EPSILON * a.norm_sqr(), "norm moved by {gap:e}");
        }

        assert!(matches!(
            tr.gauge_transform(&[0.0]),
            Err(PhaseError::GaugeLengthMismatch { .. })
        ));
    }

    #[test]
    fn reparametrization_leaves_the_phase_alone() {
        let theta = FRAC_PI_3;
        let n = 10_000;
        // Same geometric path swept at uniform and at quadratic pace.
        let build = |warp: fn(f64) -> f64| -> RayTrajectory {
            let rays: Vec<ComplexVector> = (0..=n)
                .map(|k| {
                    let s = warp(k as f64 / n as f64);
                    let mut p = BlochParameters::sphere(1.0, theta, FRAC_PI_4);
                    p.xi = 2.0 * PI * s;
                    p.ray().unwrap()
                })
                .collect();
            RayTrajectory::from_rays(rays).unwrap()
        };
        let uniform = build(|s| s);
        let warped = build(|s| s * s);
        let a = pancharatnam_phase(&uniform, true).unwrap().raw;
        let b = pancharatnam_phase(&warped, true).unwrap().raw;
        assert!((a - b).abs() < 1e-3);
    }

    #[test]
    fn closed_form_total_phase_matches_the_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let mut random_params = |r: f64| BlochParameters {
                r,
                theta: rng.gen_range(0.05..PI - 0.05),
                phi: rng.gen_range(0.0..2.0 * PI),
                alpha: rng.gen_range(-PI..PI),
                beta: rng.gen_range(-PI..PI),
                gamma: rng.gen_range(-PI..PI),
                chi: rng.gen_range(-PI..PI),
                xi: rng.gen_range(-PI..PI),
            };
            let p0 = random_params(0.8);
            let pt = random_params(0.5);
            let direct = match total_phase(&p0.ray().unwrap(), &pt.ray().unwrap()) {
                Ok(phase) => phase,
                Err(PhaseError::UndefinedPhase { .. }) => continue,
                Err(other) => panic!("{other}"),
            };
            let closed = total_phase_closed_form(&p0, &pt);
            assert!(
                wrap_angle(direct - closed).abs() < 1e-10,
                "direct {direct} vs closed {closed}"
            );
        }
    }

    #[test]
    fn unitary_evolution_reproduces_the_induced_xi_loop_phase() {
        // H = (Ω/2)λ₃ on a φ = 0 ray regauges to a pure ξ-type path
        // (ξ: 0 → π over one quasicycle T = 2π/Ω), so the wrapped geometric
        // phase must match the line integral −π cos²θ.
        let omega = 1.0;
        let t_end = 2.0 * PI / omega;
        let theta = FRAC_PI_3;
        let psi0 = BlochParameters::sphere(1.0, theta, 0.0).ray().unwrap();
        let h = generators::gell_mann_cached().get(3).scale_re(omega / 2.0);
        let n = 10_000;
        let mut times = Vec::with_capacity(n + 1);
        let mut rays = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let t = t_end * k as f64 / n as f64;
            let u = expm_hermitian_phase(&h, -t).unwrap();
            times.push(t);
            rays.push(u.matvec(&psi0));
        }
        let tr = RayTrajectory::new(times, rays).unwrap();
        let geometric = phase_decomposition(&tr).unwrap().geometric;
        let expected = wrap_angle(-PI * theta.cos().powi(2));
        assert!(
            wrap_angle(geometric - expected).abs() < 1e-3,
            "geometric {geometric} vs expected {expected}"
        );
    }
}
