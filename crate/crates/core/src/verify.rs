//! Self-check suite behind the CLI `verify` subcommand.
//!
//! Each group re-runs the structural invariants of one module against fixed
//! seeds and reports its worst residual. A group fails when any residual
//! exceeds its tolerance; the report then names the offending property.
//!
//! [`Mutation`] deliberately corrupts one fixture so the suite's own failure
//! path can be exercised end to end.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use crate::adjoint::{adjoint_so8, octet_dot, octet_star, octet_wedge, OctetVector};
use crate::bloch::{
    bloch_from_ray, radius_sqr_from_matrix_elements, BlochParameters, DensityMatrix,
};
use crate::generators::{gell_mann_set, pauli_set, GeneratorSet};
use crate::linalg::{anticommutator, commutator, expm_hermitian_phase, ComplexMatrix, ComplexVector};
use crate::lindblad::{analytic_dephasing_solution, evolve, DephasingParams, LindbladModel};
use crate::phase::{
    berry_phase_quasicyclic, pancharatnam_phase, phase_decomposition, total_phase,
    total_phase_closed_form, wrap_angle, ParameterLoop, RayTrajectory, SweepAngle,
};
use crate::polarization::{
    analytic_polarization_decay, build_model, classical_stokes, degree_of_polarization,
    stokes_expectations, stokes_operators, PolarizationModelKind, TwoModeBasis,
};

/// Deliberate fixture corruption for testing the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Flip the sign of λ₂ before computing the structure constants.
    FlipLambda2Sign,
}

/// Outcome of one invariant group.
pub struct GroupReport {
    pub name: &'static str,
    pub passed: bool,
    pub max_residual: f64,
    pub failure: Option<String>,
}

/// Outcome of the whole suite.
pub struct VerifyReport {
    pub groups: Vec<GroupReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.groups.iter().all(|g| g.passed)
    }

    /// One line per group: PASS/FAIL, name, max residual, failure detail.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for group in &self.groups {
            let status = if group.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{status}] {:<28} max residual {:9.3e}",
                group.name, group.max_residual
            ));
            if let Some(failure) = &group.failure {
                out.push_str(&format!("  ({failure})"));
            }
            out.push('\n');
        }
        let verdict = if self.all_passed() {
            "all invariant groups passed"
        } else {
            "INVARIANT FAILURES DETECTED"
        };
        out.push_str(verdict);
        out.push('\n');
        out
    }
}

/// Residual accumulator for one group.
struct Checker {
    name: &'static str,
    max_residual: f64,
    failure: Option<String>,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            max_residual: 0.0,
            failure: None,
        }
    }

    fn check(&mut self, property: &str, residual: f64, tol: f64) {
        let residual = if residual.is_finite() {
            residual
        } else {
            f64::INFINITY
        };
        self.max_residual = self.max_residual.max(residual);
        if residual > tol && self.failure.is_none() {
            self.failure = Some(format!("{property}: residual {residual:.3e} > {tol:e}"));
        }
    }

    fn finish(self) -> GroupReport {
        GroupReport {
            name: self.name,
            passed: self.failure.is_none(),
            max_residual: self.max_residual,
            failure: self.failure,
        }
    }
}

fn random_matrix(rng: &mut impl Rng, n: usize, magnitude: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = C64::new(
                rng.gen_range(-magnitude..magnitude),
                rng.gen_range(-magnitude..magnitude),
            );
        }
    }
    m
}

fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    expm_hermitian_phase(&random_matrix(rng, n, 2.0).hermitian_part(), 1.0)
        .expect("Hermitian generator")
}

fn random_ray(rng: &mut impl Rng, dim: usize) -> ComplexVector {
    ComplexVector::new(
        (0..dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn random_density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    let mut weights = [0.0; 3];
    for w in &mut weights {
        *w = rng.gen_range(0.1..1.0);
    }
    let total: f64 = weights.iter().sum();
    for &w in &weights {
        let psi = random_ray(rng, dim);
        m = &m + &psi.outer(&psi).scale_re(w / total / psi.norm_sqr());
    }
    DensityMatrix::new(m).expect("mixture of projectors")
}

fn check_linalg() -> GroupReport {
    let mut c = Checker::new("linalg-core");
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..25 {
        let m = random_matrix(&mut rng, 3, 10.0);
        c.check(
            "dagger involution",
            m.dagger().dagger().max_abs_diff(&m).unwrap(),
            0.0,
        );
        c.check(
            "trace of dagger is conjugate",
            (m.dagger().trace() - m.trace().conj()).norm(),
            1e-12,
        );

        let h = m.hermitian_part();
        let u = expm_hermitian_phase(&h, 1.0).unwrap();
        c.check(
            "exponential unitarity",
            u.matmul(&u.dagger())
                .max_abs_diff(&ComplexMatrix::identity(3))
                .unwrap(),
            1e-10,
        );
        c.check("exponential determinant modulus", (u.det().norm() - 1.0).abs(), 1e-9);

        let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let group_law = expm_hermitian_phase(&h, s + t)
            .unwrap()
            .max_abs_diff(
                &expm_hermitian_phase(&h, s)
                    .unwrap()
                    .matmul(&expm_hermitian_phase(&h, t).unwrap()),
            )
            .unwrap();
        c.check("one-parameter group law", group_law, 1e-9);
    }
    c.finish()
}

fn check_pauli() -> GroupReport {
    let mut c = Checker::new("generators/pauli");
    let sigma = pauli_set();
    let eps = |i: usize, j: usize, k: usize| -> f64 {
        match (i, j, k) {
            (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
            (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1.0,
            _ => 0.0,
        }
    };
    for i in 1..=3 {
        for j in 1..=3 {
            let product = sigma.get(i).matmul(sigma.get(j));
            let mut expected = if i == j {
                ComplexMatrix::identity(2)
            } else {
                ComplexMatrix::zeros(2, 2)
            };
            for k in 1..=3 {
                let e = eps(i, j, k);
                if e != 0.0 {
                    expected = &expected + &sigma.get(k).scale(C64::new(0.0, e));
                }
            }
            c.check(
                &format!("sigma product identity ({i},{j})"),
                product.max_abs_diff(&expected).unwrap(),
                1e-12,
            );
            let overlap = sigma.get(i).matmul(sigma.get(j)).trace();
            let expected_trace = if i == j { 2.0 } else { 0.0 };
            c.check(
                &format!("trace orthogonality ({i},{j})"),
                (overlap - C64::new(expected_trace, 0.0)).norm(),
                1e-12,
            );
        }
    }
    c.finish()
}

/// Gell-Mann set with an optional deliberate λ₂ sign flip.
fn gell_mann_for(mutation: Option<Mutation>) -> GeneratorSet {
    let set = gell_mann_set();
    match mutation {
        None => set,
        Some(Mutation::FlipLambda2Sign) => {
            let mut matrices: Vec<ComplexMatrix> = set.matrices().to_vec();
            matrices[1] = matrices[1].scale_re(-1.0);
            GeneratorSet::from_matrices_unchecked(3, matrices)
        }
    }
}

fn check_structure_constants(mutation: Option<Mutation>) -> GroupReport {
    let mut c = Checker::new("generators/structure-constants");
    let lambda = gell_mann_for(mutation);

    let f = |r: usize, s: usize, t: usize| -> f64 {
        commutator(lambda.get(r), lambda.get(s))
            .unwrap()
            .matmul(lambda.get(t))
            .trace()
            .im
            / 4.0
    };
    let d = |r: usize, s: usize, t: usize| -> f64 {
        anticommutator(lambda.get(r), lambda.get(s))
            .unwrap()
            .matmul(lambda.get(t))
            .trace()
            .re
            / 4.0
    };

    let half_sqrt3 = 3.0_f64.sqrt() / 2.0;
    let inv_sqrt3 = 1.0 / 3.0_f64.sqrt();
    let f_fixture: &[((usize, usize, usize), f64)] = &[
        ((1, 2, 3), 1.0),
        ((4, 5, 8), half_sqrt3),
        ((6, 7, 8), half_sqrt3),
        ((1, 4, 7), 0.5),
        ((2, 4, 6), 0.5),
        ((2, 5, 7), 0.5),
        ((3, 4, 5), 0.5),
        ((5, 1, 6), 0.5),
        ((6, 3, 7), 0.5),
    ];
    for &((r, s, t), value) in f_fixture {
        c.check(
            &format!("f{r}{s}{t}"),
            (f(r, s, t) - value).abs(),
            1e-12,
        );
    }
    let d_fixture: &[((usize, usize, usize), f64)] = &[
        ((1, 1, 8), inv_sqrt3),
        ((2, 2, 8), inv_sqrt3),
        ((3, 3, 8), inv_sqrt3),
        ((8, 8, 8), -inv_sqrt3),
        ((4, 4, 8), -0.5 * inv_sqrt3),
        ((5, 5, 8), -0.5 * inv_sqrt3),
        ((6, 6, 8), -0.5 * inv_sqrt3),
        ((7, 7, 8), -0.5 * inv_sqrt3),
        ((1, 4, 6), 0.5),
        ((1, 5, 7), 0.5),
        ((2, 4, 7), -0.5),
        ((2, 5, 6), 0.5),
        ((3, 4, 4), 0.5),
        ((3, 5, 5), 0.5),
        ((3, 6, 6), -0.5),
        ((3, 7, 7), -0.5),
    ];
    for &((r, s, t), value) in d_fixture {
        c.check(
            &format!("d{r}{s}{t}"),
            (d(r, s, t) - value).abs(),
            1e-12,
        );
    }

    // Product identity over all 64 pairs, with f and d from the traces.
    for r in 1..=8 {
        for s in 1..=8 {
            let product = lambda.get(r).matmul(lambda.get(s));
            let mut expected = if r == s {
                ComplexMatrix::identity(3).scale_re(2.0 / 3.0)
            } else {
                ComplexMatrix::zeros(3, 3)
            };
            for t in 1..=8 {
                let coeff = C64::new(d(r, s, t), f(r, s, t));
                expected = &expected + &lambda.get(t).scale(coeff);
            }
            c.check(
                &format!("product identity ({r},{s})"),
                product.max_abs_diff(&expected).unwrap(),
                1e-12,
            );
        }
    }
    c.finish()
}

fn check_bloch() -> GroupReport {
    let mut c = Checker::new("bloch-map");
    let mut rng = ChaCha8Rng::seed_from_u64(102);

    for _ in 0..500 {
        let rho = random_density(&mut rng, 3);
        let r = rho.bloch_vector().unwrap().radius();
        c.check(
            "radius-purity identity",
            (rho.purity() - (1.0 / 3.0 + 2.0 / 3.0 * r * r)).abs(),
            1e-10,
        );
    }

    for _ in 0..100 {
        let rho = random_density(&mut rng, 3);
        let n = rho.bloch_vector().unwrap();
        c.check(
            "signed sphere equation",
            (radius_sqr_from_matrix_elements(&rho).unwrap() - n.radius() * n.radius()).abs(),
            1e-10,
        );
    }

    // Closed forms on a 5-point grid per angle (spot pairs for the rest).
    let grid: Vec<f64> = (0..5).map(|k| k as f64 * 2.0 * PI / 5.0).collect();
    let theta_grid: Vec<f64> = (0..5).map(|k| k as f64 * PI / 4.0).collect();
    for &theta in &theta_grid {
        for &phi in &grid {
            for &alpha in &grid {
                for &xi in &grid {
                    let p = BlochParameters {
                        r: 0.8,
                        theta,
                        phi,
                        alpha,
                        beta: 1.1,
                        gamma: 0.4,
                        chi: 2.7,
                        xi,
                    };
                    let numeric = bloch_from_ray(&p.ray().unwrap()).unwrap();
                    let closed = p.closed_form_bloch();
                    c.check(
                        "closed-form Bloch components",
                        numeric.max_abs_diff(&closed),
                        1e-12,
                    );
                    c.check(
                        "sphere equation on the grid",
                        (closed.radius().powi(2) - p.r * p.r).abs(),
                        1e-12,
                    );
                }
            }
        }
    }

    for _ in 0..25 {
        let psi = random_ray(&mut rng, 3);
        let projector = psi.outer(&psi).scale_re(1.0 / psi.norm_sqr());
        let idempotency = projector
            .matmul(&projector)
            .max_abs_diff(&projector)
            .unwrap();
        c.check("pure-state criterion", idempotency, 1e-10);

        let rho = random_density(&mut rng, 3);
        let u = random_unitary(&mut rng, 3);
        let rotated = DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.dagger())).unwrap();
        c.check(
            "unitary invariance of radius",
            (rho.bloch_vector().unwrap().radius() - rotated.bloch_vector().unwrap().radius())
                .abs(),
            1e-10,
        );
    }
    c.finish()
}

fn check_adjoint() -> GroupReport {
    let mut c = Checker::new("adjoint-rep");
    let mut rng = ChaCha8Rng::seed_from_u64(103);

    for _ in 0..100 {
        let u = random_unitary(&mut rng, 3);
        let r = match adjoint_so8(&u) {
            Ok(r) => r,
            Err(err) => {
                c.check(&format!("adjoint image validity ({err})"), f64::INFINITY, 1e-9);
                continue;
            }
        };
        c.check("unimodularity", (r.det() - 1.0).abs(), 1e-9);
    }

    for _ in 0..50 {
        let u = random_unitary(&mut rng, 3);
        let v = random_unitary(&mut rng, 3);
        let lhs = adjoint_so8(&u).unwrap().matmul(&adjoint_so8(&v).unwrap());
        let rhs = adjoint_so8(&u.matmul(&v)).unwrap();
        c.check("homomorphism", lhs.max_abs_diff(&rhs), 1e-9);
    }

    for _ in 0..25 {
        let u = random_unitary(&mut rng, 3);
        let r = adjoint_so8(&u).unwrap();
        let psi = random_ray(&mut rng, 3);
        let n = bloch_from_ray(&psi).unwrap();
        let rotated = bloch_from_ray(&u.matvec(&psi)).unwrap();
        let expected = r.apply(&n.0);
        let covariance = rotated
            .0
            .iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.check("Bloch covariance", covariance, 1e-10);

        let a = OctetVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let b = OctetVector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let (ra, rb) = (r.apply_octet(&a), r.apply_octet(&b));
        c.check(
            "wedge covariance",
            r.apply_octet(&octet_wedge(&a, &b))
                .max_abs_diff(&octet_wedge(&ra, &rb)),
            1e-9,
        );
        c.check(
            "star covariance",
            r.apply_octet(&octet_star(&a, &b))
                .max_abs_diff(&octet_star(&ra, &rb)),
            1e-9,
        );
        c.check(
            "dot invariance",
            (octet_dot(&ra, &rb) - octet_dot(&a, &b)).abs(),
            1e-10,
        );
    }
    c.finish()
}

fn check_lindblad() -> GroupReport {
    let mut c = Checker::new("lindblad-engine");
    let mut rng = ChaCha8Rng::seed_from_u64(104);

    for k in 0..100 {
        let h = random_matrix(&mut rng, 3, 1.0).hermitian_part();
        let jump = if k % 2 == 0 {
            random_matrix(&mut rng, 3, 1.0)
        } else {
            random_matrix(&mut rng, 3, 1.0).hermitian_part()
        };
        let model = LindbladModel::new(h, vec![jump]).unwrap();
        let rho = random_density(&mut rng, 3);
        let rhs = model.rhs_density(&rho).unwrap();
        c.check("right-hand-side trace", rhs.trace().norm(), 1e-12);
        c.check(
            "right-hand-side Hermiticity",
            rhs.hermiticity_violation().0,
            1e-12,
        );
    }

    let params = DephasingParams::uniform(1.0, 0.1);
    let deviation = |dt: f64| -> f64 {
        let tr = evolve(&params.model(), &params.initial_state(), 2.0, dt, 1).unwrap();
        tr.times()
            .iter()
            .zip(tr.states())
            .map(|(&t, state)| {
                let exact = analytic_dephasing_solution(&params, t).unwrap();
                state.matrix().max_abs_diff(exact.matrix()).unwrap()
            })
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (deviation(0.04), deviation(0.02));
    // Passes when halving dt shrinks the deviation by at least 12x.
    c.check(
        "fourth-order convergence",
        (12.0 * fine / coarse - 1.0).max(0.0),
        0.0,
    );

    let h = 1e-6;
    for k in 1..=20 {
        let t = 0.4 * k as f64;
        let plus = analytic_dephasing_solution(&params, t + h).unwrap();
        let minus = analytic_dephasing_solution(&params, t - h).unwrap();
        let derivative = (plus.matrix() - minus.matrix()).scale_re(1.0 / (2.0 * h));
        let rhs = params
            .model()
            .rhs_density(&analytic_dephasing_solution(&params, t).unwrap())
            .unwrap();
        c.check(
            "analytic solution satisfies the master equation",
            derivative.max_abs_diff(&rhs).unwrap(),
            1e-6,
        );
    }

    let tr = evolve(&params.model(), &params.initial_state(), 10.0, 1e-3, 500).unwrap();
    c.check("trace drift", tr.max_trace_drift(), 1e-9);
    let rho0 = params.initial_state();
    for (&t, state) in tr.times().iter().zip(tr.states()) {
        c.check(
            "sample Hermiticity",
            state.matrix().hermiticity_violation().0,
            1e-10,
        );
        c.check(
            "sample positivity",
            (-state.matrix().eigvalsh().unwrap()[0]).max(0.0),
            1e-7,
        );
        let m = state.matrix();
        let ratio12 = m[(0, 1)].norm() / rho0.matrix()[(0, 1)].norm();
        let ratio13 = m[(0, 2)].norm() / rho0.matrix()[(0, 2)].norm();
        c.check(
            "coherence decay e^(-2 eta t)",
            (ratio12 - (-2.0 * params.eta * t).exp()).abs(),
            1e-9,
        );
        c.check(
            "coherence decay e^(-eta t / 2)",
            (ratio13 - (-params.eta * t / 2.0).exp()).abs(),
            1e-9,
        );
    }
    c.finish()
}

fn check_phase() -> GroupReport {
    let mut c = Checker::new("geometric-phase");
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let theta = FRAC_PI_3;
    let exact = -2.0 * PI * theta.cos().powi(2);

    let mut previous_gap = f64::INFINITY;
    for segments in [1_000usize, 10_000, 100_000] {
        let parameter_loop = ParameterLoop::from_linear_sweeps(
            BlochParameters::sphere(1.0, theta, FRAC_PI_4),
            &[(SweepAngle::Xi, 0.0, 2.0 * PI)],
            segments,
        )
        .unwrap();
        let tr = parameter_loop.trajectory().unwrap();
        let discrete = pancharatnam_phase(&tr, true).unwrap().raw;
        let decomposition = phase_decomposition(&tr).unwrap();
        let line_integral = berry_phase_quasicyclic(&parameter_loop).unwrap();
        c.check("discrete Pancharatnam", (discrete - exact).abs(), 1e-3);
        c.check(
            "total minus dynamic",
            wrap_angle(decomposition.geometric - wrap_angle(exact)).abs(),
            1e-3,
        );
        c.check("Berry line integral", (line_integral - exact).abs(), 1e-12);
        let gap = (discrete - exact).abs();
        if gap >= previous_gap && gap > 1e-12 {
            c.check("discretization error must shrink", gap, 0.0);
        }
        previous_gap = gap;
    }

    // Bargmann invariance under per-state complex rescaling.
    let states: Vec<ComplexVector> = (0..5).map(|_| random_ray(&mut rng, 3)).collect();
    if let Ok(reference) = crate::phase::bargmann_phase(&states) {
        let rescaled: Vec<ComplexVector> = states
            .iter()
            .map(|s| {
                s.scale(C64::from_polar(
                    rng.gen_range(0.1..3.0),
                    rng.gen_range(-PI..PI),
                ))
            })
            .collect();
        c.check(
            "Bargmann gauge invariance",
            (crate::phase::bargmann_phase(&rescaled).unwrap() - reference).abs(),
            1e-12,
        );
    }

    // Reparametrization invariance of the winding sum.
    let n = 10_000;
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
    let uniform = pancharatnam_phase(&build(|s| s), true).unwrap().raw;
    let warped = pancharatnam_phase(&build(|s| s * s), true).unwrap().raw;
    c.check("reparametrization invariance", (uniform - warped).abs(), 1e-3);

    // Endpoint total phase against the factored closed form.
    for _ in 0..100 {
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
        if let Ok(direct) = total_phase(&p0.ray().unwrap(), &pt.ray().unwrap()) {
            c.check(
                "factored total-phase closed form",
                wrap_angle(direct - total_phase_closed_form(&p0, &pt)).abs(),
                1e-10,
            );
        }
    }

    // Unitary evolution under H = (Ω/2)λ₃ against the induced ξ-type path.
    let omega = 1.0;
    let t_end = 2.0 * PI / omega;
    let psi0 = BlochParameters::sphere(1.0, theta, 0.0).ray().unwrap();
    let h = crate::generators::gell_mann_cached()
        .get(3)
        .scale_re(omega / 2.0);
    let steps = 10_000;
    let mut times = Vec::with_capacity(steps + 1);
    let mut rays = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = t_end * k as f64 / steps as f64;
        times.push(t);
        rays.push(expm_hermitian_phase(&h, -t).unwrap().matvec(&psi0));
    }
    let tr = RayTrajectory::new(times, rays).unwrap();
    let geometric = phase_decomposition(&tr).unwrap().geometric;
    c.check(
        "unitary-evolution geometric phase",
        wrap_angle(geometric - wrap_angle(-PI * theta.cos().powi(2))).abs(),
        1e-3,
    );

    c.finish()
}

fn check_polarization() -> GroupReport {
    let mut c = Checker::new("polarization");
    let mut rng = ChaCha8Rng::seed_from_u64(106);

    // Commutation algebra on every basis up to n_max = 4.
    for n_max in 0..=4 {
        let basis = TwoModeBasis::new(n_max);
        let ops = stokes_operators(&basis);
        let s = [&ops.s1, &ops.s2, &ops.s3];
        let eps = |k: usize, l: usize, m: usize| -> f64 {
            match (k, l, m) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (2, 1, 0) | (0, 2, 1) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        };
        for k in 0..3 {
            for l in 0..3 {
                let comm = commutator(s[k], s[l]).unwrap();
                let mut expected = ComplexMatrix::zeros(basis.dim(), basis.dim());
                for m in 0..3 {
                    let e = eps(k, l, m);
                    if e != 0.0 {
                        expected = &expected + &s[m].scale(C64::new(0.0, 2.0 * e));
                    }
                }
                c.check(
                    "Stokes commutation algebra",
                    comm.max_abs_diff(&expected).unwrap(),
                    1e-12,
                );
            }
            c.check(
                "S0 commutes with the generators",
                commutator(&ops.s0, s[k]).unwrap().max_abs_entry(),
                1e-12,
            );
        }
        c.check(
            "ladder commutator 4 S3",
            commutator(&ops.s_plus, &ops.s_minus)
                .unwrap()
                .max_abs_diff(&ops.s3.scale_re(4.0))
                .unwrap(),
            1e-12,
        );
    }

    // Block preservation for the number-conserving models.
    let basis2 = TwoModeBasis::new(2);
    let dephasing = PolarizationModelKind::PureDephasing {
        gamma_plus: 0.3,
        gamma_minus: 0.2,
    };
    let model = build_model(dephasing, &basis2).unwrap();
    let mut block_diag = ComplexMatrix::zeros(6, 6);
    block_diag[(0, 0)] = C64::new(0.2, 0.0);
    let one = random_ray(&mut rng, 2);
    let two = random_ray(&mut rng, 3);
    for (offset, ray, weight) in [(1usize, &one, 0.3), (3, &two, 0.5)] {
        let block = ray.outer(ray).scale_re(weight / ray.norm_sqr());
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                block_diag[(offset + i, offset + j)] = block[(i, j)];
            }
        }
    }
    let rho = DensityMatrix::new(block_diag).unwrap();
    c.check(
        "block preservation",
        basis2.max_off_block_magnitude(&model.rhs_density(&rho).unwrap()),
        1e-14,
    );

    // Stationary pure dephasing: diagonal state with frozen populations.
    let basis1 = TwoModeBasis::new(1);
    let model1 = build_model(dephasing, &basis1).unwrap();
    let mut psi = ComplexVector::zeros(3);
    psi[1] = C64::new(0.6, 0.0);
    psi[2] = C64::new(0.48, 0.64);
    let rho0 = DensityMatrix::pure(&psi).unwrap();
    let tr = evolve(&model1, &rho0, 100.0, 1e-2, 1000).unwrap();
    let last = tr.states().last().unwrap().matrix();
    let mut off_diag = 0.0_f64;
    let mut population_drift = 0.0_f64;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                population_drift =
                    population_drift.max((last[(i, i)] - rho0.matrix()[(i, i)]).norm());
            } else {
                off_diag = off_diag.max(last[(i, j)].norm());
            }
        }
    }
    c.check("stationary dephasing off-diagonals", off_diag, 1e-9);
    c.check("stationary dephasing populations", population_drift, 1e-9);

    // Lossy model: <S0> is not conserved (strictly decreasing with photons).
    let lossy = PolarizationModelKind::Lossy {
        gamma_plus: 0.4,
        gamma_minus: 0.25,
    };
    let lossy_model = build_model(lossy, &basis1).unwrap();
    let ops1 = stokes_operators(&basis1);
    let lossy_tr = evolve(&lossy_model, &rho0, 10.0, 1e-2, 100).unwrap();
    let mut previous_s0 = f64::INFINITY;
    let mut monotone = 0.0_f64;
    for state in lossy_tr.states() {
        let [s0, ..] = stokes_expectations(state, &ops1);
        if s0 >= previous_s0 {
            monotone = monotone.max(s0 - previous_s0 + 1e-12);
        }
        previous_s0 = s0;
    }
    c.check("lossy photon-number decrease", monotone, 0.0);

    // Numeric-versus-analytic polarization decay.
    let [_, sx, sy, sz] = stokes_expectations(&rho0, &ops1);
    let tr = evolve(&model1, &rho0, 10.0, 1e-3, 500).unwrap();
    for (&t, state) in tr.times().iter().zip(tr.states()) {
        let p = degree_of_polarization(state, &ops1).unwrap();
        let expected = analytic_polarization_decay(dephasing, [sx, sy, sz], t).unwrap();
        c.check("pure-dephasing P(t)", (p - expected).abs(), 1e-6);
    }
    let bath = PolarizationModelKind::AtomicBath {
        gamma: 0.02,
        omega: 1.0,
    };
    let block = TwoModeBasis::single_block(1);
    let bath_model = build_model(bath, &block).unwrap();
    let block_ops = stokes_operators(&block);
    let mut psi2 = ComplexVector::zeros(2);
    psi2[0] = C64::new(0.8, 0.0);
    psi2[1] = C64::new(0.36, 0.48);
    let bath_rho0 = DensityMatrix::pure(&psi2).unwrap();
    let [_, bx, by, bz] = stokes_expectations(&bath_rho0, &block_ops);
    let bath_tr = evolve(&bath_model, &bath_rho0, 10.0, 1e-3, 500).unwrap();
    for (&t, state) in bath_tr.times().iter().zip(bath_tr.states()) {
        let p = degree_of_polarization(state, &block_ops).unwrap();
        let expected = analytic_polarization_decay(bath, [bx, by, bz], t).unwrap();
        c.check("atomic-bath P(t)", (p - expected).abs(), 1e-6);
    }

    // Classical Stokes ratios from single-photon superpositions.
    for _ in 0..25 {
        let e_plus = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let e_minus = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if e_plus.norm() < 0.1 || e_minus.norm() < 0.1 {
            continue;
        }
        let mut psi = ComplexVector::zeros(3);
        psi[basis1.index_of(1, 1).unwrap()] = e_plus;
        psi[basis1.index_of(1, 0).unwrap()] = e_minus;
        let rho = DensityMatrix::pure(&psi).unwrap();
        let [q0, q1, q2, q3] = stokes_expectations(&rho, &ops1);
        let [c0, c1, c2, c3] = classical_stokes(e_plus, e_minus);
        let worst = [(q3, c1), (q1, c2), (q2, c3)]
            .iter()
            .map(|&(q, cl)| (q / q0 - cl / c0).abs())
            .fold(0.0, f64::max);
        c.check("classical Stokes consistency", worst, 1e-12);
    }

    c.finish()
}

/// Runs every invariant group, optionally with a deliberately corrupted
/// fixture.
pub fn run(mutation: Option<Mutation>) -> VerifyReport {
    VerifyReport {
        groups: vec![
            check_linalg(),
            check_pauli(),
            check_structure_constants(mutation),
            check_bloch(),
            check_adjoint(),
            check_lindblad(),
            check_phase(),
            check_polarization(),
        ],
    }
}
