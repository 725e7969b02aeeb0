//! Drift and diffusion matrices, closed-form propagation, the steady-state
//! Lyapunov solve and a fixed-step Runge-Kutta cross-check.
//!
//! The covariance matrix obeys
//!
//! ```text
//! σ(t) = e^{Mt} [σ(0) − σ(∞)] (e^{Mt})ᵀ + σ(∞),    M σ(∞) + σ(∞) Mᵀ = −2D,
//! ```
//!
//! which is equivalent to the linear flow `dσ/dt = Mσ + σMᵀ + 2D`. The closed
//! form needs a finite `σ(∞)`; the flow does not, so [`ode_oracle`] also covers
//! `λ = 0` and marginal coupling.

mod expm;

use nalgebra::{Matrix4, SMatrix, SVector, Vector4};

use crate::error::{Error, Result};
use crate::model::{CovMatrix, SystemParams};

pub use expm::expm;

/// Default Runge-Kutta step for user-facing calls.
pub const DEFAULT_DT: f64 = 1e-3;

/// Pivots smaller than this fraction of the largest pivot mark the Lyapunov
/// operator as singular.
const PIVOT_REL_TOL: f64 = 1e-12;

/// Drift matrix `M`, ordering `(x1, p1, x2, p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Matrix4<f64>);

impl DriftMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// True when every eigenvalue has a strictly negative real part.
    pub fn is_hurwitz(&self) -> bool {
        self.0.complex_eigenvalues().iter().all(|z| z.re < 0.0)
    }

    pub fn max_eigen_real_part(&self) -> f64 {
        self.0
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Diagonal diffusion matrix `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(Vector4<f64>);

impl DiffusionMatrix {
    pub fn diagonal(&self) -> &Vector4<f64> {
        &self.0
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&self.0)
    }
}

pub fn build_drift(params: &SystemParams) -> DriftMatrix {
    let (w1, w2) = params.mode_frequencies();
    let l = params.lambda_;
    let nu = params.nu;
    #[rustfmt::skip]
    let m = Matrix4::new(
        -l,       1.0, 0.0,      0.0,
        -w1 * w1, -l,  -nu,      0.0,
        0.0,      0.0, -l,       1.0,
        -nu,      0.0, -w2 * w2, -l,
    );
    DriftMatrix(m)
}

pub fn build_diffusion(params: &SystemParams) -> DiffusionMatrix {
    let (w1, w2) = params.mode_frequencies();
    let l = params.lambda_;
    let c1 = coth_half_omega_over_t(w1, params.temperature);
    let c2 = coth_half_omega_over_t(w2, params.temperature);
    DiffusionMatrix(Vector4::new(l / w1 * c1, l * w1 * c1, l / w2 * c2, l * w2 * c2))
}

/// `coth(ω/2T)`, exactly 1 at `T = 0`.
pub fn coth_half_omega_over_t(omega_i: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let x = omega_i / (2.0 * temperature);
    // coth x = 1 + 2/(e^{2x} − 1); the tail vanishes instead of overflowing.
    1.0 + 2.0 / (2.0 * x).exp_m1()
}

/// `e^{Mt}`.
pub fn mat_exp(drift: &DriftMatrix, t: f64) -> Matrix4<f64> {
    expm(&(drift.0 * t))
}

/// Rejects parameter sets without a finite, unique steady state.
pub fn require_steady_state(params: &SystemParams) -> Result<()> {
    if params.lambda_ <= 0.0 {
        return Err(Error::SteadyStateUnavailable(format!(
            "lambda = {} gives no dissipation",
            params.lambda_
        )));
    }
    if params.is_marginal_coupling() {
        return Err(Error::SteadyStateUnavailable(format!(
            "marginal coupling |nu| = omega1*omega2 = {}",
            params.coupling_bound()
        )));
    }
    let drift = build_drift(params);
    if !drift.is_hurwitz() {
        return Err(Error::SteadyStateUnavailable(format!(
            "drift matrix is not stable (max eigenvalue real part {})",
            drift.max_eigen_real_part()
        )));
    }
    Ok(())
}

/// Solves `Mσ + σMᵀ = −2D` through the 16×16 Kronecker-sum system.
pub fn steady_state(params: &SystemParams) -> Result<CovMatrix> {
    require_steady_state(params)?;
    let drift = build_drift(params);
    let diffusion = build_diffusion(params);
    let sigma = solve_lyapunov(drift.matrix(), &(diffusion.matrix() * -2.0))?;
    Ok(CovMatrix::symmetrized(sigma))
}

/// Solves `A X + X Aᵀ = Q` by column-major vectorization,
/// `(I ⊗ A + A ⊗ I) vec X = vec Q`, and dense LU with partial pivoting.
pub fn solve_lyapunov(a: &Matrix4<f64>, q: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let mut op = SMatrix::<f64, 16, 16>::zeros();
    for j in 0..4 {
        for i in 0..4 {
            let row = i + 4 * j;
            for k in 0..4 {
                // (I ⊗ A): couples σ_kj to row (i, j)
                op[(row, k + 4 * j)] += a[(i, k)];
                // (A ⊗ I): couples σ_ik to row (i, j)
                op[(row, i + 4 * k)] += a[(j, k)];
            }
        }
    }
    let rhs = SVector::<f64, 16>::from_iterator(q.iter().copied());

    let lu = op.lu();
    let u = lu.u();
    let diag = u.diagonal().abs();
    let (largest, smallest) = (diag.max(), diag.min());
    if largest == 0.0 || smallest <= PIVOT_REL_TOL * largest {
        return Err(Error::SteadyStateUnavailable(
            "Lyapunov operator is singular".to_string(),
        ));
    }
    let x = lu.solve(&rhs).ok_or_else(|| {
        Error::SteadyStateUnavailable("Lyapunov operator is singular".to_string())
    })?;
    Ok(Matrix4::from_column_slice(x.as_slice()))
}

/// Max-abs residual of the steady-state equation, `‖Mσ + σMᵀ + 2D‖_max`.
pub fn lyapunov_residual(params: &SystemParams, sigma: &CovMatrix) -> f64 {
    let m = build_drift(params).0;
    let d = build_diffusion(params).matrix();
    let s = sigma.matrix();
    (m * s + s * m.transpose() + d * 2.0).abs().max()
}

/// Closed-form propagator for one parameter set; caches `M` and `σ(∞)`.
#[derive(Debug, Clone)]
pub struct Propagator {
    drift: DriftMatrix,
    steady: CovMatrix,
}

impl Propagator {
    pub fn new(params: &SystemParams) -> Result<Self> {
        Ok(Self { drift: build_drift(params), steady: steady_state(params)? })
    }

    pub fn steady_state(&self) -> &CovMatrix {
        &self.steady
    }

    pub fn propagate(&self, sigma0: &CovMatrix, t: f64) -> Result<CovMatrix> {
        check_time(t)?;
        let e = mat_exp(&self.drift, t);
        let s_inf = self.steady.matrix();
        let s = e * (sigma0.matrix() - s_inf) * e.transpose() + s_inf;
        Ok(CovMatrix::symmetrized(s))
    }
}

/// `σ(t) = e^{Mt}[σ(0) − σ(∞)](e^{Mt})ᵀ + σ(∞)`.
pub fn propagate(sigma0: &CovMatrix, params: &SystemParams, t: f64) -> Result<CovMatrix> {
    check_time(t)?;
    Propagator::new(params)?.propagate(sigma0, t)
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidStep(format!("time must be finite and >= 0, got {t}")))
    }
}

/// Right-hand side `Mσ + σMᵀ + 2D` of the covariance flow.
#[derive(Debug, Clone, Copy)]
pub struct CovarianceFlow {
    drift: Matrix4<f64>,
    drift_t: Matrix4<f64>,
    two_d: Matrix4<f64>,
}

impl CovarianceFlow {
    pub fn new(params: &SystemParams) -> Self {
        let drift = build_drift(params).0;
        Self { drift, drift_t: drift.transpose(), two_d: build_diffusion(params).matrix() * 2.0 }
    }

    fn rate(&self, s: &Matrix4<f64>) -> Matrix4<f64> {
        self.drift * s + s * self.drift_t + self.two_d
    }

    /// One classical RK4 step of size `h`, symmetrized.
    pub fn rk4_step(&self, s: &Matrix4<f64>, h: f64) -> Matrix4<f64> {
        let k1 = self.rate(s);
        let k2 = self.rate(&(s + k1 * (h / 2.0)));
        let k3 = self.rate(&(s + k2 * (h / 2.0)));
        let k4 = self.rate(&(s + k3 * h));
        let next = s + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        (next + next.transpose()) * 0.5
    }

    /// Integrates over `span` with uniform steps no larger than `dt`.
    pub fn integrate(&self, sigma0: &CovMatrix, span: f64, dt: f64) -> Result<CovMatrix> {
        check_time(span)?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidStep(format!("dt must be finite and > 0, got {dt}")));
        }
        if span == 0.0 {
            return Ok(*sigma0);
        }
        let steps = ((span / dt) - 1e-9).ceil().max(1.0) as u64;
        let h = span / steps as f64;
        let mut s = *sigma0.matrix();
        for _ in 0..steps {
            s = self.rk4_step(&s, h);
        }
        Ok(CovMatrix::symmetrized(s))
    }
}

/// Fixed-step RK4 integration of `dσ/dt = Mσ + σMᵀ + 2D` from 0 to `t`.
///
/// Valid for every parameter set, including `λ = 0` and marginal coupling.
pub fn ode_oracle(sigma0: &CovMatrix, params: &SystemParams, t: f64, dt: f64) -> Result<CovMatrix> {
    CovarianceFlow::new(params).integrate(sigma0, t, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::invariants;
    use crate::model::initial_squeezed_vacuum;
    use approx::assert_relative_eq;

    fn fig1() -> SystemParams {
        SystemParams::new(1.0, 0.0, 0.8, 0.6, 0.2, 1.0)
    }

    #[test]
    fn drift_matches_template() {
        #[rustfmt::skip]
        let expected = Matrix4::new(
            -0.6, 1.0, 0.0, 0.0,
            -1.0, -0.6, -0.8, 0.0,
            0.0, 0.0, -0.6, 1.0,
            -0.8, 0.0, -1.0, -0.6,
        );
        assert_eq!(*build_drift(&fig1()).matrix(), expected);

        let free = SystemParams::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        #[rustfmt::skip]
        let expected = Matrix4::new(
            0.0, 1.0, 0.0, 0.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, -1.0, 0.0,
        );
        assert_eq!(*build_drift(&free).matrix(), expected);
    }

    #[test]
    fn drift_spectrum_is_shifted_by_lambda() {
        let drift = build_drift(&fig1());
        assert!(drift.is_hurwitz());
        assert_relative_eq!(drift.max_eigen_real_part(), -0.6, epsilon = 1e-12);
    }

    #[test]
    fn coth_examples() {
        assert_eq!(coth_half_omega_over_t(1.0, 0.0), 1.0);
        assert_relative_eq!(coth_half_omega_over_t(1.0, 0.2), 1.013_567_309_812_608_5, epsilon = 1e-12);
        assert_relative_eq!(coth_half_omega_over_t(1.0, 100.0), 200.001_666_663_888_9, epsilon = 1e-9);
        // exp(2x) overflows here; the tail must simply vanish.
        assert_eq!(coth_half_omega_over_t(1e3, 1e-3), 1.0);
    }

    #[test]
    fn diffusion_examples() {
        let zero_t = SystemParams { temperature: 0.0, ..fig1() };
        assert_eq!(*build_diffusion(&zero_t).diagonal(), Vector4::repeat(0.6));

        let d = build_diffusion(&fig1());
        for v in d.diagonal().iter() {
            assert_relative_eq!(*v, 0.608_140_385_887_565, epsilon = 1e-12);
        }

        let asym = SystemParams { epsilon: 0.5, temperature: 0.0, ..fig1() };
        let (s15, s05) = (1.5f64.sqrt(), 0.5f64.sqrt());
        let expected = Vector4::new(0.6 / s15, 0.6 * s15, 0.6 / s05, 0.6 * s05);
        assert!((build_diffusion(&asym).diagonal() - expected).abs().max() < 1e-15);
    }

    #[test]
    fn mat_exp_matches_taylor_for_fig1_drift() {
        let drift = build_drift(&fig1());
        let mut term = Matrix4::identity();
        let mut sum = term;
        for k in 1..=50 {
            term = term * drift.matrix() / k as f64;
            sum += term;
        }
        assert!((mat_exp(&drift, 1.0) - sum).abs().max() < 1e-10);
        assert_eq!(mat_exp(&drift, 0.0), Matrix4::identity());
    }

    #[test]
    fn decoupled_steady_state_is_thermal() {
        let p = SystemParams { nu: 0.0, temperature: 0.0, ..fig1() };
        let s = steady_state(&p).unwrap();
        assert!((s.matrix() - Matrix4::identity()).abs().max() < 1e-12);

        let p = SystemParams { nu: 0.0, ..fig1() };
        let s = steady_state(&p).unwrap();
        let c = 1.013_567_309_812_608_5;
        assert!((s.matrix() - Matrix4::identity() * c).abs().max() < 1e-10);
    }

    #[test]
    fn coupled_steady_state_residual() {
        let s = steady_state(&fig1()).unwrap();
        assert!(lyapunov_residual(&fig1(), &s) <= 1e-10);
        assert_eq!(s.matrix(), &s.matrix().transpose());
    }

    #[test]
    fn steady_state_rejects_unstable_points() {
        let no_damping = SystemParams { lambda_: 0.0, ..fig1() };
        assert!(matches!(steady_state(&no_damping), Err(Error::SteadyStateUnavailable(_))));
        let marginal = SystemParams { nu: 1.0, ..fig1() };
        assert!(matches!(steady_state(&marginal), Err(Error::SteadyStateUnavailable(_))));
        let sigma0 = initial_squeezed_vacuum(1.0);
        assert!(matches!(
            propagate(&sigma0, &marginal, 1.0),
            Err(Error::SteadyStateUnavailable(_))
        ));
    }

    #[test]
    fn singular_lyapunov_operator_is_reported() {
        // Purely oscillatory drift: eigenvalues ±i pair up to zero sums.
        let a = *build_drift(&SystemParams { lambda_: 0.0, ..fig1() }).matrix();
        assert!(solve_lyapunov(&a, &Matrix4::identity()).is_err());
    }

    #[test]
    fn propagate_endpoints() {
        let sigma0 = initial_squeezed_vacuum(1.0);
        let at0 = propagate(&sigma0, &fig1(), 0.0).unwrap();
        assert!(at0.max_abs_diff(&sigma0) < 1e-12);

        let late = propagate(&sigma0, &fig1(), 50.0).unwrap();
        let inf = steady_state(&fig1()).unwrap();
        assert!(late.max_abs_diff(&inf) < 1e-10);

        assert!(propagate(&sigma0, &fig1(), -1.0).is_err());
    }

    #[test]
    fn propagate_agrees_with_rk4() {
        let sigma0 = initial_squeezed_vacuum(1.0);
        let closed = propagate(&sigma0, &fig1(), 1.0).unwrap();
        let rk4 = ode_oracle(&sigma0, &fig1(), 1.0, 1e-4).unwrap();
        assert!(closed.max_abs_diff(&rk4) < 1e-8);
    }

    #[test]
    fn oracle_trivial_cases() {
        let sigma0 = initial_squeezed_vacuum(1.0);
        assert_eq!(ode_oracle(&sigma0, &fig1(), 0.0, 1e-3).unwrap(), sigma0);
        assert!(ode_oracle(&sigma0, &fig1(), 1.0, 0.0).is_err());
        assert!(ode_oracle(&sigma0, &fig1(), 1.0, f64::NAN).is_err());
    }

    #[test]
    fn hamiltonian_flow_conserves_purity() {
        for temp in [0.0, 0.2, 3.0] {
            let p = SystemParams::new(1.0, 0.0, 0.0, 0.0, temp, 1.0);
            let sigma0 = initial_squeezed_vacuum(1.0);
            let mu0 = invariants(&sigma0).unwrap().purity();
            let s = ode_oracle(&sigma0, &p, 10.0, 1e-3).unwrap();
            let mu = invariants(&s).unwrap().purity();
            assert!((mu - mu0).abs() < 1e-9, "T = {temp}: {mu} vs {mu0}");
        }
    }

    #[test]
    fn oracle_runs_at_marginal_coupling() {
        let p = SystemParams { nu: 1.0, ..fig1() };
        let s = ode_oracle(&initial_squeezed_vacuum(1.0), &p, 2.0, 1e-3).unwrap();
        let data = invariants(&s).unwrap();
        assert!(data.nu_minus >= 1.0 - 1e-8);
    }
}
