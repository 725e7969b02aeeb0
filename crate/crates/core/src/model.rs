//! System parameters, validation and the initial covariance matrix.

use std::fmt;

use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// Absolute tolerance on `|σ_ij − σ_ji|` accepted by [`CovMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Relative width of the band around `|ν| = ω1·ω2` treated as marginal coupling.
pub const MARGINAL_REL_TOL: f64 = 1e-12;

/// Parameters of the coupled-oscillator model in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Base angular frequency ω.
    pub omega: f64,
    /// Asymmetry ε, `0 <= ε < 1`.
    pub epsilon: f64,
    /// Position-position coupling constant ν.
    pub nu: f64,
    /// Dissipation constant λ.
    pub lambda_: f64,
    /// Bath temperature T.
    pub temperature: f64,
    /// Squeezing of the initial two-mode squeezed vacuum.
    pub r: f64,
}

impl SystemParams {
    pub fn new(omega: f64, epsilon: f64, nu: f64, lambda_: f64, temperature: f64, r: f64) -> Self {
        Self { omega, epsilon, nu, lambda_, temperature, r }
    }

    /// Mode frequencies `(ω1, ω2) = (ω√(1+ε), ω√(1−ε))`.
    pub fn mode_frequencies(&self) -> (f64, f64) {
        mode_frequencies(self)
    }

    /// The coupling bound `ω1·ω2` of a physical Hamiltonian.
    pub fn coupling_bound(&self) -> f64 {
        let (w1, w2) = self.mode_frequencies();
        w1 * w2
    }

    /// True when `|ν|` sits on the coupling bound (within [`MARGINAL_REL_TOL`]).
    pub fn is_marginal_coupling(&self) -> bool {
        let bound = self.coupling_bound();
        (self.nu.abs() - bound).abs() <= MARGINAL_REL_TOL * bound
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Validates and returns `self`, or the list of violations as an error.
    pub fn validated(self) -> Result<Self> {
        let report = validate(&self);
        if report.is_ok() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(report.violations))
        }
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "omega={} epsilon={} nu={} lambda={} temp={} r={}",
            self.omega, self.epsilon, self.nu, self.lambda_, self.temperature, self.r
        )
    }
}

/// A violated parameter constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite(&'static str),
    OmegaNotPositive(f64),
    EpsilonNegative(f64),
    EpsilonNotBelowOne(f64),
    LambdaNegative(f64),
    TemperatureNegative(f64),
    SqueezingNegative(f64),
    CouplingExceedsBound { nu: f64, bound: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite(name) => write!(f, "{name} must be finite"),
            Violation::OmegaNotPositive(v) => write!(f, "omega > 0 violated (omega = {v})"),
            Violation::EpsilonNegative(v) => write!(f, "epsilon >= 0 violated (epsilon = {v})"),
            Violation::EpsilonNotBelowOne(v) => write!(f, "epsilon < 1 violated (epsilon = {v})"),
            Violation::LambdaNegative(v) => write!(f, "lambda >= 0 violated (lambda = {v})"),
            Violation::TemperatureNegative(v) => write!(f, "temp >= 0 violated (temp = {v})"),
            Violation::SqueezingNegative(v) => write!(f, "r >= 0 violated (r = {v})"),
            Violation::CouplingExceedsBound { nu, bound } => write!(
                f,
                "|nu| <= omega1*omega2 violated (|nu| = {}, omega1*omega2 = {bound})",
                nu.abs()
            ),
        }
    }
}

/// Conditions that are allowed but prevent the closed-form steady-state path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// `|ν| = ω1·ω2`.
    MarginalCoupling { nu: f64, bound: f64 },
    /// `λ = 0`.
    NoDissipation,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::MarginalCoupling { nu, bound } => write!(
                f,
                "|nu| = {} equals omega1*omega2 = {bound}; steady state unavailable",
                nu.abs()
            ),
            Warning::NoDissipation => {
                write!(f, "lambda = 0; steady state unavailable, use the rk4 integrator")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(params: &SystemParams) -> ValidationReport {
    let mut report = ValidationReport::default();
    let fields = [
        ("omega", params.omega),
        ("epsilon", params.epsilon),
        ("nu", params.nu),
        ("lambda", params.lambda_),
        ("temp", params.temperature),
        ("r", params.r),
    ];
    for (name, value) in fields {
        if !value.is_finite() {
            report.violations.push(Violation::NonFinite(name));
        }
    }
    if !report.violations.is_empty() {
        return report;
    }

    if params.omega <= 0.0 {
        report.violations.push(Violation::OmegaNotPositive(params.omega));
    }
    if params.epsilon < 0.0 {
        report.violations.push(Violation::EpsilonNegative(params.epsilon));
    }
    if params.epsilon >= 1.0 {
        report.violations.push(Violation::EpsilonNotBelowOne(params.epsilon));
    }
    if params.lambda_ < 0.0 {
        report.violations.push(Violation::LambdaNegative(params.lambda_));
    }
    if params.temperature < 0.0 {
        report.violations.push(Violation::TemperatureNegative(params.temperature));
    }
    if params.r < 0.0 {
        report.violations.push(Violation::SqueezingNegative(params.r));
    }
    // The coupling bound is only meaningful once ω and ε are sane.
    if params.omega > 0.0 && (0.0..1.0).contains(&params.epsilon) {
        let bound = params.coupling_bound();
        if params.is_marginal_coupling() {
            report.warnings.push(Warning::MarginalCoupling { nu: params.nu, bound });
        } else if params.nu.abs() > bound {
            report.violations.push(Violation::CouplingExceedsBound { nu: params.nu, bound });
        }
    }
    if params.lambda_ == 0.0 {
        report.warnings.push(Warning::NoDissipation);
    }
    report
}

pub fn mode_frequencies(params: &SystemParams) -> (f64, f64) {
    (
        params.omega * (1.0 + params.epsilon).sqrt(),
        params.omega * (1.0 - params.epsilon).sqrt(),
    )
}

/// Real symmetric 4×4 covariance matrix, ordering `(x1, p1, x2, p2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMatrix(Matrix4<f64>);

impl CovMatrix {
    /// Wraps `m`, rejecting it when any `|m_ij − m_ji|` exceeds [`SYMMETRY_TOL`].
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let asym = max_asymmetry(&m);
        if asym.is_nan() || asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self(m))
    }

    /// Wraps `(m + mᵀ)/2`, which is symmetric bit for bit.
    pub fn symmetrized(m: Matrix4<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn from_row_slice(rows: &[f64]) -> Result<Self> {
        Self::new(Matrix4::from_row_slice(rows))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Matrix4<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    pub fn max_abs_diff(&self, other: &CovMatrix) -> f64 {
        (self.0 - other.0).abs().max()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0 * k)
    }
}

fn max_asymmetry(m: &Matrix4<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = (m[(i, j)] - m[(j, i)]).abs();
            if d.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(d);
        }
    }
    worst
}

/// Covariance matrix of the two-mode squeezed vacuum with squeezing `r`.
pub fn initial_squeezed_vacuum(r: f64) -> CovMatrix {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    #[rustfmt::skip]
    let m = Matrix4::new(
        c,   0.0, s,   0.0,
        0.0, c,   0.0, -s,
        s,   0.0, c,   0.0,
        0.0, -s,  0.0, c,
    );
    CovMatrix(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn fig1() -> SystemParams {
        SystemParams::new(1.0, 0.0, 0.8, 0.6, 0.2, 1.0)
    }

    #[test]
    fn fig1_caption_params_are_valid() {
        let report = validate(&fig1());
        assert!(report.is_ok());
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn coupling_above_bound_is_rejected() {
        let p = SystemParams { nu: 1.5, ..fig1() };
        let report = validate(&p);
        assert_eq!(
            report.violations,
            vec![Violation::CouplingExceedsBound { nu: 1.5, bound: 1.0 }]
        );
        assert!(report.violations[0].to_string().contains("|nu| <= omega1*omega2"));
    }

    #[test]
    fn epsilon_one_is_rejected() {
        let p = SystemParams { epsilon: 1.0, ..fig1() };
        let report = validate(&p);
        assert!(report.violations.contains(&Violation::EpsilonNotBelowOne(1.0)));
    }

    #[test]
    fn every_bad_field_is_reported() {
        let p = SystemParams::new(-1.0, -0.1, 0.0, -0.5, -1.0, -2.0);
        let report = validate(&p);
        assert_eq!(report.violations.len(), 5);
        let nan = SystemParams { temperature: f64::NAN, ..fig1() };
        assert_eq!(validate(&nan).violations, vec![Violation::NonFinite("temp")]);
    }

    #[test]
    fn marginal_coupling_and_zero_lambda_warn() {
        let p = SystemParams { nu: -1.0, lambda_: 0.0, ..fig1() };
        let report = validate(&p);
        assert!(report.is_ok());
        assert_eq!(report.warnings.len(), 2);
        assert!(matches!(report.warnings[0], Warning::MarginalCoupling { .. }));
        assert_eq!(report.warnings[1], Warning::NoDissipation);
        assert!(p.validated().is_ok());
    }

    #[test]
    fn mode_frequency_examples() {
        assert_eq!(SystemParams::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0).mode_frequencies(), (1.0, 1.0));
        assert_eq!(SystemParams::new(2.0, 0.0, 0.0, 0.0, 0.0, 0.0).mode_frequencies(), (2.0, 2.0));
        let (w1, w2) = SystemParams::new(1.0, 0.5, 0.0, 0.0, 0.0, 0.0).mode_frequencies();
        assert_relative_eq!(w1, 1.224_744_871_391_589, epsilon = 1e-12);
        assert_relative_eq!(w2, 0.707_106_781_186_547_5, epsilon = 1e-12);
    }

    #[test]
    fn squeezed_vacuum_entries() {
        assert_eq!(*initial_squeezed_vacuum(0.0).matrix(), Matrix4::identity());
        let s = initial_squeezed_vacuum(1.0);
        for i in 0..4 {
            assert_relative_eq!(s.get(i, i), 3.762_195_691_083_631, epsilon = 1e-12);
        }
        assert_relative_eq!(s.get(0, 2), 3.626_860_407_847_019, epsilon = 1e-12);
        assert_relative_eq!(s.get(2, 0), 3.626_860_407_847_019, epsilon = 1e-12);
        assert_relative_eq!(s.get(1, 3), -3.626_860_407_847_019, epsilon = 1e-12);
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(s.get(0, 3), 0.0);
        assert!((s.det() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cov_matrix_rejects_asymmetry() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = 1e-9;
        assert!(matches!(CovMatrix::new(m), Err(Error::NotSymmetric(_))));
        let s = CovMatrix::symmetrized(m);
        assert_eq!(s.get(0, 1), s.get(1, 0));
    }

    proptest! {
        #[test]
        fn squeezed_vacuum_has_unit_determinant(r in 0.0f64..2.5) {
            let det = initial_squeezed_vacuum(r).det();
            prop_assert!((det - 1.0).abs() < 1e-10, "det = {det}");
        }

        #[test]
        fn mode_frequency_identities(omega in 0.01f64..10.0, eps in 0.0f64..0.999) {
            let p = SystemParams::new(omega, eps, 0.0, 0.0, 0.0, 0.0);
            let (w1, w2) = p.mode_frequencies();
            prop_assert!(w1 >= w2 && w2 > 0.0);
            let scale = omega.powi(4).max(1.0);
            prop_assert!((w1 * w1 + w2 * w2 - 2.0 * omega * omega).abs() <= 1e-12 * scale);
            prop_assert!(((w1 * w2).powi(2) - omega.powi(4) * (1.0 - eps * eps)).abs() <= 1e-12 * scale);
        }
    }
}
