//! Random Gaussian states and parameter sets shared by integration tests.
#![allow(dead_code)]

use gaussdyn::{CovMatrix, SystemParams};
use nalgebra::{Matrix2, Matrix4};
use rand::Rng;

pub fn rotation(theta1: f64, theta2: f64) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for (k, th) in [(0, theta1), (2, theta2)] {
        let (s, c) = th.sin_cos();
        m.fixed_view_mut::<2, 2>(k, k).copy_from(&Matrix2::new(c, s, -s, c));
    }
    m
}

fn local_squeeze(s1: f64, s2: f64) -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(s1.exp(), (-s1).exp(), s2.exp(), (-s2).exp()))
}

fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        c, 0.0, s, 0.0,
        0.0, c, 0.0, s,
        -s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    );
    m
}

fn two_mode_squeeze(r: f64) -> Matrix4<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    #[rustfmt::skip]
    let m = Matrix4::new(
        c, 0.0, s, 0.0,
        0.0, c, 0.0, -s,
        s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    );
    m
}

/// Random symplectic matrix built from passive and active two-mode gates.
pub fn random_symplectic<R: Rng>(rng: &mut R, max_squeeze: f64) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    for _ in 0..2 {
        s = rotation(rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3)) * s;
        s = local_squeeze(
            rng.gen_range(-max_squeeze..max_squeeze),
            rng.gen_range(-max_squeeze..max_squeeze),
        ) * s;
        s = beam_splitter(rng.gen_range(0.0..6.3)) * s;
        s = two_mode_squeeze(rng.gen_range(-max_squeeze..max_squeeze)) * s;
    }
    s
}

/// `S diag(ν1, ν1, ν2, ν2) Sᵀ` with `ν1, ν2 >= 1`.
pub fn random_physical_state<R: Rng>(rng: &mut R) -> (CovMatrix, f64, f64) {
    let s = random_symplectic(rng, 0.6);
    let n1 = rng.gen_range(1.0..3.0);
    let n2 = rng.gen_range(1.0..3.0);
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(n1, n1, n2, n2));
    (CovMatrix::symmetrized(s * d * s.transpose()), n1.min(n2), n1.max(n2))
}

/// Valid parameters with a steady state (`λ > 0`, `|ν| < ω1ω2`).
pub fn random_stable_params<R: Rng>(rng: &mut R) -> SystemParams {
    let mut p = SystemParams {
        omega: rng.gen_range(0.5..2.0),
        epsilon: rng.gen_range(0.0..0.9),
        nu: 0.0,
        lambda_: rng.gen_range(0.1..1.5),
        temperature: if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.01..3.0) },
        r: rng.gen_range(0.0..2.0),
    };
    p.nu = rng.gen_range(-0.9..0.9) * p.coupling_bound();
    p
}
