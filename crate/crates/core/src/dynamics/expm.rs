//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.

use nalgebra::Matrix4;

/// Padé(13,13) numerator coefficients for exp.
const B: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which Padé(13) alone meets double-precision accuracy.
const THETA_13: f64 = 5.371_920_351_148_152;

/// `exp(a)` for a real 4×4 matrix.
pub fn expm(a: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = one_norm(a);
    if norm == 0.0 {
        return Matrix4::identity();
    }
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a * 2f64.powi(-squarings);
    let mut result = pade13(&scaled);
    for _ in 0..squarings {
        result = result * result;
    }
    result
}

fn one_norm(a: &Matrix4<f64>) -> f64 {
    a.column_iter().map(|c| c.abs().sum()).fold(0.0, f64::max)
}

fn pade13(a: &Matrix4<f64>) -> Matrix4<f64> {
    let ident = Matrix4::<f64>::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;

    let u_inner = a6 * (a6 * B[13] + a4 * B[11] + a2 * B[9])
        + a6 * B[7]
        + a4 * B[5]
        + a2 * B[3]
        + ident * B[1];
    let u = a * u_inner;
    let v = a6 * (a6 * B[12] + a4 * B[10] + a2 * B[8])
        + a6 * B[6]
        + a4 * B[4]
        + a2 * B[2]
        + ident * B[0];

    // V − U is well conditioned for ‖A‖₁ ≤ θ13.
    (v - u)
        .lu()
        .solve(&(v + u))
        .expect("Padé denominator is nonsingular for scaled arguments")
}
