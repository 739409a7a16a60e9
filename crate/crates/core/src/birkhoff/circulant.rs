use std::f64::consts::PI;

use num_complex::Complex64;

use super::{is_bracelet, BistochasticMatrix, UnistochasticCertificate};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Circulant matrix whose first row is `row`; each subsequent row is shifted one place right.
pub fn circulant_matrix<T: Copy + nalgebra::Scalar>(row: &[T]) -> nalgebra::DMatrix<T> {
    let n = row.len();
    nalgebra::DMatrix::from_fn(n, n, |i, j| row[(j + n - i) % n])
}

/// Constructive unistochasticity test for the circulant matrix with first row `(a, b, c, d)`.
///
/// A bracelet circulant is always unistochastic. The witness is itself
/// circulant with first row `(√a, e^{iα}√b, e^{iβ}√c, e^{iγ}√d)`: orthogonality
/// of rows two apart forces `cos(α − γ) = −√(ac/bd)·cos β`, and orthogonality of
/// neighbouring rows reduces to one real equation in `β`, solved by bisection on
/// `[π/2, 3π/2]` where the bracelet conditions guarantee a sign change.
pub fn circulant_unistochastic_4(a: f64, b: f64, c: f64, d: f64) -> Result<UnistochasticCertificate> {
    let x = [a, b, c, d];
    if x.iter().any(|v| !v.is_finite() || *v < -1e-15) {
        return Err(Error::Invalid(format!("circulant weights must be nonnegative, got {x:?}")));
    }
    if (x.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(format!("circulant weights must sum to 1, got {x:?}")));
    }
    let x = x.map(|v| v.max(0.0));
    let target = BistochasticMatrix::new(circulant_matrix::<f64>(&x))?;
    if let Err(v) = is_bracelet(&target) {
        return Ok(UnistochasticCertificate::not_bracelet(&v));
    }
    // Normalise to ac ≤ bd by a cyclic shift of the first row, i.e. a column permutation.
    let shift = usize::from(x[0] * x[2] > x[1] * x[3]);
    let y: [f64; 4] = std::array::from_fn(|k| x[(k + shift) % 4]);
    let m = solve_normalized(y);
    let witness = ComplexMatrix::from_fn(4, 4, |i, j| m[(i, (j + 4 - shift) % 4)]);
    let note = if shift == 1 { "shifted by one column".to_string() } else { String::new() };
    Ok(UnistochasticCertificate::certified(&target, witness, 0, note))
}

fn solve_normalized([a, b, c, d]: [f64; 4]) -> ComplexMatrix {
    let (sab, sbc, scd, sad) = ((a * b).sqrt(), (b * c).sqrt(), (c * d).sqrt(), (a * d).sqrt());
    if b * d == 0.0 {
        // Only permutation matrices are bracelet here.
        let real = circulant_matrix::<f64>(&[a, b, c, d]);
        return real.map(|v| Complex64::new(v.sqrt(), 0.0));
    }
    let eta = -((a * c) / (b * d)).sqrt();
    let f = |beta: f64| (eta * beta.cos()).clamp(-1.0, 1.0).acos();
    let e = |t: f64| Complex64::from_polar(1.0, t);
    let g = |beta: f64| {
        let fb = f(beta);
        (sab + scd * e(beta + fb)).norm() - (sbc + sad * e(beta - fb)).norm()
    };
    let (mut lo, mut hi) = (PI / 2.0, 3.0 * PI / 2.0);
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let fb = f(beta);
    let num = -(sbc * e(beta - fb) + sad);
    let den = sab * e(fb) + scd * e(-beta);
    let two_gamma = if den.norm() < 1e-300 { 0.0 } else { (num / den).arg() };
    let gamma = 0.5 * two_gamma;
    let alpha = gamma + fb;
    let row = [
        Complex64::new(a.sqrt(), 0.0),
        e(alpha) * b.sqrt(),
        e(beta) * c.sqrt(),
        e(gamma) * d.sqrt(),
    ];
    circulant_matrix(&row)
}
