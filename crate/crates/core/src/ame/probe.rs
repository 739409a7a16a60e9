//! Sweep of every real two-level rotation `V_α = U·R_α` acting on a pair of
//! basis vectors, used to confirm that a local maximum of `e_p` admits no
//! improving single rotation.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{entangling_power_unchecked, UNITARY_TOL};
use crate::linalg::{ensure_unitary, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationProbe {
    pub pairs: usize,
    pub angles: usize,
    pub base_e_p: f64,
    /// Largest `e_p(V_α) − e_p(U)` over all pairs and nonzero grid angles.
    pub best_gain: f64,
    pub best_pair: (usize, usize),
    pub best_angle: f64,
}

fn rotate(u: &ComplexMatrix, i: usize, j: usize, alpha: f64) -> ComplexMatrix {
    let (c, s) = (alpha.cos(), alpha.sin());
    let mut v = u.clone();
    for r in 0..u.nrows() {
        let (a, b) = (u[(r, i)], u[(r, j)]);
        v[(r, i)] = a * c + b * s;
        v[(r, j)] = b * c - a * s;
    }
    v
}

/// Evaluates `e_p` on `angles` equally spaced nonzero angles in `(0, 2π)` for
/// each of the `N(N−1)/2` column pairs of `U`.
pub fn rotation_probe(u: &ComplexMatrix, n: usize, angles: usize) -> Result<RotationProbe> {
    let side = n * n;
    if u.nrows() != side || u.ncols() != side {
        return Err(Error::Dimension(format!("expected side {side}, got {}x{}", u.nrows(), u.ncols())));
    }
    if angles == 0 {
        return Err(Error::Invalid("angles must be positive".into()));
    }
    ensure_unitary(u, UNITARY_TOL)?;
    let base = entangling_power_unchecked(u, n);
    let pairs: Vec<(usize, usize)> = (0..side).flat_map(|i| (i + 1..side).map(move |j| (i, j))).collect();
    let step = 2.0 * PI / (angles + 1) as f64;
    let (best_gain, best_pair, best_angle) = pairs
        .par_iter()
        .map(|&(i, j)| {
            (1..=angles)
                .map(|k| {
                    let a = step * k as f64;
                    (entangling_power_unchecked(&rotate(u, i, j, a), n) - base, (i, j), a)
                })
                .fold((f64::NEG_INFINITY, (i, j), 0.0), |best, x| if x.0 > best.0 { x } else { best })
        })
        .reduce(|| (f64::NEG_INFINITY, (0, 0), 0.0), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    Ok(RotationProbe { pairs: pairs.len(), angles, base_e_p: base, best_gain, best_pair, best_angle })
}
