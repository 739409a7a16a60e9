use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::{family_matrix, Family};
use crate::error::{Error, Result};
use crate::gates::ep_gt_unchecked;
use crate::linalg::rng_stream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub params: Vec<f64>,
    pub e_p: f64,
    pub g_t: f64,
}

/// Projection of the `W` family onto the `(e_p, g_t)` plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionScan {
    pub scatter: Vec<RegionPoint>,
    /// `W(x, x, 0, −x, −x)` for `x ∈ [−π, π]`.
    pub diagonal_curve: Vec<RegionPoint>,
    /// `W(−π/6, −π/12 + x, π/12 + x, π/6, π/4 + x)` for `x ∈ [−π, π]`.
    pub ellipse_curve: Vec<RegionPoint>,
}

const CURVE_POINTS: usize = 721;

fn point(params: Vec<f64>) -> RegionPoint {
    let u = family_matrix(Family::W, &params).expect("five finite angles");
    let (e_p, g_t) = ep_gt_unchecked(&u, 6);
    RegionPoint { params, e_p, g_t }
}

fn curve(f: impl Fn(f64) -> Vec<f64> + Sync) -> Vec<RegionPoint> {
    (0..CURVE_POINTS)
        .into_par_iter()
        .map(|k| point(f(-PI + 2.0 * PI * k as f64 / (CURVE_POINTS - 1) as f64)))
        .collect()
}

/// `samples` uniform draws of the five angles from `[−π, π)`, plus the two
/// named boundary curves. Sample `k` uses its own RNG stream, so results do not
/// depend on the worker count.
pub fn w_region_scan(samples: usize, seed: u64) -> Result<RegionScan> {
    if samples == 0 {
        return Err(Error::Invalid("samples must be positive".into()));
    }
    let scatter = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_stream(seed, k as u64);
            point((0..5).map(|_| rng.random_range(-PI..PI)).collect())
        })
        .collect();
    let diagonal_curve = curve(|x| vec![x, x, 0.0, -x, -x]);
    let ellipse_curve = curve(|x| vec![-PI / 6.0, -PI / 12.0 + x, PI / 12.0 + x, PI / 6.0, PI / 4.0 + x]);
    Ok(RegionScan { scatter, diagonal_curve, ellipse_curve })
}
