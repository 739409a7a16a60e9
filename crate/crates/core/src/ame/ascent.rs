//! Second-order ascent of `e_p`: at each outer step the Hessian along the
//! Hermitian basis is diagonalised and `e_p` is maximised along the geodesic
//! `t ↦ U·exp(i t H_v)` generated by its leading eigenvector `v`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SearchTrace, TraceRecord};
use crate::error::{Error, Result};
use crate::gates::{
    ep_gradient_unchecked, ep_hessian_unchecked, entangling_power_unchecked, gate_typicality_unchecked,
    HermitianBasis, UNITARY_TOL,
};
use crate::linalg::{ensure_unitary, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    pub iters: usize,
    /// Steps stop once the largest Hessian eigenvalue is not above this.
    pub positive_tol: f64,
    /// Half-width of the coarse grid over `t`; the grid is symmetric because the
    /// eigenvector's sign is arbitrary.
    pub t_max: f64,
    pub grid_points: usize,
    /// Golden-section evaluations spent refining the best grid cell.
    pub refine_evals: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions { iters: 1, positive_tol: 1e-8, t_max: std::f64::consts::PI, grid_points: 121, refine_evals: 60 }
    }
}

#[derive(Debug, Clone)]
pub struct AscentResult {
    pub matrix: ComplexMatrix,
    pub e_p: f64,
    pub accepted_steps: usize,
    /// Largest Hessian eigenvalue seen at the last evaluated point.
    pub last_top_eigenvalue: f64,
    pub trace: SearchTrace,
}

/// `U·exp(i t H)` evaluated cheaply for many `t` from one eigendecomposition of `H`.
struct Geodesic {
    uv: ComplexMatrix,
    v_adj: ComplexMatrix,
    eigs: Vec<f64>,
}

impl Geodesic {
    fn new(u: &ComplexMatrix, h: &ComplexMatrix) -> Self {
        let eig = h.clone().symmetric_eigen();
        let v = eig.eigenvectors;
        Geodesic { uv: u * &v, v_adj: v.adjoint(), eigs: eig.eigenvalues.iter().copied().collect() }
    }

    fn at(&self, t: f64) -> ComplexMatrix {
        let mut a = self.uv.clone();
        for (j, &l) in self.eigs.iter().enumerate() {
            let p = Complex64::from_polar(1.0, t * l);
            for z in a.column_mut(j).iter_mut() {
                *z *= p;
            }
        }
        a * &self.v_adj
    }
}

/// Maximises `f` over `[-t_max, t_max]`: coarse grid, then golden section on
/// the bracket around the best grid point.
fn line_search(f: impl Fn(f64) -> f64, t_max: f64, grid_points: usize, refine_evals: usize) -> (f64, f64) {
    let m = grid_points.max(3);
    let h = 2.0 * t_max / (m - 1) as f64;
    let (mut best_t, mut best_f) = (0.0, f64::NEG_INFINITY);
    for k in 0..m {
        let t = -t_max + h * k as f64;
        let v = f(t);
        if v > best_f {
            best_t = t;
            best_f = v;
        }
    }
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_t - h, best_t + h);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..refine_evals.saturating_sub(2) {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v > best_f {
            best_t = t;
            best_f = v;
        }
    }
    (best_t, best_f)
}

pub fn steepest_ascent(u0: &ComplexMatrix, n: usize, opts: &AscentOptions) -> Result<AscentResult> {
    if u0.nrows() != n * n || u0.ncols() != n * n {
        return Err(Error::Dimension(format!("expected side {}, got {}x{}", n * n, u0.nrows(), u0.ncols())));
    }
    ensure_unitary(u0, UNITARY_TOL)?;
    let basis = HermitianBasis::new(n * n);
    let mut u = u0.clone();
    let mut e_p = entangling_power_unchecked(&u, n);
    let mut trace = vec![TraceRecord {
        iteration: 0,
        e_p,
        g_t: gate_typicality_unchecked(&u, n),
        grad_max: Some(ep_gradient_unchecked(&u, n).amax()),
        step: None,
        accepted: true,
    }];
    let mut accepted_steps = 0;
    let mut top = f64::NEG_INFINITY;
    for it in 1..=opts.iters {
        let hess = ep_hessian_unchecked(&u, n);
        let eig = hess.symmetric_eigen();
        let (k, &lam) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        top = lam;
        if lam <= opts.positive_tol {
            break;
        }
        let v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        let geo = Geodesic::new(&u, &basis.combine(&v));
        let (t, val) = line_search(|t| entangling_power_unchecked(&geo.at(t), n), opts.t_max, opts.grid_points, opts.refine_evals);
        let accepted = val > e_p;
        if accepted {
            u = geo.at(t);
            e_p = val;
            accepted_steps += 1;
        }
        trace.push(TraceRecord {
            iteration: it,
            e_p,
            g_t: gate_typicality_unchecked(&u, n),
            grad_max: Some(ep_gradient_unchecked(&u, n).amax()),
            step: Some(t),
            accepted,
        });
        if !accepted {
            break;
        }
    }
    Ok(AscentResult { matrix: u, e_p, accepted_steps, last_top_eigenvalue: top, trace })
}
