//! Decision procedure for order 4.
//!
//! After permuting rows and columns so that the top-left 2×2 block has the
//! smallest weight, a unitary `U` with `|U_ij|² = B_ij` is parametrised by one
//! phase `φ` of `U_11`: orthogonality of the first two rows (and of the first
//! two columns) closes a quadrilateral of side lengths `√(B_0j B_1j)`, which
//! fixes the remaining phases in those lines up to a reflection branch. The
//! lower-right block then follows from unitarity as `D = −Y A† (X†)⁻¹`, and
//! `φ` is scanned for the point where `|D|²` matches the target.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{is_bracelet, BistochasticMatrix, UnistochasticCertificate, Verdict};
use crate::linalg::{fourier, unitarity_residual, ComplexMatrix, RealMatrix};

pub const DEFAULT_GRID: usize = 20_000;
/// Maximal elementwise mismatch `|B_ij − |U_ij|²|` accepted for a witness.
pub const DEFAULT_TOL: f64 = 1e-10;

const WITNESS_UNITARY_TOL: f64 = 1e-9;
/// Grid points whose `|f|` is a local minimum below this are refined as possible tangencies.
const TANGENCY_GATE: f64 = 1e-3;

/// Phases `(a1, a2)` with `l3 e^{i a1} + l4 e^{i a2} = s`, choosing the
/// reflection branch by `sign`.
fn close_quadrilateral(s: Complex64, l3: f64, l4: f64, sign: f64) -> (f64, f64) {
    let r = s.norm();
    if l3 < 1e-15 {
        return (0.0, s.arg());
    }
    if l4 < 1e-15 {
        return (s.arg(), 0.0);
    }
    if r < 1e-15 {
        return (0.0, PI);
    }
    let c = ((r * r + l3 * l3 - l4 * l4) / (2.0 * r * l3)).clamp(-1.0, 1.0);
    let a1 = s.arg() + sign * c.acos();
    let a2 = (s - Complex64::from_polar(l3, a1)).arg();
    (a1, a2)
}

/// Range of `φ ∈ [0, π]` for which `|l1 + l2 e^{iφ}|` lies within `[|l3 − l4|, l3 + l4]`.
fn phase_interval(l: [f64; 4]) -> Option<(f64, f64)> {
    let (lo, hi) = ((l[2] - l[3]).abs(), l[2] + l[3]);
    if l[0] * l[1] < 1e-15 {
        let r = l[0] + l[1];
        return (lo - 1e-12 <= r && r <= hi + 1e-12).then_some((0.0, PI));
    }
    let denom = 2.0 * l[0] * l[1];
    let base = l[0] * l[0] + l[1] * l[1];
    let cmax = ((hi * hi - base) / denom).min(1.0);
    let cmin = ((lo * lo - base) / denom).max(-1.0);
    if cmin > cmax + 1e-12 {
        return None;
    }
    Some((cmax.clamp(-1.0, 1.0).acos(), cmin.clamp(-1.0, 1.0).acos()))
}

struct Problem {
    target: RealMatrix,
    q: RealMatrix,
    l: [f64; 4],
    m: [f64; 4],
}

impl Problem {
    fn new(target: RealMatrix) -> Self {
        let q = target.map(f64::sqrt);
        let l = std::array::from_fn(|j| q[(0, j)] * q[(1, j)]);
        let m = std::array::from_fn(|i| q[(i, 0)] * q[(i, 1)]);
        Problem { target, q, l, m }
    }

    /// The candidate unitary at phase `phi` on branch `(sa, sb)`; `None` when `X` is singular.
    fn build(&self, phi: f64, sa: f64, sb: f64) -> Option<ComplexMatrix> {
        let (l, m, q) = (&self.l, &self.m, &self.q);
        let e = |t: f64| Complex64::from_polar(1.0, t);
        let (a1, a2) = close_quadrilateral(-(l[0] + l[1] * e(phi)), l[2], l[3], sa);
        let (b1, b2) = close_quadrilateral(-(m[0] + m[1] * e(phi)), m[2], m[3], sb);
        let mut u = q.map(|x| Complex64::new(x, 0.0));
        u[(1, 1)] *= e(phi);
        u[(1, 2)] *= e(a1);
        u[(1, 3)] *= e(a2);
        u[(2, 1)] *= e(b1);
        u[(3, 1)] *= e(b2);
        let a = u.view((0, 0), (2, 2)).into_owned();
        let x = u.view((0, 2), (2, 2)).into_owned();
        let y = u.view((2, 0), (2, 2)).into_owned();
        let xi = x.adjoint().try_inverse()?;
        let d = -(y * a.adjoint() * xi);
        if d.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        u.view_mut((2, 2), (2, 2)).copy_from(&d);
        Some(u)
    }

    fn f(&self, phi: f64, sa: f64, sb: f64) -> f64 {
        self.build(phi, sa, sb).map_or(f64::NAN, |u| u[(2, 2)].norm_sqr() - self.target[(2, 2)])
    }

    fn residual(&self, u: &ComplexMatrix) -> f64 {
        let mut r = 0.0f64;
        for (z, b) in u.iter().zip(self.target.iter()) {
            r = r.max((z.norm_sqr() - b).abs());
        }
        r
    }

    fn full_residual(&self, phi: f64, sa: f64, sb: f64) -> f64 {
        self.build(phi, sa, sb).map_or(f64::INFINITY, |u| self.residual(&u))
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..80 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if f1 < f2 {
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
    let ends = [(a, f(a)), (b, f(b)), (x1, f1), (x2, f2)];
    ends.iter().min_by(|p, q| p.1.total_cmp(&q.1)).expect("non-empty").0
}

/// Rows and columns moved to the front so that the leading 2×2 block is lightest.
fn lightest_block(b: &RealMatrix) -> ([usize; 4], [usize; 4]) {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut best = (f64::INFINITY, (0, 1), (0, 1));
    for &r in &pairs {
        for &c in &pairs {
            let s = b[(r.0, c.0)] + b[(r.0, c.1)] + b[(r.1, c.0)] + b[(r.1, c.1)];
            if s < best.0 - 1e-15 {
                best = (s, r, c);
            }
        }
    }
    let order = |p: (usize, usize)| {
        let mut o = [p.0, p.1, 0, 0];
        let mut k = 2;
        for i in 0..4 {
            if i != p.0 && i != p.1 {
                o[k] = i;
                k += 1;
            }
        }
        o
    };
    (order(best.1), order(best.2))
}

/// Decides whether a 4×4 bistochastic matrix is unistochastic.
///
/// Matrices violating the bracelet conditions are rejected immediately. Otherwise
/// the phase `φ` is scanned on `grid` points on each of the four reflection
/// branches; sign changes of the block mismatch are refined by bisection and
/// near-zero local minima (tangencies) by golden-section search. The first
/// candidate, in grid order, whose witness matches `B` within `tol` and is
/// unitary within 1e-9 is returned. Failing that, the verdict is
/// [`Verdict::RejectedBySearch`] at the given resolution and tolerance.
pub fn decide_unistochastic_4(b: &BistochasticMatrix, grid: usize, tol: f64) -> UnistochasticCertificate {
    assert_eq!(b.n(), 4, "decide_unistochastic_4 requires a 4x4 matrix");
    if let Err(v) = is_bracelet(b) {
        return UnistochasticCertificate::not_bracelet(&v);
    }
    let bm = b.matrix();
    if bm.iter().all(|x| (x - 0.25).abs() < 1e-14) {
        return UnistochasticCertificate::certified(b, fourier(4) * Complex64::new(0.5, 0.0), 0, "flat matrix: F_4/2".into());
    }
    let grid = grid.max(2);
    let (rp, cp) = lightest_block(bm);
    let problem = Problem::new(RealMatrix::from_fn(4, 4, |i, j| bm[(rp[i], cp[j])]));
    let interval = match (phase_interval(problem.l), phase_interval(problem.m)) {
        (Some(r), Some(c)) => Some((r.0.max(c.0), r.1.min(c.1))).filter(|(lo, hi)| lo <= hi),
        _ => None,
    };
    let Some((lo, hi)) = interval else {
        return rejected(0, f64::INFINITY, "empty admissible phase range".into());
    };
    let h = (hi - lo) / (grid - 1) as f64;
    let phi = |k: usize| if k + 1 == grid { hi } else { lo + h * k as f64 };
    let branches = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

    let scans: Vec<Vec<f64>> = branches
        .iter()
        .map(|&(sa, sb)| (0..grid).into_par_iter().map(|k| problem.f(phi(k), sa, sb)).collect())
        .collect();
    let mut evaluations = 4 * grid;

    // (grid index, branch, is sign change)
    let mut candidates = Vec::new();
    for (bi, v) in scans.iter().enumerate() {
        for k in 0..grid {
            if !v[k].is_finite() {
                continue;
            }
            if k + 1 < grid && v[k + 1].is_finite() && (v[k] == 0.0 || (v[k] < 0.0) != (v[k + 1] < 0.0)) {
                candidates.push((k, bi, true));
            }
            let a = v[k].abs();
            let left = k == 0 || !v[k - 1].is_finite() || a <= v[k - 1].abs();
            let right = k + 1 == grid || !v[k + 1].is_finite() || a <= v[k + 1].abs();
            if a < TANGENCY_GATE && left && right {
                candidates.push((k, bi, false));
            }
        }
    }
    candidates.sort_by_key(|&(k, bi, sign)| (k, bi, !sign));

    let mut best = f64::INFINITY;
    for (k, bi, sign_change) in candidates {
        let (sa, sb) = branches[bi];
        let p = if sign_change {
            evaluations += 81;
            bisect(|t| problem.f(t, sa, sb), phi(k), phi(k + 1))
        } else {
            evaluations += 106;
            let a = phi(k.saturating_sub(1));
            let b = phi((k + 1).min(grid - 1));
            golden_min(|t| problem.full_residual(t, sa, sb), a, b)
        };
        let Some(u) = problem.build(p, sa, sb) else { continue };
        let res = problem.residual(&u);
        best = best.min(res);
        if res < tol && unitarity_residual(&u) < WITNESS_UNITARY_TOL {
            let mut w = ComplexMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    w[(rp[i], cp[j])] = u[(i, j)];
                }
            }
            let note = format!("phi = {p:.12} on branch ({sa:+}, {sb:+})");
            return UnistochasticCertificate::certified(b, w, evaluations, note);
        }
    }
    rejected(evaluations, best, format!("rejected at resolution {grid}, tolerance {tol:e}"))
}

fn rejected(evaluations: usize, best: f64, note: String) -> UnistochasticCertificate {
    UnistochasticCertificate {
        verdict: Verdict::RejectedBySearch,
        witness: None,
        residual: best.is_finite().then_some(best),
        evaluations,
        note,
    }
}
