//! Entanglement functionals on bipartite gates of side `N = n²`: linear
//! entropy of the Choi state, entangling power `e_p`, gate typicality `g_t`,
//! singular entropy and its average over `{X, X^R, X^Γ}`, together with the
//! analytic gradient and Hessian of `e_p` on the unitary group.
//!
//! Derivatives of `e_p` are taken along `U ↦ U·exp(i Σ_j ε_j H_j)` with `H_j`
//! running over [`HermitianBasis`]. Writing `f_L(U) = Tr((XX†)²)` with
//! `X = L(U)`, `L ∈ {R, Γ}`, one has `e_p = c·(n⁴ + n² − f_R − f_Γ)` with
//! `c = 1/(n²(n²−1))`, so all derivatives reduce to those of `f_L`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    ensure_unitary, gamma_unchecked, reshuffle_unchecked, subsystem_dim, swap, BipartiteDims, ComplexMatrix,
    ComplexVector, ONE, ZERO,
};

/// Unitarity tolerance applied to inputs of the unitary-only functionals.
pub const UNITARY_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateFunctionalValue {
    pub e_p: f64,
    pub g_t: f64,
    pub s_e: f64,
}

fn check_side(u: &ComplexMatrix, n: usize) -> Result<()> {
    let d = n * n;
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::Dimension(format!(
            "expected side {d} = {n}², got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    Ok(())
}

/// `Tr((XX†)²)`.
fn purity_trace(x: &ComplexMatrix) -> f64 {
    let p = x * x.adjoint();
    // Tr(P²) = Σ|P_ij|² for Hermitian P.
    p.iter().map(|z| z.norm_sqr()).sum()
}

/// Generalized concurrence `τ = 2(1 − Tr ρ_A²)` of a bipartite pure state.
pub fn generalized_concurrence(psi: &ComplexVector, dims: BipartiteDims) -> Result<f64> {
    if psi.len() != dims.total() {
        return Err(Error::Dimension(format!("state of length {} for dims {:?}", psi.len(), dims)));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    let c = DMatrix::from_fn(dims.dim_a, dims.dim_b, |i, k| psi[dims.dim_b * i + k]);
    Ok(2.0 * (1.0 - purity_trace(&c)))
}

/// Linear entropy of the Choi state `(U⊗I)|φ+⟩` across `(A-out, A-in)|(B-out, B-in)`.
/// The coefficient matrix of that split is `U^R/n`, hence `E(U) = 1 − Tr((U^R U^R†)²)/n⁴`.
pub fn choi_linear_entropy(u: &ComplexMatrix, n: usize) -> Result<f64> {
    check_side(u, n)?;
    let n4 = (n * n * n * n) as f64;
    Ok(1.0 - purity_trace(&reshuffle_unchecked(u, n)) / n4)
}

/// `E(S) = 1 − 1/n²`.
pub fn swap_entropy(n: usize) -> f64 {
    1.0 - 1.0 / (n * n) as f64
}

/// Entangling power through the trace form over `U^R` and `U^Γ`; no unitarity check.
pub fn entangling_power_unchecked(u: &ComplexMatrix, n: usize) -> f64 {
    let nn = (n * n) as f64;
    let fr = purity_trace(&reshuffle_unchecked(u, n));
    let fg = purity_trace(&gamma_unchecked(u, n));
    nn / (nn - 1.0) * ((nn + 1.0) / nn - (fr + fg) / (nn * nn))
}

/// `e_p(U) = n²/(n²−1)·[(n²+1)/n² − Tr((U^R U^R†)²)/n⁴ − Tr((U^Γ U^Γ†)²)/n⁴]`.
pub fn entangling_power(u: &ComplexMatrix, n: usize) -> Result<f64> {
    check_side(u, n)?;
    ensure_unitary(u, UNITARY_TOL)?;
    Ok(entangling_power_unchecked(u, n))
}

/// `e_p` computed from Choi entropies: `(E(U) + E(US) − E(S))/E(S)`.
pub fn entangling_power_via_choi(u: &ComplexMatrix, n: usize) -> Result<f64> {
    check_side(u, n)?;
    ensure_unitary(u, UNITARY_TOL)?;
    let s = swap(n * n)?;
    let es = swap_entropy(n);
    Ok((choi_linear_entropy(u, n)? + choi_linear_entropy(&(u * s), n)? - es) / es)
}

/// `g_t(U) = [E(U) − E(US) + E(S)] / (2E(S))`, so that `g_t(I) = 0`, `g_t(S) = 1`.
pub fn gate_typicality(u: &ComplexMatrix, n: usize) -> Result<f64> {
    check_side(u, n)?;
    ensure_unitary(u, UNITARY_TOL)?;
    Ok(gate_typicality_unchecked(u, n))
}

/// `(e_p, g_t)` sharing the two purity traces; no unitarity check.
pub fn ep_gt_unchecked(u: &ComplexMatrix, n: usize) -> (f64, f64) {
    let nn = (n * n) as f64;
    let fr = purity_trace(&reshuffle_unchecked(u, n));
    let fg = purity_trace(&gamma_unchecked(u, n));
    let es = swap_entropy(n);
    let e_p = (nn * (nn + 1.0) - fr - fg) / (nn * (nn - 1.0));
    let g_t = ((fg - fr) / (nn * nn) + es) / (2.0 * es);
    (e_p, g_t)
}

pub fn gate_typicality_unchecked(u: &ComplexMatrix, n: usize) -> f64 {
    let n4 = (n * n * n * n) as f64;
    let es = swap_entropy(n);
    let e_u = 1.0 - purity_trace(&reshuffle_unchecked(u, n)) / n4;
    // (US)^R is a column permutation of U^Γ, so E(US) is read off U^Γ directly.
    let e_us = 1.0 - purity_trace(&gamma_unchecked(u, n)) / n4;
    (e_u - e_us + es) / (2.0 * es)
}

/// Singular entropy `N/(N−1)·(1 − Tr((XX†)²)/Tr(XX†)²)`; equals 1 iff `X` is a multiple of a unitary.
pub fn singular_entropy(x: &ComplexMatrix) -> Result<f64> {
    if !x.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", x.nrows(), x.ncols())));
    }
    let t: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if t == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let nd = x.nrows() as f64;
    if x.nrows() == 1 {
        return Ok(1.0);
    }
    Ok(nd / (nd - 1.0) * (1.0 - purity_trace(x) / (t * t)))
}

/// `s_e(X) = (E_S(X) + E_S(X^R) + E_S(X^Γ))/3`.
pub fn avg_singular_entropy(x: &ComplexMatrix, n: usize) -> Result<f64> {
    check_side(x, n)?;
    Ok((singular_entropy(x)? + singular_entropy(&reshuffle_unchecked(x, n))? + singular_entropy(&gamma_unchecked(x, n))?)
        / 3.0)
}

pub fn evaluate(u: &ComplexMatrix, n: usize) -> Result<GateFunctionalValue> {
    Ok(GateFunctionalValue {
        e_p: entangling_power(u, n)?,
        g_t: gate_typicality(u, n)?,
        s_e: avg_singular_entropy(u, n)?,
    })
}

/// One element of the Hermitian basis of `N×N` matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermitianElement {
    /// `|k⟩⟨k|`
    Diag(usize),
    /// `|k⟩⟨l| + |l⟩⟨k|`, `k < l`
    Sym(usize, usize),
    /// `i|k⟩⟨l| − i|l⟩⟨k|`, `k < l`
    Asym(usize, usize),
}

impl HermitianElement {
    /// Nonzero entries `(row, col, value)`.
    pub fn entries(&self) -> [(usize, usize, Complex64); 2] {
        match *self {
            HermitianElement::Diag(k) => [(k, k, ONE), (k, k, ZERO)],
            HermitianElement::Sym(k, l) => [(k, l, ONE), (l, k, ONE)],
            HermitianElement::Asym(k, l) => [(k, l, I), (l, k, -I)],
        }
    }
}

/// Ordered basis: all `|k⟩⟨k|`, then the symmetric off-diagonal elements in
/// row-major `(k, l)`, then the antisymmetric ones in the same order.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    pub side: usize,
    pub elements: Vec<HermitianElement>,
}

impl HermitianBasis {
    pub fn new(side: usize) -> Self {
        let mut elements = Vec::with_capacity(side * side);
        elements.extend((0..side).map(HermitianElement::Diag));
        for k in 0..side {
            for l in k + 1..side {
                elements.push(HermitianElement::Sym(k, l));
            }
        }
        for k in 0..side {
            for l in k + 1..side {
                elements.push(HermitianElement::Asym(k, l));
            }
        }
        Self { side, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dense(&self, j: usize) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.side, self.side);
        for (r, c, v) in self.elements[j].entries() {
            h[(r, c)] += v;
        }
        h
    }

    /// `Σ_j v_j H_j`.
    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.side, self.side);
        for (e, &v) in self.elements.iter().zip(coeffs) {
            for (r, c, z) in e.entries() {
                h[(r, c)] += z * v;
            }
        }
        h
    }

    /// `Tr(V·H_j)`.
    fn trace_with(&self, v: &ComplexMatrix, j: usize) -> Complex64 {
        self.elements[j].entries().iter().map(|&(r, c, z)| v[(c, r)] * z).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rearrangement {
    Reshuffle,
    Gamma,
}

impl Rearrangement {
    const BOTH: [Rearrangement; 2] = [Rearrangement::Reshuffle, Rearrangement::Gamma];

    fn apply(self, m: &ComplexMatrix, n: usize) -> ComplexMatrix {
        match self {
            Rearrangement::Reshuffle => reshuffle_unchecked(m, n),
            Rearrangement::Gamma => gamma_unchecked(m, n),
        }
    }

    /// Position of entry `(r, c)` after the rearrangement.
    fn position(self, r: usize, c: usize, n: usize) -> (usize, usize) {
        let (a, b, e, f) = (r / n, r % n, c / n, c % n);
        match self {
            Rearrangement::Reshuffle => (n * a + e, n * b + f),
            Rearrangement::Gamma => (n * a + f, n * e + b),
        }
    }
}

/// Matrix `V_L` with `Tr(L(U·H)·X†XX†) = Tr(V_L·H)` for every `H`.
fn pullback(l: Rearrangement, u: &ComplexMatrix, n: usize) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let x = l.apply(u, n);
    let xd = x.adjoint();
    let p = &x * &xd;
    let q = &xd * &p;
    // Tr(L(Z)·Q) = Σ_cd Z_cd L(Qᵀ)_cd, hence V = L(Qᵀ)ᵀ·U.
    let v = l.apply(&q.transpose(), n).transpose() * u;
    (x, p, v)
}

/// Gradient of `e_p` along `U·exp(i Σ ε_j H_j)`:
/// `∂_j e_p = 4c·Im Σ_L Tr(L(U H_j)·X_L† X_L X_L†)`.
pub fn ep_gradient(u: &ComplexMatrix, n: usize) -> Result<DVector<f64>> {
    check_side(u, n)?;
    ensure_unitary(u, UNITARY_TOL)?;
    Ok(ep_gradient_unchecked(u, n))
}

pub fn ep_gradient_unchecked(u: &ComplexMatrix, n: usize) -> DVector<f64> {
    let d = n * n;
    let c = 1.0 / (d as f64 * (d as f64 - 1.0));
    let basis = HermitianBasis::new(d);
    let mut v = ComplexMatrix::zeros(d, d);
    for l in Rearrangement::BOTH {
        v += pullback(l, u, n).2;
    }
    DVector::from_iterator(basis.len(), (0..basis.len()).map(|j| 4.0 * c * basis.trace_with(&v, j).im))
}

/// Sparse image `L(U·H_j)` as `(row, col, value)` triples.
fn sparse_image(l: Rearrangement, u: &ComplexMatrix, e: HermitianElement, n: usize) -> Vec<(usize, usize, Complex64)> {
    let d = n * n;
    let mut out = Vec::with_capacity(2 * d);
    // (U·H)_{r,c} = Σ_k U_{r,k} H_{k,c}
    for (k, col, h) in e.entries() {
        if h == ZERO {
            continue;
        }
        for r in 0..d {
            let val = u[(r, k)] * h;
            let (pr, pc) = l.position(r, col, n);
            out.push((pr, pc, val));
        }
    }
    out
}

/// Exact Hessian of `e_p` in the [`HermitianBasis`] coordinates, symmetrized.
///
/// For each rearrangement `L` with `X = L(U)`, `P = XX†` and `A_i = L(U H_i)`,
/// the second derivative of `f_L = Tr(P²)` reads
/// `−4 Re Tr(X†A_iX†A_j) + 4 Re⟨A_j, A_iX†X⟩ + 4 Re⟨A_j, PA_i⟩ − 2 Re Tr(V(H_iH_j + H_jH_i))`
/// with `V = L((X†P)ᵀ)ᵀ·U`; the images `A_i` carry at most `2n²` entries each,
/// which keeps the assembly at `O(n^10)`.
pub fn ep_hessian(u: &ComplexMatrix, n: usize) -> Result<DMatrix<f64>> {
    check_side(u, n)?;
    ensure_unitary(u, UNITARY_TOL)?;
    Ok(ep_hessian_unchecked(u, n))
}

pub fn ep_hessian_unchecked(u: &ComplexMatrix, n: usize) -> DMatrix<f64> {
    let d = n * n;
    let dim = d * d;
    let c = 1.0 / (d as f64 * (d as f64 - 1.0));
    let basis = HermitianBasis::new(d);

    struct Term {
        l: Rearrangement,
        xd: ComplexMatrix,
        xdx: ComplexMatrix,
        p: ComplexMatrix,
        images: Vec<Vec<(usize, usize, Complex64)>>,
    }
    let mut v_total = ComplexMatrix::zeros(d, d);
    let terms: Vec<Term> = Rearrangement::BOTH
        .iter()
        .map(|&l| {
            let (x, p, v) = pullback(l, u, n);
            v_total += v;
            let xd = x.adjoint();
            let xdx = &xd * &x;
            let images = basis.elements.iter().map(|&e| sparse_image(l, u, e, n)).collect();
            Term { l, xd, xdx, p, images }
        })
        .collect();

    let rows: Vec<Vec<f64>> = crate::parallel::install(|| {
        (0..dim)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0.0f64; dim];
                let mut t = ComplexMatrix::zeros(d, d);
                let mut a_xdx = ComplexMatrix::zeros(d, d);
                let mut p_a = ComplexMatrix::zeros(d, d);
                for term in &terms {
                    let _ = term.l;
                    let ai = &term.images[i];
                    t.fill(ZERO);
                    a_xdx.fill(ZERO);
                    p_a.fill(ZERO);
                    for &(r, col, z) in ai {
                        // t = X†·A_i
                        for k in 0..d {
                            t[(k, col)] += term.xd[(k, r)] * z;
                        }
                        // A_i·X†X
                        for k in 0..d {
                            a_xdx[(r, k)] += z * term.xdx[(col, k)];
                        }
                        // P·A_i
                        for k in 0..d {
                            p_a[(k, col)] += term.p[(k, r)] * z;
                        }
                    }
                    // D = X†A_iX†; G1_ij = Tr(D·A_j) = Σ D[c,r]·A_j[r,c]
                    let dm = &t * &term.xd;
                    for (j, aj) in term.images.iter().enumerate() {
                        let mut g1 = ZERO;
                        let mut g23 = ZERO;
                        for &(r, col, z) in aj {
                            g1 += dm[(col, r)] * z;
                            g23 += (a_xdx[(r, col)] + p_a[(r, col)]) * z.conj();
                        }
                        row[j] += -c * (-4.0 * g1.re + 4.0 * g23.re);
                    }
                }
                for (j, slot) in row.iter_mut().enumerate() {
                    let s = trace_v_hh(&v_total, basis.elements[i], basis.elements[j])
                        + trace_v_hh(&v_total, basis.elements[j], basis.elements[i]);
                    *slot += -c * (-2.0 * s.re);
                }
                row
            })
            .collect()
    });
    let mut h = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
    let ht = h.transpose();
    h += ht;
    h *= 0.5;
    h
}

/// `Tr(V·H_a·H_b)`.
fn trace_v_hh(v: &ComplexMatrix, a: HermitianElement, b: HermitianElement) -> Complex64 {
    let mut acc = ZERO;
    for (r1, c1, z1) in a.entries() {
        if z1 == ZERO {
            continue;
        }
        for (r2, c2, z2) in b.entries() {
            if z2 == ZERO || c1 != r2 {
                continue;
            }
            // (H_a H_b)_{r1,c2} = z1 z2; Tr(V M) = Σ V_{c2,r1} M_{r1,c2}
            acc += v[(c2, r1)] * z1 * z2;
        }
    }
    acc
}

/// Gradient of the average singular entropy over the real coordinates of `X`:
/// entries `0..N²` are derivatives along `|k⟩⟨l|` (row-major), entries
/// `N²..2N²` along `i|k⟩⟨l|`.
pub fn se_gradient(x: &ComplexMatrix, n: usize) -> Result<DVector<f64>> {
    check_side(x, n)?;
    let d = n * n;
    if x.iter().all(|z| *z == ZERO) {
        return Err(Error::ZeroMatrix);
    }
    let nd = d as f64;
    // dE_S = N/(N−1)·(2f·dt/t³ − df/t²), dt = 2 Re Tr(dX·Y_t), df = 4 Re Tr(dX·Y_f)
    let mut g = ComplexMatrix::zeros(d, d);
    let mut accumulate = |y: &ComplexMatrix, pull: &dyn Fn(&ComplexMatrix) -> ComplexMatrix| {
        let yd = y.adjoint();
        let p = y * &yd;
        let t = p.trace().re;
        let f: f64 = p.iter().map(|z| z.norm_sqr()).sum();
        let yt = yd.clone();
        let yf = &yd * &p;
        let combo = yt * Complex64::new(2.0 * 2.0 * f / (t * t * t), 0.0) - yf * Complex64::new(4.0 / (t * t), 0.0);
        g += pull(&combo) * Complex64::new(nd / (nd - 1.0) / 3.0, 0.0);
    };
    // Tr(L(dX)·Y) = Σ dX_cd L(Yᵀ)_cd; for L = id this is Σ dX_cd (Yᵀ)_cd.
    accumulate(x, &|y| y.transpose());
    accumulate(&reshuffle_unchecked(x, n), &|y| reshuffle_unchecked(&y.transpose(), n));
    accumulate(&gamma_unchecked(x, n), &|y| gamma_unchecked(&y.transpose(), n));
    let mut out = DVector::zeros(2 * d * d);
    for k in 0..d {
        for l in 0..d {
            out[d * k + l] = g[(k, l)].re;
            out[d * d + d * k + l] = -g[(k, l)].im;
        }
    }
    Ok(out)
}

/// Eigenvalue bucketing with a zero band of `rel_threshold·max|λ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumStats {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
    pub largest: f64,
    pub smallest: f64,
    pub threshold: f64,
}

pub fn spectrum_stats(eigs: &[f64], rel_threshold: f64) -> SpectrumStats {
    let scale = eigs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let threshold = rel_threshold * scale;
    let mut s = SpectrumStats {
        positive: 0,
        zero: 0,
        negative: 0,
        largest: f64::NEG_INFINITY,
        smallest: f64::INFINITY,
        threshold,
    };
    for &x in eigs {
        if x > threshold {
            s.positive += 1;
        } else if x < -threshold {
            s.negative += 1;
        } else {
            s.zero += 1;
        }
        s.largest = s.largest.max(x);
        s.smallest = s.smallest.min(x);
    }
    s
}

/// Fraction of eigenvalues (sorted) whose nearest neighbour lies within
/// `rel_gap·max|λ|`; a rough pairing statistic, not an assertion.
pub fn pairing_fraction(eigs: &[f64], rel_gap: f64) -> f64 {
    if eigs.len() < 2 {
        return 0.0;
    }
    let mut e = eigs.to_vec();
    e.sort_by(|a, b| a.total_cmp(b));
    let scale = e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let gap = rel_gap * scale;
    let paired = (0..e.len())
        .filter(|&k| (k > 0 && e[k] - e[k - 1] <= gap) || (k + 1 < e.len() && e[k + 1] - e[k] <= gap))
        .count();
    paired as f64 / e.len() as f64
}

/// Sorted eigenvalues of a real symmetric matrix.
pub fn symmetric_eigenvalues(h: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// Size of the subsystem for a matrix whose side is a perfect square.
pub fn infer_n(u: &ComplexMatrix) -> Result<usize> {
    subsystem_dim(u)
}
