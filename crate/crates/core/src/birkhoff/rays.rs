//! Unistochastic rays and triangles of the Birkhoff polytope, and the
//! equi-entangled bases built from their unitaries.

use num_complex::Complex64;

use super::{robust_hadamard, BistochasticMatrix};
use crate::error::{Error, Result};
use crate::linalg::{ensure_unitary, permutation_matrix, van_der_waerden, ComplexMatrix, ComplexVector, RealMatrix};

#[derive(Debug, Clone)]
pub struct RayResult {
    pub b: BistochasticMatrix,
    pub u: ComplexMatrix,
}

fn check_permutation(p: &[usize]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &k in p {
        if k >= p.len() || std::mem::replace(&mut seen[k], true) {
            return Err(Error::Invalid(format!("{p:?} is not a permutation")));
        }
    }
    Ok(())
}

/// Row-permutes `u0` by `p`: row `i` of `u0` becomes row `p[i]`, matching [`permutation_matrix`].
fn permute_rows(u0: &ComplexMatrix, p: &[usize]) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(u0.nrows(), u0.ncols());
    for (i, &pi) in p.iter().enumerate() {
        u.set_row(pi, &u0.row(i));
    }
    u
}

/// The point `α·P + (1 − α)·W_n` on the ray (`α ≥ 0`) or counter-ray (`α < 0`)
/// through the permutation `p`, together with a unitary whose squared moduli
/// reproduce it.
///
/// With a robust Hadamard `H` and `D` its diagonal part, `√α′·D + √β·(H − D)`
/// with `α′ = α + β`, `β = (1 − α)/n` is unitary: every cross term between two
/// rows is the orthogonality relation of a principal 2×2 submatrix.
pub fn ray_unitary(n: usize, alpha: f64, p: &[usize]) -> Result<RayResult> {
    if p.len() != n {
        return Err(Error::Dimension(format!("permutation of length {} for order {n}", p.len())));
    }
    check_permutation(p)?;
    let lower = if n > 1 { -1.0 / (n as f64 - 1.0) } else { 1.0 };
    if !alpha.is_finite() || alpha < lower - 1e-12 || alpha > 1.0 + 1e-12 {
        return Err(Error::Invalid(format!("ray parameter {alpha} outside [{lower}, 1]")));
    }
    let alpha = alpha.clamp(lower, 1.0);
    let h = robust_hadamard(n)?;
    let beta = (1.0 - alpha) / n as f64;
    let (sd, so) = ((alpha + beta).max(0.0).sqrt(), beta.max(0.0).sqrt());
    let u0 = ComplexMatrix::from_fn(n, n, |i, j| h[(i, j)] * if i == j { sd } else { so });
    let b = permutation_matrix(p) * alpha + van_der_waerden(n) * (1.0 - alpha);
    let b = BistochasticMatrix::with_tolerance(b, 1e-10)?;
    Ok(RayResult { b, u: permute_rows(&u0, p) })
}

/// `P_ij = P_kl = Q_il = 1 ⇒ Q_kj = 1`, for permutations given as in [`permutation_matrix`].
pub fn is_complementary(p: &[usize], q: &[usize]) -> bool {
    if p.len() != q.len() || check_permutation(p).is_err() || check_permutation(q).is_err() {
        return false;
    }
    let n = p.len();
    (0..n).all(|j| (0..n).all(|l| p[j] != q[l] || p[l] == q[j]))
}

/// Complementary and with no shared nonzero entry.
pub fn is_strongly_complementary(p: &[usize], q: &[usize]) -> bool {
    is_complementary(p, q) && p.iter().zip(q).all(|(a, b)| a != b)
}

/// A fixed-point-free involution `τ` for which `H` with columns permuted by `τ`
/// is again robust, found by backtracking over perfect matchings.
fn compatible_matching(h: &ComplexMatrix) -> Option<Vec<usize>> {
    fn pair_ok(h: &ComplexMatrix, tau: &[usize], i: usize, k: usize) -> bool {
        let (a, b) = (tau[i], tau[k]);
        (h[(i, a)] * h[(k, a)].conj() + h[(i, b)] * h[(k, b)].conj()).norm() < 1e-9
    }
    fn extend(h: &ComplexMatrix, tau: &mut Vec<usize>, budget: &mut usize) -> bool {
        let n = tau.len();
        let Some(a) = tau.iter().position(|&t| t == usize::MAX) else { return true };
        for b in a + 1..n {
            if tau[b] != usize::MAX {
                continue;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            tau[a] = b;
            tau[b] = a;
            let ok = (0..n).filter(|&i| tau[i] != usize::MAX).all(|i| {
                [a, b].iter().all(|&k| k == i || pair_ok(h, tau, i, k) && pair_ok(h, tau, k, i))
            });
            if ok && extend(h, tau, budget) {
                return true;
            }
            tau[a] = usize::MAX;
            tau[b] = usize::MAX;
        }
        false
    }
    let mut tau = vec![usize::MAX; h.nrows()];
    let mut budget = 2_000_000;
    extend(h, &mut tau, &mut budget).then_some(tau)
}

/// The point `w1·P + w2·Q + (1 − w1 − w2)·W_n` of the triangle spanned by two
/// strongly complementary permutations and the flat matrix, with a unitary
/// `U = P·(√B₀ ∘ H′)`, where `B₀ = P⁻¹B` and `H′` is a robust Hadamard matrix
/// relabelled so that it stays robust after the column permutation `P⁻¹Q`.
///
/// Such a relabelling exists for the robust matrices of orders 2, 4, 6, 8, 12
/// and 16; for the other supported orders the search finds none and the
/// result is [`Error::Unsupported`].
pub fn triangle_unistochastic(p: &[usize], q: &[usize], w1: f64, w2: f64) -> Result<RayResult> {
    let n = p.len();
    check_permutation(p)?;
    check_permutation(q)?;
    if q.len() != n {
        return Err(Error::Dimension("permutations of different lengths".into()));
    }
    if !is_strongly_complementary(p, q) {
        return Err(Error::Invalid("permutations are not strongly complementary".into()));
    }
    if !(w1.is_finite() && w2.is_finite() && w1 >= -1e-15 && w2 >= -1e-15 && w1 + w2 <= 1.0 + 1e-12) {
        return Err(Error::Invalid(format!("weights ({w1}, {w2}) are not convex")));
    }
    let (w1, w2) = (w1.max(0.0), w2.max(0.0));
    let w3 = (1.0 - w1 - w2).max(0.0);
    let h = robust_hadamard(n)?;
    let tau = compatible_matching(&h)
        .ok_or_else(|| Error::Unsupported(format!("no compatible robust Hadamard matching found for order {n}")))?;
    // sigma = P⁻¹Q is a fixed-point-free involution; relabel so that pi∘sigma = tau∘pi.
    let mut pinv = vec![0; n];
    for (i, &k) in p.iter().enumerate() {
        pinv[k] = i;
    }
    let sigma: Vec<usize> = (0..n).map(|i| pinv[q[i]]).collect();
    let mut pi = vec![usize::MAX; n];
    let mut next_tau_orbit = (0..n).filter(|&t| t < tau[t]);
    for a in 0..n {
        if pi[a] == usize::MAX {
            let t = next_tau_orbit.next().expect("equal numbers of 2-cycles");
            pi[a] = t;
            pi[sigma[a]] = tau[t];
        }
    }
    let c = w3 / n as f64;
    let b0 = RealMatrix::from_fn(n, n, |i, j| {
        c + if i == j { w1 } else { 0.0 } + if i == sigma[j] { w2 } else { 0.0 }
    });
    let u0 = ComplexMatrix::from_fn(n, n, |i, j| h[(pi[i], pi[j])] * b0[(i, j)].sqrt());
    let b = permutation_matrix(p) * w1 + permutation_matrix(q) * w2 + van_der_waerden(n) * w3;
    let b = BistochasticMatrix::with_tolerance(b, 1e-10)?;
    Ok(RayResult { b, u: permute_rows(&u0, p) })
}

/// The `n²` vectors `ψ_ij = Σ_k U_ik |k⟩ ⊗ |k + j mod n⟩`, listed in the order `n·i + j`.
pub fn equi_entangled_basis(u: &ComplexMatrix) -> Result<Vec<ComplexVector>> {
    if !u.is_square() {
        return Err(Error::Dimension(format!("expected a square matrix, got {:?}", u.shape())));
    }
    ensure_unitary(u, 1e-9)?;
    let n = u.nrows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut psi = ComplexVector::from_element(n * n, Complex64::new(0.0, 0.0));
            for k in 0..n {
                psi[n * k + (k + j) % n] = u[(i, k)];
            }
            out.push(psi);
        }
    }
    Ok(out)
}

/// Squared Schmidt coefficients of a state on `C^n ⊗ C^n`, in decreasing order.
pub fn schmidt_coefficients(psi: &ComplexVector, n: usize) -> Result<Vec<f64>> {
    if psi.len() != n * n {
        return Err(Error::Dimension(format!("state of length {} is not on C^{n} x C^{n}", psi.len())));
    }
    let m = ComplexMatrix::from_fn(n, n, |a, b| psi[n * a + b]);
    let mut s: Vec<f64> = m.singular_values().iter().map(|x| x * x).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::generalized_concurrence;
    use crate::linalg::{unitarity_residual, BipartiteDims};

    fn check(r: &RayResult) {
        assert!(unitarity_residual(&r.u) < 1e-10);
        assert!(r.b.residual(&r.u) < 1e-10);
    }

    #[test]
    fn ray_endpoints() {
        let id = ray_unitary(4, 1.0, &[0, 1, 2, 3]).unwrap();
        check(&id);
        assert!(id.u.iter().enumerate().all(|(k, z)| (k % 5 == 0) == (z.norm() > 0.5)));
        check(&ray_unitary(6, 0.0, &[1, 0, 3, 2, 5, 4]).unwrap());
        let counter = ray_unitary(4, -1.0 / 3.0, &[0, 1, 2, 3]).unwrap();
        check(&counter);
        assert!((0..4).all(|i| counter.b.matrix()[(i, i)].abs() < 1e-15));
        assert!(ray_unitary(4, -0.5, &[0, 1, 2, 3]).is_err());
        assert!(ray_unitary(22, 0.5, &(0..22).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn complementarity() {
        assert!(!is_strongly_complementary(&[0, 1, 2, 3], &[0, 1, 2, 3]));
        assert!(is_complementary(&[0, 1, 2, 3], &[0, 1, 2, 3]));
        assert!(is_strongly_complementary(&[0, 1, 2, 3], &[1, 0, 3, 2]));
        assert!(!is_complementary(&[0, 1, 2], &[1, 2, 0]));
    }

    #[test]
    fn triangles_up_to_twenty() {
        for n in (2..=20).step_by(2) {
            let p: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let q: Vec<usize> = (0..n).map(|i| p[i ^ 1]).collect();
            match triangle_unistochastic(&p, &q, 0.3, 0.25) {
                Ok(r) => check(&r),
                // The available robust matrices admit no compatible pairing here.
                Err(e) => assert!(matches!(e, Error::Unsupported(_)) && [10, 14, 18, 20].contains(&n), "{n}: {e}"),
            }
        }
    }

    #[test]
    fn equi_entangled_basis_properties() {
        let n = 4;
        for alpha in [0.0, 0.4, 1.0] {
            let ray = ray_unitary(n, alpha, &[0, 1, 2, 3]).unwrap();
            let basis = equi_entangled_basis(&ray.u).unwrap();
            for (a, x) in basis.iter().enumerate() {
                for (b, y) in basis.iter().enumerate() {
                    let g = x.dotc(y);
                    assert!((g - Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-10);
                }
                let mut want = vec![(1.0 - alpha) / n as f64; n];
                want[0] = (1.0 + alpha * (n as f64 - 1.0)) / n as f64;
                let got = schmidt_coefficients(x, n).unwrap();
                assert!(got.iter().zip(&want).all(|(g, w)| (g - w).abs() < 1e-10), "{got:?}");
                let c = generalized_concurrence(x, BipartiteDims::square(n)).unwrap();
                let expect = if alpha == 0.0 { 2.0 * (1.0 - 1.0 / n as f64) } else if alpha == 1.0 { 0.0 } else { c };
                assert!((c - expect).abs() < 1e-10);
            }
        }
    }
}
