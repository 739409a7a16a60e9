//! Robust Hadamard matrices: complex Hadamard matrices all of whose 2×2
//! principal submatrices are themselves Hadamard.
//!
//! Two sources are used. A skew Hadamard matrix `H = I + S` (`S` real skew-symmetric)
//! is robust; these come from the Paley construction for `n − 1` a prime
//! `≡ 3 (mod 4)` and from the doubling `[[H, H], [−Hᵀ, Hᵀ]]`, which preserves
//! skewness. A symmetric conference matrix `C` gives the robust matrix `C + iI`;
//! conference matrices come from the Paley construction over a field of order
//! `q ≡ 1 (mod 4)`, here any prime or the field with nine elements.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Finite field of order `p` (prime) or 9, with elements indexed `0..order`.
struct Field {
    order: usize,
    add: Vec<Vec<usize>>,
    neg: Vec<usize>,
    square: Vec<bool>,
}

impl Field {
    fn prime(p: usize) -> Self {
        let mul = |a: usize, b: usize| a * b % p;
        Self::build(p, |a, b| (a + b) % p, mul, |a| (p - a) % p)
    }

    /// `GF(3)[ι]/(ι² + 1)`; element `k` is `(k mod 3) + (k div 3)·ι`.
    fn nine() -> Self {
        let split = |k: usize| (k % 3, k / 3);
        let join = |a: usize, b: usize| a % 3 + 3 * (b % 3);
        let add = move |x: usize, y: usize| {
            let ((a, b), (c, d)) = (split(x), split(y));
            join(a + c, b + d)
        };
        let mul = move |x: usize, y: usize| {
            let ((a, b), (c, d)) = (split(x), split(y));
            join(a * c + 2 * b * d, a * d + b * c)
        };
        let neg = move |x: usize| {
            let (a, b) = split(x);
            join(3 - a, 3 - b)
        };
        Self::build(9, add, mul, neg)
    }

    fn build(
        order: usize,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
        neg: impl Fn(usize) -> usize,
    ) -> Self {
        let mut square = vec![false; order];
        for x in 1..order {
            square[mul(x, x)] = true;
        }
        Field {
            order,
            add: (0..order).map(|x| (0..order).map(|y| add(x, y)).collect()).collect(),
            neg: (0..order).map(neg).collect(),
            square,
        }
    }

    /// Quadratic character of `y − x`.
    fn chi_diff(&self, x: usize, y: usize) -> f64 {
        let d = self.add[y][self.neg[x]];
        if d == 0 {
            0.0
        } else if self.square[d] {
            1.0
        } else {
            -1.0
        }
    }

    /// Bordered Paley matrix `[[0, 1ᵀ], [ε·1, Q]]` with `Q_xy = χ(y − x)`.
    fn paley_core(&self, eps: f64) -> Vec<Vec<f64>> {
        let n = self.order + 1;
        let mut m = vec![vec![0.0; n]; n];
        for k in 1..n {
            m[0][k] = 1.0;
            m[k][0] = eps;
        }
        for x in 0..self.order {
            for y in 0..self.order {
                m[x + 1][y + 1] = self.chi_diff(x, y);
            }
        }
        m
    }
}

fn skew(n: usize) -> Option<Vec<Vec<f64>>> {
    if n == 2 {
        return Some(vec![vec![1.0, 1.0], vec![-1.0, 1.0]]);
    }
    if n >= 4 && is_prime(n - 1) && (n - 1) % 4 == 3 {
        let mut s = Field::prime(n - 1).paley_core(-1.0);
        for (k, row) in s.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        return Some(s);
    }
    if n >= 4 && n.is_multiple_of(2) {
        let h = skew(n / 2)?;
        let m = n / 2;
        let mut k = vec![vec![0.0; n]; n];
        for i in 0..m {
            for j in 0..m {
                k[i][j] = h[i][j];
                k[i][j + m] = h[i][j];
                k[i + m][j] = -h[j][i];
                k[i + m][j + m] = h[j][i];
            }
        }
        return Some(k);
    }
    None
}

fn conference(n: usize) -> Option<Vec<Vec<f64>>> {
    let q = n.checked_sub(1)?;
    let field = if q == 9 {
        Field::nine()
    } else if is_prime(q) && q % 4 == 1 {
        Field::prime(q)
    } else {
        return None;
    };
    Some(field.paley_core(1.0))
}

/// A robust Hadamard matrix of order `n`, unnormalised (`H H† = n·I`).
///
/// Supported: `n = 1, 2`; every `n` reachable by the skew constructions (in
/// particular 4, 8, 12, 16, 20); and `n = q + 1` for `q = 9` or a prime
/// `q ≡ 1 (mod 4)` (in particular 6, 10, 14, 18). This covers every even order
/// below 22; order 22 and odd orders above 1 are unsupported.
pub fn robust_hadamard(n: usize) -> Result<ComplexMatrix> {
    let to_complex = |m: Vec<Vec<f64>>, diag: Complex64| {
        ComplexMatrix::from_fn(n, n, |i, j| if i == j && diag.im != 0.0 { diag } else { Complex64::new(m[i][j], 0.0) })
    };
    match n {
        0 => Err(Error::Invalid("order must be positive".into())),
        1 => Ok(ComplexMatrix::from_element(1, 1, Complex64::new(1.0, 0.0))),
        _ => {
            if let Some(s) = skew(n) {
                Ok(to_complex(s, Complex64::new(1.0, 0.0)))
            } else if let Some(c) = conference(n) {
                Ok(to_complex(c, Complex64::new(0.0, 1.0)))
            } else {
                Err(Error::Unsupported(format!("no robust Hadamard construction for order {n}")))
            }
        }
    }
}

/// Supported orders up to `max`.
pub fn robust_hadamard_dims(max: usize) -> Vec<usize> {
    (1..=max).filter(|&n| n <= 2 || skew(n).is_some() || conference(n).is_some()).collect()
}

/// Unimodular entries, `H H† = n·I`, and every principal 2×2 submatrix Hadamard, all within `tol`.
pub fn is_robust_hadamard(h: &ComplexMatrix, tol: f64) -> bool {
    let n = h.nrows();
    if !h.is_square() || h.iter().any(|z| (z.norm() - 1.0).abs() > tol) {
        return false;
    }
    let g = h * h.adjoint();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { n as f64 } else { 0.0 };
            if (g[(i, j)] - want).norm() > tol * n as f64 {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let dot = h[(i, i)] * h[(j, i)].conj() + h[(i, j)] * h[(j, j)].conj();
            if dot.norm() > tol {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_even_order_below_22() {
        for n in (2..22).step_by(2) {
            let h = robust_hadamard(n).unwrap_or_else(|e| panic!("{n}: {e}"));
            assert!(is_robust_hadamard(&h, 1e-10), "order {n}");
        }
        assert!(matches!(robust_hadamard(22), Err(Error::Unsupported(_))));
        assert!(robust_hadamard(3).is_err());
    }

    #[test]
    fn order_two_display() {
        let h = robust_hadamard(2).unwrap();
        let re: Vec<f64> = h.transpose().iter().map(|z| z.re).collect();
        assert_eq!(re, vec![1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn kronecker_doubling_is_not_robust() {
        let h8 = robust_hadamard(8).unwrap();
        let h2 = robust_hadamard(2).unwrap();
        assert!(!is_robust_hadamard(&crate::linalg::kron(&h8, &h2), 1e-10));
    }

    #[test]
    fn supported_orders() {
        assert_eq!(robust_hadamard_dims(22), vec![1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20]);
    }
}
