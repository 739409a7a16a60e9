use std::f64::consts::PI;

use num_complex::Complex64;

use super::{distinct_representatives, SudoQGrid, DISTINCT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{ensure_unitary, ComplexMatrix, ComplexVector};

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn row_vector(m: &ComplexMatrix, k: usize) -> ComplexVector {
    ComplexVector::from_iterator(m.ncols(), m.row(k).iter().copied())
}

fn check_family(family: &[ComplexMatrix], n: usize, name: &str) -> Result<()> {
    if family.len() != n {
        return Err(Error::Invalid(format!("family {name} has {} members, expected {n}", family.len())));
    }
    for (i, u) in family.iter().enumerate() {
        if u.nrows() != n || u.ncols() != n {
            return Err(Error::Dimension(format!("{name}[{i}] is {}x{}, expected {n}x{n}", u.nrows(), u.ncols())));
        }
        ensure_unitary(u, 1e-10)?;
    }
    Ok(())
}

/// Number of distinct rows, up to phase, across all members of a family.
pub fn family_cardinality(family: &[ComplexMatrix]) -> usize {
    let rows: Vec<ComplexVector> = family.iter().flat_map(|u| (0..u.nrows()).map(move |k| row_vector(u, k))).collect();
    distinct_representatives(&rows, DISTINCT_TOL).len()
}

/// The design `|v_ijkl⟩ = |u^(i)_{j+k}⟩ ⊗ |w^(j)_{i+l}⟩` (indices mod `n`), where
/// `|u^(i)_m⟩` is row `m` of `us[i]` and `|w^(j)_m⟩` row `m` of `vs[j]`; the
/// entry sits at row `n·i + k`, column `n·j + l`. Fixing `(i, k)` gives a row,
/// `(j, l)` a column and `(i, j)` a block, each an orthonormal basis. The
/// cardinality is the product of the two family cardinalities.
pub fn construct_from_families(us: &[ComplexMatrix], vs: &[ComplexMatrix]) -> Result<SudoQGrid> {
    let n = us.len();
    if n == 0 {
        return Err(Error::Invalid("families must be non-empty".into()));
    }
    check_family(us, n, "U")?;
    check_family(vs, n, "V")?;
    let side = n * n;
    let mut entries = vec![vec![ComplexVector::zeros(side); side]; side];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let a = row_vector(&us[i], (j + k) % n);
                    let b = row_vector(&vs[j], (i + l) % n);
                    entries[n * i + k][n * j + l] = ComplexVector::from_fn(side, |x, _| a[x / n] * b[x % n]);
                }
            }
        }
    }
    SudoQGrid::normalized(n, entries)
}

/// Eigenbases of `Z, X, XZ, …, XZ^{n−1}` for prime `n`, with `X = Σ|j⟩⟨j+1|` and
/// `Z = Σ ω^j |j⟩⟨j|` on kets labelled `1..n`. For odd `n`, vector `k` of the
/// basis of `XZ^m` has eigenvalue `ω^k` and components `v_0 = 1/√n`,
/// `v_{j+1} = ω^{k − m(j+2)} v_j`.
pub fn weyl_heisenberg_mubs(n: usize) -> Result<Vec<Vec<ComplexVector>>> {
    if !is_prime(n) {
        return Err(Error::Invalid(format!("Weyl-Heisenberg bases need a prime dimension, got {n}")));
    }
    let omega = |p: i64| Complex64::from_polar(1.0, 2.0 * PI * (p.rem_euclid(n as i64)) as f64 / n as f64);
    let mut bases = vec![(0..n)
        .map(|k| ComplexVector::from_fn(n, |j, _| Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0)))
        .collect::<Vec<_>>()];
    let scale = 1.0 / (n as f64).sqrt();
    for m in 0..n as i64 {
        let basis = (0..n as i64)
            .map(|k| {
                let mut v = ComplexVector::zeros(n);
                v[0] = Complex64::new(scale, 0.0);
                // The cyclic closure needs λ^n = ω^{m·n(n−1)/2}; for odd n that is λ = ω^k,
                // for n = 2 the eigenvalues pick up an extra quarter turn.
                let twist = if n.is_multiple_of(2) { Complex64::from_polar(1.0, PI * m as f64 / n as f64) } else { Complex64::new(1.0, 0.0) };
                for j in 0..n - 1 {
                    v[j + 1] = v[j] * omega(k - m * (j as i64 + 2)) * twist;
                }
                v
            })
            .collect();
        bases.push(basis);
    }
    Ok(bases)
}

/// The family design built from the first `n` Weyl–Heisenberg bases on both
/// factors; its `n⁴` entries are pairwise distinct.
pub fn construct_wh_sudoq(n: usize) -> Result<SudoQGrid> {
    let bases = weyl_heisenberg_mubs(n)?;
    let family: Vec<ComplexMatrix> = bases
        .iter()
        .take(n)
        .map(|b| ComplexMatrix::from_fn(n, n, |k, x| b[k][x]))
        .collect();
    construct_from_families(&family, &family)
}
