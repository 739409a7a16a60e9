//! Block-structured ansatz for 2-unitary matrices of order 36 built from 24
//! vectors `a_1..a_12, b_1..b_12 ∈ C^6`.
//!
//! The placement tables below list, for every row of `U`, `U^R` and `Γ_A(U)`,
//! which vector fills each of the six length-6 slots (`.` is a zero slot).
//! Labels `c`, `d`, `e`, `f` are copies of `a`/`b` vectors shifted between the
//! three 12-row groups: `c_k` and `e_k` copy `a`, `d_k` and `f_k` copy `b`.
//!
//! The singular values of `U`, `U^R`, `U^Γ` are those of the 12×12 matrices
//! `M`, `M_R`, `M_Γ`, each repeated three times; hence `U` is 2-unitary
//! exactly when the three small matrices are unitary.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::avg_singular_entropy;
use crate::linalg::{
    expi_hermitian, fourier, haar_unitary, kron, partial_transpose_unchecked, random_hermitian, reshuffle_unchecked,
    rng_from_seed, BipartiteDims, ComplexMatrix, ComplexVector, Subsystem, ZERO,
};

const U_TABLE: &str = "a1 b1 . . . .;a2 b2 . . . .;. . c1 d1 . .;. . c2 d2 . .;. . . . e1 f1;. . . . e2 f2;\
a3 b3 . . . .;a4 b4 . . . .;. . c3 d3 . .;. . c4 d4 . .;. . . . e3 f3;. . . . e4 f4;\
. . . . e5 f5;. . . . e6 f6;a5 b5 . . . .;a6 b6 . . . .;. . c5 d5 . .;. . c6 d6 . .;\
. . . . e7 f7;. . . . e8 f8;a7 b7 . . . .;a8 b8 . . . .;. . c7 d7 . .;. . c8 d8 . .;\
. . c9 d9 . .;. . c10 d10 . .;. . . . e9 f9;. . . . e10 f10;a9 b9 . . . .;a10 b10 . . . .;\
. . c11 d11 . .;. . c12 d12 . .;. . . . e11 f11;. . . . e12 f12;a11 b11 . . . .;a12 b12 . . . .";

const R_TABLE: &str = "a1 a2 . . . .;b1 b2 . . . .;. . c1 c2 . .;. . d1 d2 . .;. . . . e1 e2;. . . . f1 f2;\
a3 a4 . . . .;b3 b4 . . . .;. . c3 c4 . .;. . d3 d4 . .;. . . . e3 e4;. . . . f3 f4;\
. . a5 a6 . .;. . b5 b6 . .;. . . . c5 c6;. . . . d5 d6;e5 e6 . . . .;f5 f6 . . . .;\
. . a7 a8 . .;. . b7 b8 . .;. . . . c7 c8;. . . . d7 d8;e7 e8 . . . .;f7 f8 . . . .;\
. . . . a9 a10;. . . . b9 b10;c9 c10 . . . .;d9 d10 . . . .;. . e9 e10 . .;. . f9 f10 . .;\
. . . . a11 a12;. . . . b11 b12;c11 c12 . . . .;d11 d12 . . . .;. . e11 e12 . .;. . f11 f12 . .";

const GAMMA_TABLE: &str = "a1 a3 . . . .;a2 a4 . . . .;. . a5 a7 . .;. . a6 a8 . .;. . . . a9 a11;. . . . a10 a12;\
b1 b3 . . . .;b2 b4 . . . .;. . b5 b7 . .;. . b6 b8 . .;. . . . b9 b11;. . . . b10 b12;\
. . . . c9 c11;. . . . c10 c12;c1 c3 . . . .;c2 c4 . . . .;. . c5 c7 . .;. . c6 c8 . .;\
. . . . d9 d11;. . . . d10 d12;d1 d3 . . . .;d2 d4 . . . .;. . d5 d7 . .;. . d6 d8 . .;\
. . e5 e7 . .;. . e6 e8 . .;. . . . e9 e11;. . . . e10 e12;e1 e3 . . . .;e2 e4 . . . .;\
. . f5 f7 . .;. . f6 f8 . .;. . . . f9 f11;. . . . f10 f12;f1 f3 . . . .;f2 f4 . . . .";

/// Which rearrangement a placement table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternTable {
    U,
    Reshuffle,
    /// Partial transpose on the first factor, `Γ_A(U) = (U^{Γ_B})ᵀ`.
    Gamma,
}

impl PatternTable {
    fn text(self) -> &'static str {
        match self {
            PatternTable::U => U_TABLE,
            PatternTable::Reshuffle => R_TABLE,
            PatternTable::Gamma => GAMMA_TABLE,
        }
    }

    fn rearrange(self, u: &ComplexMatrix) -> ComplexMatrix {
        match self {
            PatternTable::U => u.clone(),
            PatternTable::Reshuffle => reshuffle_unchecked(u, 6),
            PatternTable::Gamma => partial_transpose_unchecked(u, BipartiteDims::square(6), Subsystem::A),
        }
    }
}

/// Resolves a table label to `(is_b, index)` with 0-based index into `a`/`b`.
fn resolve(label: &str) -> (bool, usize) {
    let (letter, num) = label.split_at(1);
    let k: usize = num.parse().expect("table labels carry an index");
    let (g, m) = ((k - 1) / 4, (k - 1) % 4);
    let base = match letter {
        "a" | "b" => return (letter == "b", k - 1),
        "c" | "d" => [8, 0, 4][g],
        "e" | "f" => [4, 8, 0][g],
        _ => unreachable!("unknown table label {label}"),
    };
    (matches!(letter, "d" | "f"), base + m)
}

/// Parsed table: `slots[row][slot] = Some((is_b, index))`.
fn parse_table(text: &str) -> Vec<[Option<(bool, usize)>; 6]> {
    text.split(';')
        .map(|row| {
            let mut slots = [None; 6];
            for (s, tok) in row.split_whitespace().enumerate() {
                if tok != "." {
                    slots[s] = Some(resolve(tok));
                }
            }
            slots
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockVectors {
    pub a: Vec<ComplexVector>,
    pub b: Vec<ComplexVector>,
}

impl BlockVectors {
    pub fn new(a: Vec<ComplexVector>, b: Vec<ComplexVector>) -> Result<Self> {
        if a.len() != 12 || b.len() != 12 || a.iter().chain(&b).any(|v| v.len() != 6) {
            return Err(Error::Dimension("block ansatz needs 12 + 12 vectors of length 6".into()));
        }
        Ok(BlockVectors { a, b })
    }

    /// Reads `a_i` and `b_i` from the left and right halves of row `i` of `M`.
    pub fn from_m(m: &ComplexMatrix) -> Result<Self> {
        if m.shape() != (12, 12) {
            return Err(Error::Dimension(format!("M must be 12x12, got {:?}", m.shape())));
        }
        let half = |i: usize, off: usize| ComplexVector::from_fn(6, |k, _| m[(i, off + k)]);
        Ok(BlockVectors { a: (0..12).map(|i| half(i, 0)).collect(), b: (0..12).map(|i| half(i, 6)).collect() })
    }

    fn get(&self, is_b: bool, k: usize) -> &ComplexVector {
        if is_b {
            &self.b[k]
        } else {
            &self.a[k]
        }
    }

    fn stack(&self, rows: impl Iterator<Item = (bool, usize, bool, usize)>) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(12, 12);
        for (r, (lb, lk, rb, rk)) in rows.enumerate() {
            for k in 0..6 {
                out[(r, k)] = self.get(lb, lk)[k];
                out[(r, 6 + k)] = self.get(rb, rk)[k];
            }
        }
        out
    }

    /// Rows `(a_i | b_i)`.
    pub fn m(&self) -> ComplexMatrix {
        self.stack((0..12).map(|i| (false, i, true, i)))
    }

    /// Per group `g`: `(a_{4g}|a_{4g+1})`, `(b_{4g}|b_{4g+1})`, `(a_{4g+2}|a_{4g+3})`, `(b_{4g+2}|b_{4g+3})`.
    pub fn m_r(&self) -> ComplexMatrix {
        self.stack((0..3).flat_map(|g| {
            let q = 4 * g;
            [(false, q, false, q + 1), (true, q, true, q + 1), (false, q + 2, false, q + 3), (true, q + 2, true, q + 3)]
        }))
    }

    /// Per group `g`: `(a_{4g}|a_{4g+2})`, `(a_{4g+1}|a_{4g+3})`, `(b_{4g}|b_{4g+2})`, `(b_{4g+1}|b_{4g+3})`.
    pub fn m_gamma(&self) -> ComplexMatrix {
        self.stack((0..3).flat_map(|g| {
            let q = 4 * g;
            [(false, q, false, q + 2), (false, q + 1, false, q + 3), (true, q, true, q + 2), (true, q + 1, true, q + 3)]
        }))
    }
}

/// Fills the 36×36 matrix according to the `U` placement table.
pub fn block_assemble(v: &BlockVectors) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(36, 36);
    for (r, slots) in parse_table(U_TABLE).iter().enumerate() {
        for (s, slot) in slots.iter().enumerate() {
            if let Some((is_b, k)) = *slot {
                let x = v.get(is_b, k);
                for c in 0..6 {
                    u[(r, 6 * s + c)] = x[c];
                }
            }
        }
    }
    u
}

/// `(row, slot)` cells of the chosen rearrangement of `u` that differ from the
/// placement table: a labelled slot must equal its vector exactly and every
/// other slot must be exactly zero.
pub fn pattern_violations(u: &ComplexMatrix, v: &BlockVectors, table: PatternTable) -> Result<Vec<(usize, usize)>> {
    if u.shape() != (36, 36) {
        return Err(Error::Dimension(format!("expected 36x36, got {:?}", u.shape())));
    }
    let x = table.rearrange(u);
    let mut bad = Vec::new();
    for (r, slots) in parse_table(table.text()).iter().enumerate() {
        for (s, slot) in slots.iter().enumerate() {
            let ok = match *slot {
                Some((is_b, k)) => (0..6).all(|c| x[(r, 6 * s + c)] == v.get(is_b, k)[c]),
                None => (0..6).all(|c| x[(r, 6 * s + c)] == ZERO),
            };
            if !ok {
                bad.push((r, s));
            }
        }
    }
    Ok(bad)
}

fn purity(x: &ComplexMatrix) -> f64 {
    let p = x * x.adjoint();
    p.iter().map(|z| z.norm_sqr()).sum()
}

/// `e_p` of the assembled matrix computed from the 12×12 arrangements alone,
/// valid when `M` is unitary.
pub fn block_entangling_power(v: &BlockVectors) -> f64 {
    let nn = 36.0;
    let f = 3.0 * (purity(&v.m_r()) + purity(&v.m_gamma()));
    (nn * (nn + 1.0) - f) / (nn * (nn - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStrategy {
    /// Dephased and permuted complex Hadamard matrices of order 12 as `M`.
    Hadamard,
    /// Haar-random `M ∈ U(12)`.
    Random,
    /// Hadamard warm start followed by a hill climb `M ← M·exp(iεH)`.
    Refine,
}

impl std::str::FromStr for BlockStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hadamard" => Ok(BlockStrategy::Hadamard),
            "random" => Ok(BlockStrategy::Random),
            "refine" | "invariant_vectors" => Ok(BlockStrategy::Refine),
            _ => Err(Error::Invalid(format!("unknown block strategy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BlockSearchResult {
    pub vectors: BlockVectors,
    pub matrix: ComplexMatrix,
    pub e_p: f64,
    pub s_e: f64,
    pub evaluations: usize,
}

fn hadamard_cores() -> Vec<ComplexMatrix> {
    let f = fourier;
    vec![f(12), kron(&f(2), &f(6)), kron(&f(3), &f(4)), kron(&kron(&f(2), &f(2)), &f(3))]
}

fn random_hadamard<R: Rng + ?Sized>(cores: &[ComplexMatrix], rng: &mut R) -> ComplexMatrix {
    let core = &cores[rng.random_range(0..cores.len())];
    let mut rows: Vec<usize> = (0..12).collect();
    let mut cols: Vec<usize> = (0..12).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let dl: Vec<Complex64> = (0..12).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))).collect();
    let dr: Vec<Complex64> = (0..12).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))).collect();
    let s = 1.0 / 12f64.sqrt();
    ComplexMatrix::from_fn(12, 12, |i, j| dl[i] * core[(rows[i], cols[j])] * dr[j] * s)
}

/// Best block candidate found within `budget` evaluations of `e_p`.
pub fn block_search(strategy: BlockStrategy, seed: u64, budget: usize) -> Result<BlockSearchResult> {
    if budget == 0 {
        return Err(Error::Invalid("budget must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let cores = hadamard_cores();
    let score = |m: &ComplexMatrix| block_entangling_power(&BlockVectors::from_m(m).expect("12x12"));
    let sample = |rng: &mut crate::linalg::Rng64| match strategy {
        BlockStrategy::Random => haar_unitary(12, rng),
        _ => random_hadamard(&cores, rng),
    };
    let warm = match strategy {
        BlockStrategy::Refine => (budget / 10).max(1),
        _ => budget,
    };
    let mut best = sample(&mut rng);
    let mut best_e = score(&best);
    for _ in 1..warm {
        let m = sample(&mut rng);
        let e = score(&m);
        if e > best_e {
            best = m;
            best_e = e;
        }
    }
    if strategy == BlockStrategy::Refine {
        let mut eps = 0.05;
        for _ in warm..budget {
            let m = &best * expi_hermitian(&random_hermitian(12, &mut rng), eps);
            let e = score(&m);
            if e > best_e {
                best = m;
                best_e = e;
            } else {
                eps = (eps * 0.995).max(1e-3);
            }
        }
    }
    let vectors = BlockVectors::from_m(&best)?;
    let matrix = block_assemble(&vectors);
    let s_e = avg_singular_entropy(&matrix, 6)?;
    Ok(BlockSearchResult { e_p: crate::gates::entangling_power_unchecked(&matrix, 6), vectors, matrix, s_e, evaluations: budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gamma_unchecked, unitarity_residual_fro};

    fn random_vectors(seed: u64) -> BlockVectors {
        let mut rng = rng_from_seed(seed);
        let g = crate::linalg::ginibre(12, &mut rng);
        BlockVectors::from_m(&g).unwrap()
    }

    #[test]
    fn tables_are_consistent_with_assembly() {
        let v = random_vectors(1);
        let u = block_assemble(&v);
        for t in [PatternTable::U, PatternTable::Reshuffle, PatternTable::Gamma] {
            assert!(pattern_violations(&u, &v, t).unwrap().is_empty(), "{t:?}");
        }
    }

    #[test]
    fn residuals_scale_by_sqrt3() {
        let v = random_vectors(2);
        let u = block_assemble(&v);
        let s3 = 3f64.sqrt();
        let pairs = [
            (unitarity_residual_fro(&u), unitarity_residual_fro(&v.m())),
            (unitarity_residual_fro(&reshuffle_unchecked(&u, 6)), unitarity_residual_fro(&v.m_r())),
            (unitarity_residual_fro(&gamma_unchecked(&u, 6)), unitarity_residual_fro(&v.m_gamma())),
        ];
        for (big, small) in pairs {
            assert!((big - s3 * small).abs() < 1e-9 * big.max(1.0));
        }
    }

    #[test]
    fn small_formula_matches_full_ep() {
        let mut rng = rng_from_seed(3);
        let v = BlockVectors::from_m(&haar_unitary(12, &mut rng)).unwrap();
        let full = crate::gates::entangling_power(&block_assemble(&v), 6).unwrap();
        assert!((full - block_entangling_power(&v)).abs() < 1e-12);
    }

    #[test]
    fn label_resolution() {
        assert_eq!(resolve("c1"), (false, 8));
        assert_eq!(resolve("d6"), (true, 1));
        assert_eq!(resolve("e12"), (false, 3));
        assert_eq!(resolve("f5"), (true, 8));
    }
}
