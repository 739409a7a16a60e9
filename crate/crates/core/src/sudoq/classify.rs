use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    cardinality, construct_from_families, sudoq_c16, sudoq_c4_apparent, sudoq_c4_classical, sudoq_c6, SudoQGrid,
    DISTINCT_TOL,
};
use crate::error::Result;
use crate::linalg::{haar_unitary, identity, rng_stream, ComplexMatrix, ComplexVector, Rng64};

fn random_member(rng: &mut Rng64) -> ComplexMatrix {
    let phase = |rng: &mut Rng64| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let c = |re: f64| Complex64::new(re, 0.0);
    let base = match rng.random_range(0..4) {
        0 => identity(2),
        1 => ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        2 => ComplexMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(-1.0)]) / c(2f64.sqrt()),
        _ => haar_unitary(2, rng),
    };
    let d = ComplexMatrix::from_diagonal(&ComplexVector::from_fn(2, |_, _| phase(rng)));
    d * base
}

/// The `c = 6` pattern with `|2⟩ ± |4⟩` replaced by an arbitrary orthonormal pair of `span{|2⟩, |4⟩}`.
fn c6_pattern(rng: &mut Rng64) -> SudoQGrid {
    let u = haar_unitary(2, rng);
    let mut g = sudoq_c6().entries().to_vec();
    let x = ComplexVector::from_fn(4, |k, _| match k {
        1 => u[(0, 0)],
        3 => u[(0, 1)],
        _ => Complex64::new(0.0, 0.0),
    });
    let y = ComplexVector::from_fn(4, |k, _| match k {
        1 => u[(1, 0)],
        3 => u[(1, 1)],
        _ => Complex64::new(0.0, 0.0),
    });
    for (r, c) in [(2, 0), (3, 2)] {
        g[r][c] = x.clone();
    }
    for (r, c) in [(2, 2), (3, 0)] {
        g[r][c] = y.clone();
    }
    SudoQGrid::normalized(2, g).expect("pattern keeps the shape")
}

/// Random relabelling by the symmetries of the grid: band and stack
/// permutations, line permutations inside them, and transposition.
fn shuffle_lines(g: &SudoQGrid, rng: &mut Rng64) -> SudoQGrid {
    let n = g.n();
    let order = |rng: &mut Rng64| {
        let mut bands: Vec<usize> = (0..n).collect();
        bands.shuffle(rng);
        let mut out = Vec::with_capacity(n * n);
        for b in bands {
            let mut inner: Vec<usize> = (0..n).collect();
            inner.shuffle(rng);
            out.extend(inner.into_iter().map(|t| n * b + t));
        }
        out
    };
    let (rows, cols) = (order(rng), order(rng));
    let transpose = rng.random_bool(0.5);
    let side = n * n;
    let entries = (0..side)
        .map(|r| {
            (0..side)
                .map(|c| {
                    let (a, b) = if transpose { (cols[c], rows[r]) } else { (rows[r], cols[c]) };
                    g.entry(a, b).clone()
                })
                .collect()
        })
        .collect();
    SudoQGrid::new(n, entries).expect("relabelling keeps the shape")
}

/// One random valid 4×4 design: a unitary-family construction, the
/// generalised `c = 6` pattern, or a displayed design, followed by a random
/// relabelling and, half of the time, a global Haar rotation.
pub fn random_4x4(rng: &mut Rng64) -> SudoQGrid {
    let g = match rng.random_range(0..3) {
        0 => {
            let us: Vec<_> = (0..2).map(|_| random_member(rng)).collect();
            let vs: Vec<_> = (0..2).map(|_| random_member(rng)).collect();
            construct_from_families(&us, &vs).expect("members are unitary")
        }
        1 => c6_pattern(rng),
        _ => [sudoq_c4_classical, sudoq_c4_apparent, sudoq_c6, sudoq_c16][rng.random_range(0..4)](),
    };
    let g = shuffle_lines(&g, rng);
    if rng.random_bool(0.5) {
        g.rotated(&haar_unitary(4, rng)).expect("4x4 rotation")
    } else {
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardinalityHistogram {
    pub samples: usize,
    /// Cardinality → count.
    pub counts: BTreeMap<usize, usize>,
    /// Samples that failed validation; expected to be zero.
    pub invalid: usize,
}

/// Samples `samples` designs with [`random_4x4`] (sample `k` on stream `k`) and tallies their cardinalities.
pub fn classify_random_4x4(samples: usize, seed: u64) -> Result<CardinalityHistogram> {
    let results: Vec<Option<usize>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_stream(seed, k as u64);
            let g = random_4x4(&mut rng);
            super::verify_sudoq(&g, 1e-9).ok.then(|| cardinality(&g, DISTINCT_TOL).cardinality)
        })
        .collect();
    let mut counts = BTreeMap::new();
    let mut invalid = 0;
    for r in results {
        match r {
            Some(c) => *counts.entry(c).or_insert(0) += 1,
            None => invalid += 1,
        }
    }
    Ok(CardinalityHistogram { samples, counts, invalid })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_support() {
        let h = classify_random_4x4(300, 5).unwrap();
        assert_eq!(h.invalid, 0);
        assert!(h.counts.keys().all(|c| [4, 6, 8, 16].contains(c)), "{h:?}");
        assert_eq!(h.counts.values().sum::<usize>(), 300);
        assert!(h.counts.len() == 4, "{h:?}");
    }
}
