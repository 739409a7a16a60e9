//! Quantum Sudoku (SudoQ) designs: validity, cardinality and quantumness,
//! constructions from unitary families and from Weyl–Heisenberg mutually
//! unbiased bases, and random sampling of 4×4 designs.
//!
//! A grid of block size `n` has `n² × n²` cells, each holding a unit vector of
//! dimension `n²`; cell `(r, c)` lies in block `(r / n, c / n)`.

mod classify;
mod construct;
mod fixtures;

pub use classify::{classify_random_4x4, random_4x4, CardinalityHistogram};
pub use construct::{
    construct_from_families, construct_wh_sudoq, family_cardinality, is_prime, weyl_heisenberg_mubs,
};
pub use fixtures::{parse_ket_grid, sudoq_c16, sudoq_c4_apparent, sudoq_c4_classical, sudoq_c6, Fixture, FIXTURES};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// Two unit vectors are the same state when `|⟨u|v⟩| > 1 − DISTINCT_TOL`.
pub const DISTINCT_TOL: f64 = 1e-8;
pub const ORTHO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SudoQGrid {
    n: usize,
    entries: Vec<Vec<ComplexVector>>,
}

impl SudoQGrid {
    /// Validates the `n² × n²` shape and that every entry has unit norm within 1e-10.
    pub fn new(n: usize, entries: Vec<Vec<ComplexVector>>) -> Result<Self> {
        let side = Self::check_shape(n, &entries)?;
        for (r, row) in entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let norm = v.norm();
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(Error::Invalid(format!("entry ({r}, {c}) has norm {norm}, expected 1")));
                }
            }
        }
        debug_assert_eq!(side, n * n);
        Ok(SudoQGrid { n, entries })
    }

    /// Like [`SudoQGrid::new`], but rescales every nonzero entry to unit norm first.
    pub fn normalized(n: usize, mut entries: Vec<Vec<ComplexVector>>) -> Result<Self> {
        Self::check_shape(n, &entries)?;
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                let norm = v.norm();
                if !(norm > 1e-300 && norm.is_finite()) {
                    return Err(Error::Invalid(format!("entry ({r}, {c}) is zero or non-finite")));
                }
                v.unscale_mut(norm);
            }
        }
        Self::new(n, entries)
    }

    fn check_shape(n: usize, entries: &[Vec<ComplexVector>]) -> Result<usize> {
        if n == 0 {
            return Err(Error::Invalid("block size must be positive".into()));
        }
        let side = n * n;
        if entries.len() != side || entries.iter().any(|row| row.len() != side) {
            return Err(Error::Dimension(format!("a grid of block size {n} needs {side}x{side} cells")));
        }
        if let Some(v) = entries.iter().flatten().find(|v| v.len() != side) {
            return Err(Error::Dimension(format!("entry of dimension {}, expected {side}", v.len())));
        }
        Ok(side)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        self.n * self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> &ComplexVector {
        &self.entries[r][c]
    }

    pub fn entries(&self) -> &[Vec<ComplexVector>] {
        &self.entries
    }

    /// Applies `u` to every entry.
    pub fn rotated(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.side() || u.ncols() != self.side() {
            return Err(Error::Dimension(format!("rotation must be {0}x{0}", self.side())));
        }
        let entries = self.entries.iter().map(|row| row.iter().map(|v| u * v).collect()).collect();
        Self::normalized(self.n, entries)
    }

    /// Cells of row, column or block `index`.
    pub fn cells(&self, kind: LineKind, index: usize) -> Vec<(usize, usize)> {
        let (n, s) = (self.n, self.side());
        match kind {
            LineKind::Row => (0..s).map(|c| (index, c)).collect(),
            LineKind::Column => (0..s).map(|r| (r, index)).collect(),
            LineKind::Block => (0..s).map(|t| (n * (index / n) + t / n, n * (index % n) + t % n)).collect(),
        }
    }

    pub fn to_json(&self) -> GridJson {
        GridJson {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
        }
    }
}

/// `{"n": n, "entries": [[[[re, im], ...], ...], ...]}`: row, then column, then amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub n: usize,
    pub entries: Vec<Vec<Vec<[f64; 2]>>>,
}

impl GridJson {
    /// Amplitude lists are normalised on load, so displayed designs may omit normalisation.
    pub fn to_grid(&self) -> Result<SudoQGrid> {
        let entries = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|amps| ComplexVector::from_iterator(amps.len(), amps.iter().map(|&[re, im]| Complex64::new(re, im))))
                    .collect()
            })
            .collect();
        SudoQGrid::normalized(self.n, entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Row,
    Column,
    Block,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: LineKind,
    pub index: usize,
    /// The two cells `(row, col)` whose entries are not orthogonal.
    pub cells: [(usize, usize); 2],
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    /// Rows, columns and blocks whose Gram matrix is the identity.
    pub bases_certified: usize,
    pub violations: Vec<Violation>,
}

/// Checks that every row, column and block is an orthonormal basis within `tol`.
pub fn verify_sudoq(g: &SudoQGrid, tol: f64) -> Verification {
    let mut violations = Vec::new();
    let mut bases = 0;
    for kind in [LineKind::Row, LineKind::Column, LineKind::Block] {
        for index in 0..g.side() {
            let cells = g.cells(kind, index);
            let before = violations.len();
            for (a, &ca) in cells.iter().enumerate() {
                for &cb in &cells[a + 1..] {
                    let overlap = g.entry(ca.0, ca.1).dotc(g.entry(cb.0, cb.1)).norm();
                    if overlap > tol {
                        violations.push(Violation { kind, index, cells: [ca, cb], overlap });
                    }
                }
            }
            if violations.len() == before {
                bases += 1;
            }
        }
    }
    Verification { ok: violations.is_empty(), bases_certified: bases, violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantumness {
    Classical,
    ApparentlyQuantum,
    GenuinelyQuantum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CardinalityReport {
    pub cardinality: usize,
    pub class: Quantumness,
    /// First cell holding each distinct state.
    pub representatives: Vec<(usize, usize)>,
}

/// Indices of the first member of each phase-equivalence class.
pub fn distinct_representatives<'a>(vectors: impl IntoIterator<Item = &'a ComplexVector>, tol: f64) -> Vec<usize> {
    let mut reps: Vec<(usize, &ComplexVector)> = Vec::new();
    for (k, v) in vectors.into_iter().enumerate() {
        if !reps.iter().any(|(_, r)| r.dotc(v).norm() > 1.0 - tol) {
            reps.push((k, v));
        }
    }
    reps.into_iter().map(|(k, _)| k).collect()
}

fn is_computational(v: &ComplexVector, tol: f64) -> bool {
    v.iter().any(|z| z.norm() > 1.0 - tol)
}

/// Number of distinct entries up to global phase, and the resulting class.
pub fn cardinality(g: &SudoQGrid, tol: f64) -> CardinalityReport {
    let side = g.side();
    let reps = distinct_representatives(g.entries.iter().flatten(), tol);
    let cardinality = reps.len();
    let class = if g.entries.iter().flatten().all(|v| is_computational(v, tol)) {
        Quantumness::Classical
    } else if cardinality > side {
        Quantumness::GenuinelyQuantum
    } else {
        Quantumness::ApparentlyQuantum
    };
    CardinalityReport { cardinality, class, representatives: reps.into_iter().map(|k| (k / side, k % side)).collect() }
}

/// Cardinality of the orthogonal quantum Latin square encoded by a matrix of
/// side `n²`: cell `(i, j)` holds the vector with amplitude `U[n·i+k, n·j+l]` on `|kl⟩`.
pub fn oqls_cardinality(u: &ComplexMatrix, n: usize, tol: f64) -> Result<usize> {
    if u.nrows() != n * n || u.ncols() != n * n {
        return Err(Error::Dimension(format!("expected side {}, got {}x{}", n * n, u.nrows(), u.ncols())));
    }
    let cells: Vec<ComplexVector> = (0..n * n)
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let v = ComplexVector::from_fn(n * n, |kl, _| u[(n * i + kl / n, n * j + kl % n)]);
            let norm = v.norm();
            v.unscale(norm)
        })
        .collect();
    Ok(distinct_representatives(&cells, tol).len())
}
