//! Haar averages of multipartite entangling power: closed forms over the
//! orthogonal and unitary groups, the orthogonal second-moment Weingarten
//! formula, the one-tangle, and exact and Monte Carlo evaluation of the
//! tripartite entangling power of a single gate.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::UNITARY_TOL;
use crate::linalg::{ensure_unitary, haar_orthogonal, haar_sample, kron, random_state, rng_stream, ComplexMatrix, ComplexVector, Group};

/// Local dimensions `(d_1, …, d_N)` of a multipartite system, `N ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyDims(Vec<usize>);

impl PartyDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::Invalid(format!("need at least two parties, got {dims:?}")));
        }
        if dims.contains(&0) {
            return Err(Error::Invalid(format!("local dimensions must be positive, got {dims:?}")));
        }
        if dims.len() > 31 || dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).is_none() {
            return Err(Error::Invalid(format!("total dimension of {dims:?} is too large")));
        }
        Ok(PartyDims(dims))
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    /// `D = d_1 ⋯ d_N`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    fn dim_of(&self, mask: usize) -> usize {
        self.0.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, d)| d).product()
    }

    /// All unordered bipartitions `A|B`, each given by the mask of the part containing party 0.
    pub fn bipartitions(&self) -> Vec<usize> {
        let full = (1usize << self.parties()) - 1;
        (1..full).filter(|m| m & 1 == 1).collect()
    }
}

impl std::str::FromStr for PartyDims {
    type Err = Error;

    /// Parses `"2,2,2"` or `"2x3"`.
    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .split([',', 'x', 'X', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Invalid(format!("bad dimension {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        PartyDims::new(dims)
    }
}

/// Index tuple of the second moment `E[O_{i1 j1} O_{i2 j2} O_{k1 l1} O_{k2 l2}]` over `O(d)`, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentQuery {
    pub i: [usize; 2],
    pub j: [usize; 2],
    pub k: [usize; 2],
    pub l: [usize; 2],
    pub d: usize,
}

impl MomentQuery {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::Invalid(format!("orthogonal second moments need d >= 2, got {}", self.d)));
        }
        let all = self.i.iter().chain(&self.j).chain(&self.k).chain(&self.l);
        if let Some(x) = all.clone().find(|&&x| x >= self.d) {
            return Err(Error::Invalid(format!("index {x} out of range for d = {}", self.d)));
        }
        Ok(())
    }
}

/// Exact second moment of Haar-random orthogonal matrices: a combination of the
/// nine pairings of the row and column indices with Weingarten weights
/// `(d+1)/(d(d−1)(d+2))` on matching pairings and `−1/(d(d−1)(d+2))` otherwise.
pub fn weingarten_o2(q: &MomentQuery) -> Result<f64> {
    q.validate()?;
    let MomentQuery { i, j, k, l, d } = *q;
    let e = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    // The three pairings of the four factors (1,2,3,4) = (i1j1, i2j2, k1l1, k2l2).
    let rows = [e(i[0], i[1]) * e(k[0], k[1]), e(i[0], k[0]) * e(i[1], k[1]), e(i[0], k[1]) * e(i[1], k[0])];
    let cols = [e(j[0], j[1]) * e(l[0], l[1]), e(j[0], l[0]) * e(j[1], l[1]), e(j[0], l[1]) * e(j[1], l[0])];
    let df = d as f64;
    let mut sum = 0.0;
    for (a, r) in rows.iter().enumerate() {
        for (b, c) in cols.iter().enumerate() {
            sum += r * c * if a == b { df + 1.0 } else { -1.0 };
        }
    }
    Ok(sum / (df * (df - 1.0) * (df + 2.0)))
}

/// Monte Carlo mean and standard error of the moment over `samples` Haar orthogonal matrices.
pub fn weingarten_o2_mc(q: &MomentQuery, samples: usize, seed: u64) -> Result<McEstimate> {
    q.validate()?;
    let q = *q;
    McEstimate::from_blocks(samples, seed, |rng| {
        let o = haar_orthogonal(q.d, rng);
        o[(q.i[0], q.j[0])].re * o[(q.i[1], q.j[1])].re * o[(q.k[0], q.l[0])].re * o[(q.k[1], q.l[1])].re
    })
}

/// Closed-form Haar average of the tripartite entangling power (one-tangle).
pub fn avg_ep_tripartite(dims: &PartyDims, group: Group) -> Result<f64> {
    let &[d1, d2, d3] = dims.dims() else {
        return Err(Error::Invalid(format!("tripartite average needs three parties, got {:?}", dims.dims())));
    };
    let (d1, d2, d3) = (d1 as f64, d2 as f64, d3 as f64);
    let d = d1 * d2 * d3;
    let lin = 3.0 * d + 3.0 - d1 - d2 - d3 - d1 * d2 - d1 * d3 - d2 * d3;
    Ok(match group {
        Group::Unitary => lin / (1.5 * (d + 1.0)),
        Group::Orthogonal => {
            let p = (d1 + 1.0) * (d2 + 1.0) * (d3 + 1.0);
            lin * (d * p - 8.0) / (1.5 * (d - 1.0) * (d + 2.0) * p)
        }
    })
}

/// Closed-form Haar average of the entangling power of an `N`-partite gate, the
/// entanglement measure being the generalized concurrence averaged over all
/// `2^{N−1} − 1` bipartitions.
pub fn avg_ep_multipartite(dims: &PartyDims, group: Group) -> f64 {
    let n = dims.parties() as i32;
    let total = dims.total();
    let d = total as f64;
    let b: f64 = dims.dims().iter().map(|&x| x as f64 + 1.0).product();
    let c: f64 = dims.bipartitions().iter().map(|&m| (dims.dim_of(m) + total / dims.dim_of(m)) as f64).sum();
    let two_n = 2f64.powi(n);
    let cuts = 2f64.powi(n - 1) - 1.0;
    let ratio = match group {
        Group::Unitary => c / (cuts * (d + 1.0)),
        Group::Orthogonal => {
            (two_n * (d + 1.0) - 2.0 * b + (b * d - two_n) / cuts * c) / ((d - 1.0) * (d + 2.0)) / b
        }
    };
    2.0 * (1.0 - ratio)
}

/// The equal-dimension specialisation of [`avg_ep_multipartite`] for `n` parties of dimension `d`.
pub fn avg_ep_equal_dims(d: usize, n: u32, group: Group) -> f64 {
    let (df, nn) = (d as f64, n as i32);
    let dn = df.powi(nn);
    let d1n = (df + 1.0).powi(nn);
    let two_n = 2f64.powi(nn);
    let cuts = 2f64.powi(nn - 1) - 1.0;
    let top = two_n * (dn + 1.0) - 2.0 * d1n;
    match group {
        Group::Unitary => top / (cuts * (dn + 1.0)),
        Group::Orthogonal => top * (dn * d1n - two_n) / (cuts * (dn * dn + dn - 2.0) * d1n),
    }
}

/// Maps each basis index to its (row, column) position after grouping the parties of `mask` first.
fn split_indices(dims: &PartyDims, mask: usize) -> (usize, usize, Vec<(usize, usize)>) {
    let ds = dims.dims();
    let (da, db) = (dims.dim_of(mask), dims.total() / dims.dim_of(mask));
    let map = (0..dims.total())
        .map(|mut x| {
            let (mut row, mut col, mut ra, mut rb) = (0, 0, 1, 1);
            for (p, &dp) in ds.iter().enumerate().rev() {
                let digit = x % dp;
                x /= dp;
                if mask >> p & 1 == 1 {
                    row += digit * ra;
                    ra *= dp;
                } else {
                    col += digit * rb;
                    rb *= dp;
                }
            }
            (row, col)
        })
        .collect();
    (da, db, map)
}

fn reduced_purity(psi: &ComplexVector, split: &(usize, usize, Vec<(usize, usize)>)) -> f64 {
    let (da, db, map) = split;
    let mut m = ComplexMatrix::zeros(*da, *db);
    for (x, &(r, c)) in map.iter().enumerate() {
        m[(r, c)] = psi[x];
    }
    let rho = if da <= db { &m * m.adjoint() } else { m.adjoint() * &m };
    rho.iter().map(|z| z.norm_sqr()).sum()
}

fn check_state(psi: &ComplexVector, dims: &PartyDims) -> Result<()> {
    if psi.len() != dims.total() {
        return Err(Error::Dimension(format!("state of length {} for dims {:?}", psi.len(), dims.dims())));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Generalized concurrence `2(1 − Tr ρ_A²)` averaged over all bipartitions.
pub fn mean_concurrence(psi: &ComplexVector, dims: &PartyDims) -> Result<f64> {
    check_state(psi, dims)?;
    let cuts = dims.bipartitions();
    let sum: f64 = cuts.iter().map(|&m| 2.0 * (1.0 - reduced_purity(psi, &split_indices(dims, m)))).sum();
    Ok(sum / cuts.len() as f64)
}

/// `(τ_{12|3} + τ_{13|2} + τ_{23|1}) / 3` for a three-party pure state.
pub fn one_tangle(psi: &ComplexVector, dims: &PartyDims) -> Result<f64> {
    if dims.parties() != 3 {
        return Err(Error::Invalid(format!("one-tangle needs three parties, got {:?}", dims.dims())));
    }
    mean_concurrence(psi, dims)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

const MC_BLOCK: usize = 64;

impl McEstimate {
    /// Block `b` of [`MC_BLOCK`] samples draws from stream `b`; block sums are
    /// combined in order, so results do not depend on the worker count.
    fn from_blocks(samples: usize, seed: u64, f: impl Fn(&mut crate::linalg::Rng64) -> f64 + Sync) -> Result<Self> {
        if samples < 2 {
            return Err(Error::Invalid("need at least two samples".into()));
        }
        let blocks = samples.div_ceil(MC_BLOCK);
        let partial: Vec<(f64, f64)> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = rng_stream(seed, b as u64);
                let count = MC_BLOCK.min(samples - b * MC_BLOCK);
                (0..count).fold((0.0, 0.0), |(s, s2), _| {
                    let v = f(&mut rng);
                    (s + v, s2 + v * v)
                })
            })
            .collect();
        let (s, s2) = partial.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let n = samples as f64;
        let mean = s / n;
        let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
        Ok(McEstimate { mean, std_error: (var / n).sqrt(), samples })
    }
}

fn check_gate(u: &ComplexMatrix, dims: &PartyDims) -> Result<()> {
    let d = dims.total();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::Dimension(format!("gate is {}x{}, dims {:?} need side {d}", u.nrows(), u.ncols(), dims.dims())));
    }
    ensure_unitary(u, UNITARY_TOL)
}

/// Monte Carlo entangling power: mean bipartition-averaged concurrence of `U`
/// applied to Haar-random product states.
pub fn ep_multipartite_mc(u: &ComplexMatrix, dims: &PartyDims, samples: usize, seed: u64) -> Result<McEstimate> {
    check_gate(u, dims)?;
    let splits: Vec<_> = dims.bipartitions().into_iter().map(|m| split_indices(dims, m)).collect();
    McEstimate::from_blocks(samples, seed, |rng| {
        let mut psi = ComplexVector::from_element(1, Complex64::new(1.0, 0.0));
        for &d in dims.dims() {
            let phi = random_state(d, rng);
            psi = ComplexVector::from_fn(psi.len() * d, |x, _| psi[x / d] * phi[x % d]);
        }
        let out = u * psi;
        let sum: f64 = splits.iter().map(|s| 2.0 * (1.0 - reduced_purity(&out, s))).sum();
        sum / splits.len() as f64
    })
}

/// [`ep_multipartite_mc`] for three parties, i.e. the mean one-tangle.
pub fn ep_tripartite_mc(u: &ComplexMatrix, dims: &PartyDims, samples: usize, seed: u64) -> Result<McEstimate> {
    if dims.parties() != 3 {
        return Err(Error::Invalid(format!("tripartite estimate needs three parties, got {:?}", dims.dims())));
    }
    ep_multipartite_mc(u, dims, samples, seed)
}

/// Grand mean of [`ep_multipartite_mc`] over `gates` Haar-random gates of
/// `group`, each probed with `states` product states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrandMean {
    pub mean: f64,
    /// Standard error from the spread of the per-gate means.
    pub std_error: f64,
    pub gates: usize,
    pub states: usize,
    pub per_gate: Vec<McEstimate>,
}

/// Gate `g` is drawn from stream `2^63 + g` of `seed`; the same generator then
/// supplies the seed of that gate's product-state estimate.
pub fn ep_grand_mean_mc(dims: &PartyDims, group: Group, gates: usize, states: usize, seed: u64) -> Result<GrandMean> {
    if gates < 2 {
        return Err(Error::Invalid("need at least two gates".into()));
    }
    let mut per_gate = Vec::with_capacity(gates);
    for g in 0..gates {
        let mut rng = rng_stream(seed, (1 << 63) | g as u64);
        let u = haar_sample(dims.total(), group, &mut rng);
        let state_seed: u64 = rng.random();
        per_gate.push(ep_multipartite_mc(&u, dims, states, state_seed)?);
    }
    let n = gates as f64;
    let mean = per_gate.iter().map(|e| e.mean).sum::<f64>() / n;
    let var = per_gate.iter().map(|e| (e.mean - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(GrandMean { mean, std_error: (var / n).sqrt(), gates, states, per_gate })
}

/// Largest total dimension accepted by [`ep_tripartite_exact`].
pub const EXACT_MAX_DIM: usize = 8;

/// Exact tripartite entangling power `(ε_{12|3} + ε_{13|2} + ε_{23|1})/3`.
///
/// Averaging `(|ψ_i⟩⟨ψ_i|)^{⊗2}` over each factor gives `(I + SWAP_i)/(d_i(d_i+1))`,
/// so `ε_{ab|c} = 2[1 − Π_i (d_i(d_i+1))⁻¹ Σ_S Tr((U⊗U) SWAP_S (U⊗U)† SWAP_c)]`,
/// a sum over the eight subsets `S` of parties; this is the full delta
/// contraction carried out on the doubled space.
pub fn ep_tripartite_exact(u: &ComplexMatrix, dims: &PartyDims) -> Result<f64> {
    if dims.parties() != 3 {
        return Err(Error::Invalid(format!("tripartite contraction needs three parties, got {:?}", dims.dims())));
    }
    let d = dims.total();
    if d > EXACT_MAX_DIM {
        return Err(Error::Unsupported(format!(
            "exact contraction is limited to total dimension {EXACT_MAX_DIM}, got {d}; use the Monte Carlo estimate"
        )));
    }
    check_gate(u, dims)?;
    let ds = dims.dims();
    // digit of party p in a single-copy index x
    let digit = |x: usize, p: usize| x / ds[p + 1..].iter().product::<usize>() % ds[p];
    let stride = |p: usize| ds[p + 1..].iter().product::<usize>();
    let swap = |mask: usize| -> Vec<usize> {
        (0..d * d)
            .map(|z| {
                let (mut x, mut y) = (z / d, z % d);
                for p in 0..3 {
                    if mask >> p & 1 == 1 {
                        let (a, b) = (digit(x, p), digit(y, p));
                        x = x - a * stride(p) + b * stride(p);
                        y = y - b * stride(p) + a * stride(p);
                    }
                }
                x * d + y
            })
            .collect()
    };
    let uu = kron(u, u);
    let uu_adj = uu.adjoint();
    let norm: f64 = ds.iter().map(|&x| 1.0 / (x * (x + 1)) as f64).product();
    let sandwiched: Vec<ComplexMatrix> = (0..8)
        .map(|mask| {
            let perm = swap(mask);
            // (U⊗U)·SWAP_S has column z equal to column perm[z] of U⊗U.
            let cols = ComplexMatrix::from_fn(d * d, d * d, |r, z| uu[(r, perm[z])]);
            cols * &uu_adj
        })
        .collect();
    let mut total = 0.0;
    for c in 0..3 {
        let pc = swap(1 << c);
        let purity: f64 = sandwiched.iter().map(|a| (0..d * d).map(|z| a[(z, pc[z])].re).sum::<f64>()).sum();
        total += 2.0 * (1.0 - norm * purity);
    }
    Ok(total / 3.0)
}
