//! Dense complex kernel: bipartite index rearrangements, special matrices,
//! Haar sampling, polar decomposition and distances.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;
pub type RealMatrix = DMatrix<f64>;

/// The deterministic generator used for every seeded computation in the crate.
pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`; used to give
/// every parallel work item its own reproducible randomness.
pub fn rng_stream(seed: u64, stream: u64) -> Rng64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tensor-factor dimensions of a bipartite matrix of side `dim_a·dim_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Self {
        Self { dim_a, dim_b }
    }

    pub fn square(n: usize) -> Self {
        Self { dim_a: n, dim_b: n }
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    fn check(&self, m: &ComplexMatrix) -> Result<()> {
        let d = self.total();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Dimension(format!(
                "expected a {d}x{d} matrix for dims ({}, {}), got {}x{}",
                self.dim_a,
                self.dim_b,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Unitary,
    Orthogonal,
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unitary" | "u" => Ok(Group::Unitary),
            "orthogonal" | "o" => Ok(Group::Orthogonal),
            _ => Err(Error::Invalid(format!("unknown group {s:?} (expected unitary or orthogonal)"))),
        }
    }
}

/// Side `n` such that `n·n` equals the side of `m`, or a dimension error.
pub fn subsystem_dim(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    let side = m.nrows();
    let n = (side as f64).sqrt().round() as usize;
    if n * n != side {
        return Err(Error::Dimension(format!("side {side} is not a perfect square")));
    }
    Ok(n)
}

fn check_square_of(m: &ComplexMatrix, n: usize) -> Result<()> {
    BipartiteDims::square(n).check(m)
}

/// Reshuffling `M^R_{(i,j),(k,l)} = M_{(i,k),(j,l)}`: the `n×n` block in block
/// position `(i, j)` becomes row `n·i + j` of the output.
pub fn reshuffle(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    check_square_of(m, n)?;
    Ok(reshuffle_unchecked(m, n))
}

pub(crate) fn reshuffle_unchecked(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let d = n * n;
    ComplexMatrix::from_fn(d, d, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        m[(n * i + k, n * j + l)]
    })
}

/// Partial transpose on the chosen subsystem. On `B` every block is transposed
/// in place; on `A` the grid of blocks is transposed.
pub fn partial_transpose(m: &ComplexMatrix, dims: BipartiteDims, sub: Subsystem) -> Result<ComplexMatrix> {
    dims.check(m)?;
    Ok(partial_transpose_unchecked(m, dims, sub))
}

pub(crate) fn partial_transpose_unchecked(m: &ComplexMatrix, dims: BipartiteDims, sub: Subsystem) -> ComplexMatrix {
    let nb = dims.dim_b;
    let d = dims.total();
    ComplexMatrix::from_fn(d, d, |r, c| {
        let (i, k) = (r / nb, r % nb);
        let (j, l) = (c / nb, c % nb);
        match sub {
            Subsystem::B => m[(nb * i + l, nb * j + k)],
            Subsystem::A => m[(nb * j + k, nb * i + l)],
        }
    })
}

/// The default partial transpose `M^Γ`, acting on the second factor.
pub fn gamma(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    partial_transpose(m, BipartiteDims::square(n), Subsystem::B)
}

pub(crate) fn gamma_unchecked(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    partial_transpose_unchecked(m, BipartiteDims::square(n), Subsystem::B)
}

/// Partial trace over `sub`; the output lives on the remaining factor.
pub fn partial_trace(m: &ComplexMatrix, dims: BipartiteDims, sub: Subsystem) -> Result<ComplexMatrix> {
    dims.check(m)?;
    let (na, nb) = (dims.dim_a, dims.dim_b);
    Ok(match sub {
        Subsystem::B => ComplexMatrix::from_fn(na, na, |i, j| (0..nb).map(|k| m[(nb * i + k, nb * j + k)]).sum()),
        Subsystem::A => ComplexMatrix::from_fn(nb, nb, |k, l| (0..na).map(|i| m[(nb * i + k, nb * i + l)]).sum()),
    })
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Unitary factor `V` of the polar decomposition `x = V·H`.
///
/// Fails when the smallest singular value is below `1e-12·σ_max`.
pub fn polar_unitary(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.nrows() != x.ncols() {
        return Err(Error::Dimension("polar decomposition needs a square matrix".into()));
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let tol = 1e-12 * smax;
    if !(smin > tol) {
        return Err(Error::RankDeficient { sigma: smin, tol });
    }
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^dagger");
    Ok(u * vt)
}

/// Largest elementwise deviation of `U†U` from the identity.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for ((r, c), z) in g.iter().enumerate().map(|(k, z)| ((k % g.nrows(), k / g.nrows()), z)) {
        let target = if r == c { ONE } else { ZERO };
        worst = worst.max((z - target).norm());
    }
    worst
}

/// Frobenius norm of `X†X − I`.
pub fn unitarity_residual_fro(u: &ComplexMatrix) -> f64 {
    let mut g = u.adjoint() * u;
    for k in 0..g.nrows() {
        g[(k, k)] -= ONE;
    }
    g.norm()
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && unitarity_residual(u) < tol
}

pub fn ensure_unitary(u: &ComplexMatrix, tol: f64) -> Result<()> {
    if !u.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", u.nrows(), u.ncols())));
    }
    let residual = unitarity_residual(u);
    if residual < tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { residual })
    }
}

/// Squared Hilbert–Schmidt distance `Σ|a_ij − b_ij|²`.
pub fn hs_distance_sq(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!("shapes {:?} and {:?} differ", a.shape(), b.shape())));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum())
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Swap gate of side `d = n²`: `S(|x⟩⊗|y⟩) = |y⟩⊗|x⟩`.
pub fn swap(d: usize) -> Result<ComplexMatrix> {
    let n = (d as f64).sqrt().round() as usize;
    if n * n != d {
        return Err(Error::Dimension(format!("swap needs a perfect-square side, got {d}")));
    }
    let mut s = ComplexMatrix::zeros(d, d);
    for i in 0..n {
        for k in 0..n {
            s[(n * k + i, n * i + k)] = ONE;
        }
    }
    Ok(s)
}

/// Unnormalized Fourier matrix `F_jk = ω^{jk}`, `ω = e^{2πi/n}`, so `F F† = n·I`.
pub fn fourier(n: usize) -> ComplexMatrix {
    let w = 2.0 * std::f64::consts::PI / n as f64;
    ComplexMatrix::from_fn(n, n, |j, k| Complex64::from_polar(1.0, w * ((j * k) % n) as f64))
}

/// Flat bistochastic matrix with all entries `1/n`.
pub fn van_der_waerden(n: usize) -> RealMatrix {
    RealMatrix::from_element(n, n, 1.0 / n as f64)
}

/// Elementwise squared moduli `|U_ij|²`.
pub fn squared_moduli(u: &ComplexMatrix) -> RealMatrix {
    u.map(|z| z.norm_sqr())
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Standard complex Gaussian matrix (entries with `E|z|² = 1`).
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    })
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of `diag(R)`
/// moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let z = ginibre(n, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar-random real orthogonal matrix (returned with zero imaginary parts).
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let z = RealMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    to_complex(&q)
}

pub fn haar_sample<R: Rng + ?Sized>(n: usize, group: Group, rng: &mut R) -> ComplexMatrix {
    match group {
        Group::Unitary => haar_unitary(n, rng),
        Group::Orthogonal => haar_orthogonal(n, rng),
    }
}

/// Haar-random unit vector in `C^n`.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = ComplexVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    });
    let norm = v.norm();
    v.unscale_mut(norm);
    v
}

/// Random Hermitian matrix `(Z + Z†)/2` with `Z` Ginibre.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let z = ginibre(n, rng);
    (&z + z.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `exp(i·t·H)` for Hermitian `H`, through its eigendecomposition.
pub fn expi_hermitian(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = ComplexVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, t * l)),
    );
    let mut vd = v.clone();
    for (j, p) in phases.iter().enumerate() {
        for i in 0..vd.nrows() {
            vd[(i, j)] *= p;
        }
    }
    vd * v.adjoint()
}

/// Permutation matrix with ones at `(perm[i], i)`, i.e. mapping `|i⟩ → |perm[i]⟩`.
pub fn permutation_matrix(perm: &[usize]) -> RealMatrix {
    let n = perm.len();
    let mut p = RealMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(j, i)] = 1.0;
    }
    p
}
