//! Randomized checks shared by the property suite and the acceptance report.
//! Each check draws everything it needs from `seed` and returns a reason on failure.
#![allow(dead_code)]

use qdesign::averages::{one_tangle, PartyDims};
use qdesign::birkhoff::{
    circulant_matrix, circulant_unistochastic_4, decide_unistochastic_4, is_bracelet, BistochasticMatrix, Verdict,
    DEFAULT_GRID, DEFAULT_TOL,
};
use qdesign::gates::{entangling_power, entangling_power_via_choi, gate_typicality};
use qdesign::linalg::{
    ginibre, haar_unitary, identity, kron, partial_transpose, random_state, reshuffle, rng_from_seed, squared_moduli,
    swap, BipartiteDims, ComplexMatrix, RealMatrix, Rng64, Subsystem,
};
use qdesign::sudoq::{cardinality, random_4x4, verify_sudoq, SudoQGrid, DISTINCT_TOL};
use qdesign::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn reshuffle_involution(seed: u64, n: usize) -> Check {
    let m = ginibre(n * n, &mut rng_from_seed(seed));
    let back = reshuffle(&reshuffle(&m, n).unwrap(), n).unwrap();
    ensure(back == m, || format!("reshuffle twice changed a {0}x{0} matrix (seed {seed})", n * n))
}

pub fn partial_transpose_involution(seed: u64, na: usize, nb: usize) -> Check {
    let dims = BipartiteDims::new(na, nb);
    let m = ginibre(na * nb, &mut rng_from_seed(seed));
    for sub in [Subsystem::A, Subsystem::B] {
        let back = partial_transpose(&partial_transpose(&m, dims, sub).unwrap(), dims, sub).unwrap();
        ensure(back == m, || format!("partial transpose on {sub:?} is not an involution at ({na},{nb}), seed {seed}"))?;
    }
    Ok(())
}

/// Rearrangements keep the Frobenius norm: Tr(U^R U^R†) = Tr(U^Γ U^Γ†) = n².
pub fn rearrangement_norms(seed: u64, n: usize) -> Check {
    let u = haar_unitary(n * n, &mut rng_from_seed(seed));
    let d = (n * n) as f64;
    let r = reshuffle(&u, n).unwrap().norm_squared();
    let g = qdesign::linalg::gamma(&u, n).unwrap().norm_squared();
    ensure((r - d).abs() < 1e-10 && (g - d).abs() < 1e-10, || format!("norms {r}, {g} vs {d} (seed {seed})"))
}

pub fn ep_routes_agree(seed: u64, n: usize) -> Check {
    let u = haar_unitary(n * n, &mut rng_from_seed(seed));
    let a = entangling_power(&u, n).unwrap();
    let b = entangling_power_via_choi(&u, n).unwrap();
    ensure((a - b).abs() < 1e-9, || format!("e_p routes differ at n={n}: {a} vs {b} (seed {seed})"))
}

/// g_t(I) = 0, g_t(S) = 1, g_t(US) = 1 − g_t(U), and e_p(U) = e_p(US) = e_p(SU).
pub fn typicality_mirror(seed: u64, n: usize) -> Check {
    let s = swap(n * n).unwrap();
    let gi = gate_typicality(&identity(n * n), n).unwrap();
    let gs = gate_typicality(&s, n).unwrap();
    ensure(gi.abs() < 1e-12 && (gs - 1.0).abs() < 1e-12, || format!("g_t(I) = {gi}, g_t(S) = {gs} at n={n}"))?;
    let u = haar_unitary(n * n, &mut rng_from_seed(seed));
    let us = &u * &s;
    let (g, gm) = (gate_typicality(&u, n).unwrap(), gate_typicality(&us, n).unwrap());
    ensure((g + gm - 1.0).abs() < 1e-10, || format!("g_t(U) + g_t(US) = {} at n={n} (seed {seed})", g + gm))?;
    let e = entangling_power(&u, n).unwrap();
    let e_us = entangling_power(&us, n).unwrap();
    let e_su = entangling_power(&(&s * &u), n).unwrap();
    ensure((e - e_us).abs() < 1e-10 && (e - e_su).abs() < 1e-10, || {
        format!("e_p not swap invariant at n={n}: {e}, {e_us}, {e_su} (seed {seed})")
    })
}

/// The one-tangle of a random three-party state is unchanged by local unitaries.
pub fn tangle_local_invariance(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let d: Vec<usize> = (0..3).map(|_| rng.random_range(2..=3)).collect();
    let dims = PartyDims::new(d.clone()).unwrap();
    let psi = random_state(dims.total(), &mut rng);
    let t0 = one_tangle(&psi, &dims).unwrap();
    let local = kron(&kron(&haar_unitary(d[0], &mut rng), &haar_unitary(d[1], &mut rng)), &haar_unitary(d[2], &mut rng));
    let t1 = one_tangle(&(local * &psi), &dims).unwrap();
    ensure((t0 - t1).abs() < 1e-10, || format!("one-tangle {t0} → {t1} for dims {d:?} (seed {seed})"))
}

fn random_bracelet_circulant(rng: &mut Rng64) -> [f64; 4] {
    loop {
        let w: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        let s: f64 = w.iter().sum();
        let t = [w[0] / s, w[1] / s, w[2] / s, w[3] / s];
        let b = BistochasticMatrix::with_tolerance(circulant_matrix(&t), 1e-12).unwrap();
        if is_bracelet(&b).is_ok() {
            return t;
        }
    }
}

/// A random bracelet circulant is certified by the closed-form solver and by
/// the general 4×4 search, both with residual below 1e-9.
pub fn circulant_solvers_agree(seed: u64) -> Check {
    let w = random_bracelet_circulant(&mut rng_from_seed(seed));
    let closed = circulant_unistochastic_4(w[0], w[1], w[2], w[3]).unwrap();
    let b = BistochasticMatrix::with_tolerance(circulant_matrix(&w), 1e-12).unwrap();
    let search = decide_unistochastic_4(&b, DEFAULT_GRID, DEFAULT_TOL);
    for (name, c) in [("circulant", &closed), ("decide4", &search)] {
        let r = c.residual.unwrap_or(f64::INFINITY);
        ensure(c.verdict == Verdict::Unistochastic && r < 1e-9, || {
            format!("{name} gave {:?} (residual {r:e}) for {w:?}", c.verdict)
        })?;
    }
    Ok(())
}

fn permute(b: &RealMatrix, rows: &[usize], cols: &[usize]) -> RealMatrix {
    RealMatrix::from_fn(4, 4, |i, j| b[(rows[i], cols[j])])
}

/// Permuting rows and columns of a unistochastic |U|² keeps it certified.
pub fn decide4_permutation_covariance(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let b = squared_moduli(&haar_unitary(4, &mut rng));
    let mut rows: Vec<usize> = (0..4).collect();
    let mut cols: Vec<usize> = (0..4).collect();
    rows.shuffle(&mut rng);
    cols.shuffle(&mut rng);
    for m in [b.clone(), permute(&b, &rows, &cols)] {
        let cert = decide_unistochastic_4(&BistochasticMatrix::with_tolerance(m, 1e-12).unwrap(), DEFAULT_GRID, DEFAULT_TOL);
        let r = cert.residual.unwrap_or(f64::INFINITY);
        ensure(cert.verdict == Verdict::Unistochastic && r < 1e-9, || {
            format!("|U|² with rows {rows:?}, cols {cols:?} gave {:?} (residual {r:e}), seed {seed}", cert.verdict)
        })?;
    }
    Ok(())
}

/// Cardinality ignores per-entry phases; a global unitary keeps validity and cardinality.
pub fn sudoq_invariances(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let g = random_4x4(&mut rng);
    let c = cardinality(&g, DISTINCT_TOL).cardinality;
    let phased: Vec<Vec<_>> = g
        .entries()
        .iter()
        .map(|row| row.iter().map(|v| v * Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))).collect())
        .collect();
    let phased = SudoQGrid::new(2, phased).unwrap();
    let cp = cardinality(&phased, DISTINCT_TOL).cardinality;
    ensure(cp == c, || format!("phases changed cardinality {c} → {cp} (seed {seed})"))?;
    let rotated = g.rotated(&haar_unitary(4, &mut rng)).unwrap();
    ensure(verify_sudoq(&rotated, 1e-9).ok, || format!("rotation broke validity (seed {seed})"))?;
    let cr = cardinality(&rotated, DISTINCT_TOL).cardinality;
    ensure(cr == c, || format!("rotation changed cardinality {c} → {cr} (seed {seed})"))
}

/// Case counts per check; they add up to 1000.
pub const PLAN: [(&str, u32); 9] = [
    ("reshuffle_involution", 150),
    ("partial_transpose_involution", 150),
    ("rearrangement_norms", 80),
    ("ep_routes_agree", 150),
    ("typicality_mirror", 150),
    ("tangle_local_invariance", 200),
    ("circulant_solvers_agree", 50),
    ("decide4_permutation_covariance", 20),
    ("sudoq_invariances", 50),
];

const SIZES: [usize; 3] = [2, 3, 6];

/// Runs case `k` of the named check with the given seed; sizes cycle with `k`.
pub fn run_case(name: &str, k: u32, seed: u64) -> Check {
    let n = SIZES[k as usize % SIZES.len()];
    match name {
        "reshuffle_involution" => reshuffle_involution(seed, n),
        "partial_transpose_involution" => partial_transpose_involution(seed, 2 + k as usize % 3, 2 + (k as usize / 3) % 4),
        "rearrangement_norms" => rearrangement_norms(seed, n),
        "ep_routes_agree" => ep_routes_agree(seed, n),
        "typicality_mirror" => typicality_mirror(seed, n),
        "tangle_local_invariance" => tangle_local_invariance(seed),
        "circulant_solvers_agree" => circulant_solvers_agree(seed),
        "decide4_permutation_covariance" => decide4_permutation_covariance(seed),
        "sudoq_invariances" => sudoq_invariances(seed),
        other => Err(format!("unknown check {other}")),
    }
}
