//! The classical array `P36`, the seed array `P̃_s`, and the rotation families
//! `A(x)`, `G(x,y,z)`, `W(x,y,z,u,w)` obtained by replacing pairs of entries of
//! `P36` with two-level rotations.
//!
//! Every rotation acts inside the span of `|3·⟩, |4·⟩`. The `x` and `z`
//! rotations reduce to `P36` at angle 0, while `y`, `u` and `w` reduce to it at
//! angle `π/2`; hence `A(x) = G(x, π/2, x) = W(x, π/2, x, π/2, π/2)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::qls::{parse_digit_rows, qls_to_matrix, QlsEntry, WeightedQls};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub const P36_ROWS: &str = "11 22 33 44 55 66 / 23 14 45 36 61 52 / 32 41 64 53 16 25 / \
                            46 35 51 62 24 13 / 54 63 26 15 42 31 / 65 56 12 21 33 44";

pub const SEED_ROWS: &str = "11 22 33 44 55 66 / 23 14 45 36 61 52 / 32 41 64 53 16 25 / \
                             46 35 51 62 24 13 / 64 56 26 15 43 31 / 55 63 12 21 42 34";

pub const OLS3_ROWS: &str = "11 22 33 / 23 31 12 / 32 13 21";

/// `A(π/6)`, the best member of the `A` family.
pub const A_OPT: [f64; 1] = [PI / 6.0];
pub const G_OPT: [f64; 3] = [PI / 4.0, 3.0 * PI / 8.0, PI / 8.0];
/// `(3, 4, 2, 5, 5)·π/12`, where `e_p = (208 + √3)/210`.
pub const W_OPT: [f64; 5] = [3.0 * PI / 12.0, 4.0 * PI / 12.0, 2.0 * PI / 12.0, 5.0 * PI / 12.0, 5.0 * PI / 12.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    A,
    G,
    W,
}

impl Family {
    pub fn arity(self) -> usize {
        match self {
            Family::A => 1,
            Family::G => 3,
            Family::W => 5,
        }
    }

    pub fn optimum(self) -> &'static [f64] {
        match self {
            Family::A => &A_OPT,
            Family::G => &G_OPT,
            Family::W => &W_OPT,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "G" => Ok(Family::G),
            "W" => Ok(Family::W),
            _ => Err(Error::Invalid(format!("unknown family {s:?} (expected A, G or W)"))),
        }
    }
}

pub fn p36_qls() -> WeightedQls {
    parse_digit_rows(P36_ROWS).expect("P36 array is well formed")
}

pub fn seed_qls() -> WeightedQls {
    parse_digit_rows(SEED_ROWS).expect("seed array is well formed")
}

/// The pair of orthogonal Latin squares of order 3; its matrix is 2-unitary.
pub fn ols3_qls() -> WeightedQls {
    parse_digit_rows(OLS3_ROWS).expect("order-3 array is well formed")
}

fn c(a: f64, k: usize, l: usize) -> QlsEntry {
    QlsEntry::new(a, k, l)
}

// Each rotation fills two cells; components are (amplitude, ket_row, ket_col), 0-based.
fn rot_x(q: &mut WeightedQls, t: f64) {
    let (co, si) = (t.cos(), t.sin());
    q.set(0, 2, vec![c(co, 2, 2), c(-si, 3, 2)]);
    q.set(0, 3, vec![c(si, 2, 3), c(co, 3, 3)]);
}

fn rot_y(q: &mut WeightedQls, t: f64) {
    let (co, si) = (t.cos(), t.sin());
    q.set(1, 2, vec![c(co, 2, 4), c(si, 3, 4)]);
    q.set(1, 3, vec![c(si, 2, 5), c(-co, 3, 5)]);
}

fn rot_z(q: &mut WeightedQls, t: f64) {
    let (co, si) = (t.cos(), t.sin());
    q.set(5, 4, vec![c(co, 2, 2), c(si, 3, 2)]);
    q.set(5, 5, vec![c(-si, 2, 3), c(co, 3, 3)]);
}

fn rot_u(q: &mut WeightedQls, t: f64) {
    let (co, si) = (t.cos(), t.sin());
    q.set(3, 0, vec![c(co, 2, 5), c(si, 3, 5)]);
    q.set(3, 1, vec![c(si, 2, 4), c(-co, 3, 4)]);
}

fn rot_w(q: &mut WeightedQls, t: f64) {
    let (co, si) = (t.cos(), t.sin());
    q.set(4, 4, vec![c(-co, 2, 1), c(si, 3, 1)]);
    q.set(4, 5, vec![c(si, 2, 0), c(co, 3, 0)]);
}

pub fn family_qls(family: Family, params: &[f64]) -> Result<WeightedQls> {
    if params.len() != family.arity() {
        return Err(Error::Invalid(format!(
            "family {family:?} takes {} angle(s), got {}",
            family.arity(),
            params.len()
        )));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::Invalid("angles must be finite".into()));
    }
    let mut q = p36_qls();
    match family {
        Family::A => {
            rot_x(&mut q, params[0]);
            rot_z(&mut q, params[0]);
        }
        Family::G | Family::W => {
            rot_x(&mut q, params[0]);
            rot_y(&mut q, params[1]);
            rot_z(&mut q, params[2]);
            if family == Family::W {
                rot_u(&mut q, params[3]);
                rot_w(&mut q, params[4]);
            }
        }
    }
    Ok(q)
}

pub fn family_matrix(family: Family, params: &[f64]) -> Result<ComplexMatrix> {
    qls_to_matrix(&family_qls(family, params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::entangling_power;
    use crate::linalg::is_unitary;

    #[test]
    fn p36_unit_positions() {
        let p = qls_to_matrix(&p36_qls()).unwrap();
        // Entry (0,1) = "22" sits at global (1, 7).
        assert_eq!(p[(1, 7)].re, 1.0);
        assert!(is_unitary(&p, 1e-14));
        let ones = p.iter().filter(|z| z.re == 1.0).count();
        assert_eq!(ones, 36);
    }

    #[test]
    fn a_at_zero_is_p36() {
        let a0 = family_matrix(Family::A, &[0.0]).unwrap();
        let p = qls_to_matrix(&p36_qls()).unwrap();
        assert!((a0 - p).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn arity_is_checked() {
        assert!(family_matrix(Family::G, &[0.1]).is_err());
        assert!(family_matrix(Family::W, &[0.1; 5]).is_ok());
    }

    #[test]
    fn optimum_values() {
        let ep = |f: Family| entangling_power(&family_matrix(f, f.optimum()).unwrap(), 6).unwrap();
        assert!((ep(Family::A) - 1257.0 / 1260.0).abs() < 1e-12);
        assert!((ep(Family::G) - (313.0 + 2f64.sqrt()) / 315.0).abs() < 1e-12);
        assert!((ep(Family::W) - (208.0 + 3f64.sqrt()) / 210.0).abs() < 1e-12);
    }
}
