//! The four displayed 4×4 designs, written with 1-based kets and without
//! normalisation: `"3-4"` stands for `(|3⟩ − |4⟩)/√2`.

use num_complex::Complex64;

use super::SudoQGrid;
use crate::error::{Error, Result};
use crate::linalg::ComplexVector;

pub const C4_CLASSICAL: &str = "1 2 3 4 / 3 4 1 2 / 4 1 2 3 / 2 3 4 1";
/// The classical design with `|3⟩, |4⟩` rotated to `|3⟩ ± |4⟩`.
pub const C4_APPARENT: &str = "1 2 3+4 3-4 / 3+4 3-4 1 2 / 3-4 1 2 3+4 / 2 3+4 3-4 1";
pub const C6: &str = "1 2 3 4 / 3 4 1 2 / 2-4 1 2+4 3 / 2+4 3 2-4 1";
pub const C16: &str = "1 2 3+4 3-4 / 3 4 1-2 1+2 / 2+4 1-3 1+2+3-4 1-2+3+4 / 2-4 1+3 1+2-3+4 1-2-3-4";

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    pub cardinality: usize,
}

pub const FIXTURES: [Fixture; 4] = [
    Fixture { name: "sudoq_c4", text: C4_CLASSICAL, cardinality: 4 },
    Fixture { name: "sudoq_c4_apparent", text: C4_APPARENT, cardinality: 4 },
    Fixture { name: "sudoq_c6", text: C6, cardinality: 6 },
    Fixture { name: "sudoq_c16", text: C16, cardinality: 16 },
];

fn parse_ket_sum(token: &str, dim: usize) -> Result<ComplexVector> {
    let mut v = ComplexVector::zeros(dim);
    let mut sign = 1.0;
    let mut digits = String::new();
    let mut flush = |digits: &mut String, sign: f64| -> Result<()> {
        let k: usize = digits.parse().map_err(|_| Error::Invalid(format!("bad ket sum {token:?}")))?;
        if k == 0 || k > dim {
            return Err(Error::Invalid(format!("ket |{k}⟩ out of range 1..{dim}")));
        }
        v[k - 1] += Complex64::new(sign, 0.0);
        digits.clear();
        Ok(())
    };
    for (pos, ch) in token.chars().enumerate() {
        match ch {
            '0'..='9' => digits.push(ch),
            '+' | '-' if pos == 0 => sign = if ch == '-' { -1.0 } else { 1.0 },
            '+' | '-' => {
                flush(&mut digits, sign)?;
                sign = if ch == '-' { -1.0 } else { 1.0 };
            }
            _ => return Err(Error::Invalid(format!("unexpected {ch:?} in ket sum {token:?}"))),
        }
    }
    flush(&mut digits, sign)?;
    Ok(v)
}

/// Parses rows separated by `/`, cells by whitespace, each cell a signed sum of 1-based kets.
pub fn parse_ket_grid(text: &str) -> Result<SudoQGrid> {
    let rows: Vec<Vec<&str>> = text.split('/').map(|r| r.split_whitespace().collect()).collect();
    let side = rows.len();
    let n = (side as f64).sqrt().round() as usize;
    if n * n != side {
        return Err(Error::Dimension(format!("{side} rows is not a square number")));
    }
    let entries = rows
        .iter()
        .map(|r| r.iter().map(|t| parse_ket_sum(t, side)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    SudoQGrid::normalized(n, entries)
}

pub fn sudoq_c4_classical() -> SudoQGrid {
    parse_ket_grid(C4_CLASSICAL).expect("fixture is well formed")
}

pub fn sudoq_c4_apparent() -> SudoQGrid {
    parse_ket_grid(C4_APPARENT).expect("fixture is well formed")
}

pub fn sudoq_c6() -> SudoQGrid {
    parse_ket_grid(C6).expect("fixture is well formed")
}

pub fn sudoq_c16() -> SudoQGrid {
    parse_ket_grid(C16).expect("fixture is well formed")
}
