use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// One component `amplitude·|ket_row, ket_col⟩` of an array entry (0-based kets).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QlsEntry {
    pub amplitude: Complex64,
    pub ket_row: usize,
    pub ket_col: usize,
}

impl QlsEntry {
    pub fn new(amplitude: f64, ket_row: usize, ket_col: usize) -> Self {
        QlsEntry { amplitude: Complex64::new(amplitude, 0.0), ket_row, ket_col }
    }
}

/// `n×n` array of pure states of `C^n ⊗ C^n`, each stored as a list of components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedQls {
    pub n: usize,
    pub entries: Vec<Vec<Vec<QlsEntry>>>,
}

impl WeightedQls {
    pub fn new(n: usize, entries: Vec<Vec<Vec<QlsEntry>>>) -> Result<Self> {
        let q = WeightedQls { n, entries };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Invalid("array side must be positive".into()));
        }
        if self.entries.len() != n || self.entries.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("entries must form a {n}x{n} array")));
        }
        for (i, row) in self.entries.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                // Collect into a dense vector so repeated kets are summed before normalising.
                let mut v = vec![Complex64::new(0.0, 0.0); n * n];
                for e in cell {
                    if e.ket_row >= n || e.ket_col >= n {
                        return Err(Error::Invalid(format!("entry ({i},{j}) has ket outside 0..{n}")));
                    }
                    v[n * e.ket_row + e.ket_col] += e.amplitude;
                }
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(Error::NotNormalized { norm });
                }
            }
        }
        Ok(())
    }

    pub fn set(&mut self, i: usize, j: usize, components: Vec<QlsEntry>) {
        self.entries[i][j] = components;
    }
}

/// Parses a classical array written as rows of two-digit tokens `kl` (1-based),
/// e.g. `"11 22 33 / 23 31 12 / 32 13 21"`. Rows are separated by `/`, `;` or newlines.
pub fn parse_digit_rows(text: &str) -> Result<WeightedQls> {
    let rows: Vec<Vec<&str>> = text
        .split(['/', ';', '\n'])
        .map(|r| r.split_whitespace().collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    let n = rows.len();
    if n == 0 || n > 9 {
        return Err(Error::Invalid(format!("digit-row arrays need 1..=9 rows, got {n}")));
    }
    let mut entries = Vec::with_capacity(n);
    for row in &rows {
        if row.len() != n {
            return Err(Error::Dimension(format!("row has {} tokens, expected {n}", row.len())));
        }
        let mut cells = Vec::with_capacity(n);
        for tok in row {
            let digits: Vec<u32> = tok.chars().map(|c| c.to_digit(10)).collect::<Option<_>>().unwrap_or_default();
            if digits.len() != 2 || digits.iter().any(|&d| d == 0 || d as usize > n) {
                return Err(Error::Invalid(format!("bad token {tok:?}")));
            }
            cells.push(vec![QlsEntry::new(1.0, digits[0] as usize - 1, digits[1] as usize - 1)]);
        }
        entries.push(cells);
    }
    WeightedQls::new(n, entries)
}

/// Entry `(i,j)` with amplitude `α` on `|k l⟩` lands at `(n·i + k, n·j + l)`.
pub fn qls_to_matrix(q: &WeightedQls) -> Result<ComplexMatrix> {
    q.validate()?;
    let n = q.n;
    let mut u = ComplexMatrix::zeros(n * n, n * n);
    for (i, row) in q.entries.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            for e in cell {
                u[(n * i + e.ket_row, n * j + e.ket_col)] += e.amplitude;
            }
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_lands_in_its_block() {
        let mut cells = vec![vec![vec![QlsEntry::new(1.0, 0, 0)]; 2]; 2];
        cells[1][0] = vec![QlsEntry::new(0.6, 0, 1), QlsEntry::new(-0.8, 1, 1)];
        let q = WeightedQls::new(2, cells).unwrap();
        let u = qls_to_matrix(&q).unwrap();
        assert_eq!(u[(2, 1)].re, 0.6);
        assert_eq!(u[(3, 1)].re, -0.8);
        assert_eq!(u[(0, 2)].re, 1.0);
    }

    #[test]
    fn rejects_unnormalized_entries() {
        let mut cells = vec![vec![vec![QlsEntry::new(1.0, 0, 0)]; 2]; 2];
        cells[0][1] = vec![QlsEntry::new(0.5, 1, 1)];
        assert!(matches!(WeightedQls::new(2, cells), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn parser_rejects_bad_tokens() {
        assert!(parse_digit_rows("11 22 / 21 3").is_err());
        assert!(parse_digit_rows("11 23 / 21 12").is_err());
        assert!(parse_digit_rows("11 22 / 21 12").is_ok());
    }
}
