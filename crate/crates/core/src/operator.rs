//! Finite truncations of operators between weighted mode bases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Weighting of a mode basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisFamily {
    /// `u_n = e^{inθ}/√|n|`, `n ≠ 0`.
    Circle,
    /// `p_n = z^n/√n`, `n ≥ 1`.
    Plus,
    /// `q_n = z^{-n}/√n`, `n ≥ 1`.
    Minus,
    /// `{1} ∪ {I_F q_n}`: constants first, then the Faber-type basis of the exterior domain.
    Exterior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    pub family: BasisFamily,
    pub modes: Vec<i64>,
}

impl ModeBasis {
    pub fn new(family: BasisFamily, modes: Vec<i64>) -> Self {
        Self { family, modes }
    }

    pub fn plus(n: usize) -> Self {
        Self::new(BasisFamily::Plus, (1..=n as i64).collect())
    }

    pub fn minus(n: usize) -> Self {
        Self::new(BasisFamily::Minus, (1..=n as i64).collect())
    }

    /// Circle basis ordered as the exterior modes `-1..=-N` followed by `1..=N`.
    pub fn circle(n: usize) -> Self {
        let n = n as i64;
        Self::new(BasisFamily::Circle, (1..=n).map(|k| -k).chain(1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn index_of(&self, mode: i64) -> Option<usize> {
        self.modes.iter().position(|&m| m == mode)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: CMat,
    pub row_basis: ModeBasis,
    pub col_basis: ModeBasis,
    pub truncation_order: usize,
}

impl OperatorMatrix {
    pub fn new(entries: CMat, row_basis: ModeBasis, col_basis: ModeBasis, truncation_order: usize) -> Result<Self> {
        if entries.nrows() != row_basis.len() || entries.ncols() != col_basis.len() {
            return Err(Error::input(format!(
                "matrix is {}x{} but bases have {} rows and {} columns",
                entries.nrows(),
                entries.ncols(),
                row_basis.len(),
                col_basis.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::input("non-finite operator entry"));
        }
        Ok(Self { entries, row_basis, col_basis, truncation_order })
    }

    pub fn get(&self, row_mode: i64, col_mode: i64) -> Option<Complex64> {
        Some(self.entries[(self.row_basis.index_of(row_mode)?, self.col_basis.index_of(col_mode)?)])
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn transpose_equal(&self, tol: f64) -> bool {
        (&self.entries - self.entries.transpose()).iter().all(|x| x.norm() <= tol)
    }

    /// Rows `(row, col, re, im)` for CSV export.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let x = self.entries[(i, j)];
                out.push_str(&format!(
                    "{},{},{:e},{:e}\n",
                    self.row_basis.modes[i], self.col_basis.modes[j], x.re, x.im
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Vec<(f64, f64)>> = (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| (self.entries[(i, j)].re, self.entries[(i, j)].im)).collect())
            .collect();
        serde_json::json!({
            "N": self.truncation_order,
            "row_basis": self.row_basis,
            "col_basis": self.col_basis,
            "entries": entries,
        })
    }
}

/// Frobenius norm of the entries.
pub fn hs_norm(m: &OperatorMatrix) -> f64 {
    linalg::frobenius(&m.entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hs_norm_examples() {
        let z = OperatorMatrix::new(CMat::zeros(3, 3), ModeBasis::plus(3), ModeBasis::minus(3), 3).unwrap();
        assert_eq!(hs_norm(&z), 0.0);
        let id = OperatorMatrix::new(CMat::identity(8, 8), ModeBasis::plus(8), ModeBasis::plus(8), 8).unwrap();
        assert!((hs_norm(&id) - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(OperatorMatrix::new(CMat::zeros(2, 3), ModeBasis::plus(3), ModeBasis::minus(3), 3).is_err());
    }

    #[test]
    fn csv_has_header_and_all_entries() {
        let id = OperatorMatrix::new(CMat::identity(2, 2), ModeBasis::plus(2), ModeBasis::plus(2), 2).unwrap();
        let csv = id.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("row,col,re,im"));
    }
}
