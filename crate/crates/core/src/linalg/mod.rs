//! Dense exact matrices: determinants over the polynomial ring and echelon
//! forms over the rationals.

mod det;
mod divide;
mod echelon;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use det::{det, det_bareiss, det_minor_expansion, det_minor_expansion_with_cap, DetStrategy, MINOR_CAP};
pub use divide::{exact_divide, find_nonzero_witness};
pub use echelon::RatMatrix;

use crate::error::{AlgebraError, Result};
use crate::poly::{Poly, VarTable};
use crate::rational::Rational;

/// Row-major matrix of polynomials over one shared variable table.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    vars: Arc<VarTable>,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_rows(vars: &Arc<VarTable>, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(AlgebraError::Dimension(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for p in row {
                if !crate::poly::same_table(p.vars(), vars) {
                    return Err(AlgebraError::VarTableMismatch {
                        left: vars.names().join(","),
                        right: p.vars().names().join(","),
                    });
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix {
            vars: Arc::clone(vars),
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn zero(vars: &Arc<VarTable>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            vars: Arc::clone(vars),
            rows,
            cols,
            entries: vec![Poly::zero(vars); rows * cols],
        }
    }

    pub fn identity(vars: &Arc<VarTable>, n: usize) -> Self {
        let mut m = PolyMatrix::zero(vars, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(vars));
        }
        m
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    /// Panics on a table mismatch.
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(
            crate::poly::same_table(p.vars(), &self.vars),
            "entry over a foreign table"
        );
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn total_terms(&self) -> usize {
        self.entries.iter().map(Poly::len).sum()
    }

    /// Entrywise evaluation at a full assignment.
    pub fn evaluate(&self, assignment: &BTreeMap<String, Rational>) -> Result<RatMatrix> {
        let data = self
            .entries
            .iter()
            .map(|p| p.evaluate(assignment))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::new(self.rows, self.cols, data)
    }

    pub(crate) fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(AlgebraError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}
