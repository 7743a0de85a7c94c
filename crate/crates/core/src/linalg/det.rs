use std::collections::HashMap;

use rayon::prelude::*;

use super::{exact_divide, PolyMatrix};
use crate::error::{AlgebraError, Result};
use crate::poly::Poly;

/// Largest size accepted by [`det_minor_expansion`].
pub const MINOR_CAP: usize = 12;

/// Total entry terms above which `Auto` prefers Bareiss.
const AUTO_TERM_THRESHOLD: usize = 600;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DetStrategy {
    #[default]
    Auto,
    Minor,
    Bareiss,
}

impl DetStrategy {
    pub fn resolve(self, m: &PolyMatrix) -> DetStrategy {
        match self {
            DetStrategy::Auto if m.rows() > MINOR_CAP || m.total_terms() > AUTO_TERM_THRESHOLD => DetStrategy::Bareiss,
            DetStrategy::Auto => DetStrategy::Minor,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DetStrategy::Auto => "auto",
            DetStrategy::Minor => "minor",
            DetStrategy::Bareiss => "bareiss",
        }
    }
}

impl std::str::FromStr for DetStrategy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(DetStrategy::Auto),
            "minor" => Ok(DetStrategy::Minor),
            "bareiss" => Ok(DetStrategy::Bareiss),
            other => Err(format!("unknown determinant strategy `{other}`")),
        }
    }
}

pub fn det(m: &PolyMatrix, strategy: DetStrategy) -> Result<Poly> {
    match strategy.resolve(m) {
        DetStrategy::Bareiss => det_bareiss(m),
        _ => det_minor_expansion(m),
    }
}

pub fn det_minor_expansion(m: &PolyMatrix) -> Result<Poly> {
    det_minor_expansion_with_cap(m, MINOR_CAP)
}

/// Laplace expansion row by row, memoizing every minor on the leading rows by
/// its column subset. Level `k` stores the determinants of rows `0..k`
/// restricted to each `k`-subset of columns, so each minor is computed once.
pub fn det_minor_expansion_with_cap(m: &PolyMatrix, cap: usize) -> Result<Poly> {
    m.check_square()?;
    let n = m.rows();
    if n > cap {
        return Err(AlgebraError::SizeOverCap { size: n, cap });
    }
    let vars = m.vars();
    if n == 0 {
        return Ok(Poly::one(vars));
    }
    let mut level: HashMap<u32, Poly> = HashMap::from([(0u32, Poly::one(vars))]);
    for k in 0..n {
        let subsets = subsets_of_size(n, k + 1);
        let computed: Vec<(u32, Poly)> = subsets
            .into_par_iter()
            .map(|mask| {
                let mut acc = Poly::zero(vars);
                // Columns of `mask` in increasing order; position p carries sign (-1)^(k+p).
                let mut pos = 0usize;
                for j in 0..n {
                    if mask & (1 << j) == 0 {
                        continue;
                    }
                    let entry = m.get(k, j);
                    if !entry.is_zero() {
                        if let Some(minor) = level.get(&(mask & !(1 << j))) {
                            let term = entry * minor;
                            acc = if (k + pos).is_multiple_of(2) {
                                &acc + &term
                            } else {
                                &acc - &term
                            };
                        }
                    }
                    pos += 1;
                }
                (mask, acc)
            })
            .filter(|(_, p)| !p.is_zero())
            .collect();
        level = computed.into_iter().collect();
        if level.is_empty() {
            return Ok(Poly::zero(vars));
        }
    }
    Ok(level.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Poly::zero(vars)))
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

/// Fraction-free elimination. Each step divides by the previous pivot, which
/// is exact by Sylvester's identity; a failed division is an internal error.
///
/// Pivot: among nonzero candidates in the column, the one with fewest terms,
/// ties to the lowest row.
pub fn det_bareiss(m: &PolyMatrix) -> Result<Poly> {
    m.check_square()?;
    let n = m.rows();
    let vars = m.vars().clone();
    if n == 0 {
        return Ok(Poly::one(&vars));
    }
    let mut a: Vec<Vec<Poly>> = m.to_rows();
    let mut prev = Poly::one(&vars);
    let mut negate = false;
    for k in 0..n - 1 {
        let pivot_row = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| (a[i][k].len(), i));
        let Some(p) = pivot_row else {
            return Ok(Poly::zero(&vars));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_line = &head[k];
        let pivot = &pivot_line[k];
        tail.par_iter_mut().try_for_each(|row| -> Result<()> {
            let factor = row[k].clone();
            for j in k + 1..n {
                let mut num = &row[j] * pivot;
                if !factor.is_zero() && !pivot_line[j].is_zero() {
                    num = &num - &(&factor * &pivot_line[j]);
                }
                row[j] = exact_divide(&num, &prev)
                    .map_err(|e| AlgebraError::Internal(format!("Bareiss step {k} division failed: {e}")))?;
            }
            row[k] = Poly::zero(&vars);
            Ok(())
        })?;
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}
