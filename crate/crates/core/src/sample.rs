//! Seeded random generators shared by the property suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{PolyMatrix, RatMatrix};
use crate::poly::{Poly, VarTable};
use crate::rational::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with numerator in `-span..=span` and denominator in `1..=den_max`.
pub fn rational<R: Rng>(rng: &mut R, span: i64, den_max: i64) -> Rational {
    Rational::new(rng.random_range(-span..=span), rng.random_range(1..=den_max))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, span: i64, den_max: i64) -> Rational {
    loop {
        let r = rational(rng, span, den_max);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Sparse polynomial with up to `max_terms` terms of total degree at most
/// `max_deg`.
pub fn poly<R: Rng>(rng: &mut R, vars: &Arc<VarTable>, max_terms: usize, max_deg: u32) -> Poly {
    let nterms = rng.random_range(0..=max_terms);
    let terms = (0..nterms).map(|_| {
        let mut budget = rng.random_range(0..=max_deg);
        let mut exps = vec![0u32; vars.len()];
        while budget > 0 && !exps.is_empty() {
            let i = rng.random_range(0..exps.len());
            exps[i] += 1;
            budget -= 1;
        }
        (exps, rational(rng, 9, 4))
    });
    Poly::from_terms(vars, terms.collect::<Vec<_>>()).expect("matching table")
}

/// Dense polynomial in `var` of exact degree `deg` with small integer coefficients.
pub fn univariate<R: Rng>(rng: &mut R, vars: &Arc<VarTable>, var: &str, deg: u32) -> Poly {
    let idx = vars.index_of(var).expect("declared variable");
    let terms = (0..=deg).map(|d| {
        let mut exps = vec![0u32; vars.len()];
        exps[idx] = d;
        let c = if d == deg {
            nonzero_rational(rng, 6, 1)
        } else {
            rational(rng, 6, 1)
        };
        (exps, c)
    });
    Poly::from_terms(vars, terms.collect::<Vec<_>>()).expect("matching table")
}

pub fn assignment<R: Rng>(rng: &mut R, vars: &Arc<VarTable>) -> BTreeMap<String, Rational> {
    vars.names().iter().map(|n| (n.clone(), rational(rng, 12, 5))).collect()
}

pub fn poly_matrix<R: Rng>(rng: &mut R, vars: &Arc<VarTable>, n: usize, max_terms: usize, max_deg: u32) -> PolyMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| poly(rng, vars, max_terms, max_deg)).collect())
        .collect();
    PolyMatrix::from_rows(vars, rows).expect("square over one table")
}

/// Integer matrix with entries in `-span..=span`; about a third of entries zero.
pub fn rat_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, span: i64) -> RatMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            if rng.random_range(0..3) == 0 {
                Rational::zero()
            } else {
                Rational::from(rng.random_range(-span..=span))
            }
        })
        .collect();
    RatMatrix::new(rows, cols, data).expect("consistent size")
}
