use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AlgebraError, Result};
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;

/// Quotient `p / q`, required to be exact.
///
/// Leading-term division in graded-lex order. For a single divisor the
/// remainder is zero exactly when `q` divides `p`, so the first leading term
/// of the running remainder that `lt(q)` fails to divide proves inexactness.
/// The error carries a rational point where `p - q * partial_quotient` is
/// nonzero.
pub fn exact_divide(p: &Poly, q: &Poly) -> Result<Poly> {
    p.check_same_table(q)?;
    if q.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    if let Some(c) = q.as_constant() {
        return Ok(p.scale(&c.recip().expect("nonzero constant")));
    }
    let vars = p.vars();
    let (lead_m, lead_c) = q.leading_term().expect("nonzero divisor").clone();
    let lead_inv = lead_c.recip().expect("nonzero leading coefficient");
    let tail = &q.terms()[1..];

    let mut rem: BTreeMap<Monomial, Rational> = p.terms().iter().cloned().collect();
    let mut quotient: Vec<(Monomial, Rational)> = Vec::new();
    while let Some((m, c)) = rem.pop_last() {
        let Some(qm) = m.div(&lead_m) else {
            let candidate = Poly::from_unsorted(vars, quotient);
            return Err(inexact(p, q, &candidate));
        };
        let qc = &c * &lead_inv;
        for (tm, tc) in tail {
            let key = tm.mul(&qm);
            let delta = &qc * tc;
            match rem.get_mut(&key) {
                Some(existing) => {
                    *existing -= &delta;
                    if existing.is_zero() {
                        rem.remove(&key);
                    }
                }
                None => {
                    rem.insert(key, -delta);
                }
            }
        }
        quotient.push((qm, qc));
    }
    // Leading monomials of successive remainders strictly decrease.
    Ok(Poly::from_sorted_unchecked(vars, quotient))
}

fn inexact(p: &Poly, q: &Poly, candidate: &Poly) -> AlgebraError {
    let residual = p - &(q * candidate);
    let (witness, value) = find_nonzero_witness(&residual).unwrap_or_default();
    AlgebraError::DivisionNotExact {
        remainder_terms: residual.len(),
        witness,
        value,
    }
}

/// A point (over all table variables) where `p` is nonzero, found by seeded
/// sampling of small rationals. `None` only for the zero polynomial.
pub fn find_nonzero_witness(p: &Poly) -> Option<(BTreeMap<String, Rational>, Rational)> {
    if p.is_zero() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0u32.. {
        let span = 3 + i64::from(trial);
        let point: BTreeMap<String, Rational> = p
            .vars()
            .names()
            .iter()
            .map(|n| {
                let num = rng.random_range(-span..=span);
                let den = rng.random_range(1..=3);
                (n.clone(), Rational::new(num, den))
            })
            .collect();
        let value = p.evaluate(&point).expect("full assignment");
        if !value.is_zero() {
            return Some((point, value));
        }
    }
    unreachable!()
}
