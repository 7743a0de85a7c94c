//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a list of `(Monomial, Rational)` pairs over a shared
//! [`VarTable`], kept sorted in descending graded-lexicographic order with no
//! zero coefficients. That canonical layout makes equality structural and
//! printing deterministic. Operations between polynomials over different
//! tables are refused; nothing is ever silently re-indexed.

mod fraction;
mod gcd;
mod ops;
mod univariate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::rational::Rational;

pub use fraction::{frac_equal, PolyFraction};
pub use gcd::{gcd_in, squarefree_part_in};
pub use univariate::{univariate_gcd, DenseUni};

/// Ordered, immutable list of distinct variable names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<I, S>(names: I) -> Result<Arc<VarTable>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(AlgebraError::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VarTable { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }
}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(" "))
    }
}

/// Exponent vector. Field order makes the derived `Ord` graded-lexicographic:
/// total degree first, then exponents compared in table order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: Box<[u32]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            deg: 0,
            exps: vec![0; nvars].into_boxed_slice(),
        }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        let deg = exps.iter().sum();
        Monomial {
            deg,
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn var(nvars: usize, idx: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = exp;
        Monomial::from_exps(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.deg
    }

    pub fn exp(&self, idx: usize) -> u32 {
        self.exps[idx]
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Box<[u32]> = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    /// `self / other` when every exponent of `other` fits, else `None`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.deg > self.deg {
            return None;
        }
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial {
            deg: self.deg - other.deg,
            exps: exps.into_boxed_slice(),
        })
    }

    fn with_exp(&self, idx: usize, exp: u32) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[idx] = exp;
        Monomial::from_exps(exps)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

#[derive(Clone)]
pub struct Poly {
    vars: Arc<VarTable>,
    /// Descending graded-lex order, no zero coefficients.
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Poly {}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Poly {
    pub fn zero(vars: &Arc<VarTable>) -> Poly {
        Poly {
            vars: Arc::clone(vars),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rational) -> Poly {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.push((Monomial::one(vars.len()), c));
        }
        p
    }

    pub fn one(vars: &Arc<VarTable>) -> Poly {
        Poly::constant(vars, Rational::one())
    }

    pub fn from_int(vars: &Arc<VarTable>, c: i64) -> Poly {
        Poly::constant(vars, Rational::from(c))
    }

    pub fn var(vars: &Arc<VarTable>, name: &str) -> Result<Poly> {
        let idx = vars.index_of(name)?;
        Ok(Poly::var_index(vars, idx))
    }

    pub fn var_index(vars: &Arc<VarTable>, idx: usize) -> Poly {
        Poly {
            vars: Arc::clone(vars),
            terms: vec![(Monomial::var(vars.len(), idx, 1), Rational::one())],
        }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated, possibly
    /// zero) terms.
    pub fn from_terms<I>(vars: &Arc<VarTable>, terms: I) -> Result<Poly>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(AlgebraError::PreconditionViolated(format!(
                    "exponent vector of length {} over a table of {} variables",
                    exps.len(),
                    vars.len()
                )));
            }
            *acc.entry(Monomial::from_exps(exps)).or_default() += &c;
        }
        Ok(Poly::from_map(vars, acc))
    }

    pub(crate) fn from_map(vars: &Arc<VarTable>, map: HashMap<Monomial, Rational>) -> Poly {
        let mut terms: Vec<(Monomial, Rational)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly {
            vars: Arc::clone(vars),
            terms,
        }
    }

    pub(crate) fn from_sorted_unchecked(vars: &Arc<VarTable>, terms: Vec<(Monomial, Rational)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly {
            vars: Arc::clone(vars),
            terms,
        }
    }

    pub(crate) fn from_unsorted(vars: &Arc<VarTable>, mut terms: Vec<(Monomial, Rational)>) -> Poly {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Poly {
            vars: Arc::clone(vars),
            terms: merged,
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`Poly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.total_degree())
    }

    pub fn degree_in_index(&self, idx: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(idx)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> Result<u32> {
        Ok(self.degree_in_index(self.vars.index_of(name)?))
    }

    /// Indices of variables that occur with positive exponent.
    pub fn occurring(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exp(i) > 0))
            .collect()
    }

    pub fn occurring_names(&self) -> Vec<String> {
        self.occurring()
            .into_iter()
            .map(|i| self.vars.name(i).to_string())
            .collect()
    }

    /// Degree in each occurring variable, keyed by name.
    pub fn degree_map(&self) -> BTreeMap<String, u32> {
        self.occurring()
            .into_iter()
            .map(|i| (self.vars.name(i).to_string(), self.degree_in_index(i)))
            .collect()
    }

    pub fn check_same_table(&self, other: &Poly) -> Result<()> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(AlgebraError::VarTableMismatch {
                left: self.vars.names.join(" "),
                right: other.vars.names.join(" "),
            })
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        let key = Monomial::from_exps(exps.to_vec());
        self.terms
            .binary_search_by(|(m, _)| key.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        use num_traits::{One, Zero};
        let mut g = num_bigint::BigInt::zero();
        let mut l = num_bigint::BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            Rational::zero()
        } else {
            Rational::new(g, l)
        }
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        self.scale(&c.recip().expect("nonzero content"))
    }

    /// Size measure used for determinant-strategy heuristics and reports.
    pub fn coefficient_bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({:?}: {})", self.vars, crate::parse::format(self))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn var_table_rejects_duplicates() {
        assert!(matches!(
            VarTable::new(["x", "y", "x"]),
            Err(AlgebraError::DuplicateVariable(v)) if v == "x"
        ));
    }

    #[test]
    fn grlex_order() {
        // x > y in table order; x^2 > x*y > y^2 > x > y > 1
        let order = [
            Monomial::from_exps(vec![2, 0]),
            Monomial::from_exps(vec![1, 1]),
            Monomial::from_exps(vec![0, 2]),
            Monomial::from_exps(vec![1, 0]),
            Monomial::from_exps(vec![0, 1]),
            Monomial::from_exps(vec![0, 0]),
        ];
        for w in order.windows(2) {
            assert!(w[0] > w[1], "{:?} should exceed {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn from_terms_is_canonical() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let a = Poly::from_terms(
            &t,
            vec![(vec![0, 1], q(1, 1)), (vec![1, 0], q(2, 1)), (vec![0, 1], q(-1, 1))],
        )
        .unwrap();
        let b = Poly::from_terms(&t, vec![(vec![1, 0], q(2, 1))]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn zero_equal_over_same_table_only() {
        let t = VarTable::new(["x"]).unwrap();
        let t2 = VarTable::new(["x"]).unwrap();
        let u = VarTable::new(["y"]).unwrap();
        assert_eq!(Poly::zero(&t), Poly::zero(&t2));
        assert_ne!(Poly::zero(&t), Poly::zero(&u));
    }

    #[test]
    fn content_and_primitive() {
        let t = VarTable::new(["x"]).unwrap();
        let p = Poly::from_terms(&t, vec![(vec![1], q(-4, 3)), (vec![0], q(2, 1))]).unwrap();
        assert_eq!(p.content(), q(2, 3));
        let pp = p.primitive_part();
        assert_eq!(pp.terms()[0].1, q(2, 1));
        assert_eq!(pp.terms()[1].1, q(-3, 1));
    }
}
