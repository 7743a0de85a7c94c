use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use super::{Monomial, Poly};
use crate::error::{AlgebraError, Result};
use crate::rational::Rational;

impl Poly {
    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_table(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same_table(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same_table(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some((ma, _)), Some((mb, _))) => ma.cmp(mb),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => {
                    let (m, c) = b.next().unwrap();
                    let c = if negate_other { -c } else { c.clone() };
                    out.push((m.clone(), c));
                }
                Ordering::Equal => {
                    let (m, ca) = a.next().unwrap();
                    let (_, cb) = b.next().unwrap();
                    let c = if negate_other { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((m.clone(), c));
                    }
                }
            }
        }
        Poly::from_sorted_unchecked(&self.vars, out)
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.vars);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            // Monomial times polynomial preserves the term order.
            let (single, many) = if self.terms.len() == 1 {
                (&self.terms[0], other)
            } else {
                (&other.terms[0], self)
            };
            let terms = many
                .terms
                .iter()
                .map(|(m, c)| (m.mul(&single.0), c * &single.1))
                .collect();
            return Poly::from_sorted_unchecked(&self.vars, terms);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|c| *c += &prod).or_insert(prod);
            }
        }
        Poly::from_map(&self.vars, acc)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        if c.is_one() {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        Poly::from_sorted_unchecked(&self.vars, terms)
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut result = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    pub fn partial_derivative(&self, name: &str) -> Result<Poly> {
        Ok(self.derivative_index(self.vars.index_of(name)?))
    }

    pub fn derivative_index(&self, idx: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(idx) > 0)
            .map(|(m, c)| {
                let e = m.exp(idx);
                (m.with_exp(idx, e - 1), c * &Rational::from(e))
            })
            .collect();
        Poly::from_unsorted(&self.vars, terms)
    }

    /// Coefficients `c_0..c_d` with `self = sum c_i * v^i`; each `c_i` is free
    /// of `v`. The zero polynomial yields `[0]`.
    pub fn univariate_view(&self, name: &str) -> Result<Vec<Poly>> {
        Ok(self.univariate_view_index(self.vars.index_of(name)?))
    }

    pub fn univariate_view_index(&self, idx: usize) -> Vec<Poly> {
        let d = self.degree_in_index(idx) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(idx) as usize;
            buckets[e].push((m.with_exp(idx, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|terms| Poly::from_unsorted(&self.vars, terms))
            .collect()
    }

    /// Inverse of [`Poly::univariate_view`].
    pub fn from_univariate(coeffs: &[Poly], name: &str) -> Result<Poly> {
        let first = coeffs
            .first()
            .ok_or_else(|| AlgebraError::PreconditionViolated("empty coefficient list".into()))?;
        let vars = first.vars.clone();
        let idx = vars.index_of(name)?;
        let x = Poly::var_index(&vars, idx);
        let mut acc = Poly::zero(&vars);
        for c in coeffs.iter().rev() {
            c.check_same_table(first)?;
            if c.degree_in_index(idx) > 0 {
                return Err(AlgebraError::PreconditionViolated(format!(
                    "coefficient depends on `{name}`"
                )));
            }
            acc = acc.mul_unchecked(&x).merge(c, false);
        }
        Ok(acc)
    }

    /// Replaces every occurrence of `name` by `q` and expands.
    pub fn substitute(&self, name: &str, q: &Poly) -> Result<Poly> {
        let idx = self.vars.index_of(name)?;
        self.check_same_table(q)?;
        Ok(self.substitute_index(idx, q))
    }

    pub(crate) fn substitute_index(&self, idx: usize, q: &Poly) -> Poly {
        let coeffs = self.univariate_view_index(idx);
        let mut acc = Poly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = acc.mul_unchecked(q).merge(c, false);
        }
        acc
    }

    /// Substitutes `name = num / den` and clears the denominator:
    /// returns `sum c_i * num^i * den^(d - i)` together with `d`, the degree of
    /// `self` in `name`, so that the result equals `den^d * self(num/den)`.
    pub fn substitute_fraction(&self, name: &str, num: &Poly, den: &Poly) -> Result<(Poly, u32)> {
        let idx = self.vars.index_of(name)?;
        self.check_same_table(num)?;
        self.check_same_table(den)?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let coeffs = self.univariate_view_index(idx);
        let d = coeffs.len() - 1;
        let mut num_pows = vec![Poly::one(&self.vars)];
        let mut den_pows = vec![Poly::one(&self.vars)];
        for i in 1..=d {
            num_pows.push(num_pows[i - 1].mul_unchecked(num));
            den_pows.push(den_pows[i - 1].mul_unchecked(den));
        }
        let mut acc = Poly::zero(&self.vars);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = c.mul_unchecked(&num_pows[i]).mul_unchecked(&den_pows[d - i]);
            acc = acc.merge(&term, false);
        }
        Ok((acc, d as u32))
    }

    /// Exact value under a full assignment of the occurring variables.
    pub fn evaluate(&self, assignment: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.vars.len()];
        for (i, name) in self.vars.names().iter().enumerate() {
            values[i] = assignment.get(name);
        }
        for i in self.occurring() {
            if values[i].is_none() {
                return Err(AlgebraError::MissingAssignment(self.vars.name(i).to_string()));
            }
        }
        Ok(self.evaluate_slice(&values))
    }

    fn evaluate_slice(&self, values: &[Option<&Rational>]) -> Rational {
        let mut powers: Vec<Vec<Rational>> = vec![vec![Rational::one()]; self.vars.len()];
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values[i].expect("checked above");
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * v;
                    cache.push(next);
                }
                t *= &cache[e as usize];
            }
            total += &t;
        }
        total
    }

    /// Substitutes constants for the named variables, keeping the table.
    pub fn specialize(&self, assignment: &BTreeMap<String, Rational>) -> Result<Poly> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.vars.len()];
        for (name, v) in assignment {
            values[self.vars.index_of(name)?] = Some(v);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exps().to_vec();
            for (i, e) in exps.iter_mut().enumerate() {
                if *e > 0 {
                    if let Some(v) = values[i] {
                        coeff *= &v.pow(*e);
                        *e = 0;
                    }
                }
            }
            *acc.entry(Monomial::from_exps(exps)).or_default() += &coeff;
        }
        Ok(Poly::from_map(&self.vars, acc))
    }
}

impl Add for &Poly {
    type Output = Poly;
    /// Panics when the variable tables differ; use [`Poly::checked_add`] to
    /// get an error instead.
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly::from_sorted_unchecked(&self.vars, terms)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_with_table;
    use crate::poly::VarTable;
    use crate::rational::q;
    use std::sync::Arc;

    fn table() -> Arc<VarTable> {
        VarTable::new(["x", "y", "H", "mu"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_with_table(s, &table()).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(p("x + 1") + p("x - 1"), p("2*x"));
        assert_eq!(p("x^2 + y") + Poly::zero(&table()), p("x^2 + y"));
        assert_eq!(p("2/3*x^2") + p("1/3*x^2"), p("x^2"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("x + 1") * p("x - 1"), p("x^2 - 1"));
        assert_eq!(p("x*y - 3") * Poly::one(&table()), p("x*y - 3"));
        let s = p("x + y");
        assert_eq!(&s * &s, s.pow(2));
        assert_eq!(s.pow(0), Poly::one(&table()));
    }

    #[test]
    fn table_mismatch_is_an_error() {
        let other = VarTable::new(["x"]).unwrap();
        let a = p("x");
        let b = Poly::var(&other, "x").unwrap();
        assert!(matches!(a.checked_add(&b), Err(AlgebraError::VarTableMismatch { .. })));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^2*y").partial_derivative("x").unwrap(), p("2*x*y"));
        assert_eq!(p("7").partial_derivative("x").unwrap(), Poly::zero(&table()));
        assert!(matches!(
            p("x").partial_derivative("z"),
            Err(AlgebraError::UnknownVariable(_))
        ));
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(
            p("x^2 + x").substitute("x", &Poly::zero(&table())).unwrap(),
            Poly::zero(&table())
        );
        assert_eq!(p("x + y").substitute("x", &p("y")).unwrap(), p("2*y"));
        assert_eq!(
            p("x^3*H + x").substitute("x", &p("y + 1")).unwrap(),
            p("(y + 1)^3*H + y + 1")
        );
    }

    #[test]
    fn substitute_fraction_clears_denominator() {
        // x^2 + x at x = y/2 times 2^2 = y^2 + 2y
        let (r, d) = p("x^2 + x").substitute_fraction("x", &p("y"), &p("2")).unwrap();
        assert_eq!(d, 2);
        assert_eq!(r, p("y^2 + 2*y"));
    }

    #[test]
    fn evaluate_examples() {
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), q(1, 1));
        assert_eq!(p("x^2 - 1").evaluate(&a).unwrap(), Rational::zero());
        assert_eq!(Poly::zero(&table()).evaluate(&a).unwrap(), Rational::zero());
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), q(1, 2));
        b.insert("y".to_string(), q(1, 2));
        assert_eq!(p("(x + y)^3").evaluate(&b).unwrap(), Rational::one());
        assert!(matches!(
            p("x + H").evaluate(&a),
            Err(AlgebraError::MissingAssignment(v)) if v == "H"
        ));
    }

    #[test]
    fn univariate_view_examples() {
        let view = p("x*H^2 + x^2*mu").univariate_view("x").unwrap();
        assert_eq!(view, vec![Poly::zero(&table()), p("H^2"), p("mu")]);
        assert_eq!(p("3/4").univariate_view("x").unwrap(), vec![p("3/4")]);
        let f = p("x^3*y - 2*x*H + mu");
        let back = Poly::from_univariate(&f.univariate_view("x").unwrap(), "x").unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn specialize_keeps_table() {
        let mut a = BTreeMap::new();
        a.insert("y".to_string(), q(2, 1));
        let s = p("x*y^2 + y").specialize(&a).unwrap();
        assert_eq!(s, p("4*x + 2"));
    }
}
