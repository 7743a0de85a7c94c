//! Dense univariate arithmetic over the rationals.
//!
//! Used as the independent side of resultant checks: Euclidean gcd and a
//! remainder-sequence resultant that never touches a Sylvester matrix.

use super::Poly;
use crate::error::{AlgebraError, Result};
use crate::rational::Rational;

/// Coefficients in ascending power order, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseUni {
    coeffs: Vec<Rational>,
}

impl DenseUni {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        DenseUni { coeffs }
    }

    /// Requires `p` to involve no variable other than `var`.
    pub fn from_poly(p: &Poly, var: &str) -> Result<Self> {
        let idx = p.vars().index_of(var)?;
        if let Some(other) = p.occurring().into_iter().find(|&i| i != idx) {
            return Err(AlgebraError::NotUnivariate {
                var: var.to_string(),
                other: p.vars().name(other).to_string(),
            });
        }
        let mut coeffs = vec![Rational::zero(); p.degree_in_index(idx) as usize + 1];
        for (m, c) in p.terms() {
            coeffs[m.exp(idx) as usize] = c.clone();
        }
        Ok(DenseUni::new(coeffs))
    }

    pub fn to_poly(&self, template: &Poly, var: &str) -> Result<Poly> {
        let vars = template.vars();
        let idx = vars.index_of(var)?;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![0; vars.len()];
                e[idx] = i as u32;
                (e, c.clone())
            })
            .collect::<Vec<_>>();
        Poly::from_terms(vars, terms)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> DenseUni {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.recip().expect("nonzero leading coefficient");
                DenseUni::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn rem(&self, divisor: &DenseUni) -> DenseUni {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = divisor.leading().unwrap().recip().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let factor = r.last().unwrap() * &inv;
            if !factor.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    r[shift + i] -= &(&factor * c);
                }
            }
            r.pop();
            while r.last().is_some_and(Rational::is_zero) {
                r.pop();
            }
        }
        DenseUni::new(r)
    }

    pub fn gcd(&self, other: &DenseUni) -> DenseUni {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant by the Euclidean remainder sequence.
    ///
    /// `Res(f, g) = (-1)^(mn) * lc(g)^(m - deg r) * Res(g, r)` with
    /// `r = f mod g`; a zero polynomial against anything of positive degree
    /// gives zero, and `Res(f, c) = c^m` for a constant `c`.
    pub fn resultant(&self, other: &DenseUni) -> Rational {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Rational::zero();
        };
        if n == 0 {
            return other.coeffs[0].pow(m as u32);
        }
        if m == 0 {
            return self.coeffs[0].pow(n as u32);
        }
        let r = self.rem(other);
        let Some(dr) = r.degree() else {
            return Rational::zero();
        };
        let sign = if (m * n) % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        sign * other.leading().unwrap().pow((m - dr) as u32) * other.resultant(&r)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }
}

/// Monic gcd of two polynomials that involve only `var`.
pub fn univariate_gcd(p: &Poly, q: &Poly, var: &str) -> Result<Poly> {
    p.check_same_table(q)?;
    let a = DenseUni::from_poly(p, var)?;
    let b = DenseUni::from_poly(q, var)?;
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::BothZero);
    }
    a.gcd(&b).to_poly(p, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_with_table;
    use crate::poly::VarTable;
    use crate::rational::q;

    fn p(s: &str) -> Poly {
        parse_with_table(s, &VarTable::new(["x", "y"]).unwrap()).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(univariate_gcd(&p("x^2 - 1"), &p("x - 1"), "x").unwrap(), p("x - 1"));
        assert_eq!(univariate_gcd(&p("x^2 + 1"), &p("x - 1"), "x").unwrap(), p("1"));
        assert_eq!(univariate_gcd(&p("3*x + 6"), &p("0"), "x").unwrap(), p("x + 2"));
        assert_eq!(univariate_gcd(&p("0"), &p("0"), "x"), Err(AlgebraError::BothZero));
        assert!(matches!(
            univariate_gcd(&p("x*y"), &p("x"), "x"),
            Err(AlgebraError::NotUnivariate { .. })
        ));
    }

    #[test]
    fn euclid_resultant_small_cases() {
        let f = DenseUni::from_poly(&p("x - 1"), "x").unwrap();
        let g = DenseUni::from_poly(&p("x + 1"), "x").unwrap();
        assert_eq!(f.resultant(&g), q(2, 1));
        let f = DenseUni::from_poly(&p("x^2 + 1"), "x").unwrap();
        let g = DenseUni::from_poly(&p("x - 1"), "x").unwrap();
        assert_eq!(f.resultant(&g), q(2, 1));
        let f = DenseUni::from_poly(&p("x^2 - 1"), "x").unwrap();
        let g = DenseUni::from_poly(&p("x - 1"), "x").unwrap();
        assert_eq!(f.resultant(&g), Rational::zero());
    }
}
