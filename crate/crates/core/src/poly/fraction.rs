use std::ops::{Add, Mul, Neg, Sub};

use super::Poly;
use crate::error::{AlgebraError, Result};

/// Unreduced quotient of two polynomials. Equality is cross-multiplication;
/// no common factors are ever cancelled.
#[derive(Clone, Debug)]
pub struct PolyFraction {
    num: Poly,
    den: Poly,
}

impl PolyFraction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.check_same_table(&den)?;
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(PolyFraction { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.vars());
        PolyFraction { num: p, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// `a.num * b.den == b.num * a.den`.
pub fn frac_equal(a: &PolyFraction, b: &PolyFraction) -> bool {
    if a.num.check_same_table(&b.num).is_err() {
        return false;
    }
    &a.num * &b.den == &b.num * &a.den
}

impl PartialEq for PolyFraction {
    fn eq(&self, other: &Self) -> bool {
        frac_equal(self, other)
    }
}

impl Add for &PolyFraction {
    type Output = PolyFraction;
    fn add(self, rhs: &PolyFraction) -> PolyFraction {
        if self.den == rhs.den {
            return PolyFraction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        PolyFraction {
            num: &self.num * &rhs.den + &rhs.num * &self.den,
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub for &PolyFraction {
    type Output = PolyFraction;
    fn sub(self, rhs: &PolyFraction) -> PolyFraction {
        self + &(-rhs)
    }
}

impl Neg for &PolyFraction {
    type Output = PolyFraction;
    fn neg(self) -> PolyFraction {
        PolyFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &PolyFraction {
    type Output = PolyFraction;
    fn mul(self, rhs: &PolyFraction) -> PolyFraction {
        PolyFraction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}
