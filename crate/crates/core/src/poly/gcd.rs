//! Gcd over `Q[y][x]`: polynomials in a main variable `x` whose coefficients
//! involve at most one further variable. Primitive remainder sequences keep
//! everything polynomial; contents are univariate gcds in `y`.

use super::{univariate_gcd, DenseUni, Poly};
use crate::error::{AlgebraError, Result};
use crate::linalg::exact_divide;

fn other_variable(polys: &[&Poly], var: &str) -> Result<Option<String>> {
    let mut others: Vec<String> = polys
        .iter()
        .flat_map(|p| p.occurring_names())
        .filter(|n| n != var)
        .collect();
    others.sort();
    others.dedup();
    match others.len() {
        0 => Ok(None),
        1 => Ok(others.pop()),
        _ => Err(AlgebraError::PreconditionViolated(format!(
            "gcd in `{var}` supports one coefficient variable, found {}",
            others.join(", ")
        ))),
    }
}

/// Gcd of the coefficients in `var`; a polynomial in `y` alone, monic, or 1.
fn content_in(p: &Poly, var: &str, y: Option<&str>) -> Result<Poly> {
    let one = Poly::one(p.vars());
    let Some(y) = y else {
        return Ok(one);
    };
    let mut acc = Poly::zero(p.vars());
    for c in p.univariate_view(var)? {
        if c.is_zero() {
            continue;
        }
        acc = univariate_gcd(&acc, &c, y)?;
        if acc.is_constant() {
            return Ok(one);
        }
    }
    Ok(if acc.is_zero() { one } else { acc })
}

fn primitive_in(p: &Poly, var: &str, y: Option<&str>) -> Result<Poly> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let c = content_in(p, var, y)?;
    let q = if c.is_constant() {
        p.clone()
    } else {
        exact_divide(p, &c)?
    };
    Ok(q.primitive_part())
}

fn leading_in(p: &Poly, var: &str) -> Result<Poly> {
    Ok(p.univariate_view(var)?.pop().expect("view is never empty"))
}

/// `lc(b)^k * a mod b` for the smallest `k` that keeps the division
/// polynomial.
fn pseudo_remainder(a: &Poly, b: &Poly, var: &str) -> Result<Poly> {
    let db = b.degree_in(var)?;
    let lb = leading_in(b, var)?;
    let x = Poly::var(a.vars(), var)?;
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var)? >= db {
        let shift = r.degree_in(var)? - db;
        let lr = leading_in(&r, var)?;
        r = &(&lb * &r) - &(&(&lr * &x.pow(shift)) * b);
    }
    Ok(r)
}

/// Gcd of `p` and `q` in `Q[y][var]`, normalised to a primitive integer
/// polynomial.
pub fn gcd_in(p: &Poly, q: &Poly, var: &str) -> Result<Poly> {
    p.check_same_table(q)?;
    if p.is_zero() && q.is_zero() {
        return Err(AlgebraError::BothZero);
    }
    let y = other_variable(&[p, q], var)?;
    let y = y.as_deref();
    let content = match (p.is_zero(), q.is_zero()) {
        (true, _) => content_in(q, var, y)?,
        (_, true) => content_in(p, var, y)?,
        _ => match y {
            Some(y) => univariate_gcd(&content_in(p, var, y.into())?, &content_in(q, var, y.into())?, y)?,
            None => Poly::one(p.vars()),
        },
    };
    let mut a = primitive_in(p, var, y)?;
    let mut b = primitive_in(q, var, y)?;
    if a.degree_in(var)? < b.degree_in(var)? || a.is_zero() {
        std::mem::swap(&mut a, &mut b);
    }
    let g = loop {
        if b.is_zero() {
            break a;
        }
        if b.degree_in(var)? == 0 {
            break Poly::one(p.vars());
        }
        let r = pseudo_remainder(&a, &b, var)?;
        a = b;
        b = primitive_in(&r, var, y)?;
    };
    Ok((&content * &g).primitive_part())
}

/// `p` with repeated factors of positive degree in `var` reduced to
/// multiplicity one. Factors free of `var` are kept.
pub fn squarefree_part_in(p: &Poly, var: &str) -> Result<Poly> {
    let d = p.partial_derivative(var)?;
    if d.is_zero() {
        return Ok(p.clone());
    }
    let y = other_variable(&[p], var)?;
    if let Some(y) = &y {
        if coprime_at_sample(p, &d, var, y)? {
            return Ok(p.clone());
        }
    }
    let g = primitive_in(&gcd_in(p, &d, var)?, var, y.as_deref())?;
    if g.degree_in(var)? == 0 {
        return Ok(p.clone());
    }
    exact_divide(p, &g)
}

/// Specializes `y` at the first small integer that keeps the leading
/// coefficient of `p` nonzero. A trivial specialized gcd forces a trivial
/// generic one; a nontrivial result proves nothing.
fn coprime_at_sample(p: &Poly, d: &Poly, var: &str, y: &str) -> Result<bool> {
    let lc = leading_in(p, var)?;
    for k in 1..=16 {
        let at = Poly::from_int(p.vars(), k);
        if lc.substitute(y, &at)?.is_zero() {
            continue;
        }
        let a = DenseUni::from_poly(&p.substitute(y, &at)?, var)?;
        let b = DenseUni::from_poly(&d.substitute(y, &at)?, var)?;
        return Ok(a.gcd(&b).degree() == Some(0));
    }
    Ok(false)
}
