//! Sylvester matrices and resultants, with a specialization-and-gcd oracle.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::linalg::{det, DetStrategy, PolyMatrix};
use crate::poly::{univariate_gcd, DenseUni, Poly};
use crate::rational::Rational;
use crate::sample;

/// Coefficients of `f` and `g` in `v`, leading first.
#[derive(Clone, Debug)]
pub struct SylvesterLayout {
    pub f_coeffs: Vec<Poly>,
    pub g_coeffs: Vec<Poly>,
    pub m: usize,
    pub n: usize,
}

impl SylvesterLayout {
    pub fn new(f: &Poly, g: &Poly, v: &str) -> Result<Self> {
        f.check_same_table(g)?;
        let mut fc = f.univariate_view(v)?;
        let mut gc = g.univariate_view(v)?;
        check_inputs(f, g, v)?;
        let m = fc.len() - 1;
        let n = gc.len() - 1;
        fc.reverse();
        gc.reverse();
        Ok(SylvesterLayout {
            f_coeffs: fc,
            g_coeffs: gc,
            m,
            n,
        })
    }

    pub fn size(&self) -> usize {
        self.m + self.n
    }

    /// `n` shifted rows of `f` coefficients followed by `m` shifted rows of
    /// `g` coefficients.
    pub fn matrix(&self) -> PolyMatrix {
        let vars = self.f_coeffs[0].vars();
        let size = self.size();
        let mut mat = PolyMatrix::zero(vars, size, size);
        for i in 0..self.n {
            for (k, a) in self.f_coeffs.iter().enumerate() {
                mat.set(i, i + k, a.clone());
            }
        }
        for i in 0..self.m {
            for (k, b) in self.g_coeffs.iter().enumerate() {
                mat.set(self.n + i, i + k, b.clone());
            }
        }
        mat
    }
}

fn check_inputs(f: &Poly, g: &Poly, v: &str) -> Result<()> {
    if f.is_zero() && g.is_zero() {
        return Err(AlgebraError::PreconditionViolated(
            "both leading coefficients are zero".into(),
        ));
    }
    if f.degree_in(v)? == 0 && g.degree_in(v)? == 0 {
        return Err(AlgebraError::DegenerateInput(v.to_string()));
    }
    Ok(())
}

/// Sylvester matrix of `f` and `g` in `v`. Both degrees must be positive.
pub fn sylvester(f: &Poly, g: &Poly, v: &str) -> Result<PolyMatrix> {
    let layout = SylvesterLayout::new(f, g, v)?;
    if layout.m == 0 || layout.n == 0 {
        return Err(AlgebraError::PreconditionViolated(format!(
            "Sylvester matrix needs positive degrees in `{v}` (got {} and {})",
            layout.m, layout.n
        )));
    }
    Ok(layout.matrix())
}

/// How a resultant value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultantConvention {
    /// Determinant of the Sylvester matrix.
    Sylvester,
    /// One input is a nonzero constant `c` in `v`: the value is `c` raised
    /// to the other degree.
    ConstantPower,
    /// One input is the zero polynomial, the other has positive degree.
    ZeroInput,
}

#[derive(Clone, Debug)]
pub struct ResultantOutcome {
    pub value: Poly,
    pub convention: ResultantConvention,
    pub matrix_size: usize,
    pub strategy: DetStrategy,
}

pub fn resultant(f: &Poly, g: &Poly, v: &str) -> Result<Poly> {
    resultant_with(f, g, v, DetStrategy::Auto).map(|o| o.value)
}

pub fn resultant_with(f: &Poly, g: &Poly, v: &str, strategy: DetStrategy) -> Result<ResultantOutcome> {
    let layout = SylvesterLayout::new(f, g, v)?;
    let vars = f.vars();
    let flagged = |value, convention| ResultantOutcome {
        value,
        convention,
        matrix_size: 0,
        strategy,
    };
    if f.is_zero() || g.is_zero() {
        return Ok(flagged(Poly::zero(vars), ResultantConvention::ZeroInput));
    }
    if layout.n == 0 {
        return Ok(flagged(g.pow(layout.m as u32), ResultantConvention::ConstantPower));
    }
    if layout.m == 0 {
        return Ok(flagged(f.pow(layout.n as u32), ResultantConvention::ConstantPower));
    }
    let mat = layout.matrix();
    let resolved = strategy.resolve(&mat);
    Ok(ResultantOutcome {
        value: det(&mat, resolved)?,
        convention: ResultantConvention::Sylvester,
        matrix_size: mat.rows(),
        strategy: resolved,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    SharedRoot,
    NoSharedRoot,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub verdict: OracleVerdict,
    /// Trials whose specialization kept both leading coefficients nonzero
    /// and agreed with the specialized resultant.
    pub valid_trials: usize,
    pub shared_trials: usize,
    /// Leading coefficient vanished under the specialization.
    pub discarded_trials: usize,
    /// Specialized resultant disagreed with the univariate one; always a bug.
    pub inconsistent_trials: usize,
}

/// Specializes every variable except `v` at random rationals and takes the
/// univariate gcd. Trials that lower a degree are discarded; each kept trial
/// also checks that the specialized resultant equals the univariate
/// Euclidean resultant.
pub fn common_factor_oracle<R: Rng>(f: &Poly, g: &Poly, v: &str, trials: usize, rng: &mut R) -> Result<OracleReport> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::PreconditionViolated(
            "oracle inputs must be nonzero".into(),
        ));
    }
    let res = resultant(f, g, v)?;
    let fc = f.univariate_view(v)?;
    let gc = g.univariate_view(v)?;
    let (lf, lg) = (fc.last().unwrap(), gc.last().unwrap());
    let mut report = OracleReport {
        verdict: OracleVerdict::Inconclusive,
        valid_trials: 0,
        shared_trials: 0,
        discarded_trials: 0,
        inconsistent_trials: 0,
    };
    for _ in 0..trials {
        let mut point: BTreeMap<String, Rational> = sample::assignment(rng, f.vars());
        point.remove(v);
        if lf.evaluate(&point)?.is_zero() || lg.evaluate(&point)?.is_zero() {
            report.discarded_trials += 1;
            continue;
        }
        let fs = f.specialize(&point)?;
        let gs = g.specialize(&point)?;
        let uni = DenseUni::from_poly(&fs, v)?.resultant(&DenseUni::from_poly(&gs, v)?);
        if res.evaluate(&point)? != uni {
            report.inconsistent_trials += 1;
            continue;
        }
        report.valid_trials += 1;
        if univariate_gcd(&fs, &gs, v)?.degree_in(v)? >= 1 {
            report.shared_trials += 1;
        }
    }
    report.verdict = match (report.valid_trials, report.shared_trials) {
        (0, _) => OracleVerdict::Inconclusive,
        (_, 0) => OracleVerdict::NoSharedRoot,
        _ => OracleVerdict::SharedRoot,
    };
    Ok(report)
}
