//! Codazzi relations among connection coefficients as exact linear systems.
//!
//! The unknowns are the coefficients `ω_ij^k` of `∇_{e_i} e_j = Σ ω_ij^k e_k`
//! in an orthonormal frame `e_1..e_n` where `e_1` is timelike, `e_1, e_2`
//! span the complex-curvature plane, `e_3..e_{n-1}` carry real curvatures
//! and `e_n` points along the gradient of the mean curvature. Every row is a
//! frame component of the Codazzi equation with all derivative terms either
//! absent, eliminated between two components, or set to zero under the
//! post-lemma assumptions. Vanishing conclusions are read off the exact
//! nullspace.

mod analysis;
mod rows;

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{AlgebraError, Result};
use crate::rational::Rational;
use crate::sample;

pub use analysis::{
    degenerate_mu_check, expected_vanishing, forced_zero, sign_convention_check, vanishing_report, BlockCheck,
    DegenerateMuReport, ExpectedVanishing, SignCheck, VanishingReport,
};
pub use rows::{assemble, ConstraintSystem, RowFamily, RowSelection};

/// How metric compatibility relates `ω_ij^k` and `ω_ik^j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// `ω_ij^k = −ω_ik^j` for every index, as the frame relations are
    /// written.
    #[default]
    Uniform,
    /// `ε_k ω_ij^k = −ε_j ω_ik^j` with `ε_1 = −1`: a timelike index flips
    /// the sign.
    Lorentz,
}

impl SignConvention {
    pub fn name(self) -> &'static str {
        match self {
            SignConvention::Uniform => "uniform",
            SignConvention::Lorentz => "lorentz",
        }
    }
}

/// `ω_ij^k`: the `e_k` component of `∇_{e_i} e_j`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OmegaIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl OmegaIndex {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        OmegaIndex { i, j, k }
    }

    /// Representative under metric compatibility: `None` when the
    /// coefficient vanishes identically (`j == k`), otherwise
    /// `(sign, index)` with `j < k` and `self = sign * index`.
    pub fn canonical(self, convention: SignConvention) -> Option<(i32, OmegaIndex)> {
        let OmegaIndex { i, j, k } = self;
        if j == k {
            return None;
        }
        if j < k {
            return Some((1, self));
        }
        let sign = match convention {
            SignConvention::Uniform => -1,
            SignConvention::Lorentz => {
                let eps = |x: usize| if x == 1 { -1 } else { 1 };
                -eps(j) * eps(k)
            }
        };
        Some((sign, OmegaIndex::new(i, k, j)))
    }
}

impl fmt::Display for OmegaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w_{{{},{}}}^{{{}}}", self.i, self.j, self.k)
    }
}

/// Curvature data of one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameConfig {
    n: usize,
    lambda_values: Vec<Rational>,
    mu: Rational,
    h: Rational,
    lambda: Rational,
    post_lemma33: bool,
    convention: SignConvention,
}

impl FrameConfig {
    /// `lambda_values` are the real curvatures of `e_3..e_{n-1}`; the
    /// curvature along `e_n` is `−nH/2`.
    pub fn new(n: usize, lambda_values: Vec<Rational>, mu: Rational, h: Rational) -> Result<Self> {
        if n < 4 {
            return Err(AlgebraError::InvalidParams(format!("n = {n} must be at least 4")));
        }
        if lambda_values.len() != n - 3 {
            return Err(AlgebraError::InvalidParams(format!(
                "expected {} real curvatures for n = {n}, got {}",
                n - 3,
                lambda_values.len()
            )));
        }
        if mu.is_zero() {
            return Err(AlgebraError::InvalidParams("mu must be nonzero".into()));
        }
        if h.is_zero() {
            return Err(AlgebraError::InvalidParams("H must be nonzero".into()));
        }
        let cfg = FrameConfig {
            n,
            lambda_values,
            mu,
            h,
            lambda: Rational::zero(),
            post_lemma33: false,
            convention: SignConvention::Uniform,
        };
        let ln = cfg.lambda_n();
        if let Some(pos) = cfg.lambda_values.iter().position(|l| *l == ln) {
            return Err(AlgebraError::InvalidParams(format!(
                "curvature of e_{} equals the gradient curvature -nH/2 = {ln}",
                pos + 3
            )));
        }
        Ok(cfg)
    }

    /// Derivatives of `λ` and `μ` vanish and `λ = 0`.
    pub fn with_post_lemma33(mut self, on: bool) -> Self {
        self.post_lemma33 = on;
        self
    }

    /// Real part of the complex curvature; ignored (taken as 0) under the
    /// post-lemma assumptions.
    pub fn with_lambda(mut self, lambda: Rational) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn h(&self) -> &Rational {
        &self.h
    }

    pub fn post_lemma33(&self) -> bool {
        self.post_lemma33
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn lambda_values(&self) -> &[Rational] {
        &self.lambda_values
    }

    /// Real part of the complex curvature as used in row coefficients.
    pub fn lambda(&self) -> Rational {
        if self.post_lemma33 {
            Rational::zero()
        } else {
            self.lambda.clone()
        }
    }

    pub fn lambda_n(&self) -> Rational {
        -(&Rational::from(self.n as i64) * &self.h) / Rational::from(2)
    }

    /// Curvature of a block index `3..=n-1`, or of `n`.
    pub fn curvature(&self, a: usize) -> Rational {
        if a == self.n {
            self.lambda_n()
        } else {
            self.lambda_values[a - 3].clone()
        }
    }

    pub fn blocks(&self) -> std::ops::RangeInclusive<usize> {
        3..=self.n - 1
    }

    pub fn summary(&self) -> ConfigSummary {
        ConfigSummary {
            n: self.n,
            lambda_values: self.lambda_values.iter().map(ToString::to_string).collect(),
            mu: self.mu.to_string(),
            h: self.h.to_string(),
            lambda: self.lambda().to_string(),
            lambda_n: self.lambda_n().to_string(),
            post_lemma33: self.post_lemma33,
            convention: self.convention,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigSummary {
    pub n: usize,
    pub lambda_values: Vec<String>,
    pub mu: String,
    pub h: String,
    pub lambda: String,
    pub lambda_n: String,
    pub post_lemma33: bool,
    pub convention: SignConvention,
}

/// Random post-lemma configuration with pairwise distinct real curvatures,
/// or with exactly one repeated pair when `repeated_pair` is set (needs
/// `n >= 5`).
pub fn random_config<R: Rng>(rng: &mut R, n: usize, repeated_pair: bool) -> Result<FrameConfig> {
    if repeated_pair && n < 5 {
        return Err(AlgebraError::InvalidParams("a repeated pair needs n >= 5".into()));
    }
    loop {
        let h = sample::nonzero_rational(rng, 6, 3);
        let mu = sample::nonzero_rational(rng, 6, 3);
        let mut values: Vec<Rational> = (3..n).map(|_| sample::nonzero_rational(rng, 9, 4)).collect();
        if repeated_pair {
            let a = rng.random_range(0..values.len());
            let mut b = rng.random_range(0..values.len() - 1);
            if b >= a {
                b += 1;
            }
            values[b] = values[a].clone();
        }
        let mut sorted = values.clone();
        sorted.sort();
        sorted.dedup();
        let expected_distinct = if repeated_pair { values.len() - 1 } else { values.len() };
        if sorted.len() != expected_distinct {
            continue;
        }
        if let Ok(cfg) = FrameConfig::new(n, values, mu, h) {
            return Ok(cfg.with_post_lemma33(true));
        }
    }
}
