use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{compare, proportionality, MatchStatus, PipelineOptions, PipelineReport, Recorder, Verdict};
use crate::error::{AlgebraError, Result};
use crate::linalg::{det_minor_expansion, exact_divide, PolyMatrix};
use crate::poly::{DenseUni, Poly, VarTable};
use crate::rational::Rational;
use crate::resultant::resultant_with;

/// Five distinct curvatures: `λ₃` with multiplicity `r − 2` and `λ_{n−1}`
/// with multiplicity `n − r − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseVParams {
    n: u32,
    r: u32,
    mu: Rational,
    symbolic_mu: bool,
}

impl CaseVParams {
    pub fn new(n: i64, r: i64, mu: Rational) -> Result<Self> {
        if n < 5 {
            return Err(AlgebraError::InvalidParams(format!("n = {n} must be at least 5")));
        }
        if r - 2 < 1 {
            return Err(AlgebraError::InvalidParams(format!(
                "r - 2 = {} must be at least 1",
                r - 2
            )));
        }
        if n - r - 1 < 1 {
            return Err(AlgebraError::InvalidParams(format!(
                "n - r - 1 = {} must be at least 1",
                n - r - 1
            )));
        }
        if mu.is_zero() {
            return Err(AlgebraError::InvalidParams("mu must be nonzero".into()));
        }
        Ok(CaseVParams {
            n: n as u32,
            r: r as u32,
            mu,
            symbolic_mu: false,
        })
    }

    /// Keeps `mu` as a variable instead of the numeric value.
    pub fn with_symbolic_mu(mut self, on: bool) -> Self {
        self.symbolic_mu = on;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn symbolic_mu(&self) -> bool {
        self.symbolic_mu
    }

    fn describe(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("n".into(), self.n.to_string());
        m.insert("r".into(), self.r.to_string());
        let mu = if self.symbolic_mu {
            "symbolic".to_string()
        } else {
            self.mu.to_string()
        };
        m.insert("mu".into(), mu);
        m
    }
}

/// Variables and named polynomials of the five-curvature system.
///
/// Table: `H`, optional `mu`, `l3` (the curvature of multiplicity `r − 2`),
/// `ln1` (the curvature of multiplicity `n − r − 1`), and `w1`, `w2` for the
/// two in-plane connection coefficients of the second block.
#[derive(Clone, Debug)]
pub struct CaseV {
    params: CaseVParams,
    vars: Arc<VarTable>,
    pub h: Poly,
    pub mu: Poly,
    pub l3: Poly,
    pub ln1: Poly,
    pub w1: Poly,
    pub w2: Poly,
}

impl CaseV {
    pub fn new(params: &CaseVParams) -> Self {
        let mut names = vec!["H"];
        if params.symbolic_mu {
            names.push("mu");
        }
        names.extend(["l3", "ln1", "w1", "w2"]);
        let vars = VarTable::new(names).expect("distinct names");
        let v = |name: &str| Poly::var(&vars, name).expect("declared");
        let mu = if params.symbolic_mu {
            v("mu")
        } else {
            Poly::constant(&vars, params.mu.clone())
        };
        CaseV {
            params: params.clone(),
            h: v("H"),
            mu,
            l3: v("l3"),
            ln1: v("ln1"),
            w1: v("w1"),
            w2: v("w2"),
            vars,
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn params(&self) -> &CaseVParams {
        &self.params
    }

    fn int(&self, k: i64) -> Poly {
        Poly::from_int(&self.vars, k)
    }

    fn n(&self) -> i64 {
        i64::from(self.params.n)
    }

    fn r2(&self) -> i64 {
        i64::from(self.params.r) - 2
    }

    fn tail(&self) -> i64 {
        self.n() - i64::from(self.params.r) - 1
    }

    /// Trace condition times 2: `2(r−2)λ₃ + 2(n−r−1)λ_{n−1} − 3nH`.
    pub fn trace_constraint(&self) -> Poly {
        &(&self.int(2 * self.r2()) * &self.l3) + &(&self.int(2 * self.tail()) * &self.ln1)
            - &self.int(3 * self.n()) * &self.h
    }

    /// `(P, Q, R)` with `P = 2μ(n−r−1)`, `Q = n(n−r+5)H − 4(r−2)λ₃`,
    /// `R = 3nH − 2(r−2)λ₃`.
    pub fn pqr(&self) -> (Poly, Poly, Poly) {
        let n = self.n();
        let r = i64::from(self.params.r);
        let p = &self.int(2 * self.tail()) * &self.mu;
        let q = &(&self.int(n * (n - r + 5)) * &self.h) - &(&self.int(4 * self.r2()) * &self.l3);
        let rr = &(&self.int(3 * n) * &self.h) - &(&self.int(2 * self.r2()) * &self.l3);
        (p, q, rr)
    }

    fn s3(&self) -> Poly {
        &(&self.int(2) * &self.l3) + &(&self.int(self.n()) * &self.h)
    }

    fn l3_sq_mu_sq(&self) -> Poly {
        &(&self.l3 * &self.l3) + &(&self.mu * &self.mu)
    }

    /// The printed `f(λ₃, H)`, term by term.
    pub fn build_f(&self) -> Poly {
        let (p, q, r) = self.pqr();
        let e = self.l3_sq_mu_sq();
        let s3 = self.s3();
        let two = self.int(2);
        let t1 = &(&(&two * &p) * &q) * &e;
        let t2 = &(&q * &s3) * &(&(&self.l3 * &p) - &(&self.mu * &r));
        let t3 = &(&(&two * &p) * &r) * &e;
        let t4 = &(&p * &s3) * &(&(&self.l3 * &r) + &(&self.mu * &p));
        &(&(&t1 + &t2) - &t3) - &t4
    }

    /// The printed `g(λ₃, H)`, transcribed with its grouping as written.
    pub fn build_g_printed(&self) -> Poly {
        let (p, q, r) = self.pqr();
        let r2 = self.int(self.r2());
        let l3 = &self.l3;
        let mu = &self.mu;
        let k = |x: i64| self.int(x);
        let a = &(&(&k(4) * &p) * l3) * &(&q - &r);
        let b = &(&(&k(4) * &p) * &self.l3_sq_mu_sq()) * &r2;
        let c = &k(2) * &(&(&(&(&(&p * &q) * l3) - &(&(&q * &r) * mu)) - &(&(l3 * &p) * &r)) - &(&(&p * &p) * mu));
        let inner = &(&(&(&p * &q) - &(&(&(&k(2) * l3) * &p) * &r2))
            + &(&(&(&k(2) * &r2) * &(&(&k(2) * &r) + &q)) * mu))
            - &(&p * &r);
        let d = &self.s3() * &inner;
        &(&(&a - &b) + &c) + &d
    }

    /// Coefficients of the two linear relations in `(ω_AA^n, ω_BB^n)`
    /// after eliminating the first block's in-plane coefficients, each
    /// multiplied by `2(λ₃² + μ²)`.
    pub fn elimination_matrix(&self) -> PolyMatrix {
        let (p, q, r) = self.pqr();
        let e = &self.int(2) * &self.l3_sq_mu_sq();
        let s3 = self.s3();
        let (w1, w2) = (&self.w1, &self.w2);
        let k1 = &(&self.l3 * &r) + &(&self.mu * &p);
        let k2 = &(&self.mu * &r) - &(&self.l3 * &p);
        let a11 = &(&e * &(&(&p * w2) - &(&r * w1))) - &(&s3 * &(&(&k1 * w1) + &(&k2 * w2)));
        let a12 = &e * &(&(&q * w1) - &(&p * w2));
        let a21 = &(&e * &(&(-&(&p * w1)) - &(&r * w2))) - &(&s3 * &(&(&k1 * w2) - &(&k2 * w1)));
        let a22 = &e * &(&(&p * w1) + &(&q * w2));
        PolyMatrix::from_rows(&self.vars, vec![vec![a11, a12], vec![a21, a22]]).expect("2x2 over one table")
    }

    /// Determinant of [`Self::elimination_matrix`] with the factor
    /// `(w1² + w2²)` and the clearing factor `2(λ₃² + μ²)` divided out.
    pub fn derive_f(&self) -> Result<DerivedF> {
        let det = det_minor_expansion(&self.elimination_matrix())?;
        let w = &(&self.w1 * &self.w1) + &(&self.w2 * &self.w2);
        let e = &self.int(2) * &self.l3_sq_mu_sq();
        let f = exact_divide(&exact_divide(&det, &w)?, &e)?;
        let constant = proportionality(&self.build_f(), &f);
        Ok(DerivedF {
            determinant_terms: det.len(),
            divided_by: vec!["w1^2 + w2^2".into(), format!("{}", e)],
            constant,
            f,
        })
    }
}

#[derive(Clone, Debug)]
pub struct DerivedF {
    pub f: Poly,
    pub determinant_terms: usize,
    pub divided_by: Vec<String>,
    /// `f = constant * printed f`, when proportional.
    pub constant: Option<Rational>,
}

/// Res over `l3` of `f` and `∂f/∂l3`, plus the printed `g` as a secondary
/// input and the independent derivation of `f`.
pub fn theorem1_pipeline(params: &CaseVParams, opts: &PipelineOptions) -> Result<PipelineReport> {
    let sys = CaseV::new(params);
    let mut report = PipelineReport::new("theorem1", params.describe());
    let mut rec = Recorder {
        report: &mut report,
        timings: opts.record_timings,
    };

    let (f, ms) = rec.timed(|| sys.build_f());
    rec.push("f", &f, ms, None);

    let (derived, ms) = rec.timed(|| sys.derive_f());
    match derived {
        Ok(d) => {
            let note = format!(
                "2x2 determinant of {} terms divided by {}",
                d.determinant_terms,
                d.divided_by.join(" and ")
            );
            rec.push("derived_f", &d.f, ms, Some(note));
            rec.report.printed_vs_derived_diffs.push(compare("f", &f, &d.f));
            if let Some(c) = d.constant {
                rec.report
                    .proportionality_constants
                    .insert("derived_f/f".into(), c.to_string());
            }
        }
        Err(e) => {
            rec.report.notes.push(format!("derivation of f failed: {e}"));
        }
    }

    let (g, ms) = rec.timed(|| f.partial_derivative("l3"));
    let g = g?;
    rec.push("g = df/dl3", &g, ms, None);

    let (res, ms) = rec.timed(|| resultant_with(&f, &g, "l3", opts.strategy));
    let res = res?;
    let note = format!(
        "{}x{} Sylvester matrix, {} determinant",
        res.matrix_size,
        res.matrix_size,
        res.strategy.name()
    );
    rec.push("resultant(f, df/dl3)", &res.value, ms, Some(note));
    rec.report.final_stage = "resultant(f, df/dl3)".into();
    let primary_ok = !res.value.is_zero() && res.value.degree_in("l3")? == 0 && res.value.degree_in("H")? > 0;

    let (g_printed, ms) = rec.timed(|| sys.build_g_printed());
    rec.push("printed_g", &g_printed, ms, None);
    let cmp = compare("g", &g_printed, &g);
    if cmp.status == MatchStatus::Proportional {
        if let Some(c) = &cmp.constant {
            rec.report
                .proportionality_constants
                .insert("df/dl3 / printed_g".into(), c.clone());
        }
    }
    rec.report.printed_vs_derived_diffs.push(cmp);
    if g_printed.degree_in("l3")? >= 1 {
        let (res2, ms) = rec.timed(|| resultant_with(&f, &g_printed, "l3", opts.strategy));
        let res2 = res2?;
        rec.push(
            "resultant(f, printed_g)",
            &res2.value,
            ms,
            Some("secondary input".into()),
        );
    }

    report.verdict = if primary_ok { Verdict::Pass } else { Verdict::Fail };
    if !primary_ok {
        report
            .notes
            .push("primary resultant is zero or not a nonconstant polynomial in H".into());
    }
    Ok(report)
}

/// Four distinct curvatures: `λ₃ = 3nH / (2(n−3))` substituted into the
/// relation `λ₃ μ = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Case4Report {
    pub n: u32,
    pub mu: String,
    /// `λ₃ / H`.
    pub lambda3_per_h: String,
    /// Coefficient of `H` in the relation before clearing.
    pub relation_coefficient: String,
    /// Relation after clearing the denominator `2(n−3)`.
    pub cleared_relation: String,
    pub clearing_factor: String,
    pub only_root_is_zero: bool,
    pub verdict: Verdict,
}

pub fn case4_check(n: i64, mu: &Rational) -> Result<Case4Report> {
    if n < 4 {
        return Err(AlgebraError::InvalidParams(format!("n = {n} must be at least 4")));
    }
    if mu.is_zero() {
        return Err(AlgebraError::InvalidParams("mu must be nonzero".into()));
    }
    let vars = VarTable::new(["H", "l3"]).expect("distinct names");
    let h = Poly::var(&vars, "H")?;
    let l3 = Poly::var(&vars, "l3")?;
    let relation = l3.scale(mu);
    let num = h.scale(&Rational::from(3 * n));
    let den = Poly::from_int(&vars, 2 * (n - 3));
    let (cleared, deg) = relation.substitute_fraction("l3", &num, &den)?;
    let clearing = Rational::from(2 * (n - 3)).pow(deg);
    let uncleared = cleared.scale(&clearing.recip().expect("n > 3"));
    let coefficient = uncleared.coefficient(&[1, 0]);

    // Nonzero multiple of a power of H: H = 0 is its only root.
    let uni = DenseUni::from_poly(&cleared, "H")?;
    let only_root_is_zero = match uni.degree() {
        Some(d) if d >= 1 => uni.coeffs()[..d].iter().all(Rational::is_zero),
        _ => false,
    };
    Ok(Case4Report {
        n: n as u32,
        mu: mu.to_string(),
        lambda3_per_h: Rational::new(3 * n, 2 * (n - 3)).to_string(),
        relation_coefficient: coefficient.to_string(),
        cleared_relation: cleared.to_string(),
        clearing_factor: clearing.to_string(),
        only_root_is_zero,
        verdict: if only_root_is_zero {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}
