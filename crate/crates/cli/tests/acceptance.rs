//! Acceptance suite: one line per criterion, exit status nonzero if any
//! criterion fails. Every check compares library output against an oracle
//! written here (hand-derived values, dense rational elimination, or
//! numeric evaluation of the printed formulas).

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use resultant_forge::codazzi::{assemble, random_config, vanishing_report, OmegaIndex, RowSelection};
use resultant_forge::hypersurface::{
    case4_check, lemma51_identities, proportionality, theorem1_pipeline, theorem2_pipeline, CaseV, CaseVIParams,
    CaseVParams, MatchStatus, PipelineOptions, Verdict,
};
use resultant_forge::linalg::{det_bareiss, det_minor_expansion, exact_divide};
use resultant_forge::parse::{format, parse_with_table};
use resultant_forge::poly::{Poly, VarTable};
use resultant_forge::rational::{q, Rational};
use resultant_forge::resultant::{common_factor_oracle, resultant, OracleVerdict};
use resultant_forge::sample;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

// ---------------------------------------------------------------------------
// Oracles over dense univariate coefficient vectors (constant term first).

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Rational::is_zero) {
        v.pop();
    }
    v
}

fn dense(p: &Poly, var: &str) -> Vec<Rational> {
    let coeffs = p.univariate_view(var).expect("declared");
    trim(
        coeffs
            .iter()
            .map(|c| c.as_constant().expect("univariate input"))
            .collect(),
    )
}

fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().unwrap() / lead;
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&c * bi);
        }
        r = trim(r);
    }
    r
}

/// Degree of the monic gcd by the Euclidean algorithm.
fn gcd_degree(a: &[Rational], b: &[Rational]) -> usize {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Determinant by fraction-exact Gaussian elimination.
fn rat_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        let pivot_row = m[col].clone();
        det = &det * &pivot;
        for row in m.iter_mut().skip(col + 1) {
            let factor = &row[col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for (x, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = &*x - &(&factor * pv);
            }
        }
    }
    det
}

/// Sylvester determinant of two dense polynomials of positive degree.
fn sylvester_det(f: &[Rational], g: &[Rational]) -> Rational {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![Rational::zero(); size];
        for (i, c) in f.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Rational::zero(); size];
        for (i, c) in g.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    rat_det(rows)
}

fn point(pairs: &[(&str, Rational)]) -> BTreeMap<String, Rational> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Checks `res(pt) == Res_var(f(pt), g(pt))` by a dense Sylvester
/// determinant; `false` when a leading coefficient vanishes at `pt`.
fn specialization_agrees(f: &Poly, g: &Poly, var: &str, res: &Poly, pt: &BTreeMap<String, Rational>) -> Option<bool> {
    let fs = dense(&f.specialize(pt).ok()?, var);
    let gs = dense(&g.specialize(pt).ok()?, var);
    if fs.len() != f.degree_in(var).ok()? as usize + 1 || gs.len() != g.degree_in(var).ok()? as usize + 1 {
        return None;
    }
    Some(res.evaluate(pt).ok()? == sylvester_det(&fs, &gs))
}

// ---------------------------------------------------------------------------

fn c1_resultant_kernel() -> Outcome {
    let t = VarTable::new(["x"]).unwrap();
    let p = |s: &str| parse_with_table(s, &t).unwrap();
    // | 1 -1 |                | 1 0  1 |
    // | 1  1 | = 2   and      | 1 -1 0 | = 1 + 1 = 2
    //                         | 0 1 -1 |
    ensure!(
        resultant(&p("x - 1"), &p("x + 1"), "x").unwrap() == p("2"),
        "Res(x-1, x+1) != 2"
    );
    ensure!(
        resultant(&p("x^2 + 1"), &p("x - 1"), "x").unwrap() == p("2"),
        "Res(x^2+1, x-1) != 2"
    );

    let mut rng = sample::rng(101);
    let mut planted = 0;
    while planted < 200 {
        let dc = rng.random_range(1..=2);
        let common = sample::univariate(&mut rng, &t, "x", dc);
        let df = rng.random_range(0..=2);
        let dg = rng.random_range(0..=2);
        let f = &common * &sample::univariate(&mut rng, &t, "x", df);
        let g = &common * &sample::univariate(&mut rng, &t, "x", dg);
        let r = resultant(&f, &g, "x").map_err(|e| e.to_string())?;
        ensure!(
            r.is_zero(),
            "planted pair gave {}: f = {}, g = {}",
            format(&r),
            format(&f),
            format(&g)
        );
        planted += 1;
    }
    let mut coprime = 0;
    let mut skipped = 0;
    while coprime < 200 {
        let df = rng.random_range(1..=4);
        let dg = rng.random_range(1..=4);
        let f = sample::univariate(&mut rng, &t, "x", df);
        let g = sample::univariate(&mut rng, &t, "x", dg);
        let (fd, gd) = (dense(&f, "x"), dense(&g, "x"));
        if gcd_degree(&fd, &gd) > 0 {
            skipped += 1;
            continue;
        }
        let r = resultant(&f, &g, "x").map_err(|e| e.to_string())?;
        let value = r.as_constant().unwrap_or_else(Rational::zero);
        ensure!(
            !value.is_zero(),
            "coprime pair gave 0: f = {}, g = {}",
            format(&f),
            format(&g)
        );
        ensure!(
            value == sylvester_det(&fd, &gd),
            "resultant differs from dense Sylvester oracle"
        );
        coprime += 1;
    }
    Ok(format!(
        "200 planted -> 0, 200 coprime -> nonzero ({skipped} random pairs shared a factor and were redrawn)"
    ))
}

fn c2_determinant_cross_check() -> Outcome {
    let t = VarTable::new(["x", "y"]).unwrap();
    let mut rng = sample::rng(202);
    for trial in 0..200 {
        let m = sample::poly_matrix(&mut rng, &t, 5, 3, 2);
        let a = det_minor_expansion(&m).map_err(|e| e.to_string())?;
        let b = det_bareiss(&m).map_err(|e| e.to_string())?;
        ensure!(a == b, "trial {trial}: minor and Bareiss differ");
        let pt = sample::assignment(&mut rng, &t);
        let numeric: Vec<Vec<Rational>> = m
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(&pt).unwrap()).collect())
            .collect();
        ensure!(
            a.evaluate(&pt).unwrap() == rat_det(numeric),
            "trial {trial}: determinant wrong at a point"
        );
    }
    Ok("200 random 5x5 matrices over Q[x,y], exact agreement and pointwise oracle".into())
}

fn c3_common_factor_direction() -> Outcome {
    let t = VarTable::new(["x", "y", "z"]).unwrap();
    let mut rng = sample::rng(303);
    let mut done = 0;
    let mut valid = 0;
    while done < 100 {
        let common = &sample::univariate(&mut rng, &t, "x", 1) + &sample::poly(&mut rng, &t, 2, 1);
        if common.degree_in("x").unwrap() == 0 {
            continue;
        }
        let f = &common * &(&sample::univariate(&mut rng, &t, "x", 2) + &sample::poly(&mut rng, &t, 3, 1));
        let g = &common * &(&sample::univariate(&mut rng, &t, "x", 1) + &sample::poly(&mut rng, &t, 3, 1));
        if f.degree_in("x").unwrap() == 0 || g.degree_in("x").unwrap() == 0 {
            continue;
        }
        let r = resultant(&f, &g, "x").map_err(|e| e.to_string())?;
        ensure!(r.is_zero(), "planted pair has nonzero resultant");
        let o = common_factor_oracle(&f, &g, "x", 6, &mut rng).map_err(|e| e.to_string())?;
        ensure!(o.inconsistent_trials == 0, "specialized resultant disagreed");
        ensure!(
            o.shared_trials == o.valid_trials,
            "false negative: {} of {} valid specializations lost the shared root",
            o.valid_trials - o.shared_trials,
            o.valid_trials
        );
        ensure!(
            o.verdict == OracleVerdict::SharedRoot || o.valid_trials == 0,
            "verdict {:?}",
            o.verdict
        );
        valid += o.valid_trials;
        done += 1;
    }
    Ok(format!(
        "100 zero-resultant pairs, {valid} valid specializations, 0 false negatives"
    ))
}

/// The printed `f(λ₃, H)` evaluated directly from its definition.
fn printed_case5_f(n: i64, r: i64, mu: &Rational, l3: &Rational, h: &Rational) -> Rational {
    let int = |k: i64| Rational::from(k);
    let p = &(&int(2) * mu) * &int(n - r - 1);
    let qq = &(&int(n * (n - r + 5)) * h) - &(&int(4 * (r - 2)) * l3);
    let rr = &(&int(3 * n) * h) - &(&int(2 * (r - 2)) * l3);
    let e = &(l3 * l3) + &(mu * mu);
    let s = &(&int(2) * l3) + &(&int(n) * h);
    let t1 = &(&(&int(2) * &p) * &qq) * &e;
    let t2 = &(&qq * &s) * &(&(l3 * &p) - &(mu * &rr));
    let t3 = &(&(&int(2) * &p) * &rr) * &e;
    let t4 = &(&p * &s) * &(&(l3 * &rr) + &(mu * &p));
    &(&(&t1 + &t2) - &t3) - &t4
}

const CASE5_SETS: [(i64, i64, i64); 3] = [(6, 4, 1), (7, 4, 2), (8, 5, 1)];

fn c4_case5_consistency() -> Outcome {
    let mut rng = sample::rng(404);
    let mut constants = Vec::new();
    for (n, r, mu) in CASE5_SETS {
        let start = Instant::now();
        let params = CaseVParams::new(n, r, q(mu, 1)).map_err(|e| e.to_string())?;
        let sys = CaseV::new(&params);
        let printed = sys.build_f();
        for _ in 0..10 {
            let (l3, h) = (sample::rational(&mut rng, 9, 4), sample::rational(&mut rng, 9, 4));
            let pt = point(&[("l3", l3.clone()), ("H", h.clone())]);
            ensure!(
                printed.evaluate(&pt).unwrap() == printed_case5_f(n, r, &q(mu, 1), &l3, &h),
                "({n},{r},{mu}): stored f disagrees with the printed formula"
            );
        }
        let derived = sys.derive_f().map_err(|e| e.to_string())?;
        let quotient = exact_divide(&derived.f, &printed).map_err(|e| format!("({n},{r},{mu}): {e}"))?;
        let c = quotient
            .as_constant()
            .ok_or_else(|| format!("({n},{r},{mu}): quotient is not constant"))?;
        ensure!(!c.is_zero(), "({n},{r},{mu}): zero constant");
        ensure!(
            proportionality(&printed, &derived.f) == Some(c.clone()),
            "proportionality report disagrees"
        );
        ensure!(start.elapsed() < Duration::from_secs(30), "({n},{r},{mu}) over 30 s");
        constants.push(format!("({n},{r},{mu}): {c}"));
    }
    Ok(format!("derived f = c * printed f with {}", constants.join(", ")))
}

/// H-degree of the final resultant, pinned on the first run.
const CASE5_FINAL_H_DEGREE: u32 = 6;

fn c5_theorem1() -> Outcome {
    let mut rng = sample::rng(505);
    let mut out = Vec::new();
    for (n, r, mu) in CASE5_SETS {
        let start = Instant::now();
        let params = CaseVParams::new(n, r, q(mu, 1)).map_err(|e| e.to_string())?;
        let rep = theorem1_pipeline(&params, &PipelineOptions::default()).map_err(|e| e.to_string())?;
        ensure!(rep.verdict == Verdict::Pass, "({n},{r},{mu}) verdict FAIL");
        let fin = rep.final_poly().ok_or("no final polynomial")?;
        ensure!(!fin.is_zero(), "({n},{r},{mu}): final resultant is zero");
        ensure!(
            fin.occurring_names() == ["H"],
            "({n},{r},{mu}): final depends on {:?}",
            fin.occurring_names()
        );
        let deg = fin.degree_in("H").unwrap();
        ensure!(
            deg == CASE5_FINAL_H_DEGREE,
            "({n},{r},{mu}): H-degree {deg}, expected {CASE5_FINAL_H_DEGREE}"
        );
        let f = &rep.polys["f"];
        let g = f.partial_derivative("l3").unwrap();
        let mut checked = 0;
        while checked < 5 {
            let pt = point(&[("H", sample::nonzero_rational(&mut rng, 9, 4))]);
            match specialization_agrees(f, &g, "l3", fin, &pt) {
                Some(true) => checked += 1,
                Some(false) => return Err(format!("({n},{r},{mu}): final disagrees with dense oracle at {pt:?}")),
                None => {}
            }
        }
        ensure!(start.elapsed() < Duration::from_secs(60), "({n},{r},{mu}) over 60 s");
        out.push(format!("({n},{r},{mu}): H^{deg}"));
    }
    Ok(format!("final nonzero in H alone: {}", out.join(", ")))
}

fn c6_case4_minimal() -> Outcome {
    let start = Instant::now();
    for n in [4, 6, 10] {
        let rep = case4_check(n, &q(1, 1)).map_err(|e| e.to_string())?;
        // trace condition with four curvatures: λ₃ = 3nH / (2(n − 3))
        let expected = q(3 * n, 2 * (n - 3));
        ensure!(
            rep.lambda3_per_h == expected.to_string(),
            "n = {n}: λ₃/H = {}",
            rep.lambda3_per_h
        );
        ensure!(
            rep.only_root_is_zero && rep.verdict == Verdict::Pass,
            "n = {n}: H = 0 not forced"
        );
    }
    ensure!(start.elapsed() < Duration::from_secs(1), "over 1 s");
    Ok("n = 4, 6, 10 force H = 0".into())
}

/// The eight in-plane identities checked numerically from the printed solved forms.
fn lemma51_numeric(n: i64, r: i64, s: i64, rng: &mut impl Rng) -> Result<(), String> {
    let c = n - r - s - 1;
    for _ in 0..20 {
        let mut v = || sample::nonzero_rational(rng, 9, 5);
        let (la, lb, lc, mu, w1, w2) = (v(), v(), v(), v(), v(), v());
        let int = |k: i64| Rational::from(k);
        let p1 = &(&int(s) * &(&lb - &la)) * &(&(&lb * &lb) + &(&mu * &mu));
        let q1 = &(&(&mu * &int(c)) * &(&lc - &la)) * &(&lb - &lc);
        let r1 = &(&int(c) * &(&lc - &la)) * &(&(&lb * &lc) + &(&mu * &mu));
        let p2 = &(&int(s) * &(&lb - &la)) * &(&(&la * &la) + &(&mu * &mu));
        let q2 = &(&(&mu * &int(c)) * &(&la - &lc)) * &(&lb - &lc);
        let r2 = &(&int(c) * &(&lb - &lc)) * &(&(&la * &lc) + &(&mu * &mu));
        if p1.is_zero() || p2.is_zero() {
            continue;
        }
        let b2 = &(&(-&q1) * &w1 - &(&r1 * &w2)) / &p1;
        let b1 = &(&(&q1 * &w2) - &(&r1 * &w1)) / &p1;
        let a2 = &(&(-&q2) * &w1 - &(&r2 * &w2)) / &p2;
        let a1 = &(&(&q2 * &w2) - &(&r2 * &w1)) / &p2;
        let w = &(&w1 * &w1) + &(&w2 * &w2);
        let checks = [
            (
                &(&a1 * &a1) + &(&a2 * &a2),
                &(&(&(&q2 * &q2) + &(&r2 * &r2)) / &(&p2 * &p2)) * &w,
            ),
            (
                &(&b1 * &b1) + &(&b2 * &b2),
                &(&(&(&q1 * &q1) + &(&r1 * &r1)) / &(&p1 * &p1)) * &w,
            ),
            (&(&a1 * &w1) + &(&a2 * &w2), &(&(-&r2) / &p2) * &w),
            (&(&a2 * &w1) - &(&a1 * &w2), &(&(-&q2) / &p2) * &w),
            (&(&b1 * &w1) + &(&b2 * &w2), &(&(-&r1) / &p1) * &w),
            (&(&b2 * &w1) - &(&b1 * &w2), &(&(-&q1) / &p1) * &w),
            (
                &(&b1 * &a1) + &(&b2 * &a2),
                &(&(&(&q1 * &q2) + &(&r1 * &r2)) / &(&p1 * &p2)) * &w,
            ),
            (
                &(&a2 * &b1) - &(&a1 * &b2),
                &(&(&(&q2 * &r1) - &(&r2 * &q1)) / &(&p1 * &p2)) * &w,
            ),
        ];
        for (i, (lhs, rhs)) in checks.iter().enumerate() {
            ensure!(lhs == rhs, "({n},{r},{s}): identity {} fails numerically", i + 1);
        }
    }
    Ok(())
}

fn c7_lemma51() -> Outcome {
    let start = Instant::now();
    let mut rng = sample::rng(707);
    for (n, r, s) in [(8, 4, 2), (9, 4, 3)] {
        let params = CaseVIParams::new(n, r, s, q(1, 1), q(5, 1)).map_err(|e| e.to_string())?;
        let rep = lemma51_identities(&params).map_err(|e| e.to_string())?;
        ensure!(rep.identities.len() == 8, "expected eight identities");
        if let Some(bad) = rep.identities.iter().find(|c| !c.holds) {
            return Err(format!(
                "({n},{r},{s}): identity {} fails: {}",
                bad.index, bad.statement
            ));
        }
        lemma51_numeric(n, r, s, &mut rng)?;
    }
    ensure!(start.elapsed() < Duration::from_secs(60), "over 60 s");
    Ok("8/8 identities by cross-multiplication and by numeric evaluation at (8,4,2), (9,4,3)".into())
}

/// H-degree of the six-curvature final resultant, pinned on the first run.
const CASE6_FINAL_H_DEGREE: u32 = 30;

fn c8_theorem2() -> Outcome {
    let start = Instant::now();
    let params = CaseVIParams::new(8, 4, 2, q(1, 1), q(5, 1)).map_err(|e| e.to_string())?;
    let rep = theorem2_pipeline(&params, &PipelineOptions::default()).map_err(|e| e.to_string())?;
    let total = start.elapsed();
    ensure!(rep.verdict == Verdict::Pass, "verdict FAIL: {:?}", rep.notes);
    let get = |k: &str| rep.polys.get(k).ok_or_else(|| format!("missing stage {k}"));
    let (f, f1, g1, f2, f2s, g2, fin) = (
        get("f")?,
        get("f1")?,
        get("g1")?,
        get("f2")?,
        get("f2_squarefree")?,
        get("g2")?,
        rep.final_poly().ok_or("no final")?,
    );

    ensure!(
        fin.occurring_names() == ["H"],
        "final depends on {:?}",
        fin.occurring_names()
    );
    let deg = fin.degree_in("H").unwrap();
    ensure!(
        deg == CASE6_FINAL_H_DEGREE,
        "final H-degree {deg}, expected {CASE6_FINAL_H_DEGREE}"
    );
    for (name, p) in [("f1", f1), ("g1", g1)] {
        ensure!(
            p.occurring_names() == ["H", "lB", "lC"],
            "{name} depends on {:?}",
            p.occurring_names()
        );
    }
    for (name, p) in [("f2", f2), ("g2", g2)] {
        ensure!(
            p.occurring_names() == ["H", "lC"],
            "{name} depends on {:?}",
            p.occurring_names()
        );
    }

    let mut rng = sample::rng(808);
    let (n, r, s) = (8i64, 4i64, 2i64);
    let c = n - r - s - 1;
    // λ_A solved from the trace condition, denominator 2(r − 2) cleared per degree
    let clear = Rational::from(2 * (r - 2));
    let deg_a = f.degree_in("lA").unwrap();
    let norm = |la: &Rational, lb: &Rational, lc: &Rational, h: &Rational| {
        let int = |k: i64| Rational::from(k);
        &(&(&(&int(4 * (r - 2)) * &(la * la)) + &(&int(4 * s) * &(lb * lb))) + &(&int(4 * c) * &(lc * lc)))
            - &int(8)
            - &int(20)
            + &(&int(n * n) * &(h * h))
    };
    for _ in 0..10 {
        let mut v = || sample::rational(&mut rng, 9, 4);
        let (h, lb, lc) = (v(), v(), v());
        let la = &(&(&(&Rational::from(3 * n) * &h) / &Rational::from(2) - &(&Rational::from(s) * &lb))
            - &(&Rational::from(c) * &lc))
            / &Rational::from(r - 2);
        let at3 = point(&[("H", h.clone()), ("lB", lb.clone()), ("lC", lc.clone())]);
        let at4 = point(&[
            ("H", h.clone()),
            ("lA", la.clone()),
            ("lB", lb.clone()),
            ("lC", lc.clone()),
        ]);
        ensure!(
            f1.evaluate(&at3).unwrap() == &f.evaluate(&at4).unwrap() * &clear.pow(deg_a),
            "f1 is not f with the solved curvature substituted"
        );
        ensure!(
            g1.evaluate(&at3).unwrap() == &norm(&la, &lb, &lc, &h) * &clear.pow(2),
            "g1 is not the norm condition with the solved curvature substituted"
        );
    }
    let mut agree = 0;
    while agree < 4 {
        let pt = point(&[
            ("H", sample::nonzero_rational(&mut rng, 7, 3)),
            ("lC", sample::rational(&mut rng, 7, 3)),
        ]);
        match specialization_agrees(f1, g1, "lB", f2, &pt) {
            Some(true) => agree += 1,
            Some(false) => return Err(format!("f2 disagrees with the dense oracle at {pt:?}")),
            None => {}
        }
    }
    exact_divide(f2, f2s).map_err(|e| format!("square-free part does not divide f2: {e}"))?;
    ensure!(
        *g2 == f2s.partial_derivative("lC").unwrap(),
        "g2 is not the lC-derivative"
    );
    let mut agree = 0;
    while agree < 3 {
        let pt = point(&[("H", sample::nonzero_rational(&mut rng, 7, 3))]);
        match specialization_agrees(f2s, g2, "lC", fin, &pt) {
            Some(true) => agree += 1,
            Some(false) => return Err(format!("final disagrees with the dense oracle at {pt:?}")),
            None => {}
        }
    }

    let printed_f = rep
        .printed_vs_derived_diffs
        .iter()
        .find(|c| c.name == "f")
        .ok_or("no printed f comparison")?;
    ensure!(total < Duration::from_secs(600), "over 10 min");
    let stages: Vec<String> = rep
        .stages
        .iter()
        .map(|s| {
            let degs: Vec<String> = s.degree_map.iter().map(|(k, d)| format!("{k}{d}")).collect();
            format!("{}[{}] {}ms", s.name, degs.join(","), s.millis)
        })
        .collect();
    let discrepancy = if printed_f.status == MatchStatus::Different {
        "printed f differs, derived chain governs"
    } else {
        "printed f agrees"
    };
    Ok(format!(
        "final nonzero, H^{deg}, {:.1} s; {discrepancy}; stages {}",
        total.as_secs_f64(),
        stages.join(" ")
    ))
}

/// All unknowns, and those on which some kernel vector is nonzero.
fn nullspace_support(
    cfg: &resultant_forge::codazzi::FrameConfig,
) -> Result<(Vec<OmegaIndex>, BTreeSet<OmegaIndex>), String> {
    let sys = assemble(cfg, &RowSelection::all()).map_err(|e| e.to_string())?;
    let basis = sys.matrix.nullspace();
    for v in &basis {
        let image = sys.matrix.mul_vec(v).map_err(|e| e.to_string())?;
        ensure!(
            image.iter().all(Rational::is_zero),
            "nullspace vector is not in the kernel"
        );
    }
    let support = sys
        .unknowns
        .iter()
        .enumerate()
        .filter(|(i, _)| basis.iter().any(|v| !v[*i].is_zero()))
        .map(|(_, u)| *u)
        .collect();
    Ok((sys.unknowns, support))
}

fn c9_codazzi() -> Outcome {
    let start = Instant::now();
    let mut rng = sample::rng(909);
    let mut named = 0;
    for trial in 0..70 {
        let repeated = trial >= 50;
        let n = rng.random_range(5..=8);
        let cfg = random_config(&mut rng, n, repeated).map_err(|e| e.to_string())?;
        let rep = vanishing_report(&cfg, &RowSelection::all()).map_err(|e| e.to_string())?;
        ensure!(
            rep.missing.is_empty(),
            "trial {trial} (n = {n}): not forced: {:?}",
            rep.missing
        );
        // an unknown is forced to zero exactly when no kernel vector uses it
        let (unknowns, support) = nullspace_support(&cfg)?;
        for u in &unknowns {
            ensure!(
                rep.forced.contains(u) != support.contains(u),
                "trial {trial}: {u} forced = {} but in kernel support = {}",
                rep.forced.contains(u),
                support.contains(u)
            );
        }
        if repeated {
            let vals = cfg.lambda_values();
            let (i, j) = (0..vals.len())
                .flat_map(|i| (i + 1..vals.len()).map(move |j| (i, j)))
                .find(|&(i, j)| vals[i] == vals[j])
                .ok_or("no repeated pair")?;
            let (a, b) = (i + 3, j + 3);
            let stated: BTreeSet<OmegaIndex> = [
                OmegaIndex::new(n, a, b),
                OmegaIndex::new(1, a, b),
                OmegaIndex::new(2, a, b),
            ]
            .into();
            ensure!(
                rep.survivor_set == stated,
                "trial {trial}: survivors {:?}, stated exceptions for blocks {a},{b}",
                rep.survivors
            );
        } else {
            ensure!(rep.survivors.is_empty(), "trial {trial}: survivors {:?}", rep.survivors);
        }
        named += rep.expected_zero.len();
    }
    ensure!(start.elapsed() < Duration::from_secs(60), "over 60 s");
    Ok(format!(
        "50 distinct and 20 repeated-pair frames, {named} named unknowns forced"
    ))
}

fn c10_parser_roundtrip() -> Outcome {
    let start = Instant::now();
    let t = VarTable::new(["x", "y", "z", "H"]).unwrap();
    let mut rng = sample::rng(1010);
    for i in 0..500 {
        let terms = rng.random_range(0..=12);
        let deg = rng.random_range(0..=6);
        let p = sample::poly(&mut rng, &t, terms, deg);
        let text = format(&p);
        let back = parse_with_table(&text, &t).map_err(|e| format!("#{i} `{text}`: {e}"))?;
        ensure!(back == p, "#{i}: parse(format(p)) != p for `{text}`");
        ensure!(format(&back) == text, "#{i}: format not idempotent on `{text}`");
    }
    for raw in [
        "(x + y)^3 - 2/4*x*y",
        "-(H - 1)*(H + 1) + z^0",
        "x*x*x / 3 + 0*y",
        "  - - x + 7/2 - -3",
    ] {
        let once = format(&parse_with_table(raw, &Arc::clone(&t)).map_err(|e| format!("`{raw}`: {e}"))?);
        let twice = format(&parse_with_table(&once, &t).unwrap());
        ensure!(once == twice, "format not idempotent for `{raw}`");
    }
    ensure!(start.elapsed() < Duration::from_secs(5), "over 5 s");
    Ok("500 random polynomials round-trip".into())
}

fn c11_reproducibility() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_resultant-forge"))
            .args(["selfcheck", "--seed", "42", "--json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure!(
        a.status.success() && b.status.success(),
        "selfcheck exited {:?}",
        a.status.code()
    );
    ensure!(a.stdout == b.stdout, "reports differ");
    Ok(format!("two runs, {} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("resultant kernel", c1_resultant_kernel),
        ("determinant cross-check", c2_determinant_cross_check),
        ("zero resultant implies shared root", c3_common_factor_direction),
        ("five-curvature f derivation", c4_case5_consistency),
        ("five-curvature final resultant", c5_theorem1),
        ("four-curvature case is minimal", c6_case4_minimal),
        ("in-plane coefficient identities", c7_lemma51),
        ("six-curvature final resultant", c8_theorem2),
        ("codazzi vanishing", c9_codazzi),
        ("parser round-trip", c10_parser_roundtrip),
        ("selfcheck reproducibility", c11_reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2} s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
