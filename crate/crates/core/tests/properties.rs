use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use resultant_forge::codazzi::{assemble, forced_zero, random_config, RowFamily, RowSelection};
use resultant_forge::hypersurface::{
    eliminate_lambda_a, theorem2_pipeline, CaseVI, CaseVIParams, PipelineOptions, PipelineReport,
};
use resultant_forge::linalg::{det_bareiss, det_minor_expansion, exact_divide, RatMatrix};
use resultant_forge::parse::{format, parse_with_table};
use resultant_forge::poly::{squarefree_part_in, univariate_gcd, DenseUni, Poly, VarTable};
use resultant_forge::rational::{q, Rational};
use resultant_forge::resultant::resultant;
use resultant_forge::sample;

fn five() -> Arc<VarTable> {
    static T: OnceLock<Arc<VarTable>> = OnceLock::new();
    T.get_or_init(|| VarTable::new(["a", "b", "c", "x", "y"]).unwrap())
        .clone()
}

fn uni() -> Arc<VarTable> {
    static T: OnceLock<Arc<VarTable>> = OnceLock::new();
    T.get_or_init(|| VarTable::new(["x"]).unwrap()).clone()
}

fn poly5() -> impl Strategy<Value = Poly> {
    any::<u64>().prop_map(|s| sample::poly(&mut sample::rng(s), &five(), 8, 6))
}

fn univariate(max_deg: u32) -> impl Strategy<Value = Poly> {
    (any::<u64>(), 1..=max_deg).prop_map(|(s, d)| sample::univariate(&mut sample::rng(s), &uni(), "x", d))
}

fn point5() -> impl Strategy<Value = BTreeMap<String, Rational>> {
    any::<u64>().prop_map(|s| sample::assignment(&mut sample::rng(s), &five()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_axioms(p in poly5(), q in poly5(), r in poly5()) {
        let one = Poly::one(&five());
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p + &Poly::zero(&five()), p.clone());
        prop_assert_eq!(&p * &one, p.clone());
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn parse_inverts_format(p in poly5()) {
        let text = format(&p);
        let back = parse_with_table(&text, &five()).unwrap();
        prop_assert_eq!(format(&back), text);
        prop_assert_eq!(back, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn degree_is_additive(p in poly5(), q in poly5(), var in 0usize..5) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let v = five().name(var).to_string();
        let d = |f: &Poly| f.degree_in(&v).unwrap();
        prop_assert_eq!(d(&(&p * &q)), d(&p) + d(&q));
    }

    #[test]
    fn derivative_rules(p in poly5(), q in poly5(), k in -5i64..5) {
        let dx = |f: &Poly| f.partial_derivative("x").unwrap();
        let dy = |f: &Poly| f.partial_derivative("y").unwrap();
        let c = Rational::from(k);
        prop_assert_eq!(dx(&(&p.scale(&c) + &q)), &dx(&p).scale(&c) + &dx(&q));
        prop_assert_eq!(dx(&(&p * &q)), &(&dx(&p) * &q) + &(&p * &dx(&q)));
        prop_assert_eq!(dx(&dy(&p)), dy(&dx(&p)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly5(), q in poly5(), pt in point5()) {
        let ev = |f: &Poly| f.evaluate(&pt).unwrap();
        prop_assert_eq!(ev(&(&p * &q)), &ev(&p) * &ev(&q));
        prop_assert_eq!(ev(&(&p + &q)), &ev(&p) + &ev(&q));
    }

    #[test]
    fn exact_division_recovers_factor(p in poly5(), q in poly5()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!(exact_divide(&(&p * &q), &q).unwrap(), p);
    }

    #[test]
    fn printing_ignores_insertion_order(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let p = sample::poly(&mut rng, &five(), 10, 5);
        let mut terms: Vec<(Vec<u32>, Rational)> =
            p.terms().iter().map(|(m, c)| (m.exps().to_vec(), c.clone())).collect();
        terms.shuffle(&mut rng);
        let rebuilt = Poly::from_terms(&five(), terms).unwrap();
        prop_assert_eq!(format(&rebuilt), format(&p));
    }

    #[test]
    fn format_is_idempotent_on_text(p in poly5(), q in poly5()) {
        // an unnormalized rendering: product and sum left unexpanded
        let raw = format!("({}) * ({}) - ({})", format(&p), format(&q), format(&q));
        let once = format(&parse_with_table(&raw, &five()).unwrap());
        let twice = format(&parse_with_table(&once, &five()).unwrap());
        prop_assert_eq!(once, twice);
    }
}

fn two() -> Arc<VarTable> {
    VarTable::new(["x", "y"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn determinant_paths_agree_and_alternate(seed in any::<u64>(), size in 1usize..=4) {
        let mut rng = sample::rng(seed);
        let t = two();
        let m = sample::poly_matrix(&mut rng, &t, size, 3, 2);
        let d = det_minor_expansion(&m).unwrap();
        prop_assert_eq!(&d, &det_bareiss(&m).unwrap());
        if size >= 2 {
            let mut swapped = m.clone();
            swapped.swap_rows(0, size - 1);
            prop_assert_eq!(det_bareiss(&swapped).unwrap(), -&d);
        }
        let pt = sample::assignment(&mut rng, &t);
        prop_assert_eq!(d.evaluate(&pt).unwrap(), m.evaluate(&pt).unwrap().det().unwrap());
    }

    #[test]
    fn nullspace_vectors_are_exact_solutions(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7) {
        let m: RatMatrix = sample::rat_matrix(&mut sample::rng(seed), rows, cols, 4);
        let basis = m.nullspace();
        prop_assert_eq!(m.rank() + basis.len(), cols);
        for v in &basis {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Rational::is_zero));
        }
    }
}

fn res_value(f: &Poly, g: &Poly) -> Rational {
    resultant(f, g, "x")
        .unwrap()
        .as_constant()
        .unwrap_or_else(Rational::zero)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resultant_swap_sign(f in univariate(4), g in univariate(4)) {
        let (m, n) = (f.degree_in("x").unwrap(), g.degree_in("x").unwrap());
        let sign = if (m * n) % 2 == 0 { Rational::one() } else { -Rational::one() };
        prop_assert_eq!(res_value(&f, &g), &sign * &res_value(&g, &f));
    }

    #[test]
    fn resultant_is_multiplicative(f in univariate(3), g in univariate(3), h in univariate(3)) {
        prop_assert_eq!(res_value(&f, &(&g * &h)), &res_value(&f, &g) * &res_value(&f, &h));
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(f in univariate(4), g in univariate(4)) {
        let shares = univariate_gcd(&f, &g, "x").unwrap().degree_in("x").unwrap() >= 1;
        let euclid = DenseUni::from_poly(&f, "x").unwrap().resultant(&DenseUni::from_poly(&g, "x").unwrap());
        prop_assert_eq!(res_value(&f, &g), euclid);
        prop_assert_eq!(res_value(&f, &g).is_zero(), shares);
    }

    #[test]
    fn resultant_commutes_with_specialization(seed in any::<u64>()) {
        let t = VarTable::new(["x", "y", "z"]).unwrap();
        let mut rng = sample::rng(seed);
        let f = &sample::univariate(&mut rng, &t, "x", 2) + &sample::poly(&mut rng, &t, 4, 3);
        let g = &sample::univariate(&mut rng, &t, "x", 2) + &sample::poly(&mut rng, &t, 4, 3);
        let (df, dg) = (f.degree_in("x").unwrap(), g.degree_in("x").unwrap());
        prop_assume!(df > 0 && dg > 0);
        let r = resultant(&f, &g, "x").unwrap();
        let mut pt = sample::assignment(&mut rng, &t);
        pt.remove("x");
        let (fs, gs) = (f.specialize(&pt).unwrap(), g.specialize(&pt).unwrap());
        prop_assume!(fs.degree_in("x").unwrap() == df && gs.degree_in("x").unwrap() == dg);
        let uni = DenseUni::from_poly(&fs, "x").unwrap().resultant(&DenseUni::from_poly(&gs, "x").unwrap());
        prop_assert_eq!(r.evaluate(&pt).unwrap(), uni);
    }

    #[test]
    fn squarefree_part_drops_repeated_factors(seed in any::<u64>()) {
        let t = VarTable::new(["x", "y"]).unwrap();
        let mut rng = sample::rng(seed);
        let a = &sample::univariate(&mut rng, &t, "x", 1) + &sample::poly(&mut rng, &t, 2, 1);
        let b = &sample::univariate(&mut rng, &t, "x", 2) + &sample::poly(&mut rng, &t, 2, 1);
        prop_assume!(a.degree_in("x").unwrap() == 1 && b.degree_in("x").unwrap() == 2);
        let p = &(&a * &a) * &b;
        let sq = squarefree_part_in(&p, "x").unwrap();
        prop_assert!(sq.degree_in("x").unwrap() <= 3);
        prop_assert!(exact_divide(&p, &sq).is_ok());
        prop_assert!(exact_divide(&sq, &a).is_ok());
    }
}

fn case6() -> (CaseVIParams, CaseVI) {
    let params = CaseVIParams::new(8, 4, 2, q(1, 1), q(5, 1)).unwrap();
    let sys = CaseVI::new(&params);
    (params, sys)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// `p` with the curvature solved from the trace condition, denominators
    /// cleared per degree, matches the eliminated polynomial pointwise.
    #[test]
    fn elimination_commutes_with_evaluation(seed in any::<u64>()) {
        let (params, sys) = case6();
        let mut rng = sample::rng(seed);
        let vars = sys.vars().clone();
        let p = &sample::poly(&mut rng, &vars, 6, 3) + &sys.norm_constraint();
        let eliminated = eliminate_lambda_a(&p, &params).unwrap();
        prop_assert_eq!(eliminated.degree_in("lA").unwrap(), 0);
        let mut pt = sample::assignment(&mut rng, &vars);
        let (h, lb, lc) = (pt["H"].clone(), pt["lB"].clone(), pt["lC"].clone());
        // trace condition: 2 lA + 2 lB + lC = 12 H at (8, 4, 2)
        let la = &(&(&q(12, 1) * &h) - &(&q(2, 1) * &lb) - &lc) / &q(2, 1);
        pt.insert("lA".into(), la);
        let clear = q(4, 1).pow(p.degree_in("lA").unwrap());
        prop_assert_eq!(eliminated.evaluate(&pt).unwrap(), &p.evaluate(&pt).unwrap() * &clear);
        prop_assert!(eliminate_lambda_a(&sys.trace_constraint(), &params).unwrap().is_zero());
    }
}

fn theorem2_report() -> &'static PipelineReport {
    static R: OnceLock<PipelineReport> = OnceLock::new();
    R.get_or_init(|| {
        let params = CaseVIParams::new(8, 4, 2, q(1, 1), q(5, 1)).unwrap();
        theorem2_pipeline(&params, &PipelineOptions::default()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn theorem2_final_matches_specialized_chain(h in (-40i64..40, 1i64..7)) {
        let rep = theorem2_report();
        let h = q(h.0, h.1);
        let at = BTreeMap::from([("H".to_string(), h)]);
        let f2 = rep.polys["f2_squarefree"].specialize(&at).unwrap();
        let g2 = rep.polys["g2"].specialize(&at).unwrap();
        let (d1, d2) = (rep.polys["f2_squarefree"].degree_in("lC").unwrap(), rep.polys["g2"].degree_in("lC").unwrap());
        prop_assume!(f2.degree_in("lC").unwrap() == d1 && g2.degree_in("lC").unwrap() == d2);
        let uni = DenseUni::from_poly(&f2, "lC").unwrap().resultant(&DenseUni::from_poly(&g2, "lC").unwrap());
        prop_assert_eq!(rep.final_poly().unwrap().evaluate(&at).unwrap(), uni);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn vanishing_set_grows_with_rows(seed in any::<u64>(), n in 5usize..=7, repeated in any::<bool>()) {
        let mut rng = sample::rng(seed);
        let cfg = random_config(&mut rng, n, repeated).unwrap();
        let mut families = RowFamily::admissible(&cfg);
        families.shuffle(&mut rng);
        let cut_small = rng.random_range(0..=families.len());
        let cut_large = rng.random_range(cut_small..=families.len());
        let forced = |k: usize| {
            let sel = RowSelection::of(families[..k].iter().copied());
            forced_zero(&assemble(&cfg, &sel).unwrap())
        };
        let (small, large, all) = (forced(cut_small), forced(cut_large), forced(families.len()));
        prop_assert!(small.is_subset(&large));
        prop_assert!(large.is_subset(&all));
    }

    #[test]
    fn pair_rows_force_both_unknowns(a in -20i64..20, b in -20i64..20, h in 1i64..5) {
        let (la, lb) = (q(a, 3), q(b, 3));
        prop_assume!(la != lb);
        let cfg = resultant_forge::codazzi::FrameConfig::new(5, vec![la, lb], q(1, 1), q(h, 1));
        prop_assume!(cfg.is_ok());
        let cfg = cfg.unwrap().with_post_lemma33(true);
        let both = assemble(&cfg, &RowSelection::of([RowFamily::T23, RowFamily::Sym]).restricted_to([3, 4])).unwrap();
        prop_assert_eq!(both.unknowns.len(), 2);
        prop_assert_eq!(forced_zero(&both).len(), 2);
        let one = assemble(&cfg, &RowSelection::of([RowFamily::T23]).restricted_to([3, 4])).unwrap();
        let free = one.unknowns.len() - one.matrix.rank();
        prop_assert_eq!(free, 1);
    }
}
