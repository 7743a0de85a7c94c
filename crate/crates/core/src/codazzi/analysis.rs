use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::rows::{assemble, ConstraintSystem, RowFamily, RowSelection};
use super::{ConfigSummary, FrameConfig, OmegaIndex, SignConvention};
use crate::error::{AlgebraError, Result};
use crate::hypersurface::Verdict;
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// Unknowns that are zero in every solution: pivot columns whose reduced
/// row has no free-column entries.
pub fn forced_zero(sys: &ConstraintSystem) -> BTreeSet<OmegaIndex> {
    let (r, pivots) = sys.matrix.rref();
    pivots
        .iter()
        .enumerate()
        .filter(|&(row, _)| r.row(row).iter().filter(|c| !c.is_zero()).count() == 1)
        .map(|(_, &col)| sys.unknowns[col])
        .collect()
}

/// Whether the linear form `target` (over canonical unknowns) is a
/// combination of the system's rows.
fn implied(sys: &ConstraintSystem, target: &BTreeMap<OmegaIndex, Rational>) -> bool {
    let mut extra = vec![Rational::zero(); sys.unknowns.len()];
    for (idx, c) in target {
        match sys.column_of(*idx) {
            Some(col) => extra[col] = c.clone(),
            None if c.is_zero() => {}
            None => return false,
        }
    }
    let mut rows: Vec<Vec<Rational>> = (0..sys.matrix.rows()).map(|i| sys.matrix.row(i).to_vec()).collect();
    let base = sys.matrix.rank();
    rows.push(extra);
    let grown = RatMatrix::from_rows(rows, sys.unknowns.len()).expect("consistent widths");
    grown.rank() == base
}

fn linear_form(cfg: &FrameConfig, terms: &[(i64, usize, usize, usize)]) -> BTreeMap<OmegaIndex, Rational> {
    let mut out = BTreeMap::new();
    for &(c, i, j, k) in terms {
        if let Some((sign, idx)) = OmegaIndex::new(i, j, k).canonical(cfg.convention()) {
            let e = out.entry(idx).or_insert_with(Rational::zero);
            *e += &Rational::from(c * i64::from(sign));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Unknowns the vanishing conclusions name, grouped by where they sit in
/// the frame, with the exceptions that apply to repeated curvatures.
#[derive(Clone, Debug, Default)]
pub struct ExpectedVanishing {
    pub groups: BTreeMap<&'static str, BTreeSet<OmegaIndex>>,
    pub exceptions: BTreeSet<OmegaIndex>,
}

impl ExpectedVanishing {
    /// Every named unknown that is not an exception.
    pub fn expected_zero(&self) -> BTreeSet<OmegaIndex> {
        self.groups
            .values()
            .flatten()
            .filter(|u| !self.exceptions.contains(u))
            .copied()
            .collect()
    }

    pub fn named(&self) -> BTreeSet<OmegaIndex> {
        self.groups
            .values()
            .flatten()
            .copied()
            .chain(self.exceptions.iter().copied())
            .collect()
    }
}

pub fn expected_vanishing(cfg: &FrameConfig) -> ExpectedVanishing {
    let n = cfg.n();
    let conv = cfg.convention();
    let canon = |i, j, k| OmegaIndex::new(i, j, k).canonical(conv).map(|(_, idx)| idx);
    let mut out = ExpectedVanishing::default();
    let mut add = |group: &'static str, list: &[(usize, usize, usize)]| {
        let set = out.groups.entry(group).or_default();
        set.extend(list.iter().filter_map(|&(i, j, k)| canon(i, j, k)));
    };
    add(
        "plane_normal",
        &[
            (2, 2, n),
            (1, 1, n),
            (1, 2, n),
            (2, 1, n),
            (2, n, 1),
            (1, n, 2),
            (2, n, 2),
            (1, n, 1),
        ],
    );
    add("gradient_flow", &[(n, 1, n), (n, 2, n), (n, n, 1), (n, n, 2)]);
    let blocks: Vec<usize> = cfg.blocks().collect();
    let mut exceptions = Vec::new();
    for &a in &blocks {
        add("gradient_flow", &[(n, n, a)]);
        add(
            "plane_block_normal",
            &[
                (1, a, n),
                (2, a, n),
                (a, 1, n),
                (a, 2, n),
                (1, n, a),
                (2, n, a),
                (a, n, 1),
                (a, n, 2),
            ],
        );
        add("gradient_block_plane", &[(n, a, 1), (n, a, 2), (n, 1, a), (n, 2, a)]);
        for &b in blocks.iter().filter(|&&b| b != a) {
            add("block_pairs_normal", &[(a, b, n), (b, a, n), (a, n, b), (n, b, a)]);
            add(
                "block_pairs_plane",
                &[(a, b, 1), (a, b, 2), (a, 1, b), (a, 2, b), (1, a, b), (2, a, b)],
            );
            if cfg.curvature(a) == cfg.curvature(b) {
                exceptions.extend([canon(n, b, a), canon(1, a, b), canon(2, a, b)].into_iter().flatten());
            }
        }
    }
    out.exceptions.extend(exceptions);
    out
}

fn names(set: &BTreeSet<OmegaIndex>) -> Vec<String> {
    set.iter().map(ToString::to_string).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub config: ConfigSummary,
    pub rows_used: usize,
    pub row_families: Vec<String>,
    pub unknown_count: usize,
    pub nullspace_dim: usize,
    pub forced_zero: Vec<String>,
    pub expected_zero: Vec<String>,
    /// Expected unknowns the system leaves free.
    pub missing: Vec<String>,
    /// Named unknowns allowed to survive because curvatures repeat.
    pub exceptions: Vec<String>,
    /// Named unknowns (expected or exceptional) that are not forced.
    pub survivors: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub forced: BTreeSet<OmegaIndex>,
    #[serde(skip)]
    pub survivor_set: BTreeSet<OmegaIndex>,
    #[serde(skip)]
    pub exception_set: BTreeSet<OmegaIndex>,
}

/// Assembles the selected rows, computes the forced-zero set and compares
/// it with the expected vanishing lists.
pub fn vanishing_report(cfg: &FrameConfig, selection: &RowSelection) -> Result<VanishingReport> {
    let sys = assemble(cfg, selection)?;
    let forced = forced_zero(&sys);
    let expected = expected_vanishing(cfg);
    let expected_zero = expected.expected_zero();
    let missing: BTreeSet<OmegaIndex> = expected_zero.difference(&forced).copied().collect();
    let survivors: BTreeSet<OmegaIndex> = expected.named().difference(&forced).copied().collect();
    let rank = sys.matrix.rank();
    Ok(VanishingReport {
        config: cfg.summary(),
        rows_used: sys.matrix.rows(),
        row_families: selection.families(cfg)?.iter().map(|f| f.tag().to_string()).collect(),
        unknown_count: sys.unknowns.len(),
        nullspace_dim: sys.unknowns.len() - rank,
        forced_zero: names(&forced),
        expected_zero: names(&expected_zero),
        missing: names(&missing),
        exceptions: names(&expected.exceptions),
        survivors: names(&survivors),
        verdict: if missing.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        forced,
        survivor_set: survivors,
        exception_set: expected.exceptions,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockCheck {
    pub a: usize,
    pub lambda_a: String,
    /// `λ_a² = μ²`.
    pub squares_equal: bool,
    /// Whether `ω_12^a` is forced to zero by the plane rows of block `a`.
    pub omega12_forced_zero: bool,
    pub chain: Vec<String>,
    /// For `λ_a² = μ²`: whether the chain ends in `λ_a = 0`, contradicting
    /// `μ ≠ 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contradiction: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateMuReport {
    pub config: ConfigSummary,
    /// `e_n(μ) = 0`, read from the `e_1` row against the gradient once the
    /// plane-normal coefficients vanish.
    pub gradient_mu_derivative_zero: bool,
    pub blocks: Vec<BlockCheck>,
    pub verdict: Verdict,
}

/// For each block `a`: the plane rows give `ω_12^a (λ_a² − μ²) = 0`; when
/// `λ_a² = μ²` the gradient rows force `ω_aa^n = 0` and then `λ_a = 0`,
/// which contradicts `μ ≠ 0`.
pub fn degenerate_mu_check(cfg: &FrameConfig) -> Result<DegenerateMuReport> {
    if !cfg.post_lemma33() {
        return Err(AlgebraError::InvalidParams(
            "degenerate_mu_check needs post_lemma33 (λ = 0)".into(),
        ));
    }
    let n = cfg.n();
    let mu = cfg.mu();
    let half_nh = -cfg.lambda_n();

    // Derivative-free rows only; e_n(μ) is not assumed.
    let plain = cfg.clone().with_post_lemma33(false).with_lambda(Rational::zero());
    let free_rows = assemble(&plain, &RowSelection::all())?;
    let forced = forced_zero(&free_rows);
    let plane_normal = [OmegaIndex::new(1, n, 1), OmegaIndex::new(1, n, 2)].map(|u| {
        u.canonical(cfg.convention())
            .map(|(_, idx)| forced.contains(&idx))
            .unwrap_or(true)
    });
    let gradient_mu_derivative_zero = plane_normal.iter().all(|&b| b);

    let mut blocks = Vec::new();
    for a in cfg.blocks() {
        let la = cfg.curvature(a);
        let squares_equal = &la * &la == mu * mu;
        let sel = RowSelection::of([RowFamily::T3, RowFamily::T5, RowFamily::T5T14, RowFamily::T6T13])
            .restricted_to([1, 2, a]);
        let sys = assemble(cfg, &sel)?;
        let target = OmegaIndex::new(1, 2, a);
        let omega12_forced_zero = forced_zero(&sys).contains(&target);
        let mut chain = vec![format!(
            "plane rows of block {a}: {target} * (λ_a² − μ²) = 0 with λ_a² − μ² = {}",
            &(&la * &la) - &(mu * mu)
        )];
        let contradiction = if squares_equal {
            chain.push(format!("λ_a = {la} = ±μ, so e_n(λ_a) = ±e_n(μ) = 0"));
            let coef = &half_nh + &la;
            chain.push(format!(
                "T27: e_n(λ_a) = −(nH/2 + λ_a) w_{{{a},{n}}}^{{{a}}} with nH/2 + λ_a = {coef} ≠ 0, so w_{{{a},{n}}}^{{{a}}} = 0 and w_{{{a},{a}}}^{{{n}}} = 0"
            ));
            let residual = &half_nh * &la;
            chain.push(format!(
                "e_n(w_{{{a},{a}}}^{{{n}}}) − (w_{{{a},{a}}}^{{{n}}})² = −(nH/2) λ_a becomes 0 = −{residual}"
            ));
            let contradicts = !residual.is_zero() && gradient_mu_derivative_zero && !coef.is_zero();
            if contradicts {
                chain.push("forces λ_a = 0, hence μ = 0: contradiction".into());
            }
            Some(contradicts)
        } else {
            chain.push(format!(
                "λ_a² ≠ μ², so {target} = 0 ({})",
                if omega12_forced_zero { "forced" } else { "NOT forced" }
            ));
            None
        };
        blocks.push(BlockCheck {
            a,
            lambda_a: la.to_string(),
            squares_equal,
            omega12_forced_zero,
            chain,
            contradiction,
        });
    }
    let ok = gradient_mu_derivative_zero
        && blocks.iter().all(|b| match b.contradiction {
            Some(c) => c,
            None => b.omega12_forced_zero,
        });
    Ok(DegenerateMuReport {
        config: cfg.summary(),
        gradient_mu_derivative_zero,
        blocks,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SignCheck {
    pub convention: SignConvention,
    /// `ω_22^n = ω_11^n` follows from the derivative-eliminated rows.
    pub diagonal_pairing: bool,
    /// `ω_12^n = −ω_21^n` follows as well.
    pub offdiagonal_pairing: bool,
}

/// Tests both compatibility sign conventions against the pairings that
/// the derivative-eliminated `e_1`/`e_2` gradient rows must produce.
pub fn sign_convention_check(cfg: &FrameConfig) -> Result<Vec<SignCheck>> {
    let n = cfg.n();
    [SignConvention::Uniform, SignConvention::Lorentz]
        .into_iter()
        .map(|conv| {
            let c = cfg.clone().with_convention(conv);
            let sys = assemble(&c, &RowSelection::of([RowFamily::T10T19, RowFamily::T11T18]))?;
            let diag = linear_form(&c, &[(1, 2, 2, n), (-1, 1, 1, n)]);
            let off = linear_form(&c, &[(1, 1, 2, n), (1, 2, 1, n)]);
            Ok(SignCheck {
                convention: conv,
                diagonal_pairing: implied(&sys, &diag),
                offdiagonal_pairing: implied(&sys, &off),
            })
        })
        .collect()
}
