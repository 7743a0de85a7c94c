use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::{FrameConfig, OmegaIndex};
use crate::error::{AlgebraError, Result};
use crate::linalg::RatMatrix;
use crate::rational::Rational;

/// One family of frame relations, instantiated over block indices
/// `3..=n-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowFamily {
    T3,
    T4,
    T5,
    T6,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T16,
    T17,
    T18,
    T19,
    T20,
    T21,
    T22,
    T23,
    T24,
    T25,
    T26,
    T28,
    T29,
    /// `ω_ij^n = ω_ji^n` for `i, j ≠ n` (the bracket of two directions
    /// orthogonal to the gradient kills `H`).
    Sym,
    /// `T5` and `T14` share `e_a(λ)`; their difference is derivative free.
    T5T14,
    /// `T6` and `T13` share `e_a(μ)` with opposite signs.
    T6T13,
    /// `T10` and `T19` share `e_n(λ)`.
    T10T19,
    /// `T11` and `T18` share `e_n(μ)` with opposite signs.
    T11T18,
}

use RowFamily::*;

impl RowFamily {
    pub const ALL: [RowFamily; 29] = [
        T3, T4, T5, T6, T8, T9, T10, T11, T12, T13, T14, T16, T17, T18, T19, T20, T21, T22, T23, T24, T25, T26, T28,
        T29, Sym, T5T14, T6T13, T10T19, T11T18,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            T3 => "T3",
            T4 => "T4",
            T5 => "T5",
            T6 => "T6",
            T8 => "T8",
            T9 => "T9",
            T10 => "T10",
            T11 => "T11",
            T12 => "T12",
            T13 => "T13",
            T14 => "T14",
            T16 => "T16",
            T17 => "T17",
            T18 => "T18",
            T19 => "T19",
            T20 => "T20",
            T21 => "T21",
            T22 => "T22",
            T23 => "T23",
            T24 => "T24",
            T25 => "T25",
            T26 => "T26",
            T28 => "T28",
            T29 => "T29",
            Sym => "SYM",
            T5T14 => "T5=T14",
            T6T13 => "T6=T13",
            T10T19 => "T10=T19",
            T11T18 => "T11=T18",
        }
    }

    /// Rows whose derivative side is zero only under the post-lemma
    /// assumptions.
    pub fn needs_post_lemma(self) -> bool {
        matches!(self, T5 | T6 | T10 | T11 | T13 | T14 | T18 | T19)
    }

    /// Every family admissible for `cfg`.
    pub fn admissible(cfg: &FrameConfig) -> Vec<RowFamily> {
        RowFamily::ALL
            .into_iter()
            .filter(|f| cfg.post_lemma33() || !f.needs_post_lemma())
            .collect()
    }
}

impl fmt::Display for RowFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RowFamily {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        if let Some(f) = RowFamily::ALL.into_iter().find(|f| f.tag() == t) {
            return Ok(f);
        }
        match t.as_str() {
            "T1" | "T2" | "T7" | "T15" | "T27" => Err(AlgebraError::InvalidParams(format!(
                "row {t} involves a derivative of a curvature that no assumption removes"
            ))),
            _ => Err(AlgebraError::InvalidParams(format!("unknown row `{s}`"))),
        }
    }
}

/// Families to instantiate, optionally restricted to instances whose
/// index parameters all lie in `indices`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowSelection {
    /// `None` selects every admissible family.
    pub families: Option<Vec<RowFamily>>,
    pub indices: Option<BTreeSet<usize>>,
}

impl RowSelection {
    pub fn all() -> Self {
        RowSelection::default()
    }

    pub fn of(families: impl IntoIterator<Item = RowFamily>) -> Self {
        RowSelection {
            families: Some(families.into_iter().collect()),
            indices: None,
        }
    }

    pub fn restricted_to(mut self, indices: impl IntoIterator<Item = usize>) -> Self {
        self.indices = Some(indices.into_iter().collect());
        self
    }

    /// Parses a comma-separated list of tags, or `all`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().eq_ignore_ascii_case("all") {
            return Ok(RowSelection::all());
        }
        let families = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(RowSelection::of(families))
    }

    pub(crate) fn families(&self, cfg: &FrameConfig) -> Result<Vec<RowFamily>> {
        match &self.families {
            None => Ok(RowFamily::admissible(cfg)),
            Some(list) => {
                if let Some(bad) = list.iter().find(|f| f.needs_post_lemma() && !cfg.post_lemma33()) {
                    return Err(AlgebraError::InvalidParams(format!(
                        "row {bad} contains derivative terms; it is admissible only with post_lemma33 set"
                    )));
                }
                let mut out = list.clone();
                out.sort();
                out.dedup();
                Ok(out)
            }
        }
    }

    fn keeps(&self, params: &[usize]) -> bool {
        self.indices
            .as_ref()
            .is_none_or(|set| params.iter().all(|p| set.contains(p)))
    }
}

/// Homogeneous system over canonical unknowns, one provenance tag per row.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub unknowns: Vec<OmegaIndex>,
    pub matrix: RatMatrix,
    pub provenance: Vec<String>,
}

impl ConstraintSystem {
    pub fn column_of(&self, idx: OmegaIndex) -> Option<usize> {
        self.unknowns.binary_search(&idx).ok()
    }
}

/// A row under construction: coefficients keyed by canonical unknown.
struct Row<'a> {
    cfg: &'a FrameConfig,
    coeffs: BTreeMap<OmegaIndex, Rational>,
}

impl<'a> Row<'a> {
    fn new(cfg: &'a FrameConfig) -> Self {
        Row {
            cfg,
            coeffs: BTreeMap::new(),
        }
    }

    /// Adds `c * ω_ij^k`.
    fn add(mut self, c: Rational, i: usize, j: usize, k: usize) -> Self {
        if let Some((sign, idx)) = OmegaIndex::new(i, j, k).canonical(self.cfg.convention()) {
            let entry = self.coeffs.entry(idx).or_insert_with(Rational::zero);
            *entry += &(&c * &Rational::from(sign));
            if entry.is_zero() {
                self.coeffs.remove(&idx);
            }
        }
        self
    }

    fn plus(mut self, other: Row<'a>, scale: i64) -> Self {
        for (idx, c) in other.coeffs {
            let entry = self.coeffs.entry(idx).or_insert_with(Rational::zero);
            *entry += &(&c * &Rational::from(scale));
            if entry.is_zero() {
                self.coeffs.remove(&idx);
            }
        }
        self
    }
}

struct Coeffs {
    lambda: Rational,
    mu: Rational,
    /// `λ + nH/2`.
    shifted: Rational,
    half_nh: Rational,
    n: usize,
}

fn single<'a>(cfg: &'a FrameConfig, family: RowFamily, a: usize, k: &Coeffs) -> Row<'a> {
    let la = cfg.curvature(a);
    let (l, mu, sh, n) = (&k.lambda, &k.mu, &k.shifted, k.n);
    let r = Row::new(cfg);
    match family {
        T3 => r
            .add(l - &la, 1, 2, a)
            .add(&la - l, 2, 1, a)
            .add(-mu, 2, 2, a)
            .add(-mu, 1, 1, a),
        T5 => r.add(&la - l, 1, a, 1).add(mu.clone(), 1, a, 2),
        T6 => r.add(&la - l, 1, a, 2).add(-mu, 1, a, 1),
        T13 => r.add(&la - l, 2, a, 1).add(mu.clone(), 2, a, 2),
        T14 => r.add(&la - l, 2, a, 2).add(-mu, 2, a, 1),
        T5T14 => single(cfg, T5, a, k).plus(single(cfg, T14, a, k), -1),
        T6T13 => single(cfg, T6, a, k).plus(single(cfg, T13, a, k), 1),
        T8 => r.add(&la + &k.half_nh, 1, a, n).add(-sh, a, 1, n).add(-mu, a, 2, n),
        T16 => r
            .add(&la + &k.half_nh, 2, a, n)
            .add(-sh, a, 2, n)
            .add(mu.clone(), a, 1, n),
        T25 => r
            .add(-sh, a, n, 1)
            .add(mu.clone(), a, n, 2)
            .add(l - &la, n, a, 1)
            .add(-mu, n, a, 2),
        T26 => r
            .add(-sh, a, n, 2)
            .add(-mu, a, n, 1)
            .add(l - &la, n, a, 2)
            .add(mu.clone(), n, a, 1),
        T28 => r.add(Rational::one(), n, a, n),
        _ => unreachable!("not a single-index family"),
    }
}

fn global<'a>(cfg: &'a FrameConfig, family: RowFamily, k: &Coeffs) -> Row<'a> {
    let (mu, sh, n) = (&k.mu, &k.shifted, k.n);
    let r = Row::new(cfg);
    match family {
        T4 => r
            .add(sh.clone(), 1, 2, n)
            .add(-sh, 2, 1, n)
            .add(-mu, 2, 2, n)
            .add(-mu, 1, 1, n),
        T10 => r.add(-sh, 1, n, 1).add(mu.clone(), 1, n, 2),
        T11 => r.add(-sh, 1, n, 2).add(-mu, 1, n, 1),
        T18 => r.add(-sh, 2, n, 1).add(mu.clone(), 2, n, 2),
        T19 => r.add(-sh, 2, n, 2).add(-mu, 2, n, 1),
        T10T19 => global(cfg, T10, k).plus(global(cfg, T19, k), -1),
        T11T18 => global(cfg, T11, k).plus(global(cfg, T18, k), 1),
        T12 => r.add(sh.clone(), n, 1, n).add(mu.clone(), n, 2, n),
        T20 => r.add(sh.clone(), n, 2, n).add(-mu, n, 1, n),
        _ => unreachable!("not a global family"),
    }
}

fn pair<'a>(cfg: &'a FrameConfig, family: RowFamily, a: usize, b: usize, k: &Coeffs) -> Row<'a> {
    let (la, lb) = (cfg.curvature(a), cfg.curvature(b));
    let (l, mu, n) = (&k.lambda, &k.mu, k.n);
    let r = Row::new(cfg);
    match family {
        T9 => r.add(&la - &lb, 1, a, b).add(&lb - l, a, 1, b).add(-mu, a, 2, b),
        T17 => r.add(&la - &lb, 2, a, b).add(&lb - l, a, 2, b).add(mu.clone(), a, 1, b),
        T21 => r
            .add(&lb - l, a, b, 1)
            .add(mu.clone(), a, b, 2)
            .add(l - &la, b, a, 1)
            .add(-mu, b, a, 2),
        T22 => r
            .add(&lb - l, a, b, 2)
            .add(-mu, a, b, 1)
            .add(l - &la, b, a, 2)
            .add(mu.clone(), b, a, 1),
        T23 => r.add(&lb + &k.half_nh, a, b, n).add(-(&la + &k.half_nh), b, a, n),
        T29 => r.add(-(&lb + &k.half_nh), a, n, b).add(&lb - &la, n, a, b),
        _ => unreachable!("not a pair family"),
    }
}

/// Instantiates the selected families over all index values.
pub fn assemble(cfg: &FrameConfig, selection: &RowSelection) -> Result<ConstraintSystem> {
    let families = selection.families(cfg)?;
    let n = cfg.n();
    let half_nh = -cfg.lambda_n();
    let k = Coeffs {
        lambda: cfg.lambda(),
        mu: cfg.mu().clone(),
        shifted: &cfg.lambda() + &half_nh,
        half_nh,
        n,
    };
    let blocks: Vec<usize> = cfg.blocks().collect();
    let mut rows: Vec<(String, BTreeMap<OmegaIndex, Rational>)> = Vec::new();
    let mut emit = |tag: String, row: Row<'_>| {
        if !row.coeffs.is_empty() {
            rows.push((tag, row.coeffs));
        }
    };
    for family in families {
        match family {
            T4 | T10 | T11 | T12 | T18 | T19 | T20 | T10T19 | T11T18 => {
                emit(family.tag().to_string(), global(cfg, family, &k));
            }
            T3 | T5 | T6 | T8 | T13 | T14 | T16 | T25 | T26 | T28 | T5T14 | T6T13 => {
                for &a in blocks.iter().filter(|&&a| selection.keeps(&[a])) {
                    emit(format!("{family}[a={a}]"), single(cfg, family, a, &k));
                }
            }
            T9 | T17 | T29 | T21 | T22 | T23 => {
                // T21..T23 are symmetric under a <-> b; one instance per pair
                let ordered = matches!(family, T9 | T17 | T29);
                for &a in &blocks {
                    for &b in &blocks {
                        if a == b || (!ordered && a > b) || !selection.keeps(&[a, b]) {
                            continue;
                        }
                        emit(format!("{family}[a={a},b={b}]"), pair(cfg, family, a, b, &k));
                    }
                }
            }
            T24 => {
                for &a in &blocks {
                    for &b in blocks.iter().filter(|&&b| b > a) {
                        for &c in blocks.iter().filter(|&&c| c != a && c != b) {
                            if !selection.keeps(&[a, b, c]) {
                                continue;
                            }
                            let (la, lb, lc) = (cfg.curvature(a), cfg.curvature(b), cfg.curvature(c));
                            let row = Row::new(cfg).add(&lb - &lc, a, b, c).add(&lc - &la, b, a, c);
                            emit(format!("T24[a={a},b={b},c={c}]"), row);
                        }
                    }
                }
            }
            Sym => {
                for i in 1..n {
                    for j in (i + 1)..n {
                        if !selection.keeps(&[i, j]) {
                            continue;
                        }
                        let row = Row::new(cfg)
                            .add(Rational::one(), i, j, n)
                            .add(-Rational::one(), j, i, n);
                        emit(format!("SYM[i={i},j={j}]"), row);
                    }
                }
            }
        }
    }

    let unknowns: Vec<OmegaIndex> = rows
        .iter()
        .flat_map(|(_, r)| r.keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let col: BTreeMap<OmegaIndex, usize> = unknowns.iter().enumerate().map(|(c, u)| (*u, c)).collect();
    let mut matrix = RatMatrix::zero(rows.len(), unknowns.len());
    let mut provenance = Vec::with_capacity(rows.len());
    for (r, (tag, coeffs)) in rows.into_iter().enumerate() {
        for (idx, c) in coeffs {
            matrix.set(r, col[&idx], c);
        }
        provenance.push(tag);
    }
    Ok(ConstraintSystem {
        unknowns,
        matrix,
        provenance,
    })
}
