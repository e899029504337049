//! Exhaustive search over small Cartan data.
//!
//! Candidates are built row by row from an entry pool, so every candidate is
//! already normalized. Cheap filters run first, survivors are deduplicated by
//! canonical form and each class is classified once.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::admissibility::{check_lemma31, Budget};
use crate::cartan::{canonical_form, structure_flags, CartanDatum};
use crate::classify::{classify, ClassifyBudget, Outcome};
use crate::codec;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// Even, diagonal 2.
    Circle,
    /// Odd, diagonal 2.
    Bullet,
    /// Odd isotropic.
    Otimes,
}

impl Kind {
    fn parity(self) -> u8 {
        match self {
            Kind::Circle => 0,
            _ => 1,
        }
    }

    fn diagonal(self) -> Rational {
        match self {
            Kind::Otimes => int(0),
            _ => int(2),
        }
    }
}

fn default_pool() -> Vec<String> {
    ["0", "1", "-1", "2", "-2", "1/2", "-1/2"].map(String::from).to_vec()
}

fn default_kinds() -> Vec<Kind> {
    vec![Kind::Circle, Kind::Bullet, Kind::Otimes]
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    /// Number of vertices. Derived from `base` when that is given.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_pool")]
    pub pool: Vec<String>,
    #[serde(default = "default_kinds")]
    pub kinds: Vec<Kind>,
    /// Fixed leading block; only the last row and column are enumerated.
    #[serde(default)]
    pub base: Option<Value>,
    #[serde(default)]
    pub require_singular: bool,
    #[serde(default = "yes")]
    pub require_indecomposable: bool,
    #[serde(default = "yes")]
    pub require_elemental: bool,
    #[serde(default)]
    pub budget: Option<Budget>,
    #[serde(default)]
    pub growth_height: Option<usize>,
    #[serde(default)]
    pub dim_budget: Option<usize>,
    /// Worker threads; 0 or absent uses the rayon default.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl SearchSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Search over all `n`-vertex data with the default pool.
    pub fn full(n: usize) -> Self {
        SearchSpec {
            n: Some(n),
            pool: default_pool(),
            kinds: default_kinds(),
            base: None,
            require_singular: true,
            require_indecomposable: true,
            require_elemental: true,
            budget: None,
            growth_height: None,
            dim_budget: None,
            workers: None,
        }
    }

    /// One-vertex extensions of `base`.
    pub fn extension(base: &CartanDatum) -> Self {
        SearchSpec {
            n: None,
            base: Some(codec::to_value(base)),
            ..Self::full(base.n() + 1)
        }
    }

    pub fn classify_budget(&self) -> ClassifyBudget {
        let mut b = ClassifyBudget::default();
        if let Some(o) = self.budget {
            b.orbit = o;
        }
        if let Some(h) = self.growth_height {
            b.growth_height = h;
        }
        if let Some(d) = self.dim_budget {
            b.dim_budget = d;
        }
        b
    }
}

/// Enumeration plan: for each vertex the list of admissible rows, plus the
/// fixed base rows with their possible last-column entries.
struct Plan {
    n: usize,
    base: Option<CartanDatum>,
    /// Choices for each base row's new last entry.
    column: Vec<Vec<Rational>>,
    /// Free rows: (parity, full row).
    rows: Vec<Vec<(u8, Vec<Rational>)>>,
}

impl Plan {
    fn new(spec: &SearchSpec) -> Result<Self> {
        let pool = spec.pool.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>()?;
        let base = spec.base.as_ref().map(codec::from_value).transpose()?;
        let n = match (&base, spec.n) {
            (Some(b), Some(n)) if n != b.n() + 1 => {
                return Err(Error::Field {
                    field: "n".into(),
                    message: format!("extension of a {}-vertex base has {} vertices", b.n(), b.n() + 1),
                })
            }
            (Some(b), _) => b.n() + 1,
            (None, Some(n)) if n > 0 => n,
            _ => {
                return Err(Error::Field {
                    field: "n".into(),
                    message: "missing or zero".into(),
                })
            }
        };
        let free: Vec<usize> = match &base {
            Some(b) => vec![b.n()],
            None => (0..n).collect(),
        };
        let rows = free
            .iter()
            .map(|&i| {
                let mut out = Vec::new();
                for &kind in &spec.kinds {
                    for_each_tuple(&pool, n - 1, &mut |t| {
                        let mut row = t.to_vec();
                        row.insert(i, kind.diagonal());
                        if row_is_normalized(&row, i) {
                            out.push((kind.parity(), row));
                        }
                    });
                }
                out
            })
            .collect();
        let column = match &base {
            Some(b) => (0..b.n())
                .map(|i| {
                    pool.iter()
                        .filter(|x| {
                            let mut row = b.row(i).to_vec();
                            row.push((*x).clone());
                            row_is_normalized(&row, i)
                        })
                        .cloned()
                        .collect()
                })
                .collect(),
            None => Vec::new(),
        };
        Ok(Plan { n, base, column, rows })
    }

    fn radices(&self) -> Vec<usize> {
        self.column
            .iter()
            .map(Vec::len)
            .chain(self.rows.iter().map(Vec::len))
            .collect()
    }

    fn total(&self) -> u128 {
        self.radices().iter().map(|&r| r as u128).product()
    }

    fn candidate(&self, mut index: u64) -> CartanDatum {
        let mut pick = |radix: usize| {
            let k = (index % radix as u64) as usize;
            index /= radix as u64;
            k
        };
        let mut matrix = Vec::with_capacity(self.n);
        let mut parity = Vec::with_capacity(self.n);
        if let Some(b) = &self.base {
            for i in 0..b.n() {
                let mut row = b.row(i).to_vec();
                row.push(self.column[i][pick(self.column[i].len())].clone());
                matrix.push(row);
                parity.push(b.p(i));
            }
        }
        for options in &self.rows {
            let (p, row) = &options[pick(options.len())];
            matrix.push(row.clone());
            parity.push(*p);
        }
        CartanDatum::new(matrix, parity).expect("square by construction")
    }
}

fn row_is_normalized(row: &[Rational], i: usize) -> bool {
    if !row[i].is_zero() {
        return true;
    }
    row.iter().find(|x| !x.is_zero()).map_or(true, |x| x.is_one())
}

fn for_each_tuple(pool: &[Rational], len: usize, f: &mut dyn FnMut(&[Rational])) {
    fn go(pool: &[Rational], len: usize, acc: &mut Vec<Rational>, f: &mut dyn FnMut(&[Rational])) {
        if acc.len() == len {
            f(acc);
            return;
        }
        for x in pool {
            acc.push(x.clone());
            go(pool, len, acc, f);
            acc.pop();
        }
    }
    go(pool, len, &mut Vec::with_capacity(len), f);
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FilterCounts {
    pub raw: u64,
    pub start_violation: u64,
    pub not_elemental: u64,
    pub decomposable: u64,
    pub no_singular: u64,
    pub passed: u64,
}

#[derive(Debug, Clone)]
pub struct ClassResult {
    pub datum: CartanDatum,
    pub verdict: crate::classify::ClassificationVerdict,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub n: usize,
    pub counts: FilterCounts,
    /// Canonical classes in ascending canonical order.
    pub classes: Vec<ClassResult>,
}

impl SearchReport {
    pub fn accepted(&self) -> impl Iterator<Item = &ClassResult> {
        self.classes.iter().filter(|c| c.verdict.finite_growth() == Some(true))
    }

    pub fn inconclusive(&self) -> impl Iterator<Item = &ClassResult> {
        self.classes.iter().filter(|c| c.verdict.finite_growth().is_none())
    }

    pub fn rejected(&self) -> usize {
        self.classes.iter().filter(|c| c.verdict.finite_growth() == Some(false)).count()
    }

    pub fn to_json(&self) -> Value {
        let entry = |c: &ClassResult| {
            let mut v = json!({"datum": codec::to_value(&c.datum), "outcome": c.verdict.name()});
            if let Some(m) = c.verdict.table_match() {
                v["family"] = serde_json::to_value(&m.family).unwrap_or(Value::Null);
            }
            if let Outcome::Inconclusive { reason } = &c.verdict.outcome {
                v["reason"] = json!(reason);
            }
            v
        };
        json!({
            "n": self.n,
            "counts": self.counts,
            "classes": self.classes.len(),
            "accepted": self.accepted().map(entry).collect::<Vec<_>>(),
            "inconclusive": self.inconclusive().map(entry).collect::<Vec<_>>(),
            "rejected": self.rejected(),
        })
    }
}

/// Candidate count before any filtering.
pub fn candidate_count(spec: &SearchSpec) -> Result<u128> {
    Ok(Plan::new(spec)?.total())
}

enum Fate {
    StartViolation,
    NotElemental,
    Decomposable,
    NoSingular,
    Passed(CartanDatum),
}

fn screen(spec: &SearchSpec, d: CartanDatum) -> Fate {
    if !check_lemma31(&d).is_empty() {
        return Fate::StartViolation;
    }
    let flags = structure_flags(&d);
    if spec.require_elemental && !flags.elemental {
        return Fate::NotElemental;
    }
    if spec.require_indecomposable && !flags.indecomposable {
        return Fate::Decomposable;
    }
    if spec.require_singular && !(0..d.n()).any(|i| d.is_isotropic(i) && d.is_singular(i)) {
        return Fate::NoSingular;
    }
    Fate::Passed(d)
}

pub fn run_search(spec: &SearchSpec) -> Result<SearchReport> {
    let plan = Plan::new(spec)?;
    let total = u64::try_from(plan.total()).map_err(|_| Error::Invalid("search space too large".into()))?;
    let budget = spec.classify_budget();
    budget.orbit.validate()?;
    let work = || -> Result<SearchReport> {
        let (counts, survivors) = (0..total)
            .into_par_iter()
            .map(|k| screen(spec, plan.candidate(k)))
            .fold(
                || (FilterCounts::default(), BTreeMap::new()),
                |(mut c, mut map), fate| {
                    c.raw += 1;
                    match fate {
                        Fate::StartViolation => c.start_violation += 1,
                        Fate::NotElemental => c.not_elemental += 1,
                        Fate::Decomposable => c.decomposable += 1,
                        Fate::NoSingular => c.no_singular += 1,
                        Fate::Passed(d) => {
                            c.passed += 1;
                            let key = canonical_form(&d).expect("small n").datum;
                            map.entry(CanonKey(key)).or_insert(d);
                        }
                    }
                    (c, map)
                },
            )
            .reduce(
                || (FilterCounts::default(), BTreeMap::new()),
                |(a, mut ma), (b, mb)| {
                    for (k, v) in mb {
                        ma.entry(k).or_insert(v);
                    }
                    (add_counts(a, b), ma)
                },
            );
        let keys: Vec<CanonKey> = survivors.into_keys().collect();
        let classes = keys
            .into_par_iter()
            .map(|CanonKey(d)| {
                let verdict = classify(&d, budget)?;
                Ok(ClassResult { datum: d, verdict })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SearchReport {
            n: plan.n,
            counts,
            classes,
        })
    };
    match spec.workers {
        Some(w) if w > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))?
            .install(work),
        _ => work(),
    }
}

fn add_counts(a: FilterCounts, b: FilterCounts) -> FilterCounts {
    FilterCounts {
        raw: a.raw + b.raw,
        start_violation: a.start_violation + b.start_violation,
        not_elemental: a.not_elemental + b.not_elemental,
        decomposable: a.decomposable + b.decomposable,
        no_singular: a.no_singular + b.no_singular,
        passed: a.passed + b.passed,
    }
}

/// Orders data by the canonical comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CanonKey(CartanDatum);

impl PartialOrd for CanonKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.canonical_cmp(&other.0)
    }
}
