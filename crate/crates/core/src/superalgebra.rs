//! Degree-by-degree construction of the positive part of g(A).
//!
//! The root space `g_alpha` of height `h >= 2` is spanned by the brackets
//! `[X_i, b]` with `b` running over a basis of `g_{alpha - alpha_i}`. Such a
//! combination vanishes in g(A) exactly when every lowering `[Y_j, .]` kills
//! it, so `g_alpha` is the image of the lowering map assembled from the
//! spaces one height down. Bases are the pivot generators of that map.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::{CartanDatum, RootVector};
use crate::linalg::Matrix;
use crate::rational::{self, frac, int, Rational};

pub const DEFAULT_DIM_BUDGET: usize = 64;

/// A computed root space.
#[derive(Debug, Clone)]
struct RootSpace {
    dim: usize,
    /// `coords[i][k]`: `[X_i, b_k]` in this basis, `b_k` a basis vector of
    /// `g_{alpha - alpha_i}`. Empty when that space is zero.
    coords: Vec<Vec<Vec<Rational>>>,
    /// `lower[j][t]`: `[Y_j, basis_t]` in the basis of `g_{alpha - alpha_j}`.
    /// Empty for height one, where the lowering lands in the Cartan subalgebra.
    lower: Vec<Vec<Vec<Rational>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    /// Nonzero root-space dimensions, positive side.
    pub by_root: BTreeMap<RootVector, usize>,
    /// Total dimension per height, zeros included, for every completed height.
    pub by_height: BTreeMap<usize, usize>,
    /// Last completed height.
    pub cutoff: usize,
    pub budget_hit: bool,
}

impl GradedDims {
    pub fn dim(&self, root: &RootVector) -> usize {
        self.by_root.get(root).copied().unwrap_or(0)
    }

    pub fn height_dims(&self) -> Vec<usize> {
        self.by_height.values().copied().collect()
    }

    pub fn to_json(&self) -> Value {
        let roots: BTreeMap<String, usize> = self
            .by_root
            .iter()
            .map(|(r, d)| (r.to_string(), *d))
            .collect();
        json!({
            "roots": roots,
            "by_height": self.by_height,
            "cutoff": self.cutoff,
            "budget_hit": self.budget_hit,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("height,dim\n");
        for (h, d) in &self.by_height {
            out.push_str(&format!("{h},{d}\n"));
        }
        out
    }
}

fn sign(odd: bool) -> Rational {
    if odd {
        int(-1)
    } else {
        int(1)
    }
}

/// Root spaces of `g(A)` up to `max_height`, stopping early with
/// `budget_hit` once some root space exceeds `dim_budget`.
pub fn build_graded(d: &CartanDatum, max_height: usize, dim_budget: usize) -> GradedDims {
    let n = d.n();
    let p = |i: usize| d.p(i) == 1;
    let mut spaces: HashMap<RootVector, RootSpace> = HashMap::new();
    let mut out = GradedDims {
        by_root: BTreeMap::new(),
        by_height: BTreeMap::new(),
        cutoff: 0,
        budget_hit: false,
    };
    if max_height == 0 {
        return out;
    }
    let mut layer: Vec<RootVector> = (0..n).map(|i| RootVector::simple(n, i)).collect();
    for r in &layer {
        spaces.insert(
            r.clone(),
            RootSpace {
                dim: 1,
                coords: vec![Vec::new(); n],
                lower: vec![Vec::new(); n],
            },
        );
        out.by_root.insert(r.clone(), 1);
    }
    out.by_height.insert(1, n);
    out.cutoff = 1;

    for height in 2..=max_height {
        let mut candidates: Vec<RootVector> = layer
            .iter()
            .flat_map(|b| (0..n).map(move |i| b.add(&RootVector::simple(n, i))))
            .collect();
        candidates.sort();
        candidates.dedup();
        let built: Vec<(RootVector, RootSpace)> = candidates
            .into_par_iter()
            .map(|alpha| {
                let space = build_space(d, &alpha, height, &spaces, &p);
                (alpha, space)
            })
            .collect();
        let mut total = 0;
        let mut next = Vec::new();
        for (alpha, space) in built {
            if space.dim == 0 {
                continue;
            }
            if space.dim > dim_budget {
                out.budget_hit = true;
            }
            total += space.dim;
            out.by_root.insert(alpha.clone(), space.dim);
            spaces.insert(alpha.clone(), space);
            next.push(alpha);
        }
        if out.budget_hit {
            break;
        }
        out.by_height.insert(height, total);
        out.cutoff = height;
        if next.is_empty() {
            // nothing above a zero height
            for h in height + 1..=max_height {
                out.by_height.insert(h, 0);
            }
            out.cutoff = max_height;
            break;
        }
        layer = next;
    }
    out
}

fn build_space(
    d: &CartanDatum,
    alpha: &RootVector,
    height: usize,
    spaces: &HashMap<RootVector, RootSpace>,
    p: &dyn Fn(usize) -> bool,
) -> RootSpace {
    let n = d.n();
    let below = |i: usize| -> Option<(RootVector, &RootSpace)> {
        if alpha.0[i] == 0 {
            return None;
        }
        let b = alpha.sub(&RootVector::simple(n, i));
        spaces.get(&b).map(|s| (b, s))
    };
    let lower_spaces: Vec<Option<(RootVector, &RootSpace)>> = (0..n).map(below).collect();
    let offsets: Vec<usize> = lower_spaces
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.as_ref().map_or(0, |(_, sp)| sp.dim);
            Some(o)
        })
        .collect();
    let rows: usize = lower_spaces.iter().map(|s| s.as_ref().map_or(0, |(_, sp)| sp.dim)).sum();

    // generator (i, k) = [X_i, b_k] with b_k in g_{alpha - alpha_i}
    let mut generators = Vec::new();
    for (i, s) in lower_spaces.iter().enumerate() {
        if let Some((_, sp)) = s {
            for k in 0..sp.dim {
                generators.push((i, k));
            }
        }
    }
    let mut m = Matrix::zeros(rows, generators.len());
    for (col, &(i, k)) in generators.iter().enumerate() {
        let (beta, beta_space) = lower_spaces[i].as_ref().expect("generator space exists");
        if height == 2 {
            let mm = (0..n).find(|&l| beta.0[l] == 1).expect("simple root");
            // [Y_i, [X_i, X_m]] picks up -(-1)^{p_i} a_im X_m
            let v = -sign(p(i)) * d.entry(i, mm);
            add(&mut m, offsets[i], col, &v);
            // [X_i, [Y_m, X_m]] = (-1)^{p_m} a_mi X_i up to the Jacobi sign
            let v = sign(p(i) && p(mm)) * sign(p(mm)) * d.entry(mm, i);
            add(&mut m, offsets[mm], col, &v);
            continue;
        }
        // beta(h_i) times b_k in block i
        let beta_hi: Rational = (0..n)
            .filter(|&l| beta.0[l] != 0)
            .map(|l| d.entry(i, l) * int(beta.0[l]))
            .sum();
        if !beta_hi.is_zero() {
            add(&mut m, offsets[i] + k, col, &(-sign(p(i)) * beta_hi));
        }
        // (-1)^{p_i p_j} [X_i, [Y_j, b_k]] in block j
        for j in 0..n {
            let Some((_, target)) = lower_spaces[j].as_ref() else {
                continue;
            };
            let Some(yv) = beta_space.lower.get(j).and_then(|l| l.get(k)) else {
                continue;
            };
            let s = sign(p(i) && p(j));
            let into = &target.coords[i];
            for (l, c) in yv.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let column = &into[l];
                for (t, x) in column.iter().enumerate() {
                    if !x.is_zero() {
                        add(&mut m, offsets[j] + t, col, &(&s * c * x));
                    }
                }
            }
        }
    }

    let (pivots, reduced) = m.column_basis();
    let dim = pivots.len();
    let mut coords = vec![Vec::new(); n];
    for (col, &(i, _)) in generators.iter().enumerate() {
        coords[i].push((0..dim).map(|t| reduced[t][col].clone()).collect());
    }
    let mut lower = vec![Vec::new(); n];
    for (j, s) in lower_spaces.iter().enumerate() {
        let Some((_, sp)) = s else { continue };
        lower[j] = pivots
            .iter()
            .map(|&pc| (0..sp.dim).map(|t| m.get(offsets[j] + t, pc).clone()).collect())
            .collect();
    }
    RootSpace { dim, coords, lower }
}

fn add(m: &mut Matrix, r: usize, c: usize, v: &Rational) {
    if v.is_zero() {
        return;
    }
    let x = m.get(r, c) + v;
    m.set(r, c, x);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthKind {
    /// Cumulative dimensions eventually agree with a polynomial of this
    /// degree along every residue class modulo `period`.
    Polynomial { degree: usize, period: usize },
    Exponential {
        #[serde(serialize_with = "ser_rational")]
        ratio: Rational,
    },
    Inconclusive { reason: String },
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthVerdict {
    pub kind: GrowthKind,
    /// Heights examined, inclusive.
    pub window: (usize, usize),
}

impl GrowthVerdict {
    pub fn is_polynomial(&self) -> bool {
        matches!(self.kind, GrowthKind::Polynomial { .. })
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self.kind, GrowthKind::Exponential { .. })
    }
}

pub const MIN_GROWTH_CUTOFF: usize = 10;
const MAX_DEGREE: usize = 6;
const MAX_PERIOD: usize = 8;
const EXP_TAIL: usize = 5;

pub fn growth_estimate(g: &GradedDims) -> GrowthVerdict {
    let cutoff = g.cutoff;
    let inconclusive = |reason: &str| GrowthVerdict {
        kind: GrowthKind::Inconclusive { reason: reason.into() },
        window: (1, cutoff),
    };
    if g.budget_hit {
        return inconclusive("dimension budget exhausted");
    }
    if cutoff < MIN_GROWTH_CUTOFF {
        return inconclusive("cutoff below 10");
    }
    let dims: Vec<i64> = (1..=cutoff)
        .map(|h| g.by_height.get(&h).copied().unwrap_or(0) as i64)
        .collect();
    let cumulative: Vec<i64> = dims
        .iter()
        .scan(0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let start = cutoff / 2;
    let tail = &cumulative[start - 1..];
    for degree in 0..=MAX_DEGREE {
        for period in 1..=MAX_PERIOD {
            if vanishes(tail, degree + 1, period) {
                return GrowthVerdict {
                    kind: GrowthKind::Polynomial { degree, period },
                    window: (start, cutoff),
                };
            }
        }
    }
    let last = &dims[cutoff - EXP_TAIL - 1..];
    let threshold = frac(6, 5);
    let sustained = last
        .windows(2)
        .all(|w| w[0] > 0 && Rational::from_integer(w[1].into()) >= &threshold * int(w[0]));
    if sustained {
        return GrowthVerdict {
            kind: GrowthKind::Exponential {
                ratio: frac(dims[cutoff - 1], dims[cutoff - 2]),
            },
            window: (cutoff - EXP_TAIL, cutoff),
        };
    }
    GrowthVerdict {
        kind: GrowthKind::Inconclusive {
            reason: "no polynomial fit and no sustained ratio".into(),
        },
        window: (start, cutoff),
    }
}

/// `order`-fold lag-`period` differences are all zero, with at least two
/// values checked.
fn vanishes(seq: &[i64], order: usize, period: usize) -> bool {
    let mut cur = seq.to_vec();
    for _ in 0..order {
        if cur.len() <= period {
            return false;
        }
        cur = (period..cur.len()).map(|t| cur[t] - cur[t - period]).collect();
    }
    cur.len() >= 2 && cur.iter().all(|&x| x == 0)
}

/// Cartan matrix of the vector-field realization of S(1,2,a), parity (1,1,0).
pub fn s12a_realized(a: &Rational) -> CartanDatum {
    let one = Rational::one();
    CartanDatum::new(
        vec![
            vec![int(0), -a.clone(), a + &one],
            vec![-a.clone(), int(0), a - &one],
            vec![int(-1), int(-1), int(2)],
        ],
        vec![1, 1, 0],
    )
    .expect("3x3 datum")
}

/// Degree of a root under `t d/dt`, `xi_1 d/dxi_1`, `xi_2 d/dxi_2`.
pub fn s12a_degree(root: &RootVector) -> [i64; 3] {
    let k = &root.0;
    [-k[1], k[2] - k[0], k[1] - k[2]]
}

/// Coefficient slots of a homogeneous element of W(1,2): the multiples of
/// `t^m xi^e d/dt`, `.. d/dxi_1`, `.. d/dxi_2` present at this degree.
fn slots(deg: [i64; 3]) -> [bool; 3] {
    let bit = |x: i64| x == 0 || x == 1;
    [
        bit(deg[1]) && bit(deg[2]),
        bit(deg[1] + 1) && bit(deg[2]),
        bit(deg[1]) && bit(deg[2] + 1),
    ]
}

/// The defining condition of S_a at one degree, as a row over the slots
/// `(f, f_1, f_2)`. All three sides are multiples of `t^{D0} xi^{(D1, D2)}`.
fn s12a_condition(a: &Rational, deg: [i64; 3]) -> Option<[Rational; 3]> {
    let [d0, d1, d2] = deg;
    let bit = |x: i64| x == 0 || x == 1;
    if !(bit(d1) && bit(d2)) {
        return None;
    }
    let s = sign((d1 + d2).rem_euclid(2) == 1);
    let present = slots(deg);
    let coef_t = if present[0] { a + int(d0 + 1) } else { int(0) };
    let coef_1 = if present[1] && d1 == 0 { -s.clone() } else { int(0) };
    // left derivative past xi_1
    let coef_2 = if present[2] && d2 == 0 { -(&s * sign(d1 == 1)) } else { int(0) };
    Some([coef_t, coef_1, coef_2])
}

/// Dimension of the degree-`deg` part of S_a (or of S'_a for integral `a`).
pub fn s12a_space_dim(a: &Rational, deg: [i64; 3]) -> usize {
    let present = slots(deg);
    let free = present.iter().filter(|&&x| x).count();
    let rank = match s12a_condition(a, deg) {
        Some(row) if row.iter().enumerate().any(|(s, c)| present[s] && !c.is_zero()) => 1,
        _ => 0,
    };
    let mut dim = free - rank;
    if a.is_integer() {
        let a = rational::to_i64(a).expect("small integer parameter");
        if deg == [-a - 1, 1, 1] {
            dim -= 1;
        }
    }
    dim
}

/// Checks a homogeneous element given by its slot coefficients.
pub fn s12a_contains(a: &Rational, deg: [i64; 3], coeffs: &[Rational; 3]) -> bool {
    let present = slots(deg);
    if coeffs.iter().zip(present).any(|(c, p)| !p && !c.is_zero()) {
        return false;
    }
    match s12a_condition(a, deg) {
        None => true,
        Some(row) => row.iter().zip(coeffs).map(|(r, c)| r * c).sum::<Rational>().is_zero(),
    }
}

/// The three raising generators of the realization as `(degree, slots)`.
pub fn s12a_generators(a: &Rational) -> [([i64; 3], [Rational; 3]); 3] {
    [
        // -d/dxi_1
        ([0, -1, 0], [int(0), int(-1), int(0)]),
        // -a xi_1 xi_2 t^{-1} d/dxi_1 + xi_2 d/dt
        ([-1, 0, 1], [int(1), -a.clone(), int(0)]),
        // xi_1 d/dxi_2
        ([0, 1, -1], [int(0), int(0), int(1)]),
    ]
}

/// Root-space dimensions of the vector-field realization, for all positive
/// roots of the realized matrix up to `max_height`.
pub fn oracle_s12a(a: &Rational, max_height: usize) -> GradedDims {
    let mut by_root = BTreeMap::new();
    let mut by_height = BTreeMap::new();
    for h in 1..=max_height {
        let mut total = 0;
        for k0 in 0..=h {
            for k1 in 0..=h - k0 {
                let root = RootVector(vec![k0 as i64, k1 as i64, (h - k0 - k1) as i64]);
                let dim = s12a_space_dim(a, s12a_degree(&root));
                if dim > 0 {
                    total += dim;
                    by_root.insert(root, dim);
                }
            }
        }
        by_height.insert(h, total);
    }
    GradedDims {
        by_root,
        by_height,
        cutoff: max_height,
        budget_hit: false,
    }
}
