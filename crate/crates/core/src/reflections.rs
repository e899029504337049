//! Odd reflections of bases.
//!
//! A [`BaseState`] is a base reached from the initial one by a word of odd
//! reflections. It keeps the current datum in the caller's vertex order, each
//! current simple root in initial coordinates, and each current coroot as a
//! rational combination of the initial coroots `h_1..h_n`.

use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::{canonical, normalize, normalize_in_place, CartanDatum, RootVector};
use crate::codec;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    EvenSl2,
    EvenHeisenberg,
    OddOsp12,
    OddIsotropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Regular,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleRootKind {
    pub kind: RootKind,
    pub regularity: Regularity,
}

pub fn classify_simple_root(d: &CartanDatum, i: usize) -> Result<SimpleRootKind> {
    if i >= d.n() {
        return Err(Error::IndexOutOfRange { index: i, size: d.n() });
    }
    let kind = match (d.p(i), d.entry(i, i).is_zero()) {
        (0, false) => RootKind::EvenSl2,
        (0, true) => RootKind::EvenHeisenberg,
        (_, false) => RootKind::OddOsp12,
        (_, true) => RootKind::OddIsotropic,
    };
    let regularity = if d.is_singular(i) {
        Regularity::Singular
    } else {
        Regularity::Regular
    };
    Ok(SimpleRootKind { kind, regularity })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseState {
    pub datum: CartanDatum,
    pub roots: Vec<RootVector>,
    pub word: Vec<usize>,
    pub singular_used: bool,
    /// Current coroot `i` in initial coordinates; row `i` of `datum` equals
    /// `coroots[i]^T * A0 * roots[j]` where `A0` is the normalized initial matrix.
    pub coroots: Vec<Vec<Rational>>,
    origin: Arc<CartanDatum>,
}

impl BaseState {
    /// The initial base of `d`, normalized.
    pub fn initial(d: &CartanDatum) -> Self {
        let datum = normalize(d);
        let n = datum.n();
        let coroots = (0..n)
            .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
            .collect();
        BaseState {
            roots: (0..n).map(|i| RootVector::simple(n, i)).collect(),
            word: Vec::new(),
            singular_used: false,
            coroots,
            origin: Arc::new(datum.clone()),
            datum,
        }
    }

    pub fn n(&self) -> usize {
        self.datum.n()
    }

    pub fn origin(&self) -> &CartanDatum {
        &self.origin
    }

    /// `gamma(h)` for the current coroot `i` and a root in initial coordinates.
    pub fn pairing(&self, i: usize, gamma: &RootVector) -> Rational {
        pair(&self.origin, &self.coroots[i], gamma)
    }

    /// Rechecks the coroot bookkeeping against the stored matrix.
    pub fn coroots_consistent(&self) -> bool {
        (0..self.n()).all(|i| {
            (0..self.n()).all(|j| &self.pairing(i, &self.roots[j]) == self.datum.entry(i, j))
        })
    }

    /// True when every initial simple root is a combination of the current
    /// roots with coefficients of one sign. Bases reached by a singular
    /// reflection followed by further reflections can fail this: they are
    /// bases of a proper subalgebra only.
    pub fn is_geometric(&self) -> bool {
        let n = self.n();
        let cols = Matrix::from_rows(
            self.roots
                .iter()
                .map(|r| r.0.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .transpose();
        let Some(inv) = cols.inverse() else {
            return false;
        };
        (0..n).all(|j| {
            let x = inv.column(j);
            x.iter().all(|v| !v.is_negative()) || x.iter().all(|v| !v.is_positive())
        })
    }

    /// Integer matrix whose rows are the current simple roots.
    pub fn root_matrix(&self) -> Vec<Vec<i64>> {
        self.roots.iter().map(|r| r.0.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "datum": codec::to_value(&self.datum),
            "roots": self.root_matrix(),
            "word": self.word.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "singular_used": self.singular_used,
        })
    }
}

pub(crate) fn pair(origin: &CartanDatum, coroot: &[Rational], gamma: &RootVector) -> Rational {
    let mut acc = Rational::zero();
    for (l, c) in coroot.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut inner = Rational::zero();
        for (j, &g) in gamma.0.iter().enumerate() {
            if g != 0 && !origin.entry(l, j).is_zero() {
                inner += origin.entry(l, j) * int(g);
            }
        }
        acc += c * inner;
    }
    acc
}

/// Reflects `s` at the odd isotropic simple root `k`.
pub fn odd_reflection(s: &BaseState, k: usize) -> Result<BaseState> {
    let d = &s.datum;
    let n = d.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, size: n });
    }
    if !d.is_isotropic(k) {
        return Err(Error::NotIsotropic {
            index: k,
            diagonal: rational::format(d.entry(k, k)),
            parity: d.p(k),
        });
    }
    let linked: Vec<bool> = (0..n).map(|i| d.linked(i, k)).collect();
    let a = |i: usize, j: usize| d.entry(i, j);

    let mut rows = d.rows().to_vec();
    for i in 0..n {
        if i == k || !linked[i] {
            continue;
        }
        for j in 0..n {
            rows[i][j] = if j == k {
                -(a(k, i) * a(i, k))
            } else if linked[j] {
                a(k, i) * a(i, j) + a(k, j) * a(i, k) + a(k, i) * a(i, k)
            } else {
                a(k, i) * a(i, j)
            };
        }
    }
    let mut parity = d.parity().to_vec();
    let mut roots = s.roots.clone();
    let mut coroots = s.coroots.clone();
    for i in 0..n {
        if i == k {
            roots[k] = s.roots[k].neg();
        } else if linked[i] {
            parity[i] = (parity[i] + d.p(k)) % 2;
            roots[i] = s.roots[i].add(&s.roots[k]);
            coroots[i] = s.coroots[k]
                .iter()
                .zip(&s.coroots[i])
                .map(|(ck, ci)| a(i, k) * ck + a(k, i) * ci)
                .collect();
        }
    }
    let mut datum = CartanDatum::new(rows, parity)?;
    let scales = normalize_in_place(&mut datum);
    for (c, scale) in coroots.iter_mut().zip(&scales) {
        for x in c.iter_mut() {
            *x *= scale;
        }
    }
    let mut word = s.word.clone();
    word.push(k);
    Ok(BaseState {
        datum,
        roots,
        word,
        singular_used: s.singular_used || d.is_singular(k),
        coroots,
        origin: Arc::clone(&s.origin),
    })
}

/// Reflects twice at `k` and compares with `s` up to canonical form and roots.
pub fn reflect_is_involution_check(s: &BaseState, k: usize) -> Result<bool> {
    let back = odd_reflection(&odd_reflection(s, k)?, k)?;
    Ok(canonical(&back.datum)? == canonical(&s.datum)? && back.roots == s.roots)
}

/// Applies a word of reflections to the initial base of `d`.
pub fn reflect_word(d: &CartanDatum, word: &[usize]) -> Result<BaseState> {
    word.iter()
        .try_fold(BaseState::initial(d), |s, &k| odd_reflection(&s, k))
}
