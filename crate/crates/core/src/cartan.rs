//! Cartan data: a square matrix of exact rationals plus a parity vector.
//!
//! Entry `[i][j]` of the matrix is `a_ij = alpha_j(h_i)`. Rows may be rescaled
//! by any nonzero factor without changing the algebra, so most operations
//! expect a [`normalize`]d datum: rows with a nonzero diagonal carry a 2 on the
//! diagonal, rows with a zero diagonal have their first nonzero entry equal to 1.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, int, Rational};

/// Largest size accepted by [`canonical_form`]; the search is over all permutations.
pub const CANONICAL_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    matrix: Vec<Vec<Rational>>,
    parity: Vec<u8>,
}

impl CartanDatum {
    pub fn new(matrix: Vec<Vec<Rational>>, parity: Vec<u8>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::Malformed("empty matrix".into()));
        }
        if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if parity.len() != n {
            return Err(Error::Malformed(format!(
                "parity has {} entries, expected {n}",
                parity.len()
            )));
        }
        if let Some(p) = parity.iter().find(|&&p| p > 1) {
            return Err(Error::Malformed(format!("parity value {p} is not 0 or 1")));
        }
        Ok(CartanDatum { matrix, parity })
    }

    /// Convenience constructor from integer entries; panics on malformed input.
    pub fn from_ints(rows: &[&[i64]], parity: &[u8]) -> Self {
        let matrix = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        CartanDatum::new(matrix, parity.to_vec()).expect("malformed integer datum")
    }

    /// Convenience constructor from `"p/q"` strings; panics on malformed input.
    pub fn from_strs(rows: &[&[&str]], parity: &[u8]) -> Self {
        let matrix = rows
            .iter()
            .map(|r| r.iter().map(|s| rational::parse(s).expect("bad rational")).collect())
            .collect();
        CartanDatum::new(matrix, parity.to_vec()).expect("malformed datum")
    }

    pub fn n(&self) -> usize {
        self.parity.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.matrix[i]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn p(&self, i: usize) -> u8 {
        self.parity[i]
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_rows(self.matrix.clone())
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.matrix[i].iter().all(Zero::is_zero)
    }

    /// Vertices `i`, `j` are joined when `a_ij != 0` or `a_ji != 0`.
    pub fn linked(&self, i: usize, j: usize) -> bool {
        i != j && (!self.matrix[i][j].is_zero() || !self.matrix[j][i].is_zero())
    }

    pub fn is_isotropic(&self, i: usize) -> bool {
        self.parity[i] == 1 && self.matrix[i][i].is_zero()
    }

    /// `a_ij = 0` and `a_ji != 0` for some `j`.
    pub fn is_singular(&self, i: usize) -> bool {
        (0..self.n()).any(|j| j != i && self.matrix[i][j].is_zero() && !self.matrix[j][i].is_zero())
    }

    /// Principal sub-datum on the index set `idx` (in the given order).
    pub fn restrict(&self, idx: &[usize]) -> CartanDatum {
        CartanDatum {
            matrix: idx
                .iter()
                .map(|&r| idx.iter().map(|&c| self.matrix[r][c].clone()).collect())
                .collect(),
            parity: idx.iter().map(|&i| self.parity[i]).collect(),
        }
    }

    /// Reorders vertices: new vertex `k` is old vertex `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> CartanDatum {
        self.restrict(perm)
    }

    /// Connected components of the link graph, each sorted, ordered by first vertex.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if !seen[j] && self.linked(i, j) {
                        seen[j] = true;
                        comp.push(j);
                        queue.push_back(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_zero_row(i)).collect()
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<Vec<Rational>> {
        &mut self.matrix
    }

    /// Total order used by [`canonical_form`]: parity vector first, then the
    /// matrix in row-major order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.parity
            .cmp(&other.parity)
            .then_with(|| self.matrix.cmp(&other.matrix))
    }

    /// `n + corank(A)`, the dimension of the Cartan subalgebra.
    pub fn cartan_dim(&self) -> usize {
        2 * self.n() - self.as_matrix().rank()
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(rational::format).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        let parity: Vec<String> = self.parity.iter().map(u8::to_string).collect();
        write!(f, "[{}] p=({})", rows.join(","), parity.join(","))
    }
}

/// Integer coordinates of a root in the initial simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        RootVector(v)
    }

    pub fn zero(n: usize) -> Self {
        RootVector(vec![0; n])
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_nonpositive(&self) -> bool {
        self.0.iter().all(|&c| c <= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        RootVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        RootVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Parity of the root given simple-root parities.
    pub fn parity(&self, simple: &[u8]) -> u8 {
        let odd: i64 = self.0.iter().zip(simple).map(|(c, &p)| c * p as i64).sum();
        (odd.rem_euclid(2)) as u8
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Rescales rows: nonzero diagonal becomes 2; a zero-diagonal row has its first
/// nonzero entry (lowest column) scaled to 1; zero rows are left alone.
pub fn normalize(d: &CartanDatum) -> CartanDatum {
    let mut out = d.clone();
    normalize_in_place(&mut out);
    out
}

/// Normalizes in place and returns the factor applied to each row.
pub(crate) fn normalize_in_place(d: &mut CartanDatum) -> Vec<Rational> {
    let mut scales = Vec::with_capacity(d.n());
    for (i, row) in d.rows_mut().iter_mut().enumerate() {
        let scale = if !row[i].is_zero() {
            int(2) / &row[i]
        } else if let Some(first) = row.iter().find(|x| !x.is_zero()) {
            first.recip()
        } else {
            Rational::one()
        };
        if !scale.is_one() {
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x *= &scale;
                }
            }
        }
        scales.push(scale);
    }
    scales
}

pub fn is_normalized(d: &CartanDatum) -> bool {
    &normalize(d) == d
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub indecomposable: bool,
    pub elemental: bool,
    pub symmetrizable: bool,
    pub zero_row_indices: Vec<usize>,
}

pub fn structure_flags(d: &CartanDatum) -> StructureFlags {
    let zero_row_indices = d.zero_rows();
    StructureFlags {
        indecomposable: d.blocks().len() == 1,
        elemental: zero_row_indices.is_empty(),
        symmetrizable: symmetrizer(d).is_some(),
        zero_row_indices,
    }
}

/// A diagonal `D` (as its entries) with `DA` symmetric, if one exists.
///
/// Requires `a_ij = 0 <=> a_ji = 0`; then each block gets potentials along a
/// spanning tree and every remaining edge closes a cycle whose forward and
/// backward products must agree.
pub fn symmetrizer(d: &CartanDatum) -> Option<Vec<Rational>> {
    let n = d.n();
    for i in 0..n {
        for j in 0..n {
            if d.entry(i, j).is_zero() != d.entry(j, i).is_zero() {
                return None;
            }
        }
    }
    let mut diag: Vec<Option<Rational>> = vec![None; n];
    for block in d.blocks() {
        let root = block[0];
        diag[root] = Some(Rational::one());
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let di = diag[i].clone().expect("visited vertex has a potential");
            for &j in &block {
                if j == i || d.entry(i, j).is_zero() {
                    continue;
                }
                // d_i a_ij = d_j a_ji
                let want = &di * d.entry(i, j) / d.entry(j, i);
                match &diag[j] {
                    None => {
                        diag[j] = Some(want);
                        queue.push_back(j);
                    }
                    Some(dj) if *dj != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(diag.into_iter().map(|x| x.expect("every vertex lies in a block")).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub datum: CartanDatum,
    /// New vertex `k` is vertex `permutation[k]` of the input.
    pub permutation: Vec<usize>,
}

/// Least datum, under [`CartanDatum::canonical_cmp`], over all simultaneous
/// row/column permutations followed by [`normalize`].
pub fn canonical_form(d: &CartanDatum) -> Result<CanonicalForm> {
    let n = d.n();
    if n > CANONICAL_LIMIT {
        return Err(Error::SizeExceeded {
            size: n,
            limit: CANONICAL_LIMIT,
        });
    }
    let d = normalize(d);
    let mut best: Option<CanonicalForm> = None;
    // The key starts with the parity vector, so only parity-sorting
    // permutations can be minimal.
    for_each_permutation(n, &mut |perm| {
        if perm.windows(2).any(|w| d.p(w[0]) > d.p(w[1])) {
            return;
        }
        let candidate = normalize(&d.permute(perm));
        let better = match &best {
            None => true,
            Some(b) => candidate.canonical_cmp(&b.datum) == Ordering::Less,
        };
        if better {
            best = Some(CanonicalForm {
                datum: candidate,
                permutation: perm.to_vec(),
            });
        }
    });
    Ok(best.expect("at least one permutation"))
}

/// Canonical datum only.
pub fn canonical(d: &CartanDatum) -> Result<CartanDatum> {
    canonical_form(d).map(|c| c.datum)
}

/// Visits every permutation of `0..n` in lexicographic order.
pub fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if prefix.len() == used.len() {
            f(prefix);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, f);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], f);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GcmType {
    Finite,
    Affine,
    Indefinite,
}

/// Checks the even-GCM shape: integer entries, diagonal 2, off-diagonal
/// entries nonpositive, symmetric zero pattern.
pub fn check_even_gcm(m: &Matrix) -> Result<()> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::NotEvenGcm("not square".into()));
    }
    for i in 0..n {
        if *m.get(i, i) != int(2) {
            return Err(Error::NotEvenGcm(format!("diagonal entry {i} is not 2")));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = m.get(i, j);
            if !rational::is_nonpositive_integer(x) {
                return Err(Error::NotEvenGcm(format!(
                    "entry ({i},{j}) = {} is not a nonpositive integer",
                    rational::format(x)
                )));
            }
            if x.is_zero() != m.get(j, i).is_zero() {
                return Err(Error::NotEvenGcm(format!(
                    "entries ({i},{j}) and ({j},{i}) break the zero pattern"
                )));
            }
        }
    }
    Ok(())
}

/// Type of each indecomposable block of an even generalized Cartan matrix,
/// decided from all principal minors.
pub fn even_gcm_type(d: &CartanDatum) -> Result<Vec<(Vec<usize>, GcmType)>> {
    let m = d.as_matrix();
    check_even_gcm(&m)?;
    Ok(d.blocks()
        .into_iter()
        .map(|block| {
            let t = block_type(&m.principal(&block));
            (block, t)
        })
        .collect())
}

/// Type of an indecomposable even GCM given as a matrix.
pub fn block_type(m: &Matrix) -> GcmType {
    let n = m.rows();
    assert!(n <= 16, "principal-minor enumeration is exponential");
    let mut proper_positive = true;
    for mask in 1u32..(1 << n) - 1 {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if !m.principal(&idx).determinant().is_positive() {
            proper_positive = false;
            break;
        }
    }
    let det = m.determinant();
    match (proper_positive, det.is_positive(), det.is_zero()) {
        (true, true, _) => GcmType::Finite,
        (true, _, true) => GcmType::Affine,
        _ => GcmType::Indefinite,
    }
}
