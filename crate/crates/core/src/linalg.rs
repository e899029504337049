//! Dense exact linear algebra over [`Rational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Primes just below 2^62 used for modular elimination.
const PRIMES: [u64; 6] = [
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387761,
    4611686018427387751,
    4611686018427387737,
];

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// `self * v`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(lead, p);
            let inv = self.get(lead, c).recip();
            for k in c..self.cols {
                let v = self.get(lead, k) * &inv;
                self.set(lead, k, v);
            }
            for r in 0..self.rows {
                if r == lead || self.get(r, c).is_zero() {
                    continue;
                }
                let factor = self.get(r, c).clone();
                for k in c..self.cols {
                    let rhs = self.get(lead, k);
                    if rhs.is_zero() {
                        continue;
                    }
                    let v = self.get(r, k) - &factor * rhs;
                    self.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::from_integer(1.into());
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::from_integer(1.into());
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for r in c + 1..n {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let factor = m.get(r, c) / &pivot;
                for k in c..n {
                    let v = m.get(r, k) - &factor * m.get(c, k);
                    m.set(r, k, v);
                }
            }
        }
        det
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from_integer(1.into()));
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Rational::from_integer(1.into()));
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// Pivot columns of the reduced row echelon form together with its
    /// nonzero rows, i.e. every column written in terms of the pivot columns.
    ///
    /// The reduction is first done modulo word-sized primes and lifted by
    /// rational reconstruction. A lifted answer is only returned after an
    /// exact check that every column equals its stated combination; pivot
    /// columns independent modulo a prime are independent over the rationals,
    /// so the result is the exact one. Otherwise falls back to [`Matrix::rref_in_place`].
    pub fn column_basis(&self) -> (Vec<usize>, Vec<Vec<Rational>>) {
        if let Some(found) = self.column_basis_modular() {
            return found;
        }
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rows = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        (pivots, rows)
    }

    fn column_basis_modular(&self) -> Option<(Vec<usize>, Vec<Vec<Rational>>)> {
        if self.rows == 0 || self.cols == 0 {
            return Some((Vec::new(), Vec::new()));
        }
        let int_rows = self.integer_rows();
        let mut pivots: Vec<usize> = Vec::new();
        let mut residues: Vec<Vec<BigInt>> = Vec::new();
        let mut modulus = BigInt::one();
        for &p in &PRIMES {
            let reduced: Vec<Vec<u64>> = int_rows
                .iter()
                .map(|r| r.iter().map(|x| x.mod_floor(&BigInt::from(p)).to_u64().unwrap()).collect())
                .collect();
            let (piv, rref) = rref_mod(reduced, self.cols, p);
            if piv.len() < pivots.len() || (piv.len() == pivots.len() && !pivots.is_empty() && piv != pivots) {
                continue;
            }
            let top: Vec<Vec<BigInt>> = rref.into_iter().take(piv.len()).map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            if piv != pivots || residues.is_empty() {
                pivots = piv;
                residues = top;
                modulus = BigInt::from(p);
            } else {
                let pb = BigInt::from(p);
                for (acc_row, new_row) in residues.iter_mut().zip(top) {
                    for (acc, new) in acc_row.iter_mut().zip(new_row) {
                        *acc = crt(acc, &modulus, &new, &pb);
                    }
                }
                modulus *= &pb;
            }
            if let Some(coords) = reconstruct_all(&residues, &modulus) {
                if verify(&int_rows, &pivots, &coords) {
                    return Some((pivots, coords));
                }
            }
        }
        None
    }

    /// Rows scaled to integers.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// Principal submatrix on the given (sorted or unsorted) index set.
    pub fn principal(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows(
            idx.iter()
                .map(|&r| idx.iter().map(|&c| self.get(r, c).clone()).collect())
                .collect(),
        )
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn rref_mod(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..cols {
        if lead == rows {
            break;
        }
        let Some(r) = (lead..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(lead, r);
        let inv = pow_mod(m[lead][c], p - 2, p);
        for x in m[lead][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[lead].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == lead || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for k in c..cols {
                if pivot_row[k] != 0 {
                    row[k] = (row[k] + p - mul_mod(f, pivot_row[k], p)) % p;
                }
            }
        }
        pivots.push(c);
        lead += 1;
    }
    (pivots, m)
}

fn crt(a: &BigInt, m: &BigInt, b: &BigInt, p: &BigInt) -> BigInt {
    // x = a + m * ((b - a) * m^{-1} mod p)
    let inv = m.modpow(&(p - BigInt::from(2)), p);
    let t = ((b - a) * inv).mod_floor(p);
    a + m * t
}

/// `a/b` with `a = b * u (mod m)` and `|a|, |b| <= sqrt(m/2)`.
fn reconstruct(u: &BigInt, m: &BigInt) -> Option<Rational> {
    if u.is_zero() {
        return Some(Rational::zero());
    }
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn reconstruct_all(residues: &[Vec<BigInt>], m: &BigInt) -> Option<Vec<Vec<Rational>>> {
    residues
        .iter()
        .map(|row| row.iter().map(|u| reconstruct(u, m)).collect())
        .collect()
}

/// Column `c` of `rows` equals `sum_t coords[t][c] * column(pivots[t])` for all `c`.
fn verify(rows: &[Vec<BigInt>], pivots: &[usize], coords: &[Vec<Rational>]) -> bool {
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let denom = coords.iter().fold(BigInt::one(), |acc, r| acc.lcm(r[c].denom()));
        let nums: Vec<BigInt> = coords.iter().map(|r| r[c].numer() * (&denom / r[c].denom())).collect();
        for row in rows {
            let mut acc = BigInt::zero();
            for (t, &pc) in pivots.iter().enumerate() {
                if !nums[t].is_zero() && !row[pc].is_zero() {
                    acc += &nums[t] * &row[pc];
                }
            }
            if acc != &denom * &row[c] {
                return false;
            }
        }
    }
    true
}
