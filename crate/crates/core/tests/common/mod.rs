#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superkac::admissibility::{check_lemma31, is_gcm, is_regular_kac_moody, Budget, Verdict};
use superkac::classify::{d210, dhat210, s12a_pattern};
use superkac::rational::{frac, int};
use superkac::reflections::{classify_simple_root, odd_reflection, BaseState, Regularity, RootKind};
use superkac::superalgebra::build_graded;
use superkac::{normalize, CartanDatum, Rational, RootVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(rows: &[&[i64]], p: &[u8]) -> CartanDatum {
    CartanDatum::from_ints(rows, p)
}

fn pick(rng: &mut impl Rng, pool: &[Rational]) -> Rational {
    pool.choose(rng).unwrap().clone()
}

fn loose_pool() -> Vec<Rational> {
    vec![int(0), int(0), int(1), int(-1), int(2), int(-2), int(-3), frac(1, 2), frac(-1, 2), frac(-3, 2)]
}

/// Random datum of size `2..=max_n` satisfying the integrability
/// conditions at the start base, with at least one isotropic vertex.
pub fn random_admissible(rng: &mut impl Rng, max_n: usize) -> CartanDatum {
    let n = rng.gen_range(2..=max_n);
    let circle = [int(0), int(0), int(-1), int(-2), int(-3)];
    let bullet = [int(0), int(0), int(-2), int(-4)];
    let free = loose_pool();
    let mut kinds: Vec<u8> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let forced = rng.gen_range(0..n);
    kinds[forced] = 2;
    let mut rows = Vec::new();
    for (i, &k) in kinds.iter().enumerate() {
        let row = (0..n)
            .map(|j| match (k, i == j) {
                (2, true) => int(0),
                (_, true) => int(2),
                (0, false) => pick(rng, &circle),
                (1, false) => pick(rng, &bullet),
                _ => pick(rng, &free),
            })
            .collect();
        rows.push(row);
    }
    let parity = kinds.iter().map(|&k| u8::from(k != 0)).collect();
    normalize(&CartanDatum::new(rows, parity).unwrap())
}

/// Random normalized datum with no constraints beyond the shape.
pub fn random_normalized(rng: &mut impl Rng, max_n: usize) -> CartanDatum {
    let n = rng.gen_range(1..=max_n);
    let pool = loose_pool();
    let diag = [int(2), int(2), int(0)];
    let rows = (0..n)
        .map(|i| (0..n).map(|j| if i == j { pick(rng, &diag) } else { pick(rng, &pool) }).collect())
        .collect();
    let parity = (0..n).map(|_| rng.gen_range(0..2)).collect();
    normalize(&CartanDatum::new(rows, parity).unwrap())
}

/// Random vertex permutation and nonzero row rescaling.
pub fn disguise(rng: &mut impl Rng, d: &CartanDatum) -> CartanDatum {
    let mut perm: Vec<usize> = (0..d.n()).collect();
    perm.shuffle(rng);
    let p = d.permute(&perm);
    let scales = [int(1), int(-1), int(2), frac(-1, 3), frac(5, 2)];
    let rows = p
        .rows()
        .iter()
        .map(|r| {
            let s = pick(rng, &scales);
            r.iter().map(|x| x * &s).collect()
        })
        .collect();
    CartanDatum::new(rows, p.parity().to_vec()).unwrap()
}

/// One representative per family in the classification table.
pub fn table_fixtures() -> Vec<(&'static str, CartanDatum)> {
    vec![
        ("D(2,1;0)", d210()),
        ("affine D(2,1;0)", dhat210()),
        ("S(1,2,1/2)", normalize(&s12a_pattern(&frac(1, 2)))),
        ("S(1,2,1/3)", normalize(&s12a_pattern(&frac(1, 3)))),
        ("S(1,2,0)", normalize(&s12a_pattern(&int(1)))),
        ("q(3)", ints(&[&[2, -1, -1], &[-1, 2, -1], &[1, -1, 0]], &[0, 0, 1])),
        ("q(4)", ints(&[&[0, 1, 0, -1], &[-1, 2, -1, 0], &[0, -1, 2, -1], &[-1, 0, -1, 2]], &[1, 0, 0, 0])),
    ]
}

// ---------------------------------------------------------------------------
// Supermatrix realization of sl(m|n): the positive part is generated by the
// elementary matrices E_{i,i+1} under the super bracket.

type Mat = Vec<Vec<Rational>>;

fn elementary(size: usize, i: usize, j: usize) -> Mat {
    let mut m = vec![vec![int(0); size]; size];
    m[i][j] = int(1);
    m
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn super_bracket(a: &Mat, pa: u8, b: &Mat, pb: u8) -> Mat {
    let ab = mul(a, b);
    let ba = mul(b, a);
    let sign = if pa & pb == 1 { int(-1) } else { int(1) };
    ab.iter()
        .zip(&ba)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - &sign * v).collect())
        .collect()
}

/// Rows of `vs` reduced to a basis.
fn span(vs: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut v in vs {
        for (b, &p) in basis.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone() / &b[p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            basis.push(v);
            pivots.push(p);
        }
    }
    basis
}

/// Cartan datum of sl(m|n) for the index parity sequence `s`, with the
/// root-space dimensions of the subalgebra generated by the raising
/// matrices, up to `max_height`.
pub fn supermatrix_oracle(s: &[u8], max_height: usize) -> (CartanDatum, BTreeMap<Vec<i64>, usize>) {
    let size = s.len();
    let r = size - 1;
    let par: Vec<u8> = (0..r).map(|i| (s[i] + s[i + 1]) % 2).collect();
    let x: Vec<Mat> = (0..r).map(|i| elementary(size, i, i + 1)).collect();
    let y: Vec<Mat> = (0..r).map(|i| elementary(size, i + 1, i)).collect();
    let mut rows = Vec::new();
    for i in 0..r {
        let h = super_bracket(&x[i], par[i], &y[i], par[i]);
        rows.push((0..r).map(|j| &h[j][j] - &h[j + 1][j + 1]).collect());
    }
    let datum = CartanDatum::new(rows, par.clone()).unwrap();

    let flat = |m: &Mat| m.iter().flatten().cloned().collect::<Vec<_>>();
    let unflat = |v: &[Rational]| v.chunks(size).map(|c| c.to_vec()).collect::<Mat>();
    let mut spaces: BTreeMap<Vec<i64>, Vec<Vec<Rational>>> = BTreeMap::new();
    for i in 0..r {
        let mut k = vec![0; r];
        k[i] = 1;
        spaces.insert(k, vec![flat(&x[i])]);
    }
    for h in 2..=max_height {
        let prev: Vec<(Vec<i64>, Vec<Vec<Rational>>)> = spaces
            .iter()
            .filter(|(k, _)| k.iter().sum::<i64>() == h as i64 - 1)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let mut next: BTreeMap<Vec<i64>, Vec<Vec<Rational>>> = BTreeMap::new();
        for (k, basis) in prev {
            let pk: u8 = (0..r).map(|i| (k[i] as u8 & 1) * par[i]).sum::<u8>() % 2;
            for i in 0..r {
                let mut target = k.clone();
                target[i] += 1;
                for v in &basis {
                    let b = super_bracket(&x[i], par[i], &unflat(v), pk);
                    next.entry(target.clone()).or_default().push(flat(&b));
                }
            }
        }
        for (k, vs) in next {
            let b = span(vs);
            if !b.is_empty() {
                spaces.insert(k, b);
            }
        }
    }
    (datum, spaces.into_iter().map(|(k, v)| (k, v.len())).collect())
}

// ---------------------------------------------------------------------------
// Peterson's recursion for symmetric Kac-Moody matrices.

fn divides_all(k: i64, v: &[i64]) -> bool {
    v.iter().all(|x| x % k == 0)
}

/// Root multiplicities of the Kac-Moody algebra of a symmetric matrix with
/// diagonal 2, for positive roots up to `max_height`.
pub fn peterson(a: &[Vec<i64>], max_height: usize) -> BTreeMap<Vec<i64>, i64> {
    let n = a.len();
    let form = |x: &[i64], y: &[i64]| -> i64 {
        (0..n).map(|i| (0..n).map(|j| x[i] * a[i][j] * y[j]).sum::<i64>()).sum()
    };
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    fn gen(n: usize, h: usize, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if acc.len() == n - 1 {
            acc.push(h as i64);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for x in 0..=h {
            acc.push(x as i64);
            gen(n, h - x, acc, out);
            acc.pop();
        }
    }
    for h in 1..=max_height {
        gen(n, h, &mut Vec::new(), &mut vectors);
    }
    let mut c: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    let mut mult: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for v in &vectors {
        let height: i64 = v.iter().sum();
        let value = if height == 1 {
            Rational::one()
        } else {
            let mut rhs = Rational::zero();
            for (b, cb) in &c {
                let g: Vec<i64> = v.iter().zip(b).map(|(x, y)| x - y).collect();
                if g.iter().any(|&t| t < 0) || g.iter().all(|&t| t == 0) {
                    continue;
                }
                if let Some(cg) = c.get(&g) {
                    rhs += Rational::from_integer(form(b, &g).into()) * cb * cg;
                }
            }
            let lhs = form(v, v) - 2 * height;
            if lhs == 0 {
                // the recursion is silent here; such points (sums of distinct
                // positive roots like 2*rho of sl3) are taken to be non-roots
                assert!(rhs.is_zero(), "degenerate point with nonzero source");
                let mut c_v = Rational::zero();
                for k in 2..=height {
                    if divides_all(k, v) {
                        let w: Vec<i64> = v.iter().map(|x| x / k).collect();
                        if let Some(&mw) = mult.get(&w) {
                            c_v += Rational::new(mw.into(), k.into());
                        }
                    }
                }
                c_v
            } else {
                rhs / Rational::from_integer(lhs.into())
            }
        };
        // mult(v) = c_v - sum over k >= 2 dividing v of mult(v/k)/k
        let mut m = value.clone();
        for k in 2..=height {
            if divides_all(k, v) {
                let w: Vec<i64> = v.iter().map(|x| x / k).collect();
                if let Some(&mw) = mult.get(&w) {
                    m -= Rational::new(mw.into(), k.into());
                }
            }
        }
        assert!(m.is_integer() && !m.is_negative(), "non-integral multiplicity at {v:?}");
        let m: i64 = m.to_integer().try_into().unwrap();
        if m > 0 {
            mult.insert(v.clone(), m);
        }
        if !value.is_zero() {
            c.insert(v.clone(), value);
        }
    }
    mult
}

// ---------------------------------------------------------------------------
// Checks shared by the property suites and the acceptance run.


pub fn regular_isotropic(d: &CartanDatum) -> Vec<usize> {
    (0..d.n())
        .filter(|&i| {
            let k = classify_simple_root(d, i).unwrap();
            k.kind == RootKind::OddIsotropic && k.regularity == Regularity::Regular
        })
        .collect()
}

pub fn isotropic(d: &CartanDatum) -> Vec<usize> {
    (0..d.n()).filter(|&i| d.is_isotropic(i)).collect()
}

/// Root-space dimensions seen from the base reflected at `k` agree with
/// those of the original base, for new heights up to `h`.
pub fn covariance(d: &CartanDatum, k: usize, h: usize) -> Result<(), String> {
    let s = odd_reflection(&BaseState::initial(d), k).map_err(|e| e.to_string())?;
    let old = build_graded(d, 2 * h, 100_000);
    let new = build_graded(&s.datum, h, 100_000);
    if old.budget_hit || new.budget_hit {
        return Err("dimension budget hit".into());
    }
    for (root, &dim) in &new.by_root {
        let mut image = RootVector::zero(d.n());
        for (c, r) in root.0.iter().zip(&s.roots) {
            image = image.add(&r.scale(*c));
        }
        let image = if image.is_nonpositive() { image.neg() } else { image };
        let want = old.dim(&image);
        if want != dim {
            return Err(format!("new root {root} has dim {dim}, its image {image} has {want}"));
        }
    }
    Ok(())
}

/// Double reflection returns the original datum and roots.
pub fn involution(d: &CartanDatum, k: usize) -> bool {
    superkac::reflections::reflect_is_involution_check(&BaseState::initial(d), k).unwrap()
}

/// Reflection never changes whether a datum is elemental.
pub fn elemental_preserved(d: &CartanDatum, k: usize) -> bool {
    let s = odd_reflection(&BaseState::initial(d), k).unwrap();
    superkac::structure_flags(d).elemental == superkac::structure_flags(&s.datum).elemental
}

pub fn gcm_equivalence(d: &CartanDatum) -> bool {
    let no_singular = (0..d.n()).all(|i| !d.is_singular(i));
    is_gcm(d) == (check_lemma31(d).is_empty() && no_singular)
}

/// Data whose whole orbit consists of GCMs.
pub fn regular_km_fixtures() -> Vec<(&'static str, CartanDatum)> {
    let (sl21, _) = supermatrix_oracle(&[0, 0, 1], 1);
    let (sl21_odd, _) = supermatrix_oracle(&[0, 1, 0], 1);
    let (sl22, _) = supermatrix_oracle(&[0, 1, 0, 1], 1);
    let (sl32, _) = supermatrix_oracle(&[0, 0, 1, 0, 1], 1);
    let all = vec![
        ("sl(2|1)", normalize(&sl21)),
        ("sl(2|1) odd base", normalize(&sl21_odd)),
        ("sl(2|2)", normalize(&sl22)),
        ("sl(3|2)", normalize(&sl32)),
        ("osp(1|2)", ints(&[&[2]], &[1])),
        ("osp(3|2)", ints(&[&[0, 1], &[-2, 2]], &[1, 0])),
        ("D(2,1;1/2)", CartanDatum::from_strs(&[&["0", "1", "1/2"], &["-1", "2", "0"], &["-1", "0", "2"]], &[1, 0, 0])),
        ("q(3)", ints(&[&[2, -1, -1], &[-1, 2, -1], &[1, -1, 0]], &[0, 0, 1])),
        ("affine A1", ints(&[&[2, -2], &[-2, 2]], &[0, 0])),
    ];
    all.into_iter()
        .filter(|(_, d)| is_regular_kac_moody(d, Budget::new(8, 512).unwrap()).unwrap() == Verdict::Yes)
        .collect()
}
