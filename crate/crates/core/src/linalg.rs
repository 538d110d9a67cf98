//! Exact linear algebra over Q(ζ_m): reduced echelon forms, kernels,
//! images, annihilators and eigenspace decompositions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{rational, CycNum};
use crate::error::{Error, Result};

/// A dense matrix with entries in a single cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    m: u32,
    data: Vec<CycNum>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, m: u32) -> Mat {
        Mat {
            rows,
            cols,
            m,
            data: vec![CycNum::zero(m); rows * cols],
        }
    }

    pub fn identity(n: usize, m: u32) -> Mat {
        let mut out = Mat::zeros(n, n, m);
        for i in 0..n {
            out.set(i, i, CycNum::one(m));
        }
        out
    }

    /// Build from rows; all rows must share a length and all entries a modulus.
    pub fn from_rows(rows: Vec<Vec<CycNum>>, m: u32) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            for x in row {
                if x.modulus() != m {
                    return Err(Error::ModulusMismatch(x.modulus(), m));
                }
                data.push(x);
            }
        }
        Ok(Mat {
            rows: r,
            cols: c,
            m,
            data,
        })
    }

    /// Diagonal matrix from entries.
    pub fn diagonal(diag: &[CycNum], m: u32) -> Mat {
        let mut out = Mat::zeros(diag.len(), diag.len(), m);
        for (i, d) in diag.iter().enumerate() {
            out.set(i, i, d.clone());
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<CycNum>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<CycNum> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows, self.m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols, self.m);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { data, ..self.clone() }
    }

    pub fn scale(&self, c: &CycNum) -> Mat {
        let data = self.data.iter().map(|a| a * c).collect();
        Mat { data, ..self.clone() }
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[CycNum]) -> Vec<CycNum> {
        (0..self.rows)
            .map(|i| dot(self.row(i), v, self.m))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNum::is_zero)
    }

    pub fn pow(&self, k: u64) -> Mat {
        let mut acc = Mat::identity(self.rows, self.m);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn rank(&self) -> usize {
        rref(self.row_vecs(), self.cols, self.m).1.len()
    }

    pub fn determinant(&self) -> CycNum {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut det = CycNum::one(self.m);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return CycNum::zero(self.m);
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det = &det * &p;
            let pinv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &pinv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let aug: Vec<Vec<CycNum>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        CycNum::one(self.m)
                    } else {
                        CycNum::zero(self.m)
                    }
                }));
                row
            })
            .collect();
        let (red, pivots) = rref(aug, 2 * n, self.m);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let rows = red.into_iter().map(|r| r[n..].to_vec()).collect();
        Mat::from_rows(rows, self.m)
    }

    /// Re-embed every entry into Q(ζ_target).
    pub fn embed(&self, target: u32) -> Result<Mat> {
        let data = self
            .data
            .iter()
            .map(|x| x.embed(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            m: target,
            data,
        })
    }

    /// Multiplicative order, searching up to `bound`.
    pub fn order(&self, bound: u64) -> Result<u64> {
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_identity() {
                return Ok(k);
            }
            p = p.mul(self);
        }
        Err(Error::InfiniteOrder { bound })
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[CycNum], b: &[CycNum], m: u32) -> CycNum {
    let mut acc = CycNum::zero(m);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<CycNum>>, cols: usize, m: u32) -> (Vec<Vec<CycNum>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    debug_assert!(rows.iter().all(|row| row.iter().any(|x| !x.is_zero())) || m == 0);
    (rows, pivots)
}

/// A subspace of an n-dimensional coordinate space, stored as its canonical
/// RREF basis. Equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    m: u32,
    basis: Vec<Vec<CycNum>>,
}

impl Subspace {
    pub fn zero(ambient: usize, m: u32) -> Subspace {
        Subspace {
            ambient,
            m,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize, m: u32) -> Subspace {
        Subspace {
            ambient,
            m,
            basis: Mat::identity(ambient, m).row_vecs(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<CycNum>] {
        &self.basis
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(rows, self.ambient, self.m).1.len() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        rref_basis(&rows, self.ambient, self.m)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let a = annihilator(self);
        let b = annihilator(other);
        annihilator(&a.sum(&b))
    }

    /// Image of the subspace under a linear map acting on column vectors.
    pub fn map(&self, g: &Mat) -> Subspace {
        let rows: Vec<Vec<CycNum>> = self.basis.iter().map(|v| g.apply(v)).collect();
        rref_basis(&rows, g.rows(), self.m)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        write!(f, "}} in dim {}", self.ambient)
    }
}

/// Canonical RREF basis of the span of `vectors`.
pub fn rref_basis(vectors: &[Vec<CycNum>], ambient: usize, m: u32) -> Subspace {
    let (basis, _) = rref(vectors.to_vec(), ambient, m);
    Subspace { ambient, m, basis }
}

/// Null space `{x : M x = 0}`.
pub fn kernel(mat: &Mat) -> Subspace {
    let (red, pivots) = rref(mat.row_vecs(), mat.cols(), mat.modulus());
    let m = mat.modulus();
    let n = mat.cols();
    let mut vecs = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![CycNum::zero(m); n];
        v[free] = CycNum::one(m);
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        vecs.push(v);
    }
    rref_basis(&vecs, n, m)
}

/// Column space of `M`.
pub fn image(mat: &Mat) -> Subspace {
    rref_basis(&mat.transpose().row_vecs(), mat.rows(), mat.modulus())
}

/// `V^g = ker(1 - g)`; assumes `g` has finite order.
pub fn fixed_space(g: &Mat) -> Subspace {
    kernel(&Mat::identity(g.rows(), g.modulus()).sub(g))
}

/// `Im(1 - g)`, the complement of the fixed space for finite-order `g`.
pub fn perp_space(g: &Mat) -> Subspace {
    image(&Mat::identity(g.rows(), g.modulus()).sub(g))
}

/// Fixed and perp spaces after confirming that `g` has finite order.
pub fn checked_fixed_perp(g: &Mat) -> Result<(Subspace, Subspace)> {
    let n = g.rows() as u64;
    let bound = g.modulus() as u64 * (1..=n).product::<u64>().max(1);
    g.order(bound)?;
    Ok((fixed_space(g), perp_space(g)))
}

/// Functionals (in dual-basis coordinates) vanishing on `w`.
pub fn annihilator(w: &Subspace) -> Subspace {
    if w.dim() == 0 {
        return Subspace::full(w.ambient, w.m);
    }
    let rows = Mat::from_rows(w.basis.clone(), w.m).expect("rectangular basis");
    kernel(&rows)
}

/// One eigenspace of a finite-order matrix; the eigenvalue is `ζ_m^exponent`.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub eigenvalue: CycNum,
    pub exponent: u32,
    pub space: Subspace,
}

/// Eigenspaces of a finite-order `g`, by ascending exponent of the eigenvalue.
pub fn eigen_decomposition(g: &Mat) -> Result<Vec<Eigenspace>> {
    let m = g.modulus();
    let n = g.rows();
    let ord = g.order(m as u64)?;
    let step = m as u64 / ord;
    let mut powers = vec![Mat::identity(n, m)];
    for _ in 1..ord {
        powers.push(powers.last().unwrap().mul(g));
    }
    let scale = CycNum::from_rational(m, rational(1, ord as i64));
    let mut out = Vec::new();
    let mut total = 0;
    for j in 0..ord {
        let exponent = (j * step) as u32;
        let mut proj = Mat::zeros(n, n, m);
        for (k, gk) in powers.iter().enumerate() {
            let coef = CycNum::root_of_unity(m, -((exponent as u64 * k as u64) as i64));
            proj = proj.add(&gk.scale(&coef));
        }
        let space = image(&proj.scale(&scale));
        if space.dim() > 0 {
            total += space.dim();
            out.push(Eigenspace {
                eigenvalue: CycNum::root_of_unity(m, exponent as i64),
                exponent,
                space,
            });
        }
    }
    if total != n {
        return Err(Error::NotSemisimple {
            got: total,
            expected: n,
        });
    }
    Ok(out)
}

/// Sparse incremental echelon basis keyed by an ordered index type. Used for
/// rank computations and span membership in large graded spaces.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    m: u32,
    rows: BTreeMap<K, BTreeMap<K, CycNum>>,
}

pub type SparseVec<K> = BTreeMap<K, CycNum>;

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(m: u32) -> Self {
        Echelon {
            m,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows until its leading key is not a pivot.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        v.retain(|_, c| !c.is_zero());
        let mut done: SparseVec<K> = BTreeMap::new();
        while let Some((k, c)) = v.pop_first() {
            match self.rows.get(&k) {
                Some(row) => {
                    for (rk, rc) in row.iter().skip(1) {
                        let t = &c * rc;
                        let e = v.entry(rk.clone()).or_insert_with(|| CycNum::zero(self.m));
                        *e -= &t;
                        if e.is_zero() {
                            v.remove(rk);
                        }
                    }
                }
                None => {
                    done.insert(k, c);
                }
            }
        }
        done
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((lead, c)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = c.inv().expect("nonzero leading coefficient");
        let row: SparseVec<K> = r.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
        self.rows.insert(lead, row);
        true
    }
}

/// Rank of a family of sparse vectors.
pub fn sparse_rank<K: Ord + Clone>(vectors: impl IntoIterator<Item = SparseVec<K>>, m: u32) -> usize {
    let mut e = Echelon::new(m);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(m: u32, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycNum::from_integer(m, x)).collect())
                .collect(),
            m,
        )
        .unwrap()
    }

    fn v(m: u32, xs: &[i64]) -> Vec<CycNum> {
        xs.iter().map(|&x| CycNum::from_integer(m, x)).collect()
    }

    #[test]
    fn rref_examples() {
        let s = rref_basis(&[v(1, &[2, 0, 0])], 3, 1);
        assert_eq!(s.basis(), &[v(1, &[1, 0, 0])]);
        let s = rref_basis(&[v(1, &[1, 1, 0]), v(1, &[0, 0, 0])], 3, 1);
        assert_eq!(s.basis(), &[v(1, &[1, 1, 0])]);
        let s = rref_basis(&[v(1, &[1, 0]), v(1, &[0, 1]), v(1, &[1, 1])], 2, 1);
        assert_eq!(s, Subspace::full(2, 1));
        assert_eq!(rref_basis(&[], 3, 1).dim(), 0);
    }

    #[test]
    fn fixed_and_perp_of_reflection() {
        let g = ints(2, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let f = fixed_space(&g);
        assert_eq!(f.basis(), &[v(2, &[0, 1, 0]), v(2, &[0, 0, 1])]);
        assert_eq!(perp_space(&g).basis(), &[v(2, &[1, 0, 0])]);
        let id = Mat::identity(3, 2);
        assert_eq!(fixed_space(&id), Subspace::full(3, 2));
        assert_eq!(perp_space(&id).dim(), 0);
    }

    #[test]
    fn annihilator_examples() {
        let w = rref_basis(&[v(1, &[0, 1, 0]), v(1, &[0, 0, 1])], 3, 1);
        assert_eq!(annihilator(&w).basis(), &[v(1, &[1, 0, 0])]);
        assert_eq!(annihilator(&Subspace::zero(3, 1)), Subspace::full(3, 1));
        let w = rref_basis(&[v(1, &[1, 1])], 2, 1);
        assert_eq!(annihilator(&w).basis(), &[v(1, &[1, -1])]);
    }

    #[test]
    fn eigen_examples() {
        let g = ints(2, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let e = eigen_decomposition(&g).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e[0].eigenvalue.is_one());
        assert_eq!(e[0].space.dim(), 2);
        assert_eq!(e[1].eigenvalue, CycNum::from_integer(2, -1));
        assert_eq!(e[1].space.basis(), &[v(2, &[1, 0, 0])]);

        let swap = ints(2, &[&[0, 1], &[1, 0]]);
        let e = eigen_decomposition(&swap).unwrap();
        assert_eq!(e[0].space.basis(), &[v(2, &[1, 1])]);
        assert_eq!(e[1].space.basis(), &[v(2, &[1, -1])]);

        let e = eigen_decomposition(&Mat::identity(3, 1)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].space.dim(), 3);
    }

    #[test]
    fn eigen_over_gaussian_integers() {
        let i = CycNum::zeta(4);
        let z = CycNum::zero(4);
        let g = Mat::from_rows(vec![vec![z.clone(), i.clone()], vec![i.clone(), z]], 4).unwrap();
        let e = eigen_decomposition(&g).unwrap();
        for es in &e {
            for b in es.space.basis() {
                let gb = g.apply(b);
                let lb: Vec<CycNum> = b.iter().map(|x| x * &es.eigenvalue).collect();
                assert_eq!(gb, lb);
            }
        }
        assert_eq!(e.iter().map(|x| x.space.dim()).sum::<usize>(), 2);
    }

    #[test]
    fn infinite_order_detected() {
        let g = ints(1, &[&[1, 1], &[0, 1]]);
        assert!(matches!(checked_fixed_perp(&g), Err(Error::InfiniteOrder { .. })));
    }

    #[test]
    fn inverse_and_determinant() {
        let g = ints(1, &[&[2, 1], &[1, 1]]);
        let inv = g.inverse().unwrap();
        assert!(g.mul(&inv).is_identity());
        assert_eq!(g.determinant(), CycNum::one(1));
        assert!(ints(1, &[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e: Echelon<u8> = Echelon::new(1);
        let sv = |xs: &[(u8, i64)]| -> SparseVec<u8> {
            xs.iter().map(|&(k, c)| (k, CycNum::from_integer(1, c))).collect()
        };
        assert!(e.insert(sv(&[(0, 1), (1, 1)])));
        assert!(e.insert(sv(&[(1, 2), (2, 1)])));
        assert!(!e.insert(sv(&[(0, 2), (1, 4), (2, 1)])));
        assert!(e.contains(sv(&[(0, 1), (1, -1), (2, -1)])));
        assert_eq!(e.rank(), 2);
    }

    fn arb_perm_sign_matrix() -> impl Strategy<Value = Mat> {
        (Just(vec![0usize, 1, 2, 3]).prop_shuffle(), proptest::collection::vec(any::<bool>(), 4))
            .prop_map(|(perm, signs)| {
                let mut g = Mat::zeros(4, 4, 24);
                for (i, &p) in perm.iter().enumerate() {
                    g.set(p, i, CycNum::from_integer(24, if signs[i] { -1 } else { 1 }));
                }
                g
            })
    }

    proptest! {
        #[test]
        fn fixed_perp_split(g in arb_perm_sign_matrix()) {
            let f = fixed_space(&g);
            let p = perp_space(&g);
            prop_assert_eq!(f.dim() + p.dim(), 4);
            prop_assert_eq!(f.intersection(&p).dim(), 0);
            prop_assert_eq!(f.sum(&p), Subspace::full(4, 24));
            prop_assert_eq!(annihilator(&annihilator(&f)), f.clone());
            for es in eigen_decomposition(&g).unwrap() {
                for b in es.space.basis() {
                    let lb: Vec<CycNum> = b.iter().map(|x| x * &es.eigenvalue).collect();
                    prop_assert_eq!(g.apply(b), lb);
                }
            }
        }
    }
}
