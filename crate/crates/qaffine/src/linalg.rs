//! Sparse exact matrices over [`QRat`] with labeled bases.
//!
//! Provides Kronecker products, exact kernels by elimination, spectral
//! projectors for operators with known eigenvalues, and the JSON dump
//! format used by the command-line driver.

use crate::scalar::{gauss_to_c64, QRat};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Debug;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("eigenvalue list contains repeats")]
    RepeatedEigenvalue(String),
    #[error("minimal polynomial not satisfied")]
    MinPolyFailed,
    #[error("target eigenvalue not in list")]
    TargetMissing,
    #[error("singular system: {0}")]
    Singular(String),
}

/// Requirements on basis labels.
pub trait Label: Clone + Ord + Eq + Debug + fmt::Display {}
impl<T: Clone + Ord + Eq + Debug + fmt::Display> Label for T {}

/// Tensor-product label; `kron` produces these.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Pair<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(x){}", self.0, self.1)
    }
}

/// Ordered basis with label lookup. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Basis<L: Label> {
    inner: Arc<BasisInner<L>>,
}

#[derive(Debug)]
struct BasisInner<L: Label> {
    labels: Vec<L>,
    index: BTreeMap<L, usize>,
}

impl<L: Label> PartialEq for Basis<L> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.labels == other.inner.labels
    }
}
impl<L: Label> Eq for Basis<L> {}

impl<L: Label> Basis<L> {
    pub fn new(labels: Vec<L>) -> Basis<L> {
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect::<BTreeMap<_, _>>();
        assert_eq!(index.len(), labels.len(), "duplicate basis labels");
        Basis { inner: Arc::new(BasisInner { labels, index }) }
    }

    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &L {
        &self.inner.labels[i]
    }

    pub fn labels(&self) -> &[L] {
        &self.inner.labels
    }

    pub fn index_of(&self, l: &L) -> Option<usize> {
        self.inner.index.get(l).copied()
    }

    /// Product basis in row-major order, matching `kron`.
    pub fn tensor<M: Label>(&self, other: &Basis<M>) -> Basis<Pair<L, M>> {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for a in self.labels() {
            for b in other.labels() {
                labels.push(Pair(a.clone(), b.clone()));
            }
        }
        Basis::new(labels)
    }
}

/// Sparse matrix over `QRat`; no explicit zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<L: Label> {
    rows: Basis<L>,
    cols: Basis<L>,
    entries: BTreeMap<(usize, usize), QRat>,
}

impl<L: Label> Mat<L> {
    pub fn zero(rows: Basis<L>, cols: Basis<L>) -> Mat<L> {
        Mat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(basis: Basis<L>) -> Mat<L> {
        let entries = (0..basis.len()).map(|i| ((i, i), QRat::one())).collect();
        Mat { rows: basis.clone(), cols: basis, entries }
    }

    pub fn scalar(basis: Basis<L>, c: &QRat) -> Mat<L> {
        let mut m = Mat::zero(basis.clone(), basis);
        if !c.is_zero() {
            for i in 0..m.rows.len() {
                m.entries.insert((i, i), c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> &Basis<L> {
        &self.rows
    }

    pub fn cols(&self) -> &Basis<L> {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> QRat {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &QRat)> {
        self.entries.iter()
    }

    pub fn set(&mut self, r: usize, c: usize, v: QRat) {
        assert!(r < self.nrows() && c < self.ncols());
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &QRat) {
        if v.is_zero() {
            return;
        }
        assert!(r < self.nrows() && c < self.ncols());
        let cur = self.entries.entry((r, c)).or_default();
        *cur = &*cur + v;
        if cur.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn add(&self, other: &Mat<L>) -> Mat<L> {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch in add");
        let mut out = self.clone();
        for ((r, c), v) in other.entries.iter() {
            out.add_to(*r, *c, v);
        }
        out
    }

    pub fn sub(&self, other: &Mat<L>) -> Mat<L> {
        self.add(&other.scale(&-&QRat::one()))
    }

    pub fn scale(&self, c: &QRat) -> Mat<L> {
        if c.is_zero() {
            return Mat::zero(self.rows.clone(), self.cols.clone());
        }
        Mat {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat<L> {
        Mat {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries: self.entries.iter().map(|((r, c), v)| ((*c, *r), v.clone())).collect(),
        }
    }

    /// Conjugate transpose, with q treated as a real symbol.
    pub fn dagger(&self) -> Mat<L> {
        Mat {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries: self
                .entries
                .iter()
                .map(|((r, c), v)| ((*c, *r), v.conj_q_real()))
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Mat<L>) -> Result<Mat<L>, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::BasisMismatch(format!(
                "{} columns vs {} rows",
                self.ncols(),
                other.nrows()
            )));
        }
        // index rhs rows once
        let mut by_row: BTreeMap<usize, Vec<(usize, &QRat)>> = BTreeMap::new();
        for ((r, c), v) in other.entries.iter() {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out = Mat::zero(self.rows.clone(), other.cols.clone());
        for ((r, k), a) in self.entries.iter() {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    out.add_to(*r, *c, &(a * *b));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Mat<L>) -> Result<Mat<L>, LinalgError> {
        Ok(self.matmul(other)?.sub(&other.matmul(self)?))
    }

    pub fn apply(&self, v: &Vector<L>) -> Result<Vector<L>, LinalgError> {
        if self.cols != v.basis {
            return Err(LinalgError::BasisMismatch("matrix/vector".into()));
        }
        let mut out = Vector::zero(self.rows.clone());
        for ((r, c), a) in self.entries.iter() {
            if let Some(x) = v.entries.get(c) {
                out.add_to(*r, &(a * x));
            }
        }
        Ok(out)
    }

    pub fn map_scalars(&self, f: impl Fn(&QRat) -> QRat) -> Mat<L> {
        let mut out = Mat::zero(self.rows.clone(), self.cols.clone());
        for ((r, c), v) in self.entries.iter() {
            out.add_to(*r, *c, &f(v));
        }
        out
    }

    /// Restriction to sub-bases; entries outside are dropped.
    pub fn restrict(&self, rows: &Basis<L>, cols: &Basis<L>) -> Mat<L> {
        let mut out = Mat::zero(rows.clone(), cols.clone());
        for ((r, c), v) in self.entries.iter() {
            let rl = self.rows.label(*r);
            let cl = self.cols.label(*c);
            if let (Some(ri), Some(ci)) = (rows.index_of(rl), cols.index_of(cl)) {
                out.set(ri, ci, v.clone());
            }
        }
        out
    }

    /// Columns indexed by `cols` of this matrix, as dense vectors.
    pub fn column(&self, c: usize) -> Vector<L> {
        let mut v = Vector::zero(self.rows.clone());
        for ((r, cc), a) in self.entries.iter() {
            if *cc == c {
                v.add_to(*r, a);
            }
        }
        v
    }

    /// JSON dump: `{rows, cols, entries: [[r, c, "qrat"]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<String> = self.rows.labels().iter().map(|l| l.to_string()).collect();
        let cols: Vec<String> = self.cols.labels().iter().map(|l| l.to_string()).collect();
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((r, c), v)| json!([r, c, v.to_string()]))
            .collect();
        json!({ "rows": rows, "cols": cols, "entries": entries })
    }

    /// Largest entry by term count, for residual summaries.
    pub fn worst_entry(&self) -> Option<(String, String)> {
        self.entries
            .iter()
            .max_by_key(|(_, v)| v.complexity())
            .map(|((r, c), v)| {
                (
                    format!("({}, {})", self.rows.label(*r), self.cols.label(*c)),
                    v.to_string(),
                )
            })
    }

    /// Numeric dense image at an exact evaluation point, as (re, im) pairs.
    pub fn eval_dense(&self, q0: &crate::scalar::Gauss) -> Result<Vec<Vec<(f64, f64)>>, crate::scalar::ScalarError> {
        let mut out = vec![vec![(0.0, 0.0); self.ncols()]; self.nrows()];
        for ((r, c), v) in self.entries.iter() {
            out[*r][*c] = gauss_to_c64(&v.eval_at(q0)?);
        }
        Ok(out)
    }
}

/// Kronecker product with product basis labels.
pub fn kron<A: Label, B: Label>(a: &Mat<A>, b: &Mat<B>) -> Mat<Pair<A, B>> {
    let rows = a.rows().tensor(b.rows());
    let cols = a.cols().tensor(b.cols());
    let bn_rows = b.nrows();
    let bn_cols = b.ncols();
    let mut out = Mat::zero(rows, cols);
    for ((ar, ac), av) in a.entries.iter() {
        for ((br, bc), bv) in b.entries.iter() {
            out.add_to(ar * bn_rows + br, ac * bn_cols + bc, &(av * bv));
        }
    }
    out
}

/// Sparse column vector over a labeled basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<L: Label> {
    pub basis: Basis<L>,
    entries: BTreeMap<usize, QRat>,
}

impl<L: Label> Vector<L> {
    pub fn zero(basis: Basis<L>) -> Vector<L> {
        Vector { basis, entries: BTreeMap::new() }
    }

    pub fn unit(basis: Basis<L>, i: usize) -> Vector<L> {
        let mut v = Vector::zero(basis);
        v.add_to(i, &QRat::one());
        v
    }

    pub fn from_entries(basis: Basis<L>, entries: impl IntoIterator<Item = (usize, QRat)>) -> Vector<L> {
        let mut v = Vector::zero(basis);
        for (i, c) in entries {
            v.add_to(i, &c);
        }
        v
    }

    pub fn get(&self, i: usize) -> QRat {
        self.entries.get(&i).cloned().unwrap_or_default()
    }

    pub fn add_to(&mut self, i: usize, c: &QRat) {
        if c.is_zero() {
            return;
        }
        assert!(i < self.basis.len());
        let cur = self.entries.entry(i).or_default();
        *cur = &*cur + c;
        if cur.is_zero() {
            self.entries.remove(&i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &QRat)> {
        self.entries.iter()
    }

    pub fn scale(&self, c: &QRat) -> Vector<L> {
        if c.is_zero() {
            return Vector::zero(self.basis.clone());
        }
        Vector {
            basis: self.basis.clone(),
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Vector<L>) -> Vector<L> {
        assert!(self.basis == other.basis);
        let mut out = self.clone();
        for (i, c) in other.entries.iter() {
            out.add_to(*i, c);
        }
        out
    }

    pub fn sub(&self, other: &Vector<L>) -> Vector<L> {
        self.add(&other.scale(&-&QRat::one()))
    }

    pub fn to_dense(&self) -> Vec<QRat> {
        let mut v = vec![QRat::zero(); self.basis.len()];
        for (i, c) in self.entries.iter() {
            v[*i] = c.clone();
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Elimination
// ---------------------------------------------------------------------------

/// Row echelon data for a dense copy of a matrix.
struct Echelon {
    mat: Vec<Vec<QRat>>,
    /// pivot column of each used row, in order
    pivots: Vec<usize>,
}

/// Exact elimination. Rows are combined division-free
/// (`row_j <- p*row_j - m*row_i`); pivots are chosen by smallest term
/// count with ties broken by position.
fn echelon(mut mat: Vec<Vec<QRat>>) -> Echelon {
    let nrows = mat.len();
    let ncols = if nrows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        // pivot choice: smallest complexity among nonzero candidates
        let mut best: Option<(usize, usize)> = None;
        for r in row..nrows {
            if !mat[r][col].is_zero() {
                let cx = mat[r][col].complexity();
                if best.map(|(bc, _)| cx < bc).unwrap_or(true) {
                    best = Some((cx, r));
                }
            }
        }
        let Some((_, prow)) = best else { continue };
        mat.swap(row, prow);
        let pivot = mat[row][col].clone();
        for r in 0..nrows {
            if r == row || mat[r][col].is_zero() {
                continue;
            }
            let m = mat[r][col].clone();
            for c in 0..ncols {
                let v = &(&pivot * &mat[r][c]) - &(&m * &mat[row][c]);
                mat[r][c] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    // normalize pivot rows
    for (r, &c) in pivots.iter().enumerate() {
        let p = mat[r][c].clone();
        let inv = p.inv().expect("pivot is nonzero");
        for v in mat[r].iter_mut() {
            *v = &*v * &inv;
        }
    }
    Echelon { mat, pivots }
}

fn mat_to_dense<L: Label>(m: &Mat<L>) -> Vec<Vec<QRat>> {
    let mut out = vec![vec![QRat::zero(); m.ncols()]; m.nrows()];
    for ((r, c), v) in m.entries() {
        out[*r][*c] = v.clone();
    }
    out
}

/// Exact basis of the right null space. Every returned vector is
/// re-verified against the matrix before being handed back.
pub fn kernel<L: Label>(m: &Mat<L>) -> Vec<Vector<L>> {
    let ech = echelon(mat_to_dense(m));
    let ncols = m.ncols();
    let pivot_set: BTreeMap<usize, usize> =
        ech.pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    let mut out = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains_key(&free) {
            continue;
        }
        let mut v = Vector::zero(m.cols().clone());
        v.add_to(free, &QRat::one());
        for (&pc, &pr) in pivot_set.iter() {
            let coeff = ech.mat[pr][free].clone();
            if !coeff.is_zero() {
                v.add_to(pc, &-&coeff);
            }
        }
        let image = m.apply(&v).expect("kernel vector has matching basis");
        assert!(image.is_zero(), "kernel vector failed re-verification");
        out.push(v);
    }
    out
}

pub fn rank<L: Label>(m: &Mat<L>) -> usize {
    echelon(mat_to_dense(m)).pivots.len()
}

/// Solve `A x = b` for each right-hand side; `None` when inconsistent.
/// When the kernel of `A` is nontrivial the particular solution with
/// free variables set to zero is returned.
pub fn solve_columns<L: Label>(a: &Mat<L>, rhs: &[Vector<L>]) -> Option<Vec<Vec<QRat>>> {
    let nrows = a.nrows();
    let ncols = a.ncols();
    let k = rhs.len();
    let mut mat = vec![vec![QRat::zero(); ncols + k]; nrows];
    for ((r, c), v) in a.entries() {
        mat[*r][*c] = v.clone();
    }
    for (j, b) in rhs.iter().enumerate() {
        assert!(b.basis == *a.rows());
        for (i, v) in b.iter() {
            mat[*i][ncols + j] = v.clone();
        }
    }
    let ech = echelon(mat);
    // inconsistent when a pivot lands in the rhs block
    if ech.pivots.iter().any(|&c| c >= ncols) {
        return None;
    }
    let pivot_of_col: BTreeMap<usize, usize> =
        ech.pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    // rows beyond the pivot count must have zero rhs
    for r in ech.pivots.len()..nrows {
        for j in 0..k {
            if !ech.mat[r][ncols + j].is_zero() {
                return None;
            }
        }
    }
    // reduced echelon with free variables set to zero: pivot rows read off directly
    let mut out = vec![vec![QRat::zero(); ncols]; k];
    for (col, row) in pivot_of_col.iter() {
        for j in 0..k {
            out[j][*col] = ech.mat[*row][ncols + j].clone();
        }
    }
    Some(out)
}

/// Exact inverse of a square matrix.
pub fn inverse<L: Label>(m: &Mat<L>) -> Result<Mat<L>, LinalgError> {
    if m.nrows() != m.ncols() {
        return Err(LinalgError::BasisMismatch("inverse of non-square".into()));
    }
    let n = m.nrows();
    let rhs: Vec<Vector<L>> = (0..n).map(|i| Vector::unit(m.rows().clone(), i)).collect();
    let sols = solve_columns(m, &rhs).ok_or_else(|| LinalgError::Singular("inverse".into()))?;
    if rank(m) != n {
        return Err(LinalgError::Singular("inverse".into()));
    }
    let mut out = Mat::zero(m.cols().clone(), m.rows().clone());
    for (j, col) in sols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                out.set(i, j, v.clone());
            }
        }
    }
    Ok(out)
}

/// True iff the product of `(m - mu I)` over the given roots vanishes.
pub fn minpoly_check<L: Label>(m: &Mat<L>, roots: &[QRat]) -> bool {
    assert_eq!(m.nrows(), m.ncols(), "minpoly_check needs a square matrix");
    let id = Mat::identity(m.rows().clone());
    let mut acc = id.clone();
    for mu in roots {
        let factor = m.sub(&id.scale(mu));
        acc = acc.matmul(&factor).expect("square");
    }
    acc.is_zero()
}

/// Spectral projector `P_target = prod_{mu != target} (m - mu)/(target - mu)`
/// for a matrix annihilated by `prod (m - mu)` over pairwise-distinct roots.
pub fn eigenprojector<L: Label>(
    m: &Mat<L>,
    eigenvalues: &[QRat],
    target: &QRat,
) -> Result<Mat<L>, LinalgError> {
    for (i, a) in eigenvalues.iter().enumerate() {
        for b in eigenvalues.iter().skip(i + 1) {
            if a == b {
                return Err(LinalgError::RepeatedEigenvalue(a.to_string()));
            }
        }
    }
    if !eigenvalues.contains(target) {
        return Err(LinalgError::TargetMissing);
    }
    if !minpoly_check(m, eigenvalues) {
        return Err(LinalgError::MinPolyFailed);
    }
    let id = Mat::identity(m.rows().clone());
    let mut acc = id.clone();
    for mu in eigenvalues {
        if mu == target {
            continue;
        }
        let factor = m.sub(&id.scale(mu));
        let denom = &(target - mu);
        let scaled = factor.scale(&denom.inv().expect("distinct eigenvalues"));
        acc = acc.matmul(&scaled).expect("square");
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QRat;

    fn simple_basis(n: usize) -> Basis<String> {
        Basis::new((0..n).map(|i| format!("b{i}")).collect())
    }

    fn qr(s: &str) -> QRat {
        s.parse().unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let b = simple_basis(3);
        let mut m = Mat::zero(b.clone(), b.clone());
        m.set(0, 1, qr("q"));
        m.set(2, 0, qr("1+q"));
        let id = Mat::identity(b);
        assert_eq!(id.matmul(&m).unwrap(), m);
        assert_eq!(m.matmul(&id).unwrap(), m);
    }

    #[test]
    fn diagonal_inverse_product() {
        let b = simple_basis(2);
        let mut a = Mat::zero(b.clone(), b.clone());
        a.set(0, 0, qr("q"));
        a.set(1, 1, qr("q^-1"));
        let mut c = Mat::zero(b.clone(), b.clone());
        c.set(0, 0, qr("q^-1"));
        c.set(1, 1, qr("q"));
        assert_eq!(a.matmul(&c).unwrap(), Mat::identity(b));
    }

    #[test]
    fn nilpotent_shift_squares_to_zero() {
        let b = simple_basis(2);
        let mut n = Mat::zero(b.clone(), b.clone());
        n.set(0, 1, QRat::one());
        assert!(n.matmul(&n).unwrap().is_zero());
    }

    #[test]
    fn kron_of_diagonals() {
        let b = simple_basis(2);
        let mut a = Mat::zero(b.clone(), b.clone());
        a.set(0, 0, qr("q"));
        a.set(1, 1, QRat::one());
        let mut c = Mat::zero(b.clone(), b.clone());
        c.set(0, 0, QRat::one());
        c.set(1, 1, qr("q"));
        let k = kron(&a, &c);
        // hand Kronecker expansion: diag(q, q^2, 1, q)
        let expect = [qr("q"), qr("q^2"), qr("1"), qr("q")];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(k.entry(i, i), *e);
        }
        assert_eq!(k.num_entries(), 4);

        let i2 = Mat::identity(b.clone());
        let k2 = kron(&i2, &i2);
        assert_eq!(k2.num_entries(), 4);
        for i in 0..4 {
            assert_eq!(k2.entry(i, i), QRat::one());
        }

        let z = Mat::zero(b.clone(), b.clone());
        assert!(kron(&a, &z).is_zero());
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let b = simple_basis(3);
        let z = Mat::zero(b.clone(), b.clone());
        assert_eq!(kernel(&z).len(), 3);
        let id = Mat::identity(b);
        assert!(kernel(&id).is_empty());
    }

    #[test]
    fn kernel_of_rank_one() {
        // [[1, q], [q, q^2]] has kernel spanned by (q, -1) up to scale
        let b = simple_basis(2);
        let mut m = Mat::zero(b.clone(), b.clone());
        m.set(0, 0, QRat::one());
        m.set(0, 1, qr("q"));
        m.set(1, 0, qr("q"));
        m.set(1, 1, qr("q^2"));
        let ker = kernel(&m);
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        // proportional to (q, -1): cross-multiplied comparison
        let a = v.get(0);
        let c = v.get(1);
        assert_eq!(&a * &-&QRat::one(), &c * &qr("q"));
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn eigenprojector_diagonal_case() {
        let b = simple_basis(2);
        let mut m = Mat::zero(b.clone(), b.clone());
        m.set(0, 0, qr("q^-1"));
        m.set(1, 1, qr("-q"));
        let evs = [qr("q^-1"), qr("-q")];
        let p = eigenprojector(&m, &evs, &evs[0]).unwrap();
        let mut expect = Mat::zero(b.clone(), b.clone());
        expect.set(0, 0, QRat::one());
        assert_eq!(p, expect);

        let id = Mat::identity(b);
        let p1 = eigenprojector(&id, &[QRat::one()], &QRat::one()).unwrap();
        assert_eq!(p1, id);
    }

    #[test]
    fn eigenprojector_error_paths() {
        let b = simple_basis(2);
        let id = Mat::identity(b);
        let two = QRat::from_int(2);
        assert!(matches!(
            eigenprojector(&id, &[QRat::one(), QRat::one()], &QRat::one()),
            Err(LinalgError::RepeatedEigenvalue(_))
        ));
        assert!(matches!(
            eigenprojector(&id, &[two.clone()], &two),
            Err(LinalgError::MinPolyFailed)
        ));
    }

    #[test]
    fn minpoly_trivial_cases() {
        let b = simple_basis(2);
        let z = Mat::zero(b.clone(), b.clone());
        assert!(minpoly_check(&z, &[QRat::zero()]));
        let id = Mat::identity(b);
        assert!(minpoly_check(&id, &[QRat::one()]));
        assert!(!minpoly_check(&id, &[QRat::zero()]));
    }

    #[test]
    fn projector_family_properties() {
        // companion-style matrix with minimal polynomial (x - q^-1)(x + q)
        let b = simple_basis(2);
        let mut m = Mat::zero(b.clone(), b.clone());
        m.set(0, 1, QRat::one());
        m.set(1, 0, QRat::one());
        m.set(1, 1, qr("q^-1 - q"));
        let evs = [qr("q^-1"), qr("-q")];
        assert!(minpoly_check(&m, &evs));
        let id = Mat::identity(b);
        let mut sum = Mat::zero(m.rows().clone(), m.cols().clone());
        for t in &evs {
            let p = eigenprojector(&m, &evs, t).unwrap();
            assert_eq!(p.matmul(&p).unwrap(), p, "idempotence");
            assert_eq!(
                m.matmul(&p).unwrap(),
                p.scale(t),
                "eigen-equation m P = t P"
            );
            sum = sum.add(&p);
        }
        assert_eq!(sum, id, "projectors resolve the identity");
    }

    #[test]
    fn inverse_round_trip() {
        let b = simple_basis(2);
        let mut m = Mat::zero(b.clone(), b.clone());
        m.set(0, 0, qr("q"));
        m.set(0, 1, QRat::one());
        m.set(1, 1, qr("q^-2"));
        let inv = inverse(&m).unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), Mat::identity(b));
    }

    #[test]
    fn solve_reports_inconsistency() {
        let b = simple_basis(2);
        let mut m = Mat::zero(b.clone(), b.clone());
        m.set(0, 0, QRat::one());
        m.set(1, 0, QRat::one());
        // rhs outside the column span
        let mut bad = Vector::zero(b.clone());
        bad.add_to(0, &QRat::one());
        bad.add_to(1, &QRat::from_int(2));
        assert!(solve_columns(&m, &[bad]).is_none());
        let mut good = Vector::zero(b);
        good.add_to(0, &QRat::one());
        good.add_to(1, &QRat::one());
        let sol = solve_columns(&m, &[good]).unwrap();
        assert_eq!(sol[0][0], QRat::one());
    }
}
