//! Braiding operators on zero-mode tensor squares and the mode rewriter.
//!
//! The operator is assembled from its spectral data: the tensor square is
//! split into irreducible pieces by locating highest-weight vectors
//! (kernel of the raising action on each weight space) and generating
//! down, each piece is assigned its known eigenvalue, and the operator is
//! the sum of eigenvalue times projector. Shift operators extend the
//! braiding to nonzero modes through rewrite rules; the same rules drive
//! normal ordering of two-letter monomials.

use crate::linalg::{
    eigenprojector, inverse, kernel, kron, minpoly_check, Basis, Mat, Pair, Vector,
};
use crate::scalar::QRat;
use crate::uq::{
    build_adjoint, build_defining, hopf_tensor_action, Gen, Hopf, ModLabel, ModuleKind, Side,
    TruncatedModule,
};
use std::collections::BTreeMap;
use thiserror::Error;

pub type SqLabel = Pair<ModLabel, ModLabel>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("unsupported module kind for braiding")]
    UnsupportedKind,
    #[error("convention failure: tensor square split into dimensions {0:?}")]
    ConventionFailure(Vec<usize>),
    #[error("mode-rule inconsistency, residual {0}")]
    Inconsistent(String),
    #[error("rewrite step budget exceeded")]
    StepBudget,
    #[error("internal solve failed: {0}")]
    Solve(String),
}

/// Eigenvalue data of one spectral block.
#[derive(Debug, Clone)]
pub struct EigenBlock {
    pub value: QRat,
    pub mult: usize,
    pub projector: Mat<SqLabel>,
}

/// The braiding operator on a zero-mode tensor square.
#[derive(Debug, Clone)]
pub struct BraidOp {
    pub kind: ModuleKind,
    pub side: Side,
    pub zero_mode: TruncatedModule,
    pub space: Basis<SqLabel>,
    pub matrix: Mat<SqLabel>,
    pub inverse: Mat<SqLabel>,
    pub eigen: Vec<EigenBlock>,
}

/// Expected irreducible dimensions and their eigenvalues.
fn eigenvalue_of_dim(kind: ModuleKind, dim: usize) -> Option<QRat> {
    match (kind, dim) {
        (ModuleKind::Defining, 3) => Some(QRat::q_pow(-1)),
        (ModuleKind::Defining, 1) => Some(-&QRat::q()),
        (ModuleKind::Adjoint, 5) => Some(QRat::q_pow(2)),
        (ModuleKind::Adjoint, 3) => Some(-&QRat::q_pow(-2)),
        (ModuleKind::Adjoint, 1) => Some(QRat::q_pow(-4)),
        _ => None,
    }
}

impl BraidOp {
    pub fn eigenvalues(&self) -> Vec<QRat> {
        self.eigen.iter().map(|b| b.value.clone()).collect()
    }

    /// The eigenvalue surviving the braiding ideal: the quotient keeps
    /// only this spectral component in degree two.
    pub fn keep_eigenvalue(&self) -> QRat {
        match self.kind {
            ModuleKind::Defining => -&QRat::q(),
            ModuleKind::Adjoint => -&QRat::q_pow(-2),
            ModuleKind::Trivial => unreachable!(),
        }
    }

    /// Coefficient of the Y2 term in `R Y2 = Y1 R + c Y2` consistent with
    /// the minimal polynomial.
    pub fn consistent_rule2_coeff(&self) -> QRat {
        match self.kind {
            // derived from the quadratic: c equals the eigenvalue sum
            ModuleKind::Defining => &QRat::q_pow(-1) - &QRat::q(),
            // the cubic leaves the coefficient free; this value validates
            ModuleKind::Adjoint => &QRat::q_pow(2) - &QRat::q_pow(-2),
            ModuleKind::Trivial => unreachable!(),
        }
    }
}

/// Build the braiding operator for the given module kind, equivariant
/// with respect to the tensor action on the chosen coproduct side.
pub fn build_braid(kind: ModuleKind, hopf: &Hopf, side: Side) -> Result<BraidOp, BraidError> {
    let zero_mode = match kind {
        ModuleKind::Defining => build_defining((0, 0)).expect("nonempty"),
        ModuleKind::Adjoint => build_adjoint((0, 0)).expect("nonempty"),
        ModuleKind::Trivial => return Err(BraidError::UnsupportedKind),
    };
    let space = zero_mode.basis.tensor(&zero_mode.basis);
    let e1 = hopf_tensor_action(hopf, Gen::E1, &zero_mode, &zero_mode, side);
    let f1 = hopf_tensor_action(hopf, Gen::F1, &zero_mode, &zero_mode, side);

    // weight spaces of the square
    let mut weights: Vec<i64> = space
        .labels()
        .iter()
        .map(|Pair(a, b)| TruncatedModule::weight_exponent(a) + TruncatedModule::weight_exponent(b))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    weights.reverse();

    // highest-weight vectors and their f1 orbits
    let mut blocks: Vec<(usize, Vec<Vector<SqLabel>>)> = Vec::new();
    for w in weights {
        let sub = Basis::new(
            space
                .labels()
                .iter()
                .filter(|Pair(a, b)| {
                    TruncatedModule::weight_exponent(a) + TruncatedModule::weight_exponent(b) == w
                })
                .cloned()
                .collect::<Vec<_>>(),
        );
        let restricted = e1.restrict(&space, &sub);
        for hw in kernel(&restricted) {
            // embed back into the full square
            let mut v = Vector::zero(space.clone());
            for (i, c) in hw.iter() {
                let full = space.index_of(sub.label(*i)).expect("sub-basis label");
                v.add_to(full, c);
            }
            let mut orbit = vec![v.clone()];
            let mut cur = v;
            loop {
                cur = f1.apply(&cur).expect("same basis");
                if cur.is_zero() {
                    break;
                }
                orbit.push(cur.clone());
            }
            blocks.push((orbit.len(), orbit));
        }
    }

    let dims: Vec<usize> = blocks.iter().map(|(d, _)| *d).collect();
    let total: usize = dims.iter().sum();
    if total != space.len() || dims.iter().any(|d| eigenvalue_of_dim(kind, *d).is_none()) {
        return Err(BraidError::ConventionFailure(dims));
    }

    // change of basis: columns are the submodule vectors
    let mut u = Mat::zero(space.clone(), space.clone());
    let mut col_values = Vec::new();
    let mut col = 0usize;
    for (dim, orbit) in blocks.iter() {
        let value = eigenvalue_of_dim(kind, *dim).expect("checked");
        for v in orbit {
            for (i, c) in v.iter() {
                u.set(*i, col, c.clone());
            }
            col_values.push(value.clone());
            col += 1;
        }
    }
    let u_inv = inverse(&u).map_err(|e| BraidError::Solve(e.to_string()))?;
    let mut d = Mat::zero(space.clone(), space.clone());
    for (i, v) in col_values.iter().enumerate() {
        d.set(i, i, v.clone());
    }
    let matrix = u.matmul(&d).unwrap().matmul(&u_inv).unwrap();

    // spectral projectors, both by block assembly and by the polynomial
    // formula; the two routes must agree exactly
    let mut values = Vec::new();
    for v in col_values.iter() {
        if !values.contains(v) {
            values.push(v.clone());
        }
    }
    if !minpoly_check(&matrix, &values) {
        return Err(BraidError::Inconsistent("minimal polynomial".into()));
    }
    let mut eigen = Vec::new();
    for value in values.iter() {
        let mut e = Mat::zero(space.clone(), space.clone());
        for (i, v) in col_values.iter().enumerate() {
            if v == value {
                e.set(i, i, QRat::one());
            }
        }
        let p_block = u.matmul(&e).unwrap().matmul(&u_inv).unwrap();
        let p_poly = eigenprojector(&matrix, &values, value)
            .map_err(|e| BraidError::Solve(e.to_string()))?;
        if p_block != p_poly {
            return Err(BraidError::Inconsistent("projector routes disagree".into()));
        }
        let mult = col_values.iter().filter(|v| *v == value).count();
        eigen.push(EigenBlock { value: value.clone(), mult, projector: p_block });
    }

    // inverse as a polynomial in the matrix, from the minimal polynomial
    let inv = braid_inverse_poly(&matrix, &values);
    debug_assert_eq!(
        matrix.matmul(&inv).unwrap(),
        Mat::identity(space.clone()),
        "polynomial inverse"
    );

    Ok(BraidOp { kind, side, zero_mode, space, matrix, inverse: inv, eigen })
}

/// Inverse computed from the minimal polynomial with roots `values`.
fn braid_inverse_poly(m: &Mat<SqLabel>, values: &[QRat]) -> Mat<SqLabel> {
    let id = Mat::identity(m.rows().clone());
    match values.len() {
        // M^2 - e1 M + e2 = 0  =>  M^-1 = (e1 I - M) / e2
        2 => {
            let e1 = &values[0] + &values[1];
            let e2 = &values[0] * &values[1];
            id.scale(&e1).sub(m).scale(&e2.inv().expect("nonzero product"))
        }
        // M^3 - e1 M^2 + e2 M - e3 = 0  =>  M^-1 = (M^2 - e1 M + e2) / e3
        3 => {
            let e1 = &(&values[0] + &values[1]) + &values[2];
            let e2 = &(&(&values[0] * &values[1]) + &(&values[0] * &values[2]))
                + &(&values[1] * &values[2]);
            let e3 = &(&values[0] * &values[1]) * &values[2];
            let m2 = m.matmul(m).unwrap();
            m2.sub(&m.scale(&e1))
                .add(&id.scale(&e2))
                .scale(&e3.inv().expect("nonzero product"))
        }
        _ => inverse(m).expect("invertible"),
    }
}

/// Exact equivariance: the braiding commutes with every generator action
/// on the zero-mode tensor square (same coproduct side it was built on).
pub fn equivariance_residuals(braid: &BraidOp, hopf: &Hopf) -> Vec<(Gen, bool)> {
    Gen::ALL
        .iter()
        .map(|g| {
            let a = hopf_tensor_action(hopf, *g, &braid.zero_mode, &braid.zero_mode, braid.side);
            let comm = braid.matrix.commutator(&a).expect("same basis");
            (*g, comm.is_zero())
        })
        .collect()
}

/// The flip permutation matrix on the tensor square.
pub fn flip_matrix(space: &Basis<SqLabel>) -> Mat<SqLabel> {
    let mut m = Mat::zero(space.clone(), space.clone());
    for (i, Pair(a, b)) in space.labels().iter().enumerate() {
        let j = space.index_of(&Pair(b.clone(), a.clone())).expect("square basis");
        m.set(j, i, QRat::one());
    }
    m
}

/// Evaluate all entries at q = 1 (exact substitution).
pub fn eval_at_one(m: &Mat<SqLabel>) -> Mat<SqLabel> {
    m.map_scalars(|v| QRat::from_gauss(v.eval_at_one().expect("no pole at 1")))
}

// ---------------------------------------------------------------------------
// Mode rules
// ---------------------------------------------------------------------------

/// Letters of rewrite-rule words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    Y1,
    Y2,
    R,
    RInv,
}

/// One rewrite rule `R^{+-1} Y_j -> sum coeff * word`.
#[derive(Debug, Clone)]
pub struct ModeRule {
    pub lhs: (Letter, Letter),
    pub rhs: Vec<(QRat, Vec<Letter>)>,
}

/// The four rules generated by a rule-2 coefficient `c`:
///   R Y1 = Y2 R^-1
///   R Y2 = Y1 R + c Y2
///   R^-1 Y1 = Y2 R^-1 - c Y1
///   R^-1 Y2 = Y1 R
pub fn mode_rules(c: &QRat) -> Vec<ModeRule> {
    vec![
        ModeRule {
            lhs: (Letter::R, Letter::Y1),
            rhs: vec![(QRat::one(), vec![Letter::Y2, Letter::RInv])],
        },
        ModeRule {
            lhs: (Letter::R, Letter::Y2),
            rhs: vec![
                (QRat::one(), vec![Letter::Y1, Letter::R]),
                (c.clone(), vec![Letter::Y2]),
            ],
        },
        ModeRule {
            lhs: (Letter::RInv, Letter::Y1),
            rhs: vec![
                (QRat::one(), vec![Letter::Y2, Letter::RInv]),
                (-c, vec![Letter::Y1]),
            ],
        },
        ModeRule {
            lhs: (Letter::RInv, Letter::Y2),
            rhs: vec![(QRat::one(), vec![Letter::Y1, Letter::R])],
        },
    ]
}

/// Derive and validate mode rules for a given rule-2 coefficient.
/// Validation applies the minimal polynomial to shifted blocks built
/// with the rules; a nonzero residual is an inconsistency and is
/// returned as an error.
pub fn derive_mode_rules(braid: &BraidOp, coeff: &QRat) -> Result<Vec<ModeRule>, BraidError> {
    let rules = mode_rules(coeff);
    // minimal polynomial applied to Y1- and Y2-shifted vectors: the
    // blocks of total mode +-1 contain exactly those
    for (total, lo, hi) in [(1i64, 0i64, 1i64), (-1, -1, 0)] {
        let block = block_braid_with_coeff(braid, coeff, total, lo, hi);
        let values = braid.eigenvalues();
        if !minpoly_check(&block, &values) {
            let id = Mat::identity(block.rows().clone());
            let mut acc = id.clone();
            for mu in values.iter() {
                acc = acc.matmul(&block.sub(&id.scale(mu))).unwrap();
            }
            let worst = acc
                .worst_entry()
                .map(|(pos, v)| format!("{pos} -> {v}"))
                .unwrap_or_default();
            return Err(BraidError::Inconsistent(worst));
        }
    }
    Ok(rules)
}

// ---------------------------------------------------------------------------
// Pushing R letters through shift operators
// ---------------------------------------------------------------------------

/// Apply `R^{sign}` to `Y1^a Y2^b (vec)`, `vec` a zero-mode 2-tensor.
/// Returns terms `(y1, y2, vec)`. The simultaneous shift `Y1 Y2` is
/// central for these rules, so only the excess of one shift over the
/// other is pushed through.
fn push_r(
    braid: &BraidOp,
    c: &QRat,
    sign: i8,
    a: i64,
    b: i64,
    vec: &Vector<SqLabel>,
) -> Vec<(i64, i64, Vector<SqLabel>)> {
    let z = a.min(b);
    let d1 = a - z;
    let d2 = b - z;
    let zm = if sign > 0 { &braid.matrix } else { &braid.inverse };
    let mut out = Vec::new();
    if d1 == 0 && d2 == 0 {
        out.push((z, z, zm.apply(vec).expect("same basis")));
        return out;
    }
    if d1 > 0 {
        // push through Y1 letters: R Y1 -> Y2 R^-1, R^-1 Y1 -> Y2 R^-1 - c Y1
        let mut y2_out = 0i64;
        let mut r = sign;
        let mut y1_rem = d1;
        while y1_rem > 0 {
            if r < 0 {
                // spawned term without an R letter
                out.push((z + y1_rem, z + y2_out, vec.scale(&-c)));
            }
            y2_out += 1;
            y1_rem -= 1;
            r = -1;
        }
        let m = if r > 0 { &braid.matrix } else { &braid.inverse };
        out.push((z, z + y2_out, m.apply(vec).expect("same basis")));
    } else {
        // push through Y2 letters: R Y2 -> Y1 R + c Y2, R^-1 Y2 -> Y1 R
        let mut y1_out = 0i64;
        let mut r = sign;
        let mut y2_rem = d2;
        while y2_rem > 0 {
            if r > 0 {
                let spawned = vec.scale(c);
                out.push((z + y1_out, z + y2_rem, spawned));
            }
            y1_out += 1;
            y2_rem -= 1;
            r = 1;
        }
        let m = if r > 0 { &braid.matrix } else { &braid.inverse };
        out.push((z + y1_out, z, m.apply(vec).expect("same basis")));
    }
    out.retain(|(_, _, v)| !v.is_zero());
    out
}

/// Matrix of the braiding on the subspace of total mode `total` with the
/// first mode ranging over `[lo, hi]`; requires `lo + hi == total` so the
/// block is closed under the rules.
pub fn block_braid(braid: &BraidOp, total: i64, lo: i64, hi: i64) -> Mat<SqLabel> {
    block_braid_with_coeff(braid, &braid.consistent_rule2_coeff(), total, lo, hi)
}

fn block_braid_with_coeff(
    braid: &BraidOp,
    c: &QRat,
    total: i64,
    lo: i64,
    hi: i64,
) -> Mat<SqLabel> {
    assert_eq!(lo + hi, total, "block must be symmetric about total/2");
    let basis = block_basis(braid.kind, total, lo, hi);
    let mut m = Mat::zero(basis.clone(), basis.clone());
    for (col, Pair(la, lb)) in basis.labels().iter().enumerate() {
        let zm_label = |w: i8| ModLabel { kind: braid.kind, mode: 0, weight: w };
        let zi = braid
            .space
            .index_of(&Pair(zm_label(la.weight), zm_label(lb.weight)))
            .expect("zero-mode pair");
        let unit = Vector::unit(braid.space.clone(), zi);
        for (y1, y2, vec) in push_r(braid, c, 1, la.mode, lb.mode, &unit) {
            for (i, coeff) in vec.iter() {
                let Pair(pa, pb) = braid.space.label(*i);
                let target = Pair(
                    ModLabel { kind: braid.kind, mode: y1, weight: pa.weight },
                    ModLabel { kind: braid.kind, mode: y2, weight: pb.weight },
                );
                let row = basis.index_of(&target).expect("block closed under rules");
                m.add_to(row, col, coeff);
            }
        }
    }
    m
}

pub fn block_basis(kind: ModuleKind, total: i64, lo: i64, hi: i64) -> Basis<SqLabel> {
    let weights: &[i8] = match kind {
        ModuleKind::Defining => &[1, -1],
        ModuleKind::Adjoint => &[1, 0, -1],
        ModuleKind::Trivial => &[0],
    };
    let mut labels = Vec::new();
    for p in lo..=hi {
        let q = total - p;
        if q < lo || q > hi {
            continue;
        }
        for &i in weights {
            for &j in weights {
                labels.push(Pair(
                    ModLabel { kind, mode: p, weight: i },
                    ModLabel { kind, mode: q, weight: j },
                ));
            }
        }
    }
    Basis::new(labels)
}

// ---------------------------------------------------------------------------
// Normal ordering
// ---------------------------------------------------------------------------

/// A two-letter monomial `v^{n1}_{i1} (x) v^{n2}_{i2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mono2 {
    pub n1: i64,
    pub i1: i8,
    pub n2: i64,
    pub i2: i8,
}

/// Linear combination of two-letter monomials.
pub type Combo2 = BTreeMap<Mono2, QRat>;

/// Which rewrite route `normal_order` takes; comparing the two is the
/// empirical confluence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Rewrites with `x = keep^-1 * R x`.
    Forward,
    /// Rewrites with `x = keep * R^-1 x`.
    Inverse,
}

pub const REWRITE_BUDGET: usize = 10_000;

/// Rewrite a two-letter monomial into the ordered span (modes weakly
/// increasing), modulo the braiding ideal. Already-ordered input is
/// returned unchanged.
pub fn normal_order(braid: &BraidOp, m: Mono2, route: Route) -> Result<Combo2, BraidError> {
    let mut out: Combo2 = BTreeMap::new();
    if m.n1 <= m.n2 {
        out.insert(m, QRat::one());
        return Ok(out);
    }
    let c = braid.consistent_rule2_coeff();
    let keep = braid.keep_eigenvalue();
    let (sign, scalar) = match route {
        Route::Forward => (1i8, keep.inv().expect("nonzero eigenvalue")),
        Route::Inverse => (-1i8, keep),
    };
    let zm_label = |w: i8| ModLabel { kind: braid.kind, mode: 0, weight: w };
    let zi = braid
        .space
        .index_of(&Pair(zm_label(m.i1), zm_label(m.i2)))
        .expect("zero-mode pair");
    let mut work: Vec<(QRat, i64, i64, Vector<SqLabel>)> =
        vec![(QRat::one(), m.n1, m.n2, Vector::unit(braid.space.clone(), zi))];
    let mut steps = 0usize;
    while let Some((coeff, a, b, vec)) = work.pop() {
        if coeff.is_zero() || vec.is_zero() {
            continue;
        }
        if a <= b {
            for (i, v) in vec.iter() {
                let Pair(pa, pb) = braid.space.label(*i);
                let key = Mono2 { n1: a, i1: pa.weight, n2: b, i2: pb.weight };
                let entry = out.entry(key).or_default();
                *entry = &*entry + &(&coeff * v);
                if entry.is_zero() {
                    out.remove(&key);
                }
            }
            continue;
        }
        steps += 1;
        if steps > REWRITE_BUDGET {
            return Err(BraidError::StepBudget);
        }
        for (y1, y2, v) in push_r(braid, &c, sign, a, b, &vec) {
            work.push((&coeff * &scalar, y1, y2, v));
        }
    }
    Ok(out)
}

/// Precomputed block data for ideal-membership checks on one mode block.
pub struct BlockIdeal {
    pub kind: ModuleKind,
    pub basis: Basis<SqLabel>,
    pub keep_projector: Mat<SqLabel>,
}

impl BlockIdeal {
    /// Block of total mode `n1 + n2`, modes ranging over `[min, max]`.
    pub fn new(braid: &BraidOp, n1: i64, n2: i64) -> Result<BlockIdeal, BraidError> {
        let lo = n2.min(n1);
        let hi = n2.max(n1);
        let total = n1 + n2;
        let basis = block_basis(braid.kind, total, lo, hi);
        let block = block_braid(braid, total, lo, hi);
        let values = braid.eigenvalues();
        if !minpoly_check(&block, &values) {
            return Err(BraidError::Inconsistent("block minimal polynomial".into()));
        }
        let keep = braid.keep_eigenvalue();
        let keep_projector = eigenprojector(&block, &values, &keep)
            .map_err(|e| BraidError::Solve(e.to_string()))?;
        Ok(BlockIdeal { kind: braid.kind, basis, keep_projector })
    }

    /// Whether `monomial - normal_form` lies in the braiding ideal: the
    /// surviving spectral projector must kill the difference.
    pub fn difference_in_ideal(&self, m: Mono2, nf: &Combo2) -> bool {
        let as_label = |n: i64, w: i8| ModLabel { kind: self.kind, mode: n, weight: w };
        let mut diff = Vector::zero(self.basis.clone());
        let idx = self
            .basis
            .index_of(&Pair(as_label(m.n1, m.i1), as_label(m.n2, m.i2)))
            .expect("monomial in block");
        diff.add_to(idx, &QRat::one());
        for (mono, coeff) in nf.iter() {
            let i = self
                .basis
                .index_of(&Pair(as_label(mono.n1, mono.i1), as_label(mono.n2, mono.i2)))
                .expect("normal form in block");
            diff.add_to(i, &-coeff);
        }
        self.keep_projector.apply(&diff).expect("same basis").is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(s: &str) -> QRat {
        s.parse().unwrap()
    }

    fn defining_braid() -> BraidOp {
        build_braid(ModuleKind::Defining, &Hopf::standard(), Side::Normal).unwrap()
    }

    fn adjoint_braid() -> BraidOp {
        build_braid(ModuleKind::Adjoint, &Hopf::standard(), Side::Normal).unwrap()
    }

    #[test]
    fn defining_spectrum_and_hecke() {
        let b = defining_braid();
        let mut mults: Vec<(String, usize)> =
            b.eigen.iter().map(|e| (e.value.to_string(), e.mult)).collect();
        mults.sort();
        assert_eq!(b.eigen.len(), 2);
        let q_inv = qr("q^-1");
        let neg_q = qr("-q");
        for e in &b.eigen {
            if e.value == q_inv {
                assert_eq!(e.mult, 3);
            } else {
                assert_eq!(e.value, neg_q);
                assert_eq!(e.mult, 1);
            }
        }
        // (R - q^-1)(R + q) = 0 exactly
        assert!(minpoly_check(&b.matrix, &[q_inv, neg_q]));
    }

    #[test]
    fn defining_matrix_is_the_expected_one() {
        // frozen from the submodule decomposition worked by hand:
        // basis (++, +-, -+, --), middle block [[0, 1], [1, q^-1 - q]]
        let b = defining_braid();
        let l = |w: i8| ModLabel { kind: ModuleKind::Defining, mode: 0, weight: w };
        let ix = |a: i8, c: i8| b.space.index_of(&Pair(l(a), l(c))).unwrap();
        assert_eq!(b.matrix.entry(ix(1, 1), ix(1, 1)), qr("q^-1"));
        assert_eq!(b.matrix.entry(ix(-1, -1), ix(-1, -1)), qr("q^-1"));
        assert_eq!(b.matrix.entry(ix(1, -1), ix(1, -1)), QRat::zero());
        assert_eq!(b.matrix.entry(ix(-1, 1), ix(1, -1)), QRat::one());
        assert_eq!(b.matrix.entry(ix(1, -1), ix(-1, 1)), QRat::one());
        assert_eq!(b.matrix.entry(ix(-1, 1), ix(-1, 1)), qr("q^-1 - q"));
    }

    #[test]
    fn adjoint_spectrum_and_cubic() {
        let b = adjoint_braid();
        assert_eq!(b.eigen.len(), 3);
        for e in &b.eigen {
            let expected_mult = if e.value == qr("q^2") {
                5
            } else if e.value == qr("-q^-2") {
                3
            } else {
                assert_eq!(e.value, qr("q^-4"));
                1
            };
            assert_eq!(e.mult, expected_mult, "multiplicity of {}", e.value);
            // projector ranks match multiplicities
            assert_eq!(crate::linalg::rank(&e.projector), expected_mult);
        }
        assert!(minpoly_check(&b.matrix, &[qr("q^2"), qr("q^-4"), qr("-q^-2")]));
    }

    #[test]
    fn braid_commutes_with_generator_actions() {
        let hopf = Hopf::standard();
        for braid in [defining_braid(), adjoint_braid()] {
            for (g, ok) in equivariance_residuals(&braid, &hopf) {
                assert!(ok, "{g} does not commute on {:?}", braid.kind);
            }
        }
        // and on the opposite side when built there
        let b = build_braid(ModuleKind::Defining, &hopf, Side::Opposite).unwrap();
        for (g, ok) in equivariance_residuals(&b, &hopf) {
            assert!(ok, "{g} does not commute (opposite side)");
        }
    }

    #[test]
    fn classical_limit_is_the_flip() {
        for braid in [defining_braid(), adjoint_braid()] {
            let at_one = eval_at_one(&braid.matrix);
            assert_eq!(at_one, flip_matrix(&braid.space), "{:?}", braid.kind);
        }
    }

    #[test]
    fn inverse_is_polynomial_in_braid() {
        let b = defining_braid();
        // R^-1 = R + (q - q^-1) for the quadratic case
        let expect = b
            .matrix
            .add(&Mat::identity(b.space.clone()).scale(&qr("q - q^-1")));
        assert_eq!(b.inverse, expect);
        assert_eq!(
            b.matrix.matmul(&b.inverse).unwrap(),
            Mat::identity(b.space.clone())
        );
        let a = adjoint_braid();
        assert_eq!(
            a.matrix.matmul(&a.inverse).unwrap(),
            Mat::identity(a.space.clone())
        );
    }

    #[test]
    fn displayed_defining_coefficient_is_inconsistent() {
        let b = defining_braid();
        // the displayed +(q - q^-1) fails the minimal-polynomial validation
        let displayed = qr("q - q^-1");
        assert!(matches!(
            derive_mode_rules(&b, &displayed),
            Err(BraidError::Inconsistent(_))
        ));
        // while the derived coefficient validates
        assert!(derive_mode_rules(&b, &b.consistent_rule2_coeff()).is_ok());
    }

    #[test]
    fn adjoint_displayed_coefficient_validates() {
        let b = adjoint_braid();
        assert!(derive_mode_rules(&b, &qr("q^2 - q^-2")).is_ok());
        // and the sign-flipped variant does not
        assert!(matches!(
            derive_mode_rules(&b, &qr("q^-2 - q^2")),
            Err(BraidError::Inconsistent(_))
        ));
    }

    #[test]
    fn block_minpoly_holds_on_wider_blocks() {
        for braid in [defining_braid(), adjoint_braid()] {
            let values = braid.eigenvalues();
            for (total, lo, hi) in [(3i64, 1i64, 2i64), (0, -2, 2), (-1, -2, 1)] {
                let block = block_braid(&braid, total, lo, hi);
                assert!(
                    minpoly_check(&block, &values),
                    "block ({total},{lo},{hi}) on {:?}",
                    braid.kind
                );
            }
        }
    }

    #[test]
    fn normal_order_simple_cases() {
        let b = defining_braid();
        // already ordered input is returned unchanged
        let m = Mono2 { n1: 0, i1: 1, n2: 0, i2: -1 };
        let nf = normal_order(&b, m, Route::Forward).unwrap();
        assert_eq!(nf.len(), 1);
        assert_eq!(nf[&m], QRat::one());

        // a disordered monomial lands in the ordered span with the mode sum preserved
        let m = Mono2 { n1: 2, i1: 1, n2: -1, i2: -1 };
        let nf = normal_order(&b, m, Route::Forward).unwrap();
        assert!(!nf.is_empty());
        for (mono, _) in nf.iter() {
            assert!(mono.n1 <= mono.n2);
            assert_eq!(mono.n1 + mono.n2, 1);
        }
    }

    #[test]
    fn normal_order_confluence_and_idempotence() {
        for braid in [defining_braid(), adjoint_braid()] {
            let weights: &[i8] = match braid.kind {
                ModuleKind::Defining => &[1, -1],
                _ => &[1, 0, -1],
            };
            for n1 in -3..=3i64 {
                for n2 in -3..=3i64 {
                    if n1 <= n2 {
                        continue;
                    }
                    for &i1 in weights {
                        for &i2 in weights {
                            let m = Mono2 { n1, i1, n2, i2 };
                            let a = normal_order(&braid, m, Route::Forward).unwrap();
                            let b2 = normal_order(&braid, m, Route::Inverse).unwrap();
                            assert_eq!(a, b2, "confluence at {m:?} on {:?}", braid.kind);
                            for (mono, _) in a.iter() {
                                assert!(mono.n1 <= mono.n2, "ordering");
                                assert_eq!(mono.n1 + mono.n2, n1 + n2, "mode conservation");
                                // idempotence: ordered monomials are fixed points
                                let again = normal_order(&braid, *mono, Route::Forward).unwrap();
                                assert_eq!(again.len(), 1);
                                assert_eq!(again[mono], QRat::one());
                            }
                            assert!(
                                difference_in_ideal(&braid, m, &a).unwrap(),
                                "difference not in the ideal at {m:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}
