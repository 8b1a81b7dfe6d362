//! Truncated loop modules for quantum affine sl(2) and the Hopf layer.
//!
//! The defining and adjoint modules are realized at finite mode windows
//! as one sparse action matrix per generator; images that would leave the
//! window are dropped, and every verification is restricted to an
//! interior margin sized to the relation being checked. The coproduct,
//! antipode and counit are carried as data so the convention stays
//! configurable and can be subjected to its own axiom suite.

use crate::linalg::{kron, Basis, Mat, Pair, Vector};
use crate::scalar::{qbinom, QRat};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UqError {
    #[error("empty window")]
    EmptyWindow,
    #[error("margin {margin} too small: relation words reach {needed} modes out")]
    MarginTooSmall { margin: i64, needed: i64 },
    #[error("window overflow while applying a word")]
    WindowOverflow,
}

/// The eight generators of quantum affine sl(2) (level-zero labels).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    E0,
    E1,
    F0,
    F1,
    K0,
    K1,
    K0Inv,
    K1Inv,
}

impl Gen {
    pub const ALL: [Gen; 8] = [
        Gen::E0,
        Gen::E1,
        Gen::F0,
        Gen::F1,
        Gen::K0,
        Gen::K1,
        Gen::K0Inv,
        Gen::K1Inv,
    ];

    /// Net mode shift of the generator on loop modules.
    pub fn mode_shift(self) -> i64 {
        match self {
            Gen::E0 => 1,
            Gen::F0 => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Gen::E0 => "e0",
            Gen::E1 => "e1",
            Gen::F0 => "f0",
            Gen::F1 => "f1",
            Gen::K0 => "K0",
            Gen::K1 => "K1",
            Gen::K0Inv => "K0^-1",
            Gen::K1Inv => "K1^-1",
        };
        f.write_str(s)
    }
}

/// Cartan matrix of affine sl(2); the K-conjugation exponents coincide
/// with its entries.
pub const CARTAN: [[i64; 2]; 2] = [[2, -2], [-2, 2]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleKind {
    Defining,
    Adjoint,
    Trivial,
}

/// Basis label of a truncated loop module: mode index plus weight index.
/// The defining module uses weights {+1, -1}, the adjoint {1, 0, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModLabel {
    pub kind: ModuleKind,
    pub mode: i64,
    pub weight: i8,
}

impl fmt::Display for ModLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModuleKind::Defining => {
                let s = if self.weight > 0 { "+" } else { "-" };
                write!(f, "v[{},{}]", self.mode, s)
            }
            ModuleKind::Adjoint => write!(f, "A[{},{}]", self.mode, self.weight),
            ModuleKind::Trivial => write!(f, "1"),
        }
    }
}

pub type Window = (i64, i64);

/// A truncated loop module: labeled basis plus one matrix per generator.
#[derive(Debug, Clone)]
pub struct TruncatedModule {
    pub kind: ModuleKind,
    pub window: Window,
    pub basis: Basis<ModLabel>,
    pub action: BTreeMap<Gen, Mat<ModLabel>>,
}

impl TruncatedModule {
    pub fn act(&self, g: Gen) -> &Mat<ModLabel> {
        &self.action[&g]
    }

    /// K1-weight exponent of a basis label.
    pub fn weight_exponent(label: &ModLabel) -> i64 {
        match label.kind {
            ModuleKind::Defining => label.weight as i64,
            ModuleKind::Adjoint => 2 * label.weight as i64,
            ModuleKind::Trivial => 0,
        }
    }

    /// Sub-basis of modes at least `margin` away from both window edges.
    pub fn interior(&self, margin: i64) -> Basis<ModLabel> {
        let (lo, hi) = self.window;
        let labels = self
            .basis
            .labels()
            .iter()
            .filter(|l| l.mode >= lo + margin && l.mode <= hi - margin)
            .cloned()
            .collect();
        Basis::new(labels)
    }

    /// Matrix of a word of generators; the rightmost letter acts first.
    pub fn word_matrix(&self, word: &Word) -> Mat<ModLabel> {
        let mut acc = Mat::identity(self.basis.clone());
        for g in word.0.iter().rev() {
            acc = self.act(*g).matmul(&acc).expect("same basis");
        }
        acc
    }

    /// Apply a word to a vector, flagging any truncation at the window.
    /// The flag is true when some intermediate image was dropped.
    pub fn apply_word_flagged(&self, word: &Word, v: &Vector<ModLabel>) -> (Vector<ModLabel>, bool) {
        let mut cur = v.clone();
        let mut truncated = false;
        for g in word.0.iter().rev() {
            // detect window overflow before applying the matrix
            for (i, c) in cur.iter() {
                if c.is_zero() {
                    continue;
                }
                let l = self.basis.label(*i);
                let target = l.mode + g.mode_shift();
                if generator_hits(self.kind, *g, l.weight) && (target < self.window.0 || target > self.window.1) {
                    truncated = true;
                }
            }
            cur = self.act(*g).apply(&cur).expect("same basis");
        }
        (cur, truncated)
    }
}

/// Whether a generator acts with a nonzero coefficient on the given weight.
fn generator_hits(kind: ModuleKind, g: Gen, weight: i8) -> bool {
    match kind {
        ModuleKind::Defining => match g {
            Gen::E1 | Gen::F0 => weight < 0,
            Gen::F1 | Gen::E0 => weight > 0,
            _ => true,
        },
        ModuleKind::Adjoint => match g {
            Gen::E1 | Gen::F0 => weight < 1,
            Gen::F1 | Gen::E0 => weight > -1,
            _ => true,
        },
        ModuleKind::Trivial => matches!(g, Gen::K0 | Gen::K1 | Gen::K0Inv | Gen::K1Inv),
    }
}

fn module_basis(kind: ModuleKind, window: Window) -> Basis<ModLabel> {
    let weights: &[i8] = match kind {
        ModuleKind::Defining => &[1, -1],
        ModuleKind::Adjoint => &[1, 0, -1],
        ModuleKind::Trivial => &[0],
    };
    let mut labels = Vec::new();
    for mode in window.0..=window.1 {
        for &weight in weights {
            labels.push(ModLabel { kind, mode, weight });
        }
    }
    Basis::new(labels)
}

/// Generator images on a single basis vector, before truncation.
fn raw_action(kind: ModuleKind, g: Gen, l: &ModLabel) -> Vec<(QRat, i64, i8)> {
    let two_q = &QRat::q() + &QRat::q_pow(-1);
    let w = TruncatedModule::weight_exponent(l);
    match kind {
        ModuleKind::Defining => match (g, l.weight) {
            (Gen::E1, -1) => vec![(QRat::one(), l.mode, 1)],
            (Gen::F1, 1) => vec![(QRat::one(), l.mode, -1)],
            (Gen::E0, 1) => vec![(QRat::one(), l.mode + 1, -1)],
            (Gen::F0, -1) => vec![(QRat::one(), l.mode - 1, 1)],
            (Gen::K1, _) => vec![(QRat::q_pow(w), l.mode, l.weight)],
            (Gen::K1Inv, _) => vec![(QRat::q_pow(-w), l.mode, l.weight)],
            (Gen::K0, _) => vec![(QRat::q_pow(-w), l.mode, l.weight)],
            (Gen::K0Inv, _) => vec![(QRat::q_pow(w), l.mode, l.weight)],
            _ => vec![],
        },
        ModuleKind::Adjoint => match (g, l.weight) {
            (Gen::E1, 0) => vec![(two_q, l.mode, 1)],
            (Gen::E1, -1) => vec![(two_q, l.mode, 0)],
            (Gen::F1, 1) => vec![(QRat::one(), l.mode, 0)],
            (Gen::F1, 0) => vec![(QRat::one(), l.mode, -1)],
            (Gen::E0, 1) => vec![(QRat::one(), l.mode + 1, 0)],
            (Gen::E0, 0) => vec![(QRat::one(), l.mode + 1, -1)],
            (Gen::F0, 0) => vec![(two_q, l.mode - 1, 1)],
            (Gen::F0, -1) => vec![(two_q, l.mode - 1, 0)],
            (Gen::K1, _) => vec![(QRat::q_pow(w), l.mode, l.weight)],
            (Gen::K1Inv, _) => vec![(QRat::q_pow(-w), l.mode, l.weight)],
            (Gen::K0, _) => vec![(QRat::q_pow(-w), l.mode, l.weight)],
            (Gen::K0Inv, _) => vec![(QRat::q_pow(w), l.mode, l.weight)],
            _ => vec![],
        },
        ModuleKind::Trivial => match g {
            Gen::K0 | Gen::K1 | Gen::K0Inv | Gen::K1Inv => {
                vec![(QRat::one(), l.mode, l.weight)]
            }
            _ => vec![],
        },
    }
}

fn build_module(kind: ModuleKind, window: Window) -> Result<TruncatedModule, UqError> {
    if window.0 > window.1 {
        return Err(UqError::EmptyWindow);
    }
    let basis = module_basis(kind, window);
    let mut action = BTreeMap::new();
    for g in Gen::ALL {
        let mut m = Mat::zero(basis.clone(), basis.clone());
        for (col, l) in basis.labels().iter().enumerate() {
            for (coeff, mode, weight) in raw_action(kind, g, l) {
                let target = ModLabel { kind, mode, weight };
                if let Some(row) = basis.index_of(&target) {
                    m.add_to(row, col, &coeff);
                }
                // out-of-window images are dropped
            }
        }
        action.insert(g, m);
    }
    Ok(TruncatedModule { kind, window, basis, action })
}

/// The 2-dimensional evaluation (loop) module at a mode window.
pub fn build_defining(window: Window) -> Result<TruncatedModule, UqError> {
    build_module(ModuleKind::Defining, window)
}

/// The 3-dimensional adjoint loop module at a mode window.
pub fn build_adjoint(window: Window) -> Result<TruncatedModule, UqError> {
    build_module(ModuleKind::Adjoint, window)
}

/// One-dimensional trivial module (all Serre generators act by zero).
pub fn build_trivial() -> TruncatedModule {
    build_module(ModuleKind::Trivial, (0, 0)).expect("nonempty")
}

// ---------------------------------------------------------------------------
// Words and relations
// ---------------------------------------------------------------------------

/// A product of generators; the rightmost letter acts first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word(pub Vec<Gen>);

impl Word {
    pub fn one() -> Word {
        Word(vec![])
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Largest distance from the start mode reached while the word acts.
    pub fn mode_excursion(&self) -> i64 {
        let mut acc = 0i64;
        let mut worst = 0i64;
        for g in self.0.iter().rev() {
            acc += g.mode_shift();
            worst = worst.max(acc.abs());
        }
        worst
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A defining relation presented as `sum coeff * word = 0`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    pub terms: Vec<(QRat, Word)>,
}

impl Relation {
    pub fn mode_excursion(&self) -> i64 {
        self.terms.iter().map(|(_, w)| w.mode_excursion()).max().unwrap_or(0)
    }
}

fn e_gen(i: usize) -> Gen {
    if i == 0 { Gen::E0 } else { Gen::E1 }
}
fn f_gen(i: usize) -> Gen {
    if i == 0 { Gen::F0 } else { Gen::F1 }
}
fn k_gen(i: usize) -> Gen {
    if i == 0 { Gen::K0 } else { Gen::K1 }
}
fn k_inv_gen(i: usize) -> Gen {
    if i == 0 { Gen::K0Inv } else { Gen::K1Inv }
}

/// The full defining-relation list for quantum affine sl(2).
pub fn defining_relations() -> Vec<Relation> {
    let mut rels = Vec::new();
    let qmq = &QRat::q() - &QRat::q_pow(-1);
    let inv_qmq = qmq.inv().expect("q - q^-1 is nonzero");

    // [e_i, f_j] = delta_ij (K_i - K_i^-1)/(q - q^-1)
    for i in 0..2 {
        for j in 0..2 {
            let mut terms = vec![
                (QRat::one(), Word(vec![e_gen(i), f_gen(j)])),
                (-&QRat::one(), Word(vec![f_gen(j), e_gen(i)])),
            ];
            if i == j {
                terms.push((-&inv_qmq, Word(vec![k_gen(i)])));
                terms.push((inv_qmq.clone(), Word(vec![k_inv_gen(i)])));
            }
            rels.push(Relation { name: format!("commutator(e{i}, f{j})"), terms });
        }
    }

    // K_i K_j = K_j K_i and K_i K_i^-1 = 1
    rels.push(Relation {
        name: "K0 K1 = K1 K0".into(),
        terms: vec![
            (QRat::one(), Word(vec![Gen::K0, Gen::K1])),
            (-&QRat::one(), Word(vec![Gen::K1, Gen::K0])),
        ],
    });
    for i in 0..2 {
        rels.push(Relation {
            name: format!("K{i} K{i}^-1 = 1"),
            terms: vec![
                (QRat::one(), Word(vec![k_gen(i), k_inv_gen(i)])),
                (-&QRat::one(), Word::one()),
            ],
        });
    }

    // K_i e_j K_i^-1 = q^{a_ij} e_j and K_i f_j K_i^-1 = q^{-a_ij} f_j
    for i in 0..2 {
        for j in 0..2 {
            let a = CARTAN[i][j];
            rels.push(Relation {
                name: format!("K{i} e{j} K{i}^-1 = q^{a} e{j}"),
                terms: vec![
                    (QRat::one(), Word(vec![k_gen(i), e_gen(j), k_inv_gen(i)])),
                    (-&QRat::q_pow(a), Word(vec![e_gen(j)])),
                ],
            });
            rels.push(Relation {
                name: format!("K{i} f{j} K{i}^-1 = q^{} f{j}", -a),
                terms: vec![
                    (QRat::one(), Word(vec![k_gen(i), f_gen(j), k_inv_gen(i)])),
                    (-&QRat::q_pow(-a), Word(vec![f_gen(j)])),
                ],
            });
        }
    }

    // q-Serre relations, degree 1 - a_ij = 3 for i != j
    for (i, j) in [(0usize, 1usize), (1, 0)] {
        let n = 1 - CARTAN[i][j]; // = 3
        for (label, xi, xj) in [("e", e_gen(i), e_gen(j)), ("f", f_gen(i), f_gen(j))] {
            let mut terms = Vec::new();
            for k in 0..=n {
                let mut w = Vec::new();
                w.extend(std::iter::repeat(xi).take((n - k) as usize));
                w.push(xj);
                w.extend(std::iter::repeat(xi).take(k as usize));
                let mut c = qbinom(n, k).expect("0 <= k <= n");
                if k % 2 == 1 {
                    c = -&c;
                }
                terms.push((c, Word(w)));
            }
            rels.push(Relation {
                name: format!("serre({label}{i}; {label}{j})"),
                terms,
            });
        }
    }

    rels
}

/// Outcome of one relation check on one module.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: String,
    pub excursion: i64,
    pub passed: bool,
    pub residual_entries: usize,
    pub worst: Option<(String, String)>,
}

/// Verify every defining relation on the interior of a truncated module.
/// The residual of each relation is an exact matrix; PASS means it is
/// identically zero on interior columns.
pub fn verify_relations(
    module: &TruncatedModule,
    margin: i64,
) -> Result<Vec<RelationCheck>, UqError> {
    let rels = defining_relations();
    let needed = rels.iter().map(|r| r.mode_excursion()).max().unwrap_or(0);
    if margin < needed {
        return Err(UqError::MarginTooSmall { margin, needed });
    }
    let interior = module.interior(margin);
    let mut out = Vec::new();
    for rel in rels {
        let mut acc = Mat::zero(module.basis.clone(), module.basis.clone());
        for (coeff, word) in rel.terms.iter() {
            acc = acc.add(&module.word_matrix(word).scale(coeff));
        }
        let residual = acc.restrict(&module.basis, &interior);
        out.push(RelationCheck {
            name: rel.name.clone(),
            excursion: rel.mode_excursion(),
            passed: residual.is_zero(),
            residual_entries: residual.num_entries(),
            worst: residual.worst_entry(),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Hopf structure
// ---------------------------------------------------------------------------

/// Which coproduct a tensor construction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    /// The coproduct itself.
    Normal,
    /// The opposite coproduct (factors swapped).
    Opposite,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Normal => f.write_str("delta"),
            Side::Opposite => f.write_str("delta-op"),
        }
    }
}

/// Coproduct, antipode and counit carried as data on generators.
#[derive(Debug, Clone)]
pub struct Hopf {
    pub delta: BTreeMap<Gen, Vec<(QRat, Word, Word)>>,
    pub antipode: BTreeMap<Gen, Vec<(QRat, Word)>>,
    pub antipode_inv: BTreeMap<Gen, Vec<(QRat, Word)>>,
    pub counit: BTreeMap<Gen, QRat>,
}

impl Hopf {
    /// The convention used throughout:
    /// `D(e_i) = e_i (x) 1 + K_i (x) e_i`, `D(f_i) = f_i (x) K_i^-1 + 1 (x) f_i`,
    /// `S(e_i) = -K_i^-1 e_i`, `S(f_i) = -f_i K_i`, K grouplike.
    pub fn standard() -> Hopf {
        let mut delta = BTreeMap::new();
        let mut antipode = BTreeMap::new();
        let mut antipode_inv = BTreeMap::new();
        let mut counit = BTreeMap::new();
        let one = QRat::one();
        for i in 0..2usize {
            let (e, f, k, kinv) = (e_gen(i), f_gen(i), k_gen(i), k_inv_gen(i));
            delta.insert(
                e,
                vec![
                    (one.clone(), Word(vec![e]), Word::one()),
                    (one.clone(), Word(vec![k]), Word(vec![e])),
                ],
            );
            delta.insert(
                f,
                vec![
                    (one.clone(), Word(vec![f]), Word(vec![kinv])),
                    (one.clone(), Word::one(), Word(vec![f])),
                ],
            );
            delta.insert(k, vec![(one.clone(), Word(vec![k]), Word(vec![k]))]);
            delta.insert(kinv, vec![(one.clone(), Word(vec![kinv]), Word(vec![kinv]))]);

            antipode.insert(e, vec![(-&one, Word(vec![kinv, e]))]);
            antipode.insert(f, vec![(-&one, Word(vec![f, k]))]);
            antipode.insert(k, vec![(one.clone(), Word(vec![kinv]))]);
            antipode.insert(kinv, vec![(one.clone(), Word(vec![k]))]);

            // antipode of the opposite-coproduct Hopf structure
            antipode_inv.insert(e, vec![(-&QRat::q_pow(2), Word(vec![kinv, e]))]);
            antipode_inv.insert(f, vec![(-&QRat::q_pow(-2), Word(vec![f, k]))]);
            antipode_inv.insert(k, vec![(one.clone(), Word(vec![kinv]))]);
            antipode_inv.insert(kinv, vec![(one.clone(), Word(vec![k]))]);

            counit.insert(e, QRat::zero());
            counit.insert(f, QRat::zero());
            counit.insert(k, QRat::one());
            counit.insert(kinv, QRat::one());
        }
        Hopf { delta, antipode, antipode_inv, counit }
    }

    /// Antipode of a word: reversed product of letter antipodes.
    pub fn antipode_word(&self, w: &Word) -> Vec<(QRat, Word)> {
        let mut acc = vec![(QRat::one(), Word::one())];
        for g in w.0.iter() {
            let s = &self.antipode[g];
            let mut next = Vec::new();
            for (c1, w1) in acc.iter() {
                for (c2, w2) in s.iter() {
                    next.push((c1 * c2, w2.concat(w1)));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn antipode_inv_word(&self, w: &Word) -> Vec<(QRat, Word)> {
        let mut acc = vec![(QRat::one(), Word::one())];
        for g in w.0.iter() {
            let s = &self.antipode_inv[g];
            let mut next = Vec::new();
            for (c1, w1) in acc.iter() {
                for (c2, w2) in s.iter() {
                    next.push((c1 * c2, w2.concat(w1)));
                }
            }
            acc = next;
        }
        acc
    }

    /// Counit of a word (product of letter counits).
    pub fn counit_word(&self, w: &Word) -> QRat {
        let mut acc = QRat::one();
        for g in w.0.iter() {
            acc = &acc * &self.counit[g];
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Coproduct of a word as a sum of tensor pairs of words.
    pub fn delta_word(&self, w: &Word) -> Vec<(QRat, Word, Word)> {
        let mut acc = vec![(QRat::one(), Word::one(), Word::one())];
        for g in w.0.iter() {
            let d = &self.delta[g];
            let mut next = Vec::new();
            for (c1, a1, b1) in acc.iter() {
                for (c2, a2, b2) in d.iter() {
                    next.push((c1 * c2, a1.concat(a2), b1.concat(b2)));
                }
            }
            acc = next;
        }
        acc
    }
}

/// Matrix of a generator on a tensor product of two truncated modules.
pub fn hopf_tensor_action(
    hopf: &Hopf,
    g: Gen,
    m1: &TruncatedModule,
    m2: &TruncatedModule,
    side: Side,
) -> Mat<Pair<ModLabel, ModLabel>> {
    let rows = m1.basis.tensor(&m2.basis);
    let mut acc = Mat::zero(rows.clone(), rows);
    for (c, w1, w2) in hopf.delta[&g].iter() {
        let (a, b) = match side {
            Side::Normal => (m1.word_matrix(w1), m2.word_matrix(w2)),
            Side::Opposite => (m1.word_matrix(w2), m2.word_matrix(w1)),
        };
        acc = acc.add(&kron(&a, &b).scale(c));
    }
    acc
}

/// Results of the Hopf axiom suite on a module.
#[derive(Debug, Clone)]
pub struct HopfAxiomReport {
    pub counit_ok: bool,
    pub antipode_ok: bool,
    pub antipode_inv_ok: bool,
    pub coassoc_ok: bool,
}

impl HopfAxiomReport {
    pub fn all_ok(&self) -> bool {
        self.counit_ok && self.antipode_ok && self.antipode_inv_ok && self.coassoc_ok
    }
}

/// Verify the counit and antipode axioms as matrix identities on one
/// module, and coassociativity on its tensor cube.
pub fn verify_hopf_axioms(hopf: &Hopf, module: &TruncatedModule) -> HopfAxiomReport {
    let id = Mat::identity(module.basis.clone());
    let mut counit_ok = true;
    let mut antipode_ok = true;
    let mut antipode_inv_ok = true;
    let mut coassoc_ok = true;

    for g in Gen::ALL {
        // (eps (x) id) Delta = id = (id (x) eps) Delta
        let mut left = Mat::zero(module.basis.clone(), module.basis.clone());
        let mut right = left.clone();
        for (c, w1, w2) in hopf.delta[&g].iter() {
            left = left.add(&module.word_matrix(w2).scale(&(c * &hopf.counit_word(w1))));
            right = right.add(&module.word_matrix(w1).scale(&(c * &hopf.counit_word(w2))));
        }
        let gm = module.act(g);
        if &left != gm || &right != gm {
            counit_ok = false;
        }

        // m (S (x) id) Delta = eps(x) 1 = m (id (x) S) Delta
        let eps_id = id.scale(&hopf.counit[&g]);
        let mut s_left = Mat::zero(module.basis.clone(), module.basis.clone());
        let mut s_right = s_left.clone();
        for (c, w1, w2) in hopf.delta[&g].iter() {
            for (cs, ws) in hopf.antipode_word(w1) {
                let m = module.word_matrix(&ws).matmul(&module.word_matrix(w2)).unwrap();
                s_left = s_left.add(&m.scale(&(c * &cs)));
            }
            for (cs, ws) in hopf.antipode_word(w2) {
                let m = module.word_matrix(w1).matmul(&module.word_matrix(&ws)).unwrap();
                s_right = s_right.add(&m.scale(&(c * &cs)));
            }
        }
        if s_left != eps_id || s_right != eps_id {
            antipode_ok = false;
        }

        // S^-1 is a two-sided antipode for the opposite coproduct:
        // m (S^-1 (x) id) Delta-op = eps(x) 1
        let mut sinv = Mat::zero(module.basis.clone(), module.basis.clone());
        for (c, w1, w2) in hopf.delta[&g].iter() {
            // Delta-op components are (w2, w1)
            for (cs, ws) in hopf.antipode_inv_word(w2) {
                let m = module.word_matrix(&ws).matmul(&module.word_matrix(w1)).unwrap();
                sinv = sinv.add(&m.scale(&(c * &cs)));
            }
        }
        if sinv != eps_id {
            antipode_inv_ok = false;
        }

        // coassociativity on the tensor cube
        let triple = module.basis.tensor(&module.basis).tensor(&module.basis);
        let mut lhs = Mat::zero(triple.clone(), triple.clone());
        let mut rhs = Mat::zero(triple.clone(), triple);
        for (c, w1, w2) in hopf.delta[&g].iter() {
            for (c1, u1, u2) in hopf.delta_word(w1) {
                let m = kron(
                    &kron(&module.word_matrix(&u1), &module.word_matrix(&u2)),
                    &module.word_matrix(w2),
                );
                lhs = lhs.add(&m.scale(&(c * &c1)));
            }
            for (c2, u1, u2) in hopf.delta_word(w2) {
                let m = kron(
                    &kron(&module.word_matrix(w1), &module.word_matrix(&u1)),
                    &module.word_matrix(&u2),
                );
                rhs = rhs.add(&m.scale(&(c * &c2)));
            }
        }
        if lhs != rhs {
            coassoc_ok = false;
        }
    }

    HopfAxiomReport { counit_ok, antipode_ok, antipode_inv_ok, coassoc_ok }
}

/// Module action of a word on an adjoint-module vector.
pub fn adjoint_act(
    module: &TruncatedModule,
    word: &Word,
    v: &Vector<ModLabel>,
) -> Result<Vector<ModLabel>, UqError> {
    let (out, truncated) = module.apply_word_flagged(word, v);
    if truncated {
        return Err(UqError::WindowOverflow);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(s: &str) -> QRat {
        s.parse().unwrap()
    }

    fn label(kind: ModuleKind, mode: i64, weight: i8) -> ModLabel {
        ModLabel { kind, mode, weight }
    }

    #[test]
    fn defining_table_spot_checks() {
        let m = build_defining((-4, 4)).unwrap();
        let b = &m.basis;
        // f1 v^0_+ = v^0_-
        let src = b.index_of(&label(ModuleKind::Defining, 0, 1)).unwrap();
        let dst = b.index_of(&label(ModuleKind::Defining, 0, -1)).unwrap();
        assert_eq!(m.act(Gen::F1).entry(dst, src), QRat::one());
        // e0 v^2_+ = v^3_-
        let src = b.index_of(&label(ModuleKind::Defining, 2, 1)).unwrap();
        let dst = b.index_of(&label(ModuleKind::Defining, 3, -1)).unwrap();
        assert_eq!(m.act(Gen::E0).entry(dst, src), QRat::one());
        // K1 v^n_- = q^-1 v^n_-
        let src = b.index_of(&label(ModuleKind::Defining, 1, -1)).unwrap();
        assert_eq!(m.act(Gen::K1).entry(src, src), qr("q^-1"));
        // e1 v^n_+ = 0 and f0 v^n_+ = 0
        let src = b.index_of(&label(ModuleKind::Defining, 1, 1)).unwrap();
        assert!(m.act(Gen::E1).column(src).is_zero());
        assert!(m.act(Gen::F0).column(src).is_zero());
    }

    #[test]
    fn adjoint_table_spot_checks() {
        let m = build_adjoint((-4, 4)).unwrap();
        let b = &m.basis;
        // e1 A^0_0 = (q + q^-1) A^0_1
        let src = b.index_of(&label(ModuleKind::Adjoint, 0, 0)).unwrap();
        let dst = b.index_of(&label(ModuleKind::Adjoint, 0, 1)).unwrap();
        assert_eq!(m.act(Gen::E1).entry(dst, src), qr("q + q^-1"));
        // f0 A^1_-1 = (q + q^-1) A^0_0
        let src = b.index_of(&label(ModuleKind::Adjoint, 1, -1)).unwrap();
        let dst = b.index_of(&label(ModuleKind::Adjoint, 0, 0)).unwrap();
        assert_eq!(m.act(Gen::F0).entry(dst, src), qr("q + q^-1"));
        // K1 A^n_1 = q^2 A^n_1 = K0^-1 A^n_1
        let src = b.index_of(&label(ModuleKind::Adjoint, 2, 1)).unwrap();
        assert_eq!(m.act(Gen::K1).entry(src, src), qr("q^2"));
        assert_eq!(m.act(Gen::K0Inv).entry(src, src), qr("q^2"));
        // e0 A^0_0 = A^1_-1
        let src = b.index_of(&label(ModuleKind::Adjoint, 0, 0)).unwrap();
        let dst = b.index_of(&label(ModuleKind::Adjoint, 1, -1)).unwrap();
        assert_eq!(m.act(Gen::E0).entry(dst, src), QRat::one());
    }

    #[test]
    fn relations_hold_on_interior() {
        for module in [build_defining((-4, 4)).unwrap(), build_adjoint((-4, 4)).unwrap()] {
            let checks = verify_relations(&module, 3).unwrap();
            for c in &checks {
                assert!(c.passed, "{} failed on {:?}: {:?}", c.name, module.kind, c.worst);
            }
        }
    }

    #[test]
    fn margin_guard_rejects_small_margins() {
        let m = build_defining((-4, 4)).unwrap();
        assert!(matches!(
            verify_relations(&m, 0),
            Err(UqError::MarginTooSmall { .. })
        ));
    }

    #[test]
    fn weight_grading_under_e1_f1() {
        for module in [build_defining((-2, 2)).unwrap(), build_adjoint((-2, 2)).unwrap()] {
            // K1 e1 = q^2 e1 K1 and K1 f1 = q^-2 f1 K1 as exact matrices
            let k1 = module.act(Gen::K1);
            let e1 = module.act(Gen::E1);
            let f1 = module.act(Gen::F1);
            assert_eq!(
                k1.matmul(e1).unwrap(),
                e1.matmul(k1).unwrap().scale(&qr("q^2"))
            );
            assert_eq!(
                k1.matmul(f1).unwrap(),
                f1.matmul(k1).unwrap().scale(&qr("q^-2"))
            );
        }
    }

    #[test]
    fn hopf_axioms_hold_for_standard_convention() {
        let hopf = Hopf::standard();
        let module = build_defining((-2, 2)).unwrap();
        let report = verify_hopf_axioms(&hopf, &module);
        assert!(report.counit_ok, "counit axiom");
        assert!(report.antipode_ok, "antipode axiom");
        assert!(report.antipode_inv_ok, "opposite antipode axiom");
        assert!(report.coassoc_ok, "coassociativity");
    }

    #[test]
    fn tensor_action_examples() {
        let hopf = Hopf::standard();
        let m = build_defining((0, 0)).unwrap();
        // K1 acts grouplike: diag(q^{w1+w2})
        let k1 = hopf_tensor_action(&hopf, Gen::K1, &m, &m, Side::Normal);
        let basis = m.basis.tensor(&m.basis);
        for (i, Pair(a, b)) in basis.labels().iter().enumerate() {
            let w = TruncatedModule::weight_exponent(a) + TruncatedModule::weight_exponent(b);
            assert_eq!(k1.entry(i, i), QRat::q_pow(w));
        }
        // e1 (v- (x) v-) = v+ (x) v- + q^-1 v- (x) v+
        let e1 = hopf_tensor_action(&hopf, Gen::E1, &m, &m, Side::Normal);
        let minus = label(ModuleKind::Defining, 0, -1);
        let plus = label(ModuleKind::Defining, 0, 1);
        let src = basis.index_of(&Pair(minus, minus)).unwrap();
        let pm = basis.index_of(&Pair(plus, minus)).unwrap();
        let mp = basis.index_of(&Pair(minus, plus)).unwrap();
        assert_eq!(e1.entry(pm, src), QRat::one());
        assert_eq!(e1.entry(mp, src), qr("q^-1"));
        assert_eq!(e1.column(src).iter().count(), 2);
    }

    #[test]
    fn trivial_tensor_square_recovers_counit() {
        let hopf = Hopf::standard();
        let t = build_trivial();
        for g in Gen::ALL {
            let m = hopf_tensor_action(&hopf, g, &t, &t, Side::Normal);
            let id = Mat::identity(t.basis.tensor(&t.basis));
            assert_eq!(m, id.scale(&hopf.counit[&g]));
        }
    }

    #[test]
    fn adjoint_act_spot_checks() {
        let m = build_adjoint((-3, 3)).unwrap();
        let src = Vector::unit(
            m.basis.clone(),
            m.basis.index_of(&label(ModuleKind::Adjoint, 0, 0)).unwrap(),
        );
        // e0 A^0_0 = A^1_-1
        let out = adjoint_act(&m, &Word(vec![Gen::E0]), &src).unwrap();
        let dst = m.basis.index_of(&label(ModuleKind::Adjoint, 1, -1)).unwrap();
        assert_eq!(out.get(dst), QRat::one());
        // f1 A^0_1 = A^0_0
        let src1 = Vector::unit(
            m.basis.clone(),
            m.basis.index_of(&label(ModuleKind::Adjoint, 0, 1)).unwrap(),
        );
        let out1 = adjoint_act(&m, &Word(vec![Gen::F1]), &src1).unwrap();
        let dst1 = m.basis.index_of(&label(ModuleKind::Adjoint, 0, 0)).unwrap();
        assert_eq!(out1.get(dst1), QRat::one());
        // K1 K1^-1 acts as identity
        let out2 = adjoint_act(&m, &Word(vec![Gen::K1, Gen::K1Inv]), &src).unwrap();
        assert_eq!(out2, src);
        // overflow is flagged at the window edge
        let edge = Vector::unit(
            m.basis.clone(),
            m.basis.index_of(&label(ModuleKind::Adjoint, 3, 0)).unwrap(),
        );
        assert!(matches!(
            adjoint_act(&m, &Word(vec![Gen::E0]), &edge),
            Err(UqError::WindowOverflow)
        ));
    }
}
