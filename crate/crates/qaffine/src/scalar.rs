//! Exact scalar arithmetic in the deformation parameter `q`.
//!
//! The coefficient field for the whole crate is the field of rational
//! functions in `q` with Gaussian-rational coefficients `a + b*i`. Values
//! are kept in a canonical form (numerator and denominator coprime, the
//! denominator an ordinary polynomial with constant term 1) so that
//! equality is plain structural comparison. q-integers and Gaussian
//! q-binomial coefficients live here as well.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

/// Exact complex rational `a + b*i`.
pub type Gauss = Complex<BigRational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation hits a pole")]
    Pole,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn gauss_zero() -> Gauss {
    Complex::new(BigRational::zero(), BigRational::zero())
}

pub fn gauss_one() -> Gauss {
    Complex::new(BigRational::one(), BigRational::zero())
}

pub fn gauss_i() -> Gauss {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn gauss_from_int(n: i64) -> Gauss {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn gauss_conj(z: &Gauss) -> Gauss {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact square root in the Gaussian rationals, if one exists there.
pub fn gauss_sqrt(z: &Gauss) -> Option<Gauss> {
    if z.im.is_zero() {
        if let Some(x) = rat_sqrt(&z.re) {
            return Some(Complex::new(x, BigRational::zero()));
        }
        // sqrt of a negative rational is purely imaginary
        if let Some(y) = rat_sqrt(&-z.re.clone()) {
            return Some(Complex::new(BigRational::zero(), y));
        }
        return None;
    }
    // (x + yi)^2 = a + bi with b != 0: x^2 = (a + |z|)/2, y = b/(2x)
    let norm2 = &z.re * &z.re + &z.im * &z.im;
    let n = rat_sqrt(&norm2)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let x2 = (&z.re + &n) / &two;
    let x = rat_sqrt(&x2)?;
    if x.is_zero() {
        return None;
    }
    let y = &z.im / &(&two * &x);
    Some(Complex::new(x, y))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    // good enough at desk scale; exact arithmetic happens before this point
    let n = r.numer();
    let d = r.denom();
    let fn_ = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let fd = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
    fn_ / fd
}

pub fn gauss_to_c64(z: &Gauss) -> (f64, f64) {
    (rat_to_f64(&z.re), rat_to_f64(&z.im))
}

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// Laurent polynomial in `q` over the Gaussian rationals.
///
/// Invariant: no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, Gauss>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Laurent::monomial(0, gauss_one())
    }

    pub fn monomial(exp: i64, coeff: Gauss) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Laurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> Gauss {
        self.terms.get(&exp).cloned().unwrap_or_else(gauss_zero)
    }

    pub fn min_deg(&self) -> i64 {
        *self.terms.keys().next().expect("min_deg of zero polynomial")
    }

    pub fn max_deg(&self) -> i64 {
        *self.terms.keys().next_back().expect("max_deg of zero polynomial")
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Gauss)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exp: i64, coeff: &Gauss) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(gauss_zero);
        *entry = entry.clone() + coeff.clone();
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                out.add_term(e1 + e2, &(c1.clone() * c2.clone()));
            }
        }
        out
    }

    pub fn scale(&self, c: &Gauss) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(e, k)| (*e, k.clone() * c.clone())).collect(),
        }
    }

    /// Multiply by `q^k`.
    pub fn shifted(&self, k: i64) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Dense coefficient vector; requires min degree 0.
    fn to_dense(&self) -> Vec<Gauss> {
        if self.is_zero() {
            return vec![];
        }
        assert!(self.min_deg() >= 0, "to_dense needs an ordinary polynomial");
        let deg = self.max_deg() as usize;
        let mut v = vec![gauss_zero(); deg + 1];
        for (e, c) in self.terms.iter() {
            v[*e as usize] = c.clone();
        }
        v
    }

    fn from_dense(v: &[Gauss]) -> Laurent {
        let mut out = Laurent::zero();
        for (e, c) in v.iter().enumerate() {
            out.add_term(e as i64, c);
        }
        out
    }

    pub fn eval(&self, q0: &Gauss) -> Result<Gauss, ScalarError> {
        let mut acc = gauss_zero();
        for (e, c) in self.terms.iter() {
            let p = if *e >= 0 {
                pow_gauss(q0, *e as u64)
            } else {
                if q0.is_zero() {
                    return Err(ScalarError::Pole);
                }
                let inv = gauss_one() / q0.clone();
                pow_gauss(&inv, (-e) as u64)
            };
            acc = acc + c.clone() * p;
        }
        Ok(acc)
    }
}

fn pow_gauss(z: &Gauss, n: u64) -> Gauss {
    let mut acc = gauss_one();
    for _ in 0..n {
        acc = acc * z.clone();
    }
    acc
}

fn dense_trim(v: &mut Vec<Gauss>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Division with remainder for ordinary polynomials over the Gaussian field.
fn dense_divmod(a: &[Gauss], b: &[Gauss]) -> (Vec<Gauss>, Vec<Gauss>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = a.to_vec();
    dense_trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quo = vec![gauss_zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = rem[dr].clone() / lead.clone();
        let shift = dr - db;
        quo[shift] = c.clone();
        for i in 0..=db {
            let t = rem[shift + i].clone() - c.clone() * b[i].clone();
            rem[shift + i] = t;
        }
        dense_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    dense_trim(&mut quo);
    (quo, rem)
}

/// Monic gcd of two ordinary polynomials.
fn dense_gcd(a: &[Gauss], b: &[Gauss]) -> Vec<Gauss> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    dense_trim(&mut x);
    dense_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = dense_divmod(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = c.clone() / lead.clone();
        }
    }
    x
}

// ---------------------------------------------------------------------------
// QRat: canonical rational functions
// ---------------------------------------------------------------------------

/// Rational function in `q` over the Gaussian rationals, kept canonical.
///
/// Canonical form: the denominator is an ordinary polynomial with constant
/// term exactly 1, the numerator is a Laurent polynomial, and the two share
/// no nonunit polynomial factor. Zero is `0/1`. Equality and hashing are
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QRat {
    num: Laurent,
    den: Laurent,
}

impl QRat {
    fn build(num: Laurent, den: Laurent) -> QRat {
        let mut v = QRat { num, den };
        v.canonicalize();
        v
    }

    fn canonicalize(&mut self) {
        assert!(!self.den.is_zero(), "zero denominator");
        if self.num.is_zero() {
            self.den = Laurent::one();
            return;
        }
        // push all powers of q into the numerator
        let dmin = self.den.min_deg();
        if dmin != 0 {
            self.den = self.den.shifted(-dmin);
            self.num = self.num.shifted(-dmin);
        }
        if !self.den.is_one() {
            let nmin = self.num.min_deg();
            let num0 = self.num.shifted(-nmin).to_dense();
            let den0 = self.den.to_dense();
            let g = dense_gcd(&num0, &den0);
            if g.len() > 1 {
                let (nq, nr) = dense_divmod(&num0, &g);
                let (dq, dr) = dense_divmod(&den0, &g);
                debug_assert!(nr.is_empty() && dr.is_empty());
                self.num = Laurent::from_dense(&nq).shifted(nmin);
                self.den = Laurent::from_dense(&dq);
            }
        }
        // normalize the denominator's constant term to 1
        let c = self.den.coeff(self.den.min_deg());
        debug_assert_eq!(self.den.min_deg(), 0);
        if !c.is_one() {
            let inv = gauss_one() / c;
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    pub fn zero() -> QRat {
        QRat { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> QRat {
        QRat { num: Laurent::one(), den: Laurent::one() }
    }

    /// The symbol `q`.
    pub fn q() -> QRat {
        QRat::q_pow(1)
    }

    /// `q^k` for any integer k.
    pub fn q_pow(k: i64) -> QRat {
        QRat { num: Laurent::monomial(k, gauss_one()), den: Laurent::one() }
    }

    /// The imaginary unit.
    pub fn i() -> QRat {
        QRat { num: Laurent::monomial(0, gauss_i()), den: Laurent::one() }
    }

    pub fn from_int(n: i64) -> QRat {
        QRat { num: Laurent::monomial(0, gauss_from_int(n)), den: Laurent::one() }
    }

    pub fn from_gauss(z: Gauss) -> QRat {
        QRat { num: Laurent::monomial(0, z), den: Laurent::one() }
    }

    pub fn from_ratio(num: i64, den: i64) -> QRat {
        assert!(den != 0);
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        QRat::from_gauss(Complex::new(r, BigRational::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the canonical denominator is 1 (a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent {
        &self.den
    }

    /// Term-count measure used by pivot selection in elimination.
    pub fn complexity(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn checked_div(&self, other: &QRat) -> Result<QRat, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(QRat::build(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn inv(&self) -> Result<QRat, ScalarError> {
        QRat::one().checked_div(self)
    }

    pub fn pow(&self, k: i64) -> QRat {
        if k < 0 {
            return self.inv().expect("pow of zero with negative exponent").pow(-k);
        }
        let mut acc = QRat::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact substitution `q := q0`.
    pub fn eval_at(&self, q0: &Gauss) -> Result<Gauss, ScalarError> {
        let d = self.den.eval(q0)?;
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        let n = self.num.eval(q0)?;
        Ok(n / d)
    }

    /// Evaluation at q = 1; total for canonical values whose denominator
    /// does not vanish there.
    pub fn eval_at_one(&self) -> Result<Gauss, ScalarError> {
        self.eval_at(&gauss_one())
    }

    pub fn eval_c64(&self, q0: &Gauss) -> Result<(f64, f64), ScalarError> {
        Ok(gauss_to_c64(&self.eval_at(q0)?))
    }

    /// Complex conjugate, with q treated as a real symbol.
    pub fn conj_q_real(&self) -> QRat {
        let num = Laurent {
            terms: self.num.iter().map(|(e, c)| (*e, gauss_conj(c))).collect(),
        };
        let den = Laurent {
            terms: self.den.iter().map(|(e, c)| (*e, gauss_conj(c))).collect(),
        };
        QRat::build(num, den)
    }

    /// Exact square root inside the field, when the value is a Laurent
    /// polynomial with one. Used by the spin-module construction.
    pub fn sqrt(&self) -> Option<QRat> {
        if self.is_zero() {
            return Some(QRat::zero());
        }
        if !self.den.is_one() {
            return None;
        }
        let shift = self.num.min_deg();
        if shift % 2 != 0 {
            return None;
        }
        let p = self.num.shifted(-shift).to_dense();
        let s0 = gauss_sqrt(&p[0])?;
        let deg = p.len() - 1;
        if deg % 2 != 0 {
            return None;
        }
        let half = deg / 2;
        let mut s = vec![gauss_zero(); half + 1];
        s[0] = s0.clone();
        let two_s0 = gauss_from_int(2) * s0;
        for k in 1..=half {
            let mut acc = p.get(k).cloned().unwrap_or_else(gauss_zero);
            for i in 1..k {
                if i <= half && k - i <= half {
                    acc = acc - s[i].clone() * s[k - i].clone();
                }
            }
            s[k] = acc / two_s0.clone();
        }
        let root = QRat {
            num: Laurent::from_dense(&s).shifted(shift / 2),
            den: Laurent::one(),
        };
        if &(&root * &root) == self {
            Some(root)
        } else {
            None
        }
    }
}

impl Default for QRat {
    fn default() -> Self {
        QRat::zero()
    }
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.den == rhs.den {
            return QRat::build(self.num.add(&rhs.num), self.den.clone());
        }
        QRat::build(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        if self.den == rhs.den {
            return QRat::build(self.num.sub(&rhs.num), self.den.clone());
        }
        QRat::build(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        if self.is_zero() || rhs.is_zero() {
            return QRat::zero();
        }
        QRat::build(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &QRat {
    type Output = QRat;
    fn div(self, rhs: &QRat) -> QRat {
        self.checked_div(rhs).expect("QRat division by zero")
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for QRat {
            type Output = QRat;
            fn $method(self, rhs: QRat) -> QRat {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

// ---------------------------------------------------------------------------
// q-integers and q-binomials
// ---------------------------------------------------------------------------

/// The q-integer `k_q = 1 + q + ... + q^{k-1}`; `qint(0) = 0`.
pub fn qint(k: u32) -> QRat {
    let mut num = Laurent::zero();
    for j in 0..k {
        num.add_term(j as i64, &gauss_one());
    }
    QRat { num, den: Laurent::one() }
}

/// Gaussian binomial `[m choose k]_q` as the ratio of q-integer products.
/// The denominator cancels exactly, so the result is a Laurent polynomial.
pub fn qbinom(m: i64, k: i64) -> Result<QRat, ScalarError> {
    if k < 0 || k > m {
        return Err(ScalarError::Domain(format!(
            "qbinom({m}, {k}): need 0 <= k <= m"
        )));
    }
    let mut num = QRat::one();
    let mut den = QRat::one();
    for j in 0..k {
        num = &num * &qint((m - j) as u32);
        den = &den * &qint((k - j) as u32);
    }
    let out = num.checked_div(&den)?;
    debug_assert!(out.is_laurent());
    Ok(out)
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

fn rat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_str_paren(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

/// Canonical coefficient string: "3", "-1/2", "i", "-2i", "(1/2)i", "(1+2i)".
fn gauss_str(z: &Gauss) -> String {
    if z.im.is_zero() {
        return rat_str(&z.re);
    }
    if z.re.is_zero() {
        if z.im.is_one() {
            return "i".into();
        }
        if (-z.im.clone()).is_one() {
            return "-i".into();
        }
        let mag = rat_str_paren(&z.im.abs());
        return if z.im.is_negative() { format!("-{mag}i") } else { format!("{mag}i") };
    }
    let re = rat_str(&z.re);
    let im_abs = z.im.abs();
    let im = if im_abs.is_one() { String::new() } else { rat_str_paren(&im_abs) };
    let sign = if z.im.is_negative() { "-" } else { "+" };
    format!("({re}{sign}{im}i)")
}

fn poly_str(p: &Laurent) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.iter().enumerate() {
        // pull a leading minus out of purely real or purely imaginary coefficients
        let (neg, mag) = if c.im.is_zero() && c.re.is_negative() {
            (true, Complex::new(-c.re.clone(), BigRational::zero()))
        } else if c.re.is_zero() && c.im.is_negative() {
            (true, Complex::new(BigRational::zero(), -c.im.clone()))
        } else {
            (false, c.clone())
        };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coeff = gauss_str(&mag);
        let body = match *e {
            0 => coeff,
            1 if mag.is_one() => "q".into(),
            1 => format!("{coeff}*q"),
            _ if mag.is_one() => format!("q^{e}"),
            _ => format!("{coeff}*q^{e}"),
        };
        out.push_str(&body);
    }
    out
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", poly_str(&self.num), poly_str(&self.den))
    }
}

// ---------------------------------------------------------------------------
// Parsing: full rational-expression grammar over {integers, i, q}
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    I,
    Q,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut idx = 0;
    while idx < bytes.len() {
        let c = bytes[idx];
        match c {
            ' ' | '\t' | '\n' => idx += 1,
            '+' => { toks.push(Tok::Plus); idx += 1 }
            '-' => { toks.push(Tok::Minus); idx += 1 }
            '*' => { toks.push(Tok::Star); idx += 1 }
            '/' => { toks.push(Tok::Slash); idx += 1 }
            '^' => { toks.push(Tok::Caret); idx += 1 }
            '(' => { toks.push(Tok::LParen); idx += 1 }
            ')' => { toks.push(Tok::RParen); idx += 1 }
            'i' => { toks.push(Tok::I); idx += 1 }
            'q' => { toks.push(Tok::Q); idx += 1 }
            '0'..='9' => {
                let start = idx;
                while idx < bytes.len() && bytes[idx].is_ascii_digit() {
                    idx += 1;
                }
                let digits: String = bytes[start..idx].iter().collect();
                let n = BigInt::from_str(&digits)
                    .map_err(|e| ScalarError::Parse(e.to_string()))?;
                toks.push(Tok::Int(n));
            }
            other => {
                return Err(ScalarError::Parse(format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_expr(&mut self) -> Result<QRat, ScalarError> {
        let mut acc = self.parse_term()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.parse_term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.parse_term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<QRat, ScalarError> {
        let mut acc = self.parse_unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Star) => {
                    self.next();
                    acc = &acc * &self.parse_unary()?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    acc = acc.checked_div(&self.parse_unary()?)?;
                }
                // implicit multiplication by adjacency: 2q, (1/2)i, 3i
                Some(Tok::Int(_)) | Some(Tok::I) | Some(Tok::Q) | Some(Tok::LParen) => {
                    acc = &acc * &self.parse_unary()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_unary(&mut self) -> Result<QRat, ScalarError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            return Ok(-&self.parse_unary()?);
        }
        if matches!(self.peek(), Some(Tok::Plus)) {
            self.next();
            return self.parse_unary();
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<QRat, ScalarError> {
        let base = match self.next() {
            Some(Tok::Int(n)) => {
                QRat::from_gauss(Complex::new(BigRational::from_integer(n), BigRational::zero()))
            }
            Some(Tok::I) => QRat::i(),
            Some(Tok::Q) => QRat::q(),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                match self.next() {
                    Some(Tok::RParen) => inner,
                    _ => return Err(ScalarError::Parse("missing closing parenthesis".into())),
                }
            }
            other => return Err(ScalarError::Parse(format!("unexpected token {other:?}"))),
        };
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            let neg = if matches!(self.peek(), Some(Tok::Minus)) {
                self.next();
                true
            } else {
                false
            };
            match self.next() {
                Some(Tok::Int(n)) => {
                    let mut k: i64 = n
                        .to_string()
                        .parse()
                        .map_err(|_| ScalarError::Parse("exponent too large".into()))?;
                    if neg {
                        k = -k;
                    }
                    if base.is_zero() && k < 0 {
                        return Err(ScalarError::DivisionByZero);
                    }
                    return Ok(base.pow(k));
                }
                other => return Err(ScalarError::Parse(format!("bad exponent {other:?}"))),
            }
        }
        Ok(base)
    }
}

impl FromStr for QRat {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(ScalarError::Parse("empty input".into()));
        }
        let mut p = Parser { toks, pos: 0 };
        let v = p.parse_expr()?;
        if p.pos != p.toks.len() {
            return Err(ScalarError::Parse("trailing input".into()));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qr(s: &str) -> QRat {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_in_addition() {
        let a = &QRat::q() - &QRat::q_pow(-1);
        let b = QRat::q_pow(-1);
        assert_eq!(&a + &b, QRat::q());
    }

    #[test]
    fn polynomial_division_cancels() {
        let num = &(&QRat::q() * &QRat::q()) - &QRat::one();
        let den = &QRat::q() - &QRat::one();
        let out = num.checked_div(&den).unwrap();
        assert_eq!(out, qr("q + 1"));
        assert!(out.is_laurent());
    }

    #[test]
    fn hand_expanded_product() {
        let a = &QRat::one() + &QRat::q();
        let b = &QRat::one() + &QRat::q_pow(-1);
        // expand by hand: q^-1 + 2 + q
        let expect = qr("q^-1 + 2 + q");
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn qint_values() {
        assert_eq!(qint(1), QRat::one());
        assert_eq!(qint(3), qr("1 + q + q^2"));
        assert_eq!(qint(0), QRat::zero());
    }

    #[test]
    fn qbinom_values() {
        assert_eq!(qbinom(5, 0).unwrap(), QRat::one());
        assert_eq!(qbinom(3, 1).unwrap(), qr("1 + q + q^2"));
        // 3_q 2_q / (2_q 1_q) expands to 1 + q + q^2
        assert_eq!(qbinom(3, 2).unwrap(), qr("1 + q + q^2"));
        assert!(qbinom(3, 4).is_err());
        assert!(qbinom(3, -1).is_err());
    }

    #[test]
    fn qbinom_symmetry_and_laurent() {
        for m in 1..=6i64 {
            for k in 1..=m {
                let a = qbinom(m, k).unwrap();
                let b = qbinom(m, m - k).unwrap();
                assert_eq!(a, b, "symmetry failed at ({m},{k})");
                assert!(a.is_laurent());
            }
        }
    }

    #[test]
    fn eval_at_classical_point() {
        assert_eq!(qint(3).eval_at_one().unwrap(), gauss_from_int(3));
        assert_eq!(qbinom(3, 1).unwrap().eval_at_one().unwrap(), gauss_from_int(3));
        let d = &QRat::q() - &QRat::q_pow(-1);
        assert_eq!(d.eval_at_one().unwrap(), gauss_zero());
    }

    #[test]
    fn eval_binomial_limits() {
        fn binom(m: u64, k: u64) -> i64 {
            let mut acc = 1i64;
            for j in 0..k {
                acc = acc * (m - j) as i64 / (j + 1) as i64;
            }
            acc
        }
        for m in 0..=6i64 {
            for k in 0..=m {
                let v = qbinom(m, k).unwrap().eval_at_one().unwrap();
                assert_eq!(v, gauss_from_int(binom(m as u64, k as u64)));
            }
        }
    }

    #[test]
    fn pole_is_detected() {
        let x = QRat::one().checked_div(&(&QRat::q() - &QRat::one())).unwrap();
        assert_eq!(x.eval_at_one(), Err(ScalarError::Pole));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            QRat::one().checked_div(&QRat::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn display_round_trip() {
        let vals = [
            qr("q^-1 + 2 + q"),
            qr("(1 + q + q^2)/(1)"),
            qr("(q - q^-1)/(1 + q^3)"),
            qr("-i*q^2 + (1/2)i"),
            qr("(1+2i)*q^-3 - 7/5"),
            QRat::zero(),
        ];
        for v in vals {
            let s = v.to_string();
            let back: QRat = s.parse().unwrap();
            assert_eq!(back, v, "round trip failed for {s}");
        }
    }

    #[test]
    fn sqrt_of_perfect_squares() {
        let x = qr("q^2 + 2q + 1");
        let r = x.sqrt().unwrap();
        assert_eq!(&r * &r, x);
        let y = qr("q^4");
        assert_eq!(y.sqrt().unwrap(), qr("q^2"));
        // -(q+q^-1)^2 has the Gaussian root i(q + q^-1)
        let z = -&(&qr("q + q^-1") * &qr("q + q^-1"));
        let rz = z.sqrt().unwrap();
        assert_eq!(&rz * &rz, z);
        assert!(qr("q").sqrt().is_none());
    }
}
