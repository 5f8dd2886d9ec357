//! Exact integer and Laurent-polynomial arithmetic.
//!
//! Everything downstream (tangle brackets, skein contraction, determinant
//! evaluation) is built on two types: [`Int`], a 64-bit integer that promotes
//! to arbitrary precision instead of wrapping, and [`LaurentInt`], a sparse
//! Laurent polynomial over [`Int`].
//!
//! Brackets of 2-tangles are stored in the graded normal form
//! `A^n (t^{-1/2} p(t), q(t))` with `t = A^{-4}`; see [`GradedBracket`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("non-canonical bracket shift {0} (expected 0..=3)")]
    NonCanonicalShift(i64),
    #[error("malformed laurent text: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Int: i64 with promotion to BigInt on overflow.
// ---------------------------------------------------------------------------

/// Exact integer. Stays in machine width until an operation would overflow,
/// then promotes to a heap `BigInt`. The `Big` variant never holds a value
/// that fits in i64, so derived equality and hashing are value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub fn zero() -> Self {
        Int::Small(0)
    }

    pub fn one() -> Self {
        Int::Small(1)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    /// ±1 test; only units of Z.
    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn from_bigint(b: BigInt) -> Self {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::from_bigint(BigInt::from(*v).abs()),
            },
            Int::Big(b) => Int::from_bigint(b.abs()),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_bigint(b)
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl Add for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_add(*b) {
                Some(s) => Int::Small(s),
                None => Int::from_bigint(BigInt::from(*a) + BigInt::from(*b)),
            },
            _ => Int::from_bigint(self.to_bigint() + rhs.to_bigint()),
        }
    }
}

impl Sub for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_sub(*b) {
                Some(s) => Int::Small(s),
                None => Int::from_bigint(BigInt::from(*a) - BigInt::from(*b)),
            },
            _ => Int::from_bigint(self.to_bigint() - rhs.to_bigint()),
        }
    }
}

impl Mul for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_mul(*b) {
                Some(s) => Int::Small(s),
                None => Int::from_bigint(BigInt::from(*a) * BigInt::from(*b)),
            },
            _ => Int::from_bigint(self.to_bigint() * rhs.to_bigint()),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_bigint(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_bigint(-(**b).clone()),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

// ---------------------------------------------------------------------------
// LaurentInt: sparse Laurent polynomial with Int coefficients.
// ---------------------------------------------------------------------------

/// Sparse Laurent polynomial in one formal variable. Exponents are kept
/// strictly increasing and no stored coefficient is zero; the zero polynomial
/// is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentInt {
    terms: BTreeMap<i64, Int>,
}

impl LaurentInt {
    pub fn zero() -> Self {
        LaurentInt {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        LaurentInt::monomial(0, Int::one())
    }

    pub fn monomial(exp: i64, coeff: Int) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentInt { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        let mut p = LaurentInt::zero();
        for (e, c) in it {
            p.add_term(e, Int::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Int)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: i64) -> Int {
        self.terms.get(&exp).cloned().unwrap_or_else(Int::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((exp, coeff))` when the polynomial has exactly one term.
    pub fn as_monomial(&self) -> Option<(i64, &Int)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((*e, c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: i64, coeff: Int) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let s = &old + &coeff;
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
            None => {
                self.terms.insert(exp, coeff);
            }
        }
    }

    /// Multiply by `c * x^k`.
    pub fn mul_term(&self, exp: i64, coeff: &Int) -> LaurentInt {
        if coeff.is_zero() {
            return LaurentInt::zero();
        }
        LaurentInt {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + exp, c * coeff))
                .collect(),
        }
    }

    /// Shift all exponents by `k` (multiply by `x^k`).
    pub fn shifted(&self, k: i64) -> LaurentInt {
        if k == 0 {
            return self.clone();
        }
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute `x -> x^{-1}` (negate all exponents).
    pub fn reversed(&self) -> LaurentInt {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Substitute `x -> x^k`, `k != 0`.
    pub fn inflated(&self, k: i64) -> LaurentInt {
        assert!(k != 0);
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Value at `x = -1`: sum of coefficients with parity signs.
    pub fn eval_neg_one(&self) -> Int {
        let mut acc = Int::zero();
        for (e, c) in &self.terms {
            if e.rem_euclid(2) == 0 {
                acc = &acc + c;
            } else {
                acc = &acc - c;
            }
        }
        acc
    }
}

impl Add for &LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: &LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

/// Canonical text form: ascending `coeff*t^exp` terms joined by `+`,
/// e.g. `-1*t^-5+-1*t^3+1*t^7`. The zero polynomial prints as `0`.
impl fmt::Display for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            write!(f, "{c}*t^{e}")?;
        }
        Ok(())
    }
}

impl FromStr for LaurentInt {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentInt::zero());
        }
        let mut p = LaurentInt::zero();
        // Terms are joined by '+' but coefficients may start with '-'.
        for tok in s.split('+') {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(LaurentError::Parse(s.to_string()));
            }
            let (c, e) = tok
                .split_once("*t^")
                .ok_or_else(|| LaurentError::Parse(tok.to_string()))?;
            let coeff = BigInt::from_str(c.trim())
                .map_err(|_| LaurentError::Parse(tok.to_string()))?;
            let exp: i64 = e
                .trim()
                .parse()
                .map_err(|_| LaurentError::Parse(tok.to_string()))?;
            p.add_term(exp, Int::from_bigint(coeff));
        }
        Ok(p)
    }
}

// ---------------------------------------------------------------------------
// GradedBracket: A^n (t^{-1/2} p, q) with t = A^{-4}.
// ---------------------------------------------------------------------------

/// Kauffman bracket of a 2-tangle in graded normal form.
///
/// The pair stands for `<T> = a*[infinity] + b*[zero]` with
/// `a(A) = A^shift * t^{-1/2} * p(t)` and `b(A) = A^shift * q(t)` where
/// `t = A^{-4}` and the formal half-unit satisfies `t^{-1/2} = A^2` inside the
/// symbolic ring. Canonical form keeps `shift` in `0..=3`; each fold of 4
/// multiplies `p` and `q` by a power of `t` (since `A^4 = t^{-1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBracket {
    pub shift: i64,
    pub p: LaurentInt,
    pub q: LaurentInt,
}

impl GradedBracket {
    /// Canonicalize an arbitrary shift into `0..=3`, folding `A^4 = t^{-1}`.
    pub fn normalize(shift: i64, p: LaurentInt, q: LaurentInt) -> GradedBracket {
        let r = shift.rem_euclid(4);
        let folds = (shift - r) / 4; // shift = 4*folds + r, r in 0..4
        // A^{4k} = t^{-k}: dropping 4k from the shift multiplies p,q by t^{-k}.
        let p = p.shifted(-folds);
        let q = q.shifted(-folds);
        GradedBracket { shift: r, p, q }
    }

    pub fn is_canonical(&self) -> bool {
        (0..=3).contains(&self.shift)
    }

    /// Zero tangle: (a, b) = (0, 1).
    pub fn zero_tangle() -> GradedBracket {
        GradedBracket::normalize(0, LaurentInt::zero(), LaurentInt::one())
    }

    /// Infinity tangle: (a, b) = (1, 0).
    pub fn infinity_tangle() -> GradedBracket {
        // a = 1 = A^{-2} * t^{-1/2}: shift -2, p = 1, q = 0.
        GradedBracket::normalize(-2, LaurentInt::one(), LaurentInt::zero())
    }

    /// The bracket pair as Laurent polynomials in `A` itself
    /// (`a(A) = A^{shift+2} p(A^{-4})`, `b(A) = A^shift q(A^{-4})`).
    pub fn pair_in_a(&self) -> (LaurentInt, LaurentInt) {
        let a = self.p.inflated(-4).shifted(self.shift + 2);
        let b = self.q.inflated(-4).shifted(self.shift);
        (a, b)
    }

    /// Evaluate at the determinant point `t = -1` on the fixed branch
    /// `t^{1/2} = i`, `A` the primitive eighth root with `A^2 = i`.
    pub fn eval_det_point(&self) -> Result<BracketAtDetPoint, LaurentError> {
        if !self.is_canonical() {
            return Err(LaurentError::NonCanonicalShift(self.shift));
        }
        // a-value = zeta^shift * (-i) * p(-1), with -i = zeta^6.
        let a = DetValue::from_eighth_power(self.shift + 6, self.p.eval_neg_one());
        let b = DetValue::from_eighth_power(self.shift, self.q.eval_neg_one());
        Ok(BracketAtDetPoint { a, b })
    }
}

impl fmt::Display for GradedBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A^{}(t^-1/2*[{}],[{}])", self.shift, self.p, self.q)
    }
}

// ---------------------------------------------------------------------------
// Gaussian integers and eighth-root-graded determinant values.
// ---------------------------------------------------------------------------

/// Exact Gaussian integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussInt {
    pub re: Int,
    pub im: Int,
}

impl GaussInt {
    pub fn new(re: i64, im: i64) -> Self {
        GaussInt {
            re: Int::from(re),
            im: Int::from(im),
        }
    }

    pub fn zero() -> Self {
        GaussInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn from_int(v: Int) -> Self {
        GaussInt {
            re: v,
            im: Int::zero(),
        }
    }

    pub fn add(&self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn mul(&self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }

    /// Multiply by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> GaussInt {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => GaussInt {
                re: -&self.im,
                im: self.re.clone(),
            },
            2 => GaussInt {
                re: -&self.re,
                im: -&self.im,
            },
            _ => GaussInt {
                re: self.im.clone(),
                im: -&self.re,
            },
        }
    }

    pub fn norm_sqr(&self) -> Int {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im.to_bigint())
    }
}

/// A complex value of the form `g * zeta^e` with `g` Gaussian, `zeta` the
/// primitive eighth root of unity with `zeta^2 = i`, and `e` in `{0, 1}`.
/// Closed knot diagrams always land at `e = 0`; the odd case only occurs for
/// open tangles, where consumers use squared moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetValue {
    pub g: GaussInt,
    pub eighth: bool,
}

impl DetValue {
    pub fn zero() -> Self {
        DetValue {
            g: GaussInt::zero(),
            eighth: false,
        }
    }

    pub fn one() -> Self {
        DetValue {
            g: GaussInt::one(),
            eighth: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero()
    }

    /// `zeta^k * n` reduced so the explicit eighth-root exponent is 0 or 1.
    pub fn from_eighth_power(k: i64, n: Int) -> DetValue {
        let k = k.rem_euclid(8);
        let (half, rem) = (k / 2, k % 2);
        DetValue {
            g: GaussInt::from_int(n).mul_i_pow(half),
            eighth: rem == 1,
        }
    }

    pub fn add(&self, rhs: &DetValue) -> DetValue {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.eighth, rhs.eighth,
            "adding determinant values of incompatible grading"
        );
        DetValue {
            g: self.g.add(&rhs.g),
            eighth: self.eighth,
        }
    }

    pub fn mul(&self, rhs: &DetValue) -> DetValue {
        let g = self.g.mul(&rhs.g);
        match (self.eighth, rhs.eighth) {
            (false, false) => DetValue { g, eighth: false },
            (true, false) | (false, true) => DetValue { g, eighth: true },
            // zeta^2 = i folds back into the Gaussian part.
            (true, true) => DetValue {
                g: g.mul_i_pow(1),
                eighth: false,
            },
        }
    }

    pub fn norm_sqr(&self) -> Int {
        self.g.norm_sqr()
    }
}

/// The bracket pair of an open tangle evaluated at the determinant point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketAtDetPoint {
    pub a: DetValue,
    pub b: DetValue,
}

/// Exact integer square root test: `Some(r)` iff `v = r^2`.
pub fn exact_sqrt(v: &Int) -> Option<Int> {
    let b = v.to_bigint();
    if b.is_negative() {
        return None;
    }
    let r = b.sqrt();
    if &r * &r == b {
        Some(Int::from_bigint(r))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentInt {
        LaurentInt::from_terms(terms.iter().copied())
    }

    #[test]
    fn mul_identity() {
        let one = LaurentInt::one();
        let p = lp(&[(-1, 1), (1, 1)]); // t + t^{-1}
        assert_eq!(&one * &p, p);
    }

    #[test]
    fn mul_symmetric_square() {
        let p = lp(&[(-1, 1), (1, 1)]);
        let sq = &p * &p;
        assert_eq!(sq, lp(&[(-2, 1), (0, 2), (2, 1)]));
    }

    #[test]
    fn mul_telescoping() {
        // (1 - t)(1 + t + t^2) = 1 - t^3, frozen from schoolbook expansion.
        let a = lp(&[(0, 1), (1, -1)]);
        let b = lp(&[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(&a * &b, lp(&[(0, 1), (3, -1)]));
    }

    #[test]
    fn int_overflow_promotes() {
        let big = Int::from(i64::MAX);
        let sum = &big + &Int::from(1);
        assert_eq!(sum.to_bigint(), BigInt::from(i64::MAX) + 1);
        let prod = &big * &big;
        assert_eq!(prod.to_bigint(), BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        // demotion keeps Eq canonical
        let back = &sum + &Int::from(-1);
        assert_eq!(back, big);
    }

    #[test]
    fn normalize_folds_shift() {
        let g = GradedBracket::normalize(4, LaurentInt::one(), LaurentInt::zero());
        assert_eq!(g.shift, 0);
        assert_eq!(g.p, lp(&[(-1, 1)]));
        assert!(g.q.is_zero());

        let g2 = GradedBracket::normalize(0, lp(&[(2, 3)]), lp(&[(0, 1)]));
        assert_eq!(g2.shift, 0);
        assert_eq!(g2.p, lp(&[(2, 3)]));

        let g3 = GradedBracket::normalize(-3, LaurentInt::one(), LaurentInt::one());
        assert_eq!(g3.shift, 1);
        assert_eq!(g3.p, lp(&[(1, 1)]));
        assert_eq!(g3.q, lp(&[(1, 1)]));
    }

    #[test]
    fn normalize_idempotent_and_value_preserving() {
        for shift in -9..9 {
            let p = lp(&[(0, 2), (1, -1)]);
            let q = lp(&[(-1, 5)]);
            let g = GradedBracket::normalize(shift, p.clone(), q.clone());
            let g2 = GradedBracket::normalize(g.shift, g.p.clone(), g.q.clone());
            assert_eq!(g, g2);
            // value check at t = -1: zeta^shift * f(-1) invariant under folding
            let raw_b = DetValue::from_eighth_power(shift, q.eval_neg_one());
            let can_b = DetValue::from_eighth_power(g.shift, g.q.eval_neg_one());
            assert_eq!(raw_b, can_b);
        }
    }

    #[test]
    fn det_point_examples() {
        // zero tangle: (0, 1)
        let g = GradedBracket::zero_tangle();
        let e = g.eval_det_point().unwrap();
        assert!(e.a.is_zero());
        assert_eq!(e.b, DetValue::one());

        // (shift 0, p=1, q=0): a-value = t^{-1/2} = -i
        let g = GradedBracket::normalize(0, LaurentInt::one(), LaurentInt::zero());
        let e = g.eval_det_point().unwrap();
        assert_eq!(e.a.g, GaussInt::new(0, -1));
        assert!(!e.a.eighth);

        // integral tangle 2: A^2(t^{-1/2}(t-1), t): |a|^2 = 4, |b|^2 = 1
        let g = GradedBracket::normalize(2, lp(&[(0, -1), (1, 1)]), lp(&[(1, 1)]));
        let e = g.eval_det_point().unwrap();
        assert_eq!(e.a.norm_sqr(), Int::from(4));
        assert_eq!(e.b.norm_sqr(), Int::from(1));
    }

    #[test]
    fn det_point_rejects_non_canonical() {
        let g = GradedBracket {
            shift: 5,
            p: LaurentInt::one(),
            q: LaurentInt::zero(),
        };
        assert!(g.eval_det_point().is_err());
    }

    #[test]
    fn text_round_trip() {
        let p = lp(&[(-5, -1), (3, -1), (7, 1)]);
        let s = p.to_string();
        assert_eq!(s, "-1*t^-5+-1*t^3+1*t^7");
        assert_eq!(s.parse::<LaurentInt>().unwrap(), p);
        assert_eq!("0".parse::<LaurentInt>().unwrap(), LaurentInt::zero());
    }

    #[test]
    fn det_value_multiplication_folds_eighths() {
        let x = DetValue::from_eighth_power(1, Int::from(1));
        let sq = x.mul(&x); // zeta^2 = i
        assert_eq!(sq.g, GaussInt::new(0, 1));
        assert!(!sq.eighth);
        let all = DetValue::from_eighth_power(8, Int::from(3));
        assert_eq!(all.g, GaussInt::new(3, 0));
    }

    #[test]
    fn eval_commutes_with_mul() {
        // closed-form values (shift, poly): eval is a ring homomorphism
        let cases = [
            (0i64, lp(&[(0, 1), (2, -3)])),
            (3, lp(&[(-1, 2), (1, 1)])),
            (5, lp(&[(0, 7)])),
            (-2, lp(&[(-3, 1), (0, -1), (4, 2)])),
        ];
        for (s1, f1) in &cases {
            for (s2, f2) in &cases {
                let prod = DetValue::from_eighth_power(s1 + s2, (f1 * f2).eval_neg_one());
                let sep = DetValue::from_eighth_power(*s1, f1.eval_neg_one())
                    .mul(&DetValue::from_eighth_power(*s2, f2.eval_neg_one()));
                assert_eq!(prod, sep);
            }
        }
    }

    #[test]
    fn exact_sqrt_works() {
        assert_eq!(exact_sqrt(&Int::from(9)), Some(Int::from(3)));
        assert_eq!(exact_sqrt(&Int::from(8)), None);
        assert_eq!(exact_sqrt(&Int::from(0)), Some(Int::from(0)));
    }
}
