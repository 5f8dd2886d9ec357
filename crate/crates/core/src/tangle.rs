//! 2-tangle expressions: integral tangles combined by sum, reflection,
//! mirror image, and the three 180-degree mutations.
//!
//! Brackets are computed structurally: crossing resolution for integral
//! tangles, the sum rule for `+`, coefficient swap-and-conjugate for the
//! reflection, conjugation for the mirror, and identity for mutations.

use std::fmt;
use std::sync::Arc;
use std::str::FromStr;

use thiserror::Error;

use crate::laurent::{GradedBracket, LaurentInt};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TangleError {
    #[error("tangle has {0} internal loop(s)")]
    InternalLoops(usize),
    #[error("expression is not a rational fragment")]
    NotRational,
    #[error("fraction {0}/{1} is not > 1 in lowest terms")]
    BadFraction(i64, i64),
    #[error("malformed tangle text: {0}")]
    Parse(String),
}

/// Endpoint pairing of a 2-tangle: which boundary corners are joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EndpointPairing {
    /// NW-NE and SW-SE (horizontal strands).
    ZeroType,
    /// NW-SW and NE-SE (vertical strands).
    InftyType,
    /// NW-SE and NE-SW.
    CrossType,
}

impl EndpointPairing {
    pub fn reflected(self) -> Self {
        match self {
            EndpointPairing::ZeroType => EndpointPairing::InftyType,
            EndpointPairing::InftyType => EndpointPairing::ZeroType,
            EndpointPairing::CrossType => EndpointPairing::CrossType,
        }
    }

    /// Quarter-turn rotation swaps horizontal and vertical strands.
    pub fn rotated(self) -> Self {
        self.reflected()
    }

    pub fn code(self) -> u8 {
        match self {
            EndpointPairing::ZeroType => b'0',
            EndpointPairing::InftyType => b'8',
            EndpointPairing::CrossType => b'x',
        }
    }

    pub fn from_code(c: u8) -> Option<Self> {
        match c {
            b'0' => Some(EndpointPairing::ZeroType),
            b'8' => Some(EndpointPairing::InftyType),
            b'x' => Some(EndpointPairing::CrossType),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TangleNode {
    Integral(i64),
    Sum(TangleExpr, TangleExpr),
    Reflect(TangleExpr),
    Mirror(TangleExpr),
    MutateX(TangleExpr),
    MutateY(TangleExpr),
    MutateZ(TangleExpr),
}

/// Expression tree over integral tangles. Crossing count, endpoint pairing
/// and internal-loop count are computed on construction and cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TangleExpr {
    node: Arc<TangleNode>,
    crossings: u32,
    pairing: EndpointPairing,
    loops: u32,
}

impl TangleExpr {
    pub fn integral(n: i64) -> Self {
        let pairing = if n == 0 {
            EndpointPairing::ZeroType
        } else if n % 2 == 0 {
            EndpointPairing::ZeroType
        } else {
            EndpointPairing::CrossType
        };
        TangleExpr {
            node: Arc::new(TangleNode::Integral(n)),
            crossings: n.unsigned_abs() as u32,
            pairing,
            loops: 0,
        }
    }

    pub fn sum(left: TangleExpr, right: TangleExpr) -> Self {
        let (pairing, extra) = compose_pairings(left.pairing, right.pairing);
        TangleExpr {
            crossings: left.crossings + right.crossings,
            pairing,
            loops: left.loops + right.loops + extra,
            node: Arc::new(TangleNode::Sum(left, right)),
        }
    }

    pub fn reflect(child: TangleExpr) -> Self {
        TangleExpr {
            crossings: child.crossings,
            pairing: child.pairing.reflected(),
            loops: child.loops,
            node: Arc::new(TangleNode::Reflect(child)),
        }
    }

    pub fn mirror(child: TangleExpr) -> Self {
        TangleExpr {
            crossings: child.crossings,
            pairing: child.pairing,
            loops: child.loops,
            node: Arc::new(TangleNode::Mirror(child)),
        }
    }

    pub fn mutate_x(child: TangleExpr) -> Self {
        TangleExpr {
            crossings: child.crossings,
            pairing: child.pairing,
            loops: child.loops,
            node: Arc::new(TangleNode::MutateX(child)),
        }
    }

    pub fn mutate_y(child: TangleExpr) -> Self {
        TangleExpr {
            crossings: child.crossings,
            pairing: child.pairing,
            loops: child.loops,
            node: Arc::new(TangleNode::MutateY(child)),
        }
    }

    pub fn mutate_z(child: TangleExpr) -> Self {
        TangleExpr {
            crossings: child.crossings,
            pairing: child.pairing,
            loops: child.loops,
            node: Arc::new(TangleNode::MutateZ(child)),
        }
    }

    pub fn node(&self) -> &TangleNode {
        &self.node
    }

    pub fn crossing_count(&self) -> u32 {
        self.crossings
    }

    pub fn pairing(&self) -> EndpointPairing {
        self.pairing
    }

    pub fn loops(&self) -> u32 {
        self.loops
    }

    /// Bracket of a loop-free tangle.
    pub fn bracket(&self) -> Result<GradedBracket, TangleError> {
        if self.loops > 0 {
            return Err(TangleError::InternalLoops(self.loops as usize));
        }
        Ok(self.bracket_raw())
    }

    /// Bracket without the loop guard. Internal loops contribute their
    /// loop factors through the sum rule, so the value is still exact.
    pub fn bracket_raw(&self) -> GradedBracket {
        match self.node.as_ref() {
            TangleNode::Integral(n) => integral_bracket(*n),
            TangleNode::Sum(l, r) => sum_bracket(&l.bracket_raw(), &r.bracket_raw()),
            TangleNode::Reflect(c) => reflect_bracket(&c.bracket_raw()),
            TangleNode::Mirror(c) => mirror_bracket(&c.bracket_raw()),
            TangleNode::MutateX(c) | TangleNode::MutateY(c) | TangleNode::MutateZ(c) => {
                c.bracket_raw()
            }
        }
    }

    /// Conway fraction of a rational fragment: integral leaves, reflections,
    /// and sums with at least one integral summand. `q = 0` encodes infinity.
    pub fn fraction(&self) -> Result<RationalSpec, TangleError> {
        match self.node.as_ref() {
            TangleNode::Integral(n) => Ok(RationalSpec::new(*n, 1)),
            TangleNode::Reflect(c) => Ok(c.fraction()?.inverse()),
            TangleNode::Mirror(c) => Ok(c.fraction()?.negated()),
            TangleNode::MutateX(c) | TangleNode::MutateY(c) | TangleNode::MutateZ(c) => {
                c.fraction()
            }
            TangleNode::Sum(l, r) => {
                let fl = l.fraction()?;
                let fr = r.fraction()?;
                match (fl.is_integer(), fr.is_integer()) {
                    (true, _) | (_, true) => fl.add(&fr).ok_or(TangleError::NotRational),
                    _ => Err(TangleError::NotRational),
                }
            }
        }
    }
}

/// Pairing of `left + right` (gluing east corners of `left` to west corners
/// of `right`) plus the number of closed loops created by the gluing.
fn compose_pairings(l: EndpointPairing, r: EndpointPairing) -> (EndpointPairing, u32) {
    use EndpointPairing::*;
    match (l, r) {
        (ZeroType, ZeroType) => (ZeroType, 0),
        (ZeroType, InftyType) => (InftyType, 0),
        (InftyType, ZeroType) => (InftyType, 0),
        (InftyType, InftyType) => (InftyType, 1),
        (CrossType, ZeroType) => (CrossType, 0),
        (ZeroType, CrossType) => (CrossType, 0),
        (CrossType, InftyType) => (InftyType, 0),
        (InftyType, CrossType) => (InftyType, 0),
        (CrossType, CrossType) => (ZeroType, 0),
    }
}

fn integral_bracket(n: i64) -> GradedBracket {
    if n == 0 {
        return GradedBracket::zero_tangle();
    }
    // One positive crossing: (a, b) = (A, A^{-1}) = A^{-1}(t^{-1/2} * 1, 1).
    let one = GradedBracket::normalize(-1, LaurentInt::one(), LaurentInt::one());
    let mut acc = one.clone();
    for _ in 1..n.unsigned_abs() {
        acc = sum_bracket(&acc, &one);
    }
    if n < 0 {
        acc = mirror_bracket(&acc);
    }
    acc
}

/// Sum rule in graded form:
/// p = p1 q2 + q1 p2 - (1 + t^{-1}) p1 p2, q = q1 q2, shift adds.
fn sum_bracket(l: &GradedBracket, r: &GradedBracket) -> GradedBracket {
    let loop_factor = LaurentInt::from_terms([(0, 1), (-1, 1)]); // 1 + t^{-1}
    let p = &(&(&l.p * &r.q) + &(&l.q * &r.p)) - &(&loop_factor * &(&l.p * &r.p));
    let q = &l.q * &r.q;
    GradedBracket::normalize(l.shift + r.shift, p, q)
}

/// Reflection about the NW-SE axis: `(a, b) -> (conj b, conj a)` where
/// conjugation is `A -> A^{-1}`, i.e. `t -> t^{-1}`.
fn reflect_bracket(g: &GradedBracket) -> GradedBracket {
    GradedBracket::normalize(-g.shift - 2, g.q.reversed(), g.p.reversed())
}

/// Mirror image: `(a, b) -> (conj a, conj b)`.
fn mirror_bracket(g: &GradedBracket) -> GradedBracket {
    GradedBracket::normalize(-g.shift, g.p.reversed().shifted(1), g.q.reversed())
}

/// Quarter-turn rotation swaps the coefficient pair: `(a, b) -> (b, a)`.
pub fn rotate_bracket(g: &GradedBracket) -> GradedBracket {
    // new a = old b: A^n q = A^{n-2} t^{-1/2} (q * t^{1/2}... ) fold exactly:
    // want shift m, p', q' with A^{m+2} p'(t) = A^n q(t) and A^m q'(t) = A^{n+2} p(t).
    // m = n - 2: p' = q; q' = A^4 p = t^{-1} p.
    GradedBracket::normalize(g.shift - 2, g.q.clone(), g.p.shifted(-1))
}

/// Bracket of a closed diagram: `A^shift * poly(t)` with all-integer powers
/// of `A` once the closure is a knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedBracket {
    pub shift: i64,
    pub poly: LaurentInt,
}

impl ClosedBracket {
    pub fn normalize(shift: i64, poly: LaurentInt) -> ClosedBracket {
        if poly.is_zero() {
            return ClosedBracket {
                shift: 0,
                poly,
            };
        }
        let r = shift.rem_euclid(4);
        let folds = (shift - r) / 4;
        ClosedBracket {
            shift: r,
            poly: poly.shifted(-folds),
        }
    }

    pub fn one() -> ClosedBracket {
        ClosedBracket {
            shift: 0,
            poly: LaurentInt::one(),
        }
    }

    pub fn mul(&self, rhs: &ClosedBracket) -> ClosedBracket {
        ClosedBracket::normalize(self.shift + rhs.shift, &self.poly * &rhs.poly)
    }

    /// The value as a Laurent polynomial in `A` (exponents `shift - 4k`).
    pub fn in_a(&self) -> LaurentInt {
        self.poly.inflated(-4).shifted(self.shift)
    }

    /// `Some(exp)` iff the bracket is a single monomial `±A^exp`
    /// with unit coefficient.
    pub fn monomial_exp(&self) -> Option<(i64, i32)> {
        let (e, c) = self.poly.as_monomial()?;
        if !c.is_unit() {
            return None;
        }
        Some((self.shift - 4 * e, c.signum()))
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial_exp().is_some()
    }

    /// Evaluate at `t = -1`, `A = zeta` (the fixed eighth root).
    pub fn eval_det_point(&self) -> crate::laurent::DetValue {
        crate::laurent::DetValue::from_eighth_power(self.shift, self.poly.eval_neg_one())
    }
}

impl fmt::Display for ClosedBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A^{}*[{}]", self.shift, self.poly)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    Numerator,
    Denominator,
}

/// Close a tangle bracket: numerator gives `a + b*eps`, denominator
/// `a*eps + b`, with `eps = -A^2 - A^{-2}`.
pub fn closure_bracket(g: &GradedBracket, kind: ClosureKind) -> ClosedBracket {
    match kind {
        ClosureKind::Numerator => {
            // a + b*eps = A^{n+2} [p - (1 + t) q]
            let one_plus_t = LaurentInt::from_terms([(0, 1), (1, 1)]);
            let poly = &g.p - &(&one_plus_t * &g.q);
            ClosedBracket::normalize(g.shift + 2, poly)
        }
        ClosureKind::Denominator => {
            // a*eps + b = A^n [q - (1 + t^{-1}) p]
            let one_plus_tinv = LaurentInt::from_terms([(0, 1), (-1, 1)]);
            let poly = &g.q - &(&one_plus_tinv * &g.p);
            ClosedBracket::normalize(g.shift, poly)
        }
    }
}

// ---------------------------------------------------------------------------
// Rational tangles.
// ---------------------------------------------------------------------------

/// A value in Q ∪ {∞} in lowest terms; `q = 0` encodes infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalSpec {
    pub p: i64,
    pub q: i64,
}

impl RationalSpec {
    pub fn new(p: i64, q: i64) -> Self {
        if q == 0 {
            return RationalSpec { p: 1, q: 0 };
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let sign = if q < 0 { -1 } else { 1 };
        RationalSpec {
            p: sign * p / g,
            q: sign * q / g,
        }
    }

    pub fn infinity() -> Self {
        RationalSpec { p: 1, q: 0 }
    }

    pub fn is_integer(&self) -> bool {
        self.q == 1
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }

    pub fn inverse(&self) -> RationalSpec {
        RationalSpec::new(self.q, self.p)
    }

    pub fn negated(&self) -> RationalSpec {
        RationalSpec::new(-self.p, self.q)
    }

    pub fn add(&self, rhs: &RationalSpec) -> Option<RationalSpec> {
        let p = self.p.checked_mul(rhs.q)?.checked_add(rhs.p.checked_mul(self.q)?)?;
        let q = self.q.checked_mul(rhs.q)?;
        if p == 0 && q == 0 {
            return None; // ∞ + ∞ is not a tangle fraction
        }
        Some(RationalSpec::new(p, q))
    }
}

impl fmt::Display for RationalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Continued-fraction terms of `p/q >= 1`: `p/q = c0 + 1/(c1 + 1/(...))`
/// with all terms >= 1 from the Euclidean recursion (the last term is >= 2
/// automatically unless the fraction is an integer).
pub fn continued_fraction(mut p: i64, mut q: i64) -> Vec<i64> {
    let mut terms = Vec::new();
    while q != 0 {
        terms.push(p.div_euclid(q));
        let r = p.rem_euclid(q);
        p = q;
        q = r;
    }
    terms
}

/// Build the rational tangle for `p/q > 1` in lowest terms from positive
/// integral tangles along the continued-fraction decomposition.
pub fn rational_tangle(spec: RationalSpec) -> Result<TangleExpr, TangleError> {
    if spec.q <= 0 || spec.p <= spec.q {
        return Err(TangleError::BadFraction(spec.p, spec.q));
    }
    Ok(rational_tangle_unchecked(spec))
}

pub(crate) fn rational_tangle_unchecked(spec: RationalSpec) -> TangleExpr {
    let terms = continued_fraction(spec.p, spec.q);
    let mut expr = TangleExpr::integral(*terms.last().unwrap());
    for c in terms.iter().rev().skip(1) {
        expr = TangleExpr::sum(TangleExpr::integral(*c), TangleExpr::reflect(expr));
    }
    expr
}

// ---------------------------------------------------------------------------
// Text serialization (Conway-like prefix notation).
// ---------------------------------------------------------------------------

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node.as_ref() {
            TangleNode::Integral(n) => write!(f, "int({n})"),
            TangleNode::Sum(l, r) => write!(f, "sum({l},{r})"),
            TangleNode::Reflect(c) => write!(f, "refl({c})"),
            TangleNode::Mirror(c) => write!(f, "mir({c})"),
            TangleNode::MutateX(c) => write!(f, "mutx({c})"),
            TangleNode::MutateY(c) => write!(f, "muty({c})"),
            TangleNode::MutateZ(c) => write!(f, "mutz({c})"),
        }
    }
}

impl FromStr for TangleExpr {
    type Err = TangleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(TangleError::Parse(format!("trailing input at {}", p.pos)));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), TangleError> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(TangleError::Parse(format!(
                "expected '{}' at {}",
                c as char, self.pos
            )))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn int(&mut self) -> Result<i64, TangleError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| TangleError::Parse(format!("bad integer at {start}")))
    }

    fn expr(&mut self) -> Result<TangleExpr, TangleError> {
        let name = self.ident();
        self.eat(b'(')?;
        let out = match name.as_str() {
            "int" => {
                let n = self.int()?;
                TangleExpr::integral(n)
            }
            "sum" => {
                // n-ary sums fold left
                let mut acc = self.expr()?;
                loop {
                    self.skip_ws();
                    if self.pos < self.bytes.len() && self.bytes[self.pos] == b',' {
                        self.pos += 1;
                        let next = self.expr()?;
                        acc = TangleExpr::sum(acc, next);
                    } else {
                        break;
                    }
                }
                acc
            }
            "refl" => TangleExpr::reflect(self.expr()?),
            "mir" => TangleExpr::mirror(self.expr()?),
            "mutx" => TangleExpr::mutate_x(self.expr()?),
            "muty" => TangleExpr::mutate_y(self.expr()?),
            "mutz" => TangleExpr::mutate_z(self.expr()?),
            other => return Err(TangleError::Parse(format!("unknown node '{other}'"))),
        };
        self.eat(b')')?;
        Ok(out)
    }
}

/// Loop factor `eps = -A^2 - A^{-2}` as a closed bracket: `A^2 (-1 - t)`.
pub fn loop_factor() -> ClosedBracket {
    ClosedBracket::normalize(2, LaurentInt::from_terms([(0, -1), (1, -1)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    

    fn lp(terms: &[(i64, i64)]) -> LaurentInt {
        LaurentInt::from_terms(terms.iter().copied())
    }

    fn bracket_pair_in_a(e: &TangleExpr) -> (LaurentInt, LaurentInt) {
        e.bracket_raw().pair_in_a()
    }

    #[test]
    fn integral_brackets() {
        let (a, b) = bracket_pair_in_a(&TangleExpr::integral(0));
        assert!(a.is_zero());
        assert_eq!(b, LaurentInt::one());

        let (a, b) = bracket_pair_in_a(&TangleExpr::integral(1));
        assert_eq!(a, lp(&[(1, 1)]));
        assert_eq!(b, lp(&[(-1, 1)]));

        let (a, b) = bracket_pair_in_a(&TangleExpr::integral(2));
        assert_eq!(a, lp(&[(0, 1), (4, -1)]));
        assert_eq!(b, lp(&[(-2, 1)]));
    }

    #[test]
    fn pretzel_like_sum_bracket() {
        let e = TangleExpr::sum(
            TangleExpr::reflect(TangleExpr::integral(2)),
            TangleExpr::reflect(TangleExpr::integral(2)),
        );
        assert_eq!(e.loops(), 1);
        let (a, b) = bracket_pair_in_a(&e);
        assert_eq!(a, lp(&[(6, -1), (2, 1), (-2, -2)]));
        assert_eq!(b, lp(&[(0, 1), (-4, -2), (-8, 1)]));
    }

    #[test]
    fn bracket_rejects_loops() {
        let e = TangleExpr::sum(
            TangleExpr::reflect(TangleExpr::integral(0)),
            TangleExpr::reflect(TangleExpr::integral(0)),
        );
        assert_eq!(e.bracket(), Err(TangleError::InternalLoops(1)));
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(TangleExpr::integral(0).pairing(), EndpointPairing::ZeroType);
        let inf = TangleExpr::reflect(TangleExpr::integral(0));
        assert_eq!(inf.pairing(), EndpointPairing::InftyType);
        let e = TangleExpr::sum(inf.clone(), inf.clone());
        assert_eq!(e.pairing(), EndpointPairing::InftyType);
        assert_eq!(e.loops(), 1);
        // bracket check: <inf + inf> = eps * <inf> = (eps, 0)
        let (a, b) = bracket_pair_in_a(&e);
        assert_eq!(a, lp(&[(2, -1), (-2, -1)]));
        assert!(b.is_zero());
    }

    #[test]
    fn reflection_involution_and_mirror_involution() {
        let exprs = [
            TangleExpr::integral(3),
            rational_tangle(RationalSpec::new(5, 2)).unwrap(),
            TangleExpr::sum(
                TangleExpr::integral(1),
                TangleExpr::reflect(TangleExpr::integral(2)),
            ),
        ];
        for e in &exprs {
            let rr = TangleExpr::reflect(TangleExpr::reflect(e.clone()));
            assert_eq!(rr.bracket_raw(), e.bracket_raw());
            let mm = TangleExpr::mirror(TangleExpr::mirror(e.clone()));
            assert_eq!(mm.bracket_raw(), e.bracket_raw());
        }
    }

    #[test]
    fn mutation_invariance() {
        let e = TangleExpr::sum(
            rational_tangle(RationalSpec::new(5, 2)).unwrap(),
            TangleExpr::reflect(TangleExpr::integral(3)),
        );
        for f in [TangleExpr::mutate_x, TangleExpr::mutate_y, TangleExpr::mutate_z] {
            assert_eq!(f(e.clone()).bracket_raw(), e.bracket_raw());
        }
    }

    #[test]
    fn sum_with_zero_is_identity() {
        let e = rational_tangle(RationalSpec::new(7, 3)).unwrap();
        let s = TangleExpr::sum(e.clone(), TangleExpr::integral(0));
        assert_eq!(s.bracket_raw(), e.bracket_raw());
        let s2 = TangleExpr::sum(TangleExpr::integral(0), e.clone());
        assert_eq!(s2.bracket_raw(), e.bracket_raw());
    }

    #[test]
    fn rational_tangle_examples() {
        let t3 = rational_tangle(RationalSpec::new(3, 1)).unwrap();
        assert_eq!(t3, TangleExpr::integral(3));
        assert_eq!(t3.crossing_count(), 3);

        let t52 = rational_tangle(RationalSpec::new(5, 2)).unwrap();
        assert_eq!(
            t52,
            TangleExpr::sum(
                TangleExpr::integral(2),
                TangleExpr::reflect(TangleExpr::integral(2))
            )
        );
        assert_eq!(t52.crossing_count(), 4);

        let t43 = rational_tangle(RationalSpec::new(4, 3)).unwrap();
        assert_eq!(t43.crossing_count(), 4);

        assert!(rational_tangle(RationalSpec::new(1, 2)).is_err());
        assert!(rational_tangle(RationalSpec::new(1, 1)).is_err());
    }

    #[test]
    fn fraction_examples() {
        assert_eq!(
            TangleExpr::integral(3).fraction().unwrap(),
            RationalSpec::new(3, 1)
        );
        assert_eq!(
            TangleExpr::reflect(TangleExpr::integral(3)).fraction().unwrap(),
            RationalSpec::new(1, 3)
        );
        let t52 = rational_tangle(RationalSpec::new(5, 2)).unwrap();
        assert_eq!(t52.fraction().unwrap(), RationalSpec::new(5, 2));
        // non-rational fragment
        let bad = TangleExpr::sum(
            TangleExpr::reflect(TangleExpr::integral(2)),
            TangleExpr::reflect(TangleExpr::integral(2)),
        );
        assert_eq!(bad.fraction(), Err(TangleError::NotRational));
    }

    #[test]
    fn fraction_round_trip() {
        for p in 2..=40i64 {
            for q in 1..p {
                if gcd(p as u64, q as u64) != 1 || p + q > 40 {
                    continue;
                }
                let spec = RationalSpec::new(p, q);
                let e = rational_tangle(spec).unwrap();
                assert_eq!(e.fraction().unwrap(), spec, "round trip {p}/{q}");
                let cf = continued_fraction(p, q);
                assert_eq!(e.crossing_count() as i64, cf.iter().sum::<i64>());
            }
        }
    }

    #[test]
    fn closure_examples() {
        // N(1) = -A^{-3}
        let n1 = closure_bracket(&TangleExpr::integral(1).bracket().unwrap(), ClosureKind::Numerator);
        assert_eq!(n1.in_a(), lp(&[(-3, -1)]));
        assert!(n1.is_monomial());

        // N(3) = A^7 - A^3 - A^{-5}
        let n3 = closure_bracket(&TangleExpr::integral(3).bracket().unwrap(), ClosureKind::Numerator);
        assert_eq!(n3.in_a(), lp(&[(7, 1), (3, -1), (-5, -1)]));
        assert!(!n3.is_monomial());

        // D(infinity) per the closure formula: a*eps + b with (a,b) = (1,0).
        let dinf = closure_bracket(
            &TangleExpr::reflect(TangleExpr::integral(0)).bracket().unwrap(),
            ClosureKind::Denominator,
        );
        assert_eq!(dinf.in_a(), lp(&[(2, -1), (-2, -1)]));
        // and N(infinity) is the single loop with value 1
        let ninf = closure_bracket(
            &TangleExpr::reflect(TangleExpr::integral(0)).bracket().unwrap(),
            ClosureKind::Numerator,
        );
        assert_eq!(ninf, ClosedBracket::one());
        // D(0) is likewise a single loop
        let d0 = closure_bracket(&TangleExpr::integral(0).bracket().unwrap(), ClosureKind::Denominator);
        assert_eq!(d0, ClosedBracket::one());
    }

    #[test]
    fn grading_invariant() {
        // every bracket: a-exponents in A congruent mod 4, b likewise, gap 2
        let exprs = [
            TangleExpr::integral(4),
            rational_tangle(RationalSpec::new(7, 3)).unwrap(),
            TangleExpr::sum(
                rational_tangle(RationalSpec::new(3, 2)).unwrap(),
                rational_tangle(RationalSpec::new(5, 3)).unwrap(),
            ),
        ];
        for e in &exprs {
            let g = e.bracket_raw();
            let (a, b) = g.pair_in_a();
            let ares: Vec<i64> = a.iter().map(|(e, _)| e.rem_euclid(4)).collect();
            let bres: Vec<i64> = b.iter().map(|(e, _)| e.rem_euclid(4)).collect();
            assert!(ares.windows(2).all(|w| w[0] == w[1]), "a grading {ares:?}");
            assert!(bres.windows(2).all(|w| w[0] == w[1]), "b grading {bres:?}");
            if let (Some(ar), Some(br)) = (ares.first(), bres.first()) {
                assert_eq!((ar - br).rem_euclid(4), 2);
            }
        }
    }

    #[test]
    fn rotation_swaps_pair() {
        let e = rational_tangle(RationalSpec::new(5, 2)).unwrap();
        let g = e.bracket_raw();
        let r = rotate_bracket(&g);
        let (a, b) = g.pair_in_a();
        let (ra, rb) = r.pair_in_a();
        assert_eq!(ra, b);
        assert_eq!(rb, a);
    }

    #[test]
    fn monomial_detection() {
        let m = ClosedBracket::normalize(3, lp(&[(2, -1)]));
        assert_eq!(m.monomial_exp(), Some((-5, -1)));
        let nm = ClosedBracket::normalize(0, lp(&[(0, 2)]));
        assert_eq!(nm.monomial_exp(), None);
        assert_eq!(
            ClosedBracket::normalize(0, lp(&[(0, 1), (1, 1)])).monomial_exp(),
            None
        );
        
    }

    #[test]
    fn text_round_trip() {
        let e = TangleExpr::sum(
            TangleExpr::reflect(TangleExpr::integral(2)),
            TangleExpr::mirror(TangleExpr::integral(-3)),
        );
        let s = e.to_string();
        assert_eq!(s, "sum(refl(int(2)),mir(int(-3)))");
        let back: TangleExpr = s.parse().unwrap();
        assert_eq!(back, e);
    }
}
