//! Exact arithmetic in `A = R0[x1, ..., xk]` where `R0` is the integers
//! (arbitrary precision) or the integers mod `m`.
//!
//! Elements are stored sparsely as a map from exponent vectors to nonzero
//! coefficients. The map is a `BTreeMap` keyed by the lexicographic order on
//! exponent vectors, so equality of canonical forms is structural equality
//! and printing is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The coefficient domain: `Z` or `Z/m` with `m >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoeffSpec {
    Integers,
    Mod(u64),
}

impl CoeffSpec {
    /// Builds a modular coefficient domain, rejecting moduli below 2.
    pub fn modular(m: u64) -> Result<Self, RingError> {
        if m < 2 {
            return Err(RingError::InvalidModulus(m));
        }
        Ok(CoeffSpec::Mod(m))
    }

    /// Reduces a raw coefficient into canonical range: identity over `Z`,
    /// the representative in `[0, m)` over `Z/m`.
    pub fn canon(&self, c: BigInt) -> BigInt {
        match self {
            CoeffSpec::Integers => c,
            CoeffSpec::Mod(m) => {
                debug_assert!(*m >= 2, "modulus below 2");
                let m = BigInt::from(*m);
                let r = c % &m;
                if r.is_negative() {
                    r + m
                } else {
                    r
                }
            }
        }
    }
}

impl fmt::Display for CoeffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffSpec::Integers => write!(f, "integers"),
            CoeffSpec::Mod(m) => write!(f, "integers mod {m}"),
        }
    }
}

/// Ambient ring context: coefficient domain plus variable count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingCtx {
    pub coeff: CoeffSpec,
    pub vars: usize,
}

impl RingCtx {
    pub fn new(coeff: CoeffSpec, vars: usize) -> Self {
        RingCtx { coeff, vars }
    }

    /// `Z[x1..xk]`.
    pub fn integer(vars: usize) -> Self {
        RingCtx::new(CoeffSpec::Integers, vars)
    }

    fn check(&self, other: &RingCtx) -> Result<(), RingError> {
        if self != other {
            return Err(RingError::Incompatible {
                left: *self,
                right: *other,
            });
        }
        Ok(())
    }
}

impl fmt::Display for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {} variables", self.coeff, self.vars)
    }
}

/// An exponent vector. Length always equals the ambient variable count;
/// ordering is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn unit(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise quotient, `None` if any exponent of `other` exceeds ours.
    fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

/// Errors from ring operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("incompatible rings: {left} vs {right}")]
    Incompatible { left: RingCtx, right: RingCtx },
    #[error("variable index {index} out of range for {vars} variables")]
    VarOutOfRange { index: usize, vars: usize },
    #[error("modulus {0} must be at least 2")]
    InvalidModulus(u64),
}

/// A sparse multivariate polynomial in canonical form: no stored coefficient
/// is zero, every key has length `ctx.vars`, and modular coefficients lie in
/// `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RingElem {
    ctx: RingCtx,
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElem {
    pub fn zero(ctx: RingCtx) -> Self {
        RingElem {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: RingCtx) -> Self {
        Self::constant(ctx, BigInt::one())
    }

    pub fn constant(ctx: RingCtx, c: impl Into<BigInt>) -> Self {
        Self::from_monomial(ctx, Monomial::unit(ctx.vars), c.into())
    }

    /// The variable `x_{index+1}` (indices are zero-based in the API and
    /// one-based in the textual grammar).
    pub fn variable(ctx: RingCtx, index: usize) -> Result<Self, RingError> {
        if index >= ctx.vars {
            return Err(RingError::VarOutOfRange {
                index,
                vars: ctx.vars,
            });
        }
        let mut exps = vec![0; ctx.vars];
        exps[index] = 1;
        Ok(Self::from_monomial(ctx, Monomial::new(exps), BigInt::one()))
    }

    /// A single term `c * mono`. The coefficient is reduced to canonical
    /// form and dropped if zero.
    pub fn from_monomial(ctx: RingCtx, mono: Monomial, c: BigInt) -> Self {
        assert_eq!(mono.exponents().len(), ctx.vars, "monomial length mismatch");
        let c = ctx.coeff.canon(c);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        RingElem { ctx, terms }
    }

    pub fn from_terms(ctx: RingCtx, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut out = Self::zero(ctx);
        for (mono, c) in terms {
            assert_eq!(mono.exponents().len(), ctx.vars, "monomial length mismatch");
            out.accumulate(mono, c);
        }
        out
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    /// The constant value if the element has no variable part.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() > 1 {
            return None;
        }
        let (mono, c) = self.terms.iter().next().unwrap();
        mono.is_unit().then(|| c.clone())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    fn accumulate(&mut self, mono: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                let c = self.ctx.coeff.canon(c);
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.ctx.coeff.canon(o.get() + c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ctx.check(&other.ctx)?;
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.accumulate(mono.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> RingElem {
        let mut out = Self::zero(self.ctx);
        for (mono, c) in &self.terms {
            out.accumulate(mono.clone(), -c);
        }
        out
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ctx.check(&other.ctx)?;
        let mut out = Self::zero(self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.accumulate(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> RingElem {
        let mut acc = Self::one(self.ctx);
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same ring");
        }
        acc
    }

    /// Substitutes the assigned variables and leaves the rest symbolic.
    /// Assigned values must live in the same ambient ring.
    pub fn subst(&self, assignment: &BTreeMap<usize, RingElem>) -> Result<RingElem, RingError> {
        for (&idx, value) in assignment {
            if idx >= self.ctx.vars {
                return Err(RingError::VarOutOfRange {
                    index: idx,
                    vars: self.ctx.vars,
                });
            }
            self.ctx.check(&value.ctx)?;
        }
        let mut out = Self::zero(self.ctx);
        for (mono, c) in &self.terms {
            let mut residual = vec![0u32; self.ctx.vars];
            let mut factor = Self::constant(self.ctx, c.clone());
            for (idx, &e) in mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match assignment.get(&idx) {
                    Some(value) => factor = factor.try_mul(&value.pow(e))?,
                    None => residual[idx] = e,
                }
            }
            let residual = Self::from_monomial(self.ctx, Monomial::new(residual), BigInt::one());
            out = out.try_add(&factor.try_mul(&residual)?)?;
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to `x_{var+1}`.
    pub fn derivative(&self, var: usize) -> Result<RingElem, RingError> {
        if var >= self.ctx.vars {
            return Err(RingError::VarOutOfRange {
                index: var,
                vars: self.ctx.vars,
            });
        }
        let mut out = Self::zero(self.ctx);
        for (mono, c) in &self.terms {
            let e = mono.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = mono.exponents().to_vec();
            exps[var] = e - 1;
            out.accumulate(Monomial::new(exps), c * BigInt::from(e));
        }
        Ok(out)
    }

    /// Exact division, `None` when `divisor` does not divide `self`.
    ///
    /// Implemented by repeated cancellation of lexicographic leading terms,
    /// which decides divisibility over integer coefficients (the only place
    /// this is used is the fraction-free determinant, whose intermediate
    /// divisions are exact over an integral domain).
    pub(crate) fn exact_div(&self, divisor: &RingElem) -> Option<RingElem> {
        assert_eq!(self.ctx, divisor.ctx, "exact_div across rings");
        assert!(
            matches!(self.ctx.coeff, CoeffSpec::Integers),
            "exact_div requires integer coefficients"
        );
        if divisor.is_zero() {
            return None;
        }
        let (dm, dc) = divisor.terms.iter().next_back().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.ctx);
        while !rem.is_zero() {
            let (rm, rc) = rem.terms.iter().next_back().unwrap();
            let qm = rm.try_div(dm)?;
            if (rc % dc) != BigInt::zero() {
                return None;
            }
            let qc = rc / dc;
            let qterm = Self::from_monomial(self.ctx, qm, qc);
            rem = rem.try_sub(&qterm.try_mul(divisor).unwrap()).unwrap();
            quot = quot.try_add(&qterm).unwrap();
        }
        Some(quot)
    }
}

impl fmt::Display for RingElem {
    /// Canonical form: terms in descending lexicographic order, explicit `*`
    /// between coefficient and variables, `^` for exponents above one.
    /// Parses back to the same element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (mono, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if mono.is_unit() {
                write!(f, "{abs}")?;
            } else {
                let mut lead = true;
                if !abs.is_one() {
                    write!(f, "{abs}")?;
                    lead = false;
                }
                for (idx, &e) in mono.exponents().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !lead {
                        write!(f, "*")?;
                    }
                    lead = false;
                    write!(f, "x{}", idx + 1)?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

macro_rules! ring_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.$checked(rhs).expect("incompatible rings")
            }
        }
    };
}

ring_binop!(Add, add, try_add);
ring_binop!(Sub, sub, try_sub);
ring_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

/// A syntax error, with the byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(input: &str, offset: usize, message: impl Into<String>) -> Self {
        let mut line = 1;
        let mut column = 1;
        for (i, ch) in input.char_indices() {
            if i >= offset {
                break;
            }
            if ch == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        ParseError {
            offset,
            line,
            column,
            message: message.into(),
        }
    }

    /// Shifts positions by `base` bytes into an enclosing input.
    pub(crate) fn shift(self, input: &str, base: usize) -> Self {
        ParseError::new(input, base + self.offset, self.message)
    }
}

/// Parses the ASCII polynomial grammar:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor ('*' factor)*
/// factor := '-' factor | atom ('^' nat)?
/// atom   := nat | var | '(' expr ')'
/// var    := 'x' nat          (1-based index, bounded by the variable count)
/// ```
///
/// `*` is never implicit. Whitespace is permitted between tokens on input
/// and never produced on output.
pub fn parse_poly(text: &str, ctx: RingCtx) -> Result<RingElem, ParseError> {
    let mut p = PolyParser {
        src: text.as_bytes(),
        text,
        pos: 0,
        ctx,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct PolyParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    ctx: RingCtx,
}

impl<'a> PolyParser<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.text, self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingElem, ParseError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                self.skip_ws();
                let t = self.term()?;
                acc = acc.try_add(&t).expect("same ring");
            } else if self.eat(b'-') {
                self.skip_ws();
                let t = self.term()?;
                acc = acc.try_sub(&t).expect("same ring");
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElem, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                let f = self.factor()?;
                acc = acc.try_mul(&f).expect("same ring");
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RingElem, ParseError> {
        if self.eat(b'-') {
            self.skip_ws();
            let f = self.factor()?;
            return Ok(f.neg());
        }
        let atom = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.nat_u32()?;
            return Ok(atom.pow(e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<RingElem, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                let idx = self.nat_usize().map_err(|_| {
                    ParseError::new(self.text, start, "expected variable index after 'x'")
                })?;
                if idx == 0 || idx > self.ctx.vars {
                    return Err(ParseError::new(
                        self.text,
                        start,
                        format!(
                            "unknown variable x{idx}: ring has variables x1..x{}",
                            self.ctx.vars
                        ),
                    ));
                }
                Ok(RingElem::variable(self.ctx, idx - 1).expect("index checked"))
            }
            Some(b) if b.is_ascii_digit() => {
                let n = self.nat_bigint()?;
                Ok(RingElem::constant(self.ctx, n))
            }
            Some(b) => Err(self.err(format!("unexpected character '{}'", b as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn nat_bigint(&mut self) -> Result<BigInt, ParseError> {
        let d = self.digits()?;
        Ok(d.parse::<BigInt>().expect("digits"))
    }

    fn nat_u32(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<u32>()
            .map_err(|_| ParseError::new(self.text, start, "exponent too large"))
    }

    fn nat_usize(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<usize>()
            .map_err(|_| ParseError::new(self.text, start, "index too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zx(vars: usize) -> RingCtx {
        RingCtx::integer(vars)
    }

    fn p(text: &str, ctx: RingCtx) -> RingElem {
        parse_poly(text, ctx).unwrap()
    }

    #[test]
    fn add_inverse_cancels() {
        let ctx = zx(1);
        let x = RingElem::variable(ctx, 0).unwrap();
        assert!(x.try_add(&x.neg()).unwrap().is_zero());
    }

    #[test]
    fn product_of_conjugates() {
        let ctx = zx(1);
        // (x1+1)(x1-1) = x1^2 - 1, expanded by hand
        let a = p("x1+1", ctx);
        let b = p("x1-1", ctx);
        assert_eq!(a.try_mul(&b).unwrap(), p("x1^2-1", ctx));
    }

    #[test]
    fn modular_mul_reduces() {
        let ctx = RingCtx::new(CoeffSpec::modular(5).unwrap(), 0);
        let a = RingElem::constant(ctx, 3);
        let b = RingElem::constant(ctx, 4);
        assert_eq!(a.try_mul(&b).unwrap(), RingElem::constant(ctx, 2));
    }

    #[test]
    fn modular_coefficients_canonical() {
        let ctx = RingCtx::new(CoeffSpec::modular(7).unwrap(), 1);
        let a = p("-x1", ctx);
        assert_eq!(a.to_string(), "6*x1");
        assert_eq!(a, p("6*x1", ctx));
    }

    #[test]
    fn incompatible_rings_rejected() {
        let a = RingElem::one(zx(1));
        let b = RingElem::one(zx(2));
        assert!(matches!(a.try_add(&b), Err(RingError::Incompatible { .. })));
        let c = RingElem::one(RingCtx::new(CoeffSpec::modular(5).unwrap(), 1));
        assert!(a.try_mul(&c).is_err());
    }

    #[test]
    fn subst_examples() {
        let ctx = zx(1);
        let q = p("x1^2+3", ctx);
        let mut assign = BTreeMap::new();
        assign.insert(0, RingElem::zero(ctx));
        assert_eq!(q.subst(&assign).unwrap(), p("3", ctx));

        let ctx2 = zx(2);
        let q = p("x1*x2", ctx2);
        let mut assign = BTreeMap::new();
        assign.insert(0, p("x2", ctx2));
        assert_eq!(q.subst(&assign).unwrap(), p("x2^2", ctx2));

        let q = p("x1+x2", ctx2);
        let mut assign = BTreeMap::new();
        assign.insert(0, p("2", ctx2));
        assign.insert(1, p("-2", ctx2));
        assert!(q.subst(&assign).unwrap().is_zero());
    }

    #[test]
    fn subst_out_of_range() {
        let ctx = zx(1);
        let q = p("x1", ctx);
        let mut assign = BTreeMap::new();
        assign.insert(3, RingElem::zero(ctx));
        assert!(matches!(
            q.subst(&assign),
            Err(RingError::VarOutOfRange { index: 3, vars: 1 })
        ));
    }

    #[test]
    fn derivative_examples() {
        let ctx = zx(1);
        assert_eq!(p("x1^2", ctx).derivative(0).unwrap(), p("2*x1", ctx));
        assert!(p("7", ctx).derivative(0).unwrap().is_zero());
        let ctx2 = zx(2);
        // d/dx1 (x1*x2 + x1^3) = x2 + 3*x1^2, termwise power rule
        assert_eq!(
            p("x1*x2+x1^3", ctx2).derivative(0).unwrap(),
            p("x2+3*x1^2", ctx2)
        );
        assert!(p("x1", ctx).derivative(5).is_err());
    }

    #[test]
    fn parse_examples() {
        let ctx = zx(1);
        let q = p("x1^2+3", ctx);
        assert_eq!(q.term_count(), 2);
        assert_eq!(q.to_string(), "x1^2+3");
        assert!(p("0", ctx).is_zero());

        let err = parse_poly("x3", zx(2)).unwrap_err();
        assert!(err.message.contains("unknown variable"));
        assert_eq!(err.column, 1);

        let err = parse_poly("x1+", ctx).unwrap_err();
        assert_eq!(err.offset, 3);

        // explicit '*' is required
        assert!(parse_poly("2x1", ctx).is_err());
        assert!(parse_poly("(x1+1)^2", ctx).is_ok());
        assert_eq!(p("x1^0", ctx), p("1", ctx));
        assert!(parse_poly("x1^-2", ctx).is_err());
        assert!(parse_poly("x1^2^3", ctx).is_err());
    }

    #[test]
    fn display_round_trip() {
        let ctx = zx(3);
        let cases = [
            "0",
            "1",
            "-1",
            "x1",
            "-x2",
            "2*x1*x3",
            "x1^2-2*x1+3",
            "x1^2*x2-x3+5",
            "-4*x1^3+x2^2",
        ];
        for c in cases {
            let e = p(c, ctx);
            assert_eq!(e.to_string(), c, "canonical print of {c}");
            assert_eq!(p(&e.to_string(), ctx), e);
        }
    }

    #[test]
    fn exact_division() {
        let ctx = zx(2);
        let a = p("x1^2-x2^2", ctx);
        let b = p("x1-x2", ctx);
        assert_eq!(a.exact_div(&b).unwrap(), p("x1+x2", ctx));
        assert!(a.exact_div(&p("x1+1", ctx)).is_none());
        assert!(p("3*x1", ctx).exact_div(&p("2", ctx)).is_none());
        assert!(a.exact_div(&RingElem::zero(ctx)).is_none());
    }

    #[test]
    fn modulus_validation() {
        assert!(CoeffSpec::modular(1).is_err());
        assert!(CoeffSpec::modular(2).is_ok());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_ctx() -> impl Strategy<Value = RingCtx> {
            (
                prop_oneof![
                    Just(CoeffSpec::Integers),
                    (2u64..30).prop_map(CoeffSpec::Mod)
                ],
                0usize..3,
            )
                .prop_map(|(coeff, vars)| RingCtx::new(coeff, vars))
        }

        fn arb_poly(ctx: RingCtx) -> impl Strategy<Value = RingElem> {
            let term = (proptest::collection::vec(0u32..4, ctx.vars), -20i64..20);
            proptest::collection::vec(term, 0..6).prop_map(move |ts| {
                RingElem::from_terms(
                    ctx,
                    ts.into_iter()
                        .map(|(exps, c)| (Monomial::new(exps), BigInt::from(c))),
                )
            })
        }

        fn arb_triple() -> impl Strategy<Value = (RingElem, RingElem, RingElem)> {
            arb_ctx().prop_flat_map(|ctx| (arb_poly(ctx), arb_poly(ctx), arb_poly(ctx)))
        }

        proptest! {
            #[test]
            fn ring_axioms((a, b, c) in arb_triple()) {
                let ab = a.try_add(&b).unwrap();
                prop_assert_eq!(&ab, &b.try_add(&a).unwrap());
                prop_assert_eq!(
                    ab.try_add(&c).unwrap(),
                    a.try_add(&b.try_add(&c).unwrap()).unwrap()
                );
                let ab = a.try_mul(&b).unwrap();
                prop_assert_eq!(&ab, &b.try_mul(&a).unwrap());
                prop_assert_eq!(
                    ab.try_mul(&c).unwrap(),
                    a.try_mul(&b.try_mul(&c).unwrap()).unwrap()
                );
                prop_assert_eq!(
                    a.try_mul(&b.try_add(&c).unwrap()).unwrap(),
                    a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap()
                );
                prop_assert!(a.try_add(&a.neg()).unwrap().is_zero());
            }

            #[test]
            fn subst_is_homomorphism((a, b, v) in arb_triple()) {
                if a.ctx().vars == 0 {
                    return Ok(());
                }
                let mut assign = BTreeMap::new();
                assign.insert(0usize, v);
                let lhs = a.try_add(&b).unwrap().subst(&assign).unwrap();
                let rhs = a.subst(&assign).unwrap().try_add(&b.subst(&assign).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
                let lhs = a.try_mul(&b).unwrap().subst(&assign).unwrap();
                let rhs = a.subst(&assign).unwrap().try_mul(&b.subst(&assign).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn leibniz_rule((a, b, _) in arb_triple()) {
                if a.ctx().vars == 0 {
                    return Ok(());
                }
                let lhs = a.try_mul(&b).unwrap().derivative(0).unwrap();
                let rhs = a.derivative(0).unwrap().try_mul(&b).unwrap()
                    .try_add(&a.try_mul(&b.derivative(0).unwrap()).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn print_parse_round_trip((a, _, _) in arb_triple()) {
                let text = a.to_string();
                prop_assert_eq!(parse_poly(&text, a.ctx()).unwrap(), a);
            }

            #[test]
            fn exact_div_inverts_mul((a, b, _) in arb_triple()) {
                if a.ctx().coeff != CoeffSpec::Integers || b.is_zero() {
                    return Ok(());
                }
                let prod = a.try_mul(&b).unwrap();
                prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
            }
        }
    }
}
