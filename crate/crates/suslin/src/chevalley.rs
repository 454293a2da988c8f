//! Type-A elementary root unipotents `e_{i,j}(a) = I + a E_{ij}`, words in
//! them, the commutator relation `[e_{i,j}(a1), e_{j,k}(a2)] = e_{i,k}(a1 a2)`,
//! and rewriting of arbitrary generators over the standard finite generating
//! set `{e_{i,j}(±1), e_{i,j}(±x_t)}`.
//!
//! Indices are 1-based throughout this module, matching the usual notation
//! and the textual grammar `E(i,j;poly)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::matrix::{plus_unit, MatrixError, SqMatrix};
use crate::ring::{parse_poly, CoeffSpec, Monomial, ParseError, RingCtx, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("row and column must differ, got ({0},{0})")]
    DiagonalIndex(usize),
    #[error("generator index ({row},{col}) out of range for dimension {n}")]
    IndexOutOfRange { row: usize, col: usize, n: usize },
    #[error("dimension {n} too small: operation needs n >= {needed}")]
    DimensionTooSmall { n: usize, needed: usize },
    #[error("operation requires integer coefficients, got {0}")]
    IntegerCoefficientsRequired(CoeffSpec),
    #[error("trial count must be at least 1")]
    TrialsRequired,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// One elementary root unipotent label `e_{row,col}(param)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemGen {
    row: usize,
    col: usize,
    param: RingElem,
}

impl ElemGen {
    pub fn new(row: usize, col: usize, param: RingElem) -> Result<Self, GroupError> {
        if row == 0 || col == 0 {
            return Err(GroupError::IndexOutOfRange { row, col, n: 0 });
        }
        if row == col {
            return Err(GroupError::DiagonalIndex(row));
        }
        Ok(ElemGen { row, col, param })
    }

    pub fn row(&self) -> usize {
        self.row
    }

    pub fn col(&self) -> usize {
        self.col
    }

    pub fn param(&self) -> &RingElem {
        &self.param
    }

    pub fn inverse(&self) -> ElemGen {
        ElemGen {
            row: self.row,
            col: self.col,
            param: self.param.neg(),
        }
    }

    fn check_dim(&self, n: usize) -> Result<(), GroupError> {
        if self.row > n || self.col > n {
            return Err(GroupError::IndexOutOfRange {
                row: self.row,
                col: self.col,
                n,
            });
        }
        Ok(())
    }

    /// `I_n + param * E_{row,col}`.
    pub fn matrix(&self, n: usize) -> Result<SqMatrix, GroupError> {
        self.check_dim(n)?;
        Ok(plus_unit(
            self.param.ctx(),
            n,
            self.row - 1,
            self.col - 1,
            &self.param,
        )?)
    }
}

impl std::fmt::Display for ElemGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "E({},{};{})", self.row, self.col, self.param)
    }
}

/// A finite sequence of elementary generators, i.e. an element of `E(n, A)`
/// presented as a product (left to right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    ctx: RingCtx,
    n: usize,
    gens: Vec<ElemGen>,
}

impl Word {
    pub fn empty(ctx: RingCtx, n: usize) -> Result<Self, GroupError> {
        if !(2..=crate::matrix::MAX_DIM).contains(&n) {
            return Err(MatrixError::Dimension(n).into());
        }
        Ok(Word {
            ctx,
            n,
            gens: Vec::new(),
        })
    }

    pub fn from_gens(
        ctx: RingCtx,
        n: usize,
        gens: impl IntoIterator<Item = ElemGen>,
    ) -> Result<Self, GroupError> {
        let mut w = Word::empty(ctx, n)?;
        for g in gens {
            w.push(g)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, g: ElemGen) -> Result<(), GroupError> {
        g.check_dim(self.n)?;
        if g.param.ctx() != self.ctx {
            return Err(RingError::Incompatible {
                left: self.ctx,
                right: g.param.ctx(),
            }
            .into());
        }
        self.gens.push(g);
        Ok(())
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[ElemGen] {
        &self.gens
    }

    pub fn concat(&self, other: &Word) -> Result<Word, GroupError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(self.n, other.n).into());
        }
        if self.ctx != other.ctx {
            return Err(RingError::Incompatible {
                left: self.ctx,
                right: other.ctx,
            }
            .into());
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Word {
            ctx: self.ctx,
            n: self.n,
            gens,
        })
    }

    /// Reversed sequence with negated parameters; evaluates to the inverse.
    pub fn inverse(&self) -> Word {
        Word {
            ctx: self.ctx,
            n: self.n,
            gens: self.gens.iter().rev().map(ElemGen::inverse).collect(),
        }
    }

    /// Left-to-right product of the generator matrices. Each generator is a
    /// single column operation on the accumulated product.
    pub fn eval(&self) -> SqMatrix {
        let mut m = SqMatrix::identity(self.ctx, self.n).expect("dimension validated");
        for g in &self.gens {
            m.col_axpy(g.col - 1, g.row - 1, &g.param);
        }
        m
    }

    /// Merges adjacent letters with equal position by parameter addition and
    /// drops zero-parameter letters. Never applied implicitly: witness
    /// lengths stay auditable.
    pub fn normalized(&self) -> Word {
        let mut out: Vec<ElemGen> = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            if let Some(top) = out.last_mut() {
                if top.row == g.row && top.col == g.col {
                    top.param = &top.param + &g.param;
                    if top.param.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !g.param.is_zero() {
                out.push(g.clone());
            }
        }
        Word {
            ctx: self.ctx,
            n: self.n,
            gens: out,
        }
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let toks: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// Outcome of the elementary commutator `[g1, g2] = g1 g2 g1^-1 g2^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommutatorOutcome {
    /// The commutator reduces to the given word (empty when the pair
    /// commutes, a single letter in the head-to-tail cases).
    Word(Word),
    /// Pairs like `e_{ij}, e_{ji}`: no elementary formula exists. This is
    /// not an input error.
    NoRelation,
}

/// The type-A Chevalley commutator: for `g1 = e_{i,j}(a1)`, `g2 = e_{k,l}(a2)`
/// with `n >= 3`,
///
/// * `j = k`, `i != l`:  `[g1, g2] = e_{i,l}(a1 a2)`
/// * `j != k`, `i = l`:  `[g1, g2] = e_{k,j}(-a2 a1)`
/// * `j != k`, `i != l`: the pair commutes (empty word)
/// * `j = k`, `i = l`:   no elementary relation
pub fn chevalley_commutator(
    g1: &ElemGen,
    g2: &ElemGen,
    n: usize,
) -> Result<CommutatorOutcome, GroupError> {
    if n < 3 {
        return Err(GroupError::DimensionTooSmall { n, needed: 3 });
    }
    g1.check_dim(n)?;
    g2.check_dim(n)?;
    let ctx = g1.param.ctx();
    if g2.param.ctx() != ctx {
        return Err(RingError::Incompatible {
            left: ctx,
            right: g2.param.ctx(),
        }
        .into());
    }
    let (i, j) = (g1.row, g1.col);
    let (k, l) = (g2.row, g2.col);
    let outcome = match (j == k, i == l) {
        (true, false) => {
            let g = ElemGen::new(i, l, &g1.param * &g2.param)?;
            CommutatorOutcome::Word(Word::from_gens(ctx, n, [g])?)
        }
        (false, true) => {
            let g = ElemGen::new(k, j, (&g2.param * &g1.param).neg())?;
            CommutatorOutcome::Word(Word::from_gens(ctx, n, [g])?)
        }
        (false, false) => CommutatorOutcome::Word(Word::empty(ctx, n)?),
        (true, true) => CommutatorOutcome::NoRelation,
    };
    Ok(outcome)
}

/// The standard finite generating set
/// `S = {e_{i,j}(c) : i != j <= n, c in {1, -1, x_1, -x_1, ..., x_k, -x_k}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    ctx: RingCtx,
    n: usize,
}

impl GenSet {
    pub fn new(ctx: RingCtx, n: usize) -> Result<Self, GroupError> {
        if n < 2 {
            return Err(MatrixError::Dimension(n).into());
        }
        Ok(GenSet { ctx, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `n(n-1) * 2(k+1)` elements.
    pub fn len(&self) -> usize {
        self.n * (self.n - 1) * 2 * (self.ctx.vars + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn params(&self) -> Vec<RingElem> {
        let one = RingElem::one(self.ctx);
        let mut ps = vec![one.neg(), one];
        for t in 0..self.ctx.vars {
            let x = RingElem::variable(self.ctx, t).expect("t < vars");
            ps.push(x.neg());
            ps.push(x);
        }
        ps
    }

    pub fn contains(&self, g: &ElemGen) -> bool {
        g.row <= self.n && g.col <= self.n && self.params().contains(&g.param)
    }

    pub fn elements(&self) -> Vec<ElemGen> {
        let mut out = Vec::with_capacity(self.len());
        for i in 1..=self.n {
            for j in 1..=self.n {
                if i == j {
                    continue;
                }
                for p in self.params() {
                    out.push(ElemGen::new(i, j, p).expect("i != j"));
                }
            }
        }
        out
    }
}

/// Smallest index outside `{i, j}`, the deterministic spare-index rule.
fn spare_index(i: usize, j: usize) -> usize {
    (1..).find(|p| *p != i && *p != j).unwrap()
}

/// Rewrites `e_{i,j}(a)` over integer-coefficient `A = Z[x1..xk]` as a word
/// in the finite set `S`, for `n >= 3`.
///
/// The parameter is split into terms (one-parameter subgroups are additive).
/// A term `c * x_{t1} ... x_{td}` is realized by peeling one variable at a
/// time through the commutator relation with the spare index
/// `p = min({1..} \ {i,j})`:
/// `e_{i,j}(m1 m2) = e_{i,p}(m1) e_{p,j}(m2) e_{i,p}(-m1) e_{p,j}(-m2)`.
/// Integer coefficients with `|c| <= 16` become `|c|` repetitions of the
/// sign-adjusted monomial word; larger ones are split along the binary
/// expansion of `|c|`, each power of two built by the same commutator with
/// the exponent halved, down to repetition at `2^4`.
pub fn rewrite_over_finite_genset(g: &ElemGen, n: usize) -> Result<Word, GroupError> {
    if n < 3 {
        return Err(GroupError::DimensionTooSmall { n, needed: 3 });
    }
    g.check_dim(n)?;
    let ctx = g.param.ctx();
    if ctx.coeff != CoeffSpec::Integers {
        return Err(GroupError::IntegerCoefficientsRequired(ctx.coeff));
    }
    let mut letters = Vec::new();
    for (mono, c) in g.param.terms() {
        term_letters(&mut letters, ctx, g.row, g.col, c, mono);
    }
    Word::from_gens(ctx, n, letters)
}

fn term_letters(
    out: &mut Vec<ElemGen>,
    ctx: RingCtx,
    i: usize,
    j: usize,
    c: &BigInt,
    mono: &Monomial,
) {
    if c.is_zero() {
        return;
    }
    let negative = c.is_negative();
    let abs = c.abs();
    if abs <= BigInt::from(16) {
        let reps: u32 = abs.try_into().expect("<= 16");
        for _ in 0..reps {
            mono_letters(out, ctx, i, j, negative, mono);
        }
        return;
    }
    let (_, digits) = abs.to_radix_le(2);
    for (t, bit) in digits.iter().enumerate() {
        if *bit == 1 {
            pow2_letters(out, ctx, i, j, t as u32, negative, mono);
        }
    }
}

/// Letters for `e_{i,j}(sign * 2^t * mono)`.
fn pow2_letters(
    out: &mut Vec<ElemGen>,
    ctx: RingCtx,
    i: usize,
    j: usize,
    t: u32,
    negative: bool,
    mono: &Monomial,
) {
    if t <= 4 {
        for _ in 0..(1u32 << t) {
            mono_letters(out, ctx, i, j, negative, mono);
        }
        return;
    }
    let a = t.div_ceil(2);
    let b = t - a;
    let p = spare_index(i, j);
    let mut left = Vec::new();
    pow2_letters(&mut left, ctx, i, p, a, false, &Monomial::unit(ctx.vars));
    let mut right = Vec::new();
    pow2_letters(&mut right, ctx, p, j, b, negative, mono);
    commutator_letters(out, left, right);
}

/// Letters for `e_{i,j}(sign * mono)`.
fn mono_letters(
    out: &mut Vec<ElemGen>,
    ctx: RingCtx,
    i: usize,
    j: usize,
    negative: bool,
    mono: &Monomial,
) {
    let signed = |e: RingElem| if negative { e.neg() } else { e };
    match mono.exponents().iter().position(|&e| e > 0) {
        None => {
            let p = signed(RingElem::one(ctx));
            out.push(ElemGen::new(i, j, p).expect("i != j"));
        }
        Some(t) if mono.degree() == 1 => {
            let p = signed(RingElem::variable(ctx, t).expect("t < vars"));
            out.push(ElemGen::new(i, j, p).expect("i != j"));
        }
        Some(t) => {
            let mut rest = mono.exponents().to_vec();
            rest[t] -= 1;
            let p = spare_index(i, j);
            let left = vec![
                ElemGen::new(i, p, RingElem::variable(ctx, t).expect("t < vars")).expect("i != p"),
            ];
            let mut right = Vec::new();
            mono_letters(&mut right, ctx, p, j, negative, &Monomial::new(rest));
            commutator_letters(out, left, right);
        }
    }
}

/// Emits `u v u^-1 v^-1`; when `u`, `v` evaluate to `e_{i,p}(m1)`,
/// `e_{p,j}(m2)`, the result evaluates to `e_{i,j}(m1 m2)`.
fn commutator_letters(out: &mut Vec<ElemGen>, u: Vec<ElemGen>, v: Vec<ElemGen>) {
    out.extend(u.iter().cloned());
    out.extend(v.iter().cloned());
    out.extend(u.iter().rev().map(ElemGen::inverse));
    out.extend(v.iter().rev().map(ElemGen::inverse));
}

/// The distinct ring parameters appearing in a word, in the canonical total
/// order on ring elements. Together with 1 these generate the smallest
/// subring over which the word is defined.
pub fn minimal_subring_generators(w: &Word) -> Vec<RingElem> {
    let mut out: Vec<RingElem> = w.gens().iter().map(|g| g.param.clone()).collect();
    out.sort();
    out.dedup();
    out
}

/// Parses the whitespace-separated word grammar `E(i,j;poly) ...`.
pub fn parse_word(text: &str, ctx: RingCtx, n: usize) -> Result<Word, ParseError> {
    let mut w = Word::empty(ctx, n).map_err(|e| ParseError::new(text, 0, e.to_string()))?;
    for (start, token) in tokens(text) {
        let g = parse_elem_token(text, start, token, ctx)?;
        w.push(g)
            .map_err(|e| ParseError::new(text, start, e.to_string()))?;
    }
    Ok(w)
}

pub(crate) fn tokens(text: &str) -> Vec<(usize, &str)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos > start {
            out.push((start, &text[start..pos]));
        }
    }
    out
}

/// Parses one `E(i,j;poly)` token located at byte `start` of `full`.
pub(crate) fn parse_elem_token(
    full: &str,
    start: usize,
    token: &str,
    ctx: RingCtx,
) -> Result<ElemGen, ParseError> {
    let body = token
        .strip_prefix("E(")
        .ok_or_else(|| ParseError::new(full, start, "expected generator token 'E(i,j;poly)'"))?;
    let body = body
        .strip_suffix(')')
        .ok_or_else(|| ParseError::new(full, start + token.len(), "expected ')'"))?;
    let (indices, poly) = body.split_once(';').ok_or_else(|| {
        ParseError::new(full, start, "expected ';' between indices and parameter")
    })?;
    let (i, j) = indices
        .split_once(',')
        .ok_or_else(|| ParseError::new(full, start + 2, "expected 'i,j' indices"))?;
    let row: usize = i
        .trim()
        .parse()
        .map_err(|_| ParseError::new(full, start + 2, "invalid row index"))?;
    let col: usize = j
        .trim()
        .parse()
        .map_err(|_| ParseError::new(full, start + 2 + i.len() + 1, "invalid column index"))?;
    let poly_base = start + 2 + indices.len() + 1;
    let param = parse_poly(poly, ctx).map_err(|e| e.shift(full, poly_base))?;
    ElemGen::new(row, col, param).map_err(|e| ParseError::new(full, start, e.to_string()))
}
