//! Bounded-length elementary factorizations of conjugated root unipotents.
//!
//! For a word `g` in `E(n, A)` and a generator `e_{i,j}(a)`, the conjugate
//! splits as a rank-one perturbation
//!
//! ```text
//! g e_{i,j}(a) g^-1 = I + v w,    v = i-th column of g,
//!                                 w = a * (j-th row of g^-1),
//! ```
//!
//! with `w v = 0` and `gamma v = 1` for `gamma` the i-th row of `g^-1`.
//! Setting `b_{l,m} = w_l gamma_m - w_m gamma_l` recovers
//! `w = sum_{l<m} b_{l,m} (v_m e_l - v_l e_m)`, and since every row factor
//! kills `v`, the sum of rank-one perturbations telescopes into a product of
//! Mennicke factors
//!
//! ```text
//! I + v w = prod_{l<m} ( I + v b_{l,m} (v_m e_l - v_l e_m)^t ).
//! ```
//!
//! Each Mennicke factor decomposes into at most `2n+4` elementary matrices
//! by a two-stage construction (see [`factor_mennicke`]), so the whole
//! conjugate is a product of at most `(2n+4) * n(n-1)/2 = (n+2)n(n-1)`
//! elementary matrices, independently of `g` and `a`. Witnesses are always
//! re-verified by exact symbolic multiplication; the verifier, not the
//! construction, is the trust anchor.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chevalley::{parse_elem_token, tokens, ElemGen, GroupError, Word};
use crate::matrix::{MatrixError, SqMatrix};
use crate::ring::{parse_poly, CoeffSpec, RingCtx, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("conjugated generator needs i != j, got ({0},{0})")]
    DiagonalIndex(usize),
    #[error("index ({i},{j}) out of range for dimension {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("dimension {n} too small: the construction needs n >= 3")]
    DimensionTooSmall { n: usize },
    #[error("invalid Mennicke pair ({l},{m}) for dimension {n}: need 1 <= l < m <= n")]
    BadPair { l: usize, m: usize, n: usize },
    #[error("factor construction failed to certify its bound: {0}")]
    ConstructionFailure(String),
    #[error("malformed witness document: {0}")]
    WitnessFormat(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The Suslin splitting data of one conjugation `g e_{i,j}(a) g^-1`.
///
/// Invariants (exact, asserted on construction): `sum gamma_row[l] v[l] = 1`
/// and `sum w[l] v[l] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneData {
    v: Vec<RingElem>,
    w: Vec<RingElem>,
    gamma_row: Vec<RingElem>,
}

impl RankOneData {
    pub fn v(&self) -> &[RingElem] {
        &self.v
    }

    pub fn w(&self) -> &[RingElem] {
        &self.w
    }

    pub fn gamma_row(&self) -> &[RingElem] {
        &self.gamma_row
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }
}

fn dot(xs: &[RingElem], ys: &[RingElem]) -> RingElem {
    let mut acc = RingElem::zero(xs[0].ctx());
    for (x, y) in xs.iter().zip(ys) {
        acc = &acc + &(x * y);
    }
    acc
}

/// Extracts `v`, `w`, and the i-th row of `g^-1` from the conjugation
/// `g e_{i,j}(a) g^-1`, and checks the two splitting identities exactly.
pub fn rank_one_data(
    gamma: &Word,
    i: usize,
    j: usize,
    a: &RingElem,
) -> Result<RankOneData, FactorError> {
    let n = gamma.dim();
    if n < 3 {
        return Err(FactorError::DimensionTooSmall { n });
    }
    if i == j {
        return Err(FactorError::DiagonalIndex(i));
    }
    if i == 0 || j == 0 || i > n || j > n {
        return Err(FactorError::IndexOutOfRange { i, j, n });
    }
    if a.ctx() != gamma.ctx() {
        return Err(RingError::Incompatible {
            left: gamma.ctx(),
            right: a.ctx(),
        }
        .into());
    }
    let m = gamma.eval();
    let m_inv = gamma.inverse().eval();
    let v = m.col(i - 1);
    let w: Vec<RingElem> = m_inv.row(j - 1).iter().map(|e| e * a).collect();
    let gamma_row = m_inv.row(i - 1);
    let data = RankOneData { v, w, gamma_row };
    assert!(
        dot(&data.gamma_row, &data.v).is_one(),
        "splitting identity gamma . v = 1 violated"
    );
    assert!(
        dot(&data.w, &data.v).is_zero(),
        "splitting identity w . v = 0 violated"
    );
    Ok(data)
}

/// `b_{l,m} = w_l gamma_m - w_m gamma_l` for all `1 <= l < m <= n`, keyed in
/// lexicographic pair order.
pub fn mennicke_coeffs(data: &RankOneData) -> BTreeMap<(usize, usize), RingElem> {
    let n = data.dim();
    let mut out = BTreeMap::new();
    for l in 1..=n {
        for m in (l + 1)..=n {
            let b = &(&data.w[l - 1] * &data.gamma_row[m - 1])
                - &(&data.w[m - 1] * &data.gamma_row[l - 1]);
            out.insert((l, m), b);
        }
    }
    out
}

/// One Mennicke factor `I + v b (v_m e_l - v_l e_m)^t` with `l < m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MennickeFactor {
    v: Vec<RingElem>,
    b: RingElem,
    l: usize,
    m: usize,
}

impl MennickeFactor {
    pub fn new(v: Vec<RingElem>, b: RingElem, l: usize, m: usize) -> Result<Self, FactorError> {
        let n = v.len();
        if !(1 <= l && l < m && m <= n) {
            return Err(FactorError::BadPair { l, m, n });
        }
        let ctx = b.ctx();
        for e in &v {
            if e.ctx() != ctx {
                return Err(RingError::Incompatible {
                    left: ctx,
                    right: e.ctx(),
                }
                .into());
            }
        }
        Ok(MennickeFactor { v, b, l, m })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    fn ctx(&self) -> RingCtx {
        self.b.ctx()
    }

    /// The row vector `u = b (v_m e_l - v_l e_m)`; note `u . v = 0` always.
    fn row(&self) -> Vec<RingElem> {
        let ctx = self.ctx();
        let mut u = vec![RingElem::zero(ctx); self.dim()];
        u[self.l - 1] = &self.b * &self.v[self.m - 1];
        u[self.m - 1] = (&self.b * &self.v[self.l - 1]).neg();
        u
    }

    /// The associated matrix `I + v u`; its determinant is 1.
    pub fn matrix(&self) -> Result<SqMatrix, FactorError> {
        let ctx = self.ctx();
        let n = self.dim();
        let u = self.row();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for (c, uc) in u.iter().enumerate() {
                let mut e = &self.v[r] * uc;
                if r == c {
                    e = &e + &RingElem::one(ctx);
                }
                entries.push(e);
            }
        }
        Ok(SqMatrix::from_entries(ctx, n, entries)?)
    }
}

/// Smallest index outside `{l, m}` (1-based).
fn spare_index(l: usize, m: usize) -> usize {
    (1..).find(|q| *q != l && *q != m).unwrap()
}

/// Decomposes a Mennicke factor into at most `2n+4` elementary matrices.
///
/// The construction, for `F = I + v u` with `u = b (v_m e_l - v_l e_m)`:
///
/// 1. Split `v = v' + v''` into its `{l,m}` part and the rest. Since `u`
///    kills both parts, `F = (I + v'' u)(I + v' u)`, and the first factor is
///    a product of `2(n-2)` commuting elementaries
///    `e_{p,l}(b v_p v_m) e_{p,m}(-b v_p v_l)`, one pair per `p` outside
///    `{l,m}`.
/// 2. The core `C = I + v' u` is supported on the `(l,m)` plane. With a
///    spare index `q`, `alpha = v_l`, `beta = v_m`, and the commuting pairs
///    `Q = e_{q,l}(-b beta) e_{q,m}(b alpha)`, `P = e_{l,q}(alpha) e_{m,q}(beta)`,
///    a direct expansion shows `C P Q = Q P`, i.e. `C` is the 8-letter
///    commutator `Q P Q^-1 P^-1`.
///
/// Zero-parameter letters are skipped, so degenerate factors come out
/// shorter; a factor that is already elementary is emitted as one letter and
/// the identity as the empty word. The result is re-verified against the
/// factor matrix and the bound before being returned.
pub fn factor_mennicke(factor: &MennickeFactor) -> Result<Word, FactorError> {
    let n = factor.dim();
    if n < 3 {
        return Err(FactorError::DimensionTooSmall { n });
    }
    let target = factor.matrix()?;
    let bound = 2 * n + 4;

    let word = emit_factor_word(factor, &target)?;

    if word.len() > bound || word.eval() != target {
        return Err(FactorError::ConstructionFailure(format!(
            "emitted {} letters for pair ({},{}) of dimension {n}",
            word.len(),
            factor.l,
            factor.m,
        )));
    }
    Ok(word)
}

fn emit_factor_word(factor: &MennickeFactor, target: &SqMatrix) -> Result<Word, FactorError> {
    let n = factor.dim();
    let ctx = factor.ctx();

    // degenerate shapes: identity and single-entry factors
    let mut deviations = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let mut e = target.entry(r, c).clone();
            if r == c {
                e = &e - &RingElem::one(ctx);
            }
            if !e.is_zero() {
                deviations.push((r, c, e));
            }
        }
    }
    if deviations.is_empty() {
        return Ok(Word::empty(ctx, n)?);
    }
    if deviations.len() == 1 && deviations[0].0 != deviations[0].1 {
        let (r, c, e) = deviations.pop().unwrap();
        let g = ElemGen::new(r + 1, c + 1, e).expect("off-diagonal");
        return Ok(Word::from_gens(ctx, n, [g])?);
    }

    let (l, m) = (factor.l, factor.m);
    let b = &factor.b;
    let alpha = &factor.v[l - 1];
    let beta = &factor.v[m - 1];
    let mut letters: Vec<ElemGen> = Vec::with_capacity(2 * n + 4);
    let push = |letters: &mut Vec<ElemGen>, i: usize, j: usize, p: RingElem| {
        if !p.is_zero() {
            letters.push(ElemGen::new(i, j, p).expect("i != j"));
        }
    };

    // stage 1: clear the support of v outside {l, m}
    for p in 1..=n {
        if p == l || p == m {
            continue;
        }
        let vp = &factor.v[p - 1];
        push(&mut letters, p, l, &(b * vp) * beta);
        push(&mut letters, p, m, (&(b * vp) * alpha).neg());
    }

    // stage 2: the commutator core Q P Q^-1 P^-1 through the spare index
    let q = spare_index(l, m);
    let b_beta = b * beta;
    let b_alpha = b * alpha;
    push(&mut letters, q, l, b_beta.neg());
    push(&mut letters, q, m, b_alpha.clone());
    push(&mut letters, l, q, alpha.clone());
    push(&mut letters, m, q, beta.clone());
    push(&mut letters, q, m, b_alpha.neg());
    push(&mut letters, q, l, b_beta.clone());
    push(&mut letters, m, q, beta.neg());
    push(&mut letters, l, q, alpha.neg());

    Ok(Word::from_gens(ctx, n, letters)?)
}

/// Verification state of a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyStatus {
    Yes,
    No,
    Unchecked,
}

impl fmt::Display for VerifyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerifyStatus::Yes => "yes",
            VerifyStatus::No => "no",
            VerifyStatus::Unchecked => "unchecked",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for VerifyStatus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "yes" => Ok(VerifyStatus::Yes),
            "no" => Ok(VerifyStatus::No),
            "unchecked" => Ok(VerifyStatus::Unchecked),
            other => Err(format!("unknown verification status '{other}'")),
        }
    }
}

/// A bounded-generation certificate: a target matrix, a word claimed to
/// evaluate to it, and a length bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationWitness {
    target: SqMatrix,
    word: Word,
    claimed_bound: usize,
    verified: VerifyStatus,
}

impl FactorizationWitness {
    /// Assembles a witness without checking it.
    pub fn new_unchecked(target: SqMatrix, word: Word, claimed_bound: usize) -> Self {
        FactorizationWitness {
            target,
            word,
            claimed_bound,
            verified: VerifyStatus::Unchecked,
        }
    }

    pub fn target(&self) -> &SqMatrix {
        &self.target
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn claimed_bound(&self) -> usize {
        self.claimed_bound
    }

    pub fn verified(&self) -> VerifyStatus {
        self.verified
    }

    /// Re-multiplies the word and checks the length bound, updating and
    /// returning the verification status.
    pub fn verify(&mut self) -> VerifyStatus {
        self.verified = if verify_witness(self) {
            VerifyStatus::Yes
        } else {
            VerifyStatus::No
        };
        self.verified
    }
}

/// `yes` iff the word evaluates exactly to the target and its length is
/// within the claimed bound. Always multiplies out; never trusts the
/// construction.
pub fn verify_witness(wit: &FactorizationWitness) -> bool {
    wit.word.len() <= wit.claimed_bound && wit.word.eval() == wit.target
}

/// The full pipeline: splits `gamma e_{i,j}(a) gamma^-1` into Mennicke
/// factors in lexicographic pair order, decomposes each, and returns the
/// verified witness with the dimension-only bound `(n+2)n(n-1)`.
pub fn conj_decompose(
    gamma: &Word,
    i: usize,
    j: usize,
    a: &RingElem,
) -> Result<FactorizationWitness, FactorError> {
    let n = gamma.dim();
    let ctx = gamma.ctx();
    let data = rank_one_data(gamma, i, j, a)?;

    let mut word = Word::empty(ctx, n)?;
    for ((l, m), b) in mennicke_coeffs(&data) {
        let factor = MennickeFactor::new(data.v.clone(), b, l, m)?;
        word = word.concat(&factor_mennicke(&factor)?)?;
    }

    let s = ElemGen::new(i, j, a.clone())?.matrix(n)?;
    let target = gamma.eval().try_mul(&s)?.try_mul(&gamma.inverse().eval())?;

    let mut witness = FactorizationWitness::new_unchecked(target, word, (n + 2) * n * (n - 1));
    witness.verify();
    Ok(witness)
}

fn default_schema() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    #[serde(default = "default_schema")]
    schema: u32,
    dimension: usize,
    ring: RingDoc,
    target: Vec<String>,
    word: Vec<String>,
    claimed_bound: usize,
    verified: String,
}

#[derive(Serialize, Deserialize)]
struct RingDoc {
    k: usize,
    coeff: CoeffDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CoeffDoc {
    Integers,
    Mod { modulus: u64 },
}

impl FactorizationWitness {
    /// Serializes to the stable JSON document: fixed field order, row-major
    /// target polynomials in canonical form, word as generator tokens.
    pub fn to_json(&self) -> String {
        let ctx = self.word.ctx();
        let doc = WitnessDoc {
            schema: 1,
            dimension: self.word.dim(),
            ring: RingDoc {
                k: ctx.vars,
                coeff: match ctx.coeff {
                    CoeffSpec::Integers => CoeffDoc::Integers,
                    CoeffSpec::Mod(m) => CoeffDoc::Mod { modulus: m },
                },
            },
            target: self.target.entries().map(|e| e.to_string()).collect(),
            word: self.word.gens().iter().map(|g| g.to_string()).collect(),
            claimed_bound: self.claimed_bound,
            verified: self.verified.to_string(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("witness serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FactorError> {
        let doc: WitnessDoc =
            serde_json::from_str(text).map_err(|e| FactorError::WitnessFormat(e.to_string()))?;
        let coeff = match doc.ring.coeff {
            CoeffDoc::Integers => CoeffSpec::Integers,
            CoeffDoc::Mod { modulus } => CoeffSpec::modular(modulus)
                .map_err(|e| FactorError::WitnessFormat(e.to_string()))?,
        };
        let ctx = RingCtx::new(coeff, doc.ring.k);
        let n = doc.dimension;
        if doc.target.len() != n * n {
            return Err(FactorError::WitnessFormat(format!(
                "target has {} entries, expected {}",
                doc.target.len(),
                n * n
            )));
        }
        let mut entries = Vec::with_capacity(n * n);
        for t in &doc.target {
            entries
                .push(parse_poly(t, ctx).map_err(|e| FactorError::WitnessFormat(e.to_string()))?);
        }
        let target = SqMatrix::from_entries(ctx, n, entries)?;
        let mut word = Word::empty(ctx, n)?;
        for t in &doc.word {
            for (start, token) in tokens(t) {
                let g = parse_elem_token(t, start, token, ctx)
                    .map_err(|e| FactorError::WitnessFormat(e.to_string()))?;
                word.push(g)?;
            }
        }
        let verified = doc
            .verified
            .parse::<VerifyStatus>()
            .map_err(FactorError::WitnessFormat)?;
        Ok(FactorizationWitness {
            target,
            word,
            claimed_bound: doc.claimed_bound,
            verified,
        })
    }
}
