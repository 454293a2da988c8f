//! The type-C generator model: elementary symplectic `2n x 2n` matrices over
//! the ring, with verification against the fixed form
//! `J = [[0, I], [-I, 0]]`.
//!
//! Three root shapes over half-dimension `n >= 2` (indices 1-based):
//!
//! * linear `(i, j, a)`:      `I + a E_{i,j} - a E_{j+n,i+n}`
//! * long upper/lower `(i, a)`: `I + a E_{i,i+n}` / `I + a E_{i+n,i}`
//! * mixed upper `(i, j, a)`:  `I + a (E_{i,j+n} + E_{j,i+n})`, lower its
//!   transpose pattern
//!
//! Every generated matrix `M` satisfies `M^t J M = J` and `det M = 1`
//! exactly; the commutator relations between these subgroups are checked
//! numerically through matrices rather than maintained as rewrite rules.

use crate::chevalley::GroupError;
use crate::fuzz::{random_poly, random_sp_gen, rng_from_seed, PolyParams, SuiteReport};
use crate::matrix::{MatrixError, SqMatrix, MAX_DIM};
use crate::ring::{parse_poly, ParseError, RingCtx, RingElem, RingError};

use rand::Rng;

/// Which half of the long/mixed root pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfSign {
    Upper,
    Lower,
}

/// One elementary symplectic generator over half-dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpGen {
    Linear {
        i: usize,
        j: usize,
        a: RingElem,
    },
    Long {
        sign: HalfSign,
        i: usize,
        a: RingElem,
    },
    Mixed {
        sign: HalfSign,
        i: usize,
        j: usize,
        a: RingElem,
    },
}

impl SpGen {
    pub fn linear(i: usize, j: usize, a: RingElem) -> Result<Self, GroupError> {
        if i == 0 || j == 0 {
            return Err(GroupError::IndexOutOfRange {
                row: i,
                col: j,
                n: 0,
            });
        }
        if i == j {
            return Err(GroupError::DiagonalIndex(i));
        }
        Ok(SpGen::Linear { i, j, a })
    }

    pub fn long(sign: HalfSign, i: usize, a: RingElem) -> Self {
        assert!(i >= 1, "indices are 1-based");
        SpGen::Long { sign, i, a }
    }

    pub fn mixed(sign: HalfSign, i: usize, j: usize, a: RingElem) -> Result<Self, GroupError> {
        if i == 0 || j == 0 {
            return Err(GroupError::IndexOutOfRange {
                row: i,
                col: j,
                n: 0,
            });
        }
        if i == j {
            return Err(GroupError::DiagonalIndex(i));
        }
        Ok(SpGen::Mixed { sign, i, j, a })
    }

    pub fn param(&self) -> &RingElem {
        match self {
            SpGen::Linear { a, .. } | SpGen::Long { a, .. } | SpGen::Mixed { a, .. } => a,
        }
    }

    /// Negated parameter; inverts within the one-parameter root subgroup.
    pub fn inverse(&self) -> SpGen {
        let mut g = self.clone();
        match &mut g {
            SpGen::Linear { a, .. } | SpGen::Long { a, .. } | SpGen::Mixed { a, .. } => {
                *a = a.neg();
            }
        }
        g
    }

    /// Replaces the parameter, keeping the root shape.
    pub fn with_param(&self, a: RingElem) -> SpGen {
        let mut g = self.clone();
        match &mut g {
            SpGen::Linear { a: p, .. } | SpGen::Long { a: p, .. } | SpGen::Mixed { a: p, .. } => {
                *p = a;
            }
        }
        g
    }

    fn check_dim(&self, n: usize) -> Result<(), GroupError> {
        let (i, j) = match self {
            SpGen::Linear { i, j, .. } | SpGen::Mixed { i, j, .. } => (*i, *j),
            SpGen::Long { i, .. } => (*i, *i),
        };
        if i > n || j > n {
            return Err(GroupError::IndexOutOfRange { row: i, col: j, n });
        }
        Ok(())
    }

    /// The nonzero off-diagonal contributions `(row, col, coeff)` with
    /// 1-based indices into the `2n x 2n` matrix; the matrix is `I` plus
    /// `coeff * a` at each position.
    fn contributions(&self, n: usize) -> Vec<(usize, usize, i8)> {
        match *self {
            SpGen::Linear { i, j, .. } => vec![(i, j, 1), (j + n, i + n, -1)],
            SpGen::Long {
                sign: HalfSign::Upper,
                i,
                ..
            } => vec![(i, i + n, 1)],
            SpGen::Long {
                sign: HalfSign::Lower,
                i,
                ..
            } => vec![(i + n, i, 1)],
            SpGen::Mixed {
                sign: HalfSign::Upper,
                i,
                j,
                ..
            } => vec![(i, j + n, 1), (j, i + n, 1)],
            SpGen::Mixed {
                sign: HalfSign::Lower,
                i,
                j,
                ..
            } => vec![(j + n, i, 1), (i + n, j, 1)],
        }
    }

    /// The `2n x 2n` matrix of this generator.
    pub fn matrix(&self, n: usize) -> Result<SqMatrix, GroupError> {
        self.check_dim(n)?;
        let ctx = self.param().ctx();
        let mut m = SqMatrix::identity(ctx, 2 * n)?;
        let w = SpWord {
            ctx,
            n,
            gens: vec![self.clone()],
        };
        w.apply(&mut m);
        Ok(m)
    }
}

impl std::fmt::Display for SpGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpGen::Linear { i, j, a } => write!(f, "SpL({i},{j};{a})"),
            SpGen::Long {
                sign: HalfSign::Upper,
                i,
                a,
            } => write!(f, "SpU({i};{a})"),
            SpGen::Long {
                sign: HalfSign::Lower,
                i,
                a,
            } => write!(f, "SpD({i};{a})"),
            SpGen::Mixed {
                sign: HalfSign::Upper,
                i,
                j,
                a,
            } => write!(f, "SpM+({i},{j};{a})"),
            SpGen::Mixed {
                sign: HalfSign::Lower,
                i,
                j,
                a,
            } => write!(f, "SpM-({i},{j};{a})"),
        }
    }
}

/// A product of symplectic generators over half-dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpWord {
    ctx: RingCtx,
    n: usize,
    gens: Vec<SpGen>,
}

impl SpWord {
    pub fn empty(ctx: RingCtx, n: usize) -> Result<Self, GroupError> {
        if n < 2 || 2 * n > MAX_DIM {
            return Err(MatrixError::Dimension(2 * n).into());
        }
        Ok(SpWord {
            ctx,
            n,
            gens: Vec::new(),
        })
    }

    pub fn from_gens(
        ctx: RingCtx,
        n: usize,
        gens: impl IntoIterator<Item = SpGen>,
    ) -> Result<Self, GroupError> {
        let mut w = SpWord::empty(ctx, n)?;
        for g in gens {
            w.push(g)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, g: SpGen) -> Result<(), GroupError> {
        g.check_dim(self.n)?;
        if g.param().ctx() != self.ctx {
            return Err(RingError::Incompatible {
                left: self.ctx,
                right: g.param().ctx(),
            }
            .into());
        }
        self.gens.push(g);
        Ok(())
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    /// Half-dimension; matrices are `2n x 2n`.
    pub fn half_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[SpGen] {
        &self.gens
    }

    pub fn inverse(&self) -> SpWord {
        SpWord {
            ctx: self.ctx,
            n: self.n,
            gens: self.gens.iter().rev().map(SpGen::inverse).collect(),
        }
    }

    /// Right-multiplies `m` by every generator in order. Each generator
    /// contributes one or two column operations whose source and target
    /// columns never overlap, so in-place updates are sound.
    fn apply(&self, m: &mut SqMatrix) {
        for g in &self.gens {
            let a = g.param();
            for (row, col, coeff) in g.contributions(self.n) {
                let scaled = if coeff >= 0 { a.clone() } else { a.neg() };
                m.col_axpy(col - 1, row - 1, &scaled);
            }
        }
    }

    pub fn eval(&self) -> SqMatrix {
        let mut m = SqMatrix::identity(self.ctx, 2 * self.n).expect("dimension validated");
        self.apply(&mut m);
        m
    }
}

impl std::fmt::Display for SpWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let toks: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// The fixed form `J = [[0, I], [-I, 0]]` of size `2n`.
pub fn symplectic_form(ctx: RingCtx, n: usize) -> Result<SqMatrix, GroupError> {
    if n < 2 || 2 * n > MAX_DIM {
        return Err(MatrixError::Dimension(2 * n).into());
    }
    let one = RingElem::one(ctx);
    let mut entries = vec![RingElem::zero(ctx); 4 * n * n];
    for i in 0..n {
        entries[i * 2 * n + (i + n)] = one.clone();
        entries[(i + n) * 2 * n + i] = one.neg();
    }
    Ok(SqMatrix::from_entries(ctx, 2 * n, entries)?)
}

/// `M^t J M == J`.
pub fn preserves_form(m: &SqMatrix, n: usize) -> Result<bool, GroupError> {
    let j = symplectic_form(m.ctx(), n)?;
    let lhs = m.transpose().try_mul(&j)?.try_mul(m)?;
    Ok(lhs == j)
}

/// Randomized consistency report for the type-C model: products of random
/// generators preserve the form and have determinant one, parameter negation
/// inverts, and each root subgroup is additive in its parameter.
pub fn sp_relations_fuzz(
    ctx: RingCtx,
    n: usize,
    seed: u64,
    trials: u64,
) -> Result<SuiteReport, GroupError> {
    if trials == 0 {
        return Err(GroupError::TrialsRequired);
    }
    // validate the dimension up front
    SpWord::empty(ctx, n)?;
    let mut rng = rng_from_seed(seed);
    let params = PolyParams::new(2, 1, 4);
    let mut report = SuiteReport::new();
    for _ in 0..trials {
        let len = rng.gen_range(1..=10);
        let gens: Vec<SpGen> = (0..len)
            .map(|_| random_sp_gen(&mut rng, ctx, n, &params))
            .collect();
        let w = SpWord::from_gens(ctx, n, gens)?;
        let m = w.eval();
        let form_ok = preserves_form(&m, n)?;
        let det_ok = m.det_is_one();
        let inverse_ok = w.inverse().eval().try_mul(&m)?.is_identity();

        let g = random_sp_gen(&mut rng, ctx, n, &params);
        let b = random_poly(&mut rng, ctx, &params);
        let sum = g.with_param(g.param() + &b);
        let additive_ok = g.matrix(n)?.try_mul(&g.with_param(b).matrix(n)?)? == sum.matrix(n)?;

        report.record(form_ok && det_ok && inverse_ok && additive_ok, || {
            format!(
                "symplectic check failed for word {w}: form={form_ok} det={det_ok} \
                 inverse={inverse_ok} additive={additive_ok}"
            )
        });
    }
    Ok(report)
}

/// Parses the symplectic word grammar: whitespace-separated tokens
/// `SpL(i,j;poly)`, `SpU(i;poly)`, `SpD(i;poly)`, `SpM+(i,j;poly)`,
/// `SpM-(i,j;poly)`.
pub fn parse_sp_word(text: &str, ctx: RingCtx, n: usize) -> Result<SpWord, ParseError> {
    let mut w = SpWord::empty(ctx, n).map_err(|e| ParseError::new(text, 0, e.to_string()))?;
    for (start, token) in crate::chevalley::tokens(text) {
        let g = parse_sp_token(text, start, token, ctx)?;
        w.push(g)
            .map_err(|e| ParseError::new(text, start, e.to_string()))?;
    }
    Ok(w)
}

pub(crate) fn parse_sp_token(
    full: &str,
    start: usize,
    token: &str,
    ctx: RingCtx,
) -> Result<SpGen, ParseError> {
    let kinds: [(&str, bool); 5] = [
        ("SpL(", true),
        ("SpU(", false),
        ("SpD(", false),
        ("SpM+(", true),
        ("SpM-(", true),
    ];
    let (prefix, two_indices) = kinds
        .iter()
        .find(|(p, _)| token.starts_with(p))
        .copied()
        .ok_or_else(|| {
            ParseError::new(
                full,
                start,
                "expected symplectic token SpL/SpU/SpD/SpM+/SpM-",
            )
        })?;
    let body = &token[prefix.len()..];
    let body = body
        .strip_suffix(')')
        .ok_or_else(|| ParseError::new(full, start + token.len(), "expected ')'"))?;
    let (indices, poly) = body.split_once(';').ok_or_else(|| {
        ParseError::new(full, start, "expected ';' between indices and parameter")
    })?;
    let poly_base = start + prefix.len() + indices.len() + 1;
    let param = parse_poly(poly, ctx).map_err(|e| e.shift(full, poly_base))?;
    let parse_idx = |s: &str, off: usize| -> Result<usize, ParseError> {
        s.trim()
            .parse()
            .map_err(|_| ParseError::new(full, start + off, "invalid index"))
    };
    let g = if two_indices {
        let (i, j) = indices
            .split_once(',')
            .ok_or_else(|| ParseError::new(full, start + prefix.len(), "expected 'i,j' indices"))?;
        let iv = parse_idx(i, prefix.len())?;
        let jv = parse_idx(j, prefix.len() + i.len() + 1)?;
        let built = match prefix {
            "SpL(" => SpGen::linear(iv, jv, param),
            "SpM+(" => SpGen::mixed(HalfSign::Upper, iv, jv, param),
            _ => SpGen::mixed(HalfSign::Lower, iv, jv, param),
        };
        built.map_err(|e| ParseError::new(full, start, e.to_string()))?
    } else {
        let iv = parse_idx(indices, prefix.len())?;
        if iv == 0 {
            return Err(ParseError::new(full, start, "indices are 1-based"));
        }
        let sign = if prefix == "SpU(" {
            HalfSign::Upper
        } else {
            HalfSign::Lower
        };
        SpGen::long(sign, iv, param)
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn zx() -> RingCtx {
        RingCtx::integer(1)
    }

    fn p(t: &str) -> RingElem {
        parse_poly(t, zx()).unwrap()
    }

    #[test]
    fn long_upper_matrix() {
        // n=2: I_4 + a E_{1,3}, and the form check passes
        let g = SpGen::long(HalfSign::Upper, 1, p("x1+2"));
        let m = g.matrix(2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j {
                    p("1")
                } else if (i, j) == (0, 2) {
                    p("x1+2")
                } else {
                    p("0")
                };
                assert_eq!(m.entry(i, j), &want, "entry ({i},{j})");
            }
        }
        assert!(preserves_form(&m, 2).unwrap());
        assert!(m.det_is_one());
    }

    #[test]
    fn zero_parameter_is_identity() {
        let zero = RingElem::zero(zx());
        let gens = [
            SpGen::linear(1, 2, zero.clone()).unwrap(),
            SpGen::long(HalfSign::Upper, 2, zero.clone()),
            SpGen::long(HalfSign::Lower, 1, zero.clone()),
            SpGen::mixed(HalfSign::Upper, 2, 1, zero.clone()).unwrap(),
            SpGen::mixed(HalfSign::Lower, 1, 2, zero).unwrap(),
        ];
        for g in gens {
            assert!(g.matrix(2).unwrap().is_identity(), "{g}");
        }
    }

    #[test]
    fn linear_matrix() {
        // n=2: I_4 + a E_{1,2} - a E_{4,3}
        let g = SpGen::linear(1, 2, p("x1")).unwrap();
        let m = g.matrix(2).unwrap();
        assert_eq!(m.entry(0, 1), &p("x1"));
        assert_eq!(m.entry(3, 2), &p("-x1"));
        assert!(preserves_form(&m, 2).unwrap());
        assert!(m.det_is_one());
    }

    #[test]
    fn mixed_matrices() {
        let g = SpGen::mixed(HalfSign::Upper, 1, 2, p("x1")).unwrap();
        let m = g.matrix(2).unwrap();
        assert_eq!(m.entry(0, 3), &p("x1"));
        assert_eq!(m.entry(1, 2), &p("x1"));
        assert!(preserves_form(&m, 2).unwrap());

        let g = SpGen::mixed(HalfSign::Lower, 1, 2, p("x1")).unwrap();
        let lower = g.matrix(2).unwrap();
        assert_eq!(lower, m.transpose());
        assert!(preserves_form(&lower, 2).unwrap());
    }

    #[test]
    fn index_validation() {
        assert!(SpGen::linear(1, 1, p("1")).is_err());
        assert!(SpGen::mixed(HalfSign::Upper, 2, 2, p("1")).is_err());
        let g = SpGen::long(HalfSign::Upper, 3, p("1"));
        assert!(matches!(
            g.matrix(2),
            Err(GroupError::IndexOutOfRange { .. })
        ));
        assert!(SpWord::empty(zx(), 1).is_err());
        assert!(SpWord::empty(zx(), 7).is_err());
    }

    #[test]
    fn eval_matches_matrix_products() {
        let gens = vec![
            SpGen::linear(2, 1, p("x1")).unwrap(),
            SpGen::long(HalfSign::Lower, 2, p("1-x1")),
            SpGen::mixed(HalfSign::Upper, 1, 3, p("2")).unwrap(),
            SpGen::long(HalfSign::Upper, 3, p("-x1")),
            SpGen::mixed(HalfSign::Lower, 3, 2, p("x1+1")).unwrap(),
        ];
        let w = SpWord::from_gens(zx(), 3, gens.clone()).unwrap();
        let mut naive = SqMatrix::identity(zx(), 6).unwrap();
        for g in &gens {
            naive = naive.try_mul(&g.matrix(3).unwrap()).unwrap();
        }
        assert_eq!(w.eval(), naive);
        assert!(preserves_form(&w.eval(), 3).unwrap());
        assert!(w.inverse().eval().try_mul(&w.eval()).unwrap().is_identity());
    }

    #[test]
    fn parameter_additivity_per_kind() {
        let a = p("x1");
        let b = p("3-x1^2");
        let sum = &a + &b;
        let shapes = [
            SpGen::linear(1, 2, a.clone()).unwrap(),
            SpGen::long(HalfSign::Upper, 1, a.clone()),
            SpGen::long(HalfSign::Lower, 2, a.clone()),
            SpGen::mixed(HalfSign::Upper, 1, 2, a.clone()).unwrap(),
            SpGen::mixed(HalfSign::Lower, 2, 1, a.clone()).unwrap(),
        ];
        for g in shapes {
            let prod = g
                .matrix(2)
                .unwrap()
                .try_mul(&g.with_param(b.clone()).matrix(2).unwrap())
                .unwrap();
            assert_eq!(prod, g.with_param(sum.clone()).matrix(2).unwrap(), "{g}");
        }
    }

    #[test]
    fn fuzz_suite_passes() {
        for n in [2usize, 3] {
            let report = sp_relations_fuzz(zx(), n, 17, 25).unwrap();
            assert_eq!(report.trials, 25);
            assert!(report.all_passed(), "{:?}", report.first_failure);
        }
        assert!(matches!(
            sp_relations_fuzz(zx(), 2, 17, 0),
            Err(GroupError::TrialsRequired)
        ));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let text = "SpL(1,2;x1) SpU(1;x1^2-1) SpD(2;-3) SpM+(1,2;x1+1) SpM-(2,1;0)";
        let w = parse_sp_word(text, zx(), 2).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.to_string(), text);
        assert_eq!(parse_sp_word(&w.to_string(), zx(), 2).unwrap(), w);

        assert!(parse_sp_word("SpL(1,1;x1)", zx(), 2).is_err());
        assert!(parse_sp_word("SpU(3;1)", zx(), 2).is_err());
        assert!(parse_sp_word("E(1,2;x1)", zx(), 2).is_err());
        let err = parse_sp_word("SpL(1,2;x9)", zx(), 2).unwrap_err();
        assert!(err.message.contains("unknown variable"));
    }
}
