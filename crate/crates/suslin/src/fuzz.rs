//! Seeded random generation of ring elements, words, and symplectic words,
//! plus the randomized relation suites behind `relations-fuzz`. Everything
//! here is driven by a caller-supplied seed so reports are reproducible.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::chevalley::{ElemGen, GroupError, Word};
use crate::ring::{CoeffSpec, Monomial, RingCtx, RingElem};
use crate::symplectic::{HalfSign, SpGen, SpWord};

/// One RNG per job; ChaCha keeps streams identical across platforms.
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Shape of randomly drawn polynomials.
#[derive(Clone, Copy, Debug)]
pub struct PolyParams {
    pub max_terms: usize,
    pub max_degree: u32,
    pub coeff_bound: i64,
}

impl PolyParams {
    pub fn new(max_terms: usize, max_degree: u32, coeff_bound: i64) -> Self {
        PolyParams {
            max_terms,
            max_degree,
            coeff_bound,
        }
    }
}

pub fn random_poly(rng: &mut ChaCha20Rng, ctx: RingCtx, params: &PolyParams) -> RingElem {
    let nterms = rng.gen_range(0..=params.max_terms);
    let mut terms = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let mut exps = vec![0u32; ctx.vars];
        if ctx.vars > 0 {
            let degree = rng.gen_range(0..=params.max_degree);
            for _ in 0..degree {
                let v = rng.gen_range(0..ctx.vars);
                exps[v] += 1;
            }
        }
        let c = match ctx.coeff {
            CoeffSpec::Integers => {
                BigInt::from(rng.gen_range(-params.coeff_bound..=params.coeff_bound))
            }
            CoeffSpec::Mod(m) => BigInt::from(rng.gen_range(0..m)),
        };
        terms.push((Monomial::new(exps), c));
    }
    RingElem::from_terms(ctx, terms)
}

/// A polynomial divisible by `x1`; words built from these lie in the kernel
/// of the substitution `x1 = 0`.
pub fn random_kernel_poly(rng: &mut ChaCha20Rng, ctx: RingCtx, params: &PolyParams) -> RingElem {
    assert!(ctx.vars >= 1, "kernel sampling needs at least one variable");
    let x = RingElem::variable(ctx, 0).expect("vars >= 1");
    &x * &random_poly(rng, ctx, params)
}

fn distinct_pair(rng: &mut ChaCha20Rng, n: usize) -> (usize, usize) {
    let i = rng.gen_range(1..=n);
    let j = loop {
        let j = rng.gen_range(1..=n);
        if j != i {
            break j;
        }
    };
    (i, j)
}

pub fn random_elem_gen(
    rng: &mut ChaCha20Rng,
    ctx: RingCtx,
    n: usize,
    params: &PolyParams,
) -> ElemGen {
    let (i, j) = distinct_pair(rng, n);
    ElemGen::new(i, j, random_poly(rng, ctx, params)).expect("i != j")
}

pub fn random_word(
    rng: &mut ChaCha20Rng,
    ctx: RingCtx,
    n: usize,
    max_len: usize,
    params: &PolyParams,
) -> Word {
    let len = rng.gen_range(0..=max_len);
    let gens: Vec<ElemGen> = (0..len)
        .map(|_| random_elem_gen(rng, ctx, n, params))
        .collect();
    Word::from_gens(ctx, n, gens).expect("indices generated in range")
}

/// A word whose parameters all vanish at `x1 = 0`.
pub fn random_kernel_word(
    rng: &mut ChaCha20Rng,
    ctx: RingCtx,
    n: usize,
    max_len: usize,
    params: &PolyParams,
) -> Word {
    let len = rng.gen_range(0..=max_len);
    let gens: Vec<ElemGen> = (0..len)
        .map(|_| {
            let (i, j) = distinct_pair(rng, n);
            ElemGen::new(i, j, random_kernel_poly(rng, ctx, params)).expect("i != j")
        })
        .collect();
    Word::from_gens(ctx, n, gens).expect("indices generated in range")
}

pub fn random_sp_gen(rng: &mut ChaCha20Rng, ctx: RingCtx, n: usize, params: &PolyParams) -> SpGen {
    let a = random_poly(rng, ctx, params);
    let (i, j) = distinct_pair(rng, n);
    let sign = if rng.gen_bool(0.5) {
        HalfSign::Upper
    } else {
        HalfSign::Lower
    };
    match rng.gen_range(0..3) {
        0 => SpGen::linear(i, j, a).expect("i != j"),
        1 => SpGen::long(sign, i, a),
        _ => SpGen::mixed(sign, i, j, a).expect("i != j"),
    }
}

pub fn random_sp_word(
    rng: &mut ChaCha20Rng,
    ctx: RingCtx,
    n: usize,
    max_len: usize,
    params: &PolyParams,
) -> SpWord {
    let len = rng.gen_range(0..=max_len);
    let gens: Vec<SpGen> = (0..len)
        .map(|_| random_sp_gen(rng, ctx, n, params))
        .collect();
    SpWord::from_gens(ctx, n, gens).expect("indices generated in range")
}

/// Outcome counts for a randomized suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub trials: u64,
    pub passes: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub(crate) fn new() -> Self {
        SuiteReport {
            trials: 0,
            passes: 0,
            failures: 0,
            first_failure: None,
        }
    }

    pub(crate) fn record(&mut self, pass: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if pass {
            self.passes += 1;
        } else {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

/// Randomized check of the type-A commutator relation: for random distinct
/// `i, j, k` and random parameters, the four-letter commutator word
/// evaluates to `e_{i,k}(a1 a2)`; pairs without a shared head-tail index
/// commute.
pub fn commutator_relation_suite(
    ctx: RingCtx,
    n: usize,
    seed: u64,
    trials: u64,
) -> Result<SuiteReport, GroupError> {
    if n < 3 {
        return Err(GroupError::DimensionTooSmall { n, needed: 3 });
    }
    if trials == 0 {
        return Err(GroupError::TrialsRequired);
    }
    let mut rng = rng_from_seed(seed);
    let params = PolyParams::new(3, 2, 5);
    let mut report = SuiteReport::new();
    for _ in 0..trials {
        let (i, j) = distinct_pair(&mut rng, n);
        let k = loop {
            let k = rng.gen_range(1..=n);
            if k != i && k != j {
                break k;
            }
        };
        let a1 = random_poly(&mut rng, ctx, &params);
        let a2 = random_poly(&mut rng, ctx, &params);
        let g1 = ElemGen::new(i, j, a1.clone()).expect("distinct");
        let g2 = ElemGen::new(j, k, a2.clone()).expect("distinct");
        let lhs =
            Word::from_gens(ctx, n, [g1.clone(), g2.clone(), g1.inverse(), g2.inverse()])?.eval();
        let rhs = ElemGen::new(i, k, &a1 * &a2).expect("distinct").matrix(n)?;
        let relation_holds = lhs == rhs;

        // pairs sharing a row (or fully disjoint, when n allows) commute
        let g3 = ElemGen::new(i, j, random_poly(&mut rng, ctx, &params)).expect("distinct");
        let g4 = if n >= 4 {
            let l = loop {
                let l = rng.gen_range(1..=n);
                if l != i && l != j && l != k {
                    break l;
                }
            };
            ElemGen::new(k, l, random_poly(&mut rng, ctx, &params)).expect("distinct")
        } else {
            ElemGen::new(i, k, random_poly(&mut rng, ctx, &params)).expect("distinct")
        };
        let ab = g3.matrix(n)?.try_mul(&g4.matrix(n)?)?;
        let ba = g4.matrix(n)?.try_mul(&g3.matrix(n)?)?;
        let commuting_holds = ab == ba;

        report.record(relation_holds && commuting_holds, || {
            format!("commutator relation failed for E({i},{j};{a1}), E({j},{k};{a2})")
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_deterministic() {
        let ctx = RingCtx::integer(2);
        let params = PolyParams::new(4, 3, 9);
        let mut r1 = rng_from_seed(7);
        let mut r2 = rng_from_seed(7);
        for _ in 0..20 {
            assert_eq!(
                random_poly(&mut r1, ctx, &params),
                random_poly(&mut r2, ctx, &params)
            );
        }
        let w1 = random_word(&mut r1, ctx, 4, 8, &params);
        let w2 = random_word(&mut r2, ctx, 4, 8, &params);
        assert_eq!(w1, w2);
    }

    #[test]
    fn kernel_words_vanish_at_zero() {
        let ctx = RingCtx::integer(1);
        let params = PolyParams::new(3, 2, 4);
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let w = random_kernel_word(&mut rng, ctx, 3, 6, &params);
            for g in w.gens() {
                let mut assign = std::collections::BTreeMap::new();
                assign.insert(0usize, RingElem::zero(ctx));
                assert!(g.param().subst(&assign).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn commutator_suite_passes() {
        let ctx = RingCtx::integer(1);
        for n in [3usize, 4, 5] {
            let report = commutator_relation_suite(ctx, n, 42, 30).unwrap();
            assert_eq!(report.trials, 30);
            assert!(report.all_passed(), "{:?}", report.first_failure);
        }
        assert!(commutator_relation_suite(ctx, 3, 1, 0).is_err());
        assert!(commutator_relation_suite(ctx, 2, 1, 5).is_err());
    }
}
