//! The derivation cocycle on matrices over `Z[x]`: the substitution
//! homomorphism `pi(g) = g|_{x=0}`, the map `c(g) = g'|_{x=0}` into integer
//! matrices, and defect measurement for arbitrary matrix-valued maps.
//!
//! Differentiating the product rule and substituting gives the twisted
//! cocycle identity `c(gh) = c(g) pi(h) + pi(g) c(h)`, exactly; on the
//! congruence kernel `K = {g : pi(g) = I}` the map is a plain homomorphism,
//! and `c(e_{1,2}(x)^m) = m E_{1,2}` shows its image surjects onto the
//! integers entrywise.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::matrix::{MatrixError, SqMatrix};
use crate::ring::{CoeffSpec, RingCtx, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CocycleError {
    #[error("expected a matrix over Z[x] (one variable, integer coefficients), got {0}")]
    UnsupportedRing(RingCtx),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An `n x n` integer matrix, the codomain `(Mat(n, Z), +)` of the
/// derivation cocycle. No determinant constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleValue {
    n: usize,
    entries: Vec<BigInt>, // row-major
}

impl CocycleValue {
    pub fn zero(n: usize) -> Self {
        CocycleValue {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn from_entries(n: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count");
        CocycleValue { n, entries }
    }

    /// The matrix unit `E_{row,col}` (zero-based indices).
    pub fn unit(n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[row * n + col] = BigInt::from(1);
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::from(1);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        assert!(row < self.n && col < self.n);
        &self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BigInt::is_zero)
    }

    pub fn scale(&self, c: &BigInt) -> CocycleValue {
        CocycleValue {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Maximum absolute entry, the norm used for defects.
    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Extracts an integer matrix from a matrix of constant polynomials.
    pub fn from_constant_matrix(m: &SqMatrix) -> Result<Self, CocycleError> {
        if m.ctx().coeff != CoeffSpec::Integers {
            return Err(CocycleError::UnsupportedRing(m.ctx()));
        }
        let entries: Option<Vec<BigInt>> = m.entries().map(|e| e.as_constant()).collect();
        let entries = entries.ok_or(CocycleError::UnsupportedRing(m.ctx()))?;
        Ok(CocycleValue {
            n: m.dim(),
            entries,
        })
    }
}

impl std::ops::Add<&CocycleValue> for &CocycleValue {
    type Output = CocycleValue;
    fn add(self, rhs: &CocycleValue) -> CocycleValue {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CocycleValue {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub<&CocycleValue> for &CocycleValue {
    type Output = CocycleValue;
    fn sub(self, rhs: &CocycleValue) -> CocycleValue {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CocycleValue {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul<&CocycleValue> for &CocycleValue {
    type Output = CocycleValue;
    fn mul(self, rhs: &CocycleValue) -> CocycleValue {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * n + j] += a * b;
                }
            }
        }
        CocycleValue { n, entries }
    }
}

impl std::ops::Neg for &CocycleValue {
    type Output = CocycleValue;
    fn neg(self) -> CocycleValue {
        CocycleValue {
            n: self.n,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Display for CocycleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.entry(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

fn require_zx(m: &SqMatrix) -> Result<(), CocycleError> {
    let ctx = m.ctx();
    if ctx.coeff != CoeffSpec::Integers || ctx.vars != 1 {
        return Err(CocycleError::UnsupportedRing(ctx));
    }
    Ok(())
}

/// The substitution homomorphism `x = 0`, entrywise, landing in matrices
/// over `Z` (a zero-variable ring). Preserves determinants.
pub fn reduce_at_zero(g: &SqMatrix) -> Result<SqMatrix, CocycleError> {
    require_zx(g)?;
    let ctx0 = RingCtx::integer(0);
    let mut assign = BTreeMap::new();
    assign.insert(0usize, RingElem::zero(g.ctx()));
    let reduced = g.map_entries(|e| {
        let value = e.subst(&assign)?.as_constant().expect("x substituted");
        Ok(RingElem::constant(ctx0, value))
    })?;
    Ok(reduced)
}

/// `pi(g)` as an integer matrix.
pub fn reduce_at_zero_value(g: &SqMatrix) -> Result<CocycleValue, CocycleError> {
    CocycleValue::from_constant_matrix(&reduce_at_zero(g)?)
}

/// Membership in the congruence kernel `K = ker(pi)`.
pub fn is_in_kernel(g: &SqMatrix) -> Result<bool, CocycleError> {
    Ok(reduce_at_zero(g)?.is_identity())
}

/// The derivation cocycle `c(g) = g'|_{x=0}`, entrywise.
pub fn derivation_cocycle(g: &SqMatrix) -> Result<CocycleValue, CocycleError> {
    require_zx(g)?;
    let n = g.dim();
    let mut assign = BTreeMap::new();
    assign.insert(0usize, RingElem::zero(g.ctx()));
    let mut entries = Vec::with_capacity(n * n);
    for e in g.entries() {
        let d = e.derivative(0)?.subst(&assign)?;
        entries.push(d.as_constant().expect("x substituted"));
    }
    Ok(CocycleValue::from_entries(n, entries))
}

/// The defect of `map` against the twisted cocycle identity over the given
/// sample pairs:
/// `max ||map(gh) - map(g) pi(h) - pi(g) map(h)||` in the max-entry norm,
/// with the empty-supremum convention 0.
pub fn cocycle_defect<F>(map: F, samples: &[(SqMatrix, SqMatrix)]) -> Result<BigInt, CocycleError>
where
    F: Fn(&SqMatrix) -> Result<CocycleValue, CocycleError>,
{
    let mut best = BigInt::zero();
    for (g, h) in samples {
        let gh = g.try_mul(h)?;
        let lhs = map(&gh)?;
        let pi_g = reduce_at_zero_value(g)?;
        let pi_h = reduce_at_zero_value(h)?;
        let twisted = &(&map(g)? * &pi_h) + &(&pi_g * &map(h)?);
        let err = (&lhs - &twisted).max_abs_entry();
        if err > best {
            best = err;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{ElemGen, Word};
    use crate::fuzz::{random_kernel_word, random_word, rng_from_seed, PolyParams};
    use crate::ring::parse_poly;

    fn zx() -> RingCtx {
        RingCtx::integer(1)
    }

    fn p(t: &str) -> RingElem {
        parse_poly(t, zx()).unwrap()
    }

    fn gen(i: usize, j: usize, t: &str) -> ElemGen {
        ElemGen::new(i, j, p(t)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let id = SqMatrix::identity(zx(), 3).unwrap();
        assert!(reduce_at_zero(&id).unwrap().is_identity());

        let m = gen(1, 2, "x1").matrix(3).unwrap();
        assert!(reduce_at_zero(&m).unwrap().is_identity());

        let m = gen(1, 2, "x1+3").matrix(3).unwrap();
        let r = reduce_at_zero(&m).unwrap();
        let ctx0 = RingCtx::integer(0);
        assert_eq!(r.entry(0, 1), &RingElem::constant(ctx0, 3));
        assert!(r.det_is_one());
    }

    #[test]
    fn unsupported_rings_rejected() {
        let two_vars = SqMatrix::identity(RingCtx::integer(2), 3).unwrap();
        assert!(matches!(
            reduce_at_zero(&two_vars),
            Err(CocycleError::UnsupportedRing(_))
        ));
        let modular =
            SqMatrix::identity(RingCtx::new(CoeffSpec::modular(5).unwrap(), 1), 3).unwrap();
        assert!(derivation_cocycle(&modular).is_err());
    }

    #[test]
    fn derivation_examples() {
        let m = gen(1, 2, "x1").matrix(3).unwrap();
        assert_eq!(derivation_cocycle(&m).unwrap(), CocycleValue::unit(3, 0, 1));

        let m = gen(1, 2, "3").matrix(3).unwrap();
        assert!(derivation_cocycle(&m).unwrap().is_zero());

        // c(e_12(x) e_21(x)) = E_12 + E_21 since both pi-values are I
        let w = Word::from_gens(zx(), 3, [gen(1, 2, "x1"), gen(2, 1, "x1")]).unwrap();
        let c = derivation_cocycle(&w.eval()).unwrap();
        let expect = &CocycleValue::unit(3, 0, 1) + &CocycleValue::unit(3, 1, 0);
        assert_eq!(c, expect);
    }

    #[test]
    fn leibniz_holds_in_other_dimensions() {
        // the identity is dimension-independent; spot-check n = 2 and 4
        for n in [2usize, 4] {
            let g = ElemGen::new(1, 2, p("x1^2-x1")).unwrap().matrix(n).unwrap();
            let h = ElemGen::new(2, 1, p("3*x1+1")).unwrap().matrix(n).unwrap();
            let gh = g.try_mul(&h).unwrap();
            let lhs = derivation_cocycle(&gh).unwrap();
            let rhs = &(&derivation_cocycle(&g).unwrap() * &reduce_at_zero_value(&h).unwrap())
                + &(&reduce_at_zero_value(&g).unwrap() * &derivation_cocycle(&h).unwrap());
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn leibniz_identity_random_words() {
        let params = PolyParams::new(3, 2, 4);
        let mut rng = rng_from_seed(5);
        for _ in 0..60 {
            let g = random_word(&mut rng, zx(), 3, 10, &params).eval();
            let h = random_word(&mut rng, zx(), 3, 10, &params).eval();
            let gh = g.try_mul(&h).unwrap();
            let lhs = derivation_cocycle(&gh).unwrap();
            let rhs = &(&derivation_cocycle(&g).unwrap() * &reduce_at_zero_value(&h).unwrap())
                + &(&reduce_at_zero_value(&g).unwrap() * &derivation_cocycle(&h).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn additive_on_kernel() {
        let params = PolyParams::new(3, 2, 4);
        let mut rng = rng_from_seed(6);
        for _ in 0..40 {
            let g = random_kernel_word(&mut rng, zx(), 3, 8, &params).eval();
            let h = random_kernel_word(&mut rng, zx(), 3, 8, &params).eval();
            assert!(is_in_kernel(&g).unwrap());
            assert!(is_in_kernel(&h).unwrap());
            let lhs = derivation_cocycle(&g.try_mul(&h).unwrap()).unwrap();
            let rhs = &derivation_cocycle(&g).unwrap() + &derivation_cocycle(&h).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kernel_surjects_onto_integers() {
        // c(e_12(x)^m) = m E_12
        let e12x = gen(1, 2, "x1");
        for m in 1..=20i64 {
            let gens = vec![e12x.clone(); m as usize];
            let w = Word::from_gens(zx(), 3, gens).unwrap();
            let mat = w.eval();
            assert!(is_in_kernel(&mat).unwrap());
            assert_eq!(
                derivation_cocycle(&mat).unwrap(),
                CocycleValue::unit(3, 0, 1).scale(&BigInt::from(m))
            );
        }
    }

    #[test]
    fn inverse_identity() {
        // c(g^-1) = -pi(g)^-1 c(g) pi(g)^-1
        let params = PolyParams::new(3, 2, 4);
        let mut rng = rng_from_seed(7);
        for _ in 0..30 {
            let w = random_word(&mut rng, zx(), 3, 8, &params);
            let g = w.eval();
            let g_inv = w.inverse().eval();
            let pi_inv = reduce_at_zero_value(&g_inv).unwrap();
            let lhs = derivation_cocycle(&g_inv).unwrap();
            let rhs = -&(&(&pi_inv * &derivation_cocycle(&g).unwrap()) * &pi_inv);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn defect_of_derivation_is_zero() {
        let params = PolyParams::new(3, 2, 4);
        let mut rng = rng_from_seed(8);
        let samples: Vec<(SqMatrix, SqMatrix)> = (0..25)
            .map(|_| {
                (
                    random_word(&mut rng, zx(), 3, 8, &params).eval(),
                    random_word(&mut rng, zx(), 3, 8, &params).eval(),
                )
            })
            .collect();
        let d = cocycle_defect(derivation_cocycle, &samples).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn shifted_map_has_positive_defect() {
        // adding a constant matrix B to the cocycle shifts the identity by -B
        let shift = CocycleValue::unit(3, 0, 0);
        let map = |g: &SqMatrix| Ok(&derivation_cocycle(g)? + &shift);
        let g = gen(1, 2, "x1").matrix(3).unwrap();
        let h = gen(2, 1, "x1^2").matrix(3).unwrap();
        let samples = vec![(g, h)];
        let d = cocycle_defect(map, &samples).unwrap();
        assert!(d >= BigInt::from(1));
    }

    #[test]
    fn empty_samples_defect_zero() {
        let d = cocycle_defect(derivation_cocycle, &[]).unwrap();
        assert!(d.is_zero());
    }
}
