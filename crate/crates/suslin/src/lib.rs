//! Exact symbolic computation in elementary Chevalley groups over
//! `Z[x1..xk]` and `(Z/m)[x1..xk]`.
//!
//! The centerpiece is the factorization pipeline: a conjugate
//! `g e_{i,j}(a) g^-1` of an elementary root unipotent splits into a product
//! of Mennicke factors, each of which decomposes into at most `2n+4`
//! elementary matrices, for a total of at most `(n+2)n(n-1)` letters. The
//! resulting witness words are re-verified by exact symbolic multiplication.
//!
//! Modules:
//! * [`ring`] — sparse multivariate polynomials with exact coefficients
//! * [`matrix`] — dense square matrices over the ring, exact determinants
//! * [`chevalley`] — type-A generators, words, commutators, rewriting
//! * [`symplectic`] — the type-C generator model with form verification
//! * [`factorization`] — bounded-length witnesses for conjugated generators
//! * [`cocycle`] — the derivation cocycle on matrices over `Z[x]`
//! * [`fuzz`] — seeded randomized suites shared by the CLI and tests

pub mod chevalley;
pub mod cocycle;
pub mod factorization;
pub mod fuzz;
pub mod matrix;
pub mod ring;
pub mod symplectic;

pub use chevalley::{
    chevalley_commutator, minimal_subring_generators, parse_word, rewrite_over_finite_genset,
    CommutatorOutcome, ElemGen, GenSet, GroupError, Word,
};
pub use cocycle::{cocycle_defect, derivation_cocycle, reduce_at_zero, CocycleError, CocycleValue};
pub use factorization::{
    conj_decompose, factor_mennicke, mennicke_coeffs, rank_one_data, FactorError,
    FactorizationWitness, MennickeFactor, RankOneData, VerifyStatus,
};
pub use fuzz::{commutator_relation_suite, PolyParams, SuiteReport};
pub use matrix::{MatrixError, SqMatrix};
pub use ring::{parse_poly, CoeffSpec, Monomial, ParseError, RingCtx, RingElem, RingError};
pub use symplectic::{parse_sp_word, sp_relations_fuzz, HalfSign, SpGen, SpWord};
