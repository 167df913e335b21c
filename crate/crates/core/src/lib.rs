//! Numerical machinery for an exact hybrid identity on the critical line and
//! the equation families it generates in the complex plane.
//!
//! The pipeline, bottom to top:
//!
//! 1. [`specfun`] evaluates zeta, gamma, Jacobi cn and Bessel J at complex
//!    arguments with a referenced accuracy budget.
//! 2. [`ladder`] models the slowly increasing function phi1 with derivative
//!    |zeta(1/2+it)|^2 / omega(t) and inverts it (reverse iteration of
//!    segments).
//! 3. [`hybrid`] extracts mean-value points over a base segment and its
//!    reverse iterate and assembles the exact identity
//!    c1 c2 + lambda c3 = c4.
//! 4. [`levelset`] finds points on the loci |F(n s)| = c for each constant,
//!    deterministically.
//! 5. [`crossbreed`](mod@crossbreed) forms row equations A + lambda B = D from the loci,
//!    eliminates the neutral factor lambda between rows, and verifies the
//!    resulting identity families and their commutative laws.
//!
//! Everything is deterministic: identical inputs produce bit-identical
//! results, including across parallel generation.

pub mod crossbreed;
pub mod hybrid;
pub mod ladder;
pub mod levelset;
pub mod quad;
pub mod render;
pub mod roots;
pub mod specfun;

pub use crossbreed::{
    crossbreed, generate_family, row_assignment, transcription_diffs, FactorRef, FamilyContext,
    FamilyReport, MetaEquation, RowEquation, RowKey, Scheme, SymmetryKind, SymmetryReport,
};
pub use hybrid::{compute_hybrid_constants, verify_mother, HybridConstants};
pub use ladder::{LadderModel, OmegaVariant, SegmentInterval, EULER_GAMMA, L0};
pub use levelset::{
    build_locus_family, find_locus_point, trace_locus, LocusPoint, LocusRequest, Region, Strategy,
};
pub use specfun::{
    eval_abs, eval_bessel_j, eval_cn, eval_gamma, eval_zeta, eval_zeta_critical_sq, Complex,
    FunctionTag,
};
