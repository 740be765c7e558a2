//! Exact scatteredness tests for linearized polynomials over finite fields.
//!
//! A σ-polynomial `f` over F_{q^n} is scattered when `x f(t) = t f(x)` forces
//! `x` and `t` to be F_q-dependent. This crate decides that property three
//! independent ways (direct collision search, a kernel sweep driven by
//! Dickson-matrix minors, and a single-minor criterion), and specializes it to
//! the binomials `x^σ + δ x^{σ^{n-1}}` and `x^σ + b x^{σ^2}`.
//!
//! ```
//! use std::sync::Arc;
//! use linset_core::{cross_validate, FieldCtx, Felt, SigmaPoly, Verdict};
//!
//! let ctx = Arc::new(FieldCtx::new(3, 1, 4).unwrap());
//! let f = SigmaPoly::monomial(ctx, 1, 1, Felt::ONE).unwrap(); // x^q
//! assert_eq!(cross_validate(&f).unwrap().verdict, Verdict::Scattered);
//! ```

pub mod binomial;
pub mod dickson;
pub mod gf;
pub mod linpoly;
pub mod scatter;

pub use binomial::{
    b2_binomial, b2_curve_test, b2_pqq_test, classify_lp_table, eq3_sum, lp_binomial, lp_classify,
    lp_eq3_test, norm_class_reps, rephr_set, search_l2, BinomialError, CurvePoint, L2Class, L2Conclusion,
    L2SearchReport, LpTable, LpVerdict,
};
pub use dickson::{
    build_bz, build_dickson, build_gx_matrix, nw_minor_det, rank_nested_minors, DicksonMatrix, Matrix,
    MatrixError,
};
pub use gf::{Felt, FieldCtx, FieldError, FieldInfo, DEFAULT_CAP};
pub use linpoly::{LinearSet, PolyError, ProjPoint, SigmaPoly};
pub use scatter::{
    cross_validate, decide, is_scattered_definition, is_scattered_kernel, is_scattered_minor, Method,
    ScatterError, ScatterReport, Verdict, Witness,
};
