//! Exact computer algebra for the singularities of wild Kummer varieties in
//! characteristic 2.
//!
//! The crate is organized around a small exact-arithmetic stack:
//!
//! * [`field`] — arithmetic in `F_p` and `F_{p^k}` with validated moduli;
//! * [`poly`] — sparse multivariate polynomials, monomial orders, ring maps;
//! * [`groebner`] — Buchberger engine, normal forms, elimination, subalgebra
//!   membership, content-addressed basis cache;
//! * [`action`] — order-p cyclic ring actions, trace/norm operators, reduced
//!   representatives and quotient-surjectivity checks;
//! * [`kummer`] — curve presentations for products of elliptic curves,
//!   invariant generators, the relation ideal and its verification, minimal
//!   presentations, embedding dimensions and function-field identities;
//! * [`local`] — truncated power series and the formal change-of-variables
//!   checks for the surface singularity normal forms;
//! * [`formalgroup`] — enumeration of symmetric formal-group decompositions;
//! * [`report`] — the JSON certificate schema shared with the CLI.

pub mod action;
pub mod field;
pub mod formalgroup;
pub mod groebner;
pub mod kummer;
pub mod linalg;
pub mod local;
pub mod poly;
pub mod report;

pub use action::{invariant_basis_bounded, make_action, CyclicAction};
pub use field::{field_make, FieldDesc, FieldElem, FieldError};
pub use groebner::{
    buchberger, buchberger_cached, eliminate, ideal_equal, subalgebra_contains, EngineError,
    GbCache, GroebnerBasis, Limits, QuotientPresentation,
};
pub use kummer::{CurveConfig, KummerError, RelationSet, SubsetMask, MAX_FACTORS};
pub use poly::{Monomial, MonomialOrder, MultiPoly, RingMap, VarRoster};
