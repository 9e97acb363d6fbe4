//! Canonical bases of subalgebras of a formal power-series ring.
//!
//! Given generators `f_1, ..., f_s` of `A = Q[[f_1, ..., f_s]] ⊆ Q[[x_1, ..., x_n]]`
//! and a strictly positive rational weight vector `a`, this crate computes
//! `a`-canonical bases (the SAGBI analogue for weighted local orders) by
//! subduction, and partitions the positive weight orthant into the cones on
//! which the initial algebra of `A` stays constant.
//!
//! Module map:
//!
//! * [`poly`] exact polynomials over `Q`, supports, valuations, initial forms.
//! * [`order`] tie-break well-orders and the weighted order `<_a`.
//! * [`division`] the subduction loop and monomial factorisation.
//! * [`toric`] binomial generators of the relation ideal of a list of monomials.
//! * [`semigroup`] affine semigroups, membership and gap reports.
//! * [`sagbi`] canonicity test, completion, minimal and reduced bases.
//! * [`fan`] equivalence cones, fan traversal and the universal basis.
//! * [`text`] the textual polynomial format.

pub mod division;
pub mod error;
pub mod fan;
pub mod order;
pub mod poly;
pub mod sagbi;
pub mod semigroup;
pub mod text;
pub mod toric;

pub use division::{
    monomial_membership, subduct, DivisionResult, DivisionStatus, Factorization, QuotientTerm,
    Subductor,
};
pub use error::{Error, Result};
pub use fan::{
    equivalence_cone, is_multihomogeneous, single_poly_fan, traverse, universal_basis, Cone,
    FanCell, StandardFan, Wall,
};
pub use order::{is_homogeneous, TieBreak, TieBreakOrder, WeightedOrder};
pub use poly::{parse_scalar, Exponent, Polynomial, Scalar, Valuation, WeightVector};
pub use sagbi::{
    complete, is_canonical, minimalize, reduce, reduced_basis, AlgebraPresentation, BasisStatus,
    CanonicalBasis, Canonicity,
};
pub use semigroup::{AffineSemigroup, AxisCertificate, GapLimits, GapReport};
pub use text::{parse_polynomial, VarNames};
pub use toric::{binomial_normal_form, evaluate_relation, toric_kernel, BinomialRelation};
