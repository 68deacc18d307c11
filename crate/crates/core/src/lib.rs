//! Exact combinatorics of 4-dimensional primitive quasitoric orbifolds.
//!
//! A model is a clockwise cyclic list of primitive characteristic vectors in
//! `N = Z^2`. From it this crate computes local groups and their ages,
//! singular and Chen-Ruan Betti tables and the Todd genus, and performs
//! blowdowns, blowups, crepancy tests, resolutions and McKay comparisons,
//! all in exact arithmetic. The [`charts`] module checks the explicit
//! coordinate formulas of the blowdown numerically.
//!
//! The algebra is generic over the integer scalar ([`LatticeInt`]) and the
//! chart checks over the float scalar ([`ChartFloat`]). The aliases below fix
//! the defaults: arbitrary precision integers and `f64`.

pub mod birational;
pub mod charts;
pub mod cohomology;
pub mod lattice;
pub mod localgroup;
pub mod model;

pub use birational::{
    blowdown, blowdown_site, blowup, crepant_blowup, is_crepant, mckay_check, resolve_all, resolve_vertex,
    BirationalError, NotAdmissible, Side,
};
pub use charts::{ChartError, ChartFloat};
pub use cohomology::{cr_betti, singular_betti, todd_genus, BettiTable, CohomologyError};
pub use lattice::{det2, is_primitive, unimodular_complement, LatticeError, LatticeInt};
pub use localgroup::{is_sl, local_group, singularity_type, twisted_sectors};
pub use model::{validate_edges, Finding, ModelError, ValidationReport};

pub use num_bigint::BigInt;

/// Exact rational number.
pub type Rational = num_rational::Ratio<BigInt>;
pub type LatticeVector = lattice::Vector2<BigInt>;
pub type QuasitoricModel = model::Model<BigInt>;
pub type Vertex = model::Vertex<BigInt>;
pub type LocalGroup = localgroup::LocalGroup<BigInt>;
pub type LocalGroupElement = localgroup::LocalGroupElement<BigInt>;
pub type SingularityType = localgroup::SingularityType<BigInt>;
pub type TwistedSector = localgroup::TwistedSector<BigInt>;
pub type CrBettiTable = cohomology::CrBettiTable<BigInt>;
pub type BlowdownSite = birational::BlowdownSite<BigInt>;
pub type Blowup = birational::Blowup<BigInt>;
pub type Resolution = birational::Resolution<BigInt>;
pub type McKayReport = birational::McKayReport<BigInt>;

pub type LocalModelParams = charts::LocalModelParams<f64>;
pub type OrbitPoint = charts::OrbitPoint<f64>;
pub type ChartValue = charts::ChartValue<f64>;
pub type TransitionParams = charts::TransitionParams<f64>;
pub type ResidualReport = charts::ResidualReport<f64>;
pub type BatchReport = charts::BatchReport<f64>;
