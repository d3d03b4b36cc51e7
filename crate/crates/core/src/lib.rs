//! Exact invariants and smoothability criteria for monomial curves and for
//! cones over finite point configurations.

pub mod cone_t1;
pub mod error;
pub mod exactmat;
pub mod pointset;
pub mod presentation;
pub mod semigroup;
pub mod verdict;

pub use error::{Error, ParseError, PointSetError, SemigroupError};
pub use exactmat::RatMatrix;
pub use semigroup::{NumericalSemigroup, SemigroupInvariants};
pub use verdict::{Outcome, Verdict};
pub use pointset::PointConfiguration;
pub use presentation::{BinomialPresentation, BinomialRelation, T1Profile};
pub use cone_t1::{ConeChecks, ConeT1Report, GradedConeModel};
