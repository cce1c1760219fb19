//! Exact toolkit for distinct-distance structure: sumset algebra over the
//! rationals, planar distance sets, perpendicular-bisector symmetry, isosceles
//! triple counting, and checkers for the associated inequalities.

pub mod bisector;
pub mod bounds;
pub mod bracket;
pub mod error;
pub mod family;
pub mod harness;
pub mod incidence;
pub mod parse;
pub mod planar;
pub mod report;
pub mod scalar;
pub mod sets;

pub use bisector::{CanonicalLine, ReflectionMap, SymmetricSubset, WeightedBisectorMap};
pub use bounds::{BoundReport, Verdict};
pub use bracket::Bracket;
pub use error::{Error, Result};
pub use family::{generate_family, Family, FamilySpec};
pub use harness::{CheckName, CheckOptions, CheckOutcome, OutputFormat};
pub use incidence::IncidenceReport;
pub use planar::{DistanceSet, PlanarPointSet, Point, RadiusMultiplicityMap};
pub use scalar::ExactScalar;
pub use sets::{CombineOp, FiniteScalarSet};
