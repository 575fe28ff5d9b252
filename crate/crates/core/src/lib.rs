pub mod algebras;
pub mod catalog;
pub mod connection;
pub mod error;
pub mod evolution;
pub mod exterior;
pub mod linalg;
pub mod scalars;
pub mod structures;

pub use algebras::{parse_compact, parse_equations, LieAlgebra, StructureFile};
pub use error::{Error, Result};
pub use exterior::{CoframeMap, Form, MultiIndex};
pub use scalars::{Rational, Scalar};
pub use structures::{ResidualReport, Su2Structure, SunStructure};
pub use evolution::{ParamFamily, SuspendedStructure};
pub use connection::{ConnectionSheet, CurvatureSheet, HolonomyReport, MetricFrame};
