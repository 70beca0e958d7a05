//! Archimedean tropical varieties of sparse Laurent polynomials.
//!
//! Builds the lifted Newton polytope of a polynomial, its lower hull, and the
//! piecewise-linear tropical set encoding root norms; decides tropical point
//! membership exactly; evaluates quantitative root-norm and Hausdorff-distance
//! bounds; cross-validates them against a certified numerical root oracle; and
//! isolates the possible root-norm vectors of small polynomial systems.

pub mod bounds;
pub mod error;
pub mod exactlog;
pub mod isolate;
pub mod linsolve;
pub mod newton;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod tropical;

pub use error::{Error, Result};
pub use exactlog::ExactLogValue;
pub use parse::parse_laurent;
pub use poly::{Coefficient, LaurentPoly, Term};
