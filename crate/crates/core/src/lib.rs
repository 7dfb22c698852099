//! Graph planar algebra toolkit.
//!
//! The library models the graph planar algebra of a finite fusion graph,
//! compiles diagrammatic skein terms into it, verifies the defining
//! relations of the trivalent category `G2(q)` and its cyclic extensions
//! against explicit embedding coordinates, solves the polynomial systems
//! that produce those coordinates, and evaluates closed decorated diagrams
//! by face-popping rewrites with the graph planar algebra as an
//! independent oracle.
//!
//! Module map:
//! - [`scalar`]: exact cyclotomic numbers, radical expressions, and
//!   arbitrary-precision complex balls.
//! - [`graph`]: fusion graphs, Frobenius-Perron data, path enumeration.
//! - [`gpa`]: sparse morphisms on parallel path pairs with the full
//!   monoidal/dagger/rigid structure.
//! - [`term`]: the diagram-term language and the compiling functor.
//! - [`skein`]: relation catalogs, the verifier, the braiding, and the
//!   closed-diagram evaluator.
//! - [`solver`]: constraint-system generation, staged elimination, Newton
//!   multistart, and structure-constant fitting.
//! - [`cli`]: batch entry points used by the `g2gpa` binary.

pub mod cli;
pub mod gpa;
pub mod graph;
pub mod par;
pub mod scalar;
pub mod skein;
pub mod solver;
pub mod term;

pub use scalar::{PrecisionContext, Scalar};
