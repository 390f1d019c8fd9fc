//! Certified complex root isolation for polynomials with multiple roots.
//!
//! The engine takes a polynomial through a coefficient oracle (exact integer,
//! exact dyadic, or an algebraic-number fiber) together with the number `k` of
//! distinct complex roots, and produces `k` pairwise disjoint isolating disks
//! with exact multiplicities.  The pipeline is: root bound -> approximate
//! factorization with a certified backward-error bound -> clustering of the
//! approximate roots -> certification of isolating disks.  On top of the
//! isolator sit an analysis of the topology of real plane algebraic curves and
//! a solver for zero-dimensional bivariate systems.

pub mod certify;
pub mod cli;
pub mod cluster;
pub mod dyadic;
pub mod factorizer;
pub mod interval;
pub mod intpoly;
pub mod intpoly2;
pub mod isolator;
pub mod modpoly;
pub mod oracle;
pub mod parse;
pub mod rootbound;
pub mod topnt;

pub use dyadic::Dyadic;
pub use interval::{ComplexDisk, ComplexDyadic, ComplexInterval, DyadicInterval};
pub use intpoly::IntPoly;
pub use intpoly2::IntPoly2;
pub use isolator::{isolate, isolate_integer, refine, IsolatorConfig, RootResult};
pub use oracle::OracleHandle;
pub use topnt::{solve_system, topology, CurveTopology, SolutionBoxes, TopOptions};
