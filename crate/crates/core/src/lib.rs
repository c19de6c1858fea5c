//! Exact computation of Poisson structures and Poisson cohomology on two
//! index-2 Fano threefolds: smooth cubic threefolds in P^4 and the del
//! Pezzo quintic threefold in P^9.
//!
//! Everything is exact: scalars are arbitrary-precision rationals,
//! polynomials are sparse with canonical term order, and ranks come from
//! fraction-free elimination. The Schouten bracket is computed twice —
//! once through the one-form calculus on a chart and once straight from
//! the contraction definition — so every tabulated bracket can be checked
//! against an independent route.

pub mod cubic;
pub mod exterior;
pub mod jsonio;
pub mod linalg;
pub mod poly;
pub mod projective;
pub mod quintic;
pub mod report;
pub mod sample;
pub mod vars;

mod util;
