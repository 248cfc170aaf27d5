//! Exact arithmetic: Gaussian rationals, sparse polynomials, truncated
//! series, univariate root computations.

pub mod gaussian;
pub mod poly;
pub mod roots;
pub mod series;
pub mod solve;
pub mod upoly;

pub use gaussian::{rat, rat_int, GaussianRational, Rational};
pub use poly::{Monomial, SparsePoly, Var};
pub use roots::{gaussian_linear_roots, isolate_real_roots, LinearSplit, RealRootIsolation, RootInterval};
pub use series::TruncSeries;
pub use solve::series_solve;
pub use upoly::UPoly;
