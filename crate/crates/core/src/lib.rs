//! Best rational approximations of maximal commutative regular subgroups
//! (MCRS-groups) of `GL(n, R)` for `n = 2` and a three-dimensional family,
//! with the supporting continued-fraction, sail and exact-arithmetic layers.

pub mod approx2d;
pub mod approx3d;
pub mod cf;
pub mod json;
pub mod mcrs;
pub mod numeric;
pub mod regression;
pub mod sails2d;
