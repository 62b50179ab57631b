//! Exact tools for order-3 recurrence factorization, hypergeometric series,
//! symmetric-square gauge matrices and Belyi-pullback integrality scans.

pub mod audit;
pub mod exact;
pub mod ore;
pub mod registry;
pub mod fuchsian;
pub mod gauge;
pub mod scan;
pub mod series;
