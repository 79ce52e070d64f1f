//! One module per group of suites.

pub mod descent;
pub mod groups;
pub mod laurent;
pub mod modules;
