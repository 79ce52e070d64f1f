//! Catalog parsing, suite execution and reporting for `nilrep`.

pub mod catalog;
pub mod parse;
pub mod build;
pub mod cache;
pub mod report;
pub mod run;
pub mod suites;

/// The catalog shipped with the binary.
pub const DEFAULT_CATALOG: &str = include_str!("../catalogs/default.catalog");
