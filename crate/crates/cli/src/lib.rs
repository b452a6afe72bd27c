//! Harness library: run configurations, the expression language, caching,
//! pipeline orchestration and report writers.

pub mod cache;
pub mod hexvec;
pub mod config;
pub mod expr;
pub mod pipeline;
pub mod report;
