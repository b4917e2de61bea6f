//! Tools for telling finitely presented groups apart by invariants of
//! their finite quotients: abelianizations of low-index subgroups,
//! abelian and cyclic covers, and kernels of surjections onto small
//! finite simple groups, combined in a staged refinement pipeline.

pub mod cosets;
pub mod engine;
pub mod fpgroups;
pub mod homsearch;
pub mod invariants;
pub mod permgrp;
pub mod zlinalg;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("node budget exhausted after {0} nodes")]
    BudgetExhausted(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown catalog group: {0}")]
    UnknownCatalogGroup(String),
    #[error("catalog validation failed for {name}: {msg}")]
    CatalogCorrupt { name: String, msg: String },
    #[error("cache error: {0}")]
    Cache(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
