//! Exact machinery for Engel-like characterizations of radicals in finite
//! groups and finite-dimensional Lie algebras.
//!
//! Layers, bottom up: [`field`] scalars, [`linalg`] and [`poly`] over them,
//! [`words`] for two-variable sequences, then [`lie`] and [`group`] which
//! evaluate those sequences in concrete structures, and [`catalog`] with the
//! builtin models. [`suites`] bundles the cross-checks behind `verify`.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod error;
pub mod field;
pub mod group;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod suites;
pub mod words;

pub use error::{Error, Result};
pub use field::{AnyField, Field, FieldSpec, FiniteField, Rationals};
pub use report::{Report, RunConfig, Verdict};
