//! Text classification toolkit for German YouTube comment corpora on the
//! Israel-Palestine conflict: deterministic cleaning and normalization,
//! bag-of-words and tf-idf features, logistic regression and linear SVM
//! trainers, stratified evaluation, replayable corpus augmentation and
//! field-scale aggregation of model outputs.
//!
//! Everything is seeded and the emitted artifacts are byte-reproducible:
//! rerunning a command with the same config and seed writes identical
//! files. See the `examples/` directory for end-to-end walkthroughs of
//! each capability; the `stimmung` binary wires the same functions to a
//! command line.

// `!(x > 0.0)` in parameter guards is load-bearing: it rejects NaN along
// with nonpositive values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augment;
pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod fieldscan;
pub mod linmodels;
pub(crate) mod seeding;
pub mod textprep;

pub use error::{Error, Result};
