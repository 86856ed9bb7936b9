//! Hyper-Bell state distinguishability under linear evolution and local
//! measurement (LELM).
//!
//! Two particles, one in each of a left and a right input channel, share a
//! hyper-Bell state: a tensor product of single-variable Bell states over `n`
//! two-state variables. An LELM apparatus is a unitary over the `2^(n+1)`
//! single-particle input modes followed by number-resolving detection of the
//! two output modes that click. This crate computes detection amplitudes for
//! all `4^n` hyper-Bell states, groups the states into classes that no
//! detection outcome can separate, and probes the class-count ceilings:
//!
//! | setting | ceiling |
//! |---------|---------|
//! | one copy, any apparatus | `2^(n+1) − 1` |
//! | one copy, channels never interfere | `2^n` |
//! | two copies | `4^n` (complete) |
//!
//! ```
//! use lelm_lab::{apparatus, bellcore::VarCount, detection::Statistics, partition};
//!
//! let n = VarCount::new(2).unwrap();
//! let app = apparatus::hadamard_lr(n);
//! let p = partition::partition_of(&app, Statistics::Boson);
//! assert_eq!(p.class_count(), 7);
//! ```

pub mod apparatus;
pub mod bellcore;
pub mod cli;
pub mod detection;
pub mod error;
pub mod partition;
pub mod search;

pub use apparatus::Apparatus;
pub use bellcore::{BellLabel, BellToken, VarCount};
pub use detection::{OutcomePair, SignatureTable, Statistics};
pub use error::{LabError, Result};
pub use partition::{BoundMode, Partition};
