//! Exact arithmetic kernels for lacunary sequences `(n_k)` and the law of the
//! iterated logarithm for the discrepancy of `({n_k x})`.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI live
//! in the companion `lacunary-cli` crate.
//!
//! Modules:
//! - [`rational`]: exact points of `[0,1)` as reduced fractions
//! - [`sequence`]: sequence families with big-integer and modular term access
//! - [`discrepancy`]: star/extremal discrepancy, exact and float, plus oracle
//! - [`diophantine`]: solution counts of `j1 n_k - j2 n_l = nu` and gamma tables
//! - [`sigma`]: the limit variance `sigma_f^2(x)` and the `Lambda*` curve
//! - [`lil`]: trajectory simulation, Koksma checkers, exact pair-correlation
//!   integrals

#![no_std]

extern crate alloc;

pub mod diophantine;
pub mod discrepancy;
pub mod lil;
pub mod rational;
pub mod sequence;
pub mod sigma;

mod fmath;

pub use diophantine::{ConvergenceReport, GammaTable};
pub use discrepancy::{DiscrepancyKind, DiscrepancyResult, ExactPoints};
pub use rational::UnitRational;
pub use sequence::SequenceFamily;
pub use sigma::{BVFunctionSpec, SigmaValue};

use core::fmt;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A rational did not satisfy `0 <= num < den`, `den >= 1`, reduced.
    InvalidRational,
    /// Term index out of range (explicit lists) or zero.
    IndexOutOfRange,
    /// A size or cost guard was exceeded.
    SizeGuard(&'static str),
    /// A precondition on an argument failed.
    InvalidParameter(&'static str),
    /// The point set was empty.
    EmptyPointSet,
    /// Exact evaluation requested for a function that only supports floats.
    NotExactlyEvaluable,
    /// A function handed to the symmetric Koksma checker is not symmetric
    /// around 1/2.
    NotSymmetric,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRational => write!(f, "rational out of [0,1) or not reduced"),
            Error::IndexOutOfRange => write!(f, "sequence index out of range"),
            Error::SizeGuard(what) => write!(f, "size guard exceeded: {what}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::EmptyPointSet => write!(f, "point set is empty"),
            Error::NotExactlyEvaluable => {
                write!(f, "function has no exact evaluation path")
            }
            Error::NotSymmetric => write!(f, "function is not symmetric around 1/2"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
