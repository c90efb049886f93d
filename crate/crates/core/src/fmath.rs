//! Thin float-math shims so the crate builds without `std`.

pub use libm::{cos, fabs, floor, log, sin, sqrt};

pub const PI: f64 = core::f64::consts::PI;
pub const TAU: f64 = core::f64::consts::TAU;
