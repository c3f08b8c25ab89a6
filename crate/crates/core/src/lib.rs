// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod error;
pub mod grin;
pub mod io;
pub mod kernels;
pub mod lattice;
pub mod numerics;
pub mod pimc;
pub mod potential;
pub mod qed;
pub mod scalar;

pub use error::{Error, ErrorKind, Result};

/// Complex amplitude in double precision.
pub type Amplitude = num_complex::Complex64;
/// Single-precision amplitude for the generic closed-form routines.
pub type Amplitude32 = num_complex::Complex32;
