//! Link-level building blocks for grant-free unsourced multiple access.
//!
//! The crate models the first (grant-free) phase of the 5G NR two-step random
//! access procedure and the sparse-block IDMA (SB-IDMA) variant over the
//! Gaussian and quasi-static Rayleigh fading multiple-access channels:
//!
//! * [`modulation`], [`frame`], [`signal`]: QPSK, frame arithmetic, SNR
//!   bookkeeping and complex sample vectors.
//! * [`channel`]: Gaussian / block-fading MAC with multiple receive antennas.
//! * [`codec`]: the (500,100) BG2 LDPC code with sum-product decoding, the
//!   CRC-aided polar code with adaptive SCL decoding, repetition combining.
//! * [`preamble`]: Zadoff-Chu and Gaussian preamble sets, message hashing,
//!   OMP activity detection.
//! * [`txproto`]: the two-step (OTO/MTO) and SB-IDMA transmitters.
//! * [`receiver`]: TIN and TIN-SIC receivers.
//! * [`trial`], [`bounds`]: seeded Monte Carlo trials, PUPE, reference curves.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. All floating-point math goes through `libm` so results do not
//! depend on the platform math library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod channel;
pub mod codec;
mod error;
pub mod frame;
pub(crate) mod math;
pub mod modulation;
pub mod preamble;
pub mod presets;
pub mod receiver;
pub mod rng;
pub mod signal;
pub mod trial;
pub mod txproto;

pub use error::{Error, Result};
pub use signal::{Complex, ComplexVec};
