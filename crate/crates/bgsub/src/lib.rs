//! Background subtraction toolkit.
//!
//! Three per-pixel segmentation algorithms over a shared frame/mask
//! substrate, a deterministic synthetic-sequence generator with
//! pixel-exact ground truth, and a harness that scores accuracy, speed
//! and model memory:
//!
//! - [`frame_diff`]: threshold the absolute difference between
//!   consecutive grayscale frames. Cheapest, instantly adaptive, blind
//!   to anything that stops moving.
//! - [`statistical`]: per-pixel expected color with the observation
//!   split into brightness and chromaticity distortion, separating
//!   shadows and highlights from true foreground.
//! - [`mog`]: per-pixel adaptive mixture of K Gaussians with online
//!   weight/mean/variance updates.
//!
//! Frames travel as binary PPM, masks as binary PGM with Background,
//! Shadow, Highlight and Foreground encoded as 0/85/170/255 (see
//! [`imaging`]). The `bgsub` binary exposes `run`, `synth`, `bench` and
//! `compare` subcommands; the `examples/` directory shows the library
//! API for each capability.

pub mod error;
pub mod frame_diff;
pub mod harness;
pub mod imaging;
pub mod mog;
pub mod statistical;
pub mod synth;

pub use error::{Error, Result};
pub use imaging::{ClassMask, Frame, GrayFrame, PixelClass};
