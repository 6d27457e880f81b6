//! Frame differencing: threshold the absolute difference between
//! consecutive grayscale frames. The background model is just the
//! previous frame, so a pixel is foreground only while it is changing.

use crate::error::{Error, Result};
use crate::imaging::{ClassMask, GrayFrame, PixelClass};

/// Parameters for frame differencing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameDiffParams {
    /// Absolute-difference threshold. A pixel is foreground when the
    /// difference strictly exceeds it.
    pub threshold: u8,
}

impl Default for FrameDiffParams {
    fn default() -> Self {
        FrameDiffParams { threshold: 25 }
    }
}

/// Classify `cur` against `prev`: foreground where `|cur - prev| > threshold`.
///
/// Only Background and Foreground labels are emitted.
pub fn frame_difference(
    prev: &GrayFrame,
    cur: &GrayFrame,
    params: FrameDiffParams,
) -> Result<ClassMask> {
    if prev.width() != cur.width() || prev.height() != cur.height() {
        return Err(Error::DimensionMismatch {
            expected_width: prev.width(),
            expected_height: prev.height(),
            width: cur.width(),
            height: cur.height(),
        });
    }
    let threshold = params.threshold as i16;
    let labels = prev
        .pixels()
        .iter()
        .zip(cur.pixels())
        .map(|(&p, &c)| {
            if (c as i16 - p as i16).abs() > threshold {
                PixelClass::Foreground
            } else {
                PixelClass::Background
            }
        })
        .collect();
    ClassMask::new(cur.width(), cur.height(), labels)
}

/// Run frame differencing over a sequence. Emits `len - 1` masks; mask
/// `k` classifies frame `k + 1` against frame `k`.
pub fn run_frame_diff(frames: &[GrayFrame], params: FrameDiffParams) -> Result<Vec<ClassMask>> {
    if frames.len() < 2 {
        return Err(Error::SequenceTooShort {
            len: frames.len(),
            min: 2,
        });
    }
    frames
        .windows(2)
        .map(|w| frame_difference(&w[0], &w[1], params))
        .collect()
}
