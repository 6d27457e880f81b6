//! Statistical background subtraction with shadow detection.
//!
//! A trained model stores each pixel's expected background color. An
//! observation is decomposed into a brightness factor along the expected
//! color and a chromaticity residual orthogonal to it; thresholds on the
//! two parts separate background, shadow, highlight and foreground.

use crate::error::{Error, Result};
use crate::imaging::{ClassMask, Frame, PixelClass};

/// Real-valued RGB triple.
pub type Rgbf = [f64; 3];

/// Per-pixel expected background color, trained from foreground-free frames.
#[derive(Debug, Clone, PartialEq)]
pub struct StatBackgroundModel {
    width: u32,
    height: u32,
    alpha: Vec<Rgbf>,
}

impl StatBackgroundModel {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Expected colors, row-major.
    pub fn alpha(&self) -> &[Rgbf] {
        &self.alpha
    }
}

/// Classification thresholds.
///
/// `tau_delta` bounds the chromaticity residual (8-bit color distance
/// units). The brightness factor is background inside
/// `[tau_gamma_lo, tau_gamma_hi]`, shadow in `[gamma_min, tau_gamma_lo)`,
/// highlight above `tau_gamma_hi` and foreground below `gamma_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatParams {
    pub tau_delta: f64,
    pub tau_gamma_lo: f64,
    pub tau_gamma_hi: f64,
    pub gamma_min: f64,
}

impl Default for StatParams {
    fn default() -> Self {
        StatParams {
            tau_delta: 10.0,
            tau_gamma_lo: 0.8,
            tau_gamma_hi: 1.2,
            gamma_min: 0.3,
        }
    }
}

impl StatParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tau_delta >= 0.0
            && 0.0 <= self.gamma_min
            && self.gamma_min < self.tau_gamma_lo
            && self.tau_gamma_lo < 1.0
            && 1.0 < self.tau_gamma_hi;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "statistical thresholds must satisfy 0 <= gamma_min < gamma_lo < 1 < gamma_hi \
                 and tau_delta >= 0, got {self:?}"
            )))
        }
    }
}

/// Brightness factor and chromaticity residual of one observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distortion {
    pub gamma: f64,
    pub delta: f64,
}

fn dot(a: Rgbf, b: Rgbf) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn rgbf(px: [u8; 3]) -> Rgbf {
    [px[0] as f64, px[1] as f64, px[2] as f64]
}

/// Train a background model: per-pixel per-channel arithmetic mean over
/// the frames. The scene is assumed empty of foreground.
pub fn train(frames: &[Frame]) -> Result<StatBackgroundModel> {
    let first = frames.first().ok_or(Error::EmptySequence)?;
    let (width, height) = (first.width(), first.height());
    let mut alpha = vec![[0.0f64; 3]; first.pixels().len()];
    for frame in frames {
        if !frame.same_dims(first) {
            return Err(Error::DimensionMismatch {
                expected_width: width,
                expected_height: height,
                width: frame.width(),
                height: frame.height(),
            });
        }
        for (acc, &px) in alpha.iter_mut().zip(frame.pixels()) {
            acc[0] += px[0] as f64;
            acc[1] += px[1] as f64;
            acc[2] += px[2] as f64;
        }
    }
    let n = frames.len() as f64;
    for acc in &mut alpha {
        acc[0] /= n;
        acc[1] /= n;
        acc[2] /= n;
    }
    Ok(StatBackgroundModel {
        width,
        height,
        alpha,
    })
}

/// Brightness distortion: the scale factor along `alpha` that brings it
/// closest to `beta` in the least-squares sense, `(beta . alpha) / (alpha . alpha)`.
///
/// Equals 1 when the observation matches the expectation, below 1 for
/// darker observations and above 1 for brighter ones.
pub fn brightness_distortion(alpha: Rgbf, beta: Rgbf) -> Result<f64> {
    let aa = dot(alpha, alpha);
    if aa == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    Ok(dot(beta, alpha) / aa)
}

/// Chromaticity distortion: Euclidean distance between the observation
/// and the brightness-scaled expected color, `|| beta - gamma * alpha ||`.
pub fn chromaticity_distortion(alpha: Rgbf, beta: Rgbf, gamma: f64) -> f64 {
    let r = [
        beta[0] - gamma * alpha[0],
        beta[1] - gamma * alpha[1],
        beta[2] - gamma * alpha[2],
    ];
    dot(r, r).sqrt()
}

/// Both distortion components at once.
pub fn distortion(alpha: Rgbf, beta: Rgbf) -> Result<Distortion> {
    let gamma = brightness_distortion(alpha, beta)?;
    Ok(Distortion {
        gamma,
        delta: chromaticity_distortion(alpha, beta, gamma),
    })
}

/// Classify one observation against its expected background color.
///
/// Pixels whose expected color is exactly black carry no brightness
/// information; they classify by the raw magnitude of the observation
/// against `tau_delta`.
pub fn classify_pixel(alpha: Rgbf, beta: Rgbf, params: &StatParams) -> PixelClass {
    if alpha == [0.0, 0.0, 0.0] {
        return if dot(beta, beta).sqrt() <= params.tau_delta {
            PixelClass::Background
        } else {
            PixelClass::Foreground
        };
    }
    let gamma = dot(beta, alpha) / dot(alpha, alpha);
    let delta = chromaticity_distortion(alpha, beta, gamma);
    if delta > params.tau_delta {
        PixelClass::Foreground
    } else if params.tau_gamma_lo <= gamma && gamma <= params.tau_gamma_hi {
        PixelClass::Background
    } else if params.gamma_min <= gamma && gamma < params.tau_gamma_lo {
        PixelClass::Shadow
    } else if gamma > params.tau_gamma_hi {
        PixelClass::Highlight
    } else {
        // gamma below the darkness floor: too dark to be a shadow
        PixelClass::Foreground
    }
}

/// Classify one frame against the trained model.
pub fn classify_frame(
    model: &StatBackgroundModel,
    frame: &Frame,
    params: &StatParams,
) -> Result<ClassMask> {
    if frame.width() != model.width || frame.height() != model.height {
        return Err(Error::DimensionMismatch {
            expected_width: model.width,
            expected_height: model.height,
            width: frame.width(),
            height: frame.height(),
        });
    }
    let labels = model
        .alpha
        .iter()
        .zip(frame.pixels())
        .map(|(&alpha, &px)| classify_pixel(alpha, rgbf(px), params))
        .collect();
    ClassMask::new(frame.width(), frame.height(), labels)
}

/// Classify a whole sequence. The model is static: one mask per frame,
/// no background update.
pub fn run_statistical(
    model: &StatBackgroundModel,
    frames: &[Frame],
    params: &StatParams,
) -> Result<Vec<ClassMask>> {
    params.validate()?;
    frames
        .iter()
        .map(|f| classify_frame(model, f, params))
        .collect()
}
