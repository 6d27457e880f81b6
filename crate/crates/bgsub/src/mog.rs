//! Adaptive per-pixel mixture of Gaussians.
//!
//! Each pixel carries K weighted isotropic Gaussians updated online. An
//! observation within `match_sigmas` standard deviations of a component
//! reinforces it; otherwise the least probable component is replaced and
//! the pixel is foreground. Components with high weight and low variance
//! form the background model.

use crate::error::{Error, Result};
use crate::imaging::{ClassMask, Frame, PixelClass, Rgb};

/// One weighted isotropic Gaussian. The variance is shared across the
/// three color channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: [f64; 3],
    pub variance: f64,
}

impl GaussianComponent {
    /// Ranking key: high weight and low variance come first.
    fn fitness(&self) -> f64 {
        self.weight / self.variance.sqrt()
    }
}

/// The K-component mixture owned by a single pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMixture {
    components: Vec<GaussianComponent>,
}

impl PixelMixture {
    /// Fresh mixture: all probability mass on one component centered at
    /// the first observation, remaining slots parked at the same mean
    /// with zero weight.
    pub fn new(first: [f64; 3], params: &MogParams) -> PixelMixture {
        let mut components = vec![
            GaussianComponent {
                weight: 0.0,
                mean: first,
                variance: params.init_variance,
            };
            params.k
        ];
        components[0].weight = 1.0;
        PixelMixture { components }
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn weight_sum(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    fn renormalize(&mut self) {
        let sum = self.weight_sum();
        if sum > 0.0 {
            for c in &mut self.components {
                c.weight /= sum;
            }
        }
    }
}

/// Mixture model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MogParams {
    /// Number of Gaussians per pixel, 3 to 5.
    pub k: usize,
    /// Blend factor of the online weight update.
    pub learning_rate: f64,
    /// Match radius in standard deviations.
    pub match_sigmas: f64,
    /// Cumulative weight portion that counts as background.
    pub background_portion: f64,
    /// Variance assigned to newly created components.
    pub init_variance: f64,
    /// Weight assigned to newly created components, before renormalization.
    pub init_weight: f64,
}

impl Default for MogParams {
    fn default() -> Self {
        MogParams {
            k: 3,
            learning_rate: 0.05,
            match_sigmas: 2.5,
            background_portion: 0.7,
            init_variance: 900.0,
            init_weight: 0.05,
        }
    }
}

impl MogParams {
    pub fn validate(&self) -> Result<()> {
        let ok = (3..=5).contains(&self.k)
            && 0.0 < self.learning_rate
            && self.learning_rate < 1.0
            && self.match_sigmas > 0.0
            && 0.0 < self.background_portion
            && self.background_portion < 1.0
            && self.init_variance > 0.0
            && 0.0 < self.init_weight
            && self.init_weight < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "mixture parameters out of range: {self:?}"
            )))
        }
    }
}

/// Variances never decay below this; at tiny variances the pdf-driven
/// learning factor saturates and would otherwise collapse a component
/// to zero variance.
const VARIANCE_FLOOR: f64 = 1e-4;

/// Trivariate isotropic normal density.
pub fn gaussian_pdf(x: [f64; 3], mean: [f64; 3], variance: f64) -> Result<f64> {
    if variance <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gaussian variance must be positive, got {variance}"
        )));
    }
    let tau = std::f64::consts::TAU * variance;
    let norm = 1.0 / (tau * tau.sqrt());
    Ok(norm * (-0.5 * dist2(x, mean) / variance).exp())
}

fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// True when `x` lies within `match_sigmas` standard deviations of the
/// component mean (inclusive).
pub fn matches(x: [f64; 3], component: &GaussianComponent, match_sigmas: f64) -> bool {
    dist2(x, component.mean) <= match_sigmas * match_sigmas * component.variance
}

/// Indices of the background components: rank by weight/sigma descending
/// and take the minimal prefix whose cumulative weight exceeds `portion`.
/// Ties rank the lower index first.
pub fn background_distributions(mixture: &PixelMixture, portion: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..mixture.components.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = mixture.components[a].fitness();
        let fb = mixture.components[b].fitness();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    let mut cumulative = 0.0;
    let mut background = Vec::new();
    for index in order {
        background.push(index);
        cumulative += mixture.components[index].weight;
        if cumulative > portion {
            break;
        }
    }
    background
}

fn blend(old: f64, new: f64, rho: f64) -> f64 {
    (1.0 - rho) * old + rho * new
}

/// One online update step for a single pixel.
///
/// The best-matching component (smallest normalized distance among those
/// within the match radius) takes indicator 1 in the weight update and
/// has its mean and variance pulled toward the observation with
/// `rho = learning_rate * pdf`, clamped to 1. When nothing matches, the
/// component with the lowest weight/sigma ranking is replaced by a fresh
/// Gaussian centered at the observation and the pixel is foreground.
/// Weights are renormalized after every step.
pub fn update_pixel(mixture: &mut PixelMixture, x: [f64; 3], params: &MogParams) -> PixelClass {
    let beta = params.learning_rate;

    // best match among live components
    let mut best: Option<(usize, f64)> = None;
    for (index, component) in mixture.components.iter().enumerate() {
        if component.weight == 0.0 || !matches(x, component, params.match_sigmas) {
            continue;
        }
        let normalized = dist2(x, component.mean) / component.variance;
        if best.is_none_or(|(_, d)| normalized < d) {
            best = Some((index, normalized));
        }
    }

    match best {
        Some((matched, _)) => {
            for (index, component) in mixture.components.iter_mut().enumerate() {
                let indicator = if index == matched { 1.0 } else { 0.0 };
                component.weight = blend(component.weight, indicator, beta);
            }
            let component = &mut mixture.components[matched];
            let rho = (beta
                * gaussian_pdf(x, component.mean, component.variance)
                    .expect("variance kept positive"))
            .min(1.0);
            let old_mean = component.mean;
            component.mean = [
                blend(old_mean[0], x[0], rho),
                blend(old_mean[1], x[1], rho),
                blend(old_mean[2], x[2], rho),
            ];
            component.variance =
                blend(component.variance, dist2(x, component.mean), rho).max(VARIANCE_FLOOR);
            mixture.renormalize();

            if background_distributions(mixture, params.background_portion).contains(&matched) {
                PixelClass::Background
            } else {
                PixelClass::Foreground
            }
        }
        None => {
            for component in &mut mixture.components {
                component.weight = blend(component.weight, 0.0, beta);
            }
            let replaced = (0..mixture.components.len())
                .min_by(|&a, &b| {
                    mixture.components[a]
                        .fitness()
                        .partial_cmp(&mixture.components[b].fitness())
                        .unwrap()
                })
                .expect("mixture is never empty");
            mixture.components[replaced] = GaussianComponent {
                weight: params.init_weight,
                mean: x,
                variance: params.init_variance,
            };
            mixture.renormalize();
            PixelClass::Foreground
        }
    }
}

/// Frame-shaped collection of per-pixel mixtures.
#[derive(Debug, Clone)]
pub struct MogModel {
    width: u32,
    height: u32,
    mixtures: Vec<PixelMixture>,
    params: MogParams,
}

impl MogModel {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn params(&self) -> &MogParams {
        &self.params
    }

    pub fn mixture(&self, x: u32, y: u32) -> &PixelMixture {
        &self.mixtures[y as usize * self.width as usize + x as usize]
    }
}

fn rgbf(px: Rgb) -> [f64; 3] {
    [px[0] as f64, px[1] as f64, px[2] as f64]
}

/// Build a model from the first frame: per pixel, one full-weight
/// component at the observed color.
pub fn init_model(first_frame: &Frame, params: MogParams) -> Result<MogModel> {
    params.validate()?;
    let mixtures = first_frame
        .pixels()
        .iter()
        .map(|&px| PixelMixture::new(rgbf(px), &params))
        .collect();
    Ok(MogModel {
        width: first_frame.width(),
        height: first_frame.height(),
        mixtures,
        params,
    })
}

/// Advance the model by one frame and classify every pixel. Only
/// Background and Foreground labels are emitted.
pub fn process_frame(model: &mut MogModel, frame: &Frame) -> Result<ClassMask> {
    if frame.width() != model.width || frame.height() != model.height {
        return Err(Error::DimensionMismatch {
            expected_width: model.width,
            expected_height: model.height,
            width: frame.width(),
            height: frame.height(),
        });
    }
    let params = model.params;
    let labels = model
        .mixtures
        .iter_mut()
        .zip(frame.pixels())
        .map(|(mixture, &px)| update_pixel(mixture, rgbf(px), &params))
        .collect();
    ClassMask::new(model.width, model.height, labels)
}

/// Initialize from the first frame, then process every frame in order.
/// Emits one mask per input frame.
pub fn run_mog(frames: &[Frame], params: MogParams) -> Result<Vec<ClassMask>> {
    let first = frames.first().ok_or(Error::EmptySequence)?;
    let mut model = init_model(first, params)?;
    frames.iter().map(|f| process_frame(&mut model, f)).collect()
}
