//! Deterministic synthetic sequences with pixel-exact ground truth.
//!
//! A scene is composed per frame as background, then global illumination,
//! then shadow regions, then objects, then additive noise, with channels
//! clamped to 0..=255 after each multiplicative step. Objects are not
//! dimmed by illumination or shadows, which keeps the ground truth
//! unambiguous. Rectangles wrap toroidally at the frame edges so linear
//! motion can run for arbitrarily many frames.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imaging::{ClassMask, Frame, PixelClass, Rgb};

/// Background or object surface: one flat color, or a per-pixel color
/// hashed from a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fill {
    Flat(Rgb),
    Textured { seed: u64 },
}

impl Fill {
    fn color_at(&self, x: u32, y: u32, width: u32) -> Rgb {
        match *self {
            Fill::Flat(color) => color,
            Fill::Textured { seed } => {
                let h = splitmix64(seed ^ (y as u64 * width as u64 + x as u64));
                [(h >> 16) as u8, (h >> 32) as u8, (h >> 48) as u8]
            }
        }
    }
}

/// Global per-frame brightness multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Illumination {
    Constant(f64),
    /// Linear ramp from `from` at the first frame to `to` at the last.
    Ramp { from: f64, to: f64 },
}

impl Illumination {
    fn at(&self, frame: usize, frame_count: usize) -> f64 {
        match *self {
            Illumination::Constant(m) => m,
            Illumination::Ramp { from, to } => {
                if frame_count <= 1 {
                    from
                } else {
                    from + (to - from) * frame as f64 / (frame_count - 1) as f64
                }
            }
        }
    }
}

/// Axis-aligned rectangle at frame 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub w: u32,
    pub h: u32,
}

/// A moving rectangle visible between `appear_frame` and
/// `disappear_frame` (inclusive). Its position at frame `k` is the
/// frame-0 rect displaced by `velocity * k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectSpec {
    pub rect: Rect,
    pub velocity: (i64, i64),
    pub fill: Fill,
    pub appear_frame: usize,
    pub disappear_frame: usize,
}

/// A dimmed region, same motion model as objects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowSpec {
    pub rect: Rect,
    pub velocity: (i64, i64),
    pub multiplier: f64,
    pub appear_frame: usize,
    pub disappear_frame: usize,
}

/// Complete description of a synthetic sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub width: u32,
    pub height: u32,
    pub frame_count: usize,
    pub background: Fill,
    pub illumination: Illumination,
    pub objects: Vec<ObjectSpec>,
    pub shadows: Vec<ShadowSpec>,
    pub noise_sigma: f64,
    pub rng_seed: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn round_clamp(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Row-major pixel indices covered by `rect` displaced to frame `k`,
/// wrapped toroidally.
fn covered_indices(
    rect: Rect,
    velocity: (i64, i64),
    frame: usize,
    width: u32,
    height: u32,
) -> impl Iterator<Item = usize> {
    let k = frame as i64;
    let x0 = rect.x + velocity.0 * k;
    let y0 = rect.y + velocity.1 * k;
    let (w, h) = (width as i64, height as i64);
    (0..rect.h as i64).flat_map(move |dy| {
        let y = (y0 + dy).rem_euclid(h);
        (0..rect.w as i64).map(move |dx| {
            let x = (x0 + dx).rem_euclid(w);
            (y * w + x) as usize
        })
    })
}

fn active(appear: usize, disappear: usize, frame: usize) -> bool {
    appear <= frame && frame <= disappear
}

/// Box-Muller transform over a ChaCha8 stream; each frame draws from its
/// own derived seed so generation order does not matter.
struct NoiseSource {
    rng: ChaCha8Rng,
    sigma: f64,
    spare: Option<f64>,
}

impl NoiseSource {
    fn for_frame(seed: u64, frame: usize, sigma: f64) -> NoiseSource {
        NoiseSource {
            rng: ChaCha8Rng::seed_from_u64(splitmix64(seed) ^ splitmix64(frame as u64 + 1)),
            sigma,
            spare: None,
        }
    }

    fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z * self.sigma;
        }
        let u1: f64 = self.rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = self.rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c * self.sigma
    }
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 || self.frame_count == 0 {
            return Err(Error::InvalidParameter(
                "scene needs nonzero dimensions and at least one frame".into(),
            ));
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::InvalidParameter("noise_sigma must be >= 0".into()));
        }
        for frame in 0..self.frame_count {
            let m = self.illumination.at(frame, self.frame_count);
            if !m.is_finite() || m <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "illumination multiplier must stay positive, got {m} at frame {frame}"
                )));
            }
        }
        for (index, object) in self.objects.iter().enumerate() {
            if object.rect.w > self.width || object.rect.h > self.height {
                return Err(Error::ObjectTooLarge {
                    index,
                    width: self.width,
                    height: self.height,
                });
            }
            if object.appear_frame > object.disappear_frame {
                return Err(Error::InvalidParameter(format!(
                    "object {index} appears after it disappears"
                )));
            }
        }
        for (index, shadow) in self.shadows.iter().enumerate() {
            if shadow.rect.w > self.width || shadow.rect.h > self.height {
                return Err(Error::ObjectTooLarge {
                    index,
                    width: self.width,
                    height: self.height,
                });
            }
            if !(shadow.multiplier > 0.0 && shadow.multiplier < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "shadow {index} multiplier must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// Render the sequence and its ground truth.
pub fn generate(spec: &SceneSpec) -> Result<(Vec<Frame>, Vec<ClassMask>)> {
    spec.validate()?;
    let (width, height) = (spec.width, spec.height);
    let pixel_count = width as usize * height as usize;

    let base: Vec<Rgb> = (0..height)
        .flat_map(|y| (0..width).map(move |x| (x, y)))
        .map(|(x, y)| spec.background.color_at(x, y, width))
        .collect();

    let mut frames = Vec::with_capacity(spec.frame_count);
    let mut truths = Vec::with_capacity(spec.frame_count);

    for k in 0..spec.frame_count {
        let illumination = spec.illumination.at(k, spec.frame_count);
        let mut pixels: Vec<Rgb> = if illumination == 1.0 {
            base.clone()
        } else {
            base.iter()
                .map(|px| px.map(|c| round_clamp(c as f64 * illumination)))
                .collect()
        };
        let mut truth = ClassMask::filled(width, height, PixelClass::Background);

        for shadow in &spec.shadows {
            if !active(shadow.appear_frame, shadow.disappear_frame, k) {
                continue;
            }
            for index in covered_indices(shadow.rect, shadow.velocity, k, width, height) {
                pixels[index] = pixels[index].map(|c| round_clamp(c as f64 * shadow.multiplier));
                truth.set(
                    (index % width as usize) as u32,
                    (index / width as usize) as u32,
                    PixelClass::Shadow,
                );
            }
        }

        for object in &spec.objects {
            if !active(object.appear_frame, object.disappear_frame, k) {
                continue;
            }
            for index in covered_indices(object.rect, object.velocity, k, width, height) {
                let x = (index % width as usize) as u32;
                let y = (index / width as usize) as u32;
                pixels[index] = object.fill.color_at(x, y, width);
                truth.set(x, y, PixelClass::Foreground);
            }
        }

        if spec.noise_sigma > 0.0 {
            let mut noise = NoiseSource::for_frame(spec.rng_seed, k, spec.noise_sigma);
            for px in &mut pixels {
                for channel in px.iter_mut() {
                    *channel = round_clamp(*channel as f64 + noise.sample());
                }
            }
        }

        debug_assert_eq!(pixels.len(), pixel_count);
        frames.push(Frame::new(width, height, pixels)?);
        truths.push(truth);
    }
    Ok((frames, truths))
}

// ---------------------------------------------------------------------------
// The standard scene suite

/// QVGA scenes exercising the classic failure modes: a uniform mover
/// (interior-hole case), an intruder that halts (absorption case), a cast
/// shadow, a slow illumination ramp, and sensor noise over a static scene.
pub fn standard_suite() -> Vec<(&'static str, SceneSpec)> {
    let qvga = |objects, shadows, noise_sigma, illumination, rng_seed| SceneSpec {
        width: 320,
        height: 240,
        frame_count: 100,
        background: Fill::Flat([50, 50, 50]),
        illumination,
        objects,
        shadows,
        noise_sigma,
        rng_seed,
    };
    let steady = Illumination::Constant(1.0);

    let uniform_mover = qvga(
        vec![ObjectSpec {
            rect: Rect {
                x: 0,
                y: 100,
                w: 40,
                h: 40,
            },
            velocity: (5, 0),
            fill: Fill::Flat([200, 200, 200]),
            appear_frame: 0,
            disappear_frame: 99,
        }],
        vec![],
        0.0,
        steady,
        11,
    );

    // moves right by 5 px/frame until frame 49, then holds still at
    // x = 270 from frame 50 on; expressed as a moving object handing
    // over to a static one
    let stationary_intruder = {
        let mut spec = qvga(
            vec![
                ObjectSpec {
                    rect: Rect {
                        x: 20,
                        y: 100,
                        w: 40,
                        h: 40,
                    },
                    velocity: (5, 0),
                    fill: Fill::Flat([200, 70, 70]),
                    appear_frame: 0,
                    disappear_frame: 49,
                },
                ObjectSpec {
                    rect: Rect {
                        x: 270,
                        y: 100,
                        w: 40,
                        h: 40,
                    },
                    velocity: (0, 0),
                    fill: Fill::Flat([200, 70, 70]),
                    appear_frame: 50,
                    disappear_frame: 99,
                },
            ],
            vec![],
            0.0,
            steady,
            22,
        );
        spec.background = Fill::Flat([40, 40, 40]);
        spec
    };

    let shadow_cast = {
        let mut spec = qvga(
            vec![],
            vec![ShadowSpec {
                rect: Rect {
                    x: 80,
                    y: 60,
                    w: 160,
                    h: 120,
                },
                velocity: (0, 0),
                multiplier: 0.6,
                appear_frame: 20,
                disappear_frame: 99,
            }],
            0.0,
            steady,
            33,
        );
        spec.background = Fill::Flat([100, 120, 140]);
        spec
    };

    let illumination_ramp = qvga(
        vec![ObjectSpec {
            rect: Rect {
                x: 20,
                y: 60,
                w: 40,
                h: 40,
            },
            velocity: (2, 0),
            fill: Fill::Flat([210, 180, 60]),
            appear_frame: 0,
            disappear_frame: 99,
        }],
        vec![],
        0.0,
        Illumination::Ramp { from: 1.0, to: 0.8 },
        44,
    );

    let noisy_static = {
        let mut spec = qvga(vec![], vec![], 5.0, steady, 55);
        spec.background = Fill::Flat([128, 128, 128]);
        spec
    };

    vec![
        ("uniform_mover", uniform_mover),
        ("stationary_intruder", stationary_intruder),
        ("shadow_cast", shadow_cast),
        ("illumination_ramp", illumination_ramp),
        ("noisy_static", noisy_static),
    ]
}

/// Look up one suite scene by name.
pub fn suite_scene(name: &str) -> Option<SceneSpec> {
    standard_suite()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, spec)| spec)
}

// ---------------------------------------------------------------------------
// Flat key = value scene files

fn fill_to_string(fill: &Fill) -> String {
    match fill {
        Fill::Flat([r, g, b]) => format!("{r} {g} {b}"),
        Fill::Textured { seed } => format!("texture {seed}"),
    }
}

/// Serialize to the `key = value` scene file format.
pub fn spec_to_string(spec: &SceneSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "width = {}", spec.width);
    let _ = writeln!(out, "height = {}", spec.height);
    let _ = writeln!(out, "frames = {}", spec.frame_count);
    let _ = writeln!(out, "background = {}", fill_to_string(&spec.background));
    match spec.illumination {
        Illumination::Constant(m) => {
            let _ = writeln!(out, "illumination = {m}");
        }
        Illumination::Ramp { from, to } => {
            let _ = writeln!(out, "illumination = ramp {from} {to}");
        }
    }
    let _ = writeln!(out, "noise_sigma = {}", spec.noise_sigma);
    let _ = writeln!(out, "seed = {}", spec.rng_seed);
    for (i, o) in spec.objects.iter().enumerate() {
        let _ = writeln!(
            out,
            "object.{i}.rect = {} {} {} {}",
            o.rect.x, o.rect.y, o.rect.w, o.rect.h
        );
        let _ = writeln!(out, "object.{i}.velocity = {} {}", o.velocity.0, o.velocity.1);
        let _ = writeln!(out, "object.{i}.fill = {}", fill_to_string(&o.fill));
        let _ = writeln!(out, "object.{i}.appear = {}", o.appear_frame);
        let _ = writeln!(out, "object.{i}.disappear = {}", o.disappear_frame);
    }
    for (i, s) in spec.shadows.iter().enumerate() {
        let _ = writeln!(
            out,
            "shadow.{i}.rect = {} {} {} {}",
            s.rect.x, s.rect.y, s.rect.w, s.rect.h
        );
        let _ = writeln!(out, "shadow.{i}.velocity = {} {}", s.velocity.0, s.velocity.1);
        let _ = writeln!(out, "shadow.{i}.multiplier = {}", s.multiplier);
        let _ = writeln!(out, "shadow.{i}.appear = {}", s.appear_frame);
        let _ = writeln!(out, "shadow.{i}.disappear = {}", s.disappear_frame);
    }
    out
}

#[derive(Default)]
struct Builder {
    rect: Option<Rect>,
    velocity: (i64, i64),
    fill: Option<Fill>,
    multiplier: Option<f64>,
    appear: usize,
    disappear: Option<usize>,
}

/// Parse the `key = value` scene file format. Blank lines and `#`
/// comments are ignored; objects and shadows use indexed key prefixes
/// (`object.0.rect = ...`).
pub fn parse_spec(text: &str) -> Result<SceneSpec> {
    let mut width = None;
    let mut height = None;
    let mut frames = None;
    let mut background = None;
    let mut illumination = Illumination::Constant(1.0);
    let mut noise_sigma = 0.0;
    let mut seed = 0u64;
    let mut objects: BTreeMap<usize, Builder> = BTreeMap::new();
    let mut shadows: BTreeMap<usize, Builder> = BTreeMap::new();

    let fail = |line: usize, reason: &str| Error::SpecParse {
        line,
        reason: reason.to_string(),
    };

    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| fail(line, "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        let tokens: Vec<&str> = value.split_whitespace().collect();

        let parse_u32 = |t: &str| t.parse::<u32>().map_err(|_| fail(line, "expected an integer"));
        let parse_i64 = |t: &str| t.parse::<i64>().map_err(|_| fail(line, "expected an integer"));
        let parse_f64 = |t: &str| t.parse::<f64>().map_err(|_| fail(line, "expected a number"));
        let parse_usize =
            |t: &str| t.parse::<usize>().map_err(|_| fail(line, "expected an integer"));
        let parse_fill = |tokens: &[&str]| -> Result<Fill> {
            match tokens {
                ["texture", seed] => Ok(Fill::Textured {
                    seed: seed.parse().map_err(|_| fail(line, "bad texture seed"))?,
                }),
                [r, g, b] => Ok(Fill::Flat([
                    r.parse().map_err(|_| fail(line, "bad channel value"))?,
                    g.parse().map_err(|_| fail(line, "bad channel value"))?,
                    b.parse().map_err(|_| fail(line, "bad channel value"))?,
                ])),
                _ => Err(fail(line, "expected `R G B` or `texture SEED`")),
            }
        };

        if let Some(rest) = key.strip_prefix("object.").or(key.strip_prefix("shadow.")) {
            let is_object = key.starts_with("object.");
            let (index, field) = rest
                .split_once('.')
                .ok_or_else(|| fail(line, "expected `object.N.field`"))?;
            let index: usize = index.parse().map_err(|_| fail(line, "bad index"))?;
            let builder = if is_object {
                objects.entry(index).or_default()
            } else {
                shadows.entry(index).or_default()
            };
            match (field, tokens.as_slice()) {
                ("rect", [x, y, w, h]) => {
                    builder.rect = Some(Rect {
                        x: parse_i64(x)?,
                        y: parse_i64(y)?,
                        w: parse_u32(w)?,
                        h: parse_u32(h)?,
                    })
                }
                ("velocity", [dx, dy]) => builder.velocity = (parse_i64(dx)?, parse_i64(dy)?),
                ("fill", _) if is_object => builder.fill = Some(parse_fill(&tokens)?),
                ("multiplier", [m]) if !is_object => builder.multiplier = Some(parse_f64(m)?),
                ("appear", [f]) => builder.appear = parse_usize(f)?,
                ("disappear", [f]) => builder.disappear = Some(parse_usize(f)?),
                _ => return Err(fail(line, &format!("unknown or malformed field {field:?}"))),
            }
            continue;
        }

        match (key, tokens.as_slice()) {
            ("width", [v]) => width = Some(parse_u32(v)?),
            ("height", [v]) => height = Some(parse_u32(v)?),
            ("frames", [v]) => frames = Some(parse_usize(v)?),
            ("background", _) => background = Some(parse_fill(&tokens)?),
            ("illumination", ["ramp", from, to]) => {
                illumination = Illumination::Ramp {
                    from: parse_f64(from)?,
                    to: parse_f64(to)?,
                }
            }
            ("illumination", [m]) => illumination = Illumination::Constant(parse_f64(m)?),
            ("noise_sigma", [v]) => noise_sigma = parse_f64(v)?,
            ("seed", [v]) => {
                seed = v.parse().map_err(|_| fail(line, "expected an integer"))?
            }
            _ => return Err(fail(line, &format!("unknown or malformed key {key:?}"))),
        }
    }

    let frame_count = frames.ok_or_else(|| fail(0, "missing `frames`"))?;
    let last = frame_count.saturating_sub(1);
    let spec = SceneSpec {
        width: width.ok_or_else(|| fail(0, "missing `width`"))?,
        height: height.ok_or_else(|| fail(0, "missing `height`"))?,
        frame_count,
        background: background.ok_or_else(|| fail(0, "missing `background`"))?,
        illumination,
        objects: objects
            .into_iter()
            .map(|(index, b)| {
                Ok(ObjectSpec {
                    rect: b
                        .rect
                        .ok_or_else(|| fail(0, &format!("object {index} missing rect")))?,
                    velocity: b.velocity,
                    fill: b
                        .fill
                        .ok_or_else(|| fail(0, &format!("object {index} missing fill")))?,
                    appear_frame: b.appear,
                    disappear_frame: b.disappear.unwrap_or(last),
                })
            })
            .collect::<Result<_>>()?,
        shadows: shadows
            .into_iter()
            .map(|(index, b)| {
                Ok(ShadowSpec {
                    rect: b
                        .rect
                        .ok_or_else(|| fail(0, &format!("shadow {index} missing rect")))?,
                    velocity: b.velocity,
                    multiplier: b
                        .multiplier
                        .ok_or_else(|| fail(0, &format!("shadow {index} missing multiplier")))?,
                    appear_frame: b.appear,
                    disappear_frame: b.disappear.unwrap_or(last),
                })
            })
            .collect::<Result<_>>()?,
        noise_sigma,
        rng_seed: seed,
    };
    spec.validate()?;
    Ok(spec)
}
