//! Evaluation and benchmarking: pixel-wise confusion matrices,
//! per-class precision/recall/F1, wall-clock speed and analytic model
//! memory, plus the three-way algorithm comparison report.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::frame_diff::{self, FrameDiffParams};
use crate::imaging::{to_grayscale, ClassMask, Frame, PixelClass};
use crate::mog::{self, MogParams};
use crate::statistical::{self, StatParams};
use crate::synth::{generate, SceneSpec};

/// Pixel-wise tally indexed `[ground truth][predicted]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    counts: [[u64; 4]; 4],
}

impl ConfusionMatrix {
    /// Tally two equally shaped mask sequences.
    pub fn tally(predicted: &[ClassMask], truth: &[ClassMask]) -> Result<ConfusionMatrix> {
        if predicted.len() != truth.len() {
            return Err(Error::LengthMismatch {
                predicted: predicted.len(),
                truth: truth.len(),
            });
        }
        let mut counts = [[0u64; 4]; 4];
        for (p, t) in predicted.iter().zip(truth) {
            if p.width() != t.width() || p.height() != t.height() {
                return Err(Error::DimensionMismatch {
                    expected_width: t.width(),
                    expected_height: t.height(),
                    width: p.width(),
                    height: p.height(),
                });
            }
            for (&pc, &tc) in p.labels().iter().zip(t.labels()) {
                counts[tc.index()][pc.index()] += 1;
            }
        }
        Ok(ConfusionMatrix { counts })
    }

    pub fn count(&self, truth: PixelClass, predicted: PixelClass) -> u64 {
        self.counts[truth.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Pixels whose ground truth is `class`.
    pub fn truth_total(&self, class: PixelClass) -> u64 {
        self.counts[class.index()].iter().sum()
    }

    /// Pixels predicted as `class`.
    pub fn predicted_total(&self, class: PixelClass) -> u64 {
        self.counts.iter().map(|row| row[class.index()]).sum()
    }
}

/// Precision/recall/F1 for one class. A side is `None` when its
/// denominator is zero (the class never occurred there); F1 is defined
/// only when both sides are.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl ClassMetrics {
    fn from_counts(tp: u64, predicted: u64, truth: u64) -> ClassMetrics {
        let precision = (predicted > 0).then(|| tp as f64 / predicted as f64);
        let recall = (truth > 0).then(|| tp as f64 / truth as f64);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        };
        ClassMetrics {
            precision,
            recall,
            f1,
        }
    }
}

/// Accuracy summary of one predicted sequence against ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Accuracy {
    pub confusion: ConfusionMatrix,
    /// Metrics for classes present in truth or prediction, in class order.
    pub per_class: Vec<(PixelClass, ClassMetrics)>,
    /// Foreground-vs-rest with Shadow and Highlight folded into Background.
    pub binary_foreground: ClassMetrics,
}

/// Pixel-wise evaluation of predictions against ground truth.
pub fn evaluate(predicted: &[ClassMask], truth: &[ClassMask]) -> Result<Accuracy> {
    let confusion = ConfusionMatrix::tally(predicted, truth)?;
    let mut per_class = Vec::new();
    for class in PixelClass::ALL {
        let truth_total = confusion.truth_total(class);
        let predicted_total = confusion.predicted_total(class);
        if truth_total == 0 && predicted_total == 0 {
            continue; // absent from both: undefined, omitted
        }
        let tp = confusion.count(class, class);
        per_class.push((
            class,
            ClassMetrics::from_counts(tp, predicted_total, truth_total),
        ));
    }

    let fg = PixelClass::Foreground;
    let tp = confusion.count(fg, fg);
    let binary_foreground =
        ClassMetrics::from_counts(tp, confusion.predicted_total(fg), confusion.truth_total(fg));

    Ok(Accuracy {
        confusion,
        per_class,
        binary_foreground,
    })
}

// ---------------------------------------------------------------------------
// Benchmarking

/// Algorithm selection plus its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgoConfig {
    FrameDiff(FrameDiffParams),
    Statistical {
        params: StatParams,
        train_frames: usize,
    },
    Mog(MogParams),
}

impl AlgoConfig {
    pub fn id(&self) -> &'static str {
        match self {
            AlgoConfig::FrameDiff(_) => "framediff",
            AlgoConfig::Statistical { .. } => "statistical",
            AlgoConfig::Mog(_) => "mog",
        }
    }

    /// Analytic model state size in bytes: the previous grayscale frame,
    /// the per-pixel expected color, or the per-pixel K-Gaussian mixture.
    pub fn model_memory_bytes(&self, width: u32, height: u32) -> u64 {
        let pixels = width as u64 * height as u64;
        match self {
            AlgoConfig::FrameDiff(_) => pixels,
            AlgoConfig::Statistical { .. } => pixels * 3 * 8,
            // weight + 3 mean channels + variance, 8-byte reals
            AlgoConfig::Mog(params) => pixels * params.k as u64 * 5 * 8,
        }
    }
}

/// Wall-clock speed over mask production only: I/O and model setup are
/// excluded, as is the first (warm-up) frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedStats {
    pub frames_per_second: f64,
    pub per_frame_ms_mean: f64,
    pub per_frame_ms_max: f64,
    pub model_memory_bytes: u64,
}

/// Masks plus speed from one benchmark pass. `mask_offset` is the index
/// of the input frame the first mask corresponds to.
#[derive(Debug, Clone)]
pub struct BenchmarkOutcome {
    pub masks: Vec<ClassMask>,
    pub mask_offset: usize,
    pub speed: SpeedStats,
}

/// Produce the masks for a run in its natural alignment, untimed.
pub fn run_algorithm(config: &AlgoConfig, frames: &[Frame]) -> Result<(Vec<ClassMask>, usize)> {
    match config {
        AlgoConfig::FrameDiff(params) => {
            let gray: Vec<_> = frames.iter().map(to_grayscale).collect();
            Ok((frame_diff::run_frame_diff(&gray, *params)?, 1))
        }
        AlgoConfig::Statistical {
            params,
            train_frames,
        } => {
            let n = *train_frames;
            if n == 0 || n >= frames.len() {
                return Err(Error::InvalidParameter(format!(
                    "train_frames must lie in 1..{}, got {n}",
                    frames.len()
                )));
            }
            let model = statistical::train(&frames[..n])?;
            Ok((statistical::run_statistical(&model, &frames[n..], params)?, n))
        }
        AlgoConfig::Mog(params) => Ok((mog::run_mog(frames, *params)?, 0)),
    }
}

/// Run one algorithm over the sequence, timing each produced mask.
pub fn benchmark(config: &AlgoConfig, frames: &[Frame]) -> Result<BenchmarkOutcome> {
    if frames.len() < 2 {
        return Err(Error::SequenceTooShort {
            len: frames.len(),
            min: 2,
        });
    }
    let first = &frames[0];
    let mut masks = Vec::new();
    let mut timings_ms = Vec::new();
    let mask_offset;

    match config {
        AlgoConfig::FrameDiff(params) => {
            mask_offset = 1;
            let mut prev = to_grayscale(first);
            for frame in &frames[1..] {
                let start = Instant::now();
                let gray = to_grayscale(frame);
                let mask = frame_diff::frame_difference(&prev, &gray, *params)?;
                timings_ms.push(start.elapsed().as_secs_f64() * 1e3);
                prev = gray;
                masks.push(mask);
            }
        }
        AlgoConfig::Statistical {
            params,
            train_frames,
        } => {
            let n = *train_frames;
            if n == 0 || n >= frames.len() {
                return Err(Error::InvalidParameter(format!(
                    "train_frames must lie in 1..{}, got {n}",
                    frames.len()
                )));
            }
            params.validate()?;
            mask_offset = n;
            let model = statistical::train(&frames[..n])?;
            for frame in &frames[n..] {
                let start = Instant::now();
                let mask = statistical::classify_frame(&model, frame, params)?;
                timings_ms.push(start.elapsed().as_secs_f64() * 1e3);
                masks.push(mask);
            }
        }
        AlgoConfig::Mog(params) => {
            mask_offset = 0;
            let mut model = mog::init_model(first, *params)?;
            for frame in frames {
                let start = Instant::now();
                let mask = mog::process_frame(&mut model, frame)?;
                timings_ms.push(start.elapsed().as_secs_f64() * 1e3);
                masks.push(mask);
            }
        }
    }

    if timings_ms.len() < 2 {
        return Err(Error::SequenceTooShort {
            len: frames.len(),
            min: mask_offset + 2,
        });
    }
    let timed = &timings_ms[1..]; // drop the warm-up frame
    let total_ms: f64 = timed.iter().sum();
    let mean = total_ms / timed.len() as f64;
    let max = timed.iter().cloned().fold(0.0f64, f64::max);
    Ok(BenchmarkOutcome {
        masks,
        mask_offset,
        speed: SpeedStats {
            frames_per_second: timed.len() as f64 / (total_ms / 1e3),
            per_frame_ms_mean: mean,
            per_frame_ms_max: max,
            model_memory_bytes: config.model_memory_bytes(first.width(), first.height()),
        },
    })
}

/// Benchmark against ground truth: masks are evaluated over the truth
/// slice they align with.
pub fn benchmark_with_truth(
    config: &AlgoConfig,
    frames: &[Frame],
    truth: &[ClassMask],
) -> Result<SequenceMetrics> {
    if frames.len() != truth.len() {
        return Err(Error::LengthMismatch {
            predicted: frames.len(),
            truth: truth.len(),
        });
    }
    let outcome = benchmark(config, frames)?;
    let accuracy = evaluate(&outcome.masks, &truth[outcome.mask_offset..])?;
    Ok(SequenceMetrics {
        accuracy,
        speed: outcome.speed,
    })
}

/// Everything the report needs for one algorithm on one sequence.
#[derive(Debug, Clone)]
pub struct SequenceMetrics {
    pub accuracy: Accuracy,
    pub speed: SpeedStats,
}

/// Parameters for the three-way comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub frame_diff: FrameDiffParams,
    pub statistical: StatParams,
    pub train_frames: usize,
    pub mog: MogParams,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            frame_diff: FrameDiffParams::default(),
            statistical: StatParams::default(),
            train_frames: 20,
            mog: MogParams::default(),
        }
    }
}

/// One row per algorithm.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub rows: Vec<(String, SequenceMetrics)>,
}

/// Generate the scene, then run all three algorithms against its ground
/// truth. Passes run sequentially so the timings share no hardware.
pub fn compare(spec: &SceneSpec, config: &CompareConfig) -> Result<CompareReport> {
    let (frames, truth) = generate(spec)?;
    let configs = [
        AlgoConfig::FrameDiff(config.frame_diff),
        AlgoConfig::Statistical {
            params: config.statistical,
            train_frames: config.train_frames,
        },
        AlgoConfig::Mog(config.mog),
    ];
    let mut rows = Vec::new();
    for algo in configs {
        let metrics = benchmark_with_truth(&algo, &frames, &truth)?;
        rows.push((algo.id().to_string(), metrics));
    }
    Ok(CompareReport { rows })
}

// ---------------------------------------------------------------------------
// Report output

pub const CSV_HEADER: &str =
    "algo,class,precision,recall,f1,fps,per_frame_ms_mean,per_frame_ms_max,model_memory_bytes";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with one row per (algorithm, class), classes absent from both
/// truth and prediction omitted, plus one `binary_foreground` row per
/// algorithm. Numbers use the shortest round-trip representation.
pub fn report_to_csv(rows: &[(String, SequenceMetrics)]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (algo, metrics) in rows {
        let speed = &metrics.speed;
        let mut push = |class: &str, m: &ClassMetrics| {
            let _ = writeln!(
                out,
                "{algo},{class},{},{},{},{},{},{},{}",
                opt(m.precision),
                opt(m.recall),
                opt(m.f1),
                speed.frames_per_second,
                speed.per_frame_ms_mean,
                speed.per_frame_ms_max,
                speed.model_memory_bytes,
            );
        };
        for (class, m) in &metrics.accuracy.per_class {
            push(class.name(), m);
        }
        push("binary_foreground", &metrics.accuracy.binary_foreground);
    }
    out
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub algo: String,
    pub class: String,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub fps: f64,
    pub per_frame_ms_mean: f64,
    pub per_frame_ms_max: f64,
    pub model_memory_bytes: u64,
}

/// Parse a report written by [`report_to_csv`].
pub fn parse_report_csv(text: &str) -> Result<Vec<CsvRow>> {
    let bad = |reason: String| Error::InvalidParameter(format!("csv: {reason}"));
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => return Err(bad(format!("unexpected header {other:?}"))),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(bad(format!("expected 9 fields, got {}", fields.len())));
        }
        let parse_opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|e| bad(format!("{e}")))
            }
        };
        let parse = |s: &str| -> Result<f64> { s.parse().map_err(|e| bad(format!("{e}"))) };
        rows.push(CsvRow {
            algo: fields[0].to_string(),
            class: fields[1].to_string(),
            precision: parse_opt(fields[2])?,
            recall: parse_opt(fields[3])?,
            f1: parse_opt(fields[4])?,
            fps: parse(fields[5])?,
            per_frame_ms_mean: parse(fields[6])?,
            per_frame_ms_max: parse(fields[7])?,
            model_memory_bytes: fields[8].parse().map_err(|e| bad(format!("{e}")))?,
        });
    }
    Ok(rows)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into())
}

/// Aligned plain-text table, one row per algorithm. The header notes how
/// masks align with the input: frame differencing starts at the second
/// frame and the statistical method starts after its training window.
pub fn report_to_text(rows: &[(String, SequenceMetrics)]) -> String {
    let mut out = String::new();
    out.push_str(
        "# masks: framediff starts at frame 2, statistical after its training window, mog covers all frames\n",
    );
    let _ = writeln!(
        out,
        "{:<12} {:>10} {:>13} {:>10} {:>10} {:>14} {:>14}",
        "algo", "binary_f1", "fg_precision", "fg_recall", "fps", "per_frame_ms", "memory_bytes"
    );
    for (algo, metrics) in rows {
        let b = &metrics.accuracy.binary_foreground;
        let _ = writeln!(
            out,
            "{:<12} {:>10} {:>13} {:>10} {:>10.1} {:>14.3} {:>14}",
            algo,
            fmt_opt(b.f1),
            fmt_opt(b.precision),
            fmt_opt(b.recall),
            metrics.speed.frames_per_second,
            metrics.speed.per_frame_ms_mean,
            metrics.speed.model_memory_bytes,
        );
    }
    out
}
