//! Thin command-line front end over the `bgsub` library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bgsub::frame_diff::FrameDiffParams;
use bgsub::harness::{
    benchmark_with_truth, compare, report_to_csv, report_to_text, AlgoConfig, CompareConfig,
};
use bgsub::imaging;
use bgsub::mog::MogParams;
use bgsub::statistical::StatParams;
use bgsub::synth;

#[derive(Parser)]
#[command(
    name = "bgsub",
    about = "Background subtraction toolkit: run algorithms, generate synthetic sequences, benchmark and compare"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm over a PPM sequence and write PGM masks.
    Run {
        /// Algorithm id: framediff, statistical or mog.
        #[arg(long)]
        algo: String,
        /// Directory of frame_*.ppm input frames.
        #[arg(long)]
        input: PathBuf,
        /// Directory for mask_*.pgm outputs (created if missing).
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        params: AlgoArgs,
    },
    /// Generate a synthetic sequence with ground truth from a scene file.
    Synth {
        /// Scene description (`key = value` format).
        #[arg(long)]
        spec: PathBuf,
        /// Output directory for frame_*.ppm and truth_*.pgm.
        #[arg(long)]
        out: PathBuf,
    },
    /// Benchmark one algorithm against ground truth and report CSV.
    Bench {
        #[arg(long)]
        input: PathBuf,
        /// Directory of truth_*.pgm ground-truth masks.
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        algo: String,
        /// CSV report path.
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        params: AlgoArgs,
    },
    /// Run all three algorithms on a synthetic scene and compare them.
    Compare {
        #[arg(long)]
        spec: PathBuf,
        /// CSV report path.
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        params: AlgoArgs,
    },
}

#[derive(Args)]
struct AlgoArgs {
    /// Frame-difference threshold (0-255).
    #[arg(long, default_value_t = 25)]
    threshold: u8,
    /// Training frames taken from the start of the sequence (statistical).
    #[arg(long, default_value_t = 20)]
    train_frames: usize,
    /// Chromaticity threshold (statistical).
    #[arg(long, default_value_t = 10.0)]
    tau_delta: f64,
    /// Lower edge of the background brightness band (statistical).
    #[arg(long, default_value_t = 0.8)]
    gamma_lo: f64,
    /// Upper edge of the background brightness band (statistical).
    #[arg(long, default_value_t = 1.2)]
    gamma_hi: f64,
    /// Darkness floor below which shadow becomes foreground (statistical).
    #[arg(long, default_value_t = 0.3)]
    gamma_min: f64,
    /// Gaussians per pixel, 3-5 (mog).
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Online learning rate (mog).
    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,
    /// Cumulative weight portion treated as background (mog).
    #[arg(long, default_value_t = 0.7)]
    bg_portion: f64,
    /// Variance of newly created components (mog).
    #[arg(long, default_value_t = 900.0)]
    init_variance: f64,
    /// Weight of newly created components (mog).
    #[arg(long, default_value_t = 0.05)]
    init_weight: f64,
}

impl AlgoArgs {
    fn frame_diff(&self) -> FrameDiffParams {
        FrameDiffParams {
            threshold: self.threshold,
        }
    }

    fn statistical(&self) -> StatParams {
        StatParams {
            tau_delta: self.tau_delta,
            tau_gamma_lo: self.gamma_lo,
            tau_gamma_hi: self.gamma_hi,
            gamma_min: self.gamma_min,
        }
    }

    fn mog(&self) -> MogParams {
        MogParams {
            k: self.k,
            learning_rate: self.learning_rate,
            background_portion: self.bg_portion,
            init_variance: self.init_variance,
            init_weight: self.init_weight,
            ..MogParams::default()
        }
    }

    fn algo_config(&self, id: &str) -> bgsub::Result<AlgoConfig> {
        match id {
            "framediff" => Ok(AlgoConfig::FrameDiff(self.frame_diff())),
            "statistical" => Ok(AlgoConfig::Statistical {
                params: self.statistical(),
                train_frames: self.train_frames,
            }),
            "mog" => Ok(AlgoConfig::Mog(self.mog())),
            other => Err(bgsub::Error::UnknownAlgorithm(other.to_string())),
        }
    }

    fn compare_config(&self) -> CompareConfig {
        CompareConfig {
            frame_diff: self.frame_diff(),
            statistical: self.statistical(),
            train_frames: self.train_frames,
            mog: self.mog(),
        }
    }
}

fn create_dir(path: &PathBuf) -> bgsub::Result<()> {
    std::fs::create_dir_all(path).map_err(|e| bgsub::Error::Io {
        path: path.clone(),
        source: e,
    })
}

fn write_text(path: &PathBuf, text: &str) -> bgsub::Result<()> {
    std::fs::write(path, text).map_err(|e| bgsub::Error::Io {
        path: path.clone(),
        source: e,
    })
}

fn read_text(path: &PathBuf) -> bgsub::Result<String> {
    std::fs::read_to_string(path).map_err(|e| bgsub::Error::Io {
        path: path.clone(),
        source: e,
    })
}

fn run(cli: Cli) -> bgsub::Result<()> {
    match cli.command {
        Command::Run {
            algo,
            input,
            output,
            params,
        } => {
            let config = params.algo_config(&algo)?;
            let frames = imaging::load_frame_sequence(&input)?;
            let (masks, offset) = bgsub::harness::run_algorithm(&config, &frames)?;
            create_dir(&output)?;
            for (k, mask) in masks.iter().enumerate() {
                // mask files are numbered after the frame they classify,
                // 1-based like the frame files
                let number = offset + k + 1;
                imaging::save_mask(mask, output.join(format!("mask_{number:06}.pgm")))?;
            }
            println!("wrote {} masks to {}", masks.len(), output.display());
        }
        Command::Synth { spec, out } => {
            let scene = synth::parse_spec(&read_text(&spec)?)?;
            let (frames, truths) = synth::generate(&scene)?;
            create_dir(&out)?;
            for (k, (frame, truth)) in frames.iter().zip(&truths).enumerate() {
                imaging::save_ppm(frame, out.join(format!("frame_{:06}.ppm", k + 1)))?;
                imaging::save_mask(truth, out.join(format!("truth_{:06}.pgm", k + 1)))?;
            }
            println!("wrote {} frames to {}", frames.len(), out.display());
        }
        Command::Bench {
            input,
            truth,
            algo,
            report,
            params,
        } => {
            let config = params.algo_config(&algo)?;
            let frames = imaging::load_frame_sequence(&input)?;
            let truths = imaging::load_mask_sequence(&truth)?;
            let metrics = benchmark_with_truth(&config, &frames, &truths)?;
            let rows = vec![(config.id().to_string(), metrics)];
            write_text(&report, &report_to_csv(&rows))?;
            print!("{}", report_to_text(&rows));
        }
        Command::Compare {
            spec,
            report,
            params,
        } => {
            let scene = synth::parse_spec(&read_text(&spec)?)?;
            let result = compare(&scene, &params.compare_config())?;
            write_text(&report, &report_to_csv(&result.rows))?;
            print!("{}", report_to_text(&result.rows));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
