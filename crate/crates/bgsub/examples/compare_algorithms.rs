//! The three-way comparison: accuracy, speed and model memory for frame
//! differencing, the statistical shadow detector and the adaptive
//! mixture, all on one synthetic scene with ground truth.
//!
//!     cargo run --release --example compare_algorithms [scene-name]

use bgsub::harness::{compare, report_to_csv, report_to_text, CompareConfig};
use bgsub::synth::{standard_suite, suite_scene};

fn main() -> bgsub::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "stationary_intruder".into());
    let spec = match suite_scene(&name) {
        Some(spec) => spec,
        None => {
            let names: Vec<_> = standard_suite().iter().map(|(n, _)| *n).collect();
            eprintln!("unknown scene {name:?}; available: {}", names.join(", "));
            std::process::exit(1);
        }
    };

    println!("scene: {name} ({}x{}, {} frames)\n", spec.width, spec.height, spec.frame_count);
    let report = compare(&spec, &CompareConfig::default())?;
    print!("{}", report_to_text(&report.rows));

    let csv = std::env::temp_dir().join(format!("bgsub_compare_{name}.csv"));
    std::fs::write(&csv, report_to_csv(&report.rows)).expect("write csv");
    println!("\nfull per-class CSV: {}", csv.display());
    Ok(())
}
