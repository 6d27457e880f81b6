//! Score predicted masks against ground truth: confusion matrix,
//! per-class precision/recall/F1 and the binary foreground reduction
//! (shadows fold into background).
//!
//!     cargo run --example evaluate_masks

use bgsub::harness::{evaluate, run_algorithm, AlgoConfig};
use bgsub::imaging::PixelClass;
use bgsub::statistical::StatParams;
use bgsub::synth::{generate, suite_scene};

fn main() -> bgsub::Result<()> {
    let spec = suite_scene("shadow_cast").expect("suite scene");
    let (frames, truth) = generate(&spec)?;

    let config = AlgoConfig::Statistical {
        params: StatParams::default(),
        train_frames: 20,
    };
    let (masks, offset) = run_algorithm(&config, &frames)?;
    let accuracy = evaluate(&masks, &truth[offset..])?;

    println!("confusion matrix (rows = truth, columns = predicted):");
    print!("{:>12}", "");
    for predicted in PixelClass::ALL {
        print!("{:>12}", predicted.name());
    }
    println!();
    for actual in PixelClass::ALL {
        print!("{:>12}", actual.name());
        for predicted in PixelClass::ALL {
            print!("{:>12}", accuracy.confusion.count(actual, predicted));
        }
        println!();
    }

    println!("\nper-class metrics (classes absent from both sides omitted):");
    let fmt = |v: Option<f64>| v.map_or("   -  ".into(), |x| format!("{x:.4}"));
    for (class, m) in &accuracy.per_class {
        println!(
            "  {:<10} precision {}  recall {}  f1 {}",
            class.name(),
            fmt(m.precision),
            fmt(m.recall),
            fmt(m.f1)
        );
    }
    let b = &accuracy.binary_foreground;
    println!(
        "  binary foreground: precision {}  recall {}  f1 {}",
        fmt(b.precision),
        fmt(b.recall),
        fmt(b.f1)
    );
    Ok(())
}
