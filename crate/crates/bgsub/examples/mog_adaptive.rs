//! The adaptive Gaussian mixture in action: a novel object is foreground
//! the moment it appears, then gets absorbed into the background as its
//! mixture component accumulates weight. Run on the halting-intruder
//! scene, the foreground count drops to zero a few frames after the halt.
//!
//!     cargo run --example mog_adaptive

use bgsub::imaging::PixelClass;
use bgsub::mog::{init_model, process_frame, MogParams};
use bgsub::synth::{generate, suite_scene};

fn main() -> bgsub::Result<()> {
    let spec = suite_scene("stationary_intruder").expect("suite scene");
    let (frames, _) = generate(&spec)?;

    let params = MogParams::default();
    println!(
        "K = {}, learning rate = {}, background portion = {}\n",
        params.k, params.learning_rate, params.background_portion
    );

    let mut model = init_model(&frames[0], params)?;
    let mut absorbed_at = None;
    for (k, frame) in frames.iter().enumerate() {
        let mask = process_frame(&mut model, frame)?;
        let foreground = mask.count(PixelClass::Foreground);
        if (45..=60).contains(&k) {
            println!("frame {k:>2}: {foreground:>5} foreground pixels");
        }
        if k >= 50 && foreground == 0 && absorbed_at.is_none() {
            absorbed_at = Some(k);
        }
    }
    match absorbed_at {
        Some(k) => println!(
            "\nthe intruder halts at frame 50 and is fully absorbed by frame {k}: \
             its component's weight crossed the background portion"
        ),
        None => println!("\nthe intruder was never fully absorbed"),
    }

    // the mixture state behind one absorbed pixel
    let mixture = model.mixture(290, 120);
    println!("\nfinal mixture at (290, 120):");
    for (i, c) in mixture.components().iter().enumerate() {
        println!(
            "  component {i}: weight {:.3}, mean ({:>5.1}, {:>5.1}, {:>5.1}), sigma {:5.1}",
            c.weight,
            c.mean[0],
            c.mean[1],
            c.mean[2],
            c.variance.sqrt()
        );
    }
    Ok(())
}
