//! Frame differencing on a uniform moving rectangle: the leading and
//! trailing edges light up while the uniform interior reads as
//! background, and an object that stops moving vanishes entirely.
//!
//!     cargo run --example frame_diff_basics

use bgsub::frame_diff::{run_frame_diff, FrameDiffParams};
use bgsub::imaging::{to_grayscale, PixelClass};
use bgsub::synth::{generate, suite_scene};

fn main() -> bgsub::Result<()> {
    let spec = suite_scene("uniform_mover").expect("suite scene");
    let (frames, truth) = generate(&spec)?;
    let gray: Vec<_> = frames.iter().map(to_grayscale).collect();
    let masks = run_frame_diff(&gray, FrameDiffParams { threshold: 25 })?;

    // the rectangle is 40x40 = 1600 px, but only the 5 px bands move
    println!("object pixels in truth: {}", truth[1].count(PixelClass::Foreground));
    for k in [0, 10, 50] {
        println!(
            "mask {:>2}: {} foreground pixels (leading + trailing bands only)",
            k + 1,
            masks[k].count(PixelClass::Foreground)
        );
    }

    let spec = suite_scene("stationary_intruder").expect("suite scene");
    let (frames, _) = generate(&spec)?;
    let gray: Vec<_> = frames.iter().map(to_grayscale).collect();
    let masks = run_frame_diff(&gray, FrameDiffParams { threshold: 25 })?;
    println!("\nintruder halts at frame 50:");
    for k in [48, 49, 50, 51, 60] {
        println!(
            "frame {:>2}: {} foreground pixels",
            k + 1,
            masks[k].count(PixelClass::Foreground)
        );
    }
    println!("a static object is absorbed after a single frame period");
    Ok(())
}
