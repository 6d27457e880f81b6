//! Statistical background subtraction with shadow detection: train the
//! expected per-pixel color on clean frames, then decompose each
//! observation into brightness and chromaticity distortion. A region
//! dimmed to 60% brightness keeps its chromaticity and classifies as
//! Shadow, not Foreground.
//!
//!     cargo run --example statistical_shadow [output-dir]

use bgsub::imaging::{save_mask, PixelClass};
use bgsub::statistical::{distortion, run_statistical, train, StatParams};
use bgsub::synth::{generate, suite_scene};

fn main() -> bgsub::Result<()> {
    let spec = suite_scene("shadow_cast").expect("suite scene");
    let (frames, _) = generate(&spec)?;

    // the shadow appears at frame 20; everything before is clean
    let model = train(&frames[..20])?;
    let params = StatParams::default();
    let masks = run_statistical(&model, &frames[20..], &params)?;

    let mask = &masks[0];
    println!("first shadowed frame:");
    for class in PixelClass::ALL {
        println!("  {:<10} {:>7} pixels", class.name(), mask.count(class));
    }

    // distortion components for one pixel inside the shadow region
    let index = 120 * spec.width as usize + 160;
    let alpha = model.alpha()[index];
    let px = frames[30].pixels()[index];
    let d = distortion(alpha, [px[0] as f64, px[1] as f64, px[2] as f64])?;
    println!(
        "\npixel (160, 120): expected {alpha:?}, observed {px:?}\n\
         brightness factor {:.3} (inside the shadow band [{}, {})), \
         chromaticity residual {:.3} (below tau_delta = {})",
        d.gamma, params.gamma_min, params.tau_gamma_lo, d.delta, params.tau_delta
    );

    let out = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("bgsub_shadow"));
    std::fs::create_dir_all(&out).expect("create output directory");
    let path = out.join("shadow_mask.pgm");
    save_mask(mask, &path)?;
    println!("\nwrote {} (0 background, 85 shadow, 255 foreground)", path.display());
    Ok(())
}
