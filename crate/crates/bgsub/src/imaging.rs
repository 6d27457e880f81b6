//! Frame and mask rasters plus bit-exact PPM/PGM file I/O.
//!
//! Everything is row-major with a top-left origin, matching the byte
//! order of the netpbm formats. All types are immutable after
//! construction and safe to share across threads.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One RGB pixel, 8 bits per channel.
pub type Rgb = [u8; 3];

/// Dense row-major RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
}

/// Dense row-major grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayFrame {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

/// Per-pixel classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PixelClass {
    Background,
    Foreground,
    Shadow,
    Highlight,
}

impl PixelClass {
    pub const ALL: [PixelClass; 4] = [
        PixelClass::Background,
        PixelClass::Foreground,
        PixelClass::Shadow,
        PixelClass::Highlight,
    ];

    /// PGM encoding: Background 0, Shadow 85, Highlight 170, Foreground 255.
    pub fn to_byte(self) -> u8 {
        match self {
            PixelClass::Background => 0,
            PixelClass::Shadow => 85,
            PixelClass::Highlight => 170,
            PixelClass::Foreground => 255,
        }
    }

    pub fn from_byte(byte: u8) -> Option<PixelClass> {
        match byte {
            0 => Some(PixelClass::Background),
            85 => Some(PixelClass::Shadow),
            170 => Some(PixelClass::Highlight),
            255 => Some(PixelClass::Foreground),
            _ => None,
        }
    }

    /// Index used by the evaluation confusion matrix.
    pub fn index(self) -> usize {
        match self {
            PixelClass::Background => 0,
            PixelClass::Foreground => 1,
            PixelClass::Shadow => 2,
            PixelClass::Highlight => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PixelClass::Background => "background",
            PixelClass::Foreground => "foreground",
            PixelClass::Shadow => "shadow",
            PixelClass::Highlight => "highlight",
        }
    }

    /// Binary foreground/background reduction: Shadow and Highlight fold
    /// into Background.
    pub fn is_binary_foreground(self) -> bool {
        self == PixelClass::Foreground
    }
}

/// Per-pixel classification raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMask {
    width: u32,
    height: u32,
    labels: Vec<PixelClass>,
}

fn check_dims(width: u32, height: u32, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(format!(
            "frame dimensions must be at least 1x1, got {width}x{height}"
        )));
    }
    let expected = width as usize * height as usize;
    if len != expected {
        return Err(Error::InvalidParameter(format!(
            "pixel buffer has {len} entries, {width}x{height} needs {expected}"
        )));
    }
    Ok(())
}

impl Frame {
    pub fn new(width: u32, height: u32, pixels: Vec<Rgb>) -> Result<Frame> {
        check_dims(width, height, pixels.len())?;
        Ok(Frame {
            width,
            height,
            pixels,
        })
    }

    /// Frame filled with a single color.
    pub fn filled(width: u32, height: u32, color: Rgb) -> Frame {
        Frame {
            width,
            height,
            pixels: vec![color; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    #[cfg(test)]
    pub(crate) fn pixels_mut(&mut self) -> &mut [Rgb] {
        &mut self.pixels
    }

    pub fn same_dims(&self, other: &Frame) -> bool {
        self.width == other.width && self.height == other.height
    }
}

impl GrayFrame {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<GrayFrame> {
        check_dims(width, height, pixels.len())?;
        Ok(GrayFrame {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }
}

impl ClassMask {
    pub fn new(width: u32, height: u32, labels: Vec<PixelClass>) -> Result<ClassMask> {
        check_dims(width, height, labels.len())?;
        Ok(ClassMask {
            width,
            height,
            labels,
        })
    }

    pub fn filled(width: u32, height: u32, class: PixelClass) -> ClassMask {
        ClassMask {
            width,
            height,
            labels: vec![class; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn labels(&self) -> &[PixelClass] {
        &self.labels
    }

    pub fn get(&self, x: u32, y: u32) -> PixelClass {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    pub(crate) fn set(&mut self, x: u32, y: u32, class: PixelClass) {
        self.labels[y as usize * self.width as usize + x as usize] = class;
    }

    pub fn count(&self, class: PixelClass) -> usize {
        self.labels.iter().filter(|&&c| c == class).count()
    }

    /// Encode to a grayscale raster with the 0/85/170/255 class bytes.
    pub fn to_gray(&self) -> GrayFrame {
        GrayFrame {
            width: self.width,
            height: self.height,
            pixels: self.labels.iter().map(|c| c.to_byte()).collect(),
        }
    }

    /// Decode a grayscale raster written by [`ClassMask::to_gray`].
    pub fn from_gray(gray: &GrayFrame, path: &Path) -> Result<ClassMask> {
        let mut labels = Vec::with_capacity(gray.pixels.len());
        for (offset, &byte) in gray.pixels.iter().enumerate() {
            match PixelClass::from_byte(byte) {
                Some(class) => labels.push(class),
                None => {
                    return Err(Error::InvalidClassByte {
                        path: path.to_path_buf(),
                        value: byte,
                        offset,
                    })
                }
            }
        }
        Ok(ClassMask {
            width: gray.width,
            height: gray.height,
            labels,
        })
    }
}

/// Rec. 601 luma `round(0.299 R + 0.587 G + 0.114 B)`, rounded half away
/// from zero. Computed in exact integer arithmetic: the weights are
/// thousandths, so `(299 R + 587 G + 114 B + 500) / 1000` is the exact
/// rounding with no floating-point ties.
pub fn to_grayscale(frame: &Frame) -> GrayFrame {
    let pixels = frame
        .pixels
        .iter()
        .map(|&[r, g, b]| {
            let y = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
            ((y + 500) / 1000) as u8
        })
        .collect();
    GrayFrame {
        width: frame.width,
        height: frame.height,
        pixels,
    }
}

// ---------------------------------------------------------------------------
// netpbm I/O

struct PnmHeader {
    width: u32,
    height: u32,
}

/// Reads the ASCII header of a binary netpbm file: magic, width, height,
/// maxval, with `#` comments allowed between tokens. Returns the header
/// and the offset of the first pixel byte.
fn parse_pnm_header(bytes: &[u8], magic: &[u8], path: &Path) -> Result<(PnmHeader, usize)> {
    let malformed = |reason: &str| Error::MalformedHeader {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };

    if bytes.len() < 2 || &bytes[..2] != magic {
        return Err(malformed(&format!(
            "expected magic {:?}",
            String::from_utf8_lossy(magic)
        )));
    }

    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        // skip whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = bytes.get(pos) {
                        pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                Some(_) => break,
                None => return Err(malformed("header ended early")),
            }
        }
        let start = pos;
        while let Some(b) = bytes.get(pos) {
            if b.is_ascii_digit() {
                pos += 1;
            } else {
                break;
            }
        }
        if pos == start {
            return Err(malformed("expected a decimal value"));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("digits are ascii");
        *field = text
            .parse::<u32>()
            .map_err(|_| malformed(&format!("value {text} out of range")))?;
    }

    // exactly one whitespace byte separates maxval from pixel data
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(malformed("missing whitespace after maxval")),
    }

    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(malformed("zero dimension"));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval {
            path: path.to_path_buf(),
            maxval,
        });
    }
    Ok((PnmHeader { width, height }, pos))
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut bytes = Vec::new();
    BufReader::new(file)
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path, e))?;
    Ok(bytes)
}

/// Load a binary PPM (P6, maxval 255).
pub fn load_ppm(path: impl AsRef<Path>) -> Result<Frame> {
    let path = path.as_ref();
    let bytes = read_file(path)?;
    let (header, offset) = parse_pnm_header(&bytes, b"P6", path)?;
    let expected = header.width as usize * header.height as usize * 3;
    let data = &bytes[offset..];
    if data.len() < expected {
        return Err(Error::TruncatedPixelData {
            path: path.to_path_buf(),
            expected,
            found: data.len(),
        });
    }
    let pixels = data[..expected]
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    Frame::new(header.width, header.height, pixels)
}

/// Save a binary PPM (P6, maxval 255).
pub fn save_ppm(frame: &Frame, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    write!(writer, "P6\n{} {}\n255\n", frame.width, frame.height).map_err(io)?;
    for px in &frame.pixels {
        writer.write_all(px).map_err(io)?;
    }
    writer.flush().map_err(io)
}

/// Load a binary PGM (P5, maxval 255).
pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayFrame> {
    let path = path.as_ref();
    let bytes = read_file(path)?;
    let (header, offset) = parse_pnm_header(&bytes, b"P5", path)?;
    let expected = header.width as usize * header.height as usize;
    let data = &bytes[offset..];
    if data.len() < expected {
        return Err(Error::TruncatedPixelData {
            path: path.to_path_buf(),
            expected,
            found: data.len(),
        });
    }
    GrayFrame::new(header.width, header.height, data[..expected].to_vec())
}

/// Save a binary PGM (P5, maxval 255).
pub fn save_pgm(gray: &GrayFrame, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    write!(writer, "P5\n{} {}\n255\n", gray.width, gray.height).map_err(io)?;
    writer.write_all(&gray.pixels).map_err(io)?;
    writer.flush().map_err(io)
}

/// Save a class mask as a PGM with the 0/85/170/255 encoding.
pub fn save_mask(mask: &ClassMask, path: impl AsRef<Path>) -> Result<()> {
    save_pgm(&mask.to_gray(), path)
}

/// Load a class mask written by [`save_mask`].
pub fn load_mask(path: impl AsRef<Path>) -> Result<ClassMask> {
    let path = path.as_ref();
    let gray = load_pgm(path)?;
    ClassMask::from_gray(&gray, path)
}

/// List a sequence directory: files matching `<prefix>*.<ext>`, ordered
/// lexicographically.
pub fn sequence_paths(dir: impl AsRef<Path>, prefix: &str, ext: &str) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let name = match path.file_name().and_then(|n| n.to_str()) {
            Some(n) => n,
            None => continue,
        };
        if name.starts_with(prefix) && name.ends_with(&format!(".{ext}")) {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// Load every PPM frame in a sequence directory (`frame_*.ppm`).
pub fn load_frame_sequence(dir: impl AsRef<Path>) -> Result<Vec<Frame>> {
    sequence_paths(dir, "frame_", "ppm")?
        .iter()
        .map(load_ppm)
        .collect()
}

/// Load every ground-truth mask in a sequence directory (`truth_*.pgm`).
pub fn load_mask_sequence(dir: impl AsRef<Path>) -> Result<Vec<ClassMask>> {
    sequence_paths(dir, "truth_", "pgm")?
        .iter()
        .map(load_mask)
        .collect()
}
