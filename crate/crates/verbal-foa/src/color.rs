//! HSV dominant-color classification over the eight supported color names.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::demo::HsvBin;

/// The closed set of color attributes the instruction parser and object
/// selector understand. The declaration order is also the tie-break order
/// for dominant-color classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorName {
    Red,
    Yellow,
    Green,
    Cyan,
    Blue,
    Magenta,
    Black,
    White,
}

/// All color names in tie-break order.
pub const COLOR_ORDER: [ColorName; 8] = [
    ColorName::Red,
    ColorName::Yellow,
    ColorName::Green,
    ColorName::Cyan,
    ColorName::Blue,
    ColorName::Magenta,
    ColorName::Black,
    ColorName::White,
];

impl ColorName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ColorName::Red => "red",
            ColorName::Yellow => "yellow",
            ColorName::Green => "green",
            ColorName::Cyan => "cyan",
            ColorName::Blue => "blue",
            ColorName::Magenta => "magenta",
            ColorName::Black => "black",
            ColorName::White => "white",
        }
    }

    pub fn from_token(token: &str) -> Option<ColorName> {
        COLOR_ORDER.iter().copied().find(|c| c.as_str() == token)
    }
}

impl std::fmt::Display for ColorName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ColorError {
    #[error("color histogram is empty")]
    EmptyHistogram,
}

/// Classifies a single HSV pixel.
///
/// Achromatic rules first: `v < 0.2` is black; low saturation (`s < 0.2`)
/// is white when bright (`v >= 0.8`), otherwise black below `v = 0.5` and
/// white above. Chromatic hues fall into six equal 60-degree sectors
/// centered on red (0), yellow (60), green (120), cyan (180), blue (240),
/// and magenta (300).
pub fn classify_pixel(hue: f64, saturation: f64, value: f64) -> ColorName {
    if value < 0.2 {
        return ColorName::Black;
    }
    if saturation < 0.2 {
        if value >= 0.8 {
            return ColorName::White;
        }
        return if value < 0.5 {
            ColorName::Black
        } else {
            ColorName::White
        };
    }
    match hue {
        h if !(30.0..330.0).contains(&h) => ColorName::Red,
        h if h < 90.0 => ColorName::Yellow,
        h if h < 150.0 => ColorName::Green,
        h if h < 210.0 => ColorName::Cyan,
        h if h < 270.0 => ColorName::Blue,
        _ => ColorName::Magenta,
    }
}

/// Returns the color label with the largest total pixel count over the
/// histogram. Ties are broken by [`COLOR_ORDER`].
pub fn classify_dominant_color(hist: &[HsvBin]) -> Result<ColorName, ColorError> {
    if hist.is_empty() {
        return Err(ColorError::EmptyHistogram);
    }
    let mut totals = [0u64; 8];
    for bin in hist {
        let label = classify_pixel(bin.hue(), bin.saturation(), bin.value());
        let slot = COLOR_ORDER.iter().position(|c| *c == label).unwrap();
        totals[slot] += bin.count();
    }
    let best = (0..8).max_by_key(|&i| (totals[i], 8 - i)).unwrap();
    Ok(COLOR_ORDER[best])
}
