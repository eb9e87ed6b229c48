//! The sensor's unit of output: an 8×8 grid of quantized temperatures.

use crate::error::{Error, Result};

pub const GRID: usize = 8;
pub const PIXELS: usize = GRID * GRID;

/// Lowest temperature the sensor reports, °C.
pub const MIN_TEMP_C: f64 = 20.0;
/// Highest temperature the sensor reports, °C.
pub const MAX_TEMP_C: f64 = 100.0;
/// Output resolution, °C.
pub const STEP_C: f64 = 0.25;

/// One quantized 8×8 frame, row-major, row 0 at the bed-head edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalFrame {
    pixels: [f64; PIXELS],
}

impl ThermalFrame {
    /// Wraps already-quantized pixels, rejecting any value the sensor could
    /// not have produced.
    pub fn new(pixels: [f64; PIXELS]) -> Result<Self> {
        for (i, &v) in pixels.iter().enumerate() {
            if !is_sensor_value(v) {
                return Err(Error::InvalidInput(format!(
                    "pixel {i} ({}, {}) = {v} is not a quarter-degree value in [20, 100]",
                    i / GRID,
                    i % GRID
                )));
            }
        }
        Ok(Self { pixels })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new([value; PIXELS])
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * GRID + col]
    }

    pub fn pixels(&self) -> &[f64; PIXELS] {
        &self.pixels
    }

    pub fn max(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::MAX, f64::min)
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().sum::<f64>() / PIXELS as f64
    }
}

/// True when `v` is a value the sensor can emit.
pub fn is_sensor_value(v: f64) -> bool {
    v.is_finite() && (MIN_TEMP_C..=MAX_TEMP_C).contains(&v) && (v * 4.0).fract() == 0.0
}

/// Rounds to the nearest quarter degree (midpoints round up) and clamps to
/// the sensor range.
pub fn quantize_value(raw: f64) -> f64 {
    ((raw * 4.0 + 0.5).floor() / 4.0).clamp(MIN_TEMP_C, MAX_TEMP_C)
}

/// Converts raw temperatures into what the sensor would report.
pub fn quantize(raw: &[[f64; GRID]; GRID]) -> Result<ThermalFrame> {
    let mut pixels = [0.0; PIXELS];
    for (r, row) in raw.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "pixel {} ({r}, {c}) is not finite: {v}",
                    r * GRID + c
                )));
            }
            pixels[r * GRID + c] = quantize_value(v);
        }
    }
    Ok(ThermalFrame { pixels })
}

/// Row-major feature vector fed to the classifiers.
pub fn flatten(frame: &ThermalFrame) -> [f64; PIXELS] {
    frame.pixels
}

pub fn unflatten(features: &[f64]) -> Result<ThermalFrame> {
    let pixels: [f64; PIXELS] = features.try_into().map_err(|_| {
        Error::InvalidInput(format!(
            "expected {PIXELS} features, got {}",
            features.len()
        ))
    })?;
    ThermalFrame::new(pixels)
}
