use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MM_PER_INCH: f64 = 25.4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be positive, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("alpha_max must be in (0, 1], got {0}")]
    AlphaOutOfRange(f64),
}

/// What one expansion unit is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Word,
    Chunk,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "word" => Ok(Mode::Word),
            "chunk" => Ok(Mode::Chunk),
            other => Err(format!("unknown mode {other:?}, expected word or chunk")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Word => "word",
            Mode::Chunk => "chunk",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GestureConfig {
    /// Display density used to convert pixels to millimetres.
    pub ppi: f64,
    /// Slide distance per word.
    pub d_word_mm: f64,
    /// Slide distance per chunk.
    pub d_chunk_mm: f64,
    /// Hold time before a press activates.
    pub longpress_ms: u64,
    /// Movement tolerated while holding.
    pub slop_mm: f64,
    /// Ceiling for the pending-chunk background opacity.
    pub alpha_max: f64,
    pub bracket_levels: usize,
}

impl Default for GestureConfig {
    fn default() -> Self {
        GestureConfig {
            ppi: 96.0,
            d_word_mm: 1.5,
            d_chunk_mm: 10.0,
            longpress_ms: 500,
            slop_mm: 1.0,
            alpha_max: 0.6,
            bracket_levels: crate::chunking::BRACKET_LEVELS,
        }
    }
}

impl GestureConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("ppi", self.ppi),
            ("d_word_mm", self.d_word_mm),
            ("d_chunk_mm", self.d_chunk_mm),
            ("longpress_ms", self.longpress_ms as f64),
            ("slop_mm", self.slop_mm),
            ("bracket_levels", self.bracket_levels as f64),
        ];
        for (field, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(ConfigError::NotPositive { field, value });
            }
        }
        if !(self.alpha_max > 0.0 && self.alpha_max <= 1.0) {
            return Err(ConfigError::AlphaOutOfRange(self.alpha_max));
        }
        Ok(())
    }

    /// Trigger distance for one unit in `mode`.
    pub fn unit_mm(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Word => self.d_word_mm,
            Mode::Chunk => self.d_chunk_mm,
        }
    }

    pub fn px_to_mm(&self, px: f64) -> f64 {
        px * MM_PER_INCH / self.ppi
    }

    pub fn mm_to_px(&self, mm: f64) -> f64 {
        mm * self.ppi / MM_PER_INCH
    }

    /// A copy with the fields present in `overlay` replaced. Unknown fields
    /// are rejected; the result is not validated.
    pub fn overlay(&self, overlay: &serde_json::Value) -> Result<GestureConfig, String> {
        let serde_json::Value::Object(fields) = overlay else {
            return Err("config must be an object".into());
        };
        let mut merged = serde_json::to_value(self).expect("config serializes");
        let map = merged.as_object_mut().expect("config is an object");
        for (key, value) in fields {
            if !map.contains_key(key) {
                return Err(format!("unknown config field {key:?}"));
            }
            map.insert(key.clone(), value.clone());
        }
        serde_json::from_value(merged).map_err(|e| format!("config: {e}"))
    }
}

/// Number of units a slide of `p_px` pixels triggers:
/// `floor((25.4 / ppi) * (p_px / d_mm))`.
///
/// Negative distances count as zero. A relative tolerance of 1e-9 absorbs
/// binary rounding so that distances landing exactly on a band edge count
/// the unit they complete.
pub fn units_from_distance(p_px: f64, ppi: f64, d_mm: f64) -> Result<usize, ConfigError> {
    if ppi.is_nan() || ppi <= 0.0 {
        return Err(ConfigError::NotPositive { field: "ppi", value: ppi });
    }
    if d_mm.is_nan() || d_mm <= 0.0 {
        return Err(ConfigError::NotPositive { field: "d_mm", value: d_mm });
    }
    if p_px.is_nan() || p_px <= 0.0 {
        return Ok(0);
    }
    let exact = p_px * MM_PER_INCH / (ppi * d_mm);
    Ok((exact + 1e-9 * exact.max(1.0)).floor() as usize)
}

/// Background opacity of the pending chunk: linear in progress toward the
/// next unit, capped at `alpha_max`.
pub fn progress_alpha(p_since_last_unit_px: f64, ppi: f64, d_mm: f64, alpha_max: f64) -> f64 {
    let mm = p_since_last_unit_px.max(0.0) * MM_PER_INCH / ppi;
    alpha_max * (mm / d_mm).min(1.0)
}
