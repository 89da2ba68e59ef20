//! Exact conversions among perch, yard, foot, and metre.
//!
//! Conversion factors are exact rationals (1 perch = 5.5 yd = 16.5 ft,
//! 1 yd = 0.9144 m, hence 1 perch = 5.0292 m) and are applied before any
//! float rounding; the only rounding is the final conversion back to `f64`.

use crate::error::{Error, Result};
use crate::exactprob::rational_to_f64;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Length unit tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Perch,
    Yard,
    Foot,
    Metre,
}

impl Unit {
    /// Exact factor to metres: 1 of this unit = (num / den) m.
    fn metre_ratio(self) -> (u64, u64) {
        match self {
            Unit::Perch => (50_292, 10_000),
            Unit::Yard => (9_144, 10_000),
            Unit::Foot => (3_048, 10_000),
            Unit::Metre => (1, 1),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::Perch => "perch",
            Unit::Yard => "yard",
            Unit::Foot => "foot",
            Unit::Metre => "metre",
        };
        f.write_str(s)
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "perch" | "perches" => Ok(Unit::Perch),
            "yard" | "yards" | "yd" => Ok(Unit::Yard),
            "foot" | "feet" | "ft" => Ok(Unit::Foot),
            "metre" | "metres" | "meter" | "meters" | "m" => Ok(Unit::Metre),
            other => Err(Error::domain(format!("unknown unit: {other}"))),
        }
    }
}

/// A length with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Quantity { value, unit }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

/// Exact rational factor that converts `from` into `to`.
pub fn conversion_factor(from: Unit, to: Unit) -> BigRational {
    let (fn_, fd) = from.metre_ratio();
    let (tn, td) = to.metre_ratio();
    // (fn_/fd) / (tn/td)
    BigRational::new(
        BigInt::from(fn_) * BigInt::from(td),
        BigInt::from(fd) * BigInt::from(tn),
    )
}

/// Convert a quantity to another unit through the exact rational factor.
pub fn convert(q: &Quantity, to: Unit) -> Result<Quantity> {
    if !q.value.is_finite() {
        return Err(Error::domain(format!("quantity value must be finite, got {}", q.value)));
    }
    if q.unit == to {
        return Ok(*q);
    }
    let exact = BigRational::from_float(q.value).expect("finite value");
    let converted = exact * conversion_factor(q.unit, to);
    let value = if q.value >= 0.0 {
        rational_to_f64(&converted)
    } else {
        -rational_to_f64(&(-converted))
    };
    Ok(Quantity::new(value, to))
}

/// A map-scale distance in metres with its 3-significant-figure display form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapDistance {
    pub metres: Quantity,
    pub display: String,
}

/// Metres corresponding to a perch measurement taken off a map.
pub fn map_distance(perches: f64) -> Result<MapDistance> {
    if !perches.is_finite() || perches < 0.0 {
        return Err(Error::domain(format!(
            "map distance must be a nonnegative number of perches, got {perches}"
        )));
    }
    let metres = convert(&Quantity::new(perches, Unit::Perch), Unit::Metre)?;
    let display = format!("{} m", format_sig(metres.value, 3));
    Ok(MapDistance { metres, display })
}

/// Format `x` rounded to `sig` significant figures.
pub fn format_sig(x: f64, sig: u32) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = sig as i32 - 1 - exponent;
    let scale = 10f64.powi(decimals);
    let rounded = (x * scale).round() / scale;
    if decimals > 0 {
        format!("{:.*}", decimals as usize, rounded)
    } else {
        format!("{rounded}")
    }
}
