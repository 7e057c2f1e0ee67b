//! Unit-suffixed quantities such as `"580 ns"` or `"0.25 dB/km"`.
//!
//! Decimal prefixes are applied by shifting the decimal exponent of the
//! literal before parsing, so `"580 ns"`, `"0.58 us"` and `"5.8e-7 s"` all
//! round to the same `f64`.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::marker::PhantomData;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Time,
    Length,
    Frequency,
    Attenuation,
    Velocity,
}

impl Dimension {
    pub fn base_unit(self) -> &'static str {
        match self {
            Dimension::Time => "s",
            Dimension::Length => "m",
            Dimension::Frequency => "Hz",
            Dimension::Attenuation => "dB/km",
            Dimension::Velocity => "m/s",
        }
    }

    /// Decimal exponent (or, for minutes and hours, a plain factor).
    fn scale(self, unit: &str) -> Option<Scale> {
        use Scale::*;
        Some(match (self, unit) {
            (Dimension::Time, "s") => Pow(0),
            (Dimension::Time, "ms") => Pow(-3),
            (Dimension::Time, "us" | "µs" | "μs") => Pow(-6),
            (Dimension::Time, "ns") => Pow(-9),
            (Dimension::Time, "ps") => Pow(-12),
            (Dimension::Time, "min") => Factor(60.0),
            (Dimension::Time, "h") => Factor(3600.0),
            (Dimension::Length, "m") => Pow(0),
            (Dimension::Length, "km") => Pow(3),
            (Dimension::Length, "mm") => Pow(-3),
            (Dimension::Frequency, "Hz" | "1/s" | "/s") => Pow(0),
            (Dimension::Frequency, "kHz") => Pow(3),
            (Dimension::Frequency, "MHz") => Pow(6),
            (Dimension::Frequency, "GHz") => Pow(9),
            (Dimension::Attenuation, "dB/km") => Pow(0),
            (Dimension::Velocity, "m/s") => Pow(0),
            (Dimension::Velocity, "km/s") => Pow(3),
            _ => return None,
        })
    }
}

enum Scale {
    Pow(i32),
    Factor(f64),
}

/// Parse `"<number> <unit>"` into base units of `dim`.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| !(c.is_ascii_digit() || c == '.' || c == '+' || c == '-' || ((c == 'e' || c == 'E') && exponent_at(t, i))))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Config(format!("`{t}` lacks a unit (expected e.g. `1 {}`)", dim.base_unit())))?;
    let (num, unit) = (t[..split].trim(), t[split..].trim());
    let scale = dim
        .scale(unit)
        .ok_or_else(|| Error::Config(format!("unknown unit `{unit}` for a {dim:?} in `{t}`")))?;
    let bad = || Error::Config(format!("bad number in `{t}`"));
    let (mantissa, exp) = match num.find(['e', 'E']) {
        Some(i) => (&num[..i], num[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (num, 0),
    };
    if mantissa.is_empty() || mantissa.parse::<f64>().is_err() {
        return Err(bad());
    }
    let v = match scale {
        Scale::Pow(p) => format!("{mantissa}e{}", exp + p).parse::<f64>().map_err(|_| bad())?,
        Scale::Factor(f) => format!("{mantissa}e{exp}").parse::<f64>().map_err(|_| bad())? * f,
    };
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

fn exponent_at(t: &str, i: usize) -> bool {
    let b = t.as_bytes();
    i > 0 && b[i - 1].is_ascii_digit() | (b[i - 1] == b'.') && b.get(i + 1).is_some_and(|c| c.is_ascii_digit() || *c == b'-' || *c == b'+')
}

pub trait Dim {
    const DIM: Dimension;
}

macro_rules! dims {
    ($($name:ident => $d:ident),*) => {$(
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub struct $name;
        impl Dim for $name {
            const DIM: Dimension = Dimension::$d;
        }
    )*};
}

dims!(T => Time, L => Length, F => Frequency, A => Attenuation, V => Velocity);

/// A value in base units that (de)serializes as a unit-suffixed string.
#[derive(Clone, Copy, PartialEq)]
pub struct Quantity<D: Dim>(pub f64, PhantomData<D>);

pub type Time = Quantity<T>;
pub type Length = Quantity<L>;
pub type Frequency = Quantity<F>;
pub type Attenuation = Quantity<A>;
pub type Velocity = Quantity<V>;

impl<D: Dim> Quantity<D> {
    pub const fn new(v: f64) -> Self {
        Self(v, PhantomData)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl<D: Dim> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<D: Dim> fmt::Display for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} {}", self.0, D::DIM.base_unit())
    }
}

impl<D: Dim> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de, D: Dim> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let s = String::deserialize(d)?;
        parse_quantity(&s, D::DIM).map(Self::new).map_err(de::Error::custom)
    }
}
