//! Exact fixed-point energies.
//!
//! Energies are stored as integer ticks of `1 / scale` energy units. The
//! decompositions branch on exact equalities (zero-cost steps, flat plateaus),
//! so nothing on the decomposition side ever touches floating point.

use std::fmt;
use std::ops::{Add, Sub};

use num_rational::Ratio;

/// Default number of ticks per energy unit.
pub const DEFAULT_SCALE: i64 = 1_000_000;

/// An energy or cost value: a finite tick count or `+inf`.
///
/// The derived ordering places every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Energy {
    Finite(i64),
    Infinite,
}

impl Energy {
    pub const ZERO: Energy = Energy::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Energy::Finite(_))
    }

    pub fn ticks(self) -> Option<i64> {
        match self {
            Energy::Finite(t) => Some(t),
            Energy::Infinite => None,
        }
    }

    /// `self ∨ 0`.
    pub fn positive_part(self) -> Energy {
        self.max(Energy::ZERO)
    }

    /// Subtraction that is defined for every pair: `inf - x = inf`, and
    /// `x - inf` is `None` for finite `x`.
    pub fn checked_sub(self, rhs: Energy) -> Option<Energy> {
        match (self, rhs) {
            (Energy::Finite(a), Energy::Finite(b)) => Some(Energy::Finite(a - b)),
            (Energy::Infinite, _) => Some(Energy::Infinite),
            (Energy::Finite(_), Energy::Infinite) => None,
        }
    }

    /// Value in energy units as a float. `Infinite` maps to `f64::INFINITY`.
    pub fn to_f64(self, scale: EnergyScale) -> f64 {
        match self {
            Energy::Finite(t) => t as f64 / scale.get() as f64,
            Energy::Infinite => f64::INFINITY,
        }
    }

    /// Builds a finite energy from a whole number of energy units.
    pub fn from_units(units: i64, scale: EnergyScale) -> Energy {
        Energy::Finite(units * scale.get())
    }
}

impl Add for Energy {
    type Output = Energy;

    fn add(self, rhs: Energy) -> Energy {
        match (self, rhs) {
            (Energy::Finite(a), Energy::Finite(b)) => Energy::Finite(a + b),
            _ => Energy::Infinite,
        }
    }
}

impl Sub for Energy {
    type Output = Energy;

    /// Panics when subtracting `+inf` from a finite value.
    fn sub(self, rhs: Energy) -> Energy {
        self.checked_sub(rhs)
            .expect("subtracting an infinite energy from a finite one")
    }
}

/// Ticks per energy unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnergyScale(i64);

impl EnergyScale {
    pub fn new(ticks_per_unit: i64) -> Option<Self> {
        (ticks_per_unit > 0).then_some(EnergyScale(ticks_per_unit))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// Parses an exact decimal string into ticks at this scale.
    pub fn parse(self, text: &str) -> Result<Energy, DecimalError> {
        let value = parse_decimal(text)?;
        let ticks = value * Ratio::from_integer(self.0 as i128);
        if !ticks.is_integer() {
            return Err(DecimalError::NotRepresentable(text.to_string()));
        }
        i64::try_from(ticks.to_integer())
            .map(Energy::Finite)
            .map_err(|_| DecimalError::NotRepresentable(text.to_string()))
    }

    /// Renders an energy as a decimal string, or `"inf"`.
    pub fn format(self, energy: Energy) -> String {
        match energy {
            Energy::Finite(t) => format_decimal(Ratio::new(t as i128, self.0 as i128)),
            Energy::Infinite => "inf".to_string(),
        }
    }

    /// Inverse of [`EnergyScale::format`]: accepts `"inf"` as well as decimals.
    pub fn parse_extended(self, text: &str) -> Result<Energy, DecimalError> {
        if text == "inf" {
            Ok(Energy::Infinite)
        } else {
            self.parse(text)
        }
    }

    /// Binds the scale so energies can be used with `{}`.
    pub fn display(self, energy: Energy) -> DisplayEnergy {
        DisplayEnergy {
            energy,
            scale: self,
        }
    }
}

impl Default for EnergyScale {
    fn default() -> Self {
        EnergyScale(DEFAULT_SCALE)
    }
}

pub struct DisplayEnergy {
    energy: Energy,
    scale: EnergyScale,
}

impl fmt::Display for DisplayEnergy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.scale.format(self.energy))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecimalError {
    #[error("`{0}` is not a decimal number")]
    Syntax(String),
    #[error("`{0}` is not representable at the configured energy scale")]
    NotRepresentable(String),
}

const MAX_FRACTION_DIGITS: usize = 30;

/// Parses `[-+]digits[.digits]` exactly.
pub fn parse_decimal(text: &str) -> Result<Ratio<i128>, DecimalError> {
    let syntax = || DecimalError::Syntax(text.to_string());
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(syntax());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
        || body.ends_with('.')
        || frac_part.len() > MAX_FRACTION_DIGITS
    {
        return Err(syntax());
    }
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add((b - b'0') as i128))
            .ok_or_else(|| DecimalError::NotRepresentable(text.to_string()))?;
    }
    let denom = 10i128.pow(frac_part.len() as u32);
    let value = Ratio::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Shortest decimal rendering of a rational. Values whose reduced
/// denominator has prime factors other than 2 and 5 fall back to `p/q`.
pub fn format_decimal(value: Ratio<i128>) -> String {
    let numer = *value.numer();
    let denom = *value.denom();
    let mut rest = denom;
    let mut twos = 0u32;
    let mut fives = 0u32;
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    if rest != 1 {
        return format!("{numer}/{denom}");
    }
    let digits = twos.max(fives);
    let scaled = numer * (10i128.pow(digits) / denom);
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    if digits == 0 {
        return format!("{sign}{abs}");
    }
    let pow = 10u128.pow(digits);
    format!(
        "{sign}{}.{:0width$}",
        abs / pow,
        abs % pow,
        width = digits as usize
    )
}
