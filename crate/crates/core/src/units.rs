//! Exact time quantities.
//!
//! Every delay in the crate is an integer number of femtoseconds. Document
//! values given in nanoseconds or picoseconds are converted from their
//! shortest decimal rendering, so `0.469` ns becomes exactly `469_000` fs and
//! values that would need sub-femtosecond precision are rejected.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FS_PER_PS: i64 = 1_000;
pub const FS_PER_NS: i64 = 1_000_000;

/// A signed time in femtoseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeFs(pub i64);

impl TimeFs {
    pub const ZERO: TimeFs = TimeFs(0);

    pub const fn from_fs(fs: i64) -> Self {
        TimeFs(fs)
    }

    pub const fn from_ps(ps: i64) -> Self {
        TimeFs(ps * FS_PER_PS)
    }

    pub const fn from_ns(ns: i64) -> Self {
        TimeFs(ns * FS_PER_NS)
    }

    pub const fn fs(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> Self {
        TimeFs(self.0.abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// Parses a decimal nanosecond literal such as `"0.469"`.
    pub fn parse_ns(text: &str) -> Result<Self, UnitError> {
        parse_scaled(text, 6).map(TimeFs)
    }

    /// Parses a decimal picosecond literal such as `"67"`.
    pub fn parse_ps(text: &str) -> Result<Self, UnitError> {
        parse_scaled(text, 3).map(TimeFs)
    }

    /// Converts a document number given in nanoseconds.
    pub fn from_ns_f64(value: f64) -> Result<Self, UnitError> {
        Self::parse_ns(&float_literal(value)?)
    }

    /// Converts a document number given in picoseconds.
    pub fn from_ps_f64(value: f64) -> Result<Self, UnitError> {
        Self::parse_ps(&float_literal(value)?)
    }

    /// Exact decimal rendering in nanoseconds (`469000` fs -> `"0.469"`).
    pub fn ns_string(self) -> String {
        render_scaled(self.0, 6)
    }

    /// Exact decimal rendering in picoseconds (`469000` fs -> `"469"`).
    pub fn ps_string(self) -> String {
        render_scaled(self.0, 3)
    }

    /// Nearest `f64` to the nanosecond value, used when writing documents.
    pub fn to_ns_f64(self) -> f64 {
        self.ns_string().parse().expect("decimal rendering is a valid float")
    }

    pub fn to_ps_f64(self) -> f64 {
        self.ps_string().parse().expect("decimal rendering is a valid float")
    }
}

impl fmt::Display for TimeFs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ns", self.ns_string())
    }
}

impl Add for TimeFs {
    type Output = TimeFs;
    fn add(self, rhs: TimeFs) -> TimeFs {
        TimeFs(self.0 + rhs.0)
    }
}

impl AddAssign for TimeFs {
    fn add_assign(&mut self, rhs: TimeFs) {
        self.0 += rhs.0;
    }
}

impl Sub for TimeFs {
    type Output = TimeFs;
    fn sub(self, rhs: TimeFs) -> TimeFs {
        TimeFs(self.0 - rhs.0)
    }
}

impl Neg for TimeFs {
    type Output = TimeFs;
    fn neg(self) -> TimeFs {
        TimeFs(-self.0)
    }
}

impl Sum for TimeFs {
    fn sum<I: Iterator<Item = TimeFs>>(iter: I) -> TimeFs {
        TimeFs(iter.map(|t| t.0).sum())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitError {
    #[error("`{0}` is not a decimal number")]
    Malformed(String),
    #[error("`{0}` needs sub-femtosecond precision")]
    TooPrecise(String),
    #[error("`{0}` is out of range")]
    Overflow(String),
}

fn float_literal(value: f64) -> Result<String, UnitError> {
    if !value.is_finite() {
        return Err(UnitError::Malformed(value.to_string()));
    }
    // Display for f64 prints the shortest round-tripping decimal, never an exponent.
    Ok(format!("{value}"))
}

/// Parses a plain decimal literal into an integer scaled by `10^decimals`.
fn parse_scaled(text: &str, decimals: u32) -> Result<i64, UnitError> {
    let malformed = || UnitError::Malformed(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let frac_trimmed = frac_part.trim_end_matches('0');
    if frac_trimmed.len() > decimals as usize {
        return Err(UnitError::TooPrecise(text.to_string()));
    }
    let overflow = || UnitError::Overflow(text.to_string());
    let mut value: i64 = 0;
    for b in int_part.bytes() {
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(i64::from(b - b'0')))
            .ok_or_else(overflow)?;
    }
    let mut frac: i64 = 0;
    for i in 0..decimals as usize {
        let digit = frac_trimmed.as_bytes().get(i).map_or(0, |b| i64::from(b - b'0'));
        frac = frac * 10 + digit;
    }
    let scaled = value
        .checked_mul(10_i64.pow(decimals))
        .and_then(|v| v.checked_add(frac))
        .ok_or_else(overflow)?;
    Ok(if negative { -scaled } else { scaled })
}

fn render_scaled(value: i64, decimals: u32) -> String {
    let scale = 10_i64.pow(decimals);
    let sign = if value < 0 { "-" } else { "" };
    let abs = value.unsigned_abs();
    let int = abs / scale as u64;
    let frac = abs % scale as u64;
    if frac == 0 {
        return format!("{sign}{int}");
    }
    let digits = format!("{frac:0width$}", width = decimals as usize);
    format!("{sign}{int}.{}", digits.trim_end_matches('0'))
}

/// An exact mean `total / count` of femtosecond quantities.
///
/// Means with `count == 0` are defined as zero. Comparison and equality are
/// by rational value, so `4/6` equals `2/3`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MeanFs {
    pub total: i64,
    pub count: u64,
}

impl MeanFs {
    pub const ZERO: MeanFs = MeanFs { total: 0, count: 0 };

    pub fn new(total: i64, count: u64) -> Self {
        MeanFs { total, count }
    }

    fn parts(self) -> (i128, i128) {
        if self.count == 0 {
            (0, 1)
        } else {
            (i128::from(self.total), i128::from(self.count))
        }
    }

    /// The value as a fully reduced fraction `(numerator fs, denominator)`.
    pub fn reduced(self) -> (i64, u64) {
        let (num, den) = self.parts();
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        ((num / g) as i64, (den / g) as u64)
    }

    /// Value rounded to the nearest femtosecond, ties to even.
    pub fn rounded_fs(self) -> TimeFs {
        let (num, den) = self.parts();
        let q = num.div_euclid(den);
        let r = num.rem_euclid(den);
        let twice = 2 * r;
        let up = match twice.cmp(&den) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => q % 2 != 0,
        };
        TimeFs((q + i128::from(up)) as i64)
    }

    pub fn is_zero(self) -> bool {
        self.total == 0 || self.count == 0
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl PartialEq for MeanFs {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MeanFs {}

impl PartialOrd for MeanFs {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeanFs {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        (a * d).cmp(&(c * b))
    }
}

impl fmt::Display for MeanFs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.reduced();
        if den == 1 {
            write!(f, "{}", TimeFs(num))
        } else {
            write!(f, "{}/{} fs (~{})", num, den, self.rounded_fs())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_values_exactly() {
        assert_eq!(TimeFs::parse_ns("0.469").unwrap(), TimeFs(469_000));
        assert_eq!(TimeFs::parse_ns("0.47").unwrap(), TimeFs(470_000));
        assert_eq!(TimeFs::parse_ns("6.2").unwrap(), TimeFs(6_200_000));
        assert_eq!(TimeFs::parse_ps("67").unwrap(), TimeFs(67_000));
        assert_eq!(TimeFs::from_ns_f64(0.617).unwrap(), TimeFs(617_000));
        assert_eq!(TimeFs::from_ns_f64(1.845161).unwrap(), TimeFs(1_845_161));
        assert_eq!(TimeFs::parse_ns("-0.5").unwrap(), TimeFs(-500_000));
    }

    #[test]
    fn rejects_sub_femtosecond_inputs() {
        assert!(matches!(TimeFs::parse_ns("0.0000001"), Err(UnitError::TooPrecise(_))));
        assert!(matches!(TimeFs::from_ns_f64(1e-7), Err(UnitError::TooPrecise(_))));
        assert!(matches!(TimeFs::parse_ps("0.0005"), Err(UnitError::TooPrecise(_))));
        assert!(TimeFs::parse_ns("0.1234560").is_ok());
        assert!(matches!(TimeFs::parse_ns("1e3"), Err(UnitError::Malformed(_))));
        assert!(matches!(TimeFs::parse_ns("."), Err(UnitError::Malformed(_))));
    }

    #[test]
    fn renders_decimal() {
        assert_eq!(TimeFs(469_000).ns_string(), "0.469");
        assert_eq!(TimeFs(2_000_000).ns_string(), "2");
        assert_eq!(TimeFs(-50_000).ns_string(), "-0.05");
        assert_eq!(TimeFs(145_161).ps_string(), "145.161");
        assert_eq!(TimeFs(469_000).to_ns_f64(), 0.469);
    }

    #[test]
    fn mean_compares_by_value() {
        assert_eq!(MeanFs::new(400_000, 6), MeanFs::new(200_000, 3));
        assert!(MeanFs::new(1, 3) < MeanFs::new(1, 2));
        assert_eq!(MeanFs::ZERO, MeanFs::new(0, 7));
        assert_eq!(MeanFs::new(400_000, 6).reduced(), (200_000, 3));
    }

    #[test]
    fn rounding_is_half_even() {
        assert_eq!(MeanFs::new(5, 2).rounded_fs(), TimeFs(2));
        assert_eq!(MeanFs::new(7, 2).rounded_fs(), TimeFs(4));
        assert_eq!(MeanFs::new(-5, 2).rounded_fs(), TimeFs(-2));
        assert_eq!(MeanFs::new(400_000, 6).rounded_fs(), TimeFs(66_667));
    }
}
