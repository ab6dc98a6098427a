//! Exact rational arithmetic helpers and the `num/den` string encoding
//! used by every file format in this crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// All probabilities, weights and bounds in this crate are exact rationals.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Renders a rational as `num/den`, or plain `num` for integers.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal convenience value; exact comparisons never go through this.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `num/den`, a plain integer, or a decimal such as `0.25`.
/// Decimals are converted exactly using a power-of-ten denominator.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad numerator in rational '{s}'")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad denominator in rational '{s}'")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in '{s}'")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.trim();
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::invalid(format!("bad decimal '{s}'")));
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_val: BigInt = if int_part.trim() == "-" || int_part.trim().is_empty() {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| Error::invalid(format!("bad decimal '{s}'")))?
        };
        let scale = BigInt::from(10u32).pow(digits.len() as u32);
        let frac_val: BigInt = digits
            .parse()
            .map_err(|_| Error::invalid(format!("bad decimal '{s}'")))?;
        let abs = int_val.abs() * &scale + frac_val;
        let signed = if negative { -abs } else { abs };
        return Ok(Rat::new(signed, scale));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::invalid(format!("bad rational '{s}'")))?;
    Ok(Rat::from_integer(n))
}

/// Serde adapter for a single rational encoded as a `num/den` string.
pub mod rat_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&rat_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rat(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rat>` as a list of `num/den` strings.
pub mod rat_vec {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(rat_to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        strings
            .iter()
            .map(|s| parse_rat(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Rat>>` (matrices of `num/den` strings).
pub mod rat_matrix {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &[Vec<Rat>],
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(
            m.iter()
                .map(|row| row.iter().map(rat_to_string).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Vec<Vec<Rat>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(de)?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rat(s).map_err(de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter for `BTreeMap<usize, Rat>` keyed by stringified indices,
/// as in the q-distribution file format.
pub mod rat_map {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<usize, Rat>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_map(m.iter().map(|(k, v)| (k.to_string(), rat_to_string(v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<BTreeMap<usize, Rat>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(de)?;
        raw.iter()
            .map(|(k, v)| {
                let idx: usize = k
                    .parse()
                    .map_err(|_| de::Error::custom(format!("bad context index '{k}'")))?;
                let val = parse_rat(v).map_err(de::Error::custom)?;
                Ok((idx, val))
            })
            .collect()
    }
}
