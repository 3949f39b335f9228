//! Exact rationals used for weights, coefficient magnitudes and entropies.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Ratio<i64>;

/// `num / 2^exp`, reduced.
pub fn dyadic(num: i64, exp: u32) -> Rational {
    Rational::new(num, 1i64 << exp)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `a <= sqrt(b)` for nonnegative rationals, decided exactly.
pub fn le_sqrt(a: &Rational, b: &Rational) -> bool {
    if a.is_negative() {
        return true;
    }
    a * a <= *b
}

/// `sqrt(a) <= b`, decided exactly.
pub fn sqrt_le(a: &Rational, b: &Rational) -> bool {
    if b.is_negative() {
        return false;
    }
    *a <= b * b
}

#[derive(Serialize, Deserialize)]
struct Frac {
    num: i64,
    den: i64,
}

/// Serde adapter writing a rational as `{"num": .., "den": ..}`.
pub mod json {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Frac { num: *q.numer(), den: *q.denom() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let f = Frac::deserialize(d)?;
        if f.den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(f.num, f.den))
    }
}

/// Serde adapter for an optional rational (`null` when absent).
pub mod json_opt {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "super::json")] Rational);

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        q.map(W).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

/// Serde adapter writing masks as lowercase hex strings.
pub mod hex_masks {
    use super::*;
    use crate::gf2::Mask;

    pub fn serialize<S: Serializer>(masks: &[Mask], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = masks.iter().map(|m| format!("{m:x}")).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Mask>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|h| Mask::from_str_radix(h.trim_start_matches("0x"), 16).map_err(serde::de::Error::custom))
            .collect()
    }
}
