//! Exact rational scalars and their `"num/den"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// The coefficient field: arbitrary-precision rationals, always reduced.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational `{text}`: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: &'static str,
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `k!` as an exact scalar.
pub fn factorial(k: u32) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    Scalar::from_integer(acc)
}

/// Canonical text form, always `num/den` with `den > 0` (integers print as `n/1`).
pub fn format(q: &Scalar) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `num/den` or a bare integer. Decimal points are rejected.
pub fn parse(text: &str) -> Result<Scalar, ParseScalarError> {
    let err = |reason| ParseScalarError {
        text: text.to_string(),
        reason,
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("numerator is not an integer"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| err("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Scalar::new(num, den))
}

/// Nearest double. Huge values saturate to +/- infinity.
pub fn to_f64(q: &Scalar) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale down until both parts fit; loses nothing material at double precision.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    if d == 0.0 {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Exact conversion of a finite double (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Option<Scalar> {
    Scalar::from_float(x)
}

/// Serde adapters for `Scalar` fields stored as `"num/den"` strings.
pub mod serde_text {
    use super::Scalar;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::Scalar;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for q in v {
                seq.serialize_element(&crate::scalar::format(q))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| crate::scalar::parse(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_canonical() {
        assert_eq!(format(&ratio(2, 4)), "1/2");
        assert_eq!(format(&ratio(3, -6)), "-1/2");
        assert_eq!(format(&int(5)), "5/1");
        assert_eq!(format(&zero()), "0/1");
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse(" 1 / 3 ").unwrap(), ratio(1, 3));
    }

    #[test]
    fn parse_rejects_decimals_and_zero_denominators() {
        assert!(parse("0.5").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&ratio(1, 4)), 0.25);
        assert_eq!(to_f64(&ratio(-2, 3)), -2.0 / 3.0);
        assert_eq!(from_f64(0.375).unwrap(), ratio(3, 8));
        let huge = Scalar::from_integer(BigInt::from(10).pow(400)) / int(3);
        assert!(to_f64(&huge).is_infinite());
        let big = BigInt::from(10).pow(400);
        let near_quarter = Scalar::new(big.clone() + 1, big * 4);
        assert_eq!(to_f64(&near_quarter), 0.25);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(6), int(720));
    }
}
