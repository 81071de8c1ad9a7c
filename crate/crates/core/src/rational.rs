//! Exact rational helpers shared by every module.
//!
//! All quantities that the formulas produce (Dedekind sums, Chern numbers,
//! slopes, intersection numbers) are carried as [`Rational`], an
//! arbitrary-precision fraction in lowest terms. On the wire a rational is
//! the object `{"num": "<decimal>", "den": "<decimal>"}` so that values of
//! any size survive JSON round trips.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Integer square root rounded down.
pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

/// Integer square root rounded up.
pub fn ceil_sqrt(n: u64) -> u64 {
    let s = n.sqrt();
    if s * s == n {
        s
    } else {
        s + 1
    }
}

/// Exact test of `x <= k * sqrt(n)` for rationals `x`, `k >= 0` and `n >= 0`.
pub fn le_times_sqrt(x: &Rational, k: &Rational, n: u64) -> bool {
    debug_assert!(!k.is_negative());
    if !x.is_positive() {
        return true;
    }
    // both sides nonnegative, compare squares
    x * x <= k * k * int(n as i64)
}

/// Parse a decimal literal ("3", "-2.5", "3.14159", "1e-2") or a fraction
/// ("22/7") into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fractional) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && fractional.is_empty()
        || !whole.chars().chain(fractional.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a decimal number: {s:?}")));
    }
    let joined = format!("{whole}{fractional}");
    let mut num: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| Error::Parse(s.to_string()))?
    };
    if negative {
        num = -num;
    }
    let scale = exponent - fractional.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Best rational approximation of `x` with error at most `tol`, found by
/// walking the continued-fraction convergents.
pub fn approximate_f64(x: f64, tol: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite value {x}")));
    }
    let exact = Rational::from_float(x).ok_or_else(|| Error::Parse(x.to_string()))?;
    let tol_r = Rational::from_float(tol.abs()).unwrap_or_else(Rational::zero);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let approx = Rational::new(h2.clone(), k2.clone());
        if (&approx - &exact).abs() <= tol_r || approx == exact {
            return Ok(approx);
        }
        let fract = &rest - Rational::from_integer(a);
        if fract.is_zero() {
            return Ok(approx);
        }
        rest = fract.recip();
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
}

/// Canonical "num/den" string (den omitted for integers).
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn cmp_abs(a: &Rational, b: &Rational) -> Ordering {
    a.abs().cmp(&b.abs())
}

/// Serde adapter writing a [`Rational`] as `{"num": "...", "den": "..."}`.
pub mod serde_frac {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wire {
        num: String,
        den: String,
    }

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let w = Wire::deserialize(d)?;
        let num: BigInt = w.num.parse().map_err(de::Error::custom)?;
        let den: BigInt = w.den.parse().map_err(de::Error::custom)?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }

    /// Same encoding for `Option<Rational>` (absent values become `null`).
    pub mod option {
        use super::*;

        #[derive(Serialize, Deserialize)]
        #[serde(transparent)]
        struct Inner(#[serde(with = "super")] Rational);

        pub fn serialize<S: Serializer>(
            r: &Option<Rational>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            r.as_ref().map(|v| Inner(v.clone())).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<Rational>, D::Error> {
            Ok(Option::<Inner>::deserialize(d)?.map(|i| i.0))
        }
    }
}

/// Serde adapter writing a [`BigInt`] as a decimal string.
pub mod serde_bigint {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Text(String),
            Number(i64),
        }
        match Wire::deserialize(d)? {
            Wire::Text(t) => t.parse().map_err(de::Error::custom),
            Wire::Number(n) => Ok(BigInt::from(n)),
        }
    }
}
