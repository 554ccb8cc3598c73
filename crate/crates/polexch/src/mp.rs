//! Arbitrary-precision substrate: requested-digit bookkeeping, fundamental
//! constants, factorials, and decimal rendering.
//!
//! Everything downstream speaks in *requested decimal digits*. Internally all
//! arithmetic runs at a working precision of `digits + max(10, digits/10)`
//! guard digits, so that final results survive the subtractions the error-law
//! checks perform (signals down at 1e-30 and below must not be rounding
//! artifacts).

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::float::Special;
use rug::ops::{CompleteRound, Pow};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// bits per decimal digit, rounded up a hair
const LOG2_10: f64 = 3.321928094887363;

/// A precision request in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prec {
    digits: u32,
}

impl Prec {
    pub fn new(digits: u32) -> Result<Prec> {
        if digits == 0 {
            return Err(Error::InvalidDigits(digits));
        }
        Ok(Prec { digits })
    }

    /// The digits the caller asked for.
    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Guard margin: max(10, 10% of the request).
    pub fn guard_digits(self) -> u32 {
        10.max(self.digits.div_ceil(10))
    }

    pub fn working_digits(self) -> u32 {
        self.digits + self.guard_digits()
    }

    /// Binary working precision handed to the float layer.
    pub fn bits(self) -> u32 {
        (self.working_digits() as f64 * LOG2_10).ceil() as u32 + 8
    }

    /// Fresh working-precision float from anything rug can convert.
    pub fn float<T>(self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    /// 10^(-digits-2): the internal convergence target, two digits tighter
    /// than the request.
    pub fn tol(self) -> Float {
        Float::with_val(self.bits(), 10).pow((self.digits as i32 + 2).checked_neg().unwrap())
    }
}

/// A real number together with the precision request it was computed under.
///
/// The stored float carries the full working precision; `digits` records what
/// the producer certifies.
#[derive(Clone, Debug)]
pub struct Real {
    value: Float,
    digits: u32,
}

impl Real {
    pub fn new(value: Float, prec: Prec) -> Real {
        Real {
            value,
            digits: prec.digits(),
        }
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_value(self) -> Float {
        self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Scientific-notation string with exactly `digits` significant figures.
    pub fn to_sci(&self) -> String {
        format_sci(&self.value, self.digits)
    }
}

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_sci())
    }
}

/// `d.dddd...e<exp>` with exactly `digits` significant figures, sign included
/// for negative values, exponent without a leading plus. Zero renders as
/// `0e0` regardless of the request.
pub fn format_sci(v: &Float, digits: u32) -> String {
    let digits = digits.max(1) as usize;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    if v.is_zero() {
        return "0e0".into();
    }
    // the float layer wants at least two digits; round down to one by hand
    let (sign, mut mantissa, exp) = v.to_sign_string_exp(10, Some(digits.max(2)));
    let mut exp = exp.expect("finite nonzero float has an exponent") - 1;
    if digits == 1 {
        let two: u32 = mantissa[..2].parse().unwrap();
        let one = (two + 5) / 10;
        if one == 10 {
            mantissa = "1".into();
            exp += 1;
        } else {
            mantissa = one.to_string();
        }
    }
    let mut out = String::with_capacity(mantissa.len() + 8);
    if sign {
        out.push('-');
    }
    out.push_str(&mantissa[..1]);
    if mantissa.len() > 1 {
        out.push('.');
        out.push_str(&mantissa[1..]);
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

/// Exact `n!` as a big integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Fundamental constants at one working precision, computed once and shared.
pub struct Consts {
    pub e: Float,
    pub pi: Float,
    pub ln2: Float,
    /// ln2 - 1/2, the rate constant of every exponential convergence law here
    pub a: Float,
}

fn consts_cache() -> &'static RwLock<HashMap<u32, Arc<Consts>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Consts>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared constants for a given binary precision.
pub fn consts(bits: u32) -> Arc<Consts> {
    if let Some(c) = consts_cache().read().unwrap().get(&bits) {
        return c.clone();
    }
    let ln2 = Float::with_val(bits, rug::float::Constant::Log2);
    let pi = Float::with_val(bits, rug::float::Constant::Pi);
    let e = Float::with_val(bits, 1u32).exp();
    let a = (&ln2 - Rational::from((1, 2))).complete(bits);
    let arc = Arc::new(Consts { e, pi, ln2, a });
    let mut w = consts_cache().write().unwrap();
    w.entry(bits).or_insert(arc).clone()
}

/// a = ln2 - 1/2 to the requested digits.
pub fn const_a(digits: u32) -> Result<Real> {
    let p = Prec::new(digits)?;
    Ok(Real::new(consts(p.bits()).a.clone(), p))
}

/// Convenience: a non-number float for "no data" slots.
pub fn nan(bits: u32) -> Float {
    Float::with_val(bits, Special::Nan)
}
