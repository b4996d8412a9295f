use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

/// Shorthand for building a rational from machine integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn floor_rat(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_rat(x: &BigRational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Nearest-ish f64 of a rational of any size.
pub fn rat_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaled integer division for huge numerators and denominators.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (x.numer() << shift as usize).div_floor(x.denom())
    } else {
        x.numer().div_floor(&(x.denom() << (-shift) as usize))
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-shift as i32)
}

/// `floor(x * 2^bits)`.
pub(crate) fn dyadic_floor(x: &BigRational, bits: u32) -> BigInt {
    (x.numer() << bits as usize).div_floor(x.denom())
}

pub(crate) fn dyadic(m: BigInt, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(m << exp as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-exp) as usize)
    }
}

pub(crate) fn abs_rat(x: &BigRational) -> BigRational {
    if x.is_negative() {
        -x.clone()
    } else {
        x.clone()
    }
}
