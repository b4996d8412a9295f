use super::alg::Alg;
use super::rational::{dyadic, dyadic_floor, rat_to_f64};
use super::surd::QuadraticSurd;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Anything that can enclose its value in an interval of width `2^-bits`.
pub trait RealSource: Send + Sync {
    fn enclose(&self, bits: u32) -> (BigRational, BigRational);
}

impl RealSource for BigRational {
    fn enclose(&self, _bits: u32) -> (BigRational, BigRational) {
        (self.clone(), self.clone())
    }
}

impl RealSource for Alg {
    fn enclose(&self, bits: u32) -> (BigRational, BigRational) {
        self.enclosure(bits)
    }
}

impl RealSource for QuadraticSurd {
    fn enclose(&self, bits: u32) -> (BigRational, BigRational) {
        self.to_alg().enclosure(bits)
    }
}

/// Dyadic ball `[(mid - rad)·2^exp, (mid + rad)·2^exp]` together with the
/// procedure that produced it, so it can be re-run at higher precision.
#[derive(Clone)]
pub struct BallReal {
    mid: BigInt,
    rad: BigInt,
    exp: i64,
    source: Arc<dyn RealSource>,
}

impl fmt::Debug for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BallReal({} ± 2^{})", self.to_f64(), self.radius_log2())
    }
}

impl BallReal {
    /// Ball of radius at most `2^-bits`.
    pub fn new(source: Arc<dyn RealSource>, bits: u32) -> BallReal {
        let (lo, hi) = source.enclose(bits + 1);
        // Round the enclosure outward onto the grid 2^-(bits+2).
        let e = bits + 2;
        let lo_i = dyadic_floor(&lo, e);
        let hi_i = -dyadic_floor(&-hi, e);
        let sum = &lo_i + &hi_i;
        let (mid, rad) = if sum.is_even() {
            (sum / 2, (&hi_i - &lo_i) / 2)
        } else {
            // Move to the finer grid so the midpoint stays dyadic.
            (sum, &hi_i - &lo_i)
        };
        let exp = if (&lo_i + &hi_i).is_even() { -(e as i64) } else { -(e as i64) - 1 };
        BallReal { mid, rad, exp, source }
    }

    pub fn from_alg(x: &Alg, bits: u32) -> BallReal {
        BallReal::new(Arc::new(x.clone()), bits)
    }

    pub fn midpoint(&self) -> BigRational {
        dyadic(self.mid.clone(), self.exp)
    }

    pub fn radius(&self) -> BigRational {
        dyadic(self.rad.clone(), self.exp)
    }

    pub fn lo(&self) -> BigRational {
        dyadic(&self.mid - &self.rad, self.exp)
    }

    pub fn hi(&self) -> BigRational {
        dyadic(&self.mid + &self.rad, self.exp)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo() <= x && x <= &self.hi()
    }

    /// `floor(log2(radius))`, or `i64::MIN` for an exact ball.
    pub fn radius_log2(&self) -> i64 {
        if self.rad.is_zero() {
            i64::MIN
        } else {
            self.rad.bits() as i64 - 1 + self.exp
        }
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.midpoint())
    }

    /// Sign if the ball excludes zero or is exactly zero.
    pub fn sign(&self) -> Option<Ordering> {
        let zero = BigRational::zero();
        if self.rad.is_zero() {
            return Some(self.midpoint().cmp(&zero));
        }
        if self.lo() > zero {
            Some(Ordering::Greater)
        } else if self.hi() < zero {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn source(&self) -> &Arc<dyn RealSource> {
        &self.source
    }
}

/// Re-run the producing procedure so that the radius is at most `2^-bits`.
/// The result is contained in the old ball's value range by construction,
/// since both enclose the same exact value.
pub fn ball_refine(x: &BallReal, bits: u32) -> BallReal {
    let r = BallReal::new(x.source.clone(), bits.max(1));
    debug_assert!(r.radius() <= BigRational::new(BigInt::one(), BigInt::one() << bits as usize));
    r
}
