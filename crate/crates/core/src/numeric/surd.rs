use super::alg::{Alg, NumberField};
use super::NumericError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// `(p + q√d)/r` in lowest terms with `d` square-free.
///
/// Rational values have `q = 0`; their `d` is kept for display only and is
/// ignored by equality, hashing and comparison.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

fn square_free_split(d: &BigInt) -> (BigInt, BigInt) {
    // d = s^2 * core, by trial division (inputs here are small radicands).
    let mut core = BigInt::one();
    let mut s = BigInt::one();
    let mut rest = d.clone();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        let mut e = 0u32;
        while (&rest % &f).is_zero() {
            rest /= &f;
            e += 1;
        }
        s *= f.pow(e / 2);
        if e % 2 == 1 {
            core *= &f;
        }
        f += 1;
    }
    (s, core * rest)
}

impl QuadraticSurd {
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Result<Self, NumericError> {
        if r.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        if !d.is_positive() {
            return Err(NumericError::InvalidField(format!("radicand {d} must be positive")));
        }
        let (s, core) = square_free_split(&d);
        let (mut p, mut q) = (p, q * s);
        let d = if core.is_one() {
            p += std::mem::take(&mut q);
            BigInt::one()
        } else {
            core
        };
        Ok(Self::reduce(p, q, r, d))
    }

    fn reduce(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Self {
        let g = p.gcd(&q).gcd(&r);
        let sign = if r.is_negative() { -BigInt::one() } else { BigInt::one() };
        let g = g * sign;
        QuadraticSurd { p: p / &g, q: q / &g, r: r / &g, d }
    }

    pub fn from_rational(x: &BigRational) -> Self {
        Self::reduce(x.numer().clone(), BigInt::zero(), x.denom().clone(), BigInt::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    /// `√d` for a positive integer `d`.
    pub fn sqrt(d: i64) -> Result<Self, NumericError> {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::from(d))
    }

    /// `a + b√d` from rational parts.
    pub fn from_parts(a: &BigRational, b: &BigRational, d: &BigInt) -> Self {
        let r = a.denom().lcm(b.denom());
        let p = a.numer() * (&r / a.denom());
        let q = b.numer() * (&r / b.denom());
        Self::reduce(p, q, r, d.clone())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    /// Radicand, or `None` for a rational value.
    pub fn d(&self) -> Option<&BigInt> {
        (!self.q.is_zero()).then_some(&self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.r.clone())
    }

    pub fn surd_part(&self) -> BigRational {
        BigRational::new(self.q.clone(), self.r.clone())
    }

    /// The same value as an element of `Q(√d)`.
    pub fn to_alg(&self) -> Alg {
        if self.is_rational() {
            return Alg::from_rational(self.rational_part());
        }
        let field = NumberField::quadratic(&self.d).expect("square-free radicand");
        Alg::from_coeffs(&field, vec![self.rational_part(), self.surd_part()])
    }

    /// Back from a field element of `Q(√d)` or `Q`.
    pub fn from_alg(x: &Alg) -> Option<Self> {
        if let Some(v) = x.as_rational() {
            return Some(Self::from_rational(&v));
        }
        let d = x.field()?.radicand()?;
        Some(Self::from_parts(&x.coeffs()[0], &x.coeffs()[1], d))
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering, NumericError> {
        if !self.is_rational() && !other.is_rational() && self.d != other.d {
            return Err(NumericError::IncomparableFields(self.d.clone(), other.d.clone()));
        }
        Ok(self.to_alg().cmp(&other.to_alg()))
    }

    pub fn cmp_rational(&self, x: &BigRational) -> Ordering {
        self.to_alg().cmp(&Alg::from_rational(x.clone()))
    }

    /// Exact floor using an integer square root.
    pub fn floor(&self) -> BigInt {
        // floor((p + q√d)/r) = floor(floor(p + q√d)/r) for r > 0, and
        // q√d is never an integer when q ≠ 0.
        let t = if self.q.is_zero() {
            self.p.clone()
        } else {
            let s = (&self.q * &self.q * &self.d).sqrt();
            if self.q.is_positive() {
                &self.p + s
            } else {
                &self.p - s - 1
            }
        };
        t.div_floor(&self.r)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_alg().to_f64()
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.q == other.q && self.r == other.r && (self.q.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadraticSurd {}

impl Hash for QuadraticSurd {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.q.hash(state);
        self.r.hash(state);
        if !self.q.is_zero() {
            self.d.hash(state);
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() { write!(f, "{}", self.p) } else { write!(f, "{}/{}", self.p, self.r) };
        }
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{} sqrt {})/{}", self.p, sign, self.q.abs(), self.d, self.r)
    }
}

/// Exact comparison of a surd with a surd of the same field or a rational.
pub fn surd_cmp(x: &QuadraticSurd, y: &QuadraticSurd) -> Result<Ordering, NumericError> {
    x.try_cmp(y)
}
