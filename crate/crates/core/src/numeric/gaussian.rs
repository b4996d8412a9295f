use super::NumericError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `re + I·im` with machine-size parts; products are formed in `i128`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

impl GaussianInt {
    pub const fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    pub const fn real(re: i64) -> Self {
        GaussianInt { re, im: 0 }
    }

    pub fn norm(self) -> i128 {
        (self.re as i128).pow(2) + (self.im as i128).pow(2)
    }

    pub fn conj(self) -> Self {
        GaussianInt::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// Quotient rounded to the nearest Gaussian integer.
    fn div_round(self, d: Self) -> Self {
        let n = d.norm();
        let num_re = self.re as i128 * d.re as i128 + self.im as i128 * d.im as i128;
        let num_im = self.im as i128 * d.re as i128 - self.re as i128 * d.im as i128;
        let round = |x: i128| -> i64 { (2 * x + n).div_euclid(2 * n) as i64 };
        GaussianInt::new(round(num_re), round(num_im))
    }

    pub fn gcd(self, other: Self) -> Self {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let q = a.div_round(b);
            let r = a - q * b;
            a = b;
            b = r;
        }
        a
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(self, d: Self) -> Option<Self> {
        let q = self.div_round(d);
        (q * d == self).then_some(q)
    }

    /// The unit `u` with `u·self` in the sector `re > 0, im ≥ 0`.
    pub fn canonical_unit(self) -> Self {
        debug_assert!(!self.is_zero());
        [GaussianInt::real(1), I, GaussianInt::real(-1), -I]
            .into_iter()
            .find(|u| {
                let z = *u * self;
                z.re > 0 && z.im >= 0
            })
            .expect("one unit always lands in the sector")
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussianInt::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl From<i64> for GaussianInt {
    fn from(re: i64) -> Self {
        GaussianInt::real(re)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, 1) => write!(f, "I"),
            (0, -1) => write!(f, "-I"),
            (0, im) => write!(f, "{im}I"),
            (re, 1) => write!(f, "{re}+I"),
            (re, -1) => write!(f, "{re}-I"),
            (re, im) if im > 0 => write!(f, "{re}+{im}I"),
            (re, im) => write!(f, "{re}{im}I"),
        }
    }
}

/// Integer complex vector with the max-coordinate-modulus norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussianVector {
    pub coords: Vec<GaussianInt>,
}

impl GaussianVector {
    pub fn new(coords: Vec<GaussianInt>) -> Self {
        GaussianVector { coords }
    }

    pub fn real(coords: &[i64]) -> Self {
        GaussianVector { coords: coords.iter().map(|&c| GaussianInt::real(c)).collect() }
    }

    /// Square of the norm `max_i |v_i|`; an integer even when the norm is not.
    pub fn norm_sq(&self) -> i128 {
        self.coords.iter().map(|z| z.norm()).max().unwrap_or(0)
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|z| z.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.coords.iter().all(|z| z.im == 0)
    }

    pub fn conj(&self) -> Self {
        GaussianVector { coords: self.coords.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, u: GaussianInt) -> Self {
        GaussianVector { coords: self.coords.iter().map(|&z| u * z).collect() }
    }

    pub fn content(&self) -> GaussianInt {
        self.coords.iter().fold(GaussianInt::default(), |g, &z| g.gcd(z))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_unit()
    }

    pub fn primitive(&self) -> Result<Self, NumericError> {
        gaussian_primitive(self)
    }

    /// Real coordinates, if every imaginary part vanishes.
    pub fn as_real(&self) -> Option<Vec<i64>> {
        self.is_real().then(|| self.coords.iter().map(|z| z.re).collect())
    }
}

impl fmt::Display for GaussianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|z| z.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Divide out the Gaussian gcd and rotate the first nonzero coordinate into
/// the sector `0 ≤ arg < π/2`.
pub fn gaussian_primitive(v: &GaussianVector) -> Result<GaussianVector, NumericError> {
    if v.is_zero() {
        return Err(NumericError::ZeroVector);
    }
    let g = v.content();
    let reduced: Vec<GaussianInt> =
        v.coords.iter().map(|&z| z.div_exact(g).expect("gcd divides every coordinate")).collect();
    let first = *reduced.iter().find(|z| !z.is_zero()).expect("nonzero vector");
    Ok(GaussianVector::new(reduced).scale(first.canonical_unit()))
}
