use super::alg::Alg;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `re + I·im` with exact real parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cx {
    pub re: Alg,
    pub im: Alg,
}

impl Cx {
    pub fn new(re: Alg, im: Alg) -> Cx {
        Cx { re, im }
    }

    pub fn real(re: Alg) -> Cx {
        Cx { re, im: Alg::zero() }
    }

    pub fn from_int(n: i64) -> Cx {
        Cx::real(Alg::from_int(n))
    }

    pub fn gaussian(re: i64, im: i64) -> Cx {
        Cx::new(Alg::from_int(re), Alg::from_int(im))
    }

    pub fn zero() -> Cx {
        Cx::real(Alg::zero())
    }

    pub fn one() -> Cx {
        Cx::real(Alg::one())
    }

    pub fn i() -> Cx {
        Cx::new(Alg::zero(), Alg::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    pub fn conj(&self) -> Cx {
        Cx::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sq(&self) -> Alg {
        self.re.square() + self.im.square()
    }

    pub fn inv(&self) -> Cx {
        let n = self.norm_sq();
        Cx::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn div(&self, o: &Cx) -> Cx {
        self * &o.inv()
    }

    pub fn scale(&self, s: &Alg) -> Cx {
        Cx::new(&self.re * s, &self.im * s)
    }

    /// Sign normalization used for display: positive real part, or positive
    /// imaginary part when purely imaginary.
    pub fn orientation(&self) -> Ordering {
        match self.re.sign() {
            Ordering::Equal => self.im.sign(),
            s => s,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "I*({})", self.im),
            (false, false) => write!(f, "{} + I*({})", self.re, self.im),
        }
    }
}

impl Add<&Cx> for &Cx {
    type Output = Cx;
    fn add(self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Cx> for &Cx {
    type Output = Cx;
    fn sub(self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Cx> for &Cx {
    type Output = Cx;
    fn mul(self, o: &Cx) -> Cx {
        Cx::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-&self.re, -&self.im)
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, o: Cx) -> Cx {
        &self + &o
    }
}

impl Sub for Cx {
    type Output = Cx;
    fn sub(self, o: Cx) -> Cx {
        &self - &o
    }
}

impl Mul for Cx {
    type Output = Cx;
    fn mul(self, o: Cx) -> Cx {
        &self * &o
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        -&self
    }
}
