//! Real algebraic numbers: elements of `Q[x]/(p)` evaluated at one chosen
//! real root of `p`, with signs decided by refining an isolating interval.

use super::poly::{self, Poly};
use super::rational::{abs_rat, dyadic_floor, floor_rat, rat_to_f64};
use super::NumericError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

/// A real number field `Q(ξ)` with `ξ` a fixed real root of a monic
/// irreducible integer polynomial.
pub struct NumberField {
    poly: Vec<BigInt>,
    qpoly: Poly,
    /// Open isolating interval, tightened in place by bisection.
    iso: RwLock<(BigRational, BigRational)>,
    /// Set for `x^2 - d`, which admits a squaring sign test.
    radicand: Option<BigInt>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.iso.read().expect("lock").clone();
        f.debug_struct("NumberField")
            .field("poly", &self.poly)
            .field("root_in", &(rat_to_f64(&lo), rat_to_f64(&hi)))
            .finish()
    }
}

fn to_qpoly(p: &[BigInt]) -> Poly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn has_rational_root(p: &[BigInt]) -> bool {
    // Monic integer polynomial: rational roots are integers dividing the constant term.
    let c0 = p[0].abs();
    if c0.is_zero() {
        return true;
    }
    let q = to_qpoly(p);
    let test = |k: &BigInt| {
        poly::eval(&q, &BigRational::from_integer(k.clone())).is_zero()
            || poly::eval(&q, &BigRational::from_integer(-k.clone())).is_zero()
    };
    let limit = c0.sqrt();
    let mut k = BigInt::one();
    while k <= limit {
        if (&c0 % &k).is_zero() && (test(&k) || test(&(&c0 / &k))) {
            return true;
        }
        k += 1;
    }
    false
}

impl NumberField {
    /// Field generated by the unique root of `poly` (low-to-high integer
    /// coefficients, monic, degree 2 or 3, irreducible) inside `(lo, hi)`.
    pub fn new(poly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Result<Arc<Self>, NumericError> {
        let deg = poly.len().saturating_sub(1);
        if !(2..=3).contains(&deg) {
            return Err(NumericError::InvalidField(format!("degree {deg} unsupported")));
        }
        if !poly[deg].is_one() {
            return Err(NumericError::InvalidField("polynomial must be monic".into()));
        }
        if has_rational_root(&poly) {
            return Err(NumericError::InvalidField("polynomial is reducible".into()));
        }
        let qpoly = to_qpoly(&poly);
        if lo >= hi || poly::eval(&qpoly, &lo).is_zero() || poly::eval(&qpoly, &hi).is_zero() {
            return Err(NumericError::InvalidField("bad isolating interval".into()));
        }
        if poly::count_roots(&poly::sturm(&qpoly), &lo, &hi) != 1 {
            return Err(NumericError::InvalidField("interval must isolate exactly one root".into()));
        }
        let radicand = (deg == 2 && poly[1].is_zero()).then(|| -poly[0].clone());
        Ok(Arc::new(NumberField { poly, qpoly, iso: RwLock::new((lo, hi)), radicand }))
    }

    /// `Q(√d)` with `√d > 0`; one shared instance per square-free `d`.
    pub fn quadratic(d: &BigInt) -> Result<Arc<Self>, NumericError> {
        static CACHE: OnceLock<Mutex<HashMap<BigInt, Arc<NumberField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().expect("lock").get(d) {
            return Ok(f.clone());
        }
        if d <= &BigInt::one() || d.sqrt().pow(2) == *d {
            return Err(NumericError::InvalidField(format!("{d} is not a positive non-square")));
        }
        let s = d.sqrt();
        let f = Self::new(
            vec![-d.clone(), BigInt::zero(), BigInt::one()],
            BigRational::from_integer(s.clone()),
            BigRational::from_integer(s + 1),
        )?;
        cache.lock().expect("lock").insert(d.clone(), f.clone());
        Ok(f)
    }

    /// All real roots of a monic irreducible polynomial, ascending.
    pub fn real_roots(poly: Vec<BigInt>) -> Result<Vec<Arc<Self>>, NumericError> {
        let q = to_qpoly(&poly);
        let seq = poly::sturm(&q);
        let b = poly::root_bound(&q);
        let b = BigRational::from_integer(floor_rat(&b) + 1);
        let mut stack = vec![(-b.clone(), b)];
        let mut found = Vec::new();
        while let Some((lo, hi)) = stack.pop() {
            match poly::count_roots(&seq, &lo, &hi) {
                0 => {}
                1 if !poly::eval(&q, &hi).is_zero() => found.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                    stack.push((mid.clone(), hi));
                    stack.push((lo, mid));
                }
            }
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        found.into_iter().map(|(lo, hi)| Self::new(poly.clone(), lo, hi)).collect()
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn radicand(&self) -> Option<&BigInt> {
        self.radicand.as_ref()
    }

    pub fn generator(self: &Arc<Self>) -> Alg {
        Alg::normalize(Some(self.clone()), vec![BigRational::zero(), BigRational::one()])
    }

    /// Interval `(lo, hi)` around the root of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        {
            let iso = self.iso.read().expect("lock");
            if &iso.1 - &iso.0 <= target {
                return iso.clone();
            }
        }
        let mut iso = self.iso.write().expect("lock");
        let two = BigRational::from_integer(2.into());
        let lo_sign = poly::sign_at(&self.qpoly, &iso.0);
        while &iso.1 - &iso.0 > target {
            let mid = (&iso.0 + &iso.1) / &two;
            let s = poly::sign_at(&self.qpoly, &mid);
            debug_assert!(s != Ordering::Equal, "irreducible polynomial has no rational root");
            if s == lo_sign {
                iso.0 = mid;
            } else {
                iso.1 = mid;
            }
        }
        iso.clone()
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        if Arc::ptr_eq(self, other) {
            return true;
        }
        if self.poly != other.poly {
            return false;
        }
        let (a, b) = (self.enclosure(64), other.enclosure(64));
        a.0 < b.1 && b.0 < a.1
    }
}

/// An element of a real number field, or a plain rational when `field` is `None`.
#[derive(Clone)]
pub struct Alg {
    field: Option<Arc<NumberField>>,
    c: Poly,
}

fn merge(a: &Option<Arc<NumberField>>, b: &Option<Arc<NumberField>>) -> Option<Arc<NumberField>> {
    match (a, b) {
        (Some(x), Some(y)) => {
            assert!(x.same_as(y), "mixing elements of different number fields");
            Some(x.clone())
        }
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }
    fn mul(&self, o: &Interval) -> Interval {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().expect("nonempty").clone();
        let hi = p.iter().max().expect("nonempty").clone();
        Interval { lo, hi }
    }
    fn add_scalar(&self, c: &BigRational) -> Interval {
        Interval { lo: &self.lo + c, hi: &self.hi + c }
    }
}

impl Alg {
    fn normalize(field: Option<Arc<NumberField>>, c: Poly) -> Alg {
        let mut c = poly::trim(c);
        let field = match field {
            Some(f) if c.len() > 1 => {
                if c.len() > f.degree() {
                    c = poly::divrem(&c, &f.qpoly).1;
                }
                if c.len() > 1 {
                    Some(f)
                } else {
                    None
                }
            }
            _ => None,
        };
        Alg { field, c }
    }

    pub fn zero() -> Alg {
        Alg { field: None, c: Vec::new() }
    }

    pub fn one() -> Alg {
        Alg::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Alg {
        Alg::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Alg {
        Alg::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(x: BigRational) -> Alg {
        Alg::normalize(None, vec![x])
    }

    /// Build `Σ c_i ξ^i` in the given field.
    pub fn from_coeffs(field: &Arc<NumberField>, c: Vec<BigRational>) -> Alg {
        Alg::normalize(Some(field.clone()), c)
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Alg, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        match &self.field {
            None => Ok(Alg::from_rational(BigRational::one() / &self.c[0])),
            Some(f) => {
                let inv = poly::inverse_mod(&self.c, &f.qpoly).ok_or(NumericError::DivisionByZero)?;
                Ok(Alg::normalize(Some(f.clone()), inv))
            }
        }
    }

    fn eval_interval(&self, root: &(BigRational, BigRational)) -> Interval {
        let x = Interval { lo: root.0.clone(), hi: root.1.clone() };
        let mut acc = Interval::point(BigRational::zero());
        for c in self.c.iter().rev() {
            acc = acc.mul(&x).add_scalar(c);
        }
        acc
    }

    /// Enclosure of the value of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let Some(f) = &self.field else {
            let v = self.as_rational().expect("rational");
            return (v.clone(), v);
        };
        let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut prec = bits + 8;
        loop {
            let iv = self.eval_interval(&f.enclosure(prec));
            if &iv.hi - &iv.lo <= target {
                return (iv.lo, iv.hi);
            }
            prec += prec / 2 + 16;
        }
    }

    pub fn sign(&self) -> Ordering {
        let Some(f) = &self.field else {
            return self.as_rational().expect("rational").cmp(&BigRational::zero());
        };
        if let Some(d) = &f.radicand {
            return quadratic_sign(&self.c[0], &self.c[1], d);
        }
        let zero = BigRational::zero();
        let mut prec = 32;
        loop {
            let iv = self.eval_interval(&f.enclosure(prec));
            if iv.lo > zero {
                return Ordering::Greater;
            }
            if iv.hi < zero {
                return Ordering::Less;
            }
            // A nonzero element of an irreducible extension never vanishes,
            // so this loop terminates.
            prec *= 2;
        }
    }

    pub fn abs(&self) -> Alg {
        if self.sign() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn floor(&self) -> BigInt {
        if let Some(v) = self.as_rational() {
            return floor_rat(&v);
        }
        let (lo, _) = self.enclosure(8);
        let mut k = floor_rat(&lo);
        // Irrational values are never integers, so strict comparisons suffice.
        while (self - &Alg::from_bigint(k.clone())).sign() == Ordering::Less {
            k -= 1;
        }
        while (self - &Alg::from_bigint(&k + 1)).sign() == Ordering::Greater {
            k += 1;
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Nearest double with about 60 bits of relative accuracy.
    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.as_rational() {
            return rat_to_f64(&v);
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.enclosure(bits);
            let same_sign = lo.is_positive() == hi.is_positive() && !lo.is_zero() && !hi.is_zero();
            let rel = BigRational::new(BigInt::one(), BigInt::one() << 60usize);
            if (same_sign && &hi - &lo <= abs_rat(&lo) * rel) || bits > 4096 {
                return rat_to_f64(&((lo + hi) / BigRational::from_integer(2.into())));
            }
            bits += 64;
        }
    }

    /// `floor(self * 2^bits)`.
    pub fn dyadic_floor(&self, bits: u32) -> BigInt {
        match self.as_rational() {
            Some(v) => dyadic_floor(&v, bits),
            None => (self * &Alg::from_bigint(BigInt::one() << bits as usize)).floor(),
        }
    }

    pub fn max(self, other: Alg) -> Alg {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn square(&self) -> Alg {
        self * self
    }
}

fn quadratic_sign(a: &BigRational, b: &BigRational, d: &BigInt) -> Ordering {
    let sa = a.cmp(&BigRational::zero());
    let sb = b.cmp(&BigRational::zero());
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * BigRational::from_integer(d.clone());
    if lhs > rhs {
        sa
    } else {
        sb
    }
}

impl PartialEq for Alg {
    fn eq(&self, other: &Self) -> bool {
        if self.c != other.c {
            return false;
        }
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => a.same_as(b),
            _ => true,
        }
    }
}

impl Eq for Alg {}

impl PartialOrd for Alg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Alg {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Debug for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_rational() {
            return write!(f, "{v}");
        }
        let field = self.field.as_ref().expect("field element");
        if let Some(d) = &field.radicand {
            let s = super::QuadraticSurd::from_parts(&self.c[0], &self.c[1], d);
            return write!(f, "{s}");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Alg> for &Alg {
            type Output = Alg;
            fn $m(self, rhs: &Alg) -> Alg {
                let f: fn(&Alg, &Alg) -> Alg = $body;
                f(self, rhs)
            }
        }
        impl $tr<Alg> for Alg {
            type Output = Alg;
            fn $m(self, rhs: Alg) -> Alg {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Alg> for Alg {
            type Output = Alg;
            fn $m(self, rhs: &Alg) -> Alg {
                (&self).$m(rhs)
            }
        }
        impl $tr<Alg> for &Alg {
            type Output = Alg;
            fn $m(self, rhs: Alg) -> Alg {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Alg::normalize(merge(&a.field, &b.field), poly::add(&a.c, &b.c)));
binop!(Sub, sub, |a, b| Alg::normalize(merge(&a.field, &b.field), poly::sub(&a.c, &b.c)));
binop!(Mul, mul, |a, b| Alg::normalize(merge(&a.field, &b.field), poly::mul(&a.c, &b.c)));
binop!(Div, div, |a, b| a * &b.inv().expect("division by zero"));

impl Neg for &Alg {
    type Output = Alg;
    fn neg(self) -> Alg {
        Alg { field: self.field.clone(), c: poly::neg(&self.c) }
    }
}

impl Neg for Alg {
    type Output = Alg;
    fn neg(self) -> Alg {
        -&self
    }
}

impl From<i64> for Alg {
    fn from(n: i64) -> Alg {
        Alg::from_int(n)
    }
}

impl From<BigRational> for Alg {
    fn from(x: BigRational) -> Alg {
        Alg::from_rational(x)
    }
}
