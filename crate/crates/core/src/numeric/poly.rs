//! Dense univariate polynomials over the rationals, coefficients low to high.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub(crate) fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x + y
        })
        .collect();
    trim(out)
}

pub(crate) fn neg(a: &Poly) -> Poly {
    a.iter().map(|c| -c.clone()).collect()
}

pub(crate) fn sub(a: &Poly, b: &Poly) -> Poly {
    add(a, &neg(b))
}

pub(crate) fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub(crate) fn scale(a: &Poly, s: &BigRational) -> Poly {
    trim(a.iter().map(|c| c * s).collect())
}

/// Euclidean division; panics on a zero divisor.
pub(crate) fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = a.clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn derivative(a: &Poly) -> Poly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer((i as i64).into())).collect())
}

pub(crate) fn eval(a: &Poly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub(crate) fn sign_at(a: &Poly, x: &BigRational) -> Ordering {
    eval(a, x).cmp(&BigRational::zero())
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, if it exists.
pub(crate) fn inverse_mod(a: &Poly, m: &Poly) -> Option<Poly> {
    let (mut r0, mut r1) = (m.clone(), trim(a.clone()));
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is the gcd; invertible only when it is a nonzero constant.
    if degree(&r0) != Some(0) {
        return None;
    }
    let inv_lead = BigRational::one() / &r0[0];
    Some(divrem(&scale(&s0, &inv_lead), m).1)
}

/// Sturm sequence of a square-free polynomial.
pub(crate) fn sturm(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = divrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(neg(&r));
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let signs: Vec<Ordering> = seq.iter().map(|p| sign_at(p, x)).filter(|s| *s != Ordering::Equal).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub(crate) fn count_roots(seq: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes(seq, lo) - sign_changes(seq, hi)
}

/// Cauchy bound on the modulus of every root.
pub(crate) fn root_bound(p: &Poly) -> BigRational {
    let d = degree(p).expect("nonzero polynomial");
    let lead = p[d].abs();
    let m = p[..d].iter().map(|c| c.abs() / &lead).fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + BigRational::one()
}
