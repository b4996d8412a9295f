//! Continued fractions, convergents, best approximations inside an `N×N`
//! box, and Stern–Brocot enumeration of box fractions in an interval.

use crate::numeric::{floor_rat, Alg, BallReal, BigInt, BigRational, NumericError, QuadraticSurd};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("undecidable digit at term {term} after {bits} bits")]
    UndecidableDigit { term: usize, bits: u32 },
    #[error("value {0} outside [0, 1]")]
    OutOfUnitInterval(String),
    #[error("max_terms must be at least 1")]
    NoTerms,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CfKind {
    Finite,
    /// `terms` holds the preperiod followed by exactly one period.
    Periodic {
        preperiod: usize,
        period: usize,
    },
    /// A certified prefix of an infinite expansion.
    Streamed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub terms: Vec<BigInt>,
    pub kind: CfKind,
}

impl ContinuedFraction {
    /// First `n` partial quotients, unrolling the period if there is one.
    pub fn take(&self, n: usize) -> Vec<BigInt> {
        match self.kind {
            CfKind::Periodic { preperiod, period } => (0..n)
                .map(|i| {
                    let j = if i < preperiod { i } else { preperiod + (i - preperiod) % period };
                    self.terms[j].clone()
                })
                .collect(),
            _ => self.terms.iter().take(n).cloned().collect(),
        }
    }

    pub fn convergents(&self, n: usize) -> Vec<Convergent> {
        convergents_of(&self.take(n))
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |ts: &[BigInt]| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
        match self.kind {
            CfKind::Periodic { preperiod: 0, .. } => write!(f, "[({})]", show(&self.terms)),
            CfKind::Periodic { preperiod, .. } => {
                write!(f, "[{}; ({})]", show(&self.terms[..preperiod]), show(&self.terms[preperiod..]))
            }
            CfKind::Finite => write!(f, "[{}]", show(&self.terms)),
            CfKind::Streamed => write!(f, "[{}, ...]", show(&self.terms)),
        }
    }
}

/// `m/n` with the index of the last partial quotient used.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Convergent {
    #[serde(serialize_with = "crate::json::ser_bigint")]
    pub m: BigInt,
    #[serde(serialize_with = "crate::json::ser_bigint")]
    pub n: BigInt,
    pub index: i64,
}

impl Convergent {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>, index: i64) -> Self {
        Convergent { m: m.into(), n: n.into(), index }
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(self.m.clone(), self.n.clone())
    }
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.n)
    }
}

pub fn convergents_of(terms: &[BigInt]) -> Vec<Convergent> {
    let (mut m0, mut n0) = (BigInt::zero(), BigInt::one());
    let (mut m1, mut n1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(terms.len());
    for (k, a) in terms.iter().enumerate() {
        let m2 = a * &m1 + &m0;
        let n2 = a * &n1 + &n0;
        out.push(Convergent::new(m2.clone(), n2.clone(), k as i64));
        m0 = std::mem::replace(&mut m1, m2);
        n0 = std::mem::replace(&mut n1, n2);
    }
    out
}

pub fn cf_rational(x: &BigRational) -> ContinuedFraction {
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    let mut terms = Vec::new();
    while !q.is_zero() {
        let (a, r) = p.div_mod_floor(&q);
        terms.push(a);
        p = std::mem::replace(&mut q, r);
    }
    ContinuedFraction { terms, kind: CfKind::Finite }
}

/// Exact periodic expansion through the `(P + √D)/Q` recurrence.
pub fn cf_surd(x: &QuadraticSurd) -> ContinuedFraction {
    if x.is_rational() {
        return cf_rational(&x.rational_part());
    }
    // x = (p + q√d)/r = (P + √D)/Q with D = q²d, choosing signs so the radical is positive.
    let d = x.d().expect("irrational").clone();
    let (mut p, mut qq) = (x.p().clone(), x.r().clone());
    if x.q().is_negative() {
        p = -p;
        qq = -qq;
    }
    let mut big_d = x.q() * x.q() * &d;
    if !((&big_d - &p * &p) % &qq).is_zero() {
        let s = qq.abs();
        p *= &s;
        big_d *= &s * &s;
        qq *= &s;
    }
    let s = big_d.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), qq.clone())) {
            let period = terms.len() - start;
            return ContinuedFraction { terms, kind: CfKind::Periodic { preperiod: start, period } };
        }
        seen.insert((p.clone(), qq.clone()), terms.len());
        let a = if qq.is_positive() { (&p + &s).div_floor(&qq) } else { -((&p + &s).div_floor(&-&qq)) - 1 };
        p = &a * &qq - &p;
        qq = (&big_d - &p * &p) / &qq;
        terms.push(a);
    }
}

/// Certified prefix of the expansion of an enclosed real: a digit is emitted
/// only when both ends of the enclosure agree on it.
pub fn cf_ball(x: &BallReal, max_terms: usize, max_bits: u32) -> Result<ContinuedFraction, CfError> {
    if max_terms == 0 {
        return Err(CfError::NoTerms);
    }
    let mut bits = 64.min(max_bits);
    loop {
        let ball = crate::numeric::ball_refine(x, bits);
        let (lo, hi) = (ball.lo(), ball.hi());
        if lo == hi {
            let mut cf = cf_rational(&lo);
            cf.terms.truncate(max_terms);
            return Ok(cf);
        }
        let terms = common_prefix(&lo, &hi, max_terms);
        if terms.len() >= max_terms {
            return Ok(ContinuedFraction { terms, kind: CfKind::Streamed });
        }
        if bits >= max_bits {
            return Err(CfError::UndecidableDigit { term: terms.len(), bits });
        }
        bits = (bits * 2).min(max_bits);
    }
}

fn common_prefix(lo: &BigRational, hi: &BigRational, max_terms: usize) -> Vec<BigInt> {
    // Each digit's cylinder set is an interval, so agreement at both ends
    // certifies the digit for every value in between.
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let mut out = Vec::new();
    while out.len() < max_terms {
        let (fa, fb) = (floor_rat(&a), floor_rat(&b));
        if fa != fb {
            break;
        }
        let (ra, rb) = (&a - BigRational::from_integer(fa.clone()), &b - BigRational::from_integer(fb));
        if ra.is_zero() || rb.is_zero() {
            break;
        }
        out.push(fa);
        a = ra.recip();
        b = rb.recip();
    }
    out
}

/// Expansion of an exact real: rationals and quadratic surds exactly, other
/// algebraic numbers by exact complete quotients.
pub fn cf_expand(x: &Alg, max_terms: usize) -> Result<ContinuedFraction, CfError> {
    if max_terms == 0 {
        return Err(CfError::NoTerms);
    }
    if let Some(v) = x.as_rational() {
        return Ok(cf_rational(&v));
    }
    if let Some(s) = QuadraticSurd::from_alg(x) {
        return Ok(cf_surd(&s));
    }
    let mut y = x.clone();
    let mut terms = Vec::with_capacity(max_terms);
    while terms.len() < max_terms {
        let a = y.floor();
        y = (&y - &Alg::from_bigint(a.clone())).inv()?;
        terms.push(a);
    }
    Ok(ContinuedFraction { terms, kind: CfKind::Streamed })
}

/// Outcome of [`best_dioph_in_box`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxBest {
    pub best: Convergent,
    /// First fraction on the Stern–Brocot path, beyond the box, that is
    /// strictly closer to `x`; `None` when `best` equals `x`.
    pub next: Option<Convergent>,
    pub error: Alg,
}

#[derive(Clone, Copy, Debug)]
enum Dir {
    Right,
    Left,
}

/// Walks the Stern–Brocot path toward `x ≥ 0` in runs. Calls `visit` with each
/// run's direction, the bracket before the run, and the run length (or `None`
/// when `x` is hit exactly at the end of the run).
struct SbWalk {
    x: Alg,
    l: (BigInt, BigInt),
    r: (BigInt, BigInt),
}

impl SbWalk {
    fn new(x: Alg) -> Self {
        SbWalk { x, l: (BigInt::zero(), BigInt::one()), r: (BigInt::one(), BigInt::zero()) }
    }

    fn frac(p: &(BigInt, BigInt)) -> Alg {
        Alg::from_rational(BigRational::new(p.0.clone(), p.1.clone()))
    }

    /// Number of steps in the next run, its direction, and whether the run ends on `x`.
    fn next_run(&self) -> (Dir, BigInt, bool) {
        let (a, b) = &self.l;
        let (c, d) = &self.r;
        let m = (a + c, b + d);
        let mv = Self::frac(&m);
        match self.x.cmp(&mv) {
            Ordering::Equal => (Dir::Right, BigInt::one(), true),
            Ordering::Greater => {
                // L_k = (a + k c)/(b + k d) < x  ⇔  k < (x b − a)/(c − x d).
                let num = &self.x * &Alg::from_bigint(b.clone()) - Alg::from_bigint(a.clone());
                let den = Alg::from_bigint(c.clone()) - &self.x * &Alg::from_bigint(d.clone());
                let t = num / den;
                let k = t.ceil();
                let exact = t.as_rational().is_some_and(|v| v.is_integer());
                if exact {
                    (Dir::Right, k, true)
                } else {
                    (Dir::Right, k - 1, false)
                }
            }
            Ordering::Less => {
                // R_k = (c + k a)/(d + k b) > x  ⇔  k < (c − x d)/(x b − a).
                let num = Alg::from_bigint(c.clone()) - &self.x * &Alg::from_bigint(d.clone());
                let den = &self.x * &Alg::from_bigint(b.clone()) - Alg::from_bigint(a.clone());
                let t = num / den;
                let k = t.ceil();
                let exact = t.as_rational().is_some_and(|v| v.is_integer());
                if exact {
                    (Dir::Left, k, true)
                } else {
                    (Dir::Left, k - 1, false)
                }
            }
        }
    }

    fn node(&self, dir: Dir, k: &BigInt) -> (BigInt, BigInt) {
        match dir {
            Dir::Right => (&self.l.0 + k * &self.r.0, &self.l.1 + k * &self.r.1),
            Dir::Left => (&self.r.0 + k * &self.l.0, &self.r.1 + k * &self.l.1),
        }
    }

    fn apply(&mut self, dir: Dir, k: &BigInt) {
        let n = self.node(dir, k);
        match dir {
            Dir::Right => self.l = n,
            Dir::Left => self.r = n,
        }
    }
}

fn in_box(p: &(BigInt, BigInt), n: &BigInt) -> bool {
    p.0.abs() <= *n && p.1 <= *n && p.1.is_positive()
}

/// Largest `k ≥ 0` keeping the run's node `base + k·step` inside the box.
fn box_steps(base: &(BigInt, BigInt), step: &(BigInt, BigInt), n: &BigInt) -> BigInt {
    let mut k: Option<BigInt> = None;
    let mut tighten = |room: BigInt, inc: &BigInt| {
        if inc.is_positive() {
            let c = if room.is_negative() { BigInt::from(-1) } else { room.div_floor(inc) };
            k = Some(match k.take() {
                Some(x) if x < c => x,
                _ => c,
            });
        }
    };
    tighten(n - base.0.abs(), &step.0.abs());
    tighten(n - &base.1, &step.1);
    k.unwrap_or_else(|| n.clone())
}

/// Best approximation `m/n` of `x` with `|m| ≤ N` and `1 ≤ n ≤ N`, plus the
/// next strictly better fraction outside the box.
///
/// On an exact tie between the two box neighbours the one nearer zero is chosen.
pub fn best_dioph_in_box(x: &Alg, n_box: u64) -> BoxBest {
    assert!(n_box >= 1, "box size must be positive");
    if x.sign() == Ordering::Less {
        let r = best_dioph_in_box(&-x, n_box);
        let flip = |c: Convergent| Convergent::new(-c.m, c.n, c.index);
        return BoxBest { best: flip(r.best), next: r.next.map(flip), error: r.error };
    }
    if x.is_zero() {
        return BoxBest { best: Convergent::new(BigInt::zero(), BigInt::one(), 0), next: None, error: Alg::zero() };
    }
    let nb = BigInt::from(n_box);
    let mut walk = SbWalk::new(x.clone());
    let mut index = 0i64;
    // Descend while the path stays in the box.
    loop {
        let (dir, k, exact) = walk.next_run();
        let (base, step) = match dir {
            Dir::Right => (walk.l.clone(), walk.r.clone()),
            Dir::Left => (walk.r.clone(), walk.l.clone()),
        };
        let kb = box_steps(&base, &step, &nb);
        if kb >= k && exact {
            let hit = walk.node(dir, &k);
            return BoxBest { best: Convergent::new(hit.0, hit.1, index + 1), next: None, error: Alg::zero() };
        }
        if kb < k {
            if kb.is_positive() {
                walk.apply(dir, &kb);
            }
            break;
        }
        walk.apply(dir, &k);
        index += 1;
    }
    let (lo, hi) = (walk.l.clone(), walk.r.clone());
    let dist = |p: &(BigInt, BigInt)| (x - &SbWalk::frac(p)).abs();
    let best = if hi.1.is_positive() && in_box(&hi, &nb) && dist(&hi) < dist(&lo) { hi } else { lo };
    let err = dist(&best);
    // Continue past the box; distances shrink along a run, so the first
    // closer node of a run is found by bisection.
    let next = loop {
        let (dir, k, _) = walk.next_run();
        if dist(&walk.node(dir, &k)) < err {
            let (mut lo_k, mut hi_k) = (BigInt::one(), k);
            while lo_k < hi_k {
                let mid: BigInt = (&lo_k + &hi_k) >> 1usize;
                if dist(&walk.node(dir, &mid)) < err {
                    hi_k = mid;
                } else {
                    lo_k = mid + 1;
                }
            }
            break walk.node(dir, &lo_k);
        }
        walk.apply(dir, &k);
    };
    BoxBest {
        best: Convergent::new(best.0, best.1, index),
        next: Some(Convergent::new(next.0, next.1, index + 1)),
        error: err,
    }
}

/// Truncations `[0; a1, …, al]` of the expansion of `α ∈ [0, 1]`, followed for
/// finite expansions by `[0; a1, …, a(k−1), ak − 1]`.
pub fn classical_best_sequence(alpha: &Alg, max_terms: usize) -> Result<Vec<Convergent>, CfError> {
    if alpha.sign() == Ordering::Less || alpha > &Alg::one() {
        return Err(CfError::OutOfUnitInterval(alpha.to_string()));
    }
    if alpha.is_zero() {
        return Ok(vec![Convergent::new(0, 1, 0)]);
    }
    if alpha == &Alg::one() {
        return Ok(vec![Convergent::new(1, 1, 1)]);
    }
    let cf = cf_expand(alpha, max_terms + 1)?;
    let terms = cf.take(max_terms + 1);
    let mut out: Vec<Convergent> = convergents_of(&terms).into_iter().skip(1).collect();
    if cf.kind == CfKind::Finite {
        let mut t = cf.terms.clone();
        let last = t.last_mut().expect("nonempty");
        *last -= 1;
        if t.len() > 1 {
            let c = convergents_of(&t).pop().expect("nonempty");
            out.push(Convergent::new(c.m, c.n, t.len() as i64 - 1));
        }
    }
    Ok(out)
}

/// All reduced `m/n` with `lo ≤ m/n ≤ hi`, `|m| ≤ N`, `1 ≤ n ≤ N`, ascending.
pub fn fractions_in_interval(lo: &BigRational, hi: &BigRational, n_box: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let ctx = SbCtx { lo, hi, n: n_box as i128 };
    let zero = (0i128, 1i128);
    if ctx.ge_lo(zero) {
        ctx.rec((-1, 0), zero, &mut out);
        if ctx.le_hi(zero) {
            out.push((0, 1));
        }
        ctx.rec(zero, (1, 0), &mut out);
    } else {
        ctx.rec(zero, (1, 0), &mut out);
    }
    out
}

struct SbCtx<'a> {
    lo: &'a BigRational,
    hi: &'a BigRational,
    n: i128,
}

type Fr = (i128, i128);

impl SbCtx<'_> {
    fn cmp(&self, f: Fr, x: &BigRational) -> Ordering {
        (BigInt::from(f.0) * x.denom()).cmp(&(x.numer() * BigInt::from(f.1)))
    }
    fn ge_lo(&self, f: Fr) -> bool {
        self.cmp(f, self.lo) != Ordering::Less
    }
    fn le_hi(&self, f: Fr) -> bool {
        self.cmp(f, self.hi) != Ordering::Greater
    }
    fn fits(&self, f: Fr) -> bool {
        f.0.abs() <= self.n && f.1 >= 1 && f.1 <= self.n
    }

    /// Largest k with `base + k·step` inside the box.
    fn box_k(&self, base: Fr, step: Fr) -> i128 {
        let mut k = i128::MAX;
        if step.0 != 0 {
            k = k.min((self.n - base.0.abs()).div_euclid(step.0.abs()));
        }
        if step.1 != 0 {
            k = k.min((self.n - base.1).div_euclid(step.1));
        }
        k
    }

    /// Largest k ≥ 0 with `(a + k c)/(b + k d)` on the given side of `x`
    /// (`below = true`: strictly less than `x`).
    fn run_k(&self, base: Fr, step: Fr, x: &BigRational, below: bool, cap: i128) -> i128 {
        let (mut lo, mut hi) = (0i128, cap.max(0));
        let ok = |k: i128| {
            let f = (base.0 + k * step.0, base.1 + k * step.1);
            let c = self.cmp(f, x);
            if below {
                c == Ordering::Less
            } else {
                c == Ordering::Greater
            }
        };
        if ok(hi) {
            return hi;
        }
        // ok is monotone (true then false) along a run.
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn rec(&self, l: Fr, r: Fr, out: &mut Vec<(i64, i64)>) {
        let m = (l.0 + r.0, l.1 + r.1);
        if !self.fits(m) {
            return;
        }
        if !self.ge_lo(m) {
            // Jump right along l + k r while still below lo.
            let cap = self.box_k(l, r);
            let k = self.run_k(l, r, self.lo, true, cap);
            let nl = (l.0 + k * r.0, l.1 + k * r.1);
            if k >= cap {
                // Next mediant leaves the box.
                let nm = (nl.0 + r.0, nl.1 + r.1);
                if !self.fits(nm) {
                    return;
                }
            }
            self.rec(nl, r, out);
        } else if !self.le_hi(m) {
            let cap = self.box_k(r, l);
            let k = self.run_k(r, l, self.hi, false, cap);
            let nr = (r.0 + k * l.0, r.1 + k * l.1);
            if k >= cap {
                let nm = (l.0 + nr.0, l.1 + nr.1);
                if !self.fits(nm) {
                    return;
                }
            }
            self.rec(l, nr, out);
        } else {
            self.rec(l, m, out);
            out.push((m.0 as i64, m.1 as i64));
            self.rec(m, r, out);
        }
    }
}

/// `m/n` as an `f64`-friendly pair when it fits machine integers.
pub fn convergent_i64(c: &Convergent) -> Option<(i64, i64)> {
    Some((c.m.to_i64()?, c.n.to_i64()?))
}
