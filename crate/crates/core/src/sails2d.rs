//! Sails of planar cones, k-sails by peeling, and geometric continued
//! fractions of hyperbolic planar groups.
//!
//! The 1-sail is walked exactly: from a vertex `v` the next vertex is found by
//! solving `det(v, p) = 1` and sliding along the resulting direction as far as
//! the cone allows. Higher sails are peeled from an explicit point set.

use crate::mcrs::{md_form, same_field, MCRSGroup, McrsError, Spectrum};
use crate::numeric::{Alg, BigInt};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

pub type Point = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SailError {
    #[error("degenerate cone: rays are dependent")]
    Degenerate,
    #[error("rays live in different number fields")]
    MixedFields,
    #[error("box exhausted: no level-{0} vertex within the box")]
    BoxExhausted(u32),
    #[error("k must be at least 1")]
    ZeroLevel,
    #[error("zero point has no sail level")]
    ZeroPoint,
    #[error("coordinate overflow")]
    Overflow,
    #[error("{0}")]
    Group(#[from] McrsError),
    #[error("no cone-preserving shift found among small powers of the matrix")]
    NoShift,
    #[error("level {level} exceeds the bound |Φ(v)|/α = {bound}")]
    LevelBound { level: u64, bound: String },
}

/// The closed cone spanned by two rays, ordered so that `det(r1, r2) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone2 {
    r1: [Alg; 2],
    r2: [Alg; 2],
}

fn det_aa(a: &[Alg; 2], b: &[Alg; 2]) -> Alg {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn det_ap(a: &[Alg; 2], p: Point) -> Alg {
    &a[0] * Alg::from_int(p.1) - &a[1] * Alg::from_int(p.0)
}

fn det_pp(a: Point, b: Point) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

fn norm_inf(p: Point) -> i64 {
    p.0.abs().max(p.1.abs())
}

fn mirror(p: Point) -> Point {
    (p.1, p.0)
}

fn big_to_i64(x: BigInt) -> Result<i64, SailError> {
    x.to_i64().ok_or(SailError::Overflow)
}

impl Cone2 {
    pub fn new(r1: [Alg; 2], r2: [Alg; 2]) -> Result<Cone2, SailError> {
        if !same_field(&[&r1[0], &r1[1], &r2[0], &r2[1]]) {
            return Err(SailError::MixedFields);
        }
        match det_aa(&r1, &r2).sign() {
            Ordering::Equal => Err(SailError::Degenerate),
            Ordering::Greater => Ok(Cone2 { r1, r2 }),
            Ordering::Less => Ok(Cone2 { r1: r2, r2: r1 }),
        }
    }

    pub fn from_points(a: Point, b: Point) -> Result<Cone2, SailError> {
        let f = |p: Point| [Alg::from_int(p.0), Alg::from_int(p.1)];
        Cone2::new(f(a), f(b))
    }

    pub fn ray1(&self) -> &[Alg; 2] {
        &self.r1
    }

    pub fn ray2(&self) -> &[Alg; 2] {
        &self.r2
    }

    /// Closed-cone membership of a nonzero point.
    pub fn contains(&self, p: Point) -> bool {
        p != (0, 0) && det_ap(&self.r1, p).sign() != Ordering::Less && det_ap(&self.r2, p).sign() != Ordering::Greater
    }

    fn on_ray1(&self, p: Point) -> bool {
        det_ap(&self.r1, p).is_zero()
    }

    fn on_ray2(&self, p: Point) -> bool {
        det_ap(&self.r2, p).is_zero()
    }

    fn mirrored(&self) -> Cone2 {
        let m = |r: &[Alg; 2]| [r[1].clone(), r[0].clone()];
        Cone2 { r1: m(&self.r2), r2: m(&self.r1) }
    }

    /// Lattice points of the cone with `det(r1 − r2, p) ≤ bound`, which form a triangle.
    fn triangle_points(&self, bound: &Alg) -> Vec<Point> {
        let g = [&self.r1[0] - &self.r2[0], &self.r1[1] - &self.r2[1]];
        let d = det_aa(&self.r1, &self.r2);
        let s = bound / &d;
        let xs = [Alg::zero(), &self.r1[0] * &s, &self.r2[0] * &s];
        let lo = xs.iter().min().unwrap().floor();
        let hi = xs.iter().max().unwrap().ceil();
        // Half-planes a x + b y ≥ c.
        let planes = [
            (-&self.r1[1], self.r1[0].clone(), Alg::zero()),
            (self.r2[1].clone(), -&self.r2[0], Alg::zero()),
            (g[1].clone(), -&g[0], -bound),
        ];
        let mut out = Vec::new();
        let (lo, hi) = (lo.to_i64().unwrap_or(i64::MIN / 4), hi.to_i64().unwrap_or(i64::MAX / 4));
        for x in lo..=hi {
            if let Some((ylo, yhi)) = column_range(&planes, x) {
                for y in ylo..=yhi {
                    if (x, y) != (0, 0) {
                        out.push((x, y));
                    }
                }
            }
        }
        out
    }

    /// All nonzero lattice points of the cone with `|x|, |y| ≤ bound`.
    pub fn points_in_box(&self, bound: i64) -> Vec<Point> {
        let planes = [(-&self.r1[1], self.r1[0].clone(), Alg::zero()), (self.r2[1].clone(), -&self.r2[0], Alg::zero())];
        let mut out = Vec::new();
        for x in -bound..=bound {
            if let Some((ylo, yhi)) = column_range(&planes, x) {
                for y in ylo.max(-bound)..=yhi.min(bound) {
                    if (x, y) != (0, 0) {
                        out.push((x, y));
                    }
                }
            }
        }
        out
    }

    /// A lattice point of the 1-sail: a minimiser of `det(r1 − r2, p)`.
    fn sail_point(&self) -> Point {
        let l1 = self.r1[0].abs() + self.r1[1].abs();
        let l2 = self.r2[0].abs() + self.r2[1].abs();
        let w = [&self.r1[0] / &l1 + &self.r2[0] / &l2, &self.r1[1] / &l1 + &self.r2[1] / &l2];
        let half = Alg::from_rational(crate::numeric::rat(1, 2));
        let mut t = 1i64;
        let q = loop {
            let tt = Alg::from_int(t);
            let round = |c: &Alg| (c * &tt + &half).floor().to_i64().expect("bounded search");
            let q = (round(&w[0]), round(&w[1]));
            if self.contains(q) {
                break q;
            }
            t *= 2;
        };
        let g = [&self.r1[0] - &self.r2[0], &self.r1[1] - &self.r2[1]];
        let f = |p: Point| det_ap(&g, p);
        let mut best = q;
        let mut best_f = f(q);
        for p in self.triangle_points(&best_f.clone()) {
            let fp = f(p);
            if fp < best_f {
                best = p;
                best_f = fp;
            }
        }
        best
    }
}

/// Integer `y` range in column `x` of an intersection of half-planes `a x + b y ≥ c`.
fn column_range(planes: &[(Alg, Alg, Alg)], x: i64) -> Option<(i64, i64)> {
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    let xa = Alg::from_int(x);
    for (a, b, c) in planes {
        let rhs = c - a * &xa;
        match b.sign() {
            Ordering::Greater => {
                let v = (&rhs / b).ceil();
                lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
            }
            Ordering::Less => {
                let v = (&rhs / b).floor();
                hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
            }
            Ordering::Equal => {
                if rhs.sign() == Ordering::Greater {
                    return None;
                }
            }
        }
    }
    let lo = lo.map_or(Some(i64::MIN / 4), |v| v.to_i64())?;
    let hi = hi.map_or(Some(i64::MAX / 4), |v| v.to_i64())?;
    (lo <= hi).then_some((lo, hi))
}

impl fmt::Display for Cone2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone(({}, {}), ({}, {}))", self.r1[0], self.r1[1], self.r2[0], self.r2[1])
    }
}

/// How a finite polyline ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SailEnd {
    /// The vertex is the primitive point of a rational ray; the sail continues along the ray.
    Ray,
    /// The sail continues beyond the box; with peeling the vertex may be a box artifact.
    Truncated,
}

/// Vertices of a (piece of a) k-sail, ordered from the first ray to the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SailPolyline {
    pub vertices: Vec<Point>,
    pub level: u32,
    pub start: SailEnd,
    pub end: SailEnd,
    /// `S` with `S·vertices[i] = vertices[i + period]`, when the list is one period.
    pub periodic_shift: Option<[[i64; 2]; 2]>,
}

impl SailPolyline {
    /// Every lattice point on the polyline, vertices included, in order.
    pub fn lattice_points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        if let Some(&first) = self.vertices.first() {
            out.push(first);
        }
        for w in self.vertices.windows(2) {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let g = dx.gcd(&dy);
            for j in 1..=g {
                out.push((w[0].0 + j * dx / g, w[0].1 + j * dy / g));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "vertices": self.vertices.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
            "start": self.start,
            "end": self.end,
            "periodic_shift": self.periodic_shift,
        })
    }

    /// Two-column text, one vertex per line.
    pub fn to_columns(&self) -> String {
        self.vertices.iter().map(|p| format!("{} {}\n", p.0, p.1)).collect()
    }
}

impl fmt::Display for SailPolyline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|p| format!("({}, {})", p.0, p.1)).collect();
        write!(f, "{}-sail [{:?} .. {:?}]: {}", self.level, self.start, self.end, vs.join(" "))
    }
}

/// Drops vertices lying on the segment between their neighbours.
fn strip_collinear(vs: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(vs.len());
    for p in vs {
        while out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            if det_pp((b.0 - a.0, b.1 - a.1), (p.0 - b.0, p.1 - b.1)) == 0 {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// `(x, y)` with `a·y − b·x = 1` for coprime `(a, b)`.
fn unimodular_partner(v: Point) -> Point {
    let e = v.0.extended_gcd(&v.1);
    // e.x·a + e.y·b = gcd = ±1, so (x, y) = (−e.y, e.x)·gcd.
    let s = e.gcd.signum();
    (-e.y * s, e.x * s)
}

/// Walks the 1-sail from `start` towards the second ray.
fn walk(cone: &Cone2, start: Point, bound: i64) -> Result<(Vec<Point>, SailEnd), SailError> {
    let mut out = Vec::new();
    let mut v = start;
    loop {
        if cone.on_ray2(v) {
            return Ok((out, SailEnd::Ray));
        }
        let g = v.0.gcd(&v.1);
        let prim = (v.0 / g, v.1 / g);
        let p0 = unimodular_partner(prim);
        // Points p0 + t·prim lie on det(prim, p) = 1; pick the first inside the cone.
        let dv2 = -det_ap(&cone.r2, prim);
        let dp2 = -det_ap(&cone.r2, p0);
        let t = big_to_i64((-&dp2 / &dv2).ceil())?;
        let p = (p0.0 + t * prim.0, p0.1 + t * prim.1);
        let e = (p.0 - v.0, p.1 - v.1);
        let de2 = -det_ap(&cone.r2, e);
        let dv = -det_ap(&cone.r2, v);
        let mut k = (&dv / -&de2).floor();
        let de1 = det_ap(&cone.r1, e);
        if de1.sign() == Ordering::Less {
            k = k.min((det_ap(&cone.r1, v) / -de1).floor());
        }
        let k = big_to_i64(k)?;
        let w = (
            v.0.checked_add(k.checked_mul(e.0).ok_or(SailError::Overflow)?).ok_or(SailError::Overflow)?,
            v.1.checked_add(k.checked_mul(e.1).ok_or(SailError::Overflow)?).ok_or(SailError::Overflow)?,
        );
        if norm_inf(w) > bound {
            return Ok((out, SailEnd::Truncated));
        }
        out.push(w);
        v = w;
    }
}

/// The 1-sail of `cone`, restricted to vertices with coordinates at most `bound`.
pub fn sail(cone: &Cone2, bound: i64) -> Result<SailPolyline, SailError> {
    if bound < 1 {
        return Err(SailError::BoxExhausted(1));
    }
    let s = cone.sail_point();
    if norm_inf(s) > bound {
        return Err(SailError::BoxExhausted(1));
    }
    let (fwd, end) = walk(cone, s, bound)?;
    let m = cone.mirrored();
    let (back, start) = walk(&m, mirror(s), bound)?;
    let mut vs: Vec<Point> = back.into_iter().rev().map(mirror).collect();
    vs.push(s);
    vs.extend(fwd);
    let start = if cone.on_ray1(vs[0]) { SailEnd::Ray } else { start };
    let vertices = strip_collinear(vs);
    Ok(SailPolyline { vertices, level: 1, start, end, periodic_shift: None })
}

fn cross(o: Point, a: Point, b: Point) -> i128 {
    det_pp((a.0 - o.0, a.1 - o.1), (b.0 - o.0, b.1 - o.1))
}

/// Convex hull, counter-clockwise, without collinear points.
fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = pts.to_vec();
    p.sort_unstable();
    p.dedup();
    // Only the lowest and highest point of each column can be a vertex.
    let mut keep = vec![false; p.len()];
    for (i, q) in p.iter().enumerate() {
        keep[i] = i == 0 || i + 1 == p.len() || p[i - 1].0 != q.0 || p[i + 1].0 != q.0;
    }
    let mut flags = keep.into_iter();
    p.retain(|_| flags.next().unwrap_or(false));
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The part of the hull boundary of `pts` seen from the origin, from the
/// first ray side to the second.
fn visible_chain(pts: &[Point]) -> Vec<Point> {
    let h = convex_hull(pts);
    match h.len() {
        0 => return vec![],
        1 => return h,
        2 => {
            // Collinear set: visible iff the line misses the origin.
            return if cross(h[0], h[1], (0, 0)) != 0 {
                let (a, b) = if det_pp(h[0], h[1]) > 0 { (h[0], h[1]) } else { (h[1], h[0]) };
                vec![a, b]
            } else {
                let near = *h.iter().min_by_key(|p| norm_inf(**p)).unwrap();
                vec![near]
            };
        }
        _ => {}
    }
    let m = h.len();
    let visible = |i: usize| cross(h[i], h[(i + 1) % m], (0, 0)) < 0;
    let Some(first) = (0..m).find(|&i| visible(i) && !visible((i + m - 1) % m)) else {
        return vec![];
    };
    let mut chain = vec![h[first]];
    let mut i = first;
    while visible(i) {
        i = (i + 1) % m;
        chain.push(h[i]);
    }
    // Counter-clockwise hull order runs along the near side from the second ray to the first.
    chain.reverse();
    chain
}

fn chain_points(vs: &[Point]) -> Vec<Point> {
    SailPolyline { vertices: vs.to_vec(), level: 0, start: SailEnd::Ray, end: SailEnd::Ray, periodic_shift: None }
        .lattice_points()
}

/// The k-sail by peeling the nonzero lattice points of the cone in the box.
///
/// Points on the rays beyond the terminal vertices are not part of any
/// compact chain, so they stay for the next level; this keeps the k-sail
/// equal to `k` times the 1-sail for rational cones too. A chain whose
/// vertices all sit on the box boundary is reported as an exhausted box.
pub fn k_sail(cone: &Cone2, k: u32, bound: i64) -> Result<SailPolyline, SailError> {
    Ok(k_sails(cone, k, bound)?.pop().expect("k levels"))
}

/// The j-sails for `j = 1..=k` from a single peeling pass.
pub fn k_sails(cone: &Cone2, k: u32, bound: i64) -> Result<Vec<SailPolyline>, SailError> {
    if k == 0 {
        return Err(SailError::ZeroLevel);
    }
    if bound < 1 {
        return Err(SailError::BoxExhausted(k));
    }
    let mut pts: HashSet<Point> = cone.points_in_box(bound).into_iter().collect();
    let mut out = Vec::with_capacity(k as usize);
    for level in 1..=k {
        let list: Vec<Point> = pts.iter().copied().collect();
        let chain = visible_chain(&list);
        if chain.is_empty() {
            return Err(SailError::BoxExhausted(k));
        }
        let inner = |p: &Point| norm_inf(*p) < bound || cone.on_ray1(*p) || cone.on_ray2(*p);
        if !chain.iter().any(inner) {
            return Err(SailError::BoxExhausted(k));
        }
        for p in chain_points(&chain) {
            pts.remove(&p);
        }
        let flag = |on: bool| if on { SailEnd::Ray } else { SailEnd::Truncated };
        let start = flag(cone.on_ray1(chain[0]));
        let end = flag(cone.on_ray2(chain[chain.len() - 1]));
        out.push(SailPolyline { vertices: chain, level, start, end, periodic_shift: None });
    }
    Ok(out)
}

fn real_direction(a: &MCRSGroup, i: usize) -> Result<[Alg; 2], SailError> {
    let d = a.lines()[i].direction();
    Ok([d[0].re.clone(), d[1].re.clone()])
}

fn hyperbolic_2d(a: &MCRSGroup) -> Result<(), SailError> {
    if a.dim() != 2 {
        return Err(McrsError::Dimension { expected: 2, got: a.dim() }.into());
    }
    if a.spectrum() != Spectrum::Hyperbolic {
        return Err(McrsError::UnsupportedSpectrum(format!("{} group has no sails", a.spectrum())).into());
    }
    Ok(())
}

/// The four cones cut out by the eigenlines, counter-clockwise starting
/// from the cone between `l₁` and `l₂` (in some orientation).
pub fn cones(a: &MCRSGroup) -> Result<[Cone2; 4], SailError> {
    hyperbolic_2d(a)?;
    let d1 = real_direction(a, 0)?;
    let d2 = real_direction(a, 1)?;
    let neg = |r: &[Alg; 2]| [-&r[0], -&r[1]];
    let c = Cone2::new(d1.clone(), d2.clone())?;
    let (r1, r2) = (c.r1.clone(), c.r2.clone());
    Ok([
        Cone2 { r1: r1.clone(), r2: r2.clone() },
        Cone2 { r1: r2.clone(), r2: neg(&r1) },
        Cone2 { r1: neg(&r1), r2: neg(&r2) },
        Cone2 { r1: neg(&r2), r2: r1 },
    ])
}

/// The k-sails of the four cones of a hyperbolic planar group.
pub fn geometric_cf(a: &MCRSGroup, k: u32, bound: i64) -> Result<Vec<SailPolyline>, SailError> {
    let cs = cones(a)?;
    // Cones are independent; rayon would only pay off for large boxes.
    cs.iter().map(|c| if k == 1 { sail(c, bound) } else { k_sail(c, k, bound) }).collect()
}

fn apply(m: &[[i64; 2]; 2], p: Point) -> Option<Point> {
    Some((
        m[0][0].checked_mul(p.0)?.checked_add(m[0][1].checked_mul(p.1)?)?,
        m[1][0].checked_mul(p.0)?.checked_add(m[1][1].checked_mul(p.1)?)?,
    ))
}

fn mat_mul(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn maps_ray_to_itself(m: &[[i64; 2]; 2], r: &[Alg; 2]) -> bool {
    let img = [
        Alg::from_int(m[0][0]) * &r[0] + Alg::from_int(m[0][1]) * &r[1],
        Alg::from_int(m[1][0]) * &r[0] + Alg::from_int(m[1][1]) * &r[1],
    ];
    det_aa(r, &img).is_zero() && (&img[0] * &r[0] + &img[1] * &r[1]).sign() == Ordering::Greater
}

/// One period of the 1-sail of `cone` under the unimodular matrix `m`, with
/// the power `±m^j` that shifts it forward.
pub fn sail_period(cone: &Cone2, m: &[Vec<i64>]) -> Result<SailPolyline, SailError> {
    let m: [[i64; 2]; 2] = [[m[0][0], m[0][1]], [m[1][0], m[1][1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() != 1 {
        return Err(SailError::NoShift);
    }
    let inv = inverse(&m);
    let neg = |a: [[i64; 2]; 2]| [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]];
    let sq = mat_mul(&m, &m);
    let isq = mat_mul(&inv, &inv);
    let shift = [m, neg(m), inv, neg(inv), sq, isq]
        .into_iter()
        .find(|s| maps_ray_to_itself(s, &cone.r1) && maps_ray_to_itself(s, &cone.r2))
        .ok_or(SailError::NoShift)?;
    let mut bound = 64i64;
    loop {
        let s = sail(cone, bound)?;
        let vs = &s.vertices;
        for (i, &v) in vs.iter().enumerate() {
            for sh in [shift, inverse(&shift)] {
                let Some(w) = apply(&sh, v) else { continue };
                if let Some(j) = vs[i + 1..].iter().position(|&u| u == w) {
                    return Ok(SailPolyline {
                        vertices: vs[i..i + 1 + j].to_vec(),
                        level: 1,
                        start: SailEnd::Truncated,
                        end: SailEnd::Truncated,
                        periodic_shift: Some(sh),
                    });
                }
            }
        }
        if s.start == SailEnd::Ray || s.end == SailEnd::Ray {
            return Err(SailError::NoShift);
        }
        bound = bound.checked_mul(4).ok_or(SailError::Overflow)?;
    }
}

/// Inverse of a unimodular matrix.
fn inverse(a: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[d * a[1][1], -d * a[0][1]], [-d * a[1][0], d * a[0][0]]]
}

/// `α`: the smallest `|Φ|` over the 1-sails of the four cones, or zero for a rational group.
pub(crate) fn markoff_minimum_impl(a: &MCRSGroup) -> Result<Alg, SailError> {
    hyperbolic_2d(a)?;
    if a.lines().iter().any(|l| l.gaussian().is_some()) {
        // Φ vanishes at the primitive point of a rational eigenline.
        return Ok(Alg::zero());
    }
    let m = a.source().ok_or_else(|| {
        McrsError::NotAlgebraic("Markoff minimum needs an integer matrix with these eigenlines".into())
    })?;
    let phi = md_form(a)?;
    let mut best: Option<Alg> = None;
    for c in cones(a)? {
        for v in sail_period(&c, m)?.vertices {
            let x = phi.eval_int(&[v.0, v.1]).re.abs();
            if best.as_ref().is_none_or(|b| x < *b) {
                best = Some(x);
            }
        }
    }
    Ok(best.expect("nonempty periods"))
}

/// The `k` with `v` on the k-sail of the cone holding `v`.
///
/// By homothety `v/k` lies on the 1-sail, so `k` is read off where the ray
/// through `v` meets the 1-sail. When `α > 0` the level is checked against
/// `k ≤ |Φ(v)|/α`.
pub fn sail_membership_level(a: &MCRSGroup, v: Point) -> Result<u64, SailError> {
    if v == (0, 0) {
        return Err(SailError::ZeroPoint);
    }
    let cs = cones(a)?;
    let cone = cs.iter().find(|c| c.contains(v)).expect("the four cones cover the plane");
    let level = level_in_cone(cone, v)?;
    if a.source().is_some() || a.is_rational() {
        let alpha = markoff_minimum_impl(a)?;
        if !alpha.is_zero() {
            let phi = md_form(a)?.eval_int(&[v.0, v.1]).re.abs();
            let bound = &phi / &alpha;
            if Alg::from_int(level as i64) > bound {
                return Err(SailError::LevelBound { level, bound: bound.to_string() });
            }
        }
    }
    Ok(level)
}

/// Level of `v` in `cone` by intersecting its ray with the 1-sail.
pub fn level_in_cone(cone: &Cone2, v: Point) -> Result<u64, SailError> {
    let mut bound = norm_inf(v).max(4);
    loop {
        let s = sail(cone, bound)?;
        let vs = &s.vertices;
        let on_ray = |w: Point| det_pp(w, v) == 0 && w.0 as i128 * v.0 as i128 + w.1 as i128 * v.1 as i128 > 0;
        let ratio = |w: Point| {
            let (n, d) = if w.0 != 0 { (v.0, w.0) } else { (v.1, w.1) };
            (n / d) as u64
        };
        // Beyond a terminal vertex on a rational ray.
        if s.start == SailEnd::Ray && on_ray(vs[0]) {
            return Ok(ratio(vs[0]));
        }
        if s.end == SailEnd::Ray && on_ray(vs[vs.len() - 1]) {
            return Ok(ratio(vs[vs.len() - 1]));
        }
        for w in vs.windows(2) {
            let (a, b) = (w[0], w[1]);
            if det_pp(a, v) >= 0 && det_pp(v, b) >= 0 {
                let d = (b.0 - a.0, b.1 - a.1);
                let num = det_pp(d, v);
                let den = det_pp(d, a);
                debug_assert!(num % den == 0, "every cone point lies on some k-sail");
                return Ok((num / den) as u64);
            }
        }
        if vs.len() == 1 && on_ray(vs[0]) {
            return Ok(ratio(vs[0]));
        }
        bound = bound.checked_mul(4).ok_or(SailError::Overflow)?;
    }
}
