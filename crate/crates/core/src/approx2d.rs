//! Best approximations of planar MCRS-groups by rational groups of bounded
//! size.
//!
//! The search is certified: a seed candidate gives an upper bound `ε` on the
//! optimal discrepancy, `ε` confines the slopes of every competitive
//! candidate, and the survivors are compared exactly. The bounds used for
//! pruning are proven ones (see `slope_radius` and `gaussian_radii`); the
//! uncorrected bound formulas are kept as separate functions and reported in
//! certificates.

use crate::cf::{best_dioph_in_box, fractions_in_interval, BoxBest};
use crate::mcrs::{discrepancy_of_forms, md_form, DiscrepancyValue, MCRSGroup, MDForm, McrsError, Size, Spectrum};
use crate::numeric::{gaussian_primitive, Alg, BigInt, BigRational, Cx, GaussianInt, GaussianVector};
use crate::sails2d::{sail_membership_level, SailError};
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("epsilon too large: {0}")]
    EpsilonTooLarge(String),
    #[error("zero slope in a denominator")]
    ZeroSlope,
    #[error("eigenlines coincide")]
    EqualSlopes,
    #[error("vertical eigenline: use the classical chart A[alpha]")]
    VerticalLine,
    #[error("target is not hyperbolic")]
    NotHyperbolic,
    #[error("target is not a complex pair (beta = 0)")]
    NotComplexPair,
    #[error("target must be two-dimensional")]
    NotPlanar,
    #[error("size bound must be at least 1, got {0}")]
    BadSize(i64),
    #[error("size bound {n} exceeds the oracle cap {cap}")]
    OverCap { n: i64, cap: i64 },
    #[error("coordinates exceed the machine range")]
    Overflow,
    #[error(transparent)]
    Group(#[from] McrsError),
    #[error(transparent)]
    Sail(#[from] SailError),
}

fn alg(x: &BigRational) -> Alg {
    Alg::from_rational(x.clone())
}

fn positive(x: &Alg) -> bool {
    x.sign() == Ordering::Greater
}

// ---------------------------------------------------------------------------
// Uncorrected bound formulas

/// Slope bounds from a discrepancy bound `ε₁` for two real lines:
/// `(1+|α₁|)D²ε₁/(|α₂|(1−ε₁D))` and `(1+|α₂|)D²ε₁/(|α₁|(1−ε₁D))`, `D = |α₁−α₂|`.
pub fn delta_bound_from_eps(a1: &Alg, a2: &Alg, eps1: &BigRational) -> Result<(Alg, Alg), ApproxError> {
    if a1 == a2 {
        return Err(ApproxError::EqualSlopes);
    }
    if a1.is_zero() || a2.is_zero() {
        return Err(ApproxError::ZeroSlope);
    }
    let d = (a1 - a2).abs();
    let e = alg(eps1);
    let gap = Alg::one() - &e * &d;
    if !positive(&gap) {
        return Err(ApproxError::EpsilonTooLarge(format!("{eps1} >= 1/|a1-a2|")));
    }
    let k = d.square() * e / gap;
    let one = Alg::one();
    Ok(((&one + &a1.abs()) * &k / a2.abs(), (&one + &a2.abs()) * &k / a1.abs()))
}

/// Discrepancy bound for lines moved by less than `ε₂`:
/// `max(2, 2(|α₁|+|α₂|), α₁²+α₂²+Dε₂) ε₂ / (D(D+2ε₂))`.
pub fn eps_bound_from_delta(a1: &Alg, a2: &Alg, eps2: &BigRational) -> Result<Alg, ApproxError> {
    if a1 == a2 {
        return Err(ApproxError::EqualSlopes);
    }
    if !eps2.is_positive() {
        return Err(ApproxError::EpsilonTooLarge(format!("{eps2} must be positive")));
    }
    let d = (a1 - a2).abs();
    let e = alg(eps2);
    let m = perturbation_numerator(a1, a2, &d, &e);
    let two_e = &e + &e;
    Ok(m * &e / (&d * &(&d + &two_e)))
}

fn perturbation_numerator(a1: &Alg, a2: &Alg, d: &Alg, e: &Alg) -> Alg {
    let two = Alg::from_int(2);
    let s = &two * &(a1.abs() + a2.abs());
    let q = a1.square() + a2.square() + d * e;
    two.max(s).max(q)
}

/// The same bound with the denominator `D(D−2ε₂)`, which holds for
/// `2ε₂ < D`. The uncorrected denominator `D(D+2ε₂)` fails on e.g.
/// `α = (1, 0)`, `δ = (−0.099, 0.099)`.
pub fn eps_bound_from_delta_corrected(a1: &Alg, a2: &Alg, eps2: &BigRational) -> Result<Alg, ApproxError> {
    if a1 == a2 {
        return Err(ApproxError::EqualSlopes);
    }
    let d = (a1 - a2).abs();
    let e = alg(eps2);
    let two_e = &e + &e;
    let gap = &d - &two_e;
    if !eps2.is_positive() || !positive(&gap) {
        return Err(ApproxError::EpsilonTooLarge(format!("{eps2} outside (0, |a1-a2|/2)")));
    }
    Ok(perturbation_numerator(a1, a2, &d, &e) * &e / (d * gap))
}

/// Which eigenline a slope estimate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Factor `f` with `|Φ(n, m)|/n² < f·|α_side − m/n|` whenever
/// `|α_side − m/n| < ε₃`; it is `(D+ε₃)/D` for either side.
pub fn phi_over_q2_bound(a1: &Alg, a2: &Alg, eps3: &Alg, _side: Side) -> Result<Alg, ApproxError> {
    if a1 == a2 {
        return Err(ApproxError::EqualSlopes);
    }
    let d = (a1 - a2).abs();
    Ok((&d + eps3) / d)
}

/// Slope bounds for a conjugate pair `α ± Iβ` from a discrepancy bound `ε₁`,
/// uncorrected; needs `ε₁ < 1/(2(1+|β|))`.
pub fn complex_delta_bound_from_eps(alpha: &Alg, beta: &Alg, eps1: &BigRational) -> Result<(Alg, Alg), ApproxError> {
    if beta.is_zero() {
        return Err(ApproxError::NotComplexPair);
    }
    let one = Alg::one();
    let b = beta.abs();
    let e = alg(eps1);
    let two = Alg::from_int(2);
    if !positive(&(one.clone() - &two * &e * (&one + &b))) {
        return Err(ApproxError::EpsilonTooLarge(format!("{eps1} >= 1/(2(1+|beta|))")));
    }
    let amb = (alpha - beta).abs();
    let den = &amb - &(&two * &e * &b * (&one + &b));
    if !positive(&den) {
        return Err(ApproxError::EpsilonTooLarge(format!("{eps1}: nonpositive denominator")));
    }
    let k = &two * &b.square() * e / den;
    Ok((&amb * &k, (&one + &b + &amb) * k))
}

/// `max(2, 2(|α|+|β|), |α²−β²|+2|αβ|+2|β|ε₂) ε₂ / (|β|(|β|+ε₂))`, uncorrected.
pub fn complex_eps_bound_from_delta(alpha: &Alg, beta: &Alg, eps2: &BigRational) -> Result<Alg, ApproxError> {
    if beta.is_zero() {
        return Err(ApproxError::NotComplexPair);
    }
    let two = Alg::from_int(2);
    let b = beta.abs();
    let e = alg(eps2);
    let q = (alpha.square() - beta.square()).abs() + &two * &(alpha * beta).abs() + &two * &b * &e;
    let m = two.clone().max(&two * &(alpha.abs() + &b)).max(q);
    Ok(m * &e / (&b * &(&b + &e)))
}

/// Factor `(2β+ε₃)/(2β)` with `|Φ(1, a)| < f·|α+Iβ−a|` when `|α+Iβ−a| < ε₃`.
pub fn complex_phi_bound(beta: &Alg, eps3: &Alg) -> Result<Alg, ApproxError> {
    if beta.is_zero() {
        return Err(ApproxError::NotComplexPair);
    }
    let tb = Alg::from_int(2) * beta.abs();
    Ok((&tb + eps3) / tb)
}

/// Rational upper bound of `x > 0` with about 20 significant digits.
fn short_upper(x: &Alg) -> BigRational {
    let lead = (-x.to_f64().log10().floor()).max(0.0) as u32;
    round_up_decimal(x, 20 + lead)
}

/// Smallest multiple of `10^-digits` that is `≥ x`.
pub fn round_up_decimal(x: &Alg, digits: u32) -> BigRational {
    let scale = BigInt::from(10).pow(digits);
    BigRational::new((x * &Alg::from_bigint(scale.clone())).ceil(), scale)
}

// ---------------------------------------------------------------------------
// Sound confinement radii

/// Radius of the slope interval around `αᵢ` containing a line of every
/// candidate within `ε` of the group of `y = α₁x`, `y = α₂x`:
/// `(1+|αᵢ|)Dε/(1−εD)`. `None` when `εD ≥ 1`.
pub fn slope_radius(ai: &Alg, d: &Alg, eps: &BigRational) -> Option<Alg> {
    let e = alg(eps);
    let gap = Alg::one() - &e * d;
    positive(&gap).then(|| (Alg::one() + ai.abs()) * d * e / gap)
}

/// Radii `(R_a, R_b)` of the box around `(α, β)` that contains `(a, b)` for
/// every conjugate pair `y = (a ± Ib)x` within `ε` of `y = (α ± Iβ)x`.
/// `None` when `2εβ ≥ 1`.
pub fn gaussian_radii(alpha: &Alg, beta: &Alg, eps: &BigRational) -> Option<(Alg, Alg)> {
    let e = alg(eps);
    let b = beta.abs();
    let two = Alg::from_int(2);
    let gap = Alg::one() - &two * &e * &b;
    if !positive(&gap) {
        return None;
    }
    let ra = &e * &b * &(Alg::one() + &two * &alpha.abs()) / &gap;
    let rb = two * e * b.square() / gap;
    Some((ra, rb))
}

// ---------------------------------------------------------------------------
// Candidates

/// A rational MCRS-group of the plane: two real lines, or a conjugate pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Candidate {
    /// Primitive vectors `(x, y)` with `x > 0`, or `(0, 1)`; sorted.
    Real([(i64, i64); 2]),
    /// The line `(z₁, z₂)` with `Im(z₂/z₁) > 0`, primitive, `z₁` in the
    /// sector `re > 0, im ≥ 0`, together with its conjugate.
    Complex(GaussianInt, GaussianInt),
}

fn canonical_real(v: (i64, i64)) -> Option<(i64, i64)> {
    if v == (0, 0) {
        return None;
    }
    let g = num_integer::gcd(v.0, v.1);
    let (x, y) = (v.0 / g, v.1 / g);
    Some(if x < 0 || (x == 0 && y < 0) { (-x, -y) } else { (x, y) })
}

fn cross_im(z1: GaussianInt, z2: GaussianInt) -> i128 {
    // Im(conj(z1) z2)
    z1.re as i128 * z2.im as i128 - z1.im as i128 * z2.re as i128
}

impl Candidate {
    /// The pair of real lines through `v` and `w`; `None` if they coincide.
    pub fn real(v: (i64, i64), w: (i64, i64)) -> Option<Candidate> {
        let (a, b) = (canonical_real(v)?, canonical_real(w)?);
        match a.cmp(&b) {
            Ordering::Less => Some(Candidate::Real([a, b])),
            Ordering::Greater => Some(Candidate::Real([b, a])),
            Ordering::Equal => None,
        }
    }

    /// The line through `(z₁, z₂)` and its conjugate; `None` for a real line.
    pub fn complex(z1: GaussianInt, z2: GaussianInt) -> Option<Candidate> {
        let c = cross_im(z1, z2);
        if c == 0 {
            return None;
        }
        let (z1, z2) = if c < 0 { (z1.conj(), z2.conj()) } else { (z1, z2) };
        let p = gaussian_primitive(&GaussianVector::new(vec![z1, z2])).ok()?;
        Some(Candidate::Complex(p.coords[0], p.coords[1]))
    }

    pub fn vectors(&self) -> [GaussianVector; 2] {
        match *self {
            Candidate::Real([a, b]) => [GaussianVector::real(&[a.0, a.1]), GaussianVector::real(&[b.0, b.1])],
            Candidate::Complex(z1, z2) => {
                let v = GaussianVector::new(vec![z1, z2]);
                let w = gaussian_primitive(&v.conj()).expect("nonzero");
                [v, w]
            }
        }
    }

    pub fn group(&self) -> Result<MCRSGroup, McrsError> {
        MCRSGroup::from_vectors(&self.vectors())
    }

    pub fn size(&self) -> Size {
        match *self {
            Candidate::Real([a, b]) => {
                let m = a.0.abs().max(a.1.abs()).max(b.0.abs()).max(b.1.abs()) as i128;
                Size(m * m)
            }
            Candidate::Complex(z1, z2) => Size(z1.norm().max(z2.norm())),
        }
    }

    fn fits(&self, n: i64) -> bool {
        self.size().norm_sq() <= n as i128 * n as i128
    }

    /// Line vectors as `((p₁, q₁), (p₂, q₂))` over the Gaussian integers.
    fn lines(&self) -> [(GaussianInt, GaussianInt); 2] {
        match *self {
            Candidate::Real([a, b]) => {
                [(GaussianInt::real(a.0), GaussianInt::real(a.1)), (GaussianInt::real(b.0), GaussianInt::real(b.1))]
            }
            Candidate::Complex(z1, z2) => [(z1, z2), (z1.conj(), z2.conj())],
        }
    }

    /// Numerators of the form coefficients and their common denominator:
    /// `(−q₁q₂, p₁q₂+p₂q₁, −p₁p₂) / (p₁q₂ − p₂q₁)`.
    fn form_parts(&self) -> ([(i128, i128); 3], (i128, i128)) {
        let [(p1, q1), (p2, q2)] = self.lines();
        let mul = |a: GaussianInt, b: GaussianInt| {
            let (ar, ai, br, bi) = (a.re as i128, a.im as i128, b.re as i128, b.im as i128);
            (ar * br - ai * bi, ar * bi + ai * br)
        };
        let add = |a: (i128, i128), b: (i128, i128)| (a.0 + b.0, a.1 + b.1);
        let neg = |a: (i128, i128)| (-a.0, -a.1);
        let det = add(mul(p1, q2), neg(mul(p2, q1)));
        ([neg(mul(q1, q2)), add(mul(p1, q2), mul(p2, q1)), neg(mul(p1, p2))], det)
    }

    /// The Markoff–Davenport form, exactly.
    pub fn form(&self) -> MDForm {
        let (nums, det) = self.form_parts();
        let nd = det.0 * det.0 + det.1 * det.1;
        let q = |x: i128| BigRational::new(BigInt::from(x), BigInt::from(nd));
        let coeffs = nums
            .iter()
            .map(|&(a, b)| {
                // (a + Ib)(d0 − I d1) / |d|²
                let re = a * det.0 + b * det.1;
                let im = b * det.0 - a * det.1;
                Cx::new(Alg::from_rational(q(re)), Alg::from_rational(q(im)))
            })
            .collect();
        MDForm::new(2, coeffs)
    }

    fn form_f64(&self) -> [(f64, f64); 3] {
        let (nums, det) = self.form_parts();
        let (d0, d1) = (det.0 as f64, det.1 as f64);
        let nd = d0 * d0 + d1 * d1;
        nums.map(|(a, b)| {
            let (a, b) = (a as f64, b as f64);
            ((a * d0 + b * d1) / nd, (b * d0 - a * d1) / nd)
        })
    }

    pub fn to_json(&self) -> Value {
        let [v, w] = self.vectors();
        json!({
            "kind": if matches!(self, Candidate::Real(_)) { "real" } else { "complex" },
            "vectors": [v.to_string(), w.to_string()],
            "size": self.size().to_string(),
        })
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [v, w] = self.vectors();
        write!(f, "{v} {w}")
    }
}

// ---------------------------------------------------------------------------
// Target data and float screening

struct Target {
    form: MDForm,
    coeffs: [(f64, f64); 3],
    maxc: f64,
}

impl Target {
    fn new(a: &MCRSGroup) -> Result<Target, ApproxError> {
        let form = md_form(a)?;
        let c = form.coeffs();
        let coeffs = [c[0].to_f64(), c[1].to_f64(), c[2].to_f64()];
        let maxc = coeffs.iter().map(|&(r, i)| r.hypot(i)).fold(0.0, f64::max);
        Ok(Target { form, coeffs, maxc })
    }

    fn rho(&self, c: &Candidate) -> f64 {
        rho_f64(&self.coeffs, &c.form_f64())
    }

    /// Absolute error allowance for float discrepancies.
    fn margin(&self, rho: f64) -> f64 {
        1e-13 * (1.0 + self.maxc) + 1e-9 * rho
    }

    fn exact(&self, c: &Candidate) -> DiscrepancyValue {
        discrepancy_of_forms(&self.form, &c.form())
    }

    /// Every line `w` of a candidate within `ε` has
    /// `|Φ(w)| ≤ ε(|w₁|² + |w₁||w₂| + |w₂|²)`, since the candidate form
    /// vanishes on `w`. Lines failing this are discarded.
    fn line_admissible(&self, z1: (f64, f64), z2: (f64, f64), eps: f64) -> bool {
        let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let mons = [mul(z1, z1), mul(z1, z2), mul(z2, z2)];
        let (mut re, mut im, mut scale) = (0.0, 0.0, 0.0);
        for (c, m) in self.coeffs.iter().zip(&mons) {
            let t = mul(*c, *m);
            re += t.0;
            im += t.1;
            scale += c.0.hypot(c.1) * m.0.hypot(m.1);
        }
        let (a, b) = (z1.0.hypot(z1.1), z2.0.hypot(z2.1));
        re.hypot(im) <= eps * (a * a + a * b + b * b) * (1.0 + 1e-12) + 1e-13 * scale
    }
}

fn rho_f64(t: &[(f64, f64); 3], c: &[(f64, f64); 3]) -> f64 {
    let branch =
        |s: f64| t.iter().zip(c).map(|(a, b)| (a.0 - s * b.0).powi(2) + (a.1 - s * b.1).powi(2)).fold(0.0, f64::max);
    branch(1.0).min(branch(-1.0)).sqrt()
}

/// Rational `ε ≥ √x` for `x ≥ 0`.
fn upper_sqrt(x: &Alg, bits: u32) -> BigRational {
    let (_, hi) = x.enclosure(2 * bits + 8);
    let scale = BigInt::one() << (2 * bits as usize);
    let scaled = (hi * BigRational::from_integer(scale)).ceil().to_integer();
    let r = scaled.max(BigInt::zero()).sqrt() + 1;
    BigRational::new(r, BigInt::one() << bits as usize)
}

fn precision_bits(n: i64) -> u32 {
    64 + 2 * (64 - (n as u64).leading_zeros()) + 16
}

fn f64_up(x: &Alg) -> f64 {
    let v = x.to_f64();
    v + v.abs() * 1e-12 + f64::MIN_POSITIVE
}

// ---------------------------------------------------------------------------
// Queries and results

#[derive(Clone, Debug)]
pub struct ApproxQuery {
    pub target: MCRSGroup,
    pub n: i64,
}

impl ApproxQuery {
    pub fn new(target: MCRSGroup, n: i64) -> Result<ApproxQuery, ApproxError> {
        if n < 1 {
            return Err(ApproxError::BadSize(n));
        }
        if target.dim() != 2 {
            return Err(ApproxError::NotPlanar);
        }
        Ok(ApproxQuery { target, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Hyperbolic,
    Complex,
    Exhaustive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Hyperbolic => "hyperbolic",
            Method::Complex => "complex",
            Method::Exhaustive => "exhaustive",
        })
    }
}

/// Region to which the candidates were confined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Confinement {
    /// Rational outer bounds of the two slope intervals.
    SlopeIntervals([(BigRational, BigRational); 2]),
    /// `|a − α| ≤ ra`, `|b − β| ≤ rb` for the conjugate pair `y = (a ± Ib)x`.
    GaussianBox { ra: Alg, rb: Alg },
    /// Every candidate of the box passed through the line filter.
    WholeBox,
}

/// Values of the uncorrected bounds along the five-step procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSteps {
    /// The diagonal candidate built from the best approximations of each slope.
    pub diagonal: Option<Candidate>,
    pub eps2: BigRational,
    pub rho_bound: Option<Alg>,
    pub delta_bounds: Option<(Alg, Alg)>,
    pub phi_factors: Option<(Alg, Alg)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub method: Method,
    pub seed: Option<Candidate>,
    /// Rational upper bound on the optimum, taken from the seed.
    pub eps: Option<BigRational>,
    pub confinement: Confinement,
    /// Candidates of the other kind (real against complex or vice versa)
    /// cannot beat `eps`.
    pub other_kind_excluded: bool,
    pub lines_kept: usize,
    pub candidates: usize,
    pub exact_evaluations: usize,
    pub chain: Option<ChainSteps>,
}

#[derive(Debug, Clone)]
pub struct ApproxResult {
    pub target: MCRSGroup,
    pub n: i64,
    pub minimizers: Vec<Candidate>,
    pub rho: DiscrepancyValue,
    pub certificate: Certificate,
}

fn rat_json(x: &BigRational) -> Value {
    json!({ "exact": x.to_string(), "decimal": crate::json::decimal(crate::numeric::rat_to_f64(x)) })
}

fn alg_json(x: &Alg) -> Value {
    json!({ "exact": x.to_string(), "decimal": crate::json::decimal(x.to_f64()) })
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let confinement = match &self.confinement {
            Confinement::SlopeIntervals(iv) => json!({
                "kind": "slope-intervals",
                "intervals": iv.iter().map(|(lo, hi)| json!([lo.to_string(), hi.to_string()])).collect::<Vec<_>>(),
            }),
            Confinement::GaussianBox { ra, rb } => {
                json!({ "kind": "gaussian-box", "ra": alg_json(ra), "rb": alg_json(rb) })
            }
            Confinement::WholeBox => json!({ "kind": "whole-box" }),
        };
        let chain = self.chain.as_ref().map(|p| {
            json!({
                "diagonal": p.diagonal.map(|c| c.to_json()),
                "eps2": rat_json(&p.eps2),
                "rho_bound": p.rho_bound.as_ref().map(alg_json),
                "delta_bounds": p.delta_bounds.as_ref().map(|(a, b)| json!([alg_json(a), alg_json(b)])),
                "phi_factors": p.phi_factors.as_ref().map(|(a, b)| json!([alg_json(a), alg_json(b)])),
            })
        });
        json!({
            "method": self.method.to_string(),
            "seed": self.seed.map(|c| c.to_json()),
            "eps": self.eps.as_ref().map(rat_json),
            "confinement": confinement,
            "other_kind_excluded": self.other_kind_excluded,
            "lines_kept": self.lines_kept,
            "candidates": self.candidates,
            "exact_evaluations": self.exact_evaluations,
            "bound_chain": chain,
        })
    }
}

impl ApproxResult {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": crate::json::SCHEMA,
            "kind": "approx2d",
            "target": self.target.to_json(),
            "N": self.n,
            "rho": self.rho.to_json(),
            "minimizers": self.minimizers.iter().map(Candidate::to_json).collect::<Vec<_>>(),
            "certificate": self.certificate.to_json(),
        })
    }
}

// ---------------------------------------------------------------------------
// Enumeration helpers

/// Canonical primitive real lines with `max(|x|, |y|) ≤ n`.
fn all_real_lines(n: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    for x in 1..=n {
        out.extend((-n..=n).filter(|&y| num_integer::gcd(x, y) == 1).map(|y| (x, y)));
    }
    out
}

fn isqrt(x: i128) -> i64 {
    (x.max(0) as u128).sqrt() as i64
}

/// All conjugate-pair candidates of size `≤ n`, with `z₁` in the sector
/// `re > 0, im ≥ 0`; non-primitive representatives included.
fn for_each_complex_in_box<F: FnMut(GaussianInt, GaussianInt)>(n: i64, re: i64, mut f: F) {
    let n2 = n as i128 * n as i128;
    let imax = isqrt(n2 - re as i128 * re as i128);
    for im in 0..=imax {
        let z1 = GaussianInt::new(re, im);
        for xr in -n..=n {
            let h = isqrt(n2 - xr as i128 * xr as i128);
            for xi in -h..=h {
                let z2 = GaussianInt::new(xr, xi);
                if cross_im(z1, z2) > 0 {
                    f(z1, z2);
                }
            }
        }
    }
}

/// Exact minimum over float survivors, with all ties.
fn settle(target: &Target, mut pool: Vec<(f64, Candidate)>) -> Option<(DiscrepancyValue, Vec<Candidate>, usize)> {
    let best = pool.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return None;
    }
    let cut = best + target.margin(best);
    pool.retain(|p| p.0 <= cut);
    let uniq: BTreeSet<Candidate> = pool.into_iter().map(|p| p.1).collect();
    let evaluated: Vec<(DiscrepancyValue, Candidate)> =
        uniq.into_par_iter().map(|c| (target.exact(&c), c)).collect::<Vec<_>>();
    let count = evaluated.len();
    let min = evaluated.iter().map(|e| &e.0.squared).min()?.clone();
    let mut rho = None;
    let mut ties = Vec::new();
    for (d, c) in evaluated {
        if d.squared == min {
            rho.get_or_insert(d);
            ties.push(c);
        }
    }
    ties.sort();
    Some((rho?, ties, count))
}

/// Float pass: returns the minimum and the candidates within the margin.
fn screen(target: &Target, cands: &[Candidate]) -> Vec<(f64, Candidate)> {
    let vals: Vec<f64> = cands.par_iter().map(|c| target.rho(c)).collect();
    let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let cut = best + target.margin(best);
    vals.into_iter().zip(cands).filter(|(v, _)| *v <= cut).map(|(v, c)| (v, *c)).collect()
}

/// Best candidate of a small list, evaluated exactly.
fn best_seed(target: &Target, seeds: &[Candidate]) -> Option<(Candidate, DiscrepancyValue)> {
    let scored = screen(target, seeds);
    settle(target, scored).map(|(rho, ties, _)| (ties[0], rho))
}

fn conv_pair(b: &BoxBest) -> Option<(i64, i64)> {
    Some((b.best.n.to_i64()?, b.best.m.to_i64()?))
}

/// `ε₂ = 1/(n·n')` for the best approximation and the next closer one.
fn eps2_of(b: &BoxBest) -> BigRational {
    match &b.next {
        Some(nx) => BigRational::new(BigInt::one(), &b.best.n * &nx.n),
        None => BigRational::zero(),
    }
}

/// Dispatches on the spectrum of the target.
pub fn best_approx(q: &ApproxQuery) -> Result<ApproxResult, ApproxError> {
    match q.target.spectrum() {
        Spectrum::Hyperbolic => best_approx_hyperbolic(q),
        _ => best_approx_complex(q),
    }
}

// ---------------------------------------------------------------------------
// Hyperbolic targets

pub fn best_approx_hyperbolic(q: &ApproxQuery) -> Result<ApproxResult, ApproxError> {
    let a = &q.target;
    if a.dim() != 2 {
        return Err(ApproxError::NotPlanar);
    }
    if a.spectrum() != Spectrum::Hyperbolic {
        return Err(ApproxError::NotHyperbolic);
    }
    let a1 = a.lines()[0].real_slope().ok_or(ApproxError::VerticalLine)?;
    let a2 = a.lines()[1].real_slope().ok_or(ApproxError::VerticalLine)?;
    let n = q.n;
    let target = Target::new(a)?;

    // Step 1: best approximations of each slope, at a few box sizes so that
    // a pair of distinct lines is always available.
    let b1 = best_dioph_in_box(&a1, n as u64);
    let b2 = best_dioph_in_box(&a2, n as u64);
    let diagonal = conv_pair(&b1).zip(conv_pair(&b2)).and_then(|(v, w)| Candidate::real(v, w));
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    let mut k = n;
    while k >= 1 {
        s1.extend(conv_pair(&best_dioph_in_box(&a1, k as u64)));
        s2.extend(conv_pair(&best_dioph_in_box(&a2, k as u64)));
        k /= 2;
    }
    s1.extend([(1, 0), (1, 1), (1, -1), (0, 1)]);
    let mut seeds: Vec<Candidate> =
        s1.iter().flat_map(|&v| s2.iter().filter_map(move |&w| Candidate::real(v, w))).collect();
    seeds.sort();
    seeds.dedup();
    let (seed, seed_rho) = best_seed(&target, &seeds).expect("seed list is nonempty");

    // Steps 2-4 with the uncorrected bounds, for the certificate only.
    let chain = chain_steps_hyperbolic(&a1, &a2, &b1, &b2, diagonal);

    let bits = precision_bits(n);
    let eps = upper_sqrt(&seed_rho.squared, bits);
    let eps_f = crate::numeric::rat_to_f64(&eps) * (1.0 + 1e-12);
    let d = (&a1 - &a2).abs();

    let one_bit = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    let (lines1, lines2, confinement) = match (slope_radius(&a1, &d, &eps), slope_radius(&a2, &d, &eps)) {
        (Some(r1), Some(r2)) => {
            let outer = |c: &Alg, r: &Alg| {
                let lo = BigRational::new((c - r).dyadic_floor(bits), BigInt::one() << bits as usize);
                let hi = BigRational::new((c + r).dyadic_floor(bits) + 1, BigInt::one() << bits as usize);
                (lo - &one_bit, hi)
            };
            let iv1 = outer(&a1, &r1);
            let iv2 = outer(&a2, &r2);
            let lines = |iv: &(BigRational, BigRational)| -> Vec<(i64, i64)> {
                fractions_in_interval(&iv.0, &iv.1, n).into_iter().map(|(m, k)| (k, m)).collect()
            };
            (lines(&iv1), lines(&iv2), Confinement::SlopeIntervals([iv1, iv2]))
        }
        _ => {
            let all = all_real_lines(n);
            (all.clone(), all, Confinement::WholeBox)
        }
    };
    let keep = |ls: Vec<(i64, i64)>| -> Vec<(i64, i64)> {
        ls.into_par_iter().filter(|&(x, y)| target.line_admissible((x as f64, 0.0), (y as f64, 0.0), eps_f)).collect()
    };
    let (l1, l2) = (keep(lines1), keep(lines2));
    let lines_kept = l1.len() + l2.len();
    let mut cands: Vec<Candidate> =
        l1.iter().flat_map(|&v| l2.iter().filter_map(move |&w| Candidate::real(v, w))).collect();
    cands.sort();
    cands.dedup();

    // A conjugate pair has purely imaginary coefficients, so its distance to
    // a real form is at least the largest target coefficient.
    let max_t = target.form.coeffs().iter().map(|c| c.re.abs()).max().expect("three coefficients");
    let other_kind_excluded = alg(&eps) < max_t;
    if !other_kind_excluded {
        cands.extend(complex_box_candidates(&target, n, eps_f));
    }
    finish(
        q,
        &target,
        Method::Hyperbolic,
        seed,
        seed_rho,
        eps,
        confinement,
        other_kind_excluded,
        lines_kept,
        cands,
        chain,
    )
}

fn chain_steps_hyperbolic(
    a1: &Alg,
    a2: &Alg,
    b1: &BoxBest,
    b2: &BoxBest,
    diagonal: Option<Candidate>,
) -> Option<ChainSteps> {
    let eps2 = eps2_of(b1).max(eps2_of(b2));
    if eps2.is_zero() {
        return None;
    }
    let rho_bound = eps_bound_from_delta(a1, a2, &eps2).ok();
    let delta_bounds = rho_bound.as_ref().and_then(|r| delta_bound_from_eps(a1, a2, &short_upper(r)).ok());
    let phi_factors = delta_bounds.as_ref().and_then(|(d1, d2)| {
        Some((phi_over_q2_bound(a1, a2, d1, Side::First).ok()?, phi_over_q2_bound(a1, a2, d2, Side::Second).ok()?))
    });
    Some(ChainSteps { diagonal, eps2, rho_bound, delta_bounds, phi_factors })
}

fn complex_box_candidates(target: &Target, n: i64, eps_f: f64) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|re| {
            let mut v = Vec::new();
            for_each_complex_in_box(n, re, |z1, z2| {
                if target.line_admissible((z1.re as f64, z1.im as f64), (z2.re as f64, z2.im as f64), eps_f) {
                    v.extend(Candidate::complex(z1, z2));
                }
            });
            v
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn real_box_candidates(target: &Target, n: i64, eps_f: f64) -> Vec<Candidate> {
    let lines: Vec<(i64, i64)> = all_real_lines(n)
        .into_iter()
        .filter(|&(x, y)| target.line_admissible((x as f64, 0.0), (y as f64, 0.0), eps_f))
        .collect();
    let mut out = Vec::new();
    for (i, &v) in lines.iter().enumerate() {
        out.extend(lines[i + 1..].iter().filter_map(|&w| Candidate::real(v, w)));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn finish(
    q: &ApproxQuery,
    target: &Target,
    method: Method,
    seed: Candidate,
    seed_rho: DiscrepancyValue,
    eps: BigRational,
    confinement: Confinement,
    other_kind_excluded: bool,
    lines_kept: usize,
    mut cands: Vec<Candidate>,
    chain: Option<ChainSteps>,
) -> Result<ApproxResult, ApproxError> {
    cands.retain(|c| c.fits(q.n));
    let candidates = cands.len();
    let mut pool = screen(target, &cands);
    pool.push((target.rho(&seed), seed));
    let (mut rho, mut minimizers, exact_evaluations) = settle(target, pool).expect("seed is always present");
    if seed_rho.squared < rho.squared {
        // Unreachable when confinement is sound; keep the seed rather than
        // report a worse value.
        rho = seed_rho;
        minimizers = vec![seed];
    }
    Ok(ApproxResult {
        target: q.target.clone(),
        n: q.n,
        minimizers,
        rho,
        certificate: Certificate {
            method,
            seed: Some(seed),
            eps: Some(eps),
            confinement,
            other_kind_excluded,
            lines_kept,
            candidates,
            exact_evaluations,
            chain,
        },
    })
}

// ---------------------------------------------------------------------------
// Conjugate-pair targets

/// `(α, β)` with `β > 0` for a target with lines `y = (α ± Iβ)x`.
fn complex_slope(a: &MCRSGroup) -> Result<(Alg, Alg), ApproxError> {
    let l = a.lines().iter().find(|l| !l.is_real()).ok_or(ApproxError::NotComplexPair)?;
    let d = l.direction();
    if d[0].is_zero() {
        return Err(ApproxError::NotComplexPair);
    }
    let tau = d[1].div(&d[0]);
    if tau.im.is_zero() {
        return Err(ApproxError::NotComplexPair);
    }
    Ok((tau.re.clone(), tau.im.abs()))
}

/// Convergents `(q, p)` of the nearest-Gaussian-integer continued fraction
/// of `τ`, computed in floating point; used only as seeds.
fn hurwitz_convergents(tau: (f64, f64), n: i64) -> Vec<(GaussianInt, GaussianInt)> {
    let n2 = n as i128 * n as i128;
    let (mut p1, mut p2) = ((1i128, 0i128), (0i128, 0i128));
    let (mut q1, mut q2) = ((0i128, 0i128), (1i128, 0i128));
    let mut x = tau;
    let mut out = Vec::new();
    for _ in 0..64 {
        let a = (x.0.round(), x.1.round());
        let ai = (a.0 as i128, a.1 as i128);
        let step = |u: (i128, i128), v: (i128, i128)| (ai.0 * u.0 - ai.1 * u.1 + v.0, ai.0 * u.1 + ai.1 * u.0 + v.1);
        let p = step(p1, p2);
        let qq = step(q1, q2);
        if p.0 * p.0 + p.1 * p.1 > n2 || qq.0 * qq.0 + qq.1 * qq.1 > n2 {
            break;
        }
        out.push((GaussianInt::new(qq.0 as i64, qq.1 as i64), GaussianInt::new(p.0 as i64, p.1 as i64)));
        (p2, p1, q2, q1) = (p1, p, q1, qq);
        let f = (x.0 - a.0, x.1 - a.1);
        let m = f.0 * f.0 + f.1 * f.1;
        if m < 1e-30 {
            break;
        }
        x = (f.0 / m, -f.1 / m);
    }
    out
}

pub fn best_approx_complex(q: &ApproxQuery) -> Result<ApproxResult, ApproxError> {
    let a = &q.target;
    if a.dim() != 2 {
        return Err(ApproxError::NotPlanar);
    }
    let (alpha, beta) = complex_slope(a)?;
    let n = q.n;
    let target = Target::new(a)?;
    let (af, bf) = (alpha.to_f64(), beta.to_f64());

    // Step 1: the diagonal candidate from the best approximations of α and
    // β, plus Gaussian continued-fraction convergents and simple
    // real-denominator seeds, since the diagonal one may exceed the box.
    let ba = best_dioph_in_box(&alpha, n as u64);
    let bb = best_dioph_in_box(&beta, n as u64);
    let diagonal = diagonal_complex(&ba, &bb);
    let mut seeds: Vec<Candidate> = diagonal.into_iter().collect();
    seeds.extend(hurwitz_convergents((af, bf), n).into_iter().filter_map(|(z1, z2)| Candidate::complex(z1, z2)));
    let mut k = n;
    while k >= 1 {
        let z2 = GaussianInt::new((k as f64 * af).round() as i64, ((k as f64 * bf).round() as i64).max(1));
        seeds.extend(Candidate::complex(GaussianInt::real(k), z2));
        k /= 2;
    }
    seeds.extend(Candidate::complex(GaussianInt::real(1), GaussianInt::new(0, 1)));
    seeds.retain(|c| c.fits(n));
    seeds.sort();
    seeds.dedup();
    let (seed, seed_rho) = match best_seed(&target, &seeds) {
        Some(s) => s,
        None => return Err(ApproxError::NotComplexPair),
    };

    let chain = chain_steps_complex(&alpha, &beta, &ba, &bb, diagonal);

    let bits = precision_bits(n);
    let eps = upper_sqrt(&seed_rho.squared, bits);
    let eps_f = crate::numeric::rat_to_f64(&eps) * (1.0 + 1e-12);

    let (mut cands, confinement, lines_kept) = match gaussian_radii(&alpha, &beta, &eps) {
        Some((ra, rb)) => {
            let r = f64_up(&ra).hypot(f64_up(&rb)) * (1.0 + 1e-9);
            let c = disk_candidates(&target, n, (af, bf), r, eps_f);
            let kept = c.len();
            (c, Confinement::GaussianBox { ra, rb }, kept)
        }
        None => {
            let c = complex_box_candidates(&target, n, eps_f);
            let kept = c.len();
            (c, Confinement::WholeBox, kept)
        }
    };
    // Real candidates have real coefficients against purely imaginary ones.
    let max_t = target.form.coeffs().iter().map(|c| c.im.abs()).max().expect("three coefficients");
    let other_kind_excluded = alg(&eps) < max_t;
    if !other_kind_excluded {
        cands.extend(real_box_candidates(&target, n, eps_f));
    }
    finish(q, &target, Method::Complex, seed, seed_rho, eps, confinement, other_kind_excluded, lines_kept, cands, chain)
}

fn diagonal_complex(ba: &BoxBest, bb: &BoxBest) -> Option<Candidate> {
    let (ma, na) = (ba.best.m.to_i64()?, ba.best.n.to_i64()?);
    let (mb, nb) = (bb.best.m.to_i64()?, bb.best.n.to_i64()?);
    let l = num_integer::lcm(na, nb);
    Candidate::complex(GaussianInt::real(l), GaussianInt::new(ma * (l / na), mb * (l / nb)))
}

fn chain_steps_complex(
    alpha: &Alg,
    beta: &Alg,
    ba: &BoxBest,
    bb: &BoxBest,
    diagonal: Option<Candidate>,
) -> Option<ChainSteps> {
    let eps2 = eps2_of(ba).max(eps2_of(bb));
    if eps2.is_zero() {
        return None;
    }
    let rho_bound = complex_eps_bound_from_delta(alpha, beta, &eps2).ok();
    let delta_bounds = rho_bound.as_ref().and_then(|r| complex_delta_bound_from_eps(alpha, beta, &short_upper(r)).ok());
    let phi_factors = delta_bounds.as_ref().and_then(|(d1, d2)| {
        let e3 = (d1.square() + d2.square()).max(d1.clone().max(d2.clone()));
        let f = complex_phi_bound(beta, &e3).ok()?;
        Some((f.clone(), f))
    });
    Some(ChainSteps { diagonal, eps2, rho_bound, delta_bounds, phi_factors })
}

/// Conjugate pairs `(z₁, z₂)` with `|z₂ − z₁τ| ≤ |z₁|r`, `z₁` in the sector.
fn disk_candidates(target: &Target, n: i64, tau: (f64, f64), r: f64, eps_f: f64) -> Vec<Candidate> {
    let n2 = n as i128 * n as i128;
    let mut out: Vec<Candidate> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|re| {
            let mut v = Vec::new();
            let imax = isqrt(n2 - re as i128 * re as i128);
            for im in 0..=imax {
                let z1 = GaussianInt::new(re, im);
                let (x, y) = (re as f64, im as f64);
                let c = (x * tau.0 - y * tau.1, x * tau.1 + y * tau.0);
                let rad = x.hypot(y) * r + 1e-9;
                let lo = (c.0 - rad).ceil() as i64;
                let hi = (c.0 + rad).floor() as i64;
                for xr in lo.max(-n)..=hi.min(n) {
                    let dx = xr as f64 - c.0;
                    let h = (rad * rad - dx * dx).max(0.0).sqrt();
                    let (ylo, yhi) = ((c.1 - h).ceil() as i64, (c.1 + h).floor() as i64);
                    for xi in ylo..=yhi {
                        let z2 = GaussianInt::new(xr, xi);
                        if z2.norm() > n2 || cross_im(z1, z2) <= 0 {
                            continue;
                        }
                        if target.line_admissible((x, y), (xr as f64, xi as f64), eps_f) {
                            v.extend(Candidate::complex(z1, z2));
                        }
                    }
                }
            }
            v
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

pub const DEFAULT_ORACLE_CAP: i64 = 60;

/// Forms of a rational pair computed from the inverse of the matrix of line
/// vectors, in floating point. Independent of `Candidate::form`.
fn oracle_form(p: [(f64, f64); 2], q: [(f64, f64); 2]) -> [(f64, f64); 3] {
    // V = [[p0, p1], [q0, q1]], rows of adj(V) give the linear factors.
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let det = {
        let (a, b) = (mul(p[0], q[1]), mul(p[1], q[0]));
        (a.0 - b.0, a.1 - b.1)
    };
    // Rows: (q1, −p1) and (−q0, p0); product of (u0 x + u1 y)(v0 x + v1 y).
    let u = [q[1], (-p[1].0, -p[1].1)];
    let v = [(-q[0].0, -q[0].1), p[0]];
    let xy = {
        let (a, b) = (mul(u[0], v[1]), mul(u[1], v[0]));
        (a.0 + b.0, a.1 + b.1)
    };
    let nd = det.0 * det.0 + det.1 * det.1;
    let div = |a: (f64, f64)| ((a.0 * det.0 + a.1 * det.1) / nd, (a.1 * det.0 - a.0 * det.1) / nd);
    [div(mul(u[0], v[0])), div(xy), div(mul(u[1], v[1]))]
}

enum Raw {
    Real((i64, i64), (i64, i64)),
    Complex(GaussianInt, GaussianInt),
}

impl Raw {
    fn bucket(&self) -> usize {
        match *self {
            Raw::Real(a, b) => a.0.abs().max(a.1.abs()).max(b.0.abs()).max(b.1.abs()) as usize,
            Raw::Complex(z1, z2) => {
                let m = z1.norm().max(z2.norm());
                let r = isqrt(m) as i128;
                (if r * r == m { r } else { r + 1 }) as usize
            }
        }
    }

    fn form(&self) -> [(f64, f64); 3] {
        let c = |z: GaussianInt| (z.re as f64, z.im as f64);
        match *self {
            Raw::Real(a, b) => {
                oracle_form([(a.0 as f64, 0.0), (b.0 as f64, 0.0)], [(a.1 as f64, 0.0), (b.1 as f64, 0.0)])
            }
            Raw::Complex(z1, z2) => oracle_form([c(z1), c(z1.conj())], [c(z2), c(z2.conj())]),
        }
    }

    fn candidate(&self) -> Option<Candidate> {
        match *self {
            Raw::Real(a, b) => Candidate::real(a, b),
            Raw::Complex(z1, z2) => Candidate::complex(z1, z2),
        }
    }
}

/// Task `i` visits the real pairs starting at line `i`; tasks past the real
/// lines visit the conjugate pairs with `Re z₁ = i − lines.len() + 1`.
fn oracle_row<F: FnMut(Raw)>(n_max: i64, lines: &[(i64, i64)], i: usize, mut f: F) {
    if i < lines.len() {
        let v = lines[i];
        for &w in &lines[i + 1..] {
            f(Raw::Real(v, w));
        }
    } else {
        let re = (i - lines.len()) as i64 + 1;
        for_each_complex_in_box(n_max, re, |z1, z2| f(Raw::Complex(z1, z2)));
    }
}

/// Best approximations for every `N = 1..=n_max` by exhaustive enumeration:
/// a float pass over all pairs, then exact evaluation of near-minimal
/// survivors through `md_form` of the candidate group.
pub fn brute_force_sweep(target: &MCRSGroup, n_max: i64, cap: i64) -> Result<Vec<ApproxResult>, ApproxError> {
    if n_max < 1 {
        return Err(ApproxError::BadSize(n_max));
    }
    if n_max > cap {
        return Err(ApproxError::OverCap { n: n_max, cap });
    }
    if target.dim() != 2 {
        return Err(ApproxError::NotPlanar);
    }
    let tform = md_form(target)?;
    let t: Vec<(f64, f64)> = tform.coeffs().iter().map(Cx::to_f64).collect();
    let t = [t[0], t[1], t[2]];
    let maxc = t.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max);
    let margin = |r: f64| 1e-12 * (1.0 + maxc) + 1e-9 * r;
    let lines = all_real_lines(n_max);
    let nb = n_max as usize + 1;

    let tasks = lines.len() + n_max as usize;
    let mins = (0..tasks)
        .into_par_iter()
        .fold(
            || vec![f64::INFINITY; nb],
            |mut acc, i| {
                oracle_row(n_max, &lines, i, |raw| {
                    let b = raw.bucket();
                    let r = rho_f64(&t, &raw.form());
                    if r < acc[b] {
                        acc[b] = r;
                    }
                });
                acc
            },
        )
        .reduce(|| vec![f64::INFINITY; nb], |a, b| a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect());
    let mut prefix = mins.clone();
    for k in 1..nb {
        prefix[k] = prefix[k].min(prefix[k - 1]);
    }
    let survivors: Vec<(usize, f64, Candidate)> = (0..tasks)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut v = Vec::new();
            oracle_row(n_max, &lines, i, |raw| {
                let b = raw.bucket();
                let r = rho_f64(&t, &raw.form());
                if r <= prefix[b] + margin(prefix[b]) {
                    if let Some(c) = raw.candidate() {
                        v.push((b, r, c));
                    }
                }
            });
            v
        })
        .collect();

    let mut exact: std::collections::BTreeMap<Candidate, DiscrepancyValue> = Default::default();
    let mut out = Vec::new();
    for n in 1..=n_max {
        let cut = prefix[n as usize] + margin(prefix[n as usize]);
        let pool: BTreeSet<Candidate> =
            survivors.iter().filter(|s| s.0 <= n as usize && s.1 <= cut).map(|s| s.2).collect();
        for c in &pool {
            if !exact.contains_key(c) {
                let d = discrepancy_of_forms(&tform, &md_form(&c.group()?)?);
                exact.insert(*c, d);
            }
        }
        let min = pool.iter().map(|c| &exact[c].squared).min().ok_or(ApproxError::BadSize(n))?.clone();
        let minimizers: Vec<Candidate> = pool.iter().filter(|c| exact[*c].squared == min).copied().collect();
        out.push(ApproxResult {
            target: target.clone(),
            n,
            rho: exact[&minimizers[0]].clone(),
            certificate: Certificate {
                method: Method::Exhaustive,
                seed: None,
                eps: None,
                confinement: Confinement::WholeBox,
                other_kind_excluded: false,
                lines_kept: lines.len(),
                candidates: 0,
                exact_evaluations: pool.len(),
                chain: None,
            },
            minimizers,
        });
    }
    Ok(out)
}

pub fn brute_force_best(q: &ApproxQuery, cap: i64) -> Result<ApproxResult, ApproxError> {
    if q.n > cap {
        return Err(ApproxError::OverCap { n: q.n, cap });
    }
    let mut all = brute_force_sweep(&q.target, q.n, cap)?;
    Ok(all.pop().expect("n >= 1"))
}

// ---------------------------------------------------------------------------
// Rates and sail levels

#[derive(Debug, Clone)]
pub struct LagrangeRecord {
    pub n: i64,
    pub rho: DiscrepancyValue,
    /// `ρ_N · N²`.
    pub scaled: f64,
}

#[derive(Debug, Clone)]
pub struct LagrangeRateReport {
    pub records: Vec<LagrangeRecord>,
    /// `(min, max)` of `ρ_N·N²`; `None` when some `ρ_N` vanishes.
    pub window: Option<(f64, f64)>,
}

impl LagrangeRateReport {
    pub fn degenerate(&self) -> bool {
        self.window.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": crate::json::SCHEMA,
            "kind": "lagrange-sweep",
            "records": self.records.iter().map(|r| json!({
                "N": r.n,
                "rho": r.rho.to_json(),
                "rho_N2": crate::json::decimal(r.scaled),
            })).collect::<Vec<_>>(),
            "window": self.window.map(|(a, b)| json!([crate::json::decimal(a), crate::json::decimal(b)])),
            "degenerate": self.degenerate(),
        })
    }
}

pub fn lagrange_sweep(target: &MCRSGroup, ns: &[i64]) -> Result<LagrangeRateReport, ApproxError> {
    let records = ns
        .iter()
        .map(|&n| {
            let r = best_approx(&ApproxQuery::new(target.clone(), n)?)?;
            let scaled = r.rho.to_f64() * (n as f64) * (n as f64);
            Ok(LagrangeRecord { n, rho: r.rho, scaled })
        })
        .collect::<Result<Vec<_>, ApproxError>>()?;
    let window = if records.iter().any(|r| r.rho.is_zero()) || records.is_empty() {
        None
    } else {
        let lo = records.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
        let hi = records.iter().map(|r| r.scaled).fold(0.0, f64::max);
        Some((lo, hi))
    };
    Ok(LagrangeRateReport { records, window })
}

/// Sail levels of the two vectors of each real minimizer.
pub fn sail_level_of_result(result: &ApproxResult) -> Result<Vec<(Candidate, [u64; 2])>, ApproxError> {
    result
        .minimizers
        .iter()
        .filter_map(|c| match c {
            Candidate::Real([v, w]) => Some((*c, *v, *w)),
            Candidate::Complex(..) => None,
        })
        .map(|(c, v, w)| {
            Ok((c, [sail_membership_level(&result.target, v)?, sail_membership_level(&result.target, w)?]))
        })
        .collect()
}

/// `ρ_N · N^e` helper for rate fits: least-squares slope of
/// `log ρ` against `log N`.
pub fn rate_exponent(points: &[(i64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(n, r)| ((n as f64).ln(), r.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    (den > 0.0).then(|| num / den)
}
