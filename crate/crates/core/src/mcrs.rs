//! MCRS-groups given by their eigenlines, Markoff–Davenport forms, size and
//! discrepancy.

use crate::numeric::{
    gaussian_primitive, Alg, BigInt, BigRational, Cx, GaussianInt, GaussianVector, NumberField, NumericError,
    QuadraticSurd,
};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McrsError {
    #[error("not regular: repeated eigenvalue")]
    NotRegular,
    #[error("not a rational group: line {0} has no Gaussian vector")]
    NotRational(usize),
    #[error("lines are linearly dependent")]
    Dependent,
    #[error("complex line {0} has no conjugate partner")]
    UnpairedComplexLine(usize),
    #[error("expected {expected} lines of length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("vertical direction unsupported in A[a,b,c] chart")]
    VerticalChart,
    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),
    #[error("line coordinates live in different number fields")]
    MixedFields,
    #[error("coordinate overflow")]
    Overflow,
    #[error("zero direction")]
    ZeroDirection,
    #[error("{0}")]
    NotAlgebraic(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

pub(crate) fn same_field(xs: &[&Alg]) -> bool {
    let mut field: Option<&Arc<NumberField>> = None;
    for x in xs {
        if let Some(f) = x.field() {
            match field {
                Some(g) if !g.same_as(f) => return false,
                _ => field = Some(f),
            }
        }
    }
    true
}

fn cx_parts(v: &[Cx]) -> Vec<&Alg> {
    v.iter().flat_map(|z| [&z.re, &z.im]).collect()
}

/// A complex line through the origin, stored by the direction whose first
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenLine {
    direction: Vec<Cx>,
    gaussian: Option<GaussianVector>,
}

impl EigenLine {
    pub fn new(direction: Vec<Cx>) -> Result<EigenLine, McrsError> {
        let lead = direction.iter().find(|z| !z.is_zero()).ok_or(McrsError::ZeroDirection)?.clone();
        if !same_field(&cx_parts(&direction)) {
            return Err(McrsError::MixedFields);
        }
        let inv = lead.inv();
        let direction: Vec<Cx> = direction.iter().map(|z| z * &inv).collect();
        let gaussian = gaussian_of(&direction)?;
        Ok(EigenLine { direction, gaussian })
    }

    pub fn from_gaussian(v: &GaussianVector) -> Result<EigenLine, McrsError> {
        let dir = v.coords.iter().map(|z| Cx::gaussian(z.re, z.im)).collect();
        EigenLine::new(dir)
    }

    pub fn real(coords: &[i64]) -> Result<EigenLine, McrsError> {
        EigenLine::from_gaussian(&GaussianVector::real(coords))
    }

    /// The line `y = α x` in the plane.
    pub fn slope(alpha: &Alg) -> EigenLine {
        EigenLine::new(vec![Cx::one(), Cx::real(alpha.clone())]).expect("nonzero direction")
    }

    /// The line `x = 0` in the plane.
    pub fn vertical() -> EigenLine {
        EigenLine::real(&[0, 1]).expect("nonzero direction")
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[Cx] {
        &self.direction
    }

    /// Primitive Gaussian vector on the line, when it has one.
    pub fn gaussian(&self) -> Option<&GaussianVector> {
        self.gaussian.as_ref()
    }

    pub fn is_real(&self) -> bool {
        self.direction.iter().all(Cx::is_real)
    }

    pub fn conj(&self) -> EigenLine {
        EigenLine {
            direction: self.direction.iter().map(Cx::conj).collect(),
            gaussian: self.gaussian.as_ref().map(|g| gaussian_primitive(&g.conj()).expect("nonzero")),
        }
    }

    /// `y/x` for a real planar line with `x ≠ 0`.
    pub fn real_slope(&self) -> Option<Alg> {
        (self.dim() == 2 && self.is_real() && self.direction[0].is_real() && !self.direction[0].is_zero())
            .then(|| self.direction[1].re.clone())
    }

    fn json(&self) -> Value {
        json!({
            "direction": self.direction.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
            "decimal": self.direction.iter().map(|z| {
                let (re, im) = z.to_f64();
                if im == 0.0 { crate::json::decimal(re) } else { format!("{}+{}I", crate::json::decimal(re), crate::json::decimal(im)) }
            }).collect::<Vec<_>>(),
            "vector": self.gaussian.as_ref().map(|g| g.to_string()),
        })
    }
}

fn gaussian_of(dir: &[Cx]) -> Result<Option<GaussianVector>, McrsError> {
    let mut parts = Vec::with_capacity(2 * dir.len());
    for z in dir {
        let (Some(re), Some(im)) = (z.re.as_rational(), z.im.as_rational()) else {
            return Ok(None);
        };
        parts.push(re);
        parts.push(im);
    }
    let den = parts.iter().fold(BigInt::one(), |l, p| l.lcm(p.denom()));
    let int = |p: &BigRational| (p.numer() * (&den / p.denom())).to_i64().ok_or(McrsError::Overflow);
    let coords = parts
        .chunks(2)
        .map(|c| Ok(GaussianInt::new(int(&c[0])?, int(&c[1])?)))
        .collect::<Result<Vec<_>, McrsError>>()?;
    Ok(Some(gaussian_primitive(&GaussianVector::new(coords))?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spectrum {
    Hyperbolic,
    ComplexPair,
    Mixed,
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spectrum::Hyperbolic => "hyperbolic",
            Spectrum::ComplexPair => "complex-pair",
            Spectrum::Mixed => "mixed",
        })
    }
}

/// An MCRS-group of `GL(n, R)`, determined by its `n` eigenlines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCRSGroup {
    lines: Vec<EigenLine>,
    source: Option<Vec<Vec<i64>>>,
    spectrum: Spectrum,
}

impl MCRSGroup {
    pub fn new(lines: Vec<EigenLine>) -> Result<MCRSGroup, McrsError> {
        let n = lines.len();
        if n < 2 || lines.iter().any(|l| l.dim() != n) {
            return Err(McrsError::Dimension { expected: n.max(2), got: lines.first().map_or(0, EigenLine::dim) });
        }
        for (i, l) in lines.iter().enumerate() {
            if !l.is_real() && !lines.contains(&l.conj()) {
                return Err(McrsError::UnpairedComplexLine(i));
            }
        }
        let all: Vec<Cx> = lines.iter().flat_map(|l| l.direction.iter().cloned()).collect();
        if same_field(&cx_parts(&all)) && det(&columns(&lines)).is_zero() {
            return Err(McrsError::Dependent);
        }
        let spectrum = spectrum_of(&lines);
        Ok(MCRSGroup { lines, source: None, spectrum })
    }

    pub fn from_vectors(vs: &[GaussianVector]) -> Result<MCRSGroup, McrsError> {
        MCRSGroup::new(vs.iter().map(EigenLine::from_gaussian).collect::<Result<_, _>>()?)
    }

    /// Real group with integer eigenvectors, e.g. `&[&[1, 2], &[1, -2]]`.
    pub fn from_int_vectors(vs: &[&[i64]]) -> Result<MCRSGroup, McrsError> {
        MCRSGroup::new(vs.iter().map(|v| EigenLine::real(v)).collect::<Result<_, _>>()?)
    }

    /// The planar group of the lines `y = α₁x` and `y = α₂x`.
    pub fn from_slopes(a1: &Alg, a2: &Alg) -> Result<MCRSGroup, McrsError> {
        MCRSGroup::new(vec![EigenLine::slope(a1), EigenLine::slope(a2)])
    }

    /// `A[α]`: the lines `x = 0` and `y = αx`.
    pub fn classical(alpha: &Alg) -> MCRSGroup {
        MCRSGroup::new(vec![EigenLine::vertical(), EigenLine::slope(alpha)]).expect("independent lines")
    }

    /// `A[a, b, c]`: the lines of `(a, b, c)`, `(0, 1, I)` and `(0, 1, −I)`.
    pub fn simul3(a: &Alg, b: &Alg, c: &Alg) -> Result<MCRSGroup, McrsError> {
        if a.is_zero() {
            return Err(McrsError::VerticalChart);
        }
        let l = EigenLine::new(vec![Cx::real(a.clone()), Cx::real(b.clone()), Cx::real(c.clone())])?;
        let p = EigenLine::new(vec![Cx::zero(), Cx::one(), Cx::i()])?;
        let q = p.conj();
        MCRSGroup::new(vec![l, p, q])
    }

    pub fn dim(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[EigenLine] {
        &self.lines
    }

    pub fn source(&self) -> Option<&[Vec<i64>]> {
        self.source.as_deref()
    }

    pub fn spectrum(&self) -> Spectrum {
        self.spectrum
    }

    pub fn is_rational(&self) -> bool {
        self.lines.iter().all(|l| l.gaussian.is_some())
    }

    /// Primitive Gaussian vectors of all lines, if the group is rational.
    pub fn vectors(&self) -> Option<Vec<GaussianVector>> {
        self.lines.iter().map(|l| l.gaussian.clone()).collect()
    }

    /// Image of the group under the integer matrix `g`: lines `g·l`.
    pub fn transform(&self, g: &[Vec<i64>]) -> Result<MCRSGroup, McrsError> {
        let lines = self
            .lines
            .iter()
            .map(|l| {
                let dir = g
                    .iter()
                    .map(|row| {
                        row.iter().zip(&l.direction).fold(Cx::zero(), |acc, (&a, z)| &acc + &z.scale(&Alg::from_int(a)))
                    })
                    .collect();
                EigenLine::new(dir)
            })
            .collect::<Result<Vec<_>, _>>()?;
        MCRSGroup::new(lines)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dim(),
            "spectrum": self.spectrum.to_string(),
            "matrix": self.source,
            "lines": self.lines.iter().map(EigenLine::json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for MCRSGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lines
            .iter()
            .map(|l| match &l.gaussian {
                Some(g) => g.to_string(),
                None => format!("({})", l.direction.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(", ")),
            })
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

fn spectrum_of(lines: &[EigenLine]) -> Spectrum {
    let real = lines.iter().filter(|l| l.is_real()).count();
    if real == lines.len() {
        Spectrum::Hyperbolic
    } else if real == 0 {
        Spectrum::ComplexPair
    } else {
        Spectrum::Mixed
    }
}

fn columns(lines: &[EigenLine]) -> Vec<Vec<Cx>> {
    let n = lines.len();
    (0..n).map(|i| lines.iter().map(|l| l.direction[i].clone()).collect()).collect()
}

/// Determinant by fraction-free expansion along the first row; `n ≤ 4` in practice.
fn det(m: &[Vec<Cx>]) -> Cx {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Cx::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Cx>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, z)| z.clone()).collect())
            .collect();
        let t = &m[0][j] * &det(&minor);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// Inverse by Gauss–Jordan elimination.
fn inverse(m: &[Vec<Cx>]) -> Vec<Vec<Cx>> {
    let n = m.len();
    let mut a: Vec<Vec<Cx>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Cx::one() } else { Cx::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, piv);
        let inv = a[col][col].inv();
        a[col] = a[col].iter().map(|z| z * &inv).collect();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                a[r] = a[r].iter().zip(&pivot_row).map(|(x, p)| x - &(&f * p)).collect();
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Degree-`n` monomials in `n` variables, lexicographic: `x₁ⁿ, x₁ⁿ⁻¹x₂, …, xₙⁿ`.
pub fn monomials(n: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n as u32, &mut Vec::new(), &mut out);
    out
}

fn monomial_name(exps: &[u32]) -> String {
    let vars = ["x", "y", "z"];
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let v = if exps.len() <= 3 { vars[i].to_string() } else { format!("x{}", i + 1) };
            if e == 1 {
                v
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// A homogeneous degree-`n` form in `n` variables, coefficients listed in the
/// order of [`monomials`]. Markoff–Davenport forms are defined up to sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MDForm {
    n: usize,
    coeffs: Vec<Cx>,
}

impl MDForm {
    pub fn new(n: usize, coeffs: Vec<Cx>) -> MDForm {
        assert_eq!(coeffs.len(), monomials(n).len(), "coefficient count");
        MDForm { n, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&Cx> {
        monomials(self.n).iter().position(|m| m == exps).map(|i| &self.coeffs[i])
    }

    /// The representative whose first nonzero coefficient points into the
    /// half-plane `re > 0` (or along `+I` when purely imaginary).
    pub fn canonical(&self) -> MDForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) if c.orientation() == Ordering::Less => -self,
            _ => self.clone(),
        }
    }

    pub fn eq_up_to_sign(&self, other: &MDForm) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn eval(&self, x: &[Cx]) -> Cx {
        monomials(self.n).iter().zip(&self.coeffs).fold(Cx::zero(), |acc, (m, c)| {
            let term = m.iter().zip(x).fold(c.clone(), |t, (&e, xi)| (0..e).fold(t, |t, _| &t * xi));
            &acc + &term
        })
    }

    pub fn eval_int(&self, x: &[i64]) -> Cx {
        self.eval(&x.iter().map(|&v| Cx::from_int(v)).collect::<Vec<_>>())
    }

    /// Value at a Gaussian integer point.
    pub fn eval_gaussian(&self, v: &GaussianVector) -> Cx {
        self.eval(&v.coords.iter().map(|z| Cx::gaussian(z.re, z.im)).collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> Value {
        let c = self.canonical();
        json!({
            "degree": self.n,
            "monomials": monomials(self.n).iter().map(|m| monomial_name(m)).collect::<Vec<_>>(),
            "coefficients": c.coeffs.iter().map(|z| z.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl std::ops::Neg for &MDForm {
    type Output = MDForm;
    fn neg(self) -> MDForm {
        MDForm { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for MDForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = monomials(self.n)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| format!("({c})*{}", monomial_name(m)))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Product of linear forms as a coefficient vector over [`monomials`].
fn product_of_linear(forms: &[Vec<Cx>]) -> Vec<Cx> {
    let n = forms.len();
    // Sparse polynomial keyed by exponent vectors.
    let mut poly: Vec<(Vec<u32>, Cx)> = vec![(vec![0; n], Cx::one())];
    for l in forms {
        let mut next: Vec<(Vec<u32>, Cx)> = Vec::new();
        for (e, c) in &poly {
            for (j, a) in l.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[j] += 1;
                let t = c * a;
                match next.iter_mut().find(|(k, _)| *k == e2) {
                    Some((_, v)) => *v = &*v + &t,
                    None => next.push((e2, t)),
                }
            }
        }
        poly = next;
    }
    monomials(n)
        .into_iter()
        .map(|m| poly.iter().find(|(e, _)| *e == m).map_or_else(Cx::zero, |(_, c)| c.clone()))
        .collect()
}

/// `∏ L_k / Δ(L_1, …, L_n)`, where `L_k` vanishes on every line but the `k`-th.
/// With the lines as columns of `V`, the rows of `V⁻¹` are such forms and
/// `Δ = det V⁻¹`.
pub fn md_form(a: &MCRSGroup) -> Result<MDForm, McrsError> {
    let all: Vec<Cx> = a.lines.iter().flat_map(|l| l.direction.iter().cloned()).collect();
    if !same_field(&cx_parts(&all)) {
        return Err(McrsError::MixedFields);
    }
    let v = columns(&a.lines);
    let d = det(&v);
    let w = inverse(&v);
    let coeffs = product_of_linear(&w).into_iter().map(|c| &c * &d).collect();
    Ok(MDForm::new(a.dim(), coeffs))
}

/// Closed form of the Markoff–Davenport form of `A[a, b, c]`.
pub fn md_form_simul3(a: &Alg, b: &Alg, c: &Alg) -> Result<MDForm, McrsError> {
    if a.is_zero() {
        return Err(McrsError::VerticalChart);
    }
    let i = |x: Alg| Cx::new(Alg::zero(), x);
    let half = Alg::from_rational(BigRational::new(1.into(), 2.into()));
    let a2 = a.square();
    let lead = -((b.square() + c.square()) / (&a2 + &a2));
    let z = Cx::zero;
    Ok(MDForm::new(3, vec![i(lead), i(b / a), i(c / a), i(-&half), z(), i(-half), z(), z(), z(), z()]))
}

/// Max-coordinate-modulus norm of the primitive Gaussian vectors, kept as its
/// square so that values like `√2` stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Size(pub i128);

impl Size {
    pub fn norm_sq(self) -> i128 {
        self.0
    }

    /// The size itself when it is an integer.
    pub fn as_integer(self) -> Option<i64> {
        let r = (self.0 as f64).sqrt().round() as i128;
        (r * r == self.0).then_some(r as i64)
    }

    pub fn to_f64(self) -> f64 {
        (self.0 as f64).sqrt()
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(k) => write!(f, "{k}"),
            None => write!(f, "sqrt {}", self.0),
        }
    }
}

pub fn size(a: &MCRSGroup) -> Result<Size, McrsError> {
    a.lines
        .iter()
        .enumerate()
        .map(|(i, l)| l.gaussian.as_ref().map(|g| g.norm_sq()).ok_or(McrsError::NotRational(i)))
        .try_fold(0, |m, s| s.map(|s| m.max(s)))
        .map(Size)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Sum,
    Difference,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Sum => "sum",
            Branch::Difference => "difference",
        })
    }
}

/// `ρ` stored through its exact square; `exact` holds `ρ` itself when it is
/// known in closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyValue {
    pub squared: Alg,
    pub exact: Option<Alg>,
    pub branch: Branch,
}

impl DiscrepancyValue {
    pub fn zero() -> DiscrepancyValue {
        DiscrepancyValue { squared: Alg::zero(), exact: Some(Alg::zero()), branch: Branch::Difference }
    }

    /// Builds the value from a maximal coefficient of the winning branch.
    pub fn from_coefficient(c: &Cx, branch: Branch) -> DiscrepancyValue {
        let squared = c.norm_sq();
        let exact = if c.is_real() {
            Some(c.re.abs())
        } else if c.is_imaginary() {
            Some(c.im.abs())
        } else {
            squared.as_rational().and_then(|q| sqrt_rational(&q))
        };
        DiscrepancyValue { squared, exact, branch }
    }

    pub fn to_f64(&self) -> f64 {
        self.squared.to_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.squared.is_zero()
    }

    /// Exact text when available, otherwise `sqrt(ρ²)`.
    pub fn exact_string(&self) -> String {
        match &self.exact {
            Some(v) => v.to_string(),
            None => format!("sqrt({})", self.squared),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact_string(),
            "squared": self.squared.to_string(),
            "decimal": crate::json::decimal(self.to_f64()),
            "branch": self.branch.to_string(),
        })
    }
}

impl PartialOrd for DiscrepancyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.squared.cmp(&other.squared))
    }
}

impl fmt::Display for DiscrepancyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {:.6}", self.exact_string(), self.to_f64())
    }
}

/// `√q` as a quadratic surd, for moderately sized `q ≥ 0`.
fn sqrt_rational(q: &BigRational) -> Option<Alg> {
    if q.is_negative() {
        return None;
    }
    let pq = q.numer() * q.denom();
    if pq.bits() > 62 {
        return None;
    }
    QuadraticSurd::new(BigInt::zero(), BigInt::one(), q.denom().clone(), pq).ok().map(|s| s.to_alg())
}

/// `ρ(Φ₁, Φ₂) = min(max |coeff(Φ₁ + Φ₂)|, max |coeff(Φ₁ − Φ₂)|)`; ties go to the
/// difference branch.
pub fn discrepancy_of_forms(f1: &MDForm, f2: &MDForm) -> DiscrepancyValue {
    assert_eq!(f1.n, f2.n, "forms of different degree");
    let branch_max = |sign: Branch| {
        f1.coeffs
            .iter()
            .zip(&f2.coeffs)
            .map(|(a, b)| match sign {
                Branch::Sum => a + b,
                Branch::Difference => a - b,
            })
            .map(|c| (c.norm_sq(), c))
            .max_by(|x, y| x.0.cmp(&y.0))
            .expect("nonempty")
    };
    let (ds, dc) = branch_max(Branch::Difference);
    let (ss, sc) = branch_max(Branch::Sum);
    if ss < ds {
        DiscrepancyValue::from_coefficient(&sc, Branch::Sum)
    } else {
        DiscrepancyValue::from_coefficient(&dc, Branch::Difference)
    }
}

pub fn discrepancy(a1: &MCRSGroup, a2: &MCRSGroup) -> Result<DiscrepancyValue, McrsError> {
    if a1.dim() != a2.dim() {
        return Err(McrsError::Dimension { expected: a1.dim(), got: a2.dim() });
    }
    Ok(discrepancy_of_forms(&md_form(a1)?, &md_form(a2)?))
}

fn to_cx_matrix(m: &[Vec<i64>]) -> Vec<Vec<Cx>> {
    m.iter().map(|r| r.iter().map(|&x| Cx::from_int(x)).collect()).collect()
}

/// Roots of `x² − t x + d` in the exact tiers, larger real root first.
fn quadratic_roots(t: &BigInt, d: &BigInt) -> Result<[Cx; 2], McrsError> {
    let disc = t * t - BigInt::from(4) * d;
    if disc.is_zero() {
        return Err(McrsError::NotRegular);
    }
    let half = |x: Alg| x / Alg::from_int(2);
    let tt = Alg::from_bigint(t.clone());
    let s = QuadraticSurd::new(BigInt::zero(), BigInt::one(), BigInt::one(), disc.abs())?.to_alg();
    Ok(if disc.is_positive() {
        [Cx::real(half(&tt + &s)), Cx::real(half(&tt - &s))]
    } else {
        let (re, im) = (half(tt), half(s));
        [Cx::new(re.clone(), im.clone()), Cx::new(re, -im)]
    })
}

/// A nonzero kernel vector of the rank-`n−1` matrix `M − λ I`.
fn kernel(m: &[Vec<Cx>], lambda: &Cx) -> Result<Vec<Cx>, McrsError> {
    let n = m.len();
    let a: Vec<Vec<Cx>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { x - lambda } else { x.clone() }).collect())
        .collect();
    match n {
        2 => {
            for r in &a {
                if !(r[0].is_zero() && r[1].is_zero()) {
                    return Ok(vec![r[1].clone(), -&r[0]]);
                }
            }
            Err(McrsError::NotRegular)
        }
        3 => {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let (r, s) = (&a[i], &a[j]);
                let v = vec![
                    &(&r[1] * &s[2]) - &(&r[2] * &s[1]),
                    &(&r[2] * &s[0]) - &(&r[0] * &s[2]),
                    &(&r[0] * &s[1]) - &(&r[1] * &s[0]),
                ];
                if v.iter().any(|z| !z.is_zero()) {
                    return Ok(v);
                }
            }
            Err(McrsError::NotRegular)
        }
        _ => Err(McrsError::Dimension { expected: 3, got: n }),
    }
}

fn integer_roots(p: &[BigInt]) -> Vec<BigInt> {
    let c0 = p[0].abs();
    let eval = |x: &BigInt| p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    if c0.is_zero() {
        return vec![BigInt::zero()];
    }
    let mut out = Vec::new();
    let limit = c0.sqrt();
    let mut k = BigInt::one();
    while k <= limit {
        if (&c0 % &k).is_zero() {
            let co = &c0 / &k;
            for cand in [k.clone(), -k.clone(), co.clone(), -co] {
                if eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        k += 1;
    }
    out
}

/// The group of eigenlines of a regular integer matrix (`n = 2` or `3`).
///
/// Eigenvalues of a `2×2` matrix are exact quadratic surds. In dimension 3
/// each real eigenvalue of an irreducible characteristic polynomial lives in
/// its own cubic field; complex eigenvalues are supported only when they come
/// from a quadratic factor.
pub fn group_from_matrix(m: &[Vec<i64>]) -> Result<MCRSGroup, McrsError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(McrsError::Dimension { expected: n, got: m.iter().map(Vec::len).max().unwrap_or(0) });
    }
    let big = |x: i64| BigInt::from(x);
    let mc = to_cx_matrix(m);
    let eigen: Vec<Cx> = match n {
        2 => {
            let t = big(m[0][0]) + big(m[1][1]);
            let d = big(m[0][0]) * big(m[1][1]) - big(m[0][1]) * big(m[1][0]);
            quadratic_roots(&t, &d)?.to_vec()
        }
        3 => {
            let e = |i: usize, j: usize| big(m[i][j]);
            let tr = e(0, 0) + e(1, 1) + e(2, 2);
            let minors = &e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0) + &e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0)
                + &e(1, 1) * e(2, 2)
                - e(1, 2) * e(2, 1);
            let dt = &e(0, 0) * (&e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - &e(0, 1) * (&e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + &e(0, 2) * (&e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
            // x³ + b x² + c x + d
            let (b, c, d) = (-tr, minors, -dt);
            let disc = BigInt::from(18) * &b * &c * &d - BigInt::from(4) * b.pow(3) * &d + b.pow(2) * c.pow(2)
                - BigInt::from(4) * c.pow(3)
                - BigInt::from(27) * d.pow(2);
            if disc.is_zero() {
                return Err(McrsError::NotRegular);
            }
            let poly = vec![d.clone(), c.clone(), b.clone(), BigInt::one()];
            let roots = integer_roots(&poly);
            match roots.first() {
                None if disc.is_negative() => {
                    return Err(McrsError::UnsupportedSpectrum("complex eigenvalues of an irreducible cubic".into()))
                }
                None => NumberField::real_roots(poly)?.iter().rev().map(|f| Cx::real(f.generator())).collect(),
                Some(r) => {
                    // Deflate: x³ + b x² + c x + d = (x − r)(x² + (b + r) x + (c + r(b + r))).
                    let b1 = &b + r;
                    let c1 = &c + r * &b1;
                    let mut ev = vec![Cx::real(Alg::from_bigint(r.clone()))];
                    ev.extend(quadratic_roots(&-b1, &c1)?);
                    ev
                }
            }
        }
        _ => return Err(McrsError::Dimension { expected: 3, got: n }),
    };
    let lines = eigen.iter().map(|l| EigenLine::new(kernel(&mc, l)?)).collect::<Result<Vec<_>, _>>()?;
    let spectrum = spectrum_of(&lines);
    Ok(MCRSGroup { lines, source: Some(m.to_vec()), spectrum })
}

/// The Markoff minimum `α = inf |Φ_A|` over nonzero integer points, read off
/// one period of the four sails of a hyperbolic planar group. Zero when an
/// eigenline is rational. Needs the source matrix for irrational lines.
pub fn markoff_minimum(a: &MCRSGroup) -> Result<Alg, crate::sails2d::SailError> {
    crate::sails2d::markoff_minimum_impl(a)
}
