//! Regression suite over the reference examples: each check recomputes a
//! value from scratch and compares it with the recorded one.
//!
//! A check whose recomputed value is known to differ from the recorded one
//! carries the expected recomputed value and a reason. It passes as a
//! documented divergence while the recomputation stays put, and fails as soon
//! as it moves.

use crate::approx2d::{
    best_approx, delta_bound_from_eps, eps_bound_from_delta, lagrange_sweep, phi_over_q2_bound, round_up_decimal,
    sail_level_of_result, ApproxQuery, Candidate, Side,
};
use crate::approx3d::{
    b_claim, best_simul, char_poly, discrepancy3, e1_claim, e1_family, mat_pow, mat_vec, named_operator, simul_records,
    verify_row, verify_table, OrbitFamily, SimulCandidate, SimulTarget, Verdict,
};
use crate::mcrs::{discrepancy, group_from_matrix, md_form, md_form_simul3, size, MCRSGroup, MDForm};
use crate::numeric::{ball_refine, parse_real, rat, Alg, BallReal, BigInt, BigRational, Cx, NumberField};
use crate::sails2d::{geometric_cf, sail, Cone2, Point};
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckVerdict {
    Confirmed,
    Refuted,
    /// The recomputed value matches the documented divergent value.
    DocumentedDivergence,
}

impl CheckVerdict {
    pub fn passes(&self) -> bool {
        *self != CheckVerdict::Refuted
    }
}

impl fmt::Display for CheckVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckVerdict::Confirmed => "confirmed",
            CheckVerdict::Refuted => "refuted",
            CheckVerdict::DocumentedDivergence => "diverges-from-paper (documented)",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub description: &'static str,
    pub expected: String,
    pub computed: String,
    pub verdict: CheckVerdict,
    /// Reason for a documented divergence.
    pub note: Option<&'static str>,
    /// Per-row lines for table checks.
    pub details: Vec<String>,
}

impl CheckOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "description": self.description,
            "expected": self.expected,
            "computed": self.computed,
            "verdict": self.verdict.to_string(),
            "note": self.note,
            "details": self.details,
        })
    }
}

/// Settings shared by all checks.
#[derive(Clone, Debug)]
pub struct CheckParams {
    /// Overrides the size bound of checks that take one.
    pub n: Option<i64>,
}

/// What a check body reports before the verdict is assigned.
struct Computed {
    value: String,
    ok: bool,
    details: Vec<String>,
}

impl Computed {
    fn new(value: impl Into<String>, ok: bool) -> Computed {
        Computed { value: value.into(), ok, details: Vec::new() }
    }

    /// Compares display strings.
    fn equal(expected: &str, value: impl Into<String>) -> Computed {
        let value = value.into();
        let ok = value == expected;
        Computed::new(value, ok)
    }
}

type Body = fn(&CheckParams) -> Result<Computed, String>;

pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    pub expected: &'static str,
    /// `(recomputed value, reason)` for a known divergence.
    pub divergence: Option<(&'static str, &'static str)>,
    body: Body,
}

impl Check {
    pub fn run(&self, p: &CheckParams) -> CheckOutcome {
        let (computed, ok, details) = match (self.body)(p) {
            Ok(c) => (c.value, c.ok, c.details),
            Err(e) => (format!("error: {e}"), false, Vec::new()),
        };
        let verdict = match self.divergence {
            Some((value, _)) if computed == value => CheckVerdict::DocumentedDivergence,
            _ if ok => CheckVerdict::Confirmed,
            _ => CheckVerdict::Refuted,
        };
        CheckOutcome {
            id: self.id,
            description: self.description,
            expected: self.expected.to_string(),
            computed,
            verdict,
            note: self.divergence.map(|d| d.1),
            details,
        }
    }
}

pub fn checks() -> Vec<Check> {
    let c = |id, description, expected, body| Check { id, description, expected, divergence: None, body };
    vec![
        Check {
            id: "xi-B",
            description: "dominant eigenvalue of B, 40-bit ball",
            expected: "1.3247179573",
            divergence: Some((
                "1.3247179572",
                "the root of λ³-λ-1 is 1.32471795724474…, so the tenth decimal rounds down",
            )),
            body: xi_b,
        },
        c("xi-E1", "dominant eigenvalue of E1, 40-bit ball", "2.2469796037", xi_e1),
        c("fibonacci-lines", "eigenline slopes of [[1,1],[1,0]]", "-θ, 1/θ", fibonacci_lines),
        c("ex2-eigenvectors", "eigenvectors of [[0,-1],[1,0]]", "(I,1), (-I,1)", ex2_eigenvectors),
        c("form-fibonacci", "form of the Fibonacci group", "(-x² + xy + y²)/√5", form_fibonacci),
        c("form-cross", "form of the group of (1,2),(1,-2)", "(y² - 4x²)/4", form_cross),
        c("form-rotation", "form of the group of (I,1),(-I,1)", "I(x² + y²)/2", form_rotation),
        c("form3-100", "form of A[1,0,0]", "I(-xy²/2 - xz²/2)", form3_100),
        c("form3-111", "form of A[1,1,1]", "I(-x³ + x²y + x²z - xy²/2 - xz²/2)", form3_111),
        c("size-examples", "sizes of the groups of (I,1),(-I,1) and (1,2),(1,-2)", "1, 2", size_examples),
        c("size-slope", "size of A[m/n] is n", "1, 1, 5, 7, 13", size_slope),
        c("discrepancy-slopes", "discrepancy of A[α₁], A[α₂] is |α₁-α₂|", "1/6, 3/5, 0, 38/63", discrepancy_slopes),
        c("discrepancy-antisail", "discrepancy of (1,2),(2,3) against (1,0),(1,1)", "6", discrepancy_antisail),
        Check {
            id: "discrepancy-ex2",
            description: "discrepancy of the groups of (I,1),(-I,1) and (1,2),(1,-2)",
            expected: "√3/2",
            divergence: Some(("√5/2", "both sign branches of I(x²+y²)/2 ± (y²-4x²)/4 peak at |I/2 ∓ 1| = √5/2")),
            body: discrepancy_ex2,
        },
        c("antisail-sail", "1-sail of the cone (1,2),(2,3) in the box 10", "(1,2) (2,3)", antisail_sail),
        c(
            "antisail-cf",
            "vertices of the geometric continued fraction of (1,2),(2,3)",
            "(-2,-3) (-1,-2) (1,2) (2,3)",
            antisail_cf,
        ),
        c("worked-eps", "perturbation bound for the Fibonacci diagonal, times N²", "3.79", worked_eps),
        c("worked-delta", "slope bounds from 3.79/N², times N²", "80.35, 18.97", worked_delta),
        c("worked-phi-2", "second-side form bound, times N²", "18.99", worked_phi_2),
        Check {
            id: "worked-phi-1",
            description: "first-side form bound, times N²",
            expected: "80.65",
            divergence: Some((
                "80.64",
                "(D+ε₃)/D · 80.35 = 80.6387… with D = √5 and ε₃ = 80.35/N², which rounds up to 80.64",
            )),
            body: worked_phi_1,
        },
        c("antisail", "best approximations of size 1 of the antisail group", "4 minimizers, rho=6", antisail),
        c(
            "fibonacci-1e6",
            "best approximation of the Fibonacci group, N = 10⁶",
            "(514229,832040) (832040,-514229)",
            fibonacci_1e6,
        ),
        c("lagrange-fibonacci", "ρ_N·N² over N = 10..10⁴ stays in a window", "bounded window", lagrange_fibonacci),
        c("antisail-levels", "antisail minimizers are off the 1-sail", "all levels > 1", antisail_levels),
        c("simul-example", "discrepancy of A[1,0,0] and A[1,0,1]", "1", simul_example),
        c("b-power-4", "B⁴(1,0,0) is the first best approximation", "(1,1,1)", b_power_4),
        c(
            "b-sequence",
            "best approximations of the B direction are powers (N = 10⁴)",
            "prefix of B^n(1,0,0)",
            b_sequence,
        ),
        c("b-claim-48", "48 powers of B confirmed up to 10⁶", "48 confirmed", b_claim_48),
        c("b-gap-5", "B⁵(1,0,0) is not a best approximation", "refuted", b_gap_5),
        c("e1e2-first", "E1E2(1,0,0) is the first table entry", "(1,1,0) confirmed", e1e2_first),
        c("a3-best", "(3,2,1) is a best approximation of the E1 direction", "confirmed", a3_best),
        c("golden3d-prefix", "E1 best approximations up to N = 10³", "table rows and (3,2,1)", golden3d_prefix),
        c("golden3d-table", "E1 table rows verified up to N = 10⁶", "41 confirmed", golden3d_table),
    ]
}

pub fn run_checks(only: Option<&str>, p: &CheckParams) -> Result<Vec<CheckOutcome>, String> {
    let all = checks();
    let selected: Vec<&Check> = all.iter().filter(|c| only.is_none_or(|id| c.id == id)).collect();
    if selected.is_empty() {
        return Err(format!("unknown check: {}", only.unwrap_or_default()));
    }
    Ok(selected.iter().map(|c| c.run(p)).collect())
}

pub fn report_json(outcomes: &[CheckOutcome]) -> Value {
    json!({
        "schema": crate::json::SCHEMA,
        "kind": "verify",
        "passed": outcomes.iter().all(|o| o.verdict.passes()),
        "checks": outcomes.iter().map(CheckOutcome::to_json).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Formatting helpers

/// `x` rounded to `digits` decimals, or `None` when the ball straddles a
/// rounding boundary.
fn ball_decimal(b: &BallReal, digits: u32) -> Option<String> {
    let scale = BigRational::from_integer(BigInt::from(10u32).pow(digits));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let round = |x: BigRational| (x * &scale + &half).floor().to_integer();
    let (lo, hi) = (round(b.lo()), round(b.hi()));
    (lo == hi).then(|| {
        let p = BigInt::from(10u32).pow(digits);
        format!("{}.{:0>width$}", &lo / &p, (&lo % &p).to_string(), width = digits as usize)
    })
}

/// `√(p/q)` in lowest terms, e.g. `√5/2`.
fn sqrt_rational(v: &BigRational) -> String {
    let (p, q) = (v.numer().clone(), v.denom().clone());
    let m = &p * &q;
    let mut out_sq = BigInt::one();
    let mut inner = m.clone();
    let mut f = BigInt::from(2);
    while &f * &f <= inner {
        while (&inner % (&f * &f)) == BigInt::from(0) {
            inner /= &f * &f;
            out_sq *= &f;
        }
        f += 1;
    }
    // √(pq)/q = out_sq·√inner/q
    let g = num_integer::Integer::gcd(&out_sq, &q);
    let (coef, den) = (out_sq / &g, q / &g);
    let root = if inner.is_one() { String::new() } else { format!("√{inner}") };
    let num = match (coef.is_one(), root.is_empty()) {
        (_, true) => coef.to_string(),
        (true, false) => root,
        (false, false) => format!("{coef}{root}"),
    };
    if den.is_one() {
        num
    } else {
        format!("{num}/{den}")
    }
}

fn two_decimals(x: &Alg) -> String {
    let r = round_up_decimal(x, 2);
    format!("{:.2}", r.to_f64().unwrap_or(f64::NAN))
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn points(ps: impl IntoIterator<Item = Point>) -> String {
    let set: BTreeSet<Point> = ps.into_iter().collect();
    set.iter().map(|p| format!("({},{})", p.0, p.1)).collect::<Vec<_>>().join(" ")
}

fn r(p: i64, q: i64) -> Alg {
    Alg::from_rational(rat(p, q))
}

fn theta() -> Alg {
    parse_real("(1+sqrt 5)/2").expect("literal")
}

fn fibonacci_group() -> Result<MCRSGroup, String> {
    group_from_matrix(&[vec![0, 1], vec![1, 1]]).map_err(err)
}

fn antisail_group() -> Result<MCRSGroup, String> {
    MCRSGroup::from_int_vectors(&[&[1, 2], &[2, 3]]).map_err(err)
}

fn rotation_group() -> Result<MCRSGroup, String> {
    group_from_matrix(&[vec![0, -1], vec![1, 0]]).map_err(err)
}

fn cross_group() -> Result<MCRSGroup, String> {
    MCRSGroup::from_int_vectors(&[&[1, 2], &[1, -2]]).map_err(err)
}

/// `A[m/n]`: lines `x = 0` and `y = (m/n)x`.
fn slope_group(m: i64, n: i64) -> Result<MCRSGroup, String> {
    MCRSGroup::from_int_vectors(&[&[0, 1], &[n, m]]).map_err(err)
}

fn op(name: &str) -> Result<[[i64; 3]; 3], String> {
    named_operator(name).ok_or_else(|| format!("unknown operator {name}"))
}

fn cand(v: [i64; 3]) -> String {
    format!("({},{},{})", v[0], v[1], v[2])
}

fn size3(v: &[i64; 3]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

fn bound(p: &CheckParams, default: i64) -> i64 {
    p.n.unwrap_or(default)
}

// ---------------------------------------------------------------------------
// Check bodies

fn dominant_ball(name: &str) -> Result<Computed, String> {
    let poly = char_poly(&op(name)?);
    let roots = NumberField::real_roots(poly).map_err(err)?;
    let xi = roots.last().ok_or("no real root")?.generator();
    let b = ball_refine(&BallReal::from_alg(&xi, 8), 40);
    let v = ball_decimal(&b, 10).ok_or("ball straddles a rounding boundary")?;
    Ok(Computed::new(v, true))
}

fn xi_b(_: &CheckParams) -> Result<Computed, String> {
    dominant_ball("B").map(|c| Computed::equal("1.3247179573", c.value))
}

fn xi_e1(_: &CheckParams) -> Result<Computed, String> {
    dominant_ball("E1").map(|c| Computed::equal("2.2469796037", c.value))
}

fn fibonacci_lines(_: &CheckParams) -> Result<Computed, String> {
    let g = group_from_matrix(&[vec![1, 1], vec![1, 0]]).map_err(err)?;
    let slopes: Vec<Alg> = g.lines().iter().filter_map(|l| l.real_slope()).collect();
    let t = theta();
    let ok = slopes.len() == 2 && slopes.contains(&-&t) && slopes.contains(&t.inv().map_err(err)?);
    let shown: Vec<String> = slopes.iter().map(|s| s.to_string()).collect();
    Ok(Computed::new(shown.join(", "), ok))
}

fn ex2_eigenvectors(_: &CheckParams) -> Result<Computed, String> {
    let g = rotation_group()?;
    if g.lines().iter().any(|l| l.direction()[1].is_zero()) {
        return Err("vertical line".into());
    }
    let ratios: Vec<Cx> = g.lines().iter().map(|l| l.direction()[0].div(&l.direction()[1])).collect();
    let i = Cx::i();
    let ok = ratios.len() == 2 && ratios.contains(&i) && ratios.contains(&i.conj());
    let shown: Vec<String> = ratios.iter().map(|z| format!("({z},1)")).collect();
    Ok(Computed::new(shown.join(", "), ok))
}

fn real_form(cs: &[Alg]) -> MDForm {
    MDForm::new(2, cs.iter().map(|c| Cx::real(c.clone())).collect())
}

fn form_check(form: MDForm, want: MDForm) -> Computed {
    let ok = form.eq_up_to_sign(&want);
    Computed::new(form.canonical().to_string(), ok)
}

fn form_fibonacci(_: &CheckParams) -> Result<Computed, String> {
    let g = group_from_matrix(&[vec![1, 1], vec![1, 0]]).map_err(err)?;
    let s = parse_real("sqrt 5").map_err(err)?.inv().map_err(err)?;
    Ok(form_check(md_form(&g).map_err(err)?, real_form(&[-&s, s.clone(), s])))
}

fn form_cross(_: &CheckParams) -> Result<Computed, String> {
    Ok(form_check(md_form(&cross_group()?).map_err(err)?, real_form(&[r(-1, 1), r(0, 1), r(1, 4)])))
}

fn form_rotation(_: &CheckParams) -> Result<Computed, String> {
    let h = Cx::new(Alg::zero(), r(1, 2));
    Ok(form_check(md_form(&rotation_group()?).map_err(err)?, MDForm::new(2, vec![h.clone(), Cx::zero(), h])))
}

/// Monomial order x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³.
fn cubic(cs: [(i64, i64); 10]) -> MDForm {
    MDForm::new(3, cs.iter().map(|&(p, q)| Cx::new(Alg::zero(), r(p, q))).collect())
}

fn form3(a: i64, b: i64, c: i64, want: MDForm) -> Result<Computed, String> {
    let f = md_form_simul3(&Alg::from_int(a), &Alg::from_int(b), &Alg::from_int(c)).map_err(err)?;
    Ok(form_check(f, want))
}

fn form3_100(_: &CheckParams) -> Result<Computed, String> {
    let z = (0, 1);
    form3(1, 0, 0, cubic([z, z, z, (-1, 2), z, (-1, 2), z, z, z, z]))
}

fn form3_111(_: &CheckParams) -> Result<Computed, String> {
    let z = (0, 1);
    form3(1, 1, 1, cubic([(-1, 1), (1, 1), (1, 1), (-1, 2), z, (-1, 2), z, z, z, z]))
}

fn size_examples(_: &CheckParams) -> Result<Computed, String> {
    let s: Vec<String> = [rotation_group()?, cross_group()?]
        .iter()
        .map(|g| size(g).map(|s| s.to_string()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    Ok(Computed::equal("1, 2", s.join(", ")))
}

fn size_slope(_: &CheckParams) -> Result<Computed, String> {
    let s: Vec<String> = [(0, 1), (1, 1), (2, 5), (3, 7), (8, 13)]
        .iter()
        .map(|&(m, n)| slope_group(m, n).and_then(|g| size(&g).map(|s| s.to_string()).map_err(err)))
        .collect::<Result<_, _>>()?;
    Ok(Computed::equal("1, 1, 5, 7, 13", s.join(", ")))
}

fn discrepancy_slopes(_: &CheckParams) -> Result<Computed, String> {
    let pairs = [((1, 3), (1, 2)), ((1, 1), (2, 5)), ((3, 7), (3, 7)), ((1, 9), (5, 7))];
    let mut shown = Vec::new();
    let mut ok = true;
    for ((m1, n1), (m2, n2)) in pairs {
        let d = discrepancy(&slope_group(m1, n1)?, &slope_group(m2, n2)?).map_err(err)?;
        let want = (r(m1, n1) - r(m2, n2)).abs();
        ok &= d.squared == want.square();
        shown.push(d.exact.map_or_else(|| format!("√({})", d.squared), |e| e.to_string()));
    }
    Ok(Computed::new(shown.join(", "), ok))
}

fn discrepancy_antisail(_: &CheckParams) -> Result<Computed, String> {
    let b = MCRSGroup::from_int_vectors(&[&[1, 0], &[1, 1]]).map_err(err)?;
    let d = discrepancy(&antisail_group()?, &b).map_err(err)?;
    let shown = d.squared.as_rational().map_or_else(|| d.squared.to_string(), |v| sqrt_rational(&v));
    Ok(Computed::equal("6", shown))
}

fn discrepancy_ex2(_: &CheckParams) -> Result<Computed, String> {
    let d = discrepancy(&rotation_group()?, &cross_group()?).map_err(err)?;
    let v = d.squared.as_rational().ok_or("irrational squared discrepancy")?;
    Ok(Computed::equal("√3/2", sqrt_rational(&v)))
}

fn antisail_sail(_: &CheckParams) -> Result<Computed, String> {
    let cone = Cone2::from_points((1, 2), (2, 3)).map_err(err)?;
    let s = sail(&cone, 10).map_err(err)?;
    Ok(Computed::equal("(1,2) (2,3)", points(s.vertices)))
}

fn antisail_cf(_: &CheckParams) -> Result<Computed, String> {
    let sails = geometric_cf(&antisail_group()?, 1, 10).map_err(err)?;
    Ok(Computed::equal("(-2,-3) (-1,-2) (1,2) (2,3)", points(sails.into_iter().flat_map(|s| s.vertices))))
}

/// The Fibonacci slopes and the scale factors of the worked example at `N = 100`.
struct Worked {
    a1: Alg,
    a2: Alg,
    n2: Alg,
}

fn worked() -> Result<Worked, String> {
    let t = theta();
    Ok(Worked { a2: -t.inv().map_err(err)?, a1: t, n2: Alg::from_int(10_000) })
}

fn worked_eps(_: &CheckParams) -> Result<Computed, String> {
    let w = worked()?;
    // ε₂ = 1/(55·89), rescaled from N = 89 to the N² scale by (89/55)³
    let c2 = eps_bound_from_delta(&w.a1, &w.a2, &rat(1, 4895)).map_err(err)?
        * Alg::from_int(4895)
        * Alg::from_rational(rat(89 * 89 * 89, 55 * 55 * 55));
    Ok(Computed::equal("3.79", two_decimals(&c2)))
}

fn worked_delta(_: &CheckParams) -> Result<Computed, String> {
    let w = worked()?;
    let eps1 = rat(379, 100) / BigRational::from_integer(10_000.into());
    let (d1, d2) = delta_bound_from_eps(&w.a1, &w.a2, &eps1).map_err(err)?;
    Ok(Computed::equal("80.35, 18.97", format!("{}, {}", two_decimals(&(&d1 * &w.n2)), two_decimals(&(&d2 * &w.n2)))))
}

fn worked_phi(side: Side, scaled: (i64, i64)) -> Result<String, String> {
    let w = worked()?;
    let eps3 = r(scaled.0, scaled.1) / &w.n2;
    let f = phi_over_q2_bound(&w.a1, &w.a2, &eps3, side).map_err(err)?;
    Ok(two_decimals(&(f * r(scaled.0, scaled.1))))
}

fn worked_phi_1(_: &CheckParams) -> Result<Computed, String> {
    Ok(Computed::equal("80.65", worked_phi(Side::First, (8035, 100))?))
}

fn worked_phi_2(_: &CheckParams) -> Result<Computed, String> {
    Ok(Computed::equal("18.99", worked_phi(Side::Second, (1897, 100))?))
}

fn antisail(_: &CheckParams) -> Result<Computed, String> {
    let res = best_approx(&ApproxQuery::new(antisail_group()?, 1).map_err(err)?).map_err(err)?;
    let expected: Vec<Candidate> = [((0, 1), (1, 0)), ((0, 1), (1, 1)), ((1, -1), (1, 0)), ((1, 0), (1, 1))]
        .iter()
        .filter_map(|&(v, w)| Candidate::real(v, w))
        .collect();
    let rho = res.rho.squared.as_rational().map_or_else(|| res.rho.squared.to_string(), |v| sqrt_rational(&v));
    let ok = res.minimizers == expected && res.rho.squared == Alg::from_int(36);
    let mut c = Computed::new(format!("{} minimizers, rho={rho}", res.minimizers.len()), ok);
    c.details = res.minimizers.iter().map(|m| m.to_string()).collect();
    Ok(c)
}

fn fibonacci_1e6(_: &CheckParams) -> Result<Computed, String> {
    let res = best_approx(&ApproxQuery::new(fibonacci_group()?, 1_000_000).map_err(err)?).map_err(err)?;
    let want = Candidate::real((514229, 832040), (832040, -514229)).ok_or("bad candidate")?;
    let shown: Vec<String> = res.minimizers.iter().map(|m| m.to_string()).collect();
    Ok(Computed::new(shown.join("; "), res.minimizers == vec![want]))
}

fn lagrange_fibonacci(_: &CheckParams) -> Result<Computed, String> {
    let rep = lagrange_sweep(&fibonacci_group()?, &[10, 100, 1000, 10_000]).map_err(err)?;
    let Some((lo, hi)) = rep.window else {
        return Ok(Computed::new("degenerate", false));
    };
    let mut c = Computed::new(format!("[{lo:.4}, {hi:.4}]"), lo > 0.0 && hi / lo < 1e3);
    c.details =
        rep.records.iter().map(|r| format!("N={} rho={:.6e} rho*N^2={:.6}", r.n, r.rho.to_f64(), r.scaled)).collect();
    Ok(c)
}

fn antisail_levels(_: &CheckParams) -> Result<Computed, String> {
    let res = best_approx(&ApproxQuery::new(antisail_group()?, 1).map_err(err)?).map_err(err)?;
    let levels = sail_level_of_result(&res).map_err(err)?;
    let ok = levels.len() == 4 && levels.iter().all(|(_, l)| l.iter().all(|&k| k > 1));
    let shown: Vec<String> = levels.iter().map(|(_, l)| format!("[{},{}]", l[0], l[1])).collect();
    Ok(Computed::new(shown.join(" "), ok))
}

fn simul_example(_: &CheckParams) -> Result<Computed, String> {
    let t = SimulTarget::new(&Alg::one(), &Alg::zero(), &Alg::zero()).map_err(err)?;
    let d = discrepancy3(&t, &SimulCandidate::new([1, 0, 1]).map_err(err)?);
    let v = d.squared.as_rational().ok_or("irrational")?;
    Ok(Computed::equal("1", sqrt_rational(&v)))
}

fn b_target() -> Result<SimulTarget, String> {
    SimulTarget::from_operator(&op("B")?).map_err(err)
}

fn e1_target() -> Result<SimulTarget, String> {
    SimulTarget::from_operator(&op("E1")?).map_err(err)
}

fn b_power_4(_: &CheckParams) -> Result<Computed, String> {
    let v = mat_vec(&mat_pow(&op("B")?, 4).ok_or("overflow")?, [1, 0, 0]).ok_or("overflow")?;
    let first = simul_records(&b_target()?, 1).map_err(err)?;
    let ok = first.len() == 1 && first[0].candidate.0 == v;
    Ok(Computed::new(cand(v), ok && v == [1, 1, 1]))
}

fn b_sequence(p: &CheckParams) -> Result<Computed, String> {
    let n = bound(p, 10_000);
    let got: Vec<[i64; 3]> = simul_records(&b_target()?, n).map_err(err)?.iter().map(|r| r.candidate.0).collect();
    let claim: Vec<[i64; 3]> = b_claim().into_iter().map(|c| c.1).filter(|v| size3(v) <= n).collect();
    let ok = got == claim;
    let mut c = Computed::new(
        if ok { "prefix of B^n(1,0,0)".to_string() } else { format!("{} records, {} claimed", got.len(), claim.len()) },
        ok,
    );
    c.details = got.iter().map(|v| cand(*v)).collect();
    Ok(c)
}

fn table_details(rep: &crate::approx3d::TableReport) -> Vec<String> {
    rep.to_csv().lines().map(String::from).collect()
}

fn b_claim_48(p: &CheckParams) -> Result<Computed, String> {
    let n = bound(p, 1_000_000);
    let b = op("B")?;
    let rows: Vec<[i64; 3]> = b_claim().into_iter().map(|c| c.1).filter(|v| size3(v) <= n).collect();
    let rep = verify_table(&b_target()?, Some(&OrbitFamily::powers(b, (0, 60))), n, &rows);
    let confirmed = rep.rows.iter().filter(|r| r.verdict == Verdict::Confirmed).count();
    // the claimed list stops at n = 52 because B⁵³(1,0,0) leaves the box
    let next = mat_vec(&mat_pow(&b, 53).ok_or("overflow")?, [1, 0, 0]).ok_or("overflow")?;
    let ok = rep.all_confirmed() && (n != 1_000_000 || (rows.len() == 48 && size3(&next) > n));
    let mut c = Computed::new(confirmed_count(confirmed, n), ok);
    c.details = table_details(&rep);
    Ok(c)
}

/// Row counts are only comparable with the reference at the full bound.
fn confirmed_count(confirmed: usize, n: i64) -> String {
    if n == 1_000_000 {
        format!("{confirmed} confirmed")
    } else {
        format!("{confirmed} confirmed (rows up to N = {n})")
    }
}

fn b_gap_5(_: &CheckParams) -> Result<Computed, String> {
    let v = mat_vec(&mat_pow(&op("B")?, 5).ok_or("overflow")?, [1, 0, 0]).ok_or("overflow")?;
    let (_, verdict) = verify_row(&b_target()?, &SimulCandidate::new(v).map_err(err)?);
    let ok = matches!(verdict, Verdict::Refuted(_));
    let mut c = Computed::new(if ok { "refuted" } else { "confirmed" }, ok);
    c.details = vec![format!("{}: {verdict}", cand(v))];
    Ok(c)
}

fn e1e2_first(_: &CheckParams) -> Result<Computed, String> {
    let v = e1_family().apply(&[1, 1]).ok_or("overflow")?;
    let (_, verdict) = verify_row(&e1_target()?, &SimulCandidate::new(v).map_err(err)?);
    Ok(Computed::equal("(1,1,0) confirmed", format!("{} {verdict}", cand(v))))
}

fn a3_best(_: &CheckParams) -> Result<Computed, String> {
    let (_, verdict) = verify_row(&e1_target()?, &SimulCandidate::new([3, 2, 1]).map_err(err)?);
    Ok(Computed::equal("confirmed", verdict.to_string()))
}

fn golden3d_prefix(p: &CheckParams) -> Result<Computed, String> {
    let n = bound(p, 1000);
    let got: Vec<[i64; 3]> = best_simul(&e1_target()?, n).map_err(err)?.records.iter().map(|r| r.candidate.0).collect();
    let claim: Vec<[i64; 3]> = e1_claim().into_iter().map(|c| c.1).filter(|v| size3(v) <= n).collect();
    let ok = got == claim;
    let mut c = Computed::new(
        if ok {
            "table rows and (3,2,1)".to_string()
        } else {
            format!("{} records, {} claimed", got.len(), claim.len())
        },
        ok,
    );
    c.details = got.iter().map(|v| cand(*v)).collect();
    Ok(c)
}

fn golden3d_table(p: &CheckParams) -> Result<Computed, String> {
    let n = bound(p, 1_000_000);
    let rows: Vec<[i64; 3]> = e1_claim().into_iter().map(|c| c.1).filter(|v| size3(v) <= n).collect();
    let rep = verify_table(&e1_target()?, Some(&e1_family()), n, &rows);
    let confirmed = rep.rows.iter().filter(|r| r.verdict == Verdict::Confirmed).count();
    let ok = rep.all_confirmed() && (n != 1_000_000 || rows.len() == 41);
    let mut c = Computed::new(confirmed_count(confirmed, n), ok);
    c.details = table_details(&rep);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_in_lowest_terms() {
        let s = |p, q| sqrt_rational(&rat(p, q));
        assert_eq!(s(5, 4), "√5/2");
        assert_eq!(s(3, 4), "√3/2");
        assert_eq!(s(36, 1), "6");
        assert_eq!(s(1, 36), "1/6");
        assert_eq!(s(8, 1), "2√2");
        assert_eq!(s(1, 2), "√2/2");
    }

    #[test]
    fn ids_are_unique() {
        let ids: BTreeSet<&str> = checks().iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), checks().len());
    }
}
