//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false`, so the lines print on every `cargo test`.
//! A FAIL whose reason is listed in `KNOWN_DIVERGENCES` is reported but does
//! not fail the run; any other FAIL does.

use mcrs::approx2d::{
    best_approx, best_approx_hyperbolic, brute_force_sweep, lagrange_sweep, ApproxQuery, Candidate, DEFAULT_ORACLE_CAP,
};
use mcrs::approx3d::{
    b_claim, best_simul, e1_claim, e1_family, named_operator, verify_table, OrbitFamily, SimulCandidate, SimulTarget,
    Verdict,
};
use mcrs::mcrs::{group_from_matrix, markoff_minimum, md_form, EigenLine, MCRSGroup};
use mcrs::numeric::{parse_real, Alg, Cx};
use mcrs::regression::{run_checks, CheckParams, CheckVerdict};
use mcrs::sails2d::{cones, k_sail, k_sails, sail, Cone2, Point};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Sub-checks allowed to fail, with the reason printed next to them.
const KNOWN_DIVERGENCES: &[(&str, &str)] =
    &[("worked-phi-1", "first-side form bound recomputes to 80.64 (exactly 80.6387…), reference 80.65")];

struct Outcome {
    pass: bool,
    detail: String,
    /// Sub-check ids that failed.
    failed: Vec<&'static str>,
    /// Deterministic output compared across thread counts.
    json: Value,
}

impl Outcome {
    fn new(failed: Vec<&'static str>, detail: String, json: Value) -> Outcome {
        Outcome { pass: failed.is_empty(), detail, failed, json }
    }
}

fn fibonacci() -> MCRSGroup {
    group_from_matrix(&[vec![0, 1], vec![1, 1]]).unwrap()
}

fn antisail() -> MCRSGroup {
    MCRSGroup::from_int_vectors(&[&[1, 2], &[2, 3]]).unwrap()
}

fn sqrt2_group() -> MCRSGroup {
    let s = parse_real("sqrt 2").unwrap();
    MCRSGroup::from_slopes(&s, &-s.inv().unwrap()).unwrap()
}

/// Lines `y = (α ± Iβ)x` with `α = β = 1/√2`.
fn complex_group() -> MCRSGroup {
    let h = parse_real("sqrt 2").unwrap() / Alg::from_int(2);
    let tau = Cx::new(h.clone(), h);
    MCRSGroup::new(vec![
        EigenLine::new(vec![Cx::one(), tau.clone()]).unwrap(),
        EigenLine::new(vec![Cx::one(), tau.conj()]).unwrap(),
    ])
    .unwrap()
}

fn best(a: &MCRSGroup, n: i64) -> mcrs::approx2d::ApproxResult {
    best_approx(&ApproxQuery::new(a.clone(), n).unwrap()).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn points(vs: &[Point]) -> String {
    vs.iter().map(|(x, y)| format!("({x},{y})")).collect::<Vec<_>>().join(" ")
}

fn criterion1() -> Outcome {
    let q = ApproxQuery::new(antisail(), 1).unwrap();
    let (res, dt) = timed(|| best_approx_hyperbolic(&q).unwrap());
    let expected = vec![
        Candidate::real((0, 1), (1, 0)).unwrap(),
        Candidate::real((0, 1), (1, 1)).unwrap(),
        Candidate::real((1, -1), (1, 0)).unwrap(),
        Candidate::real((1, 0), (1, 1)).unwrap(),
    ];
    let mut failed = Vec::new();
    if res.minimizers != expected || res.rho.squared != Alg::from_int(36) {
        failed.push("antisail-minimizers");
    }
    if dt >= Duration::from_secs(1) {
        failed.push("antisail-time");
    }
    let detail = format!("{} minimizers, rho^2 = {}, {:.3} s", res.minimizers.len(), res.rho.squared, dt.as_secs_f64());
    Outcome::new(failed, detail, res.to_json())
}

fn criterion2() -> Outcome {
    let q = ApproxQuery::new(fibonacci(), 1_000_000).unwrap();
    let (res, dt) = timed(|| best_approx_hyperbolic(&q).unwrap());
    let mut failed = Vec::new();
    if res.minimizers != vec![Candidate::real((514229, 832040), (832040, -514229)).unwrap()] {
        failed.push("fibonacci-1e6");
    }
    if dt >= Duration::from_secs(60) {
        failed.push("fibonacci-time");
    }
    let mut constants = Vec::new();
    for id in ["worked-eps", "worked-delta", "worked-phi-1", "worked-phi-2"] {
        let o = run_checks(Some(id), &CheckParams { n: None }).unwrap().remove(0);
        if o.computed != o.expected {
            failed.push(o.id);
        }
        constants.push(o.computed);
    }
    let detail = format!(
        "minimizer {}, {:.2} s; constants {} (reference 3.79 | 80.35, 18.97 | 80.65 | 18.99)",
        res.minimizers.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
        dt.as_secs_f64(),
        constants.join(" | "),
    );
    Outcome::new(failed, detail, json!({ "result": res.to_json(), "constants": constants }))
}

fn criterion3() -> Outcome {
    let mut failed = Vec::new();
    let mut out = Vec::new();
    let mut compared = 0;
    for (name, target) in
        [("fibonacci", fibonacci()), ("antisail", antisail()), ("sqrt2", sqrt2_group()), ("complex", complex_group())]
    {
        let sweep = brute_force_sweep(&target, 40, DEFAULT_ORACLE_CAP).unwrap();
        let mut ok = sweep.len() == 40;
        for oracle in &sweep {
            let res = best(&target, oracle.n);
            ok &= res.rho.squared == oracle.rho.squared && res.minimizers == oracle.minimizers;
            compared += 1;
            out.push(res.to_json());
        }
        if !ok {
            failed.push(name);
        }
    }
    Outcome::new(failed, format!("{compared} (target, N) pairs against the exhaustive oracle"), Value::Array(out))
}

fn criterion4() -> Outcome {
    let ns = [10, 100, 1000, 10_000];
    let mut failed = Vec::new();
    let mut windows = Vec::new();
    let mut out = Vec::new();
    let (_, dt) = timed(|| {
        for (name, target) in [("fibonacci", fibonacci()), ("complex", complex_group())] {
            let rep = lagrange_sweep(&target, &ns).unwrap();
            match rep.window {
                Some((lo, hi)) if lo > 0.0 && hi / lo < 1e3 => windows.push(format!("{name} [{lo:.3}, {hi:.3}]")),
                w => {
                    failed.push(name);
                    windows.push(format!("{name} {w:?}"));
                }
            }
            out.push(rep.to_json());
        }
    });
    if dt >= Duration::from_secs(300) {
        failed.push("lagrange-time");
    }
    Outcome::new(
        failed,
        format!("rho_N N^2 windows {}, {:.2} s", windows.join(", "), dt.as_secs_f64()),
        Value::Array(out),
    )
}

fn scaled(vs: &[Point], k: i64) -> Vec<Point> {
    vs.iter().map(|&(x, y)| (k * x, k * y)).collect()
}

/// Twenty rational cones drawn from a fixed seed.
fn random_cones() -> Vec<Cone2> {
    let v = (-12i64..=12, -12i64..=12).prop_filter("nonzero", |p| *p != (0, 0));
    let strategy = (v.clone(), v)
        .prop_filter("independent", |(a, b)| a.0 * b.1 != a.1 * b.0)
        .prop_map(|(a, b)| Cone2::from_points(a, b).unwrap());
    let mut runner = TestRunner::deterministic();
    (0..20).map(|_| strategy.new_tree(&mut runner).unwrap().current()).collect()
}

fn criterion5() -> Outcome {
    let mut failed = Vec::new();
    let mut out = Vec::new();

    let mut homothetic = true;
    for c in random_cones() {
        let one = sail(&c, 12).unwrap().vertices;
        for k in 2..=5i64 {
            homothetic &= k_sail(&c, k as u32, 12 * k + 12).unwrap().vertices == scaled(&one, k);
        }
        out.push(json!(points(&one)));
    }
    // The Fibonacci sails are infinite; compare away from the box edge.
    let t = parse_real("(1+sqrt 5)/2").unwrap();
    let cone = Cone2::new([Alg::one(), Alg::one() - &t], [Alg::one(), t]).unwrap();
    let one = sail(&cone, 1000).unwrap().vertices;
    let window = |vs: Vec<Point>| vs.into_iter().filter(|&(x, y)| x.abs().max(y.abs()) <= 150).collect::<Vec<_>>();
    for (k, s) in (1..).zip(k_sails(&cone, 5, 1000).unwrap()) {
        let expect = window(scaled(&one, k));
        homothetic &= expect.len() >= 6 && window(s.vertices) == expect;
    }
    if !homothetic {
        failed.push("homothety");
    }

    // Rows of [[1,1],[1,0]]: its form is a multiple of x² − xy − y².
    let a = group_from_matrix(&[vec![1, 1], vec![1, 0]]).unwrap();
    let alpha = markoff_minimum(&a).unwrap();
    let phi = md_form(&a).unwrap();
    let mut vertices = 0;
    let mut bounded = true;
    for c in cones(&a).unwrap() {
        for s in k_sails(&c, 5, 1000).unwrap() {
            let bound = Alg::from_int(s.level as i64) * &alpha;
            for p in s.lattice_points() {
                vertices += 1;
                bounded &= phi.eval_int(&[p.0, p.1]).re.abs() >= bound;
            }
            out.push(json!(points(&s.vertices)));
        }
    }
    if !bounded {
        failed.push("k-cf-bound");
    }

    let mut least = (i64::MAX, (0, 0));
    for x in -1000i64..=1000 {
        for y in -1000i64..=1000 {
            let q = (x * x - x * y - y * y).abs();
            if (x, y) != (0, 0) && q < least.0 {
                least = (q, (x, y));
            }
        }
    }
    let p = least.1;
    let brute = phi.eval_int(&[p.0, p.1]).re.abs();
    if alpha != parse_real("1/sqrt 5").unwrap() || brute != alpha {
        failed.push("markoff-minimum");
    }
    let detail = format!("21 cones, k <= 5; {vertices} k-CF points checked; alpha = {alpha}, brute force {brute}");
    Outcome::new(failed, detail, Value::Array(out))
}

fn size(v: &[i64; 3]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap()
}

fn vectors(r: &mcrs::approx3d::SimulResult) -> Vec<[i64; 3]> {
    r.records.iter().map(|r| r.candidate.0).collect()
}

fn criterion6() -> Outcome {
    let b = named_operator("B").unwrap();
    let t = SimulTarget::from_operator(&b).unwrap();
    let mut failed = Vec::new();
    let (res, dt_search) = timed(|| best_simul(&t, 10_000).unwrap());
    let prefix: Vec<[i64; 3]> = b_claim().into_iter().map(|c| c.1).filter(|v| size(v) <= 10_000).collect();
    if vectors(&res) != prefix {
        failed.push("b-prefix");
    }
    let mut rows: Vec<[i64; 3]> = b_claim().into_iter().map(|c| c.1).collect();
    rows.push([2, 1, 1]);
    let family = OrbitFamily::powers(b, (0, 60));
    let (rep, dt_verify) = timed(|| verify_table(&t, Some(&family), 1_000_000, &rows));
    let confirmed = rep.rows[..48].iter().filter(|r| r.verdict == Verdict::Confirmed).count();
    if confirmed != 48 {
        failed.push("b-claim-48");
    }
    let gap = &rep.rows[48].verdict;
    if !matches!(gap, Verdict::Refuted(_)) {
        failed.push("b-gap-5");
    }
    if dt_search + dt_verify >= Duration::from_secs(1800) {
        failed.push("b-time");
    }
    let detail = format!(
        "{} records up to 10^4 match the powers; {confirmed}/48 confirmed at 10^6; B^5(1,0,0) = (2,1,1) {gap}; {:.2} s",
        res.records.len(),
        (dt_search + dt_verify).as_secs_f64(),
    );
    Outcome::new(failed, detail, json!({ "search": res.to_json(&t), "table": rep.to_json() }))
}

fn criterion7() -> Outcome {
    let e1 = named_operator("E1").unwrap();
    let t = SimulTarget::from_operator(&e1).unwrap();
    let mut failed = Vec::new();
    let (res, dt_search) = timed(|| best_simul(&t, 1000).unwrap());
    let prefix: Vec<[i64; 3]> = e1_claim().into_iter().map(|c| c.1).filter(|v| size(v) <= 1000).collect();
    if vectors(&res) != prefix || !prefix.contains(&[3, 2, 1]) {
        failed.push("e1-prefix");
    }
    let rows: Vec<[i64; 3]> = e1_claim().into_iter().map(|c| c.1).collect();
    let (rep, dt_verify) = timed(|| verify_table(&t, Some(&e1_family()), 1_000_000, &rows));
    if rows.len() != 41 || !rep.all_confirmed() {
        failed.push("e1-table");
    }
    if dt_verify >= Duration::from_secs(1800) {
        failed.push("e1-time");
    }
    let minimizer = res.minimizers.iter().map(SimulCandidate::to_string).collect::<Vec<_>>().join(" ");
    let detail = format!(
        "{} records up to 10^3 (last {minimizer}); {}/41 rows confirmed at 10^6; {:.2} s",
        res.records.len(),
        rep.rows.iter().filter(|r| r.verdict == Verdict::Confirmed).count(),
        (dt_search + dt_verify).as_secs_f64(),
    );
    Outcome::new(failed, detail, json!({ "search": res.to_json(&t), "table": rep.to_json() }))
}

fn criterion8() -> Outcome {
    let o = run_checks(Some("discrepancy-ex2"), &CheckParams { n: None }).unwrap().remove(0);
    let ok = o.verdict == CheckVerdict::DocumentedDivergence && o.computed == "√5/2" && o.expected == "√3/2";
    let detail = format!("expected {}, computed {}, verdict {}", o.expected, o.computed, o.verdict);
    Outcome::new(if ok { vec![] } else { vec!["discrepancy-ex2"] }, detail, o.to_json())
}

type Criterion = fn() -> Outcome;

const CRITERIA: [(&str, Criterion); 8] = [
    ("antisail reproduction", criterion1),
    ("Fibonacci at N = 10^6 and worked bounds", criterion2),
    ("oracle equivalence for N <= 40", criterion3),
    ("Lagrange window", criterion4),
    ("sails: homothety, k-CF bound, Markoff minimum", criterion5),
    ("B-operator sequence", criterion6),
    ("E1 table", criterion7),
    ("documented discrepancy divergence", criterion8),
];

fn report(i: usize, name: &str, o: &Outcome) -> bool {
    let known: Vec<&str> =
        o.failed.iter().filter_map(|id| KNOWN_DIVERGENCES.iter().find(|k| k.0 == *id).map(|k| k.1)).collect();
    let status = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {i}: {status} {name}: {}", o.detail);
    for reason in &known {
        println!("    known divergence: {reason}");
    }
    o.pass || known.len() == o.failed.len()
}

fn main() -> ExitCode {
    let mut ok = true;
    let mut reference = Vec::new();
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let o = run();
        ok &= report(i + 1, name, &o);
        if i < 7 {
            reference.push(o.json);
        }
    }

    let reference = serde_json::to_string(&reference).unwrap();
    let mut mismatched = Vec::new();
    for threads in [1, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let out: Vec<Value> = pool.install(|| CRITERIA[..7].iter().map(|(_, run)| run().json).collect());
        if serde_json::to_string(&out).unwrap() != reference {
            mismatched.push(threads);
        }
    }
    let o = Outcome::new(
        if mismatched.is_empty() { vec![] } else { vec!["determinism"] },
        format!("criteria 1-7 JSON under 1, 4, 8 threads: {} bytes, mismatched {mismatched:?}", reference.len()),
        Value::Null,
    );
    ok &= report(9, "determinism", &o);

    if ok {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures");
        ExitCode::FAILURE
    }
}
