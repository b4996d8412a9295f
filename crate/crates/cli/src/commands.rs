use crate::input;
use crate::{CliError, Format, RunConfig, Target2d, Target3d};
use mcrs::approx2d::{best_approx, brute_force_best, sail_level_of_result, ApproxError, ApproxQuery, ApproxResult};
use mcrs::approx3d::{
    b_claim, best_simul, e1_claim, e1_family, named_operator, rate_probe, verify_table as verify_rows, Approx3Error,
    Matrix3, OrbitFamily, SimulTarget,
};
use mcrs::cf::{best_dioph_in_box, cf_ball, cf_expand as expand, convergents_of, CfError, CfKind};
use mcrs::json::{decimal, SCHEMA};
use mcrs::mcrs::{group_from_matrix, DiscrepancyValue, EigenLine, MCRSGroup, McrsError};
use mcrs::numeric::{BallReal, Cx, NumericError};
use mcrs::regression::{checks, report_json, run_checks, CheckParams, CheckVerdict};
use mcrs::sails2d::{cones, geometric_cf, k_sail, sail_period, Cone2, SailError, SailPolyline};
use serde_json::{json, Value};
use std::fmt::Write;

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::Undecidable(_) => CliError::Precision(e.to_string()),
            NumericError::Parse(m) => CliError::Parse(m),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<CfError> for CliError {
    fn from(e: CfError) -> Self {
        match e {
            CfError::UndecidableDigit { .. } => CliError::Precision(e.to_string()),
            CfError::Numeric(n) => n.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_errors!(McrsError, SailError, ApproxError);

impl From<Approx3Error> for CliError {
    fn from(e: Approx3Error) -> Self {
        match e {
            Approx3Error::Numeric(n) => n.into(),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

// ---------------------------------------------------------------------------
// cf

pub fn cf_expand(cfg: &RunConfig, value: &str, max_terms: usize, ball: bool) -> Result<String, CliError> {
    let x = input::real(value)?;
    let cf = if ball {
        cf_ball(&BallReal::from_alg(&x, cfg.precision_bits), max_terms, cfg.precision_bits)?
    } else {
        expand(&x, max_terms)?
    };
    let terms = cf.take(max_terms);
    let convs = convergents_of(&terms);
    let out = match cfg.format {
        Format::Text => {
            let ts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
            let cs: Vec<String> = convs.iter().map(|c| format!("{}/{}", c.m, c.n)).collect();
            format!("{}\nconvergents: {}\n", ts.join(" "), cs.join(" "))
        }
        Format::Csv => {
            let mut s = "index,term,m,n\n".to_string();
            for (i, (t, c)) in terms.iter().zip(&convs).enumerate() {
                writeln!(s, "{i},{t},{},{}", c.m, c.n).expect("string write");
            }
            s
        }
        Format::Json => {
            let period = match cf.kind {
                CfKind::Periodic { preperiod, period } => json!({ "preperiod": preperiod, "period": period }),
                _ => Value::Null,
            };
            pretty(&json!({
                "schema": SCHEMA,
                "kind": "cf",
                "value": x.to_string(),
                "terms": terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "convergents": convs.iter().map(|c| format!("{}/{}", c.m, c.n)).collect::<Vec<_>>(),
                "periodic": period,
            }))
        }
    };
    Ok(out)
}

pub fn cf_best_in_box(cfg: &RunConfig, value: &str, n: u64) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Domain("N must be at least 1".into()));
    }
    let x = input::real(value)?;
    let b = best_dioph_in_box(&x, n);
    let next = b.next.as_ref().map(|c| format!("{}/{}", c.m, c.n));
    Ok(match cfg.format {
        Format::Text => format!(
            "{}/{}\nerror: {}\nnext: {}\n",
            b.best.m,
            b.best.n,
            decimal(b.error.to_f64()),
            next.unwrap_or_else(|| "none".into())
        ),
        Format::Csv => format!("m,n,error\n{},{},{}\n", b.best.m, b.best.n, decimal(b.error.to_f64())),
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "kind": "best-in-box",
            "value": x.to_string(),
            "N": n,
            "best": format!("{}/{}", b.best.m, b.best.n),
            "error": { "exact": b.error.to_string(), "decimal": decimal(b.error.to_f64()) },
            "next": next,
        })),
    })
}

// ---------------------------------------------------------------------------
// approx

fn group2d(t: &Target2d) -> Result<MCRSGroup, CliError> {
    if let Some(m) = &t.matrix {
        let m = input::operator(m)?;
        if m.len() != 2 {
            return Err(CliError::Domain("a planar target needs a 2x2 matrix".into()));
        }
        return Ok(group_from_matrix(&m)?);
    }
    if let Some(l) = &t.lines {
        let pairs = input::real_pairs(l)?;
        if pairs.len() != 2 {
            return Err(CliError::Domain(format!("expected two eigenvectors, got {}", pairs.len())));
        }
        let lines = pairs
            .into_iter()
            .map(|[a, b]| EigenLine::new(vec![Cx::real(a), Cx::real(b)]))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(MCRSGroup::new(lines)?);
    }
    if let (Some(a1), Some(a2)) = (&t.alpha1, &t.alpha2) {
        return Ok(MCRSGroup::from_slopes(&input::real(a1)?, &input::real(a2)?)?);
    }
    if let Some(p) = &t.pair {
        let parts: Vec<&str> = p.split(',').collect();
        let [re, im] = parts.as_slice() else {
            return Err(CliError::Parse(format!("expected \"re, im\", got {p:?}")));
        };
        let tau = Cx::new(input::real(re)?, input::real(im)?);
        if tau.is_real() {
            return Err(CliError::Domain("the imaginary part must be nonzero".into()));
        }
        let lines = vec![EigenLine::new(vec![Cx::one(), tau.clone()])?, EigenLine::new(vec![Cx::one(), tau.conj()])?];
        return Ok(MCRSGroup::new(lines)?);
    }
    Err(CliError::Parse("give one of --matrix, --lines, --alpha1/--alpha2, --pair".into()))
}

/// `"4 minimizers, rho=6"`; cubic values are shown in decimal.
fn headline(k: usize, rho: &DiscrepancyValue) -> String {
    let exact = rho.exact_string();
    let shown = if exact.contains('x') { format!("≈{}", decimal(rho.to_f64())) } else { format!("={exact}") };
    format!("{k} minimizer{}, rho{shown}\n", if k == 1 { "" } else { "s" })
}

fn approx2d_text(res: &ApproxResult) -> String {
    let mut s = headline(res.minimizers.len(), &res.rho);
    writeln!(s, "N = {}", res.n).expect("string write");
    writeln!(s, "rho ≈ {}", decimal(res.rho.to_f64())).expect("string write");
    for m in &res.minimizers {
        writeln!(s, "  {m}  size {}", m.size()).expect("string write");
    }
    let c = &res.certificate;
    writeln!(
        s,
        "certificate: method {}, {} lines kept, {} candidates, {} exact evaluations",
        c.method, c.lines_kept, c.candidates, c.exact_evaluations
    )
    .expect("string write");
    s
}

pub fn approx2d(cfg: &RunConfig, t: &Target2d, n: i64, oracle: bool) -> Result<String, CliError> {
    let q = ApproxQuery::new(group2d(t)?, n)?;
    let res = best_approx(&q)?;
    let check = if oracle {
        let o = brute_force_best(&q, cfg.oracle_cap)?;
        Some(o.minimizers == res.minimizers && o.rho.squared == res.rho.squared)
    } else {
        None
    };
    let mut out = match cfg.format {
        Format::Text => {
            let mut s = approx2d_text(&res);
            if let Some(ok) = check {
                writeln!(s, "oracle (cap {}): {}", cfg.oracle_cap, if ok { "agrees" } else { "DISAGREES" })
                    .expect("string write");
            }
            s
        }
        Format::Csv => {
            let mut s = "i,v1,v2,size,rho\n".to_string();
            for (i, m) in res.minimizers.iter().enumerate() {
                let [v, w] = m.vectors();
                writeln!(s, "{},\"{v}\",\"{w}\",{},{}", i + 1, m.size(), decimal(res.rho.to_f64()))
                    .expect("string write");
            }
            s
        }
        Format::Json => {
            let mut j = res.to_json();
            if let Some(ok) = check {
                j["oracle"] = json!({ "cap": cfg.oracle_cap, "agrees": ok });
            }
            pretty(&j)
        }
    };
    if check == Some(false) {
        out.push_str("certified search and oracle disagree\n");
        return Err(CliError::Refuted(out));
    }
    Ok(out)
}

fn to_matrix3(m: &[Vec<i64>]) -> Result<Matrix3, CliError> {
    if m.len() != 3 {
        return Err(CliError::Domain("a spatial target needs a 3x3 operator".into()));
    }
    Ok([[m[0][0], m[0][1], m[0][2]], [m[1][0], m[1][1], m[1][2]], [m[2][0], m[2][1], m[2][2]]])
}

fn target3d(t: &Target3d) -> Result<SimulTarget, CliError> {
    if let Some(op) = &t.operator {
        return Ok(SimulTarget::from_operator(&to_matrix3(&input::operator(op)?)?)?);
    }
    if let Some(d) = &t.direction {
        let wrapped = if d.trim_start().starts_with('(') { d.clone() } else { format!("({d})") };
        let parts = input::tuples(&wrapped)?;
        let [a, b, c] = parts[0].as_slice() else {
            return Err(CliError::Parse(format!("expected three coordinates, got {d:?}")));
        };
        return Ok(SimulTarget::new(&input::real(a)?, &input::real(b)?, &input::real(c)?)?);
    }
    Err(CliError::Parse("give --operator or --direction".into()))
}

pub fn approx3d(cfg: &RunConfig, t: &Target3d, n: i64) -> Result<String, CliError> {
    let target = target3d(t)?;
    let res = best_simul(&target, n)?;
    Ok(match cfg.format {
        Format::Text => {
            let mut s = headline(res.minimizers.len(), &res.rho);
            writeln!(s, "N = {n}\nrho ≈ {}", decimal(res.rho.to_f64())).expect("string write");
            for m in &res.minimizers {
                writeln!(s, "  {m}").expect("string write");
            }
            writeln!(s, "best approximations up to N:").expect("string write");
            for r in &res.records {
                writeln!(s, "  {:>8}  {}  {}", r.size(), r.candidate, decimal(r.rho.to_f64())).expect("string write");
            }
            s
        }
        Format::Csv => {
            let mut s = "size,a,b,c,rho\n".to_string();
            for r in &res.records {
                let [a, b, c] = r.candidate.0;
                writeln!(s, "{},{a},{b},{c},{}", r.size(), decimal(r.rho.to_f64())).expect("string write");
            }
            s
        }
        Format::Json => pretty(&res.to_json(&target)),
    })
}

pub fn verify_table(cfg: &RunConfig, operator: &str, n: i64) -> Result<String, CliError> {
    let size = |v: &[i64; 3]| v.iter().map(|x| x.abs()).max().unwrap_or(0);
    let (m, family, rows): (Matrix3, OrbitFamily, Vec<[i64; 3]>) = match operator {
        "B" => {
            let b = named_operator("B").expect("known operator");
            (b, OrbitFamily::powers(b, (0, 60)), b_claim().into_iter().map(|r| r.1).collect())
        }
        "E1" | "golden2d" => (
            named_operator(operator).expect("known operator"),
            e1_family(),
            e1_claim().into_iter().map(|r| r.1).collect(),
        ),
        _ => return Err(CliError::Parse(format!("no reference table for {operator:?} (B, E1, golden2d)"))),
    };
    let rows: Vec<[i64; 3]> = rows.into_iter().filter(|v| size(v) <= n).collect();
    let rep = verify_rows(&SimulTarget::from_operator(&m)?, Some(&family), n, &rows);
    let out = match cfg.format {
        Format::Json => pretty(&rep.to_json()),
        _ => rep.to_csv(),
    };
    if rep.all_confirmed() {
        Ok(out)
    } else {
        Err(CliError::Refuted(out))
    }
}

// ---------------------------------------------------------------------------
// verify-paper

pub fn list_checks() -> String {
    checks().iter().map(|c| format!("{:22} {}\n", c.id, c.description)).collect()
}

pub fn verify_paper(cfg: &RunConfig, only: Option<&str>, n: Option<i64>) -> Result<String, CliError> {
    if n.is_some_and(|n| n < 1) {
        return Err(CliError::Domain("N must be at least 1".into()));
    }
    let outcomes = run_checks(only, &CheckParams { n }).map_err(CliError::Parse)?;
    let refuted = outcomes.iter().filter(|o| o.verdict == CheckVerdict::Refuted).count();
    let diverged = outcomes.iter().filter(|o| o.verdict == CheckVerdict::DocumentedDivergence).count();
    let out = match cfg.format {
        Format::Text => {
            let mut s = String::new();
            for o in &outcomes {
                writeln!(
                    s,
                    "{:<10} {}: {}",
                    o.verdict.to_string().split(' ').next().unwrap_or(""),
                    o.id,
                    o.description
                )
                .expect("string write");
                writeln!(s, "    expected: {}\n    computed: {}\n    verdict:  {}", o.expected, o.computed, o.verdict)
                    .expect("string write");
                if let Some(note) = o.note.filter(|_| o.verdict != CheckVerdict::Confirmed) {
                    writeln!(s, "    note:     {note}").expect("string write");
                }
                for d in &o.details {
                    writeln!(s, "      {d}").expect("string write");
                }
            }
            writeln!(
                s,
                "{} {}: {} confirmed, {diverged} documented divergences, {refuted} refuted",
                outcomes.len(),
                if outcomes.len() == 1 { "check" } else { "checks" },
                outcomes.len() - diverged - refuted
            )
            .expect("string write");
            s
        }
        Format::Csv => {
            let mut s = "id,expected,computed,verdict\n".to_string();
            for o in &outcomes {
                writeln!(s, "{},\"{}\",\"{}\",{}", o.id, o.expected, o.computed, o.verdict).expect("string write");
            }
            s
        }
        Format::Json => {
            let mut j = report_json(&outcomes);
            j["config"] = json!({
                "precision_bits": cfg.precision_bits,
                "oracle_cap": cfg.oracle_cap,
                "tie_epsilon": format!("2^-{}", cfg.tie_epsilon_exp),
            });
            pretty(&j)
        }
    };
    if refuted > 0 {
        Err(CliError::Refuted(out))
    } else {
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// sail

fn sail_block(cfg: &RunConfig, label: &str, s: &SailPolyline) -> String {
    match cfg.format {
        Format::Text => format!("{label}{s}\n"),
        Format::Csv => {
            let mut out = String::new();
            for p in &s.vertices {
                writeln!(out, "{label}{},{},{}", s.level, p.0, p.1).expect("string write");
            }
            out
        }
        Format::Json => String::new(),
    }
}

pub fn sail(cfg: &RunConfig, cone: Option<&str>, matrix: Option<&str>, k: u32, bound: i64) -> Result<String, CliError> {
    if bound < 1 {
        return Err(CliError::Domain("box must be at least 1".into()));
    }
    if let Some(c) = cone {
        let rays = input::real_pairs(c)?;
        let [r1, r2] = rays.as_slice() else {
            return Err(CliError::Parse(format!("expected two rays, got {c:?}")));
        };
        let cone = Cone2::new(r1.clone(), r2.clone())?;
        let s = k_sail(&cone, k, bound)?;
        return Ok(match cfg.format {
            Format::Json => pretty(&json!({ "schema": SCHEMA, "kind": "sail", "sail": s.to_json() })),
            Format::Csv => "level,x,y\n".to_string() + &sail_block(cfg, "", &s),
            Format::Text => sail_block(cfg, "", &s),
        });
    }
    let Some(m) = matrix else {
        return Err(CliError::Parse("give --cone or --matrix".into()));
    };
    let m = input::operator(m)?;
    if m.len() != 2 {
        return Err(CliError::Domain("sails need a 2x2 operator".into()));
    }
    let g = group_from_matrix(&m)?;
    let sails = geometric_cf(&g, k, bound)?;
    let periods: Vec<SailPolyline> = cones(&g)?.iter().map(|c| sail_period(c, &m)).collect::<Result<_, _>>()?;
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "kind": "geometric-cf",
            "k": k,
            "sails": sails.iter().map(SailPolyline::to_json).collect::<Vec<_>>(),
            "periods": periods.iter().map(SailPolyline::to_json).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = "cone,level,x,y\n".to_string();
            for (i, p) in sails.iter().enumerate() {
                s += &sail_block(cfg, &format!("{},", i + 1), p);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (i, (p, per)) in sails.iter().zip(&periods).enumerate() {
                s += &sail_block(cfg, &format!("cone {}: ", i + 1), p);
                let shift = per.periodic_shift.map_or("none".into(), |m| format!("{m:?}"));
                let vs: Vec<String> = per.vertices.iter().map(|v| format!("({}, {})", v.0, v.1)).collect();
                writeln!(s, "cone {}: period {} shift {shift}", i + 1, vs.join(" ")).expect("string write");
            }
            s
        }
    })
}

// ---------------------------------------------------------------------------
// sweeps

fn levels_of(res: &ApproxResult) -> (String, String) {
    match sail_level_of_result(res) {
        Ok(v) if !v.is_empty() => (v[0].1[0].to_string(), v[0].1[1].to_string()),
        _ => ("NA".into(), "NA".into()),
    }
}

pub fn sweep2d(cfg: &RunConfig, t: &Target2d, ns: &[i64]) -> Result<String, CliError> {
    let g = group2d(t)?;
    let mut rows = Vec::new();
    for &n in ns {
        let res = best_approx(&ApproxQuery::new(g.clone(), n)?)?;
        let rho = res.rho.to_f64();
        let (l1, l2) = levels_of(&res);
        rows.push((n, rho, rho * (n as f64).powi(2), l1, l2));
    }
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "kind": "sweep2d",
            "rows": rows.iter().map(|r| json!({
                "N": r.0, "rho": decimal(r.1), "rho_N2": decimal(r.2), "level1": r.3, "level2": r.4,
            })).collect::<Vec<_>>(),
        })),
        f => {
            let sep = if f == Format::Csv { "," } else { " " };
            let mut s = ["N", "rho", "rho_N2", "level1", "level2"].join(sep) + "\n";
            for r in &rows {
                s += &[r.0.to_string(), decimal(r.1), decimal(r.2), r.3.clone(), r.4.clone()].join(sep);
                s.push('\n');
            }
            s
        }
    })
}

pub fn sweep3d(cfg: &RunConfig, t: &Target3d, ns: &[i64]) -> Result<String, CliError> {
    let rows = rate_probe(&target3d(t)?, ns)?;
    Ok(match cfg.format {
        Format::Json => pretty(&json!({
            "schema": SCHEMA,
            "kind": "sweep3d",
            "rows": rows.iter().map(|r| json!({ "N": r.0, "rho": decimal(r.1), "rho_N1.5": decimal(r.2) })).collect::<Vec<_>>(),
        })),
        f => {
            let sep = if f == Format::Csv { "," } else { " " };
            let mut s = ["N", "rho", "rho_N1.5"].join(sep) + "\n";
            for r in &rows {
                s += &[r.0.to_string(), decimal(r.1), decimal(r.2)].join(sep);
                s.push('\n');
            }
            s
        }
    })
}
