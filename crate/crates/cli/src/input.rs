//! Text syntax for targets: exact reals, point tuples and integer matrices.

use crate::CliError;
use mcrs::approx3d::named_operator;
use mcrs::numeric::{parse_real, Alg, NumericError};

pub fn real(s: &str) -> Result<Alg, CliError> {
    parse_real(s).map_err(|e| match e {
        NumericError::Parse(m) => CliError::Parse(m),
        e => CliError::Parse(format!("{s:?}: {e}")),
    })
}

/// `"(1,2) (2,3)"` into component strings, respecting nested parentheses.
pub fn tuples(s: &str) -> Result<Vec<Vec<String>>, CliError> {
    let bad = || CliError::Parse(format!("expected tuples like \"(1,2) (2,3)\", got {s:?}"));
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur: Vec<String> = Vec::new();
    let mut item = String::new();
    for ch in s.chars() {
        match ch {
            '(' if depth == 0 => {
                depth = 1;
                cur.clear();
                item.clear();
            }
            '(' => {
                depth += 1;
                item.push(ch);
            }
            ')' if depth == 1 => {
                depth = 0;
                cur.push(item.trim().to_string());
                out.push(std::mem::take(&mut cur));
            }
            ')' if depth > 1 => {
                depth -= 1;
                item.push(ch);
            }
            ')' => return Err(bad()),
            ',' if depth == 1 => cur.push(std::mem::take(&mut item).trim().to_string()),
            c if depth == 0 && !c.is_whitespace() && c != ',' => return Err(bad()),
            c if depth > 0 => item.push(c),
            _ => {}
        }
    }
    if depth != 0 || out.is_empty() || out.iter().flatten().any(|c| c.is_empty()) {
        return Err(bad());
    }
    Ok(out)
}

pub fn real_pairs(s: &str) -> Result<Vec<[Alg; 2]>, CliError> {
    tuples(s)?
        .iter()
        .map(|t| match t.as_slice() {
            [a, b] => Ok([real(a)?, real(b)?]),
            _ => Err(CliError::Parse(format!("expected pairs, got {s:?}"))),
        })
        .collect()
}

pub fn integers(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| CliError::Parse(format!("not an integer: {t:?}"))))
        .collect()
}

/// Row-major square matrix of size 2 or 3.
pub fn matrix(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let xs = integers(s)?;
    let n = match xs.len() {
        4 => 2,
        9 => 3,
        k => return Err(CliError::Parse(format!("matrix needs 4 or 9 entries, got {k}"))),
    };
    Ok(xs.chunks(n).map(<[i64]>::to_vec).collect())
}

/// A named operator or a matrix literal; `fibonacci` is the 2x2 `[[1,1],[1,0]]`.
pub fn operator(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    if s == "fibonacci" {
        return Ok(vec![vec![1, 1], vec![1, 0]]);
    }
    match named_operator(s) {
        Some(m) => Ok(m.iter().map(|r| r.to_vec()).collect()),
        None if s.chars().any(|c| c.is_ascii_digit()) => matrix(s),
        None => Err(CliError::Parse(format!("unknown operator {s:?} (fibonacci, B, golden2d, E1, E2)"))),
    }
}

/// `"10,100,1000"` or `"10 100"`, each at least 1.
pub fn sizes(s: &str) -> Result<Vec<i64>, CliError> {
    let xs = integers(s)?;
    if xs.is_empty() || xs.iter().any(|&x| x < 1) {
        return Err(CliError::Parse(format!("expected positive sizes, got {s:?}")));
    }
    Ok(xs)
}
