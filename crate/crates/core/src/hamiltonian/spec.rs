use std::path::Path;
use std::sync::Arc;

use super::{family_corollary_b83, family_example_b6, hamiltonian_from_jacobi, B83Variant, HamburgerHamiltonian, JacobiParameters};
use crate::error::{Error, Result};
use crate::regvar::{parse_num, ComparisonFunction, PowerLog};

/// Splits `name(a, b, ...)` into the name and its top-level arguments.
pub(crate) fn split_call(src: &str) -> Result<(String, Vec<String>)> {
    let src = src.trim();
    let open = src.find('(').ok_or_else(|| Error::Parse(format!("expected name(...), got '{src}'")))?;
    if !src.ends_with(')') {
        return Err(Error::Parse(format!("unbalanced parentheses in '{src}'")));
    }
    let name = src[..open].trim().to_string();
    let inner = &src[open + 1..src.len() - 1];
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in '{src}'")));
                }
                cur.push(ch);
            }
            ',' if depth == 0 => {
                args.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in '{src}'")));
    }
    if !cur.trim().is_empty() || !args.is_empty() {
        args.push(cur.trim().to_string());
    }
    Ok((name, args))
}

fn nums(args: &[String], n: usize, what: &str) -> Result<Vec<f64>> {
    if args.len() != n {
        return Err(Error::Parse(format!("{what} expects {n} arguments, got {}", args.len())));
    }
    args.iter().map(|a| parse_num(a)).collect()
}

fn resolve(raw: &str, base: Option<&Path>) -> std::path::PathBuf {
    match base {
        Some(b) if Path::new(raw).is_relative() => b.join(raw),
        _ => Path::new(raw).to_path_buf(),
    }
}

/// Parses a family specification:
/// `example_b6(alpha, beta)`, `b83(omega, c, a, b)` with `g⁻ = c·t^a(log t)^b`,
/// `b83(seq, p, count, c, a, b)` with `ω_n = n^{-p}`, `explicit(path.csv)`
/// (columns `j, l_j, phi_j`) and `jacobi(path.csv)` (columns `n, a_n, b_n`).
pub fn parse_family(src: &str, base: Option<&Path>) -> Result<HamburgerHamiltonian> {
    let (name, args) = split_call(src)?;
    match name.as_str() {
        "example_b6" => {
            let v = nums(&args, 2, "example_b6")?;
            Ok(family_example_b6(v[0], v[1])?.hamiltonian)
        }
        "b83" => {
            if args.first().map(|s| s.as_str()) == Some("seq") {
                let v = nums(&args[1..], 5, "b83(seq, ...)")?;
                let p = v[0];
                if !(p > 0.0) {
                    return Err(Error::Validation("b83 sequence exponent must be positive".into()));
                }
                let g = ComparisonFunction::powerlog(PowerLog::new(v[2], v[3], v[4])?);
                let omega = Arc::new(move |n: usize| (n as f64).powf(-p));
                let variant = B83Variant::Sequence { omega, gamma: 1.0, count: v[1] as usize };
                family_corollary_b83(&g, variant)
            } else {
                let v = nums(&args, 4, "b83")?;
                let g = ComparisonFunction::powerlog(PowerLog::new(v[1], v[2], v[3])?);
                family_corollary_b83(&g, B83Variant::Omega(v[0]))
            }
        }
        "explicit" => {
            if args.len() != 1 {
                return Err(Error::Parse("explicit expects one path".into()));
            }
            let path = resolve(&args[0], base);
            let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(&path)?;
            let (mut l, mut p) = (Vec::new(), Vec::new());
            for rec in rdr.records() {
                let rec = rec?;
                if rec.len() < 3 {
                    return Err(Error::Parse(format!("{}: expected columns j, l_j, phi_j", path.display())));
                }
                l.push(parse_num(&rec[1])?);
                p.push(parse_num(&rec[2])?);
            }
            HamburgerHamiltonian::new_validated(l, p)
        }
        "jacobi" => {
            if args.len() != 1 {
                return Err(Error::Parse("jacobi expects one path".into()));
            }
            let j = JacobiParameters::from_csv(&resolve(&args[0], base))?;
            hamiltonian_from_jacobi(&j, j.len())
        }
        other => Err(Error::Parse(format!("unknown family '{other}'"))),
    }
}
