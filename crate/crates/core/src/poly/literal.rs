//! Polynomial literals such as `T^3+2*T+4` or `T^2+[1,3]*T-1`.

use super::Poly;
use crate::error::{Error, Result};
use crate::field::{split_top_level, Elem, FieldTower, Level};

/// Descending-degree literal; coefficients use the element literal syntax.
pub fn format_poly(f: &Poly, t: &FieldTower) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "T".into(),
            _ => format!("T^{i}"),
        };
        let term = if i == 0 {
            t.format_elem(c)
        } else if c == Elem::ONE {
            mono
        } else {
            format!("{}*{}", t.format_elem(c), mono)
        };
        terms.push(term);
    }
    terms.join("+")
}

/// Parses a literal at `level`. Terms may repeat; they are summed.
pub fn parse_poly(s: &str, level: Level, t: &FieldTower) -> Result<Poly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial literal".into()));
    }
    // split on top-level + and -, remembering signs
    let mut terms: Vec<(bool, &str)> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut neg = false;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' | '-' if depth == 0 => {
                if i > start {
                    terms.push((neg, &s[start..i]));
                } else if i > 0 {
                    return Err(Error::Parse(format!("empty term in {s:?}")));
                }
                neg = ch == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    terms.push((neg, &s[start..]));

    let mut acc = Poly::zero(level);
    for (neg, term) in terms {
        let (c, e) = parse_term(term, level, t)?;
        let c = if neg { t.neg(c) } else { c };
        let mut coeffs = vec![Elem::ZERO; e + 1];
        coeffs[e] = c;
        acc = acc.add(&Poly::from_coeffs(level, coeffs), t);
    }
    Ok(Poly { level, coeffs: acc.coeffs })
}

fn parse_term(term: &str, level: Level, t: &FieldTower) -> Result<(Elem, usize)> {
    let parts = split_top_level(term, '*');
    let (coef, mono) = match parts.as_slice() {
        [x] if x.starts_with('T') => (None, Some(*x)),
        [x] => (Some(*x), None),
        [c, m] => (Some(*c), Some(*m)),
        _ => return Err(Error::Parse(format!("bad term {term:?}"))),
    };
    let c = match coef {
        Some(c) => t.parse_elem(c, level)?,
        None => Elem::ONE,
    };
    let e = match mono {
        None => 0,
        Some("T") => 1,
        Some(m) => m
            .strip_prefix("T^")
            .and_then(|e| e.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad monomial {m:?}")))?,
    };
    Ok((c, e))
}
