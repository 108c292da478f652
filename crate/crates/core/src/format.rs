//! Plain-text ideal files.
//!
//! ```text
//! # the 4-cycle
//! ring 4
//! gen x1*x2
//! gen x2*x3
//! gen x3*x4
//! gen x4*x1
//! ```
//!
//! Factors are `x<i>` or `x<i>^<e>` joined by `*`; `1` denotes the unit
//! monomial. Blank lines and `#` comments are ignored, and whitespace between
//! tokens is insignificant.

use crate::error::{Error, Result};
use crate::monomial::{minimalize, Monomial, MonomialIdeal};

pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let mut n: Option<usize> = None;
    let mut gens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = strip_keyword(line, "ring") {
            if n.is_some() {
                return Err(perr("duplicate `ring` line".into()));
            }
            let value = rest
                .trim()
                .parse::<usize>()
                .map_err(|_| perr(format!("bad variable count `{}`", rest.trim())))?;
            n = Some(value);
        } else if let Some(rest) = strip_keyword(line, "gen") {
            let n = n.ok_or_else(|| perr("`gen` before `ring`".into()))?;
            gens.push(parse_monomial(rest, n).map_err(perr)?);
        } else {
            return Err(perr(format!("expected `ring` or `gen`, found `{line}`")));
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "missing `ring` line".into(),
    })?;
    minimalize(gens, n)
}

fn strip_keyword<'a>(line: &'a str, keyword: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(keyword)?;
    if rest.is_empty() || rest.starts_with(char::is_whitespace) {
        Some(rest)
    } else {
        None
    }
}

fn parse_monomial(src: &str, n: usize) -> std::result::Result<Monomial, String> {
    let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty monomial".into());
    }
    let mut exponents = vec![0u32; n];
    if compact == "1" {
        return Ok(Monomial::new(exponents));
    }
    for factor in compact.split('*') {
        let body = factor
            .strip_prefix('x')
            .ok_or_else(|| format!("factor `{factor}` must start with `x`"))?;
        let (index, exp) = match body.split_once('^') {
            Some((i, e)) => (i, e),
            None => (body, "1"),
        };
        let index: usize = index
            .parse()
            .map_err(|_| format!("bad variable index in `{factor}`"))?;
        let exp: u32 = exp
            .parse()
            .map_err(|_| format!("bad exponent in `{factor}`"))?;
        if index == 0 || index > n {
            return Err(format!("variable x{index} outside 1..={n}"));
        }
        exponents[index - 1] = exponents[index - 1]
            .checked_add(exp)
            .ok_or_else(|| format!("exponent overflow in `{factor}`"))?;
    }
    Ok(Monomial::new(exponents))
}

pub fn write_ideal(ideal: &MonomialIdeal) -> String {
    let mut out = format!("ring {}\n", ideal.n());
    for g in ideal.generators() {
        out.push_str(&format!("gen {g}\n"));
    }
    out
}
