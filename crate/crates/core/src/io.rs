//! Text serialization of q-expansions and filtered forms.
//!
//! QEXP format: a header line
//! `QEXP p=<p> M=<M> Q=<Q> N=<N> k=<weight|-> eps_p=<residue>`
//! followed by `<n> <residue>` lines in increasing n; omitted n are zero.
//! NHOC format: `NHOC k=<k> r=<r>` followed by r+1 QEXP blocks.
//! All residues are base 10; output is deterministic.

use crate::error::{Error, Result};
use crate::nearly::FilteredForm;
use crate::padic::PadicCtx;
use crate::qexp::QExpansion;
use crate::series::QSeries;

pub fn write_qexp(f: &QExpansion) -> String {
    let ctx = f.ctx();
    let mut out = format!(
        "QEXP p={} M={} Q={} N={} k={} eps_p={}\n",
        ctx.p(),
        ctx.prec(),
        f.qprec(),
        f.level,
        f.weight.map_or("-".to_string(), |k| k.to_string()),
        f.eps_p.residue(),
    );
    for n in 0..f.qprec() {
        let c = f.coeff(n);
        if !c.is_zero() {
            out.push_str(&format!("{n} {}\n", c.residue()));
        }
    }
    out
}

fn parse_kv<'a>(tok: &'a str, key: &str) -> Result<&'a str> {
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=<value>, got {tok}")))
}

/// Parse one QEXP block from an iterator of lines; stops at the first line
/// that does not look like a coefficient entry.
pub fn parse_qexp_lines<'a, I: Iterator<Item = &'a str>>(
    lines: &mut std::iter::Peekable<I>,
) -> Result<QExpansion> {
    let header = loop {
        match lines.next() {
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l.trim().to_string(),
            None => return Err(Error::Parse("missing QEXP header".into())),
        }
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"QEXP") || toks.len() != 7 {
        return Err(Error::Parse(format!("bad QEXP header: {header}")));
    }
    let p: u64 = parse_kv(toks[1], "p")?
        .parse()
        .map_err(|e| Error::Parse(format!("p: {e}")))?;
    let m: u32 = parse_kv(toks[2], "M")?
        .parse()
        .map_err(|e| Error::Parse(format!("M: {e}")))?;
    let q: usize = parse_kv(toks[3], "Q")?
        .parse()
        .map_err(|e| Error::Parse(format!("Q: {e}")))?;
    let n_level: u64 = parse_kv(toks[4], "N")?
        .parse()
        .map_err(|e| Error::Parse(format!("N: {e}")))?;
    let k_str = parse_kv(toks[5], "k")?;
    let weight = if k_str == "-" {
        None
    } else {
        Some(k_str.parse::<i64>().map_err(|e| Error::Parse(format!("k: {e}")))?)
    };
    let eps: u64 = parse_kv(toks[6], "eps_p")?
        .parse()
        .map_err(|e| Error::Parse(format!("eps_p: {e}")))?;
    let ctx = PadicCtx::new(p, m)?;
    let mut series = QSeries::zero(ctx, q);
    while let Some(line) = lines.peek() {
        let t = line.trim();
        if t.is_empty() {
            lines.next();
            continue;
        }
        let mut it = t.split_whitespace();
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            break;
        };
        let (Ok(n), Ok(c)) = (a.parse::<usize>(), b.parse::<u64>()) else {
            break;
        };
        lines.next();
        if n >= q {
            return Err(Error::Parse(format!("coefficient index {n} >= Q = {q}")));
        }
        series.set_coeff(n, ctx.from_u64(c));
    }
    let mut f = QExpansion::new(series, weight, n_level);
    f.eps_p = ctx.from_u64(eps);
    Ok(f)
}

pub fn parse_qexp(text: &str) -> Result<QExpansion> {
    parse_qexp_lines(&mut text.lines().peekable())
}

pub fn write_nhoc(f: &FilteredForm) -> String {
    let mut out = format!("NHOC k={} r={}\n", f.weight, f.degree());
    for g in &f.components {
        out.push_str(&write_qexp(g));
    }
    out
}

pub fn parse_nhoc(text: &str) -> Result<FilteredForm> {
    let mut lines = text.lines().peekable();
    let header = loop {
        match lines.next() {
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l.trim(),
            None => return Err(Error::Parse("missing NHOC header".into())),
        }
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.first() != Some(&"NHOC") || toks.len() != 3 {
        return Err(Error::Parse(format!("bad NHOC header: {header}")));
    }
    let k: i64 = parse_kv(toks[1], "k")?
        .parse()
        .map_err(|e| Error::Parse(format!("k: {e}")))?;
    let r: usize = parse_kv(toks[2], "r")?
        .parse()
        .map_err(|e| Error::Parse(format!("r: {e}")))?;
    let mut components = Vec::with_capacity(r + 1);
    for _ in 0..=r {
        components.push(parse_qexp_lines(&mut lines)?);
    }
    FilteredForm::new(k, components)
}
