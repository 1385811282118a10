//! Group file format: UTF-8 text in sections
//! `[group] [eta] [w] [R] [modeq] [cm]` plus an optional `[expect]`.
//! Each section holds `key = value` lines; unknown sections or keys are
//! rejected with the offending line number. `#` starts a comment.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::radical::RadicalExpr;
use super::{CMData, Expectations, GroupRecord};
use crate::error::{Error, Result};
use crate::modeq::ModularEquation;
use crate::numerics::{format_rational, parse_rational};
use crate::qseries::{EtaQuotientSpec, Poly};

const SECTIONS: &[(&str, &[&str])] = &[
    ("group", &["label", "level"]),
    ("eta", &["factors", "power"]),
    ("w", &["coeffs"]),
    ("R", &["coeffs"]),
    ("modeq", &["n"]),
    ("cm", &["tau0", "gamma", "A"]),
    (
        "expect",
        &["x0", "psi", "recurrence", "initials", "B", "C"],
    ),
];

struct Entry {
    line: usize,
    value: String,
}

/// Parsed but unvalidated key/value store; one map per section.
struct Raw {
    entries: std::collections::BTreeMap<(String, String), Entry>,
}

impl Raw {
    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry> {
        self.get(section, key).ok_or_else(|| Error::GroupFileParse {
            line: 0,
            detail: format!("missing key {key:?} in section [{section}]"),
        })
    }
}

fn err(line: usize, detail: impl Into<String>) -> Error {
    Error::GroupFileParse {
        line,
        detail: detail.into(),
    }
}

fn scan(src: &str) -> Result<Raw> {
    let mut entries = std::collections::BTreeMap::new();
    let mut section: Option<&str> = None;
    for (idx, raw_line) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw_line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(name) = text.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(err(line, format!("malformed section header {text:?}")));
            };
            let Some(&(canon, _)) = SECTIONS.iter().find(|&&(s, _)| s == name) else {
                return Err(err(line, format!("unknown section [{name}]")));
            };
            section = Some(canon);
            continue;
        }
        let Some(section) = section else {
            return Err(err(line, "content before first section header"));
        };
        let Some((key, value)) = text.split_once('=') else {
            return Err(err(line, format!("expected `key = value`, got {text:?}")));
        };
        let key = key.trim();
        let keys = SECTIONS.iter().find(|&&(s, _)| s == section).unwrap().1;
        if !keys.contains(&key) {
            return Err(err(
                line,
                format!("unknown key {key:?} in section [{section}]"),
            ));
        }
        let slot = (section.to_string(), key.to_string());
        if entries.contains_key(&slot) {
            return Err(err(line, format!("duplicate key {key:?} in [{section}]")));
        }
        entries.insert(
            slot,
            Entry {
                line,
                value: value.trim().to_string(),
            },
        );
    }
    Ok(Raw { entries })
}

fn parse_i64(e: &Entry) -> Result<i64> {
    e.value
        .parse()
        .map_err(|_| err(e.line, format!("expected integer, got {:?}", e.value)))
}

fn parse_rationals(e: &Entry) -> Result<Vec<BigRational>> {
    e.value
        .split_whitespace()
        .map(|tok| {
            parse_rational(tok).map_err(|_| err(e.line, format!("bad rational token {tok:?}")))
        })
        .collect()
}

fn parse_poly(e: &Entry) -> Result<Poly> {
    Ok(Poly::new(parse_rationals(e)?))
}

fn parse_matrix2(e: &Entry) -> Result<[[i64; 2]; 2]> {
    let vals: Vec<i64> = e
        .value
        .split_whitespace()
        .map(|tok| {
            tok.parse()
                .map_err(|_| err(e.line, format!("bad integer token {tok:?}")))
        })
        .collect::<Result<_>>()?;
    if vals.len() != 4 {
        return Err(err(e.line, "expected 4 matrix entries"));
    }
    Ok([[vals[0], vals[1]], [vals[2], vals[3]]])
}

/// `(p + sqrt(d))/r` with integer p, d, r.
fn parse_tau0(e: &Entry) -> Result<(i64, i64, i64)> {
    let bad = || err(e.line, format!("tau0 must be `(p + sqrt(d))/r`, got {:?}", e.value));
    let v = e.value.replace(' ', "");
    let body = v.strip_prefix('(').ok_or_else(bad)?;
    let (inner, denom) = body.split_once(")/").ok_or_else(bad)?;
    let (p, surd) = inner.split_once('+').ok_or_else(bad)?;
    let d = surd
        .strip_prefix("sqrt(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(bad)?;
    Ok((
        p.parse().map_err(|_| bad())?,
        d.parse().map_err(|_| bad())?,
        denom.parse().map_err(|_| bad())?,
    ))
}

fn parse_radical(e: &Entry) -> Result<RadicalExpr> {
    RadicalExpr::parse(&e.value).map_err(|inner| err(e.line, inner.to_string()))
}

fn parse_int_rows(e: &Entry) -> Result<Vec<Vec<BigInt>>> {
    e.value
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| {
                    tok.parse()
                        .map_err(|_| err(e.line, format!("bad integer token {tok:?}")))
                })
                .collect()
        })
        .collect()
}

pub fn parse_group_file(src: &str) -> Result<GroupRecord> {
    let raw = scan(src)?;
    let label = raw.require("group", "label")?.value.clone();
    let level_e = raw.require("group", "level")?;
    let level = parse_i64(level_e)?;
    if level < 1 || level > u32::MAX as i64 {
        return Err(err(level_e.line, format!("bad level {level}")));
    }

    let fac_e = raw.require("eta", "factors")?;
    let mut factors = Vec::new();
    for tok in fac_e.value.split_whitespace() {
        let Some((a, ex)) = tok.split_once(':') else {
            return Err(err(fac_e.line, format!("eta factor {tok:?} is not `a:e`")));
        };
        let a: u32 = a
            .parse()
            .map_err(|_| err(fac_e.line, format!("bad eta scale in {tok:?}")))?;
        let ex: i32 = ex
            .parse()
            .map_err(|_| err(fac_e.line, format!("bad eta exponent in {tok:?}")))?;
        if a == 0 {
            return Err(err(fac_e.line, "eta scale must be positive"));
        }
        factors.push((a, ex));
    }
    let power = parse_i64(raw.require("eta", "power")?)? as i32;

    let w = parse_poly(raw.require("w", "coeffs")?)?;
    let r = parse_poly(raw.require("R", "coeffs")?)?;

    let n_e = raw.require("modeq", "n")?;
    let meq_n = parse_i64(n_e)?;
    if meq_n < 2 {
        return Err(err(n_e.line, format!("bad modular equation level {meq_n}")));
    }

    let (tau0_p, tau0_d, tau0_r) = parse_tau0(raw.require("cm", "tau0")?)?;
    let gamma = parse_matrix2(raw.require("cm", "gamma")?)?;
    let a_mat = parse_matrix2(raw.require("cm", "A")?)?;

    let mut expect = Expectations::default();
    if let Some(e) = raw.get("expect", "x0") {
        expect.x0 = Some(parse_radical(e)?);
    }
    if let Some(e) = raw.get("expect", "psi") {
        let rows = parse_int_rows(e)?;
        let d = rows.len();
        if d == 0 || rows.iter().any(|row| row.len() != d) {
            return Err(err(e.line, "psi rows must form a square matrix"));
        }
        expect.psi = Some(ModularEquation::new(meq_n as u32, rows));
    }
    if let Some(e) = raw.get("expect", "recurrence") {
        expect.recurrence = Some(
            e.value
                .split(';')
                .map(|row| {
                    Ok(Poly::new(parse_rationals(&Entry {
                        line: e.line,
                        value: row.trim().to_string(),
                    })?))
                })
                .collect::<Result<_>>()?,
        );
    }
    if let Some(e) = raw.get("expect", "initials") {
        expect.initials = Some(parse_rationals(e)?);
    }
    if let Some(e) = raw.get("expect", "B") {
        expect.b = Some(parse_radical(e)?);
    }
    if let Some(e) = raw.get("expect", "C") {
        expect.c = Some(parse_radical(e)?);
    }

    Ok(GroupRecord {
        label,
        level: level as u32,
        eta: EtaQuotientSpec::new(factors, power),
        w,
        r,
        meq_n: meq_n as u32,
        cm: CMData {
            tau0_p,
            tau0_d,
            tau0_r,
            gamma,
            a_mat,
        },
        expect,
    })
}

fn poly_tokens(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.coeffs()
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical text form; `parse_group_file` round-trips it.
pub fn serialize_group_file(g: &GroupRecord) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "[group]");
    let _ = writeln!(out, "label = {}", g.label);
    let _ = writeln!(out, "level = {}", g.level);
    let _ = writeln!(out, "\n[eta]");
    let factors = g
        .eta
        .factors
        .iter()
        .map(|(a, e)| format!("{a}:{e}"))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(out, "factors = {factors}");
    let _ = writeln!(out, "power = {}", g.eta.outer_power);
    let _ = writeln!(out, "\n[w]");
    let _ = writeln!(out, "coeffs = {}", poly_tokens(&g.w));
    let _ = writeln!(out, "\n[R]");
    let _ = writeln!(out, "coeffs = {}", poly_tokens(&g.r));
    let _ = writeln!(out, "\n[modeq]");
    let _ = writeln!(out, "n = {}", g.meq_n);
    let _ = writeln!(out, "\n[cm]");
    let _ = writeln!(
        out,
        "tau0 = ({} + sqrt({}))/{}",
        g.cm.tau0_p, g.cm.tau0_d, g.cm.tau0_r
    );
    let m = |v: [[i64; 2]; 2]| format!("{} {} {} {}", v[0][0], v[0][1], v[1][0], v[1][1]);
    let _ = writeln!(out, "gamma = {}", m(g.cm.gamma));
    let _ = writeln!(out, "A = {}", m(g.cm.a_mat));
    let e = &g.expect;
    if e.x0.is_none()
        && e.psi.is_none()
        && e.recurrence.is_none()
        && e.initials.is_none()
        && e.b.is_none()
        && e.c.is_none()
    {
        return out;
    }
    let _ = writeln!(out, "\n[expect]");
    if let Some(x0) = &e.x0 {
        let _ = writeln!(out, "x0 = {x0}");
    }
    if let Some(psi) = &e.psi {
        let rows = psi
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(BigInt::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ");
        let _ = writeln!(out, "psi = {rows}");
    }
    if let Some(rec) = &e.recurrence {
        let rows = rec.iter().map(poly_tokens).collect::<Vec<_>>().join("; ");
        let _ = writeln!(out, "recurrence = {rows}");
    }
    if let Some(init) = &e.initials {
        let toks = init.iter().map(format_rational).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "initials = {toks}");
    }
    if let Some(b) = &e.b {
        let _ = writeln!(out, "B = {b}");
    }
    if let Some(c) = &e.c {
        let _ = writeln!(out, "C = {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_builtins() {
        for &(label, src) in super::super::data::BUILTIN_SOURCES {
            let g = parse_group_file(src).unwrap();
            let text = serialize_group_file(&g);
            let h = parse_group_file(&text).unwrap();
            assert_eq!(g.label, h.label, "{label}");
            assert_eq!(g.eta, h.eta);
            assert_eq!(g.w, h.w);
            assert_eq!(g.r, h.r);
            assert_eq!(g.cm, h.cm);
            assert_eq!(g.expect.psi, h.expect.psi);
            assert_eq!(g.expect.recurrence, h.expect.recurrence);
            assert_eq!(g.expect.initials, h.expect.initials);
            assert_eq!(g.expect.x0, h.expect.x0);
            assert_eq!(g.expect.b, h.expect.b);
            assert_eq!(g.expect.c, h.expect.c);
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let src = "[group]\nlabel = x\nlevel = 2\nbogus = 1\n";
        match parse_group_file(src) {
            Err(Error::GroupFileParse { line, detail }) => {
                assert_eq!(line, 4);
                assert!(detail.contains("bogus"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_section_rejected() {
        let src = "[group]\nlabel = x\nlevel = 2\n[banana]\n";
        assert!(matches!(
            parse_group_file(src),
            Err(Error::GroupFileParse { line: 4, .. })
        ));
    }

    #[test]
    fn duplicate_key_rejected() {
        let src = "[group]\nlabel = x\nlabel = y\n";
        assert!(matches!(
            parse_group_file(src),
            Err(Error::GroupFileParse { line: 3, .. })
        ));
    }

    #[test]
    fn comments_ignored() {
        let src = super::super::data::BUILTIN_SOURCES[0].1;
        let commented = format!("# header comment\n{}", src.replace("level", "level")) + "# tail";
        let g = parse_group_file(&commented).unwrap();
        assert_eq!(g.label, "14+7");
    }

    #[test]
    fn tau0_grammar() {
        let e = Entry {
            line: 7,
            value: "(-3 + sqrt(-10))/14".to_string(),
        };
        assert_eq!(parse_tau0(&e).unwrap(), (-3, -10, 14));
        let bad = Entry {
            line: 9,
            value: "3 + sqrt(-10)".to_string(),
        };
        assert!(parse_tau0(&bad).is_err());
    }
}
