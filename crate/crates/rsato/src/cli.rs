//! Command-line surface: human-readable and JSON output over the
//! library pipeline. Exit codes: 0 success, 1 verification failure,
//! 2 usage error, 3 internal error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::constants::{compute_constants, select_x0};
use crate::error::Error;
use crate::evaluator::{sum_series, verify_all};
use crate::modeq::{
    find_modular_equation, symmetric_function_check, verify_annihilation, ModularEquation,
};
use crate::numerics::format_rational;
use crate::odeops::{derive_recurrence, extract_r, ode_residual};
use crate::qseries::{FractionalQSeries, Poly};
use crate::registry::{self, GroupRecord};

#[derive(Parser)]
#[command(
    name = "rsato",
    version,
    about = "Ramanujan-Sato series for 1/pi from eta-quotient Hauptmoduls"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct GroupArg {
    /// Builtin group label, e.g. 39+39
    label: Option<String>,
    /// Load the group from a file instead of the builtin registry
    #[arg(long)]
    group_file: Option<PathBuf>,
}

impl GroupArg {
    fn resolve(&self) -> Result<GroupRecord, Error> {
        match (&self.group_file, &self.label) {
            (Some(path), _) => registry::load_file(path),
            (None, Some(label)) => registry::find_builtin(label),
            (None, None) => Err(Error::UnknownGroup(
                "(missing label; pass a group label or --group-file)".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the q-expansion of the Hauptmodul inverse x = 1/t
    Expand {
        #[command(flatten)]
        group: GroupArg,
        /// Number of q-coefficients
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the A_n recurrence and initial values
    Recurrence {
        #[command(flatten)]
        group: GroupArg,
        /// How many A_n values to print
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Discover and verify the modular equation Psi_n(X, Y)
    Modeq {
        #[command(flatten)]
        group: GroupArg,
        /// q-order for kernel discovery
        #[arg(long, default_value_t = 96)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compute x0, implicit derivatives, and the constants B and C
    Constants {
        #[command(flatten)]
        group: GroupArg,
        /// Working precision in bits
        #[arg(long, default_value_t = 192)]
        prec: u32,
        #[arg(long)]
        json: bool,
    },
    /// Sum the series and compare against 1/pi
    Pi {
        #[command(flatten)]
        group: GroupArg,
        /// Certified decimal digits to target
        #[arg(long, default_value_t = 30)]
        digits: usize,
        #[arg(long)]
        json: bool,
    },
    /// Verify series summation for one group or all builtins
    Verify {
        #[command(flatten)]
        group: GroupArg,
        /// Run every builtin group
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 30)]
        digits: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the full oracle suite over all builtin groups
    Selftest,
    /// Registry inspection
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// List builtin group labels
    List,
    /// Print a group record in group-file format
    Show {
        label: String,
    },
    /// Parse and validate a group file
    Check {
        file: PathBuf,
    },
}

fn exponent_str(num: i64, ram: u32) -> String {
    if ram == 1 {
        format!("{num}")
    } else {
        format!("{num}/{ram}")
    }
}

/// `q^{e}*(c0 + c1 q^{1/m} + ...) + O(q^{K/m})`.
fn format_series(s: &FractionalQSeries<BigRational>) -> String {
    let tail = format!("O(q^{{{}}})", exponent_str(s.order_num(), s.ram()));
    if s.is_empty() {
        return tail;
    }
    let mut inner = String::new();
    let mut first = true;
    for (k, c) in s.coeffs().iter().enumerate() {
        if Zero::is_zero(c) {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                inner.push('-');
            }
            first = false;
        } else {
            inner.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let qpow = match k {
            0 => String::new(),
            _ => format!("q^{{{}}}", exponent_str(k as i64, s.ram())),
        };
        if qpow.is_empty() {
            inner.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            inner.push_str(&qpow);
        } else {
            inner.push_str(&format!("{}*{}", format_rational(&mag), qpow));
        }
    }
    let lead = s.lead_num();
    if lead == 0 {
        format!("{inner} + {tail}")
    } else {
        format!(
            "q^{{{}}}*({inner}) + {tail}",
            exponent_str(lead, s.ram())
        )
    }
}

fn series_json(s: &FractionalQSeries<BigRational>) -> serde_json::Value {
    json!({
        "lead_exp": format_rational(&s.lead_exponent()),
        "ramification": s.ram(),
        "coeffs": s.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
    })
}

fn poly_row(p: &Poly, width: usize) -> Vec<String> {
    (0..width).map(|i| format_rational(&p.coeff(i))).collect()
}

fn psi_for(g: &GroupRecord, order: usize) -> Result<ModularEquation, Error> {
    match &g.expect.psi {
        Some(p) => Ok(p.clone()),
        None => find_modular_equation(g, order),
    }
}

fn run() -> Result<i32, Error> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; usage errors exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return Ok(code);
        }
    };
    match cli.cmd {
        Cmd::Expand { group, order, json } => {
            let g = group.resolve()?;
            let x = g.x_series(order)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "label": g.label,
                        "x": series_json(&x),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}: x = {}", g.label, format_series(&x));
            }
            Ok(0)
        }
        Cmd::Recurrence { group, count, json } => {
            let g = group.resolve()?;
            let rec = derive_recurrence(&g, 64)?;
            let values: Vec<BigRational> = rec.stream().take(count.max(rec.span)).collect();
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "label": g.label,
                        "span": rec.span,
                        "terms": rec.terms.iter().map(|p| poly_row(p, 4)).collect::<Vec<_>>(),
                        "initials": values.iter().map(format_rational).collect::<Vec<_>>(),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}: sum_j P_j(n) A_(n-j) = 0, span {}", g.label, rec.span);
                for (j, p) in rec.terms.iter().enumerate() {
                    println!("  P_{j}(n) = {}", p.display("n"));
                }
                let shown: Vec<String> = values.iter().map(format_rational).collect();
                println!("  A_0.. = {}", shown.join(", "));
            }
            Ok(0)
        }
        Cmd::Modeq { group, order, json } => {
            let g = group.resolve()?;
            let psi = find_modular_equation(&g, order)?;
            psi.validate_table_form()?;
            let residual = verify_annihilation(&psi, &g, order)?;
            if !residual.is_empty() {
                eprintln!(
                    "{}: annihilation residual at q^{}",
                    g.label,
                    residual.lead_num()
                );
                return Ok(1);
            }
            if let Some(expect) = &g.expect.psi {
                if *expect != psi {
                    eprintln!("{}: discovered Psi differs from the tabulated one", g.label);
                    return Ok(1);
                }
            }
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "label": g.label,
                        "n": psi.n,
                        "degree": psi.degree(),
                        "coeffs": psi.rows_i64(),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", psi.display_table3());
            }
            Ok(0)
        }
        Cmd::Constants { group, prec, json } => {
            let g = group.resolve()?;
            let psi = psi_for(&g, 96)?;
            let k = compute_constants(&g, &psi, prec)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "label": k.label,
                        "x0": k.x0.to_string(),
                        "y1": k.y1.to_string(),
                        "y2": k.y2.to_string(),
                        "w_x0": k.w_x0.to_string(),
                        "W": k.big_w.to_json(),
                        "B": k.b.to_json(),
                        "C": k.c.to_json(),
                        "prec": k.prec,
                    }))
                    .unwrap()
                );
            } else {
                println!("{}:", k.label);
                println!("  x0 = {}", k.x0);
                println!("  y'(x0) = {}", k.y1);
                println!("  y''(x0) = {}", k.y2);
                println!("  w(x0) = {}", k.w_x0);
                println!("  W = {}", k.big_w.to_decimal(30));
                println!("  B = {}", k.b.to_decimal(30));
                println!("  C = {}", k.c.to_decimal(30));
            }
            Ok(0)
        }
        Cmd::Pi {
            group,
            digits,
            json,
        } => {
            let g = group.resolve()?;
            let report = sum_series(&g, digits)?;
            let ok = report.digits_agreed >= digits as i64;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!(
                    "{}: {} digits of 1/pi in {} terms ({:.4} digits/term)",
                    report.label, report.digits_agreed, report.terms_used, report.per_term_rate
                );
            }
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Verify {
            group,
            all,
            digits,
            json,
        } => {
            let reports = if all {
                verify_all(digits)?
            } else {
                let g = group.resolve()?;
                vec![sum_series(&g, digits)]
            };
            let mut failed = false;
            let mut docs = Vec::new();
            for r in &reports {
                match r {
                    Ok(rep) => {
                        let ok = rep.digits_agreed >= digits as i64;
                        failed |= !ok;
                        if json {
                            docs.push(serde_json::to_value(rep).unwrap());
                        } else {
                            println!(
                                "{} {}: {} digits in {} terms",
                                if ok { "ok  " } else { "FAIL" },
                                rep.label,
                                rep.digits_agreed,
                                rep.terms_used
                            );
                        }
                    }
                    Err(e) => {
                        failed = true;
                        if json {
                            docs.push(json!({ "error": e.to_string() }));
                        } else {
                            println!("FAIL {e}");
                        }
                    }
                }
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&docs).unwrap());
            }
            Ok(if failed { 1 } else { 0 })
        }
        Cmd::Selftest => selftest(),
        Cmd::Group { cmd } => match cmd {
            GroupCmd::List => {
                for g in registry::load_builtin()? {
                    println!("{} (level {})", g.label, g.level);
                }
                Ok(0)
            }
            GroupCmd::Show { label } => {
                let g = registry::find_builtin(&label)?;
                print!("{}", registry::file::serialize_group_file(&g));
                Ok(0)
            }
            GroupCmd::Check { file } => {
                let g = registry::load_file(&file)?;
                println!("ok: {} (level {})", g.label, g.level);
                Ok(0)
            }
        },
    }
}

fn selftest() -> Result<i32, Error> {
    let groups = registry::load_builtin()?;
    let mut failures = 0usize;
    let mut check = |name: String, outcome: Result<(), String>| match outcome {
        Ok(()) => println!("ok   {name}"),
        Err(msg) => {
            failures += 1;
            println!("FAIL {name}: {msg}");
        }
    };
    // Example 2.2 hand-recorded expansion
    {
        let g = registry::find_builtin("39+39")?;
        let x = g.x_series(8)?;
        let expect = [1i64, -1, -1, 1, -1, 0, 2];
        let ok = expect.iter().enumerate().all(|(k, &v)| {
            x.coeff(1 + k as i64, 1) == BigRational::from_integer(v.into())
        });
        check(
            "eta expansion 39+39 (Example 2.2)".into(),
            if ok {
                Ok(())
            } else {
                Err("x-coefficients differ".into())
            },
        );
    }
    for g in &groups {
        let label = &g.label;
        check(
            format!("R polynomial {label} (Table 1)"),
            match extract_r(g, 48) {
                Ok(r) if r == g.r => Ok(()),
                Ok(r) => Err(format!("got {}", r.display("x"))),
                Err(e) => Err(e.to_string()),
            },
        );
        check(
            format!("ODE residual {label}"),
            match ode_residual(g, 44) {
                Ok(res) if res.is_empty() && res.order_num() >= 40 => Ok(()),
                Ok(res) => Err(format!("residual at q^{}", res.lead_num())),
                Err(e) => Err(e.to_string()),
            },
        );
        check(
            format!("recurrence {label} (Table 2)"),
            (|| {
                let rec = derive_recurrence(g, 64).map_err(|e| e.to_string())?;
                if Some(&rec.terms) != g.expect.recurrence.as_ref() {
                    return Err("polynomials differ".into());
                }
                let want = g.expect.initials.as_ref().unwrap();
                let got: Vec<BigRational> = rec.stream().take(want.len()).collect();
                if got != *want {
                    return Err("initial values differ".into());
                }
                Ok(())
            })(),
        );
        check(
            format!("modular equation {label} (Table 3)"),
            (|| {
                let psi = find_modular_equation(g, 96).map_err(|e| e.to_string())?;
                if Some(&psi) != g.expect.psi.as_ref() {
                    return Err("Psi differs".into());
                }
                let res = verify_annihilation(&psi, g, 60).map_err(|e| e.to_string())?;
                if !res.is_empty() {
                    return Err(format!("annihilation residual at q^{}", res.lead_num()));
                }
                let (_, rec) = symmetric_function_check(g, 96).map_err(|e| e.to_string())?;
                if rec != psi {
                    return Err("symmetric reconstruction differs".into());
                }
                Ok(())
            })(),
        );
        check(
            format!("CM point and x0 {label} (Table 4)"),
            (|| {
                let psi = g.expect.psi.as_ref().unwrap();
                let (x0, _) = select_x0(g, psi, 160).map_err(|e| e.to_string())?;
                let want = g
                    .expect
                    .x0
                    .as_ref()
                    .unwrap()
                    .eval_quad()
                    .map_err(|e| e.to_string())?;
                if x0 != want {
                    return Err(format!("selected {x0}, tabulated {want}"));
                }
                Ok(())
            })(),
        );
        check(
            format!("constants B, C {label} (Table 5)"),
            (|| {
                let psi = g.expect.psi.as_ref().unwrap();
                let k = compute_constants(g, psi, 192).map_err(|e| e.to_string())?;
                if k.y1 != crate::numerics::quad::QuadExt::from_i64(-1) {
                    return Err(format!("y'(x0) = {}", k.y1));
                }
                let tol = crate::numerics::dyadic::Dyadic::power_of_two(-83); // ~1e-25
                let tb = g
                    .expect
                    .b
                    .as_ref()
                    .unwrap()
                    .eval_ball(192)
                    .map_err(|e| e.to_string())?;
                let tc = g
                    .expect
                    .c
                    .as_ref()
                    .unwrap()
                    .eval_ball(192)
                    .map_err(|e| e.to_string())?;
                if !k.b.sub(&tb).abs_upper().le(&tol) {
                    return Err(format!("B = {} vs {}", k.b.to_decimal(25), tb.to_decimal(25)));
                }
                if !k.c.sub(&tc).abs_upper().le(&tol) {
                    return Err(format!("C = {} vs {}", k.c.to_decimal(25), tc.to_decimal(25)));
                }
                Ok(())
            })(),
        );
    }
    if failures == 0 {
        println!("selftest: all checks passed");
        Ok(0)
    } else {
        println!("selftest: {failures} check(s) failed");
        Ok(1)
    }
}

/// Entry point for the binary; maps errors to exit codes.
pub fn main_with_exit_code() -> i32 {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::UnknownGroup(_) | Error::GroupFileParse { .. } => 2,
                _ => 3,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn series_rendering() {
        let s = FractionalQSeries::new(
            1,
            1,
            vec![
                BigRational::from_integer(BigInt::from(1)),
                BigRational::from_integer(BigInt::from(-1)),
                BigRational::from_integer(BigInt::from(0)),
                BigRational::from_integer(BigInt::from(2)),
            ],
        );
        assert_eq!(
            format_series(&s),
            "q^{1}*(1 - q^{1} + 2*q^{3}) + O(q^{5})"
        );
        let z = FractionalQSeries::<BigRational>::zero_to(2, 7);
        assert_eq!(format_series(&z), "O(q^{7/2})");
    }

    #[test]
    fn initials_not_printed_directly() {
        // poly_row pads with zeros up to the requested width
        let p = Poly::from_i64(&[0, 0, 0, 2]);
        assert_eq!(poly_row(&p, 4), vec!["0", "0", "0", "2"]);
    }
}
