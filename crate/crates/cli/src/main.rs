use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use openspin_core::combinatorics::TwistMultiset;
use openspin_core::cycles::{self, CyclesError, Hbar};
use openspin_core::flatness::{
    cont_recursion_check, lambda_scan, lambda_symbolic, oracle_flat_potential, verify_theorem_a,
    FlatnessError, PrimitivityReport,
};
use openspin_core::invariants::enumerate_nonzero;
use openspin_core::oscillatory::FermatSignature;
use openspin_core::potential::build_deformed_potential;
use openspin_core::rational::render;
use openspin_core::Poly;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "openspin",
    version,
    about = "Open r-spin invariants, deformed potentials and primitive-form checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the nonzero primary open invariants.
    Invariants(RunConfig),
    /// Print the deformed potential W_t.
    Potential(RunConfig),
    /// Check primitivity and flatness, the mirror oracle and Λ vanishing.
    Verify(RunConfig),
    /// Scan the partition sums Λ_I.
    Lambda(RunConfig),
    /// Numeric checks of the oscillatory cycle basis.
    Cycles(RunConfig),
}

#[derive(Args, Clone)]
struct RunConfig {
    #[arg(long = "r", value_parser = clap::value_parser!(u32).range(2..=64))]
    r: u32,
    /// Truncation degree in the deformation variables (defaults to r).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    degree_cap: Option<u32>,
    /// ħ as "re,im".
    #[arg(long, default_value = "1,0", value_parser = parse_complex, allow_hyphen_values = true)]
    hbar: Complex64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest number of twists in Λ scans (defaults to max(⌊r/2⌋, 2)).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=9))]
    max_l: Option<u32>,
}

impl RunConfig {
    fn cap(&self) -> u32 {
        self.degree_cap.unwrap_or(self.r)
    }

    fn max_l(&self) -> usize {
        self.max_l.unwrap_or((self.r / 2).max(2)) as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

/// Output plus exit status.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Invariants(c) => Ok(invariants(c)),
        Command::Potential(c) => Ok(potential(c)),
        Command::Verify(c) => verify(c),
        Command::Lambda(c) => Ok(lambda(c)),
        Command::Cycles(c) => cycles_cmd(c),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<Outcome, (u8, String)>;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn render_poly(p: &Poly, format: Format) -> String {
    match format {
        Format::Text => p.to_text(),
        Format::Latex => p.to_latex(),
        Format::Json => serde_json::to_string(&p.to_json()).expect("serializable"),
    }
}

fn latex_rational(q: &str) -> String {
    match q.split_once('/') {
        Some((n, d)) if n.starts_with('-') => format!("-\\tfrac{{{}}}{{{d}}}", &n[1..]),
        Some((n, d)) => format!("\\tfrac{{{n}}}{{{d}}}"),
        None => q.to_string(),
    }
}

fn invariants(c: &RunConfig) -> Outcome {
    let entries = enumerate_nonzero(c.r);
    let mut out = String::new();
    match c.format {
        Format::Json => {
            let items: Vec<_> = entries
                .iter()
                .map(|e| json!({"twists": e.key.twists, "k": e.key.k, "value": render(&e.value)}))
                .collect();
            out = to_json(&json!({"r": c.r, "items": items}));
        }
        Format::Text => {
            for e in &entries {
                let twists = TwistMultiset::new(c.r, e.key.twists.clone())
                    .map(|t| t.to_string())
                    .unwrap_or_else(|_| format!("{:?}", e.key.twists));
                writeln!(out, "{twists}\t{}\t{}", e.key.k, render(&e.value)).unwrap();
            }
        }
        Format::Latex => {
            for e in &entries {
                let twists: Vec<String> = e.key.twists.iter().map(u32::to_string).collect();
                writeln!(
                    out,
                    "\\{{{}\\}} & {} & {} \\\\",
                    twists.join(","),
                    e.key.k,
                    latex_rational(&render(&e.value))
                )
                .unwrap();
            }
        }
    }
    Outcome::ok(out)
}

fn potential(c: &RunConfig) -> Outcome {
    let w = build_deformed_potential(c.r).poly;
    let out = match c.format {
        Format::Json => to_json(&w.to_json()),
        f => format!("{}\n", render_poly(&w, f)),
    };
    Outcome::ok(out)
}

#[derive(Serialize)]
struct VerifyJson {
    r: u32,
    degree_cap: u32,
    primitive: bool,
    flat: bool,
    phi1: Vec<String>,
    violations: Vec<ViolationJson>,
    oracle_equivalent: bool,
    oracle_difference: String,
    lambda_numeric_checked: usize,
    lambda_numeric_nonzero: Vec<LambdaJson>,
    lambda_symbolic_nonzero: Vec<usize>,
    cont_recursion_failed: Vec<usize>,
    passed: bool,
}

#[derive(Serialize)]
struct ViolationJson {
    d: u32,
    hbar_exponent: i64,
    monomial: String,
    coefficient: String,
}

#[derive(Serialize)]
struct LambdaJson {
    twists: Vec<u32>,
    value: String,
}

fn flatness_err(e: FlatnessError) -> (u8, String) {
    let code = match e {
        FlatnessError::CapTooSmall { .. } | FlatnessError::BadRank(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    };
    (code, e.to_string())
}

fn verify(c: &RunConfig) -> CmdResult {
    let cap = c.cap();
    let report = verify_theorem_a(c.r, cap).map_err(flatness_err)?;

    let w = build_deformed_potential(c.r).poly;
    let tvars = w.registry().deformation_indices();
    let oracle = oracle_flat_potential(c.r, cap).map_err(flatness_err)?;
    let difference = oracle
        .sub(&w.truncate_degree(&tvars, cap))
        .map_err(|e| (EXIT_FAIL, e.to_string()))?;

    let max_l = c.max_l();
    let scan = lambda_scan(c.r, max_l);
    let numeric_nonzero: Vec<LambdaJson> = scan
        .iter()
        .filter(|(_, v)| !num_traits::Zero::is_zero(v))
        .map(|(i, v)| LambdaJson {
            twists: i.entries().to_vec(),
            value: render(v),
        })
        .collect();
    let symbolic_nonzero: Vec<usize> = (2..=max_l)
        .filter(|&l| !lambda_symbolic(c.r, l).is_zero())
        .collect();
    let recursion_failed: Vec<usize> = (2..=max_l)
        .filter(|&l| !cont_recursion_check(c.r, l))
        .collect();

    let passed = report.passed()
        && difference.is_zero()
        && numeric_nonzero.is_empty()
        && symbolic_nonzero.is_empty()
        && recursion_failed.is_empty();

    let summary = VerifyJson {
        r: c.r,
        degree_cap: cap,
        primitive: report.primitive,
        flat: report.flat,
        phi1: report.indices.iter().map(|i| i.phi1.to_text()).collect(),
        violations: report
            .violations
            .iter()
            .map(|v| ViolationJson {
                d: v.d,
                hbar_exponent: -v.j,
                monomial: v.monomial.clone(),
                coefficient: v.coefficient.clone(),
            })
            .collect(),
        oracle_equivalent: difference.is_zero(),
        oracle_difference: difference.to_text(),
        lambda_numeric_checked: scan.len(),
        lambda_numeric_nonzero: numeric_nonzero,
        lambda_symbolic_nonzero: symbolic_nonzero,
        cont_recursion_failed: recursion_failed,
        passed,
    };
    let stdout = match c.format {
        Format::Json => to_json(&summary),
        f => verify_text(&report, &summary, max_l, f),
    };
    if !passed {
        eprintln!("verification failed for r = {}", c.r);
    }
    Ok(Outcome {
        stdout,
        code: if passed { 0 } else { EXIT_FAIL },
    })
}

fn verify_text(report: &PrimitivityReport, s: &VerifyJson, max_l: usize, format: Format) -> String {
    let yes = |b: bool| if b { "ok" } else { "FAILED" };
    let mut out = String::new();
    writeln!(out, "r = {}, degree cap = {}", s.r, s.degree_cap).unwrap();
    for index in &report.indices {
        let phi1 = render_poly(&index.phi1, format);
        match format {
            Format::Latex => writeln!(out, "\\varphi_{{{},1}} = {phi1}", index.d).unwrap(),
            _ => writeln!(out, "phi_{{{},1}} = {phi1}", index.d).unwrap(),
        }
    }
    writeln!(out, "primitive: {}", yes(s.primitive)).unwrap();
    writeln!(out, "flat coordinates: {}", yes(s.flat)).unwrap();
    for v in &s.violations {
        writeln!(
            out,
            "  d = {}, hbar^{}: {} * {}",
            v.d, v.hbar_exponent, v.coefficient, v.monomial
        )
        .unwrap();
    }
    writeln!(out, "oracle equivalence: {}", yes(s.oracle_equivalent)).unwrap();
    if !s.oracle_equivalent {
        writeln!(out, "  difference: {}", s.oracle_difference).unwrap();
    }
    writeln!(
        out,
        "lambda numeric ({} multisets): {}",
        s.lambda_numeric_checked,
        yes(s.lambda_numeric_nonzero.is_empty())
    )
    .unwrap();
    for bad in &s.lambda_numeric_nonzero {
        writeln!(out, "  {:?} -> {}", bad.twists, bad.value).unwrap();
    }
    writeln!(
        out,
        "lambda symbolic l = 2..={max_l}: {}",
        yes(s.lambda_symbolic_nonzero.is_empty())
    )
    .unwrap();
    writeln!(
        out,
        "cont recursion l = 2..={max_l}: {}",
        yes(s.cont_recursion_failed.is_empty())
    )
    .unwrap();
    writeln!(out, "{}", if s.passed { "PASS" } else { "FAIL" }).unwrap();
    out
}

fn lambda(c: &RunConfig) -> Outcome {
    let max_l = c.max_l();
    let scan = lambda_scan(c.r, max_l);
    let symbolic: Vec<(usize, Poly)> = (2..=max_l).map(|l| (l, lambda_symbolic(c.r, l))).collect();
    let passed = scan.iter().all(|(_, v)| num_traits::Zero::is_zero(v))
        && symbolic.iter().all(|(_, p)| p.is_zero());
    let stdout = match c.format {
        Format::Json => to_json(&json!({
            "r": c.r,
            "max_l": max_l,
            "numeric": scan
                .iter()
                .map(|(i, v)| json!({"twists": i.entries(), "value": render(v)}))
                .collect::<Vec<_>>(),
            "symbolic": symbolic
                .iter()
                .map(|(l, p)| json!({"l": l, "value": p.to_text()}))
                .collect::<Vec<_>>(),
            "passed": passed,
        })),
        f => {
            let mut out = String::new();
            for (i, v) in &scan {
                writeln!(out, "{i}\t{}", render(v)).unwrap();
            }
            for (l, p) in &symbolic {
                writeln!(out, "l = {l}\t{}", render_poly(p, f)).unwrap();
            }
            writeln!(out, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
            out
        }
    };
    Outcome {
        stdout,
        code: if passed { 0 } else { EXIT_FAIL },
    }
}

fn cycles_err(e: CyclesError) -> (u8, String) {
    let code = match e {
        CyclesError::Quadrature(_) => EXIT_NUMERIC,
        CyclesError::BadHbar | CyclesError::BadRank(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    };
    (code, e.to_string())
}

fn cycles_cmd(c: &RunConfig) -> CmdResult {
    let hbar = Hbar::principal(c.hbar).map_err(cycles_err)?;
    let report = cycles::cycles_report(c.r, &hbar).map_err(cycles_err)?;
    let mut products = Vec::new();
    if c.r <= 5 {
        for other in 2..=c.r {
            let sig =
                FermatSignature::new(vec![other, c.r]).map_err(|e| (EXIT_FAIL, e.to_string()))?;
            let err = cycles::product_dual_check(&sig, &hbar).map_err(cycles_err)?;
            products.push((other, err));
        }
    }
    let passed = report.passed() && products.iter().all(|&(_, e)| e < cycles::QUADRATURE_TOL);
    let stdout = match c.format {
        Format::Json => to_json(&json!({
            "r": c.r,
            "hbar": {"modulus": hbar.modulus(), "arg": hbar.arg()},
            "ray_relative_error": report.ray_relative_error,
            "a_difference_error": report.a_difference_error,
            "b_inverse_error": report.b_inverse_error,
            "dual_closed_error": report.dual_closed_error,
            "dual_quadrature_error": report.dual_quadrature_error,
            "products": products
                .iter()
                .map(|&(o, e)| json!({"signature": [o, c.r], "error": e}))
                .collect::<Vec<_>>(),
            "passed": passed,
        })),
        _ => {
            let mut out = String::new();
            writeln!(
                out,
                "r = {}, |hbar| = {:.6}, arg hbar = {:.6}",
                c.r,
                hbar.modulus(),
                hbar.arg()
            )
            .unwrap();
            writeln!(
                out,
                "ray quadrature relative error: {:.3e}",
                report.ray_relative_error
            )
            .unwrap();
            writeln!(
                out,
                "ray difference matrix error: {:.3e}",
                report.a_difference_error
            )
            .unwrap();
            writeln!(out, "B B^-1 - I: {:.3e}", report.b_inverse_error).unwrap();
            writeln!(
                out,
                "dual basis (closed form): {:.3e}",
                report.dual_closed_error
            )
            .unwrap();
            writeln!(
                out,
                "dual basis (quadrature): {:.3e}",
                report.dual_quadrature_error
            )
            .unwrap();
            for (o, e) in &products {
                writeln!(out, "product ({o},{}): {e:.3e}", c.r).unwrap();
            }
            writeln!(out, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
            out
        }
    };
    Ok(Outcome {
        stdout,
        code: if passed { 0 } else { EXIT_FAIL },
    })
}
