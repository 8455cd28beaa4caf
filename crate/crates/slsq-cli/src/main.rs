use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use slsq::halg::atypical_rep;
use slsq::qalg::{q_atypical_rep, QRepLabels};
use slsq::rmatrix::{conjugate_r, r_closed, r_solve, r_trig, rq_closed, Grading, RLabels, RMatrix};
use slsq::suites::{run_all, run_suite, SuiteConfig, SuiteReport};
use slsq::zparam::{
    left_labels, parametrization_report, q_labels_from_x, q_magnon_action_residual, q_parametrization_report, q_zhukovski, right_labels,
    zhukovski_solve, SqrtBranches, ZBranch,
};
use slsq::{RepLabels, ResidualReport, C64};

#[derive(Parser)]
#[command(name = "slsq", version, about = "R-matrices and verification suites for centrally extended sl(1|1)^2")]
struct Cli {
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit the timestamp so repeated runs are byte-identical
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Emit an R-matrix as JSON
    EmitR(EmitArgs),
    /// Run verification suites
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Label packs from Zhukovski variables
    #[command(subcommand)]
    Params(ParamsCmd),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EmitArgs {
    /// Trigonometric form R(θ₁, θ₂, Λ)
    #[arg(long)]
    trig: bool,
    #[arg(long, default_value_t = 0.0)]
    theta1: f64,
    #[arg(long, default_value_t = 0.0)]
    theta2: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Labels of the first factor: inline JSON or a file (labels, deformed labels or a `params` pack)
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Labels of the second factor
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Solve the intertwining equations numerically instead of using the closed form
    #[arg(long)]
    solve: bool,
    /// Conjugate into another grading: V-V, V-Vbar, Vbar-V, Vbar-Vbar
    #[arg(long)]
    conjugate: Option<Grading>,
}

#[derive(Args, Clone)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the absolute residual tolerances
    #[arg(long)]
    tolerance: Option<f64>,
    /// Bound on r + s for Yangian level relations
    #[arg(long, default_value_t = 8)]
    levels: u32,
    /// Truncation order of current series
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Draw ν off the unit circle
    #[arg(long)]
    offshell: bool,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// R-matrix oracles, Yang-Baxter, unitarity and limits
    Ybe(VerifyArgs),
    /// Module relations, fusion, coassociativity and antipode
    Hopf(VerifyArgs),
    /// Yangian relations, coproduct, antipode and intertwining
    Yangian(VerifyArgs),
    /// Quantum affine relations and intertwining for every variant
    Affine(VerifyArgs),
    /// Singlet annihilation, undeformed and deformed
    Singlet(VerifyArgs),
    /// Zhukovski parametrizations and dispersion
    Params(VerifyArgs),
    /// Every suite above
    All(VerifyArgs),
}

#[derive(Subcommand)]
enum ParamsCmd {
    /// Left and right labels from (p, M, h)
    Xpm(XpmArgs),
    /// Deformed labels from (x⁺, ξ, δ, q)
    Qx(QxArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct XpmArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    p: C64,
    #[arg(long = "M", allow_hyphen_values = true, value_parser = parse_complex)]
    m: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    h: C64,
    /// Take the root with |x⁺| ≤ 1
    #[arg(long)]
    inner: bool,
    #[command(flatten)]
    branches: BranchArgs,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct QxArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    xplus: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    xi: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    delta: C64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    q: C64,
    /// Pick x⁻ nearest this value (default x⁺)
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    xminus_near: Option<C64>,
    /// Negative square root for h
    #[arg(long)]
    h_negative: bool,
    #[command(flatten)]
    branches: BranchArgs,
}

#[derive(Args)]
struct BranchArgs {
    #[arg(long)]
    eta_negative: bool,
    #[arg(long)]
    gamma_negative: bool,
    /// ν = principal fourth root times iᵏ
    #[arg(long, default_value_t = 0)]
    nu_branch: u8,
    #[arg(long, default_value_t = 0)]
    sigma_branch: u8,
}

impl BranchArgs {
    fn get(&self) -> SqrtBranches {
        let s = |neg: bool| if neg { -1 } else { 1 };
        SqrtBranches { eta: s(self.eta_negative), nu: self.nu_branch, sigma: self.sigma_branch, gamma: s(self.gamma_negative) }
    }
}

/// `re`, `re,im` or `re±imi`.
fn parse_complex(s: &str) -> Result<C64, String> {
    let t = s.trim().replace(' ', "");
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    if let Some((re, im)) = t.split_once(',') {
        return Ok(C64::new(num(re)?, num(im)?));
    }
    if let Some(body) = t.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let imag = |x: &str| match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => num(x),
        };
        return match split {
            Some(k) => Ok(C64::new(num(&body[..k])?, imag(&body[k..])?)),
            None => Ok(C64::new(0.0, imag(body)?)),
        };
    }
    Ok(C64::new(num(&t)?, 0.0))
}

enum Labels {
    Plain(RepLabels),
    Deformed(QRepLabels),
}

fn load_labels(source: &str) -> Result<Labels, String> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        fs::read_to_string(source).map_err(|e| format!("reading {source}: {e}"))?
    };
    let mut v: Value = serde_json::from_str(&text).map_err(|e| format!("parsing {source}: {e}"))?;
    if let Some(l) = v.get("left").and_then(|x| x.get("labels")) {
        v = l.clone();
    } else if let Some(l) = v.get("labels") {
        v = l.clone();
    }
    if v.get("q").is_some() {
        serde_json::from_value(v).map(Labels::Deformed).map_err(|e| format!("deformed labels in {source}: {e}"))
    } else {
        serde_json::from_value(v).map(Labels::Plain).map_err(|e| format!("labels in {source}: {e}"))
    }
}

fn build_r(args: &EmitArgs) -> Result<RMatrix, String> {
    let err = |e: slsq::Error| e.to_string();
    let r = if args.trig {
        r_trig(args.theta1, args.theta2, args.lambda)
    } else {
        let (Some(a), Some(b)) = (&args.a, &args.b) else {
            return Err("emit-r needs --trig or both --a and --b".into());
        };
        match (load_labels(a)?, load_labels(b)?) {
            (Labels::Plain(a), Labels::Plain(b)) if args.solve => {
                let r = r_solve(&atypical_rep(&a), &atypical_rep(&b)).map_err(err)?;
                RMatrix { labels: RLabels::Undeformed { a, b }, ..r }
            }
            (Labels::Plain(a), Labels::Plain(b)) => r_closed(&a, &b).map_err(err)?,
            (Labels::Deformed(a), Labels::Deformed(b)) if args.solve => {
                let r = r_solve(&q_atypical_rep(&a), &q_atypical_rep(&b)).map_err(err)?;
                RMatrix { labels: RLabels::Deformed { a, b }, ..r }
            }
            (Labels::Deformed(a), Labels::Deformed(b)) => rq_closed(&a, &b).map_err(err)?,
            _ => return Err("--a and --b must both be deformed or both undeformed".into()),
        }
    };
    match args.conjugate {
        Some(g) if g != Grading::VV => conjugate_r(&r, g).map_err(err),
        _ => Ok(r),
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: String,
    config: &'a SuiteConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    passed: bool,
    max_residual: f64,
    suites: Vec<SuiteReport>,
}

fn timestamp(cli: &Cli) -> Option<u64> {
    if cli.no_timestamp {
        None
    } else {
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    }
}

fn emit(cli: &Cli, json_value: &Value, csv: String) -> Result<(), String> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(json_value).map_err(|e| e.to_string())? + "\n",
        Format::Csv => csv,
    };
    match &cli.output {
        Some(path) => write_file(path, &body),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), String> {
    fs::write(path, body).map_err(|e| format!("writing {}: {e}", path.display()))
}

fn reports_csv(suites: &[SuiteReport]) -> String {
    let mut out = String::from("suite,report,identity,residual,tolerance,passed\n");
    for s in suites {
        for r in &s.reports {
            for c in &r.cases {
                let id = c.identity.replace('"', "'");
                out += &format!("{},{},\"{}\",{:e},{:e},{}\n", s.suite, r.suite, id, c.residual, r.tolerance, c.residual <= r.tolerance);
            }
        }
    }
    out
}

/// `path,re,im` rows; complex numbers appear as two-element arrays.
fn flatten_csv(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
                *out += &format!("{prefix},{},{}\n", a[0], a[1]);
            }
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&format!("{prefix}[{i}]"), x, out)),
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }, x, out)),
            Value::Number(n) => *out += &format!("{prefix},{n},0\n"),
            other => *out += &format!("{prefix},{other},\n"),
        }
    }
    let mut out = String::from("path,re,im\n");
    walk("", v, &mut out);
    out
}

fn matrix_csv(r: &RMatrix) -> String {
    let m = r.entries.data();
    let mut out = String::from("row,col,re,im\n");
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out += &format!("{i},{j},{:e},{:e}\n", m[(i, j)].re, m[(i, j)].im);
        }
    }
    out
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::EmitR(args) => {
            let r = build_r(args)?;
            emit(cli, &serde_json::to_value(&r).map_err(|e| e.to_string())?, matrix_csv(&r))?;
            Ok(true)
        }
        Command::Verify(cmd) => {
            let (name, a) = match cmd {
                VerifyCmd::Ybe(a) => ("ybe", a),
                VerifyCmd::Hopf(a) => ("hopf", a),
                VerifyCmd::Yangian(a) => ("yangian", a),
                VerifyCmd::Affine(a) => ("affine", a),
                VerifyCmd::Singlet(a) => ("singlet", a),
                VerifyCmd::Params(a) => ("params", a),
                VerifyCmd::All(a) => ("all", a),
            };
            let cfg = SuiteConfig {
                samples: a.samples,
                seed: a.seed,
                tolerance: a.tolerance,
                levels: a.levels,
                order: a.order,
                offshell: a.offshell,
            };
            let suites = if name == "all" { run_all(&cfg) } else { vec![run_suite(name, &cfg).map_err(|e| e.to_string())?] };
            let passed = suites.iter().all(|s| s.passed);
            let max_residual = suites.iter().fold(0.0_f64, |m, s| m.max(s.max_residual));
            let report = RunReport { command: format!("verify {name}"), config: &cfg, timestamp: timestamp(cli), passed, max_residual, suites };
            let csv = reports_csv(&report.suites);
            emit(cli, &serde_json::to_value(&report).map_err(|e| e.to_string())?, csv)?;
            for s in &report.suites {
                eprintln!("{:8} {} max residual {:.3e}", s.suite, if s.passed { "pass" } else { "FAIL" }, s.max_residual);
            }
            Ok(passed)
        }
        Command::Params(ParamsCmd::Xpm(a)) => {
            let err = |e: slsq::Error| e.to_string();
            let branch = if a.inner { ZBranch::Inner } else { ZBranch::Outer };
            let zp = zhukovski_solve(a.p, a.m, a.h, branch).map_err(err)?;
            let left = left_labels(&zp, a.branches.get()).map_err(err)?;
            let right = right_labels(&zp, a.branches.get()).map_err(err)?;
            let mut report = ResidualReport::new("params xpm", 1e-10);
            for (side, ml) in [("left", &left), ("right", &right)] {
                for c in parametrization_report(&zp, ml).cases {
                    report.push(format!("{side}: {}", c.identity), c.residual);
                }
            }
            let v = json!({ "point": zp, "left": left, "right": right, "report": report });
            emit(cli, &v, flatten_csv(&v))?;
            Ok(report.passed)
        }
        Command::Params(ParamsCmd::Qx(a)) => {
            let err = |e: slsq::Error| e.to_string();
            let h_sign = if a.h_negative { -1 } else { 1 };
            let pt = q_zhukovski(a.xplus, a.xi, a.delta, a.q, h_sign, a.xminus_near).map_err(err)?;
            let ml = q_labels_from_x(&pt, a.branches.get()).map_err(err)?;
            let mut report = q_parametrization_report(&pt, &ml);
            report.push("pack action", q_magnon_action_residual(&ml).map_err(err)?);
            let v = json!({ "point": pt, "labels": ml.labels, "pack": ml.pack, "sigma": ml.sigma, "report": report });
            emit(cli, &v, flatten_csv(&v))?;
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("-0.3,0.2").unwrap(), C64::new(-0.3, 0.2));
        assert_eq!(parse_complex("1-2i").unwrap(), C64::new(1.0, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5i").unwrap(), C64::new(1e-3, 2.5));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
