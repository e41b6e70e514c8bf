//! The `pga` command line.
//!
//! Every subcommand prints one JSON document with a `params` block echoing
//! the configuration, a `results` block, and a `checks` array. The process
//! exits with 0 when every check passed, 1 when one failed, and 2 on usage
//! errors.

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{
    convergence_study, discretized_propagator_with, exact_propagator, hermiticity_check, KernelRule,
    PGHamiltonian, TimeSign,
};
use crate::error::{Error, Result};
use crate::integration::{expq_addition_check, factorial_identity_check, pairing_table_check, IntegralNormalization};
use crate::multimode::{self, build_multimode, monomial_matrix, MultiModeRep, PGAlgebra, Symbol};
use crate::potts::{
    z_bruteforce, z_closed, z_paragrassmann, z_paragrassmann_embedded, z_transfer, PottsInstance,
    DEFAULT_TERM_CAP,
};
use crate::qarith::{parse_rational, rational_string, ComplexJson, CycloContext, CycloElement, CycloJson, Field};
use crate::qgroup::{build_glq2, build_slq2, check_glq2_relations, HalfInt};
use crate::report::Report;
use crate::single_mode::SingleModeRep;
use crate::{dynamics, potts, ExactMatrix};

#[derive(Debug, Parser)]
#[command(name = "pga", version, about = "Paragrassmann algebra toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; csv is available for potts only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Exact rational/cyclotomic arithmetic where the command supports it.
    #[arg(long, global = true)]
    pub exact: bool,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Largest matrix dimension for multimode representations.
    #[arg(long, global = true, default_value_t = multimode::rep::DEFAULT_DIMENSION_CAP)]
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relation suites for the single- and multimode algebras.
    Verify(VerifyArgs),
    /// Partition function of the closed Potts chain.
    Potts(PottsArgs),
    /// Matrices of the single-mode representation.
    Repr(ReprArgs),
    /// Heat kernel of a diagonal Hamiltonian.
    Heat(HeatArgs),
    /// Representation of the quantum group GL_(q^(1/2))(2).
    Qgroup(QgroupArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub modes: usize,
    /// Number of random words in the symbolic/matrix agreement check.
    #[arg(long, default_value_t = 64)]
    pub words: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Transfer,
    Brute,
    Integral,
    All,
}

#[derive(Debug, Args)]
pub struct PottsArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub sites: usize,
    /// Boltzmann factor e^K, e.g. 2, 5/2 or 2.5.
    #[arg(long)]
    pub x: String,
    #[arg(long, value_enum, default_value_t = Method::All)]
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dump {
    Theta,
    Partial,
    G,
}

#[derive(Debug, Args)]
pub struct ReprArgs {
    #[arg(long)]
    pub p: usize,
    /// Comma-separated β_1..β_p as rationals.
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<String>>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "theta,partial,g")]
    pub dump: Vec<Dump>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    /// Normal-symbol short-time kernel.
    NormalSymbol,
    /// Displayed kernel exp(-iΔ…).
    Minus,
    /// Displayed kernel exp(+iΔ…).
    Plus,
}

#[derive(Debug, Args)]
pub struct HeatArgs {
    #[arg(long)]
    pub p: usize,
    /// Comma-separated h_0,h_1,…
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub h: Vec<f64>,
    #[arg(long)]
    pub time: f64,
    #[arg(long)]
    pub steps: usize,
    /// Also report the errors at steps, 2·steps, 4·steps and 8·steps.
    #[arg(long)]
    pub convergence: bool,
    #[arg(long, value_enum, default_value_t = KernelArg::NormalSymbol)]
    pub kernel: KernelArg,
}

#[derive(Debug, Args)]
pub struct QgroupArgs {
    #[arg(long)]
    pub p: usize,
    /// Half-integer exponent α.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "sl")]
    pub gamma: Option<String>,
    /// Fix γ so that the quantum determinant is 1.
    #[arg(long)]
    pub sl: bool,
}

/// The emitted document and whether every check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub document: String,
    pub success: bool,
}

#[derive(Serialize)]
struct EntryJson {
    row: usize,
    col: usize,
    value: CycloJson,
}

#[derive(Serialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<EntryJson>,
}

fn matrix_json(ctx: &Arc<CycloContext>, m: &ExactMatrix) -> MatrixJson {
    MatrixJson {
        dim: m.dim(),
        entries: m
            .entries()
            .map(|(row, col, v)| EntryJson {
                row,
                col,
                value: ctx.to_json(v),
            })
            .collect(),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn require_p(p: usize) -> Result<Arc<CycloContext>> {
    if p == 0 {
        return Err(usage("--p must be at least 1"));
    }
    CycloContext::new(p)
}

fn document(params: Value, results: Value, report: &Report) -> Outcome {
    let doc = json!({
        "params": params,
        "results": results,
        "checks": report,
    });
    Outcome {
        document: serde_json::to_string_pretty(&doc).expect("JSON values serialize"),
        success: report.all_passed(),
    }
}

fn random_element(ctx: &Arc<CycloContext>, rng: &mut ChaCha8Rng) -> CycloElement {
    let k = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ctx.int(k) + ctx.omega_pow(rng.gen_range(0..ctx.order() as i64))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Potts(_)) {
        return Err(usage("--format csv is only available for potts"));
    }
    match &cli.command {
        Command::Verify(args) => run_verify(cli, args),
        Command::Potts(args) => run_potts(cli, args),
        Command::Repr(args) => run_repr(args),
        Command::Heat(args) => run_heat(args),
        Command::Qgroup(args) => run_qgroup(args),
    }
}

fn run_verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome> {
    let ctx = require_p(args.p)?;
    if args.modes == 0 {
        return Err(usage("--modes must be at least 1"));
    }
    let p = args.p;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut report = Report::new();

    let plain = SingleModeRep::new(&ctx, None)?;
    report.extend_prefixed("single", plain.check_relations());
    report.extend_prefixed("single", plain.check_q_oscillator()?);
    let betas: Vec<_> = (0..p).map(|_| random_element(&ctx, &mut rng)).collect();
    let random = SingleModeRep::new(&ctx, Some(&betas))?;
    report.extend_prefixed("single-random-beta", random.check_relations());

    let rep = MultiModeRep::with_cap(&ctx, args.modes, cli.cap)?;
    report.extend_prefixed("multimode", multimode::check_relations(&rep));

    let alg = PGAlgebra::exact(&ctx, args.modes);
    let mut mismatches = Vec::new();
    for _ in 0..args.words {
        let len = rng.gen_range(0..=2 * p);
        let word: Vec<Symbol> = (0..len)
            .map(|_| {
                let mode = rng.gen_range(0..args.modes);
                if rng.gen_bool(0.5) {
                    Symbol::theta(mode)
                } else {
                    Symbol::theta_bar(mode)
                }
            })
            .collect();
        let poly = alg.normal_order(&word)?;
        let m = poly.terms().fold(ExactMatrix::zeros(rep.dim()), |acc, (e, c)| {
            &acc + &monomial_matrix(&rep, e, c)
        });
        if m != rep.word_matrix(&word) {
            let text: Vec<String> = word.iter().map(Symbol::to_string).collect();
            mismatches.push(text.join(" "));
        }
    }
    report.push_violations("symbolic-vs-matrix", mismatches);

    if p >= 2 {
        let aligned = build_multimode(&ctx, args.modes, None, Some(vec![[1, -1]; args.modes]), cli.cap)?;
        let failed = !multimode::check_relations(&aligned).all_passed();
        report.push(
            "negative-control",
            failed,
            "aligned sign vectors a_i = b_i must violate a relation",
        );
    }

    let norm = IntegralNormalization::default_split(&ctx);
    report.extend_prefixed("integral", pairing_table_check(&ctx, &norm)?);
    report.extend_prefixed("integral", factorial_identity_check(&ctx));
    report.extend_prefixed("integral", expq_addition_check(&ctx)?);
    report.extend_prefixed("potts", potts::delta_expansion_check(&ctx));
    report.extend_prefixed("dynamics", dynamics::resolution_of_identity(&plain)?);

    let params = json!({
        "command": "verify",
        "p": p,
        "modes": args.modes,
        "cap": cli.cap,
        "seed": cli.seed,
        "words": args.words,
    });
    let results = json!({
        "dimension": rep.dim(),
        "checks_run": report.checks.len(),
        "all_passed": report.all_passed(),
    });
    Ok(document(params, results, &report))
}

struct PottsValue {
    method: &'static str,
    exact: Option<String>,
    value: Complex64,
}

fn run_potts(cli: &Cli, args: &PottsArgs) -> Result<Outcome> {
    if args.p == 0 {
        return Err(usage("--p must be at least 1"));
    }
    let x_exact = parse_rational(&args.x)?;
    let methods: Vec<Method> = match args.method {
        Method::All => vec![Method::Closed, Method::Transfer, Method::Brute, Method::Integral],
        m => vec![m],
    };
    let mut values = Vec::new();
    let mut report = Report::new();
    if cli.exact {
        let inst = PottsInstance::new(args.p, args.sites, x_exact.clone())?;
        let real = |r: &BigRational| Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0);
        for m in &methods {
            let v = match m {
                Method::Closed => Value_::Rational(z_closed(&inst)),
                Method::Transfer => Value_::Rational(z_transfer(&inst)),
                Method::Brute => Value_::Rational(z_bruteforce(&inst)?),
                Method::Integral => Value_::Cyclo(z_paragrassmann(&inst, 0, DEFAULT_TERM_CAP)?),
                Method::All => unreachable!(),
            };
            values.push(match v {
                Value_::Rational(r) => PottsValue {
                    method: method_name(*m),
                    exact: Some(rational_string(&r)),
                    value: real(&r),
                },
                Value_::Cyclo(z) => PottsValue {
                    method: method_name(*m),
                    exact: Some(
                        z.to_rational()
                            .map(|r| rational_string(&r))
                            .unwrap_or_else(|| z.to_string()),
                    ),
                    value: z.to_complex(),
                },
            });
        }
        if methods.len() > 1 {
            let first = &values[0].exact;
            let agree = values.iter().all(|v| &v.exact == first);
            report.push("agreement", agree, "exact equality of all routes");
        }
    } else {
        let x = x_exact
            .to_f64()
            .ok_or_else(|| usage(format!("--x {} is not representable", args.x)))?;
        if x <= 0.0 {
            return Err(usage("--x must be positive"));
        }
        let inst = PottsInstance::new(args.p, args.sites, x)?;
        for m in &methods {
            let value = match m {
                Method::Closed => Complex64::new(z_closed(&inst), 0.0),
                Method::Transfer => Complex64::new(z_transfer(&inst), 0.0),
                Method::Brute => Complex64::new(z_bruteforce(&inst)?, 0.0),
                Method::Integral => z_paragrassmann_embedded(&inst, 0, DEFAULT_TERM_CAP)?,
                Method::All => unreachable!(),
            };
            values.push(PottsValue {
                method: method_name(*m),
                exact: None,
                value,
            });
        }
        if methods.len() > 1 {
            let worst = values
                .iter()
                .map(|v| potts::relative_error(v.value, values[0].value))
                .fold(0.0, f64::max);
            report.push(
                "agreement",
                worst <= 1e-10,
                format!("largest relative deviation {worst:e}"),
            );
        }
    }

    if cli.format == Format::Csv {
        let mut out = String::from("p,N,x,method,value_re,value_im\n");
        for v in &values {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                args.p, args.sites, args.x, v.method, v.value.re, v.value.im
            ));
        }
        return Ok(Outcome {
            document: out.trim_end().to_string(),
            success: report.all_passed(),
        });
    }

    let mut results = serde_json::Map::new();
    let mut value_map = serde_json::Map::new();
    for v in &values {
        let mut entry = serde_json::Map::new();
        if let Some(e) = &v.exact {
            entry.insert("exact".into(), json!(e));
        }
        entry.insert("re".into(), json!(v.value.re));
        entry.insert("im".into(), json!(v.value.im));
        value_map.insert(v.method.into(), Value::Object(entry));
    }
    results.insert("values".into(), Value::Object(value_map));
    if let Some(c) = report.get("agreement") {
        results.insert("agreement".into(), json!(c.passed));
    }
    let params = json!({
        "command": "potts",
        "p": args.p,
        "sites": args.sites,
        "x": args.x,
        "method": args.method,
        "exact": cli.exact,
    });
    Ok(document(params, Value::Object(results), &report))
}

enum Value_ {
    Rational(BigRational),
    Cyclo(CycloElement),
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed",
        Method::Transfer => "transfer",
        Method::Brute => "brute",
        Method::Integral => "integral",
        Method::All => "all",
    }
}

fn run_repr(args: &ReprArgs) -> Result<Outcome> {
    let ctx = require_p(args.p)?;
    let betas = match &args.beta {
        Some(list) => Some(
            list.iter()
                .map(|s| parse_rational(s).map(|r| ctx.rational(r)))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let rep = SingleModeRep::new(&ctx, betas.as_deref())?;
    let mut results = serde_json::Map::new();
    for d in &args.dump {
        let (name, m) = match d {
            Dump::Theta => ("theta", &rep.theta),
            Dump::Partial => ("partial", &rep.partial),
            Dump::G => ("g", &rep.g),
        };
        results.insert(name.into(), serde_json::to_value(matrix_json(&ctx, m)).expect("serializable"));
    }
    let mut report = rep.check_relations();
    report.extend(rep.check_q_oscillator()?);
    let params = json!({
        "command": "repr",
        "p": args.p,
        "beta": rep.betas().iter().map(|b| ctx.to_json(b)).collect::<Vec<_>>(),
        "order": ctx.order(),
    });
    Ok(document(params, Value::Object(results), &report))
}

fn run_heat(args: &HeatArgs) -> Result<Outcome> {
    let ctx = require_p(args.p)?;
    if args.steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    if args.h.is_empty() {
        return Err(usage("--h needs at least one coefficient"));
    }
    let ham = PGHamiltonian::new(&ctx, &args.h)?;
    let rule = match args.kernel {
        KernelArg::NormalSymbol => KernelRule::NormalSymbol,
        KernelArg::Minus => KernelRule::Displayed(TimeSign::Minus),
        KernelArg::Plus => KernelRule::Displayed(TimeSign::Plus),
    };
    let discrete = discretized_propagator_with(&ham, args.time, args.steps, rule)?;
    let exact = exact_propagator(&ham, args.time);
    let levels: Vec<Value> = (0..=args.p)
        .map(|m| {
            json!({
                "m": m,
                "energy": ComplexJson::from(ham.energies()[m]),
                "discretized": ComplexJson::from(discrete[m]),
                "exact": ComplexJson::from(exact[m]),
                "error": (discrete[m] - exact[m]).norm(),
            })
        })
        .collect();
    let max_error = crate::scalar::max_abs_diff(&discrete, &exact);

    let mut report = hermiticity_check(&ham)?;
    let unit = exact.iter().all(|v| (v.norm() - 1.0).abs() <= dynamics::ALGEBRAIC_TOLERANCE);
    report.push("unitarity", unit, "|e^(itE_m)| = 1");

    let mut results = json!({
        "levels": levels,
        "max_error": max_error,
    });
    if args.convergence {
        let steps: Vec<usize> = (0..4).map(|k| args.steps << k).collect();
        let study = match rule {
            KernelRule::NormalSymbol => convergence_study(&ham, args.time, &steps)?,
            _ => steps
                .iter()
                .map(|&n| {
                    let d = discretized_propagator_with(&ham, args.time, n, rule)?;
                    Ok((n, crate::scalar::max_abs_diff(&d, &exact)))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let ratios: Vec<f64> = study
            .windows(2)
            .map(|w| if w[0].1.is_zero() { 0.0 } else { w[1].1 / w[0].1 })
            .collect();
        let converging = study.windows(2).all(|w| w[1].1 <= 0.75 * w[0].1 || w[0].1 <= 1e-12);
        report.push(
            "convergence",
            converging,
            format!("error ratios {ratios:?}"),
        );
        results["convergence"] = json!(study
            .iter()
            .map(|(n, e)| json!({"steps": n, "error": e}))
            .collect::<Vec<_>>());
        results["ratios"] = json!(ratios);
    }
    let params = json!({
        "command": "heat",
        "p": args.p,
        "h": args.h,
        "time": args.time,
        "steps": args.steps,
        "kernel": format!("{:?}", args.kernel),
        "convergence": args.convergence,
    });
    Ok(document(params, results, &report))
}

fn run_qgroup(args: &QgroupArgs) -> Result<Outcome> {
    let ctx = require_p(args.p)?;
    let alpha: HalfInt = args.alpha.parse()?;
    let beta = ctx.rational(parse_rational(&args.beta)?);
    let rep = if args.sl {
        build_slq2(&ctx, alpha, beta)?
    } else {
        let gamma = args
            .gamma
            .as_deref()
            .ok_or_else(|| usage("either --gamma or --sl is required"))?;
        build_glq2(&ctx, alpha, beta, ctx.rational(parse_rational(gamma)?))?
    };
    let report = check_glq2_relations(&rep);
    let results = json!({
        "a": matrix_json(&ctx, &rep.a),
        "b": matrix_json(&ctx, &rep.b),
        "c": matrix_json(&ctx, &rep.c),
        "d": matrix_json(&ctx, &rep.d),
        "gamma": ctx.to_json(&rep.gamma),
        "qdet": ctx.to_json(&rep.qdet),
        "qdet_approx": ComplexJson::from(rep.qdet.to_complex()),
    });
    let params = json!({
        "command": "qgroup",
        "p": args.p,
        "alpha": alpha.to_string(),
        "beta": args.beta,
        "gamma": args.gamma,
        "sl": args.sl,
    });
    Ok(document(params, results, &report))
}

/// Parses `args`, runs the command, prints the document, and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", outcome.document);
            if outcome.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("pga").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn potts_all_exact() {
        let out = run_args(&["potts", "--p", "2", "--sites", "3", "--x", "2", "--method", "all", "--exact"]).unwrap();
        assert!(out.success);
        let v: Value = serde_json::from_str(&out.document).unwrap();
        assert_eq!(v["results"]["agreement"], json!(true));
        for m in ["closed", "transfer", "brute", "integral"] {
            assert_eq!(v["results"]["values"][m]["exact"], json!("66/1"));
        }
    }

    #[test]
    fn potts_csv() {
        let out = run_args(&["potts", "--p", "1", "--sites", "2", "--x", "2", "--format", "csv"]).unwrap();
        let lines: Vec<_> = out.document.lines().collect();
        assert_eq!(lines[0], "p,N,x,method,value_re,value_im");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,2,2,closed,10"));
    }

    #[test]
    fn verify_small() {
        let out = run_args(&["verify", "--p", "1", "--modes", "1"]).unwrap();
        assert!(out.success, "{}", out.document);
    }

    #[test]
    fn usage_errors() {
        assert!(run_args(&["potts", "--p", "0", "--sites", "3", "--x", "2"]).is_err());
        assert!(run_args(&["repr", "--p", "2", "--format", "csv"]).is_err());
        assert!(run_args(&["qgroup", "--p", "2", "--alpha", "1/3", "--beta", "1", "--sl"]).is_err());
        assert_eq!(main_with_args(["pga", "potts", "--p", "0", "--sites", "3", "--x", "2"]), 2);
    }

    #[test]
    fn qgroup_sl() {
        let out = run_args(&["qgroup", "--p", "2", "--alpha", "1/2", "--beta", "2", "--sl"]).unwrap();
        assert!(out.success);
        let v: Value = serde_json::from_str(&out.document).unwrap();
        assert_eq!(v["results"]["qdet"]["coeffs"][0], json!("1/1"));
    }

    #[test]
    fn heat_convergence() {
        let out = run_args(&[
            "heat", "--p", "2", "--h", "0,1,1", "--time", "1", "--steps", "16", "--convergence",
        ])
        .unwrap();
        assert!(out.success, "{}", out.document);
    }

    #[test]
    fn repr_dump() {
        let out = run_args(&["repr", "--p", "1", "--dump", "theta"]).unwrap();
        let v: Value = serde_json::from_str(&out.document).unwrap();
        assert_eq!(v["results"]["theta"]["dim"], json!(2));
        assert!(v["results"].get("g").is_none());
    }
}
