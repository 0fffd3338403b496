//! Command-line front end for the `padic-potts` library.
//!
//! [`main_with`] is the whole program minus process plumbing: it parses the
//! arguments, runs one request and returns the exit code together with the
//! text for standard output. Reports are JSON with sorted keys (or an
//! aligned key/value table) and embed the request that produced them.

mod report;

pub use report::*;

use std::fmt;

use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use padic_potts::potts::{
    classify_theta_1mq, enumerate_for_m, enumerate_tipgm, generic_cubic_solutions, theta_1pq2_case,
    GenericRegime, MeasureDescriptor, PottsParameters, ThetaCase,
};
use padic_potts::roots::{kth_root_decide, sqrt_decide};
use padic_potts::tree::{
    boundedness_verdict, build_volume, check_compatibility, phase_transition_verdict, BoundaryField,
};
use padic_potts::{Error, ExactRational, PadicContext};

/// Relative precision when neither `--prec` nor `PADIC_PREC` is given.
pub const DEFAULT_PREC: u32 = 20;

/// Exit code for domain and precondition errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Root,
    Classify,
    Enumerate,
    BruteSystem,
    Compat,
    Boundedness,
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcommand::Root => "root",
            Subcommand::Classify => "classify",
            Subcommand::Enumerate => "enumerate",
            Subcommand::BruteSystem => "brute-system",
            Subcommand::Compat => "compat",
            Subcommand::Boundedness => "boundedness",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// One invocation. Rationals stay as the strings given so the echo in the
/// report is exactly what was asked for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRequest {
    pub subcommand: Subcommand,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    pub prec: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mod_exp: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub format: Format,
}

impl RunRequest {
    pub fn new(subcommand: Subcommand) -> Self {
        RunRequest {
            subcommand,
            p: None,
            q: None,
            k: None,
            m: None,
            theta: None,
            a: None,
            prec: DEFAULT_PREC,
            mod_exp: None,
            n: None,
            format: Format::Json,
        }
    }

    /// Rejects parameters the subcommand does not take and reports the
    /// first missing one it needs.
    pub fn validate(&self) -> Result<(), String> {
        let (needed, allowed): (&[&str], &[&str]) = match self.subcommand {
            Subcommand::Root => (&["p", "k", "a"], &[]),
            Subcommand::Classify => (&["p", "q", "k", "m", "theta"], &[]),
            Subcommand::Enumerate => (&["p", "q", "k", "theta"], &[]),
            Subcommand::BruteSystem => (&["p", "q", "k", "theta"], &["mod-exp"]),
            Subcommand::Compat => (&["p", "q", "k", "theta", "n"], &["m"]),
            Subcommand::Boundedness => (&["p", "q", "k", "theta"], &["m"]),
        };
        let given = [
            ("p", self.p.is_some()),
            ("q", self.q.is_some()),
            ("k", self.k.is_some()),
            ("m", self.m.is_some()),
            ("theta", self.theta.is_some()),
            ("a", self.a.is_some()),
            ("mod-exp", self.mod_exp.is_some()),
            ("n", self.n.is_some()),
        ];
        for (name, present) in given {
            let wanted = needed.contains(&name) || allowed.contains(&name);
            if present && !wanted {
                return Err(format!("{} does not take --{name}", self.subcommand));
            }
            if !present && needed.contains(&name) {
                return Err(format!("{} needs --{name}", self.subcommand));
            }
        }
        if self.prec < PadicContext::MIN_PRECISION {
            return Err(format!(
                "precision {} is below the minimum of {}",
                self.prec,
                PadicContext::MIN_PRECISION
            ));
        }
        Ok(())
    }
}

#[derive(Parser)]
#[command(
    name = "padic-potts",
    version,
    about = "Exact reports on translation-invariant p-adic Gibbs measures of the Potts model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Relative p-adic precision N (overrides PADIC_PREC).
    #[arg(long)]
    prec: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Model {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// Order of the Cayley tree.
    #[arg(long)]
    k: u64,
    /// Coupling exp_p(J) as "num/den" or an integer.
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Solvability of x^k = a in Q_p and the roots.
    Root {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        /// Radicand as "num/den" or an integer.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed points of f_m in E_p for one subset size m.
    Classify {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        common: Common,
    },
    /// All measures reachable through one-subset fields.
    Enumerate {
        #[command(flatten)]
        model: Model,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive solutions of the fixed-point system modulo p^mod-exp.
    BruteSystem {
        #[command(flatten)]
        model: Model,
        #[arg(long = "mod-exp", default_value_t = 4)]
        mod_exp: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Compatibility of the finite-volume measures at radius n.
    Compat {
        #[command(flatten)]
        model: Model,
        /// Restrict to fields with |M| = m (0 is the trivial field).
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Partition-function norms and the phase-transition verdict.
    Boundedness {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

fn apply_common(req: &mut RunRequest, common: Common, env_prec: Option<u32>) {
    req.prec = common.prec.or(env_prec).unwrap_or(DEFAULT_PREC);
    req.format = common.format;
}

fn apply_model(req: &mut RunRequest, model: Model) {
    req.p = Some(model.p);
    req.q = Some(model.q);
    req.k = Some(model.k);
    req.theta = Some(model.theta);
}

fn request_from(cli: Cli, env_prec: Option<u32>) -> RunRequest {
    match cli.command {
        Command::Root { p, k, a, common } => {
            let mut r = RunRequest::new(Subcommand::Root);
            r.p = Some(p);
            r.k = Some(k);
            r.a = Some(a);
            apply_common(&mut r, common, env_prec);
            r
        }
        Command::Classify { model, m, common } => {
            let mut r = RunRequest::new(Subcommand::Classify);
            apply_model(&mut r, model);
            r.m = Some(m);
            apply_common(&mut r, common, env_prec);
            r
        }
        Command::Enumerate { model, common } => {
            let mut r = RunRequest::new(Subcommand::Enumerate);
            apply_model(&mut r, model);
            apply_common(&mut r, common, env_prec);
            r
        }
        Command::BruteSystem {
            model,
            mod_exp,
            common,
        } => {
            let mut r = RunRequest::new(Subcommand::BruteSystem);
            apply_model(&mut r, model);
            r.mod_exp = Some(mod_exp);
            apply_common(&mut r, common, env_prec);
            r
        }
        Command::Compat {
            model,
            m,
            n,
            common,
        } => {
            let mut r = RunRequest::new(Subcommand::Compat);
            apply_model(&mut r, model);
            r.m = m;
            r.n = Some(n);
            apply_common(&mut r, common, env_prec);
            r
        }
        Command::Boundedness { model, m, common } => {
            let mut r = RunRequest::new(Subcommand::Boundedness);
            apply_model(&mut r, model);
            r.m = m;
            apply_common(&mut r, common, env_prec);
            r
        }
    }
}

/// Exit code and standard-output text for one invocation. `args` includes
/// the program name; `env_prec` is the raw value of `PADIC_PREC`.
pub fn main_with<I, T>(args: I, env_prec: Option<&str>) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => return (0, e.to_string()),
        Err(e) => {
            return (
                EXIT_ERROR,
                error_json(&e.kind().to_string(), &e.to_string()),
            )
        }
    };
    let env_prec = match env_prec.map(|s| s.trim().parse::<u32>()) {
        None => None,
        Some(Ok(v)) => Some(v),
        Some(Err(_)) => {
            return (
                EXIT_ERROR,
                error_json("invalid PADIC_PREC", env_prec.unwrap_or_default()),
            )
        }
    };
    run(&request_from(cli, env_prec))
}

fn error_json(error: &str, detail: &str) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("error".into(), Value::String(error.to_string()));
    let detail = detail.trim();
    if !detail.is_empty() && detail != error {
        obj.insert("detail".into(), Value::String(detail.to_string()));
    }
    format!("{}\n", Value::Object(obj))
}

/// Runs a request: exit 0 with the report, or exit 2 with `{"error": ...}`.
pub fn run(req: &RunRequest) -> (i32, String) {
    match compute(req) {
        Ok(report) => match render(&report, req.format) {
            Ok(text) => (0, text),
            Err(e) => (EXIT_ERROR, error_json(&e, "")),
        },
        Err(e) => (EXIT_ERROR, error_json(&e, "")),
    }
}

fn domain(e: Error) -> String {
    e.to_string()
}

fn rational(name: &str, s: &str) -> Result<ExactRational, String> {
    s.parse().map_err(|e: Error| format!("--{name}: {e}"))
}

fn params(req: &RunRequest) -> Result<PottsParameters, String> {
    let theta = rational("theta", req.theta.as_deref().unwrap_or_default())?;
    PottsParameters::new(
        req.p.unwrap_or_default(),
        req.q.unwrap_or_default(),
        req.k.unwrap_or_default(),
        theta,
    )
    .map_err(domain)
}

fn context(req: &RunRequest) -> Result<PadicContext, String> {
    PadicContext::new(req.p.unwrap_or_default(), req.prec).map_err(domain)
}

/// The report for a validated request.
pub fn compute(req: &RunRequest) -> Result<Report, String> {
    req.validate()?;
    let ctx = context(req)?;
    match req.subcommand {
        Subcommand::Root => root(req, &ctx).map(Report::Root),
        Subcommand::Classify => classify(req, &ctx).map(Report::Classify),
        Subcommand::Enumerate => enumerate(req, &ctx).map(Report::Enumerate),
        Subcommand::BruteSystem => brute_system(req).map(Report::BruteSystem),
        Subcommand::Compat => compat(req, &ctx).map(Report::Compat),
        Subcommand::Boundedness => boundedness(req, &ctx).map(Report::Boundedness),
    }
}

fn root(req: &RunRequest, ctx: &PadicContext) -> Result<RootOutput, String> {
    let a = ctx.embed(&rational("a", req.a.as_deref().unwrap_or_default())?);
    let k = req.k.unwrap_or_default();
    let report = match k {
        0 | 1 => return Err(format!("k = {k} must be at least 2")),
        2 => sqrt_decide(&a, ctx),
        _ => kth_root_decide(&a, k, ctx),
    }
    .map_err(domain)?;
    Ok(RootOutput {
        request: req.clone(),
        exists: report.exists,
        criterion: report.criterion,
        roots: report.roots.iter().map(|r| r.to_repr()).collect(),
    })
}

fn theta_case_label(case: ThetaCase) -> &'static str {
    match case {
        ThetaCase::OneMinusQ => "1-q",
        ThetaCase::OnePlusHalfQ => "1+q/2",
        ThetaCase::Generic => "generic",
    }
}

fn classify(req: &RunRequest, ctx: &PadicContext) -> Result<ClassifyOutput, String> {
    let pr = params(req)?;
    let m = req.m.unwrap_or_default();
    let (measures, singular, unresolved) = enumerate_for_m(m, &pr, ctx).map_err(domain)?;
    let subcase = match (pr.k, pr.theta_case()) {
        (3, ThetaCase::OneMinusQ) => Some(format!("{:?}", classify_theta_1mq(pr.p, pr.q, m).case)),
        (3, ThetaCase::OnePlusHalfQ) => Some(format!("{:?}", theta_1pq2_case(pr.p, pr.q, m))),
        (3, ThetaCase::Generic) if pr.p > 3 => {
            let out = generic_cubic_solutions(pr.p, pr.q, m, &pr.theta, ctx).map_err(domain)?;
            (out.regime != GenericRegime::NotApplicable).then(|| format!("{:?}", out.regime))
        }
        _ => None,
    };
    Ok(ClassifyOutput {
        request: req.clone(),
        theta_case: theta_case_label(pr.theta_case()).into(),
        subcase,
        count: measures.len(),
        solutions: measures
            .iter()
            .map(|d| d.z.truncated(req.prec).to_repr())
            .collect(),
        singular: singular
            .into_iter()
            .map(|s| SingularOutput {
                m: s.m,
                reason: s.reason,
            })
            .collect(),
        unresolved,
    })
}

fn to_u64(v: u128, what: &str) -> Result<u64, String> {
    u64::try_from(v).map_err(|_| format!("{what} exceeds 64 bits"))
}

fn enumerate(req: &RunRequest, ctx: &PadicContext) -> Result<EnumerateOutput, String> {
    let pr = params(req)?;
    let e = enumerate_tipgm(&pr, ctx).map_err(domain)?;
    Ok(EnumerateOutput {
        request: req.clone(),
        count_lower_bound: to_u64(e.count_lower_bound, "count_lower_bound")?,
        count_nonsingular: to_u64(e.count_nonsingular, "count_nonsingular")?,
        exact: e.exact,
        unresolved: e.unresolved,
        measures: e
            .measures
            .iter()
            .map(|d| MeasureOutput::new(d, req.prec))
            .collect::<Result<_, _>>()?,
        singular: e
            .singular
            .into_iter()
            .map(|s| SingularOutput {
                m: s.m,
                reason: s.reason,
            })
            .collect(),
    })
}

fn brute_system(req: &RunRequest) -> Result<BruteSystemOutput, String> {
    let pr = params(req)?;
    let r =
        padic_potts::potts::brute_force_system(&pr, req.mod_exp.unwrap_or(4)).map_err(domain)?;
    Ok(BruteSystemOutput {
        request: req.clone(),
        modulus: r.modulus,
        digits: r.digits,
        all_have_form: r.all_have_form(),
        only_all_ones: r.only_all_ones(),
        tuples: r.tuples,
    })
}

/// Enumerated measures, optionally restricted to subset size `m`.
fn selected(
    req: &RunRequest,
    pr: &PottsParameters,
    ctx: &PadicContext,
) -> Result<Vec<MeasureDescriptor>, String> {
    let e = enumerate_tipgm(pr, ctx).map_err(domain)?;
    let picked: Vec<_> = e
        .measures
        .into_iter()
        .filter(|d| req.m.is_none_or(|m| d.m == m))
        .collect();
    if picked.is_empty() {
        return Err(match req.m {
            Some(m) => format!("no measure with m = {m}"),
            None => "no measure to report on".into(),
        });
    }
    Ok(picked)
}

fn compat(req: &RunRequest, ctx: &PadicContext) -> Result<CompatOutput, String> {
    let pr = params(req)?;
    let n = req.n.unwrap_or_default();
    if n == 0 {
        return Err("compatibility needs n >= 1".into());
    }
    let vol = build_volume(pr.k, n).map_err(domain)?;
    let mut results = Vec::new();
    for d in selected(req, &pr, ctx)? {
        let field = BoundaryField::from_descriptor(&d, pr.q).map_err(domain)?;
        let r = check_compatibility(&vol, &field, &pr, ctx).map_err(domain)?;
        results.push(CompatEntry {
            m: d.m,
            z: d.z.truncated(req.prec).to_repr(),
            n: r.n,
            holds: r.holds,
            max_residual_valuation: r.max_residual_valuation,
        });
    }
    Ok(CompatOutput {
        request: req.clone(),
        results,
    })
}

fn boundedness(req: &RunRequest, ctx: &PadicContext) -> Result<BoundednessOutput, String> {
    let pr = params(req)?;
    let mut measures = Vec::new();
    for d in selected(req, &pr, ctx)? {
        let r = boundedness_verdict(&pr, &d).map_err(domain)?;
        measures.push(BoundednessEntry {
            m: d.m,
            z: d.z.truncated(req.prec).to_repr(),
            bounded: r.bounded,
            z_norms: r.z_norms,
            norms_agree: r.norms_agree,
        });
    }
    let t = phase_transition_verdict(&pr, ctx).map_err(domain)?;
    Ok(BoundednessOutput {
        request: req.clone(),
        measures,
        phase_transition: PhaseTransitionOutput {
            transition: t.transition,
            measures: t.measures,
            bounded: t.bounded,
            unbounded: t.unbounded,
            witness: t.witness,
            note: t.note,
        },
    })
}

/// JSON with sorted keys, or an aligned `key  value` table.
pub fn render(report: &Report, format: Format) -> Result<String, String> {
    // serde_json's map is ordered, so the keys come out sorted
    let value = serde_json::to_value(report).map_err(|e| e.to_string())?;
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Table => Ok(table(&value)),
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => items
            .iter()
            .all(|i| !i.is_array() && !i.is_object())
            .then(|| {
                let parts: Vec<String> = items.iter().filter_map(scalar).collect();
                format!("[{}]", parts.join(", "))
            }),
        Value::Object(_) => None,
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    if let Some(s) = scalar(v) {
        rows.push((prefix.to_string(), s));
        return;
    }
    match v {
        Value::Object(map) => {
            for (key, child) in map {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(&path, child, rows);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, rows);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

fn table(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &str) -> (i32, String) {
        main_with(
            std::iter::once("padic-potts").chain(args.split_whitespace()),
            None,
        )
    }

    #[test]
    fn validation_checks_arity() {
        let mut r = RunRequest::new(Subcommand::Root);
        r.p = Some(7);
        r.k = Some(2);
        assert_eq!(r.validate(), Err("root needs --a".into()));
        r.a = Some("2".into());
        assert!(r.validate().is_ok());
        r.q = Some(3);
        assert_eq!(r.validate(), Err("root does not take --q".into()));
        r.q = None;
        r.prec = 3;
        assert!(r.validate().is_err());
    }

    #[test]
    fn env_precision_is_a_fallback() {
        let args = ["padic-potts", "root", "--p", "7", "--k", "2", "--a", "2"];
        let (_, out) = main_with(args, Some("9"));
        assert!(out.contains("\"prec\": 9"));
        let (_, out) = main_with(args.iter().chain(&["--prec", "6"]), Some("9"));
        assert!(out.contains("\"prec\": 6"));
        let (code, out) = main_with(args, Some("many"));
        assert_eq!(code, EXIT_ERROR);
        assert!(out.contains("PADIC_PREC"));
    }

    #[test]
    fn negative_theta_parses() {
        let (code, out) = call("classify --p 2 --q 4 --k 3 --m 1 --theta -3 --prec 12");
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("\"theta_case\": \"1-q\""));
    }

    #[test]
    fn table_rows_are_aligned() {
        let (code, out) = call("root --p 7 --k 2 --a 2 --prec 6 --format table");
        assert_eq!(code, 0);
        // keys carry no spaces, so the value starts after the first gap
        let starts: Vec<usize> = out
            .lines()
            .map(|l| {
                let gap = l.find(' ').unwrap();
                gap + l[gap..].len() - l[gap..].trim_start().len()
            })
            .collect();
        assert!(starts.windows(2).all(|w| w[0] == w[1]), "{out}");
        assert!(out.lines().any(|l| l.starts_with("exists ")));
        assert!(out.lines().any(|l| l.starts_with("roots[0].digits ")));
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out) = call("--help");
        assert_eq!(code, 0);
        assert!(out.contains("enumerate"));
    }

    #[test]
    fn unknown_flag_is_an_error_object() {
        let (code, out) = call("enumerate --p 2");
        assert_eq!(code, EXIT_ERROR);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v.get("error").is_some());
    }
}
