//! Command-line front end.
//!
//! Every subcommand prints either plain text or, with `--json`, a single
//! object `{command, group, inputs, result, elapsed_ms}`. Big numbers are
//! printed as decimal strings.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 failed
//! verification suite.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cyclo;
use crate::error::Error;
use crate::exactdet;
use crate::group::{Assignment, FiniteGroup};
use crate::search::{self, SearchConfig, DEFAULT_MAX_EVALS};
use crate::suites::{self, Suite, SuiteOptions};
use crate::theorems;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Environment variable overriding the search evaluation ceiling.
pub const MAX_EVALS_ENV: &str = "GROUPDET_MAX_EVALS";

#[derive(Debug, Parser)]
#[command(name = "groupdet", version, about = "Integer group determinants")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for scans and searches; output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group determinant at an integer point.
    Det {
        group: String,
        #[arg(allow_negative_numbers = true)]
        coeffs: Vec<String>,
        /// JSON array of coefficients instead of inline values.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Character factors (abelian) or Frobenius parts (Q8, D4).
    Factor {
        group: String,
        #[arg(allow_negative_numbers = true)]
        coeffs: Vec<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Decide whether a prime is a group determinant.
    Decide { group: String, q: String },
    /// Find a witness assignment for a target value.
    Search {
        group: String,
        #[arg(allow_negative_numbers = true)]
        target: String,
        #[arg(long, default_value_t = 1)]
        bound: u32,
        /// Deepen the radius up to this cap.
        #[arg(long)]
        deepen: Option<u32>,
    },
    /// All determinant values over a coefficient box.
    Scan {
        group: String,
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        primes: bool,
    },
    /// Wieferich test for one prime, or a scan up to a limit.
    Wieferich {
        #[arg(conflicts_with = "limit", required_unless_present = "limit")]
        p: Option<String>,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Run a verification suite: dedekind, theorem1, cor5, alphabeta,
    /// wieferich, theorem3, frobenius, monoid, or all.
    Verify {
        suite: String,
        /// Group for the theorem3 suite (Q8 or D4); both when omitted.
        #[arg(long)]
        group: Option<String>,
        /// Coefficient radius for the theorem3 suite.
        #[arg(long, default_value_t = 2)]
        bound: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a CLI invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GroupSpec { .. } | Error::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

struct Outcome {
    command: &'static str,
    group: Option<String>,
    inputs: Value,
    result: Value,
    text: String,
    code: i32,
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), first_line(&rendered))
            } else {
                (rendered, String::new())
            };
            return CliOutput { code, stdout, stderr };
        }
    };
    let start = Instant::now();
    let json_mode = cli.json;
    match execute(cli) {
        Ok(out) => {
            let stdout = if json_mode {
                let record = json!({
                    "command": out.command,
                    "group": out.group,
                    "inputs": out.inputs,
                    "result": out.result,
                    "elapsed_ms": start.elapsed().as_millis() as u64,
                });
                format!("{record}\n")
            } else {
                out.text
            };
            CliOutput {
                code: out.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(Failure::Usage(msg)) => CliOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => CliOutput {
            code: EXIT_DOMAIN,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn first_line(s: &str) -> String {
    format!("{}\n", s.lines().next().unwrap_or_default())
}

fn parse_group(spec: &str) -> Result<FiniteGroup, Failure> {
    FiniteGroup::parse(spec).map_err(Failure::from)
}

fn parse_int(token: &str, what: &str) -> Result<BigInt, Failure> {
    token
        .parse::<BigInt>()
        .map_err(|_| Failure::Usage(format!("{what} `{token}` is not an integer")))
}

fn read_coeffs(group: &FiniteGroup, inline: &[String], file: Option<&PathBuf>) -> Result<Assignment, Failure> {
    let values: Vec<BigInt> = match (inline.is_empty(), file) {
        (false, Some(_)) => {
            return Err(Failure::Usage("give coefficients inline or with --file, not both".into()));
        }
        (_, None) => inline
            .iter()
            .map(|t| parse_int(t, "coefficient"))
            .collect::<Result<_, _>>()?,
        (true, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read `{}`: {e}", path.display())))?;
            let parsed: Value = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("`{}` is not JSON: {e}", path.display())))?;
            let items = parsed
                .as_array()
                .ok_or_else(|| Failure::Usage(format!("`{}` must hold one JSON array", path.display())))?;
            items
                .iter()
                .map(|item| match item {
                    Value::Number(n) => parse_int(&n.to_string(), "coefficient"),
                    Value::String(s) => parse_int(s, "coefficient"),
                    other => Err(Failure::Usage(format!("coefficient `{other}` is not an integer"))),
                })
                .collect::<Result<_, _>>()?
        }
    };
    if values.len() != group.order() {
        return Err(Failure::Usage(format!(
            "{group} needs {} coefficients, got {}",
            group.order(),
            values.len()
        )));
    }
    Ok(Assignment::new(values))
}

fn max_evals() -> Result<u64, Failure> {
    match std::env::var(MAX_EVALS_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_EVALS_ENV}=`{v}` is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_MAX_EVALS),
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn execute(cli: Cli) -> Result<Outcome, Failure> {
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(Failure::Usage("--workers must be at least 1".into()));
    }
    match cli.command {
        Command::Det { group, coeffs, file } => {
            let grp = parse_group(&group)?;
            let a = read_coeffs(&grp, &coeffs, file.as_ref())?;
            let value = exactdet::theta(&grp, &a)?;
            Ok(Outcome {
                command: "det",
                group: Some(grp.to_string()),
                inputs: json!({ "coeffs": strings(a.values()) }),
                result: json!({ "theta": value.to_string(), "method": "direct-determinant" }),
                text: format!("{value}\n"),
                code: EXIT_OK,
            })
        }
        Command::Factor { group, coeffs, file } => {
            let grp = parse_group(&group)?;
            let a = read_coeffs(&grp, &coeffs, file.as_ref())?;
            let (result, text) = if grp.is_abelian() {
                let chars = cyclo::characters(&grp)?;
                let forms = cyclo::dedekind_factors(&grp, &a)?;
                let value = cyclo::dedekind_theta(&grp, &a)?;
                let mut text = String::new();
                let mut entries = Vec::new();
                for (chi, form) in chars.iter().zip(&forms) {
                    text.push_str(&format!("chi{:?}: {form}\n", chi.exponents));
                    entries.push(json!({ "character": chi.exponents, "value": form.to_string() }));
                }
                text.push_str(&format!("theta = {value}\n"));
                (
                    json!({
                        "kind": "dedekind",
                        "modulus": grp.exponent(),
                        "factors": entries,
                        "theta": value.to_string(),
                    }),
                    text,
                )
            } else {
                let parts = cyclo::frobenius_factors(&grp, &a)?;
                let value = parts.theta();
                (
                    json!({
                        "kind": "frobenius",
                        "linear_part": parts.linear_part.to_string(),
                        "quadratic_det": parts.quadratic_det.to_string(),
                        "theta": value.to_string(),
                    }),
                    format!(
                        "linear_part = {}\nquadratic_det = {}\ntheta = {value}\n",
                        parts.linear_part, parts.quadratic_det
                    ),
                )
            };
            Ok(Outcome {
                command: "factor",
                group: Some(grp.to_string()),
                inputs: json!({ "coeffs": strings(a.values()) }),
                result,
                text,
                code: EXIT_OK,
            })
        }
        Command::Decide { group, q } => {
            let grp = parse_group(&group)?;
            let q_big = parse_int(&q, "prime")?;
            let q_small: u64 = (&q_big).try_into().map_err(|_| {
                if q_big.sign() == num_bigint::Sign::Minus || q_big < BigInt::from(2) {
                    Failure::Domain(Error::Composite(q_big.to_string()))
                } else {
                    Failure::Domain(Error::PrimalityRange { value: q_big.to_string() })
                }
            })?;
            let d = theorems::decide(&grp, q_small)?;
            Ok(Outcome {
                command: "decide",
                group: Some(grp.to_string()),
                inputs: json!({ "q": q_small.to_string() }),
                result: d.to_json(),
                text: format!("{d}\n"),
                code: EXIT_OK,
            })
        }
        Command::Search {
            group,
            target,
            bound,
            deepen,
        } => {
            let grp = parse_group(&group)?;
            let target = parse_int(&target, "target")?;
            let cfg = match deepen {
                Some(cap) => SearchConfig::deepening(bound, cap),
                None => SearchConfig::exhaustive(bound),
            }
            .with_workers(workers)
            .with_max_evals(max_evals()?);
            let witness = search::find_witness(&grp, &target, &cfg)?;
            let text = match &witness {
                Some(w) => format!("{}\n", strings(w.values()).join(" ")),
                None => "none\n".to_string(),
            };
            Ok(Outcome {
                command: "search",
                group: Some(grp.to_string()),
                inputs: json!({
                    "target": target.to_string(),
                    "bound": bound,
                    "deepen": deepen,
                }),
                result: json!({ "witness": witness.map(|w| strings(w.values())) }),
                text,
                code: EXIT_OK,
            })
        }
        Command::Scan { group, bound, primes } => {
            let grp = parse_group(&group)?;
            let cfg = SearchConfig::exhaustive(bound)
                .with_primes(primes)
                .with_workers(workers)
                .with_max_evals(max_evals()?);
            let scan = search::scan_values(&grp, &cfg)?;
            let values = strings(scan.values.keys());
            let text = format!("{}\n", values.join(" "));
            Ok(Outcome {
                command: "scan",
                group: Some(grp.to_string()),
                inputs: json!({ "bound": bound, "primes": primes }),
                result: json!({
                    "scanned": scan.scanned.to_string(),
                    "count": values.len(),
                    "values": values,
                    "witnesses": scan.values.iter().map(|(v, w)| json!({
                        "value": v.to_string(),
                        "witness": strings(w),
                    })).collect::<Vec<_>>(),
                }),
                text,
                code: EXIT_OK,
            })
        }
        Command::Wieferich { p, limit } => match (p, limit) {
            (Some(p), _) => {
                let p_big = parse_int(&p, "prime")?;
                let p_small: u64 = (&p_big)
                    .try_into()
                    .map_err(|_| Failure::Domain(Error::PrimalityRange { value: p_big.to_string() }))?;
                let is_w = theorems::wieferich(p_small)?;
                Ok(Outcome {
                    command: "wieferich",
                    group: None,
                    inputs: json!({ "p": p_small.to_string() }),
                    result: json!({ "p": p_small.to_string(), "wieferich": is_w }),
                    text: format!("{is_w}\n"),
                    code: EXIT_OK,
                })
            }
            (None, Some(limit)) => {
                let found = theorems::wieferich_scan(limit, workers)?;
                Ok(Outcome {
                    command: "wieferich",
                    group: None,
                    inputs: json!({ "limit": limit.to_string() }),
                    result: json!({ "primes": strings(&found) }),
                    text: format!("{}\n", strings(&found).join(" ")),
                    code: EXIT_OK,
                })
            }
            (None, None) => Err(Failure::Usage("give a prime or --limit".into())),
        },
        Command::Verify {
            suite,
            group,
            bound,
            seed,
        } => {
            let selected: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite
                    .parse::<Suite>()
                    .map_err(|_| Failure::Usage(format!("unknown suite `{suite}`")))?]
            };
            let theorem3_groups = match &group {
                Some(spec) => vec![parse_group(spec)?],
                None => Vec::new(),
            };
            let opts = SuiteOptions {
                seed,
                workers,
                theorem3_groups,
                theorem3_bound: bound,
            };
            let mut reports = Vec::new();
            let mut text = format!("seed = {seed}\n");
            for s in selected {
                let report = suites::run(s, &opts)?;
                for check in &report.checks {
                    let tag = if check.passed { "PASS" } else { "FAIL" };
                    text.push_str(&format!("[{tag}] {}: {}\n", report.suite, check.name));
                }
                reports.push(report);
            }
            let passed = reports.iter().all(|r| r.passed());
            text.push_str(if passed { "all checks passed\n" } else { "verification FAILED\n" });
            Ok(Outcome {
                command: "verify",
                group: group.map(|g| g.to_uppercase()),
                inputs: json!({ "suite": suite, "bound": bound, "seed": seed.to_string() }),
                result: json!({
                    "passed": passed,
                    "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                }),
                text,
                code: if passed { EXIT_OK } else { EXIT_VIOLATION },
            })
        }
    }
}
