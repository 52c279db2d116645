//! `netlimit`: limits, certificates, Riemann sums and axiom checks from the
//! command line.

mod format;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netlimit::axioms::{run_all, EnvelopeOperator, LimitOperator, MonotoneFirstOperator};
use netlimit::expr::{evaluate, parse, Ast, ParseError};
use netlimit::{
    epsilon_delta_certificate, estimate_limit, riemann_stieltjes_net, Direction, EstimateConfig, LimitError,
    LimitVerdict, TagRule,
};
use serde_json::{json, Value};

use format::{delta_text, entry_json, sig6, verdict_exit, verdict_line};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 1;
pub const EXIT_EXTENDED: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_EVALUATION: u8 = 4;
pub const EXIT_CERTIFICATION: u8 = 5;

const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "netlimit", version, about = "Limits of real functions along directed sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct EstimateFlags {
    /// Envelope width accepted as convergence
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Chain steps
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Geometric ratio of point-direction chains
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

impl EstimateFlags {
    fn config(&self) -> EstimateConfig {
        EstimateConfig {
            tolerance: self.tol,
            max_steps: self.steps,
            ratio: self.ratio,
            ..EstimateConfig::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the limit of EXPR along a direction
    #[command(allow_negative_numbers = true)]
    Limit {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// left:<x0> | right:<x0> | both:<x0> | inf | -inf | seq | riemann:<a>:<b>
        #[arg(long, allow_hyphen_values = true)]
        dir: Direction,
        #[command(flatten)]
        flags: EstimateFlags,
    },
    /// Certify |EXPR - value| <= eps on a tail, for each eps
    #[command(allow_negative_numbers = true)]
    Certify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: Direction,
        #[arg(long)]
        value: f64,
        /// Comma-separated epsilons
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[command(flatten)]
        flags: EstimateFlags,
    },
    /// Limit of Riemann-Stieltjes sums of F against the integrator over [A, B]
    #[command(allow_negative_numbers = true)]
    Riemann {
        #[arg(allow_hyphen_values = true)]
        f: String,
        a: f64,
        b: f64,
        #[arg(long, default_value = "x")]
        integrator: String,
        /// Tag point in each cell: left, mid or right
        #[arg(long, default_value = "mid")]
        tag: TagRule,
        #[command(flatten)]
        flags: EstimateFlags,
    },
    /// Run the axiom property checks
    Axioms {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "left:0,right:0,both:0,inf,-inf,seq"
        )]
        dirs: Vec<Direction>,
        #[arg(long, env = "NETLIMIT_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Text or JSON written to stdout, plus the exit status.
struct Outcome {
    code: u8,
    text: String,
}

impl Outcome {
    fn new(code: u8, text: impl Into<String>) -> Self {
        Outcome { code, text: text.into() }
    }

    fn json(code: u8, v: &Value) -> Self {
        Outcome::new(code, serde_json::to_string_pretty(v).expect("JSON values always serialize"))
    }
}

fn parse_failure(source: &str, e: &ParseError, json: bool) -> Outcome {
    if json {
        return Outcome::json(
            EXIT_PARSE,
            &json!({"error": {"kind": "parse", "message": e.to_string(), "offset": e.offset, "input": source}}),
        );
    }
    let caret = format!("{}^", " ".repeat(e.offset));
    Outcome::new(EXIT_PARSE, format!("error: {e}\n  {source}\n  {caret}"))
}

fn limit_error_code(e: &LimitError) -> u8 {
    match e {
        LimitError::Param { .. } | LimitError::Domain { .. } => EXIT_PARSE,
        LimitError::CertificationFailure { .. } => EXIT_CERTIFICATION,
        _ => EXIT_EVALUATION,
    }
}

fn limit_failure(e: &LimitError, json: bool) -> Outcome {
    let code = limit_error_code(e);
    if json {
        let mut err = json!({"kind": error_kind(e), "message": e.to_string()});
        if let LimitError::CertificationFailure { epsilon, .. } = e {
            err["epsilon"] = json!(epsilon);
        }
        return Outcome::json(code, &json!({ "error": err }));
    }
    Outcome::new(code, format!("error: {e}"))
}

fn error_kind(e: &LimitError) -> &'static str {
    match e {
        LimitError::Param { .. } => "param",
        LimitError::Domain { .. } => "domain",
        LimitError::Evaluation { .. } => "evaluation",
        LimitError::CertificationFailure { .. } => "certification_failure",
        _ => "limit",
    }
}

fn compile(source: &str, json: bool) -> Result<Ast, Outcome> {
    parse(source).map_err(|e| parse_failure(source, &e, json))
}

fn verdict_json(verdict: &LimitVerdict, trace: &netlimit::EnvelopeTrace, cfg: &EstimateConfig, dir: &Direction) -> Value {
    let bounds = match verdict {
        LimitVerdict::Oscillates { liminf, limsup } => json!({"liminf": liminf, "limsup": limsup}),
        _ => Value::Null,
    };
    let reason = match verdict {
        LimitVerdict::Inconclusive(r) => json!(r),
        _ => Value::Null,
    };
    json!({
        "verdict": verdict.name(),
        "value": verdict.limit(),
        "bounds": bounds,
        "reason": reason,
        "error_bound": trace.error_bound(),
        "direction": dir,
        "trace": trace,
        "config": cfg,
    })
}

fn cmd_limit(expr: &str, dir: &Direction, flags: &EstimateFlags) -> Outcome {
    let ast = match compile(expr, flags.json) {
        Ok(a) => a,
        Err(o) => return o,
    };
    let cfg = flags.config();
    match estimate_limit(&ast.to_net(), dir, &cfg) {
        Err(e) => limit_failure(&e, flags.json),
        Ok((verdict, trace)) => {
            let code = verdict_exit(&verdict);
            if flags.json {
                Outcome::json(code, &verdict_json(&verdict, &trace, &cfg, dir))
            } else {
                Outcome::new(code, verdict_line(&verdict, &trace, &cfg))
            }
        }
    }
}

fn cmd_certify(expr: &str, dir: &Direction, value: f64, eps: &[f64], flags: &EstimateFlags) -> Outcome {
    let ast = match compile(expr, flags.json) {
        Ok(a) => a,
        Err(o) => return o,
    };
    let cfg = flags.config();
    let cert = match epsilon_delta_certificate(&ast.to_net(), dir, value, eps, &cfg) {
        Ok(c) => c,
        Err(e) => return limit_failure(&e, flags.json),
    };
    if flags.json {
        let entries: Vec<Value> = cert.entries.iter().map(|e| entry_json(dir, e)).collect();
        return Outcome::json(
            EXIT_OK,
            &json!({"certificate": {"limit": cert.limit, "entries": entries}, "direction": dir, "config": cfg}),
        );
    }
    let mut text = format!("Certified: limit {} along {dir}", sig6(cert.limit));
    for e in &cert.entries {
        text.push_str(&format!(
            "\n  eps={}: {} (anchor {}, {} probes)",
            sig6(e.epsilon),
            delta_text(dir, &e.anchor),
            format::point_text(&e.anchor),
            e.samples
        ));
    }
    Outcome::new(EXIT_OK, text)
}

fn cmd_riemann(f: &str, a: f64, b: f64, integrator: &str, tag: TagRule, flags: &EstimateFlags) -> Outcome {
    let (fa, ga) = match (compile(f, flags.json), compile(integrator, flags.json)) {
        (Ok(fa), Ok(ga)) => (fa, ga),
        (Err(o), _) | (_, Err(o)) => return o,
    };
    let dir = match Direction::partitions_of(a, b) {
        Ok(d) => d.with_tag(tag),
        Err(e) => return limit_failure(&e, flags.json),
    };
    let label = format!("sum {fa} d{ga}");
    let net = riemann_stieltjes_net(label, move |x| evaluate(&fa, x), move |x| evaluate(&ga, x), &dir)
        .expect("partition direction");
    let cfg = flags.config();
    match estimate_limit(&net, &dir, &cfg) {
        Err(e) => limit_failure(&e, flags.json),
        Ok((verdict, trace)) => {
            let code = verdict_exit(&verdict);
            let mesh = trace
                .last()
                .and_then(|s| s.x.as_partition())
                .map(|p| p.mesh());
            if flags.json {
                let mut v = verdict_json(&verdict, &trace, &cfg, &dir);
                v["final_mesh"] = json!(mesh);
                v["tag"] = json!(tag);
                Outcome::json(code, &v)
            } else {
                let mut text = verdict_line(&verdict, &trace, &cfg);
                if let Some(m) = mesh {
                    text.push_str(&format!("\nfinal mesh: {}", sig6(m)));
                }
                Outcome::new(code, text)
            }
        }
    }
}

fn cmd_axioms(dirs: &[Direction], seed: u64, json: bool) -> Outcome {
    let envelope = EnvelopeOperator::default();
    let monotone = MonotoneFirstOperator::default();
    let ops: [&dyn LimitOperator; 2] = [&envelope, &monotone];
    let reports = run_all(&ops, dirs, seed);
    let all_pass = reports.iter().all(|r| r.pass);
    let code = if all_pass { EXIT_OK } else { EXIT_EXTENDED };
    if json {
        return Outcome::json(
            code,
            &json!({"seed": seed, "directions": dirs, "all_pass": all_pass, "axiom_reports": reports}),
        );
    }
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "{} {:<24} {:<8} {:<30} cases={} skipped={}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.axiom.title(),
            r.direction,
            r.operator,
            r.cases,
            r.skipped
        ));
        for v in &r.violations {
            text.push_str(&format!(
                "     violation: {} — expected {}, observed {}\n",
                v.function, v.expected, v.observed
            ));
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    text.push_str(&format!("{passed}/{} checks passed (seed {seed})", reports.len()));
    Outcome::new(code, text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Limit { expr, dir, flags } => cmd_limit(expr, dir, flags),
        Command::Certify {
            expr,
            dir,
            value,
            eps,
            flags,
        } => cmd_certify(expr, dir, *value, eps, flags),
        Command::Riemann {
            f,
            a,
            b,
            integrator,
            tag,
            flags,
        } => cmd_riemann(f, *a, *b, integrator, *tag, flags),
        Command::Axioms { dirs, seed, json } => cmd_axioms(dirs, *seed, *json),
    };
    if outcome.code == EXIT_PARSE || outcome.code == EXIT_EVALUATION || outcome.code == EXIT_CERTIFICATION {
        if outcome.text.starts_with('{') {
            println!("{}", outcome.text);
        } else {
            eprintln!("{}", outcome.text);
        }
    } else {
        println!("{}", outcome.text);
    }
    ExitCode::from(outcome.code)
}
