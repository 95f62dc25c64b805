//! `dalg`: ADEs for combinations of D-algebraic functions.

mod job;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dalg::diff::{diff_reduce, functions_in, rename_function, total_derivative};
use dalg::method1::Levels;
use dalg::oracle::{verify, Combination, OracleConfig, Outcome, Report};
use dalg::syntax::parse_poly;
use dalg::{AdeResult, Error, Poly, Rational, Var};
use serde_json::json;

use job::{Job, Kind, Settings, Which};

#[derive(Parser, Debug)]
#[command(name = "dalg", version, about = "Algebraic differential equations for combinations of D-algebraic functions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// ADE for `w = r(x, y1, ..., yN)` where each yi solves an input.
    Arith,
    /// ADE for f(g(x)); the outer equation comes first.
    Compose,
    /// ADE for `w = r(x, y)` with a single input.
    Unary,
    /// ADE for the compositional inverse, in the variable given by --new-indep.
    Inverse,
    Derivative,
    Antiderivative,
    /// Minimal ADE of the output of a dynamical model given as JSON.
    Sys2min { model: PathBuf },
    /// Compare the ADEs of two sides: plain ADEs or quoted sub-invocations.
    Prove {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Run only the series oracle on a given ADE.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        ade: String,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpArg {
    Arith,
    Compose,
    Unary,
    Inverse,
    Derivative,
    Antiderivative,
    Sys2min,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
    #[value(name = "both")]
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Opts {
    /// Input ADE, or a path to an `.ade` file. Repeatable.
    #[arg(short = 'e', long = "equation", global = true, allow_hyphen_values = true)]
    equation: Vec<String>,
    /// Relation `w = expr`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    rel: Option<String>,
    #[arg(long, value_enum, default_value = "II", global = true)]
    method: MethodArg,
    #[arg(long, default_value = "x", global = true)]
    indep: String,
    #[arg(long, value_delimiter = ',', global = true)]
    params: Vec<String>,
    #[arg(long = "max-j", default_value_t = 6, global = true)]
    max_j: usize,
    /// Seconds per elimination.
    #[arg(long, env = "DALG_TIMEOUT", default_value_t = 120, global = true)]
    timeout: u64,
    #[arg(long, global = true)]
    continue_past_first: bool,
    #[arg(long, global = true)]
    no_verify: bool,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Initial values for the oracle's first run.
    #[arg(long, value_delimiter = ',', global = true)]
    jet: Vec<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Name of the output function.
    #[arg(long, global = true)]
    target: Option<String>,
    /// Independent variable of an inverse.
    #[arg(long, default_value = "y", global = true)]
    new_indep: String,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, e: impl ToString) -> Failure {
        Failure { code, msg: e.to_string() }
    }
}

fn code_of(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Undeclared { .. } => 2,
        Error::Timeout(_) => 3,
        _ => 1,
    }
}

fn fail(e: Error) -> Failure {
    Failure::new(code_of(&e), e)
}

fn usage(e: Error) -> Failure {
    let code = match e {
        Error::Timeout(_) => 3,
        _ => 2,
    };
    Failure::new(code, e)
}

impl Opts {
    fn settings(&self) -> Settings {
        Settings {
            indep: self.indep.clone(),
            params: self.params.clone(),
            method: match self.method {
                MethodArg::I => Which::I,
                MethodArg::II => Which::II,
                MethodArg::Both => Which::Both,
            },
            levels: Levels { max_j: self.max_j, continue_past_first: self.continue_past_first },
            timeout: self.timeout,
            target: self.target.clone(),
            new_indep: self.new_indep.clone(),
        }
    }

    fn oracle(&self) -> Result<OracleConfig, Failure> {
        let mut cfg = OracleConfig::default();
        if !self.jet.is_empty() {
            let vals = self
                .jet
                .iter()
                .map(|s| s.trim().parse::<Rational>().map_err(|_| Failure::new(2, format!("bad jet value `{s}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            cfg.explicit = Some(vals);
        }
        Ok(cfg)
    }
}

fn kind_of(cmd: &Cmd) -> Option<Kind> {
    Some(match cmd {
        Cmd::Arith => Kind::Arith,
        Cmd::Compose => Kind::Compose,
        Cmd::Unary => Kind::Unary,
        Cmd::Inverse => Kind::Inverse,
        Cmd::Derivative => Kind::Derivative,
        Cmd::Antiderivative => Kind::Antiderivative,
        _ => return None,
    })
}

fn op_kind(op: OpArg) -> Option<Kind> {
    Some(match op {
        OpArg::Arith => Kind::Arith,
        OpArg::Compose => Kind::Compose,
        OpArg::Unary => Kind::Unary,
        OpArg::Inverse => Kind::Inverse,
        OpArg::Derivative => Kind::Derivative,
        OpArg::Antiderivative => Kind::Antiderivative,
        OpArg::Sys2min => return None,
    })
}

/// Independent variable of the output of `comb`.
fn output_indep(comb: &Combination, x: Var) -> Var {
    match comb {
        Combination::Inverse { indep, .. } => indep.clone(),
        _ => x,
    }
}

fn render_text(r: &AdeResult, report: Option<&Report>) -> String {
    let mut s = format!("{}\n", r.ade);
    let mut meta = format!("# order {}, degree {}, method {}, {} ms", r.order, r.degree, r.method, r.elapsed_ms);
    if let Some(b) = r.bound {
        meta.push_str(&format!(", bound {b}"));
    }
    if let Some(j) = r.level {
        meta.push_str(&format!(", level j = {j}"));
    }
    s.push_str(&meta);
    s.push('\n');
    if let Some(q) = &r.saturation {
        s.push_str(&format!("# saturation denominator: {q}\n"));
    }
    if let Some(rep) = report {
        for line in rep.to_string().lines() {
            s.push_str(&format!("# {}\n", line.trim_start()));
        }
    }
    s
}

struct Emitted {
    text: String,
    json: serde_json::Value,
    oracle_failed: bool,
}

fn finish(results: Vec<(AdeResult, Option<Report>)>) -> Emitted {
    let mut text = String::new();
    let mut items = Vec::new();
    let mut oracle_failed = false;
    for (mut r, rep) in results {
        if let Some(rep) = &rep {
            r.verified = match rep.outcome {
                Outcome::Pass => Some(true),
                Outcome::Fail => Some(false),
                Outcome::Skipped => None,
            };
            oracle_failed |= rep.outcome == Outcome::Fail;
        }
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&render_text(&r, rep.as_ref()));
        items.push(r.to_json());
    }
    let json = if items.len() == 1 { items.pop().expect("one") } else { serde_json::Value::Array(items) };
    Emitted { text, json, oracle_failed }
}

fn run_job(kind: Kind, opts: &Opts) -> Result<(Job, Vec<Result<AdeResult, Error>>), Failure> {
    let s = opts.settings();
    let job = job::prepare(kind, &opts.equation, opts.rel.as_deref(), &s).map_err(usage)?;
    let results = job::run(&job, &s);
    Ok((job, results))
}

fn compute(kind: Kind, opts: &Opts) -> (Option<Emitted>, Option<Failure>) {
    let (job, results) = match run_job(kind, opts) {
        Ok(v) => v,
        Err(f) => return (None, Some(f)),
    };
    let cfg = match opts.oracle() {
        Ok(c) => c,
        Err(f) => return (None, Some(f)),
    };
    let x = output_indep(&job.comb, opts.settings().x());
    let mut done = Vec::new();
    let mut err = None;
    for r in results {
        match r {
            Ok(r) => {
                let rep = (!opts.no_verify).then(|| verify(&job.comb, &r.ade, &job.target, &x, &cfg));
                done.push((r, rep));
            }
            Err(e) => {
                err.get_or_insert(fail(e));
            }
        }
    }
    let emitted = (!done.is_empty()).then(|| finish(done));
    (emitted, err)
}

fn compute_model(path: &PathBuf, opts: &Opts) -> (Option<Emitted>, Option<Failure>) {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return (None, Some(Failure::new(2, format!("cannot read {}: {e}", path.display())))),
    };
    let m = match job::parse_model(&text) {
        Ok(m) => m,
        Err(e) => return (None, Some(usage(e))),
    };
    let cfg = match opts.oracle() {
        Ok(c) => c,
        Err(f) => return (None, Some(f)),
    };
    let target = job::model_target(&m, opts.target.as_deref());
    match job::sys2min(&m, &target, &opts.settings()) {
        Ok(r) => {
            let rep = (!opts.no_verify).then(|| verify(&Combination::Model(m.clone()), &r.ade, &target, &m.indep, &cfg));
            (Some(finish(vec![(r, rep)])), None)
        }
        Err(e) => (None, Some(fail(e))),
    }
}

/// One side of `prove`: an ADE, its function and, when computed, how it arises.
struct Side {
    ade: Poly,
    func: String,
    comb: Option<Combination>,
    x: Var,
}

const SUBCOMMANDS: [&str; 7] = ["arith", "compose", "unary", "inverse", "derivative", "antiderivative", "sys2min"];

fn side(src: &str, opts: &Opts) -> Result<Side, Failure> {
    if src.split_whitespace().next().is_some_and(|t| SUBCOMMANDS.contains(&t)) {
        let tokens = shlex::split(src).ok_or_else(|| Failure::new(2, format!("unbalanced quotes in `{src}`")))?;
        let sub = Cli::try_parse_from(std::iter::once("dalg".to_string()).chain(tokens)).map_err(|e| Failure::new(2, e))?;
        if let Cmd::Sys2min { model } = &sub.cmd {
            let text = std::fs::read_to_string(model).map_err(|e| Failure::new(2, e))?;
            let m = job::parse_model(&text).map_err(usage)?;
            let func = job::model_target(&m, sub.opts.target.as_deref());
            let r = job::sys2min(&m, &func, &sub.opts.settings()).map_err(fail)?;
            return Ok(Side { ade: r.ade, func, x: m.indep.clone(), comb: Some(Combination::Model(m)) });
        }
        let kind = kind_of(&sub.cmd).expect("listed subcommand");
        let (job, results) = run_job(kind, &sub.opts)?;
        let r = results.into_iter().next().expect("at least one method").map_err(fail)?;
        let x = output_indep(&job.comb, sub.opts.settings().x());
        return Ok(Side { ade: r.ade, func: job.target, comb: Some(job.comb), x });
    }
    let ade = parse_poly(&job::source_text(src).map_err(usage)?, &opts.settings().names()).map_err(usage)?;
    let fs = functions_in(&ade);
    let [func] = fs.as_slice() else {
        return Err(Failure::new(2, format!("`{src}` must involve exactly one function")));
    };
    Ok(Side { func: func.clone(), ade, comb: None, x: opts.settings().x() })
}

fn reduces(r: &Poly, q: &Poly, func: &str, x: &Var) -> Option<String> {
    if diff_reduce(r, q, func, x).is_ok_and(|p| p.is_zero()) {
        return Some(String::new());
    }
    let dr = total_derivative(r, x);
    diff_reduce(&dr, q, func, x).is_ok_and(|p| p.is_zero()).then(|| "derivative of ".to_string())
}

fn prove(lhs: &str, rhs: &str, opts: &Opts) -> Result<(Emitted, bool), Failure> {
    let l = side(lhs, opts)?;
    let mut r = side(rhs, opts)?;
    let rhs_own = r.ade.clone();
    r.ade = rename_function(&r.ade, &r.func, &l.func);
    let f = l.func.clone();
    let x = l.x.clone();
    let mut verdict = None;
    if l.ade.is_proportional(&r.ade) {
        verdict = Some("proportional".to_string());
    } else if let Some(d) = reduces(&l.ade, &r.ade, &f, &x) {
        verdict = Some(format!("{d}lhs reduces to 0 modulo rhs"));
    } else if let Some(d) = reduces(&r.ade, &l.ade, &f, &x) {
        verdict = Some(format!("{d}rhs reduces to 0 modulo lhs"));
    }
    let mut proven = verdict.is_some();
    if verdict.is_none() {
        let cfg = opts.oracle()?;
        let mut outcomes = Vec::new();
        if let Some(c) = &l.comb {
            outcomes.push(verify(c, &r.ade, &f, &x, &cfg).outcome);
        }
        if let Some(c) = &r.comb {
            let back = rename_function(&l.ade, &f, &r.func);
            outcomes.push(verify(c, &back, &r.func, &r.x, &cfg).outcome);
        }
        let agree = outcomes.contains(&Outcome::Pass) && !outcomes.contains(&Outcome::Fail);
        proven = agree;
        verdict = Some(if agree { "series agree".to_string() } else { "not established".to_string() });
    }
    let verdict = verdict.expect("set above");
    let text = format!("lhs: {}\nrhs: {}\nverdict: {verdict}\n", l.ade, rhs_own);
    let json = json!({"lhs": l.ade.to_string(), "rhs": rhs_own.to_string(), "verdict": verdict, "proven": proven});
    Ok((Emitted { text, json, oracle_failed: false }, proven))
}

fn verify_only(ade: &str, op: OpArg, model: Option<&PathBuf>, opts: &Opts) -> Result<Emitted, Failure> {
    let cfg = opts.oracle()?;
    let s = opts.settings();
    let (comb, x, target, ade) = match op_kind(op) {
        Some(kind) => {
            let job = job::prepare(kind, &opts.equation, opts.rel.as_deref(), &s).map_err(usage)?;
            let x = output_indep(&job.comb, s.x());
            let mut names = s.names();
            names.indep = x.name().to_string();
            let p = parse_poly(&job::source_text(ade).map_err(usage)?, &names).map_err(usage)?;
            (job.comb, x, job.target, p)
        }
        None => {
            let path = model.ok_or_else(|| Failure::new(2, "--op sys2min needs --model"))?;
            let m = job::parse_model(&std::fs::read_to_string(path).map_err(|e| Failure::new(2, e))?).map_err(usage)?;
            let target = job::model_target(&m, opts.target.as_deref());
            let mut names = s.names();
            names.indep = m.indep.name().to_string();
            let p = parse_poly(&job::source_text(ade).map_err(usage)?, &names).map_err(usage)?;
            (Combination::Model(m.clone()), m.indep.clone(), target, p)
        }
    };
    let fs = functions_in(&ade);
    if fs.iter().any(|f| *f != target) {
        return Err(Failure::new(2, format!("the ADE must be in `{target}`")));
    }
    let rep = verify(&comb, &ade, &target, &x, &cfg);
    let text = rep.to_string().lines().map(|l| format!("{}\n", l.trim_start())).collect();
    Ok(Emitted { text, json: rep.to_json(), oracle_failed: rep.outcome == Outcome::Fail })
}

fn emit(e: &Emitted, opts: &Opts) -> Result<(), Failure> {
    let body = match opts.format {
        Format::Text => e.text.clone(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&e.json).expect("valid JSON")),
    };
    match &opts.out {
        Some(path) => std::fs::write(path, body).map_err(|err| Failure::new(1, format!("cannot write {}: {err}", path.display()))),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|err| Failure::new(1, err)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.opts;
    let (emitted, failure) = match &cli.cmd {
        Cmd::Sys2min { model } => compute_model(model, opts),
        Cmd::Prove { lhs, rhs } => match prove(lhs, rhs, opts) {
            Ok((e, true)) => (Some(e), None),
            Ok((e, false)) => (Some(e), Some(Failure::new(4, "identity not established"))),
            Err(f) => (None, Some(f)),
        },
        Cmd::Verify { ade, op, model } => match verify_only(ade, *op, model.as_ref(), opts) {
            Ok(e) => (Some(e), None),
            Err(f) => (None, Some(f)),
        },
        cmd => compute(kind_of(cmd).expect("job subcommand"), opts),
    };
    let mut code = 0u8;
    if let Some(e) = &emitted {
        if let Err(f) = emit(e, opts) {
            eprintln!("dalg: {}", f.msg);
            return ExitCode::from(f.code);
        }
        if e.oracle_failed {
            eprintln!("dalg: the series oracle rejected the result");
            code = 4;
        }
    }
    if let Some(f) = failure {
        eprintln!("dalg: {}", f.msg);
        if code == 0 {
            code = f.code;
        }
    }
    ExitCode::from(code)
}
