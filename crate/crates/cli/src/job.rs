//! Turning command-line inputs into computations.

use std::collections::BTreeSet;
use std::path::Path;

use dalg::diff::{antiderivative_ade, derivative_ade, functions_in, rename_function, RationalExpr};
use dalg::groebner::Budget;
use dalg::method1::{self, Levels};
use dalg::method2::{self, DynModel};
use dalg::oracle::Combination;
use dalg::syntax::{parse_poly, parse_rational, parse_relation, Names};
use dalg::{AdeResult, Error, Poly, Result, Var};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Arith,
    Compose,
    Unary,
    Inverse,
    Derivative,
    Antiderivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    I,
    II,
    Both,
}

pub struct Settings {
    pub indep: String,
    pub params: Vec<String>,
    pub method: Which,
    pub levels: Levels,
    pub timeout: u64,
    pub target: Option<String>,
    pub new_indep: String,
}

impl Settings {
    pub fn names(&self) -> Names {
        let ps: Vec<&str> = self.params.iter().map(String::as_str).collect();
        Names::new(&self.indep, &ps)
    }

    pub fn x(&self) -> Var {
        Var::indep(&self.indep)
    }

    fn budget(&self) -> Budget {
        Budget::seconds(self.timeout)
    }

    fn methods(&self) -> Vec<Which> {
        match self.method {
            Which::Both => vec![Which::I, Which::II],
            m => vec![m],
        }
    }
}

/// A prepared job: the function whose ADE is wanted and how it arises.
pub struct Job {
    pub kind: Kind,
    pub inputs: Vec<Poly>,
    pub rel: Option<RationalExpr>,
    pub target: String,
    pub comb: Combination,
}

/// Reads `src` from disk when it names an `.ade` file.
pub fn source_text(src: &str) -> Result<String> {
    let path = Path::new(src);
    if path.extension().is_some_and(|e| e == "ade") && path.is_file() {
        return std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Error::Domain(format!("cannot read {src}: {e}")));
    }
    Ok(src.to_string())
}

fn used_names(inputs: &[Poly], s: &Settings) -> BTreeSet<String> {
    let mut used: BTreeSet<String> = inputs.iter().flat_map(functions_in).collect();
    used.insert(s.indep.clone());
    used.extend(s.params.iter().cloned());
    used
}

fn fresh(prefs: &[&str], used: &BTreeSet<String>) -> String {
    prefs
        .iter()
        .map(|p| p.to_string())
        .chain((1..).map(|i| format!("w{i}")))
        .find(|n| !used.contains(n))
        .expect("infinitely many candidates")
}

fn only_function(p: &Poly) -> Result<String> {
    let fs = functions_in(p);
    match fs.as_slice() {
        [f] => Ok(f.clone()),
        [] => Err(Error::Domain(format!("{p} involves no function"))),
        _ => Err(Error::ContextMismatch(format!("{p} involves several functions"))),
    }
}

fn arity(kind: Kind, n: usize) -> Result<()> {
    let ok = match kind {
        Kind::Arith => n >= 1,
        Kind::Compose => n == 2,
        _ => n == 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{kind:?} takes {} input(s), got {n}", match kind {
            Kind::Arith => "at least one".to_string(),
            Kind::Compose => "exactly two".to_string(),
            _ => "exactly one".to_string(),
        })))
    }
}

pub fn prepare(kind: Kind, equations: &[String], rel: Option<&str>, s: &Settings) -> Result<Job> {
    let names = s.names();
    let mut inputs = Vec::new();
    for e in equations {
        inputs.push(parse_poly(&source_text(e)?, &names)?);
    }
    arity(kind, inputs.len())?;
    let used = used_names(&inputs, s);
    let fs: Vec<String> = inputs.iter().flat_map(functions_in).collect();
    match kind {
        Kind::Arith | Kind::Unary => {
            let rel = rel.ok_or_else(|| Error::Precondition("--rel is required".into()))?;
            let fr: Vec<&str> = fs.iter().map(String::as_str).collect();
            let (target, expr) = parse_relation(rel, &names.clone().with_functions(&fr))?;
            if used.contains(&target) {
                return Err(Error::ContextMismatch(format!("target `{target}` is already in use")));
            }
            let comb = Combination::Relation { inputs: inputs.clone(), rel: expr.clone() };
            Ok(Job { kind, inputs, rel: Some(expr), target, comb })
        }
        Kind::Compose => {
            let f = only_function(&inputs[0])?;
            let g = only_function(&inputs[1])?;
            if f == g {
                let to = fresh(&[&format!("{g}_in")], &used);
                inputs[1] = rename_function(&inputs[1], &g, &to);
            }
            let used = used_names(&inputs, s);
            let target = s.target.clone().unwrap_or_else(|| fresh(&["z", "w", "h", "u", "v"], &used));
            let comb = Combination::Compose { outer: inputs[0].clone(), inner: inputs[1].clone() };
            Ok(Job { kind, inputs, rel: None, target, comb })
        }
        Kind::Inverse => {
            only_function(&inputs[0])?;
            let target = s.target.clone().unwrap_or_else(|| "g".to_string());
            let comb = Combination::Inverse { p: inputs[0].clone(), indep: Var::indep(&s.new_indep) };
            Ok(Job { kind, inputs, rel: None, target, comb })
        }
        Kind::Derivative | Kind::Antiderivative => {
            only_function(&inputs[0])?;
            let target = s.target.clone().unwrap_or_else(|| fresh(&["w", "z", "h", "u", "v"], &used));
            let p = inputs[0].clone();
            let comb = if kind == Kind::Derivative { Combination::Derivative { p } } else { Combination::Antiderivative { p } };
            Ok(Job { kind, inputs, rel: None, target, comb })
        }
    }
}

/// Runs the job with every requested method.
pub fn run(job: &Job, s: &Settings) -> Vec<Result<AdeResult>> {
    let x = s.x();
    let single = |f: &dyn Fn() -> Result<AdeResult>| vec![f()];
    match job.kind {
        Kind::Arith | Kind::Unary => {
            let rel = job.rel.as_ref().expect("relation jobs carry one");
            s.methods()
                .into_iter()
                .map(|m| match m {
                    Which::I => method1::arith(&job.inputs, &job.target, rel, &x, &s.levels, &mut s.budget()),
                    _ if job.kind == Kind::Unary => method2::unary(&job.inputs[0], &job.target, rel, &x, &mut s.budget()),
                    _ => method2::arith(&job.inputs, &job.target, rel, &x, &mut s.budget()),
                })
                .collect()
        }
        Kind::Compose => {
            let (p, q) = (&job.inputs[0], &job.inputs[1]);
            s.methods()
                .into_iter()
                .map(|m| match m {
                    Which::I => method1::compose(p, q, &job.target, &x, &s.levels, &mut s.budget()),
                    _ => method2::compose(p, q, &job.target, &x, &mut s.budget()),
                })
                .collect()
        }
        Kind::Inverse => single(&|| method2::inverse(&job.inputs[0], &x, &s.new_indep, &job.target)),
        Kind::Derivative | Kind::Antiderivative => single(&|| {
            let start = std::time::Instant::now();
            let p = &job.inputs[0];
            let f = only_function(p)?;
            let ade = if job.kind == Kind::Derivative { derivative_ade(p, &f, &x)? } else { antiderivative_ade(p, &f) };
            let ade = rename_function(&ade, &f, &job.target);
            Ok(AdeResult::new(ade, &job.target, dalg::Method::II, start.elapsed().as_millis()))
        }),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    #[serde(default = "default_indep")]
    indep: String,
    #[serde(default)]
    params: Vec<String>,
    states: Vec<String>,
    rhs: Vec<String>,
    output: String,
}

fn default_indep() -> String {
    "x".to_string()
}

/// Reads a dynamical model from JSON text.
pub fn parse_model(text: &str) -> Result<DynModel> {
    let m: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: format!("malformed model JSON: {e}"),
    })?;
    if m.states.len() != m.rhs.len() {
        return Err(Error::ContextMismatch(format!("{} states but {} right-hand sides", m.states.len(), m.rhs.len())));
    }
    let ps: Vec<&str> = m.params.iter().map(String::as_str).collect();
    let ss: Vec<&str> = m.states.iter().map(String::as_str).collect();
    let names = Names::new(&m.indep, &ps).with_functions(&ss);
    let to_state = |e: RationalExpr| -> Result<RationalExpr> {
        for v in e.num.variables().into_iter().chain(e.den.variables()) {
            if v.is_differential() && v.order() > 0 {
                return Err(Error::Domain(format!("derivative {v} in a model right-hand side")));
            }
        }
        Ok(e.map_vars(|v| if v.is_differential() { Var::aux(v.name()) } else { v.clone() }))
    };
    let rhs = m.rhs.iter().map(|r| to_state(parse_rational(r, &names)?)).collect::<Result<Vec<_>>>()?;
    let output = to_state(parse_rational(&m.output, &names)?)?;
    let states = m.states.iter().map(|n| Var::aux(n)).collect();
    DynModel::new(Var::indep(&m.indep), states, rhs, output)
}

/// Target name for a model's output.
pub fn model_target(m: &DynModel, requested: Option<&str>) -> String {
    if let Some(t) = requested {
        return t.to_string();
    }
    let mut used: BTreeSet<String> = m.states.iter().map(|v| v.name().to_string()).collect();
    used.insert(m.indep.name().to_string());
    used.extend(m.params.iter().map(|v| v.name().to_string()));
    fresh(&["f", "z", "w"], &used)
}

pub fn sys2min(m: &DynModel, target: &str, s: &Settings) -> Result<AdeResult> {
    method2::sys_to_min(m, target, &mut s.budget())
}
