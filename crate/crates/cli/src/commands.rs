use std::collections::BTreeMap;
use std::fmt::Display;

use elemsem::denot::{contains, engeler_enumerate, enumerate_with, Limits, Mode, Verdict};
use elemsem::domain::{parse_elem, Env};
use elemsem::error::EnumError;
use elemsem::itypes::{parse_type, typable, TEnv};
use elemsem::operational::{big_eval, multistep, EvalOutcome, OEnv, Status};
use elemsem::optimizer::{check_optimize, optimize, Outcome};
use elemsem::syntax::{parse, Expr};
use elemsem::systemf::{parse_sf, sf_enumerate_with, sf_soundness_check, sf_typecheck, FixSeed, SfExpr, SfTEnv};

use crate::{Command, Format, Input, ModeArg, SeedArg};

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const USAGE: u8 = 2;
pub const RESOURCE: u8 = 3;

pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

type Record = Vec<(&'static str, String)>;

/// Collects human-readable lines and structured records side by side.
struct Out {
    format: Format,
    text: Vec<String>,
    records: Vec<Record>,
}

impl Out {
    fn new(input: &Input) -> Out {
        Out {
            format: input.format,
            text: Vec::new(),
            records: Vec::new(),
        }
    }

    fn line(&mut self, text: impl Display, record: Record) {
        self.text.push(text.to_string());
        self.records.push(record);
    }

    fn finish(self, code: u8) -> Output {
        let mut stdout = String::new();
        match self.format {
            Format::Text => {
                for l in &self.text {
                    stdout.push_str(l);
                    stdout.push('\n');
                }
            }
            Format::Records => {
                for r in &self.records {
                    let fields: Vec<String> = r.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    stdout.push_str(&fields.join("\t"));
                    stdout.push('\n');
                }
            }
        }
        Output {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

fn fail(code: u8, msg: impl Display) -> Output {
    Output {
        code,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn enum_fail(e: EnumError) -> Output {
    match e {
        EnumError::Unbound(_) => fail(USAGE, e),
        _ => fail(RESOURCE, e),
    }
}

fn term(input: &Input) -> Result<Expr, Output> {
    let src = input.text().map_err(|e| fail(USAGE, e))?;
    parse(&src).map_err(|e| fail(USAGE, e))
}

fn sf_term(input: &Input) -> Result<SfExpr, Output> {
    let src = input.text().map_err(|e| fail(USAGE, e))?;
    parse_sf(&src).map_err(|e| fail(USAGE, e))
}

fn seed(s: SeedArg) -> FixSeed {
    match s {
        SeedArg::Zero => FixSeed::Zero,
        SeedArg::EmptyTable => FixSeed::EmptyTable,
    }
}

fn verdict(input: &Input, v: Verdict) -> Output {
    let mut out = Out::new(input);
    out.line(v, vec![("verdict", v.to_string())]);
    out.finish(if v.is_yes() { OK } else { NEGATIVE })
}

pub fn run(cmd: &Command) -> Output {
    match go(cmd) {
        Ok(o) | Err(o) => o,
    }
}

fn go(cmd: &Command) -> Result<Output, Output> {
    Ok(match cmd {
        Command::Parse(input) => {
            let e = term(input)?;
            let mut out = Out::new(input);
            out.line(&e, vec![("term", e.to_string())]);
            out.finish(OK)
        }
        Command::Eval { input, small, .. } => eval(input, *small)?,
        Command::Enum { input, mode } => {
            let e = term(input)?;
            let mode = match mode {
                ModeArg::Universe => Mode::Universe,
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Maximal => Mode::Maximal,
            };
            let r = enumerate_with(&e, &Env::new(), &input.cfg(), mode, Limits::default()).map_err(enum_fail)?;
            let mut out = Out::new(input);
            for d in &r.elems {
                out.line(d, vec![("elem", d.to_string())]);
            }
            out.finish(OK)
        }
        Command::Member { input, elem } => {
            let e = term(input)?;
            let d = parse_elem(elem).map_err(|err| fail(USAGE, err))?;
            let v = contains(&e, &Env::new(), &d, &input.cfg()).map_err(enum_fail)?;
            verdict(input, v)
        }
        Command::Typecheck { input, ty } => {
            let e = term(input)?;
            let a = parse_type(ty).map_err(|err| fail(USAGE, err))?;
            let v = typable(&TEnv::new(), &e, &a, &input.cfg()).map_err(enum_fail)?;
            verdict(input, v)
        }
        Command::Optimize(input) => {
            let e = optimize(&term(input)?, input.k);
            let mut out = Out::new(input);
            out.line(&e, vec![("term", e.to_string())]);
            out.finish(OK)
        }
        Command::CheckOpt(input) => {
            let r = check_optimize(&term(input)?, input.k, &input.cfg(), input.fuel);
            let mut out = Out::new(input);
            out.line(
                format!("optimized: {}", r.optimized),
                vec![("optimized", r.optimized.to_string())],
            );
            for c in &r.checks {
                let (tag, detail) = match &c.outcome {
                    Outcome::Pass => ("PASS", String::new()),
                    Outcome::Fail(why) => ("FAIL", why.clone()),
                    Outcome::Inconclusive(why) => ("SKIP", why.clone()),
                };
                let text = if detail.is_empty() {
                    format!("{tag} {}", c.name)
                } else {
                    format!("{tag} {} {detail}", c.name)
                };
                out.line(
                    text,
                    vec![("check", c.name.clone()), ("outcome", tag.to_lowercase()), ("detail", detail)],
                );
            }
            out.finish(if r.passed() { OK } else { NEGATIVE })
        }
        Command::SfTypecheck(input) => {
            let e = sf_term(input)?;
            let mut out = Out::new(input);
            match sf_typecheck(&SfTEnv::new(), &e) {
                Ok(a) => {
                    out.line(&a, vec![("type", a.to_string())]);
                    out.finish(OK)
                }
                Err(err) => {
                    out.line(&err, vec![("error", err.to_string())]);
                    out.finish(NEGATIVE)
                }
            }
        }
        Command::SfEnum { input, seed: s } => {
            let e = sf_term(input)?;
            let set = sf_enumerate_with(&e, &Default::default(), &input.cfg(), seed(*s), Limits::default())
                .map_err(enum_fail)?;
            let mut out = Out::new(input);
            for d in &set {
                out.line(d, vec![("elem", d.to_string())]);
            }
            out.finish(OK)
        }
        Command::SfCheck { input, seed: s } => {
            let e = sf_term(input)?;
            let r = sf_soundness_check(&e, &input.cfg(), seed(*s)).map_err(enum_fail)?;
            let mut out = Out::new(input);
            for l in r.to_string().lines() {
                out.line(l, vec![("line", l.to_string())]);
            }
            out.finish(if r.well_typed() && r.passed() { OK } else { NEGATIVE })
        }
        Command::CompareEngeler(input) => {
            let e = term(input)?;
            let cfg = input.cfg();
            let ours = enumerate_with(&e, &Env::new(), &cfg, Mode::Exhaustive, Limits::default())
                .map_err(enum_fail)?
                .elems
                .ints();
            let theirs: Vec<i64> = engeler_enumerate(&e, &BTreeMap::new(), &cfg)
                .map_err(enum_fail)?
                .iter()
                .filter_map(|d| d.as_num())
                .collect();
            let mut out = Out::new(input);
            out.line(format!("elementary: {ours:?}"), vec![("elementary", format!("{ours:?}"))]);
            out.line(format!("engeler: {theirs:?}"), vec![("engeler", format!("{theirs:?}"))]);
            let agree = ours == theirs;
            let word = if agree { "agree" } else { "differ" };
            out.line(word, vec![("result", word.to_string())]);
            out.finish(if agree { OK } else { NEGATIVE })
        }
    })
}

fn eval(input: &Input, small: bool) -> Result<Output, Output> {
    let e = term(input)?;
    let mut out = Out::new(input);
    let code = if small {
        let (end, status) = multistep(&e, input.fuel);
        let (word, code) = match status {
            Status::Value => ("value", OK),
            Status::Stuck => ("stuck", NEGATIVE),
            Status::Fuel => ("out-of-fuel", RESOURCE),
        };
        let text = if status == Status::Value {
            end.to_string()
        } else {
            format!("{word}: {end}")
        };
        out.line(text, vec![("status", word.to_string()), ("term", end.to_string())]);
        code
    } else {
        match big_eval(&e, &OEnv::new(), input.fuel) {
            EvalOutcome::Result(v) => {
                out.line(&v, vec![("status", "value".into()), ("value", v.to_string())]);
                OK
            }
            EvalOutcome::Stuck(why) => {
                out.line(format!("stuck: {why}"), vec![("status", "stuck".into()), ("reason", why)]);
                NEGATIVE
            }
            EvalOutcome::OutOfFuel => {
                out.line("out-of-fuel", vec![("status", "out-of-fuel".into())]);
                RESOURCE
            }
        }
    };
    Ok(out.finish(code))
}
