//! Constant folding and depth-bounded polyvariant inlining, plus a
//! differential harness that compares a term with its optimized form.

use std::fmt;

use num_bigint::BigInt;

use crate::denot::{contains_with, enumerate_with, ElemSet, Limits, Mode, Verdict};
use crate::domain::{EnumCfg, Env};
use crate::error::EnumError;
use crate::operational::{big_eval, EvalOutcome, OEnv};
use crate::syntax::{BinOp, Ctx, Expr, Ident};

pub fn optimize(e: &Expr, k: usize) -> Expr {
    Opt { trace: None }.go(e, k)
}

/// Statistics gathered while optimizing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptTrace {
    pub calls: usize,
    pub inlines: usize,
    pub max_depth: usize,
    /// Recursive calls whose `(k, size)` did not decrease lexicographically.
    pub metric_violations: usize,
}

/// [`optimize`], also returning a trace of the recursion.
pub fn optimize_observed(e: &Expr, k: usize) -> (Expr, OptTrace) {
    let mut t = OptTrace::default();
    let out = Opt { trace: Some((&mut t, Vec::new())) }.go(e, k);
    (out, t)
}

struct Opt<'a> {
    trace: Option<(&'a mut OptTrace, Vec<(usize, usize)>)>,
}

impl Opt<'_> {
    fn go(&mut self, e: &Expr, k: usize) -> Expr {
        if let Some((t, stack)) = &mut self.trace {
            let here = (k, e.size());
            t.calls += 1;
            if stack.last().is_some_and(|&parent| here >= parent) {
                t.metric_violations += 1;
            }
            stack.push(here);
            t.max_depth = t.max_depth.max(stack.len());
        }
        let out = self.step(e, k);
        if let Some((_, stack)) = &mut self.trace {
            stack.pop();
        }
        out
    }

    fn step(&mut self, e: &Expr, k: usize) -> Expr {
        match e {
            Expr::Var(_) | Expr::Int(_) => e.clone(),
            Expr::Prim(op, l, r) => match (self.go(l, k), self.go(r, k)) {
                (Expr::Int(m), Expr::Int(n)) => Expr::Int(op.apply(&m, &n)),
                (l, r) => Expr::prim(*op, l, r),
            },
            Expr::Lam(x, b) => Expr::Lam(x.clone(), Box::new(self.go(b, k))),
            Expr::App(f, a) => {
                let f = self.go(f, k);
                let a = self.go(a, k);
                match f {
                    Expr::Lam(x, body) if k >= 1 && a.is_value() => {
                        if let Some((t, _)) = &mut self.trace {
                            t.inlines += 1;
                        }
                        self.go(&body.subst_closed(&x, &a), k - 1)
                    }
                    f => Expr::app(f, a),
                }
            }
            Expr::If(c, t, el) => Expr::if_(self.go(c, k), self.go(t, k), self.go(el, k)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// The bounded checks could neither confirm nor refute.
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug)]
pub struct OptReport {
    pub original: Expr,
    pub optimized: Expr,
    pub k: usize,
    pub checks: Vec<Check>,
}

impl OptReport {
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| matches!(c.outcome, Outcome::Fail(_)))
    }
}

impl fmt::Display for OptReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "optimized: {}", self.optimized)?;
        for c in &self.checks {
            match &c.outcome {
                Outcome::Pass => writeln!(f, "PASS {}", c.name)?,
                Outcome::Fail(why) => writeln!(f, "FAIL {} {why}", c.name)?,
                Outcome::Inconclusive(why) => writeln!(f, "SKIP {} {why}", c.name)?,
            }
        }
        Ok(())
    }
}

/// What a closed program does, observed through the big-step evaluator.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Obs {
    Int(BigInt),
    Closure,
    Stuck,
    OutOfFuel,
}

impl fmt::Display for Obs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obs::Int(n) => write!(f, "{n}"),
            Obs::Closure => f.write_str("<closure>"),
            Obs::Stuck => f.write_str("stuck"),
            Obs::OutOfFuel => f.write_str("out-of-fuel"),
        }
    }
}

const FUEL_STEPS: [usize; 3] = [1, 4, 16];

fn observe(e: &Expr, fuel: usize) -> Obs {
    match big_eval(e, &OEnv::new(), fuel) {
        EvalOutcome::Result(v) => v.as_int().map_or(Obs::Closure, |n| Obs::Int(n.clone())),
        EvalOutcome::Stuck(_) => Obs::Stuck,
        EvalOutcome::OutOfFuel => Obs::OutOfFuel,
    }
}

/// Observe both sides, giving a side that ran out of fuel more fuel while
/// the other has an answer.
fn compare_runs(a: &Expr, b: &Expr, fuel: usize) -> Outcome {
    let mut oa = observe(a, fuel);
    let mut ob = observe(b, fuel);
    for m in &FUEL_STEPS[1..] {
        match (&oa, &ob) {
            (Obs::OutOfFuel, Obs::OutOfFuel) => break,
            (Obs::OutOfFuel, _) => oa = observe(a, fuel * m),
            (_, Obs::OutOfFuel) => ob = observe(b, fuel * m),
            _ => break,
        }
    }
    match (&oa, &ob) {
        _ if oa == ob => Outcome::Pass,
        (Obs::OutOfFuel, _) | (_, Obs::OutOfFuel) => {
            Outcome::Inconclusive(format!("{oa} vs {ob} at fuel {}", fuel * FUEL_STEPS[2]))
        }
        _ => Outcome::Fail(format!("{oa} vs {ob} at fuel {fuel}")),
    }
}

/// Contexts that close over nothing, so plugging a closed term stays closed.
pub fn closing_contexts(limit: usize) -> Vec<Ctx> {
    let id = || Expr::lam("x", Expr::var("x"));
    let succ = || Expr::lam("x", Expr::prim(BinOp::Add, Expr::var("x"), Expr::int(1)));
    let layers: Vec<Box<dyn Fn(Ctx) -> Ctx>> = vec![
        Box::new(|c| Ctx::AppL(Box::new(c), Expr::int(0))),
        Box::new(|c| Ctx::AppL(Box::new(c), Expr::int(3))),
        Box::new(move |c| Ctx::AppL(Box::new(c), id())),
        Box::new(move |c| Ctx::AppL(Box::new(c), succ())),
        Box::new(move |c| Ctx::AppR(id(), Box::new(c))),
        Box::new(|c| {
            let f1 = Expr::lam("f", Expr::app(Expr::var("f"), Expr::int(1)));
            Ctx::AppR(f1, Box::new(c))
        }),
        Box::new(|c| Ctx::OpL(BinOp::Add, Box::new(c), Expr::int(1))),
        Box::new(|c| Ctx::OpR(BinOp::Mul, Expr::int(2), Box::new(c))),
        Box::new(|c| Ctx::Lam(Ident::new("z"), Box::new(c))),
    ];
    let mut out = vec![Ctx::Hole];
    let mut frontier = vec![Ctx::Hole];
    while out.len() < limit && !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for l in &layers {
                next.push(l(c.clone()));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.truncate(limit);
    out
}

pub const CONTEXTS: usize = 24;

fn escalations(cfg: &EnumCfg) -> Vec<EnumCfg> {
    let deeper = EnumCfg { depth: cfg.depth + 1, ..*cfg };
    let wider = EnumCfg { width: cfg.width + 1, ..deeper };
    vec![*cfg, deeper, wider]
}

fn check_limits() -> Limits {
    Limits {
        max_work: 400_000,
        ..Limits::default()
    }
}

/// Is every element of `from` in the meaning of `into`, trying larger
/// bounds before giving up?
fn all_contained(from: &ElemSet, into: &Expr, cfg: &EnumCfg) -> Outcome {
    for d in from {
        let mut found = false;
        let mut note = String::from("no witness");
        for c in escalations(cfg) {
            match contains_with(into, &Env::new(), d, &c, check_limits()) {
                Ok(Verdict::Yes) => {
                    found = true;
                    break;
                }
                Ok(Verdict::NoWithinBound) => {}
                Err(e) => note = e.to_string(),
            }
        }
        if !found {
            return Outcome::Inconclusive(format!("{d}: {note}"));
        }
    }
    Outcome::Pass
}

fn denotational(e: &Expr, opt: &Expr, cfg: &EnumCfg) -> Vec<Check> {
    let run = |t: &Expr| -> Result<ElemSet, EnumError> {
        Ok(enumerate_with(t, &Env::new(), cfg, Mode::Exhaustive, check_limits())?.elems)
    };
    let (se, so) = match (run(e), run(opt)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(err), _) | (_, Err(err)) => {
            return vec![Check {
                name: "denotation".into(),
                outcome: Outcome::Inconclusive(err.to_string()),
            }]
        }
    };
    // A closed term denotes at most one integer.
    let mut ints = se.ints();
    ints.extend(so.ints());
    ints.sort();
    ints.dedup();
    let ints_ok = if ints.len() <= 1 {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("integers {ints:?} at {cfg}"))
    };
    vec![
        Check { name: "denotation-integers".into(), outcome: ints_ok },
        Check { name: "denotation-original-in-optimized".into(), outcome: all_contained(&se, opt, cfg) },
        Check { name: "denotation-optimized-in-original".into(), outcome: all_contained(&so, e, cfg) },
    ]
}

/// Compare `e` with `optimize(e, k)` operationally, denotationally and
/// under a pool of closing contexts.
pub fn check_optimize(e: &Expr, k: usize, cfg: &EnumCfg, fuel: usize) -> OptReport {
    let opt = optimize(e, k);
    let mut checks = vec![Check {
        name: "operational".into(),
        outcome: compare_runs(e, &opt, fuel),
    }];
    checks.extend(denotational(e, &opt, cfg));
    for (i, c) in closing_contexts(CONTEXTS).iter().enumerate() {
        let outcome = match compare_runs(&c.plug(e), &c.plug(&opt), fuel) {
            Outcome::Fail(why) => Outcome::Fail(format!("in {} : {why}", c.plug(&Expr::var("[]")))),
            o => o,
        };
        checks.push(Check { name: format!("context-{i}"), outcome });
    }
    OptReport {
        original: e.clone(),
        optimized: opt,
        k,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operational::multistep;
    use crate::syntax::{parse, terms};

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(optimize(&p("1+2"), 0), p("3"));
        assert_eq!(optimize(&p("(\\x. x) 5"), 0), p("(\\x. x) 5"));
        assert_eq!(optimize(&p("(\\x. x) 5"), 1), multistep(&p("(\\x. x) 5"), 10).0);
        assert_eq!(optimize(&p("(\\x. (x 1)+(x 2)) (\\y. y*10)"), 2), p("30"));
    }

    #[test]
    fn open_abstractions_are_not_inlined() {
        let e = p("\\y. (\\x. x) (\\z. y)");
        assert_eq!(optimize(&e, 3), e);
        assert_eq!(optimize(&p("\\y. (\\x. x) 4"), 1), p("\\y. 4"));
    }

    #[test]
    fn conditionals_are_rebuilt() {
        assert_eq!(optimize(&p("if 1 then 2+2 else 3"), 0), p("if 1 then 4 else 3"));
    }

    #[test]
    fn metric_decreases() {
        for (src, k) in [("(\\x. (x 1)+(x 2)) (\\y. y*10)", 2), ("(\\x. x x) (\\x. x x)", 6)] {
            let (_, t) = optimize_observed(&p(src), k);
            assert_eq!(t.metric_violations, 0);
            assert!(t.inlines >= 1);
        }
        let (_, t) = optimize_observed(&terms::fact_of(3), 5);
        assert_eq!(t.metric_violations, 0);
        assert!(t.inlines >= 5);
    }

    #[test]
    fn check_examples() {
        let c = EnumCfg::new(1, 0, 5, 1).unwrap();
        let r = check_optimize(&p("(\\x. x) 5"), 1, &c, 50);
        assert!(r.checks.iter().all(|c| c.outcome == Outcome::Pass), "{r}");
        let r = check_optimize(&terms::omega(), 3, &c, 50);
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks[0].outcome, Outcome::Pass);
        assert!(closing_contexts(CONTEXTS).len() >= 20);
    }

    #[test]
    fn factorial_survives_optimization() {
        let e = terms::fact_of(3);
        let r = check_optimize(&e, 5, &EnumCfg::new(1, 0, 6, 1).unwrap(), 200);
        assert!(r.passed(), "{r}");
        assert_eq!(observe(&r.optimized, 400), Obs::Int(6.into()));
    }
}
