//! Reference interpreters: a fuel-bounded big-step evaluator with closures
//! and a small-step substitution machine.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::syntax::{Expr, Ident};

#[derive(Clone, PartialEq, Eq)]
pub enum OValue {
    VInt(BigInt),
    VClos(Ident, Arc<Expr>, OEnv),
}

impl OValue {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            OValue::VInt(n) => Some(n),
            OValue::VClos(..) => None,
        }
    }
}

impl fmt::Display for OValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OValue::VInt(n) => write!(f, "{n}"),
            OValue::VClos(x, b, _) => write!(f, "<closure \\{x}. {b}>"),
        }
    }
}

impl fmt::Debug for OValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OEnv(Arc<BTreeMap<Ident, OValue>>);

impl OEnv {
    pub fn new() -> OEnv {
        OEnv::default()
    }

    pub fn get(&self, x: &Ident) -> Option<&OValue> {
        self.0.get(x)
    }

    pub fn extend(&self, x: Ident, v: OValue) -> OEnv {
        let mut m = (*self.0).clone();
        m.insert(x, v);
        OEnv(Arc::new(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    Result(OValue),
    Stuck(String),
    OutOfFuel,
}

impl EvalOutcome {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            EvalOutcome::Result(v) => v.as_int(),
            _ => None,
        }
    }

    pub fn is_result(&self) -> bool {
        matches!(self, EvalOutcome::Result(_))
    }
}

/// Evaluate `e` under `env`, succeeding iff a derivation of height at most
/// `fuel` exists.
pub fn big_eval(e: &Expr, env: &OEnv, fuel: usize) -> EvalOutcome {
    Big { ints: None }.eval(e, env, fuel)
}

/// Like [`big_eval`], also returning every integer produced along the way.
pub fn big_eval_traced(e: &Expr, env: &OEnv, fuel: usize) -> (EvalOutcome, BTreeSet<BigInt>) {
    let mut ints = BTreeSet::new();
    let out = Big { ints: Some(&mut ints) }.eval(e, env, fuel);
    (out, ints)
}

struct Big<'a> {
    ints: Option<&'a mut BTreeSet<BigInt>>,
}

macro_rules! sub {
    ($e:expr) => {
        match $e {
            EvalOutcome::Result(v) => v,
            other => return other,
        }
    };
}

impl Big<'_> {
    fn int(&mut self, n: BigInt) -> EvalOutcome {
        if let Some(s) = self.ints.as_deref_mut() {
            s.insert(n.clone());
        }
        EvalOutcome::Result(OValue::VInt(n))
    }

    fn eval(&mut self, e: &Expr, env: &OEnv, fuel: usize) -> EvalOutcome {
        if fuel == 0 {
            return EvalOutcome::OutOfFuel;
        }
        let f = fuel - 1;
        match e {
            Expr::Int(n) => self.int(n.clone()),
            Expr::Var(x) => match env.get(x) {
                Some(v) => EvalOutcome::Result(v.clone()),
                None => EvalOutcome::Stuck(format!("unbound variable `{x}`")),
            },
            Expr::Lam(x, b) => EvalOutcome::Result(OValue::VClos(
                x.clone(),
                Arc::new((**b).clone()),
                env.clone(),
            )),
            Expr::Prim(op, l, r) => {
                let a = sub!(self.eval(l, env, f));
                let b = sub!(self.eval(r, env, f));
                match (a, b) {
                    (OValue::VInt(a), OValue::VInt(b)) => self.int(op.apply(&a, &b)),
                    _ => EvalOutcome::Stuck(format!("`{}` applied to a closure", op.symbol())),
                }
            }
            Expr::App(g, a) => {
                let fv = sub!(self.eval(g, env, f));
                let av = sub!(self.eval(a, env, f));
                match fv {
                    OValue::VClos(x, body, cenv) => self.eval(&body, &cenv.extend(x, av), f),
                    OValue::VInt(n) => EvalOutcome::Stuck(format!("applied the integer {n}")),
                }
            }
            Expr::If(c, t, el) => match sub!(self.eval(c, env, f)) {
                OValue::VInt(n) if !n.is_zero() => self.eval(t, env, f),
                OValue::VInt(_) => self.eval(el, env, f),
                OValue::VClos(..) => EvalOutcome::Stuck("closure used as a condition".into()),
            },
        }
    }
}

/// Classification of a closed term with respect to the small-step relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepClass {
    Value,
    Stuck(String),
    Reducible(Expr),
}

/// One left-to-right call-by-value reduction step.
pub fn step(e: &Expr) -> Option<Expr> {
    match classify(e) {
        StepClass::Reducible(e2) => Some(e2),
        _ => None,
    }
}

pub fn classify(e: &Expr) -> StepClass {
    use StepClass::*;
    fn congr(sub: &Expr, rebuild: impl FnOnce(Expr) -> Expr) -> Option<StepClass> {
        match classify(sub) {
            Value => None,
            Stuck(r) => Some(Stuck(r)),
            Reducible(s) => Some(Reducible(rebuild(s))),
        }
    }
    match e {
        Expr::Int(_) | Expr::Lam(..) => Value,
        Expr::Var(x) => Stuck(format!("free variable `{x}`")),
        Expr::Prim(op, l, r) => {
            if let Some(c) = congr(l, |l2| Expr::Prim(*op, Box::new(l2), r.clone())) {
                return c;
            }
            if let Some(c) = congr(r, |r2| Expr::Prim(*op, l.clone(), Box::new(r2))) {
                return c;
            }
            match (&**l, &**r) {
                (Expr::Int(a), Expr::Int(b)) => Reducible(Expr::Int(op.apply(a, b))),
                _ => Stuck(format!("`{}` applied to a closure", op.symbol())),
            }
        }
        Expr::App(g, a) => {
            if let Some(c) = congr(g, |g2| Expr::App(Box::new(g2), a.clone())) {
                return c;
            }
            if let Some(c) = congr(a, |a2| Expr::App(g.clone(), Box::new(a2))) {
                return c;
            }
            match &**g {
                Expr::Lam(x, body) => Reducible(body.subst_closed(x, a)),
                _ => Stuck("applied an integer".into()),
            }
        }
        Expr::If(c, t, el) => {
            if let Some(s) = congr(c, |c2| Expr::If(Box::new(c2), t.clone(), el.clone())) {
                return s;
            }
            match &**c {
                Expr::Int(n) if !n.is_zero() => Reducible((**t).clone()),
                Expr::Int(_) => Reducible((**el).clone()),
                _ => Stuck("closure used as a condition".into()),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Value,
    Stuck,
    Fuel,
}

/// Take up to `fuel` steps and report where the term ended up.
pub fn multistep(e: &Expr, fuel: usize) -> (Expr, Status) {
    let mut cur = e.clone();
    let mut left = fuel;
    loop {
        match classify(&cur) {
            StepClass::Value => return (cur, Status::Value),
            StepClass::Stuck(_) => return (cur, Status::Stuck),
            StepClass::Reducible(next) => {
                if left == 0 {
                    return (cur, Status::Fuel);
                }
                left -= 1;
                cur = next;
            }
        }
    }
}
