#![allow(dead_code)]

use std::collections::BTreeSet;

use elemsem::domain::{Elem, EnumCfg};
use elemsem::itypes::{FType, IType};
use elemsem::operational::{big_eval_traced, EvalOutcome, OEnv};
use elemsem::syntax::{BinOp, Expr};
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

const NAMES: [&str; 3] = ["x", "y", "f"];
const OPS: [BinOp; 3] = [BinOp::Add, BinOp::Sub, BinOp::Mul];

/// A random closed term of at most `max` nodes.
pub fn closed_term(rng: &mut StdRng, max: usize) -> Expr {
    let budget = rng.gen_range(max / 2..=max);
    grow(rng, budget, &mut Vec::new())
}

fn leaf(rng: &mut StdRng, scope: &[&'static str]) -> Expr {
    if !scope.is_empty() && rng.gen_bool(0.5) {
        Expr::var(scope.choose(rng).unwrap())
    } else {
        Expr::int(rng.gen_range(0..=3))
    }
}

fn grow(rng: &mut StdRng, budget: usize, scope: &mut Vec<&'static str>) -> Expr {
    if budget <= 1 {
        return leaf(rng, scope);
    }
    match rng.gen_range(0..10) {
        0 => leaf(rng, scope),
        1 | 2 => {
            let (l, r) = split(rng, budget - 1);
            Expr::prim(*OPS.choose(rng).unwrap(), grow(rng, l, scope), grow(rng, r, scope))
        }
        3 | 4 => lam(rng, budget, scope),
        5..=8 => {
            let (l, r) = split(rng, budget - 1);
            let f = if l >= 2 && rng.gen_bool(0.6) {
                lam(rng, l, scope)
            } else {
                grow(rng, l, scope)
            };
            Expr::app(f, grow(rng, r, scope))
        }
        _ if budget >= 4 => {
            let rest = budget - 1;
            let c = rng.gen_range(1..=rest - 2);
            let (t, e) = split(rng, rest - c);
            Expr::if_(grow(rng, c, scope), grow(rng, t, scope), grow(rng, e, scope))
        }
        _ => leaf(rng, scope),
    }
}

fn lam(rng: &mut StdRng, budget: usize, scope: &mut Vec<&'static str>) -> Expr {
    let x = *NAMES.choose(rng).unwrap();
    scope.push(x);
    let body = grow(rng, budget - 1, scope);
    scope.pop();
    Expr::lam(x, body)
}

fn split(rng: &mut StdRng, n: usize) -> (usize, usize) {
    let l = rng.gen_range(1..n.max(2));
    (l, n.saturating_sub(l).max(1))
}

/// A closed term that evaluates to an integer, with that integer and every
/// integer seen along the way.
pub struct Terminating {
    pub term: Expr,
    pub result: i64,
    pub seen: BTreeSet<i64>,
}

pub fn terminating(e: &Expr, fuel: usize) -> Option<Terminating> {
    let (out, seen) = big_eval_traced(e, &OEnv::new(), fuel);
    let EvalOutcome::Result(v) = out else { return None };
    let result = v.as_int()?.to_i64()?;
    let seen = seen.iter().map(|n| n.to_i64()).collect::<Option<BTreeSet<_>>>()?;
    Some(Terminating {
        term: e.clone(),
        result,
        seen,
    })
}

/// The integer range covering a term's literals and the integers its
/// evaluation passes through.
pub fn fitted_ints(e: &Expr, seen: &BTreeSet<i64>) -> (i64, i64) {
    let lits = e.literals().into_iter().filter_map(|n| n.to_i64());
    let all: Vec<i64> = lits.chain(seen.iter().copied()).chain([0]).collect();
    (*all.iter().min().unwrap(), *all.iter().max().unwrap())
}

/// Escalation schedule: depth then width, both from 0 to 3.
pub fn schedule(lo: i64, hi: i64) -> Vec<EnumCfg> {
    let mut out = Vec::new();
    for depth in 0..=3 {
        for width in 0..=3 {
            out.push(EnumCfg::new(depth, lo, hi, width).unwrap());
        }
    }
    out
}

/// A random element of `universe(depth, lo..hi, width)`.
pub fn elem(rng: &mut StdRng, depth: usize, lo: i64, hi: i64, width: usize) -> Elem {
    if depth == 0 || rng.gen_bool(0.25) {
        return Elem::Num(rng.gen_range(lo..=hi));
    }
    let n = rng.gen_range(0..=width);
    Elem::table((0..n).map(|_| {
        (
            elem(rng, depth - 1, lo, hi, width),
            elem(rng, depth - 1, lo, hi, width),
        )
    }))
}

/// A random intersection type with at most `depth` nested arrows.
pub fn itype(rng: &mut StdRng, depth: usize) -> IType {
    if depth == 0 || rng.gen_bool(0.3) {
        return IType::Int(rng.gen_range(-2..=2));
    }
    IType::Fun(ftype(rng, depth))
}

fn ftype(rng: &mut StdRng, depth: usize) -> FType {
    match rng.gen_range(0..6) {
        0 => FType::Top,
        1 => FType::Meet(Box::new(ftype(rng, depth)), Box::new(ftype(rng, depth))),
        _ => FType::Arrow(Box::new(itype(rng, depth - 1)), Box::new(itype(rng, depth - 1))),
    }
}
