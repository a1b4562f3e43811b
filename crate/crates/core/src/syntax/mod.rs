//! Abstract syntax of the untyped call-by-value lambda calculus with
//! integers, arithmetic and conditionals.

mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::SyntaxError;

pub mod terms;

pub use parse::parse;

/// A variable name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: impl AsRef<str>) -> Ident {
        Ident(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Ident {
        Ident::new(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Mul,
    Sub,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Mul => "*",
            BinOp::Sub => "-",
        }
    }

    /// Exact integer arithmetic.
    pub fn apply(self, a: &BigInt, b: &BigInt) -> BigInt {
        match self {
            BinOp::Add => a + b,
            BinOp::Mul => a * b,
            BinOp::Sub => a - b,
        }
    }

    /// Machine-integer arithmetic; `None` on overflow.
    pub fn apply_i64(self, a: i64, b: i64) -> Option<i64> {
        match self {
            BinOp::Add => a.checked_add(b),
            BinOp::Mul => a.checked_mul(b),
            BinOp::Sub => a.checked_sub(b),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigInt),
    Prim(BinOp, Box<Expr>, Box<Expr>),
    Var(Ident),
    Lam(Ident, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(n: impl Into<BigInt>) -> Expr {
        Expr::Int(n.into())
    }

    pub fn var(x: impl AsRef<str>) -> Expr {
        Expr::Var(Ident::new(x))
    }

    pub fn lam(x: impl AsRef<str>, body: Expr) -> Expr {
        Expr::Lam(Ident::new(x), Box::new(body))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }

    pub fn prim(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Prim(op, Box::new(l), Box::new(r))
    }

    pub fn if_(c: Expr, t: Expr, e: Expr) -> Expr {
        Expr::If(Box::new(c), Box::new(t), Box::new(e))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Int(_) | Expr::Var(_) => 1,
            Expr::Prim(_, l, r) | Expr::App(l, r) => 1 + l.size() + r.size(),
            Expr::Lam(_, b) => 1 + b.size(),
            Expr::If(c, t, e) => 1 + c.size() + t.size() + e.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Expr::Prim(_, l, r) | Expr::App(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Expr::Lam(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Expr::If(c, t, e) => {
                c.collect_free(bound, out);
                t.collect_free(bound, out);
                e.collect_free(bound, out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Closed syntactic values: integer literals and closed abstractions.
    pub fn is_value(&self) -> bool {
        match self {
            Expr::Int(_) => true,
            Expr::Lam(..) => self.is_closed(),
            _ => false,
        }
    }

    /// Replace free occurrences of `x` by the closed value `v`.
    pub fn subst(&self, x: &Ident, v: &Expr) -> Result<Expr, SyntaxError> {
        if !v.is_closed() {
            return Err(SyntaxError::OpenSubstitution(v.to_string()));
        }
        Ok(self.subst_closed(x, v))
    }

    /// Substitution without the closedness check. Callers guarantee `v` is closed.
    pub(crate) fn subst_closed(&self, x: &Ident, v: &Expr) -> Expr {
        match self {
            Expr::Int(_) => self.clone(),
            Expr::Var(y) if y == x => v.clone(),
            Expr::Var(_) => self.clone(),
            Expr::Prim(op, l, r) => Expr::prim(*op, l.subst_closed(x, v), r.subst_closed(x, v)),
            Expr::Lam(y, _) if y == x => self.clone(),
            Expr::Lam(y, b) => Expr::Lam(y.clone(), Box::new(b.subst_closed(x, v))),
            Expr::App(f, a) => Expr::app(f.subst_closed(x, v), a.subst_closed(x, v)),
            Expr::If(c, t, e) => Expr::if_(
                c.subst_closed(x, v),
                t.subst_closed(x, v),
                e.subst_closed(x, v),
            ),
        }
    }

    /// All integer literals occurring in the term.
    pub fn literals(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Int(n) = e {
                out.push(n.clone());
            }
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Int(_) | Expr::Var(_) => {}
            Expr::Prim(_, l, r) | Expr::App(l, r) => {
                l.walk(f);
                r.walk(f);
            }
            Expr::Lam(_, b) => b.walk(f),
            Expr::If(c, t, e) => {
                c.walk(f);
                t.walk(f);
                e.walk(f);
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self)
    }
}

/// A one-hole program context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ctx {
    Hole,
    OpL(BinOp, Box<Ctx>, Expr),
    OpR(BinOp, Expr, Box<Ctx>),
    Lam(Ident, Box<Ctx>),
    AppL(Box<Ctx>, Expr),
    AppR(Expr, Box<Ctx>),
}

impl Ctx {
    pub fn plug(&self, e: &Expr) -> Expr {
        match self {
            Ctx::Hole => e.clone(),
            Ctx::OpL(op, c, r) => Expr::prim(*op, c.plug(e), r.clone()),
            Ctx::OpR(op, l, c) => Expr::prim(*op, l.clone(), c.plug(e)),
            Ctx::Lam(x, c) => Expr::Lam(x.clone(), Box::new(c.plug(e))),
            Ctx::AppL(c, a) => Expr::app(c.plug(e), a.clone()),
            Ctx::AppR(f, c) => Expr::app(f.clone(), c.plug(e)),
        }
    }

    /// Variables bound by the context around its hole.
    pub fn binders(&self) -> Vec<Ident> {
        let mut out = Vec::new();
        let mut c = self;
        loop {
            match c {
                Ctx::Hole => return out,
                Ctx::Lam(x, inner) => {
                    out.push(x.clone());
                    c = inner;
                }
                Ctx::OpL(_, inner, _) | Ctx::OpR(_, _, inner) => c = inner,
                Ctx::AppL(inner, _) | Ctx::AppR(_, inner) => c = inner,
            }
        }
    }
}

/// Plug `e` into the hole of `c`.
pub fn plug(c: &Ctx, e: &Expr) -> Expr {
    c.plug(e)
}
