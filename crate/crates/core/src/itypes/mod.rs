//! Intersection types as a view of the domain: `typof`/`eltof`, subtyping,
//! and typability through the isomorphism.

mod deriv;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use crate::denot::{contains, Verdict};
use crate::domain::{le, Elem, EnumCfg, Env, Table};
use crate::error::EnumError;
use crate::syntax::{Expr, Ident};

pub use deriv::{subtype_declarative, typable_declarative};
pub use text::parse_type;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IType {
    Int(i64),
    Fun(FType),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FType {
    Arrow(Box<IType>, Box<IType>),
    Meet(Box<FType>, Box<FType>),
    Top,
}

pub type TEnv = BTreeMap<Ident, IType>;

impl IType {
    pub fn top() -> IType {
        IType::Fun(FType::Top)
    }

    pub fn arrow(a: IType, b: IType) -> IType {
        IType::Fun(FType::Arrow(Box::new(a), Box::new(b)))
    }

    /// `None` when either side is a singleton integer type.
    pub fn meet(a: IType, b: IType) -> Option<IType> {
        match (a, b) {
            (IType::Fun(f), IType::Fun(g)) => Some(IType::Fun(FType::Meet(Box::new(f), Box::new(g)))),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            IType::Int(_) => 1,
            IType::Fun(f) => f.size(),
        }
    }
}

impl FType {
    pub fn size(&self) -> usize {
        match self {
            FType::Top => 1,
            FType::Arrow(a, b) => 1 + a.size() + b.size(),
            FType::Meet(f, g) => 1 + f.size() + g.size(),
        }
    }
}

/// `n ↦ n`; a table becomes the meet of its entries' arrows, `Top` when empty.
pub fn typof(d: &Elem) -> IType {
    match d {
        Elem::Num(n) => IType::Int(*n),
        Elem::Fun(t) => {
            let mut arrows = t.entries().iter().map(|(a, b)| FType::Arrow(Box::new(typof(a)), Box::new(typof(b))));
            let first = match arrows.next() {
                Some(f) => f,
                None => return IType::top(),
            };
            IType::Fun(arrows.fold(first, |acc, f| FType::Meet(Box::new(acc), Box::new(f))))
        }
    }
}

pub fn eltof(a: &IType) -> Elem {
    match a {
        IType::Int(n) => Elem::Num(*n),
        IType::Fun(f) => Elem::Fun(tabof(f)),
    }
}

pub fn tabof(f: &FType) -> Table<Elem> {
    match f {
        FType::Top => Table::empty(),
        FType::Arrow(a, b) => Table::singleton(eltof(a), eltof(b)),
        FType::Meet(f, g) => tabof(f).union(&tabof(g)),
    }
}

/// `a <: b`, decided as `eltof(b) ⊑ eltof(a)`.
pub fn subtype(a: &IType, b: &IType) -> bool {
    le(&eltof(b), &eltof(a))
}

pub fn type_equiv(a: &IType, b: &IType) -> bool {
    eltof(a) == eltof(b)
}

/// `Γ ⊢ e : a`, decided through the isomorphism with the elementary semantics.
pub fn typable(env: &TEnv, e: &Expr, a: &IType, cfg: &EnumCfg) -> Result<Verdict, EnumError> {
    let denv: Env = env.iter().map(|(x, t)| (x.clone(), eltof(t))).collect();
    contains(e, &denv, &eltof(a), cfg)
}

// Printing precedence: meets are loosest, then arrows, then atoms.
const MEET: u8 = 0;
const ARROW: u8 = 1;
const ATOM: u8 = 2;

fn write_i(t: &IType, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        IType::Int(n) => write!(f, "{n}"),
        IType::Fun(g) => write_f(g, min, f),
    }
}

fn write_f(t: &FType, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match t {
        FType::Top => ATOM,
        FType::Arrow(..) => ARROW,
        FType::Meet(..) => MEET,
    };
    if level < min {
        f.write_str("(")?;
        write_f(t, MEET, f)?;
        return f.write_str(")");
    }
    match t {
        FType::Top => f.write_str("Top"),
        FType::Arrow(a, b) => {
            write_i(a, ATOM, f)?;
            f.write_str(" -> ")?;
            write_i(b, ARROW, f)
        }
        FType::Meet(g, h) => {
            write_f(g, MEET, f)?;
            f.write_str(" /\\ ")?;
            write_f(h, ARROW, f)
        }
    }
}

impl fmt::Display for IType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_i(self, MEET, f)
    }
}

impl fmt::Debug for IType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_f(self, MEET, f)
    }
}

impl fmt::Debug for FType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
