//! System F with general recursion: DeBruijn-indexed types, a type
//! checker, an elementary semantics with `wrong` and thunks, and a
//! semantics of types for checking soundness.

mod sem;
mod text;
mod types;

use std::collections::BTreeMap;

use crate::error::TypeError;
use crate::syntax::{BinOp, Ident};

pub use sem::{
    sf_apply, sf_down, sf_enumerate, sf_enumerate_with, sf_le, sf_universe, FixSeed, SfElem, SfSet,
};
pub use text::{parse_sf, parse_sf_elem, parse_sf_type};
pub use types::{in_type, sample_family, sf_soundness_check, Membership, SoundnessReport};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SfType {
    Int,
    Arrow(Box<SfType>, Box<SfType>),
    Forall(Box<SfType>),
    Var(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SfExpr {
    Num(i64),
    Prim(BinOp, Box<SfExpr>, Box<SfExpr>),
    Var(Ident),
    Lam(Ident, SfType, Box<SfExpr>),
    App(Box<SfExpr>, Box<SfExpr>),
    TyAbs(Box<SfExpr>),
    TyApp(Box<SfExpr>, SfType),
    Fix(Ident, SfType, Box<SfExpr>),
    /// Nonzero selects the first branch.
    If(Box<SfExpr>, Box<SfExpr>, Box<SfExpr>),
}

impl SfType {
    pub fn arrow(a: SfType, b: SfType) -> SfType {
        SfType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn forall(a: SfType) -> SfType {
        SfType::Forall(Box::new(a))
    }
}

/// Add `k` to every index at or above the cutoff `c`.
pub fn shift(k: isize, c: usize, a: &SfType) -> Result<SfType, TypeError> {
    Ok(match a {
        SfType::Int => SfType::Int,
        SfType::Var(i) if *i >= c => {
            let j = *i as isize + k;
            if j < 0 {
                return Err(TypeError::NegativeIndex);
            }
            SfType::Var(j as usize)
        }
        SfType::Var(i) => SfType::Var(*i),
        SfType::Arrow(x, y) => SfType::arrow(shift(k, c, x)?, shift(k, c, y)?),
        SfType::Forall(x) => SfType::forall(shift(k, c + 1, x)?),
    })
}

fn up(k: usize, c: usize, a: &SfType) -> SfType {
    shift(k as isize, c, a).expect("upward shifts never go negative")
}

/// `[i ↦ b]a`: replace index `i`, lowering the free indices above it.
pub fn tysubst(i: usize, b: &SfType, a: &SfType) -> SfType {
    match a {
        SfType::Int => SfType::Int,
        SfType::Var(j) if *j == i => b.clone(),
        SfType::Var(j) if *j > i => SfType::Var(j - 1),
        SfType::Var(j) => SfType::Var(*j),
        SfType::Arrow(x, y) => SfType::arrow(tysubst(i, b, x), tysubst(i, b, y)),
        SfType::Forall(x) => SfType::forall(tysubst(i + 1, &up(1, 0, b), x)),
    }
}

/// Term variables with their types and the binder count at definition,
/// plus the number of enclosing type binders.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SfTEnv {
    vars: BTreeMap<Ident, (SfType, usize)>,
    binders: usize,
}

impl SfTEnv {
    pub fn new() -> SfTEnv {
        SfTEnv::default()
    }

    pub fn binders(&self) -> usize {
        self.binders
    }

    pub fn extend(&self, x: Ident, a: SfType) -> SfTEnv {
        let mut g = self.clone();
        g.vars.insert(x, (a, self.binders));
        g
    }

    pub fn ty_extend(&self) -> SfTEnv {
        SfTEnv {
            vars: self.vars.clone(),
            binders: self.binders + 1,
        }
    }

    pub fn lookup(&self, x: &Ident) -> Result<SfType, TypeError> {
        let (a, j) = self.vars.get(x).ok_or_else(|| TypeError::Unbound(x.to_string()))?;
        if *j > self.binders {
            return Err(TypeError::IllFormedEnv(x.to_string(), *j, self.binders));
        }
        Ok(up(self.binders - j, 0, a))
    }

    pub fn is_well_formed(&self) -> bool {
        self.vars.values().all(|(_, j)| *j <= self.binders)
    }
}

fn ill(msg: String) -> TypeError {
    TypeError::IllTyped(msg)
}

pub fn sf_typecheck(env: &SfTEnv, e: &SfExpr) -> Result<SfType, TypeError> {
    match e {
        SfExpr::Num(_) => Ok(SfType::Int),
        SfExpr::Prim(op, l, r) => {
            for side in [l, r] {
                let t = sf_typecheck(env, side)?;
                if t != SfType::Int {
                    return Err(ill(format!("operand of `{}` has type {t}, expected int", op.symbol())));
                }
            }
            Ok(SfType::Int)
        }
        SfExpr::Var(x) => env.lookup(x),
        SfExpr::Lam(x, a, body) => {
            let b = sf_typecheck(&env.extend(x.clone(), a.clone()), body)?;
            Ok(SfType::arrow(a.clone(), b))
        }
        SfExpr::App(f, arg) => match sf_typecheck(env, f)? {
            SfType::Arrow(a, b) => {
                let t = sf_typecheck(env, arg)?;
                if t != *a {
                    return Err(ill(format!("argument has type {t}, expected {a}")));
                }
                Ok(*b)
            }
            t => Err(ill(format!("operator has type {t}, not a function type"))),
        },
        SfExpr::TyAbs(body) => Ok(SfType::forall(sf_typecheck(&env.ty_extend(), body)?)),
        SfExpr::TyApp(f, b) => match sf_typecheck(env, f)? {
            SfType::Forall(a) => Ok(tysubst(0, b, &a)),
            t => Err(ill(format!("type application of {t}, not a universal type"))),
        },
        SfExpr::Fix(x, a, body) => {
            if !matches!(a, SfType::Arrow(..)) {
                return Err(ill(format!("fix annotation {a} is not a function type")));
            }
            let t = sf_typecheck(&env.extend(x.clone(), a.clone()), body)?;
            if t != *a {
                return Err(ill(format!("fix body has type {t}, expected {a}")));
            }
            Ok(a.clone())
        }
        SfExpr::If(c, t, el) => {
            let tc = sf_typecheck(env, c)?;
            if tc != SfType::Int {
                return Err(ill(format!("condition has type {tc}, expected int")));
            }
            let (a, b) = (sf_typecheck(env, t)?, sf_typecheck(env, el)?);
            if a != b {
                return Err(ill(format!("branches have types {a} and {b}")));
            }
            Ok(a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> SfType {
        SfType::Var(i)
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(1, 0, &v(0)).unwrap(), v(1));
        assert_eq!(shift(1, 0, &SfType::forall(v(0))).unwrap(), SfType::forall(v(0)));
        assert_eq!(
            shift(2, 1, &SfType::arrow(v(0), v(1))).unwrap(),
            SfType::arrow(v(0), v(3))
        );
        assert_eq!(shift(-1, 0, &v(0)), Err(TypeError::NegativeIndex));
    }

    #[test]
    fn tysubst_examples() {
        assert_eq!(tysubst(0, &SfType::Int, &v(0)), SfType::Int);
        assert_eq!(tysubst(0, &SfType::Int, &SfType::forall(v(1))), SfType::forall(SfType::Int));
        assert_eq!(
            tysubst(0, &SfType::Int, &SfType::arrow(v(0), v(1))),
            SfType::arrow(SfType::Int, v(0))
        );
    }

    #[test]
    fn environment_examples() {
        let x = Ident::new("x");
        let g = SfTEnv::new().extend(x.clone(), SfType::Int);
        assert_eq!(g.lookup(&x).unwrap(), SfType::Int);
        let g = SfTEnv::new().extend(x.clone(), v(0)).ty_extend();
        assert_eq!(g.lookup(&x).unwrap(), v(1));
        assert_eq!(SfTEnv::new().ty_extend().binders(), 1);
        assert!(g.is_well_formed());
        assert!(matches!(SfTEnv::new().lookup(&x), Err(TypeError::Unbound(_))));
    }

    #[test]
    fn typecheck_examples() {
        let g = SfTEnv::new();
        let id = parse_sf("/\\. \\x: #0. x").unwrap();
        assert_eq!(sf_typecheck(&g, &id).unwrap(), parse_sf_type("forall. #0 -> #0").unwrap());
        let inst = parse_sf("(/\\. \\x: #0. x) [int]").unwrap();
        assert_eq!(sf_typecheck(&g, &inst).unwrap(), parse_sf_type("int -> int").unwrap());
        assert!(sf_typecheck(&g, &parse_sf("1 2").unwrap()).is_err());
        assert!(sf_typecheck(&g, &parse_sf("fix f: int. f").unwrap()).is_err());
        assert!(sf_typecheck(&g, &parse_sf("fix f: int -> int. \\x: int. f x").unwrap()).is_ok());
    }
}
