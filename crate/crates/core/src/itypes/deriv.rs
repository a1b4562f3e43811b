//! Direct derivation search over the subtyping and typing rules, used to
//! cross-check the isomorphism-based deciders on small inputs.
//!
//! Transitivity is only ever used to compose a projection out of a meet on
//! the left, so every rule application descends into strict subterms and
//! the search terminates without a fuel bound.

use crate::domain::{universe, EnumCfg};
use crate::syntax::{BinOp, Expr};

use super::{typof, FType, IType, TEnv};

pub fn subtype_declarative(a: &IType, b: &IType) -> bool {
    match (a, b) {
        (IType::Int(m), IType::Int(n)) => m == n,
        (IType::Fun(f), IType::Fun(g)) => fsub(f, g),
        _ => false,
    }
}

fn equiv(a: &IType, b: &IType) -> bool {
    subtype_declarative(a, b) && subtype_declarative(b, a)
}

fn fsub(f: &FType, g: &FType) -> bool {
    if f == g {
        return true;
    }
    match (f, g) {
        (FType::Arrow(..) | FType::Meet(..), FType::Top) => true,
        (_, FType::Meet(g1, g2)) if fsub(f, g1) && fsub(f, g2) => true,
        (FType::Meet(f1, f2), _) if fsub(f1, g) || fsub(f2, g) => true,
        (FType::Arrow(a, b), FType::Arrow(c, d)) => equiv(a, c) && equiv(b, d),
        _ => false,
    }
}

/// Bounded derivation search for `Γ ⊢ e : a`. Types guessed by the
/// application and primitive rules range over the `typof` image of the
/// universe described by `cfg`.
pub fn typable_declarative(env: &TEnv, e: &Expr, a: &IType, cfg: &EnumCfg) -> bool {
    let pool: Vec<IType> = universe(cfg).iter().map(typof).collect();
    Search { pool: &pool }.ty(env, e, a)
}

struct Search<'a> {
    pool: &'a [IType],
}

impl Search<'_> {
    fn ints(&self) -> impl Iterator<Item = i64> + '_ {
        self.pool.iter().filter_map(|t| match t {
            IType::Int(n) => Some(*n),
            _ => None,
        })
    }

    fn ty(&self, env: &TEnv, e: &Expr, a: &IType) -> bool {
        match e {
            Expr::Int(n) => matches!(a, IType::Int(m) if n == &(*m).into()),
            Expr::Var(x) => env.get(x).is_some_and(|t| subtype_declarative(t, a)),
            Expr::Prim(op, l, r) => self.prim(env, *op, l, r, a),
            Expr::Lam(..) => match a {
                IType::Int(_) => false,
                IType::Fun(f) => self.lam(env, e, f),
            },
            Expr::App(f, arg) => {
                let cods = self.pool.iter().chain(std::iter::once(a));
                cods.filter(|b| subtype_declarative(b, a)).any(|b| {
                    self.pool.iter().any(|dom| {
                        self.ty(env, arg, dom) && self.ty(env, f, &IType::arrow(dom.clone(), b.clone()))
                    })
                })
            }
            Expr::If(c, t, el) => self.ints().any(|n| {
                self.ty(env, c, &IType::Int(n)) && self.ty(env, if n != 0 { t } else { el }, a)
            }),
        }
    }

    fn prim(&self, env: &TEnv, op: BinOp, l: &Expr, r: &Expr, a: &IType) -> bool {
        let IType::Int(want) = a else { return false };
        self.ints().any(|m| {
            self.ty(env, l, &IType::Int(m))
                && self
                    .ints()
                    .any(|n| op.apply_i64(m, n) == Some(*want) && self.ty(env, r, &IType::Int(n)))
        })
    }

    fn lam(&self, env: &TEnv, e: &Expr, f: &FType) -> bool {
        let Expr::Lam(x, body) = e else { unreachable!() };
        match f {
            FType::Top => true,
            FType::Meet(g, h) => self.lam(env, e, g) && self.lam(env, e, h),
            FType::Arrow(a, b) => {
                let mut inner = env.clone();
                inner.insert(x.clone(), (**a).clone());
                self.ty(&inner, body, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::itypes::{parse_type, subtype, typable};
    use crate::syntax::parse;

    fn t(s: &str) -> IType {
        parse_type(s).unwrap()
    }

    #[test]
    fn subtyping_rules() {
        assert!(subtype_declarative(&t("1 -> 2"), &t("Top")));
        assert!(subtype_declarative(&t("1 -> 2 /\\ Top"), &t("1 -> 2")));
        assert!(subtype_declarative(&t("(1 -> 2 /\\ 3 -> 4) /\\ Top"), &t("3 -> 4 /\\ 1 -> 2")));
        assert!(subtype_declarative(&t("Top -> 1"), &t("Top /\\ Top -> 1")));
        assert!(!subtype_declarative(&t("Top"), &t("1 -> 2")));
        // No contravariance: a wider domain does not give a subtype.
        assert!(!subtype_declarative(&t("Top -> 1"), &t("(1 -> 2) -> 1")));
    }

    #[test]
    fn typing_rules() {
        let c = EnumCfg::new(1, 0, 3, 1).unwrap();
        let g = TEnv::new();
        assert!(typable_declarative(&g, &parse("2 + 1").unwrap(), &t("3"), &c));
        assert!(typable_declarative(&g, &parse("\\x. x + 1").unwrap(), &t("1 -> 2 /\\ 2 -> 3"), &c));
        assert!(typable_declarative(&g, &parse("(\\x. x) 3").unwrap(), &t("3"), &c));
        assert!(!typable_declarative(&g, &parse("(\\x. x) 3").unwrap(), &t("2"), &c));
        assert!(!typable_declarative(&g, &parse("1 2").unwrap(), &t("1"), &c));
    }

    #[test]
    fn agrees_with_the_isomorphism() {
        let c = EnumCfg::new(1, 0, 2, 1).unwrap();
        let goals = ["0", "1", "2", "Top", "0 -> 1", "1 -> 2", "1 -> 2 /\\ 0 -> 1", "(0 -> 0) -> 0"];
        let g = TEnv::new();
        for src in ["1 + 1", "\\x. x + 1", "(\\f. f 1) (\\x. x + 1)", "if 0 then 1 else 2", "\\x. x"] {
            let e = parse(src).unwrap();
            for goal in goals {
                let a = t(goal);
                assert_eq!(
                    typable_declarative(&g, &e, &a, &c),
                    typable(&g, &e, &a, &c).unwrap().is_yes(),
                    "{src} : {goal}"
                );
            }
        }
        for a in goals {
            for b in goals {
                assert_eq!(subtype_declarative(&t(a), &t(b)), subtype(&t(a), &t(b)), "{a} <: {b}");
            }
        }
    }
}
