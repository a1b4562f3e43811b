use std::fmt;

use num_traits::Signed;

use super::Expr;

// Precedence levels of the concrete grammar.
const EXPR: u8 = 0;
const ARITH: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::If(..) | Expr::Lam(..) => EXPR,
        Expr::Prim(..) => ARITH,
        Expr::App(..) => APP,
        Expr::Int(_) | Expr::Var(_) => ATOM,
    }
}

fn write_at(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min {
        f.write_str("(")?;
        write_at(e, EXPR, f)?;
        return f.write_str(")");
    }
    match e {
        Expr::Int(n) if n.is_negative() => write!(f, "({n})"),
        Expr::Int(n) => write!(f, "{n}"),
        Expr::Var(x) => write!(f, "{x}"),
        Expr::Prim(op, l, r) => {
            write_at(l, ARITH, f)?;
            write!(f, " {} ", op.symbol())?;
            write_at(r, APP, f)
        }
        Expr::App(g, a) => {
            write_at(g, APP, f)?;
            f.write_str(" ")?;
            write_at(a, ATOM, f)
        }
        Expr::Lam(x, b) => {
            write!(f, "\\{x}. ")?;
            write_at(b, EXPR, f)
        }
        Expr::If(c, t, e) => {
            f.write_str("if ")?;
            write_at(c, EXPR, f)?;
            f.write_str(" then ")?;
            write_at(t, EXPR, f)?;
            f.write_str(" else ")?;
            write_at(e, EXPR, f)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, EXPR, f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;

    #[test]
    fn minimal_parentheses() {
        for src in [
            "1 + 2 * 3",
            "1 + (2 * 3)",
            "(\\x. x) 5",
            "\\x. x x",
            "f (g x)",
            "(if 1 then 2 else 3) + 1",
            "\\x. if x then 1 else (-2)",
            "(\\x. (x 1) + (x 2)) (\\y. y * 10)",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} printed as {printed}");
        }
        assert_eq!(parse("1 + (2 * 3)").unwrap().to_string(), "1 + (2 * 3)");
        assert_eq!(parse("(1 + 2) * 3").unwrap().to_string(), "1 + 2 * 3");
        assert_eq!(parse("((f x))").unwrap().to_string(), "f x");
    }
}
