use crate::error::ParseError;
use crate::lex::{Cursor, Tok};

use super::{BinOp, Expr, Ident};

const KEYWORDS: &[&str] = &["if", "then", "else"];

/// Parse a term of the untyped calculus.
///
/// ```text
/// expr  := "if" expr "then" expr "else" expr | lam
/// lam   := "\" ident "." expr | arith
/// arith := app (("+"|"*"|"-") app)*
/// app   := atom atom*
/// atom  := integer | ident | "(" expr ")" | "(" "-" integer ")"
/// ```
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut cur = Cursor::new(src)?;
    let e = expr(&mut cur)?;
    cur.expect_end()?;
    Ok(e)
}

fn expr(cur: &mut Cursor) -> Result<Expr, ParseError> {
    if cur.eat_keyword("if") {
        let c = expr(cur)?;
        cur.expect_keyword("then")?;
        let t = expr(cur)?;
        cur.expect_keyword("else")?;
        let e = expr(cur)?;
        return Ok(Expr::if_(c, t, e));
    }
    if cur.eat_sym("\\") {
        let x = ident(cur)?;
        cur.expect_sym(".")?;
        let body = expr(cur)?;
        return Ok(Expr::Lam(x, Box::new(body)));
    }
    arith(cur)
}

fn arith(cur: &mut Cursor) -> Result<Expr, ParseError> {
    let mut lhs = app(cur)?;
    loop {
        let op = if cur.eat_sym("+") {
            BinOp::Add
        } else if cur.eat_sym("*") {
            BinOp::Mul
        } else if cur.eat_sym("-") {
            BinOp::Sub
        } else {
            return Ok(lhs);
        };
        let rhs = app(cur)?;
        lhs = Expr::prim(op, lhs, rhs);
    }
}

fn app(cur: &mut Cursor) -> Result<Expr, ParseError> {
    let mut f = atom(cur)?;
    while starts_atom(cur) {
        let a = atom(cur)?;
        f = Expr::app(f, a);
    }
    Ok(f)
}

fn starts_atom(cur: &Cursor) -> bool {
    match cur.peek() {
        Some(Tok::Int(_)) => true,
        Some(Tok::Ident(x)) => !KEYWORDS.contains(&x.as_str()),
        Some(Tok::Sym("(")) => true,
        _ => false,
    }
}

fn atom(cur: &mut Cursor) -> Result<Expr, ParseError> {
    match cur.peek() {
        Some(Tok::Int(_)) => Ok(Expr::Int(cur.signed_int()?)),
        Some(Tok::Ident(_)) => Ok(Expr::Var(ident(cur)?)),
        Some(Tok::Sym("(")) => {
            cur.next();
            if cur.is_sym("-") && matches!(cur.peek_at(1), Some(Tok::Int(_))) {
                let n = cur.signed_int()?;
                cur.expect_sym(")")?;
                return Ok(Expr::Int(n));
            }
            let e = expr(cur)?;
            cur.expect_sym(")")?;
            Ok(e)
        }
        _ => Err(cur.error("expected an expression".to_string())),
    }
}

fn ident(cur: &mut Cursor) -> Result<Ident, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str()) => {
            let id = Ident::new(x);
            cur.next();
            Ok(id)
        }
        _ => Err(cur.error("expected identifier".to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("1 + 2").unwrap(),
            Expr::prim(BinOp::Add, Expr::int(1), Expr::int(2))
        );
        assert_eq!(parse("\\x. x").unwrap(), Expr::lam("x", Expr::var("x")));
        assert_eq!(
            parse("if 0 then 1 else 2").unwrap(),
            Expr::if_(Expr::int(0), Expr::int(1), Expr::int(2))
        );
    }

    #[test]
    fn application_is_left_associative() {
        let e = parse("f a b").unwrap();
        let expected = Expr::app(Expr::app(Expr::var("f"), Expr::var("a")), Expr::var("b"));
        assert_eq!(e, expected);
    }

    #[test]
    fn arithmetic_binds_inside_lambda_bodies() {
        let e = parse("\\x. x + 1").unwrap();
        assert_eq!(
            e,
            Expr::lam("x", Expr::prim(BinOp::Add, Expr::var("x"), Expr::int(1)))
        );
        let e = parse("f 1 + g 2").unwrap();
        assert_eq!(
            e,
            Expr::prim(
                BinOp::Add,
                Expr::app(Expr::var("f"), Expr::int(1)),
                Expr::app(Expr::var("g"), Expr::int(2))
            )
        );
    }

    #[test]
    fn negative_literals_are_parenthesised() {
        assert_eq!(parse("(-3)").unwrap(), Expr::int(-3));
        assert_eq!(
            parse("1 - 3").unwrap(),
            Expr::prim(BinOp::Sub, Expr::int(1), Expr::int(3))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("\\x x").unwrap_err();
        assert_eq!((err.line, err.col), (1, 4));
        let err = parse("(1 +\n  )").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
        assert!(parse("if 1 then 2").is_err());
        assert!(parse("1 2 )").is_err());
        assert!(parse("\\then. 1").is_err());
    }
}
