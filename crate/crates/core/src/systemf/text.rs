use std::fmt;

use num_traits::ToPrimitive;

use crate::error::ParseError;
use crate::lex::{Cursor, Tok};
use crate::syntax::{BinOp, Ident};

use super::{SfElem, SfExpr, SfType};

const KEYWORDS: &[&str] = &["if", "then", "else", "fix", "forall", "int", "wrong", "thunk"];

/// Parse a System F term.
///
/// ```text
/// expr  := "if" expr "then" expr "else" expr
///        | "\" ident ":" type "." expr | "/\" "." expr
///        | "fix" ident ":" type "." expr | arith
/// arith := app (("+"|"*"|"-") app)*
/// app   := atom (atom | "[" type "]")*
/// atom  := integer | ident | "(" expr ")" | "(" "-" integer ")"
/// type  := "forall" "." type | tatom ("->" type)?
/// tatom := "int" | "#" index | "(" type ")"
/// ```
pub fn parse_sf(src: &str) -> Result<SfExpr, ParseError> {
    let mut cur = Cursor::new(src)?;
    let e = expr(&mut cur)?;
    cur.expect_end()?;
    Ok(e)
}

pub fn parse_sf_type(src: &str) -> Result<SfType, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = ty(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

/// Elements: integers, tables, `wrong`, `thunk(none)`, `thunk(some d)`.
pub fn parse_sf_elem(src: &str) -> Result<SfElem, ParseError> {
    let mut cur = Cursor::new(src)?;
    let d = elem(&mut cur)?;
    cur.expect_end()?;
    Ok(d)
}

fn expr(cur: &mut Cursor) -> Result<SfExpr, ParseError> {
    if cur.eat_keyword("if") {
        let c = expr(cur)?;
        cur.expect_keyword("then")?;
        let t = expr(cur)?;
        cur.expect_keyword("else")?;
        let e = expr(cur)?;
        return Ok(SfExpr::If(Box::new(c), Box::new(t), Box::new(e)));
    }
    if cur.eat_sym("\\") {
        let (x, a) = binder(cur)?;
        return Ok(SfExpr::Lam(x, a, Box::new(expr(cur)?)));
    }
    if cur.eat_sym("/\\") {
        cur.expect_sym(".")?;
        return Ok(SfExpr::TyAbs(Box::new(expr(cur)?)));
    }
    if cur.eat_keyword("fix") {
        let (x, a) = binder(cur)?;
        return Ok(SfExpr::Fix(x, a, Box::new(expr(cur)?)));
    }
    arith(cur)
}

fn binder(cur: &mut Cursor) -> Result<(Ident, SfType), ParseError> {
    let x = ident(cur)?;
    cur.expect_sym(":")?;
    let a = ty(cur)?;
    cur.expect_sym(".")?;
    Ok((x, a))
}

fn arith(cur: &mut Cursor) -> Result<SfExpr, ParseError> {
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
        lhs = SfExpr::Prim(op, Box::new(lhs), Box::new(rhs));
    }
}

fn app(cur: &mut Cursor) -> Result<SfExpr, ParseError> {
    let mut f = atom(cur)?;
    loop {
        if cur.eat_sym("[") {
            let a = ty(cur)?;
            cur.expect_sym("]")?;
            f = SfExpr::TyApp(Box::new(f), a);
        } else if starts_atom(cur) {
            f = SfExpr::App(Box::new(f), Box::new(atom(cur)?));
        } else {
            return Ok(f);
        }
    }
}

fn starts_atom(cur: &Cursor) -> bool {
    match cur.peek() {
        Some(Tok::Int(_)) | Some(Tok::Sym("(")) => true,
        Some(Tok::Ident(x)) => !KEYWORDS.contains(&x.as_str()),
        _ => false,
    }
}

fn int(cur: &mut Cursor) -> Result<i64, ParseError> {
    let n = cur.signed_int()?;
    n.to_i64().ok_or_else(|| cur.error(format!("integer {n} out of range")))
}

fn atom(cur: &mut Cursor) -> Result<SfExpr, ParseError> {
    match cur.peek() {
        Some(Tok::Int(_)) => Ok(SfExpr::Num(int(cur)?)),
        Some(Tok::Ident(_)) => Ok(SfExpr::Var(ident(cur)?)),
        Some(Tok::Sym("(")) => {
            cur.next();
            if cur.is_sym("-") && matches!(cur.peek_at(1), Some(Tok::Int(_))) {
                let n = int(cur)?;
                cur.expect_sym(")")?;
                return Ok(SfExpr::Num(n));
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

fn ty(cur: &mut Cursor) -> Result<SfType, ParseError> {
    if cur.eat_keyword("forall") {
        cur.expect_sym(".")?;
        return Ok(SfType::forall(ty(cur)?));
    }
    let dom = if cur.eat_keyword("int") {
        SfType::Int
    } else if cur.eat_sym("#") {
        match cur.next() {
            Some(Tok::Int(n)) => SfType::Var(
                n.to_usize()
                    .ok_or_else(|| cur.error(format!("type index {n} out of range")))?,
            ),
            _ => return Err(cur.error("expected a type index".to_string())),
        }
    } else if cur.eat_sym("(") {
        let t = ty(cur)?;
        cur.expect_sym(")")?;
        t
    } else {
        return Err(cur.error("expected a type".to_string()));
    };
    if cur.eat_sym("->") {
        return Ok(SfType::arrow(dom, ty(cur)?));
    }
    Ok(dom)
}

fn elem(cur: &mut Cursor) -> Result<SfElem, ParseError> {
    if cur.eat_keyword("wrong") {
        return Ok(SfElem::Wrong);
    }
    if cur.eat_keyword("thunk") {
        cur.expect_sym("(")?;
        let content = if cur.eat_keyword("none") {
            None
        } else {
            cur.expect_keyword("some")?;
            Some(elem(cur)?)
        };
        cur.expect_sym(")")?;
        return Ok(SfElem::thunk(content));
    }
    if cur.eat_sym("{") {
        let mut entries = Vec::new();
        if !cur.eat_sym("}") {
            loop {
                cur.expect_sym("(")?;
                let a = elem(cur)?;
                cur.expect_sym(",")?;
                let b = elem(cur)?;
                cur.expect_sym(")")?;
                entries.push((a, b));
                if cur.eat_sym("}") {
                    break;
                }
                cur.expect_sym(",")?;
            }
        }
        return Ok(SfElem::table(entries));
    }
    Ok(SfElem::Num(int(cur)?))
}

fn write_ty(t: &SfType, atomic: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let compound = matches!(t, SfType::Arrow(..) | SfType::Forall(_));
    if atomic && compound {
        f.write_str("(")?;
        write_ty(t, false, f)?;
        return f.write_str(")");
    }
    match t {
        SfType::Int => f.write_str("int"),
        SfType::Var(i) => write!(f, "#{i}"),
        SfType::Arrow(a, b) => {
            write_ty(a, true, f)?;
            f.write_str(" -> ")?;
            write_ty(b, false, f)
        }
        SfType::Forall(a) => {
            f.write_str("forall. ")?;
            write_ty(a, false, f)
        }
    }
}

impl fmt::Display for SfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ty(self, false, f)
    }
}

impl fmt::Debug for SfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

const EXPR: u8 = 0;
const ARITH: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

fn level(e: &SfExpr) -> u8 {
    match e {
        SfExpr::If(..) | SfExpr::Lam(..) | SfExpr::TyAbs(_) | SfExpr::Fix(..) => EXPR,
        SfExpr::Prim(..) => ARITH,
        SfExpr::App(..) | SfExpr::TyApp(..) => APP,
        SfExpr::Num(_) | SfExpr::Var(_) => ATOM,
    }
}

fn write_at(e: &SfExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(e) < min {
        f.write_str("(")?;
        write_at(e, EXPR, f)?;
        return f.write_str(")");
    }
    match e {
        SfExpr::Num(n) if *n < 0 => write!(f, "({n})"),
        SfExpr::Num(n) => write!(f, "{n}"),
        SfExpr::Var(x) => write!(f, "{x}"),
        SfExpr::Prim(op, l, r) => {
            write_at(l, ARITH, f)?;
            write!(f, " {} ", op.symbol())?;
            write_at(r, APP, f)
        }
        SfExpr::App(g, a) => {
            write_at(g, APP, f)?;
            f.write_str(" ")?;
            write_at(a, ATOM, f)
        }
        SfExpr::TyApp(g, a) => {
            write_at(g, APP, f)?;
            write!(f, " [{a}]")
        }
        SfExpr::Lam(x, a, b) => {
            write!(f, "\\{x}: {a}. ")?;
            write_at(b, EXPR, f)
        }
        SfExpr::Fix(x, a, b) => {
            write!(f, "fix {x}: {a}. ")?;
            write_at(b, EXPR, f)
        }
        SfExpr::TyAbs(b) => {
            f.write_str("/\\. ")?;
            write_at(b, EXPR, f)
        }
        SfExpr::If(c, t, el) => {
            f.write_str("if ")?;
            write_at(c, EXPR, f)?;
            f.write_str(" then ")?;
            write_at(t, EXPR, f)?;
            f.write_str(" else ")?;
            write_at(el, EXPR, f)
        }
    }
}

impl fmt::Display for SfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, EXPR, f)
    }
}

impl fmt::Debug for SfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl fmt::Display for SfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SfElem::Num(n) => write!(f, "{n}"),
            SfElem::Wrong => f.write_str("wrong"),
            SfElem::Thunk(None) => f.write_str("thunk(none)"),
            SfElem::Thunk(Some(d)) => write!(f, "thunk(some {d})"),
            SfElem::Fun(t) => {
                f.write_str("{")?;
                for (i, (a, b)) in t.entries().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "({a},{b})")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for SfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_round_trip() {
        for src in [
            "/\\. \\x: #0. x",
            "(/\\. \\x: #0. x) [int] 5",
            "fix f: int -> int. \\x: int. if x then x * f (x - 1) else 1",
            "\\f: forall. #0 -> #0. f [int -> int] (f [int])",
            "\\g: (int -> int) -> int. g (\\y: int. y + (-1))",
        ] {
            let e = parse_sf(src).unwrap();
            assert_eq!(e.to_string(), src);
        }
    }

    #[test]
    fn types_round_trip() {
        for src in ["int", "#3", "int -> int -> int", "(int -> int) -> int", "forall. #0 -> #0", "(forall. #0) -> int"] {
            assert_eq!(parse_sf_type(src).unwrap().to_string(), src);
        }
        assert!(parse_sf_type("int ->").is_err());
    }

    #[test]
    fn elements_round_trip() {
        for src in ["wrong", "thunk(none)", "thunk(some {(1,thunk(none))})", "{(1,2),(3,wrong)}", "-2"] {
            assert_eq!(parse_sf_elem(src).unwrap().to_string(), src);
        }
    }
}
