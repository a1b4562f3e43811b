use num_traits::ToPrimitive;

use crate::error::ParseError;
use crate::lex::Cursor;

use super::{FType, IType};

/// Parse a type: integers, `Top`, `A -> B` (right-associative, binds
/// tighter than meet), `F /\ G` (left-associative) and parentheses.
pub fn parse_type(src: &str) -> Result<IType, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = meet(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

fn meet(cur: &mut Cursor) -> Result<IType, ParseError> {
    let mut acc = arrow(cur)?;
    while cur.is_sym("/\\") {
        let at = cur.error("integer types cannot appear in a meet".into());
        cur.next();
        let rhs = arrow(cur)?;
        acc = IType::meet(acc, rhs).ok_or(at)?;
    }
    Ok(acc)
}

fn arrow(cur: &mut Cursor) -> Result<IType, ParseError> {
    let dom = atom(cur)?;
    if cur.eat_sym("->") {
        let cod = arrow(cur)?;
        return Ok(IType::Fun(FType::Arrow(Box::new(dom), Box::new(cod))));
    }
    Ok(dom)
}

fn atom(cur: &mut Cursor) -> Result<IType, ParseError> {
    if cur.eat_sym("(") {
        let t = meet(cur)?;
        cur.expect_sym(")")?;
        return Ok(t);
    }
    if cur.eat_keyword("Top") {
        return Ok(IType::top());
    }
    let n = cur.signed_int()?;
    n.to_i64()
        .map(IType::Int)
        .ok_or_else(|| cur.error(format!("integer {n} out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_round_trip() {
        let t = parse_type("1 -> 2 -> 3").unwrap();
        assert_eq!(t, IType::arrow(IType::Int(1), IType::arrow(IType::Int(2), IType::Int(3))));
        let m = parse_type("1 -> 2 /\\ Top").unwrap();
        assert!(matches!(m, IType::Fun(FType::Meet(..))));
        for s in [
            "5",
            "-3",
            "Top",
            "(1 -> 2) -> 3",
            "1 -> (2 -> 3 /\\ Top)",
            "1 -> 2 /\\ 3 -> 4 /\\ Top",
            "1 -> 2 /\\ (3 -> 4 /\\ Top)",
            "(Top /\\ Top) -> -1",
        ] {
            let t = parse_type(s).unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(parse_type(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn integers_are_rejected_in_meets() {
        assert!(parse_type("1 /\\ Top").is_err());
        assert!(parse_type("Top /\\ 2").is_err());
        assert!(parse_type("1 ->").is_err());
    }
}
