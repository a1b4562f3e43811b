use num_traits::ToPrimitive;

use crate::error::ParseError;
use crate::lex::Cursor;

use super::Elem;

/// Parse the element text format: decimal integers, `{}` and
/// `{(d,d'),(d,d')}`. Entries may appear in any order.
pub fn parse_elem(src: &str) -> Result<Elem, ParseError> {
    let mut cur = Cursor::new(src)?;
    let d = elem(&mut cur)?;
    cur.expect_end()?;
    Ok(d)
}

fn elem(cur: &mut Cursor) -> Result<Elem, ParseError> {
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
        return Ok(Elem::table(entries));
    }
    let n = cur.signed_int()?;
    n.to_i64()
        .map(Elem::Num)
        .ok_or_else(|| cur.error(format!("integer {n} out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_printing() {
        let d = parse_elem("{(2,0),(1,7)}").unwrap();
        assert_eq!(d.to_string(), "{(1,7),(2,0)}");
        assert_eq!(parse_elem("{}").unwrap().to_string(), "{}");
        assert_eq!(parse_elem("-4").unwrap(), Elem::Num(-4));
        assert_eq!(
            parse_elem("{ ( {}, {(1,1)} ) }").unwrap().to_string(),
            "{({},{(1,1)})}"
        );
        assert!(parse_elem("{(1,2)").is_err());
        assert!(parse_elem("{(1)}").is_err());
    }
}
