//! Named terms used across tests, examples and the command line.

use super::{parse, Expr};

fn fixed(src: &str) -> Expr {
    parse(src).expect("built-in term parses")
}

/// `(\x. x x) (\x. x x)`
pub fn omega() -> Expr {
    fixed("(\\x. x x) (\\x. x x)")
}

/// The call-by-value fixed-point combinator.
pub fn z() -> Expr {
    fixed("\\f. (\\x. f (\\v. (x x) v)) (\\x. f (\\v. (x x) v))")
}

/// `\r. \n. if n then n * r (n - 1) else 1`. There is no equality test,
/// so the zero check is the conditional itself with its branches swapped.
pub fn fact_h() -> Expr {
    fixed("\\r. \\n. if n then n * r (n - 1) else 1")
}

/// `Z H`
pub fn fact() -> Expr {
    Expr::app(z(), fact_h())
}

/// `fact n`
pub fn fact_of(n: i64) -> Expr {
    Expr::app(fact(), Expr::int(n))
}
