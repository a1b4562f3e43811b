//! Elementary semantics of a small call-by-value lambda calculus: syntax,
//! operational reference semantics, a finite-table denotational semantics,
//! intersection types, a verified optimizer, and a System F variant.

mod lex;

pub mod domain;
pub mod error;
pub mod syntax;
pub mod operational;
pub mod denot;
pub mod itypes;
pub mod optimizer;
pub mod systemf;
