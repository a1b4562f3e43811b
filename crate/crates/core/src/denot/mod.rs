//! The elementary semantics: a membership checker, a bounded enumerator,
//! and Engeler's semantics for comparison.
//!
//! Every enumeration runs in rounds. Arguments that reach an application
//! are recorded against the abstractions that may flow to its operator,
//! and feed the input choices of those abstractions in the next round.

mod contains;
mod engeler;
mod engine;
mod program;

use std::fmt;

use crate::domain::{Elem, EnumCfg, Env};
use crate::error::EnumError;
use crate::syntax::Expr;

pub use engeler::{engeler_enumerate, engeler_enumerate_with, EngElem};

use engine::{Engine, SlotEnv};
use program::Program;

/// How abstractions choose their input sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Subsets of the whole bounded universe one level down. Only usable
    /// at very small bounds.
    Universe,
    /// Subsets, up to the width bound, of the in-range integers plus every
    /// in-bounds argument the abstraction has been applied to. Results are
    /// downward closed.
    Exhaustive,
    /// A single relational table per abstraction and environment, holding
    /// every entry found for it, or for a pointwise smaller environment, in
    /// any round so far. Inputs are the demanded arguments only; there is
    /// no downward closure and results are pruned to maximal elements.
    /// Table width is unbounded; the width actually used is reported.
    Maximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Elements produced per round before giving up.
    pub max_work: usize,
    pub max_rounds: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_work: 4_000_000,
            max_rounds: 256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    /// No witness under the bounds. Not a refutation.
    NoWithinBound,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::NoWithinBound => "no-within-bound",
        })
    }
}

/// A canonical, duplicate-free, sorted set of elements.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ElemSet(Vec<Elem>);

impl ElemSet {
    pub fn new(elems: impl IntoIterator<Item = Elem>) -> ElemSet {
        let mut v: Vec<Elem> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        ElemSet(v)
    }

    pub fn elems(&self) -> &[Elem] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Elem> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, d: &Elem) -> bool {
        self.0.binary_search(d).is_ok()
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.0.iter().all(|d| other.contains(d))
    }

    pub fn ints(&self) -> Vec<i64> {
        self.0.iter().filter_map(Elem::as_num).collect()
    }
}

impl fmt::Display for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a ElemSet {
    type Item = &'a Elem;
    type IntoIter = std::slice::Iter<'a, Elem>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug)]
pub struct EnumReport {
    pub elems: ElemSet,
    pub rounds: usize,
    /// Largest input nesting plus one used by any abstraction.
    pub eff_depth: usize,
    /// Largest number of entries given to any table.
    pub eff_width: usize,
}

fn slots(prog: &Program, env: &Env) -> Result<SlotEnv, EnumError> {
    let mut s: SlotEnv = vec![None; prog.nslots];
    for (i, x) in prog.free.iter().enumerate() {
        let d = env.get(x).ok_or_else(|| EnumError::Unbound(x.to_string()))?;
        s[i] = Some(d.clone());
    }
    Ok(s)
}

/// Exhaustive bounded enumeration with default limits.
pub fn enumerate(e: &Expr, env: &Env, cfg: &EnumCfg) -> Result<ElemSet, EnumError> {
    Ok(enumerate_with(e, env, cfg, Mode::Exhaustive, Limits::default())?.elems)
}

pub fn enumerate_with(
    e: &Expr,
    env: &Env,
    cfg: &EnumCfg,
    mode: Mode,
    limits: Limits,
) -> Result<EnumReport, EnumError> {
    let prog = Program::compile(e);
    let env = slots(&prog, env)?;
    let mut eng = Engine::new(&prog, *cfg, mode, limits);
    let r = eng.run(&env)?;
    Ok(EnumReport {
        elems: ElemSet::new(r.iter().cloned()),
        rounds: eng.rounds,
        eff_depth: eng.eff_depth,
        eff_width: eng.eff_width,
    })
}

/// Membership of `d` in the meaning of `e`. `Yes` is always sound.
pub fn contains(e: &Expr, env: &Env, d: &Elem, cfg: &EnumCfg) -> Result<Verdict, EnumError> {
    contains_with(e, env, d, cfg, Limits::default())
}

pub fn contains_with(
    e: &Expr,
    env: &Env,
    d: &Elem,
    cfg: &EnumCfg,
    limits: Limits,
) -> Result<Verdict, EnumError> {
    let prog = Program::compile(e);
    let env = slots(&prog, env)?;
    let mut eng = Engine::new(&prog, *cfg, Mode::Exhaustive, limits);
    loop {
        eng.begin_round()?;
        if eng.check(prog.root, &env, d)? {
            return Ok(Verdict::Yes);
        }
        if !eng.fresh {
            return Ok(Verdict::NoWithinBound);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::parse_elem;
    use crate::syntax::{parse, terms, Ident};

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn e(s: &str) -> Elem {
        parse_elem(s).unwrap()
    }

    fn cfg(depth: usize, lo: i64, hi: i64, width: usize) -> EnumCfg {
        EnumCfg::new(depth, lo, hi, width).unwrap()
    }

    fn yes(src: &str, d: &str, c: &EnumCfg) -> bool {
        contains(&p(src), &Env::new(), &e(d), c).unwrap().is_yes()
    }

    #[test]
    fn contains_examples() {
        let c = cfg(1, 0, 1, 1);
        assert!(yes("\\x. x+1", "{(3,4)}", &c));
        assert!(yes("5", "5", &c));
        assert!(yes("\\x. x x", "{}", &c));
        assert!(yes("(\\x. x) 3", "3", &cfg(1, 0, 3, 1)));
        assert!(!yes("\\x. x+1", "{(3,5)}", &c));
        assert!(!yes("5", "6", &c));
    }

    #[test]
    fn contains_needs_larger_outputs_than_the_probe() {
        let env = Env::new().extend(Ident::new("g"), e("{(1,{(2,3)})}"));
        // {} is below the output {(2,3)} but {(1,{})} is not below g.
        let v = contains(&p("g 1"), &env, &e("{}"), &cfg(1, 0, 3, 1)).unwrap();
        assert_eq!(v, Verdict::Yes);
    }

    #[test]
    fn enumerate_examples() {
        let c = cfg(2, 0, 1, 2);
        assert_eq!(enumerate(&p("7"), &Env::new(), &c).unwrap().elems(), &[e("7")]);
        assert!(enumerate(&terms::omega(), &Env::new(), &c).unwrap().is_empty());
        assert!(enumerate(&p("1 2"), &Env::new(), &c).unwrap().is_empty());
        assert_eq!(enumerate(&p("(\\x. x + 1) 1"), &Env::new(), &c).unwrap().ints(), vec![2]);
    }

    #[test]
    fn abstraction_tables_over_integers() {
        let got = enumerate(&p("\\x. x * 2"), &Env::new(), &cfg(1, 0, 1, 1)).unwrap();
        assert_eq!(got, ElemSet::new([e("{}"), e("{(0,0)}"), e("{(1,2)}")]));
    }

    #[test]
    fn variables_are_downward_closed() {
        let env = Env::new().extend(Ident::new("y"), e("{(1,7),(2,0)}"));
        let got = enumerate(&p("y"), &env, &cfg(0, 0, 0, 0)).unwrap();
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn unbound_variables_are_errors() {
        let r = enumerate(&p("y"), &Env::new(), &cfg(0, 0, 0, 0));
        assert_eq!(r, Err(EnumError::Unbound("y".into())));
        assert!(contains(&p("y"), &Env::new(), &e("1"), &cfg(0, 0, 0, 0)).is_err());
    }

    #[test]
    fn modes_are_nested_on_small_terms() {
        for src in ["(\\f. f 1) (\\x. x + 1)", "(\\x. if x then 0 else 1) 1", "\\x. x"] {
            let c = cfg(2, 0, 2, 1);
            let env = Env::new();
            let uni = enumerate_with(&p(src), &env, &c, Mode::Universe, Limits::default()).unwrap();
            let exh = enumerate_with(&p(src), &env, &c, Mode::Exhaustive, Limits::default()).unwrap();
            let max = enumerate_with(&p(src), &env, &c, Mode::Maximal, Limits::default()).unwrap();
            assert!(exh.elems.is_subset(&uni.elems), "{src}");
            assert_eq!(max.elems.ints(), exh.elems.ints(), "{src}");
            for d in &max.elems {
                assert!(contains(&p(src), &env, d, &c).unwrap().is_yes(), "{src} {d}");
            }
        }
    }

    #[test]
    fn small_factorials_in_maximal_mode() {
        for (n, want) in [(0, 1), (1, 1), (2, 2)] {
            let c = cfg(n as usize + 3, -1, n.max(1), 1);
            let r = enumerate_with(&terms::fact_of(n), &Env::new(), &c, Mode::Maximal, Limits::default())
                .unwrap();
            assert_eq!(r.elems.ints(), vec![want], "fact {n}");
        }
    }

    #[test]
    fn engeler_examples() {
        let c = cfg(2, 0, 2, 2);
        let none = Default::default();
        assert_eq!(engeler_enumerate(&p("7"), &none, &c).unwrap(), vec![EngElem::Num(7)]);
        assert_eq!(engeler_enumerate(&p("1+2"), &none, &c).unwrap(), vec![EngElem::Num(3)]);
        assert!(engeler_enumerate(&terms::omega(), &none, &c).unwrap().is_empty());
        assert_eq!(
            engeler_enumerate(&p("(\\f. f 1) (\\x. x + 1)"), &none, &c).unwrap(),
            vec![EngElem::Num(2)]
        );
    }
}
