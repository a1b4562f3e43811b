use std::fmt;

use crate::denot::Limits;
use crate::domain::EnumCfg;
use crate::error::{EnumError, TypeError};

use super::sem::SfEnv;
use super::{sf_enumerate_with, sf_le, sf_typecheck, sf_universe, FixSeed, SfElem, SfExpr, SfSet, SfTEnv, SfType};

/// Outcome of a type-membership check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Membership {
    /// Not a member.
    No,
    /// Passed every sampled instance of a universal quantifier. Not a proof.
    Sampled,
    Yes,
}

impl Membership {
    fn and(self, other: Membership) -> Membership {
        self.min(other)
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::No => "no",
            Membership::Sampled => "unknown-forall-passed",
            Membership::Yes => "yes",
        })
    }
}

/// The sets a universally quantified type variable is instantiated with:
/// the empty set, every integer in range, each singleton of a small
/// universe, and one mixed set.
pub fn sample_family(cfg: &EnumCfg) -> Vec<SfSet> {
    let ints: SfSet = cfg.ints().map(SfElem::Num).collect();
    let small = EnumCfg {
        depth: cfg.depth.min(1),
        width: cfg.width.min(1),
        ..*cfg
    };
    let mut mixed = ints.clone();
    mixed.insert(SfElem::thunk(None));
    mixed.insert(SfElem::empty_table());
    let mut out = vec![SfSet::new(), ints];
    out.extend(sf_universe(&small).into_iter().map(|d| SfSet::from([d])));
    out.push(mixed);
    out
}

/// Is `d` in the meaning of `a` under `eta` (index 0 is the innermost
/// binder)? Quantified type variables range over [`sample_family`].
pub fn in_type(d: &SfElem, a: &SfType, eta: &[SfSet], cfg: &EnumCfg) -> Membership {
    In { samples: sample_family(cfg) }.check(d, a, eta)
}

struct In {
    samples: Vec<SfSet>,
}

fn yes_if(b: bool) -> Membership {
    if b {
        Membership::Yes
    } else {
        Membership::No
    }
}

impl In {
    fn check(&self, d: &SfElem, a: &SfType, eta: &[SfSet]) -> Membership {
        if d.is_wrong() {
            return Membership::No;
        }
        match a {
            SfType::Int => yes_if(matches!(d, SfElem::Num(_))),
            SfType::Var(i) => yes_if(eta.get(*i).is_some_and(|s| s.iter().any(|e| sf_le(d, e)))),
            SfType::Arrow(dom, cod) => {
                let SfElem::Fun(t) = d else { return Membership::No };
                let mut acc = Membership::Yes;
                for (x, y) in t.entries() {
                    let m = self.check(x, dom, eta);
                    if m != Membership::No {
                        // A sampled input counts as a member.
                        acc = acc.and(m).and(self.check(y, cod, eta));
                    }
                }
                acc
            }
            SfType::Forall(body) => match d {
                SfElem::Thunk(None) => Membership::Yes,
                SfElem::Thunk(Some(x)) => {
                    for s in &self.samples {
                        let mut inner = Vec::with_capacity(eta.len() + 1);
                        inner.push(s.clone());
                        inner.extend(eta.iter().cloned());
                        if self.check(x, body, &inner) == Membership::No {
                            return Membership::No;
                        }
                    }
                    Membership::Sampled
                }
                _ => Membership::No,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SoundnessReport {
    pub term: SfExpr,
    pub ty: Result<SfType, TypeError>,
    pub elems: SfSet,
    /// Elements whose membership check answered no.
    pub outside: Vec<SfElem>,
    pub sampled: usize,
}

impl SoundnessReport {
    pub fn well_typed(&self) -> bool {
        self.ty.is_ok()
    }

    pub fn has_wrong(&self) -> bool {
        self.elems.contains(&SfElem::Wrong)
    }

    /// Ill-typed terms assert nothing and always pass.
    pub fn passed(&self) -> bool {
        !self.well_typed() || (!self.has_wrong() && self.outside.is_empty())
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ty {
            Err(e) => {
                writeln!(f, "{e}")?;
                return writeln!(f, "wrong enumerated: {}", self.has_wrong());
            }
            Ok(a) => writeln!(f, "type: {a}")?,
        }
        if self.has_wrong() {
            writeln!(f, "FAIL wrong-exclusion wrong")?;
        } else {
            writeln!(f, "PASS wrong-exclusion")?;
        }
        match self.outside.first() {
            Some(d) => writeln!(f, "FAIL typed-membership {d}"),
            None => writeln!(
                f,
                "PASS typed-membership ({} elements, {} sampled)",
                self.elems.len(),
                self.sampled
            ),
        }
    }
}

/// Typecheck a closed term and, when it is well typed, check that its
/// enumerated meaning avoids `wrong` and lies in the meaning of its type.
pub fn sf_soundness_check(e: &SfExpr, cfg: &EnumCfg, seed: FixSeed) -> Result<SoundnessReport, EnumError> {
    let ty = sf_typecheck(&SfTEnv::new(), e);
    let elems = sf_enumerate_with(e, &SfEnv::new(), cfg, seed, Limits::default())?;
    let mut outside = Vec::new();
    let mut sampled = 0;
    if let Ok(a) = &ty {
        let chk = In { samples: sample_family(cfg) };
        for d in &elems {
            match chk.check(d, a, &[]) {
                Membership::No => outside.push(d.clone()),
                Membership::Sampled => sampled += 1,
                Membership::Yes => {}
            }
        }
    }
    Ok(SoundnessReport {
        term: e.clone(),
        ty,
        elems,
        outside,
        sampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systemf::{parse_sf, parse_sf_elem, parse_sf_type, sf_down};

    fn el(s: &str) -> SfElem {
        parse_sf_elem(s).unwrap()
    }

    fn ty(s: &str) -> SfType {
        parse_sf_type(s).unwrap()
    }

    fn cfg() -> EnumCfg {
        EnumCfg::new(1, 0, 2, 1).unwrap()
    }

    #[test]
    fn membership_examples() {
        let c = cfg();
        assert_eq!(in_type(&el("5"), &SfType::Int, &[], &c), Membership::Yes);
        for a in ["int", "#0", "int -> int", "forall. #0"] {
            assert_eq!(in_type(&SfElem::Wrong, &ty(a), &[SfSet::new()], &c), Membership::No);
        }
        assert_eq!(in_type(&el("thunk(none)"), &ty("forall. #0"), &[], &c), Membership::Yes);
        assert_eq!(in_type(&el("{(1,2)}"), &ty("int -> int"), &[], &c), Membership::Yes);
        assert_eq!(in_type(&el("{(1,{})}"), &ty("int -> int"), &[], &c), Membership::No);
        // Entries outside the domain type are unconstrained.
        assert_eq!(in_type(&el("{({},wrong)}"), &ty("int -> int"), &[], &c), Membership::Yes);
        assert_eq!(in_type(&el("thunk(some {(1,1)})"), &ty("forall. #0 -> #0"), &[], &c), Membership::Sampled);
        assert_eq!(in_type(&el("thunk(some {(1,2)})"), &ty("forall. #0 -> #0"), &[], &c), Membership::No);
        assert_eq!(in_type(&el("1"), &ty("#0"), &[], &c), Membership::No);
    }

    #[test]
    fn downward_closed() {
        let c = cfg();
        let d = el("{(1,2),(2,0)}");
        let a = ty("int -> int");
        assert_eq!(in_type(&d, &a, &[], &c), Membership::Yes);
        for e in sf_down(&d) {
            assert_ne!(in_type(&e, &a, &[], &c), Membership::No);
        }
    }

    #[test]
    fn soundness_examples() {
        let c = cfg();
        let r = sf_soundness_check(&parse_sf("/\\. \\x: #0. x").unwrap(), &c, FixSeed::Zero).unwrap();
        assert!(r.well_typed() && r.passed(), "{r}");
        let r = sf_soundness_check(&parse_sf("1 2").unwrap(), &c, FixSeed::Zero).unwrap();
        assert!(!r.well_typed() && r.has_wrong());
        let fact = parse_sf("(fix f: int -> int. \\x: int. if x then x * f (x - 1) else 1) 2").unwrap();
        let r = sf_soundness_check(&fact, &c.with_fix_fuel(4), FixSeed::EmptyTable).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.elems.contains(&SfElem::Num(2)));
    }
}
