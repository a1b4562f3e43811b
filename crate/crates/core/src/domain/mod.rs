//! The domain of integers and finite function tables, its information
//! order, partial join, and bounded universes.

mod table;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::DomainError;
use crate::syntax::Ident;

pub use table::{product, subsets_exact, subsets_upto, Table};
pub use text::parse_elem;

/// An element: an integer or a finite table of input/output entries.
///
/// The derived order is the canonical total order used for deduplication:
/// integers before tables, tables compared as sorted entry sequences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Num(i64),
    Fun(Table<Elem>),
}

impl Elem {
    pub fn empty_table() -> Elem {
        Elem::Fun(Table::empty())
    }

    pub fn table(entries: impl IntoIterator<Item = (Elem, Elem)>) -> Elem {
        Elem::Fun(Table::from_entries(entries))
    }

    pub fn as_num(&self) -> Option<i64> {
        match self {
            Elem::Num(n) => Some(*n),
            Elem::Fun(_) => None,
        }
    }

    /// Nesting depth: 0 for integers, one more than the deepest entry for tables.
    pub fn depth(&self) -> usize {
        match self {
            Elem::Num(_) => 0,
            Elem::Fun(t) => {
                1 + t
                    .entries()
                    .iter()
                    .map(|(a, b)| a.depth().max(b.depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Widest table anywhere inside the element.
    pub fn width(&self) -> usize {
        match self {
            Elem::Num(_) => 0,
            Elem::Fun(t) => t
                .entries()
                .iter()
                .map(|(a, b)| a.width().max(b.width()))
                .fold(t.len(), usize::max),
        }
    }

    /// Membership in the graded universe `U_depth` of `cfg`.
    pub fn in_universe(&self, depth: usize, cfg: &EnumCfg) -> bool {
        match self {
            Elem::Num(n) => cfg.int_lo <= *n && *n <= cfg.int_hi,
            Elem::Fun(t) => {
                depth >= 1
                    && t.len() <= cfg.width
                    && t.entries()
                        .iter()
                        .all(|(a, b)| a.in_universe(depth - 1, cfg) && b.in_universe(depth - 1, cfg))
            }
        }
    }
}

impl From<i64> for Elem {
    fn from(n: i64) -> Elem {
        Elem::Num(n)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Num(n) => write!(f, "{n}"),
            Elem::Fun(t) => write!(f, "{t}"),
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The information order: equal integers, or table inclusion.
pub fn le(a: &Elem, b: &Elem) -> bool {
    match (a, b) {
        (Elem::Num(x), Elem::Num(y)) => x == y,
        (Elem::Fun(s), Elem::Fun(t)) => s.is_subset(t),
        _ => false,
    }
}

/// Least upper bound; `None` when the two elements have no join.
pub fn join(a: &Elem, b: &Elem) -> Option<Elem> {
    match (a, b) {
        (Elem::Num(x), Elem::Num(y)) if x == y => Some(a.clone()),
        (Elem::Fun(s), Elem::Fun(t)) => Some(Elem::Fun(s.union(t))),
        _ => None,
    }
}

/// Every element below `d`: `d` itself for integers, all sub-tables for tables.
pub fn down_set(d: &Elem) -> Vec<Elem> {
    match d {
        Elem::Num(_) => vec![d.clone()],
        Elem::Fun(t) => t.subtables().into_iter().map(Elem::Fun).collect(),
    }
}

/// Bounds for every finite search over the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnumCfg {
    /// Table nesting bound.
    pub depth: usize,
    pub int_lo: i64,
    pub int_hi: i64,
    /// Maximum entries per table.
    pub width: usize,
    /// Unrolling bound for `fix`.
    pub fix_fuel: usize,
}

impl EnumCfg {
    pub fn new(depth: usize, int_lo: i64, int_hi: i64, width: usize) -> Result<EnumCfg, DomainError> {
        if int_lo > int_hi {
            return Err(DomainError::InvalidConfig(format!(
                "empty integer range {int_lo}..{int_hi}"
            )));
        }
        Ok(EnumCfg {
            depth,
            int_lo,
            int_hi,
            width,
            fix_fuel: 5,
        })
    }

    pub fn with_fix_fuel(mut self, fix_fuel: usize) -> EnumCfg {
        self.fix_fuel = fix_fuel;
        self
    }

    pub fn ints(&self) -> impl Iterator<Item = i64> {
        self.int_lo..=self.int_hi
    }

    /// Pointwise comparison of budgets.
    pub fn le(&self, other: &EnumCfg) -> bool {
        self.depth <= other.depth
            && self.width <= other.width
            && self.fix_fuel <= other.fix_fuel
            && other.int_lo <= self.int_lo
            && self.int_hi <= other.int_hi
    }
}

impl fmt::Display for EnumCfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depth={} ints={}..{} width={} fix-fuel={}",
            self.depth, self.int_lo, self.int_hi, self.width, self.fix_fuel
        )
    }
}

impl Default for EnumCfg {
    fn default() -> EnumCfg {
        EnumCfg {
            depth: 2,
            int_lo: -8,
            int_hi: 8,
            width: 2,
            fix_fuel: 5,
        }
    }
}

/// `U_0 ⊆ U_1 ⊆ … ⊆ U_depth`: integers in range, then tables of at most
/// `width` entries over the previous layer. Canonically ordered.
pub fn universe(cfg: &EnumCfg) -> Vec<Elem> {
    let base: Vec<Elem> = cfg.ints().map(Elem::Num).collect();
    let mut layer = base.clone();
    for _ in 0..cfg.depth {
        let pairs: Vec<(Elem, Elem)> = layer
            .iter()
            .flat_map(|a| layer.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let mut next: BTreeSet<Elem> = base.iter().cloned().collect();
        for entries in subsets_upto(&pairs, cfg.width) {
            next.insert(Elem::table(entries));
        }
        layer = next.into_iter().collect();
    }
    layer
}

/// Partial map from variables to elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Env(BTreeMap<Ident, Elem>);

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn lookup(&self, x: &Ident) -> Result<&Elem, DomainError> {
        self.0
            .get(x)
            .ok_or_else(|| DomainError::Unbound(x.to_string()))
    }

    pub fn get(&self, x: &Ident) -> Option<&Elem> {
        self.0.get(x)
    }

    pub fn extend(&self, x: Ident, d: Elem) -> Env {
        let mut m = self.0.clone();
        m.insert(x, d);
        Env(m)
    }

    pub fn insert(&mut self, x: Ident, d: Elem) {
        self.0.insert(x, d);
    }

    pub fn contains(&self, x: &Ident) -> bool {
        self.0.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &Elem)> {
        self.0.iter()
    }
}

impl FromIterator<(Ident, Elem)> for Env {
    fn from_iter<I: IntoIterator<Item = (Ident, Elem)>>(iter: I) -> Env {
        Env(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Elem {
        parse_elem(s).unwrap()
    }

    fn cfg(depth: usize, lo: i64, hi: i64, width: usize) -> EnumCfg {
        EnumCfg::new(depth, lo, hi, width).unwrap()
    }

    #[test]
    fn order_examples() {
        assert!(le(&e("{(1,7)}"), &e("{(1,7),(2,0)}")));
        assert!(le(&e("3"), &e("3")));
        assert!(!le(&e("3"), &e("4")));
        assert!(!le(&e("3"), &e("{(3,3)}")));
        assert!(!le(&e("{}"), &e("3")));
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(&e("{(1,7)}"), &e("{(2,0)}")), Some(e("{(1,7),(2,0)}")));
        assert_eq!(join(&e("5"), &e("5")), Some(e("5")));
        assert_eq!(join(&e("0"), &e("1")), None);
        assert_eq!(join(&e("0"), &e("{}")), None);
        // Relational union is still a table.
        assert_eq!(join(&e("{(1,2)}"), &e("{(1,3)}")), Some(e("{(1,2),(1,3)}")));
    }

    #[test]
    fn universe_examples() {
        assert_eq!(universe(&cfg(0, 0, 1, 1)), vec![e("0"), e("1")]);
        assert_eq!(universe(&cfg(1, 0, 0, 1)), vec![e("0"), e("{}"), e("{(0,0)}")]);
        assert_eq!(universe(&cfg(1, 0, 1, 1)).len(), 7);
        // 1 + 2 ints; tables of <= 2 entries over 4 pairs: 1 + 4 + 6.
        assert_eq!(universe(&cfg(1, 0, 1, 2)).len(), 13);
    }

    #[test]
    fn down_set_examples() {
        assert_eq!(down_set(&e("5")), vec![e("5")]);
        assert_eq!(down_set(&e("{(1,7)}")), vec![e("{}"), e("{(1,7)}")]);
        assert_eq!(down_set(&e("{(1,7),(2,0)}")).len(), 4);
    }

    #[test]
    fn universe_membership_matches_generation() {
        let c = cfg(2, 0, 0, 1);
        let u = universe(&c);
        assert!(u.iter().all(|d| d.in_universe(2, &c)));
        let bigger = universe(&cfg(2, 0, 0, 2));
        let count = bigger.iter().filter(|d| d.in_universe(2, &c)).count();
        assert_eq!(count, u.len());
    }

    #[test]
    fn config_validation() {
        assert!(EnumCfg::new(1, 2, 1, 1).is_err());
        let d = EnumCfg::default();
        assert_eq!((d.depth, d.width, d.int_lo, d.int_hi, d.fix_fuel), (2, 2, -8, 8, 5));
    }

    #[test]
    fn env_lookup_is_strict() {
        let env = Env::new().extend(Ident::new("x"), e("1"));
        assert_eq!(env.lookup(&Ident::new("x")).unwrap(), &e("1"));
        assert!(env.lookup(&Ident::new("y")).is_err());
    }

    #[test]
    fn depth_and_width() {
        assert_eq!(e("3").depth(), 0);
        assert_eq!(e("{}").depth(), 1);
        assert_eq!(e("{({(1,2)},3)}").depth(), 2);
        assert_eq!(e("{({(1,2),(2,3)},3)}").width(), 2);
    }
}
