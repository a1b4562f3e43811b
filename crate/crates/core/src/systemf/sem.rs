use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::denot::Limits;
use crate::domain::{product, subsets_upto, EnumCfg, Table};
use crate::error::EnumError;
use crate::syntax::Ident;

use super::SfExpr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SfElem {
    Num(i64),
    Fun(Table<SfElem>),
    Thunk(Option<Arc<SfElem>>),
    Wrong,
}

pub type SfSet = BTreeSet<SfElem>;

impl SfElem {
    pub fn table(entries: impl IntoIterator<Item = (SfElem, SfElem)>) -> SfElem {
        SfElem::Fun(Table::from_entries(entries))
    }

    pub fn empty_table() -> SfElem {
        SfElem::Fun(Table::empty())
    }

    pub fn thunk(content: Option<SfElem>) -> SfElem {
        SfElem::Thunk(content.map(Arc::new))
    }

    pub fn is_wrong(&self) -> bool {
        matches!(self, SfElem::Wrong)
    }

    pub fn as_num(&self) -> Option<i64> {
        match self {
            SfElem::Num(n) => Some(*n),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SfElem::Num(_) | SfElem::Wrong | SfElem::Thunk(None) => 0,
            SfElem::Thunk(Some(d)) => 1 + d.depth(),
            SfElem::Fun(t) => {
                1 + t.entries().iter().map(|(a, b)| a.depth().max(b.depth())).max().unwrap_or(0)
            }
        }
    }
}

/// Integers by equality, tables by inclusion, thunks by their contents.
/// `wrong` is only below itself.
pub fn sf_le(a: &SfElem, b: &SfElem) -> bool {
    match (a, b) {
        (SfElem::Num(m), SfElem::Num(n)) => m == n,
        (SfElem::Fun(s), SfElem::Fun(t)) => s.is_subset(t),
        (SfElem::Thunk(None), SfElem::Thunk(None)) => true,
        (SfElem::Thunk(Some(x)), SfElem::Thunk(Some(y))) => sf_le(x, y),
        (SfElem::Wrong, SfElem::Wrong) => true,
        _ => false,
    }
}

pub fn sf_down(d: &SfElem) -> Vec<SfElem> {
    match d {
        SfElem::Fun(t) => t.subtables().into_iter().map(SfElem::Fun).collect(),
        SfElem::Thunk(Some(x)) => sf_down(x).into_iter().map(|y| SfElem::thunk(Some(y))).collect(),
        _ => vec![d.clone()],
    }
}

/// Integers in range and `thunk(none)`, then thunks of and tables of at
/// most `width` entries over the previous layer. Never contains `wrong`.
pub fn sf_universe(cfg: &EnumCfg) -> Vec<SfElem> {
    let base: Vec<SfElem> = cfg
        .ints()
        .map(SfElem::Num)
        .chain([SfElem::thunk(None)])
        .collect();
    let mut layer = base.clone();
    for _ in 0..cfg.depth {
        let pairs: Vec<(SfElem, SfElem)> = layer
            .iter()
            .flat_map(|a| layer.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let mut next: SfSet = base.iter().cloned().collect();
        next.extend(layer.iter().map(|d| SfElem::thunk(Some(d.clone()))));
        for entries in subsets_upto(&pairs, cfg.width) {
            next.insert(SfElem::table(entries));
        }
        layer = next.into_iter().collect();
    }
    layer
}

/// Application with `wrong` short-circuiting: `wrong` on either side, or a
/// non-table operator, gives `wrong`.
pub fn sf_apply(d1s: &SfSet, d2s: &SfSet) -> SfSet {
    let mut out = SfSet::new();
    for d1 in d1s {
        if d1.is_wrong() {
            out.insert(SfElem::Wrong);
            continue;
        }
        for d2 in d2s {
            match (d1, d2) {
                (_, SfElem::Wrong) => {
                    out.insert(SfElem::Wrong);
                }
                (SfElem::Fun(t), _) => {
                    for (d, o) in t.entries() {
                        if sf_le(d, d2) {
                            out.extend(sf_down(o));
                        }
                    }
                }
                _ => {
                    out.insert(SfElem::Wrong);
                }
            }
        }
    }
    out
}

/// Where the Kleene chain for `fix` starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FixSeed {
    /// `iterate(0) = zero`, the empty set of results. Every later
    /// iteration binds from it, so `fix` denotes nothing.
    #[default]
    Zero,
    /// `iterate(0)` returns the empty table, the least function element.
    EmptyTable,
}

pub type SfEnv = BTreeMap<Ident, SfElem>;

pub fn sf_enumerate(e: &SfExpr, env: &SfEnv, cfg: &EnumCfg) -> Result<SfSet, EnumError> {
    sf_enumerate_with(e, env, cfg, FixSeed::Zero, Limits::default())
}

pub fn sf_enumerate_with(
    e: &SfExpr,
    env: &SfEnv,
    cfg: &EnumCfg,
    seed: FixSeed,
    limits: Limits,
) -> Result<SfSet, EnumError> {
    let pool = if cfg.depth == 0 {
        Vec::new()
    } else {
        sf_universe(&EnumCfg { depth: cfg.depth - 1, ..*cfg })
    };
    let mut ev = Eval {
        cfg: *cfg,
        seed,
        limits,
        pool,
        memo: HashMap::new(),
        work: 0,
    };
    Ok((*ev.eval(e, env)?).clone())
}

struct Eval {
    cfg: EnumCfg,
    seed: FixSeed,
    limits: Limits,
    pool: Vec<SfElem>,
    memo: HashMap<(*const SfExpr, SfEnv), Arc<SfSet>>,
    work: usize,
}

impl Eval {
    fn charge(&mut self, n: usize) -> Result<(), EnumError> {
        self.work += n;
        if self.work > self.limits.max_work {
            return Err(EnumError::Budget(self.limits.max_work));
        }
        Ok(())
    }

    fn eval(&mut self, e: &SfExpr, env: &SfEnv) -> Result<Arc<SfSet>, EnumError> {
        let key = (e as *const SfExpr, env.clone());
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let r = Arc::new(self.eval_node(e, env)?);
        self.charge(r.len())?;
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    fn eval_node(&mut self, e: &SfExpr, env: &SfEnv) -> Result<SfSet, EnumError> {
        Ok(match e {
            SfExpr::Num(n) => SfSet::from([SfElem::Num(*n)]),
            SfExpr::Var(x) => {
                let d = env.get(x).ok_or_else(|| EnumError::Unbound(x.to_string()))?;
                sf_down(d).into_iter().collect()
            }
            SfExpr::Prim(op, l, r) => {
                let (ls, rs) = (self.eval(l, env)?, self.eval(r, env)?);
                let mut out = SfSet::new();
                for a in ls.iter() {
                    if a.is_wrong() {
                        out.insert(SfElem::Wrong);
                        continue;
                    }
                    for b in rs.iter() {
                        match (a, b) {
                            (_, SfElem::Wrong) => {
                                out.insert(SfElem::Wrong);
                            }
                            (SfElem::Num(m), SfElem::Num(n)) => out.extend(op.apply_i64(*m, *n).map(SfElem::Num)),
                            _ => {
                                out.insert(SfElem::Wrong);
                            }
                        }
                    }
                }
                out
            }
            SfExpr::If(c, t, el) => {
                let mut out = SfSet::new();
                for d in self.eval(c, env)?.iter() {
                    match d {
                        SfElem::Num(n) => out.extend(self.eval(if *n != 0 { t } else { el }, env)?.iter().cloned()),
                        _ => {
                            out.insert(SfElem::Wrong);
                        }
                    }
                }
                out
            }
            SfExpr::Lam(x, _, body) => self.lam(x, body, env)?,
            SfExpr::App(f, a) => {
                let (fs, xs) = (self.eval(f, env)?, self.eval(a, env)?);
                sf_apply(&fs, &xs)
            }
            SfExpr::TyAbs(body) => {
                let s = self.eval(body, env)?;
                if s.is_empty() {
                    SfSet::from([SfElem::thunk(None)])
                } else {
                    s.iter()
                        .map(|d| if d.is_wrong() { SfElem::Wrong } else { SfElem::thunk(Some(d.clone())) })
                        .collect()
                }
            }
            SfExpr::TyApp(f, _) => {
                let mut out = SfSet::new();
                for d in self.eval(f, env)?.iter() {
                    match d {
                        SfElem::Thunk(None) => {}
                        SfElem::Thunk(Some(x)) => out.extend(sf_down(x)),
                        _ => {
                            out.insert(SfElem::Wrong);
                        }
                    }
                }
                out
            }
            SfExpr::Fix(x, _, body) => {
                let mut level: SfSet = match self.seed {
                    FixSeed::Zero => SfSet::new(),
                    FixSeed::EmptyTable => SfSet::from([SfElem::empty_table()]),
                };
                let mut out = level.clone();
                for _ in 0..self.cfg.fix_fuel {
                    let mut next = SfSet::new();
                    for d in &level {
                        if d.is_wrong() {
                            next.insert(SfElem::Wrong);
                        } else {
                            let mut inner = env.clone();
                            inner.insert(x.clone(), d.clone());
                            next.extend(self.eval(body, &inner)?.iter().cloned());
                        }
                    }
                    out.extend(next.iter().cloned());
                    level = next;
                }
                out
            }
        })
    }

    fn lam(&mut self, x: &Ident, body: &SfExpr, env: &SfEnv) -> Result<SfSet, EnumError> {
        let pool = self.pool.clone();
        let mut outs: HashMap<&SfElem, Vec<SfElem>> = HashMap::new();
        for d in &pool {
            let mut inner = env.clone();
            inner.insert(x.clone(), d.clone());
            outs.insert(d, self.eval(body, &inner)?.iter().cloned().collect());
        }
        let mut out = SfSet::new();
        for ds in subsets_upto(&pool, self.cfg.width) {
            let choices: Vec<Vec<SfElem>> = ds.iter().map(|d| outs[d].clone()).collect();
            for picked in product(&choices) {
                self.charge(1)?;
                out.insert(SfElem::table(ds.iter().cloned().zip(picked)));
            }
        }
        Ok(out)
    }
}
