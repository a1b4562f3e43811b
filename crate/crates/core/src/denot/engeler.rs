//! Engeler-style semantics: a function denotes a set of entries `(D, d)`
//! with a finite input set `D`, and variables denote sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::domain::{subsets_upto, EnumCfg};
use crate::error::EnumError;
use crate::syntax::{Expr, Ident};

use super::program::{Node, NodeId, Program};
use super::Limits;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EngElem {
    Num(i64),
    Entry(Arc<[EngElem]>, Arc<EngElem>),
}

impl EngElem {
    /// Build an entry; the input set is canonicalised.
    pub fn entry(inputs: impl IntoIterator<Item = EngElem>, output: EngElem) -> EngElem {
        let s: BTreeSet<EngElem> = inputs.into_iter().collect();
        EngElem::Entry(s.into_iter().collect::<Vec<_>>().into(), Arc::new(output))
    }

    pub fn as_num(&self) -> Option<i64> {
        match self {
            EngElem::Num(n) => Some(*n),
            EngElem::Entry(..) => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            EngElem::Num(_) => 0,
            EngElem::Entry(ins, out) => 1 + ins.iter().map(EngElem::depth).max().unwrap_or(0).max(out.depth()),
        }
    }
}

impl fmt::Display for EngElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngElem::Num(n) => write!(f, "{n}"),
            EngElem::Entry(ins, out) => {
                f.write_str("({")?;
                for (i, d) in ins.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, "}},{out})")
            }
        }
    }
}

impl fmt::Debug for EngElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

type ESet = Arc<Vec<EngElem>>;
type EEnv = Vec<Option<ESet>>;

/// Bounded enumeration of the Engeler meaning of `e`. Input sets of each
/// abstraction are drawn, up to `cfg.width` members, from integers in range
/// and from elements that reach it as arguments, nested at most `cfg.depth`.
pub fn engeler_enumerate(
    e: &Expr,
    env: &BTreeMap<Ident, Vec<EngElem>>,
    cfg: &EnumCfg,
) -> Result<Vec<EngElem>, EnumError> {
    engeler_enumerate_with(e, env, cfg, Limits::default())
}

pub fn engeler_enumerate_with(
    e: &Expr,
    env: &BTreeMap<Ident, Vec<EngElem>>,
    cfg: &EnumCfg,
    limits: Limits,
) -> Result<Vec<EngElem>, EnumError> {
    let prog = Program::compile(e);
    let mut slots: EEnv = vec![None; prog.nslots];
    for (i, x) in prog.free.iter().enumerate() {
        let d = env.get(x).ok_or_else(|| EnumError::Unbound(x.to_string()))?;
        let s: BTreeSet<EngElem> = d.iter().cloned().collect();
        slots[i] = Some(Arc::new(s.into_iter().collect()));
    }
    let mut eng = Eng {
        prog: &prog,
        cfg: *cfg,
        limits,
        demand: vec![BTreeSet::new(); prog.nodes.len()],
        fresh: false,
        memo: HashMap::new(),
        work: 0,
    };
    for _ in 0..limits.max_rounds {
        eng.memo.clear();
        eng.fresh = false;
        eng.work = 0;
        let r = eng.eval(prog.root, &slots)?;
        if !eng.fresh {
            return Ok(r.to_vec());
        }
    }
    Err(EnumError::Rounds(limits.max_rounds))
}

struct Eng<'p> {
    prog: &'p Program,
    cfg: EnumCfg,
    limits: Limits,
    demand: Vec<BTreeSet<EngElem>>,
    fresh: bool,
    memo: HashMap<(NodeId, Vec<ESet>), ESet>,
    work: usize,
}

impl Eng<'_> {
    fn admits(&self, d: &EngElem) -> bool {
        self.cfg.depth >= 1
            && d.depth() < self.cfg.depth
            && in_range(d, &self.cfg)
    }

    fn eval(&mut self, node: NodeId, env: &EEnv) -> Result<ESet, EnumError> {
        let key: Vec<ESet> = self.prog.fv[node]
            .iter()
            .map(|&s| env[s].clone().expect("slot bound before use"))
            .collect();
        if let Some(r) = self.memo.get(&(node, key.clone())) {
            return Ok(r.clone());
        }
        let r = self.eval_node(node, env)?;
        self.work = self.work.saturating_add(r.len());
        if self.work > self.limits.max_work {
            return Err(EnumError::Budget(self.limits.max_work));
        }
        self.memo.insert((node, key), r.clone());
        Ok(r)
    }

    fn eval_node(&mut self, node: NodeId, env: &EEnv) -> Result<ESet, EnumError> {
        let prog = self.prog;
        let mut out: BTreeSet<EngElem> = BTreeSet::new();
        match &prog.nodes[node] {
            Node::Int(n) => out.extend(n.map(EngElem::Num)),
            Node::Var(s) => return Ok(env[*s].clone().expect("slot bound before use")),
            Node::Prim(op, l, r) => {
                let ls = self.eval(*l, env)?;
                let rs = self.eval(*r, env)?;
                for a in ls.iter().filter_map(EngElem::as_num) {
                    for b in rs.iter().filter_map(EngElem::as_num) {
                        out.extend(op.apply_i64(a, b).map(EngElem::Num));
                    }
                }
            }
            Node::If(c, t, e) => {
                let cs = self.eval(*c, env)?;
                let nz = cs.iter().filter_map(EngElem::as_num).any(|n| n != 0);
                let z = cs.iter().filter_map(EngElem::as_num).any(|n| n == 0);
                if nz {
                    out.extend(self.eval(*t, env)?.iter().cloned());
                }
                if z {
                    out.extend(self.eval(*e, env)?.iter().cloned());
                }
            }
            Node::App(f, a) => {
                let fs = self.eval(*f, env)?;
                let args = self.eval(*a, env)?;
                for d in args.iter() {
                    if self.admits(d) {
                        for &l in &prog.flow[*f] {
                            if self.demand[l].insert(d.clone()) {
                                self.fresh = true;
                            }
                        }
                    }
                }
                for x in fs.iter() {
                    if let EngElem::Entry(ins, o) = x {
                        if ins.iter().all(|i| args.binary_search(i).is_ok()) {
                            out.insert((**o).clone());
                        }
                    }
                }
            }
            Node::Lam(slot, body) => {
                if self.cfg.depth == 0 {
                    return Ok(Arc::new(Vec::new()));
                }
                let mut atoms: BTreeSet<EngElem> = self.cfg.ints().map(EngElem::Num).collect();
                atoms.extend(self.demand[node].iter().cloned());
                let atoms: Vec<EngElem> = atoms.into_iter().collect();
                for ds in subsets_upto(&atoms, self.cfg.width) {
                    let set: ESet = Arc::new(ds);
                    let mut env2 = env.clone();
                    env2[*slot] = Some(set.clone());
                    for o in self.eval(*body, &env2)?.iter() {
                        out.insert(EngElem::Entry(set.to_vec().into(), Arc::new(o.clone())));
                    }
                }
            }
        }
        Ok(Arc::new(out.into_iter().collect()))
    }
}

fn in_range(d: &EngElem, cfg: &EnumCfg) -> bool {
    match d {
        EngElem::Num(n) => cfg.int_lo <= *n && *n <= cfg.int_hi,
        EngElem::Entry(ins, o) => ins.iter().all(|i| in_range(i, cfg)) && in_range(o, cfg),
    }
}
