use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::domain::{down_set, le, product, subsets_upto, universe, Elem, EnumCfg, Table};
use crate::error::EnumError;

use super::program::{Node, NodeId, Program};
use super::{Limits, Mode};

pub(crate) type SlotEnv = Vec<Option<Elem>>;
pub(crate) type Set = Arc<Vec<Elem>>;

/// Bounded interpreter over the finite domain. One `eval` pass per round;
/// rounds repeat while application sites keep reporting new arguments.
pub(crate) struct Engine<'p> {
    pub prog: &'p Program,
    pub cfg: EnumCfg,
    pub mode: Mode,
    pub limits: Limits,
    demand: Vec<BTreeSet<Elem>>,
    pub fresh: bool,
    memo: HashMap<(NodeId, Vec<Elem>), Set>,
    work: usize,
    universe: Option<Arc<Vec<Elem>>>,
    /// Tables built so far per abstraction, keyed by environment.
    acc: Vec<Vec<(Vec<Elem>, Table<Elem>)>>,
    /// Maximal mode only: inputs nested deeper than this wait for a later stage.
    stage: usize,
    pub eff_depth: usize,
    pub eff_width: usize,
    pub rounds: usize,
}

impl<'p> Engine<'p> {
    pub fn new(prog: &'p Program, cfg: EnumCfg, mode: Mode, limits: Limits) -> Engine<'p> {
        Engine {
            prog,
            cfg,
            mode,
            limits,
            demand: vec![BTreeSet::new(); prog.nodes.len()],
            fresh: false,
            memo: HashMap::new(),
            work: 0,
            universe: None,
            acc: vec![Vec::new(); prog.nodes.len()],
            stage: 0,
            eff_depth: 0,
            eff_width: 0,
            rounds: 0,
        }
    }

    pub fn begin_round(&mut self) -> Result<(), EnumError> {
        if self.rounds >= self.limits.max_rounds {
            return Err(EnumError::Rounds(self.limits.max_rounds));
        }
        self.rounds += 1;
        self.memo.clear();
        self.fresh = false;
        self.work = 0;
        Ok(())
    }

    /// Iterate whole-program rounds until nothing new appears. In maximal
    /// mode each input nesting level is admitted only once the shallower
    /// levels have settled.
    pub fn run(&mut self, env: &SlotEnv) -> Result<Set, EnumError> {
        loop {
            self.begin_round()?;
            let r = self.eval(self.prog.root, env)?;
            if self.mode == Mode::Universe {
                return Ok(r);
            }
            if !self.fresh {
                if self.mode == Mode::Maximal && self.stage + 1 < self.cfg.depth {
                    self.stage += 1;
                    continue;
                }
                return Ok(r);
            }
        }
    }

    fn charge(&mut self, n: usize) -> Result<(), EnumError> {
        self.work = self.work.saturating_add(n);
        if self.work > self.limits.max_work {
            return Err(EnumError::Budget(self.limits.max_work));
        }
        Ok(())
    }

    fn admits(&self, d: &Elem) -> bool {
        if self.cfg.depth == 0 {
            return false;
        }
        match self.mode {
            Mode::Universe => false,
            Mode::Exhaustive => d.in_universe(self.cfg.depth - 1, &self.cfg),
            Mode::Maximal => {
                let wide = EnumCfg {
                    width: usize::MAX,
                    ..self.cfg
                };
                d.in_universe(self.cfg.depth - 1, &wide)
            }
        }
    }

    /// Record that `d` reached the operator position `f`.
    pub fn note_demand(&mut self, f: NodeId, d: &Elem) {
        if !self.admits(d) {
            return;
        }
        let now = self.mode != Mode::Maximal || d.depth() <= self.stage;
        for &l in &self.prog.flow[f] {
            if self.demand[l].insert(d.clone()) && now {
                self.fresh = true;
            }
        }
    }

    fn pool(&mut self, lam: NodeId) -> Vec<Elem> {
        if self.cfg.depth == 0 {
            return Vec::new();
        }
        match self.mode {
            Mode::Universe => {
                let cfg = EnumCfg {
                    depth: self.cfg.depth - 1,
                    ..self.cfg
                };
                self.universe
                    .get_or_insert_with(|| Arc::new(universe(&cfg)))
                    .to_vec()
            }
            Mode::Exhaustive => {
                let mut s: BTreeSet<Elem> = self.cfg.ints().map(Elem::Num).collect();
                s.extend(self.demand[lam].iter().cloned());
                s.into_iter().collect()
            }
            Mode::Maximal => self.demand[lam]
                .iter()
                .filter(|d| d.depth() <= self.stage)
                .cloned()
                .collect(),
        }
    }

    fn down(&self, d: &Elem) -> Vec<Elem> {
        match self.mode {
            Mode::Maximal => vec![d.clone()],
            _ => down_set(d),
        }
    }

    fn finish(&self, s: BTreeSet<Elem>) -> Set {
        let v: Vec<Elem> = s.into_iter().collect();
        Arc::new(match self.mode {
            Mode::Maximal => antichain(v),
            _ => v,
        })
    }

    pub fn eval(&mut self, node: NodeId, env: &SlotEnv) -> Result<Set, EnumError> {
        let key: Vec<Elem> = self.prog.fv[node]
            .iter()
            .map(|&s| env[s].clone().expect("slot bound before use"))
            .collect();
        if let Some(r) = self.memo.get(&(node, key.clone())) {
            return Ok(r.clone());
        }
        let r = self.eval_node(node, env)?;
        self.charge(r.len())?;
        self.memo.insert((node, key), r.clone());
        Ok(r)
    }

    fn eval_node(&mut self, node: NodeId, env: &SlotEnv) -> Result<Set, EnumError> {
        let prog = self.prog;
        match &prog.nodes[node] {
            Node::Int(n) => Ok(Arc::new(n.map(Elem::Num).into_iter().collect())),
            Node::Var(s) => {
                let d = env[*s].as_ref().expect("slot bound before use");
                Ok(Arc::new(self.down(d)))
            }
            Node::Prim(op, l, r) => {
                let ls = self.eval(*l, env)?;
                let rs = self.eval(*r, env)?;
                let mut out = BTreeSet::new();
                for a in ls.iter().filter_map(Elem::as_num) {
                    for b in rs.iter().filter_map(Elem::as_num) {
                        if let Some(n) = op.apply_i64(a, b) {
                            out.insert(Elem::Num(n));
                        }
                    }
                }
                Ok(Arc::new(out.into_iter().collect()))
            }
            Node::If(c, t, e) => {
                let cs = self.eval(*c, env)?;
                let mut out = BTreeSet::new();
                let mut seen = (false, false);
                for n in cs.iter().filter_map(Elem::as_num) {
                    let (branch, flag) = if n != 0 { (*t, &mut seen.0) } else { (*e, &mut seen.1) };
                    if !*flag {
                        *flag = true;
                        out.extend(self.eval(branch, env)?.iter().cloned());
                    }
                }
                Ok(self.finish(out))
            }
            Node::App(f, a) => {
                let fs = self.eval(*f, env)?;
                let args = self.eval(*a, env)?;
                for d2 in args.iter() {
                    self.note_demand(*f, d2);
                }
                let mut out = BTreeSet::new();
                for t in fs.iter() {
                    let Elem::Fun(t) = t else { continue };
                    for (d, d1) in t.entries() {
                        if args.iter().any(|d2| le(d, d2)) {
                            out.extend(self.down(d1));
                        }
                    }
                }
                Ok(self.finish(out))
            }
            Node::Lam(slot, body) => {
                if self.mode == Mode::Maximal {
                    return self.accumulate(node, *slot, *body, env);
                }
                let mut valid: Vec<(Elem, Set)> = Vec::new();
                for d in self.pool(node) {
                    let mut env2 = env.clone();
                    env2[*slot] = Some(d.clone());
                    let outs = self.eval(*body, &env2)?;
                    if !outs.is_empty() {
                        valid.push((d, outs));
                    }
                }
                self.tables(valid)
            }
        }
    }

    fn tables(&mut self, valid: Vec<(Elem, Set)>) -> Result<Set, EnumError> {
        let groups = subsets_upto(&valid, self.cfg.width);
        let mut count = 0usize;
        for g in &groups {
            count = count.saturating_add(g.iter().map(|(_, o)| o.len()).product::<usize>());
        }
        self.charge(count)?;
        let mut out = BTreeSet::new();
        for g in groups {
            self.eff_width = self.eff_width.max(g.len());
            for (d, _) in &g {
                self.eff_depth = self.eff_depth.max(d.depth() + 1);
            }
            let choices: Vec<Vec<(Elem, Elem)>> = g
                .iter()
                .map(|(d, outs)| outs.iter().map(|o| (d.clone(), o.clone())).collect())
                .collect();
            for entries in product(&choices) {
                out.insert(Elem::Fun(Table::from_entries(entries)));
            }
        }
        Ok(self.finish(out))
    }
}

impl Engine<'_> {
    /// One relational table holding every entry found for this abstraction
    /// under this environment or any pointwise smaller one, in any round.
    fn accumulate(
        &mut self,
        node: NodeId,
        slot: usize,
        body: NodeId,
        env: &SlotEnv,
    ) -> Result<Set, EnumError> {
        let key: Vec<Elem> = self.prog.fv[node]
            .iter()
            .map(|&s| env[s].clone().expect("slot bound before use"))
            .collect();
        let mut entries: Vec<(Elem, Elem)> = Vec::new();
        for d in self.pool(node) {
            let mut env2 = env.clone();
            env2[slot] = Some(d.clone());
            for o in self.eval(body, &env2)?.iter() {
                entries.push((d.clone(), o.clone()));
            }
        }
        for (k, t) in &self.acc[node] {
            if k.iter().zip(&key).all(|(a, b)| le(a, b)) {
                entries.extend(t.entries().iter().cloned());
            }
        }
        let table = Table::from_entries(entries);
        self.charge(table.len())?;
        self.eff_width = self.eff_width.max(table.len());
        for (d, _) in table.entries() {
            self.eff_depth = self.eff_depth.max(d.depth() + 1);
        }
        match self.acc[node].iter_mut().find(|(k, _)| *k == key) {
            Some((_, old)) => {
                if *old != table {
                    self.fresh = true;
                    *old = table.clone();
                }
            }
            None => self.acc[node].push((key, table.clone())),
        }
        Ok(Arc::new(vec![Elem::Fun(table)]))
    }
}

/// Keep only the ⊑-maximal elements.
pub(crate) fn antichain(v: Vec<Elem>) -> Vec<Elem> {
    v.iter()
        .filter(|x| !v.iter().any(|y| y != *x && le(x, y)))
        .cloned()
        .collect()
}
