use std::collections::BTreeSet;

use crate::domain::{le, Elem, Table};
use crate::error::EnumError;

use super::engine::{Engine, SlotEnv};
use super::program::{Node, NodeId};

impl Engine<'_> {
    /// Structural membership test. Sub-enumerations come from the engine,
    /// so a `false` only means no witness was found at this budget.
    pub fn check(&mut self, node: NodeId, env: &SlotEnv, d: &Elem) -> Result<bool, EnumError> {
        let prog = self.prog;
        match &prog.nodes[node] {
            Node::Int(n) => Ok(n.map(Elem::Num).as_ref() == Some(d)),
            Node::Var(s) => Ok(le(d, env[*s].as_ref().expect("slot bound before use"))),
            Node::Lam(slot, body) => {
                let Elem::Fun(t) = d else { return Ok(false) };
                for (di, dout) in t.entries() {
                    let mut env2 = env.clone();
                    env2[*slot] = Some(di.clone());
                    if !self.check(*body, &env2, dout)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Node::Prim(op, l, r) => {
                let Elem::Num(n) = d else { return Ok(false) };
                let ls = self.eval(*l, env)?;
                let rs = self.eval(*r, env)?;
                for a in ls.iter().filter_map(Elem::as_num) {
                    for b in rs.iter().filter_map(Elem::as_num) {
                        if op.apply_i64(a, b) == Some(*n) {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
            Node::If(c, t, e) => {
                let cs = self.eval(*c, env)?;
                let (mut nz, mut z) = (false, false);
                for n in cs.iter().filter_map(Elem::as_num) {
                    if n != 0 { nz = true } else { z = true }
                }
                Ok((nz && self.check(*t, env, d)?) || (z && self.check(*e, env, d)?))
            }
            Node::App(f, a) => {
                let args = self.eval(*a, env)?;
                for d2 in args.iter() {
                    self.note_demand(*f, d2);
                }
                let fs = self.eval(*f, env)?;
                // Witness inputs: enumerated arguments and any table input below one.
                let mut witnesses: BTreeSet<Elem> = args.iter().cloned().collect();
                for t in fs.iter() {
                    if let Elem::Fun(t) = t {
                        for (di, _) in t.entries() {
                            if args.iter().any(|d2| le(di, d2)) {
                                witnesses.insert(di.clone());
                            }
                        }
                    }
                }
                for d1 in witnesses {
                    let mut outs: BTreeSet<Elem> = BTreeSet::from([d.clone()]);
                    for t in fs.iter() {
                        if let Elem::Fun(t) = t {
                            for (di, o) in t.entries() {
                                if *di == d1 && le(d, o) {
                                    outs.insert(o.clone());
                                }
                            }
                        }
                    }
                    for o in outs {
                        let probe = Elem::Fun(Table::singleton(d1.clone(), o));
                        if self.check(*f, env, &probe)? {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
        }
    }
}
