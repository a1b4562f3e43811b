//! Terms compiled to an arena with resolved variable slots, plus a 0-CFA
//! flow analysis that tells which abstractions may reach each operator.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use crate::syntax::{BinOp, Expr, Ident};

pub(crate) type NodeId = usize;
pub(crate) type Slot = usize;

#[derive(Clone, Debug)]
pub(crate) enum Node {
    /// `None` when the literal does not fit the element representation.
    Int(Option<i64>),
    Prim(BinOp, NodeId, NodeId),
    Var(Slot),
    Lam(Slot, NodeId),
    App(NodeId, NodeId),
    If(NodeId, NodeId, NodeId),
}

#[derive(Clone, Debug)]
pub(crate) struct Program {
    pub nodes: Vec<Node>,
    pub root: NodeId,
    /// Free variables of each node, as sorted slots.
    pub fv: Vec<Vec<Slot>>,
    /// Free variables of the whole term occupy slots `0..free.len()`.
    pub free: Vec<Ident>,
    pub nslots: usize,
    /// Abstractions (by node id) that each node may evaluate to.
    pub flow: Vec<BTreeSet<NodeId>>,
}

impl Program {
    pub fn compile(e: &Expr) -> Program {
        let free: Vec<Ident> = e.free_vars().into_iter().collect();
        let mut c = Compiler {
            nodes: Vec::new(),
            fv: Vec::new(),
            nslots: free.len(),
        };
        let mut scope: Vec<(Ident, Slot)> =
            free.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let root = c.go(e, &mut scope);
        let mut p = Program {
            nodes: c.nodes,
            root,
            fv: c.fv,
            free,
            nslots: c.nslots,
            flow: Vec::new(),
        };
        p.flow = p.cfa();
        p
    }

    fn cfa(&self) -> Vec<BTreeSet<NodeId>> {
        let mut flow = vec![BTreeSet::new(); self.nodes.len()];
        let mut param: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); self.nslots];
        loop {
            let mut changed = false;
            for (id, node) in self.nodes.iter().enumerate() {
                let add: BTreeSet<NodeId> = match node {
                    Node::Int(_) | Node::Prim(..) => continue,
                    Node::Var(s) => param[*s].clone(),
                    Node::Lam(..) => BTreeSet::from([id]),
                    Node::If(_, t, e) => flow[*t].union(&flow[*e]).copied().collect(),
                    Node::App(f, a) => {
                        let mut out = BTreeSet::new();
                        for &l in &flow[*f] {
                            if let Node::Lam(s, body) = self.nodes[l] {
                                for &v in &flow[*a] {
                                    changed |= param[s].insert(v);
                                }
                                out.extend(flow[body].iter().copied());
                            }
                        }
                        out
                    }
                };
                for v in add {
                    changed |= flow[id].insert(v);
                }
            }
            if !changed {
                return flow;
            }
        }
    }
}

struct Compiler {
    nodes: Vec<Node>,
    fv: Vec<Vec<Slot>>,
    nslots: usize,
}

impl Compiler {
    fn push(&mut self, n: Node, fv: Vec<Slot>) -> NodeId {
        self.nodes.push(n);
        self.fv.push(fv);
        self.nodes.len() - 1
    }

    fn union(&self, ids: &[NodeId]) -> Vec<Slot> {
        let s: BTreeSet<Slot> = ids.iter().flat_map(|&i| self.fv[i].iter().copied()).collect();
        s.into_iter().collect()
    }

    fn go(&mut self, e: &Expr, scope: &mut Vec<(Ident, Slot)>) -> NodeId {
        match e {
            Expr::Int(n) => self.push(Node::Int(n.to_i64()), vec![]),
            Expr::Var(x) => {
                let s = scope
                    .iter()
                    .rev()
                    .find(|(y, _)| y == x)
                    .map(|(_, s)| *s)
                    .expect("free variables are pre-assigned slots");
                self.push(Node::Var(s), vec![s])
            }
            Expr::Prim(op, l, r) => {
                let l = self.go(l, scope);
                let r = self.go(r, scope);
                let fv = self.union(&[l, r]);
                self.push(Node::Prim(*op, l, r), fv)
            }
            Expr::App(f, a) => {
                let f = self.go(f, scope);
                let a = self.go(a, scope);
                let fv = self.union(&[f, a]);
                self.push(Node::App(f, a), fv)
            }
            Expr::If(c, t, el) => {
                let c = self.go(c, scope);
                let t = self.go(t, scope);
                let el = self.go(el, scope);
                let fv = self.union(&[c, t, el]);
                self.push(Node::If(c, t, el), fv)
            }
            Expr::Lam(x, b) => {
                let s = self.nslots;
                self.nslots += 1;
                scope.push((x.clone(), s));
                let b = self.go(b, scope);
                scope.pop();
                let fv = self.fv[b].iter().copied().filter(|&v| v != s).collect();
                self.push(Node::Lam(s, b), fv)
            }
        }
    }
}
