//! Wold decomposition `H = H_u ⊕ H_s` of a single presented row-isometry.
//!
//! A basis vector lies in `H_u` iff its backward chain of predecessors never
//! ends. The chain strips the prefix and then walks incoming edges through
//! the finite base, so it is infinite exactly when that walk enters a
//! directed cycle. Membership therefore depends only on the node.

use serde::Serialize;

use crate::presentation::{Elem, Presentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Closure {
    Empty,
    FullSpace,
    /// Exactly the listed seeds.
    ExplicitFinite,
    /// Closed span of `S_w e_x` over all words `w` and seeds `x`.
    ForwardClosure,
}

/// A closed span of basis vectors described by finitely many seeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceDesc {
    pub seeds: Vec<Elem>,
    pub closure: Closure,
}

impl SubspaceDesc {
    pub fn empty() -> Self {
        SubspaceDesc {
            seeds: Vec::new(),
            closure: Closure::Empty,
        }
    }

    pub fn full() -> Self {
        SubspaceDesc {
            seeds: Vec::new(),
            closure: Closure::FullSpace,
        }
    }

    pub fn explicit(seeds: Vec<Elem>) -> Self {
        SubspaceDesc {
            seeds,
            closure: Closure::ExplicitFinite,
        }
    }

    pub fn forward(seeds: Vec<Elem>) -> Self {
        if seeds.is_empty() {
            return Self::empty();
        }
        SubspaceDesc {
            seeds,
            closure: Closure::ForwardClosure,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self.closure {
            Closure::Empty => true,
            Closure::FullSpace => false,
            _ => self.seeds.is_empty(),
        }
    }

    pub fn contains(&self, p: &Presentation, x: &Elem) -> bool {
        match self.closure {
            Closure::Empty => false,
            Closure::FullSpace => true,
            Closure::ExplicitFinite => self.seeds.contains(x),
            Closure::ForwardClosure => {
                // x = S_w e_seed iff the pred-chain of x passes through seed
                let mut cur = x.clone();
                for _ in 0..=x.prefix.len() + p.node_count() {
                    if self.seeds.contains(&cur) {
                        return true;
                    }
                    match p.pred(&cur) {
                        Some((_, y)) => cur = y,
                        None => return false,
                    }
                }
                false
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    Unitary,
    Shift,
}

/// Per-node structure of the backward edge walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NodeOrigin {
    /// Walk ends at this in-degree-0 root.
    Root(usize),
    /// Walk enters the cycle with this id.
    Cycle(usize),
}

/// Directed edge-cycles of the base graph, each as `(node, label)` steps
/// starting at its lowest-indexed node, plus the origin of every node.
pub(crate) fn node_origins(p: &Presentation) -> (Vec<NodeOrigin>, Vec<Vec<(usize, usize)>>) {
    let count = p.node_count();
    let mut origin: Vec<Option<NodeOrigin>> = vec![None; count];
    let mut cycles: Vec<Vec<(usize, usize)>> = Vec::new();
    for start in 0..count {
        if origin[start].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut on_path = vec![false; count];
        let mut cur = start;
        let found = loop {
            if let Some(o) = origin[cur] {
                break o;
            }
            if on_path[cur] {
                // cur closes a new cycle
                let pos = path.iter().position(|&v| v == cur).unwrap();
                let mut members: Vec<usize> = path[pos..].to_vec();
                let low = *members.iter().min().unwrap();
                // walk forward along edges from the lowest node
                let mut cyc = Vec::new();
                let mut v = low;
                loop {
                    let (_, label) = next_on_cycle(p, v, &members);
                    let w = p.edge(v, label).unwrap();
                    cyc.push((v, label));
                    v = w;
                    if v == low {
                        break;
                    }
                }
                let id = cycles.len();
                cycles.push(cyc);
                members.sort_unstable();
                for &mb in &members {
                    origin[mb] = Some(NodeOrigin::Cycle(id));
                }
                break NodeOrigin::Cycle(id);
            }
            on_path[cur] = true;
            path.push(cur);
            match p.in_edge(cur) {
                Some((src, _)) => cur = src,
                None => {
                    origin[cur] = Some(NodeOrigin::Root(cur));
                    break NodeOrigin::Root(cur);
                }
            }
        };
        for v in path {
            if origin[v].is_none() {
                origin[v] = Some(found);
            }
        }
    }
    (origin.into_iter().map(Option::unwrap).collect(), cycles)
}

// the outgoing edge of v that stays on the cycle
fn next_on_cycle(p: &Presentation, v: usize, members: &[usize]) -> (usize, usize) {
    for label in 1..=p.m() {
        if let Some(w) = p.edge(v, label) {
            if members.contains(&w) && p.in_edge(w) == Some((v, label)) {
                return (w, label);
            }
        }
    }
    unreachable!("cycle member without a cycle edge")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WoldResult {
    pub unitary_part: SubspaceDesc,
    pub shift_part: SubspaceDesc,
    /// Orthonormal basis of the wandering space `M = ∩ ker S_i*`.
    pub wandering: Vec<Elem>,
    pub multiplicity: usize,
    #[serde(skip)]
    origins: Vec<NodeOrigin>,
}

impl WoldResult {
    pub fn membership(&self, x: &Elem) -> Part {
        match self.origins[x.node] {
            NodeOrigin::Root(_) => Part::Shift,
            NodeOrigin::Cycle(_) => Part::Unitary,
        }
    }
}

pub fn wold(p: &Presentation) -> WoldResult {
    let (origins, cycles) = node_origins(p);
    let wandering: Vec<Elem> = (0..p.node_count())
        .filter(|&b| p.in_degree(b) == 0)
        .map(Elem::base)
        .collect();
    let mut cycle_nodes: Vec<usize> = cycles.iter().flatten().map(|&(v, _)| v).collect();
    cycle_nodes.sort_unstable();
    let unitary_part = if !wandering.is_empty() || cycle_nodes.is_empty() {
        SubspaceDesc::forward(cycle_nodes.into_iter().map(Elem::base).collect())
    } else {
        SubspaceDesc::full()
    };
    let shift_part = if cycles.is_empty() && p.node_count() > 0 {
        SubspaceDesc::full()
    } else {
        SubspaceDesc::forward(wandering.clone())
    };
    WoldResult {
        unitary_part,
        shift_part,
        multiplicity: wandering.len(),
        wandering,
        origins,
    }
}

pub fn membership(p: &Presentation, x: &Elem) -> Part {
    // backward chase with cycle detection
    let mut node = x.node;
    let mut seen = vec![false; p.node_count()];
    loop {
        if seen[node] {
            return Part::Unitary;
        }
        seen[node] = true;
        match p.in_edge(node) {
            Some((src, _)) => node = src,
            None => return Part::Shift,
        }
    }
}

/// `Σ S_i S_i* = I`: every basis vector has a predecessor.
pub fn is_row_unitary(p: &Presentation) -> bool {
    (0..p.node_count()).all(|b| p.in_degree(b) == 1)
}
