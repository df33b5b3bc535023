//! Finite presentations of a single permutative row-isometry.
//!
//! A presentation is a finite set of base nodes with partial labelled edges
//! `(b, i) -> b'`. The Hilbert space has one basis vector per canonical name
//! `S_u e_b`; `S_i e_b` is the target node's vector when the edge exists and a
//! fresh name otherwise.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::Word;

/// Canonical basis element `S_prefix e_node`. `prefix` is outermost-first and
/// its innermost letter never has an edge at `node`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Elem {
    pub prefix: Vec<usize>,
    pub node: usize,
}

impl Elem {
    pub fn base(node: usize) -> Self {
        Elem {
            prefix: Vec::new(),
            node,
        }
    }

    pub fn new(prefix: Vec<usize>, node: usize) -> Self {
        Elem { prefix, node }
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// (|prefix|, prefix, node): the enumeration order.
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.prefix.len(), &self.prefix, self.node).cmp(&(other.prefix.len(), &other.prefix, other.node))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Issue {
    /// A node with more than one incoming edge across all labels.
    InDegree {
        node: String,
        sources: Vec<(String, usize)>,
    },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::InDegree { node, sources } => {
                write!(f, "node {node} has in-degree {}:", sources.len())?;
                for (src, label) in sources {
                    write!(f, " ({src},{label})")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    m: usize,
    nodes: Vec<String>,
    edges: Vec<Vec<Option<usize>>>,
    incoming: Vec<Vec<(usize, usize)>>,
}

impl Presentation {
    /// Edges are `(source, label, target)` with node indices and 1-based labels.
    /// Structural errors (unknown node, bad label, two targets for one
    /// `(node, label)`) are rejected here; in-degree violations are left for
    /// [`Presentation::validate`].
    pub fn new(m: usize, nodes: Vec<String>, edges: &[(usize, usize, usize)]) -> Result<Self> {
        if m == 0 {
            return Err(Error::Validation("m must be at least 1".into()));
        }
        let mut seen = HashMap::new();
        for (k, name) in nodes.iter().enumerate() {
            if seen.insert(name.as_str(), k).is_some() {
                return Err(Error::Validation(format!("duplicate node `{name}`")));
            }
        }
        let mut table = vec![vec![None; m]; nodes.len()];
        let mut incoming = vec![Vec::new(); nodes.len()];
        for &(src, label, dst) in edges {
            if src >= nodes.len() || dst >= nodes.len() {
                return Err(Error::Validation(format!(
                    "edge ({src},{label},{dst}) references an unknown node"
                )));
            }
            if label == 0 || label > m {
                return Err(Error::Validation(format!("edge label {label} out of range 1..={m}")));
            }
            if table[src][label - 1].is_some() {
                return Err(Error::Validation(format!("two targets for ({}, {label})", nodes[src])));
            }
            table[src][label - 1] = Some(dst);
            incoming[dst].push((src, label));
        }
        Ok(Presentation {
            m,
            nodes,
            edges: table,
            incoming,
        })
    }

    pub fn from_names(m: usize, nodes: &[&str], edges: &[(&str, usize, &str)]) -> Result<Self> {
        let names: Vec<String> = nodes.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::Validation(format!("unknown node `{s}`")))
        };
        let e = edges
            .iter()
            .map(|&(a, i, b)| Ok((idx(a)?, i, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, names, &e)
    }

    /// The left-regular representation: no edges at all.
    pub fn free(m: usize, nodes: &[&str]) -> Result<Self> {
        Self::from_names(m, nodes, &[])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_name(&self, node: usize) -> &str {
        &self.nodes[node]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn edge(&self, node: usize, label: usize) -> Option<usize> {
        self.edges[node][label - 1]
    }

    /// All edges as `(source, label, target)`, in source then label order.
    pub fn edge_list(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (b, row) in self.edges.iter().enumerate() {
            for (i, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    out.push((b, i + 1, *t));
                }
            }
        }
        out
    }

    /// The unique incoming edge `(source, label)`, if any. For invalid
    /// presentations the first declared one.
    pub fn in_edge(&self, node: usize) -> Option<(usize, usize)> {
        self.incoming[node].first().copied()
    }

    pub fn in_degree(&self, node: usize) -> usize {
        self.incoming[node].len()
    }

    pub fn validate(&self) -> ValidationReport {
        let issues = self
            .incoming
            .iter()
            .enumerate()
            .filter(|(_, inc)| inc.len() > 1)
            .map(|(b, inc)| Issue::InDegree {
                node: self.nodes[b].clone(),
                sources: inc.iter().map(|&(s, l)| (self.nodes[s].clone(), l)).collect(),
            })
            .collect();
        ValidationReport { issues }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn is_canonical(&self, x: &Elem) -> bool {
        x.node < self.nodes.len()
            && x.prefix.iter().all(|&i| i >= 1 && i <= self.m)
            && x.prefix.last().is_none_or(|&i| self.edge(x.node, i).is_none())
    }

    pub fn check_canonical(&self, x: &Elem) -> Result<()> {
        if self.is_canonical(x) {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "element {} is not canonical",
                self.display(x)
            )))
        }
    }

    /// `S_i e_x`, absorbed into canonical form.
    pub fn apply(&self, i: usize, x: &Elem) -> Result<Elem> {
        if i == 0 || i > self.m {
            return Err(Error::Validation(format!("label {i} out of range 1..={}", self.m)));
        }
        Ok(self.apply_unchecked(i, x))
    }

    pub(crate) fn apply_unchecked(&self, i: usize, x: &Elem) -> Elem {
        if x.prefix.is_empty() {
            if let Some(t) = self.edge(x.node, i) {
                return Elem::base(t);
            }
        }
        let mut prefix = Vec::with_capacity(x.prefix.len() + 1);
        prefix.push(i);
        prefix.extend_from_slice(&x.prefix);
        Elem { prefix, node: x.node }
    }

    /// `S_w e_x` for a word given outermost-first.
    pub fn apply_word(&self, word: &[usize], x: &Elem) -> Result<Elem> {
        let mut cur = x.clone();
        for &i in word.iter().rev() {
            cur = self.apply(i, &cur)?;
        }
        Ok(cur)
    }

    /// The unique `(i, y)` with `S_i e_y = e_x`, or `None` when `e_x` is
    /// wandering (lies in every `ker S_i*`).
    pub fn pred(&self, x: &Elem) -> Option<(usize, Elem)> {
        if let Some((&first, rest)) = x.prefix.split_first() {
            return Some((first, Elem::new(rest.to_vec(), x.node)));
        }
        self.in_edge(x.node).map(|(src, label)| (label, Elem::base(src)))
    }

    /// All canonical elements with `|prefix| <= depth`, ordered by length,
    /// then prefix, then node declaration order.
    pub fn enumerate(&self, depth: usize) -> Vec<Elem> {
        let mut out: Vec<Elem> = (0..self.nodes.len()).map(Elem::base).collect();
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &layer {
                for i in 1..=self.m {
                    let mut v = w.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            for w in &next {
                let last = *w.last().unwrap();
                for b in 0..self.nodes.len() {
                    if self.edge(b, last).is_none() {
                        out.push(Elem::new(w.clone(), b));
                    }
                }
            }
            layer = next;
        }
        out
    }

    pub fn display(&self, x: &Elem) -> String {
        let node = self.nodes.get(x.node).map(String::as_str).unwrap_or("?");
        if x.prefix.is_empty() {
            format!("(∅, {node})")
        } else {
            format!("({}, {node})", Word::from_s(&x.prefix))
        }
    }
}
