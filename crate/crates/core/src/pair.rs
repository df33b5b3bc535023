//! Joint presentations of two permutative families `S` (m labels) and `T`
//! (n labels) on one basis, and decision procedures for θ-commutation and
//! θ-double-commutation.
//!
//! Basis vectors are named `T_w S_u e_b` with the word in normal form. A name
//! is canonical when no absorption applies: the innermost S-letter has no
//! S-edge at `b`, and the innermost T-letter, read after moving every
//! T-letter inward past the S-letters, has no T-edge at `b`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::{Presentation, ValidationReport};
use crate::words::{push_s_in, push_s_out, push_t_out, to_s_outside, to_t_outside, Family, Theta, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PairElem {
    /// T-letters, outermost first.
    pub t: Vec<usize>,
    /// S-letters, outermost first.
    pub s: Vec<usize>,
    pub node: usize,
}

impl PairElem {
    pub fn base(node: usize) -> Self {
        PairElem {
            t: Vec::new(),
            s: Vec::new(),
            node,
        }
    }

    pub fn new(t: Vec<usize>, s: Vec<usize>, node: usize) -> Self {
        PairElem { t, s, node }
    }

    /// Joint depth `|t| + |s|`.
    pub fn len(&self) -> usize {
        self.t.len() + self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl PartialOrd for PairElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PairElem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), &self.t, &self.s, self.node).cmp(&(other.len(), &other.t, &other.s, other.node))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPresentation {
    theta: Theta,
    s: Presentation,
    t: Presentation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairValidation {
    pub s: ValidationReport,
    pub t: ValidationReport,
}

impl PairValidation {
    pub fn is_valid(&self) -> bool {
        self.s.is_valid() && self.t.is_valid()
    }
}

impl PairPresentation {
    pub fn new(
        theta: Theta,
        nodes: Vec<String>,
        s_edges: &[(usize, usize, usize)],
        t_edges: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let s = Presentation::new(theta.m(), nodes.clone(), s_edges)?;
        let t = Presentation::new(theta.n(), nodes, t_edges)?;
        Ok(PairPresentation { theta, s, t })
    }

    pub fn from_names(
        theta: Theta,
        nodes: &[&str],
        s_edges: &[(&str, usize, &str)],
        t_edges: &[(&str, usize, &str)],
    ) -> Result<Self> {
        let s = Presentation::from_names(theta.m(), nodes, s_edges)?;
        let t = Presentation::from_names(theta.n(), nodes, t_edges)?;
        Ok(PairPresentation { theta, s, t })
    }

    pub fn free(theta: Theta, nodes: &[&str]) -> Result<Self> {
        Self::from_names(theta, nodes, &[], &[])
    }

    pub fn from_families(theta: Theta, s: Presentation, t: Presentation) -> Result<Self> {
        if s.m() != theta.m() || t.m() != theta.n() || s.node_names() != t.node_names() {
            return Err(Error::Validation(
                "families do not match theta or each other's base".into(),
            ));
        }
        Ok(PairPresentation { theta, s, t })
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    pub fn m(&self) -> usize {
        self.theta.m()
    }

    pub fn n(&self) -> usize {
        self.theta.n()
    }

    pub fn node_count(&self) -> usize {
        self.s.node_count()
    }

    pub fn node_names(&self) -> &[String] {
        self.s.node_names()
    }

    /// The S-edges alone, as a single-family presentation.
    pub fn s_family(&self) -> &Presentation {
        &self.s
    }

    pub fn t_family(&self) -> &Presentation {
        &self.t
    }

    pub fn family(&self, f: Family) -> &Presentation {
        match f {
            Family::S => &self.s,
            Family::T => &self.t,
        }
    }

    pub fn labels(&self, f: Family) -> usize {
        match f {
            Family::S => self.m(),
            Family::T => self.n(),
        }
    }

    pub fn validate(&self) -> PairValidation {
        PairValidation {
            s: self.s.validate(),
            t: self.t.validate(),
        }
    }

    pub fn is_canonical(&self, x: &PairElem) -> bool {
        if x.node >= self.node_count()
            || x.s.iter().any(|&i| i == 0 || i > self.m())
            || x.t.iter().any(|&j| j == 0 || j > self.n())
        {
            return false;
        }
        if let Some(&i) = x.s.last() {
            if self.s.edge(x.node, i).is_some() {
                return false;
            }
        }
        let (_, c) = to_s_outside(&self.theta, &x.t, &x.s);
        c.last().is_none_or(|&j| self.t.edge(x.node, j).is_none())
    }

    /// One absorption step, S before T. `None` when the name is canonical.
    fn absorb_once(&self, t: &[usize], s: &[usize], node: usize) -> Option<(Vec<usize>, Vec<usize>, usize)> {
        if let Some(&i) = s.last() {
            if let Some(dst) = self.s.edge(node, i) {
                return Some((t.to_vec(), s[..s.len() - 1].to_vec(), dst));
            }
        }
        self.absorb_t(t, s, node)
    }

    fn absorb_t(&self, t: &[usize], s: &[usize], node: usize) -> Option<(Vec<usize>, Vec<usize>, usize)> {
        if t.is_empty() {
            return None;
        }
        let (a, mut c) = to_s_outside(&self.theta, t, s);
        let dst = self.t.edge(node, *c.last().unwrap())?;
        c.pop();
        let (w, u) = to_t_outside(&self.theta, &a, &c);
        Some((w, u, dst))
    }

    /// Deterministic reduction (S-absorption preferred). Only meaningful as a
    /// canonical form once the pair is known to commute.
    pub(crate) fn reduce_raw(&self, t: Vec<usize>, s: Vec<usize>, node: usize) -> PairElem {
        let (mut t, mut s, mut node) = (t, s, node);
        while let Some((t2, s2, n2)) = self.absorb_once(&t, &s, node) {
            t = t2;
            s = s2;
            node = n2;
        }
        PairElem { t, s, node }
    }

    /// Every normal form reachable from the name under any absorption order.
    pub fn all_normal_forms(&self, t: &[usize], s: &[usize], node: usize) -> BTreeSet<PairElem> {
        let mut memo = HashMap::new();
        self.nf_rec(t.to_vec(), s.to_vec(), node, &mut memo)
    }

    fn nf_rec(
        &self,
        t: Vec<usize>,
        s: Vec<usize>,
        node: usize,
        memo: &mut HashMap<PairElem, BTreeSet<PairElem>>,
    ) -> BTreeSet<PairElem> {
        let key = PairElem::new(t, s, node);
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let mut steps = Vec::new();
        if let Some(&i) = key.s.last() {
            if let Some(dst) = self.s.edge(node, i) {
                steps.push((key.t.clone(), key.s[..key.s.len() - 1].to_vec(), dst));
            }
        }
        if let Some(step) = self.absorb_t(&key.t, &key.s, node) {
            steps.push(step);
        }
        let out = if steps.is_empty() {
            BTreeSet::from([key.clone()])
        } else {
            steps
                .into_iter()
                .flat_map(|(t2, s2, n2)| self.nf_rec(t2, s2, n2, memo))
                .collect()
        };
        memo.insert(key, out.clone());
        out
    }

    pub(crate) fn s_apply_raw(&self, i: usize, x: &PairElem) -> PairElem {
        let (t2, i2) = push_s_in(&self.theta, i, &x.t);
        let mut s2 = Vec::with_capacity(x.s.len() + 1);
        s2.push(i2);
        s2.extend_from_slice(&x.s);
        self.reduce_raw(t2, s2, x.node)
    }

    pub(crate) fn t_apply_raw(&self, j: usize, x: &PairElem) -> PairElem {
        let mut t2 = Vec::with_capacity(x.t.len() + 1);
        t2.push(j);
        t2.extend_from_slice(&x.t);
        self.reduce_raw(t2, x.s.clone(), x.node)
    }

    pub(crate) fn apply_raw(&self, f: Family, label: usize, x: &PairElem) -> PairElem {
        match f {
            Family::S => self.s_apply_raw(label, x),
            Family::T => self.t_apply_raw(label, x),
        }
    }

    /// Every way of writing `T_c e_b` (no S-letters) as `S_i y`, one per node
    /// on the backward T-walk from `b` that has an incoming S-edge.
    fn s_pred_candidates(&self, c: &[usize], node: usize, first_only: bool) -> Vec<(usize, PairElem)> {
        let mut out = Vec::new();
        let mut acc = c.to_vec();
        let mut b = node;
        // a second lap around a T-cycle can expose a different preimage
        let laps = if first_only { 1 } else { 2 };
        let mut visits = vec![0usize; self.node_count()];
        loop {
            if visits[b] == laps {
                break;
            }
            visits[b] += 1;
            if let Some((src, k)) = self.s.in_edge(b) {
                let (i, c2) = push_s_out(&self.theta, &acc, k);
                out.push((i, self.reduce_raw(c2, Vec::new(), src)));
                if first_only {
                    break;
                }
            }
            match self.t.in_edge(b) {
                Some((src, j)) => {
                    acc.push(j);
                    b = src;
                }
                None => break,
            }
        }
        out
    }

    /// Mirror of [`Self::s_pred_candidates`] for `S_u e_b` and the T-family.
    fn t_pred_candidates(&self, u: &[usize], node: usize, first_only: bool) -> Vec<(usize, PairElem)> {
        let mut out = Vec::new();
        let mut acc = u.to_vec();
        let mut b = node;
        let laps = if first_only { 1 } else { 2 };
        let mut visits = vec![0usize; self.node_count()];
        loop {
            if visits[b] == laps {
                break;
            }
            visits[b] += 1;
            if let Some((src, j)) = self.t.in_edge(b) {
                let (j2, u2) = push_t_out(&self.theta, &acc, j);
                out.push((j2, self.reduce_raw(Vec::new(), u2, src)));
                if first_only {
                    break;
                }
            }
            match self.s.in_edge(b) {
                Some((src, i)) => {
                    acc.push(i);
                    b = src;
                }
                None => break,
            }
        }
        out
    }

    pub(crate) fn s_pred_raw(&self, x: &PairElem) -> Option<(usize, PairElem)> {
        if !x.s.is_empty() {
            let (a, c) = to_s_outside(&self.theta, &x.t, &x.s);
            let (w, u) = to_t_outside(&self.theta, &a[1..], &c);
            return Some((a[0], PairElem::new(w, u, x.node)));
        }
        self.s_pred_candidates(&x.t, x.node, true).into_iter().next()
    }

    pub(crate) fn t_pred_raw(&self, x: &PairElem) -> Option<(usize, PairElem)> {
        if let Some((&first, rest)) = x.t.split_first() {
            return Some((first, PairElem::new(rest.to_vec(), x.s.clone(), x.node)));
        }
        self.t_pred_candidates(&x.s, x.node, true).into_iter().next()
    }

    pub(crate) fn pred_raw(&self, f: Family, x: &PairElem) -> Option<(usize, PairElem)> {
        match f {
            Family::S => self.s_pred_raw(x),
            Family::T => self.t_pred_raw(x),
        }
    }

    /// Canonical elements of joint depth `<= depth`, grown from the base by
    /// the raw actions.
    pub(crate) fn enumerate_raw(&self, depth: usize) -> Vec<PairElem> {
        let mut seen: HashSet<PairElem> = (0..self.node_count()).map(PairElem::base).collect();
        let mut frontier: Vec<PairElem> = seen.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for f in [Family::S, Family::T] {
                    for l in 1..=self.labels(f) {
                        let y = self.apply_raw(f, l, x);
                        if y.len() <= depth && seen.insert(y.clone()) {
                            next.push(y);
                        }
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<PairElem> = seen.into_iter().collect();
        out.sort();
        out
    }

    pub fn display(&self, x: &PairElem) -> String {
        let node = self.node_names().get(x.node).map(String::as_str).unwrap_or("?");
        if x.is_empty() {
            format!("(∅, {node})")
        } else {
            format!("({}, {node})", Word::from_parts(&x.t, &x.s))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FailureKind {
    /// A base name reduces to two different canonical forms.
    NonConfluent,
    /// `S_i T_j x != T_{j'} S_{i'} x` on the base or the depth-1 frontier.
    Relation,
    /// A base vector is the image of two different S-generator/vector pairs.
    AmbiguousSPred,
    AmbiguousTPred,
    /// `T_j* S_i = Σ_{θ(i,k)=(i_k,j)} S_{i_k} T_k*` fails.
    DoublyFirst,
    /// `S_i* T_j = Σ T_k S_{i_k}*` fails.
    DoublySecond,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommuteFailure {
    pub kind: FailureKind,
    pub at: PairElem,
    pub i: usize,
    pub j: usize,
    pub lhs: Option<PairElem>,
    pub rhs: Option<PairElem>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CommutationReport {
    pub failures: Vec<CommuteFailure>,
}

impl CommutationReport {
    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self, pp: &PairPresentation) -> String {
        let mut out = String::new();
        for f in &self.failures {
            let show = |x: &Option<PairElem>| x.as_ref().map(|e| pp.display(e)).unwrap_or_else(|| "0".into());
            out.push_str(&format!(
                "{:?} at {} (i={}, j={}): {} vs {}\n",
                f.kind,
                pp.display(&f.at),
                f.i,
                f.j,
                show(&f.lhs),
                show(&f.rhs)
            ));
        }
        out
    }
}

/// Decides `S_i T_j = T_{j'} S_{i'}` for `θ(i,j) = (i',j')`.
///
/// The fresh region is a free `F_θ⁺`-module, so the relation can only break
/// where absorptions meet: at base nodes. Three things are checked there:
/// every bidegree-(1,1) name over a base node has a single normal form; each
/// base vector has at most one preimage per family; and the relation holds
/// literally on the base and the depth-1 frontier.
pub fn check_theta_commute(pp: &PairPresentation) -> Result<CommutationReport> {
    let v = pp.validate();
    if !v.is_valid() {
        return Err(Error::Validation(format!(
            "pair presentation is not a pair of row-isometries: {:?}",
            v.s.issues
                .iter()
                .chain(v.t.issues.iter())
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
        )));
    }
    let th = pp.theta();
    let mut failures = Vec::new();
    for b in 0..pp.node_count() {
        for i in 1..=pp.m() {
            for j in 1..=pp.n() {
                let (i2, j2) = th.apply(i, j);
                let nfs = pp.all_normal_forms(&[j2], &[i2], b);
                if nfs.len() > 1 {
                    let mut it = nfs.into_iter();
                    failures.push(CommuteFailure {
                        kind: FailureKind::NonConfluent,
                        at: PairElem::base(b),
                        i,
                        j,
                        lhs: it.next(),
                        rhs: it.next(),
                    });
                }
            }
        }
    }
    if !failures.is_empty() {
        return Ok(CommutationReport { failures });
    }
    for b in 0..pp.node_count() {
        for (kind, cands) in [
            (FailureKind::AmbiguousSPred, pp.s_pred_candidates(&[], b, false)),
            (FailureKind::AmbiguousTPred, pp.t_pred_candidates(&[], b, false)),
        ] {
            if let Some(other) = cands.iter().find(|c| **c != cands[0]) {
                failures.push(CommuteFailure {
                    kind,
                    at: PairElem::base(b),
                    i: cands[0].0,
                    j: other.0,
                    lhs: Some(cands[0].1.clone()),
                    rhs: Some(other.1.clone()),
                });
            }
        }
    }
    if !failures.is_empty() {
        return Ok(CommutationReport { failures });
    }
    for x in pp.enumerate_raw(1) {
        for i in 1..=pp.m() {
            for j in 1..=pp.n() {
                let (i2, j2) = th.apply(i, j);
                let lhs = pp.s_apply_raw(i, &pp.t_apply_raw(j, &x));
                let rhs = pp.t_apply_raw(j2, &pp.s_apply_raw(i2, &x));
                if lhs != rhs {
                    failures.push(CommuteFailure {
                        kind: FailureKind::Relation,
                        at: x.clone(),
                        i,
                        j,
                        lhs: Some(lhs),
                        rhs: Some(rhs),
                    });
                }
            }
        }
    }
    Ok(CommutationReport { failures })
}

/// A pair presentation that has passed [`check_theta_commute`]. Canonical
/// forms, the actions and the predecessor maps are well defined only here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingPair(PairPresentation);

impl Deref for CommutingPair {
    type Target = PairPresentation;

    fn deref(&self) -> &PairPresentation {
        &self.0
    }
}

impl CommutingPair {
    pub fn new(pp: PairPresentation) -> Result<Self> {
        let report = check_theta_commute(&pp)?;
        if report.is_empty() {
            Ok(CommutingPair(pp))
        } else {
            Err(Error::ContractViolation(format!(
                "pair does not θ-commute:\n{}",
                report.render(&pp)
            )))
        }
    }

    pub fn presentation(&self) -> &PairPresentation {
        &self.0
    }

    pub fn into_inner(self) -> PairPresentation {
        self.0
    }

    pub fn reduce_elem(&self, t: &[usize], s: &[usize], node: usize) -> Result<PairElem> {
        if node >= self.node_count()
            || s.iter().any(|&i| i == 0 || i > self.m())
            || t.iter().any(|&j| j == 0 || j > self.n())
        {
            return Err(Error::Validation("name out of range".into()));
        }
        Ok(self.reduce_raw(t.to_vec(), s.to_vec(), node))
    }

    pub fn s_apply(&self, i: usize, x: &PairElem) -> Result<PairElem> {
        if i == 0 || i > self.m() {
            return Err(Error::Validation(format!("S-label {i} out of range")));
        }
        Ok(self.s_apply_raw(i, x))
    }

    pub fn t_apply(&self, j: usize, x: &PairElem) -> Result<PairElem> {
        if j == 0 || j > self.n() {
            return Err(Error::Validation(format!("T-label {j} out of range")));
        }
        Ok(self.t_apply_raw(j, x))
    }

    pub fn apply(&self, f: Family, label: usize, x: &PairElem) -> Result<PairElem> {
        match f {
            Family::S => self.s_apply(label, x),
            Family::T => self.t_apply(label, x),
        }
    }

    pub fn s_pred(&self, x: &PairElem) -> Option<(usize, PairElem)> {
        self.s_pred_raw(x)
    }

    pub fn t_pred(&self, x: &PairElem) -> Option<(usize, PairElem)> {
        self.t_pred_raw(x)
    }

    pub fn pred(&self, f: Family, x: &PairElem) -> Option<(usize, PairElem)> {
        self.pred_raw(f, x)
    }

    /// All canonical elements of joint depth `<= depth`, sorted by depth,
    /// T-word, S-word, node.
    pub fn enumerate(&self, depth: usize) -> Vec<PairElem> {
        self.enumerate_raw(depth)
    }

    /// Default depth for bounded checks: `|base| + 2`.
    pub fn default_depth(&self) -> usize {
        self.node_count() + 2
    }
}

/// Checks both adjoint identities of θ-double commutation on every canonical
/// element of joint depth `<= depth`. Adjoints act by predecessor, with an
/// empty predecessor meaning 0.
pub fn check_doubly_commute(cp: &CommutingPair, depth: usize) -> CommutationReport {
    let th = cp.theta();
    let mut failures = Vec::new();
    for x in cp.enumerate(depth) {
        let tp = cp.t_pred(&x);
        let sp = cp.s_pred(&x);
        for i in 1..=cp.m() {
            for j in 1..=cp.n() {
                // T_j* S_i x  vs  Σ_{θ(i,k)=(i_k,j)} S_{i_k} T_k* x
                let lhs = match cp.t_pred(&cp.s_apply_raw(i, &x)) {
                    Some((l, y)) if l == j => Some(y),
                    _ => None,
                };
                let rhs = tp.as_ref().and_then(|(l, y)| {
                    let (k, jj) = th.apply(i, *l);
                    (jj == j).then(|| cp.s_apply_raw(k, y))
                });
                if lhs != rhs {
                    failures.push(CommuteFailure {
                        kind: FailureKind::DoublyFirst,
                        at: x.clone(),
                        i,
                        j,
                        lhs,
                        rhs,
                    });
                }
                // S_i* T_j x  vs  Σ_{θ(i,k)=(i_k,j)} T_k S_{i_k}* x
                let lhs = match cp.s_pred(&cp.t_apply_raw(j, &x)) {
                    Some((l, y)) if l == i => Some(y),
                    _ => None,
                };
                let rhs = sp.as_ref().and_then(|(l, y)| {
                    let (ii, k) = th.inverse(*l, j);
                    (ii == i).then(|| cp.t_apply_raw(k, y))
                });
                if lhs != rhs {
                    failures.push(CommuteFailure {
                        kind: FailureKind::DoublySecond,
                        at: x.clone(),
                        i,
                        j,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    CommutationReport { failures }
}

impl fmt::Display for PairElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "(∅, #{})", self.node)
        } else {
            write!(f, "({}, #{})", Word::from_parts(&self.t, &self.s), self.node)
        }
    }
}
