//! Four-fold decomposition `H = H_uu ⊕ H_us ⊕ H_su ⊕ H_ss` of a commuting
//! pair by the unitary/shift type of each family, and the sufficient
//! conditions for it to exist.
//!
//! For a commuting pair the predecessor of `T_c e_b` under the S-family has
//! the form `S_i T_{c'} e_{b'}` where `b'` depends on `b` alone, and the same
//! holds with the families swapped. Hence both Wold decompositions, and both
//! reducing conditions, are decided exactly on the base by the node maps
//! `b ↦ node(S-pred(e_b))` and `b ↦ node(T-pred(e_b))`.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::pair::{check_doubly_commute, CommutingPair, PairElem};
use crate::words::Family;

fn other(f: Family) -> Family {
    match f {
        Family::S => Family::T,
        Family::T => Family::S,
    }
}

/// Wold decomposition of one family of a commuting pair, over joint
/// canonical elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointWold {
    pub family: Family,
    /// Node of the predecessor of each base vector, if it has one.
    pub pred_node: Vec<Option<usize>>,
    /// Nodes whose elements lie in the unitary part.
    pub unitary: Vec<bool>,
}

impl JointWold {
    pub fn is_unitary(&self, x: &PairElem) -> bool {
        self.unitary[x.node]
    }

    /// Base vectors with no predecessor. Together with the other family's
    /// free words over them they span the wandering space.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.pred_node.len())
            .filter(|&b| self.pred_node[b].is_none())
            .collect()
    }

    pub fn unitary_nodes(&self) -> Vec<usize> {
        (0..self.unitary.len()).filter(|&b| self.unitary[b]).collect()
    }
}

pub fn joint_wold(cp: &CommutingPair, family: Family) -> JointWold {
    let count = cp.node_count();
    let pred_node: Vec<Option<usize>> = (0..count)
        .map(|b| cp.pred(family, &PairElem::base(b)).map(|(_, y)| y.node))
        .collect();
    // b is unitary iff iterating pred_node from b never stops
    let unitary = (0..count)
        .map(|b| {
            let mut cur = b;
            for _ in 0..=count {
                match pred_node[cur] {
                    Some(next) => cur = next,
                    None => return false,
                }
            }
            true
        })
        .collect();
    JointWold {
        family,
        pred_node,
        unitary,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Infinite => write!(f, "infinite"),
        }
    }
}

/// Dimension of the wandering space of one family. A root `b` contributes
/// every canonical `W_c e_b` built from the other family; that is just `e_b`
/// when all of the other family's edges leave `b`, and infinitely many
/// vectors otherwise.
pub fn shift_multiplicity(cp: &CommutingPair, family: Family) -> Multiplicity {
    let jw = joint_wold(cp, family);
    let o = other(family);
    let roots = jw.roots();
    let full = |b: usize| (1..=cp.labels(o)).all(|l| cp.family(o).edge(b, l).is_some());
    if roots.iter().all(|&b| full(b)) {
        Multiplicity::Finite(roots.len())
    } else {
        Multiplicity::Infinite
    }
}

/// Every element lies on a cycle of the predecessor map, i.e. the restriction
/// to the unitary part is a permutation of finite orbits. Only meaningful for
/// a single-label family.
fn unitary_orbits_finite(cp: &CommutingPair, jw: &JointWold) -> bool {
    // an orbit is finite iff predecessors of unitary base vectors are base
    // vectors again; otherwise the carried word grows without bound
    jw.unitary_nodes()
        .into_iter()
        .all(|b| matches!(cp.pred(jw.family, &PairElem::base(b)), Some((_, y)) if y.is_empty()))
}

/// `x` lies on a cycle of the predecessor map of `family`, i.e. `W_w x = x`
/// for some nonempty word. These span the structure subspace of a family with
/// at least two labels.
pub fn is_periodic(cp: &CommutingPair, family: Family, x: &PairElem) -> bool {
    let own = match family {
        Family::S => &x.s,
        Family::T => &x.t,
    };
    if !own.is_empty() {
        return false;
    }
    // predecessors of such vectors carry a word of non-decreasing length
    let mut seen = HashSet::new();
    let mut cur = x.clone();
    loop {
        match cp.pred(family, &cur) {
            Some((_, y)) => {
                if y == *x {
                    return true;
                }
                if y.len() > x.len() || !seen.insert(y.clone()) {
                    return false;
                }
                cur = y;
            }
            None => return false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// S first, then T on the shift part of S.
    St,
    Ts,
}

impl Order {
    fn families(self) -> (Family, Family) {
        match self {
            Order::St => (Family::S, Family::T),
            Order::Ts => (Family::T, Family::S),
        }
    }
}

/// A union of joint canonical elements selected by their base node.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PairSubspace {
    pub nodes: Vec<usize>,
}

impl PairSubspace {
    pub fn contains(&self, x: &PairElem) -> bool {
        self.nodes.binary_search(&x.node).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn from_mask(mask: impl Iterator<Item = bool>) -> Self {
        PairSubspace {
            nodes: mask.enumerate().filter(|&(_, b)| b).map(|(i, _)| i).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// The unitary part of the first family is not invariant under the
    /// adjoints of the second.
    FirstUnitaryNotReducing,
    /// The second family's unitary part inside the first family's shift part
    /// is not invariant under the adjoints of the first.
    SecondUnitaryNotReducing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureWitness {
    pub condition: Condition,
    /// Inside the subspace that should be reducing.
    pub element: PairElem,
    pub family: Family,
    pub label: usize,
    /// `element = W_label image` with `image` outside the subspace.
    pub image: PairElem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PartKind {
    Uu,
    Us,
    Su,
    Ss,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlocinskiResult {
    pub exists: bool,
    pub order: Order,
    /// S and T both unitary. All four parts are empty unless `exists`.
    pub h_uu: PairSubspace,
    /// S unitary, T shift.
    pub h_us: PairSubspace,
    pub h_su: PairSubspace,
    pub h_ss: PairSubspace,
    pub failure_witness: Option<FailureWitness>,
}

impl SlocinskiResult {
    pub fn part_of(&self, x: &PairElem) -> Option<PartKind> {
        [
            (PartKind::Uu, &self.h_uu),
            (PartKind::Us, &self.h_us),
            (PartKind::Su, &self.h_su),
            (PartKind::Ss, &self.h_ss),
        ]
        .into_iter()
        .find(|(_, p)| p.contains(x))
        .map(|(k, _)| k)
    }

    pub fn parts(&self) -> [(PartKind, &PairSubspace); 4] {
        [
            (PartKind::Uu, &self.h_uu),
            (PartKind::Us, &self.h_us),
            (PartKind::Su, &self.h_su),
            (PartKind::Ss, &self.h_ss),
        ]
    }
}

// first node of `inside` whose base vector has a `fam`-predecessor outside
fn pred_escape(cp: &CommutingPair, fam: Family, inside: &[bool], condition: Condition) -> Option<FailureWitness> {
    (0..cp.node_count()).filter(|&b| inside[b]).find_map(|b| {
        let x = PairElem::base(b);
        match cp.pred(fam, &x) {
            Some((label, y)) if !inside[y.node] => Some(FailureWitness {
                condition,
                element: x,
                family: fam,
                label,
                image: y,
            }),
            _ => None,
        }
    })
}

pub fn slocinski(cp: &CommutingPair, order: Order) -> SlocinskiResult {
    let (f1, f2) = order.families();
    let w1 = joint_wold(cp, f1);
    let w2 = joint_wold(cp, f2);
    let count = cp.node_count();
    // Invariance under the forward actions holds for any commuting pair, and
    // T-pred preserves the node of anything with a T-letter, so only base
    // vectors can leave.
    let witness = pred_escape(cp, f2, &w1.unitary, Condition::FirstUnitaryNotReducing).or_else(|| {
        let k: Vec<bool> = (0..count).map(|b| !w1.unitary[b] && w2.unitary[b]).collect();
        pred_escape(cp, f1, &k, Condition::SecondUnitaryNotReducing)
    });
    let (su, tu) = match order {
        Order::St => (&w1.unitary, &w2.unitary),
        Order::Ts => (&w2.unitary, &w1.unitary),
    };
    let part = |s: bool, t: bool| {
        if witness.is_some() {
            PairSubspace::default()
        } else {
            PairSubspace::from_mask((0..count).map(|b| su[b] == s && tu[b] == t))
        }
    };
    SlocinskiResult {
        exists: witness.is_none(),
        order,
        h_uu: part(true, true),
        h_us: part(true, false),
        h_su: part(false, true),
        h_ss: part(false, false),
        failure_witness: witness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub doubly_commuting: bool,
    pub s_unitary_singular: bool,
    pub t_unitary_singular: bool,
    pub s_shift_finite_multiplicity: bool,
    pub n_at_least_2_or_theta_identity: bool,
}

impl HypothesisReport {
    pub fn singular_theorem_applies(&self) -> bool {
        self.s_unitary_singular && self.t_unitary_singular
    }

    pub fn finite_multiplicity_theorem_applies(&self) -> bool {
        self.s_unitary_singular && self.s_shift_finite_multiplicity && self.n_at_least_2_or_theta_identity
    }
}

/// The unitary part of one family is singular: empty for two or more labels,
/// a union of finite orbits for one label.
pub fn unitary_singular(cp: &CommutingPair, family: Family) -> bool {
    let jw = joint_wold(cp, family);
    if jw.unitary_nodes().is_empty() {
        return true;
    }
    cp.labels(family) == 1 && unitary_orbits_finite(cp, &jw)
}

pub fn check_hypotheses(cp: &CommutingPair) -> HypothesisReport {
    HypothesisReport {
        doubly_commuting: check_doubly_commute(cp, cp.default_depth()).is_empty(),
        s_unitary_singular: unitary_singular(cp, Family::S),
        t_unitary_singular: unitary_singular(cp, Family::T),
        s_shift_finite_multiplicity: shift_multiplicity(cp, Family::S) != Multiplicity::Infinite,
        n_at_least_2_or_theta_identity: cp.n() >= 2 || cp.theta().is_identity(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Statement {
    DoublyCommutingTheorem,
    SingularTheorem,
    FiniteMultiplicityTheorem,
    /// Singular unitary part of S reduces T.
    SingularReduces,
    /// `H_u` of either family is invariant under the other.
    UnitaryInvariant,
    /// For at least two labels, the periodic span is invariant under the
    /// other family's adjoints.
    PeriodicAdjointInvariant,
    /// A finite-multiplicity shift cannot commute with a row-unitary of two
    /// or more labels on a nonzero space.
    ShiftUnitaryTrivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub statement: Statement,
    pub witness: Option<PairElem>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImplicationReport {
    pub hypotheses: HypothesisReport,
    /// Statements whose hypotheses held and were therefore tested.
    pub checked: Vec<Statement>,
    pub violations: Vec<Violation>,
}

impl ImplicationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Depth of the bounded closure checks: `max(4, |base| + 2)`.
pub fn check_depth(cp: &CommutingPair) -> usize {
    (cp.node_count() + 2).max(4)
}

pub fn verify_theorem_implications(cp: &CommutingPair) -> ImplicationReport {
    let hyp = check_hypotheses(cp);
    let st = slocinski(cp, Order::St);
    let mut checked = Vec::new();
    let mut violations = Vec::new();
    let mut need_exists = |stmt: Statement, holds: bool, checked: &mut Vec<Statement>| {
        if holds {
            checked.push(stmt);
            if !st.exists {
                violations.push(Violation {
                    statement: stmt,
                    witness: st.failure_witness.as_ref().map(|w| w.element.clone()),
                    detail: "hypotheses hold but the decomposition does not exist".into(),
                });
            }
        }
    };
    need_exists(Statement::DoublyCommutingTheorem, hyp.doubly_commuting, &mut checked);
    need_exists(Statement::SingularTheorem, hyp.singular_theorem_applies(), &mut checked);
    need_exists(
        Statement::FiniteMultiplicityTheorem,
        hyp.finite_multiplicity_theorem_applies(),
        &mut checked,
    );

    let ws = joint_wold(cp, Family::S);
    let wt = joint_wold(cp, Family::T);
    if hyp.s_unitary_singular {
        checked.push(Statement::SingularReduces);
        if let Some(w) = pred_escape(cp, Family::T, &ws.unitary, Condition::FirstUnitaryNotReducing) {
            violations.push(Violation {
                statement: Statement::SingularReduces,
                witness: Some(w.element),
                detail: format!("T-pred leaves the unitary part of S via t{}", w.label),
            });
        }
    }

    let elems = cp.enumerate(check_depth(cp));
    checked.push(Statement::UnitaryInvariant);
    'inv: for (wold, fam) in [(&ws, Family::T), (&wt, Family::S)] {
        for x in elems.iter().filter(|x| wold.is_unitary(x)) {
            for l in 1..=cp.labels(fam) {
                let y = cp.apply(fam, l, x).expect("label in range");
                if !wold.is_unitary(&y) {
                    violations.push(Violation {
                        statement: Statement::UnitaryInvariant,
                        witness: Some(x.clone()),
                        detail: format!("{fam:?}-generator {l} leaves the unitary part"),
                    });
                    break 'inv;
                }
            }
        }
    }

    if cp.m() >= 2 {
        checked.push(Statement::PeriodicAdjointInvariant);
        for x in elems.iter().filter(|x| is_periodic(cp, Family::S, x)) {
            if let Some((l, y)) = cp.t_pred(x) {
                if !is_periodic(cp, Family::S, &y) {
                    violations.push(Violation {
                        statement: Statement::PeriodicAdjointInvariant,
                        witness: Some(x.clone()),
                        detail: format!("T-pred via t{l} is not S-periodic"),
                    });
                    break;
                }
            }
        }
    }

    let s_pure_shift = ws.unitary_nodes().is_empty();
    let t_row_unitary = wt.roots().is_empty();
    if s_pure_shift && t_row_unitary && cp.n() >= 2 && shift_multiplicity(cp, Family::S) != Multiplicity::Infinite {
        checked.push(Statement::ShiftUnitaryTrivial);
        if cp.node_count() > 0 {
            violations.push(Violation {
                statement: Statement::ShiftUnitaryTrivial,
                witness: Some(PairElem::base(0)),
                detail: "nonzero space with S a finite-multiplicity shift and T row-unitary".into(),
            });
        }
    }

    ImplicationReport {
        hypotheses: hyp,
        checked,
        violations,
    }
}
