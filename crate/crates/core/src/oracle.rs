//! Independent verification on finite truncations.
//!
//! Generators become 0/1 matrices on the span of all names of length at most
//! `depth`, each column holding at most one 1. Identities are checked with
//! exact integer arithmetic on *interior* vectors only: those far enough from
//! the truncation boundary that every operator word in the identity, and
//! every adjoint, stays inside the basis.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::pair::{check_doubly_commute, CommutingPair, PairElem, PairPresentation};
use crate::presentation::{Elem, Presentation};
use crate::slocinski::{joint_wold, shift_multiplicity, slocinski, Multiplicity, Order};
use crate::space::pair_presentations;
use crate::wold::{self, Part};
use crate::words::{Family, Theta};

pub const MODEL_BUDGET: u128 = 100_000;

/// Default verification depth: `max(4, |base| + 2)`.
pub fn default_depth(base: usize) -> usize {
    (base + 2).max(4)
}

#[derive(Debug, Clone)]
pub struct OracleModel<E> {
    pub depth: usize,
    pub basis: Vec<E>,
    /// Human-readable name of each basis vector.
    pub names: Vec<String>,
    pub generators: Vec<(Family, usize)>,
    /// Per generator, column -> row of its single 1 (None: image outside
    /// the truncation).
    pub matrices: Vec<Vec<Option<usize>>>,
    lens: Vec<usize>,
    /// How much longer an adjoint image can be than its argument.
    growth: usize,
    node_count: usize,
    theta: Option<Theta>,
    canonical: Vec<bool>,
    /// Claimed unitary part of each family, as a basis mask.
    unitary: Vec<(Family, Vec<bool>)>,
    /// Per generator, row -> columns mapped onto it.
    transposes: Vec<Vec<Vec<usize>>>,
    forced_interior: BTreeSet<usize>,
}

impl<E: Clone + Eq + Hash> OracleModel<E> {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.basis.iter().position(|y| y == x)
    }

    /// `x` stays inside the basis under `forward` generator steps and
    /// `adjoint` adjoint steps.
    pub fn interior(&self, x: usize, forward: usize, adjoint: usize) -> bool {
        self.forced_interior.contains(&x) || self.lens[x] + forward + adjoint * self.growth <= self.depth
    }

    /// Count of columns interior for one forward step.
    pub fn interior_columns(&self) -> usize {
        (0..self.size()).filter(|&x| self.interior(x, 1, 0)).count()
    }

    /// Marks a vector as interior regardless of its length. Used to seed
    /// faults: a boundary vector treated as interior must be caught.
    pub fn force_interior(&mut self, x: usize) {
        self.forced_interior.insert(x);
    }

    fn gen(&self, f: Family, label: usize) -> usize {
        self.generators
            .iter()
            .position(|&g| g == (f, label))
            .expect("generator exists")
    }

    fn family_gens(&self, f: Family) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| self.generators[g].0 == f)
            .collect()
    }

    fn families(&self) -> Vec<Family> {
        if self.theta.is_some() {
            vec![Family::S, Family::T]
        } else {
            vec![Family::S]
        }
    }

    fn image(&self, g: usize, x: usize) -> Option<usize> {
        self.matrices[g][x]
    }

    fn preimages(&self, g: usize, x: usize) -> &[usize] {
        &self.transposes[g][x]
    }

    /// `Σ_{g in f} G G^T` applied to `e_x`, as a multiset of rows.
    fn family_preimages(&self, f: Family, x: usize) -> Vec<(usize, usize)> {
        self.family_gens(f)
            .into_iter()
            .flat_map(|g| self.preimages(g, x).iter().map(move |&y| (g, y)))
            .collect()
    }
}

struct Builder<E> {
    depth: usize,
    generators: Vec<(Family, usize)>,
    growth: usize,
    node_count: usize,
    theta: Option<Theta>,
    _e: std::marker::PhantomData<E>,
}

impl<E: Clone + Eq + Hash + Ord> Builder<E> {
    fn build(
        self,
        seeds: Vec<E>,
        len: impl Fn(&E) -> usize,
        apply: impl Fn(Family, usize, &E) -> E,
        name: impl Fn(&E) -> String,
        canonical: impl Fn(&E) -> bool,
    ) -> Result<OracleModel<E>> {
        let mut seen: HashSet<E> = seeds.iter().cloned().collect();
        let mut frontier = seeds;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for &(f, l) in &self.generators {
                    let y = apply(f, l, x);
                    if len(&y) <= self.depth && seen.insert(y.clone()) {
                        if seen.len() as u128 > MODEL_BUDGET {
                            return Err(Error::Resource {
                                what: "oracle basis",
                                needed: seen.len() as u128,
                                budget: MODEL_BUDGET,
                            });
                        }
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut basis: Vec<E> = seen.into_iter().collect();
        basis.sort();
        let index: HashMap<&E, usize> = basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let matrices: Vec<Vec<Option<usize>>> = self
            .generators
            .iter()
            .map(|&(f, l)| basis.iter().map(|x| index.get(&apply(f, l, x)).copied()).collect())
            .collect();
        let mut transposes = vec![vec![Vec::new(); basis.len()]; matrices.len()];
        for (g, col) in matrices.iter().enumerate() {
            for (x, row) in col.iter().enumerate() {
                if let Some(r) = row {
                    transposes[g][*r].push(x);
                }
            }
        }
        Ok(OracleModel {
            depth: self.depth,
            names: basis.iter().map(&name).collect(),
            lens: basis.iter().map(&len).collect(),
            canonical: basis.iter().map(&canonical).collect(),
            basis,
            generators: self.generators,
            matrices,
            growth: self.growth,
            node_count: self.node_count,
            theta: self.theta,
            unitary: Vec::new(),
            transposes,
            forced_interior: BTreeSet::new(),
        })
    }
}

pub fn materialize_single(p: &Presentation, depth: usize) -> Result<OracleModel<Elem>> {
    if depth == 0 {
        return Err(Error::Validation("oracle depth must be at least 1".into()));
    }
    let builder = Builder {
        depth,
        generators: (1..=p.m()).map(|i| (Family::S, i)).collect(),
        growth: 0,
        node_count: p.node_count(),
        theta: None,
        _e: std::marker::PhantomData,
    };
    let mut model = builder.build(
        (0..p.node_count()).map(Elem::base).collect(),
        |x| x.prefix.len(),
        |_, i, x| p.apply_unchecked(i, x),
        |x| p.display(x),
        |x| p.is_canonical(x),
    )?;
    let mask = model
        .basis
        .iter()
        .map(|x| wold::membership(p, x) == Part::Unitary)
        .collect();
    model.unitary.push((Family::S, mask));
    Ok(model)
}

/// Works for any pair presentation; the claimed unitary parts are attached
/// only when the pair commutes.
pub fn materialize_pair(pp: &PairPresentation, depth: usize) -> Result<OracleModel<PairElem>> {
    if depth == 0 {
        return Err(Error::Validation("oracle depth must be at least 1".into()));
    }
    let mut generators: Vec<(Family, usize)> = (1..=pp.m()).map(|i| (Family::S, i)).collect();
    generators.extend((1..=pp.n()).map(|j| (Family::T, j)));
    let builder = Builder {
        depth,
        generators,
        // a predecessor walk crosses at most |base| - 1 edges of the other
        // family before finding an incoming edge of its own
        growth: pp.node_count().saturating_sub(1).max(1),
        node_count: pp.node_count(),
        theta: Some(pp.theta().clone()),
        _e: std::marker::PhantomData,
    };
    let mut model = builder.build(
        (0..pp.node_count()).map(PairElem::base).collect(),
        PairElem::len,
        |f, l, x| pp.apply_raw(f, l, x),
        |x| pp.display(x),
        |x| pp.is_canonical(x),
    )?;
    if let Ok(cp) = CommutingPair::new(pp.clone()) {
        for f in [Family::S, Family::T] {
            let jw = joint_wold(&cp, f);
            let mask = model.basis.iter().map(|x| jw.is_unitary(x)).collect();
            model.unitary.push((f, mask));
        }
    }
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// A basis vector whose name is not canonical.
    NonCanonical,
    /// `G^T G = I` fails: an interior column with no image.
    MissingImage,
    /// `G_i^T G_j = δ_ij I` fails: two columns share a row.
    Collision,
    /// `Σ G G^T = I` fails on the claimed unitary part.
    RowDeficit,
    /// `S_i T_j = T_{j'} S_{i'}` fails.
    Commutation,
    DoublyFirst,
    DoublySecond,
}

impl Relation {
    pub fn is_doubly(self) -> bool {
        matches!(self, Relation::DoublyFirst | Relation::DoublySecond)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub relation: Relation,
    pub element: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub findings: Vec<Finding>,
}

impl RelationReport {
    /// Every row-isometry and commutation identity holds.
    pub fn is_clean(&self) -> bool {
        self.findings.iter().all(|f| f.relation.is_doubly())
    }

    /// The two double-commutation displays hold as well.
    pub fn doubly_holds(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn count(&self, r: Relation) -> usize {
        self.findings.iter().filter(|f| f.relation == r).count()
    }
}

pub fn verify_relations<E: Clone + Eq + Hash>(model: &OracleModel<E>) -> RelationReport {
    let mut findings = Vec::new();
    let mut push = |relation, x: usize, detail: String| {
        findings.push(Finding {
            relation,
            element: model.names[x].clone(),
            detail,
        })
    };
    for x in 0..model.size() {
        if !model.canonical[x] {
            push(Relation::NonCanonical, x, "name is not in normal form".into());
        }
    }
    for (g, &(f, l)) in model.generators.iter().enumerate() {
        for x in 0..model.size() {
            if model.interior(x, 1, 0) && model.image(g, x).is_none() {
                push(Relation::MissingImage, x, format!("{f:?}{l} has no image in the basis"));
            }
        }
    }
    for f in model.families() {
        for x in 0..model.size() {
            let pre = model.family_preimages(f, x);
            if pre.len() > 1 {
                let desc: Vec<String> = pre
                    .iter()
                    .map(|&(g, y)| format!("{:?}{} {}", f, model.generators[g].1, model.names[y]))
                    .collect();
                push(Relation::Collision, x, format!("hit by {}", desc.join(", ")));
            }
        }
    }
    for (f, mask) in &model.unitary {
        for (x, &claimed) in mask.iter().enumerate() {
            if claimed && model.interior(x, 0, 1) && model.family_preimages(*f, x).is_empty() {
                push(
                    Relation::RowDeficit,
                    x,
                    format!("claimed {f:?}-unitary but outside every range"),
                );
            }
        }
    }
    if let Some(th) = &model.theta {
        let (m, n) = (th.m(), th.n());
        for x in 0..model.size() {
            for i in 1..=m {
                for j in 1..=n {
                    let (i2, j2) = th.apply(i, j);
                    let (si, tj, si2, tj2) = (
                        model.gen(Family::S, i),
                        model.gen(Family::T, j),
                        model.gen(Family::S, i2),
                        model.gen(Family::T, j2),
                    );
                    if model.interior(x, 2, 0) {
                        let lhs = model.image(tj, x).and_then(|y| model.image(si, y));
                        let rhs = model.image(si2, x).and_then(|y| model.image(tj2, y));
                        if lhs != rhs {
                            push(Relation::Commutation, x, format!("s{i} t{j} vs t{j2} s{i2}"));
                        }
                    }
                    if !model.interior(x, 1, 1) {
                        continue;
                    }
                    // T_j^T S_i x = Σ_{θ(i,l) = (k,j)} S_k T_l^T x
                    let mut lhs: Vec<usize> = model
                        .image(si, x)
                        .map(|y| model.preimages(tj, y).to_vec())
                        .unwrap_or_default();
                    let mut rhs: Vec<usize> = Vec::new();
                    for l in 1..=n {
                        let (k, jj) = th.apply(i, l);
                        if jj == j {
                            for &y in model.preimages(model.gen(Family::T, l), x) {
                                rhs.extend(model.image(model.gen(Family::S, k), y));
                            }
                        }
                    }
                    lhs.sort_unstable();
                    rhs.sort_unstable();
                    if lhs != rhs {
                        push(Relation::DoublyFirst, x, format!("t{j}* s{i}"));
                    }
                    // S_i^T T_j x = Σ_{θ(i,k) = (l,j)} T_k S_l^T x
                    let mut lhs: Vec<usize> = model
                        .image(tj, x)
                        .map(|y| model.preimages(si, y).to_vec())
                        .unwrap_or_default();
                    let mut rhs: Vec<usize> = Vec::new();
                    for l in 1..=m {
                        let (ii, k) = th.inverse(l, j);
                        if ii == i {
                            for &y in model.preimages(model.gen(Family::S, l), x) {
                                rhs.extend(model.image(model.gen(Family::T, k), y));
                            }
                        }
                    }
                    lhs.sort_unstable();
                    rhs.sort_unstable();
                    if lhs != rhs {
                        push(Relation::DoublySecond, x, format!("s{i}* t{j}"));
                    }
                }
            }
        }
    }
    RelationReport { findings }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Claim {
    Invariant(Family),
    Reducing(Family),
    /// `Σ G G^T Q = Q`.
    UnitaryOn(Family),
    /// Every adjoint chain from the subspace ends at a wandering vector.
    ShiftOn(Family),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimFailure {
    pub claim: Claim,
    pub element: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SubspaceReport {
    pub failures: Vec<ClaimFailure>,
}

impl SubspaceReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks each claim about the span of the basis vectors selected by `member`.
pub fn verify_subspace<E: Clone + Eq + Hash>(
    model: &OracleModel<E>,
    member: &[bool],
    claims: &[Claim],
) -> SubspaceReport {
    let mut failures = Vec::new();
    for &claim in claims {
        let fail = |x: usize, detail: String| ClaimFailure {
            claim,
            element: model.names[x].clone(),
            detail,
        };
        let (f, forward, adjoint) = match claim {
            Claim::Invariant(f) => (f, true, false),
            Claim::Reducing(f) => (f, true, true),
            Claim::UnitaryOn(f) | Claim::ShiftOn(f) => (f, false, false),
        };
        let gens = model.family_gens(f);
        for x in (0..model.size()).filter(|&x| member[x]) {
            if forward && model.interior(x, 1, 0) {
                for &g in &gens {
                    if let Some(y) = model.image(g, x) {
                        if !member[y] {
                            failures.push(fail(x, format!("image {} leaves", model.names[y])));
                        }
                    }
                }
            }
            if adjoint && model.interior(x, 0, 1) {
                for (_, y) in model.family_preimages(f, x) {
                    if !member[y] {
                        failures.push(fail(x, format!("adjoint image {} leaves", model.names[y])));
                    }
                }
            }
            if let Claim::UnitaryOn(_) = claim {
                if model.interior(x, 0, 1) && model.family_preimages(f, x).is_empty() {
                    failures.push(fail(x, "outside every range".into()));
                }
            }
            if let Claim::ShiftOn(_) = claim {
                // the chain ends within |base| growth steps for a shift
                if !model.interior(x, 0, model.node_count.max(1)) {
                    continue;
                }
                let mut seen = HashSet::new();
                let mut cur = x;
                loop {
                    if !seen.insert(cur) {
                        failures.push(fail(x, "adjoint chain cycles".into()));
                        break;
                    }
                    match model.family_preimages(f, cur).first() {
                        Some(&(_, y)) => cur = y,
                        None => {
                            if !model.interior(cur, 0, 1) {
                                failures.push(fail(x, "adjoint chain leaves the truncation".into()));
                            }
                            break;
                        }
                    }
                }
            }
        }
    }
    SubspaceReport { failures }
}

/// Membership mask of a single-family Wold part.
pub fn single_mask(model: &OracleModel<Elem>, p: &Presentation, part: Part) -> Vec<bool> {
    model.basis.iter().map(|x| wold::membership(p, x) == part).collect()
}

/// Checks the Wold decomposition of a single presentation: each part is
/// reducing and of the advertised type.
pub fn verify_wold(model: &OracleModel<Elem>, p: &Presentation) -> SubspaceReport {
    let mut out = SubspaceReport::default();
    let w = wold::wold(p);
    let u: Vec<bool> = model.basis.iter().map(|x| w.membership(x) == Part::Unitary).collect();
    let s: Vec<bool> = u.iter().map(|b| !b).collect();
    out.failures
        .extend(verify_subspace(model, &u, &[Claim::Reducing(Family::S), Claim::UnitaryOn(Family::S)]).failures);
    out.failures
        .extend(verify_subspace(model, &s, &[Claim::Reducing(Family::S), Claim::ShiftOn(Family::S)]).failures);
    // the two descriptions agree with the per-vector verdict
    for (k, x) in model.basis.iter().enumerate() {
        if w.unitary_part.contains(p, x) != u[k] || w.shift_part.contains(p, x) != s[k] {
            out.failures.push(ClaimFailure {
                claim: Claim::Reducing(Family::S),
                element: model.names[k].clone(),
                detail: "subspace description disagrees with membership".into(),
            });
        }
    }
    out
}

/// Checks that the four parts of a decomposition partition the basis, reduce
/// both families and carry the advertised types.
pub fn verify_slocinski(model: &OracleModel<PairElem>, cp: &CommutingPair, order: Order) -> SubspaceReport {
    let r = slocinski(cp, order);
    let mut out = SubspaceReport::default();
    if !r.exists {
        return out;
    }
    for (k, x) in model.basis.iter().enumerate() {
        let hits = r.parts().iter().filter(|(_, p)| p.contains(x)).count();
        if hits != 1 {
            out.failures.push(ClaimFailure {
                claim: Claim::Reducing(Family::S),
                element: model.names[k].clone(),
                detail: format!("lies in {hits} parts"),
            });
        }
    }
    for (kind, part) in r.parts() {
        use crate::slocinski::PartKind::*;
        let (s_claim, t_claim) = match kind {
            Uu => (Claim::UnitaryOn(Family::S), Claim::UnitaryOn(Family::T)),
            Us => (Claim::UnitaryOn(Family::S), Claim::ShiftOn(Family::T)),
            Su => (Claim::ShiftOn(Family::S), Claim::UnitaryOn(Family::T)),
            Ss => (Claim::ShiftOn(Family::S), Claim::ShiftOn(Family::T)),
        };
        let mask: Vec<bool> = model.basis.iter().map(|x| part.contains(x)).collect();
        out.failures.extend(
            verify_subspace(
                model,
                &mask,
                &[Claim::Reducing(Family::S), Claim::Reducing(Family::T), s_claim, t_claim],
            )
            .failures,
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Property {
    Commuting,
    DoublyCommuting,
    /// The decomposition (S first) does not exist.
    NoSlocinski,
    /// Nonzero space, S a shift of finite multiplicity, T row-unitary.
    SShiftTUnitary,
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commuting" => Ok(Property::Commuting),
            "doubly-commuting" => Ok(Property::DoublyCommuting),
            "no-slocinski" => Ok(Property::NoSlocinski),
            "s-shift-t-unitary" => Ok(Property::SShiftTUnitary),
            _ => Err(Error::Validation(format!(
                "unknown property {s:?}; expected commuting, doubly-commuting, no-slocinski or s-shift-t-unitary"
            ))),
        }
    }
}

pub fn has_property(cp: &CommutingPair, prop: Property) -> bool {
    match prop {
        Property::Commuting => true,
        Property::DoublyCommuting => check_doubly_commute(cp, cp.default_depth()).is_empty(),
        Property::NoSlocinski => !slocinski(cp, Order::St).exists,
        Property::SShiftTUnitary => {
            cp.node_count() > 0
                && joint_wold(cp, Family::S).unitary_nodes().is_empty()
                && shift_multiplicity(cp, Family::S) != Multiplicity::Infinite
                && joint_wold(cp, Family::T).roots().is_empty()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchSpace {
    pub max_base: usize,
    pub thetas: Vec<Theta>,
}

impl SearchSpace {
    /// Every θ on `m × n` labels.
    pub fn all_thetas(max_base: usize, m: usize, n: usize) -> Result<Self> {
        Ok(SearchSpace {
            max_base,
            thetas: Theta::all(m, n)?,
        })
    }

    pub fn identity(max_base: usize, m: usize, n: usize) -> Self {
        SearchSpace {
            max_base,
            thetas: vec![Theta::identity(m, n)],
        }
    }
}

/// Every commuting pair in the space with the property, in enumeration order.
pub fn search(space: &SearchSpace, prop: Property, exec: Exec) -> Result<Vec<CommutingPair>> {
    let candidates = pair_presentations(space.max_base, &space.thetas)?;
    let hits = exec.map(&candidates, |pp| {
        CommutingPair::new(pp.clone()).ok().filter(|cp| has_property(cp, prop))
    });
    Ok(hits.into_iter().flatten().collect())
}

/// A seeded corruption together with whether the checks caught it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaultOutcome {
    pub fault: Fault,
    pub detected: bool,
    pub by: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Fault {
    /// Two S-edges into one node.
    DuplicateInEdge,
    /// Two T-edges into one node of a pair.
    DuplicateInEdgePair,
    /// Two quadruples with the same image.
    NonBijectiveTheta,
    /// A boundary vector marked interior.
    BoundaryAsInterior,
    /// A basis name that is not in normal form.
    NonCanonicalElement,
    /// Claimed unitary part that includes a wandering vector.
    WrongUnitaryClaim,
}

pub const FAULTS: [Fault; 6] = [
    Fault::DuplicateInEdge,
    Fault::DuplicateInEdgePair,
    Fault::NonBijectiveTheta,
    Fault::BoundaryAsInterior,
    Fault::NonCanonicalElement,
    Fault::WrongUnitaryClaim,
];

pub fn inject(fault: Fault) -> FaultOutcome {
    let (detected, by) = match fault {
        Fault::DuplicateInEdge => {
            let p =
                Presentation::from_names(2, &["a", "b"], &[("a", 1, "b"), ("b", 2, "b")]).expect("structurally fine");
            let model = materialize_single(&p, 3).expect("small");
            let rel = verify_relations(&model);
            (
                !p.is_valid() && rel.count(Relation::Collision) > 0,
                "validate + collision".into(),
            )
        }
        Fault::DuplicateInEdgePair => {
            let pp = PairPresentation::from_names(
                Theta::identity(1, 2),
                &["a", "b"],
                &[],
                &[("a", 1, "b"), ("a", 2, "a"), ("b", 1, "a")],
            );
            let detected = match pp {
                Err(_) => true,
                Ok(pp) => {
                    let model = materialize_pair(&pp, 3).expect("small");
                    !pp.validate().is_valid()
                        && CommutingPair::new(pp.clone()).is_err()
                        && verify_relations(&model).count(Relation::Collision) > 0
                }
            };
            (detected, "validate + commute check + collision".into())
        }
        Fault::NonBijectiveTheta => (
            Theta::new(1, 2, &[[1, 1, 1, 1], [1, 2, 1, 1]]).is_err(),
            "theta bijection check".into(),
        ),
        Fault::BoundaryAsInterior => {
            let p = Presentation::free(2, &["b"]).expect("free");
            let mut model = materialize_single(&p, 2).expect("small");
            let edge = (0..model.size()).find(|&x| !model.interior(x, 1, 0)).expect("boundary");
            model.force_interior(edge);
            (
                verify_relations(&model).count(Relation::MissingImage) > 0,
                "missing image".into(),
            )
        }
        Fault::NonCanonicalElement => {
            let p = Presentation::from_names(1, &["a", "b"], &[("a", 1, "b")]).expect("fine");
            let bad = Elem::new(vec![1], 0);
            let mut model = materialize_single(&p, 2).expect("small");
            model.canonical.push(p.is_canonical(&bad));
            model.names.push(p.display(&bad));
            model.lens.push(1);
            model.basis.push(bad);
            for col in model.matrices.iter_mut() {
                col.push(None);
            }
            for t in model.transposes.iter_mut() {
                t.push(Vec::new());
            }
            if let Some(mask) = model.unitary.first_mut() {
                mask.1.push(false);
            }
            (
                verify_relations(&model).count(Relation::NonCanonical) > 0,
                "canonical form check".into(),
            )
        }
        Fault::WrongUnitaryClaim => {
            let p = Presentation::from_names(2, &["b", "c"], &[("b", 1, "b")]).expect("fine");
            let mut model = materialize_single(&p, 3).expect("small");
            let c = model.index_of(&Elem::base(1)).expect("base");
            model.unitary[0].1[c] = true;
            (
                verify_relations(&model).count(Relation::RowDeficit) > 0,
                "row-sum deficit".into(),
            )
        }
    };
    FaultOutcome { fault, detected, by }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_counts() {
        let p = Presentation::free(2, &["b"]).unwrap();
        let m = materialize_single(&p, 2).unwrap();
        assert_eq!(m.size(), 7);
        assert_eq!(m.interior_columns(), 3);
        assert!(verify_relations(&m).doubly_holds());
        let m4 = materialize_single(&p, 4).unwrap();
        assert!(verify_relations(&m4).is_clean());
        assert!(verify_wold(&m4, &p).is_clean());
    }

    #[test]
    fn self_loop_is_one_by_one() {
        let p = Presentation::from_names(1, &["b"], &[("b", 1, "b")]).unwrap();
        let m = materialize_single(&p, 3).unwrap();
        assert_eq!(m.size(), 1);
        assert_eq!(m.matrices, vec![vec![Some(0)]]);
    }

    #[test]
    fn matrices_agree_with_apply() {
        let p = Presentation::from_names(2, &["b", "c"], &[("b", 1, "b")]).unwrap();
        let m = materialize_single(&p, 3).unwrap();
        assert_eq!(m.basis, p.enumerate(3));
        for (g, &(_, i)) in m.generators.iter().enumerate() {
            for (x, e) in m.basis.iter().enumerate() {
                let y = p.apply(i, e).unwrap();
                assert_eq!(m.matrices[g][x], m.index_of(&y));
            }
        }
        assert!(verify_relations(&m).is_clean());
        assert!(verify_wold(&m, &p).is_clean());
    }

    #[test]
    fn single_fresh_vector_is_not_reducing() {
        let p = Presentation::free(1, &["b"]).unwrap();
        let m = materialize_single(&p, 3).unwrap();
        let mut mask = vec![false; m.size()];
        mask[m.index_of(&Elem::new(vec![1], 0)).unwrap()] = true;
        let r = verify_subspace(&m, &mask, &[Claim::Reducing(Family::S)]);
        assert!(!r.is_clean());
    }

    #[test]
    fn interiors_nest() {
        let p = Presentation::from_names(2, &["b", "c"], &[("b", 1, "c")]).unwrap();
        let small = materialize_single(&p, 2).unwrap();
        let big = materialize_single(&p, 3).unwrap();
        for (x, e) in small.basis.iter().enumerate() {
            let y = big.index_of(e).unwrap();
            assert!(!small.interior(x, 1, 0) || big.interior(y, 1, 0));
        }
    }

    #[test]
    fn every_fault_is_caught() {
        for f in FAULTS {
            let o = inject(f);
            assert!(o.detected, "{f:?} slipped through");
        }
    }

    #[test]
    fn doubly_displays_match_symbolic_check() {
        for th in Theta::all(2, 1).unwrap() {
            for pp in pair_presentations(1, &[th]).unwrap() {
                let Ok(cp) = CommutingPair::new(pp.clone()) else {
                    continue;
                };
                let model = materialize_pair(&pp, 4).unwrap();
                let rel = verify_relations(&model);
                assert!(rel.is_clean(), "{:?}", rel.findings);
                let sym = check_doubly_commute(&cp, 3).is_empty();
                assert_eq!(rel.doubly_holds(), sym, "{pp:?}");
            }
        }
    }
}
