//! Input documents, report rendering and the command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lebesgue::classify_unitary;
use crate::oracle::{
    default_depth, materialize_pair, materialize_single, search, verify_relations, verify_slocinski, verify_wold,
    ClaimFailure, Finding, Property, SearchSpace,
};
use crate::pair::{check_doubly_commute, check_theta_commute, CommutingPair, PairPresentation};
use crate::presentation::{Elem, Presentation};
use crate::slocinski::{
    check_hypotheses, joint_wold, shift_multiplicity, slocinski, HypothesisReport, Order, PairSubspace,
};
use crate::wold::{self, Closure, SubspaceDesc};
use crate::words::{Family, Theta};

pub type Edge = (String, usize, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<[usize; 4]>>,
    pub base: Vec<String>,
    pub s_edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_edges: Option<Vec<Edge>>,
}

#[derive(Debug, Clone)]
pub enum Built {
    Single(Presentation),
    Pair(PairPresentation),
}

pub fn parse(text: &str) -> Result<InputDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn render(doc: &InputDocument) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

fn edge_refs(edges: &[Edge]) -> Vec<(&str, usize, &str)> {
    edges.iter().map(|(a, l, b)| (a.as_str(), *l, b.as_str())).collect()
}

impl InputDocument {
    pub fn build(&self) -> Result<Built> {
        let names: Vec<&str> = self.base.iter().map(String::as_str).collect();
        match (self.n, &self.theta) {
            (None, None) => {
                if self.t_edges.is_some() {
                    return Err(Error::Validation("t_edges given without n and theta".into()));
                }
                Ok(Built::Single(Presentation::from_names(
                    self.m,
                    &names,
                    &edge_refs(&self.s_edges),
                )?))
            }
            (Some(n), Some(quads)) => {
                let theta = Theta::new(self.m, n, quads)?;
                let t = self.t_edges.clone().unwrap_or_default();
                Ok(Built::Pair(PairPresentation::from_names(
                    theta,
                    &names,
                    &edge_refs(&self.s_edges),
                    &edge_refs(&t),
                )?))
            }
            (Some(_), None) => Err(Error::Validation("n given without theta".into())),
            (None, Some(_)) => Err(Error::Validation("theta given without n".into())),
        }
    }

    pub fn from_pair(pp: &PairPresentation) -> Self {
        let names = pp.node_names();
        let edges = |p: &Presentation| -> Vec<Edge> {
            p.edge_list()
                .into_iter()
                .map(|(a, l, b)| (names[a].clone(), l, names[b].clone()))
                .collect()
        };
        InputDocument {
            m: pp.m(),
            n: Some(pp.n()),
            theta: Some(pp.theta().quads()),
            base: names.to_vec(),
            s_edges: edges(pp.s_family()),
            t_edges: Some(edges(pp.t_family())),
        }
    }
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per base node, solid `s i` edges and dashed `t j` edges.
pub fn export_dot(built: &Built) -> String {
    let (names, s, t) = match built {
        Built::Single(p) => (p.node_names(), p, None),
        Built::Pair(pp) => (pp.node_names(), pp.s_family(), Some(pp.t_family())),
    };
    let mut out = String::from("digraph presentation {\n");
    for name in names {
        let _ = writeln!(out, "  {};", dot_id(name));
    }
    for (a, l, b) in s.edge_list() {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"s {l}\", style=solid];",
            dot_id(&names[a]),
            dot_id(&names[b])
        );
    }
    if let Some(t) = t {
        for (a, l, b) in t.edge_list() {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"t {l}\", style=dashed];",
                dot_id(&names[a]),
                dot_id(&names[b])
            );
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Parser)]
#[command(
    name = "permwold",
    version,
    about = "Wold-type decompositions of permutative row-isometries"
)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    St,
    Ts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that each family is a row-isometry (in-degree at most one).
    Validate { file: PathBuf },
    /// Wold decomposition of each family.
    Wold { file: PathBuf },
    /// Lebesgue-Wold structure of the unitary part.
    Classify { file: PathBuf },
    /// Decide θ-commutation of a pair.
    CheckCommute { file: PathBuf },
    /// Decide θ-double commutation of a pair.
    CheckDoubly { file: PathBuf },
    /// Four-fold decomposition of a commuting pair.
    Slocinski {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "st")]
        order: OrderArg,
    },
    /// Verify every claim against truncated 0/1 matrices.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Exhaustive search over small commuting pairs.
    Search {
        #[arg(long)]
        max_base: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Every θ instead of the identity.
        #[arg(long)]
        theta_all: bool,
        #[arg(long)]
        property: String,
    },
    /// Graphviz rendering of the base graph.
    ExportDot { file: PathBuf },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Validation(_) | Error::Precondition(_) => 2,
        Error::Resource { .. } => 3,
        Error::ContractViolation(_) | Error::NotCommuting(_) | Error::Inconsistent(_) => 1,
    }
}

/// A rendered report and the exit code it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn names_of(nodes: &[usize], all: &[String]) -> Vec<String> {
    nodes.iter().map(|&b| all[b].clone()).collect()
}

fn list(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn describe(p: &Presentation, d: &SubspaceDesc) -> String {
    let seeds: Vec<String> = d.seeds.iter().map(|x| p.display(x)).collect();
    match d.closure {
        Closure::Empty => "{0}".into(),
        Closure::FullSpace => "everything".into(),
        Closure::ExplicitFinite => format!("span {}", list(&seeds)),
        Closure::ForwardClosure => format!("forward closure of {}", list(&seeds)),
    }
}

#[derive(Serialize)]
struct ValidateReport {
    kind: &'static str,
    valid: bool,
    issues: Vec<String>,
}

#[derive(Serialize)]
struct SingleWoldReport {
    unitary_part: String,
    shift_part: String,
    wandering: Vec<String>,
    multiplicity: usize,
    row_unitary: bool,
}

#[derive(Serialize)]
struct FamilyWold {
    family: Family,
    unitary_nodes: Vec<String>,
    shift_nodes: Vec<String>,
    roots: Vec<String>,
    multiplicity: String,
}

#[derive(Serialize)]
struct ComponentReport {
    cycle: String,
    kind: String,
    v: Vec<String>,
}

#[derive(Serialize)]
struct ClassifyReport {
    components: Vec<ComponentReport>,
    h_sing: String,
    h_dil: String,
    h_abs: String,
    ph: String,
}

#[derive(Serialize)]
struct PairClassifyReport {
    s_unitary_singular: bool,
    t_unitary_singular: bool,
    s_unitary_nodes: Vec<String>,
    t_unitary_nodes: Vec<String>,
}

#[derive(Serialize)]
struct CommuteReport {
    commuting: bool,
    doubly: Option<bool>,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct SlocinskiReport {
    order: Order,
    exists: bool,
    h_uu: Vec<String>,
    h_us: Vec<String>,
    h_su: Vec<String>,
    h_ss: Vec<String>,
    witness: Option<String>,
    hypotheses: HypothesisReport,
}

#[derive(Serialize)]
struct OracleReport {
    depth: usize,
    basis_size: usize,
    relations_hold: bool,
    doubly_displays_hold: Option<bool>,
    findings: Vec<Finding>,
    subspace_failures: Vec<ClaimFailure>,
}

#[derive(Serialize)]
struct SearchReport {
    property: String,
    matches: usize,
    pairs: Vec<InputDocument>,
}

fn load(path: &PathBuf) -> Result<Built> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)?.build()
}

fn need_pair(built: Built, what: &str) -> Result<PairPresentation> {
    match built {
        Built::Pair(pp) => Ok(pp),
        Built::Single(_) => Err(Error::Validation(format!("{what} needs a pair document (n and theta)"))),
    }
}

fn issues(built: &Built) -> Vec<String> {
    match built {
        Built::Single(p) => p.validate().issues.iter().map(|i| i.to_string()).collect(),
        Built::Pair(pp) => {
            let v = pp.validate();
            v.s.issues
                .iter()
                .map(|i| format!("S: {i}"))
                .chain(v.t.issues.iter().map(|i| format!("T: {i}")))
                .collect()
        }
    }
}

fn ensure_valid(built: &Built) -> Result<()> {
    let found = issues(built);
    if found.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(found.join("; ")))
    }
}

fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce() -> String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        text()
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Runs one command. Errors become the exit code of their kind with the
/// message as output.
pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) if cli.json => {
            let body = serde_json::json!({ "error": e.to_string(), "exit_code": exit_code(&e) });
            Outcome {
                code: exit_code(&e),
                output: format!("{}\n", serde_json::to_string_pretty(&body).expect("json")),
            }
        }
        Err(e) => Outcome {
            code: exit_code(&e),
            output: format!("error: {e}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let json = cli.json;
    match &cli.command {
        Command::Validate { file } => {
            let built = load(file)?;
            let kind = match &built {
                Built::Single(_) => "single",
                Built::Pair(_) => "pair",
            };
            let issues = issues(&built);
            let r = ValidateReport {
                kind,
                valid: issues.is_empty(),
                issues,
            };
            let code = if r.valid { 0 } else { 2 };
            let output = emit(json, &r, || {
                let mut s = format!(
                    "{} presentation: {}\n",
                    r.kind,
                    if r.valid { "valid" } else { "invalid" }
                );
                for i in &r.issues {
                    let _ = writeln!(s, "  {i}");
                }
                s
            });
            Ok(Outcome { code, output })
        }
        Command::Wold { file } => {
            let built = load(file)?;
            ensure_valid(&built)?;
            match built {
                Built::Single(p) => {
                    let w = wold::wold(&p);
                    let r = SingleWoldReport {
                        unitary_part: describe(&p, &w.unitary_part),
                        shift_part: describe(&p, &w.shift_part),
                        wandering: w.wandering.iter().map(|x| p.display(x)).collect(),
                        multiplicity: w.multiplicity,
                        row_unitary: wold::is_row_unitary(&p),
                    };
                    let output = emit(json, &r, || {
                        format!(
                            "H_u: {}\nH_s: {}\nwandering: {}\nmultiplicity: {}\nrow-unitary: {}\n",
                            r.unitary_part,
                            r.shift_part,
                            list(&r.wandering),
                            r.multiplicity,
                            yes(r.row_unitary)
                        )
                    });
                    Ok(Outcome { code: 0, output })
                }
                Built::Pair(pp) => {
                    let cp = CommutingPair::new(pp)?;
                    let names = cp.node_names();
                    let r: Vec<FamilyWold> = [Family::S, Family::T]
                        .into_iter()
                        .map(|f| {
                            let jw = joint_wold(&cp, f);
                            let shift: Vec<usize> = (0..cp.node_count()).filter(|&b| !jw.unitary[b]).collect();
                            FamilyWold {
                                family: f,
                                unitary_nodes: names_of(&jw.unitary_nodes(), names),
                                shift_nodes: names_of(&shift, names),
                                roots: names_of(&jw.roots(), names),
                                multiplicity: shift_multiplicity(&cp, f).to_string(),
                            }
                        })
                        .collect();
                    let output = emit(json, &r, || {
                        let mut s = String::new();
                        for fw in &r {
                            let _ = writeln!(
                                s,
                                "{:?}: unitary over {}, shift over {}, roots {}, multiplicity {}",
                                fw.family,
                                list(&fw.unitary_nodes),
                                list(&fw.shift_nodes),
                                list(&fw.roots),
                                fw.multiplicity
                            );
                        }
                        s
                    });
                    Ok(Outcome { code: 0, output })
                }
            }
        }
        Command::Classify { file } => {
            let built = load(file)?;
            ensure_valid(&built)?;
            match built {
                Built::Single(p) => {
                    let leb = classify_unitary(&p);
                    let r = ClassifyReport {
                        components: leb
                            .components
                            .iter()
                            .map(|c| ComponentReport {
                                cycle: c
                                    .cycle
                                    .iter()
                                    .map(|&(v, l)| format!("{} -s{l}->", p.node_name(v)))
                                    .collect::<Vec<_>>()
                                    .join(" "),
                                kind: format!("{:?}", c.kind),
                                v: c.v.seeds.iter().map(|x: &Elem| p.display(x)).collect(),
                            })
                            .collect(),
                        h_sing: describe(&p, &leb.h_sing),
                        h_dil: describe(&p, &leb.h_dil),
                        h_abs: describe(&p, &leb.h_abs),
                        ph: describe(&p, &leb.ph),
                    };
                    let output = emit(json, &r, || {
                        let mut s = String::new();
                        for (k, c) in r.components.iter().enumerate() {
                            let _ = writeln!(s, "component {k}: {} [{}], V = {}", c.cycle, c.kind, list(&c.v));
                        }
                        let _ = writeln!(
                            s,
                            "H_sing: {}\nH_dil: {}\nH_abs: {}\nPH: {}",
                            r.h_sing, r.h_dil, r.h_abs, r.ph
                        );
                        s
                    });
                    Ok(Outcome { code: 0, output })
                }
                Built::Pair(pp) => {
                    let cp = CommutingPair::new(pp)?;
                    let h = check_hypotheses(&cp);
                    let names = cp.node_names();
                    let r = PairClassifyReport {
                        s_unitary_singular: h.s_unitary_singular,
                        t_unitary_singular: h.t_unitary_singular,
                        s_unitary_nodes: names_of(&joint_wold(&cp, Family::S).unitary_nodes(), names),
                        t_unitary_nodes: names_of(&joint_wold(&cp, Family::T).unitary_nodes(), names),
                    };
                    let output = emit(json, &r, || {
                        format!(
                            "S: unitary over {}, singular: {}\nT: unitary over {}, singular: {}\n",
                            list(&r.s_unitary_nodes),
                            yes(r.s_unitary_singular),
                            list(&r.t_unitary_nodes),
                            yes(r.t_unitary_singular)
                        )
                    });
                    Ok(Outcome { code: 0, output })
                }
            }
        }
        Command::CheckCommute { file } => {
            let pp = need_pair(load(file)?, "check-commute")?;
            let rep = check_theta_commute(&pp)?;
            let r = CommuteReport {
                commuting: rep.is_empty(),
                doubly: None,
                failures: rep.render(&pp).lines().map(String::from).collect(),
            };
            let code = if r.commuting { 0 } else { 1 };
            let output = emit(json, &r, || commute_text(&r));
            Ok(Outcome { code, output })
        }
        Command::CheckDoubly { file } => {
            let pp = need_pair(load(file)?, "check-doubly")?;
            let rep = check_theta_commute(&pp)?;
            let r = if rep.is_empty() {
                let cp = CommutingPair::new(pp.clone())?;
                let d = check_doubly_commute(&cp, cp.default_depth());
                CommuteReport {
                    commuting: true,
                    doubly: Some(d.is_empty()),
                    failures: d.render(&pp).lines().map(String::from).collect(),
                }
            } else {
                CommuteReport {
                    commuting: false,
                    doubly: Some(false),
                    failures: rep.render(&pp).lines().map(String::from).collect(),
                }
            };
            let code = if r.doubly == Some(true) { 0 } else { 1 };
            let output = emit(json, &r, || commute_text(&r));
            Ok(Outcome { code, output })
        }
        Command::Slocinski { file, order } => {
            let cp = CommutingPair::new(need_pair(load(file)?, "slocinski")?)?;
            let order = match order {
                OrderArg::St => Order::St,
                OrderArg::Ts => Order::Ts,
            };
            let res = slocinski(&cp, order);
            let names = cp.node_names();
            let part = |p: &PairSubspace| names_of(&p.nodes, names);
            let r = SlocinskiReport {
                order,
                exists: res.exists,
                h_uu: part(&res.h_uu),
                h_us: part(&res.h_us),
                h_su: part(&res.h_su),
                h_ss: part(&res.h_ss),
                witness: res.failure_witness.as_ref().map(|w| {
                    format!(
                        "{:?}: {} = {}{} {} and {} lies outside",
                        w.condition,
                        cp.display(&w.element),
                        match w.family {
                            Family::S => "s",
                            Family::T => "t",
                        },
                        w.label,
                        cp.display(&w.image),
                        cp.display(&w.image)
                    )
                }),
                hypotheses: check_hypotheses(&cp),
            };
            let code = if r.exists { 0 } else { 1 };
            let output = emit(json, &r, || {
                let mut s = format!("order: {:?}\nexists: {}\n", r.order, yes(r.exists));
                if r.exists {
                    for (label, nodes) in [
                        ("H_uu", &r.h_uu),
                        ("H_us", &r.h_us),
                        ("H_su", &r.h_su),
                        ("H_ss", &r.h_ss),
                    ] {
                        let _ = writeln!(s, "{label}: all T_w S_u e_x with x in {}", list(nodes));
                    }
                }
                if let Some(w) = &r.witness {
                    let _ = writeln!(s, "witness: {w}");
                }
                let h = &r.hypotheses;
                let _ = writeln!(
                    s,
                    "hypotheses: doubly-commuting {}, S unitary singular {}, T unitary singular {}, S shift finite multiplicity {}, n>=2 or theta=id {}",
                    yes(h.doubly_commuting),
                    yes(h.s_unitary_singular),
                    yes(h.t_unitary_singular),
                    yes(h.s_shift_finite_multiplicity),
                    yes(h.n_at_least_2_or_theta_identity)
                );
                s
            });
            Ok(Outcome { code, output })
        }
        Command::Oracle { file, depth } => {
            let built = load(file)?;
            let r = match &built {
                Built::Single(p) => {
                    let d = depth.unwrap_or_else(|| default_depth(p.node_count()));
                    let model = materialize_single(p, d)?;
                    let rel = verify_relations(&model);
                    let sub = if p.is_valid() {
                        verify_wold(&model, p).failures
                    } else {
                        Vec::new()
                    };
                    OracleReport {
                        depth: d,
                        basis_size: model.size(),
                        relations_hold: rel.is_clean(),
                        doubly_displays_hold: None,
                        findings: rel.findings,
                        subspace_failures: sub,
                    }
                }
                Built::Pair(pp) => {
                    let d = depth.unwrap_or_else(|| default_depth(pp.node_count()));
                    let model = materialize_pair(pp, d)?;
                    let rel = verify_relations(&model);
                    let sub = match CommutingPair::new(pp.clone()) {
                        Ok(cp) => {
                            let mut f = verify_slocinski(&model, &cp, Order::St).failures;
                            f.extend(verify_slocinski(&model, &cp, Order::Ts).failures);
                            f
                        }
                        Err(_) => Vec::new(),
                    };
                    OracleReport {
                        depth: d,
                        basis_size: model.size(),
                        relations_hold: rel.is_clean(),
                        doubly_displays_hold: Some(rel.doubly_holds()),
                        findings: rel.findings,
                        subspace_failures: sub,
                    }
                }
            };
            let code = if r.relations_hold && r.subspace_failures.is_empty() {
                0
            } else {
                1
            };
            let output = emit(json, &r, || {
                let mut s = format!(
                    "depth: {}\nbasis size: {}\nrelations: {}\n",
                    r.depth,
                    r.basis_size,
                    if r.relations_hold { "hold" } else { "FAIL" }
                );
                if let Some(d) = r.doubly_displays_hold {
                    let _ = writeln!(s, "double-commutation displays: {}", if d { "hold" } else { "fail" });
                }
                for f in &r.findings {
                    let _ = writeln!(s, "  {:?} at {}: {}", f.relation, f.element, f.detail);
                }
                let _ = writeln!(
                    s,
                    "subspace claims: {}",
                    if r.subspace_failures.is_empty() { "hold" } else { "FAIL" }
                );
                for f in &r.subspace_failures {
                    let _ = writeln!(s, "  {:?} at {}: {}", f.claim, f.element, f.detail);
                }
                s
            });
            Ok(Outcome { code, output })
        }
        Command::Search {
            max_base,
            m,
            n,
            theta_all,
            property,
        } => {
            let prop: Property = property.parse()?;
            let space = if *theta_all {
                SearchSpace::all_thetas(*max_base, *m, *n)?
            } else {
                if *m == 0 || *n == 0 {
                    return Err(Error::Validation("m and n must be at least 1".into()));
                }
                SearchSpace::identity(*max_base, *m, *n)
            };
            let hits = search(&space, prop, Exec::Parallel)?;
            let r = SearchReport {
                property: property.clone(),
                matches: hits.len(),
                pairs: hits.iter().map(|cp| InputDocument::from_pair(cp)).collect(),
            };
            let output = emit(json, &r, || {
                let mut s = format!("property: {}\nmatches: {}\n", r.property, r.matches);
                for d in &r.pairs {
                    let _ = writeln!(s, "{}", serde_json::to_string(d).expect("documents serialize"));
                }
                s
            });
            Ok(Outcome { code: 0, output })
        }
        Command::ExportDot { file } => {
            let built = load(file)?;
            Ok(Outcome {
                code: 0,
                output: export_dot(&built),
            })
        }
    }
}

fn commute_text(r: &CommuteReport) -> String {
    let mut s = format!("commuting: {}\n", yes(r.commuting));
    if let Some(d) = r.doubly {
        let _ = writeln!(s, "doubly commuting: {}", yes(d));
    }
    for f in &r.failures {
        let _ = writeln!(s, "  {f}");
    }
    s
}
