//! Contractibility checks for a vertex set `G⁰`.
//!
//! [`check_theorem`] tests the hypotheses on the complementary subgraph `T`
//! (no tails, singularities inside `G⁰`, `T` acyclic, conditions (a)–(d) on the
//! infinite paths of `T`). [`check_proposition`] tests the equivalent
//! formulation in terms of `G⁰` alone by searching paths of the whole graph. The
//! two use different machinery on purpose: agreement of their verdicts is the
//! main consistency test of this module.
//!
//! Infinite paths are handled through rays. With `G⁰` restricted to core
//! vertices every ray lies in `T`, and an infinite path that never repeats a
//! vertex must eventually run along one spine forever.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{split_ray_position, Graph, TailWitness, VertexRef, VertexSet};
use crate::multiplicity::Multiplicity;
use crate::path::{Cycle, Path};

/// A node of the condensation of `T`: a core vertex outside `G⁰`, or a whole ray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TNode {
    Core(String),
    Ray(String),
}

impl TNode {
    /// The vertex where paths enter this node (`R.x0` for a ray).
    pub fn entry_vertex(&self) -> VertexRef {
        match self {
            TNode::Core(c) => VertexRef::core(c.clone()),
            TNode::Ray(r) => VertexRef::ray(r.clone(), 0),
        }
    }
}

/// An edge of `T`, the subgraph induced on `E⁰ ∖ G⁰`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TEdge {
    Core {
        src: String,
        dst: String,
        mult: Multiplicity,
    },
    Entry {
        src: String,
        ray: String,
        mult: Multiplicity,
    },
    /// Every spine edge of the ray.
    Spine { ray: String },
    /// Position `pos` of the ray (within its window; periodic beyond) emits `mult`
    /// edges to the `T` vertex `dst`.
    RayTarget {
        ray: String,
        pos: usize,
        dst: String,
        mult: u64,
    },
}

/// The subgraph `T` together with its finite condensation.
#[derive(Debug, Clone)]
pub struct SubgraphT {
    g0: BTreeSet<String>,
    vertices: VertexSet,
    edges: Vec<TEdge>,
    infinite: BTreeSet<TNode>,
    ray_bound: BTreeSet<TNode>,
    cycles: Vec<Cycle>,
}

impl SubgraphT {
    pub fn g0(&self) -> &BTreeSet<String> {
        &self.g0
    }

    /// `T⁰ = E⁰ ∖ G⁰`.
    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edges(&self) -> &[TEdge] {
        &self.edges
    }

    /// Condensation nodes from which an infinite path inside `T` starts.
    pub fn infinite_nodes(&self) -> &BTreeSet<TNode> {
        &self.infinite
    }

    /// Nodes from which an infinite path inside `T` without repeated vertices
    /// starts, i.e. nodes that reach a ray within `T`.
    pub fn ray_bound_nodes(&self) -> &BTreeSet<TNode> {
        &self.ray_bound
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycles.is_empty()
    }

    /// One cycle per strongly connected component of `T` that has one.
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn contains(&self, v: &VertexRef) -> bool {
        self.vertices.contains(v)
    }

    /// Successors of a condensation node inside `T`, with multiplicities.
    fn successors<'a>(&'a self, g: &'a Graph, n: &TNode) -> Vec<(TNode, Multiplicity)> {
        match n {
            TNode::Core(u) => g
                .core_successors(u)
                .filter(|(d, _)| !self.g0.contains(*d))
                .map(|(d, m)| (TNode::Core(d.to_string()), m))
                .chain(
                    g.rays_entered_from(u)
                        .map(|(r, m)| (TNode::Ray(r.id().to_string()), m)),
                )
                .collect(),
            TNode::Ray(r) => g
                .ray(r)
                .expect("ray node")
                .targets_from(0)
                .into_iter()
                .filter(|d| !self.g0.contains(*d))
                .map(|d| (TNode::Core(d.to_string()), Multiplicity::Omega))
                .collect(),
        }
    }
}

/// Checks that `g0` names core vertices of `g` only.
fn validate_g0(g: &Graph, g0: &VertexSet) -> Result<BTreeSet<String>> {
    if let Some((r, _)) = g0.ray_states().next() {
        return Err(Error::RayInG0(r.to_string()));
    }
    for v in g0.core() {
        if !g.vertices().contains(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    Ok(g0.core().clone())
}

/// Builds `T` with `T⁰ = E⁰ ∖ G⁰` and `T¹` the edges with both ends in `T⁰`.
pub fn induced_t(g: &Graph, g0: &VertexSet) -> Result<SubgraphT> {
    let g0 = validate_g0(g, g0)?;
    let t_core: BTreeSet<String> = g.vertices().difference(&g0).cloned().collect();
    let mut vertices = VertexSet::from_core(t_core.iter().cloned());
    for r in g.rays() {
        vertices.lower_ray(r.id(), 0);
    }

    let mut edges = Vec::new();
    for (s, d, m) in g.edges() {
        if t_core.contains(s) && t_core.contains(d) {
            edges.push(TEdge::Core {
                src: s.to_string(),
                dst: d.to_string(),
                mult: m,
            });
        }
    }
    for r in g.rays() {
        for (s, m) in r.entry() {
            if t_core.contains(s) {
                edges.push(TEdge::Entry {
                    src: s.clone(),
                    ray: r.id().to_string(),
                    mult: *m,
                });
            }
        }
        edges.push(TEdge::Spine {
            ray: r.id().to_string(),
        });
        for pos in 0..r.window() {
            for (d, &m) in r.targets_at(pos) {
                if t_core.contains(d) {
                    edges.push(TEdge::RayTarget {
                        ray: r.id().to_string(),
                        pos,
                        dst: d.clone(),
                        mult: m,
                    });
                }
            }
        }
    }

    let cycles = t_cycles(g, &vertices);

    let mut t = SubgraphT {
        g0,
        vertices,
        edges,
        infinite: BTreeSet::new(),
        ray_bound: BTreeSet::new(),
        cycles,
    };

    // Backward closure from the rays (and, for `infinite`, from cyclic nodes).
    let mut ray_bound: BTreeSet<TNode> = g.rays().map(|r| TNode::Ray(r.id().to_string())).collect();
    let mut infinite = ray_bound.clone();
    for c in &t.cycles {
        for v in &c.vertices {
            infinite.insert(match v {
                VertexRef::Core(u) => TNode::Core(u.clone()),
                VertexRef::Ray { ray, .. } => TNode::Ray(ray.clone()),
            });
        }
    }
    let nodes: Vec<TNode> = t_core.iter().map(|c| TNode::Core(c.clone())).collect();
    loop {
        let mut changed = false;
        for n in &nodes {
            let succ = t.successors(g, n);
            if !ray_bound.contains(n) && succ.iter().any(|(s, _)| ray_bound.contains(s)) {
                ray_bound.insert(n.clone());
                changed = true;
            }
            if !infinite.contains(n) && succ.iter().any(|(s, _)| infinite.contains(s)) {
                infinite.insert(n.clone());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    t.ray_bound = ray_bound;
    t.infinite = infinite;
    Ok(t)
}

/// One witness cycle per cyclic strongly connected component of `T`, computed on
/// the ray-window unrolling (spines never close up on their own).
fn t_cycles(g: &Graph, t: &VertexSet) -> Vec<Cycle> {
    let mut graph: DiGraph<VertexRef, ()> = DiGraph::new();
    let mut index: BTreeMap<VertexRef, NodeIndex> = BTreeMap::new();
    for c in t.core() {
        let v = VertexRef::core(c.clone());
        index.insert(v.clone(), graph.add_node(v));
    }
    for r in g.rays() {
        for k in 0..r.window() {
            let v = VertexRef::ray(r.id(), k);
            index.insert(v.clone(), graph.add_node(v));
        }
    }
    for (v, &i) in &index {
        for (w, _) in g.out_edges(v) {
            if let Some(&j) = index.get(&w) {
                graph.add_edge(i, j, ());
            }
        }
    }
    let mut cycles = Vec::new();
    for scc in tarjan_scc(&graph) {
        let members: BTreeSet<NodeIndex> = scc.iter().copied().collect();
        let start = *members.iter().next().expect("non-empty component");
        if members.len() == 1 && graph.find_edge(start, start).is_none() {
            continue;
        }
        // shortest way back to `start` inside the component
        let mut pred: HashMap<NodeIndex, NodeIndex> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        'bfs: while let Some(x) = queue.pop_front() {
            for y in graph.neighbors(x) {
                if !members.contains(&y) {
                    continue;
                }
                if y == start {
                    pred.insert(start, x);
                    break 'bfs;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = pred.entry(y) {
                    e.insert(x);
                    queue.push_back(y);
                }
            }
        }
        let mut seq = Vec::new();
        let mut x = pred[&start];
        while x != start {
            seq.push(graph[x].clone());
            x = pred[&x];
        }
        seq.push(graph[start].clone());
        seq.reverse();
        cycles.push(Cycle::canonical(seq));
    }
    cycles.sort();
    cycles
}

/// A failed hypothesis, with a witness that can be re-validated against the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Violation {
    TailsPresent {
        tail: String,
        head: VertexRef,
    },
    SingularityOutsideG0 {
        vertex: VertexRef,
    },
    /// `T` contains this cycle.
    TCycle {
        cycle: Cycle,
    },
    /// A `G⁰` vertex starts two infinite paths through `T`; the two finite
    /// prefixes agree up to their last edge.
    CondA {
        vertex: VertexRef,
        first: Path,
        second: Path,
    },
    /// `vertex` starts an infinite path in `T` (following `route` to a ray) but
    /// no `G⁰` vertex reaches it.
    CondB {
        vertex: VertexRef,
        route: Path,
    },
    /// `vertex` lies on an infinite path in `T` but does not receive exactly one edge.
    CondC {
        vertex: VertexRef,
        in_degree: Multiplicity,
    },
    /// The infinite emitter `source` has an edge into the start of an infinite
    /// path in `T`.
    CondD {
        source: VertexRef,
        target: VertexRef,
    },
    /// A cycle with no vertex in `G⁰`.
    Cond1 {
        cycle: Cycle,
    },
    /// Two distinct acyclic infinite paths from a `G⁰` vertex never return to
    /// `G⁰`; each is the given prefix followed by the spine of the ray it ends on.
    CondAPrime {
        vertex: VertexRef,
        first: Path,
        second: Path,
    },
    /// An acyclic infinite path avoiding `G⁰` starts at `vertex`, which no `G⁰`
    /// vertex reaches.
    CondBPrime {
        vertex: VertexRef,
        route: Path,
    },
    /// An acyclic infinite path avoiding `G⁰` starts at `vertex`, which receives
    /// more than one edge.
    CondCPrime {
        vertex: VertexRef,
        in_degree: Multiplicity,
    },
    /// An acyclic infinite path from the infinite emitter `vertex` never returns to `G⁰`.
    CondDPrime {
        vertex: VertexRef,
        route: Path,
    },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::TailsPresent { .. } => "TAILS_PRESENT",
            Violation::SingularityOutsideG0 { .. } => "SINGULARITY_OUTSIDE_G0",
            Violation::TCycle { .. } => "T_CYCLE",
            Violation::CondA { .. } => "COND_A",
            Violation::CondB { .. } => "COND_B",
            Violation::CondC { .. } => "COND_C",
            Violation::CondD { .. } => "COND_D",
            Violation::Cond1 { .. } => "COND_1",
            Violation::CondAPrime { .. } => "COND_A_PRIME",
            Violation::CondBPrime { .. } => "COND_B_PRIME",
            Violation::CondCPrime { .. } => "COND_C_PRIME",
            Violation::CondDPrime { .. } => "COND_D_PRIME",
        }
    }

    /// Checks the witness against `g`: paths exist, degrees are as stated.
    pub fn validate(&self, g: &Graph, g0: &VertexSet) -> bool {
        let outside = |p: &Path| p.vertices().skip(1).all(|v| !g0.contains(v));
        match self {
            Violation::TailsPresent { head, .. } => g.contains(head),
            Violation::SingularityOutsideG0 { vertex } => {
                !g0.contains(vertex) && (g.is_sink(vertex) || g.is_infinite_emitter(vertex))
            }
            Violation::TCycle { cycle } | Violation::Cond1 { cycle } => {
                cycle.validate(g) && cycle.vertices.iter().all(|v| !g0.contains(v))
            }
            Violation::CondA {
                vertex,
                first,
                second,
            } => {
                first.validate(g)
                    && second.validate(g)
                    && first.start == *vertex
                    && second.start == *vertex
                    && first != second
                    && first.len() == second.len()
                    && first.steps[..first.len() - 1] == second.steps[..second.len() - 1]
                    && outside(first)
                    && outside(second)
            }
            Violation::CondAPrime {
                vertex,
                first,
                second,
            } => {
                first.validate(g)
                    && second.validate(g)
                    && first.start == *vertex
                    && second.start == *vertex
                    && first != second
                    && outside(first)
                    && outside(second)
                    && ends_at_ray_head(first)
                    && ends_at_ray_head(second)
            }
            Violation::CondB { vertex, route } | Violation::CondBPrime { vertex, route } => {
                route.validate(g)
                    && route.start == *vertex
                    && route.vertices().all(|v| !g0.contains(v))
                    && matches!(route.end(), VertexRef::Ray { .. })
                    && !g.reaches(g0, vertex)
            }
            Violation::CondC { vertex, in_degree } => {
                g.in_degree(vertex) == *in_degree && *in_degree != Multiplicity::ONE
            }
            Violation::CondCPrime { vertex, in_degree } => {
                g.in_degree(vertex) == *in_degree && *in_degree > Multiplicity::ONE
            }
            Violation::CondD { source, target } => {
                g.is_infinite_emitter(source) && !g.edge_multiplicity(source, target).is_zero()
            }
            Violation::CondDPrime { vertex, route } => {
                g.is_infinite_emitter(vertex)
                    && route.validate(g)
                    && route.start == *vertex
                    && outside(route)
                    && ends_at_ray_head(route)
            }
        }
    }
}

fn ends_at_ray_head(p: &Path) -> bool {
    matches!(p.end(), VertexRef::Ray { pos: 0, .. })
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())?;
        match self {
            Violation::TailsPresent { tail, head } => write!(f, " {tail} (head {head})"),
            Violation::SingularityOutsideG0 { vertex } => write!(f, " {vertex}"),
            Violation::TCycle { cycle } | Violation::Cond1 { cycle } => write!(f, " {cycle}"),
            Violation::CondA {
                vertex,
                first,
                second,
            }
            | Violation::CondAPrime {
                vertex,
                first,
                second,
            } => write!(f, " {vertex}: {first} | {second}"),
            Violation::CondB { vertex, route }
            | Violation::CondBPrime { vertex, route }
            | Violation::CondDPrime { vertex, route } => write!(f, " {vertex}: {route} -> …"),
            Violation::CondC { vertex, in_degree }
            | Violation::CondCPrime { vertex, in_degree } => {
                write!(f, " {vertex}: in-degree {in_degree}")
            }
            Violation::CondD { source, target } => write!(f, " {source} -> {target}"),
        }
    }
}

/// Outcome of a contractibility check. `pass` holds iff there are no violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionVerdict {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl ContractionVerdict {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ContractionVerdict {
            pass: violations.is_empty(),
            violations,
        }
    }

    pub fn codes(&self) -> Vec<&'static str> {
        self.violations.iter().map(Violation::code).collect()
    }

    /// Every witness re-validates against `g`.
    pub fn validate(&self, g: &Graph, g0: &VertexSet) -> bool {
        self.pass == self.violations.is_empty() && self.violations.iter().all(|v| v.validate(g, g0))
    }
}

impl fmt::Display for ContractionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.pass { "PASS" } else { "FAIL" })?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Tail and singularity hypotheses shared by both checkers.
fn ambient_violations(g: &Graph, g0: &BTreeSet<String>) -> Vec<Violation> {
    let mut out: Vec<Violation> = g
        .detect_tails()
        .into_iter()
        .map(|t: TailWitness| Violation::TailsPresent {
            tail: t.to_string(),
            head: t.head(),
        })
        .collect();
    for s in g.singularities() {
        if !s.as_core().is_some_and(|c| g0.contains(c)) {
            out.push(Violation::SingularityOutsideG0 { vertex: s });
        }
    }
    out
}

/// Checks the hypotheses of the contraction theorem for `G⁰ = g0`, in the order
/// tails, singularities, acyclicity of `T`, (b), (c), (d), (a). All violations
/// are reported. Condition (a) counts infinite paths through `T`, which is only
/// meaningful once `T` is acyclic, so it is skipped otherwise.
pub fn check_theorem(g: &Graph, g0: &VertexSet) -> Result<ContractionVerdict> {
    let t = induced_t(g, g0)?;
    let g0_set = VertexSet::from_core(t.g0.iter().cloned());
    let mut out = ambient_violations(g, &t.g0);

    out.extend(
        t.cycles
            .iter()
            .map(|c| Violation::TCycle { cycle: c.clone() }),
    );

    let ray_bound: Vec<&TNode> = t.ray_bound.iter().collect();

    // (b) every start of an infinite T-path is reachable from G0
    let reach_g0 = g.reachable_from(&g0_set);
    for n in &ray_bound {
        let v = n.entry_vertex();
        if !reach_g0.contains(&v) {
            out.push(Violation::CondB {
                route: route_to_ray(g, &t, n),
                vertex: v,
            });
        }
    }
    // (c) vertices on infinite T-paths receive exactly one edge; past x0 a ray
    // position receives only its spine edge
    for n in &ray_bound {
        let v = n.entry_vertex();
        let d = g.in_degree(&v);
        if d != Multiplicity::ONE {
            out.push(Violation::CondC {
                vertex: v,
                in_degree: d,
            });
        }
    }
    // (d) nothing feeding the start of an infinite T-path is an infinite emitter;
    // ray positions past x0 are fed by finite emitters
    for n in &ray_bound {
        let v = n.entry_vertex();
        for (src, _) in g.in_edges(&v) {
            if matches!(src, VertexRef::Core(_)) && g.is_infinite_emitter(&src) {
                out.push(Violation::CondD {
                    source: src,
                    target: v.clone(),
                });
            }
        }
    }
    // (a)
    if t.is_acyclic() {
        let mut counter = PathCounter {
            g,
            t: &t,
            memo: HashMap::new(),
        };
        for u in &t.g0 {
            let start = Path::trivial(VertexRef::core(u.clone()));
            let choices = counter.core_choices(u);
            let total: u8 = choices.iter().map(|(n, _, _)| counter.count(n)).sum::<u8>();
            if total >= 2 {
                let (first, second) = counter.diverging(start, choices);
                out.push(Violation::CondA {
                    vertex: VertexRef::core(u.clone()),
                    first,
                    second,
                });
            }
        }
    }

    Ok(ContractionVerdict::from_violations(out))
}

/// Shortest path inside `T` from a ray-bound node to some ray head.
fn route_to_ray(g: &Graph, t: &SubgraphT, from: &TNode) -> Path {
    let start = from.entry_vertex();
    if matches!(from, TNode::Ray(_)) {
        return Path::trivial(start);
    }
    let mut pred: BTreeMap<VertexRef, VertexRef> = BTreeMap::new();
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(x) = queue.pop_front() {
        if matches!(x, VertexRef::Ray { .. }) {
            let mut seq = vec![x.clone()];
            let mut cur = x;
            while cur != start {
                cur = pred[&cur].clone();
                seq.push(cur.clone());
            }
            seq.reverse();
            let mut p = Path::trivial(seq[0].clone());
            for v in seq.into_iter().skip(1) {
                p.push(v, 0);
            }
            return p;
        }
        for (y, _) in g.out_edges(&x) {
            if t.contains(&y) && y != start && !pred.contains_key(&y) {
                pred.insert(y.clone(), x.clone());
                queue.push_back(y);
            }
        }
    }
    unreachable!("ray-bound node reaches a ray")
}

/// Saturating count (0, 1 or 2 meaning "at least two") of infinite paths inside
/// an acyclic `T` starting at a condensation node.
struct PathCounter<'a> {
    g: &'a Graph,
    t: &'a SubgraphT,
    memo: HashMap<TNode, u8>,
}

impl PathCounter<'_> {
    fn count(&mut self, n: &TNode) -> u8 {
        if let Some(&c) = self.memo.get(n) {
            return c;
        }
        let c = match n {
            TNode::Ray(_) => {
                // the spine itself, plus any exit into a node that continues forever
                let exits = self.t.successors(self.g, n);
                if exits.iter().any(|(s, _)| self.count(s) > 0) {
                    2
                } else {
                    1
                }
            }
            TNode::Core(_) => {
                let succ = self.t.successors(self.g, n);
                let mut total = 0u64;
                for (s, m) in succ {
                    let c = u64::from(self.count(&s));
                    total += m.capped(2) * c;
                }
                total.min(2) as u8
            }
        };
        self.memo.insert(n.clone(), c);
        c
    }

    /// Out-edge copies of core vertex `u` into `T` (at most two per parallel class).
    fn core_choices(&self, u: &str) -> Vec<(TNode, VertexRef, u64)> {
        let mut out = Vec::new();
        for (n, m) in self.t.successors(self.g, &TNode::Core(u.to_string())) {
            let v = n.entry_vertex();
            for slot in 0..m.capped(2) {
                out.push((n.clone(), v.clone(), slot));
            }
        }
        out
    }

    /// Two prefixes that agree until their last edge, each extendable to an
    /// infinite path in `T`. `prefix` ends at a node counting two or more.
    fn diverging(&mut self, prefix: Path, choices: Vec<(TNode, VertexRef, u64)>) -> (Path, Path) {
        let live: Vec<_> = choices
            .into_iter()
            .filter(|(n, _, _)| self.count(n) > 0)
            .collect();
        if live.len() >= 2 {
            return (
                prefix.then(live[0].1.clone(), live[0].2),
                prefix.then(live[1].1.clone(), live[1].2),
            );
        }
        let (node, v, slot) = live.into_iter().next().expect("count is at least two");
        let prefix = prefix.then(v, slot);
        match &node {
            TNode::Core(c) => {
                let choices = self.core_choices(c);
                self.diverging(prefix, choices)
            }
            TNode::Ray(r) => {
                let ray = self.g.ray(r).expect("ray node");
                for pos in 0..ray.window() {
                    let exit = ray.targets_at(pos).keys().find(|d| {
                        !self.t.g0.contains(*d) && self.count(&TNode::Core((*d).clone())) > 0
                    });
                    if let Some(d) = exit {
                        let mut along = prefix.clone();
                        for k in 1..=pos {
                            along.push(VertexRef::ray(r.clone(), k), 0);
                        }
                        return (
                            along.then(VertexRef::ray(r.clone(), pos + 1), 0),
                            along.then(VertexRef::core(d.clone()), 0),
                        );
                    }
                }
                unreachable!("ray counted twice has a live exit")
            }
        }
    }
}

/// Checks the equivalent conditions phrased through `G⁰`: (1) every cycle meets
/// `G⁰`, and (a′)–(d′) for acyclic infinite paths. Tails and singularities are
/// checked exactly as in [`check_theorem`].
///
/// (b′)–(d′) are read as quantified over single acyclic infinite paths.
pub fn check_proposition(g: &Graph, g0: &VertexSet) -> Result<ContractionVerdict> {
    let g0_core = validate_g0(g, g0)?;
    let mut out = ambient_violations(g, &g0_core);

    // (1)
    let mut outside = g.all_vertices();
    for v in &g0_core {
        outside.remove_core(v);
    }
    out.extend(
        g.simple_cycles(&outside)
            .into_iter()
            .map(|cycle| Violation::Cond1 { cycle }),
    );

    let search = WindowSearch::new(g, &g0_core);

    // (a′)
    for u in &g0_core {
        let found = search.commits_from(u, 2);
        if found.len() >= 2 {
            out.push(Violation::CondAPrime {
                vertex: VertexRef::core(u.clone()),
                first: found[0].clone(),
                second: found[1].clone(),
            });
        }
    }

    // starts of acyclic infinite paths avoiding G0
    let mut starts: Vec<(VertexRef, Path)> = Vec::new();
    for (name, v) in &search.names {
        if g0_core.contains(name) {
            continue;
        }
        match v {
            VertexRef::Ray { .. } => starts.push((v.clone(), Path::trivial(v.clone()))),
            VertexRef::Core(_) => {
                if let Some(p) = search.commits_from(name, 1).into_iter().next() {
                    starts.push((v.clone(), p));
                }
            }
        }
    }

    // (b′) reachability is evaluated on the window unrolling
    let reached = search
        .window
        .reachable_from(&VertexSet::from_core(g0_core.iter().cloned()));
    let mut reported_rays = BTreeSet::new();
    for (v, route) in &starts {
        if reached.contains_core(&v.to_string()) {
            continue;
        }
        if let VertexRef::Ray { ray, .. } = v {
            if !reported_rays.insert(ray.clone()) {
                continue;
            }
        }
        out.push(Violation::CondBPrime {
            vertex: v.clone(),
            route: route.clone(),
        });
    }
    // (c′)
    for (v, _) in &starts {
        let d = g.in_degree(v);
        if d > Multiplicity::ONE {
            out.push(Violation::CondCPrime {
                vertex: v.clone(),
                in_degree: d,
            });
        }
    }
    // (d′)
    for u in g.vertices() {
        let v = VertexRef::core(u.clone());
        if g.is_infinite_emitter(&v) {
            if let Some(route) = search.commits_from(u, 1).into_iter().next() {
                out.push(Violation::CondDPrime { vertex: v, route });
            }
        }
    }

    Ok(ContractionVerdict::from_violations(out))
}

/// Simple-path search on the window unrolling of a graph, used by the
/// proposition checker. An acyclic infinite path is a finite simple path ending
/// at a ray head followed by that ray's spine, so counting infinite paths reduces
/// to counting simple paths that arrive at ray heads.
struct WindowSearch<'a> {
    g0: &'a BTreeSet<String>,
    window: Graph,
    /// window vertex name -> vertex of the original graph
    names: BTreeMap<String, VertexRef>,
    /// window vertices outside G0 that reach a ray head without entering G0
    useful: BTreeSet<String>,
}

impl<'a> WindowSearch<'a> {
    fn new(g: &Graph, g0: &'a BTreeSet<String>) -> Self {
        let window = g.materialize_window();
        let names: BTreeMap<String, VertexRef> = window
            .vertices()
            .iter()
            .map(|n| {
                let v = if g.vertices().contains(n) {
                    VertexRef::core(n.clone())
                } else {
                    let (r, k) = split_ray_position(n).expect("window vertex names a ray position");
                    VertexRef::ray(r, k)
                };
                (n.clone(), v)
            })
            .collect();
        let mut useful: BTreeSet<String> = names
            .iter()
            .filter(|(_, v)| matches!(v, VertexRef::Ray { pos: 0, .. }))
            .map(|(n, _)| n.clone())
            .collect();
        loop {
            let before = useful.len();
            for (s, d, _) in window.edges() {
                if !g0.contains(s) && useful.contains(d) && !useful.contains(s) {
                    useful.insert(s.to_string());
                }
            }
            if useful.len() == before {
                break;
            }
        }
        WindowSearch {
            g0,
            window,
            names,
            useful,
        }
    }

    /// Up to `cap` distinct simple paths from `start` whose later vertices avoid
    /// `G⁰` and which end on arriving at a ray head. Parallel copies count as
    /// distinct paths.
    fn commits_from(&self, start: &str, cap: usize) -> Vec<Path> {
        let mut found = Vec::new();
        let mut on_path = BTreeSet::from([start.to_string()]);
        let mut path = Path::trivial(self.names[start].clone());
        self.dfs(start, &mut on_path, &mut path, cap, &mut found);
        found
    }

    fn dfs(
        &self,
        at: &str,
        on_path: &mut BTreeSet<String>,
        path: &mut Path,
        cap: usize,
        found: &mut Vec<Path>,
    ) {
        let succ: Vec<(String, Multiplicity)> = self
            .window
            .core_successors(at)
            .map(|(d, m)| (d.to_string(), m))
            .collect();
        for (d, m) in succ {
            if self.g0.contains(&d) || on_path.contains(&d) || !self.useful.contains(&d) {
                continue;
            }
            for slot in 0..m.capped(cap as u64) {
                if found.len() >= cap {
                    return;
                }
                let v = self.names[&d].clone();
                path.push(v.clone(), slot);
                if matches!(v, VertexRef::Ray { pos: 0, .. }) {
                    found.push(path.clone());
                }
                on_path.insert(d.clone());
                self.dfs(&d, on_path, path, cap, found);
                on_path.remove(&d);
                path.steps.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::RaySpec;

    fn set(ids: &[&str]) -> VertexSet {
        VertexSet::from_core(ids.iter().copied())
    }

    #[test]
    fn induced_t_examples() {
        let t = induced_t(&fixtures::b2(), &set(&["v", "w"])).unwrap();
        assert_eq!(t.vertices(), &set(&["t0", "ta", "tb"]));
        assert_eq!(
            t.edges(),
            &[
                TEdge::Core {
                    src: "t0".into(),
                    dst: "ta".into(),
                    mult: 1.into()
                },
                TEdge::Core {
                    src: "t0".into(),
                    dst: "tb".into(),
                    mult: 1.into()
                },
            ]
        );
        assert!(t.infinite_nodes().is_empty());

        let b2 = fixtures::b2();
        let all = induced_t(&b2, &b2.all_vertices()).unwrap();
        assert!(all.vertices().is_empty());
        assert!(all.edges().is_empty());

        let t = induced_t(&fixtures::vi_e(), &set(&["v", "w"])).unwrap();
        assert_eq!(
            t.vertices(),
            &VertexSet::new().with_ray_from("L", 0).with_ray_from("R", 0)
        );
        assert_eq!(
            t.edges(),
            &[
                TEdge::Spine { ray: "L".into() },
                TEdge::Spine { ray: "R".into() }
            ]
        );
        assert_eq!(
            t.infinite_nodes(),
            &BTreeSet::from([TNode::Ray("L".into()), TNode::Ray("R".into())])
        );

        assert!(matches!(
            induced_t(&fixtures::b2(), &set(&["nope"])),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            induced_t(&fixtures::vi_e(), &VertexSet::new().with_ray_from("L", 0)),
            Err(Error::RayInG0(_))
        ));
    }

    #[test]
    fn theorem_b2_passes() {
        let v = check_theorem(&fixtures::b2(), &set(&["v", "w"])).unwrap();
        assert!(v.pass, "{v}");
    }

    #[test]
    fn theorem_vi_e_fails_only_a() {
        let g = fixtures::vi_e();
        let g0 = set(&["v", "w"]);
        let v = check_theorem(&g, &g0).unwrap();
        assert_eq!(v.codes(), vec!["COND_A"]);
        match &v.violations[0] {
            Violation::CondA { first, second, .. } => {
                assert_eq!(first.to_string(), "v -> L.x0");
                assert_eq!(second.to_string(), "v -> R.x0");
            }
            other => panic!("{other:?}"),
        }
        assert!(v.validate(&g, &g0));
    }

    #[test]
    fn theorem_vi_f_fails_only_d() {
        let g = fixtures::vi_f();
        let g0 = set(&["v", "w"]);
        let v = check_theorem(&g, &g0).unwrap();
        assert_eq!(v.codes(), vec!["COND_D"]);
        assert_eq!(
            v.violations[0],
            Violation::CondD {
                source: VertexRef::core("v"),
                target: VertexRef::ray("X", 0)
            }
        );
        assert!(v.validate(&g, &g0));
    }

    #[test]
    fn full_g0_passes_when_ambient_hypotheses_hold() {
        for g in [
            fixtures::b2(),
            fixtures::loop_graph(),
            fixtures::inf(),
            fixtures::esse(),
        ] {
            let all = g.all_vertices();
            assert!(check_theorem(&g, &all).unwrap().pass);
            assert!(check_proposition(&g, &all).unwrap().pass);
        }
    }

    #[test]
    fn proposition_examples() {
        assert!(
            check_proposition(&fixtures::b2(), &set(&["v", "w"]))
                .unwrap()
                .pass
        );

        let g = fixtures::vi_e();
        let v = check_proposition(&g, &set(&["v", "w"])).unwrap();
        assert_eq!(v.codes(), vec!["COND_A_PRIME"]);
        assert!(v.validate(&g, &set(&["v", "w"])));

        let lp = fixtures::loop_graph();
        let v = check_proposition(&lp, &VertexSet::new()).unwrap();
        assert_eq!(v.codes(), vec!["COND_1"]);
        let t = check_theorem(&lp, &VertexSet::new()).unwrap();
        assert_eq!(t.codes(), vec!["T_CYCLE"]);
    }

    #[test]
    fn vi_f_proposition_fails_at_d_prime() {
        let v = check_proposition(&fixtures::vi_f(), &set(&["v", "w"])).unwrap();
        assert_eq!(v.codes(), vec!["COND_D_PRIME"]);
    }

    #[test]
    fn unreachable_ray_violates_b_and_c() {
        // ray with no entry: nothing reaches it and x0 receives nothing
        let g = Graph::builder()
            .vertex("w")
            .ray(RaySpec::new("R").cycle_position([("w", 1)]))
            .build()
            .unwrap();
        let g0 = set(&["w"]);
        let t = check_theorem(&g, &g0).unwrap();
        assert_eq!(t.codes(), vec!["COND_B", "COND_C"]);
        assert!(t.validate(&g, &g0));
        let p = check_proposition(&g, &g0).unwrap();
        assert_eq!(p.codes(), vec!["COND_B_PRIME"]);
        assert!(p.validate(&g, &g0));
    }

    #[test]
    fn ray_with_two_entries_violates_c() {
        let g = Graph::builder()
            .vertices(["v", "w"])
            .edge("v", "w", 1)
            .ray(RaySpec::new("R").entry("v", 2).cycle_position([("w", 1)]))
            .build()
            .unwrap();
        let g0 = set(&["v", "w"]);
        let t = check_theorem(&g, &g0).unwrap();
        // two parallel entry copies also give two infinite paths from v
        assert_eq!(t.codes(), vec!["COND_C", "COND_A"]);
        assert!(t.validate(&g, &g0));
        let p = check_proposition(&g, &g0).unwrap();
        assert_eq!(p.codes(), vec!["COND_A_PRIME", "COND_C_PRIME"]);
        assert!(p.validate(&g, &g0));
    }

    #[test]
    fn divergence_inside_a_ray() {
        // v -> R.x0; R.x1 exits into t, which feeds another ray S
        let g = Graph::builder()
            .vertices(["v", "t", "w"])
            .edge("v", "w", 1)
            .edge("t", "w", 1)
            .ray(
                RaySpec::new("R")
                    .entry("v", 1)
                    .prefix_position([("w", 1)])
                    .prefix_position([("t", 1)])
                    .cycle_position([("w", 1)]),
            )
            .ray(RaySpec::new("S").entry("t", 1).cycle_position([("w", 1)]))
            .build()
            .unwrap();
        let g0 = set(&["v", "w"]);
        let v = check_theorem(&g, &g0).unwrap();
        assert!(v.codes().contains(&"COND_A"));
        let a = v.violations.iter().find(|x| x.code() == "COND_A").unwrap();
        match a {
            Violation::CondA { first, second, .. } => {
                assert_eq!(first.to_string(), "v -> R.x0 -> R.x1 -> R.x2");
                assert_eq!(second.to_string(), "v -> R.x0 -> R.x1 -> t");
            }
            _ => unreachable!(),
        }
        assert!(v.validate(&g, &g0));
        assert!(!check_proposition(&g, &g0).unwrap().pass);
    }

    #[test]
    fn tails_and_singularities_are_reported_first() {
        let g = Graph::builder()
            .vertices(["v", "s"])
            .edge("v", "s", 1)
            .ray(
                RaySpec::new("R")
                    .entry("v", 1)
                    .cycle_position::<_, &str>([]),
            )
            .build()
            .unwrap();
        let v = check_theorem(&g, &set(&["v"])).unwrap();
        assert_eq!(
            &v.codes()[..2],
            &["TAILS_PRESENT", "SINGULARITY_OUTSIDE_G0"]
        );
    }
}
