//! Directed multigraphs with `ω` multiplicities and eventually periodic rays.
//!
//! A [`Graph`] has a finite core plus finitely many [`Ray`]s. Ray `R` contributes
//! the infinite spine `R.x0 -> R.x1 -> …`; position `k` additionally emits a
//! finite multiset of edges into the core, read from `prefix[k]` for the first
//! `|prefix|` positions and from `cycle` periodically afterwards. Only `R.x0`
//! receives edges from the core.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Bound;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::multiplicity::{Multiplicity, Omega};
use crate::path::Cycle;

/// A vertex of a [`Graph`]: a core vertex or position `pos` on a ray spine.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexRef {
    Core(String),
    Ray { ray: String, pos: usize },
}

impl VertexRef {
    pub fn core(id: impl Into<String>) -> Self {
        VertexRef::Core(id.into())
    }

    pub fn ray(id: impl Into<String>, pos: usize) -> Self {
        VertexRef::Ray {
            ray: id.into(),
            pos,
        }
    }

    pub fn as_core(&self) -> Option<&str> {
        match self {
            VertexRef::Core(id) => Some(id),
            VertexRef::Ray { .. } => None,
        }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRef::Core(id) => f.write_str(id),
            VertexRef::Ray { ray, pos } => write!(f, "{ray}.x{pos}"),
        }
    }
}

impl Serialize for VertexRef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Splits `"R.x12"` into `("R", 12)`.
pub(crate) fn split_ray_position(s: &str) -> Option<(&str, usize)> {
    let (ray, pos) = s.rsplit_once(".x")?;
    if ray.is_empty() || pos.is_empty() || !pos.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((ray, pos.parse().ok()?))
}

/// Finite multiset of core targets emitted by one ray position.
pub type Targets = BTreeMap<String, u64>;

/// An eventually periodic infinite chain attached to the core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    id: String,
    entry: BTreeMap<String, Multiplicity>,
    prefix: Vec<Targets>,
    cycle: Vec<Targets>,
}

impl Ray {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Core sources feeding `x0`, with multiplicities.
    pub fn entry(&self) -> &BTreeMap<String, Multiplicity> {
        &self.entry
    }

    pub fn prefix(&self) -> &[Targets] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Targets] {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// Positions `0..window()` show every target multiset of the ray at least once.
    pub fn window(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn targets_at(&self, pos: usize) -> &Targets {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.cycle[(pos - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Every core vertex hit by some position `≥ pos`.
    pub fn targets_from(&self, pos: usize) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for t in self.prefix.iter().skip(pos).chain(self.cycle.iter()) {
            out.extend(t.keys().map(String::as_str));
        }
        out
    }

    /// Total number of edges the ray sends to core vertex `v`.
    pub fn mult_into(&self, v: &str) -> Multiplicity {
        if self.cycle.iter().any(|t| t.contains_key(v)) {
            return Omega;
        }
        self.prefix
            .iter()
            .filter_map(|t| t.get(v))
            .map(|&m| Multiplicity::Finite(m))
            .sum()
    }

    pub fn entry_total(&self) -> Multiplicity {
        self.entry.values().sum()
    }

    /// All cycle positions emit nothing into the core, so the ray ends in a tail.
    pub fn has_empty_cycle_targets(&self) -> bool {
        self.cycle.iter().all(|t| t.is_empty())
    }
}

/// Finite core multigraph with attached rays.
///
/// Parallel edges are aggregated into one `(source, target)` entry; values are
/// immutable after [`GraphBuilder::build`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    vertices: BTreeSet<String>,
    edges: BTreeMap<(String, String), Multiplicity>,
    rays: BTreeMap<String, Ray>,
}

/// Description of one ray for [`GraphBuilder`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RaySpec {
    pub id: String,
    pub entry: Vec<(String, Multiplicity)>,
    pub prefix: Vec<Vec<(String, Multiplicity)>>,
    pub cycle: Vec<Vec<(String, Multiplicity)>>,
}

impl RaySpec {
    pub fn new(id: impl Into<String>) -> Self {
        RaySpec {
            id: id.into(),
            ..Default::default()
        }
    }

    pub fn entry(mut self, src: impl Into<String>, mult: impl Into<Multiplicity>) -> Self {
        self.entry.push((src.into(), mult.into()));
        self
    }

    pub fn prefix_position<I, S>(mut self, targets: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        self.prefix.push(
            targets
                .into_iter()
                .map(|(t, m)| (t.into(), Multiplicity::Finite(m)))
                .collect(),
        );
        self
    }

    pub fn cycle_position<I, S>(mut self, targets: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        self.cycle.push(
            targets
                .into_iter()
                .map(|(t, m)| (t.into(), Multiplicity::Finite(m)))
                .collect(),
        );
        self
    }
}

/// Collects vertices, edges and rays, then validates them into a [`Graph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, Multiplicity)>,
    rays: Vec<RaySpec>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(id.into());
        self
    }

    pub fn vertices<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vertices.extend(ids.into_iter().map(Into::into));
        self
    }

    /// Adds `mult` copies of `src -> dst`. `dst` may be a ray head `R.x0`.
    pub fn edge(
        mut self,
        src: impl Into<String>,
        dst: impl Into<String>,
        mult: impl Into<Multiplicity>,
    ) -> Self {
        self.edges.push((src.into(), dst.into(), mult.into()));
        self
    }

    pub fn ray(mut self, ray: RaySpec) -> Self {
        self.rays.push(ray);
        self
    }

    pub(crate) fn into_rays(self) -> Vec<RaySpec> {
        self.rays
    }

    pub fn build(self) -> Result<Graph> {
        let mut vertices = BTreeSet::new();
        for v in &self.vertices {
            if v.is_empty() || !vertices.insert(v.clone()) {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        let mut ray_ids = BTreeSet::new();
        for r in &self.rays {
            if r.id.is_empty() || vertices.contains(&r.id) || !ray_ids.insert(r.id.clone()) {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        for v in &vertices {
            if let Some((ray, _)) = split_ray_position(v) {
                if ray_ids.contains(ray) {
                    return Err(Error::DuplicateId(v.clone()));
                }
            }
        }

        let mut rays: BTreeMap<String, Ray> = BTreeMap::new();
        for spec in self.rays {
            if spec.cycle.is_empty() {
                return Err(Error::EmptyCycle(spec.id));
            }
            let mut entry = BTreeMap::new();
            for (src, m) in spec.entry {
                let ctx = format!("entry of ray `{}`", spec.id);
                check_core(&vertices, &src, &ctx)?;
                if m.is_zero() {
                    return Err(Error::ZeroMultiplicity(format!("{src} -> {}.x0", spec.id)));
                }
                let slot = entry.entry(src).or_insert(Multiplicity::ZERO);
                *slot = *slot + m;
            }
            let convert =
                |list: Vec<Vec<(String, Multiplicity)>>, part: &str| -> Result<Vec<Targets>> {
                    list.into_iter()
                        .enumerate()
                        .map(|(i, pos)| {
                            let mut t = Targets::new();
                            for (dst, m) in pos {
                                let ctx = format!("{part}[{i}] of ray `{}`", spec.id);
                                check_core(&vertices, &dst, &ctx)?;
                                let n = match m {
                                    Multiplicity::Finite(0) => {
                                        return Err(Error::ZeroMultiplicity(ctx));
                                    }
                                    Multiplicity::Finite(n) => n,
                                    Omega => return Err(Error::InfiniteRayTarget(spec.id.clone())),
                                };
                                *t.entry(dst).or_insert(0) += n;
                            }
                            Ok(t)
                        })
                        .collect()
                };
            let prefix = convert(spec.prefix, "prefix")?;
            let cycle = convert(spec.cycle, "cycle")?;
            rays.insert(
                spec.id.clone(),
                Ray {
                    id: spec.id,
                    entry,
                    prefix,
                    cycle,
                },
            );
        }

        let mut edges: BTreeMap<(String, String), Multiplicity> = BTreeMap::new();
        for (src, dst, m) in self.edges {
            let ctx = format!("edge {src} -> {dst}");
            if !vertices.contains(&src) {
                return Err(Error::DanglingEndpoint {
                    endpoint: src,
                    context: ctx,
                });
            }
            if m.is_zero() {
                return Err(Error::ZeroMultiplicity(ctx));
            }
            if vertices.contains(&dst) {
                let slot = edges.entry((src, dst)).or_default();
                *slot = *slot + m;
                continue;
            }
            match split_ray_position(&dst) {
                Some((ray, 0)) if rays.contains_key(ray) => {
                    let r = rays.get_mut(ray).expect("checked");
                    let slot = r.entry.entry(src).or_default();
                    *slot = *slot + m;
                }
                _ => {
                    return Err(Error::DanglingEndpoint {
                        endpoint: dst,
                        context: ctx,
                    })
                }
            }
        }

        Ok(Graph {
            vertices,
            edges,
            rays,
        })
    }
}

fn check_core(vertices: &BTreeSet<String>, id: &str, ctx: &str) -> Result<()> {
    if vertices.contains(id) {
        Ok(())
    } else {
        Err(Error::DanglingEndpoint {
            endpoint: id.to_string(),
            context: ctx.to_string(),
        })
    }
}

/// A maximal tail: spine positions from `ray.x{first_pos}` on emit only the
/// spine, optionally preceded by a chain of core vertices feeding `x0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailWitness {
    pub ray: String,
    /// Core vertices of the tail in path order; empty when the tail starts on the ray.
    pub chain: Vec<String>,
    pub first_pos: usize,
}

impl TailWitness {
    pub fn head(&self) -> VertexRef {
        match self.chain.first() {
            Some(c) => VertexRef::core(c.clone()),
            None => VertexRef::ray(self.ray.clone(), self.first_pos),
        }
    }
}

impl fmt::Display for TailWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.chain {
            write!(f, "{c} -> ")?;
        }
        write!(f, "{}.x{} -> …", self.ray, self.first_pos)
    }
}

impl Graph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Rebuild description, for moves that modify a graph.
    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self
                .edges
                .iter()
                .map(|((s, d), m)| (s.clone(), d.clone(), *m))
                .collect(),
            rays: self.rays.values().map(Ray::to_spec).collect(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<String> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, Multiplicity)> {
        self.edges
            .iter()
            .map(|((s, d), m)| (s.as_str(), d.as_str(), *m))
    }

    pub fn rays(&self) -> impl Iterator<Item = &Ray> {
        self.rays.values()
    }

    pub fn ray(&self, id: &str) -> Option<&Ray> {
        self.rays.get(id)
    }

    pub fn has_rays(&self) -> bool {
        !self.rays.is_empty()
    }

    pub fn num_core_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, v: &VertexRef) -> bool {
        match v {
            VertexRef::Core(id) => self.vertices.contains(id),
            VertexRef::Ray { ray, .. } => self.rays.contains_key(ray),
        }
    }

    /// Interprets `s` as a core id or a ray position `R.xk`.
    pub fn resolve(&self, s: &str) -> Result<VertexRef> {
        if self.vertices.contains(s) {
            return Ok(VertexRef::core(s));
        }
        match split_ray_position(s) {
            Some((ray, pos)) if self.rays.contains_key(ray) => Ok(VertexRef::ray(ray, pos)),
            _ => Err(Error::UnknownVertex(s.to_string())),
        }
    }

    /// Core-to-core out-edges of `u`.
    pub fn core_successors<'a>(
        &'a self,
        u: &str,
    ) -> impl Iterator<Item = (&'a str, Multiplicity)> + 'a {
        let u_owned = u.to_string();
        self.edges
            .range((
                Bound::Included((u_owned.clone(), String::new())),
                Bound::Unbounded,
            ))
            .take_while(move |((s, _), _)| *s == u_owned)
            .map(|((_, d), m)| (d.as_str(), *m))
    }

    /// Rays whose head `x0` receives edges from core vertex `u`.
    pub fn rays_entered_from<'a>(
        &'a self,
        u: &'a str,
    ) -> impl Iterator<Item = (&'a Ray, Multiplicity)> + 'a {
        self.rays
            .values()
            .filter_map(move |r| r.entry.get(u).map(|m| (r, *m)))
    }

    /// All out-edges of `v` as `(range, multiplicity)` in canonical slot order:
    /// core ranges by id, then ray heads by ray id. A ray position lists its
    /// spine edge first.
    pub fn out_edges(&self, v: &VertexRef) -> Vec<(VertexRef, Multiplicity)> {
        match v {
            VertexRef::Core(u) => self
                .core_successors(u)
                .map(|(d, m)| (VertexRef::core(d), m))
                .chain(
                    self.rays_entered_from(u)
                        .map(|(r, m)| (VertexRef::ray(r.id.clone(), 0), m)),
                )
                .collect(),
            VertexRef::Ray { ray, pos } => {
                let r = &self.rays[ray];
                std::iter::once((VertexRef::ray(ray.clone(), pos + 1), Multiplicity::ONE))
                    .chain(
                        r.targets_at(*pos)
                            .iter()
                            .map(|(t, &m)| (VertexRef::core(t.clone()), Multiplicity::Finite(m))),
                    )
                    .collect()
            }
        }
    }

    /// All in-edges of `v` as `(source, multiplicity)`. For a core vertex hit by a
    /// ray cycle, the ray contributes one entry per prefix position plus a single
    /// `ω` entry sourced at the first cycle position that hits it.
    pub fn in_edges(&self, v: &VertexRef) -> Vec<(VertexRef, Multiplicity)> {
        match v {
            VertexRef::Core(w) => {
                let mut out: Vec<_> = self
                    .edges
                    .iter()
                    .filter(|((_, d), _)| d == w)
                    .map(|((s, _), m)| (VertexRef::core(s.clone()), *m))
                    .collect();
                for r in self.rays.values() {
                    for (i, t) in r.prefix.iter().enumerate() {
                        if let Some(&m) = t.get(w) {
                            out.push((VertexRef::ray(r.id.clone(), i), Multiplicity::Finite(m)));
                        }
                    }
                    if let Some(i) = r.cycle.iter().position(|t| t.contains_key(w)) {
                        out.push((VertexRef::ray(r.id.clone(), r.prefix.len() + i), Omega));
                    }
                }
                out
            }
            VertexRef::Ray { ray, pos: 0 } => self.rays[ray]
                .entry
                .iter()
                .map(|(s, m)| (VertexRef::core(s.clone()), *m))
                .collect(),
            VertexRef::Ray { ray, pos } => {
                vec![(VertexRef::ray(ray.clone(), pos - 1), Multiplicity::ONE)]
            }
        }
    }

    pub fn out_degree(&self, v: &VertexRef) -> Multiplicity {
        match v {
            VertexRef::Core(u) => {
                self.core_successors(u)
                    .map(|(_, m)| m)
                    .sum::<Multiplicity>()
                    + self.rays_entered_from(u).map(|(_, m)| m).sum()
            }
            VertexRef::Ray { ray, pos } => {
                Multiplicity::ONE
                    + self.rays[ray]
                        .targets_at(*pos)
                        .values()
                        .map(|&m| Multiplicity::Finite(m))
                        .sum()
            }
        }
    }

    pub fn in_degree(&self, v: &VertexRef) -> Multiplicity {
        match v {
            VertexRef::Core(w) => {
                self.edges
                    .iter()
                    .filter(|((_, d), _)| d == w)
                    .map(|(_, m)| *m)
                    .sum::<Multiplicity>()
                    + self.rays.values().map(|r| r.mult_into(w)).sum()
            }
            VertexRef::Ray { ray, pos: 0 } => self.rays[ray].entry_total(),
            VertexRef::Ray { .. } => Multiplicity::ONE,
        }
    }

    /// Number of parallel copies of `from -> to` (zero if none).
    pub fn edge_multiplicity(&self, from: &VertexRef, to: &VertexRef) -> Multiplicity {
        match (from, to) {
            (VertexRef::Core(s), VertexRef::Core(d)) => self
                .edges
                .get(&(s.clone(), d.clone()))
                .copied()
                .unwrap_or_default(),
            (VertexRef::Core(s), VertexRef::Ray { ray, pos: 0 }) => self
                .rays
                .get(ray)
                .and_then(|r| r.entry.get(s))
                .copied()
                .unwrap_or_default(),
            (VertexRef::Ray { ray, pos }, VertexRef::Ray { ray: r2, pos: p2 })
                if ray == r2 && *p2 == pos + 1 && self.rays.contains_key(ray) =>
            {
                Multiplicity::ONE
            }
            (VertexRef::Ray { ray, pos }, VertexRef::Core(d)) => self
                .rays
                .get(ray)
                .and_then(|r| r.targets_at(*pos).get(d))
                .map(|&m| Multiplicity::Finite(m))
                .unwrap_or_default(),
            _ => Multiplicity::ZERO,
        }
    }

    pub fn is_sink(&self, v: &VertexRef) -> bool {
        self.out_degree(v).is_zero()
    }

    pub fn is_infinite_emitter(&self, v: &VertexRef) -> bool {
        self.out_degree(v).is_omega()
    }

    pub fn is_row_finite(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| !self.is_infinite_emitter(&VertexRef::core(v.clone())))
    }

    /// Sinks and infinite emitters. Ray positions always emit their spine edge and
    /// finitely many others, so only core vertices can appear.
    pub fn singularities(&self) -> BTreeSet<VertexRef> {
        self.vertices
            .iter()
            .map(|v| VertexRef::core(v.clone()))
            .filter(|v| {
                let d = self.out_degree(v);
                d.is_zero() || d.is_omega()
            })
            .collect()
    }

    /// Everything reachable from `from` by finite paths (length zero included).
    pub fn reachable_from(&self, from: &VertexSet) -> VertexSet {
        let mut out = from.clone();
        let mut core_queue: VecDeque<String> = from.core.iter().cloned().collect();
        let mut ray_queue: VecDeque<String> = from.rays.keys().cloned().collect();
        while !core_queue.is_empty() || !ray_queue.is_empty() {
            while let Some(u) = core_queue.pop_front() {
                for (d, _) in self.core_successors(&u) {
                    if out.core.insert(d.to_string()) {
                        core_queue.push_back(d.to_string());
                    }
                }
                for (r, _) in self.rays_entered_from(&u) {
                    if out.lower_ray(&r.id, 0) {
                        ray_queue.push_back(r.id.clone());
                    }
                }
            }
            while let Some(rid) = ray_queue.pop_front() {
                let start = out.rays[&rid];
                for t in self.rays[&rid].targets_from(start) {
                    if out.core.insert(t.to_string()) {
                        core_queue.push_back(t.to_string());
                    }
                }
            }
        }
        out
    }

    /// Whether some member of `from` has a finite path to `to`.
    pub fn reaches(&self, from: &VertexSet, to: &VertexRef) -> bool {
        self.reachable_from(from).contains(to)
    }

    /// The whole vertex set `E⁰`.
    pub fn all_vertices(&self) -> VertexSet {
        VertexSet {
            core: self.vertices.clone(),
            rays: self.rays.keys().map(|r| (r.clone(), 0)).collect(),
        }
    }

    /// Simple cycles whose vertices all lie in `restrict_to`, each rotated to start
    /// at its least vertex, sorted.
    ///
    /// A cycle can run through a ray from `x0` to some `xk` and leave by a target
    /// edge. Ray targets are periodic, so such cycles come in infinite families;
    /// only the member leaving at the first position with that target is listed.
    /// The list is empty exactly when the induced subgraph is acyclic.
    pub fn simple_cycles(&self, restrict_to: &VertexSet) -> Vec<Cycle> {
        let window = self.window_graph();
        let keep: Vec<bool> = window
            .nodes
            .iter()
            .map(|v| restrict_to.contains(v))
            .collect();
        let n = window.nodes.len();
        let mut cycles = Vec::new();
        for s in 0..n {
            if !keep[s] {
                continue;
            }
            // cycles whose least node index is s
            let mut stack = vec![(s, 0usize)];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&w) = window.adj[v].get(*next) {
                    *next += 1;
                    if w == s {
                        cycles.push(Cycle::canonical(
                            stack
                                .iter()
                                .map(|&(x, _)| window.nodes[x].clone())
                                .collect(),
                        ));
                    } else if w > s && keep[w] && !on_path[w] {
                        on_path[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    on_path[v] = false;
                    stack.pop();
                }
            }
        }
        cycles.sort();
        cycles
    }

    /// Every maximal tail.
    pub fn detect_tails(&self) -> Vec<TailWitness> {
        let mut out = Vec::new();
        for r in self.rays.values() {
            if !r.has_empty_cycle_targets() {
                continue;
            }
            let first_pos = r
                .prefix
                .iter()
                .rposition(|t| !t.is_empty())
                .map_or(0, |i| i + 1);
            let mut chain: Vec<String> = Vec::new();
            if first_pos == 0 && r.entry_total() == Multiplicity::ONE {
                let (src, _) = r.entry.iter().next().expect("entry total is one");
                let mut head = src.clone();
                loop {
                    let hv = VertexRef::core(head.clone());
                    if self.out_degree(&hv) != Multiplicity::ONE || chain.contains(&head) {
                        break;
                    }
                    chain.insert(0, head.clone());
                    let preds = self.in_edges(&hv);
                    match preds.as_slice() {
                        [(VertexRef::Core(p), m)] if *m == Multiplicity::ONE => head = p.clone(),
                        _ => break,
                    }
                }
            }
            out.push(TailWitness {
                ray: r.id.clone(),
                chain,
                first_pos,
            });
        }
        out
    }

    /// Cuts every ray after spine position `depth`: positions `0..=depth` become core
    /// vertices named `R.xk` keeping their target edges; the last one loses its
    /// spine edge.
    pub fn materialize(&self, depth: usize) -> Graph {
        self.unroll(|_| depth)
    }

    /// Materialization to each ray's own window, i.e. positions
    /// `0..|prefix|+|cycle|`.
    pub(crate) fn materialize_window(&self) -> Graph {
        self.unroll(|r| r.window() - 1)
    }

    fn unroll(&self, depth_of: impl Fn(&Ray) -> usize) -> Graph {
        let mut g = Graph {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            rays: BTreeMap::new(),
        };
        for r in self.rays.values() {
            let depth = depth_of(r);
            let name = |k: usize| format!("{}.x{k}", r.id);
            for k in 0..=depth {
                g.vertices.insert(name(k));
                if k < depth {
                    g.edges.insert((name(k), name(k + 1)), Multiplicity::ONE);
                }
                for (t, &m) in r.targets_at(k) {
                    g.edges
                        .insert((name(k), t.clone()), Multiplicity::Finite(m));
                }
            }
            for (s, &m) in &r.entry {
                g.edges.insert((s.clone(), name(0)), m);
            }
        }
        g
    }

    /// The finite graph of [`Graph::materialize_window`] as indexed adjacency,
    /// with nodes named by their [`VertexRef`] in this graph.
    fn window_graph(&self) -> IndexedGraph {
        let mut nodes: Vec<VertexRef> = self
            .vertices
            .iter()
            .map(|v| VertexRef::core(v.clone()))
            .collect();
        for r in self.rays.values() {
            nodes.extend((0..r.window()).map(|k| VertexRef::ray(r.id.clone(), k)));
        }
        nodes.sort();
        let index: BTreeMap<&VertexRef, usize> =
            nodes.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let adj = nodes
            .iter()
            .map(|v| {
                self.out_edges(v)
                    .into_iter()
                    .filter_map(|(w, _)| index.get(&w).copied())
                    .collect()
            })
            .collect();
        IndexedGraph { nodes, adj }
    }
}

impl Ray {
    fn to_spec(&self) -> RaySpec {
        let conv = |t: &Targets| {
            t.iter()
                .map(|(d, &m)| (d.clone(), Multiplicity::Finite(m)))
                .collect()
        };
        RaySpec {
            id: self.id.clone(),
            entry: self.entry.iter().map(|(s, m)| (s.clone(), *m)).collect(),
            prefix: self.prefix.iter().map(conv).collect(),
            cycle: self.cycle.iter().map(conv).collect(),
        }
    }
}

struct IndexedGraph {
    nodes: Vec<VertexRef>,
    adj: Vec<Vec<usize>>,
}

/// Membership of one ray in a [`VertexSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayState {
    None,
    AllFrom(usize),
}

/// A set of vertices: core members plus, per ray, nothing or a spine suffix
/// `{xk, xk+1, …}`. Suffixes are the only ray subsets that hereditary sets and
/// reachability closures produce.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet {
    core: BTreeSet<String>,
    rays: BTreeMap<String, usize>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_core<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VertexSet {
            core: ids.into_iter().map(Into::into).collect(),
            rays: BTreeMap::new(),
        }
    }

    pub fn with_ray_from(mut self, ray: impl Into<String>, k: usize) -> Self {
        self.lower_ray(&ray.into(), k);
        self
    }

    pub fn insert_core(&mut self, id: impl Into<String>) -> bool {
        self.core.insert(id.into())
    }

    pub fn remove_core(&mut self, id: &str) -> bool {
        self.core.remove(id)
    }

    /// Sets the ray state to `AllFrom(min(current, k))`; true if it changed.
    pub fn lower_ray(&mut self, ray: &str, k: usize) -> bool {
        match self.rays.get_mut(ray) {
            Some(cur) if *cur <= k => false,
            Some(cur) => {
                *cur = k;
                true
            }
            None => {
                self.rays.insert(ray.to_string(), k);
                true
            }
        }
    }

    pub fn set_ray(&mut self, ray: &str, state: RayState) {
        match state {
            RayState::None => {
                self.rays.remove(ray);
            }
            RayState::AllFrom(k) => {
                self.rays.insert(ray.to_string(), k);
            }
        }
    }

    pub fn core(&self) -> &BTreeSet<String> {
        &self.core
    }

    pub fn ray_state(&self, ray: &str) -> RayState {
        self.rays
            .get(ray)
            .map_or(RayState::None, |&k| RayState::AllFrom(k))
    }

    /// Rays with a non-empty state, as `(id, k)` for `AllFrom(k)`.
    pub fn ray_states(&self) -> impl Iterator<Item = (&str, usize)> {
        self.rays.iter().map(|(r, &k)| (r.as_str(), k))
    }

    pub fn has_ray_members(&self) -> bool {
        !self.rays.is_empty()
    }

    pub fn contains_core(&self, id: &str) -> bool {
        self.core.contains(id)
    }

    pub fn contains(&self, v: &VertexRef) -> bool {
        match v {
            VertexRef::Core(id) => self.core.contains(id),
            VertexRef::Ray { ray, pos } => self.rays.get(ray).is_some_and(|&k| k <= *pos),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty() && self.rays.is_empty()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.core.is_subset(&other.core)
            && self
                .rays
                .iter()
                .all(|(r, &k)| other.rays.get(r).is_some_and(|&j| j <= k))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.core.extend(other.core.iter().cloned());
        for (r, &k) in &other.rays {
            out.lower_ray(r, k);
        }
        out
    }

    /// Same set restricted to core vertices.
    pub fn core_only(&self) -> VertexSet {
        VertexSet::from_core(self.core.iter().cloned())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for c in &self.core {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            f.write_str(c)?;
        }
        for (r, k) in &self.rays {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{r}.x{k}..")?;
        }
        f.write_str("}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
