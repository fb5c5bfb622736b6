//! Graph moves: desingularization, delays, shift-equivalence splitting, skew
//! products and tail removal.

use std::collections::{BTreeMap, BTreeSet};

use crate::contraction::{contract, ContractedGraph, Mode};
use crate::error::{Error, EsseSide, Result};
use crate::graph::{Graph, GraphBuilder, RaySpec, VertexRef, VertexSet};
use crate::multiplicity::{Multiplicity, Omega};

/// Stage assignment for the unit edge slots at one vertex.
///
/// Slots follow [`Graph::out_edges`] order for out-delays (core ranges by id,
/// then ray heads) and [`Graph::in_edges`] order for in-delays, with each edge of
/// multiplicity `n` contributing `n` consecutive slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelayPlan {
    pub vertex: String,
    pub stages: Vec<usize>,
}

/// Edge labels in `ℤ_p`, one per global edge slot (see [`edge_slots`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleLabeling {
    modulus: u64,
    labels: BTreeMap<usize, u64>,
}

impl CocycleLabeling {
    pub fn new(modulus: u64, labels: BTreeMap<usize, u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidLabel("modulus must be at least 1".into()));
        }
        if let Some((slot, l)) = labels.iter().find(|(_, &l)| l >= modulus) {
            return Err(Error::InvalidLabel(format!(
                "label {l} of slot {slot} is not below {modulus}"
            )));
        }
        Ok(CocycleLabeling { modulus, labels })
    }

    /// Every slot carries label 0.
    pub fn zero(modulus: u64) -> Result<Self> {
        Self::new(modulus, BTreeMap::new())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn label(&self, slot: usize) -> u64 {
        self.labels.get(&slot).copied().unwrap_or(0)
    }

    fn max_slot(&self) -> Option<usize> {
        self.labels.keys().next_back().copied()
    }
}

/// Global edge slots of a rayless graph: edges in sorted order, a finite edge
/// of multiplicity `n` giving `n` slots of multiplicity one and an `ω` edge a
/// single slot of multiplicity `ω`.
pub fn edge_slots(g: &Graph) -> Vec<(String, String, Multiplicity)> {
    let mut out = Vec::new();
    for (s, d, m) in g.edges() {
        match m {
            Multiplicity::Finite(n) => {
                out.extend((0..n).map(|_| (s.to_string(), d.to_string(), Multiplicity::ONE)))
            }
            Multiplicity::Omega => out.push((s.to_string(), d.to_string(), Omega)),
        }
    }
    out
}

/// A fresh id built from `base`, avoiding `taken`.
fn fresh(base: String, taken: &BTreeSet<String>) -> String {
    let mut id = base;
    while taken.contains(&id) {
        id.push('\'');
    }
    id
}

fn taken_ids(g: &Graph) -> BTreeSet<String> {
    g.vertices()
        .iter()
        .cloned()
        .chain(g.rays().map(|r| r.id().to_string()))
        .collect()
}

/// Replaces every infinite emitter `v` by a row-finite gadget: each `ω` edge
/// `v -> w` becomes one edge `v -> w` plus the target `w` on a new ray fed once
/// by `v`, whose cycle visits the `ω` targets of `v` in id order.
pub fn desingularize(g: &Graph) -> Result<Graph> {
    if !g.detect_tails().is_empty() {
        return Err(Error::HasTails);
    }
    let mut taken = taken_ids(g);
    let mut b = GraphBuilder::new().vertices(g.vertices().iter().cloned());
    let mut rays: Vec<RaySpec> = Vec::new();
    for r in g.rays() {
        if let Some((s, _)) = r.entry().iter().find(|(_, m)| m.is_omega()) {
            return Err(Error::Unsupported(format!(
                "`{s}` feeds ray `{}` infinitely often",
                r.id()
            )));
        }
    }
    for v in g.vertices() {
        let mut omega_targets = Vec::new();
        for (w, m) in g.core_successors(v) {
            if m.is_omega() {
                omega_targets.push(w.to_string());
                b = b.edge(v.clone(), w, 1);
            } else {
                b = b.edge(v.clone(), w, m);
            }
        }
        if omega_targets.is_empty() {
            continue;
        }
        let id = fresh(format!("{v}.d"), &taken);
        taken.insert(id.clone());
        let mut spec = RaySpec::new(id).entry(v.clone(), 1);
        for w in omega_targets {
            spec = spec.cycle_position([(w, 1u64)]);
        }
        rays.push(spec);
    }
    let mut specs: Vec<RaySpec> = g.to_builder().into_rays();
    specs.extend(rays);
    for s in specs {
        b = b.ray(s);
    }
    b.build()
}

fn check_plan(plan: &DelayPlan, degree: Multiplicity) -> Result<usize> {
    let n = degree
        .finite()
        .ok_or_else(|| Error::InfiniteDegree(plan.vertex.clone()))?;
    if plan.stages.len() as u64 != n {
        return Err(Error::StageMismatch(format!(
            "`{}` has {n} edge slots but the plan lists {}",
            plan.vertex,
            plan.stages.len()
        )));
    }
    Ok(plan.stages.iter().copied().max().unwrap_or(0))
}

fn plans_by_vertex(g: &Graph, plans: &[DelayPlan]) -> Result<BTreeMap<String, DelayPlan>> {
    let mut out = BTreeMap::new();
    for p in plans {
        if !g.vertices().contains(&p.vertex) {
            return Err(Error::UnknownVertex(p.vertex.clone()));
        }
        if out.insert(p.vertex.clone(), p.clone()).is_some() {
            return Err(Error::StageMismatch(format!(
                "two plans for `{}`",
                p.vertex
            )));
        }
    }
    Ok(out)
}

/// Names `v_1, …, v_m` of a gantlet, avoiding existing ids.
fn gantlet(v: &str, m: usize, taken: &mut BTreeSet<String>) -> Vec<String> {
    let mut out = vec![v.to_string()];
    for k in 1..=m {
        let id = fresh(format!("{v}_{k}"), taken);
        taken.insert(id.clone());
        out.push(id);
    }
    out
}

/// Out-delay: `v` becomes the path `v = v_0 -> v_1 -> … -> v_m` and an out-edge at
/// stage `k` leaves from `v_k`. In-edges keep entering `v`.
pub fn out_delay(g: &Graph, plans: &[DelayPlan]) -> Result<Graph> {
    let plans = plans_by_vertex(g, plans)?;
    let mut taken = taken_ids(g);
    let mut edges: Vec<(String, String, Multiplicity)> = Vec::new();
    let mut entries: BTreeMap<String, Vec<(String, Multiplicity)>> = BTreeMap::new();
    let mut extra = Vec::new();
    for v in g.vertices() {
        let out = g.out_edges(&VertexRef::core(v.clone()));
        let Some(plan) = plans.get(v) else {
            for (w, m) in out {
                push_edge(&mut edges, &mut entries, v.clone(), w, m);
            }
            continue;
        };
        let m = check_plan(plan, g.out_degree(&VertexRef::core(v.clone())))?;
        let names = gantlet(v, m, &mut taken);
        for k in 1..names.len() {
            extra.push(names[k].clone());
            edges.push((names[k - 1].clone(), names[k].clone(), Multiplicity::ONE));
        }
        let mut slot = 0;
        for (w, mult) in out {
            for _ in 0..mult.finite().expect("checked finite") {
                let src = names[plan.stages[slot]].clone();
                push_edge(&mut edges, &mut entries, src, w.clone(), Multiplicity::ONE);
                slot += 1;
            }
        }
    }
    rebuild(g, extra, edges, entries, BTreeMap::new())
}

fn push_edge(
    edges: &mut Vec<(String, String, Multiplicity)>,
    entries: &mut BTreeMap<String, Vec<(String, Multiplicity)>>,
    src: String,
    dst: VertexRef,
    m: Multiplicity,
) {
    match dst {
        VertexRef::Core(d) => edges.push((src, d, m)),
        VertexRef::Ray { ray, .. } => entries.entry(ray).or_default().push((src, m)),
    }
}

/// Reassembles a graph from new core edges, ray entries and prefix target
/// renames `(ray, position, old target) -> [(new target, count)]`.
fn rebuild(
    g: &Graph,
    extra: Vec<String>,
    edges: Vec<(String, String, Multiplicity)>,
    entries: BTreeMap<String, Vec<(String, Multiplicity)>>,
    retarget: BTreeMap<(String, usize, String), Vec<(String, u64)>>,
) -> Result<Graph> {
    let mut b = GraphBuilder::new()
        .vertices(g.vertices().iter().cloned())
        .vertices(extra);
    for (s, d, m) in edges {
        b = b.edge(s, d, m);
    }
    for r in g.rays() {
        let mut spec = RaySpec::new(r.id());
        spec.entry = entries.get(r.id()).cloned().unwrap_or_default();
        for (pos, t) in r.prefix().iter().enumerate() {
            let mut targets = Vec::new();
            for (d, &m) in t {
                match retarget.get(&(r.id().to_string(), pos, d.clone())) {
                    Some(list) => {
                        targets.extend(list.iter().map(|(n, c)| (n.clone(), (*c).into())))
                    }
                    None => targets.push((d.clone(), m.into())),
                }
            }
            spec.prefix.push(targets);
        }
        spec.cycle = r
            .cycle()
            .iter()
            .map(|t| t.iter().map(|(d, &m)| (d.clone(), m.into())).collect())
            .collect();
        b = b.ray(spec);
    }
    b.build()
}

/// In-delay: a path `v_m -> … -> v_1 -> v_0 = v` is added and an in-edge at stage
/// `k` is redirected to `v_k`. Out-edges keep leaving from `v`. Vertices hit by a
/// ray cycle have infinite in-degree and cannot be delayed.
pub fn in_delay(g: &Graph, plans: &[DelayPlan]) -> Result<Graph> {
    let plans = plans_by_vertex(g, plans)?;
    let mut taken = taken_ids(g);
    let mut names: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut extra = Vec::new();
    let mut edges: Vec<(String, String, Multiplicity)> = Vec::new();
    // (source, old target, copy index) -> stage
    let mut stage_of: BTreeMap<(VertexRef, String), Vec<usize>> = BTreeMap::new();
    for (v, plan) in &plans {
        let vr = VertexRef::core(v.clone());
        let m = check_plan(plan, g.in_degree(&vr))?;
        let n = gantlet(v, m, &mut taken);
        for k in 1..n.len() {
            extra.push(n[k].clone());
            edges.push((n[k].clone(), n[k - 1].clone(), Multiplicity::ONE));
        }
        let mut slot = 0;
        for (src, mult) in g.in_edges(&vr) {
            let count = mult.finite().expect("finite in-degree");
            let list = stage_of.entry((src, v.clone())).or_default();
            for _ in 0..count {
                list.push(plan.stages[slot]);
                slot += 1;
            }
        }
        names.insert(v.clone(), n);
    }
    let target = |d: &str, stage: usize| names[d][stage].clone();
    let mut entries: BTreeMap<String, Vec<(String, Multiplicity)>> = BTreeMap::new();
    for (s, d, m) in g.edges() {
        match stage_of.get(&(VertexRef::core(s), d.to_string())) {
            Some(stages) => {
                for &k in stages {
                    edges.push((s.to_string(), target(d, k), Multiplicity::ONE));
                }
            }
            None => edges.push((s.to_string(), d.to_string(), m)),
        }
    }
    for r in g.rays() {
        for (s, m) in r.entry() {
            entries
                .entry(r.id().to_string())
                .or_default()
                .push((s.clone(), *m));
        }
    }
    let mut retarget: BTreeMap<(String, usize, String), Vec<(String, u64)>> = BTreeMap::new();
    for ((src, d), stages) in &stage_of {
        if let VertexRef::Ray { ray, pos } = src {
            let list = retarget.entry((ray.clone(), *pos, d.clone())).or_default();
            for &k in stages {
                list.push((target(d, k), 1));
            }
        }
    }
    rebuild(g, extra, edges, entries, retarget)
}

/// Splits a bipartite graph into the two contractions onto its sides. Each side
/// gets one edge per path of length two between its vertices.
pub fn esse_split(
    g3: &Graph,
    partition: (&VertexSet, &VertexSet),
) -> Result<(ContractedGraph, ContractedGraph)> {
    let (v1, v2) = partition;
    if g3.has_rays() {
        return Err(Error::HasRays);
    }
    if v1.has_ray_members() || v2.has_ray_members() {
        return Err(Error::NotBipartite("sides must be core vertex sets".into()));
    }
    for v in v1.core().iter().chain(v2.core()) {
        if !g3.vertices().contains(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    if let Some(v) = v1.core().intersection(v2.core()).next() {
        return Err(Error::NotBipartite(format!("`{v}` is on both sides")));
    }
    if let Some(v) = g3
        .vertices()
        .iter()
        .find(|v| !v1.contains_core(v) && !v2.contains_core(v))
    {
        return Err(Error::NotBipartite(format!("`{v}` is on neither side")));
    }
    if let Some((s, d, _)) = g3
        .edges()
        .find(|(s, d, _)| v1.contains_core(s) == v1.contains_core(d))
    {
        return Err(Error::NotBipartite(format!(
            "edge {s} -> {d} does not cross"
        )));
    }
    let side = |set: &VertexSet, side: EsseSide| {
        contract(g3, set, Mode::Checked).map_err(|e| match e {
            Error::ConditionsFailed(verdict) => Error::EsseConditionsFailed { side, verdict },
            other => other,
        })
    };
    Ok((side(v1, EsseSide::First)?, side(v2, EsseSide::Second)?))
}

/// Which way an edge label moves between fibres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `s@k -> r@(k+c)`.
    #[default]
    Forward,
    /// `s@k -> r@(k−c)`.
    Backward,
}

/// Skew product over `ℤ_p`: vertices `v@k`, and for each edge slot with label
/// `c` an edge `s@k -> r@(k+c mod p)` for every `k`.
pub fn skew_product(g: &Graph, c: &CocycleLabeling) -> Result<Graph> {
    skew_product_oriented(g, c, Orientation::Forward)
}

pub fn skew_product_oriented(
    g: &Graph,
    c: &CocycleLabeling,
    orientation: Orientation,
) -> Result<Graph> {
    if g.has_rays() {
        return Err(Error::HasRays);
    }
    let slots = edge_slots(g);
    if let Some(max) = c.max_slot() {
        if max >= slots.len() {
            return Err(Error::InvalidLabel(format!(
                "slot {max} does not exist; the graph has {} slots",
                slots.len()
            )));
        }
    }
    let p = c.modulus();
    let name = |v: &str, k: u64| format!("{v}@{k}");
    let mut b = GraphBuilder::new();
    for v in g.vertices() {
        b = b.vertices((0..p).map(|k| name(v, k)));
    }
    for (i, (s, d, m)) in slots.iter().enumerate() {
        let label = match orientation {
            Orientation::Forward => c.label(i),
            Orientation::Backward => (p - c.label(i)) % p,
        };
        for k in 0..p {
            b = b.edge(name(s, k), name(d, (k + label) % p), *m);
        }
    }
    b.build()
}

/// Replaces every maximal tail by a sink at its head. A tail that begins on a
/// core chain keeps the first chain vertex, now a sink; one that begins on the
/// ray keeps the ray's earlier positions as core vertices `R.xj` and ends in a
/// new sink `R.xk`.
pub fn tails_to_sinks(g: &Graph) -> Result<Graph> {
    let tails = g.detect_tails();
    if tails.is_empty() {
        return Ok(g.clone());
    }
    let mut removed_rays = BTreeSet::new();
    let mut removed_core = BTreeSet::new();
    let mut silenced = BTreeSet::new();
    let mut extra = Vec::new();
    let mut edges: Vec<(String, String, Multiplicity)> = Vec::new();
    for t in &tails {
        removed_rays.insert(t.ray.clone());
        let r = g.ray(&t.ray).expect("tail ray");
        if let Some((head, rest)) = t.chain.split_first() {
            silenced.insert(head.clone());
            removed_core.extend(rest.iter().cloned());
        } else {
            let name = |k: usize| format!("{}.x{k}", t.ray);
            for k in 0..=t.first_pos {
                extra.push(name(k));
            }
            for k in 0..t.first_pos {
                edges.push((name(k), name(k + 1), Multiplicity::ONE));
                for (d, &m) in r.targets_at(k) {
                    edges.push((name(k), d.clone(), m.into()));
                }
            }
            for (s, &m) in r.entry() {
                edges.push((s.clone(), name(0), m));
            }
        }
    }
    let mut b = GraphBuilder::new()
        .vertices(
            g.vertices()
                .iter()
                .filter(|v| !removed_core.contains(*v))
                .cloned(),
        )
        .vertices(extra);
    for (s, d, m) in g.edges() {
        if silenced.contains(s) || removed_core.contains(s) {
            continue;
        }
        b = b.edge(s, d, m);
    }
    for (s, d, m) in edges {
        b = b.edge(s, d, m);
    }
    for spec in g.to_builder().into_rays() {
        if !removed_rays.contains(&spec.id) {
            b = b.ray(spec);
        }
    }
    b.build()
}
