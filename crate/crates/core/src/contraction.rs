//! Path families `B_v` and the contracted graph.
//!
//! `B_v` is the set of non-trivial paths from `v` that end in `G⁰` and whose
//! interior vertices all lie in `T = E⁰ ∖ G⁰`. With `T` acyclic the set is
//! described by finitely many generators: explicit paths, plus families that
//! take one of infinitely many parallel copies of an `ω` edge or leave a ray at
//! one of infinitely many periodically repeating positions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::conditions::{check_theorem, induced_t};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexRef, VertexSet};
use crate::multiplicity::{Multiplicity, Omega};
use crate::path::Path;

/// Which parallel copy of an edge a generator takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Index(u64),
    /// Any one of the infinitely many copies of an `ω` edge.
    Any,
}

/// One piece of a path generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Segment {
    Edge {
        to: VertexRef,
        slot: Slot,
    },
    /// From `ray.x{from}` run the spine to `ray.x{first + m·period}` for some
    /// `m ≥ 0`, then take copy `slot` of the edge to the core vertex `target`.
    PeriodicExit {
        ray: String,
        from: usize,
        first: usize,
        period: usize,
        target: String,
        slot: u64,
    },
}

/// A finite path, or a symbolic description of countably many paths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathGenerator {
    pub start: VertexRef,
    pub segments: Vec<Segment>,
}

impl PathGenerator {
    pub fn end(&self) -> VertexRef {
        match self.segments.last() {
            None => self.start.clone(),
            Some(Segment::Edge { to, .. }) => to.clone(),
            Some(Segment::PeriodicExit { target, .. }) => VertexRef::core(target.clone()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.segments.iter().all(|s| {
            matches!(
                s,
                Segment::Edge {
                    slot: Slot::Index(_),
                    ..
                }
            )
        })
    }

    /// The single path denoted, when the generator is finite.
    pub fn as_path(&self) -> Option<Path> {
        let mut p = Path::trivial(self.start.clone());
        for s in &self.segments {
            match s {
                Segment::Edge {
                    to,
                    slot: Slot::Index(i),
                } => p.push(to.clone(), *i),
                _ => return None,
            }
        }
        Some(p)
    }

    /// Length of the shortest denoted path; `ω` bounds are unbounded above.
    fn length(&self) -> Multiplicity {
        let mut n = 0u64;
        for s in &self.segments {
            match s {
                Segment::Edge { .. } => n += 1,
                Segment::PeriodicExit { .. } => return Omega,
            }
        }
        Multiplicity::Finite(n)
    }

    /// The `m`-th member, choosing index `m` for every `Any` slot and the `m`-th
    /// repetition for every periodic exit.
    pub fn instance(&self, m: u64) -> Path {
        let mut p = Path::trivial(self.start.clone());
        for s in &self.segments {
            match s {
                Segment::Edge { to, slot } => {
                    let i = match slot {
                        Slot::Index(i) => *i,
                        Slot::Any => m,
                    };
                    p.push(to.clone(), i);
                }
                Segment::PeriodicExit {
                    ray,
                    from,
                    first,
                    period,
                    target,
                    slot,
                } => {
                    let exit = first + m as usize * period;
                    for k in from + 1..=exit {
                        p.push(VertexRef::ray(ray.clone(), k), 0);
                    }
                    p.push(VertexRef::core(target.clone()), *slot);
                }
            }
        }
        p
    }
}

impl fmt::Display for PathGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.segments {
            match s {
                Segment::Edge { to, slot } => {
                    write!(f, " -> {to}")?;
                    match slot {
                        Slot::Index(0) => {}
                        Slot::Index(i) => write!(f, "#{i}")?,
                        Slot::Any => f.write_str("#*")?,
                    }
                }
                Segment::PeriodicExit {
                    ray,
                    first,
                    period,
                    target,
                    slot,
                    ..
                } => {
                    write!(f, " -> {ray}.x[{first}+{period}m] -> {target}")?;
                    if *slot > 0 {
                        write!(f, "#{slot}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for PathGenerator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `B_v` for one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    pub owner: VertexRef,
    /// Sorted by (end vertex, length, edge choices).
    pub finite_part: Vec<Path>,
    pub infinite_families: Vec<PathGenerator>,
    pub cardinality: Multiplicity,
    /// `N(v)`; `None` when the family is empty.
    pub max_length: Option<Multiplicity>,
}

impl PathFamily {
    pub fn is_empty(&self) -> bool {
        self.cardinality.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.cardinality.is_omega()
    }

    /// Every listed path starts at the owner, ends in `G⁰`, stays in `T` in
    /// between and is not a proper prefix of another.
    pub fn validate(&self, g: &Graph, g0: &VertexSet) -> bool {
        let good = |p: &Path| {
            p.validate(g)
                && !p.is_empty()
                && p.start == self.owner
                && g0.contains(p.end())
                && p.steps[..p.len() - 1].iter().all(|s| !g0.contains(&s.to))
        };
        let samples: Vec<Path> = self
            .infinite_families
            .iter()
            .flat_map(|f| (0..3).map(|m| f.instance(m)))
            .collect();
        let all: Vec<&Path> = self.finite_part.iter().chain(samples.iter()).collect();
        all.iter().all(|p| good(p))
            && all
                .iter()
                .all(|p| all.iter().all(|q| !p.is_proper_prefix_of(q)))
    }
}

/// Enumerates `B_v`. Requires `T` acyclic.
pub fn enumerate_bv(g: &Graph, g0: &VertexSet, v: &VertexRef) -> Result<PathFamily> {
    let t = induced_t(g, g0)?;
    if let Some(c) = t.cycles().first() {
        return Err(Error::TNotAcyclic(c.clone()));
    }
    if !g.contains(v) {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let mut found = Vec::new();
    let mut walker = Walker {
        g,
        g0,
        found: &mut found,
    };
    let mut prefix = Vec::new();
    walker.walk_from(v, &mut prefix);
    Ok(family_from(v.clone(), found))
}

fn family_from(owner: VertexRef, found: Vec<PathGenerator>) -> PathFamily {
    let mut finite_part = Vec::new();
    let mut infinite_families = Vec::new();
    let mut max_length: Option<Multiplicity> = None;
    for gen in found {
        let len = gen.length();
        max_length = Some(max_length.map_or(len, |m| m.max(len)));
        match gen.as_path() {
            Some(p) => finite_part.push(p),
            None => infinite_families.push(gen),
        }
    }
    finite_part.sort_by(|a, b| (a.end(), a.len(), &a.steps).cmp(&(b.end(), b.len(), &b.steps)));
    infinite_families.sort_by(|a, b| (a.end(), &a.segments).cmp(&(b.end(), &b.segments)));
    let mut cardinality = Multiplicity::Finite(finite_part.len() as u64);
    if !infinite_families.is_empty() {
        cardinality = Omega;
    }
    PathFamily {
        owner,
        finite_part,
        infinite_families,
        cardinality,
        max_length,
    }
}

struct Walker<'a> {
    g: &'a Graph,
    g0: &'a VertexSet,
    found: &'a mut Vec<PathGenerator>,
}

impl Walker<'_> {
    fn start(&self, prefix: &[Segment]) -> VertexRef {
        // the owner is stored as the first pseudo-segment
        match &prefix[0] {
            Segment::Edge { to, .. } => to.clone(),
            _ => unreachable!(),
        }
    }

    fn emit(&mut self, prefix: &[Segment]) {
        self.found.push(PathGenerator {
            start: self.start(prefix),
            segments: prefix[1..].to_vec(),
        });
    }

    fn walk_from(&mut self, v: &VertexRef, prefix: &mut Vec<Segment>) {
        prefix.push(Segment::Edge {
            to: v.clone(),
            slot: Slot::Index(0),
        });
        match v {
            VertexRef::Core(u) => self.out_of_core(u, prefix),
            VertexRef::Ray { ray, pos } => self.along_ray(ray, *pos, prefix),
        }
        prefix.pop();
    }

    /// Continue from core vertex `u` (the end of `prefix`).
    fn out_of_core(&mut self, u: &str, prefix: &mut Vec<Segment>) {
        for (w, m) in self.g.out_edges(&VertexRef::core(u)) {
            let slots: Vec<Slot> = match m {
                Multiplicity::Finite(n) => (0..n).map(Slot::Index).collect(),
                Multiplicity::Omega => vec![Slot::Any],
            };
            for slot in slots {
                prefix.push(Segment::Edge {
                    to: w.clone(),
                    slot,
                });
                self.arrive(&w, prefix);
                prefix.pop();
            }
        }
    }

    /// `prefix` has just arrived at `w`.
    fn arrive(&mut self, w: &VertexRef, prefix: &mut Vec<Segment>) {
        if self.g0.contains(w) {
            self.emit(prefix);
            return;
        }
        match w {
            VertexRef::Core(c) => self.out_of_core(c, prefix),
            VertexRef::Ray { ray, pos } => self.along_ray(ray, *pos, prefix),
        }
    }

    /// `prefix` sits at `ray.x{k}`; all ray positions are in `T`.
    fn along_ray(&mut self, ray: &str, k: usize, prefix: &mut Vec<Segment>) {
        let r = self.g.ray(ray).expect("ray exists");
        let explicit_end = k.max(r.prefix().len());
        let base = prefix.len();
        for pos in k..explicit_end {
            if pos > k {
                prefix.push(Segment::Edge {
                    to: VertexRef::ray(ray, pos),
                    slot: Slot::Index(0),
                });
            }
            for (d, &m) in r.targets_at(pos) {
                for slot in 0..m {
                    let w = VertexRef::core(d.clone());
                    prefix.push(Segment::Edge {
                        to: w.clone(),
                        slot: Slot::Index(slot),
                    });
                    self.arrive(&w, prefix);
                    prefix.pop();
                }
            }
        }
        prefix.truncate(base);
        let from = k;
        for first in explicit_end..explicit_end + r.period() {
            for (d, &m) in r.targets_at(first) {
                for slot in 0..m {
                    prefix.push(Segment::PeriodicExit {
                        ray: ray.to_string(),
                        from,
                        first,
                        period: r.period(),
                        target: d.clone(),
                        slot,
                    });
                    let w = VertexRef::core(d.clone());
                    self.arrive(&w, prefix);
                    prefix.pop();
                }
            }
        }
    }
}

/// Whether [`contract`] first requires [`check_theorem`] to pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Checked,
    /// Only `T` acyclic is required.
    Unchecked,
}

/// Result of a contraction: a graph on `G⁰` and the generators behind each edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractedGraph {
    #[serde(skip)]
    pub graph: Graph,
    /// `(u, w)` to the generators of `B_u` ending at `w`.
    #[serde(serialize_with = "serialize_provenance")]
    pub provenance: BTreeMap<(String, String), Vec<PathGenerator>>,
    /// The conditions were verified before contracting.
    pub checked: bool,
}

fn serialize_provenance<S: Serializer>(
    p: &BTreeMap<(String, String), Vec<PathGenerator>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(p.iter().map(|((u, w), gens)| (format!("{u} -> {w}"), gens)))
}

/// Builds the graph on `G⁰` with one edge for each path of each `B_u`.
pub fn contract(g: &Graph, g0: &VertexSet, mode: Mode) -> Result<ContractedGraph> {
    if mode == Mode::Checked {
        let verdict = check_theorem(g, g0)?;
        if !verdict.pass {
            return Err(Error::ConditionsFailed(Box::new(verdict)));
        }
    } else if let Some(c) = induced_t(g, g0)?.cycles().first() {
        return Err(Error::TNotAcyclic(c.clone()));
    }

    let mut b = Graph::builder().vertices(g0.core().iter().cloned());
    let mut provenance: BTreeMap<(String, String), Vec<PathGenerator>> = BTreeMap::new();
    for u in g0.core() {
        let family = enumerate_bv(g, g0, &VertexRef::core(u.clone()))?;
        let mut mult: BTreeMap<String, Multiplicity> = BTreeMap::new();
        for p in &family.finite_part {
            let w = p.end().as_core().expect("G0 is core").to_string();
            let e = mult.entry(w.clone()).or_default();
            *e = *e + Multiplicity::ONE;
            provenance
                .entry((u.clone(), w))
                .or_default()
                .push(PathGenerator {
                    start: p.start.clone(),
                    segments: p
                        .steps
                        .iter()
                        .map(|s| Segment::Edge {
                            to: s.to.clone(),
                            slot: Slot::Index(s.slot),
                        })
                        .collect(),
                });
        }
        for gen in &family.infinite_families {
            let w = gen.end().as_core().expect("G0 is core").to_string();
            mult.insert(w.clone(), Omega);
            provenance
                .entry((u.clone(), w))
                .or_default()
                .push(gen.clone());
        }
        for (w, m) in mult {
            b = b.edge(u.clone(), w, m);
        }
    }
    Ok(ContractedGraph {
        graph: b.build()?,
        provenance,
        checked: mode == Mode::Checked,
    })
}

/// Expands `v` by the Cuntz–Krieger rule: replace a leaf path ending outside
/// `G⁰` by its one-edge extensions, starting from `v` itself. Returns the leaves
/// once all end in `G⁰`, sorted.
pub fn ck_expand(g: &Graph, g0: &VertexSet, v: &VertexRef) -> Result<Vec<Path>> {
    let family = enumerate_bv(g, g0, v)?;
    if family.is_empty() {
        return Err(Error::BvEmpty(v.to_string()));
    }
    if !family.is_finite() {
        return Err(Error::BvInfinite(v.to_string()));
    }
    let bound = family
        .max_length
        .and_then(Multiplicity::finite)
        .expect("finite non-empty family has a length bound");

    let expand = |p: &Path| -> Result<Vec<Path>> {
        let end = p.end();
        let d = g.out_degree(end);
        if d.is_zero() || d.is_omega() {
            return Err(Error::SingularLeaf {
                vertex: v.to_string(),
                leaf: end.to_string(),
            });
        }
        let mut out = Vec::new();
        for (w, m) in g.out_edges(end) {
            for slot in 0..m.finite().expect("finite degree") {
                out.push(p.then(w.clone(), slot));
            }
        }
        Ok(out)
    };

    let mut leaves = expand(&Path::trivial(v.clone()))?;
    let mut rounds = 1u64;
    while leaves.iter().any(|p| !g0.contains(p.end())) {
        if rounds >= bound {
            return Err(Error::Nonterminating(v.to_string()));
        }
        let mut next = Vec::new();
        for p in leaves {
            if g0.contains(p.end()) {
                next.push(p);
            } else {
                next.extend(expand(&p)?);
            }
        }
        leaves = next;
        rounds += 1;
    }
    leaves.sort();
    Ok(leaves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(ids: &[&str]) -> VertexSet {
        VertexSet::from_core(ids.iter().copied())
    }

    fn strings(ps: &[Path]) -> Vec<String> {
        ps.iter().map(Path::to_string).collect()
    }

    #[test]
    fn b2_family() {
        let g = fixtures::b2();
        let g0 = set(&["v", "w"]);
        let f = enumerate_bv(&g, &g0, &VertexRef::core("v")).unwrap();
        assert_eq!(
            strings(&f.finite_part),
            ["v -> t0 -> ta -> w", "v -> t0 -> tb -> w"]
        );
        assert_eq!(f.cardinality, Multiplicity::Finite(2));
        assert_eq!(f.max_length, Some(Multiplicity::Finite(3)));
        assert!(f.validate(&g, &g0));

        let w = enumerate_bv(&g, &g0, &VertexRef::core("w")).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.max_length, None);
    }

    #[test]
    fn vi_e_family_is_infinite() {
        let g = fixtures::vi_e();
        let g0 = set(&["v", "w"]);
        let f = enumerate_bv(&g, &g0, &VertexRef::core("v")).unwrap();
        assert_eq!(strings(&f.finite_part), ["v -> w"]);
        assert_eq!(f.infinite_families.len(), 2);
        assert_eq!(
            f.infinite_families[0].to_string(),
            "v -> L.x0 -> L.x[0+1m] -> w"
        );
        assert_eq!(f.cardinality, Omega);
        assert_eq!(f.max_length, Some(Omega));
        assert!(f.validate(&g, &g0));
        assert_eq!(
            f.infinite_families[1].instance(2).to_string(),
            "v -> R.x0 -> R.x1 -> R.x2 -> w"
        );
    }

    #[test]
    fn contract_examples() {
        let c = contract(&fixtures::b2(), &set(&["v", "w"]), Mode::Checked).unwrap();
        let expected = Graph::builder()
            .vertices(["v", "w"])
            .edge("v", "w", 2)
            .build()
            .unwrap();
        assert_eq!(c.graph, expected);
        assert_eq!(c.provenance[&("v".to_string(), "w".to_string())].len(), 2);

        let e = contract(&fixtures::vi_e(), &set(&["v", "w"]), Mode::Unchecked).unwrap();
        assert_eq!(e.graph, fixtures::inf());
        assert!(matches!(
            contract(&fixtures::vi_e(), &set(&["v", "w"]), Mode::Checked),
            Err(Error::ConditionsFailed(_))
        ));
        assert!(matches!(
            contract(&fixtures::loop_graph(), &VertexSet::new(), Mode::Unchecked),
            Err(Error::TNotAcyclic(_))
        ));
    }

    #[test]
    fn identity_contraction_on_rayless_fixtures() {
        for (name, g) in fixtures::all() {
            if g.has_rays() {
                continue;
            }
            let c = contract(&g, &g.all_vertices(), Mode::Checked).unwrap();
            assert_eq!(c.graph, g, "{name}");
        }
    }

    #[test]
    fn ck_expand_matches_enumeration() {
        let g = fixtures::b2();
        let g0 = set(&["v", "w"]);
        let v = ck_expand(&g, &g0, &VertexRef::core("v")).unwrap();
        assert_eq!(strings(&v), ["v -> t0 -> ta -> w", "v -> t0 -> tb -> w"]);
        let t0 = ck_expand(&g, &g0, &VertexRef::core("t0")).unwrap();
        assert_eq!(strings(&t0), ["t0 -> ta -> w", "t0 -> tb -> w"]);
        assert!(matches!(
            ck_expand(&g, &g0, &VertexRef::core("w")),
            Err(Error::BvEmpty(_))
        ));
        assert!(matches!(
            ck_expand(&fixtures::vi_e(), &g0, &VertexRef::core("v")),
            Err(Error::BvInfinite(_))
        ));

        let single = Graph::builder()
            .vertices(["v", "w"])
            .edge("v", "w", 1)
            .build()
            .unwrap();
        assert_eq!(
            strings(&ck_expand(&single, &g0, &VertexRef::core("v")).unwrap()),
            ["v -> w"]
        );
    }

    #[test]
    fn omega_edge_gives_any_slot_family() {
        let g = fixtures::inf();
        let f = enumerate_bv(&g, &g.all_vertices(), &VertexRef::core("v")).unwrap();
        assert!(f.finite_part.is_empty());
        assert_eq!(f.infinite_families[0].to_string(), "v -> w#*");
        assert_eq!(f.max_length, Some(Multiplicity::ONE));
    }
}
