//! Saturated hereditary vertex sets.
//!
//! A set `H` is hereditary when it is closed under reachability and saturated
//! when every vertex with finitely many, but at least one, out-edges, all of
//! which land in `H`, is itself in `H`. On a ray, a hereditary set can only hold
//! a spine suffix `{xk, xk+1, …}`; saturation pulls `k` back while position
//! `k−1` sends all its edges into `H`. Nothing ever forces a ray in from
//! scratch, since each spine position depends on the next.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, RayState, VertexRef, VertexSet};

/// Default cap on core vertices for [`enumerate_sh`].
pub const DEFAULT_BOUND: usize = 20;

fn check_members(g: &Graph, x: &VertexSet) -> Result<()> {
    for v in x.core() {
        if !g.vertices().contains(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    for (r, _) in x.ray_states() {
        if g.ray(r).is_none() {
            return Err(Error::UnknownVertex(format!("{r}.x0")));
        }
    }
    Ok(())
}

/// One saturation pass. Returns whether anything was added.
fn saturate_once(g: &Graph, h: &mut VertexSet) -> bool {
    let mut changed = false;
    for u in g.vertices() {
        if h.contains_core(u) {
            continue;
        }
        let v = VertexRef::core(u.clone());
        let d = g.out_degree(&v);
        if d.is_zero() || d.is_omega() {
            continue;
        }
        if g.out_edges(&v).iter().all(|(w, _)| h.contains(w)) {
            h.insert_core(u.clone());
            changed = true;
        }
    }
    for r in g.rays() {
        if let RayState::AllFrom(k) = h.ray_state(r.id()) {
            if k > 0 && r.targets_at(k - 1).keys().all(|t| h.contains_core(t)) {
                h.lower_ray(r.id(), k - 1);
                changed = true;
            }
        }
    }
    changed
}

/// `ΣH(X)`: everything reachable from `X`, then saturated to a fixpoint.
pub fn closure_sh(g: &Graph, x: &VertexSet) -> Result<VertexSet> {
    check_members(g, x)?;
    let mut h = g.reachable_from(x);
    while saturate_once(g, &mut h) {}
    Ok(h)
}

pub fn is_hereditary(g: &Graph, h: &VertexSet) -> bool {
    g.reachable_from(h) == *h
}

pub fn is_saturated(g: &Graph, h: &VertexSet) -> bool {
    let mut copy = h.clone();
    !saturate_once(g, &mut copy)
}

/// `ΣH(G⁰)` is all of `E⁰`.
pub fn check_fullness(g: &Graph, g0: &VertexSet) -> Result<bool> {
    Ok(closure_sh(g, g0)? == g.all_vertices())
}

/// All saturated hereditary subsets of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SHFamily {
    /// Ordered by size, then by the set order.
    pub members: Vec<VertexSet>,
    pub nontrivial_count: usize,
    #[serde(skip)]
    full: VertexSet,
}

impl SHFamily {
    fn new(g: &Graph, mut members: Vec<VertexSet>) -> Self {
        let full = g.all_vertices();
        members.sort_by(|a, b| (weight(g, a), a).cmp(&(weight(g, b), b)));
        let nontrivial_count = members
            .iter()
            .filter(|h| !h.is_empty() && **h != full)
            .count();
        SHFamily {
            members,
            nontrivial_count,
            full,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indices `(i, j)` with `members[i] ⊊ members[j]` and nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.members.len();
        let below = |i: usize, j: usize| i != j && self.members[i].is_subset(&self.members[j]);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if below(i, j) && !(0..n).any(|k| below(i, k) && below(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Hasse diagram of the inclusion order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph sh {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, h) in self.members.iter().enumerate() {
            let label = if h.is_empty() {
                "∅".to_string()
            } else if *h == self.full {
                "E0".to_string()
            } else {
                h.to_string()
            };
            let _ = writeln!(out, "  h{i} [label=\"{}\"];", label.replace('"', "\\\""));
        }
        for (i, j) in self.covers() {
            let _ = writeln!(out, "  h{i} -> h{j};");
        }
        out.push_str("}\n");
        out
    }
}

/// Size used to order members: core count plus one per ray position class held.
fn weight(g: &Graph, h: &VertexSet) -> usize {
    h.core().len()
        + g.rays()
            .map(|r| match h.ray_state(r.id()) {
                RayState::None => 0,
                RayState::AllFrom(k) => r.prefix().len() + 1 - k.min(r.prefix().len()),
            })
            .sum::<usize>()
}

/// Items of the finite universe the closure operator acts on: core vertices and,
/// per ray, the markers "contains `xk`" for `k ≤ |prefix|`. Every saturated
/// hereditary set holding part of a ray holds it from some `k ≤ |prefix|` on.
#[derive(Debug, Clone)]
enum Item {
    Core(String),
    RayFrom(String, usize),
}

struct Universe {
    items: Vec<Item>,
}

impl Universe {
    fn new(g: &Graph) -> Self {
        let mut items: Vec<Item> = g.vertices().iter().map(|v| Item::Core(v.clone())).collect();
        for r in g.rays() {
            items.extend((0..=r.prefix().len()).map(|k| Item::RayFrom(r.id().to_string(), k)));
        }
        Universe { items }
    }

    fn decode(&self, bits: &[bool]) -> VertexSet {
        let mut h = VertexSet::new();
        for (item, &on) in self.items.iter().zip(bits) {
            if !on {
                continue;
            }
            match item {
                Item::Core(c) => {
                    h.insert_core(c.clone());
                }
                Item::RayFrom(r, k) => {
                    h.lower_ray(r, *k);
                }
            }
        }
        h
    }

    fn encode(&self, h: &VertexSet) -> Vec<bool> {
        self.items
            .iter()
            .map(|item| match item {
                Item::Core(c) => h.contains_core(c),
                Item::RayFrom(r, k) => h.contains(&VertexRef::ray(r.clone(), *k)),
            })
            .collect()
    }

    fn close(&self, g: &Graph, bits: &[bool]) -> Vec<bool> {
        let h = closure_sh(g, &self.decode(bits)).expect("members come from the graph");
        self.encode(&h)
    }
}

/// Every saturated hereditary subset, by Ganter's NextClosure over the finite
/// universe of core vertices and ray markers. Fails beyond
/// [`DEFAULT_BOUND`] core vertices.
pub fn enumerate_sh(g: &Graph) -> Result<SHFamily> {
    enumerate_sh_bounded(g, DEFAULT_BOUND)
}

pub fn enumerate_sh_bounded(g: &Graph, bound: usize) -> Result<SHFamily> {
    if g.vertices().len() > bound {
        return Err(Error::TooLarge {
            count: g.vertices().len(),
            bound,
        });
    }
    let u = Universe::new(g);
    let n = u.items.len();
    let mut members = Vec::new();
    let mut current = u.close(g, &vec![false; n]);
    'outer: loop {
        members.push(u.decode(&current));
        for i in (0..n).rev() {
            if current[i] {
                continue;
            }
            let mut seed: Vec<bool> = current[..i].to_vec();
            seed.push(true);
            seed.resize(n, false);
            let next = u.close(g, &seed);
            if next[..i] == current[..i] {
                current = next;
                continue 'outer;
            }
        }
        break;
    }
    let distinct: BTreeSet<VertexSet> = members.into_iter().collect();
    Ok(SHFamily::new(g, distinct.into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(ids: &[&str]) -> VertexSet {
        VertexSet::from_core(ids.iter().copied())
    }

    #[test]
    fn closure_examples() {
        let b2 = fixtures::b2();
        assert_eq!(closure_sh(&b2, &set(&["w"])).unwrap(), b2.all_vertices());
        assert_eq!(
            closure_sh(&b2, &VertexSet::new()).unwrap(),
            VertexSet::new()
        );
        assert_eq!(
            closure_sh(&fixtures::vi_f(), &set(&["w"])).unwrap(),
            set(&["w"])
        );
        assert!(matches!(
            closure_sh(&b2, &set(&["zz"])),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn ray_suffix_is_pulled_back() {
        let g = fixtures::vi_f();
        let h = closure_sh(&g, &VertexSet::new().with_ray_from("X", 4)).unwrap();
        assert_eq!(h, set(&["w"]).with_ray_from("X", 0));
    }

    #[test]
    fn predicates() {
        let e = fixtures::vi_e();
        assert!(is_hereditary(&e, &set(&["w"])));
        assert!(is_saturated(&e, &set(&["w"])));
        assert!(!is_hereditary(&fixtures::b2(), &set(&["t0"])));
        for (_, g) in fixtures::all() {
            let all = g.all_vertices();
            assert!(is_hereditary(&g, &all) && is_saturated(&g, &all));
        }
    }

    #[test]
    fn fullness() {
        assert!(check_fullness(&fixtures::b2(), &set(&["v", "w"])).unwrap());
        assert!(check_fullness(&fixtures::inf(), &set(&["v"])).unwrap());
        assert!(!check_fullness(&fixtures::vi_f(), &set(&["w"])).unwrap());
    }

    #[test]
    fn ideal_counts() {
        let inf = enumerate_sh(&fixtures::inf()).unwrap();
        assert_eq!(
            inf.members,
            vec![VertexSet::new(), set(&["w"]), set(&["v", "w"])]
        );
        assert_eq!(inf.nontrivial_count, 1);
        assert_eq!(enumerate_sh(&fixtures::vi_e()).unwrap().nontrivial_count, 3);
        assert_eq!(enumerate_sh(&fixtures::vi_f()).unwrap().nontrivial_count, 2);
        assert_eq!(
            enumerate_sh(&fixtures::loop_graph())
                .unwrap()
                .nontrivial_count,
            0
        );
    }

    #[test]
    fn too_large() {
        let g = fixtures::tree(5);
        assert!(matches!(
            enumerate_sh_bounded(&g, 10),
            Err(Error::TooLarge {
                count: 33,
                bound: 10
            })
        ));
    }

    #[test]
    fn hasse_diagram() {
        let fam = enumerate_sh(&fixtures::inf()).unwrap();
        assert_eq!(fam.covers(), vec![(0, 1), (1, 2)]);
        let dot = fam.to_dot();
        assert!(dot.contains("h0 -> h1;"));
        assert!(dot.contains("label=\"∅\""));
    }
}
