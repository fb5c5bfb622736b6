//! Finite paths and cycles over core vertices and ray positions.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::graph::{Graph, VertexRef};

/// One edge of a path: the range vertex plus which parallel copy was taken.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub to: VertexRef,
    pub slot: u64,
}

/// A finite path. A path with no steps is the vertex `start` viewed as a path of
/// length zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub start: VertexRef,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn trivial(start: VertexRef) -> Self {
        Path {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &VertexRef {
        self.steps.last().map_or(&self.start, |s| &s.to)
    }

    pub fn then(&self, to: VertexRef, slot: u64) -> Path {
        let mut p = self.clone();
        p.steps.push(Step { to, slot });
        p
    }

    pub fn push(&mut self, to: VertexRef, slot: u64) {
        self.steps.push(Step { to, slot });
    }

    /// Vertices visited, starting with `start`.
    pub fn vertices(&self) -> impl Iterator<Item = &VertexRef> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.to))
    }

    /// True when `other` extends `self` by at least one edge.
    pub fn is_proper_prefix_of(&self, other: &Path) -> bool {
        self.start == other.start
            && self.steps.len() < other.steps.len()
            && other.steps[..self.steps.len()] == self.steps[..]
    }

    /// Every step names an existing edge copy of `g`.
    pub fn validate(&self, g: &Graph) -> bool {
        if !g.contains(&self.start) {
            return false;
        }
        let mut at = &self.start;
        for step in &self.steps {
            if step.slot >= g.edge_multiplicity(at, &step.to).capped(u64::MAX) {
                return false;
            }
            at = &step.to;
        }
        true
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for step in &self.steps {
            write!(f, " -> {}", step.to)?;
            if step.slot > 0 {
                write!(f, "#{}", step.slot)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A cycle given by its sources `s(α_1), …, s(α_n)`; the closing edge returns to
/// the first vertex. Parallel copies are not distinguished.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    pub vertices: Vec<VertexRef>,
}

impl Cycle {
    /// Rotates so the smallest vertex comes first.
    pub fn canonical(mut vertices: Vec<VertexRef>) -> Self {
        if let Some(min_at) = vertices
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
        {
            vertices.rotate_left(min_at);
        }
        Cycle { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Positive length, closes up, and sources pairwise distinct.
    pub fn validate(&self, g: &Graph) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !seen.insert(v) {
                return false;
            }
            let next = &self.vertices[(i + 1) % n];
            if g.edge_multiplicity(v, next).is_zero() {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            write!(f, "{v} -> ")?;
        }
        match self.vertices.first() {
            Some(v) => write!(f, "{v}"),
            None => Ok(()),
        }
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
