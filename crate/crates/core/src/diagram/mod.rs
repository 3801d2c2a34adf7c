//! Combinatorial model of oriented link and spatial-graph diagrams.
//!
//! A diagram is a PD-style code: each crossing lists its four incident arc
//! identifiers counterclockwise starting at the incoming under-strand, plus
//! a flag for the over-strand direction from which the crossing sign is
//! derived. Graph vertices carry a rotation system (cyclic order of arc
//! ends) together with an in/out flag per end. Crossingless circles are
//! first-class and tracked by an explicit `free_loops` count, since PD
//! terms cannot express them.

pub mod canon;
pub mod edit;
pub mod parse;
pub mod planar;
pub mod reid;
pub mod sum;

pub use canon::CanonicalCode;
pub use edit::SpliceSet;
pub use parse::{parse_gauss, parse_pd, serialize, to_gauss};
pub use reid::{ReidKind, ReidSite};
pub use sum::{FormalSum, SingularDiagram};

use std::collections::HashMap;

use crate::error::{AkError, Result};

pub type ArcId = u32;

/// One crossing of the diagram. `slots` is counterclockwise from the
/// incoming under-strand: `[a, b, c, d]` with the under-strand running
/// `a -> c`. `over_b_to_d` records the over-strand direction (`b -> d`
/// when true); the crossing sign is derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Crossing {
    pub slots: [ArcId; 4],
    pub over_b_to_d: bool,
}

impl Crossing {
    pub fn sign(&self) -> i64 {
        if self.over_b_to_d {
            1
        } else {
            -1
        }
    }

    /// Arcs of the under strand as (incoming, outgoing).
    pub fn under(&self) -> (ArcId, ArcId) {
        (self.slots[0], self.slots[2])
    }

    /// Arcs of the over strand as (incoming, outgoing).
    pub fn over(&self) -> (ArcId, ArcId) {
        if self.over_b_to_d {
            (self.slots[1], self.slots[3])
        } else {
            (self.slots[3], self.slots[1])
        }
    }
}

/// A graph vertex with its rotation system. Each end is an incident arc
/// together with its direction: `true` means the arc head ends here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Vertex {
    pub ends: Vec<(ArcId, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub vertices: Vec<Vertex>,
    /// Closed circles with no crossings or vertices on them.
    pub free_loops: usize,
}

/// A slot where an arc end sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    X { crossing: usize, slot: usize },
    V { vertex: usize, slot: usize },
}

/// Tail (outgoing) and head (incoming) occurrence of every arc.
#[derive(Debug, Clone, Default)]
pub struct Occurrences {
    map: HashMap<ArcId, (Option<End>, Option<End>)>,
}

impl Occurrences {
    pub fn tail(&self, arc: ArcId) -> Option<End> {
        self.map.get(&arc).and_then(|p| p.0)
    }

    pub fn head(&self, arc: ArcId) -> Option<End> {
        self.map.get(&arc).and_then(|p| p.1)
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.map.keys().copied()
    }
}

impl Diagram {
    /// The crossingless unknot.
    pub fn unknot() -> Diagram {
        Diagram {
            free_loops: 1,
            ..Default::default()
        }
    }

    /// The crossingless n-component unlink.
    pub fn unlink(n: usize) -> Diagram {
        Diagram {
            free_loops: n,
            ..Default::default()
        }
    }

    pub fn is_link(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn crossing(&self, id: usize) -> Result<&Crossing> {
        self.crossings.get(id).ok_or(AkError::CrossingNotFound(id))
    }

    /// All arc identifiers in use, sorted.
    pub fn arc_ids(&self) -> Vec<ArcId> {
        let mut ids: Vec<ArcId> = self
            .crossings
            .iter()
            .flat_map(|c| c.slots.iter().copied())
            .chain(
                self.vertices
                    .iter()
                    .flat_map(|v| v.ends.iter().map(|e| e.0)),
            )
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn fresh_arc(&self) -> ArcId {
        self.arc_ids().last().map_or(1, |m| m + 1)
    }

    /// Whether an end is an "in" slot (an arc head arrives there).
    pub fn end_is_in(&self, end: End) -> bool {
        match end {
            End::X { crossing, slot } => {
                let c = &self.crossings[crossing];
                match slot {
                    0 => true,
                    2 => false,
                    1 => c.over_b_to_d,
                    3 => !c.over_b_to_d,
                    _ => unreachable!("crossing slot out of range"),
                }
            }
            End::V { vertex, slot } => self.vertices[vertex].ends[slot].1,
        }
    }

    fn end_arc(&self, end: End) -> ArcId {
        match end {
            End::X { crossing, slot } => self.crossings[crossing].slots[slot],
            End::V { vertex, slot } => self.vertices[vertex].ends[slot].0,
        }
    }

    /// Build the tail/head occurrence map, failing if some arc does not
    /// have exactly one tail and one head.
    pub fn occurrences(&self) -> Result<Occurrences> {
        let mut occ = Occurrences::default();
        let mut ends: Vec<End> = Vec::new();
        for (ci, _) in self.crossings.iter().enumerate() {
            for slot in 0..4 {
                ends.push(End::X {
                    crossing: ci,
                    slot,
                });
            }
        }
        for (vi, v) in self.vertices.iter().enumerate() {
            for slot in 0..v.ends.len() {
                ends.push(End::V { vertex: vi, slot });
            }
        }
        for end in ends {
            let arc = self.end_arc(end);
            let entry = occ.map.entry(arc).or_insert((None, None));
            let slot = if self.end_is_in(end) {
                &mut entry.1
            } else {
                &mut entry.0
            };
            if slot.is_some() {
                return Err(AkError::Invalid(format!(
                    "arc {arc} has two {} ends (orientation mismatch)",
                    if self.end_is_in(end) { "head" } else { "tail" }
                )));
            }
            *slot = Some(end);
        }
        for (arc, (tail, head)) in &occ.map {
            if tail.is_none() || head.is_none() {
                return Err(AkError::Invalid(format!(
                    "arc {arc} is used {} time(s); every arc must appear exactly twice",
                    tail.is_some() as usize + head.is_some() as usize
                )));
            }
        }
        Ok(occ)
    }

    /// Successor arc when the strand continues through a crossing.
    /// `None` when the arc ends at a graph vertex.
    pub fn next_arc(&self, occ: &Occurrences, arc: ArcId) -> Option<ArcId> {
        match occ.head(arc)? {
            End::X { crossing, slot } => {
                let c = &self.crossings[crossing];
                Some(match slot {
                    0 => c.slots[2],
                    1 => c.slots[3],
                    3 => c.slots[1],
                    _ => unreachable!(),
                })
            }
            End::V { .. } => None,
        }
    }

    /// Predecessor arc through a crossing.
    pub fn prev_arc(&self, occ: &Occurrences, arc: ArcId) -> Option<ArcId> {
        match occ.tail(arc)? {
            End::X { crossing, slot } => {
                let c = &self.crossings[crossing];
                Some(match slot {
                    2 => c.slots[0],
                    3 => c.slots[1],
                    1 => c.slots[3],
                    _ => unreachable!(),
                })
            }
            End::V { .. } => None,
        }
    }

    /// Closed components (circles through crossings), each listed from its
    /// lowest arc id in orientation order; components ordered by that id.
    /// Graph edges (arcs ending at vertices) are not included.
    pub fn closed_components(&self) -> Result<Vec<Vec<ArcId>>> {
        let occ = self.occurrences()?;
        self.closed_components_with(&occ)
    }

    pub fn closed_components_with(&self, occ: &Occurrences) -> Result<Vec<Vec<ArcId>>> {
        let mut seen: HashMap<ArcId, bool> = HashMap::new();
        let mut out = Vec::new();
        let mut ids: Vec<ArcId> = occ.arcs().collect();
        ids.sort_unstable();
        for start in ids {
            if seen.contains_key(&start) {
                continue;
            }
            let mut circle = vec![start];
            seen.insert(start, true);
            let mut cur = start;
            let mut closed = true;
            loop {
                match self.next_arc(occ, cur) {
                    Some(next) => {
                        if next == start {
                            break;
                        }
                        if seen.contains_key(&next) {
                            return Err(AkError::Invalid(format!(
                                "arc {next} reached from two different strands"
                            )));
                        }
                        seen.insert(next, true);
                        circle.push(next);
                        cur = next;
                    }
                    None => {
                        closed = false;
                        break;
                    }
                }
            }
            if closed {
                out.push(circle);
            } else {
                // Walk backwards too so every arc of the open chain is marked.
                let mut cur = start;
                while let Some(prev) = self.prev_arc(occ, cur) {
                    if seen.contains_key(&prev) {
                        break;
                    }
                    seen.insert(prev, true);
                    cur = prev;
                }
            }
        }
        Ok(out)
    }

    /// Total number of components: circles through crossings, graph edges
    /// are not components, plus crossingless free loops.
    pub fn component_count(&self) -> Result<usize> {
        Ok(self.closed_components()?.len() + self.free_loops)
    }

    /// Maximal strand chains that start and end at graph vertices.
    /// Each chain is the arc sequence in orientation order.
    pub fn edge_chains(&self) -> Result<Vec<Vec<ArcId>>> {
        let occ = self.occurrences()?;
        let mut chains = Vec::new();
        let mut ids: Vec<ArcId> = occ.arcs().collect();
        ids.sort_unstable();
        let mut in_chain: HashMap<ArcId, bool> = HashMap::new();
        for arc in ids {
            if in_chain.contains_key(&arc) {
                continue;
            }
            if self.prev_arc(&occ, arc).is_some() && self.next_arc(&occ, arc).is_some() {
                continue; // interior of a chain or part of a circle
            }
            // Walk to the chain start.
            let mut start = arc;
            while let Some(prev) = self.prev_arc(&occ, start) {
                start = prev;
            }
            if matches!(occ.tail(start), Some(End::V { .. })) || self.prev_arc(&occ, start).is_none()
            {
                let mut chain = vec![start];
                in_chain.insert(start, true);
                let mut cur = start;
                while let Some(next) = self.next_arc(&occ, cur) {
                    chain.push(next);
                    in_chain.insert(next, true);
                    cur = next;
                }
                chains.push(chain);
            }
        }
        chains.sort();
        chains.dedup();
        Ok(chains)
    }

    /// Full structural validation: occurrence counts, closed traversal,
    /// and planarity of the rotation system.
    pub fn validate(&self) -> Result<()> {
        let occ = self.occurrences()?;
        let circles = self.closed_components_with(&occ)?;
        let chains = self.edge_chains()?;
        let covered: usize = circles.iter().map(|c| c.len()).sum::<usize>()
            + chains.iter().map(|c| c.len()).sum::<usize>();
        let total = occ.arcs().count();
        if covered != total {
            return Err(AkError::Invalid(format!(
                "{} of {} arcs lie on closed components or vertex-to-vertex edges",
                covered, total
            )));
        }
        planar::check_planar(self)?;
        Ok(())
    }

    /// Apply an arc relabeling. Labels not present in the map are kept.
    pub fn relabel(&self, map: &HashMap<ArcId, ArcId>) -> Diagram {
        let f = |a: ArcId| map.get(&a).copied().unwrap_or(a);
        Diagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing {
                    slots: [f(c.slots[0]), f(c.slots[1]), f(c.slots[2]), f(c.slots[3])],
                    over_b_to_d: c.over_b_to_d,
                })
                .collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    ends: v.ends.iter().map(|&(a, i)| (f(a), i)).collect(),
                })
                .collect(),
            free_loops: self.free_loops,
        }
    }

    /// Offset every arc label; used when placing one diagram next to another.
    pub fn relabel_offset(&self, offset: ArcId) -> Diagram {
        let map: HashMap<ArcId, ArcId> = self.arc_ids().iter().map(|&a| (a, a + offset)).collect();
        self.relabel(&map)
    }
}

pub use planar::{faces, Dart};

#[cfg(test)]
mod tests {
    use super::*;

    pub fn trefoil() -> Diagram {
        crate::diagram::parse::parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()
    }

    #[test]
    fn trefoil_structure() {
        let d = trefoil();
        d.validate().unwrap();
        assert_eq!(d.crossings.len(), 3);
        let comps = d.closed_components().unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 6);
        assert!(d.crossings.iter().all(|c| c.sign() == 1));
    }

    #[test]
    fn unknot_components() {
        let d = Diagram::unknot();
        assert_eq!(d.component_count().unwrap(), 1);
        d.validate().unwrap();
    }

    #[test]
    fn bad_arc_count_rejected() {
        let d = Diagram {
            crossings: vec![Crossing {
                slots: [1, 2, 3, 4],
                over_b_to_d: true,
            }],
            ..Default::default()
        };
        assert!(d.occurrences().is_err());
    }
}
