//! Structural edits: crossing switches, oriented smoothing, strand
//! reversal, component selection, disjoint union and connected sum.

use std::collections::{HashMap, HashSet};

use crate::error::{AkError, Result};

use super::{ArcId, Crossing, Diagram, End, Vertex};

/// A set of arc identifications to apply at once, plus the bookkeeping to
/// realize them on a diagram: arcs are relabeled to the least member of
/// their class, and classes that no longer touch any crossing or vertex
/// close up into free loops.
#[derive(Debug, Clone, Default)]
pub struct SpliceSet {
    parent: HashMap<ArcId, ArcId>,
}

impl SpliceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn find(&self, mut a: ArcId) -> ArcId {
        while let Some(&p) = self.parent.get(&a) {
            if p == a {
                break;
            }
            a = p;
        }
        a
    }

    pub fn merge(&mut self, a: ArcId, b: ArcId) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(hi, lo);
        self.parent.entry(lo).or_insert(lo);
    }

    /// Apply the splices to `d` with the crossings in `remove` deleted.
    /// Arc classes containing a member of `drop` are discarded outright;
    /// any other class that vanishes from the diagram becomes a free loop.
    pub fn finish(&self, d: &Diagram, remove: &[usize], drop: &HashSet<ArcId>) -> Diagram {
        let removed: HashSet<usize> = remove.iter().copied().collect();
        let crossings: Vec<Crossing> = d
            .crossings
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, c)| Crossing {
                slots: [
                    self.find(c.slots[0]),
                    self.find(c.slots[1]),
                    self.find(c.slots[2]),
                    self.find(c.slots[3]),
                ],
                over_b_to_d: c.over_b_to_d,
            })
            .collect();
        let vertices: Vec<Vertex> = d
            .vertices
            .iter()
            .map(|v| Vertex {
                ends: v.ends.iter().map(|&(a, i)| (self.find(a), i)).collect(),
            })
            .collect();
        let mut classes: HashSet<ArcId> = d.arc_ids().iter().map(|&a| self.find(a)).collect();
        for &a in drop {
            classes.remove(&self.find(a));
        }
        let mut present: HashSet<ArcId> = HashSet::new();
        for c in &crossings {
            present.extend(c.slots);
        }
        for v in &vertices {
            present.extend(v.ends.iter().map(|e| e.0));
        }
        let vanished = classes.iter().filter(|c| !present.contains(c)).count();
        Diagram {
            crossings,
            vertices,
            free_loops: d.free_loops + vanished,
        }
    }
}

/// Switch over and under strand at one crossing; the sign flips.
pub fn switch_crossing(d: &Diagram, i: usize) -> Result<Diagram> {
    let c = *d.crossing(i)?;
    let [a, b, cc, dd] = c.slots;
    let mut out = d.clone();
    out.crossings[i] = if c.over_b_to_d {
        // New under strand runs b -> d; start the tuple at b.
        Crossing {
            slots: [b, cc, dd, a],
            over_b_to_d: false,
        }
    } else {
        Crossing {
            slots: [dd, a, b, cc],
            over_b_to_d: true,
        }
    };
    Ok(out)
}

/// Oriented smoothing: replace the crossing by the two parallel strands
/// compatible with the orientations.
pub fn smooth_crossing(d: &Diagram, i: usize) -> Result<Diagram> {
    let c = *d.crossing(i)?;
    let [a, b, cc, dd] = c.slots;
    let mut s = SpliceSet::new();
    if c.sign() > 0 {
        // Incoming a (under) and b (over): join a|d and b|c.
        s.merge(a, dd);
        s.merge(b, cc);
    } else {
        s.merge(a, b);
        s.merge(cc, dd);
    }
    Ok(s.finish(d, &[i], &HashSet::new()))
}

/// Reverse the orientation of the given arcs. The set must be closed under
/// strand continuation (whole components, or whole vertex-to-vertex edges).
pub fn reverse_arcs(d: &Diagram, arcs: &HashSet<ArcId>) -> Result<Diagram> {
    let mut out = d.clone();
    for c in &mut out.crossings {
        let under_rev = arcs.contains(&c.slots[0]);
        let over_rev = arcs.contains(&c.slots[1]);
        if under_rev != arcs.contains(&c.slots[2]) || over_rev != arcs.contains(&c.slots[3]) {
            return Err(AkError::Invalid(
                "arc reversal set is not closed under strand continuation".into(),
            ));
        }
        if under_rev {
            // The tuple restarts at the new incoming under-strand, and the
            // over pair lands in swapped slots.
            c.slots.rotate_left(2);
            c.over_b_to_d = !c.over_b_to_d;
        }
        if over_rev {
            c.over_b_to_d = !c.over_b_to_d;
        }
    }
    for v in &mut out.vertices {
        for end in &mut v.ends {
            if arcs.contains(&end.0) {
                end.1 = !end.1;
            }
        }
    }
    out.validate()?;
    Ok(out)
}

/// Reverse one closed component (circles first in min-arc order, then free
/// loops, whose reversal is a no-op).
pub fn reverse_component(d: &Diagram, index: usize) -> Result<Diagram> {
    let comps = d.closed_components()?;
    if index < comps.len() {
        reverse_arcs(d, &comps[index].iter().copied().collect())
    } else if index < comps.len() + d.free_loops {
        Ok(d.clone())
    } else {
        Err(AkError::ComponentOutOfRange(index))
    }
}

/// The mirror image: every crossing switched.
pub fn mirror(d: &Diagram) -> Diagram {
    let mut out = d.clone();
    for i in 0..out.crossings.len() {
        out = switch_crossing(&out, i).expect("index in range");
    }
    out
}

/// Keep only the named components (same indexing as `reverse_component`).
pub fn select_components(d: &Diagram, keep: &HashSet<usize>) -> Result<Diagram> {
    let comps = d.closed_components()?;
    let total = comps.len() + d.free_loops;
    if let Some(&bad) = keep.iter().find(|&&i| i >= total) {
        return Err(AkError::ComponentOutOfRange(bad));
    }
    let kept_arcs: HashSet<ArcId> = comps
        .iter()
        .enumerate()
        .filter(|(i, _)| keep.contains(i))
        .flat_map(|(_, c)| c.iter().copied())
        .collect();
    let dropped: HashSet<ArcId> = comps
        .iter()
        .enumerate()
        .filter(|(i, _)| !keep.contains(i))
        .flat_map(|(_, c)| c.iter().copied())
        .collect();
    if !d.vertices.is_empty() {
        return Err(AkError::Unsupported(
            "component selection applies to links, not spatial graphs".into(),
        ));
    }
    let mut s = SpliceSet::new();
    let mut remove = Vec::new();
    for (i, c) in d.crossings.iter().enumerate() {
        let under_kept = kept_arcs.contains(&c.slots[0]);
        let over_kept = kept_arcs.contains(&c.slots[1]);
        match (under_kept, over_kept) {
            (true, true) => {}
            (true, false) => {
                remove.push(i);
                s.merge(c.slots[0], c.slots[2]);
            }
            (false, true) => {
                remove.push(i);
                s.merge(c.slots[1], c.slots[3]);
            }
            (false, false) => remove.push(i),
        }
    }
    let mut out = s.finish(d, &remove, &dropped);
    let kept_free = keep
        .iter()
        .filter(|&&i| i >= comps.len() && i < total)
        .count();
    out.free_loops = out.free_loops - d.free_loops + kept_free;
    Ok(out)
}

/// Place the diagrams side by side.
pub fn disjoint_union(d1: &Diagram, d2: &Diagram) -> Diagram {
    let offset = d1.arc_ids().last().copied().unwrap_or(0);
    let d2 = d2.relabel_offset(offset);
    Diagram {
        crossings: d1.crossings.iter().chain(&d2.crossings).copied().collect(),
        vertices: d1.vertices.iter().chain(&d2.vertices).cloned().collect(),
        free_loops: d1.free_loops + d2.free_loops,
    }
}

/// Overwrite the arc label sitting at one end slot.
pub fn set_end(d: &mut Diagram, end: End, arc: ArcId) {
    match end {
        End::X { crossing, slot } => d.crossings[crossing].slots[slot] = arc,
        End::V { vertex, slot } => d.vertices[vertex].ends[slot].0 = arc,
    }
}

/// Splice two strands together respecting orientation: the head ends of
/// `x` and `y` swap labels, so the flow of `x` continues where `y` ended
/// and vice versa. With `x` and `y` on different components this is the
/// connected sum along those arcs.
pub fn splice_arcs(d: &Diagram, x: ArcId, y: ArcId) -> Result<Diagram> {
    if x == y {
        return Err(AkError::Invalid("cannot splice an arc to itself".into()));
    }
    let occ = d.occurrences()?;
    let hx = occ.head(x).ok_or(AkError::ArcNotFound(x))?;
    let hy = occ.head(y).ok_or(AkError::ArcNotFound(y))?;
    let mut out = d.clone();
    set_end(&mut out, hx, y);
    set_end(&mut out, hy, x);
    Ok(out)
}

/// Connected sum of two diagrams along one arc of each.
pub fn connected_sum(d1: &Diagram, arc1: ArcId, d2: &Diagram, arc2: ArcId) -> Result<Diagram> {
    let offset = d1.arc_ids().last().copied().unwrap_or(0);
    let u = disjoint_union(d1, d2);
    let out = splice_arcs(&u, arc1, arc2 + offset)?;
    out.validate()?;
    Ok(out)
}
