//! Constituent links of a spatial graph: simple cycles and disjoint cycle
//! pairs of the underlying graph, extracted as link diagrams so that link
//! invariants apply to them.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::diagram::{edit, edit::SpliceSet, ArcId, Diagram};
use crate::error::{AkError, Result};
use crate::invariants;

/// One edge of the abstract graph: a maximal strand between two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    pub arcs: Vec<ArcId>,
    pub from: usize,
    pub to: usize,
}

/// The abstract graph beneath a diagram, plus its free-standing circles
/// (closed components with no vertex on them).
#[derive(Debug, Clone)]
pub struct AbstractGraph {
    pub edges: Vec<GraphEdge>,
    pub n_vertices: usize,
    pub circles: Vec<Vec<ArcId>>,
    pub free_loops: usize,
}

pub fn abstract_graph(d: &Diagram) -> Result<AbstractGraph> {
    let occ = d.occurrences()?;
    let vertex_of = |arc: ArcId, head: bool| -> Result<usize> {
        let end = if head { occ.head(arc) } else { occ.tail(arc) };
        match end {
            Some(crate::diagram::End::V { vertex, .. }) => Ok(vertex),
            _ => Err(AkError::Invalid(format!(
                "edge chain endpoint of arc {arc} is not a vertex"
            ))),
        }
    };
    let mut edges = Vec::new();
    for chain in d.edge_chains()? {
        let from = vertex_of(chain[0], false)?;
        let to = vertex_of(*chain.last().unwrap(), true)?;
        edges.push(GraphEdge {
            arcs: chain,
            from,
            to,
        });
    }
    Ok(AbstractGraph {
        edges,
        n_vertices: d.vertices.len(),
        circles: d.closed_components()?,
        free_loops: d.free_loops,
    })
}

/// A cycle given by edge indices in traversal order, with the direction
/// each edge is traversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<(usize, bool)>, // (edge index, traversed forward)
}

/// All simple cycles: edge subsets whose subgraph is connected with every
/// incident vertex of degree 2, walked into traversal order.
pub fn simple_cycles(g: &AbstractGraph) -> Vec<Cycle> {
    let m = g.edges.len();
    let mut out = Vec::new();
    for mask in 1u64..(1 << m) {
        let picked: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &e in &picked {
            *degree.entry(g.edges[e].from).or_default() += 1;
            *degree.entry(g.edges[e].to).or_default() += 1;
        }
        if degree.values().any(|&v| v != 2) {
            continue;
        }
        // Walk from the lowest edge, forward.
        let mut order = vec![(picked[0], true)];
        let mut used: HashSet<usize> = [picked[0]].into();
        let start = g.edges[picked[0]].from;
        let mut at = g.edges[picked[0]].to;
        while at != start || used.len() < picked.len() {
            let next = picked.iter().find(|&&e| {
                !used.contains(&e) && (g.edges[e].from == at || g.edges[e].to == at)
            });
            let Some(&e) = next else { break };
            let forward = g.edges[e].from == at;
            used.insert(e);
            order.push((e, forward));
            at = if forward { g.edges[e].to } else { g.edges[e].from };
        }
        if used.len() == picked.len() && at == start {
            out.push(Cycle { edges: order });
        }
    }
    out
}

/// Extract the sublink formed by the given arc sets (each set one cycle,
/// with `reverse` marking edges walked against their orientation).
/// Vertices are spliced out; crossings with a deleted strand are spliced
/// through.
pub fn extract(d: &Diagram, cycles: &[&Cycle], g: &AbstractGraph) -> Result<Diagram> {
    let mut reversed: HashSet<ArcId> = HashSet::new();
    let mut kept: HashSet<ArcId> = HashSet::new();
    for cy in cycles {
        for &(e, forward) in &cy.edges {
            kept.extend(g.edges[e].arcs.iter().copied());
            if !forward {
                reversed.extend(g.edges[e].arcs.iter().copied());
            }
        }
    }
    let oriented = edit::reverse_arcs(d, &reversed)?;
    let occ = oriented.occurrences()?;

    let mut s = SpliceSet::new();
    let mut remove = Vec::new();
    for (i, c) in oriented.crossings.iter().enumerate() {
        let under_kept = kept.contains(&c.slots[0]);
        let over_kept = kept.contains(&c.slots[1]);
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
    // Splice kept strands through each vertex.
    for v in &oriented.vertices {
        let kept_ends: Vec<&(ArcId, bool)> =
            v.ends.iter().filter(|(a, _)| kept.contains(a)).collect();
        match kept_ends.len() {
            0 => {}
            2 => {
                let (a0, in0) = *kept_ends[0];
                let (a1, in1) = *kept_ends[1];
                if in0 == in1 {
                    return Err(AkError::Invalid(
                        "cycle passes a vertex with inconsistent orientation".into(),
                    ));
                }
                s.merge(a0, a1);
            }
            n => {
                return Err(AkError::Invalid(format!(
                    "cycle passes a vertex on {n} ends; expected 0 or 2"
                )));
            }
        }
    }
    let dropped: HashSet<ArcId> = occ.arcs().filter(|a| !kept.contains(a)).collect();
    let mut out = s.finish(&oriented, &remove, &dropped);
    out.vertices.clear();
    out.free_loops = 0;
    out.validate()?;
    Ok(out)
}

/// Invariants of all constituent knots and 2-component constituent links.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleReport {
    pub edges: Vec<usize>,
    pub a2: i64,
    pub conway: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairReport {
    pub edges: (Vec<usize>, Vec<usize>),
    pub lk: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstituentReport {
    pub cycles: Vec<CycleReport>,
    pub pairs: Vec<PairReport>,
}

fn vertex_set(g: &AbstractGraph, c: &Cycle) -> HashSet<usize> {
    c.edges
        .iter()
        .flat_map(|&(e, _)| [g.edges[e].from, g.edges[e].to])
        .collect()
}

pub fn cycle_invariants(d: &Diagram, budget: u64) -> Result<ConstituentReport> {
    let g = abstract_graph(d)?;
    if !g.circles.is_empty() || g.free_loops > 0 {
        return Err(AkError::Unsupported(
            "constituent analysis expects a connected spatial graph without split circles".into(),
        ));
    }
    let cycles = simple_cycles(&g);
    let mut creports = Vec::new();
    for c in &cycles {
        let link = extract(d, &[c], &g)?;
        let conway = invariants::conway_with(&link, budget)?;
        let mut edges: Vec<usize> = c.edges.iter().map(|&(e, _)| e).collect();
        edges.sort_unstable();
        creports.push(CycleReport {
            edges,
            a2: conway.coeff(2),
            conway: conway.coeffs().to_vec(),
        });
    }
    let mut preports = Vec::new();
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            let (a, b) = (&cycles[i], &cycles[j]);
            if !vertex_set(&g, a).is_disjoint(&vertex_set(&g, b)) {
                continue;
            }
            let link = extract(d, &[a, b], &g)?;
            if link.component_count()? != 2 {
                return Err(AkError::Invalid("extracted pair is not a 2-component link".into()));
            }
            let lk = invariants::linking_number(&link, 0, 1)?;
            let key = |c: &Cycle| {
                let mut v: Vec<usize> = c.edges.iter().map(|&(e, _)| e).collect();
                v.sort_unstable();
                v
            };
            preports.push(PairReport {
                edges: (key(a), key(b)),
                lk,
            });
        }
    }
    Ok(ConstituentReport {
        cycles: creports,
        pairs: preports,
    })
}
