//! Canonical code: a label-independent text form used as an equality and
//! memoization key. The code is the lexicographic minimum of the rendered
//! diagram over all orderings of closed components, basepoints within each
//! component, and orderings of vertex-to-vertex edges.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{ArcId, Diagram};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalCode(pub String);

impl std::fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Render with the given arc relabeling; crossing terms carry explicit
/// sign markers so the string determines the diagram.
fn render(d: &Diagram, map: &HashMap<ArcId, ArcId>) -> String {
    let f = |a: ArcId| map.get(&a).copied().unwrap_or(a);
    let mut xs: Vec<String> = d
        .crossings
        .iter()
        .map(|c| {
            format!(
                "X{}({},{},{},{})",
                if c.sign() > 0 { '+' } else { '-' },
                f(c.slots[0]),
                f(c.slots[1]),
                f(c.slots[2]),
                f(c.slots[3])
            )
        })
        .collect();
    xs.sort();
    let mut vs: Vec<String> = d
        .vertices
        .iter()
        .map(|v| {
            // Minimize over cyclic rotations of the rotation system.
            let ends: Vec<String> = v
                .ends
                .iter()
                .map(|&(a, inc)| format!("{}{}", if inc { "" } else { "-" }, f(a)))
                .collect();
            (0..ends.len().max(1))
                .map(|r| {
                    let mut rot = ends.clone();
                    rot.rotate_left(r.min(ends.len().saturating_sub(1)));
                    format!("V({})", rot.join(","))
                })
                .min()
                .unwrap_or_else(|| "V()".into())
        })
        .collect();
    vs.sort();
    let mut out = format!("free_loops={}", d.free_loops);
    for t in xs.into_iter().chain(vs) {
        out.push(' ');
        out.push_str(&t);
    }
    out
}

fn assign(
    groups: &[Vec<ArcId>],
    order: &[usize],
    rotations: &[usize],
) -> HashMap<ArcId, ArcId> {
    let mut map = HashMap::new();
    let mut next: ArcId = 1;
    for (&gi, &rot) in order.iter().zip(rotations) {
        let g = &groups[gi];
        for k in 0..g.len() {
            map.insert(g[(k + rot) % g.len()], next);
            next += 1;
        }
    }
    map
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Cost cap: beyond this many candidate labelings, fall back to the
/// deterministic min-arc labeling (still a stable key, just not invariant
/// under arbitrary relabelings of huge diagrams).
const LABELING_CAP: u64 = 200_000;

pub fn canonical(d: &Diagram) -> Result<CanonicalCode> {
    let comps = d.closed_components()?;
    let chains = d.edge_chains()?;
    // Closed components contribute a basepoint choice; edges do not.
    let mut groups: Vec<Vec<ArcId>> = comps;
    let n_rot = groups.len();
    groups.extend(chains);

    let mut cost: u64 = 1;
    for g in &groups[..n_rot] {
        cost = cost.saturating_mul(g.len() as u64);
    }
    for k in 1..=groups.len() as u64 {
        cost = cost.saturating_mul(k);
    }
    if cost > LABELING_CAP {
        let order: Vec<usize> = (0..groups.len()).collect();
        let rotations = vec![0; groups.len()];
        return Ok(CanonicalCode(render(d, &assign(&groups, &order, &rotations))));
    }

    let mut best: Option<String> = None;
    for order in permutations(groups.len()) {
        let mut rotations = vec![0usize; groups.len()];
        loop {
            let s = render(d, &assign(&groups, &order, &rotations));
            if best.as_ref().map_or(true, |b| s < *b) {
                best = Some(s);
            }
            // Odometer over basepoints of closed components only.
            let mut pos = 0;
            loop {
                if pos >= order.len() {
                    break;
                }
                let gi = order[pos];
                if gi < n_rot && !groups[gi].is_empty() {
                    rotations[pos] += 1;
                    if rotations[pos] < groups[gi].len() {
                        break;
                    }
                    rotations[pos] = 0;
                }
                pos += 1;
            }
            if pos >= order.len() {
                break;
            }
        }
    }
    Ok(CanonicalCode(best.unwrap_or_else(|| render(d, &HashMap::new()))))
}
