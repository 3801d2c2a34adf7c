//! Face tracing on the rotation system and the Euler-formula planarity
//! check. Faces are orbits of the "depart, traverse, rotate" permutation
//! on directed arc ends; on the sphere every connected piece of the
//! 4-valent graph must satisfy V - E + F = 2.

use std::collections::HashMap;

use crate::error::{AkError, Result};

use super::{ArcId, Diagram, End};

/// A dart departs from an end of an arc and runs to the other end.
pub type Dart = End;

fn node_key(end: End) -> (usize, usize) {
    match end {
        End::X { crossing, .. } => (0, crossing),
        End::V { vertex, .. } => (1, vertex),
    }
}

fn degree(d: &Diagram, end: End) -> usize {
    match end {
        End::X { .. } => 4,
        End::V { vertex, .. } => d.vertices[vertex].ends.len(),
    }
}

fn with_slot(end: End, slot: usize) -> End {
    match end {
        End::X { crossing, .. } => End::X { crossing, slot },
        End::V { vertex, .. } => End::V { vertex, slot },
    }
}

fn slot(end: End) -> usize {
    match end {
        End::X { slot, .. } | End::V { slot, .. } => slot,
    }
}

/// The faces of the diagram, each listed as the darts along its boundary.
pub fn faces(d: &Diagram) -> Result<Vec<Vec<Dart>>> {
    let occ = d.occurrences()?;
    let mut other: HashMap<End, End> = HashMap::new();
    for arc in occ.arcs() {
        let t = occ.tail(arc).unwrap();
        let h = occ.head(arc).unwrap();
        other.insert(t, h);
        other.insert(h, t);
    }
    let mut darts: Vec<Dart> = other.keys().copied().collect();
    darts.sort_by_key(|e| (node_key(*e), slot(*e)));
    let mut seen: HashMap<Dart, bool> = HashMap::new();
    let mut out = Vec::new();
    for start in darts {
        if seen.contains_key(&start) {
            continue;
        }
        let mut face = Vec::new();
        let mut cur = start;
        loop {
            face.push(cur);
            seen.insert(cur, true);
            let arrive = other[&cur];
            let deg = degree(d, arrive);
            let next = with_slot(arrive, (slot(arrive) + 1) % deg);
            if next == start {
                break;
            }
            if seen.contains_key(&next) {
                return Err(AkError::Invalid(
                    "face tracing revisited a dart; corrupt rotation system".into(),
                ));
            }
            cur = next;
        }
        out.push(face);
    }
    Ok(out)
}

/// The set of arcs bounding each face.
pub fn face_arcs(d: &Diagram) -> Result<Vec<Vec<ArcId>>> {
    let fs = faces(d)?;
    Ok(fs
        .iter()
        .map(|f| f.iter().map(|&e| d_arc(d, e)).collect())
        .collect())
}

fn d_arc(d: &Diagram, end: End) -> ArcId {
    match end {
        End::X { crossing, slot } => d.crossings[crossing].slots[slot],
        End::V { vertex, slot } => d.vertices[vertex].ends[slot].0,
    }
}

/// Euler-formula check per connected piece of the node graph.
pub fn check_planar(d: &Diagram) -> Result<()> {
    for (vi, v) in d.vertices.iter().enumerate() {
        if v.ends.is_empty() {
            return Err(AkError::Invalid(format!("vertex {vi} has no incident arcs")));
        }
    }
    let n_nodes = d.crossings.len() + d.vertices.len();
    if n_nodes == 0 {
        return Ok(());
    }
    let occ = d.occurrences()?;

    // Union-find over nodes.
    let idx = |k: (usize, usize)| -> usize {
        match k {
            (0, c) => c,
            (1, v) => d.crossings.len() + v,
            _ => unreachable!(),
        }
    };
    let mut parent: Vec<usize> = (0..n_nodes).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut arcs: Vec<ArcId> = occ.arcs().collect();
    arcs.sort_unstable();
    for &arc in &arcs {
        let a = idx(node_key(occ.tail(arc).unwrap()));
        let b = idx(node_key(occ.head(arc).unwrap()));
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }

    let mut v_count: HashMap<usize, i64> = HashMap::new();
    let mut e_count: HashMap<usize, i64> = HashMap::new();
    let mut f_count: HashMap<usize, i64> = HashMap::new();
    for n in 0..n_nodes {
        *v_count.entry(find(&mut parent, n)).or_default() += 1;
    }
    for &arc in &arcs {
        let a = idx(node_key(occ.tail(arc).unwrap()));
        let root = find(&mut parent, a);
        *e_count.entry(root).or_default() += 1;
    }
    for face in faces(d)? {
        let a = idx(node_key(face[0]));
        let root = find(&mut parent, a);
        *f_count.entry(root).or_default() += 1;
    }
    for (&root, &v) in &v_count {
        let e = e_count.get(&root).copied().unwrap_or(0);
        let f = f_count.get(&root).copied().unwrap_or(0);
        if v - e + f != 2 {
            return Err(AkError::Invalid(format!(
                "code is not planar: component has V={v} E={e} F={f} (V-E+F={})",
                v - e + f
            )));
        }
    }
    Ok(())
}
