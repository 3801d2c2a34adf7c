//! Reidemeister sites and moves: detection from the face structure,
//! application, and greedy monotone reduction.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{AkError, Result};

use super::{edit::SpliceSet, planar, ArcId, Crossing, Diagram, End};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReidKind {
    R1Down,
    R2Down,
    R3,
}

/// A place where a crossing-removing or triangle move applies.
/// `arcs` identifies the site: the kink arc for R1, the two bigon arcs for
/// R2, the three triangle arcs for R3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReidSite {
    pub kind: ReidKind,
    pub arcs: Vec<ArcId>,
}

fn dart_info(d: &Diagram, dart: End) -> Option<(usize, usize, ArcId)> {
    match dart {
        End::X { crossing, slot } => Some((crossing, slot, d.crossings[crossing].slots[slot])),
        End::V { .. } => None,
    }
}

/// Both ends of `arc` sit at crossings; report (crossing, slot) of each,
/// tail first.
fn arc_corners(d: &Diagram, arc: ArcId) -> Result<((usize, usize), (usize, usize))> {
    let occ = d.occurrences()?;
    let tail = occ.tail(arc).ok_or(AkError::ArcNotFound(arc))?;
    let head = occ.head(arc).ok_or(AkError::ArcNotFound(arc))?;
    match (tail, head) {
        (End::X { crossing: tc, slot: ts }, End::X { crossing: hc, slot: hs }) => {
            Ok(((tc, ts), (hc, hs)))
        }
        _ => Err(AkError::site("triangle", "arc ends at a vertex")),
    }
}

/// A triangle of three mutually crossing strands, with its over/under
/// pattern: cyclic (each strand over at exactly one corner) or slidable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub arcs: [ArcId; 3],
    pub cyclic: bool,
}

/// All triangle faces with three distinct crossings and arcs.
pub fn triangles(d: &Diagram) -> Result<Vec<Triangle>> {
    let faces = planar::faces(d)?;
    let mut out = Vec::new();
    for face in &faces {
        if face.len() != 3 {
            continue;
        }
        let infos: Option<Vec<_>> = face.iter().map(|&e| dart_info(d, e)).collect();
        let Some(infos) = infos else { continue };
        let crossings: HashSet<usize> = infos.iter().map(|i| i.0).collect();
        let arcs: HashSet<ArcId> = infos.iter().map(|i| i.2).collect();
        if crossings.len() != 3 || arcs.len() != 3 {
            continue;
        }
        let mut arcs: Vec<ArcId> = arcs.into_iter().collect();
        arcs.sort_unstable();
        let mut over_counts = Vec::new();
        let mut ok = true;
        for &a in &arcs {
            let ((tc, ts), (hc, hs)) = arc_corners(d, a)?;
            if !crossings.contains(&tc) || !crossings.contains(&hc) {
                ok = false;
                break;
            }
            let overs = [ts, hs].iter().filter(|&&s| s == 1 || s == 3).count();
            over_counts.push(overs);
        }
        if !ok {
            continue;
        }
        let cyclic = over_counts.iter().all(|&c| c == 1);
        out.push(Triangle {
            arcs: [arcs[0], arcs[1], arcs[2]],
            cyclic,
        });
    }
    out.sort_by_key(|t| t.arcs);
    out.dedup();
    Ok(out)
}

/// Slide the three strands of a triangle past each other: each strand's
/// two corner passes swap order, keeping every over/under relation and
/// sign. This realizes both the third Reidemeister move (slidable pattern)
/// and the triangle rewiring used by other local moves (cyclic pattern).
pub fn rewire_triangle(d: &Diagram, arcs: &[ArcId]) -> Result<Diagram> {
    if arcs.len() != 3 {
        return Err(AkError::site("triangle", "need exactly three arcs"));
    }
    let tri: HashSet<ArcId> = arcs.iter().copied().collect();
    let found = triangles(d)?;
    let mut sorted: Vec<ArcId> = arcs.to_vec();
    sorted.sort_unstable();
    if !found.iter().any(|t| t.arcs.to_vec() == sorted) {
        return Err(AkError::site(
            "triangle",
            format!("arcs {arcs:?} do not bound a triangle of three crossings"),
        ));
    }
    let occ = d.occurrences()?;
    let mut out = d.clone();
    for &x in &sorted {
        let ((pc, _), (qc, _)) = arc_corners(d, x)?;
        let a = d.prev_arc(&occ, x).ok_or_else(|| AkError::site("triangle", "open strand"))?;
        let b = d.next_arc(&occ, x).ok_or_else(|| AkError::site("triangle", "open strand"))?;
        if tri.contains(&a) || tri.contains(&b) {
            return Err(AkError::site(
                "triangle",
                "a strand runs along two sides of the triangle",
            ));
        }
        // Strand passed P then Q via (a -> x -> b); now Q then P.
        let find = |cr: usize, arc: ArcId, want_in: bool| -> usize {
            (0..4)
                .find(|&s| d.crossings[cr].slots[s] == arc && d.end_is_in(End::X { crossing: cr, slot: s }) == want_in)
                .expect("triangle slot present")
        };
        let p_in = find(pc, a, true);
        let p_out = find(pc, x, false);
        let q_in = find(qc, x, true);
        let q_out = find(qc, b, false);
        out.crossings[pc].slots[p_in] = x;
        out.crossings[pc].slots[p_out] = b;
        out.crossings[qc].slots[q_in] = a;
        out.crossings[qc].slots[q_out] = x;
    }
    out.validate()?;
    Ok(out)
}

/// All removal and slide sites, deterministically ordered.
pub fn sites(d: &Diagram) -> Result<Vec<ReidSite>> {
    let faces = planar::faces(d)?;
    let mut out = Vec::new();
    for face in &faces {
        match face.len() {
            1 => {
                if let Some((_, _, arc)) = dart_info(d, face[0]) {
                    out.push(ReidSite {
                        kind: ReidKind::R1Down,
                        arcs: vec![arc],
                    });
                }
            }
            2 => {
                let (Some(i0), Some(i1)) = (dart_info(d, face[0]), dart_info(d, face[1])) else {
                    continue;
                };
                let (c0, s0, x) = i0;
                let (c1, s1, y) = i1;
                if c0 == c1 || x == y {
                    continue;
                }
                // Removable when one strand is over at both crossings;
                // equivalently each bigon arc is over at both its ends or
                // under at both.
                let over = |s: usize| s == 1 || s == 3;
                let ((_, xt), (_, xh)) = match arc_corners(d, x) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                if over(xt) == over(xh) {
                    let _ = (s0, s1);
                    let mut arcs = vec![x, y];
                    arcs.sort_unstable();
                    out.push(ReidSite {
                        kind: ReidKind::R2Down,
                        arcs,
                    });
                }
            }
            _ => {}
        }
    }
    for t in triangles(d)? {
        if !t.cyclic {
            out.push(ReidSite {
                kind: ReidKind::R3,
                arcs: t.arcs.to_vec(),
            });
        }
    }
    out.sort_by(|a, b| (format!("{:?}", a.kind), &a.arcs).cmp(&(format!("{:?}", b.kind), &b.arcs)));
    out.dedup();
    Ok(out)
}

/// Remove a kink whose loop is `loop_arc`.
pub fn r1_down(d: &Diagram, loop_arc: ArcId) -> Result<Diagram> {
    for (i, c) in d.crossings.iter().enumerate() {
        let [a, b, cc, dd] = c.slots;
        let (merge, is_site) = if cc == loop_arc && b == loop_arc {
            ((a, dd), true)
        } else if a == loop_arc && dd == loop_arc {
            ((b, cc), true)
        } else if a == loop_arc && b == loop_arc {
            ((cc, dd), true)
        } else if cc == loop_arc && dd == loop_arc {
            ((a, b), true)
        } else {
            ((0, 0), false)
        };
        if is_site {
            let mut s = SpliceSet::new();
            s.merge(merge.0, merge.1);
            let drop = [loop_arc].into_iter().collect();
            let out = s.finish(d, &[i], &drop);
            out.validate()?;
            return Ok(out);
        }
    }
    Err(AkError::site(
        "r1-",
        format!("arc {loop_arc} is not a kink loop"),
    ))
}

/// Remove a bigon where one strand passes over the other twice.
pub fn r2_down(d: &Diagram, x: ArcId, y: ArcId) -> Result<Diagram> {
    let site = sites(d)?
        .into_iter()
        .find(|s| s.kind == ReidKind::R2Down && s.arcs == {
            let mut v = vec![x, y];
            v.sort_unstable();
            v
        });
    if site.is_none() {
        return Err(AkError::site(
            "r2-",
            format!("arcs {x},{y} do not bound a removable bigon"),
        ));
    }
    let occ = d.occurrences()?;
    let ((pc, _), (qc, _)) = arc_corners(d, x)?;
    let mut s = SpliceSet::new();
    for &arc in &[x, y] {
        let a = d.prev_arc(&occ, arc).ok_or_else(|| AkError::site("r2-", "open strand"))?;
        let b = d.next_arc(&occ, arc).ok_or_else(|| AkError::site("r2-", "open strand"))?;
        s.merge(a, arc);
        s.merge(arc, b);
    }
    let out = s.finish(d, &[pc, qc], &HashSet::new());
    out.validate()?;
    Ok(out)
}

/// Add a kink on `arc` with the given sign; `flip` picks the side the
/// loop lies on.
pub fn r1_up(d: &Diagram, arc: ArcId, sign: i64, flip: bool) -> Result<Diagram> {
    let occ = d.occurrences()?;
    let head = occ.head(arc).ok_or(AkError::ArcNotFound(arc))?;
    let mut out = d.clone();
    let y = d.fresh_arc();
    let z = y + 1;
    super::edit::set_end(&mut out, head, y);
    let (slots, over_b_to_d) = match (sign, flip) {
        (1, false) => ([arc, z, z, y], true),
        (1, true) => ([z, arc, y, z], true),
        (-1, false) => ([arc, y, z, z], false),
        (-1, true) => ([z, z, y, arc], false),
        _ => return Err(AkError::site("r1+", "sign must be +1 or -1")),
    };
    out.crossings.push(Crossing { slots, over_b_to_d });
    out.validate()?;
    Ok(out)
}

/// Poke `over` across `under`; they must cobound a face.
pub fn r2_up(d: &Diagram, over: ArcId, under: ArcId) -> Result<Diagram> {
    if over == under {
        return Err(AkError::site("r2+", "need two distinct arcs"));
    }
    let occ = d.occurrences()?;
    let oh = occ.head(over).ok_or(AkError::ArcNotFound(over))?;
    let uh = occ.head(under).ok_or(AkError::ArcNotFound(under))?;
    let base = d.fresh_arc();
    let (x2, m, y2, n) = (base, base + 1, base + 2, base + 3);
    let x = over;
    let y = under;
    // Strand X runs x -> m -> x2 over both crossings; strand Y runs
    // y -> n -> y2 under both. Four planar layouts are possible depending
    // on the relative position and orientation; take the first that
    // validates.
    let candidates: [[Crossing; 2]; 4] = [
        [
            Crossing { slots: [y, x, n, m], over_b_to_d: true },
            Crossing { slots: [n, x2, y2, m], over_b_to_d: false },
        ],
        [
            Crossing { slots: [y, m, n, x], over_b_to_d: false },
            Crossing { slots: [n, m, y2, x2], over_b_to_d: true },
        ],
        [
            Crossing { slots: [n, x, y2, m], over_b_to_d: true },
            Crossing { slots: [y, x2, n, m], over_b_to_d: false },
        ],
        [
            Crossing { slots: [n, m, y2, x], over_b_to_d: false },
            Crossing { slots: [y, m, n, x2], over_b_to_d: true },
        ],
    ];
    for cand in candidates {
        let mut out = d.clone();
        super::edit::set_end(&mut out, oh, x2);
        super::edit::set_end(&mut out, uh, y2);
        out.crossings.extend(cand);
        if out.validate().is_ok() {
            return Ok(out);
        }
    }
    Err(AkError::site(
        "r2+",
        format!("arcs {over} and {under} do not cobound a face"),
    ))
}

/// Apply a detected site.
pub fn apply_site(d: &Diagram, site: &ReidSite) -> Result<Diagram> {
    match site.kind {
        ReidKind::R1Down => r1_down(d, site.arcs[0]),
        ReidKind::R2Down => {
            if site.arcs.len() != 2 {
                return Err(AkError::site("r2-", "need two arcs"));
            }
            r2_down(d, site.arcs[0], site.arcs[1])
        }
        ReidKind::R3 => rewire_triangle(d, &site.arcs),
    }
}

/// Greedily remove kinks and bigons until none remain. Monotone in the
/// crossing number, so this terminates.
pub fn reduce(d: &Diagram) -> Result<Diagram> {
    let mut cur = d.clone();
    loop {
        let next = sites(&cur)?
            .into_iter()
            .find(|s| matches!(s.kind, ReidKind::R1Down | ReidKind::R2Down));
        match next {
            Some(site) => cur = apply_site(&cur, &site)?,
            None => return Ok(cur),
        }
    }
}
