//! The clasp-pass move: a clasp of two strands passes through a
//! transverse band of two parallel strands. The site names the two clasp
//! crossings and the four crossings between the band and the clasp
//! strands. The band starts either threaded through the clasp's bigon or
//! just outside it past the second clasp crossing; applying the move
//! carries both band strands across that crossing, which passes the hook
//! of the clasp through the band. Each strand crosses the corner by a
//! triangle rewiring, so over/under data and the crossing count are
//! preserved, and the move is its own inverse at the same site.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{reid, ArcId, Crossing, Diagram, End, Occurrences};
use crate::error::{AkError, Result};

/// A clasp-pass site: `clasp` is the ordered pair of crossings where the
/// two passing strands hook each other — the band crosses the corner
/// `clasp[1]` — and `grid` is the four crossings between the clasp
/// strands and the two band strands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaspSite {
    pub clasp: [usize; 2],
    pub grid: [usize; 4],
}

/// The out-slot continuing the strand that enters a crossing at `s`.
/// In-slots are 0 and one of 1/3 depending on the crossing's flag, so the
/// mapping does not depend on the flag.
fn out_slot(s: usize) -> usize {
    match s {
        0 => 2,
        1 => 3,
        _ => 1,
    }
}

/// The in-slot of the strand leaving a crossing at `s`.
fn in_slot(s: usize) -> usize {
    match s {
        2 => 0,
        3 => 1,
        _ => 3,
    }
}

/// Slots 1 and 3 carry the over strand.
fn over(s: usize) -> bool {
    s % 2 == 1
}

/// A strand walked from an out-slot of one crossing to another crossing,
/// recording the crossings passed through on the way.
struct Chain {
    inter: Vec<(usize, usize)>, // (crossing, in-slot there)
    arcs: Vec<ArcId>,           // one more entry than `inter`
    start_out: usize,           // out-slot at the start crossing
    end_in: usize,              // in-slot at the target crossing
}

fn walk_to(
    d: &Diagram,
    occ: &Occurrences,
    from: usize,
    start_out: usize,
    target: usize,
    max_inter: usize,
) -> Option<Chain> {
    let mut arc = d.crossings[from].slots[start_out];
    let mut inter = Vec::new();
    let mut arcs = vec![arc];
    loop {
        let Some(End::X { crossing, slot }) = occ.head(arc) else {
            return None;
        };
        if crossing == target {
            return Some(Chain {
                inter,
                arcs,
                start_out,
                end_in: slot,
            });
        }
        if inter.len() == max_inter {
            return None;
        }
        inter.push((crossing, slot));
        arc = d.crossings[crossing].slots[out_slot(slot)];
        arcs.push(arc);
    }
}

/// Crossings on the strand continuing forward out of `from` at `start_out`.
fn run_forward(
    d: &Diagram,
    occ: &Occurrences,
    from: usize,
    start_out: usize,
    steps: usize,
) -> Vec<(usize, usize)> {
    let mut arc = d.crossings[from].slots[start_out];
    let mut run = Vec::new();
    while run.len() < steps {
        let Some(End::X { crossing, slot }) = occ.head(arc) else {
            break;
        };
        run.push((crossing, slot));
        arc = d.crossings[crossing].slots[out_slot(slot)];
    }
    run
}

/// Crossings on the strand walked backward against its orientation from
/// the in-slot `start_in` of `from`; slots recorded are out-slots.
fn run_backward(
    d: &Diagram,
    occ: &Occurrences,
    from: usize,
    start_in: usize,
    steps: usize,
) -> Vec<(usize, usize)> {
    let mut arc = d.crossings[from].slots[start_in];
    let mut run = Vec::new();
    while run.len() < steps {
        let Some(End::X { crossing, slot }) = occ.tail(arc) else {
            break;
        };
        run.push((crossing, slot));
        arc = d.crossings[crossing].slots[in_slot(slot)];
    }
    run
}

/// The two hooked strands at the ordered clasp pair: p runs k1 -> k2 and
/// q runs k2 -> k1, each passing only through grid crossings on the way,
/// on opposite transits at both clasp crossings.
fn clasp_chains(
    d: &Diagram,
    occ: &Occurrences,
    k1: usize,
    k2: usize,
    grid: &HashSet<usize>,
) -> Result<(Chain, Chain)> {
    let outs = |c: &Crossing| [2usize, if c.over_b_to_d { 3 } else { 1 }];
    for po in outs(&d.crossings[k1]) {
        let Some(p) = walk_to(d, occ, k1, po, k2, 2) else {
            continue;
        };
        if !p.inter.iter().all(|&(c, _)| grid.contains(&c)) {
            continue;
        }
        for qo in outs(&d.crossings[k2]) {
            if in_slot(qo) == p.end_in {
                continue; // same strand through k2
            }
            let Some(q) = walk_to(d, occ, k2, qo, k1, 2) else {
                continue;
            };
            if in_slot(po) == q.end_in || !q.inter.iter().all(|&(c, _)| grid.contains(&c)) {
                continue;
            }
            return Ok((p, q));
        }
    }
    Err(AkError::site(
        "clasp_pass",
        "the clasp crossings are not joined by two strands running in opposite directions",
    ))
}

/// Slide one band strand across the clasp corner: `t1` connects the grid
/// crossing `gp` to the corner, `t2` the corner to the grid crossing
/// `gq`, and the band strand crosses both transversally. The third
/// triangle side is the band arc occupying the transverse slots — the
/// opposite-parity slot pair — at both crossings; the pattern admits
/// exactly one such arc.
fn slide_corner(d: &Diagram, t1: ArcId, t2: ArcId, gp: usize, gq: usize) -> Result<Diagram> {
    // The under strand holds slots 0 and 2, the over strand 1 and 3; the
    // transverse strand holds the pair the corner arc is not on.
    let perp = |c: usize, arc: ArcId| -> Option<[usize; 2]> {
        let s = (0..4).find(|&s| d.crossings[c].slots[s] == arc)?;
        Some(if s % 2 == 0 { [1, 3] } else { [0, 2] })
    };
    let (Some(perp_p), Some(perp_q)) = (perp(gp, t1), perp(gq, t2)) else {
        return Err(AkError::site(
            "clasp_pass",
            "the corner arcs do not meet the band crossings as the pattern requires",
        ));
    };
    let perp_q: Vec<ArcId> = perp_q.iter().map(|&s| d.crossings[gq].slots[s]).collect();
    let mut t3 = None;
    for &s in &perp_p {
        let arc = d.crossings[gp].slots[s];
        if arc != t1 && arc != t2 && perp_q.contains(&arc) {
            if t3.replace(arc).is_some() {
                return Err(AkError::site(
                    "clasp_pass",
                    "two band arcs connect the crossings beside the corner",
                ));
            }
        }
    }
    let Some(t3) = t3 else {
        return Err(AkError::site(
            "clasp_pass",
            "the band strand next to the clasp corner does not bound a triangle with it",
        ));
    };
    reid::rewire_triangle(d, &[t1, t2, t3]).map_err(|_| {
        AkError::site(
            "clasp_pass",
            "the band strand next to the clasp corner does not bound a triangle with it",
        )
    })
}

/// The two in-slots of a crossing: the under strand enters at 0, the over
/// strand at 1 or 3 by the flag.
fn in_slots(c: &Crossing) -> [usize; 2] {
    [0, if c.over_b_to_d { 1 } else { 3 }]
}

/// Check the band is an untwisted ribbon: at each of the two crossings in
/// `side_a` (given with the in-slot of the clasp strand there), the band
/// strand's next crossing along its orientation — forward for one strand,
/// backward for the other — lies in `side_b`. Parallel copies of one core
/// run the two directions; two strands running the same way are a
/// different tangle and are refused.
fn check_ribbon(
    d: &Diagram,
    occ: &Occurrences,
    side_a: &[(usize, usize)],
    side_b: &HashSet<usize>,
) -> Result<()> {
    let mut dirs = Vec::new();
    for &(c, chain_in) in side_a {
        let band_in = *in_slots(&d.crossings[c])
            .iter()
            .find(|&&s| s != chain_in)
            .expect("two in-slots");
        let fwd = match occ.head(d.crossings[c].slots[out_slot(band_in)]) {
            Some(End::X { crossing, .. }) => side_b.contains(&crossing),
            _ => false,
        };
        let back = match occ.tail(d.crossings[c].slots[band_in]) {
            Some(End::X { crossing, .. }) => side_b.contains(&crossing),
            _ => false,
        };
        dirs.push((fwd, back));
    }
    let ok = dirs == [(true, false), (false, true)] || dirs == [(false, true), (true, false)];
    if !ok {
        return Err(AkError::site(
            "clasp_pass",
            "the band strands do not run through the site as the two parallel copies of a ribbon",
        ));
    }
    Ok(())
}

/// Pass the clasp hook through the band at the given site. If the band is
/// threaded through the clasp's bigon it exits across the corner
/// `site.clasp[1]`; if it sits just outside that corner it threads back
/// in. Both band strands cross the corner one after the other, the nearer
/// strand first.
pub fn clasp_pass(d: &Diagram, site: &ClaspSite) -> Result<Diagram> {
    d.validate()?;
    let all: Vec<usize> = site.clasp.iter().chain(site.grid.iter()).copied().collect();
    let set: HashSet<usize> = all.iter().copied().collect();
    if set.len() != 6 {
        return Err(AkError::site("clasp_pass", "six distinct crossings required"));
    }
    for &i in &all {
        d.crossing(i)?;
    }
    let [k1, k2] = site.clasp;
    let grid: HashSet<usize> = site.grid.iter().copied().collect();
    let occ = d.occurrences()?;
    let (p, q) = clasp_chains(d, &occ, k1, k2, &grid)?;
    if over(p.start_out) == over(p.end_in) {
        return Err(AkError::site(
            "clasp_pass",
            "the clasp strands do not hook: one runs over or under at both crossings",
        ));
    }

    let inward = match (p.inter.len(), q.inter.len()) {
        (2, 2) => {
            // Band threaded through the bigon. The band strands must be
            // parallel copies: each bigon arc passes its two band
            // crossings on the same level.
            let crossings: HashSet<usize> = p
                .inter
                .iter()
                .chain(q.inter.iter())
                .map(|&(c, _)| c)
                .collect();
            if crossings != grid {
                return Err(AkError::site(
                    "clasp_pass",
                    "the four band crossings are not the crossings on the clasp's bigon",
                ));
            }
            if over(p.inter[0].1) != over(p.inter[1].1) || over(q.inter[0].1) != over(q.inter[1].1)
            {
                return Err(AkError::site(
                    "clasp_pass",
                    "the band strands are not parallel copies: they thread the bigon differently",
                ));
            }
            let r_side: HashSet<usize> = q.inter.iter().map(|&(c, _)| c).collect();
            check_ribbon(d, &occ, &p.inter, &r_side)?;
            false
        }
        (0, 0) => {
            // Band outside the bigon: it must sit just past k2, crossing
            // the two clasp strands there.
            let t_run = run_forward(d, &occ, k2, out_slot(p.end_in), 2);
            let r_run = run_backward(d, &occ, k2, in_slot(q.start_out), 2);
            let on_grid =
                |run: &[(usize, usize)]| run.len() == 2 && run.iter().all(|&(c, _)| grid.contains(&c));
            if !on_grid(&t_run) || !on_grid(&r_run) {
                // Diagnose the mirrored layout for a better message.
                let t1 = run_forward(d, &occ, k1, out_slot(q.end_in), 1);
                let r1 = run_backward(d, &occ, k1, in_slot(p.start_out), 1);
                let near_k1 = [t1, r1]
                    .iter()
                    .any(|r| r.first().is_some_and(|&(c, _)| grid.contains(&c)));
                return Err(AkError::site(
                    "clasp_pass",
                    if near_k1 {
                        "the band sits beside the first clasp crossing; list that crossing second in the site"
                    } else {
                        "the four band crossings do not sit on the clasp strands at the site"
                    },
                ));
            }
            let crossings: HashSet<usize> = t_run
                .iter()
                .chain(r_run.iter())
                .map(|&(c, _)| c)
                .collect();
            if crossings != grid {
                return Err(AkError::site(
                    "clasp_pass",
                    "the four band crossings do not pair up beside the clasp",
                ));
            }
            if over(t_run[0].1) != over(t_run[1].1) || over(r_run[0].1) != over(r_run[1].1) {
                return Err(AkError::site(
                    "clasp_pass",
                    "the band strands are not parallel copies: they cross the clasp strands differently",
                ));
            }
            let r_side: HashSet<usize> = r_run.iter().map(|&(c, _)| c).collect();
            check_ribbon(d, &occ, &t_run, &r_side)?;
            true
        }
        _ => {
            return Err(AkError::site(
                "clasp_pass",
                "the band is neither threaded through the bigon nor beside it",
            ));
        }
    };

    let mut out = d.clone();
    for _ in 0..2 {
        let occ = out.occurrences()?;
        let (p, q) = clasp_chains(&out, &occ, k1, k2, &grid)?;
        if inward {
            // Nearest band strand past k2 threads back into the bigon.
            let a_out = out.crossings[k2].slots[out_slot(p.end_in)];
            let b_in = out.crossings[k2].slots[in_slot(q.start_out)];
            let (Some(&End::X { crossing: gp, .. }), Some(&End::X { crossing: gq, .. })) =
                (occ.head(a_out).as_ref(), occ.tail(b_in).as_ref())
            else {
                return Err(AkError::site(
                    "clasp_pass",
                    "the clasp strands leave the site into graph vertices",
                ));
            };
            out = slide_corner(&out, a_out, b_in, gp, gq)?;
        } else {
            // Innermost band strand exits the bigon across k2.
            let &(gp, _) = p.inter.last().expect("threaded chain");
            let (gq, _) = q.inter[0];
            let t1 = *p.arcs.last().unwrap();
            let t2 = q.arcs[0];
            out = slide_corner(&out, t1, t2, gp, gq)?;
        }
    }
    out.validate()?;
    Ok(out)
}

/// Geometry for the built fixtures: a perpendicular crossing. `over_ccw`
/// states the over strand's direction is the counterclockwise rotation of
/// the under strand's.
fn cross(u_in: u32, u_out: u32, o_in: u32, o_out: u32, over_ccw: bool) -> Crossing {
    if over_ccw {
        Crossing {
            slots: [u_in, o_in, u_out, o_out],
            over_b_to_d: true,
        }
    } else {
        Crossing {
            slots: [u_in, o_out, u_out, o_in],
            over_b_to_d: false,
        }
    }
}

const E: u8 = 0;
const N: u8 = 1;
const W: u8 = 2;
const S: u8 = 3;

fn ccw(d: u8) -> u8 {
    (d + 1) % 4
}

fn mk(a_arcs: (u32, u32), a_dir: u8, b_arcs: (u32, u32), b_dir: u8, a_over: bool) -> Crossing {
    if a_over {
        cross(b_arcs.0, b_arcs.1, a_arcs.0, a_arcs.1, a_dir == ccw(b_dir))
    } else {
        cross(a_arcs.0, a_arcs.1, b_arcs.0, b_arcs.1, b_dir == ccw(a_dir))
    }
}

/// The standard six-crossing site configuration with the band threaded
/// through the clasp's bigon, and its site. Component A is a closed loop
/// that hooks itself: its top strand dips south at the first clasp
/// crossing and climbs back at the second; the return strand runs west
/// through the hook. Component B is a ring threaded through the bigon as
/// the two parallel copies of an untwisted band. `band_over` picks the
/// over strand at the four band crossings (tip-west, return-west,
/// return-east, tip-east; `true` puts the clasp strand on top);
/// `hook_over` picks it at the two clasp crossings. The pass applies
/// exactly when the clasp hooks (`hook_over` mixed) and the band strands
/// are parallel copies (`band_over` symmetric under reversal).
pub fn threaded_fixture(
    band_over: [bool; 4],
    hook_over: [bool; 2],
) -> Result<(Diagram, ClaspSite)> {
    let (a1, a2, a3, a4, a5, a6, a7, a8) = (1u32, 2, 3, 4, 5, 6, 7, 8);
    let (b1, b2, b3, b4) = (9u32, 10, 11, 12);
    let d = Diagram {
        crossings: vec![
            mk((a2, a3), E, (b1, b2), N, band_over[0]), // tip x west band strand
            mk((a7, a8), W, (b2, b3), N, band_over[1]), // return x west band strand
            mk((a6, a7), W, (b3, b4), S, band_over[2]), // return x east band strand
            mk((a3, a4), E, (b4, b1), S, band_over[3]), // tip x east band strand
            mk((a1, a2), S, (a8, a1), W, hook_over[0]), // the hook opens
            mk((a4, a5), N, (a5, a6), W, hook_over[1]), // the hook closes
        ],
        vertices: vec![],
        free_loops: 0,
    };
    d.validate()?;
    Ok((d, ClaspSite { clasp: [4, 5], grid: [0, 1, 2, 3] }))
}

/// The same configuration with the band already passed: the ring sits
/// just past the second clasp crossing, crossing both clasp strands
/// there. `clasp_pass` carries `threaded_fixture` to this layout and back.
pub fn passed_fixture(
    band_over: [bool; 4],
    hook_over: [bool; 2],
) -> Result<(Diagram, ClaspSite)> {
    let (a1, a2, a3, a4, a5, a6, a7, a8) = (1u32, 2, 3, 4, 5, 6, 7, 8);
    let (b1, b2, b3, b4) = (9u32, 10, 11, 12);
    let d = Diagram {
        crossings: vec![
            mk((a3, a4), E, (b2, b3), N, band_over[0]), // top strand x west band strand
            mk((a6, a7), W, (b1, b2), N, band_over[1]), // return x west band strand
            mk((a5, a6), W, (b4, b1), S, band_over[2]), // return x east band strand
            mk((a4, a5), E, (b3, b4), S, band_over[3]), // top strand x east band strand
            mk((a1, a2), S, (a8, a1), W, hook_over[0]), // the hook opens
            mk((a2, a3), N, (a7, a8), W, hook_over[1]), // the hook closes
        ],
        vertices: vec![],
        free_loops: 0,
    };
    d.validate()?;
    Ok((d, ClaspSite { clasp: [4, 5], grid: [0, 1, 2, 3] }))
}

/// A deterministic battery of diagrams with an applicable clasp-pass
/// site: every hooked, parallel-copy choice of the threaded layout, plus
/// closures that join the ring to the loop or tie a trefoil into the
/// loop. Each entry admits `clasp_pass` at its site.
pub fn fixture_battery() -> Vec<(Diagram, ClaspSite)> {
    let mut out = Vec::new();
    for hook in [[false, true], [true, false]] {
        for band in [
            [false; 4],
            [false, true, true, false],
            [true, false, false, true],
            [true; 4],
        ] {
            let (d, site) = threaded_fixture(band, hook).expect("fixture builds");
            // The ring joined onto the loop: a one-component closure.
            let joined = crate::diagram::edit::splice_arcs(&d, 1, 9).expect("splice");
            // A trefoil tied into the loop away from the site.
            let trefoil = crate::catalog::named("trefoil").expect("catalog");
            let mut tied = crate::diagram::edit::disjoint_union(&d, &trefoil);
            tied = crate::diagram::edit::splice_arcs(&tied, 1, tied.arc_ids()[12])
                .expect("splice");
            out.push((d, site));
            out.push((joined, site));
            out.push((tied, site));
        }
    }
    out
}
