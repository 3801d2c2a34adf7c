//! Band sums: attach the components of a small model link to a host
//! diagram along routed bands. A band is realized as two anti-parallel
//! strands; each declared pass crosses one host arc and creates exactly
//! two new crossings. Bands are untwisted strips.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::diagram::{edit, reid, ArcId, Crossing, Diagram, End};
use crate::error::{AkError, Result};

/// Which side of the crossed arc the band arrives from, seen along the
/// arc's orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

/// One transverse crossing of a band over or under a host arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandPass {
    pub arc: ArcId,
    pub over: bool,
    pub side: Side,
}

/// A band from a host arc (the foot) to one model component, crossing the
/// listed arcs on the way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandRoute {
    pub foot: ArcId,
    #[serde(default)]
    pub passes: Vec<BandPass>,
}

impl BandRoute {
    pub fn trivial(foot: ArcId) -> Self {
        BandRoute {
            foot,
            passes: Vec::new(),
        }
    }
}

/// A Brunnian link placed in a disk, with one marked foot arc per
/// component where a band attaches. A model of type k has k+1 components.
#[derive(Debug, Clone)]
pub struct LinkModel {
    pub name: String,
    pub type_index: usize,
    pub diagram: Diagram,
    pub feet: Vec<ArcId>,
}

impl LinkModel {
    /// Validates the arity and the Brunnian property: deleting any single
    /// component must leave a diagram that greedily reduces to an unlink.
    pub fn new(name: &str, type_index: usize, diagram: Diagram, feet: Vec<ArcId>) -> Result<Self> {
        diagram.validate()?;
        if !diagram.is_link() {
            return Err(AkError::Invalid("a link model has no graph vertices".into()));
        }
        let comps = diagram.closed_components()?;
        let n = comps.len() + diagram.free_loops;
        if n != type_index + 1 {
            return Err(AkError::Invalid(format!(
                "a type-{type_index} model needs {} components, found {n}",
                type_index + 1
            )));
        }
        if feet.len() != type_index + 1 {
            return Err(AkError::Invalid(format!(
                "a type-{type_index} model needs {} feet, found {}",
                type_index + 1,
                feet.len()
            )));
        }
        let mut comp_of_feet = HashSet::new();
        for &f in &feet {
            let Some(c) = comps.iter().position(|c| c.contains(&f)) else {
                return Err(AkError::ArcNotFound(f));
            };
            if !comp_of_feet.insert(c) {
                return Err(AkError::Invalid(
                    "model feet must sit on distinct components".into(),
                ));
            }
        }
        for i in 0..n {
            let keep: HashSet<usize> = (0..n).filter(|&j| j != i).collect();
            let rest = edit::select_components(&diagram, &keep)?;
            if reid::reduce(&rest)? != Diagram::unlink(type_index) {
                return Err(AkError::Invalid(format!(
                    "model is not Brunnian: deleting component {i} leaves a nontrivial link"
                )));
            }
        }
        Ok(LinkModel {
            name: name.to_string(),
            type_index,
            diagram,
            feet,
        })
    }

    pub fn component_count(&self) -> usize {
        self.type_index + 1
    }
}

fn model_feet(d: &Diagram) -> Result<Vec<ArcId>> {
    Ok(d.closed_components()?.iter().map(|c| c[0]).collect())
}

/// The built-in models: the Hopf link (type 1) and the Borromean rings
/// (type 2).
pub fn model_catalog() -> Vec<LinkModel> {
    let mut out = Vec::new();
    for (name, source, k) in [
        ("hopf", "hopf+", 1),
        ("hopf-", "hopf-", 1),
        ("borromean", "borromean", 2),
    ] {
        let d = catalog::named(source).expect("catalog entry");
        let feet = model_feet(&d).expect("link components");
        out.push(LinkModel::new(name, k, d, feet).expect("built-in model is Brunnian"));
    }
    out
}

/// Look up a built-in model by name.
pub fn model(name: &str) -> Result<LinkModel> {
    model_catalog()
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| AkError::Invalid(format!("unknown link model {name:?}")))
}

/// A crossing change expressed as a band sum: attach a Hopf link of the
/// opposite sign with trivial routes, feet on the two outgoing arcs of the
/// crossing. The inserted clasp composes with the crossing to its switch,
/// so the result has the conway polynomial and linking data of
/// `crossing_change(d, i)`.
pub fn crossing_change_via_band(d: &Diagram, i: usize) -> Result<Diagram> {
    let att = crossing_change_attachment(d, i)?;
    band_sum(d, &[att])
}

/// The attachment data behind `crossing_change_via_band`: a Hopf model of
/// the opposite sign with trivial routes whose feet sit at crossing `i`.
pub fn crossing_change_attachment(d: &Diagram, i: usize) -> Result<(LinkModel, Vec<BandRoute>)> {
    let c = *d.crossing(i)?;
    let base = model(if c.sign() > 0 { "hopf-" } else { "hopf" })?;
    let comps = base.diagram.closed_components()?;
    // The clasp must land in series with the crossing; of the planar
    // splice layouts, the first one wins (they all have the invariants of
    // the switch).
    let host_feet = [
        (c.under().1, c.over().1),
        (c.under().0, c.over().0),
        (c.over().1, c.under().1),
        (c.over().0, c.under().0),
    ];
    for (ha, hb) in host_feet {
        if ha == hb {
            continue;
        }
        for &fa in &comps[0] {
            for &fb in &comps[1] {
                let m = LinkModel::new(
                    &base.name,
                    base.type_index,
                    base.diagram.clone(),
                    vec![fa, fb],
                )?;
                let routes = vec![BandRoute::trivial(ha), BandRoute::trivial(hb)];
                if band_sum(d, &[(m.clone(), routes.clone())]).is_ok() {
                    return Ok((m, routes));
                }
            }
        }
    }
    Err(AkError::BandRoute(format!(
        "no planar trivial-route clasp insertion at crossing {i}"
    )))
}

/// A crossing between perpendicular strands. `over_ccw` states that the
/// over strand's travel direction is the counterclockwise rotation of the
/// under strand's.
fn cross(u_in: ArcId, u_out: ArcId, o_in: ArcId, o_out: ArcId, over_ccw: bool) -> Crossing {
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

/// Cut the host open at the head of `h` and the model at the head of `m`,
/// and join the cuts by a band whose two strands cross the pass arcs in
/// order. Strand one continues the flow of `h`, strand two the flow of `m`;
/// strand two runs on the left of strand one.
fn attach_band(d: &mut Diagram, h: ArcId, m: ArcId, passes: &[BandPass]) -> Result<()> {
    let occ = d.occurrences()?;
    let pos_h = occ.head(h).ok_or(AkError::ArcNotFound(h))?;
    let pos_m = occ.head(m).ok_or(AkError::ArcNotFound(m))?;
    let t = passes.len();
    let first_new = d.fresh_arc();
    let mut next = first_new;
    let mut fresh = || {
        let a = next;
        next += 1;
        a
    };
    // Strand-one segments b[i] leave pass i heading for pass i+1 (or the
    // model cut); strand-two segments u[i] leave pass i heading for pass
    // i-1 (or the host cut).
    let u: Vec<ArcId> = (0..t).map(|_| fresh()).collect();
    let b: Vec<ArcId> = (0..t).map(|_| fresh()).collect();
    // Close both cuts up front so every later edit is local to one pass.
    edit::set_end(d, pos_m, if t == 0 { h } else { b[t - 1] });
    edit::set_end(d, pos_h, if t == 0 { m } else { u[0] });
    // While the band is under construction the diagram is not globally
    // valid, so pass-arc heads are found by direct slot scan.
    let find_head = |d: &Diagram, arc: ArcId| -> Option<End> {
        for (ci, c) in d.crossings.iter().enumerate() {
            for slot in 0..4 {
                let end = End::X { crossing: ci, slot };
                if c.slots[slot] == arc && d.end_is_in(end) {
                    return Some(end);
                }
            }
        }
        for (vi, v) in d.vertices.iter().enumerate() {
            for (slot, &(a, head)) in v.ends.iter().enumerate() {
                if a == arc && head {
                    return Some(End::V { vertex: vi, slot });
                }
            }
        }
        None
    };
    for (i, p) in passes.iter().enumerate() {
        let s1 = if i == 0 { h } else { b[i - 1] };
        if p.arc == h || p.arc == m || p.arc >= first_new {
            return Err(AkError::BandRoute(format!(
                "pass arc {} lies on the band being routed",
                p.arc
            )));
        }
        let pos_n = find_head(d, p.arc).ok_or(AkError::BandRoute(format!(
            "pass arc {} not found",
            p.arc
        )))?;
        // The crossed arc splits n -> x -> y; in the arc's local frame it
        // runs north, and the band crosses east-west.
        let x = fresh();
        let y = fresh();
        let s2_in = if i + 1 == t { m } else { u[i + 1] };
        let s2_out = u[i];
        // Build one band-vs-arc crossing; `band_west` is the band strand's
        // travel direction in the arc's frame.
        let mk = |v: (ArcId, ArcId), band: (ArcId, ArcId), band_west: bool| {
            if p.over {
                cross(v.0, v.1, band.0, band.1, band_west)
            } else {
                cross(band.0, band.1, v.0, v.1, !band_west)
            }
        };
        match p.side {
            // Strand one arrives from the west going east; strand two, on
            // its left, crosses north of it going west.
            Side::L => {
                d.crossings.push(mk((p.arc, x), (s1, b[i]), false));
                d.crossings.push(mk((x, y), (s2_in, s2_out), true));
            }
            // Strand one arrives from the east; strand two crosses south.
            Side::R => {
                d.crossings.push(mk((p.arc, x), (s2_in, s2_out), false));
                d.crossings.push(mk((x, y), (s1, b[i]), true));
            }
        }
        edit::set_end(d, pos_n, y);
    }
    Ok(())
}

/// Band sum of `d` with the given models along the given routes: one route
/// per model foot, in order. An empty attachment list returns `d`.
pub fn band_sum(d: &Diagram, attachments: &[(LinkModel, Vec<BandRoute>)]) -> Result<Diagram> {
    d.validate()?;
    let host_arcs: HashSet<ArcId> = d.arc_ids().into_iter().collect();
    let vertex_arcs: HashSet<ArcId> = d
        .vertices
        .iter()
        .flat_map(|v| v.ends.iter().map(|e| e.0))
        .collect();
    let mut feet_seen: HashSet<ArcId> = HashSet::new();
    let mut out = d.clone();
    for (model, routes) in attachments {
        if routes.len() != model.feet.len() {
            return Err(AkError::BandRoute(format!(
                "model {:?} has {} feet but {} routes were given",
                model.name,
                model.feet.len(),
                routes.len()
            )));
        }
        let offset = out.arc_ids().last().copied().unwrap_or(0);
        out = edit::disjoint_union(&out, &model.diagram);
        for (route, &foot_m) in routes.iter().zip(&model.feet) {
            if !host_arcs.contains(&route.foot) {
                return Err(AkError::BandRoute(format!(
                    "foot {} is not an arc of the host diagram",
                    route.foot
                )));
            }
            if vertex_arcs.contains(&route.foot) {
                return Err(AkError::BandRoute(format!(
                    "foot {} is incident to a graph vertex",
                    route.foot
                )));
            }
            if !feet_seen.insert(route.foot) {
                return Err(AkError::BandRoute(format!(
                    "two routes share the foot arc {}",
                    route.foot
                )));
            }
            attach_band(&mut out, route.foot, foot_m + offset, &route.passes)?;
        }
    }
    out.validate()
        .map_err(|e| AkError::BandRoute(format!("routes interfere: {e}")))?;
    Ok(out)
}
