//! Local moves on diagrams: crossing change, the delta move, the
//! clasp-pass move, band sums with link models, and a registry for
//! user-defined tangle-rewrite rules.

pub mod band;
pub mod clasp;
pub mod rules;

use crate::diagram::{edit, reid, ArcId, Diagram};
use crate::error::{AkError, Result};

pub use band::{
    band_sum, crossing_change_attachment, crossing_change_via_band, model_catalog, BandPass,
    BandRoute, LinkModel, Side,
};
pub use clasp::{clasp_pass, ClaspSite};
pub use rules::{apply_rule, builtin_rules, LocalMoveRule, Registry, Tangle};

/// Switch over and under strand at one crossing.
pub fn crossing_change(d: &Diagram, c: usize) -> Result<Diagram> {
    edit::switch_crossing(d, c)
}

/// Pass the three strands of a cyclically layered triangle through one
/// another. The site is the triple of arcs bounding the triangle; each
/// strand must be over at exactly one of its two corners (the delta
/// pattern). The move is its own inverse at the image site.
pub fn delta_move(d: &Diagram, arcs: &[ArcId]) -> Result<Diagram> {
    if arcs.len() != 3 {
        return Err(AkError::site("delta", "need exactly three arcs"));
    }
    let mut sorted = arcs.to_vec();
    sorted.sort_unstable();
    let found = reid::triangles(d)?;
    let Some(t) = found.iter().find(|t| t.arcs.to_vec() == sorted) else {
        return Err(AkError::site(
            "delta",
            format!("arcs {arcs:?} do not bound a triangle of three crossings"),
        ));
    };
    if !t.cyclic {
        return Err(AkError::site(
            "delta",
            "triangle layering is slidable (a Reidemeister III site), not cyclic",
        ));
    }
    reid::rewire_triangle(d, arcs)
}

/// A move described as data, matching the JSON move-site file format:
/// `{"move":"delta","arcs":[a,b,c]}`,
/// `{"move":"crossing_change","crossing":n}`,
/// `{"move":"clasp_pass","clasp":[k1,k2],"grid":[g0,g1,g2,g3]}`,
/// `{"move":"band_sum","model":"borromean","routes":[...]}`,
/// `{"move":"rule","id":n,"site":[c0,...]}`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MoveSpec {
    CrossingChange {
        crossing: usize,
    },
    Delta {
        arcs: [ArcId; 3],
    },
    ClaspPass {
        clasp: [usize; 2],
        grid: [usize; 4],
    },
    BandSum {
        model: String,
        routes: Vec<BandRoute>,
    },
    Rule {
        id: usize,
        site: Vec<usize>,
    },
}

/// Apply a described move. Band-sum models and rules are looked up in
/// the registry by name and id.
pub fn apply_move(d: &Diagram, spec: &MoveSpec, registry: &rules::Registry) -> Result<Diagram> {
    match spec {
        MoveSpec::CrossingChange { crossing } => crossing_change(d, *crossing),
        MoveSpec::Delta { arcs } => delta_move(d, arcs),
        MoveSpec::ClaspPass { clasp, grid } => clasp::clasp_pass(
            d,
            &clasp::ClaspSite {
                clasp: *clasp,
                grid: *grid,
            },
        ),
        MoveSpec::BandSum { model, routes } => {
            let m = registry
                .models()
                .into_iter()
                .find(|m| &m.name == model)
                .ok_or_else(|| AkError::Invalid(format!("unknown link model {model:?}")))?;
            band_sum(d, &[(m, routes.clone())])
        }
        MoveSpec::Rule { id, site } => rules::apply_rule(d, &registry.rule(*id)?, site),
    }
}
