//! User-defined tangle-rewrite rules: a rule is an ordered pair of
//! tangles with the same boundary, applied by matching the first tangle
//! onto named crossings of a diagram and splicing in the second.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::diagram::{ArcId, Crossing, Diagram};
use crate::error::{AkError, Result};
use crate::moves::band::{self, LinkModel};

/// A fragment of a diagram held in a disk: some crossings plus the
/// ordered list of strand ends crossing the disk boundary. Arc labels are
/// local to the tangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tangle {
    pub crossings: Vec<Crossing>,
    /// Open strand ends: `(arc, true)` if the strand enters the disk on
    /// this arc (its head lies inside), `(arc, false)` if it leaves.
    pub boundary: Vec<(ArcId, bool)>,
}

impl Tangle {
    /// Cut the named crossings out of a diagram. Arcs with both ends on
    /// the selection become internal; arcs with one end form the
    /// boundary, ordered by arc label.
    pub fn from_diagram(d: &Diagram, crossings: &[usize]) -> Result<Tangle> {
        d.validate()?;
        let mut picked = Vec::new();
        for &i in crossings {
            picked.push(*d.crossing(i)?);
        }
        let mut ends: HashMap<ArcId, (u32, u32)> = HashMap::new(); // (heads, tails) inside
        for (k, c) in picked.iter().enumerate() {
            if crossings[..k].contains(&crossings[k]) {
                return Err(AkError::Invalid("tangle crossings must be distinct".into()));
            }
            for slot in 0..4 {
                let e = ends.entry(c.slots[slot]).or_default();
                let incoming = matches!(slot, 0) || slot == if c.over_b_to_d { 1 } else { 3 };
                if incoming {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        let mut boundary = Vec::new();
        for (&arc, &(heads, tails)) in &ends {
            match (heads, tails) {
                (1, 1) => {}
                (1, 0) => boundary.push((arc, true)),
                (0, 1) => boundary.push((arc, false)),
                _ => {
                    return Err(AkError::Invalid(format!(
                        "arc {arc} meets the selected crossings more than twice"
                    )));
                }
            }
        }
        boundary.sort_unstable();
        Ok(Tangle {
            crossings: picked,
            boundary,
        })
    }

    /// Every arc must appear once (boundary) or twice (internal) among
    /// the crossings, matching the declared boundary.
    fn validate(&self) -> Result<()> {
        let mut count: HashMap<ArcId, u32> = HashMap::new();
        for c in &self.crossings {
            for &a in &c.slots {
                *count.entry(a).or_default() += 1;
            }
        }
        let mut declared: Vec<ArcId> = self.boundary.iter().map(|&(a, _)| a).collect();
        declared.sort_unstable();
        let mut open: Vec<ArcId> = count
            .iter()
            .filter(|&(_, &n)| n == 1)
            .map(|(&a, _)| a)
            .collect();
        open.sort_unstable();
        if let Some((&a, _)) = count.iter().find(|&(_, &n)| n > 2) {
            return Err(AkError::Invalid(format!(
                "tangle arc {a} appears more than twice"
            )));
        }
        if declared != open {
            return Err(AkError::Invalid(format!(
                "tangle boundary {declared:?} does not list the open arc ends {open:?}"
            )));
        }
        Ok(())
    }
}

/// A named rewrite rule `before -> after` between tangles sharing a
/// boundary. Applying the rule and then its inverse at the image site
/// restores the diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMoveRule {
    pub name: String,
    pub before: Tangle,
    pub after: Tangle,
}

impl LocalMoveRule {
    pub fn new(name: &str, before: Tangle, after: Tangle) -> Result<Self> {
        before.validate()?;
        after.validate()?;
        if before.boundary != after.boundary {
            return Err(AkError::Invalid(format!(
                "rule boundary mismatch: before has {:?}, after has {:?}",
                before.boundary, after.boundary
            )));
        }
        Ok(LocalMoveRule {
            name: name.to_string(),
            before,
            after,
        })
    }

    /// The number of strands running through the rule's disk.
    pub fn arity(&self) -> usize {
        self.boundary_strands()
    }

    fn boundary_strands(&self) -> usize {
        self.before.boundary.len() / 2
    }

    /// The reverse rewrite.
    pub fn inverse(&self) -> LocalMoveRule {
        LocalMoveRule {
            name: format!("{}^-1", self.name),
            before: self.after.clone(),
            after: self.before.clone(),
        }
    }
}

/// Match `before` onto the diagram crossings listed in `site` (in rule
/// order) and return the rule-arc to diagram-arc assignment.
fn match_site(d: &Diagram, t: &Tangle, site: &[usize]) -> Result<HashMap<ArcId, ArcId>> {
    if site.len() != t.crossings.len() {
        return Err(AkError::site(
            "rule",
            format!(
                "site names {} crossings but the rule pattern has {}",
                site.len(),
                t.crossings.len()
            ),
        ));
    }
    let mut map: HashMap<ArcId, ArcId> = HashMap::new();
    let mut used: HashMap<ArcId, ArcId> = HashMap::new();
    for (k, (&ci, rc)) in site.iter().zip(&t.crossings).enumerate() {
        if site[..k].contains(&ci) {
            return Err(AkError::site("rule", "site crossings must be distinct"));
        }
        let dc = d.crossing(ci)?;
        if dc.over_b_to_d != rc.over_b_to_d {
            return Err(AkError::site(
                "rule",
                format!("crossing {ci} has the opposite handedness from pattern corner {k}"),
            ));
        }
        for slot in 0..4 {
            let (ra, da) = (rc.slots[slot], dc.slots[slot]);
            if let Some(&prev) = map.get(&ra) {
                if prev != da {
                    return Err(AkError::site(
                        "rule",
                        format!("pattern arc {ra} would match both arcs {prev} and {da}"),
                    ));
                }
            } else if let Some(&other) = used.get(&da) {
                return Err(AkError::site(
                    "rule",
                    format!("arc {da} would match both pattern arcs {other} and {ra}"),
                ));
            } else {
                map.insert(ra, da);
                used.insert(da, ra);
            }
        }
    }
    Ok(map)
}

/// Apply a rule at the given site: the diagram crossings listed match the
/// rule's pattern corners in order, and are replaced by the rule's
/// replacement tangle glued along the same boundary arcs.
pub fn apply_rule(d: &Diagram, rule: &LocalMoveRule, site: &[usize]) -> Result<Diagram> {
    d.validate()?;
    let map = match_site(d, &rule.before, site)?;
    let mut fresh = d.fresh_arc();
    let mut out_map: HashMap<ArcId, ArcId> = rule
        .before
        .boundary
        .iter()
        .map(|&(a, _)| (a, map[&a]))
        .collect();
    let mut crossings: Vec<Crossing> = d
        .crossings
        .iter()
        .enumerate()
        .filter(|(i, _)| !site.contains(i))
        .map(|(_, c)| *c)
        .collect();
    for rc in &rule.after.crossings {
        let mut c = *rc;
        for slot in 0..4 {
            let a = c.slots[slot];
            c.slots[slot] = *out_map.entry(a).or_insert_with(|| {
                let n = fresh;
                fresh += 1;
                n
            });
        }
        crossings.push(c);
    }
    let out = Diagram {
        crossings,
        vertices: d.vertices.clone(),
        free_loops: d.free_loops,
    };
    out.validate().map_err(|e| {
        AkError::site(
            "rule",
            format!("replacement does not close up at this site: {e}"),
        )
    })?;
    Ok(out)
}

/// An append-only collection of rewrite rules and band-sum link models;
/// reads are concurrent, registration is serialized.
#[derive(Debug, Default)]
pub struct Registry {
    rules: RwLock<Vec<LocalMoveRule>>,
    models: RwLock<Vec<LinkModel>>,
}

impl Registry {
    /// A registry preloaded with the built-in rules and link models.
    pub fn new() -> Registry {
        let reg = Registry::default();
        for rule in builtin_rules() {
            reg.register_rule(rule).expect("built-in rule is valid");
        }
        for m in band::model_catalog() {
            reg.register_model(m).expect("built-in model is valid");
        }
        reg
    }

    pub fn register_rule(&self, rule: LocalMoveRule) -> Result<usize> {
        rule.before.validate()?;
        rule.after.validate()?;
        if rule.before.boundary != rule.after.boundary {
            return Err(AkError::Invalid(
                "rule boundary mismatch between pattern and replacement".into(),
            ));
        }
        let mut rules = self.rules.write().expect("registry lock");
        rules.push(rule);
        Ok(rules.len() - 1)
    }

    pub fn rule(&self, id: usize) -> Result<LocalMoveRule> {
        self.rules
            .read()
            .expect("registry lock")
            .get(id)
            .cloned()
            .ok_or_else(|| AkError::Invalid(format!("no registered rule {id}")))
    }

    pub fn rules(&self) -> Vec<LocalMoveRule> {
        self.rules.read().expect("registry lock").clone()
    }

    pub fn register_model(&self, model: LinkModel) -> Result<usize> {
        let mut models = self.models.write().expect("registry lock");
        models.push(model);
        Ok(models.len() - 1)
    }

    /// Built-in models first, user registrations appended.
    pub fn models(&self) -> Vec<LinkModel> {
        self.models.read().expect("registry lock").clone()
    }
}

/// The built-in rules: a crossing switch and the triangle rewiring, both
/// extracted from catalog diagrams.
pub fn builtin_rules() -> Vec<LocalMoveRule> {
    let hopf = crate::catalog::named("hopf+").expect("catalog");
    let switched = crate::diagram::edit::switch_crossing(&hopf, 0).expect("switch");
    let change = LocalMoveRule::new(
        "crossing-change",
        Tangle::from_diagram(&hopf, &[0]).expect("tangle"),
        Tangle::from_diagram(&switched, &[0]).expect("tangle"),
    )
    .expect("boundary agrees");
    let trefoil = crate::catalog::named("trefoil").expect("catalog");
    let moved = crate::moves::delta_move(&trefoil, &[2, 4, 6]).expect("delta site");
    let delta = LocalMoveRule::new(
        "delta",
        Tangle::from_diagram(&trefoil, &[0, 1, 2]).expect("tangle"),
        Tangle::from_diagram(&moved, &[0, 1, 2]).expect("tangle"),
    )
    .expect("boundary agrees");
    vec![change, delta]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::diagram::canon;
    use crate::moves;

    fn canonical_eq(a: &Diagram, b: &Diagram) -> bool {
        canon::canonical(a).unwrap() == canon::canonical(b).unwrap()
    }

    #[test]
    fn crossing_rule_matches_direct_switch() {
        let reg = Registry::new();
        let rule = reg.rule(0).unwrap();
        assert_eq!(rule.name, "crossing-change");
        assert_eq!(rule.arity(), 2);
        for name in ["trefoil", "figure8", "whitehead"] {
            let d = catalog::named(name).unwrap();
            for i in 0..d.crossings.len() {
                let direct = moves::crossing_change(&d, i).unwrap();
                match apply_rule(&d, &rule, &[i]) {
                    Ok(via_rule) => assert!(canonical_eq(&via_rule, &direct), "{name} {i}"),
                    // The pattern is chiral; the mirrored corner needs the
                    // inverse rule.
                    Err(_) => {
                        let via_rule = apply_rule(&d, &rule.inverse(), &[i]).unwrap();
                        assert!(canonical_eq(&via_rule, &direct), "{name} {i} mirrored");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_rule_matches_delta_move() {
        let reg = Registry::new();
        let rule = reg.rule(1).unwrap();
        assert_eq!(rule.name, "delta");
        let t = catalog::named("trefoil").unwrap();
        let direct = moves::delta_move(&t, &[2, 4, 6]).unwrap();
        let via_rule = apply_rule(&t, &rule, &[0, 1, 2]).unwrap();
        assert!(canonical_eq(&via_rule, &direct));
        // The inverse rule at the image site restores the diagram.
        let back = apply_rule(&via_rule, &rule.inverse(), &[0, 1, 2]).unwrap();
        assert!(canonical_eq(&back, &t));
    }

    #[test]
    fn registration_rejects_boundary_mismatch() {
        let hopf = catalog::named("hopf+").unwrap();
        let one = Tangle::from_diagram(&hopf, &[0]).unwrap();
        let two = Tangle::from_diagram(&hopf, &[0, 1]).unwrap();
        assert!(matches!(
            LocalMoveRule::new("bad", one, two),
            Err(AkError::Invalid(_))
        ));
    }

    #[test]
    fn application_rejects_bad_sites() {
        let reg = Registry::new();
        let rule = reg.rule(1).unwrap();
        let t = catalog::named("trefoil").unwrap();
        assert!(matches!(
            apply_rule(&t, &rule, &[0, 1]),
            Err(AkError::SiteMismatch { .. })
        ));
        assert!(matches!(
            apply_rule(&t, &rule, &[0, 1, 7]),
            Err(AkError::CrossingNotFound(7))
        ));
        assert!(matches!(
            apply_rule(&t, &rule, &[0, 0, 1]),
            Err(AkError::SiteMismatch { .. })
        ));
    }

    #[test]
    fn registry_appends_models() {
        let reg = Registry::new();
        let builtin = reg.models().len();
        assert!(builtin >= 3);
        let extra = band::model("hopf").unwrap();
        let id = reg.register_model(extra).unwrap();
        assert_eq!(id, builtin);
        assert_eq!(reg.models().len(), builtin + 1);
    }
}
