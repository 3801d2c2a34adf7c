//! Finite type experiments: alternating band-sum schemes and order-(n;k)
//! tests, Vassiliev order tests on singular diagrams, and the packaged
//! experiments for move invariance, order bounds, the Whitehead
//! counterexample, and connected-sum group laws.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::diagram::{canon, edit, parse, planar, reid, ArcId, Diagram, FormalSum, SingularDiagram};
use crate::error::{AkError, Result};
use crate::invariants::{self, evaluate, evaluate_singular, evaluate_sum, Invariant, Value};
use crate::moves::{self, band, BandRoute, LinkModel, MoveSpec};

/// A base diagram with n+1 band attachments of type-(k-1) link models.
/// The 2^(n+1) subset band sums feed the order-(n;k) alternating sum.
#[derive(Debug, Clone)]
pub struct BandSumScheme {
    pub base: Diagram,
    pub attachments: Vec<(LinkModel, Vec<BandRoute>)>,
    pub k: usize,
}

impl BandSumScheme {
    /// Validates arity, model types, and syntactic non-interference: the
    /// host arcs touched by each attachment (feet and pass arcs, all of
    /// which must be base arcs) are pairwise disjoint.
    pub fn new(
        base: Diagram,
        attachments: Vec<(LinkModel, Vec<BandRoute>)>,
        k: usize,
    ) -> Result<BandSumScheme> {
        base.validate()?;
        if attachments.is_empty() {
            return Err(AkError::Invalid("a scheme needs at least one attachment".into()));
        }
        let base_arcs: HashSet<ArcId> = base.arc_ids().into_iter().collect();
        let mut touched: Vec<HashSet<ArcId>> = Vec::new();
        for (model, routes) in &attachments {
            if model.type_index + 1 != k {
                return Err(AkError::Invalid(format!(
                    "scheme of declared k={k} needs type-{} models, found type-{}",
                    k - 1,
                    model.type_index
                )));
            }
            if routes.len() != model.feet.len() {
                return Err(AkError::BandRoute(format!(
                    "model {:?} has {} feet but {} routes were given",
                    model.name,
                    model.feet.len(),
                    routes.len()
                )));
            }
            let mut t = HashSet::new();
            for r in routes {
                t.insert(r.foot);
                for p in &r.passes {
                    if !base_arcs.contains(&p.arc) {
                        return Err(AkError::BandRoute(format!(
                            "pass arc {} is not an arc of the base diagram",
                            p.arc
                        )));
                    }
                    t.insert(p.arc);
                }
            }
            if touched.iter().any(|s| !s.is_disjoint(&t)) {
                return Err(AkError::BandRoute(
                    "attachments interfere: they touch a common base arc".into(),
                ));
            }
            touched.push(t);
        }
        Ok(BandSumScheme {
            base,
            attachments,
            k,
        })
    }

    /// n in "order (n;k)": one less than the attachment count.
    pub fn n(&self) -> usize {
        self.attachments.len() - 1
    }

    /// Band sum over the subset encoded by the low bits of `mask`.
    pub fn subset_diagram(&self, mask: usize) -> Result<Diagram> {
        let picked: Vec<_> = self
            .attachments
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect();
        band::band_sum(&self.base, &picked)
    }
}

/// The signed sum over all attachment subsets X: Σ (-1)^|X| (base with
/// the bands of X attached). Terms appear in subset-mask order, the empty
/// subset first.
pub fn alternating_sum(scheme: &BandSumScheme) -> Result<FormalSum> {
    let mut terms = Vec::new();
    for mask in 0..1usize << scheme.attachments.len() {
        let sign = if (mask.count_ones() & 1) == 1 { -1 } else { 1 };
        terms.push((sign, scheme.subset_diagram(mask)?));
    }
    Ok(FormalSum { terms })
}

/// One row of a subset table: which attachments were included, the sign,
/// the canonical code of the summed diagram, and the invariant value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetRow {
    pub subset: Vec<usize>,
    pub sign: i64,
    pub code: String,
    pub value: Value,
}

/// One named exact check inside a composite experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn eq<T: PartialEq + std::fmt::Debug>(label: impl Into<String>, got: T, want: T) -> Check {
        let pass = got == want;
        Check {
            label: label.into(),
            pass,
            detail: format!("got {got:?}, want {want:?}"),
        }
    }
}

/// The result of one experiment: inputs by canonical code, the full
/// subset table when one exists, residuals, named checks, and the exact
/// (tolerance-zero) verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub subsets: Vec<SubsetRow>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub residuals: Vec<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub verdict: bool,
}

fn value_is_zero(v: &Value) -> bool {
    match v {
        Value::Int(n) => *n == 0,
        Value::Poly(p) => p.is_zero(),
    }
}

/// Evaluate the alternating sum of a scheme: the residual is zero exactly
/// when `inv` kills this scheme, the defining test for order (n;k).
pub fn order_nk_test(inv: Invariant, scheme: &BandSumScheme, budget: u64) -> Result<ExperimentReport> {
    let mut subsets = Vec::new();
    let sum = alternating_sum(scheme)?;
    for (mask, (sign, d)) in sum.terms.iter().enumerate() {
        let subset = (0..scheme.attachments.len())
            .filter(|i| mask >> i & 1 == 1)
            .collect();
        // Some valid diagrams have no PD text (an all-over circle); the
        // code column is informational, so degrade instead of failing.
        let code = canon::canonical(d)
            .map(|c| c.0)
            .unwrap_or_else(|_| format!("<unserialized: {} crossings>", d.crossings.len()));
        subsets.push(SubsetRow {
            subset,
            sign: *sign,
            code,
            value: evaluate(d, inv, budget)?,
        });
    }
    let residual = evaluate_sum(&sum, inv, budget)?;
    let verdict = value_is_zero(&residual);
    Ok(ExperimentReport {
        name: format!("order_nk n={} k={}", scheme.n(), scheme.k),
        inputs: vec![canon::canonical(&scheme.base)?.0],
        subsets,
        residuals: vec![residual],
        checks: Vec::new(),
        seed: None,
        verdict,
    })
}

/// Evaluate `inv` on a battery of m-singular diagrams. All residuals zero
/// is evidence (not proof) that the Vassiliev order of `inv` is < m.
pub fn vassiliev_order_test(
    inv: Invariant,
    battery: &[SingularDiagram],
    budget: u64,
) -> Result<ExperimentReport> {
    if battery.is_empty() {
        return Err(AkError::Invalid("empty singular battery".into()));
    }
    let m = battery[0].marked.len();
    if battery.iter().any(|s| s.marked.len() != m) {
        return Err(AkError::Invalid(
            "battery mixes singular diagrams of different orders".into(),
        ));
    }
    let mut inputs = Vec::new();
    let mut residuals = Vec::new();
    for s in battery {
        inputs.push(canon::canonical(&s.diagram)?.0);
        residuals.push(evaluate_singular(s, inv, budget)?);
    }
    let verdict = residuals.iter().all(value_is_zero);
    Ok(ExperimentReport {
        name: format!("vassiliev_order m={m}"),
        inputs,
        subsets: Vec::new(),
        residuals,
        checks: Vec::new(),
        seed: None,
        verdict,
    })
}

/// a2 of each component, free loops (unknots) included, in component
/// order.
pub fn component_a2s(d: &Diagram, budget: u64) -> Result<Vec<i64>> {
    let n = d.closed_components()?.len();
    let mut out = Vec::new();
    for i in 0..n {
        let one = edit::select_components(d, &HashSet::from([i]))?;
        out.push(invariants::conway_coeff(&one, 2, budget)?);
    }
    out.extend(std::iter::repeat(0).take(d.free_loops));
    Ok(out)
}

/// Check that diagrams related by one A_{k+1} move share all invariants
/// of order up to k: linking numbers for delta pairs (k=1), linking
/// numbers and component a2 for clasp-pass pairs (k=2).
pub fn theorem51_experiment(
    k: usize,
    pairs: &[(Diagram, MoveSpec)],
    budget: u64,
) -> Result<ExperimentReport> {
    if pairs.is_empty() {
        return Err(AkError::Invalid("no pairs supplied".into()));
    }
    let mut inputs = Vec::new();
    let mut checks = Vec::new();
    let registry = moves::Registry::new();
    for (i, (d, spec)) in pairs.iter().enumerate() {
        match (k, spec) {
            (1, MoveSpec::Delta { .. }) | (2, MoveSpec::ClaspPass { .. }) => {}
            _ => {
                return Err(AkError::Invalid(format!(
                    "k={k} pairs must use {} sites",
                    if k == 1 { "delta" } else { "clasp_pass" }
                )))
            }
        }
        let g = moves::apply_move(d, spec, &registry)?;
        inputs.push(canon::canonical(d)?.0);
        checks.push(Check::eq(
            format!("pair {i}: linking matrix"),
            invariants::linking_matrix(&g)?,
            invariants::linking_matrix(d)?,
        ));
        if k == 2 {
            checks.push(Check::eq(
                format!("pair {i}: component a2"),
                component_a2s(&g, budget)?,
                component_a2s(d, budget)?,
            ));
        }
    }
    let verdict = checks.iter().all(|c| c.pass);
    Ok(ExperimentReport {
        name: format!("theorem51 k={k}"),
        inputs,
        subsets: Vec::new(),
        residuals: Vec::new(),
        checks,
        seed: None,
        verdict,
    })
}

/// Declared Vassiliev order of the invariants that have one.
pub fn vassiliev_order(inv: Invariant) -> Option<usize> {
    match inv {
        Invariant::LinkingNumber(..) => Some(1),
        Invariant::ConwayCoeff(n) => Some(n),
        _ => None,
    }
}

/// A Vassiliev invariant of order at most (n+1)(k-1)-1 must be finite
/// type of order (n;k): run the order test over a scheme battery.
pub fn prop13_experiment(
    inv: Invariant,
    n: usize,
    k: usize,
    schemes: &[BandSumScheme],
    budget: u64,
) -> Result<ExperimentReport> {
    let Some(order) = vassiliev_order(inv) else {
        return Err(AkError::Invalid(
            "the invariant has no declared Vassiliev order".into(),
        ));
    };
    let bound = (n + 1) * (k - 1) - 1;
    if order > bound {
        return Err(AkError::Invalid(format!(
            "Vassiliev order {order} exceeds the (n+1)(k-1)-1 = {bound} bound"
        )));
    }
    if schemes.is_empty() {
        return Err(AkError::Invalid("no schemes supplied".into()));
    }
    let mut inputs = Vec::new();
    let mut residuals = Vec::new();
    let mut checks = Vec::new();
    for (i, s) in schemes.iter().enumerate() {
        if s.n() != n || s.k != k {
            return Err(AkError::Invalid(format!(
                "scheme {i} is (n={}, k={}), expected (n={n}, k={k})",
                s.n(),
                s.k
            )));
        }
        let r = order_nk_test(inv, s, budget)?;
        inputs.push(r.inputs[0].clone());
        checks.push(Check {
            label: format!("scheme {i}: residual"),
            pass: r.verdict,
            detail: format!("{:?}", r.residuals[0]),
        });
        residuals.extend(r.residuals);
    }
    let verdict = checks.iter().all(|c| c.pass);
    Ok(ExperimentReport {
        name: format!("prop13 n={n} k={k}"),
        inputs,
        subsets: Vec::new(),
        residuals,
        checks,
        seed: None,
        verdict,
    })
}

/// The Whitehead link against the 2-component unlink: every invariant of
/// order up to 2 (linking number, component a2) agrees, yet the conway
/// polynomials and Arf invariants differ.
pub fn whitehead_experiment(budget: u64) -> Result<ExperimentReport> {
    let w = catalog::named("whitehead")?;
    let u = Diagram::unlink(2);
    let mut checks = vec![
        Check::eq("lk(whitehead)", invariants::linking_number(&w, 0, 1)?, 0),
        Check::eq("lk(unlink)", invariants::linking_number(&u, 0, 1)?, 0),
        Check::eq(
            "component a2 (whitehead)",
            component_a2s(&w, budget)?,
            vec![0, 0],
        ),
        Check::eq("component a2 (unlink)", component_a2s(&u, budget)?, vec![0, 0]),
    ];
    let cw = invariants::conway(&w)?;
    let cu = invariants::conway(&u)?;
    checks.push(Check {
        label: "conway differs".into(),
        pass: cw != cu,
        detail: format!("whitehead {:?}, unlink {:?}", cw.coeffs(), cu.coeffs()),
    });
    let aw = invariants::arf(&w, budget)?;
    let au = invariants::arf(&u, budget)?;
    checks.push(Check {
        label: "arf differs".into(),
        pass: aw != au,
        detail: format!("whitehead {aw}, unlink {au}"),
    });
    let verdict = checks.iter().all(|c| c.pass);
    Ok(ExperimentReport {
        name: "whitehead".into(),
        inputs: vec![canon::canonical(&w)?.0, canon::canonical(&u)?.0],
        subsets: Vec::new(),
        residuals: Vec::new(),
        checks,
        seed: None,
        verdict,
    })
}

/// Group laws at the invariant level: a2 adds and arf adds mod 2 under
/// connected sum, the sum commutes, and the unknot is a unit.
pub fn group_checks(pairs: &[(Diagram, Diagram)], budget: u64) -> Result<ExperimentReport> {
    if pairs.is_empty() {
        return Err(AkError::Invalid("no pairs supplied".into()));
    }
    let mut inputs = Vec::new();
    let mut checks = Vec::new();
    // A one-crossing unknot diagram: connected sums need an arc to cut.
    let unknot = parse::parse_pd("X(2,1,1,2)")?;
    for (i, (k1, k2)) in pairs.iter().enumerate() {
        for d in [k1, k2] {
            if d.component_count()? != 1 || !d.is_link() {
                return Err(AkError::Invalid(format!("pair {i}: inputs must be knots")));
            }
        }
        inputs.push(canon::canonical(k1)?.0);
        inputs.push(canon::canonical(k2)?.0);
        // A crossing-free unknot has no arc to cut; its kink diagram is
        // the same knot and sums identically.
        let k1 = if k1.crossings.is_empty() { &unknot } else { k1 };
        let k2 = if k2.crossings.is_empty() { &unknot } else { k2 };
        let a1 = k1.arc_ids()[0];
        let a2arc = k2.arc_ids()[0];
        let s12 = edit::connected_sum(k1, a1, k2, a2arc)?;
        let s21 = edit::connected_sum(k2, a2arc, k1, a1)?;
        let coeff = |d: &Diagram| invariants::conway_coeff(d, 2, budget);
        checks.push(Check::eq(
            format!("pair {i}: a2 additive"),
            coeff(&s12)?,
            coeff(k1)? + coeff(k2)?,
        ));
        checks.push(Check::eq(
            format!("pair {i}: arf additive mod 2"),
            invariants::arf(&s12, budget)?,
            (invariants::arf(k1, budget)? + invariants::arf(k2, budget)?) % 2,
        ));
        checks.push(Check::eq(
            format!("pair {i}: sum commutes"),
            invariants::conway(&s12)?,
            invariants::conway(&s21)?,
        ));
        let unit = edit::connected_sum(k1, a1, &unknot, 1)?;
        checks.push(Check::eq(
            format!("pair {i}: unknot unit"),
            invariants::conway(&unit)?,
            invariants::conway(k1)?,
        ));
    }
    let verdict = checks.iter().all(|c| c.pass);
    Ok(ExperimentReport {
        name: "group_checks".into(),
        inputs,
        subsets: Vec::new(),
        residuals: Vec::new(),
        checks,
        seed: None,
        verdict,
    })
}

/// Face indices bordered by each arc of the base (two entries, equal for
/// an arc with the same face on both sides).
fn arc_face_map(base: &Diagram) -> Result<std::collections::HashMap<ArcId, Vec<usize>>> {
    let mut map: std::collections::HashMap<ArcId, Vec<usize>> = Default::default();
    for (fi, f) in planar::face_arcs(base)?.iter().enumerate() {
        for &a in f {
            map.entry(a).or_default().push(fi);
        }
    }
    Ok(map)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Draw one valid random scheme. Bands are routed as walks in the dual
/// graph of the base: the first band of each attachment takes a random
/// walk of up to three steps, the remaining bands take shortest dual
/// paths to the same target face, and each crossed arc becomes one pass
/// whose side flag follows from the direction the walk crosses the arc.
/// Which model component each band lands on, and where, is settled
/// against the band-sum validator. Every attachment claims its feet and
/// pass arcs exclusively; candidates whose joint band sum fails are
/// redrawn.
pub fn random_scheme<R: Rng>(
    base: &Diagram,
    model: &LinkModel,
    n: usize,
    rng: &mut R,
) -> Result<BandSumScheme> {
    let vertex_arcs: HashSet<ArcId> = base
        .vertices
        .iter()
        .flat_map(|v| v.ends.iter().map(|e| e.0))
        .collect();
    let arcs: Vec<ArcId> = base
        .arc_ids()
        .into_iter()
        .filter(|a| !vertex_arcs.contains(a))
        .collect();
    let feet_per = model.feet.len();
    let count = n + 1;
    if arcs.len() < count * feet_per {
        return Err(AkError::Invalid(format!(
            "base has {} usable arcs, {} attachments need at least {}",
            arcs.len(),
            count,
            count * feet_per
        )));
    }
    let arc_faces = arc_face_map(base)?;
    let faces = planar::faces(base)?;
    let face_arcs = planar::face_arcs(base)?;
    let occ = base.occurrences()?;
    // A band crossing `door` out of `face` sees the arc from its right
    // when the face holds the arc's tail dart, and from its left when it
    // holds the head dart.
    let mk_pass = |door: ArcId, face: usize, over: bool| band::BandPass {
        arc: door,
        over,
        side: if faces[face].contains(&occ.tail(door).unwrap()) {
            band::Side::R
        } else {
            band::Side::L
        },
    };
    'attempt: for _ in 0..200 {
        let mut claimed: HashSet<ArcId> = HashSet::new();
        let mut attachments = Vec::new();
        for _ in 0..count {
            let mut routes: Vec<BandRoute> = Vec::new();
            let mut target = usize::MAX;
            for j in 0..feet_per {
                let free: Vec<ArcId> = arcs
                    .iter()
                    .copied()
                    .filter(|a| !claimed.contains(a))
                    .collect();
                if j == 0 {
                    // Random dual walk from a random face of the foot.
                    let Some(&foot) = free.choose(rng) else { continue 'attempt };
                    claimed.insert(foot);
                    let mut face = *arc_faces[&foot].choose(rng).unwrap();
                    let mut passes = Vec::new();
                    for _ in 0..rng.gen_range(0..=3usize) {
                        let doors: Vec<ArcId> = face_arcs[face]
                            .iter()
                            .copied()
                            .filter(|a| !claimed.contains(a) && !vertex_arcs.contains(a))
                            .collect();
                        let Some(&door) = doors.choose(rng) else { break };
                        claimed.insert(door);
                        passes.push(mk_pass(door, face, rng.gen()));
                        face = *arc_faces[&door]
                            .iter()
                            .find(|&&f| f != face)
                            .unwrap_or(&face);
                    }
                    target = face;
                    routes.push(BandRoute { foot, passes });
                } else {
                    // Shortest unclaimed dual path from the foot's faces to
                    // the target face, breadth-first, depth capped at 3.
                    let n_faces = faces.len();
                    let mut dist = vec![usize::MAX; n_faces];
                    let mut via: Vec<Option<(usize, ArcId)>> = vec![None; n_faces];
                    let mut queue = std::collections::VecDeque::from([target]);
                    dist[target] = 0;
                    while let Some(f) = queue.pop_front() {
                        if dist[f] == 3 {
                            continue;
                        }
                        for &a in &face_arcs[f] {
                            if claimed.contains(&a) || vertex_arcs.contains(&a) {
                                continue;
                            }
                            let &g = arc_faces[&a].iter().find(|&&g| g != f).unwrap_or(&f);
                            if dist[g] == usize::MAX {
                                dist[g] = dist[f] + 1;
                                via[g] = Some((f, a));
                                queue.push_back(g);
                            }
                        }
                    }
                    let candidates: Vec<ArcId> = free
                        .iter()
                        .copied()
                        .filter(|a| arc_faces[a].iter().any(|&f| dist[f] != usize::MAX))
                        .collect();
                    let Some(&foot) = candidates.choose(rng) else { continue 'attempt };
                    claimed.insert(foot);
                    let mut face = *arc_faces[&foot]
                        .iter()
                        .filter(|&&f| dist[f] != usize::MAX)
                        .min_by_key(|&&f| dist[f])
                        .unwrap();
                    let mut passes = Vec::new();
                    while let Some((next, door)) = via[face] {
                        if face == target {
                            break;
                        }
                        claimed.insert(door);
                        passes.push(mk_pass(door, face, rng.gen()));
                        face = next;
                    }
                    routes.push(BandRoute { foot, passes });
                }
            }
            // The walk fixes the crossed arcs and sides; which model
            // component each band reaches, and where it lands on that
            // component, is settled against the band-sum validator.
            let mut comps = model.diagram.closed_components()?;
            for c in &mut comps {
                c.shuffle(rng);
            }
            let mut assignments = permutations(comps.len());
            assignments.shuffle(rng);
            let mut settled = None;
            'settle: for perm in &assignments {
                let mut reps = vec![0usize; comps.len()];
                loop {
                    let feet: Vec<ArcId> = perm
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| comps[c][reps[i]])
                        .collect();
                    let m = LinkModel {
                        name: model.name.clone(),
                        type_index: model.type_index,
                        diagram: model.diagram.clone(),
                        feet,
                    };
                    if band::band_sum(base, &[(m.clone(), routes.clone())]).is_ok() {
                        settled = Some(m);
                        break 'settle;
                    }
                    // Odometer over the per-component landing arcs.
                    let mut i = 0;
                    loop {
                        if i == comps.len() {
                            break;
                        }
                        reps[i] += 1;
                        if reps[i] < comps[perm[i]].len() {
                            break;
                        }
                        reps[i] = 0;
                        i += 1;
                    }
                    if i == comps.len() {
                        break;
                    }
                }
            }
            let Some(m) = settled else { continue 'attempt };
            attachments.push((m, routes));
        }
        let Ok(scheme) = BandSumScheme::new(base.clone(), attachments, model.type_index + 1)
        else {
            continue;
        };
        if scheme.subset_diagram((1 << count) - 1).is_err() {
            continue 'attempt;
        }
        return Ok(scheme);
    }
    Err(AkError::BandRoute(
        "no valid random scheme found in 200 attempts".into(),
    ))
}

/// A deterministic battery of random schemes from one seed.
pub fn random_scheme_battery(
    base: &Diagram,
    model: &LinkModel,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<BandSumScheme>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut misses = 0;
    while out.len() < count {
        match random_scheme(base, model, n, &mut rng) {
            Ok(s) => out.push(s),
            Err(e) => {
                misses += 1;
                if misses > 2 * count + 10 {
                    return Err(e);
                }
            }
        }
    }
    Ok(out)
}

/// A seeded random Reidemeister walk: each step draws one applicable
/// move among kink and finger insertions (R1/R2 up), the available
/// removals, and triangle slides. The result is isotopic to the input.
pub fn perturb<R: Rng>(d: &Diagram, steps: usize, rng: &mut R) -> Result<Diagram> {
    let mut cur = d.clone();
    for _ in 0..steps {
        let arcs = cur.arc_ids();
        let next = match rng.gen_range(0..4u8) {
            0 if !arcs.is_empty() => {
                let &a = arcs.choose(rng).unwrap();
                reid::r1_up(&cur, a, if rng.gen() { 1 } else { -1 }, rng.gen()).ok()
            }
            1 if !arcs.is_empty() => {
                let faces = planar::face_arcs(&cur)?;
                faces.choose(rng).and_then(|f| {
                    let a = *f.choose(rng)?;
                    let b = *f.choose(rng)?;
                    (a != b).then(|| reid::r2_up(&cur, a, b).ok()).flatten()
                })
            }
            2 => {
                let sites = reid::sites(&cur)?;
                sites
                    .choose(rng)
                    .and_then(|s| reid::apply_site(&cur, s).ok())
            }
            _ => None,
        };
        if let Some(n) = next {
            cur = n;
        }
    }
    Ok(cur)
}

/// JSON description of one attachment: a model name from the registry and
/// its routes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttachmentSpec {
    pub model: String,
    pub routes: Vec<BandRoute>,
}

/// JSON experiment spec: base diagram (catalog name or PD code), the
/// invariant, n, k, and the attachment list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub base: String,
    pub invariant: Invariant,
    pub n: usize,
    pub k: usize,
    pub attachments: Vec<AttachmentSpec>,
}

impl SchemeSpec {
    pub fn resolve(&self, registry: &moves::Registry) -> Result<(Invariant, BandSumScheme)> {
        let base = catalog::named(&self.base)
            .or_else(|_| parse::parse_pd(&self.base))
            .map_err(|_| AkError::Invalid(format!("unknown base diagram {:?}", self.base)))?;
        let mut attachments = Vec::new();
        for a in &self.attachments {
            let m = registry
                .models()
                .into_iter()
                .find(|m| m.name == a.model)
                .ok_or_else(|| AkError::Invalid(format!("unknown link model {:?}", a.model)))?;
            attachments.push((m, a.routes.clone()));
        }
        let scheme = BandSumScheme::new(base, attachments, self.k)?;
        if scheme.n() != self.n {
            return Err(AkError::Invalid(format!(
                "spec declares n={} but lists {} attachments",
                self.n,
                self.attachments.len()
            )));
        }
        Ok((self.invariant, scheme))
    }
}




#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::DEFAULT_BUDGET;

    fn cc_scheme(name: &str, crossings: &[usize]) -> BandSumScheme {
        let d = catalog::named(name).unwrap();
        let atts = crossings
            .iter()
            .map(|&i| band::crossing_change_attachment(&d, i).unwrap())
            .collect();
        BandSumScheme::new(d, atts, 2).unwrap()
    }

    #[test]
    fn alternating_sum_signs_and_terms() {
        let s = cc_scheme("trefoil", &[0]);
        let sum = alternating_sum(&s).unwrap();
        assert_eq!(sum.terms.len(), 2);
        assert_eq!(sum.terms[0].0, 1);
        assert_eq!(sum.terms[1].0, -1);
        // The empty subset is the untouched base.
        assert_eq!(sum.terms[0].1, s.base);

        let s = cc_scheme("trefoil", &[0, 1]);
        let sum = alternating_sum(&s).unwrap();
        let signs: Vec<i64> = sum.terms.iter().map(|t| t.0).collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
        assert_eq!(signs.iter().sum::<i64>(), 0);
    }

    #[test]
    fn lk_is_order_1_2() {
        // Recorded from the oracle: two clasp attachments on the
        // whitehead link never move the linking number residual off zero.
        let s = cc_scheme("whitehead", &[0, 1]);
        let r = order_nk_test(Invariant::LinkingNumber(0, 1), &s, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.subsets.len(), 4);
        assert_eq!(r.residuals, vec![Value::Int(0)]);
        assert!(r.verdict);
    }

    #[test]
    fn a2_is_not_order_1_2() {
        // Recorded from the oracle: a2 of the trefoil reacts to the pair
        // of clasp attachments with second difference 1.
        let s = cc_scheme("trefoil", &[0, 1]);
        let r = order_nk_test(Invariant::ConwayCoeff(2), &s, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residuals, vec![Value::Int(1)]);
        assert!(!r.verdict);
    }

    #[test]
    fn a2_is_order_2_2() {
        // Recorded from the oracle: the third difference of a2 vanishes.
        let s = cc_scheme("granny", &[0, 1, 2]);
        let r = order_nk_test(Invariant::ConwayCoeff(2), &s, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.subsets.len(), 8);
        assert_eq!(r.residuals, vec![Value::Int(0)]);
        assert!(r.verdict);
    }

    #[test]
    fn residual_is_symmetric_in_the_attachments() {
        let s = cc_scheme("trefoil", &[0, 1]);
        let mut swapped = s.clone();
        swapped.attachments.swap(0, 1);
        let a = order_nk_test(Invariant::ConwayCoeff(2), &s, DEFAULT_BUDGET).unwrap();
        let b = order_nk_test(Invariant::ConwayCoeff(2), &swapped, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.residuals, b.residuals);
    }

    #[test]
    fn scheme_validation_errors() {
        let t = catalog::named("trefoil").unwrap();
        let hopf = band::model("hopf").unwrap();
        let routes = vec![BandRoute::trivial(1), BandRoute::trivial(2)];
        // Declared k must match the model type.
        let bad_k = BandSumScheme::new(t.clone(), vec![(hopf.clone(), routes.clone())], 3);
        assert!(matches!(bad_k, Err(AkError::Invalid(_))));
        // Attachments must not share base arcs.
        let shared = BandSumScheme::new(
            t.clone(),
            vec![
                (hopf.clone(), routes.clone()),
                (hopf.clone(), vec![BandRoute::trivial(2), BandRoute::trivial(3)]),
            ],
            2,
        );
        assert!(matches!(shared, Err(AkError::BandRoute(_))));
        // Pass arcs must belong to the base.
        let stray = BandSumScheme::new(
            t,
            vec![(
                hopf,
                vec![
                    BandRoute {
                        foot: 1,
                        passes: vec![band::BandPass {
                            arc: 99,
                            over: true,
                            side: band::Side::L,
                        }],
                    },
                    BandRoute::trivial(2),
                ],
            )],
            2,
        );
        assert!(matches!(stray, Err(AkError::BandRoute(_))));
    }

    #[test]
    fn random_lk_schemes_all_pass() {
        let w = catalog::named("whitehead").unwrap();
        let hopf = band::model("hopf").unwrap();
        let battery = random_scheme_battery(&w, &hopf, 1, 10, 7).unwrap();
        for s in &battery {
            let r = order_nk_test(Invariant::LinkingNumber(0, 1), s, DEFAULT_BUDGET).unwrap();
            assert!(r.verdict, "residual {:?}", r.residuals);
        }
    }

    #[test]
    fn vassiliev_orders_of_lk_and_a2() {
        // lk vanishes on every 2-singular fixture.
        let mut two: Vec<SingularDiagram> = Vec::new();
        for name in ["whitehead", "borromean"] {
            let d = catalog::named(name).unwrap();
            for i in 0..3 {
                for j in (i + 1)..4 {
                    two.push(SingularDiagram::new(d.clone(), vec![i, j]).unwrap());
                }
            }
        }
        let r = vassiliev_order_test(Invariant::LinkingNumber(0, 1), &two, DEFAULT_BUDGET).unwrap();
        assert!(r.verdict, "{:?}", r.residuals);

        // a2 vanishes on every 3-singular fixture...
        let mut three: Vec<SingularDiagram> = Vec::new();
        for name in ["trefoil", "figure8", "granny"] {
            let d = catalog::named(name).unwrap();
            three.push(SingularDiagram::new(d.clone(), vec![0, 1, 2]).unwrap());
            if d.crossings.len() > 3 {
                three.push(SingularDiagram::new(d, vec![0, 1, 3]).unwrap());
            }
        }
        let r = vassiliev_order_test(Invariant::ConwayCoeff(2), &three, DEFAULT_BUDGET).unwrap();
        assert!(r.verdict, "{:?}", r.residuals);

        // ...but not on the recorded 2-singular witness.
        let t = catalog::named("trefoil").unwrap();
        let witness = vec![SingularDiagram::new(t.clone(), vec![0, 1]).unwrap()];
        let r = vassiliev_order_test(Invariant::ConwayCoeff(2), &witness, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residuals, vec![Value::Int(1)]);
        assert!(!r.verdict);

        // Mixed orders are refused.
        let mixed = vec![
            SingularDiagram::new(t.clone(), vec![0]).unwrap(),
            SingularDiagram::new(t, vec![0, 1]).unwrap(),
        ];
        assert!(matches!(
            vassiliev_order_test(Invariant::ConwayCoeff(2), &mixed, DEFAULT_BUDGET),
            Err(AkError::Invalid(_))
        ));
    }

    fn delta_pairs() -> Vec<(Diagram, MoveSpec)> {
        let mut out = Vec::new();
        for name in catalog::NAMES {
            let d = catalog::named(name).unwrap();
            for t in reid::triangles(&d).unwrap() {
                if t.cyclic {
                    out.push((d.clone(), MoveSpec::Delta { arcs: t.arcs }));
                }
            }
        }
        out
    }

    #[test]
    fn theorem51_delta_pairs_share_linking_numbers() {
        let pairs = delta_pairs();
        assert!(pairs.len() >= 10);
        let r = theorem51_experiment(1, &pairs, DEFAULT_BUDGET).unwrap();
        assert!(r.verdict, "{:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn theorem51_clasp_pairs_share_a2_too() {
        let pairs: Vec<(Diagram, MoveSpec)> = crate::moves::clasp::fixture_battery()
            .into_iter()
            .take(12)
            .map(|(d, site)| {
                (
                    d,
                    MoveSpec::ClaspPass {
                        clasp: site.clasp,
                        grid: site.grid,
                    },
                )
            })
            .collect();
        assert!(pairs.len() >= 10);
        let r = theorem51_experiment(2, &pairs, DEFAULT_BUDGET).unwrap();
        assert!(r.verdict, "{:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn crossing_change_control_moves_lk() {
        // k=0 control: a crossing change at an inter-component crossing
        // shifts the linking number by exactly one.
        let h = catalog::named("hopf+").unwrap();
        let before = invariants::linking_number(&h, 0, 1).unwrap();
        let after =
            invariants::linking_number(&moves::crossing_change(&h, 0).unwrap(), 0, 1).unwrap();
        assert_eq!((before - after).abs(), 1);
        // And the experiment refuses mismatched site kinds.
        let bad = theorem51_experiment(
            1,
            &[(h, MoveSpec::CrossingChange { crossing: 0 })],
            DEFAULT_BUDGET,
        );
        assert!(matches!(bad, Err(AkError::Invalid(_))));
    }

    #[test]
    fn prop13_borromean_schemes_kill_lk_and_a2() {
        let g = catalog::named("granny").unwrap();
        let base = edit::disjoint_union(&g, &catalog::named("trefoil").unwrap());
        let base = edit::disjoint_union(&base, &catalog::named("figure8").unwrap());
        let bor = band::model("borromean").unwrap();
        let schemes = random_scheme_battery(&base, &bor, 1, 3, 13).unwrap();
        for inv in [Invariant::LinkingNumber(0, 1), Invariant::ConwayCoeff(2)] {
            let r = prop13_experiment(inv, 1, 3, &schemes, DEFAULT_BUDGET).unwrap();
            assert!(r.verdict, "{inv:?}: {:?}", r.residuals);
        }
    }

    #[test]
    fn prop13_rejects_a3_outside_the_bound() {
        // Order 3 exceeds (n+1)(k-1)-1 = 1, so the proposition does not
        // apply -- and indeed the recorded residual of the control scheme
        // is nonzero.
        let schemes = vec![cc_scheme("whitehead", &[0, 1])];
        assert!(matches!(
            prop13_experiment(Invariant::ConwayCoeff(3), 1, 2, &schemes, DEFAULT_BUDGET),
            Err(AkError::Invalid(_))
        ));
        let r = order_nk_test(Invariant::ConwayCoeff(3), &schemes[0], DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residuals, vec![Value::Int(-1)]);
        assert!(!r.verdict);
    }

    #[test]
    fn whitehead_report_holds() {
        let r = whitehead_experiment(DEFAULT_BUDGET).unwrap();
        assert!(r.verdict, "{:?}", r.checks);
        assert_eq!(r.checks.len(), 6);
        // The same pattern survives a random Reidemeister walk of the
        // fixtures.
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let w = perturb(&catalog::named("whitehead").unwrap(), 25, &mut rng).unwrap();
        assert!(invariants::all_lk_zero(&w).unwrap());
        assert_eq!(component_a2s(&w, DEFAULT_BUDGET).unwrap(), vec![0, 0]);
        assert_eq!(invariants::conway_coeff(&w, 3, DEFAULT_BUDGET).unwrap().abs(), 1);
        assert_eq!(invariants::arf(&w, DEFAULT_BUDGET).unwrap(), 1);
    }

    #[test]
    fn group_laws_hold_on_knot_pairs() {
        let pairs = vec![
            (catalog::named("trefoil").unwrap(), catalog::named("figure8").unwrap()),
            (catalog::named("trefoil").unwrap(), catalog::named("trefoil-l").unwrap()),
            (catalog::named("figure8").unwrap(), catalog::named("granny").unwrap()),
        ];
        let r = group_checks(&pairs, DEFAULT_BUDGET).unwrap();
        assert!(r.verdict, "{:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        let links = vec![(catalog::named("hopf+").unwrap(), catalog::named("trefoil").unwrap())];
        assert!(matches!(
            group_checks(&links, DEFAULT_BUDGET),
            Err(AkError::Invalid(_))
        ));
    }

    #[test]
    fn perturb_preserves_conway() {
        let t = catalog::named("trefoil").unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let p = perturb(&t, 30, &mut rng).unwrap();
        assert_eq!(
            invariants::conway(&p).unwrap(),
            invariants::conway(&t).unwrap()
        );
    }

    #[test]
    fn scheme_spec_files_resolve_and_run() {
        let json = r#"{
            "base": "whitehead",
            "invariant": {"linking_number": [0, 1]},
            "n": 0,
            "k": 2,
            "attachments": [{"model": "hopf", "routes": [{"foot": 2}, {"foot": 3}]}]
        }"#;
        let spec: SchemeSpec = serde_json::from_str(json).unwrap();
        let registry = moves::Registry::new();
        let (inv, scheme) = spec.resolve(&registry).unwrap();
        let r = order_nk_test(inv, &scheme, DEFAULT_BUDGET).unwrap();
        assert!(r.verdict);
        // Reports are JSON artifacts with the full subset table.
        let text = serde_json::to_string(&r).unwrap();
        let back: ExperimentReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.subsets.len(), 2);

        let unknown = SchemeSpec { base: "nope".into(), ..spec.clone() };
        assert!(matches!(unknown.resolve(&registry), Err(AkError::Invalid(_))));
        let off = SchemeSpec { n: 1, ..spec };
        assert!(matches!(off.resolve(&registry), Err(AkError::Invalid(_))));
    }
}
