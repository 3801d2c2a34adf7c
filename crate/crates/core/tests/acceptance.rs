//! The acceptance gate: one test per criterion, each exact (tolerance
//! zero) and each ending in a single pass line.

mod common;

use std::collections::HashSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use akmove_core::diagram::{canon, edit, reid};
use akmove_core::invariants::{self, Invariant, Value, DEFAULT_BUDGET};
use akmove_core::lab;
use akmove_core::moves::{self, band, clasp, MoveSpec};
use akmove_core::{catalog, Diagram, SingularDiagram};

fn code(d: &Diagram) -> String {
    canon::canonical(d).unwrap().0
}

fn fixtures() -> Vec<Diagram> {
    catalog::NAMES.iter().map(|n| catalog::named(n).unwrap()).collect()
}

fn knots() -> Vec<Diagram> {
    fixtures()
        .into_iter()
        .filter(|d| d.component_count().unwrap() == 1)
        .collect()
}

fn delta_pairs() -> Vec<(Diagram, MoveSpec)> {
    let mut out = Vec::new();
    for d in fixtures() {
        for t in reid::triangles(&d).unwrap() {
            if t.cyclic {
                out.push((d.clone(), MoveSpec::Delta { arcs: t.arcs }));
            }
        }
    }
    out
}

fn clasp_pairs() -> Vec<(Diagram, MoveSpec)> {
    clasp::fixture_battery()
        .into_iter()
        .map(|(d, site)| {
            (
                d,
                MoveSpec::ClaspPass {
                    clasp: site.clasp,
                    grid: site.grid,
                },
            )
        })
        .collect()
}

fn cc_scheme(name: &str, crossings: &[usize]) -> lab::BandSumScheme {
    let d = catalog::named(name).unwrap();
    let atts = crossings
        .iter()
        .map(|&i| band::crossing_change_attachment(&d, i).unwrap())
        .collect();
    lab::BandSumScheme::new(d, atts, 2).unwrap()
}

#[test]
fn criterion_1_conway_oracle_equivalence() {
    let start = Instant::now();
    let mut checked = 0;
    for d in fixtures() {
        let want = common::conway_oracle(&d).unwrap();
        let got = invariants::conway_with(&d, DEFAULT_BUDGET).unwrap();
        assert_eq!(got, want, "engine disagrees with oracle on a fixture");
        checked += 1;
    }
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for _ in 0..50 {
        let d = common::random_diagram(&mut rng, 12);
        let want = common::conway_oracle(&d).unwrap();
        let got = invariants::conway_with(&d, DEFAULT_BUDGET).unwrap();
        assert_eq!(got, want, "engine disagrees with oracle on {d:?}");
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "oracle comparison took {elapsed:?}");
    println!("criterion 1 (conway oracle equivalence, {checked} diagrams, {elapsed:?}): pass");
}

#[test]
fn criterion_2_isotopy_invariance() {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let mut applied = 0;
    for d in fixtures() {
        let conway = invariants::conway_with(&d, DEFAULT_BUDGET).unwrap();
        let lk = invariants::linking_matrix(&d).unwrap();
        let a2s = lab::component_a2s(&d, DEFAULT_BUDGET).unwrap();
        let arf = invariants::arf(&d, DEFAULT_BUDGET).ok();
        let moved = lab::perturb(&d, 20, &mut rng).unwrap();
        applied += 20;
        assert_eq!(
            invariants::conway_with(&moved, DEFAULT_BUDGET).unwrap(),
            conway
        );
        assert_eq!(invariants::linking_matrix(&moved).unwrap(), lk);
        assert_eq!(lab::component_a2s(&moved, DEFAULT_BUDGET).unwrap(), a2s);
        assert_eq!(invariants::arf(&moved, DEFAULT_BUDGET).ok(), arf);
    }
    assert!(applied >= 200);
    println!("criterion 2 (isotopy invariance under {applied} seeded moves): pass");
}

#[test]
fn criterion_3_theorem_5_1_instances() {
    let deltas = delta_pairs();
    assert!(deltas.len() >= 10, "only {} delta pairs", deltas.len());
    let r = lab::theorem51_experiment(1, &deltas, DEFAULT_BUDGET).unwrap();
    assert!(
        r.verdict,
        "delta pairs: {:?}",
        r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
    );

    let clasps = clasp_pairs();
    assert!(clasps.len() >= 10, "only {} clasp pairs", clasps.len());
    let r = lab::theorem51_experiment(2, &clasps, DEFAULT_BUDGET).unwrap();
    assert!(
        r.verdict,
        "clasp pairs: {:?}",
        r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
    );
    println!(
        "criterion 3 (theorem 5.1: {} delta pairs share lk, {} clasp pairs share lk and a2): pass",
        deltas.len(),
        clasps.len()
    );
}

#[test]
fn criterion_4_finite_type_definition() {
    let whitehead = catalog::named("whitehead").unwrap();
    let hopf = band::model("hopf").unwrap();
    let schemes = lab::random_scheme_battery(&whitehead, &hopf, 1, 100, 7).unwrap();
    for s in &schemes {
        let r = lab::order_nk_test(Invariant::LinkingNumber(0, 1), s, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residuals, vec![Value::Int(0)], "lk residual nonzero");
    }

    let granny = catalog::named("granny").unwrap();
    let schemes2 = lab::random_scheme_battery(&granny, &hopf, 2, 25, 11).unwrap();
    for s in &schemes2 {
        let r = lab::order_nk_test(Invariant::ConwayCoeff(2), s, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.residuals, vec![Value::Int(0)], "a2 residual nonzero");
    }

    // The recorded witness: a2 is not of order (1;2).
    let witness = cc_scheme("trefoil", &[0, 1]);
    let r = lab::order_nk_test(Invariant::ConwayCoeff(2), &witness, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.residuals, vec![Value::Int(1)]);
    assert!(!r.verdict);
    println!(
        "criterion 4 (order (1;2) lk on {} schemes, order (2;2) a2 on {} schemes, a2 witness residual 1): pass",
        schemes.len(),
        schemes2.len()
    );
}

#[test]
fn criterion_5_proposition_1_3() {
    let g = catalog::named("granny").unwrap();
    let base = edit::disjoint_union(&g, &catalog::named("trefoil").unwrap());
    let base = edit::disjoint_union(&base, &catalog::named("figure8").unwrap());
    let bor = band::model("borromean").unwrap();
    let schemes = lab::random_scheme_battery(&base, &bor, 1, 25, 13).unwrap();
    for inv in [Invariant::LinkingNumber(0, 1), Invariant::ConwayCoeff(2)] {
        let r = lab::prop13_experiment(inv, 1, 3, &schemes, DEFAULT_BUDGET).unwrap();
        assert!(r.verdict, "{inv:?} residuals {:?}", r.residuals);
    }

    // The a3 control sits outside the (n+1)(k-1)-1 bound and indeed
    // leaves a nonzero residual.
    let control = cc_scheme("whitehead", &[0, 1]);
    let r = lab::order_nk_test(Invariant::ConwayCoeff(3), &control, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.residuals, vec![Value::Int(-1)]);
    assert!(!r.verdict);
    println!(
        "criterion 5 (prop 1.3: lk and a2 kill {} borromean (1;3) schemes, a3 control residual -1): pass",
        schemes.len()
    );
}

#[test]
fn criterion_6_whitehead_counterexample() {
    let start = Instant::now();
    let r = lab::whitehead_experiment(DEFAULT_BUDGET).unwrap();
    let elapsed = start.elapsed();
    assert!(r.verdict, "{:?}", r.checks);
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 6 (whitehead pattern report in {elapsed:?}): pass");
}

#[test]
fn criterion_7_group_laws() {
    let knots = knots();
    let mut pairs = Vec::new();
    for k1 in &knots {
        for k2 in &knots {
            pairs.push((k1.clone(), k2.clone()));
        }
    }
    let r = lab::group_checks(&pairs, DEFAULT_BUDGET).unwrap();
    assert!(
        r.verdict,
        "{:?}",
        r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
    );
    println!(
        "criterion 7 (group laws on {} knot pairs, {} checks): pass",
        pairs.len(),
        r.checks.len()
    );
}

#[test]
fn criterion_8_move_algebra() {
    let registry = moves::Registry::new();
    // Fixture sweep: involution, self-inverse, lk preservation, empty sum.
    for d in fixtures() {
        for i in 0..d.crossings.len() {
            let twice = moves::crossing_change(&moves::crossing_change(&d, i).unwrap(), i).unwrap();
            assert_eq!(code(&twice), code(&d), "crossing change is not an involution");
        }
        assert_eq!(code(&band::band_sum(&d, &[]).unwrap()), code(&d));
    }
    for (d, spec) in delta_pairs() {
        let once = moves::apply_move(&d, &spec, &registry).unwrap();
        let twice = moves::apply_move(&once, &spec, &registry).unwrap();
        assert_eq!(code(&twice), code(&d), "delta is not self-inverse");
        assert_eq!(
            invariants::linking_matrix(&once).unwrap(),
            invariants::linking_matrix(&d).unwrap(),
            "delta moved a linking number"
        );
    }
    for (d, spec) in clasp_pairs() {
        let once = moves::apply_move(&d, &spec, &registry).unwrap();
        let twice = moves::apply_move(&once, &spec, &registry).unwrap();
        assert_eq!(code(&twice), code(&d), "clasp pass is not self-inverse");
    }

    // 100 seeded random sites drawn across the fixtures.
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let all = fixtures();
    let clasps = clasp::fixture_battery();
    let mut sites = 0;
    while sites < 100 {
        match rng.gen_range(0..3u8) {
            0 => {
                let d = &all[rng.gen_range(0..all.len())];
                if d.crossings.is_empty() {
                    continue;
                }
                let i = rng.gen_range(0..d.crossings.len());
                let twice =
                    moves::crossing_change(&moves::crossing_change(d, i).unwrap(), i).unwrap();
                assert_eq!(code(&twice), code(d));
            }
            1 => {
                let d = &all[rng.gen_range(0..all.len())];
                let tris: Vec<_> = reid::triangles(d)
                    .unwrap()
                    .into_iter()
                    .filter(|t| t.cyclic)
                    .collect();
                if tris.is_empty() {
                    continue;
                }
                let t = &tris[rng.gen_range(0..tris.len())];
                let once = moves::delta_move(d, &t.arcs).unwrap();
                let twice = moves::delta_move(&once, &t.arcs).unwrap();
                assert_eq!(code(&twice), code(d));
                assert_eq!(
                    invariants::linking_matrix(&once).unwrap(),
                    invariants::linking_matrix(d).unwrap()
                );
            }
            _ => {
                let (d, site) = &clasps[rng.gen_range(0..clasps.len())];
                let once = clasp::clasp_pass(d, site).unwrap();
                let twice = clasp::clasp_pass(&once, site).unwrap();
                assert_eq!(code(&twice), code(d));
            }
        }
        sites += 1;
    }
    println!("criterion 8 (move algebra on all fixtures plus {sites} random sites): pass");
}

#[test]
fn criterion_9_singular_calculus() {
    // Resolution size and alternating signs.
    let bor = catalog::named("borromean").unwrap();
    for i in 1..=3usize {
        let s = SingularDiagram::new(bor.clone(), (0..i).collect()).unwrap();
        let sum = s.resolve().unwrap();
        assert_eq!(sum.terms.len(), 1 << i);
        assert_eq!(sum.terms.iter().map(|t| t.0).sum::<i64>(), 0);
        let positives: i64 = sum.terms.iter().map(|t| t.0.max(0)).sum();
        assert_eq!(positives, 1 << (i - 1));
    }

    // lk (order 1) vanishes on every 2-singular fixture.
    let mut battery2 = Vec::new();
    for name in ["hopf+", "hopf-", "whitehead", "borromean"] {
        let d = catalog::named(name).unwrap();
        battery2.push(SingularDiagram::new(d.clone(), vec![0, 1]).unwrap());
        if d.crossings.len() > 2 {
            battery2.push(SingularDiagram::new(d, vec![1, 2]).unwrap());
        }
    }
    let r = lab::vassiliev_order_test(Invariant::LinkingNumber(0, 1), &battery2, DEFAULT_BUDGET)
        .unwrap();
    assert!(r.verdict, "lk residuals {:?}", r.residuals);

    // a2 (order 2) vanishes on every 3-singular fixture...
    let mut battery3 = Vec::new();
    for name in ["trefoil", "trefoil-l", "figure8", "granny", "borromean"] {
        let d = catalog::named(name).unwrap();
        battery3.push(SingularDiagram::new(d.clone(), vec![0, 1, 2]).unwrap());
        if d.crossings.len() > 3 {
            battery3.push(SingularDiagram::new(d, vec![1, 2, 3]).unwrap());
        }
    }
    let r =
        lab::vassiliev_order_test(Invariant::ConwayCoeff(2), &battery3, DEFAULT_BUDGET).unwrap();
    assert!(r.verdict, "a2 residuals {:?}", r.residuals);

    // ...but not on the recorded 2-singular witness.
    let witness = SingularDiagram::new(catalog::named("trefoil").unwrap(), vec![0, 1]).unwrap();
    assert_eq!(
        invariants::evaluate_singular(&witness, Invariant::ConwayCoeff(2), DEFAULT_BUDGET).unwrap(),
        Value::Int(1)
    );
    println!(
        "criterion 9 (singular calculus: {} 2-singular and {} 3-singular fixtures, witness 1): pass",
        battery2.len(),
        battery3.len()
    );
}

// Spot checks recorded alongside the criteria.
#[test]
fn reversal_negates_linking_number() {
    let h = catalog::named("hopf+").unwrap();
    assert_eq!(invariants::linking_number(&h, 0, 1).unwrap(), 1);
    let r = edit::reverse_component(&h, 0).unwrap();
    assert_eq!(invariants::linking_number(&r, 0, 1).unwrap(), -1);
}

#[test]
fn one_singular_hopf_resolves_to_unit_lk() {
    let h = catalog::named("hopf+").unwrap();
    let s = SingularDiagram::new(h, vec![0]).unwrap();
    let sum = s.resolve().unwrap();
    assert_eq!(sum.terms.len(), 2);
    // lk(positive resolution) - lk(negative resolution) = 1 - 0.
    assert_eq!(
        invariants::evaluate_sum(&sum, Invariant::LinkingNumber(0, 1), DEFAULT_BUDGET).unwrap(),
        Value::Int(1)
    );
}

#[test]
fn random_sites_stay_planar() {
    // The planarity validator holds across every random perturbation the
    // batteries produce.
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let mut seen = HashSet::new();
    for d in fixtures() {
        let moved = lab::perturb(&d, 10, &mut rng).unwrap();
        moved.validate().unwrap();
        seen.insert(code(&moved));
    }
    assert!(!seen.is_empty());
}
