//! Test-only helpers shared by the integration suites: a brute-force
//! Conway oracle (no memoization, no greedy simplification) and a seeded
//! random diagram source.

use rand::Rng;

use akmove_core::diagram::edit;
use akmove_core::diagram::End;
use akmove_core::poly::Poly;
use akmove_core::{catalog, Diagram, Result};

/// The first crossing met on its under-strand before its over-strand,
/// walking components from their basepoints. Recomputed from scratch on
/// every call; shares no traversal state with the engine.
fn bad_crossing(d: &Diagram) -> Result<Option<usize>> {
    let occ = d.occurrences()?;
    let comps = d.closed_components_with(&occ)?;
    let mut met = std::collections::HashSet::new();
    for comp in &comps {
        for &arc in comp {
            if let Some(End::X { crossing, slot }) = occ.head(arc) {
                if met.insert(crossing) && slot == 0 {
                    return Ok(Some(crossing));
                }
            }
        }
    }
    Ok(None)
}

/// Brute-force Conway polynomial: the plain skein recursion
/// nabla(L+) - nabla(L-) = z nabla(L0), resolved at the first
/// non-descending crossing, with no memo table and no Reidemeister
/// simplification. Exponential, intended for small diagrams only.
pub fn conway_oracle(d: &Diagram) -> Result<Poly> {
    d.validate()?;
    if d.crossings.is_empty() {
        // A bare unlink: one circle contributes 1, more are split.
        return Ok(if d.free_loops == 1 {
            Poly::one()
        } else {
            Poly::zero()
        });
    }
    if d.free_loops > 0 {
        // A free circle beside crossings is a split union.
        return Ok(Poly::zero());
    }
    match bad_crossing(d)? {
        None => {
            // Descending: an unlink with as many circles as components.
            Ok(if d.component_count()? == 1 {
                Poly::one()
            } else {
                Poly::zero()
            })
        }
        Some(i) => {
            let sign = d.crossings[i].sign();
            let switched = conway_oracle(&edit::switch_crossing(d, i)?)?;
            let smoothed = conway_oracle(&edit::smooth_crossing(d, i)?)?;
            Ok(&switched + &smoothed.shift(1).scale(sign))
        }
    }
}

/// A random braid-closure diagram with at most `max_crossings` crossings;
/// always a valid planar link diagram.
pub fn random_diagram<R: Rng>(rng: &mut R, max_crossings: usize) -> Diagram {
    loop {
        let len = rng.gen_range(1..=max_crossings);
        let strands = rng.gen_range(2..=4).min(len + 1);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands as i32);
                if rng.gen() {
                    g
                } else {
                    -g
                }
            })
            .collect();
        if let Ok(d) = catalog::braid_closure(&word) {
            if d.crossings.len() <= max_crossings {
                return d;
            }
        }
    }
}
