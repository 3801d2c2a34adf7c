//! Built-in diagrams. Everything beyond the unlinks is produced as a
//! braid closure, which keeps the slot bookkeeping in one audited place.

use std::collections::HashMap;

use crate::diagram::{Crossing, Diagram};
use crate::error::{AkError, Result};

/// Close a braid word: generator `i` crosses the strands at positions
/// `i, i+1` with the left strand over; negative generators invert.
/// Strands run downward and the closure is planar by construction.
pub fn braid_closure(word: &[i32]) -> Result<Diagram> {
    if word.iter().any(|&g| g == 0) {
        return Err(AkError::Invalid("braid generators are nonzero".into()));
    }
    let n = word.iter().map(|g| g.unsigned_abs()).max().unwrap_or(0) as usize + 1;
    let mut next: u32 = 1;
    let mut fresh = || {
        let a = next;
        next += 1;
        a
    };
    let init: Vec<u32> = (0..n).map(|_| fresh()).collect();
    let mut cur = init.clone();
    let mut crossings = Vec::new();
    for &g in word {
        let i = (g.unsigned_abs() - 1) as usize;
        let (a_i, a_j) = (cur[i], cur[i + 1]);
        let (o1, o2) = (fresh(), fresh());
        if g > 0 {
            // Under strand comes from position i+1; counterclockwise from
            // its entry corner: [NE, NW, SW, SE].
            crossings.push(Crossing {
                slots: [a_j, a_i, o1, o2],
                over_b_to_d: true,
            });
        } else {
            // Under strand comes from position i: [NW, SW, SE, NE].
            crossings.push(Crossing {
                slots: [a_i, o1, o2, a_j],
                over_b_to_d: false,
            });
        }
        cur[i] = o1;
        cur[i + 1] = o2;
    }
    let mut free_loops = 0;
    let mut map: HashMap<u32, u32> = HashMap::new();
    for p in 0..n {
        if cur[p] == init[p] {
            free_loops += 1;
        } else {
            map.insert(cur[p], init[p]);
        }
    }
    let d = Diagram {
        crossings,
        vertices: vec![],
        free_loops,
    }
    .relabel(&map);
    d.validate()?;
    Ok(d)
}

pub const NAMES: &[&str] = &[
    "unknot",
    "unlink2",
    "unlink3",
    "hopf+",
    "hopf-",
    "trefoil",
    "trefoil-l",
    "figure8",
    "whitehead",
    "borromean",
    "granny",
];

/// A built-in diagram by name.
pub fn named(name: &str) -> Result<Diagram> {
    match name {
        "unknot" => Ok(Diagram::unknot()),
        "unlink2" => Ok(Diagram::unlink(2)),
        "unlink3" => Ok(Diagram::unlink(3)),
        "hopf+" => braid_closure(&[1, 1]),
        "hopf-" => braid_closure(&[-1, -1]),
        "trefoil" => braid_closure(&[1, 1, 1]),
        "trefoil-l" => braid_closure(&[-1, -1, -1]),
        "figure8" => braid_closure(&[1, -2, 1, -2]),
        "whitehead" => braid_closure(&[1, -2, 1, -2, 1]),
        "borromean" => braid_closure(&[1, -2, 1, -2, 1, -2]),
        "granny" => {
            let t = braid_closure(&[1, 1, 1])?;
            crate::diagram::edit::connected_sum(&t, 1, &t, 1)
        }
        _ => Err(AkError::Invalid(format!("unknown catalog entry {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::edit::select_components;
    use crate::diagram::reid;
    use crate::invariants::{self, DEFAULT_BUDGET};
    use crate::poly::Poly;

    #[test]
    fn all_entries_validate() {
        for &name in NAMES {
            let d = named(name).unwrap();
            d.validate().unwrap();
        }
    }

    #[test]
    fn hopf_fixtures() {
        let p = named("hopf+").unwrap();
        assert_eq!(invariants::linking_number(&p, 0, 1).unwrap(), 1);
        assert_eq!(invariants::conway(&p).unwrap(), Poly::monomial(1, 1));
        let m = named("hopf-").unwrap();
        assert_eq!(invariants::linking_number(&m, 0, 1).unwrap(), -1);
        assert_eq!(invariants::conway(&m).unwrap(), Poly::monomial(-1, 1));
    }

    #[test]
    fn trefoil_fixtures() {
        for name in ["trefoil", "trefoil-l"] {
            let d = named(name).unwrap();
            assert_eq!(d.component_count().unwrap(), 1);
            assert_eq!(
                invariants::conway(&d).unwrap(),
                Poly::from_coeffs(vec![1, 0, 1])
            );
        }
        assert_eq!(invariants::writhe(&named("trefoil").unwrap()).unwrap(), 3);
        assert_eq!(invariants::writhe(&named("trefoil-l").unwrap()).unwrap(), -3);
    }

    #[test]
    fn figure8_fixture() {
        let d = named("figure8").unwrap();
        assert_eq!(d.component_count().unwrap(), 1);
        assert_eq!(
            invariants::conway(&d).unwrap(),
            Poly::from_coeffs(vec![1, 0, -1])
        );
    }

    #[test]
    fn whitehead_fixture() {
        let d = named("whitehead").unwrap();
        assert_eq!(d.component_count().unwrap(), 2);
        assert_eq!(invariants::linking_number(&d, 0, 1).unwrap(), 0);
        let conway = invariants::conway(&d).unwrap();
        assert_eq!(conway.coeff(2), 0);
        assert_eq!(conway.coeff(3).abs(), 1);
        // Both components are unknots.
        for i in 0..2 {
            let c = select_components(&d, &[i].into_iter().collect()).unwrap();
            assert_eq!(
                invariants::conway_with(&c, DEFAULT_BUDGET).unwrap(),
                Poly::one()
            );
        }
    }

    #[test]
    fn borromean_fixture() {
        let d = named("borromean").unwrap();
        assert_eq!(d.component_count().unwrap(), 3);
        for (_, _, v) in invariants::linking_matrix(&d).unwrap() {
            assert_eq!(v, 0);
        }
        assert!(!invariants::conway(&d).unwrap().is_zero());
        // Brunnian: deleting any component leaves a reducible unlink.
        for i in 0..3 {
            let keep: std::collections::HashSet<usize> =
                (0..3).filter(|&j| j != i).collect();
            let two = select_components(&d, &keep).unwrap();
            let r = reid::reduce(&two).unwrap();
            assert_eq!(r, Diagram::unlink(2));
        }
    }

    #[test]
    fn granny_fixture() {
        let d = named("granny").unwrap();
        assert_eq!(
            invariants::conway_coeff(&d, 2, DEFAULT_BUDGET).unwrap(),
            2
        );
    }
}
