//! Conway polynomial skein engine: greedy reduction, split and descending
//! detection, memoized recursion on the first non-descending crossing,
//! with a node budget.

use std::collections::{HashMap, HashSet};

use crate::diagram::{edit, parse, reid, Diagram, End};
use crate::error::{AkError, Result};
use crate::poly::Poly;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

struct Engine {
    memo: HashMap<String, Poly>,
    memo_bytes: usize,
    memo_cap: Option<usize>,
    nodes: u64,
    budget: u64,
}

/// Optional memo cache bound, in approximate bytes.
fn memo_cap_from_env() -> Option<usize> {
    std::env::var("AKMOVE_CACHE_BYTES").ok()?.parse().ok()
}

/// Crossings reachable from each other through shared strands; a diagram
/// whose crossing graph is disconnected (or which carries a free loop next
/// to crossings) is split, and its polynomial vanishes.
fn is_split(d: &Diagram) -> Result<bool> {
    if d.crossings.is_empty() {
        return Ok(false);
    }
    if d.free_loops > 0 {
        return Ok(true);
    }
    let occ = d.occurrences()?;
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut arcs: Vec<_> = occ.arcs().collect();
    arcs.sort_unstable();
    for arc in arcs {
        if let (Some(End::X { crossing: a, .. }), Some(End::X { crossing: b, .. })) =
            (occ.tail(arc), occ.head(arc))
        {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut seen: HashSet<usize> = HashSet::new();
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        if !seen.insert(c) {
            continue;
        }
        stack.extend(adj.get(&c).into_iter().flatten());
    }
    Ok(seen.len() < d.crossings.len())
}

/// The first crossing reached on its under-strand before its over-strand,
/// traversing components from their basepoints in order.
fn first_bad_crossing(d: &Diagram) -> Result<Option<usize>> {
    let occ = d.occurrences()?;
    let comps = d.closed_components_with(&occ)?;
    let mut visited: HashSet<usize> = HashSet::new();
    for comp in &comps {
        for &arc in comp {
            if let Some(End::X { crossing, slot }) = occ.head(arc) {
                if visited.insert(crossing) && slot == 0 {
                    return Ok(Some(crossing));
                }
            }
        }
    }
    Ok(None)
}

impl Engine {
    fn eval(&mut self, d: &Diagram) -> Result<Poly> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(AkError::BudgetExceeded(self.budget));
        }
        let d = reid::reduce(d)?;
        if d.crossings.is_empty() {
            return Ok(if d.free_loops == 1 {
                Poly::one()
            } else {
                Poly::zero()
            });
        }
        if is_split(&d)? {
            return Ok(Poly::zero());
        }
        // The PD text is the preferred memo key; the rare diagram without
        // one (an all-over circle) falls back to its raw crossing list.
        let key = parse::serialize(&d)
            .unwrap_or_else(|_| format!("{:?}|{}", d.crossings, d.free_loops));
        if let Some(p) = self.memo.get(&key) {
            return Ok(p.clone());
        }
        let result = match first_bad_crossing(&d)? {
            None => {
                // Descending and connected: an unknot (several descending
                // components would be split).
                if d.component_count()? == 1 {
                    Poly::one()
                } else {
                    Poly::zero()
                }
            }
            Some(i) => {
                let sign = d.crossings[i].sign();
                let switched = edit::switch_crossing(&d, i)?;
                let smoothed = edit::smooth_crossing(&d, i)?;
                let a = self.eval(&switched)?;
                let b = self.eval(&smoothed)?;
                &a + &b.shift(1).scale(sign)
            }
        };
        let entry_bytes = key.len() + 16 * result.coeffs().len() + 64;
        if self
            .memo_cap
            .map_or(true, |cap| self.memo_bytes + entry_bytes <= cap)
        {
            self.memo_bytes += entry_bytes;
            self.memo.insert(key, result.clone());
        }
        Ok(result)
    }
}

/// The Conway polynomial, with an explicit skein node budget.
pub fn conway_with(d: &Diagram, budget: u64) -> Result<Poly> {
    if !d.is_link() {
        return Err(AkError::Unsupported(
            "the Conway polynomial is computed for links; extract cycles first".into(),
        ));
    }
    d.validate()?;
    let mut e = Engine {
        memo: HashMap::new(),
        memo_bytes: 0,
        memo_cap: memo_cap_from_env(),
        nodes: 0,
        budget,
    };
    e.eval(d)
}

pub fn conway(d: &Diagram) -> Result<Poly> {
    conway_with(d, DEFAULT_BUDGET)
}
