//! Numerical and polynomial invariants of link diagrams, their extension
//! to formal sums and singular diagrams, and constituent-cycle invariants
//! of spatial graphs.

pub mod cycles;
pub mod engine;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, End, FormalSum, SingularDiagram};
use crate::error::{AkError, Result};
use crate::poly::Poly;

pub use engine::{conway, conway_with, DEFAULT_BUDGET};

/// Sum of crossing signs.
pub fn writhe(d: &Diagram) -> Result<i64> {
    d.occurrences()?;
    Ok(d.crossings.iter().map(|c| c.sign()).sum())
}

fn component_of(comps: &[Vec<u32>], arc: u32) -> Option<usize> {
    comps.iter().position(|c| c.contains(&arc))
}

/// Linking number of components `i` and `j` (half the signed count of
/// crossings between them).
pub fn linking_number(d: &Diagram, i: usize, j: usize) -> Result<i64> {
    if i == j {
        return Err(AkError::Invalid("linking number needs two components".into()));
    }
    let comps = d.closed_components()?;
    let total = comps.len() + d.free_loops;
    for k in [i, j] {
        if k >= total {
            return Err(AkError::ComponentOutOfRange(k));
        }
    }
    let mut sum = 0;
    for c in &d.crossings {
        let cu = component_of(&comps, c.slots[0]);
        let co = component_of(&comps, c.slots[1]);
        if (cu == Some(i) && co == Some(j)) || (cu == Some(j) && co == Some(i)) {
            sum += c.sign();
        }
    }
    debug_assert_eq!(sum % 2, 0);
    Ok(sum / 2)
}

/// The full linking matrix as (i, j, lk) triples with i < j.
pub fn linking_matrix(d: &Diagram) -> Result<Vec<(usize, usize, i64)>> {
    let n = d.component_count()?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j, linking_number(d, i, j)?));
        }
    }
    Ok(out)
}

/// Coefficient of z^n in the Conway polynomial.
pub fn conway_coeff(d: &Diagram, n: usize, budget: u64) -> Result<i64> {
    Ok(conway_with(d, budget)?.coeff(n))
}

/// Arf invariant: a2 mod 2 for knots; a3 mod 2 for proper 2-component
/// links. Undefined otherwise.
pub fn arf(d: &Diagram, budget: u64) -> Result<i64> {
    let n = d.component_count()?;
    match n {
        1 => Ok(conway_coeff(d, 2, budget)?.rem_euclid(2)),
        2 => {
            let lk = linking_number(d, 0, 1)?;
            if lk % 2 != 0 {
                return Err(AkError::Unsupported(
                    "arf needs a proper link (even pairwise linking numbers)".into(),
                ));
            }
            Ok(conway_coeff(d, 3, budget)?.rem_euclid(2))
        }
        _ => Err(AkError::Unsupported(
            "arf is computed for knots and 2-component links".into(),
        )),
    }
}

/// The invariants evaluated on diagrams, formal sums and singular
/// diagrams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Writhe,
    LinkingNumber(usize, usize),
    Conway,
    ConwayCoeff(usize),
    Arf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Poly(Poly),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(*v),
            Value::Poly(_) => None,
        }
    }
}

pub fn evaluate(d: &Diagram, inv: Invariant, budget: u64) -> Result<Value> {
    Ok(match inv {
        Invariant::Writhe => Value::Int(writhe(d)?),
        Invariant::LinkingNumber(i, j) => Value::Int(linking_number(d, i, j)?),
        Invariant::Conway => Value::Poly(conway_with(d, budget)?),
        Invariant::ConwayCoeff(n) => Value::Int(conway_coeff(d, n, budget)?),
        Invariant::Arf => Value::Int(arf(d, budget)?),
    })
}

/// Linear extension to integer formal sums. Polynomial-valued invariants
/// sum as polynomials; integer-valued ones as integers.
pub fn evaluate_sum(sum: &FormalSum, inv: Invariant, budget: u64) -> Result<Value> {
    let mut int_acc: i64 = 0;
    let mut poly_acc = Poly::zero();
    let mut is_poly = false;
    for (coeff, d) in &sum.terms {
        match evaluate(d, inv, budget)? {
            Value::Int(v) => int_acc += coeff * v,
            Value::Poly(p) => {
                is_poly = true;
                poly_acc += &p.scale(*coeff);
            }
        }
    }
    Ok(if is_poly {
        Value::Poly(poly_acc)
    } else {
        Value::Int(int_acc)
    })
}

/// Evaluate on a singular diagram through the resolution of its marked
/// crossings.
pub fn evaluate_singular(s: &SingularDiagram, inv: Invariant, budget: u64) -> Result<Value> {
    evaluate_sum(&s.resolve()?, inv, budget)
}

/// The standard report computed for one diagram.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub writhe: i64,
    pub lk: Vec<(usize, usize, i64)>,
    pub conway: Vec<i64>,
    pub a2: Option<i64>,
    pub arf: Option<i64>,
}

pub fn report(d: &Diagram, budget: u64) -> Result<Report> {
    let conway = conway_with(d, budget)?;
    let n = d.component_count()?;
    Ok(Report {
        writhe: writhe(d)?,
        lk: linking_matrix(d)?,
        conway: conway.coeffs().to_vec(),
        a2: if n == 1 { Some(conway.coeff(2)) } else { None },
        arf: arf(d, budget).ok(),
    })
}

/// Crossings between two distinct strands where both strands belong to
/// the given arc set.
pub fn crossings_within(d: &Diagram, arcs: &HashSet<u32>) -> Vec<usize> {
    d.crossings
        .iter()
        .enumerate()
        .filter(|(_, c)| c.slots.iter().all(|a| arcs.contains(a)))
        .map(|(i, _)| i)
        .collect()
}

/// Whether every pairwise linking number vanishes.
pub fn all_lk_zero(d: &Diagram) -> Result<bool> {
    Ok(linking_matrix(d)?.iter().all(|&(_, _, v)| v == 0))
}

/// Which crossing does this end belong to, if any.
pub fn end_crossing(end: End) -> Option<usize> {
    match end {
        End::X { crossing, .. } => Some(crossing),
        End::V { .. } => None,
    }
}
