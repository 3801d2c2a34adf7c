//! PD text format and Gauss code conversion.
//!
//! Grammar: optional `components=<n> free_loops=<m>` header tokens,
//! crossing terms `X(a,b,c,d)` (counterclockwise from the incoming
//! under-strand), vertex terms `V(e1,e2,...)` whose entries are signed arc
//! ids (positive: the arc head ends at the vertex; negative: the arc tail
//! leaves it), `#` comments to end of line.
//!
//! The over-strand direction at each crossing is not part of the text; it
//! is recovered by constraint propagation from the under-strand slots and
//! vertex signs, with the tabulation convention that an over pair of
//! consecutive labels runs from the lower to the higher label. A conflict
//! between the two is an orientation error.

use std::collections::HashMap;

use crate::error::{AkError, Result};

use super::{ArcId, Crossing, Diagram, Vertex};

#[derive(Debug, Clone)]
enum Term {
    X([ArcId; 4]),
    V(Vec<(ArcId, bool)>),
    Header(String, usize),
}

fn scan(text: &str) -> Result<Vec<(usize, Term)>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c == 'X' || c == 'V' {
            let start = i;
            i += 1;
            if i >= bytes.len() || bytes[i] != b'(' {
                return Err(AkError::Syntax {
                    pos: i,
                    msg: format!("expected '(' after {c}"),
                });
            }
            i += 1;
            let close = text[i..].find(')').ok_or(AkError::Syntax {
                pos: i,
                msg: "unclosed term".into(),
            })?;
            let inner = &text[i..i + close];
            let entries: Vec<i64> = inner
                .split(',')
                .map(|s| {
                    s.trim().parse::<i64>().map_err(|_| AkError::Syntax {
                        pos: start,
                        msg: format!("bad arc id {:?}", s.trim()),
                    })
                })
                .collect::<Result<_>>()?;
            i += close + 1;
            if c == 'X' {
                if entries.len() != 4 {
                    return Err(AkError::Syntax {
                        pos: start,
                        msg: "X term needs exactly 4 arcs".into(),
                    });
                }
                let mut slots = [0u32; 4];
                for (k, &e) in entries.iter().enumerate() {
                    if e <= 0 {
                        return Err(AkError::Syntax {
                            pos: start,
                            msg: "crossing arc ids must be positive".into(),
                        });
                    }
                    slots[k] = e as ArcId;
                }
                out.push((start, Term::X(slots)));
            } else {
                let mut ends = Vec::new();
                for &e in &entries {
                    if e == 0 {
                        return Err(AkError::Syntax {
                            pos: start,
                            msg: "vertex arc ids must be nonzero".into(),
                        });
                    }
                    ends.push((e.unsigned_abs() as ArcId, e > 0));
                }
                out.push((start, Term::V(ends)));
            }
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let key = &text[start..i];
            if i >= bytes.len() || bytes[i] != b'=' {
                return Err(AkError::Syntax {
                    pos: start,
                    msg: format!("unknown token {key:?}"),
                });
            }
            i += 1;
            let vstart = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let val: usize = text[vstart..i].parse().map_err(|_| AkError::Syntax {
                pos: vstart,
                msg: format!("bad value for {key}"),
            })?;
            out.push((start, Term::Header(key.to_string(), val)));
        } else {
            return Err(AkError::Syntax {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

/// In/out polarity of a crossing end as a function of the over flag:
/// `Fixed(v)` or `Var { crossing, value_if_b_to_d }`.
#[derive(Debug, Clone, Copy)]
enum Polarity {
    Fixed(bool),
    Var { crossing: usize, if_b_to_d: bool },
}

fn solve_orientations(crossings: &[[ArcId; 4]], vertices: &[Vertex]) -> Result<Vec<bool>> {
    let n = crossings.len();
    // Heuristic seed from the consecutive-label convention.
    let mut assign: Vec<Option<bool>> = (0..n)
        .map(|i| {
            let (b, d) = (crossings[i][1], crossings[i][3]);
            if d == b + 1 {
                Some(true)
            } else if b == d + 1 {
                Some(false)
            } else {
                None
            }
        })
        .collect();

    // Every end of every arc, with its polarity ("is an in end").
    let mut ends: HashMap<ArcId, Vec<Polarity>> = HashMap::new();
    for (ci, slots) in crossings.iter().enumerate() {
        ends.entry(slots[0]).or_default().push(Polarity::Fixed(true));
        ends.entry(slots[2])
            .or_default()
            .push(Polarity::Fixed(false));
        ends.entry(slots[1]).or_default().push(Polarity::Var {
            crossing: ci,
            if_b_to_d: true,
        });
        ends.entry(slots[3]).or_default().push(Polarity::Var {
            crossing: ci,
            if_b_to_d: false,
        });
    }
    for v in vertices {
        for &(arc, incoming) in &v.ends {
            ends.entry(arc).or_default().push(Polarity::Fixed(incoming));
        }
    }
    let mut arcs: Vec<ArcId> = ends.keys().copied().collect();
    arcs.sort_unstable();
    for &arc in &arcs {
        if ends[&arc].len() != 2 {
            return Err(AkError::Invalid(format!(
                "arc {arc} is used {} time(s); every arc must appear exactly twice",
                ends[&arc].len()
            )));
        }
    }

    let eval = |p: Polarity, assign: &[Option<bool>]| -> Option<bool> {
        match p {
            Polarity::Fixed(v) => Some(v),
            Polarity::Var { crossing, if_b_to_d } => {
                assign[crossing].map(|b2d| b2d == if_b_to_d)
            }
        }
    };

    loop {
        let mut changed = false;
        for &arc in &arcs {
            let (p0, p1) = (ends[&arc][0], ends[&arc][1]);
            match (eval(p0, &assign), eval(p1, &assign)) {
                (Some(a), Some(b)) => {
                    if a == b {
                        return Err(AkError::Invalid(format!(
                            "orientation mismatch at arc {arc}: it cannot be {} at both ends",
                            if a { "incoming" } else { "outgoing" }
                        )));
                    }
                }
                (Some(a), None) => {
                    if let Polarity::Var { crossing, if_b_to_d } = p1 {
                        assign[crossing] = Some(if_b_to_d == !a);
                        changed = true;
                    }
                }
                (None, Some(b)) => {
                    if let Polarity::Var { crossing, if_b_to_d } = p0 {
                        assign[crossing] = Some(if_b_to_d == !b);
                        changed = true;
                    }
                }
                (None, None) => {}
            }
        }
        if !changed {
            match assign.iter().position(|a| a.is_none()) {
                Some(i) => assign[i] = Some(true),
                None => break,
            }
        }
    }
    Ok(assign.into_iter().map(|a| a.unwrap()).collect())
}

/// Parse and fully validate a PD text diagram.
pub fn parse_pd(text: &str) -> Result<Diagram> {
    let terms = scan(text)?;
    let mut crossings: Vec<[ArcId; 4]> = Vec::new();
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut declared_components: Option<usize> = None;
    let mut free_loops = 0usize;
    for (pos, term) in terms {
        match term {
            Term::X(slots) => crossings.push(slots),
            Term::V(ends) => vertices.push(Vertex { ends }),
            Term::Header(key, val) => match key.as_str() {
                "components" => declared_components = Some(val),
                "free_loops" => free_loops = val,
                _ => {
                    return Err(AkError::Syntax {
                        pos,
                        msg: format!("unknown header key {key:?}"),
                    })
                }
            },
        }
    }
    let flags = solve_orientations(&crossings, &vertices)?;
    let d = Diagram {
        crossings: crossings
            .into_iter()
            .zip(flags)
            .map(|(slots, over_b_to_d)| Crossing { slots, over_b_to_d })
            .collect(),
        vertices,
        free_loops,
    };
    d.validate()?;
    if let Some(n) = declared_components {
        let have = d.component_count()?;
        if have != n {
            return Err(AkError::Invalid(format!(
                "header declares {n} component(s) but the code has {have}"
            )));
        }
    }
    Ok(d)
}

/// Renumber arcs to 1..N sequentially along components (closed components
/// in min-arc order, then vertex-to-vertex edges) and emit the sorted text
/// form. Fails only for diagrams whose over-strand orientation cannot be
/// expressed in the format (an ambiguously oriented two-arc circle that is
/// always the over strand; greedy reduction removes these).
pub fn serialize(d: &Diagram) -> Result<String> {
    let mut comps = d.closed_components()?;
    // For two-arc components whose single over pass would read backwards,
    // shift the basepoint so the over pass runs low to high.
    for comp in comps.iter_mut() {
        if comp.len() == 2 {
            let over_in_first = d
                .crossings
                .iter()
                .any(|c| c.over() == (comp[0], comp[1]));
            let over_in_second = d
                .crossings
                .iter()
                .any(|c| c.over() == (comp[1], comp[0]));
            if over_in_second && !over_in_first {
                comp.rotate_left(1);
            } else if over_in_second && over_in_first {
                return Err(AkError::Invalid(
                    "two-arc circle lying entirely over the diagram cannot be serialized; \
                     reduce it first"
                        .into(),
                ));
            }
        }
    }
    let mut map: HashMap<ArcId, ArcId> = HashMap::new();
    let mut next: ArcId = 1;
    for comp in &comps {
        for &a in comp {
            map.insert(a, next);
            next += 1;
        }
    }
    for chain in d.edge_chains()? {
        for a in chain {
            map.insert(a, next);
            next += 1;
        }
    }
    let renamed = d.relabel(&map);
    let mut xs: Vec<String> = renamed
        .crossings
        .iter()
        .map(|c| {
            format!(
                "X({},{},{},{})",
                c.slots[0], c.slots[1], c.slots[2], c.slots[3]
            )
        })
        .collect();
    xs.sort();
    let mut vs: Vec<String> = renamed
        .vertices
        .iter()
        .map(|v| {
            let parts: Vec<String> = v
                .ends
                .iter()
                .map(|&(a, incoming)| {
                    if incoming {
                        format!("{a}")
                    } else {
                        format!("-{a}")
                    }
                })
                .collect();
            format!("V({})", parts.join(","))
        })
        .collect();
    vs.sort();
    let mut out = format!(
        "components={} free_loops={}",
        d.component_count()?,
        d.free_loops
    );
    for t in xs.into_iter().chain(vs) {
        out.push(' ');
        out.push_str(&t);
    }
    Ok(out)
}

/// Import a signed Gauss code for a knot, e.g. `O1+U2+O3+U1+O2+U3+`.
pub fn parse_gauss(text: &str) -> Result<Diagram> {
    let text = text.trim();
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut symbols: Vec<(bool, usize, i64)> = Vec::new(); // (is_over, label, sign)
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() || c == ',' {
            i += 1;
            continue;
        }
        let over = match c {
            'O' | 'o' => true,
            'U' | 'u' => false,
            _ => {
                return Err(AkError::Syntax {
                    pos: i,
                    msg: format!("expected O or U, found {c:?}"),
                })
            }
        };
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let label: usize = text[start..i].parse().map_err(|_| AkError::Syntax {
            pos: start,
            msg: "missing crossing label".into(),
        })?;
        let sign = match bytes.get(i).map(|&b| b as char) {
            Some('+') => 1,
            Some('-') => -1,
            _ => {
                return Err(AkError::Syntax {
                    pos: i,
                    msg: "expected + or - after crossing label".into(),
                })
            }
        };
        i += 1;
        symbols.push((over, label, sign));
    }
    if symbols.is_empty() {
        return Ok(Diagram::unknot());
    }
    if symbols.len() % 2 != 0 {
        return Err(AkError::Invalid("odd number of Gauss symbols".into()));
    }
    let n = symbols.len() / 2;
    // Arc k runs from symbol k to symbol k+1 (1-based, wrapping), so the
    // arc entering symbol idx is idx, except symbol 0 which arc 2n enters.
    let mut passes: HashMap<usize, Vec<(bool, i64, ArcId, ArcId)>> = HashMap::new();
    for (idx, &(over, label, sign)) in symbols.iter().enumerate() {
        let arc_in = if idx == 0 { 2 * n as ArcId } else { idx as ArcId };
        let arc_out = (idx + 1) as ArcId;
        passes.entry(label).or_default().push((over, sign, arc_in, arc_out));
    }
    let mut crossings = Vec::new();
    let mut labels: Vec<usize> = passes.keys().copied().collect();
    labels.sort_unstable();
    for label in labels {
        let ps = &passes[&label];
        if ps.len() != 2 {
            return Err(AkError::Invalid(format!(
                "crossing {label} appears {} time(s) in the Gauss code",
                ps.len()
            )));
        }
        let (over_pass, under_pass) = if ps[0].0 { (ps[0], ps[1]) } else { (ps[1], ps[0]) };
        if over_pass.0 == under_pass.0 {
            return Err(AkError::Invalid(format!(
                "crossing {label} must appear once as O and once as U"
            )));
        }
        if over_pass.1 != under_pass.1 {
            return Err(AkError::Invalid(format!(
                "crossing {label} has inconsistent signs"
            )));
        }
        let sign = over_pass.1;
        let (a, c) = (under_pass.2, under_pass.3);
        let (b, d) = if sign > 0 {
            (over_pass.2, over_pass.3)
        } else {
            (over_pass.3, over_pass.2)
        };
        crossings.push(Crossing {
            slots: [a, b, c, d],
            over_b_to_d: sign > 0,
        });
    }
    let d = Diagram {
        crossings,
        vertices: vec![],
        free_loops: 0,
    };
    d.validate()?;
    let comps = d.closed_components()?;
    if comps.len() != 1 {
        return Err(AkError::Invalid(
            "Gauss code import is for knots (one component)".into(),
        ));
    }
    Ok(d)
}

/// Export a knot as a signed Gauss code.
pub fn to_gauss(d: &Diagram) -> Result<String> {
    if !d.is_link() {
        return Err(AkError::Unsupported("Gauss export needs a link".into()));
    }
    let comps = d.closed_components()?;
    if comps.len() + d.free_loops != 1 {
        return Err(AkError::Invalid(
            "Gauss export is for knots (one component)".into(),
        ));
    }
    if d.crossings.is_empty() {
        return Ok(String::new());
    }
    let occ = d.occurrences()?;
    let comp = &comps[0];
    let mut order: HashMap<usize, usize> = HashMap::new();
    let mut out = String::new();
    for &arc in comp {
        if let Some(super::End::X { crossing, slot }) = occ.head(arc) {
            let c = &d.crossings[crossing];
            let n = order.len();
            let label = *order.entry(crossing).or_insert(n + 1);
            let over = slot != 0;
            out.push(if over { 'O' } else { 'U' });
            out.push_str(&label.to_string());
            out.push(if c.sign() > 0 { '+' } else { '-' });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_parses() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(d.crossings.len(), 3);
        assert_eq!(d.component_count().unwrap(), 1);
        assert!(d.crossings.iter().all(|c| c.sign() == 1));
    }

    #[test]
    fn empty_with_header_is_unknot() {
        let d = parse_pd("components=1 free_loops=1").unwrap();
        assert_eq!(d, Diagram::unknot());
    }

    #[test]
    fn inconsistent_orientation_rejected() {
        let err = parse_pd("X(1,2,2,1)").unwrap_err();
        assert!(matches!(err, AkError::Invalid(_)), "{err}");
    }

    #[test]
    fn arc_used_once_rejected() {
        let err = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,7)").unwrap_err();
        assert!(err.to_string().contains("arc"), "{err}");
    }

    #[test]
    fn comments_and_headers() {
        let d = parse_pd("# trefoil\ncomponents=1 free_loops=0\nX(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
            .unwrap();
        assert_eq!(d.crossings.len(), 3);
    }

    #[test]
    fn serialize_round_trip() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let text = serialize(&d).unwrap();
        let d2 = parse_pd(&text).unwrap();
        assert_eq!(serialize(&d2).unwrap(), text);
    }

    #[test]
    fn gauss_round_trip_trefoil() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let g = to_gauss(&d).unwrap();
        let d2 = parse_gauss(&g).unwrap();
        // The basepoint may shift; compare canonically.
        assert_eq!(
            crate::diagram::canon::canonical(&d2).unwrap(),
            crate::diagram::canon::canonical(&d).unwrap()
        );
    }
}
