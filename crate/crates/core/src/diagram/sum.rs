//! Singular diagrams (marked double points) and integer formal sums of
//! diagrams, with the standard resolution of marked crossings.

use crate::error::{AkError, Result};

use super::Diagram;

/// A diagram with a set of crossings marked as rigid double points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularDiagram {
    pub diagram: Diagram,
    /// Indices into `diagram.crossings`, sorted and distinct.
    pub marked: Vec<usize>,
}

/// An integer linear combination of diagrams.
#[derive(Debug, Clone, Default)]
pub struct FormalSum {
    pub terms: Vec<(i64, Diagram)>,
}

impl SingularDiagram {
    pub fn new(diagram: Diagram, mut marked: Vec<usize>) -> Result<SingularDiagram> {
        marked.sort_unstable();
        marked.dedup();
        for &i in &marked {
            diagram.crossing(i)?;
        }
        diagram.validate()?;
        Ok(SingularDiagram { diagram, marked })
    }

    /// Resolve every marked crossing as (positive) - (negative), giving
    /// 2^k signed terms.
    pub fn resolve(&self) -> Result<FormalSum> {
        let mut terms = vec![(1i64, self.diagram.clone())];
        for &i in &self.marked {
            let mut next = Vec::with_capacity(terms.len() * 2);
            for (coeff, d) in terms {
                let here_positive = d.crossings[i].sign() > 0;
                let other = super::edit::switch_crossing(&d, i)?;
                let (pos, neg) = if here_positive { (d, other) } else { (other, d) };
                next.push((coeff, pos));
                next.push((-coeff, neg));
            }
            terms = next;
        }
        Ok(FormalSum { terms })
    }
}

impl FormalSum {
    pub fn singleton(d: Diagram) -> FormalSum {
        FormalSum {
            terms: vec![(1, d)],
        }
    }

    pub fn scale(&self, c: i64) -> FormalSum {
        FormalSum {
            terms: self.terms.iter().map(|(k, d)| (c * k, d.clone())).collect(),
        }
    }

    pub fn add(&self, other: &FormalSum) -> FormalSum {
        FormalSum {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (_, d) in &self.terms {
            d.validate()?;
        }
        if self.terms.is_empty() {
            return Err(AkError::Invalid("empty formal sum".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse::parse_pd;

    #[test]
    fn resolve_counts_terms_and_signs() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let s = SingularDiagram::new(d, vec![0, 2]).unwrap();
        let sum = s.resolve().unwrap();
        assert_eq!(sum.terms.len(), 4);
        let total: i64 = sum.terms.iter().map(|(c, _)| c).sum();
        assert_eq!(total, 0);
        // All marked crossings were positive, so the first term is untouched.
        assert_eq!(sum.terms[0].0, 1);
    }
}
