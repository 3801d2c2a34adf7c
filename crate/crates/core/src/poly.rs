use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer polynomial in the variable `z`, dense over exponents `0..`.
/// The Conway polynomial of a diagram lives here; no negative powers occur.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Poly {
    /// coeffs[i] is the coefficient of z^i; no trailing zeros.
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.normalize();
        p
    }

    /// c * z^n
    pub fn monomial(c: i64, n: usize) -> Self {
        if c == 0 {
            return Poly::zero();
        }
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn coeff(&self, n: usize) -> i64 {
        self.coeffs.get(n).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Multiply by z^n in place.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn scale(&self, c: i64) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Substitute z -> -z.
    pub fn flip_var(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
            .collect();
        Poly { coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeff(i) + rhs.coeff(i);
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(-1)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => {
                    if a == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "{a}z")?
                    }
                }
                _ => {
                    if a == 1 {
                        write!(f, "z^{i}")?
                    } else {
                        write!(f, "{a}z^{i}")?
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = Poly::from_coeffs(vec![1, 0, 1]); // 1 + z^2
        let q = Poly::monomial(1, 1); // z
        assert_eq!((&p + &q).coeffs(), &[1, 1, 1]);
        assert_eq!((&p - &p), Poly::zero());
        assert_eq!((&q * &q).coeffs(), &[0, 0, 1]);
        assert_eq!(p.shift(1).coeffs(), &[0, 1, 0, 1]);
    }

    #[test]
    fn display() {
        let p = Poly::from_coeffs(vec![1, 0, -1]);
        assert_eq!(p.to_string(), "1 - z^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn flip_var_negates_odd_coeffs() {
        let p = Poly::from_coeffs(vec![1, 2, 3, 4]);
        assert_eq!(p.flip_var().coeffs(), &[1, -2, 3, -4]);
    }
}
