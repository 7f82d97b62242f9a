//! Multivariate polynomials over the rationals, graded-lexicographic term order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector with graded-lex ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Mono, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; nvars]), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from(BigInt::from(c)))
    }

    /// The variable x_i (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0u16; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Mono(exps), BigRational::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<u16>, c: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Mono(exps), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total() == 0)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Mono(vec![0; self.nvars]))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    /// Total exponent degree if homogeneous (zero counts as homogeneous of any degree).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.total());
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn max_total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    /// Apply a permutation of the variables: x_i -> x_{perm[i]}.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; self.nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[perm[i]] += e;
            }
            let entry = out.terms.entry(Mono(exps)).or_insert_with(BigRational::zero);
            *entry += c;
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Exact division by (x_i - x_j); panics unless the division is exact
    /// (used only where exactness is a theorem, e.g. Demazure operators).
    pub fn div_by_root_diff(&self, i: usize, j: usize) -> Self {
        // Treat as univariate in x_i and divide by (x_i - x_j).
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while !rem.is_zero() {
            // leading term in x_i-degree, ties broken by term order
            let (m, c) = rem
                .terms
                .iter()
                .max_by(|(a, _), (b, _)| a.0[i].cmp(&b.0[i]).then_with(|| a.cmp(b)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap();
            assert!(m.0[i] > 0, "division by x_{i} - x_{j} not exact");
            let mut qm = m.0.clone();
            qm[i] -= 1;
            let term = Self::monomial(self.nvars, qm, c);
            let diff = &Self::var(self.nvars, i) - &Self::var(self.nvars, j);
            rem = &rem - &(&term * &diff);
            quot = &quot + &term;
        }
        quot
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        MultiPoly { nvars: self.nvars, terms }
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &rhs.neg()
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let exps: Vec<u16> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                let entry = terms.entry(Mono(exps)).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { nvars: self.nvars, terms }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const_mono = m.total() == 0;
            if is_const_mono || !abs.is_one() {
                write!(f, "{abs}")?;
                if !is_const_mono {
                    write!(f, "*")?;
                }
            }
            let mut started = false;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if started {
                    write!(f, "*")?;
                }
                started = true;
                if e == 1 {
                    write!(f, "x{}", i + 1)?;
                } else {
                    write!(f, "x{}^{}", i + 1, e)?;
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
    fn arithmetic_and_order() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = &(&x + &y) * &(&x - &y);
        let expect = &(&x * &x) - &(&y * &y);
        assert_eq!(p, expect);
        assert_eq!(p.homogeneous_degree(), Some(2));
    }

    #[test]
    fn division_by_linear() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = &(&x * &x) - &(&y * &y); // (x-y)(x+y)
        assert_eq!(p.div_by_root_diff(0, 1), &x + &y);
    }

    #[test]
    fn permute() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = &x + &(&y * &y);
        let q = p.permute_vars(&[1, 0]);
        assert_eq!(q, &y + &(&x * &x));
    }
}
