//! Exact integer Laurent polynomials in one variable (`q` or `v`),
//! with the bar involution and the v^2 = q^-1 dictionary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::AlgebraError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Var {
    Q,
    V,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Q => write!(f, "q"),
            Var::V => write!(f, "v"),
        }
    }
}

/// Sparse Laurent polynomial with BigInt coefficients. No zero coefficients stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    var: Var,
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero(var: Var) -> Self {
        LaurentPoly { var, coeffs: BTreeMap::new() }
    }

    pub fn one(var: Var) -> Self {
        Self::monomial(var, 0, BigInt::one())
    }

    pub fn monomial(var: Var, exp: i64, coeff: impl Into<BigInt>) -> Self {
        let c: BigInt = coeff.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { var, coeffs }
    }

    /// Convenience: polynomial from (exponent, coefficient) pairs.
    pub fn from_pairs(var: Var, pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero(var);
        for &(e, c) in pairs {
            p = &p + &Self::monomial(var, e, c);
        }
        p
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Largest exponent, None if zero.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Smallest exponent, None if zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.degree().map(|d| self.coeff(d)).unwrap_or_else(BigInt::zero)
    }

    fn check_var(&self, other: &Self) {
        assert_eq!(self.var, other.var, "laurent variable mismatch");
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, -c)).collect();
        LaurentPoly { var: self.var, coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.var);
        }
        let coeffs = self.coeffs.iter().map(|(e, k)| (*e, k * c)).collect();
        LaurentPoly { var: self.var, coeffs }
    }

    /// Multiply by a single monomial t^exp.
    pub fn shift(&self, exp: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (e + exp, c.clone())).collect();
        LaurentPoly { var: self.var, coeffs }
    }

    /// Exponent negation; the coefficient-level Kazhdan-Lusztig involution.
    pub fn bar(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect();
        LaurentPoly { var: self.var, coeffs }
    }

    /// Keep only terms with exponent strictly greater than 0.
    pub fn positive_part(&self) -> Self {
        let coeffs = self.coeffs.iter().filter(|(e, _)| **e > 0).map(|(e, c)| (*e, c.clone())).collect();
        LaurentPoly { var: self.var, coeffs }
    }

    /// Exact division; errors if the divisor does not divide.
    pub fn div_exact(&self, b: &Self) -> Result<Self, AlgebraError> {
        if self.var != b.var {
            return Err(AlgebraError::VariableMismatch);
        }
        if b.is_zero() {
            return Err(AlgebraError::NonDivisible);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.var));
        }
        // Long division from the top; Laurent units are monomials, so shift
        // freely. If b | a then every quotient exponent is >= val(a) - val(b),
        // which bounds the division and prevents an infinite series expansion.
        let mut rem = self.clone();
        let mut quot = Self::zero(self.var);
        let bd = b.degree().unwrap();
        let blc = b.leading_coeff();
        let min_exp = self.valuation().unwrap() - b.valuation().unwrap();
        while !rem.is_zero() {
            let rd = rem.degree().unwrap();
            if rd - bd < min_exp {
                return Err(AlgebraError::NonDivisible);
            }
            let rlc = rem.leading_coeff();
            let (qc, r) = num_integer::Integer::div_rem(&rlc, &blc);
            if !r.is_zero() {
                return Err(AlgebraError::NonDivisible);
            }
            let term = Self::monomial(self.var, rd - bd, qc);
            rem = &rem - &(&term * b);
            quot = &quot + &term;
            if let Some(nrd) = rem.degree() {
                if nrd >= rd {
                    return Err(AlgebraError::NonDivisible);
                }
            }
        }
        Ok(quot)
    }

    /// Exact evaluation at a nonzero rational point.
    pub fn specialize(&self, t0: &BigRational) -> Result<BigRational, AlgebraError> {
        if t0.is_zero() {
            return Err(AlgebraError::ZeroEvaluationPoint);
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            let p = rational_pow(t0, *e);
            acc += BigRational::from(c.clone()) * p;
        }
        Ok(acc)
    }

    /// Evaluation at an integer point; requires nonnegative exponents.
    pub fn eval_int(&self, t0: i64) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.coeffs {
            assert!(*e >= 0, "eval_int on a poly with negative exponents");
            acc += c * BigInt::from(t0).pow(*e as u32);
        }
        acc
    }

    /// Evaluation at an integer point allowing negative exponents (exact rational).
    pub fn eval_rat(&self, t0: i64) -> BigRational {
        self.specialize(&BigRational::from(BigInt::from(t0))).expect("nonzero point")
    }

    /// Interpret a q-polynomial in the v variable via q = v^-2.
    pub fn q_to_v(&self) -> Self {
        assert_eq!(self.var, Var::Q);
        let coeffs = self.coeffs.iter().map(|(e, c)| (-2 * e, c.clone())).collect();
        LaurentPoly { var: Var::V, coeffs }
    }

    /// Convert a v-polynomial to the q variable; rejects odd v-exponents.
    pub fn v_to_q(&self) -> Result<Self, AlgebraError> {
        assert_eq!(self.var, Var::V);
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            if e % 2 != 0 {
                return Err(AlgebraError::OddExponent(*e));
            }
            coeffs.insert(-e / 2, c.clone());
        }
        Ok(LaurentPoly { var: Var::Q, coeffs })
    }

    /// Retag the variable without changing exponents (for rank/character bookkeeping).
    pub fn retag(&self, var: Var) -> Self {
        LaurentPoly { var, coeffs: self.coeffs.clone() }
    }

    /// JSON value: sorted [exponent, coefficient] pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(e, c)| serde_json::json!([e, c.to_string()]))
            .collect();
        serde_json::Value::Array(pairs)
    }
}

fn rational_pow(t: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let p = t.pow(e.unsigned_abs().try_into().expect("exponent fits i32"));
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_var(rhs);
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            let entry = coeffs.entry(*e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(e);
            }
        }
        LaurentPoly { var: self.var, coeffs }
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &rhs.neg()
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check_var(rhs);
        let mut coeffs: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                let entry = coeffs.entry(e1 + e2).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { var: self.var, coeffs }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
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
            let unit_coeff = abs.is_one();
            if *e == 0 {
                write!(f, "{abs}")?;
            } else {
                if !unit_coeff {
                    write!(f, "{abs}*")?;
                }
                if *e == 1 {
                    write!(f, "{}", self.var)?;
                } else {
                    write!(f, "{}^{}", self.var, e)?;
                }
            }
        }
        Ok(())
    }
}

pub enum ArithOp {
    Add,
    Mul,
    DivExact,
}

pub fn laurent_arith(a: &LaurentPoly, b: &LaurentPoly, op: ArithOp) -> Result<LaurentPoly, AlgebraError> {
    if a.var() != b.var() {
        return Err(AlgebraError::VariableMismatch);
    }
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::DivExact => a.div_exact(b),
    }
}

/// Fit the unique integer polynomial in q of degree <= degree_bound through the
/// first degree_bound+1 samples; remaining samples are a consistency check.
pub fn interpolate(samples: &[(u64, BigInt)], degree_bound: usize) -> Result<LaurentPoly, AlgebraError> {
    let mut seen = std::collections::BTreeMap::new();
    for (x, y) in samples {
        if let Some(prev) = seen.insert(*x, y.clone()) {
            if prev != *y {
                return Err(AlgebraError::InconsistentSamples);
            }
        }
    }
    let points: Vec<(BigRational, BigRational)> = seen
        .iter()
        .map(|(x, y)| {
            (
                BigRational::from(BigInt::from(*x)),
                BigRational::from(y.clone()),
            )
        })
        .collect();
    if points.len() < degree_bound + 1 {
        return Err(AlgebraError::InconsistentSamples);
    }
    let base = &points[..degree_bound + 1];
    // Lagrange interpolation over Q.
    let n = base.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        // numerator polynomial prod_{j != i} (t - x_j), built incrementally
        let mut num = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = &base[j].0;
            let mut next = vec![BigRational::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * xj;
            }
            num = next;
            denom *= &base[i].0 - xj;
        }
        let scale = &base[i].1 / denom;
        for (k, c) in num.iter().enumerate() {
            coeffs[k] += c * &scale;
        }
    }
    let mut poly = LaurentPoly::zero(Var::Q);
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !c.is_integer() {
            return Err(AlgebraError::NonIntegerCoefficients);
        }
        poly = &poly + &LaurentPoly::monomial(Var::Q, k as i64, c.to_integer());
    }
    // Consistency on every sample, including the ones beyond the fit window.
    for (x, y) in &points {
        let v = poly.specialize(x).map_err(|_| AlgebraError::InconsistentSamples)?;
        if v != *y {
            return Err(AlgebraError::InconsistentSamples);
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentPoly {
        LaurentPoly::monomial(Var::Q, 1, 1)
    }

    #[test]
    fn ring_identities() {
        let one = LaurentPoly::one(Var::Q);
        let a = &q() + &one; // q + 1
        let b = &q() - &one; // q - 1
        let prod = &a * &b;
        let expect = &(&q() * &q()) - &one;
        assert_eq!(prod, expect);
    }

    #[test]
    fn div_exact_roundtrip() {
        let one = LaurentPoly::one(Var::Q);
        let a = &q() + &one;
        let sq = &a * &a;
        assert_eq!(sq.div_exact(&a).unwrap(), a);
        let bad = &(&q() * &q()) + &one; // q^2 + 1
        assert!(matches!(bad.div_exact(&a), Err(AlgebraError::NonDivisible)));
    }

    #[test]
    fn bar_involution() {
        let p = LaurentPoly::from_pairs(Var::Q, &[(2, 3), (-1, -1)]); // 3q^2 - q^-1
        assert_eq!(p.bar().bar(), p);
        assert_eq!(q().bar(), LaurentPoly::monomial(Var::Q, -1, 1));
        let a = LaurentPoly::from_pairs(Var::Q, &[(0, 1), (1, 1)]);
        assert_eq!(a.bar(), LaurentPoly::from_pairs(Var::Q, &[(0, 1), (-1, 1)]));
    }

    #[test]
    fn specialization() {
        let one = LaurentPoly::one(Var::Q);
        let a = &q() + &one;
        let two = BigRational::from(BigInt::from(2));
        assert_eq!(a.specialize(&two).unwrap(), BigRational::from(BigInt::from(3)));
        let qinv = LaurentPoly::monomial(Var::Q, -1, 1);
        assert_eq!(
            qinv.specialize(&two).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert!(matches!(
            a.specialize(&BigRational::zero()),
            Err(AlgebraError::ZeroEvaluationPoint)
        ));
    }

    #[test]
    fn interpolation_examples() {
        let p = interpolate(&[(2, 3.into()), (3, 4.into())], 1).unwrap();
        assert_eq!(p, LaurentPoly::from_pairs(Var::Q, &[(0, 1), (1, 1)]));
        let p = interpolate(&[(2, 2.into()), (3, 3.into()), (5, 5.into())], 1).unwrap();
        assert_eq!(p, q());
        let p = interpolate(&[(2, 3.into()), (3, 4.into()), (5, 6.into()), (7, 8.into())], 2).unwrap();
        assert_eq!(p, LaurentPoly::from_pairs(Var::Q, &[(0, 1), (1, 1)]));
        assert!(interpolate(&[(2, 3.into()), (3, 4.into()), (5, 7.into())], 1).is_err());
    }

    #[test]
    fn v_dictionary() {
        let p = q(); // q
        let v = p.q_to_v();
        assert_eq!(v, LaurentPoly::monomial(Var::V, -2, 1));
        assert_eq!(v.v_to_q().unwrap(), p);
        let odd = LaurentPoly::monomial(Var::V, 1, 1);
        assert!(matches!(odd.v_to_q(), Err(AlgebraError::OddExponent(1))));
    }

    #[test]
    fn rendering() {
        let p = LaurentPoly::from_pairs(Var::Q, &[(2, 3), (-1, -1)]);
        assert_eq!(p.to_string(), "3*q^2 - q^-1");
        assert_eq!(LaurentPoly::zero(Var::Q).to_string(), "0");
        let m = LaurentPoly::from_pairs(Var::Q, &[(1, 1), (0, 1)]);
        assert_eq!(m.to_string(), "q + 1");
    }
}
