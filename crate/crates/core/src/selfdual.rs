//! Generic triangular solver for self-dual bases: given standard basis symbols
//! M_0..M_{n-1} graded by a height function, a partial order, and a semilinear
//! duality D expressed in the M-basis, produce the unique basis C_i = M_i +
//! (strictly positive v-corrections on strictly lower symbols) with D(C_i) = C_i.
//!
//! This is the engine behind Kazhdan-Lusztig bases, their parabolic variants,
//! and the symmetric-variety KLV bases.

use crate::error::AlgebraError;
use crate::laurent::{LaurentPoly, Var};

pub struct SelfDualSetup<'a> {
    pub n: usize,
    /// processing order proxy; i may correct along j only when height[j] < height[i]
    pub height: Vec<u32>,
    /// strict partial order: lower(j, i) == true iff j < i
    pub lower: Box<dyn Fn(usize, usize) -> bool + 'a>,
    /// columns: D(M_j) = sum_k dual_std[j][k] M_k, coefficients in v
    pub dual_std: Vec<Vec<LaurentPoly>>,
}

/// Columns of the self-dual basis in M-coordinates.
pub fn selfdual_basis(setup: &SelfDualSetup) -> Result<Vec<Vec<LaurentPoly>>, AlgebraError> {
    let n = setup.n;
    assert_eq!(setup.dual_std.len(), n);
    // sanity: D is unitriangular w.r.t. the order
    for j in 0..n {
        assert_eq!(setup.dual_std[j].len(), n);
        for k in 0..n {
            let c = &setup.dual_std[j][k];
            if k == j {
                if !c.is_one() {
                    return Err(AlgebraError::NoSelfDualBasis);
                }
            } else if !c.is_zero() && !(setup.lower)(k, j) {
                return Err(AlgebraError::NoSelfDualBasis);
            }
        }
    }

    // the order must be graded by height
    for j in 0..n {
        for k in 0..n {
            if (setup.lower)(k, j) {
                assert!(setup.height[k] < setup.height[j], "order not height-graded");
            }
        }
    }

    let apply_dual = |vec: &[LaurentPoly]| -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(Var::V); n];
        for (j, c) in vec.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cb = c.bar();
            for k in 0..n {
                let d = &setup.dual_std[j][k];
                if !d.is_zero() {
                    out[k] = &out[k] + &(&cb * d);
                }
            }
        }
        out
    };

    let mut idx_by_height: Vec<usize> = (0..n).collect();
    idx_by_height.sort_by_key(|&i| (setup.height[i], i));

    let mut basis: Vec<Option<Vec<LaurentPoly>>> = vec![None; n];
    for &i in &idx_by_height {
        let mut c: Vec<LaurentPoly> = vec![LaurentPoly::zero(Var::V); n];
        c[i] = LaurentPoly::one(Var::V);
        // correct along strictly lower indices, highest first. At each step the
        // duality defect D(C) - C is anti-invariant at its top index; split off
        // its positive part and normalize the stored coefficient into v*Z[v].
        let mut lowers: Vec<usize> = (0..n).filter(|&j| (setup.lower)(j, i)).collect();
        lowers.sort_by_key(|&j| std::cmp::Reverse((setup.height[j], j)));
        for &j in &lowers {
            let dc = apply_dual(&c);
            let delta = &dc[j] - &c[j];
            if !(&delta.bar() + &delta).is_zero() {
                return Err(AlgebraError::NoSelfDualBasis);
            }
            let p = delta.positive_part();
            let tentative = &c[j] + &p;
            let nonpos = &tentative - &tentative.positive_part();
            let strictly_neg = &nonpos - &LaurentPoly::monomial(Var::V, 0, tentative.coeff(0));
            let h = (&nonpos + &strictly_neg.bar()).neg();
            let g = &p + &h;
            if g.is_zero() {
                continue;
            }
            let cj = basis[j].as_ref().ok_or(AlgebraError::NoSelfDualBasis)?;
            for k in 0..n {
                if !cj[k].is_zero() {
                    c[k] = &c[k] + &(&g * &cj[k]);
                }
            }
        }
        // verify self-duality and support shape exactly
        let dc = apply_dual(&c);
        if dc != c {
            return Err(AlgebraError::NoSelfDualBasis);
        }
        for (j, a) in c.iter().enumerate() {
            if j == i || a.is_zero() {
                continue;
            }
            if !(setup.lower)(j, i) {
                return Err(AlgebraError::NoSelfDualBasis);
            }
            if a.valuation().unwrap() <= 0 {
                return Err(AlgebraError::NoSelfDualBasis);
            }
        }
        basis[i] = Some(c);
    }
    Ok(basis.into_iter().map(|b| b.unwrap()).collect())
}
