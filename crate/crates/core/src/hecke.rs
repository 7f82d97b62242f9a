//! Iwahori-Hecke algebra in the convolution T-basis over Z[q,q^-1], bar
//! involution, and the Kazhdan-Lusztig basis via the triangular self-dual solve.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coxeter::{WeylElem, WeylGroup};
use crate::error::AlgebraError;
use crate::laurent::{LaurentPoly, Var};
use crate::selfdual::{selfdual_basis, SelfDualSetup};

/// Finitely supported LaurentPoly-combination of T_w symbols. The variable tag
/// of all coefficients must agree (q for the convolution form, v for KL work).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElem {
    pub group: u64,
    pub var: Var,
    support: BTreeMap<u32, LaurentPoly>,
}

impl HeckeElem {
    pub fn zero(group: u64, var: Var) -> Self {
        HeckeElem { group, var, support: BTreeMap::new() }
    }

    pub fn basis(group: &WeylGroup, w: WeylElem) -> Self {
        Self::basis_idx(group, w.idx, Var::Q)
    }

    pub fn basis_idx(group: &WeylGroup, w: u32, var: Var) -> Self {
        let mut support = BTreeMap::new();
        support.insert(w, LaurentPoly::one(var));
        HeckeElem { group: group.id(), var, support }
    }

    pub fn unit(group: &WeylGroup, var: Var) -> Self {
        Self::basis_idx(group, 0, var)
    }

    pub fn from_support(group: u64, var: Var, support: BTreeMap<u32, LaurentPoly>) -> Self {
        let mut h = HeckeElem { group, var, support };
        h.support.retain(|_, c| !c.is_zero());
        h
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coeff(&self, w: u32) -> LaurentPoly {
        self.support.get(&w).cloned().unwrap_or_else(|| LaurentPoly::zero(self.var))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &LaurentPoly)> {
        self.support.iter().map(|(w, c)| (*w, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group, "hecke group mismatch");
        assert_eq!(self.var, other.var, "hecke variable mismatch");
        let mut support = self.support.clone();
        for (w, c) in &other.support {
            let entry = support.entry(*w).or_insert_with(|| LaurentPoly::zero(self.var));
            *entry = &*entry + c;
            if entry.is_zero() {
                support.remove(w);
            }
        }
        HeckeElem { group: self.group, var: self.var, support }
    }

    pub fn neg(&self) -> Self {
        let support = self.support.iter().map(|(w, c)| (*w, c.neg())).collect();
        HeckeElem { group: self.group, var: self.var, support }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        assert_eq!(self.var, c.var());
        let mut support = BTreeMap::new();
        for (w, k) in &self.support {
            let p = k * c;
            if !p.is_zero() {
                support.insert(*w, p);
            }
        }
        HeckeElem { group: self.group, var: self.var, support }
    }

    /// Convert q-form to v-form coefficients (exponent doubling), or back.
    pub fn to_v(&self) -> Self {
        assert_eq!(self.var, Var::Q);
        let support = self.support.iter().map(|(w, c)| (*w, c.q_to_v())).collect();
        HeckeElem { group: self.group, var: Var::V, support }
    }

    pub fn to_q(&self) -> Result<Self, AlgebraError> {
        assert_eq!(self.var, Var::V);
        let mut support = BTreeMap::new();
        for (w, c) in &self.support {
            support.insert(*w, c.v_to_q()?);
        }
        Ok(HeckeElem { group: self.group, var: Var::Q, support })
    }

    pub fn render(&self, group: &WeylGroup) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        let mut keys: Vec<u32> = self.support.keys().copied().collect();
        keys.sort_by_key(|&w| (group.len_idx(w), w));
        for w in keys {
            parts.push(format!("({}) T[{}]", self.support[&w], group.word_string(w)));
        }
        parts.join(" + ")
    }
}

struct KLData {
    /// for each w: column of m_{x,w} in H-coordinates (v-form), keyed by x
    columns: Vec<BTreeMap<u32, LaurentPoly>>,
}

/// Hecke algebra context over a Weyl group, with bar and KL caches.
pub struct Hecke<'a> {
    pub w: &'a WeylGroup,
    bar_cache: RefCell<Vec<Option<Rc<BTreeMap<u32, LaurentPoly>>>>>,
    kl: OnceLock<KLData>,
}

impl<'a> Hecke<'a> {
    pub fn new(w: &'a WeylGroup) -> Self {
        Hecke {
            w,
            bar_cache: RefCell::new(vec![None; w.order()]),
            kl: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &'a WeylGroup {
        self.w
    }

    fn q_poly(&self, var: Var) -> LaurentPoly {
        match var {
            Var::Q => LaurentPoly::monomial(Var::Q, 1, 1),
            Var::V => LaurentPoly::monomial(Var::V, -2, 1),
        }
    }

    /// Right multiplication by T_s on a single term.
    fn term_mul_gen(&self, w: u32, coeff: &LaurentPoly, s: usize, acc: &mut BTreeMap<u32, LaurentPoly>) {
        let var = coeff.var();
        let ws = self.w.rmul_gen(w, s);
        if self.w.len_idx(ws) > self.w.len_idx(w) {
            let entry = acc.entry(ws).or_insert_with(|| LaurentPoly::zero(var));
            *entry = &*entry + coeff;
        } else {
            // T_w T_s = (q-1) T_w + q T_{ws}
            let q = self.q_poly(var);
            let qm1 = &q - &LaurentPoly::one(var);
            let e1 = acc.entry(w).or_insert_with(|| LaurentPoly::zero(var));
            *e1 = &*e1 + &(coeff * &qm1);
            let e2 = acc.entry(ws).or_insert_with(|| LaurentPoly::zero(var));
            *e2 = &*e2 + &(coeff * &q);
        }
    }

    /// a * T_s.
    pub fn mul_gen(&self, a: &HeckeElem, s: usize) -> HeckeElem {
        let mut acc = BTreeMap::new();
        for (w, c) in a.terms() {
            self.term_mul_gen(w, c, s, &mut acc);
        }
        HeckeElem::from_support(a.group, a.var, acc)
    }

    /// a * T_w for a basis symbol, via a reduced word of w.
    pub fn mul_basis(&self, a: &HeckeElem, w: u32) -> HeckeElem {
        let mut cur = a.clone();
        for s in self.w.reduced_word(w) {
            cur = self.mul_gen(&cur, s);
        }
        cur
    }

    pub fn mul(&self, a: &HeckeElem, b: &HeckeElem) -> Result<HeckeElem, AlgebraError> {
        if a.group != self.w.id() || b.group != self.w.id() {
            return Err(AlgebraError::GroupMismatch);
        }
        assert_eq!(a.var, b.var, "hecke variable mismatch");
        let mut out = HeckeElem::zero(a.group, a.var);
        for (w, c) in b.terms() {
            let part = self.mul_basis(a, w).scale(c);
            out = out.add(&part);
        }
        Ok(out)
    }

    /// bar(T_w) on the T-basis (q-form), computed by induction on length.
    fn bar_basis(&self, w: u32) -> Rc<BTreeMap<u32, LaurentPoly>> {
        if let Some(b) = &self.bar_cache.borrow()[w as usize] {
            return b.clone();
        }
        let result: BTreeMap<u32, LaurentPoly> = if w == 0 {
            let mut m = BTreeMap::new();
            m.insert(0u32, LaurentPoly::one(Var::Q));
            m
        } else {
            // w = u*s: bar(T_w) = bar(T_u) * bar(T_s), with
            // bar(T_s) = q^-1 T_s + (q^-1 - 1) T_e
            let s = *self.w.right_descents(w).first().unwrap();
            let u = self.w.rmul_gen(w, s);
            let bu = self.bar_basis(u);
            let qinv = LaurentPoly::monomial(Var::Q, -1, 1);
            let qinv_m1 = &qinv - &LaurentPoly::one(Var::Q);
            let mut acc: BTreeMap<u32, LaurentPoly> = BTreeMap::new();
            for (x, c) in bu.iter() {
                // c * T_x * (q^-1 T_s + (q^-1 - 1) T_e)
                let mut ts_part = BTreeMap::new();
                self.term_mul_gen(*x, c, s, &mut ts_part);
                for (y, p) in ts_part {
                    let entry = acc.entry(y).or_insert_with(|| LaurentPoly::zero(Var::Q));
                    *entry = &*entry + &(&p * &qinv);
                }
                let entry = acc.entry(*x).or_insert_with(|| LaurentPoly::zero(Var::Q));
                *entry = &*entry + &(c * &qinv_m1);
            }
            acc.retain(|_, c| !c.is_zero());
            acc
        };
        let rc = Rc::new(result);
        self.bar_cache.borrow_mut()[w as usize] = Some(rc.clone());
        rc
    }

    /// The bar involution: semilinear over exponent negation, T_w -> (T_{w^-1})^-1.
    pub fn bar(&self, a: &HeckeElem) -> HeckeElem {
        let q_form = match a.var {
            Var::Q => a.clone(),
            Var::V => {
                // bar commutes with the v/q dictionary; work in v directly
                let mut out = HeckeElem::zero(a.group, Var::V);
                for (w, c) in a.terms() {
                    let b = self.bar_basis(w);
                    for (x, p) in b.iter() {
                        let term = HeckeElem::basis_idx(self.w, *x, Var::V)
                            .scale(&(&c.bar() * &p.q_to_v()));
                        out = out.add(&term);
                    }
                }
                return out;
            }
        };
        let mut out = HeckeElem::zero(a.group, Var::Q);
        for (w, c) in q_form.terms() {
            let b = self.bar_basis(w);
            for (x, p) in b.iter() {
                let term = HeckeElem::basis_idx(self.w, *x, Var::Q).scale(&(&c.bar() * p));
                out = out.add(&term);
            }
        }
        out
    }

    /// Inverse of a basis element: (T_w)^-1 = bar(T_{w^-1}).
    pub fn basis_inverse(&self, w: u32) -> HeckeElem {
        let winv = self.w.inv_idx(w);
        self.bar(&HeckeElem::basis_idx(self.w, winv, Var::Q))
    }

    fn kl_data(&self) -> &KLData {
        self.kl.get_or_init(|| {
            let n = self.w.order();
            // D(H_w) in H-coordinates: bar(H_w) = v^{-l(w)} sum_x b_{x,w} T_x
            //                                   = sum_x b_{x,w}(v) v^{-l(w)-l(x)} H_x
            let mut dual_std: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
            for w in 0..n as u32 {
                let lw = self.w.len_idx(w) as i64;
                let b = self.bar_basis(w);
                let mut col = vec![LaurentPoly::zero(Var::V); n];
                for (x, p) in b.iter() {
                    let lx = self.w.len_idx(*x) as i64;
                    col[*x as usize] = p.q_to_v().shift(-lw - lx);
                }
                dual_std.push(col);
            }
            let heights: Vec<u32> = (0..n as u32).map(|w| self.w.len_idx(w)).collect();
            let setup = SelfDualSetup {
                n,
                height: heights,
                lower: Box::new(|j, i| {
                    j != i && self.w.bruhat_leq_idx(j as u32, i as u32)
                }),
                dual_std,
            };
            let cols = selfdual_basis(&setup).expect("KL basis exists for Weyl groups");
            let columns = cols
                .into_iter()
                .map(|col| {
                    col.into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(x, c)| (x as u32, c))
                        .collect::<BTreeMap<u32, LaurentPoly>>()
                })
                .collect();
            KLData { columns }
        })
    }

    /// KL basis element C_w = sum_x m_{x,w} H_x, returned in v-form T-coordinates.
    pub fn kl_basis(&self, w: WeylElem) -> Result<HeckeElem, AlgebraError> {
        if w.group != self.w.id() {
            return Err(AlgebraError::GroupMismatch);
        }
        let data = self.kl_data();
        let mut support = BTreeMap::new();
        for (x, m) in &data.columns[w.idx as usize] {
            // H_x = v^{l(x)} T_x
            support.insert(*x, m.shift(self.w.len_idx(*x) as i64));
        }
        Ok(HeckeElem::from_support(self.w.id(), Var::V, support))
    }

    /// Kazhdan-Lusztig polynomial P_{x,w}(q).
    pub fn kl_poly(&self, x: WeylElem, w: WeylElem) -> Result<LaurentPoly, AlgebraError> {
        if x.group != self.w.id() || w.group != self.w.id() {
            return Err(AlgebraError::GroupMismatch);
        }
        if !self.w.bruhat_leq_idx(x.idx, w.idx) {
            return Err(AlgebraError::NotComparable);
        }
        let data = self.kl_data();
        let m = data.columns[w.idx as usize]
            .get(&x.idx)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(Var::V));
        // m_{x,w} = v^{l(w)-l(x)} P_{x,w}(v^-2)
        let gap = (self.w.len_idx(w.idx) - self.w.len_idx(x.idx)) as i64;
        let mut p = LaurentPoly::zero(Var::Q);
        for (e, c) in m.terms() {
            let num = gap - e;
            assert!(num >= 0 && num % 2 == 0, "KL exponent parity violated");
            p = &p + &LaurentPoly::monomial(Var::Q, num / 2, c.clone());
        }
        Ok(p)
    }

    /// Full KL table as (x, w) -> P_{x,w} over all Bruhat-comparable pairs.
    pub fn kl_table(&self) -> Vec<(u32, u32, LaurentPoly)> {
        let mut out = Vec::new();
        for w in 0..self.w.order() as u32 {
            for x in 0..self.w.order() as u32 {
                if self.w.bruhat_leq_idx(x, w) {
                    let p = self
                        .kl_poly(self.w.elem(x), self.w.elem(w))
                        .expect("comparable");
                    out.push((x, w, p));
                }
            }
        }
        out
    }

    /// Coefficientwise exact evaluation at q = q0.
    pub fn specialize(&self, a: &HeckeElem, q0: u64) -> Result<BTreeMap<u32, BigRational>, AlgebraError> {
        let qa = match a.var {
            Var::Q => a.clone(),
            Var::V => a.to_q()?,
        };
        let point = BigRational::from(BigInt::from(q0));
        let mut out = BTreeMap::new();
        for (w, c) in qa.terms() {
            out.insert(w, c.specialize(&point)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CartanType;
    use num_traits::Zero;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::build(CartanType::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_relation() {
        let w = group("A1");
        let h = Hecke::new(&w);
        let ts = HeckeElem::basis(&w, w.gen(0));
        let sq = h.mul(&ts, &ts).unwrap();
        // (q-1) T_s + q T_e
        assert_eq!(sq.coeff(w.gen(0).idx), LaurentPoly::from_pairs(Var::Q, &[(1, 1), (0, -1)]));
        assert_eq!(sq.coeff(0), LaurentPoly::monomial(Var::Q, 1, 1));
    }

    #[test]
    fn unit_and_assoc_small() {
        let w = group("A2");
        let h = Hecke::new(&w);
        let unit = HeckeElem::unit(&w, Var::Q);
        for x in w.elements() {
            let tx = HeckeElem::basis(&w, x);
            assert_eq!(h.mul(&unit, &tx).unwrap(), tx);
            assert_eq!(h.mul(&tx, &unit).unwrap(), tx);
        }
        for x in w.elements() {
            for y in w.elements() {
                for z in w.elements() {
                    let tx = HeckeElem::basis(&w, x);
                    let ty = HeckeElem::basis(&w, y);
                    let tz = HeckeElem::basis(&w, z);
                    let ab_c = h.mul(&h.mul(&tx, &ty).unwrap(), &tz).unwrap();
                    let a_bc = h.mul(&tx, &h.mul(&ty, &tz).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn length_additive_product() {
        let w = group("A2");
        let h = Hecke::new(&w);
        let t1 = HeckeElem::basis(&w, w.gen(0));
        let t2 = HeckeElem::basis(&w, w.gen(1));
        let prod = h.mul(&t1, &t2).unwrap();
        let s1s2 = w.parse_word("s1 s2").unwrap();
        assert_eq!(prod, HeckeElem::basis(&w, s1s2));
    }

    #[test]
    fn bar_properties() {
        let w = group("A2");
        let h = Hecke::new(&w);
        let te = HeckeElem::unit(&w, Var::Q);
        assert_eq!(h.bar(&te), te);
        let ts = HeckeElem::basis(&w, w.gen(0));
        let b = h.bar(&ts);
        // q^-1 T_s + (q^-1 - 1) T_e
        assert_eq!(b.coeff(w.gen(0).idx), LaurentPoly::monomial(Var::Q, -1, 1));
        assert_eq!(b.coeff(0), LaurentPoly::from_pairs(Var::Q, &[(-1, 1), (0, -1)]));
        // involution and multiplicativity on all basis pairs
        for x in w.elements() {
            let tx = HeckeElem::basis(&w, x);
            assert_eq!(h.bar(&h.bar(&tx)), tx);
            // T_w * (T_w)^-1 = 1
            let inv = h.basis_inverse(x.idx);
            assert_eq!(h.mul(&tx, &inv).unwrap(), HeckeElem::unit(&w, Var::Q));
            for y in w.elements() {
                let ty = HeckeElem::basis(&w, y);
                let lhs = h.bar(&h.mul(&tx, &ty).unwrap());
                let rhs = h.mul(&h.bar(&tx), &h.bar(&ty)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn kl_rank_two_trivial() {
        let w = group("A2");
        let h = Hecke::new(&w);
        for ww in w.elements() {
            for x in w.elements() {
                if w.bruhat_leq(x, ww).unwrap() {
                    assert!(h.kl_poly(x, ww).unwrap().is_one());
                }
            }
            // bar-invariance of the basis element
            let c = h.kl_basis(ww).unwrap();
            assert_eq!(h.bar(&c), c);
        }
        assert!(matches!(
            h.kl_poly(w.gen(0), w.gen(1)),
            Err(AlgebraError::NotComparable)
        ));
    }

    #[test]
    fn kl_first_nontrivial_a3() {
        let w = group("A3");
        let h = Hecke::new(&w);
        let x = w.parse_word("s2").unwrap();
        let ww = w.parse_word("s2 s1 s3 s2").unwrap();
        let p = h.kl_poly(x, ww).unwrap();
        assert_eq!(p, LaurentPoly::from_pairs(Var::Q, &[(0, 1), (1, 1)]));
        let c = h.kl_basis(ww).unwrap();
        assert_eq!(h.bar(&c), c);
    }

    #[test]
    fn specialize_guard() {
        let w = group("A1");
        let h = Hecke::new(&w);
        let ts = HeckeElem::basis(&w, w.gen(0));
        let sq = h.mul(&ts, &ts).unwrap();
        let table = h.specialize(&sq, 2).unwrap();
        assert_eq!(table[&w.gen(0).idx], BigRational::from(BigInt::from(1)));
        assert_eq!(table[&0], BigRational::from(BigInt::from(2)));
        // odd v-power rejected
        let c = h.kl_basis(w.gen(0)).unwrap();
        assert!(matches!(h.specialize(&c, 3), Err(AlgebraError::OddExponent(_))));
        let zero_check: BigRational = BigRational::zero();
        let _ = zero_check;
    }
}
