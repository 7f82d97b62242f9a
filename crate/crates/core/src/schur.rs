//! The Schur algebroid: modules on parabolic double cosets with normalized
//! convolution, duality through the Hecke embedding, and the K0 class map.

use std::collections::BTreeMap;

use crate::coxeter::WeylGroup;
use crate::error::AlgebraError;
use crate::hecke::{Hecke, HeckeElem};
use crate::laurent::{LaurentPoly, Var};
use crate::selfdual::{selfdual_basis, SelfDualSetup};

/// Element of ^P H^Q: LaurentPoly combination of double-coset symbols, keyed by
/// the minimal coset representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurElem {
    pub group: u64,
    pub i_set: Vec<usize>,
    pub j_set: Vec<usize>,
    support: BTreeMap<u32, LaurentPoly>,
}

impl SchurElem {
    pub fn zero(group: u64, i_set: Vec<usize>, j_set: Vec<usize>) -> Self {
        SchurElem { group, i_set, j_set, support: BTreeMap::new() }
    }

    pub fn basis(group: &WeylGroup, i_set: &[usize], j_set: &[usize], minrep: u32) -> Self {
        assert_eq!(group.coset_project(minrep, i_set, j_set), minrep, "not a minimal representative");
        let mut support = BTreeMap::new();
        support.insert(minrep, LaurentPoly::one(Var::Q));
        SchurElem {
            group: group.id(),
            i_set: i_set.to_vec(),
            j_set: j_set.to_vec(),
            support,
        }
    }

    pub fn from_support(
        group: u64,
        i_set: Vec<usize>,
        j_set: Vec<usize>,
        support: BTreeMap<u32, LaurentPoly>,
    ) -> Self {
        let mut e = SchurElem { group, i_set, j_set, support };
        e.support.retain(|_, c| !c.is_zero());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coeff(&self, z: u32) -> LaurentPoly {
        self.support.get(&z).cloned().unwrap_or_else(|| LaurentPoly::zero(Var::Q))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &LaurentPoly)> {
        self.support.iter().map(|(z, c)| (*z, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.group, &self.i_set, &self.j_set), (other.group, &other.i_set, &other.j_set));
        let mut support = self.support.clone();
        for (z, c) in &other.support {
            let entry = support.entry(*z).or_insert_with(|| LaurentPoly::zero(Var::Q));
            *entry = &*entry + c;
            if entry.is_zero() {
                support.remove(z);
            }
        }
        SchurElem {
            group: self.group,
            i_set: self.i_set.clone(),
            j_set: self.j_set.clone(),
            support,
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut support = BTreeMap::new();
        for (z, k) in &self.support {
            let p = k * c;
            if !p.is_zero() {
                support.insert(*z, p);
            }
        }
        SchurElem {
            group: self.group,
            i_set: self.i_set.clone(),
            j_set: self.j_set.clone(),
            support,
        }
    }

    pub fn render(&self, group: &WeylGroup) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        let mut keys: Vec<u32> = self.support.keys().copied().collect();
        keys.sort_by_key(|&z| (group.len_idx(z), z));
        for z in keys {
            parts.push(format!("({}) Tbar[{}]", self.support[&z], group.word_string(z)));
        }
        parts.join(" + ")
    }
}

pub struct Schur<'a, 'w> {
    pub h: &'a Hecke<'w>,
}

impl<'a, 'w> Schur<'a, 'w> {
    pub fn new(h: &'a Hecke<'w>) -> Self {
        Schur { h }
    }

    fn group(&self) -> &WeylGroup {
        self.h.w
    }

    /// T_zbar -> sum of T_w over the double coset, extended linearly.
    pub fn embed(&self, a: &SchurElem) -> HeckeElem {
        let g = self.group();
        let mut out = HeckeElem::zero(g.id(), Var::Q);
        for (z, c) in a.terms() {
            for w in g.coset_members(&a.i_set, &a.j_set, z) {
                out = out.add(&HeckeElem::basis_idx(g, w, Var::Q).scale(c));
            }
        }
        out
    }

    /// Inverse of embed on its image; peels minimal-length support terms.
    pub fn embed_inv(
        &self,
        h: &HeckeElem,
        i_set: &[usize],
        j_set: &[usize],
    ) -> Result<SchurElem, AlgebraError> {
        let g = self.group();
        let mut rem = h.clone();
        let mut out = SchurElem::zero(g.id(), i_set.to_vec(), j_set.to_vec());
        while !rem.is_zero() {
            let (w, c) = rem
                .terms()
                .min_by_key(|(w, _)| (g.len_idx(*w), *w))
                .map(|(w, c)| (w, c.clone()))
                .unwrap();
            if g.coset_project(w, i_set, j_set) != w {
                // minimal support term is not a minimal coset representative:
                // h is not in the image of embed
                return Err(AlgebraError::NonDivisible);
            }
            let basis = SchurElem::basis(g, i_set, j_set, w).scale(&c);
            rem = rem.sub(&self.embed(&basis));
            out = out.add(&basis);
        }
        Ok(out)
    }

    /// Normalized convolution f *_J g.
    pub fn convolve(&self, f: &SchurElem, g: &SchurElem) -> Result<SchurElem, AlgebraError> {
        if f.j_set != g.i_set {
            return Err(AlgebraError::MiddleMismatch);
        }
        let pi = self.group().poincare(&f.j_set);
        let prod = self.h.mul(&self.embed(f), &self.embed(g))?;
        // divide every coefficient by the middle Poincaré polynomial
        let mut support = BTreeMap::new();
        for (w, c) in prod.terms() {
            support.insert(w, c.div_exact(&pi)?);
        }
        let divided = HeckeElem::from_support(self.group().id(), Var::Q, support);
        self.embed_inv(&divided, &f.i_set, &g.j_set)
    }

    /// Duality: embed-conjugate of the Hecke bar involution.
    pub fn dual(&self, f: &SchurElem) -> Result<SchurElem, AlgebraError> {
        let barred = self.h.bar(&self.embed(f));
        self.embed_inv(&barred, &f.i_set, &f.j_set)
    }

    /// K0 class of the shriek extension with a Tate twist: q^twist T_zbar.
    pub fn k0_class(&self, i_set: &[usize], j_set: &[usize], minrep: u32, twist: i64) -> SchurElem {
        SchurElem::basis(self.group(), i_set, j_set, minrep)
            .scale(&LaurentPoly::monomial(Var::Q, twist, 1))
    }

    /// Parabolic KL polynomials on the (I,J) coset basis by the same triangular
    /// self-dual solve, normalized by the length of the maximal coset element.
    pub fn kl_table(
        &self,
        i_set: &[usize],
        j_set: &[usize],
    ) -> Result<Vec<(u32, u32, LaurentPoly)>, AlgebraError> {
        let g = self.group();
        let reps = g.double_cosets(i_set, j_set);
        let n = reps.len();
        let pos: BTreeMap<u32, usize> = reps.iter().enumerate().map(|(k, &z)| (z, k)).collect();
        let alpha: Vec<i64> = reps
            .iter()
            .map(|&z| {
                g.coset_members(i_set, j_set, z)
                    .iter()
                    .map(|&w| g.len_idx(w) as i64)
                    .max()
                    .unwrap()
            })
            .collect();
        // D(M_z) in M-coordinates with M_z = v^{alpha(z)} T_zbar
        let mut dual_std = Vec::with_capacity(n);
        for (k, &z) in reps.iter().enumerate() {
            let dz = self.dual(&SchurElem::basis(g, i_set, j_set, z))?;
            let mut col = vec![LaurentPoly::zero(Var::V); n];
            for (y, c) in dz.terms() {
                let ky = pos[&y];
                col[ky] = c.q_to_v().shift(-alpha[k] - alpha[ky]);
            }
            dual_std.push(col);
        }
        let heights: Vec<u32> = reps.iter().map(|&z| g.len_idx(z)).collect();
        let setup = SelfDualSetup {
            n,
            height: heights,
            lower: Box::new(|j, i| j != i && g.bruhat_leq_idx(reps[j], reps[i])),
            dual_std,
        };
        let cols = selfdual_basis(&setup)?;
        let mut out = Vec::new();
        for (iw, col) in cols.iter().enumerate() {
            for (ix, m) in col.iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                // report v^{alpha gap}-normalized polynomials in q when even
                let gap = alpha[iw] - alpha[ix];
                let mut p = LaurentPoly::zero(Var::Q);
                let mut ok = true;
                for (e, c) in m.terms() {
                    let num = gap - e;
                    if num < 0 || num % 2 != 0 {
                        ok = false;
                        break;
                    }
                    p = &p + &LaurentPoly::monomial(Var::Q, num / 2, c.clone());
                }
                if ok {
                    out.push((reps[ix], reps[iw], p));
                } else {
                    out.push((reps[ix], reps[iw], LaurentPoly::zero(Var::Q)));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CartanType;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::build(CartanType::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn embed_examples() {
        let g = group("A2");
        let h = Hecke::new(&g);
        let s = Schur::new(&h);
        // (∅,∅): identity embedding
        for w in g.elements() {
            let e = SchurElem::basis(&g, &[], &[], w.idx);
            assert_eq!(s.embed(&e), HeckeElem::basis(&g, w));
        }
        // (I=J={s1}): T_ebar -> T_e + T_s1
        let e = SchurElem::basis(&g, &[0], &[0], 0);
        let emb = s.embed(&e);
        let expect = HeckeElem::basis_idx(&g, 0, Var::Q).add(&HeckeElem::basis(&g, g.gen(0)));
        assert_eq!(emb, expect);
        // (I={s1}, J={s2}): support of the identity coset
        let e = SchurElem::basis(&g, &[0], &[1], 0);
        let emb = s.embed(&e);
        let members = g.coset_members(&[0], &[1], 0);
        assert_eq!(members.len(), 4); // {e, s1, s2, s1s2}
        for m in members {
            assert!(emb.coeff(m).is_one());
        }
        // embed_inv round-trips
        let back = s.embed_inv(&emb, &[0], &[1]).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn convolve_a1_idempotent() {
        let g = group("A1");
        let h = Hecke::new(&g);
        let s = Schur::new(&h);
        let e = SchurElem::basis(&g, &[0], &[0], 0);
        let c = s.convolve(&e, &e).unwrap();
        assert_eq!(c, e);
    }

    #[test]
    fn convolve_empty_middle_is_hecke() {
        let g = group("A2");
        let h = Hecke::new(&g);
        let s = Schur::new(&h);
        for x in g.elements() {
            for y in g.elements() {
                let f = SchurElem::basis(&g, &[], &[], x.idx);
                let gg = SchurElem::basis(&g, &[], &[], y.idx);
                let c = s.convolve(&f, &gg).unwrap();
                let hp = h
                    .mul(&HeckeElem::basis(&g, x), &HeckeElem::basis(&g, y))
                    .unwrap();
                assert_eq!(s.embed(&c), hp);
            }
        }
    }

    #[test]
    fn dual_examples() {
        let g = group("A1");
        let h = Hecke::new(&g);
        let s = Schur::new(&h);
        let e = SchurElem::basis(&g, &[0], &[0], 0);
        let d = s.dual(&e).unwrap();
        // bar(T_e + T_s) = q^-1 (T_e + T_s)
        assert_eq!(d, e.scale(&LaurentPoly::monomial(Var::Q, -1, 1)));
        assert_eq!(s.dual(&d).unwrap(), e);
    }

    #[test]
    fn parabolic_kl_reduces_to_kl() {
        let g = group("A2");
        let h = Hecke::new(&g);
        let s = Schur::new(&h);
        let table = s.kl_table(&[], &[]).unwrap();
        for (x, w, p) in table {
            assert_eq!(p, h.kl_poly(g.elem(x), g.elem(w)).unwrap());
        }
    }
}
