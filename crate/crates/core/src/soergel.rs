//! Type-A polynomial realization: symmetric-group action on Q[x1..xn],
//! Demazure operators, parabolic invariant rings, Bott-Samelson bimodules as
//! free left modules with right-action matrices, singular bimodules over
//! invariant subrings, and graded Hom spaces by exact linear algebra.
//!
//! Grading: deg(x_i) = 2. A shift <k> adds k to every basis degree and
//! contributes v^k to characters and graded ranks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::HashMap;

use crate::coxeter::{CartanType, WeylElem, WeylGroup};
use crate::error::AlgebraError;
use crate::hecke::{Hecke, HeckeElem};
use crate::laurent::{LaurentPoly, Var};
use crate::multipoly::MultiPoly;
use crate::qlinalg;

// ---------------------------------------------------------------------------
// polynomial ring context
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct PolyCtx {
    pub cartan: CartanType,
    pub nvars: usize,
    /// generator index -> variable index i (the reflection swaps x_i, x_{i+1})
    pub simple_pos: Vec<usize>,
}

impl PolyCtx {
    pub fn new(cartan: &CartanType) -> Result<Self, AlgebraError> {
        let mut nvars = 0;
        let mut simple_pos = Vec::new();
        for &(letter, r) in &cartan.factors {
            if letter != 'A' {
                return Err(AlgebraError::UnsupportedContext);
            }
            for i in 0..r {
                simple_pos.push(nvars + i);
            }
            nvars += r + 1;
        }
        Ok(PolyCtx { cartan: cartan.clone(), nvars, simple_pos })
    }

    pub fn from_type_str(s: &str) -> Result<Self, AlgebraError> {
        Self::new(&CartanType::parse(s)?)
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.nvars, i)
    }

    /// Action of the simple reflection with generator index s.
    pub fn act_simple(&self, s: usize, f: &MultiPoly) -> MultiPoly {
        let i = self.simple_pos[s];
        let mut perm: Vec<usize> = (0..self.nvars).collect();
        perm.swap(i, i + 1);
        f.permute_vars(&perm)
    }

    pub fn act_word(&self, word: &[usize], f: &MultiPoly) -> MultiPoly {
        // w = s1 s2 ... sk acts by applying the rightmost letter first
        let mut g = f.clone();
        for &s in word.iter().rev() {
            g = self.act_simple(s, &g);
        }
        g
    }

    pub fn weyl_act(&self, w: &WeylGroup, e: WeylElem, f: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        if w.cartan() != &self.cartan {
            return Err(AlgebraError::GroupMismatch);
        }
        Ok(self.act_word(&w.reduced_word(e.idx), f))
    }

    /// Demazure operator for the simple reflection s: (f - s.f)/(x_i - x_{i+1}).
    pub fn demazure(&self, s: usize, f: &MultiPoly) -> MultiPoly {
        let i = self.simple_pos[s];
        let num = f - &self.act_simple(s, f);
        num.div_by_root_diff(i, i + 1)
    }

    /// Variable blocks cut out by a set of generator indices; singletons included.
    pub fn blocks(&self, i_set: &[usize]) -> Vec<Vec<usize>> {
        let mut joined = vec![false; self.nvars.saturating_sub(1)];
        for &s in i_set {
            joined[self.simple_pos[s]] = true;
        }
        let mut out = Vec::new();
        let mut cur = vec![0usize];
        for i in 1..self.nvars {
            if joined[i - 1] {
                cur.push(i);
            } else {
                out.push(std::mem::replace(&mut cur, vec![i]));
            }
        }
        out.push(cur);
        out
    }

    /// Positive-degree generators of the invariant ring R^{W_I}: the
    /// elementary symmetric polynomials of each block.
    pub fn invariant_ring(&self, i_set: &[usize]) -> Vec<MultiPoly> {
        let mut gens = Vec::new();
        for block in self.blocks(i_set) {
            // e_1..e_k of the block variables by the (1 + t x) product recursion
            let mut es: Vec<MultiPoly> = vec![MultiPoly::one(self.nvars)];
            for &v in &block {
                let x = self.var(v);
                let mut next = Vec::with_capacity(es.len() + 1);
                for k in 0..=es.len() {
                    let mut e = if k < es.len() { es[k].clone() } else { MultiPoly::zero(self.nvars) };
                    if k > 0 {
                        e = &e + &(&es[k - 1] * &x);
                    }
                    next.push(e);
                }
                es = next;
            }
            gens.extend(es.into_iter().skip(1));
        }
        gens
    }

    /// Poincaré polynomial of W_I in v^2 (graded by 2 * length).
    pub fn parabolic_poincare_v2(&self, i_set: &[usize]) -> LaurentPoly {
        let mut p = LaurentPoly::one(Var::V);
        for block in self.blocks(i_set) {
            for i in 1..=block.len() {
                let factor = LaurentPoly::from_pairs(
                    Var::V,
                    &(0..i as i64).map(|j| (2 * j, 1)).collect::<Vec<_>>(),
                );
                p = &p * &factor;
            }
        }
        p
    }
}

// ---------------------------------------------------------------------------
// homogeneous-degree linear algebra helpers
// ---------------------------------------------------------------------------

fn monomials(nvars: usize, d: u32) -> Vec<Vec<u16>> {
    fn rec(nvars: usize, d: u32, pos: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos == nvars - 1 {
            cur.push(d as u16);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=d {
            cur.push(e as u16);
            rec(nvars, d - e, pos + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, d, 0, &mut Vec::new(), &mut out);
    out
}

fn poly_vec(f: &MultiPoly, index: &HashMap<Vec<u16>, usize>) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); index.len()];
    for (m, c) in f.terms() {
        let slot = index[&m.0];
        v[slot] = c.clone();
    }
    v
}

/// All products of the given homogeneous generators with total degree d.
fn gen_products(gens: &[MultiPoly], d: u32) -> Vec<MultiPoly> {
    let degs: Vec<u32> = gens.iter().map(|g| g.homogeneous_degree().unwrap()).collect();
    let nvars = if gens.is_empty() { 0 } else { gens[0].nvars() };
    let mut out = Vec::new();
    fn rec(
        gens: &[MultiPoly],
        degs: &[u32],
        pos: usize,
        d: u32,
        cur: &MultiPoly,
        out: &mut Vec<MultiPoly>,
    ) {
        if d == 0 {
            out.push(cur.clone());
            return;
        }
        if pos == gens.len() {
            return;
        }
        let mut acc = cur.clone();
        let mut used = 0;
        loop {
            rec(gens, degs, pos + 1, d - used, &acc, out);
            used += degs[pos];
            if used > d {
                break;
            }
            acc = &acc * &gens[pos];
        }
    }
    if d == 0 {
        return vec![MultiPoly::one(nvars)];
    }
    rec(gens, &degs, 0, d, &MultiPoly::one(nvars), &mut out);
    out
}

/// Homogeneous free basis of R^{W_R} over R^{W_S} (R ⊆ S as generator sets),
/// chosen greedily degree by degree modulo the ideal generated by the
/// positive-degree S-invariants. Graded count is asserted against the
/// Poincaré ratio.
pub fn fiber_basis(ctx: &PolyCtx, r_set: &[usize], s_set: &[usize]) -> Result<Vec<MultiPoly>, AlgebraError> {
    let ratio = ctx
        .parabolic_poincare_v2(s_set)
        .div_exact(&ctx.parabolic_poincare_v2(r_set))
        .map_err(|_| AlgebraError::InvalidChain("non-free extension of invariant rings".into()))?;
    let top = (ratio.degree().unwrap_or(0) / 2) as u32;
    let r_gens = ctx.invariant_ring(r_set);
    let s_gens = ctx.invariant_ring(s_set);
    let mut basis = Vec::new();
    for d in 0..=top {
        let monos = monomials(ctx.nvars, d);
        let index: HashMap<Vec<u16>, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut ech = qlinalg::Echelon::new();
        for g in &s_gens {
            let gd = g.homogeneous_degree().unwrap();
            if gd > d {
                continue;
            }
            for h in gen_products(&r_gens, d - gd) {
                ech.insert(poly_vec(&(g * &h), &index));
            }
        }
        let mut found = 0i64;
        for cand in gen_products(&r_gens, d) {
            if ech.insert(poly_vec(&cand, &index)) {
                basis.push(cand);
                found += 1;
            }
        }
        if BigInt::from(found) != ratio.coeff(2 * d as i64) {
            return Err(AlgebraError::ValidationFailed(format!(
                "fiber basis count {found} in degree {d} disagrees with the Poincaré ratio"
            )));
        }
    }
    Ok(basis)
}

/// Write a homogeneous f ∈ R^{W_R} as Σ c_k b_k with c_k ∈ R^{W_S}, for the
/// free basis produced by fiber_basis.
pub fn expand_in_basis(
    ctx: &PolyCtx,
    f: &MultiPoly,
    s_set: &[usize],
    basis: &[MultiPoly],
) -> Result<Vec<MultiPoly>, AlgebraError> {
    let mut coeffs = vec![MultiPoly::zero(ctx.nvars); basis.len()];
    if f.is_zero() {
        return Ok(coeffs);
    }
    let d = f
        .homogeneous_degree()
        .ok_or_else(|| AlgebraError::ValidationFailed("inhomogeneous expansion input".into()))?;
    let s_gens = ctx.invariant_ring(s_set);
    let monos = monomials(ctx.nvars, d);
    let index: HashMap<Vec<u16>, usize> =
        monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    // unknowns: one per (basis element, S-invariant product of matching degree)
    let mut columns: Vec<Vec<BigRational>> = Vec::new();
    let mut column_polys: Vec<(usize, MultiPoly)> = Vec::new();
    for (k, b) in basis.iter().enumerate() {
        let bd = b.homogeneous_degree().unwrap();
        if bd > d {
            continue;
        }
        for p in gen_products(&s_gens, d - bd) {
            columns.push(poly_vec(&(&p * b), &index));
            column_polys.push((k, p));
        }
    }
    let rows = index.len();
    let a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let rhs = poly_vec(f, &index);
    let sol = qlinalg::solve(&a, &rhs)
        .ok_or_else(|| AlgebraError::ValidationFailed("expansion not in the span".into()))?;
    for ((k, p), lambda) in column_polys.iter().zip(&sol) {
        if !lambda.is_zero() {
            coeffs[*k] = &coeffs[*k] + &p.scale(lambda);
        }
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// graded bimodules
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBimodule {
    pub nvars: usize,
    pub deg: Vec<i64>,
    /// rho[j][a][b]: coefficient of basis b in (basis a) · x_j
    pub rho: Vec<Vec<Vec<MultiPoly>>>,
}

#[derive(Debug, Clone)]
pub struct BimoduleMorphism {
    pub deg: i64,
    /// mat[a][b]: coefficient of target basis b in the image of source basis a
    pub mat: Vec<Vec<MultiPoly>>,
}

pub fn mat_mul_poly(a: &[Vec<MultiPoly>], b: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let nvars = a[0][0].nvars();
    let mut out = vec![vec![MultiPoly::zero(nvars); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

pub fn mat_identity_poly(nvars: usize, r: usize) -> Vec<Vec<MultiPoly>> {
    let mut m = vec![vec![MultiPoly::zero(nvars); r]; r];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = MultiPoly::one(nvars);
    }
    m
}

impl GradedBimodule {
    /// R itself.
    pub fn regular(nvars: usize) -> Self {
        let rho = (0..nvars)
            .map(|j| vec![vec![MultiPoly::var(nvars, j)]])
            .collect();
        GradedBimodule { nvars, deg: vec![0], rho }
    }

    pub fn rank(&self) -> usize {
        self.deg.len()
    }

    /// The shift <k>: adds k to every basis degree.
    pub fn shifted(&self, k: i64) -> Self {
        let mut out = self.clone();
        for d in out.deg.iter_mut() {
            *d += k;
        }
        out
    }

    /// Σ_a v^{deg_a}.
    pub fn graded_rank(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero(Var::V);
        for &d in &self.deg {
            p = &p + &LaurentPoly::monomial(Var::V, d, 1);
        }
        p
    }

    /// The elementary bimodule B_s for the reflection swapping x_i, x_{i+1};
    /// left basis {1⊗1, 1⊗x_i} in degrees (-1, +1).
    pub fn b_s(ctx: &PolyCtx, s: usize) -> Self {
        let n = ctx.nvars;
        let i = ctx.simple_pos[s];
        let e = &ctx.var(i) + &ctx.var(i + 1);
        let p = &ctx.var(i) * &ctx.var(i + 1);
        let zero = MultiPoly::zero(n);
        let one = MultiPoly::one(n);
        let mut rho = Vec::with_capacity(n);
        for j in 0..n {
            let m = if j == i {
                vec![vec![zero.clone(), one.clone()], vec![p.neg(), e.clone()]]
            } else if j == i + 1 {
                vec![vec![e.clone(), one.neg()], vec![p.clone(), zero.clone()]]
            } else {
                let x = ctx.var(j);
                vec![vec![x.clone(), zero.clone()], vec![zero.clone(), x]]
            };
            rho.push(m);
        }
        GradedBimodule { nvars: n, deg: vec![-1, 1], rho }
    }

    /// Matrix of the right action of an arbitrary polynomial.
    pub fn act_matrix(&self, f: &MultiPoly) -> Vec<Vec<MultiPoly>> {
        let r = self.rank();
        let mut out = vec![vec![MultiPoly::zero(self.nvars); r]; r];
        for (m, c) in f.terms() {
            let mut term = mat_identity_poly(self.nvars, r);
            for (j, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = mat_mul_poly(&term, &self.rho[j]);
                }
            }
            for a in 0..r {
                for b in 0..r {
                    if !term[a][b].is_zero() {
                        out[a][b] = &out[a][b] + &term[a][b].scale(c);
                    }
                }
            }
        }
        out
    }

    /// Tensor product over R; basis pairs ordered left-factor major.
    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let (rm, rn) = (self.rank(), other.rank());
        let r = rm * rn;
        let mut deg = Vec::with_capacity(r);
        for a in 0..rm {
            for c in 0..rn {
                deg.push(self.deg[a] + other.deg[c]);
            }
        }
        let mut rho = Vec::with_capacity(self.nvars);
        for j in 0..self.nvars {
            let mut m = vec![vec![MultiPoly::zero(self.nvars); r]; r];
            for c in 0..rn {
                for d in 0..rn {
                    let f = &other.rho[j][c][d];
                    if f.is_zero() {
                        continue;
                    }
                    let block = self.act_matrix(f);
                    for a in 0..rm {
                        for ap in 0..rm {
                            if !block[a][ap].is_zero() {
                                m[a * rn + c][ap * rn + d] =
                                    &m[a * rn + c][ap * rn + d] + &block[a][ap];
                            }
                        }
                    }
                }
            }
            rho.push(m);
        }
        GradedBimodule { nvars: self.nvars, deg, rho }
    }

    /// Structural sanity: commuting right-action matrices and degree-homogeneous
    /// entries. Intended for assertions in tests and constructors.
    pub fn check(&self) -> Result<(), AlgebraError> {
        let r = self.rank();
        for j in 0..self.nvars {
            for a in 0..r {
                for b in 0..r {
                    let entry = &self.rho[j][a][b];
                    if entry.is_zero() {
                        continue;
                    }
                    let want = self.deg[a] + 2 - self.deg[b];
                    if want < 0 || want % 2 != 0 || entry.homogeneous_degree() != Some(want as u32 / 2) {
                        return Err(AlgebraError::ValidationFailed(format!(
                            "inhomogeneous right-action entry ({a},{b}) for x{}",
                            j + 1
                        )));
                    }
                }
            }
        }
        for j in 0..self.nvars {
            for k in j + 1..self.nvars {
                let jk = mat_mul_poly(&self.rho[j], &self.rho[k]);
                let kj = mat_mul_poly(&self.rho[k], &self.rho[j]);
                if jk != kj {
                    return Err(AlgebraError::ValidationFailed(format!(
                        "right actions of x{} and x{} do not commute",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Bott-Samelson bimodule of a word of simple reflections.
pub fn bs_bimodule(ctx: &PolyCtx, word: &[usize]) -> GradedBimodule {
    let mut m = GradedBimodule::regular(ctx.nvars);
    for &s in word {
        m = m.tensor(&GradedBimodule::b_s(ctx, s));
    }
    m
}

/// Dimension and basis of the space of degree-d bimodule morphisms M -> N
/// with entry degree at most `cutoff` (in x-degree).
pub fn hom_space(
    m: &GradedBimodule,
    n: &GradedBimodule,
    d: i64,
    cutoff: i64,
) -> Result<(usize, Vec<BimoduleMorphism>), AlgebraError> {
    assert_eq!(m.nvars, n.nvars);
    let nv = m.nvars;
    let (rm, rn) = (m.rank(), n.rank());
    // forced polynomial degree of each entry, or None for a forced zero
    let mut entry_deg = vec![vec![None; rn]; rm];
    let mut needed = 0i64;
    for a in 0..rm {
        for b in 0..rn {
            let g = m.deg[a] + d - n.deg[b];
            if g >= 0 && g % 2 == 0 {
                entry_deg[a][b] = Some((g / 2) as u32);
                needed = needed.max(g / 2);
            }
        }
    }
    if needed > cutoff {
        return Err(AlgebraError::CutoffTooSmall(needed));
    }
    // unknown layout: per entry, the monomial coefficients of its degree
    let mut offsets = vec![vec![usize::MAX; rn]; rm];
    let mut entry_monos: Vec<Vec<Vec<Vec<u16>>>> = vec![vec![Vec::new(); rn]; rm];
    let mut total = 0usize;
    for a in 0..rm {
        for b in 0..rn {
            if let Some(ed) = entry_deg[a][b] {
                let ms = monomials(nv, ed);
                offsets[a][b] = total;
                total += ms.len();
                entry_monos[a][b] = ms;
            }
        }
    }
    // constraints: (rho_M[j] · phi - phi · rho_N[j])[a][b] = 0 coefficientwise
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for j in 0..nv {
        for a in 0..rm {
            for b in 0..rn {
                // polynomial linear form: Σ over unknown entries
                // collect per-monomial rows lazily
                let mut row_map: HashMap<Vec<u16>, Vec<BigRational>> = HashMap::new();
                let add = |poly: &MultiPoly, phi_a: usize, phi_b: usize, sign: i64, row_map: &mut HashMap<Vec<u16>, Vec<BigRational>>| {
                    if offsets[phi_a][phi_b] == usize::MAX || poly.is_zero() {
                        return;
                    }
                    let base = offsets[phi_a][phi_b];
                    for (mi, mono) in entry_monos[phi_a][phi_b].iter().enumerate() {
                        // product of poly with the unknown monomial
                        for (pm, pc) in poly.terms() {
                            let key: Vec<u16> =
                                pm.0.iter().zip(mono).map(|(x, y)| x + y).collect();
                            let row = row_map
                                .entry(key)
                                .or_insert_with(|| vec![BigRational::zero(); total]);
                            let c = pc * BigRational::from(BigInt::from(sign));
                            row[base + mi] = &row[base + mi] + &c;
                        }
                    }
                };
                for ap in 0..rm {
                    let p = m.rho[j][a][ap].clone();
                    add(&p, ap, b, 1, &mut row_map);
                }
                for bp in 0..rn {
                    let p = n.rho[j][bp][b].clone();
                    add(&p, a, bp, -1, &mut row_map);
                }
                for (_, row) in row_map {
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let null = qlinalg::nullspace(rows, total);
    let mut basis = Vec::new();
    for v in &null {
        let mut mat = vec![vec![MultiPoly::zero(nv); rn]; rm];
        for a in 0..rm {
            for b in 0..rn {
                if offsets[a][b] == usize::MAX {
                    continue;
                }
                let base = offsets[a][b];
                for (mi, mono) in entry_monos[a][b].iter().enumerate() {
                    let c = &v[base + mi];
                    if !c.is_zero() {
                        mat[a][b] = &mat[a][b]
                            + &MultiPoly::monomial(nv, mono.clone(), c.clone());
                    }
                }
            }
        }
        basis.push(BimoduleMorphism { deg: d, mat });
    }
    Ok((null.len(), basis))
}

/// Character of a Bott-Samelson word: the product of the length-one
/// Kazhdan-Lusztig basis elements, in the v-form Hecke algebra.
pub fn hecke_character(h: &Hecke, word: &[usize]) -> Result<HeckeElem, AlgebraError> {
    let w = h.group();
    let mut out = HeckeElem::unit(w, Var::V);
    for &s in word {
        let kl = h.kl_basis(w.gen(s))?;
        out = h.mul(&out, &kl)?;
    }
    Ok(out)
}

/// Graded dimension of the coinvariant algebra R/(R^W_+), as a polynomial in v
/// with deg(x_i) = 2.
pub fn coinvariant_poincare(cartan: &CartanType) -> Result<LaurentPoly, AlgebraError> {
    let ctx = PolyCtx::new(cartan)?;
    let full: Vec<usize> = (0..cartan.rank()).collect();
    let basis = fiber_basis(&ctx, &[], &full)?;
    let mut p = LaurentPoly::zero(Var::V);
    for b in &basis {
        p = &p + &LaurentPoly::monomial(Var::V, 2 * b.homogeneous_degree().unwrap() as i64, 1);
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// singular bimodules over invariant subrings
// ---------------------------------------------------------------------------

/// A_{R1} ⊗_{A_{S1}} A_{R2} ⊗ … ⊗ A_{Rk} for an alternating chain
/// P ⊇ R1 ⊆ S1 ⊇ R2 ⊆ … ⊇ Rk ⊆ Q, viewed as an (A_P, A_Q)-bimodule and
/// represented free over A_P with right-action matrices for the A_Q generators.
#[derive(Debug, Clone)]
pub struct SingularBimodule {
    pub p_set: Vec<usize>,
    pub q_set: Vec<usize>,
    pub deg: Vec<i64>,
    /// one matrix per generator of A_Q, row convention as in GradedBimodule
    pub rho: Vec<Vec<Vec<MultiPoly>>>,
    pub q_gens: Vec<MultiPoly>,
}

impl SingularBimodule {
    pub fn new(ctx: &PolyCtx, chain: &[Vec<usize>]) -> Result<Self, AlgebraError> {
        if chain.len() < 3 || chain.len() % 2 == 0 {
            return Err(AlgebraError::InvalidChain(
                "chain must have odd length ≥ 3".into(),
            ));
        }
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
        for pair in chain.windows(2).enumerate() {
            let (idx, w) = pair;
            let ok = if idx % 2 == 0 {
                subset(&w[1], &w[0]) // P ⊇ R
            } else {
                subset(&w[0], &w[1]) // R ⊆ S
            };
            if !ok {
                return Err(AlgebraError::InvalidChain(format!(
                    "inclusion violated at position {idx}"
                )));
            }
        }
        let k = chain.len() / 2; // number of A_R factors
        let p_set = chain[0].clone();
        let q_set = chain[chain.len() - 1].clone();
        // factor i (1-based) = chain[2i-1], tensored over chain[2i-2]
        let mut fibers = Vec::with_capacity(k);
        for i in 0..k {
            fibers.push(fiber_basis(ctx, &chain[2 * i + 1], &chain[2 * i])?);
        }
        // basis tuples, left factor major
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for f in &fibers {
            let mut next = Vec::new();
            for t in &tuples {
                for j in 0..f.len() {
                    let mut t2 = t.clone();
                    t2.push(j);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let deg: Vec<i64> = tuples
            .iter()
            .map(|t| {
                t.iter()
                    .enumerate()
                    .map(|(i, &j)| 2 * fibers[i][j].homogeneous_degree().unwrap() as i64)
                    .sum()
            })
            .collect();
        let tuple_index: HashMap<Vec<usize>, usize> =
            tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let q_gens = ctx.invariant_ring(&q_set);
        let mut rho = Vec::with_capacity(q_gens.len());
        for g in &q_gens {
            let mut mat = vec![vec![MultiPoly::zero(ctx.nvars); tuples.len()]; tuples.len()];
            for (row, t) in tuples.iter().enumerate() {
                // push g through the factors right to left
                // contributions: (partial tuple tail, coefficient at current level)
                let mut pending: Vec<(Vec<usize>, MultiPoly)> =
                    vec![(Vec::new(), &fibers[k - 1][t[k - 1]] * g)];
                for level in (0..k).rev() {
                    let mut next = Vec::new();
                    for (tail, f) in pending {
                        let coeffs = expand_in_basis(ctx, &f, &chain[2 * level], &fibers[level])?;
                        for (j, c) in coeffs.into_iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut tail2 = vec![j];
                            tail2.extend(tail.iter().copied());
                            if level == 0 {
                                next.push((tail2, c));
                            } else {
                                next.push((tail2, &fibers[level - 1][t[level - 1]] * &c));
                            }
                        }
                    }
                    pending = next;
                }
                for (tail, c) in pending {
                    let col = tuple_index[&tail];
                    mat[row][col] = &mat[row][col] + &c;
                }
            }
            rho.push(mat);
        }
        let out = SingularBimodule { p_set, q_set, deg, rho, q_gens };
        out.check(ctx)?;
        // graded rank over A_P must match the product of Poincaré ratios
        let mut want = LaurentPoly::one(Var::V);
        for i in 0..k {
            let r = ctx
                .parabolic_poincare_v2(&chain[2 * i])
                .div_exact(&ctx.parabolic_poincare_v2(&chain[2 * i + 1]))
                .map_err(|_| AlgebraError::InvalidChain("non-free chain step".into()))?;
            want = &want * &r;
        }
        if out.graded_rank() != want {
            return Err(AlgebraError::ValidationFailed(
                "singular bimodule rank disagrees with Poincaré ratios".into(),
            ));
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.deg.len()
    }

    pub fn graded_rank(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero(Var::V);
        for &d in &self.deg {
            p = &p + &LaurentPoly::monomial(Var::V, d, 1);
        }
        p
    }

    fn check(&self, ctx: &PolyCtx) -> Result<(), AlgebraError> {
        let r = self.rank();
        for (gi, g) in self.q_gens.iter().enumerate() {
            let gd = 2 * g.homogeneous_degree().unwrap() as i64;
            for a in 0..r {
                for b in 0..r {
                    let entry = &self.rho[gi][a][b];
                    if entry.is_zero() {
                        continue;
                    }
                    let want = self.deg[a] + gd - self.deg[b];
                    if want < 0
                        || want % 2 != 0
                        || entry.homogeneous_degree() != Some(want as u32 / 2)
                    {
                        return Err(AlgebraError::ValidationFailed(
                            "inhomogeneous singular right-action entry".into(),
                        ));
                    }
                    // entries must be P-invariant
                    for s in &self.p_set {
                        if &ctx.act_simple(*s, entry) != entry {
                            return Err(AlgebraError::ValidationFailed(
                                "right-action entry not P-invariant".into(),
                            ));
                        }
                    }
                }
            }
        }
        for i in 0..self.q_gens.len() {
            for j in i + 1..self.q_gens.len() {
                if mat_mul_poly(&self.rho[i], &self.rho[j])
                    != mat_mul_poly(&self.rho[j], &self.rho[i])
                {
                    return Err(AlgebraError::ValidationFailed(
                        "singular right actions do not commute".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::WeylGroup;

    fn ctx(s: &str) -> PolyCtx {
        PolyCtx::from_type_str(s).unwrap()
    }

    #[test]
    fn demazure_basics() {
        let c = ctx("A2");
        let x1 = c.var(0);
        let x2 = c.var(1);
        assert_eq!(c.demazure(0, &x1), MultiPoly::one(3));
        assert_eq!(c.demazure(0, &x2), MultiPoly::from_int(3, -1));
        assert!(c.demazure(0, &(&x1 * &x2)).is_zero());
        // nil: ∂² = 0
        let f = &(&x1 * &x1) + &(&x2 * &(&x1 + &x2));
        assert!(c.demazure(0, &c.demazure(0, &f)).is_zero());
        // twisted Leibniz
        let g = &x2 * &x2;
        let lhs = c.demazure(0, &(&f * &g));
        let rhs = &(&c.demazure(0, &f) * &g) + &(&c.act_simple(0, &f) * &c.demazure(0, &g));
        assert_eq!(lhs, rhs);
        // braid relation on a sample
        let h = &(&f * &g) + &c.var(2);
        let a = c.demazure(0, &c.demazure(1, &c.demazure(0, &h)));
        let b = c.demazure(1, &c.demazure(0, &c.demazure(1, &h)));
        assert_eq!(a, b);
    }

    #[test]
    fn invariant_rings() {
        let c = ctx("A1");
        let gens = c.invariant_ring(&[0]);
        let x1 = c.var(0);
        let x2 = c.var(1);
        assert_eq!(gens, vec![&x1 + &x2, &x1 * &x2]);
        assert_eq!(c.blocks(&[]), vec![vec![0], vec![1]]);
    }

    #[test]
    fn coinvariants() {
        for (t, orders) in [("A1", 2u64), ("A2", 6), ("A3", 24)] {
            let cartan = CartanType::parse(t).unwrap();
            let p = coinvariant_poincare(&cartan).unwrap();
            let w = WeylGroup::build(cartan).unwrap();
            let mut want = LaurentPoly::zero(Var::V);
            for e in w.elements() {
                want = &want + &LaurentPoly::monomial(Var::V, 2 * w.len_idx(e.idx) as i64, 1);
            }
            assert_eq!(p, want);
            assert_eq!(p.eval_int(1), num_bigint::BigInt::from(orders));
        }
    }

    #[test]
    fn bs_ranks() {
        let c = ctx("A2");
        let m = bs_bimodule(&c, &[]);
        assert_eq!(m.graded_rank(), LaurentPoly::one(Var::V));
        let bs = GradedBimodule::b_s(&c, 0);
        bs.check().unwrap();
        assert_eq!(bs.graded_rank(), LaurentPoly::from_pairs(Var::V, &[(-1, 1), (1, 1)]));
        let m3 = bs_bimodule(&c, &[0, 1, 0]);
        m3.check().unwrap();
        let vv = LaurentPoly::from_pairs(Var::V, &[(-1, 1), (1, 1)]);
        assert_eq!(m3.graded_rank(), &(&vv * &vv) * &vv);
    }

    #[test]
    fn hom_spaces() {
        let c = ctx("A1");
        let r = GradedBimodule::regular(2);
        let (d0, _) = hom_space(&r, &r, 0, 4).unwrap();
        assert_eq!(d0, 1);
        let bs = GradedBimodule::b_s(&c, 0);
        let (d1, _) = hom_space(&bs, &bs, 0, 4).unwrap();
        assert_eq!(d1, 1);
        let (d2, basis) = hom_space(&r, &bs, 1, 4).unwrap();
        assert_eq!(d2, 1);
        // the generator must be a multiple of Δ = b2 - x_{i+1} b1
        let phi = &basis[0].mat[0];
        let ratio = phi[1].clone();
        assert!(ratio.is_constant());
        let delta0 = c.var(1).neg();
        assert_eq!(phi[0], delta0.scale(&ratio.constant_term()));
        assert!(matches!(
            hom_space(&r, &bs, 7, 1),
            Err(AlgebraError::CutoffTooSmall(_))
        ));
    }

    #[test]
    fn characters() {
        let cartan = CartanType::parse("A2").unwrap();
        let w = WeylGroup::build(cartan).unwrap();
        let h = Hecke::new(&w);
        let ch = hecke_character(&h, &[0]).unwrap();
        let kl = h.kl_basis(w.gen(0)).unwrap();
        assert_eq!(ch.render(&w), kl.render(&w));
        // graded rank equals the character evaluated at T_x -> v^{-2 l(x)}
        for word in [vec![0usize], vec![0, 1], vec![0, 1, 0]] {
            let ch = hecke_character(&h, &word).unwrap();
            let mut eval = LaurentPoly::zero(Var::V);
            for (x, c) in ch.terms() {
                eval = &eval + &c.shift(-2 * w.len_idx(x) as i64);
            }
            let ctx = ctx("A2");
            assert_eq!(eval, bs_bimodule(&ctx, &word).graded_rank());
        }
    }

    #[test]
    fn singular_chains() {
        let c = ctx("A1");
        // (∅ ⊇ ∅ ⊆ ∅): R itself
        let m = SingularBimodule::new(&c, &[vec![], vec![], vec![]]).unwrap();
        assert_eq!(m.rank(), 1);
        // (∅ ⊇ ∅ ⊆ {s}): R as (R, R^s)-bimodule, rank 1 over R
        let m = SingularBimodule::new(&c, &[vec![], vec![], vec![0]]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.q_gens.len(), 2);
        // ({s} ⊇ ∅ ⊆ {s}): R as R^s-bimodule, graded rank 1 + v²
        let m = SingularBimodule::new(&c, &[vec![0], vec![], vec![0]]).unwrap();
        assert_eq!(m.graded_rank(), LaurentPoly::from_pairs(Var::V, &[(0, 1), (2, 1)]));
        // bad chain
        assert!(matches!(
            SingularBimodule::new(&c, &[vec![], vec![0], vec![0]]),
            Err(AlgebraError::InvalidChain(_))
        ));
    }

    #[test]
    fn singular_a2_step() {
        let c = ctx("A2");
        // ({s1} ⊇ ∅ ⊆ {s2}) on A2: R as (R^{s1}, R^{s2})-bimodule, rank 1+v² over A_P
        let m = SingularBimodule::new(&c, &[vec![0], vec![], vec![1]]).unwrap();
        assert_eq!(m.graded_rank(), LaurentPoly::from_pairs(Var::V, &[(0, 1), (2, 1)]));
        // longer chain ({s1} ⊇ ∅ ⊆ {s1,s2} ⊇ ∅ ⊆ {s2})
        let m2 = SingularBimodule::new(
            &c,
            &[vec![0], vec![], vec![0, 1], vec![], vec![1]],
        )
        .unwrap();
        let pi_w = c.parabolic_poincare_v2(&[0, 1]);
        let pi_p = c.parabolic_poincare_v2(&[0]);
        assert_eq!(m2.graded_rank(), &pi_p * &pi_w);
    }
}
