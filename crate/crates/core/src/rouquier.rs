//! Bounded complexes of Bott-Samelson bimodules: Rouquier complexes for braid
//! generators, tensor products with Koszul signs, Gaussian elimination to
//! minimal complexes with exactly verified homotopy certificates, braid
//! checking and K0 classes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::hecke::{Hecke, HeckeElem};
use crate::laurent::{LaurentPoly, Var};
use crate::multipoly::MultiPoly;
use crate::soergel::{bs_bimodule, hecke_character, mat_mul_poly, GradedBimodule, PolyCtx};

pub type PolyMat = Vec<Vec<MultiPoly>>;

fn mat_zero(nvars: usize, rows: usize, cols: usize) -> PolyMat {
    vec![vec![MultiPoly::zero(nvars); cols]; rows]
}

fn mat_sub(a: &PolyMat, b: &PolyMat) -> PolyMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn mat_scale(a: &PolyMat, c: &BigRational) -> PolyMat {
    a.iter().map(|r| r.iter().map(|x| x.scale(c)).collect()).collect()
}

fn mat_is_zero(a: &PolyMat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Inverse of a homogeneous degree-0 morphism matrix, if it is invertible.
///
/// Entries are homogeneous, so degree-0 entries are constants; an invertible
/// graded map always admits a constant pivot in the remaining submatrix, and
/// Gauss-Jordan with constant pivots stays inside the polynomial ring.
fn try_invert_graded(a: &PolyMat, nvars: usize) -> Option<PolyMat> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Vec<Vec<MultiPoly>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { MultiPoly::one(nvars) } else { MultiPoly::zero(nvars) });
            }
            r
        })
        .collect();
    let mut row_of_col = vec![usize::MAX; n];
    let mut used_row = vec![false; n];
    for _ in 0..n {
        let mut pivot = None;
        'search: for i in 0..n {
            if used_row[i] {
                continue;
            }
            for j in 0..n {
                if row_of_col[j] == usize::MAX && aug[i][j].is_constant() && !aug[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let (pi, pj) = pivot?;
        let inv = BigRational::one() / aug[pi][pj].constant_term();
        for e in aug[pi].iter_mut() {
            *e = e.scale(&inv);
        }
        for r in 0..n {
            if r == pi || aug[r][pj].is_zero() {
                continue;
            }
            let m = aug[r][pj].clone();
            for c in 0..2 * n {
                let delta = &m * &aug[pi][c];
                aug[r][c] = &aug[r][c] - &delta;
            }
        }
        used_row[pi] = true;
        row_of_col[pj] = pi;
    }
    // row ops gave E·a = P (permutation) and E·I = R, so a⁻¹ = Pᵀ·R
    let mut out = mat_zero(nvars, n, n);
    for j in 0..n {
        out[j] = aug[row_of_col[j]][n..].to_vec();
    }
    let check = mat_mul_poly(a, &out);
    let id = crate::soergel::mat_identity_poly(nvars, n);
    if check == id {
        Some(out)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// sparse rational-polynomial matrices for flattened chain maps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct SpMat {
    pub rows: usize,
    pub cols: usize,
    /// per row: sorted (column, value) with nonzero values
    pub data: Vec<Vec<(usize, MultiPoly)>>,
}

impl SpMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SpMat { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, MultiPoly::one(nvars))]).collect();
        SpMat { rows: n, cols: n, data }
    }

    pub fn set(&mut self, i: usize, j: usize, v: MultiPoly) {
        if v.is_zero() {
            return;
        }
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => self.data[i][pos].1 = v,
            Err(pos) => self.data[i].insert(pos, (j, v)),
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &MultiPoly) {
        if v.is_zero() {
            return;
        }
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => {
                let s = &self.data[i][pos].1 + v;
                if s.is_zero() {
                    self.data[i].remove(pos);
                } else {
                    self.data[i][pos].1 = s;
                }
            }
            Err(pos) => self.data[i].insert(pos, (j, v.clone())),
        }
    }

    pub fn mul(&self, other: &SpMat) -> SpMat {
        assert_eq!(self.cols, other.rows);
        let mut out = SpMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, a) in &self.data[i] {
                for (j, b) in &other.data[*k] {
                    out.add_at(i, *j, &(a * b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &SpMat) -> SpMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..other.rows {
            for (j, v) in &other.data[i] {
                out.add_at(i, *j, v);
            }
        }
        out
    }

    pub fn sub(&self, other: &SpMat) -> SpMat {
        let mut neg = other.clone();
        for row in neg.data.iter_mut() {
            for e in row.iter_mut() {
                e.1 = e.1.neg();
            }
        }
        self.add(&neg)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn place_block(&mut self, r0: usize, c0: usize, block: &PolyMat) {
        for (i, row) in block.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    self.set(r0 + i, c0 + j, v.clone());
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// complexes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Summand {
    /// Bott-Samelson word; empty word is the regular bimodule R
    pub word: Vec<usize>,
    pub shift: i64,
    pub module: GradedBimodule,
}

impl Summand {
    pub fn new(ctx: &PolyCtx, word: Vec<usize>, shift: i64) -> Self {
        let module = bs_bimodule(ctx, &word).shifted(shift);
        Summand { word, shift, module }
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }
}

#[derive(Debug, Clone)]
pub struct BimoduleComplex {
    pub ctx: PolyCtx,
    pub min_deg: i64,
    pub terms: Vec<Vec<Summand>>,
    /// diff[i][src][tgt]: component matrix terms[i][src] -> terms[i+1][tgt]
    pub diff: Vec<Vec<Vec<PolyMat>>>,
}

impl BimoduleComplex {
    pub fn unit(ctx: &PolyCtx) -> Self {
        BimoduleComplex {
            ctx: ctx.clone(),
            min_deg: 0,
            terms: vec![vec![Summand::new(ctx, Vec::new(), 0)]],
            diff: vec![],
        }
    }

    /// Two-term Rouquier complex of a braid generator.
    pub fn rouquier(ctx: &PolyCtx, s: usize, positive: bool) -> Self {
        let n = ctx.nvars;
        let i = ctx.simple_pos[s];
        if positive {
            // [B_s -> R<-1>], B_s in homological degree 0
            let bs = Summand::new(ctx, vec![s], 0);
            let r = Summand::new(ctx, Vec::new(), -1);
            let d = vec![vec![MultiPoly::one(n)], vec![MultiPoly::var(n, i)]];
            BimoduleComplex {
                ctx: ctx.clone(),
                min_deg: 0,
                terms: vec![vec![bs], vec![r]],
                diff: vec![vec![vec![d]]],
            }
        } else {
            // [R<1> -> B_s], B_s in homological degree 0
            let r = Summand::new(ctx, Vec::new(), 1);
            let bs = Summand::new(ctx, vec![s], 0);
            let d = vec![vec![MultiPoly::var(n, i + 1).neg(), MultiPoly::one(n)]];
            BimoduleComplex {
                ctx: ctx.clone(),
                min_deg: -1,
                terms: vec![vec![r], vec![bs]],
                diff: vec![vec![vec![d]]],
            }
        }
    }

    /// Complex of a signed braid word, tensored left to right.
    pub fn braid(ctx: &PolyCtx, word: &[(usize, bool)]) -> Self {
        let mut c = Self::unit(ctx);
        for &(s, positive) in word {
            c = c.tensor(&Self::rouquier(ctx, s, positive));
        }
        c
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn term_rank(&self, i: usize) -> usize {
        self.terms[i].iter().map(|s| s.rank()).sum()
    }

    fn offsets(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.terms[i].len());
        let mut acc = 0;
        for s in &self.terms[i] {
            out.push(acc);
            acc += s.rank();
        }
        out
    }

    pub fn flat_degrees(&self, i: usize) -> Vec<i64> {
        self.terms[i].iter().flat_map(|s| s.module.deg.iter().copied()).collect()
    }

    pub fn flat_diff(&self, i: usize) -> SpMat {
        let mut m = SpMat::zero(self.term_rank(i), self.term_rank(i + 1));
        let src_off = self.offsets(i);
        let tgt_off = self.offsets(i + 1);
        for (a, row) in self.diff[i].iter().enumerate() {
            for (b, comp) in row.iter().enumerate() {
                m.place_block(src_off[a], tgt_off[b], comp);
            }
        }
        m
    }

    /// d² = 0 and every differential component is a degree-0 morphism.
    pub fn check(&self) -> Result<(), AlgebraError> {
        for i in 0..self.diff.len() {
            for (a, row) in self.diff[i].iter().enumerate() {
                for (b, comp) in row.iter().enumerate() {
                    let m = &self.terms[i][a].module;
                    let n = &self.terms[i + 1][b].module;
                    for (x, crow) in comp.iter().enumerate() {
                        for (y, entry) in crow.iter().enumerate() {
                            if entry.is_zero() {
                                continue;
                            }
                            let want = m.deg[x] - n.deg[y];
                            if want < 0
                                || want % 2 != 0
                                || entry.homogeneous_degree() != Some(want as u32 / 2)
                            {
                                return Err(AlgebraError::ValidationFailed(
                                    "differential entry not of internal degree zero".into(),
                                ));
                            }
                        }
                    }
                    for j in 0..self.ctx.nvars {
                        if mat_mul_poly(&m.rho[j], comp) != mat_mul_poly(comp, &n.rho[j]) {
                            return Err(AlgebraError::ValidationFailed(
                                "differential component is not a bimodule morphism".into(),
                            ));
                        }
                    }
                }
            }
        }
        for i in 0..self.diff.len().saturating_sub(1) {
            let prod = self.flat_diff(i).mul(&self.flat_diff(i + 1));
            if !prod.is_zero() {
                return Err(AlgebraError::ValidationFailed("d² ≠ 0".into()));
            }
        }
        Ok(())
    }

    /// Total complex of the double complex, with Koszul signs on the second
    /// factor's differential.
    pub fn tensor(&self, other: &Self) -> Self {
        let ctx = self.ctx.clone();
        let n = ctx.nvars;
        let min_deg = self.min_deg + other.min_deg;
        let ni = self.nterms();
        let nj = other.nterms();
        let nk = ni + nj - 1;
        // summand layout per total degree: (i, a, b) with i + j = k
        let mut layout: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); nk];
        let mut terms: Vec<Vec<Summand>> = vec![Vec::new(); nk];
        for i in 0..ni {
            for j in 0..nj {
                let k = i + j;
                for (a, sa) in self.terms[i].iter().enumerate() {
                    for (b, sb) in other.terms[j].iter().enumerate() {
                        let mut word = sa.word.clone();
                        word.extend_from_slice(&sb.word);
                        let module = sa.module.tensor(&sb.module);
                        layout[k].push((i, a, b));
                        terms[k].push(Summand { word, shift: sa.shift + sb.shift, module });
                    }
                }
            }
        }
        let mut diff: Vec<Vec<Vec<PolyMat>>> = Vec::with_capacity(nk.saturating_sub(1));
        for k in 0..nk.saturating_sub(1) {
            let mut rows = Vec::with_capacity(layout[k].len());
            for (src_pos, &(i, a, b)) in layout[k].iter().enumerate() {
                let j = k - i;
                let src = &terms[k][src_pos];
                let mut row = Vec::with_capacity(layout[k + 1].len());
                for (tgt_pos, &(i2, a2, b2)) in layout[k + 1].iter().enumerate() {
                    let tgt = &terms[k + 1][tgt_pos];
                    let mut comp = mat_zero(n, src.rank(), tgt.rank());
                    if i2 == i + 1 && b2 == b {
                        // d_C ⊗ id
                        let phi = &self.diff[i][a][a2];
                        let rb = other.terms[j][b].rank();
                        for x in 0..phi.len() {
                            for xp in 0..phi[0].len() {
                                if phi[x][xp].is_zero() {
                                    continue;
                                }
                                for y in 0..rb {
                                    comp[x * rb + y][xp * rb + y] =
                                        &comp[x * rb + y][xp * rb + y] + &phi[x][xp];
                                }
                            }
                        }
                    } else if i2 == i && a2 == a {
                        // (-1)^i id ⊗ d_D: coefficients pass through the left
                        // factor as right multiplication
                        let psi = &other.diff[j][b][b2];
                        let amod = &self.terms[i][a].module;
                        let ra = amod.rank();
                        let rb2 = other.terms[j + 1][b2].rank();
                        let hom_i = self.min_deg + i as i64;
                        let sign = if hom_i.rem_euclid(2) == 0 {
                            BigRational::one()
                        } else {
                            -BigRational::one()
                        };
                        for y in 0..psi.len() {
                            for yp in 0..psi[0].len() {
                                if psi[y][yp].is_zero() {
                                    continue;
                                }
                                let act = amod.act_matrix(&psi[y][yp]);
                                for x in 0..ra {
                                    for xp in 0..ra {
                                        if act[x][xp].is_zero() {
                                            continue;
                                        }
                                        comp[x * psi.len() + y][xp * rb2 + yp] = &comp
                                            [x * psi.len() + y][xp * rb2 + yp]
                                            + &act[x][xp].scale(&sign);
                                    }
                                }
                            }
                        }
                    }
                    row.push(comp);
                }
                rows.push(row);
            }
            diff.push(rows);
        }
        BimoduleComplex { ctx, min_deg, terms, diff }
    }
}

// ---------------------------------------------------------------------------
// homotopy certificates and Gaussian elimination
// ---------------------------------------------------------------------------

/// Exactly verifiable witness of a homotopy equivalence C ≃ D. The maps are
/// stored flattened per homological degree over the union range.
#[derive(Debug, Clone)]
pub struct HomotopyCertificate {
    pub lo: i64,
    /// phi[k]: C_k -> D_k
    pub phi: Vec<SpMat>,
    /// psi[k]: D_k -> C_k
    pub psi: Vec<SpMat>,
    /// h_c[k]: C_{k+1} -> C_k with ψφ - id = d h + h d
    pub h_c: Vec<SpMat>,
    /// h_d[k]: D_{k+1} -> D_k with φψ - id = d h + h d
    pub h_d: Vec<SpMat>,
}

fn ranks_over(c: &BimoduleComplex, lo: i64, len: usize) -> Vec<usize> {
    (0..len)
        .map(|k| {
            let deg = lo + k as i64;
            let idx = deg - c.min_deg;
            if idx < 0 || idx as usize >= c.nterms() {
                0
            } else {
                c.term_rank(idx as usize)
            }
        })
        .collect()
}

fn diffs_over(c: &BimoduleComplex, lo: i64, len: usize) -> Vec<SpMat> {
    let ranks = ranks_over(c, lo, len);
    (0..len - 1)
        .map(|k| {
            let deg = lo + k as i64;
            let idx = deg - c.min_deg;
            if idx >= 0 && (idx as usize) + 1 < c.nterms() {
                c.flat_diff(idx as usize)
            } else {
                SpMat::zero(ranks[k], ranks[k + 1])
            }
        })
        .collect()
}

impl HomotopyCertificate {
    pub fn identity(c: &BimoduleComplex) -> Self {
        let len = c.nterms();
        let nv = c.ctx.nvars;
        let phi: Vec<SpMat> = (0..len)
            .map(|k| SpMat::identity(c.term_rank(k), nv))
            .collect();
        let h: Vec<SpMat> = (0..len.saturating_sub(1))
            .map(|k| SpMat::zero(c.term_rank(k + 1), c.term_rank(k)))
            .collect();
        HomotopyCertificate { lo: c.min_deg, phi: phi.clone(), psi: phi, h_c: h.clone(), h_d: h }
    }

    /// Verify every identity exactly; errors name the first failure.
    pub fn verify(&self, c: &BimoduleComplex, d: &BimoduleComplex) -> Result<(), AlgebraError> {
        let len = self.phi.len();
        let dc = diffs_over(c, self.lo, len);
        let dd = diffs_over(d, self.lo, len);
        let rc = ranks_over(c, self.lo, len);
        let rd = ranks_over(d, self.lo, len);
        let nv = c.ctx.nvars;
        let fail = |what: &str| Err(AlgebraError::ValidationFailed(format!("certificate: {what}")));
        for k in 0..len {
            if self.phi[k].rows != rc[k] || self.phi[k].cols != rd[k] {
                return fail("phi shape");
            }
            if self.psi[k].rows != rd[k] || self.psi[k].cols != rc[k] {
                return fail("psi shape");
            }
        }
        for k in 0..len - 1 {
            if self.dc_chain(&dc, &dd, k) {
                return fail("phi is not a chain map");
            }
            if self.psi[k].mul(&dc[k]) != dd[k].mul(&self.psi[k + 1]) {
                return fail("psi is not a chain map");
            }
        }
        for k in 0..len {
            let mut lhs = self.phi[k].mul(&self.psi[k]).sub(&SpMat::identity(rc[k], nv));
            if k < len - 1 {
                lhs = lhs.sub(&dc[k].mul(&self.h_c[k]));
            }
            if k > 0 {
                lhs = lhs.sub(&self.h_c[k - 1].mul(&dc[k - 1]));
            }
            if !lhs.is_zero() {
                return fail("ψφ - id ≠ dh + hd on the source");
            }
            let mut rhs = self.psi[k].mul(&self.phi[k]).sub(&SpMat::identity(rd[k], nv));
            if k < len - 1 {
                rhs = rhs.sub(&dd[k].mul(&self.h_d[k]));
            }
            if k > 0 {
                rhs = rhs.sub(&self.h_d[k - 1].mul(&dd[k - 1]));
            }
            if !rhs.is_zero() {
                return fail("φψ - id ≠ dh + hd on the target");
            }
        }
        Ok(())
    }

    fn dc_chain(&self, dc: &[SpMat], dd: &[SpMat], k: usize) -> bool {
        dc[k].mul(&self.phi[k + 1]) != self.phi[k].mul(&dd[k])
    }
}

/// Reduce to a minimal complex: repeatedly split Bott-Samelson summands with an
/// adjacent repeated letter and cancel scalar-identity differential
/// components between identically tagged summands. Returns the minimal complex
/// and a certificate against the input.
pub fn gaussian_eliminate(
    c: &BimoduleComplex,
) -> Result<(BimoduleComplex, HomotopyCertificate), AlgebraError> {
    let mut cur = c.clone();
    let nv = c.ctx.nvars;
    let len = c.nterms();
    let mut cert = HomotopyCertificate::identity(c);
    loop {
        if let Some((i, a, b, alpha_inv)) = find_cancellation(&cur) {
            let (next, phi_s, psi_s, h_s) = eliminate_pair(&cur, i, a, b, &alpha_inv);
            compose_step(&mut cert, &phi_s, &psi_s, &h_s, nv, len);
            cur = next;
            continue;
        }
        if let Some((i, a, pos)) = find_splittable(&cur) {
            let (next, phi_s, psi_s) = split_summand(&cur, i, a, pos);
            let h_s: Vec<SpMat> = (0..len.saturating_sub(1))
                .map(|k| SpMat::zero(cur_rank(&cur, k + 1), cur_rank(&cur, k)))
                .collect();
            compose_step(&mut cert, &phi_s, &psi_s, &h_s, nv, len);
            cur = next;
            continue;
        }
        break;
    }
    Ok((cur, cert))
}

fn cur_rank(c: &BimoduleComplex, k: usize) -> usize {
    if k < c.nterms() {
        c.term_rank(k)
    } else {
        0
    }
}

fn compose_step(
    cert: &mut HomotopyCertificate,
    phi_s: &[SpMat],
    psi_s: &[SpMat],
    h_s: &[SpMat],
    _nv: usize,
    len: usize,
) {
    // h on the original complex picks up the step homotopy conjugated by the
    // accumulated maps
    for k in 0..len - 1 {
        let lift = cert.phi[k + 1].mul(&h_s[k]).mul(&cert.psi[k]);
        cert.h_c[k] = cert.h_c[k].add(&lift);
    }
    for k in 0..len {
        cert.phi[k] = cert.phi[k].mul(&phi_s[k]);
        cert.psi[k] = psi_s[k].mul(&cert.psi[k]);
    }
    // pure eliminations and splittings satisfy φψ = id on the reduced side,
    // so h_d stays zero; shapes must track the shrinking target
    for k in 0..len - 1 {
        cert.h_d[k] = SpMat::zero(cert.psi[k + 1].rows, cert.psi[k].rows);
    }
}

/// Find (level, source summand, target summand, α⁻¹) with an eliminable
/// component: square with matching degree multisets and invertible.
fn find_cancellation(c: &BimoduleComplex) -> Option<(usize, usize, usize, PolyMat)> {
    for i in 0..c.diff.len() {
        for (a, row) in c.diff[i].iter().enumerate() {
            for (b, comp) in row.iter().enumerate() {
                let sa = &c.terms[i][a];
                let sb = &c.terms[i + 1][b];
                if sa.rank() != sb.rank() {
                    continue;
                }
                let mut da = sa.module.deg.clone();
                let mut db = sb.module.deg.clone();
                da.sort_unstable();
                db.sort_unstable();
                if da != db {
                    continue;
                }
                if let Some(inv) = try_invert_graded(comp, c.ctx.nvars) {
                    return Some((i, a, b, inv));
                }
            }
        }
    }
    None
}

fn find_splittable(c: &BimoduleComplex) -> Option<(usize, usize, usize)> {
    for (i, term) in c.terms.iter().enumerate() {
        for (a, s) in term.iter().enumerate() {
            for pos in 0..s.word.len().saturating_sub(1) {
                if s.word[pos] == s.word[pos + 1] {
                    return Some((i, a, pos));
                }
            }
        }
    }
    None
}

/// Remove summand a of term i and summand b of term i+1 along an invertible
/// scalar component; returns the reduced complex and flattened step maps.
fn eliminate_pair(
    c: &BimoduleComplex,
    i: usize,
    a: usize,
    b: usize,
    alpha_inv: &PolyMat,
) -> (BimoduleComplex, Vec<SpMat>, Vec<SpMat>, Vec<SpMat>) {
    let nv = c.ctx.nvars;
    let len = c.nterms();
    let mut next = c.clone();
    // updated differential at level i among survivors: δ - γ α⁻¹ β
    let mut new_rows = Vec::new();
    for (x, row) in c.diff[i].iter().enumerate() {
        if x == a {
            continue;
        }
        let gamma_ainv = mat_mul_poly(&row[b], alpha_inv);
        let mut new_row = Vec::new();
        for (y, comp) in row.iter().enumerate() {
            if y == b {
                continue;
            }
            let beta = &c.diff[i][a][y];
            let corr = mat_mul_poly(&gamma_ainv, beta);
            new_row.push(mat_sub(comp, &corr));
        }
        new_rows.push(new_row);
    }
    next.diff[i] = new_rows;
    next.terms[i].remove(a);
    next.terms[i + 1].remove(b);
    if i > 0 {
        for row in next.diff[i - 1].iter_mut() {
            row.remove(a);
        }
    }
    if i + 1 < c.diff.len() {
        next.diff[i + 1].remove(b);
    }
    // flattened step maps
    let off_i = c.offsets(i);
    let off_i1 = c.offsets(i + 1);
    let ra = c.terms[i][a].rank();
    let mut phi = Vec::with_capacity(len);
    let mut psi = Vec::with_capacity(len);
    let mut h = Vec::with_capacity(len - 1);
    for k in 0..len {
        let big = c.term_rank(k);
        let small = next.term_rank(k);
        if k != i && k != i + 1 {
            phi.push(SpMat::identity(big, nv));
            psi.push(SpMat::identity(big, nv));
            continue;
        }
        let (drop, offs) = if k == i { (a, &off_i) } else { (b, &off_i1) };
        let dropped_rank = c.terms[k][drop].rank();
        // survivor index map: old flat row -> new flat row
        let mut p = SpMat::zero(big, small);
        let mut incl = SpMat::zero(small, big);
        let mut newpos = 0usize;
        for (s, off) in offs.iter().enumerate() {
            if s == drop {
                continue;
            }
            for r in 0..c.terms[k][s].rank() {
                p.set(off + r, newpos, MultiPoly::one(nv));
                incl.set(newpos, off + r, MultiPoly::one(nv));
                newpos += 1;
            }
        }
        if k == i {
            // π_k: project out A; ι_k: x ↦ (-x γ α⁻¹, x)
            let mut iota = incl.clone();
            for (x, _) in c.terms[i].iter().enumerate() {
                if x == a {
                    continue;
                }
                let corr = mat_mul_poly(&c.diff[i][x][b], alpha_inv); // X -> A
                for (r, grow) in corr.iter().enumerate() {
                    for (s, val) in grow.iter().enumerate() {
                        if val.is_zero() {
                            continue;
                        }
                        // locate the new flat row of (x, r)
                        let old_flat = off_i[x] + r;
                        let new_flat = flat_after_drop(c, k, drop, old_flat);
                        iota.add_at(new_flat, off_i[a] + s, &val.neg());
                    }
                }
            }
            phi.push(p);
            psi.push(iota);
        } else {
            // π_{k+1}: b ↦ -α⁻¹ β into survivors, y ↦ y; ι: y ↦ (0, y)
            let mut proj = p;
            for (y, _) in c.terms[i + 1].iter().enumerate() {
                if y == b {
                    continue;
                }
                let corr = mat_mul_poly(alpha_inv, &c.diff[i][a][y]); // B -> Y
                for (r, brow) in corr.iter().enumerate() {
                    for (s, val) in brow.iter().enumerate() {
                        if val.is_zero() {
                            continue;
                        }
                        let old_tgt = off_i1[y] + s;
                        let new_tgt = flat_after_drop(c, k, drop, old_tgt);
                        proj.add_at(off_i1[b] + r, new_tgt, &val.neg());
                    }
                }
            }
            phi.push(proj);
            psi.push(incl);
        }
    }
    for k in 0..len - 1 {
        let mut hk = SpMat::zero(c.term_rank(k + 1), c.term_rank(k));
        if k == i {
            for r in 0..ra {
                for s in 0..ra {
                    if !alpha_inv[r][s].is_zero() {
                        hk.set(off_i1[b] + r, off_i[a] + s, alpha_inv[r][s].neg());
                    }
                }
            }
        }
        h.push(hk);
    }
    (next, phi, psi, h)
}

fn flat_after_drop(c: &BimoduleComplex, k: usize, drop: usize, old_flat: usize) -> usize {
    let offs = c.offsets(k);
    let dropped = c.terms[k][drop].rank();
    if old_flat >= offs[drop] + dropped {
        old_flat - dropped
    } else {
        assert!(old_flat < offs[drop] || old_flat >= offs[drop] + dropped);
        old_flat
    }
}

/// Split summand a of term i at an adjacent repeated letter:
/// BS(..ss..) ≅ BS(..s..)⟨-1⟩ ⊕ BS(..s..)⟨+1⟩ along constant matrices.
fn split_summand(
    c: &BimoduleComplex,
    i: usize,
    a: usize,
    pos: usize,
) -> (BimoduleComplex, Vec<SpMat>, Vec<SpMat>) {
    let ctx = &c.ctx;
    let nv = ctx.nvars;
    let len = c.nterms();
    let old = &c.terms[i][a];
    let mut word = old.word.clone();
    word.remove(pos + 1);
    let r_pre = 1usize << pos;
    let r_post = 1usize << (old.word.len() - pos - 2);
    let minus = Summand::new(ctx, word.clone(), old.shift - 1);
    let plus = Summand::new(ctx, word.clone(), old.shift + 1);
    let new_rank = minus.rank();
    // index maps old -> (which half, new index): middle index m in 0..4 over
    // basis (b1⊗b1, b1⊗b2, b2⊗b1, b2⊗b2); m in {0,1} is the ⟨-1⟩ copy
    let sel = |m: usize| -> (usize, usize) { (m / 2, m % 2) };
    let old_index = |x: usize, m: usize, y: usize| (x * 4 + m) * r_post + y;
    let new_index = |x: usize, mp: usize, y: usize| (x * 2 + mp) * r_post + y;
    // projection (old -> minus ⊕ plus) and inclusion as constant matrices
    let mut proj = vec![mat_zero(nv, old.rank(), new_rank), mat_zero(nv, old.rank(), new_rank)];
    let mut incl = vec![mat_zero(nv, new_rank, old.rank()), mat_zero(nv, new_rank, old.rank())];
    for x in 0..r_pre {
        for m in 0..4 {
            let (half, mp) = sel(m);
            for y in 0..r_post {
                proj[half][old_index(x, m, y)][new_index(x, mp, y)] = MultiPoly::one(nv);
                incl[half][new_index(x, mp, y)][old_index(x, m, y)] = MultiPoly::one(nv);
            }
        }
    }
    let mut next = c.clone();
    next.terms[i].remove(a);
    let minus_pos = next.terms[i].len();
    next.terms[i].push(minus);
    next.terms[i].push(plus);
    // outgoing components
    if i < c.diff.len() {
        let row_a = next.diff[i].remove(a);
        let minus_row: Vec<PolyMat> = row_a.iter().map(|comp| mat_mul_poly(&incl[0], comp)).collect();
        let plus_row: Vec<PolyMat> = row_a.iter().map(|comp| mat_mul_poly(&incl[1], comp)).collect();
        next.diff[i].push(minus_row);
        next.diff[i].push(plus_row);
    }
    // incoming components
    if i > 0 {
        for row in next.diff[i - 1].iter_mut() {
            let comp = row.remove(a);
            row.push(mat_mul_poly(&comp, &proj[0]));
            row.push(mat_mul_poly(&comp, &proj[1]));
        }
    }
    // flattened iso maps
    let mut phi = Vec::with_capacity(len);
    let mut psi = Vec::with_capacity(len);
    for k in 0..len {
        if k != i {
            let r = c.term_rank(k);
            phi.push(SpMat::identity(r, nv));
            psi.push(SpMat::identity(r, nv));
            continue;
        }
        let big = c.term_rank(k);
        let small = next.term_rank(k);
        let old_offs = c.offsets(k);
        let new_offs = next.offsets(k);
        let mut f = SpMat::zero(big, small);
        let mut g = SpMat::zero(small, big);
        // surviving summands keep their basis; indices shifted by removal
        let mut newpos = 0usize;
        for (s, off) in old_offs.iter().enumerate() {
            if s == a {
                continue;
            }
            for r in 0..c.terms[k][s].rank() {
                f.set(off + r, new_offs[newpos] + r, MultiPoly::one(nv));
                g.set(new_offs[newpos] + r, off + r, MultiPoly::one(nv));
            }
            newpos += 1;
        }
        for half in 0..2 {
            let tgt = new_offs[minus_pos + half];
            for r in 0..old.rank() {
                for s2 in 0..new_rank {
                    let v = &proj[half][r][s2];
                    if !v.is_zero() {
                        f.set(old_offs[a] + r, tgt + s2, v.clone());
                    }
                    let w = &incl[half][s2][r];
                    if !w.is_zero() {
                        g.set(tgt + s2, old_offs[a] + r, w.clone());
                    }
                }
            }
        }
        phi.push(f);
        psi.push(g);
    }
    (next, phi, psi)
}

// ---------------------------------------------------------------------------
// braid certification and K0
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum BraidOutcome {
    /// certificate that lhs ⊗ rhs⁻¹ is homotopy equivalent to the unit complex
    Certified(HomotopyCertificate, BimoduleComplex),
    NotEquivalent(BimoduleComplex),
}

/// Signed inverse of a braid word.
pub fn inverse_word(word: &[(usize, bool)]) -> Vec<(usize, bool)> {
    word.iter().rev().map(|&(s, p)| (s, !p)).collect()
}

pub fn braid_certify(
    ctx: &PolyCtx,
    lhs: &[(usize, bool)],
    rhs: &[(usize, bool)],
) -> Result<BraidOutcome, AlgebraError> {
    let mut word = lhs.to_vec();
    word.extend(inverse_word(rhs));
    let c = BimoduleComplex::braid(ctx, &word);
    c.check()?;
    let (min, cert) = gaussian_eliminate(&c)?;
    min.check()?;
    cert.verify(&c, &min)?;
    let is_unit = {
        let mut summands = Vec::new();
        for (k, t) in min.terms.iter().enumerate() {
            for s in t {
                summands.push((min.min_deg + k as i64, s.word.clone(), s.shift));
            }
        }
        summands == vec![(0i64, Vec::new(), 0i64)]
    };
    if is_unit {
        Ok(BraidOutcome::Certified(cert, c))
    } else {
        Ok(BraidOutcome::NotEquivalent(min))
    }
}

/// Alternating sum of summand characters with shifts mapped to v-powers.
pub fn k0_class(c: &BimoduleComplex, h: &Hecke) -> Result<HeckeElem, AlgebraError> {
    let w = h.group();
    let mut out = HeckeElem::zero(w.id(), Var::V);
    for (k, term) in c.terms.iter().enumerate() {
        let hom = c.min_deg + k as i64;
        for s in term {
            let ch = hecke_character(h, &s.word)?;
            let mut coeff = LaurentPoly::monomial(Var::V, s.shift, 1);
            if hom.rem_euclid(2) == 1 {
                coeff = coeff.neg();
            }
            out = out.add(&ch.scale(&coeff));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CartanType, WeylGroup};

    fn ctx(s: &str) -> PolyCtx {
        PolyCtx::from_type_str(s).unwrap()
    }

    #[test]
    fn rouquier_two_term() {
        let c = ctx("A2");
        for positive in [true, false] {
            let f = BimoduleComplex::rouquier(&c, 0, positive);
            f.check().unwrap();
        }
    }

    #[test]
    fn tensor_d_squared() {
        let c = ctx("A2");
        let f1 = BimoduleComplex::rouquier(&c, 0, true);
        let f2 = BimoduleComplex::rouquier(&c, 1, true);
        let t = f1.tensor(&f2);
        t.check().unwrap();
        let u = BimoduleComplex::unit(&c);
        let tu = t.tensor(&u);
        assert_eq!(tu.nterms(), t.nterms());
        tu.check().unwrap();
        let tt = f1.tensor(&BimoduleComplex::rouquier(&c, 0, false));
        tt.check().unwrap();
    }

    #[test]
    fn cone_of_identity_collapses() {
        let c = ctx("A1");
        let r = Summand::new(&c, Vec::new(), 0);
        let cone = BimoduleComplex {
            ctx: c.clone(),
            min_deg: 0,
            terms: vec![vec![r.clone()], vec![r]],
            diff: vec![vec![vec![vec![vec![MultiPoly::one(2)]]]]],
        };
        cone.check().unwrap();
        let (min, cert) = gaussian_eliminate(&cone).unwrap();
        assert!(min.terms.iter().all(|t| t.is_empty()));
        cert.verify(&cone, &min).unwrap();
    }

    #[test]
    fn inverse_pair_is_unit() {
        let c = ctx("A2");
        let out = braid_certify(&c, &[(0, true)], &[(0, true)]).unwrap();
        assert!(matches!(out, BraidOutcome::Certified(..)));
        // σ1 vs σ2 are not equivalent
        let out = braid_certify(&c, &[(0, true)], &[(1, true)]).unwrap();
        assert!(matches!(out, BraidOutcome::NotEquivalent(_)));
    }

    #[test]
    fn braid_relation_a2() {
        let c = ctx("A2");
        let lhs = [(0, true), (1, true), (0, true)];
        let rhs = [(1, true), (0, true), (1, true)];
        let out = braid_certify(&c, &lhs, &rhs).unwrap();
        match out {
            BraidOutcome::Certified(cert, complex) => {
                // re-verify independently
                let (min, _) = gaussian_eliminate(&complex).unwrap();
                cert.verify(&complex, &min).unwrap();
            }
            BraidOutcome::NotEquivalent(m) => {
                panic!("braid relation refuted: {} terms", m.nterms())
            }
        }
    }

    #[test]
    fn commuting_generators_a3() {
        let c = ctx("A3");
        let out = braid_certify(&c, &[(0, true), (2, true)], &[(2, true), (0, true)]).unwrap();
        assert!(matches!(out, BraidOutcome::Certified(..)));
    }

    #[test]
    fn k0_multiplicative_and_invariant() {
        let cartan = CartanType::parse("A2").unwrap();
        let w = WeylGroup::build(cartan).unwrap();
        let h = Hecke::new(&w);
        let c = ctx("A2");
        let f1 = BimoduleComplex::rouquier(&c, 0, true);
        let f1i = BimoduleComplex::rouquier(&c, 0, false);
        let k1 = k0_class(&f1, &h).unwrap();
        let k1i = k0_class(&f1i, &h).unwrap();
        let prod = h.mul(&k1, &k1i).unwrap();
        assert_eq!(prod.render(&w), HeckeElem::unit(&w, Var::V).render(&w));
        // multiplicativity on generator pairs
        for (s, t) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
            let fs = BimoduleComplex::rouquier(&c, s, true);
            let ft = BimoduleComplex::rouquier(&c, t, true);
            let tensor = fs.tensor(&ft);
            let lhs = k0_class(&tensor, &h).unwrap();
            let rhs = h
                .mul(&k0_class(&fs, &h).unwrap(), &k0_class(&ft, &h).unwrap())
                .unwrap();
            assert_eq!(lhs.render(&w), rhs.render(&w));
            // invariance under elimination
            let (min, _) = gaussian_eliminate(&tensor).unwrap();
            let after = k0_class(&min, &h).unwrap();
            assert_eq!(after.render(&w), lhs.render(&w));
        }
    }
}
