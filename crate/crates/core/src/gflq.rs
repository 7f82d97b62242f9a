//! Independent finite-field oracle: GL_n/SL_n over small fields, Bruhat and
//! parabolic double cosets, symmetric pairs, and exact convolution of invariant
//! functions. Everything here is brute-force counting on explicit matrices;
//! nothing depends on the Hecke/Schur modules it is used to validate.

use std::collections::HashMap;

use crate::error::AlgebraError;

// ---------------------------------------------------------------------------
// finite fields, q <= 9, via explicit tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct FiniteField {
    pub q: usize,
    pub p: usize,
    pub d: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self, AlgebraError> {
        let (p, d, poly): (usize, usize, &[usize]) = match q {
            2 | 3 | 5 | 7 => (q, 1, &[]),
            4 => (2, 2, &[1, 1]),      // x^2 = x + 1
            8 => (2, 3, &[1, 1, 0]),   // x^3 = x + 1
            9 => (3, 2, &[2, 0]),      // x^2 = -1 = 2
            _ => return Err(AlgebraError::UnsupportedType(format!("q = {q}"))),
        };
        // elements are base-p digit strings of length d, encoded as 0..q
        let digits = |a: usize| -> Vec<usize> {
            let mut v = Vec::with_capacity(d);
            let mut a = a;
            for _ in 0..d {
                v.push(a % p);
                a /= p;
            }
            v
        };
        let encode = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &x| acc * p + x) };
        let mut add = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s) as u8;
            }
        }
        // polynomial multiplication with reduction x^d = poly
        let poly_mul = |a: usize, b: usize| -> usize {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0usize; 2 * d];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for k in (d..2 * d).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (off, &r) in poly.iter().enumerate() {
                    prod[k - d + off] = (prod[k - d + off] + c * r) % p;
                }
            }
            encode(&prod[..d])
        };
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                mul[a * q + b] = poly_mul(a, b) as u8;
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8;
            }
        }
        let f = FiniteField { q, p, d, add, mul, neg, inv };
        f.verify_axioms();
        Ok(f)
    }

    fn verify_axioms(&self) {
        let q = self.q;
        for a in 0..q {
            assert_eq!(self.add(a, 0), a);
            assert_eq!(self.mul(a, 1), a);
            if a != 0 {
                assert_eq!(self.mul(a, self.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(self.add(a, b), self.add(b, a));
                assert_eq!(self.mul(a, b), self.mul(b, a));
                for c in 0..q {
                    assert_eq!(self.mul(a, self.add(b, c)), self.add(self.mul(a, b), self.mul(a, c)));
                    assert_eq!(self.add(a, self.add(b, c)), self.add(self.add(a, b), c));
                    assert_eq!(self.mul(a, self.mul(b, c)), self.mul(self.mul(a, b), c));
                }
            }
        }
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0);
        self.inv[a] as usize
    }

    /// Quadratic-character value of a nonzero element (+1 square, -1 non-square);
    /// requires odd q.
    pub fn legendre(&self, a: usize) -> i64 {
        assert!(self.p != 2 && a != 0);
        let squares: Vec<bool> = {
            let mut s = vec![false; self.q];
            for x in 1..self.q {
                s[self.mul(x, x)] = true;
            }
            s
        };
        if squares[a] {
            1
        } else {
            -1
        }
    }
}

// ---------------------------------------------------------------------------
// matrices over a finite field: Vec<u8> of length n*n, row major
// ---------------------------------------------------------------------------

pub type FMat = Vec<u8>;

pub fn fmat_identity(n: usize) -> FMat {
    let mut m = vec![0u8; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

pub fn fmat_mul(f: &FiniteField, n: usize, a: &[u8], b: &[u8]) -> FMat {
    let mut c = vec![0u8; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k] as usize;
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.mul(aik, b[k * n + j] as usize);
                c[i * n + j] = f.add(c[i * n + j] as usize, v) as u8;
            }
        }
    }
    c
}

pub fn fmat_inv(f: &FiniteField, n: usize, a: &[u8]) -> Option<FMat> {
    let mut m: Vec<usize> = a.iter().map(|&x| x as usize).collect();
    let mut inv: Vec<usize> = fmat_identity(n).iter().map(|&x| x as usize).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r * n + col] != 0)?;
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let pv = f.inv(m[col * n + col]);
        for j in 0..n {
            m[col * n + j] = f.mul(m[col * n + j], pv);
            inv[col * n + j] = f.mul(inv[col * n + j], pv);
        }
        for r in 0..n {
            if r == col || m[r * n + col] == 0 {
                continue;
            }
            let factor = m[r * n + col];
            for j in 0..n {
                m[r * n + j] = f.sub(m[r * n + j], f.mul(factor, m[col * n + j]));
                inv[r * n + j] = f.sub(inv[r * n + j], f.mul(factor, inv[col * n + j]));
            }
        }
    }
    Some(inv.iter().map(|&x| x as u8).collect())
}

pub fn fmat_rank(f: &FiniteField, rows: usize, cols: usize, a: &[u8]) -> usize {
    let mut m: Vec<usize> = a.iter().map(|&x| x as usize).collect();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| m[r * cols + col] != 0);
        let Some(pivot) = pivot else { continue };
        if pivot != rank {
            for j in 0..cols {
                m.swap(rank * cols + j, pivot * cols + j);
            }
        }
        let pv = f.inv(m[rank * cols + col]);
        for j in 0..cols {
            m[rank * cols + j] = f.mul(m[rank * cols + j], pv);
        }
        for r in 0..rows {
            if r == rank || m[r * cols + col] == 0 {
                continue;
            }
            let factor = m[r * cols + col];
            for j in 0..cols {
                m[r * cols + j] = f.sub(m[r * cols + j], f.mul(factor, m[rank * cols + j]));
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn fmat_det(f: &FiniteField, n: usize, a: &[u8]) -> usize {
    let mut m: Vec<usize> = a.iter().map(|&x| x as usize).collect();
    let mut det = 1usize;
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r * n + col] != 0);
        let Some(pivot) = pivot else { return 0 };
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
            }
            det = f.neg(det);
        }
        det = f.mul(det, m[col * n + col]);
        let pv = f.inv(m[col * n + col]);
        for r in col + 1..n {
            if m[r * n + col] == 0 {
                continue;
            }
            let factor = f.mul(m[r * n + col], pv);
            for j in 0..n {
                m[r * n + j] = f.sub(m[r * n + j], f.mul(factor, m[col * n + j]));
            }
        }
    }
    det
}

pub fn fmat_transpose(n: usize, a: &[u8]) -> FMat {
    let mut t = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

// ---------------------------------------------------------------------------
// permutations of {0..n-1} and Bruhat-cell identification from rank matrices
// ---------------------------------------------------------------------------

/// All permutations of n letters in lexicographic order (one-line notation).
pub fn perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

pub fn perm_inversions(p: &[usize]) -> usize {
    let n = p.len();
    let mut inv = 0;
    for i in 0..n {
        for j in i + 1..n {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv
}

/// Decompose into adjacent transpositions s_i = (i, i+1); returns 0-based
/// generator indices such that multiplying them in order gives the permutation.
pub fn perm_word(p: &[usize]) -> Vec<usize> {
    // bubble sort p to the identity recording swaps, then reverse
    let mut v = p.to_vec();
    let mut word = Vec::new();
    let n = v.len();
    loop {
        let mut swapped = false;
        for i in 0..n - 1 {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                word.push(i);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    word.reverse();
    word
}

/// Permutation matrix: column j has its 1 in row p[j].
pub fn perm_matrix(n: usize, p: &[usize]) -> FMat {
    let mut m = vec![0u8; n * n];
    for j in 0..n {
        m[p[j] * n + j] = 1;
    }
    m
}

/// Identify the Bruhat cell B w B of an invertible matrix from the ranks of its
/// lower-left submatrices; returns the one-line permutation w with x in B w B,
/// where w is read through the perm_matrix convention above.
pub fn bruhat_cell(f: &FiniteField, n: usize, x: &[u8]) -> Vec<usize> {
    // r[i][j] = rank of rows i..n-1, cols 0..j-1
    let mut r = vec![vec![0usize; n + 1]; n + 1];
    for i in 0..n {
        for j in 1..=n {
            let rows = n - i;
            let mut sub = Vec::with_capacity(rows * j);
            for rr in i..n {
                for cc in 0..j {
                    sub.push(x[rr * n + cc]);
                }
            }
            r[i][j] = fmat_rank(f, rows, j, &sub);
        }
    }
    let mut w = vec![0usize; n];
    for j in 1..=n {
        for i in 0..n {
            let d = r[i][j] + r[i + 1][j - 1] - r[i + 1][j] - r[i][j - 1];
            if d == 1 {
                w[j - 1] = i;
            }
        }
    }
    w
}

/// Transversal of G/B: for every w, the q^{l(w)} representatives u * w_mat with
/// u upper unitriangular supported on the inversion positions of w.
pub fn flag_transversal(f: &FiniteField, n: usize) -> Vec<(usize, FMat)> {
    let ps = perms(n);
    let mut out = Vec::new();
    for (wi, w) in ps.iter().enumerate() {
        // positions (i,j), i<j, with w^-1(i) > w^-1(j)
        let mut winv = vec![0usize; n];
        for (j, &im) in w.iter().enumerate() {
            winv[im] = j;
        }
        let positions: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| winv[i] > winv[j])
            .collect();
        let wmat = perm_matrix(n, w);
        let k = positions.len();
        let total = (f.q as u64).pow(k as u32);
        for code in 0..total {
            let mut u = fmat_identity(n);
            let mut c = code;
            for &(i, j) in &positions {
                u[i * n + j] = (c % f.q as u64) as u8;
                c /= f.q as u64;
            }
            out.push((wi, fmat_mul(f, n, &u, &wmat)));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// group tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    GL,
    SL,
}

pub const ENUM_LIMIT: u64 = 20_000_000;

pub struct GroupTable {
    pub field: FiniteField,
    pub series: Series,
    pub n: usize,
    pub elems: Vec<FMat>,
    index: HashMap<FMat, u32>,
}

pub fn gl_order(n: usize, q: u64) -> u64 {
    let mut o = q.pow((n * (n - 1) / 2) as u32);
    for i in 1..=n {
        o *= q.pow(i as u32) - 1;
    }
    o
}

pub fn sl_order(n: usize, q: u64) -> u64 {
    gl_order(n, q) / (q - 1)
}

impl GroupTable {
    pub fn build(series: Series, n: usize, q: usize) -> Result<Self, AlgebraError> {
        if n > 4 {
            return Err(AlgebraError::UnsupportedType(format!("n = {n}")));
        }
        let field = FiniteField::new(q)?;
        let expected = match series {
            Series::GL => gl_order(n, q as u64),
            Series::SL => sl_order(n, q as u64),
        };
        if expected > ENUM_LIMIT {
            return Err(AlgebraError::SizeLimitExceeded);
        }
        let codes = (q as u64).checked_pow((n * n) as u32).ok_or(AlgebraError::SizeLimitExceeded)?;
        if codes > 100_000_000 {
            return Err(AlgebraError::SizeLimitExceeded);
        }
        let mut elems = Vec::new();
        let mut index = HashMap::new();
        let mut mat = vec![0u8; n * n];
        for code in 0..codes {
            let mut c = code;
            for slot in mat.iter_mut() {
                *slot = (c % q as u64) as u8;
                c /= q as u64;
            }
            let det = fmat_det(&field, n, &mat);
            let keep = match series {
                Series::GL => det != 0,
                Series::SL => det == 1,
            };
            if keep {
                index.insert(mat.clone(), elems.len() as u32);
                elems.push(mat.clone());
            }
        }
        assert_eq!(elems.len() as u64, expected, "order formula violated");
        Ok(GroupTable { field, series, n, elems, index })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn idx(&self, m: &[u8]) -> u32 {
        self.index[m]
    }

    pub fn try_idx(&self, m: &[u8]) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        let m = fmat_mul(&self.field, self.n, &self.elems[a as usize], &self.elems[b as usize]);
        self.index[&m]
    }

    pub fn inv_elem(&self, a: u32) -> u32 {
        let m = fmat_inv(&self.field, self.n, &self.elems[a as usize]).unwrap();
        self.index[&m]
    }

    pub fn is_upper_triangular(&self, m: &[u8]) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..i).all(|j| m[i * n + j] == 0))
    }

    /// Membership mask of the Borel subgroup of upper-triangular matrices.
    pub fn borel_mask(&self) -> Vec<bool> {
        self.elems.iter().map(|m| self.is_upper_triangular(m)).collect()
    }

    /// Standard parabolic P_I: block upper triangular for the composition
    /// generated by the simple reflections in I (0-based, s_i between rows i, i+1).
    pub fn parabolic_mask(&self, i_set: &[usize]) -> Vec<bool> {
        let n = self.n;
        // allowed below-diagonal positions: (r, c) with r > c and the whole
        // range c..r connected inside I
        let mut allowed = vec![false; n * n];
        for r in 0..n {
            for c in 0..r {
                if (c..r).all(|k| i_set.contains(&k)) {
                    allowed[r * n + c] = true;
                }
            }
        }
        self.elems
            .iter()
            .map(|m| {
                (0..n).all(|r| (0..r).all(|c| m[r * n + c] == 0 || allowed[r * n + c]))
            })
            .collect()
    }

    /// Small generating set of the Borel subgroup (indices).
    pub fn borel_generators(&self) -> Vec<u32> {
        let n = self.n;
        let q = self.field.q;
        let mut gens = Vec::new();
        // diagonal tori: each position with each nonzero value
        for i in 0..n {
            for t in 2..q {
                let mut m = fmat_identity(n);
                m[i * n + i] = t as u8;
                if let Some(g) = self.try_idx(&m) {
                    gens.push(g);
                } else if self.series == Series::SL && n >= 2 {
                    // compensate determinant on the next slot
                    let j = (i + 1) % n;
                    let mut m2 = m.clone();
                    m2[j * n + j] = self.field.inv(t) as u8;
                    gens.push(self.idx(&m2));
                }
            }
        }
        // elementary upper matrices, all values to cover non-prime fields
        for i in 0..n {
            for j in i + 1..n {
                for t in 1..q {
                    let mut m = fmat_identity(n);
                    m[i * n + j] = t as u8;
                    gens.push(self.idx(&m));
                }
            }
        }
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    /// Generating set for an arbitrary subgroup mask (falls back to every member).
    pub fn mask_members(&self, mask: &[bool]) -> Vec<u32> {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// theta-fixed subgroup mask for a named involution.
    pub fn theta_fixed(&self, theta: &Involution) -> Result<Vec<bool>, AlgebraError> {
        if self.field.p == 2 {
            return Err(AlgebraError::EvenCharacteristic);
        }
        Ok(self
            .elems
            .iter()
            .map(|m| theta.apply(&self.field, self.n, m) == *m)
            .collect())
    }
}

#[derive(Debug, Clone)]
pub enum Involution {
    /// conjugation by diag(eps), eps in {+1,-1}^n
    DiagConj(Vec<i8>),
    /// g -> (g^T)^{-1}
    TransposeInverse,
}

impl Involution {
    pub fn apply(&self, f: &FiniteField, n: usize, m: &[u8]) -> FMat {
        match self {
            Involution::DiagConj(eps) => {
                assert_eq!(eps.len(), n);
                // d m d^{-1} with d = diag(eps): flips sign of entries with
                // eps_i != eps_j
                let mut out = m.to_vec();
                for i in 0..n {
                    for j in 0..n {
                        if eps[i] != eps[j] {
                            out[i * n + j] = f.neg(out[i * n + j] as usize) as u8;
                        }
                    }
                }
                out
            }
            Involution::TransposeInverse => {
                let t = fmat_transpose(n, m);
                fmat_inv(f, n, &t).expect("invertible")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// double-coset partitions and invariant-function convolution
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Partition {
    /// per element: class id
    pub label: Vec<u32>,
    pub classes: usize,
    pub class_size: Vec<u64>,
    /// first element of each class in enumeration order
    pub reps: Vec<u32>,
}

/// (left, right)-double-coset partition via BFS with the given generator sets.
pub fn double_coset_partition(
    g: &GroupTable,
    left_gens: &[u32],
    right_gens: &[u32],
) -> Partition {
    let n = g.order();
    let mut label = vec![u32::MAX; n];
    let mut classes = 0u32;
    let mut class_size = Vec::new();
    let mut reps = Vec::new();
    for seed in 0..n as u32 {
        if label[seed as usize] != u32::MAX {
            continue;
        }
        let id = classes;
        classes += 1;
        reps.push(seed);
        let mut size = 0u64;
        let mut stack = vec![seed];
        label[seed as usize] = id;
        while let Some(x) = stack.pop() {
            size += 1;
            for &l in left_gens {
                let y = g.mul_idx(l, x);
                if label[y as usize] == u32::MAX {
                    label[y as usize] = id;
                    stack.push(y);
                }
            }
            for &r in right_gens {
                let y = g.mul_idx(x, r);
                if label[y as usize] == u32::MAX {
                    label[y as usize] = id;
                    stack.push(y);
                }
            }
        }
        class_size.push(size);
    }
    Partition { label, classes: classes as usize, class_size, reps }
}

/// Integer function constant on the classes of a partition.
#[derive(Debug, Clone)]
pub struct InvFunction {
    pub values: Vec<i64>,
}

impl InvFunction {
    pub fn indicator(partition: &Partition, class: u32) -> Self {
        let mut values = vec![0i64; partition.classes];
        values[class as usize] = 1;
        InvFunction { values }
    }

    pub fn at(&self, partition: &Partition, elem: u32) -> i64 {
        self.values[partition.label[elem as usize] as usize]
    }
}

/// (f * g)(x) = (1/|N|) sum_y f(y) g(y^-1 x), evaluated at the representatives
/// of the output partition. f must be right-N-invariant and g left-N-invariant;
/// the transversal formulation makes the division exact by construction, and a
/// final residue check guards against invariance violations.
pub fn convolve_inv(
    g: &GroupTable,
    f_part: &Partition,
    f: &InvFunction,
    g_part: &Partition,
    gg: &InvFunction,
    normalizer_mask: &[bool],
    out_part: &Partition,
) -> Result<InvFunction, AlgebraError> {
    // transversal of G/N
    let members: Vec<u32> = g.mask_members(normalizer_mask);
    let mut coset_seen = vec![false; g.order()];
    let mut transversal = Vec::new();
    for x in 0..g.order() as u32 {
        if coset_seen[x as usize] {
            continue;
        }
        transversal.push(x);
        for &m in &members {
            coset_seen[g.mul_idx(x, m) as usize] = true;
        }
    }
    // invariance checks
    for &y in &transversal {
        let base_f = f.at(f_part, y);
        let base_g = gg.at(g_part, y);
        for &m in members.iter().take(3) {
            if f.at(f_part, g.mul_idx(y, m)) != base_f {
                return Err(AlgebraError::NonIntegralConvolution);
            }
            if gg.at(g_part, g.mul_idx(m, y)) != base_g {
                return Err(AlgebraError::NonIntegralConvolution);
            }
        }
    }
    let mut values = vec![0i64; out_part.classes];
    for (ci, &rep) in out_part.reps.iter().enumerate() {
        let mut acc = 0i64;
        for &y in &transversal {
            let fy = f.at(f_part, y);
            if fy == 0 {
                continue;
            }
            let yinv = g.inv_elem(y);
            let z = g.mul_idx(yinv, rep);
            acc += fy * gg.at(g_part, z);
        }
        values[ci] = acc;
    }
    Ok(InvFunction { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.q, q);
        }
        assert!(FiniteField::new(6).is_err());
        let f9 = FiniteField::new(9).unwrap();
        assert_eq!(f9.legendre(1), 1);
    }

    #[test]
    fn group_orders() {
        assert_eq!(GroupTable::build(Series::GL, 2, 2).unwrap().order(), 6);
        assert_eq!(GroupTable::build(Series::GL, 3, 2).unwrap().order(), 168);
        assert_eq!(GroupTable::build(Series::SL, 2, 5).unwrap().order(), 120);
        assert_eq!(GroupTable::build(Series::GL, 2, 9).unwrap().order(), gl_order(2, 9) as usize);
    }

    #[test]
    fn bruhat_partition_matches_weyl() {
        for q in [2usize, 3] {
            for n in [2usize, 3] {
                let g = GroupTable::build(Series::GL, n, q).unwrap();
                let bgens = g.borel_generators();
                let part = double_coset_partition(&g, &bgens, &bgens);
                let nfact: usize = (1..=n).product();
                assert_eq!(part.classes, nfact);
                // cell sizes |B| q^{l(w)} with the label from the rank matrix
                let bsize: u64 = g.borel_mask().iter().filter(|&&b| b).count() as u64;
                for (ci, &rep) in part.reps.iter().enumerate() {
                    let w = bruhat_cell(&g.field, n, &g.elems[rep as usize]);
                    let l = perm_inversions(&w);
                    assert_eq!(part.class_size[ci], bsize * (q as u64).pow(l as u32));
                }
            }
        }
    }

    #[test]
    fn bruhat_cell_identification() {
        let q = 3;
        for n in [2usize, 3] {
            let f = FiniteField::new(q).unwrap();
            let ps = perms(n);
            let trans = flag_transversal(&f, n);
            let mut counts = vec![0u64; ps.len()];
            for (wi, m) in &trans {
                let w = bruhat_cell(&f, n, m);
                assert_eq!(&w, &ps[*wi]);
                counts[*wi] += 1;
            }
            for (wi, w) in ps.iter().enumerate() {
                assert_eq!(counts[wi], (q as u64).pow(perm_inversions(w) as u32));
            }
        }
    }

    #[test]
    fn hecke_quadratic_from_convolution() {
        // 1_{BsB} * 1_{BsB} over B in GL2(F3) = (q-1) 1_{BsB} + q 1_B at q=3
        let g = GroupTable::build(Series::GL, 2, 3).unwrap();
        let bgens = g.borel_generators();
        let part = double_coset_partition(&g, &bgens, &bgens);
        assert_eq!(part.classes, 2);
        let bmask = g.borel_mask();
        // which class is B?
        let b_class = part.label[g.idx(&fmat_identity(2)) as usize];
        let s_class = (0..2u32).find(|&c| c != b_class).unwrap();
        let f = InvFunction::indicator(&part, s_class);
        let conv = convolve_inv(&g, &part, &f, &part, &f, &bmask, &part).unwrap();
        assert_eq!(conv.values[b_class as usize], 3);
        assert_eq!(conv.values[s_class as usize], 2);
        // unit law
        let unit = InvFunction::indicator(&part, b_class);
        let conv2 = convolve_inv(&g, &part, &unit, &part, &f, &bmask, &part).unwrap();
        assert_eq!(conv2.values, f.values);
    }

    #[test]
    fn parabolic_cosets() {
        let g = GroupTable::build(Series::GL, 3, 2).unwrap();
        let pmask = g.parabolic_mask(&[0]);
        let pgens = g.mask_members(&pmask);
        let part = double_coset_partition(&g, &pgens, &pgens);
        assert_eq!(part.classes, 2);
    }

    #[test]
    fn symmetric_pairs_small() {
        // SL2(F3), theta = conj by diag(1,-1): K = diagonal torus, order q-1
        let g = GroupTable::build(Series::SL, 2, 3).unwrap();
        let theta = Involution::DiagConj(vec![1, -1]);
        let kmask = g.theta_fixed(&theta).unwrap();
        let ksize = kmask.iter().filter(|&&b| b).count();
        assert_eq!(ksize, 2);
        let bgens = g.borel_generators();
        let kgens = g.mask_members(&kmask);
        let part = double_coset_partition(&g, &bgens, &kgens);
        // 3 geometric orbits; the open orbit splits into two rational classes
        assert_eq!(part.classes, 4);
        // GL2(F3): K = full diagonal torus of order (q-1)^2
        let g2 = GroupTable::build(Series::GL, 2, 3).unwrap();
        let kmask2 = g2.theta_fixed(&theta).unwrap();
        assert_eq!(kmask2.iter().filter(|&&b| b).count(), 4);
        let part2 = double_coset_partition(&g2, &g2.borel_generators(), &g2.mask_members(&kmask2));
        assert_eq!(part2.classes, 3);
        // GL3(F3) with diag(1,1,-1): K = GL2 x GL1 block subgroup
        let g3 = GroupTable::build(Series::GL, 3, 3).unwrap();
        let kmask3 = g3.theta_fixed(&Involution::DiagConj(vec![1, 1, -1])).unwrap();
        assert_eq!(
            kmask3.iter().filter(|&&b| b).count() as u64,
            gl_order(2, 3) * gl_order(1, 3)
        );
        // even characteristic rejected
        let ge = GroupTable::build(Series::SL, 2, 2).unwrap();
        assert!(matches!(
            ge.theta_fixed(&theta),
            Err(AlgebraError::EvenCharacteristic)
        ));
    }
}
