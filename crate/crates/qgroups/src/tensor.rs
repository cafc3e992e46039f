//! Sparse square matrices over the exact coefficient ring, indexed by tensor
//! pairs on V (x) V and triples on V (x) V (x) V.
//!
//! Index convention: M^{ik}_{jl} is the entry at row (ik), column (jl), with
//! 1-based leg indices and lexicographic flattening (i-1)*dim + (k-1).  The
//! action reads M(v_j (x) v_l) = sum M^{ik}_{jl} v_i (x) v_k.

use crate::qfield::{CoeffElem, FracElem, LaurentV};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatError {
    DimMismatch,
    Singular,
    NonPolynomialInverse,
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::DimMismatch => write!(f, "matrix dimension mismatch"),
            MatError::Singular => write!(f, "singular matrix"),
            MatError::NonPolynomialInverse => {
                write!(f, "inverse has entries outside the coefficient ring")
            }
        }
    }
}

impl std::error::Error for MatError {}

// ---------------------------------------------------------------------------
// Generic sparse square matrix (0-based flat indices)
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseSq {
    pub n: usize,
    /// (row, col) -> nonzero entry
    pub entries: BTreeMap<(usize, usize), CoeffElem>,
}

impl SparseSq {
    pub fn zero(n: usize) -> Self {
        SparseSq { n, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries.insert((i, i), CoeffElem::one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> CoeffElem {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(CoeffElem::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: CoeffElem) {
        assert!(r < self.n && c < self.n, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &CoeffElem) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, &cur + v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.n)
    }

    pub fn add(&self, rhs: &SparseSq) -> Result<SparseSq, MatError> {
        if self.n != rhs.n {
            return Err(MatError::DimMismatch);
        }
        let mut out = self.clone();
        for ((r, c), v) in &rhs.entries {
            out.add_to(*r, *c, v);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &SparseSq) -> Result<SparseSq, MatError> {
        self.add(&rhs.scale(&CoeffElem::from_int(-1)))
    }

    pub fn scale(&self, c: &CoeffElem) -> SparseSq {
        let mut out = SparseSq::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for ((r, cl), v) in &self.entries {
            out.set(*r, *cl, c * v);
        }
        out
    }

    /// All entries in a given row, as (col, value) refs.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &CoeffElem)> {
        self.entries
            .range((r, 0)..(r + 1, 0))
            .map(|((_, c), v)| (*c, v))
    }

    pub fn mul(&self, rhs: &SparseSq) -> Result<SparseSq, MatError> {
        if self.n != rhs.n {
            return Err(MatError::DimMismatch);
        }
        let mut out = SparseSq::zero(self.n);
        for ((r, k), a) in &self.entries {
            for (c, b) in rhs.row(*k) {
                out.add_to(*r, c, &(a * b));
            }
        }
        Ok(out)
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[CoeffElem]) -> Vec<CoeffElem> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![CoeffElem::zero(); self.n];
        for ((r, c), a) in &self.entries {
            if !v[*c].is_zero() {
                out[*r] = &out[*r] + &(a * &v[*c]);
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseSq {
        let mut out = SparseSq::zero(self.n);
        for ((r, c), v) in &self.entries {
            out.set(*c, *r, v.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> SparseSq {
        let mut acc = SparseSq::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// Exact inverse by fraction-field Gaussian elimination.  Pivots on
    /// monomial entries first: every matrix in the suite is triangular up to
    /// a permutation, so this keeps the eliminations denominator-free.
    pub fn invert(&self) -> Result<SparseSq, MatError> {
        let n = self.n;
        let mut a: Vec<Vec<FracElem>> = vec![vec![FracElem::zero(); n]; n];
        for ((r, c), v) in &self.entries {
            a[*r][*c] = FracElem::from_coeff(v.clone());
        }
        let mut inv: Vec<Vec<FracElem>> = vec![vec![FracElem::zero(); n]; n];
        for i in 0..n {
            inv[i][i] = FracElem::one();
        }
        let is_monomial = |f: &FracElem| -> bool {
            f.den.is_one()
                && f.num
                    .as_laurent()
                    .map_or(false, |l: &LaurentV| l.as_monomial().is_some())
        };
        for col in 0..n {
            // choose a pivot row: monomial entries preferred
            let mut pivot = None;
            for r in col..n {
                if !a[r][col].is_zero() {
                    if is_monomial(&a[r][col]) {
                        pivot = Some(r);
                        break;
                    }
                    if pivot.is_none() {
                        pivot = Some(r);
                    }
                }
            }
            let p = pivot.ok_or(MatError::Singular)?;
            a.swap(col, p);
            inv.swap(col, p);
            let piv_inv = a[col][col].inv();
            for c in 0..n {
                a[col][c] = &a[col][c] * &piv_inv;
                inv[col][c] = &inv[col][c] * &piv_inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..n {
                        if !a[col][c].is_zero() {
                            a[r][c] = &a[r][c] - &(&factor * &a[col][c]);
                        }
                        if !inv[col][c].is_zero() {
                            inv[r][c] = &inv[r][c] - &(&factor * &inv[col][c]);
                        }
                    }
                }
            }
        }
        let mut out = SparseSq::zero(n);
        for r in 0..n {
            for c in 0..n {
                if !inv[r][c].is_zero() {
                    let e = inv[r][c]
                        .as_coeff()
                        .ok_or(MatError::NonPolynomialInverse)?;
                    out.set(r, c, e);
                }
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Matrices on V (x) V
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorMatrix {
    pub dim: usize,
    pub mat: SparseSq,
}

impl TensorMatrix {
    pub fn zero(dim: usize) -> Self {
        TensorMatrix { dim, mat: SparseSq::zero(dim * dim) }
    }

    pub fn identity(dim: usize) -> Self {
        TensorMatrix { dim, mat: SparseSq::identity(dim * dim) }
    }

    fn flat(&self, i: usize, k: usize) -> usize {
        debug_assert!(1 <= i && i <= self.dim && 1 <= k && k <= self.dim);
        (i - 1) * self.dim + (k - 1)
    }

    /// Entry M^{ik}_{jl} (1-based leg indices).
    pub fn get(&self, i: usize, k: usize, j: usize, l: usize) -> CoeffElem {
        self.mat.get(self.flat(i, k), self.flat(j, l))
    }

    pub fn set(&mut self, i: usize, k: usize, j: usize, l: usize, v: CoeffElem) {
        let (r, c) = (self.flat(i, k), self.flat(j, l));
        self.mat.set(r, c, v);
    }

    pub fn unflat(&self, idx: usize) -> (usize, usize) {
        (idx / self.dim + 1, idx % self.dim + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// Full transpose: (M^t)^{ij}_{kl} = M^{kl}_{ij}.
    pub fn transpose_t(&self) -> TensorMatrix {
        TensorMatrix { dim: self.dim, mat: self.mat.transpose() }
    }

    /// Partial transpose in the first leg: (M^{t1})^{ij}_{kl} = M^{kj}_{il}.
    pub fn transpose_t1(&self) -> TensorMatrix {
        let mut out = TensorMatrix::zero(self.dim);
        for ((r, c), v) in &self.mat.entries {
            let (i, j) = self.unflat(*r);
            let (k, l) = self.unflat(*c);
            out.set(k, j, i, l, v.clone());
        }
        out
    }

    /// Partial transpose in the second leg: (M^{t2})^{ij}_{kl} = M^{il}_{kj}.
    pub fn transpose_t2(&self) -> TensorMatrix {
        let mut out = TensorMatrix::zero(self.dim);
        for ((r, c), v) in &self.mat.entries {
            let (i, j) = self.unflat(*r);
            let (k, l) = self.unflat(*c);
            out.set(i, l, k, j, v.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &TensorMatrix) -> Result<TensorMatrix, MatError> {
        if self.dim != rhs.dim {
            return Err(MatError::DimMismatch);
        }
        Ok(TensorMatrix { dim: self.dim, mat: self.mat.mul(&rhs.mat)? })
    }

    pub fn add(&self, rhs: &TensorMatrix) -> Result<TensorMatrix, MatError> {
        Ok(TensorMatrix { dim: self.dim, mat: self.mat.add(&rhs.mat)? })
    }

    pub fn sub(&self, rhs: &TensorMatrix) -> Result<TensorMatrix, MatError> {
        Ok(TensorMatrix { dim: self.dim, mat: self.mat.sub(&rhs.mat)? })
    }

    pub fn scale(&self, c: &CoeffElem) -> TensorMatrix {
        TensorMatrix { dim: self.dim, mat: self.mat.scale(c) }
    }

    pub fn invert(&self) -> Result<TensorMatrix, MatError> {
        Ok(TensorMatrix { dim: self.dim, mat: self.mat.invert()? })
    }

    /// Partial trace over the second leg: (tr2 M)^i_j = sum_a M^{ia}_{ja}.
    pub fn trace2(&self) -> SparseSq {
        let mut out = SparseSq::zero(self.dim);
        for ((r, c), v) in &self.mat.entries {
            let (i, a) = self.unflat(*r);
            let (j, b) = self.unflat(*c);
            if a == b {
                out.add_to(i - 1, j - 1, v);
            }
        }
        out
    }
}

/// P^{ij}_{kl} = delta_{il} delta_{jk}: the flip v (x) w -> w (x) v.
pub fn permutation(dim: usize) -> TensorMatrix {
    let mut p = TensorMatrix::zero(dim);
    for i in 1..=dim {
        for j in 1..=dim {
            p.set(i, j, j, i, CoeffElem::one());
        }
    }
    p
}

/// (K0)^{ij}_{kl} = delta_{ij} delta_{kl}.
pub fn k0(dim: usize) -> TensorMatrix {
    let mut m = TensorMatrix::zero(dim);
    for i in 1..=dim {
        for k in 1..=dim {
            m.set(i, i, k, k, CoeffElem::one());
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Matrices on V (x) V (x) V
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TripleMatrix {
    pub dim: usize,
    pub mat: SparseSq,
}

impl TripleMatrix {
    pub fn zero(dim: usize) -> Self {
        TripleMatrix { dim, mat: SparseSq::zero(dim * dim * dim) }
    }

    pub fn identity(dim: usize) -> Self {
        TripleMatrix { dim, mat: SparseSq::identity(dim * dim * dim) }
    }

    fn flat(&self, i: usize, k: usize, m: usize) -> usize {
        ((i - 1) * self.dim + (k - 1)) * self.dim + (m - 1)
    }

    pub fn get(&self, r: (usize, usize, usize), c: (usize, usize, usize)) -> CoeffElem {
        self.mat.get(self.flat(r.0, r.1, r.2), self.flat(c.0, c.1, c.2))
    }

    pub fn set(&mut self, r: (usize, usize, usize), c: (usize, usize, usize), v: CoeffElem) {
        let (fr, fc) = (self.flat(r.0, r.1, r.2), self.flat(c.0, c.1, c.2));
        self.mat.set(fr, fc, v);
    }

    pub fn mul(&self, rhs: &TripleMatrix) -> Result<TripleMatrix, MatError> {
        if self.dim != rhs.dim {
            return Err(MatError::DimMismatch);
        }
        Ok(TripleMatrix { dim: self.dim, mat: self.mat.mul(&rhs.mat)? })
    }

    pub fn sub(&self, rhs: &TripleMatrix) -> Result<TripleMatrix, MatError> {
        Ok(TripleMatrix { dim: self.dim, mat: self.mat.sub(&rhs.mat)? })
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }
}

/// M acting on legs 1 and 2, identity on leg 3.
pub fn embed12(m: &TensorMatrix) -> TripleMatrix {
    let dim = m.dim;
    let mut out = TripleMatrix::zero(dim);
    for ((r, c), v) in &m.mat.entries {
        let (i, k) = m.unflat(*r);
        let (j, l) = m.unflat(*c);
        for a in 1..=dim {
            out.set((i, k, a), (j, l, a), v.clone());
        }
    }
    out
}

/// M acting on legs 1 and 3, identity on leg 2.
pub fn embed13(m: &TensorMatrix) -> TripleMatrix {
    let dim = m.dim;
    let mut out = TripleMatrix::zero(dim);
    for ((r, c), v) in &m.mat.entries {
        let (i, k) = m.unflat(*r);
        let (j, l) = m.unflat(*c);
        for a in 1..=dim {
            out.set((i, a, k), (j, a, l), v.clone());
        }
    }
    out
}

/// M acting on legs 2 and 3, identity on leg 1.
pub fn embed23(m: &TensorMatrix) -> TripleMatrix {
    let dim = m.dim;
    let mut out = TripleMatrix::zero(dim);
    for ((r, c), v) in &m.mat.entries {
        let (i, k) = m.unflat(*r);
        let (j, l) = m.unflat(*c);
        for a in 1..=dim {
            out.set((a, i, k), (a, j, l), v.clone());
        }
    }
    out
}

/// Residual R12 R13 R23 - R23 R13 R12; the zero matrix iff R satisfies the
/// quantum Yang-Baxter equation.
pub fn qybe_residual(r: &TensorMatrix) -> Result<TripleMatrix, MatError> {
    let r12 = embed12(r);
    let r13 = embed13(r);
    let r23 = embed23(r);
    let lhs = r12.mul(&r13)?.mul(&r23)?;
    let rhs = r23.mul(&r13)?.mul(&r12)?;
    lhs.sub(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{qint, CoeffElem};

    /// The standard 4x4 sl2 R-matrix: diag q,1,1,q with q - q^{-1} at
    /// position (12),(21).
    pub fn sl2_r() -> TensorMatrix {
        let q = CoeffElem::q_pow(1);
        let qi = CoeffElem::q_pow(-1);
        let mut r = TensorMatrix::zero(2);
        r.set(1, 1, 1, 1, q.clone());
        r.set(2, 2, 2, 2, q.clone());
        r.set(1, 2, 1, 2, CoeffElem::one());
        r.set(2, 1, 2, 1, CoeffElem::one());
        r.set(1, 2, 2, 1, &q - &qi);
        r
    }

    #[test]
    fn transpose_rules() {
        let r = sl2_r();
        // (R^{t2})^{11}_{22} = R^{12}_{21} = q - q^{-1}
        let t2 = r.transpose_t2();
        assert_eq!(
            t2.get(1, 1, 2, 2),
            &CoeffElem::q_pow(1) - &CoeffElem::q_pow(-1)
        );
        // involutions and composition
        assert_eq!(t2.transpose_t2(), r);
        assert_eq!(r.transpose_t1().transpose_t1(), r);
        assert_eq!(r.transpose_t1().transpose_t2(), r.transpose_t());
        assert_eq!(r.transpose_t2().transpose_t1(), r.transpose_t());
    }

    #[test]
    fn permutation_and_k0() {
        let p = permutation(3);
        assert!(p.mul(&p).unwrap().mat.is_identity());
        assert_eq!(p.get(1, 2, 2, 1), CoeffElem::one());
        assert!(p.get(1, 2, 1, 2).is_zero());
        for dim in 2..=3 {
            let p = permutation(dim);
            let k = k0(dim);
            let lhs = p.mul(&k).unwrap().mul(&p).unwrap();
            assert_eq!(lhs, k.transpose_t());
        }
    }

    #[test]
    fn sl2_qybe() {
        assert!(qybe_residual(&sl2_r()).unwrap().is_zero());
    }

    #[test]
    fn embeddings() {
        assert!(embed12(&TensorMatrix::identity(2)).mat.is_identity());
        let p = permutation(2);
        let e = embed13(&p);
        assert!(e.mul(&e).unwrap().mat.is_identity());
    }

    #[test]
    fn inversion() {
        let p = permutation(2);
        assert_eq!(p.invert().unwrap(), p);
        let i = TensorMatrix::identity(3);
        assert_eq!(i.invert().unwrap(), i);
        let r = sl2_r();
        let rinv = r.invert().unwrap();
        assert!(r.mul(&rinv).unwrap().mat.is_identity());
        assert!(rinv.mul(&r).unwrap().mat.is_identity());
    }

    #[test]
    fn partial_trace() {
        let i = TensorMatrix::identity(3);
        let t = i.trace2();
        assert_eq!(t, SparseSq::identity(3).scale(&CoeffElem::from_int(3)));
        let p = permutation(3);
        assert!(p.trace2().is_identity());
    }

    #[test]
    fn d_matrix_sl2_is_diagonal() {
        let r = sl2_r();
        let rt2inv = r.transpose_t2().invert().unwrap();
        let d = permutation(2)
            .mul(&rt2inv.transpose_t1())
            .unwrap()
            .trace2();
        for ((i, j), _) in &d.entries {
            assert_eq!(i, j, "D matrix not diagonal");
        }
        assert!(!d.is_zero());
        let _ = qint(2); // keep the import honest for future goldens
    }
}
