//! Minimal polynomials of braidings.
//!
//! Two independent routes: a generic least-degree annihilator found from the
//! linear dependence of the powers I, M, M^2, ... over the fraction field,
//! and the probe method that reads a few sparse rows of the expanded product
//! prod_i (M - x_i I) = sum_k (-1)^k D_k M^{d-k} and solves linearly for the
//! elementary symmetric values D_1..D_d of the eigenvalues.  Both agree on
//! every bundle in the suite; the roots themselves are always +-v^k monomials
//! and are recovered by deflation.

use crate::qfield::{CoeffElem, FracElem};
use crate::tensor::TensorMatrix;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum MinPolyError {
    Underdetermined,
    Inconsistent,
    NonMonomialRoot,
}

impl fmt::Display for MinPolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinPolyError::Underdetermined => {
                write!(f, "probe rows underdetermine the symmetric functions")
            }
            MinPolyError::Inconsistent => {
                write!(f, "probe system inconsistent (wrong degree?)")
            }
            MinPolyError::NonMonomialRoot => {
                write!(f, "polynomial does not split over +-v^k monomials")
            }
        }
    }
}

impl std::error::Error for MinPolyError {}

#[derive(Clone, Debug, PartialEq)]
pub struct MinPolyResult {
    pub degree: usize,
    /// Monic, ascending: coefficients[k] multiplies t^k, top coefficient 1.
    pub coefficients: Vec<FracElem>,
    /// Roots as +-v^k monomials, in the order found (descending exponent,
    /// plus sign first).
    pub eigenvalues: Vec<CoeffElem>,
    /// D_1..D_degree with coefficients[d-k] = (-1)^k D_k.
    pub elementary_symmetric: Vec<FracElem>,
}

impl MinPolyResult {
    fn from_coefficients(coefficients: Vec<FracElem>) -> Result<Self, MinPolyError> {
        let degree = coefficients.len() - 1;
        let elementary_symmetric = (1..=degree)
            .map(|k| {
                let c = &coefficients[degree - k];
                if k % 2 == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        let eigenvalues = factor_monomial_roots(&coefficients, 64)?;
        Ok(MinPolyResult { degree, coefficients, eigenvalues, elementary_symmetric })
    }

    /// Evaluate the polynomial at the matrix; zero iff it annihilates.
    pub fn annihilates(&self, m: &TensorMatrix) -> bool {
        poly_at_matrix(&self.coefficients, m).mat.is_zero()
    }
}

/// sum_k c_k M^k with scalar coefficients that must clear to the ring
/// (minimal polynomials of the suite's braidings always do after scaling;
/// here the monic fraction coefficients are applied exactly).
fn poly_at_matrix(coeffs: &[FracElem], m: &TensorMatrix) -> TensorMatrix {
    let dim = m.dim;
    let mut acc = TensorMatrix::zero(dim);
    let mut pow = TensorMatrix::identity(dim);
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            pow = pow.mul(m).unwrap();
        }
        if c.is_zero() {
            continue;
        }
        for ((r, col), v) in &pow.mat.entries {
            let scaled = &FracElem::from_coeff(v.clone()) * c;
            // accumulate in the ring when possible, else via fractions
            let cur = acc.mat.get(*r, *col);
            let sum = &FracElem::from_coeff(cur) + &scaled;
            match sum.as_coeff() {
                Some(x) => acc.mat.set(*r, *col, x),
                None => panic!("non-polynomial accumulation in poly_at_matrix"),
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Generic route
// ---------------------------------------------------------------------------

/// Least-degree monic annihilator of M, by reducing the flattened powers of
/// M against each other and watching for the first linear dependence.
pub fn minpoly_generic(m: &TensorMatrix) -> MinPolyResult {
    let n = m.mat.n;
    // Each basis row: (reduced sparse vector with pivot, expression in powers)
    struct Row {
        data: BTreeMap<usize, FracElem>,
        pivot: usize,
        combo: Vec<FracElem>,
    }
    let mut basis: Vec<Row> = Vec::new();
    let mut pow = TensorMatrix::identity(m.dim);
    for k in 0.. {
        if k > 0 {
            pow = pow.mul(m).unwrap();
        }
        let mut data: BTreeMap<usize, FracElem> = pow
            .mat
            .entries
            .iter()
            .map(|((r, c), v)| (r * n + c, FracElem::from_coeff(v.clone())))
            .collect();
        let mut combo = vec![FracElem::zero(); k + 1];
        combo[k] = FracElem::one();
        // reduce against the basis
        for row in &basis {
            if let Some(lead) = data.get(&row.pivot).cloned() {
                if lead.is_zero() {
                    continue;
                }
                for (idx, val) in &row.data {
                    let delta = &lead * val;
                    let cur = data.remove(idx).unwrap_or_else(FracElem::zero);
                    let next = &cur - &delta;
                    if !next.is_zero() {
                        data.insert(*idx, next);
                    }
                }
                for (i, c) in row.combo.iter().enumerate() {
                    combo[i] = &combo[i] - &(&lead * c);
                }
            }
        }
        data.retain(|_, v| !v.is_zero());
        if data.is_empty() {
            // dependence found; combo is monic in t^k by construction
            return MinPolyResult::from_coefficients(combo)
                .expect("braiding minimal polynomial must split over monomials");
        }
        // normalize the new row to pivot coefficient 1
        let (&pivot, lead) = data.iter().next().unwrap();
        let lead_inv = lead.inv();
        let data: BTreeMap<usize, FracElem> =
            data.iter().map(|(i, v)| (*i, v * &lead_inv)).collect();
        let combo: Vec<FracElem> = combo.iter().map(|c| c * &lead_inv).collect();
        basis.push(Row { data, pivot, combo });
    }
    unreachable!()
}

// ---------------------------------------------------------------------------
// Probe route
// ---------------------------------------------------------------------------

/// Solve for D_1..D_degree from the requested rows (1-based leg pairs) of
/// sum_k (-1)^k D_k M^{d-k} = 0, then assemble the monic polynomial.
pub fn minpoly_probe(
    m: &TensorMatrix,
    degree: usize,
    probe_rows: &[(usize, usize)],
) -> Result<MinPolyResult, MinPolyError> {
    assert!(degree >= 1);
    let dim = m.dim;
    // powers M^0..M^degree
    let mut powers = vec![TensorMatrix::identity(dim)];
    for _ in 0..degree {
        powers.push(powers.last().unwrap().mul(m).unwrap());
    }
    // one equation per (row, column) with support:
    //   sum_{k=1..d} (-1)^k (M^{d-k})[r,c] D_k = -(M^d)[r,c]
    let mut eqs: Vec<(Vec<FracElem>, FracElem)> = Vec::new();
    for (i, k) in probe_rows {
        let r = (i - 1) * dim + (k - 1);
        let mut cols: Vec<usize> = Vec::new();
        for p in &powers {
            for (c, _) in p.mat.row(r) {
                if !cols.contains(&c) {
                    cols.push(c);
                }
            }
        }
        for c in cols {
            let mut lhs = Vec::with_capacity(degree);
            for k in 1..=degree {
                let entry = powers[degree - k].mat.get(r, c);
                let signed = if k % 2 == 1 { -&entry } else { entry };
                lhs.push(FracElem::from_coeff(signed));
            }
            let rhs = FracElem::from_coeff(-&powers[degree].mat.get(r, c));
            eqs.push((lhs, rhs));
        }
    }
    // Gaussian elimination with consistency checking
    let mut sol: Vec<Option<FracElem>> = vec![None; degree];
    let mut reduced: Vec<(Vec<FracElem>, FracElem, usize)> = Vec::new(); // (row, rhs, pivot)
    for (mut lhs, mut rhs) in eqs {
        for (row, rr, piv) in &reduced {
            let f = lhs[*piv].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..degree {
                lhs[j] = &lhs[j] - &(&f * &row[j]);
            }
            rhs = &rhs - &(&f * rr);
        }
        match lhs.iter().position(|c| !c.is_zero()) {
            Some(piv) => {
                let inv = lhs[piv].inv();
                for j in 0..degree {
                    lhs[j] = &lhs[j] * &inv;
                }
                rhs = &rhs * &inv;
                reduced.push((lhs, rhs, piv));
            }
            None => {
                if !rhs.is_zero() {
                    return Err(MinPolyError::Inconsistent);
                }
            }
        }
    }
    if reduced.len() < degree {
        return Err(MinPolyError::Underdetermined);
    }
    // back-substitute (rows are in pivot order of insertion; eliminate fully)
    for idx in (0..reduced.len()).rev() {
        let (row, rhs, piv) = reduced[idx].clone();
        let mut val = rhs;
        for j in 0..degree {
            if j != piv && !row[j].is_zero() {
                let vj = sol[j].clone().ok_or(MinPolyError::Underdetermined)?;
                val = &val - &(&row[j] * &vj);
            }
        }
        if let Some(existing) = &sol[piv] {
            if existing != &val {
                return Err(MinPolyError::Inconsistent);
            }
        } else {
            sol[piv] = Some(val);
        }
    }
    let deltas: Vec<FracElem> = sol
        .into_iter()
        .map(|s| s.ok_or(MinPolyError::Underdetermined))
        .collect::<Result<_, _>>()?;
    // coefficients[d-k] = (-1)^k D_k, top = 1
    let mut coefficients = vec![FracElem::zero(); degree + 1];
    coefficients[degree] = FracElem::one();
    for k in 1..=degree {
        let c = if k % 2 == 1 { -&deltas[k - 1] } else { deltas[k - 1].clone() };
        coefficients[degree - k] = c;
    }
    let res = MinPolyResult::from_coefficients(coefficients)?;
    if !res.annihilates(m) {
        return Err(MinPolyError::Inconsistent);
    }
    Ok(res)
}

// ---------------------------------------------------------------------------
// Root extraction
// ---------------------------------------------------------------------------

/// Default probe rows for the rank-3 spin braiding: the sparse rows used in
/// the source derivation plus the weight-zero row (18), which is needed to
/// see the eigenvalue of the one-dimensional summand.
pub fn b3_default_probe_rows() -> Vec<(usize, usize)> {
    vec![(8, 8), (1, 2), (5, 8), (1, 8)]
}

fn eval_poly(coeffs: &[FracElem], x: &FracElem) -> FracElem {
    let mut acc = FracElem::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Deflate out all roots of the form +-v^k with |k| <= bound.  Errors unless
/// the polynomial splits completely in that family.  Roots are searched from
/// the highest exponent down, plus sign before minus, so the output order is
/// canonical.
pub fn factor_monomial_roots(
    coefficients: &[FracElem],
    bound: i64,
) -> Result<Vec<CoeffElem>, MinPolyError> {
    let mut coeffs = coefficients.to_vec();
    let mut roots = Vec::new();
    while coeffs.len() > 1 {
        let mut found = None;
        'search: for k in (-bound..=bound).rev() {
            for sign in [1i64, -1] {
                let cand = CoeffElem::monomial_v(k).scale(&crate::qfield::rat_int(sign));
                let x = FracElem::from_coeff(cand.clone());
                if eval_poly(&coeffs, &x).is_zero() {
                    found = Some((cand, x));
                    break 'search;
                }
            }
        }
        let (root, x) = found.ok_or(MinPolyError::NonMonomialRoot)?;
        // synthetic division by (t - x)
        let mut quot = vec![FracElem::zero(); coeffs.len() - 1];
        let mut carry = FracElem::zero();
        for j in (0..coeffs.len() - 1).rev() {
            carry = &coeffs[j + 1] + &(&carry * &x);
            quot[j] = carry.clone();
        }
        roots.push(root);
        coeffs = quot;
    }
    Ok(roots)
}

/// e_k of the eigenvalue list, for the Vieta cross-check.
pub fn elementary_symmetric(values: &[CoeffElem], k: usize) -> CoeffElem {
    fn rec(values: &[CoeffElem], k: usize, start: usize, acc: &CoeffElem, out: &mut CoeffElem) {
        if k == 0 {
            *out = &*out + acc;
            return;
        }
        for i in start..values.len() {
            let next = acc * &values[i];
            rec(values, k - 1, i + 1, &next, out);
        }
    }
    let mut out = CoeffElem::zero();
    rec(values, k, 0, &CoeffElem::one(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::qint;
    use crate::repmod::{builtin_a1_spin32, builtin_a1_vector, builtin_b3_spin};
    use crate::rmatrix::{a1_root_vector_specs, b3_root_vector_specs, build_rvv};
    use crate::tensor::permutation;

    fn frac_coeff(c: CoeffElem) -> FracElem {
        FracElem::from_coeff(c)
    }

    #[test]
    fn identity_and_flip() {
        let id = TensorMatrix::identity(2);
        let r = minpoly_generic(&id);
        assert_eq!(r.degree, 1);
        assert_eq!(r.eigenvalues, vec![CoeffElem::one()]);

        let p = permutation(2);
        let r = minpoly_generic(&p);
        assert_eq!(r.degree, 2);
        // t^2 - 1 = (t-1)(t+1)
        assert_eq!(r.eigenvalues, vec![CoeffElem::one(), -&CoeffElem::one()]);
        assert!(r.annihilates(&p));
    }

    #[test]
    fn vector_braiding_minpoly() {
        let m = builtin_a1_vector();
        let b = build_rvv(&m, &a1_root_vector_specs(&m)).unwrap();
        let br = b.braiding();
        let r = minpoly_generic(&br);
        assert_eq!(r.degree, 2);
        // (t - q)(t + q^{-1}) = t^2 - (q - q^{-1}) t - 1
        assert_eq!(
            r.eigenvalues,
            vec![CoeffElem::q_pow(1), -&CoeffElem::q_pow(-1)]
        );
        assert_eq!(
            r.elementary_symmetric[0],
            frac_coeff(&CoeffElem::q_pow(1) - &CoeffElem::q_pow(-1))
        );
        assert_eq!(r.elementary_symmetric[1], frac_coeff(-&CoeffElem::one()));
        // direct cross-check (PR - q)(PR + q^{-1}) = 0
        let a = br
            .sub(&TensorMatrix::identity(2).scale(&CoeffElem::q_pow(1)))
            .unwrap();
        let c = br
            .add(&TensorMatrix::identity(2).scale(&CoeffElem::q_pow(-1)))
            .unwrap();
        assert!(a.mul(&c).unwrap().mat.is_zero());
    }

    #[test]
    fn monomial_factoring_oracles() {
        // t^2 - [2]t + 1 = (t - q)(t - q^{-1})
        let coeffs = vec![
            frac_coeff(CoeffElem::one()),
            frac_coeff(-&qint(2)),
            frac_coeff(CoeffElem::one()),
        ];
        let roots = factor_monomial_roots(&coeffs, 64).unwrap();
        assert_eq!(roots, vec![CoeffElem::q_pow(1), CoeffElem::q_pow(-1)]);
    }

    #[test]
    fn b3_braiding_minpoly_and_probe() {
        let m = builtin_b3_spin();
        let b = build_rvv(&m, &b3_root_vector_specs()).unwrap();
        let br = b.braiding();
        let gen = minpoly_generic(&br);
        assert_eq!(gen.degree, 4);
        // x1 = q^{3/4}, x2 = -q^{-1/4}, x3 = -q^{-9/4}, x4 = q^{-21/4}.
        // The sign of x4 is forced: at q = 1 the braiding becomes the flip
        // with trace 8 on the 64-dim square, and the summand dimensions
        // 35, 21, 7, 1 give 35 - 21 - 7 + 1 = 8 only with a plus sign on
        // the one-dimensional summand (which sits in the symmetric square).
        assert_eq!(
            gen.eigenvalues,
            vec![
                CoeffElem::monomial_v(3),
                -&CoeffElem::monomial_v(-1),
                -&CoeffElem::monomial_v(-9),
                CoeffElem::monomial_v(-21),
            ]
        );
        // D_1 = q^{3/4} - q^{-1/4} - q^{-9/4} + q^{-21/4}, D_4 = q^{-7}
        let d1 = &(&(&CoeffElem::monomial_v(3) - &CoeffElem::monomial_v(-1))
            - &CoeffElem::monomial_v(-9))
            + &CoeffElem::monomial_v(-21);
        assert_eq!(gen.elementary_symmetric[0], frac_coeff(d1));
        assert_eq!(
            gen.elementary_symmetric[3],
            frac_coeff(CoeffElem::q_pow(-7))
        );
        assert!(gen.annihilates(&br));
        // dropping any root must break annihilation
        for drop in 0..4 {
            let rest: Vec<CoeffElem> = gen
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, v)| v.clone())
                .collect();
            let mut prod = TensorMatrix::identity(8);
            for x in &rest {
                let f = br.sub(&TensorMatrix::identity(8).scale(x)).unwrap();
                prod = prod.mul(&f).unwrap();
            }
            assert!(!prod.mat.is_zero(), "dropping root {} still annihilates", drop);
        }
        // probe route agrees on the default rows
        let probe = minpoly_probe(&br, 4, &b3_default_probe_rows()).unwrap();
        assert_eq!(probe, gen);
        // wrong degree is rejected
        assert!(matches!(
            minpoly_probe(&br, 3, &b3_default_probe_rows()),
            Err(MinPolyError::Inconsistent)
        ));
        // the (58) block carries weight e1, which misses the one-dimensional
        // summand, so without a weight-zero row the quartic is not pinned
        assert!(matches!(
            minpoly_probe(&br, 4, &[(8, 8), (1, 2), (5, 8)]),
            Err(MinPolyError::Underdetermined)
        ));
    }

    #[test]
    fn spin32_probe_equivalence_and_vieta() {
        let m = builtin_a1_spin32();
        let b = build_rvv(&m, &a1_root_vector_specs(&m)).unwrap();
        let br = b.braiding();
        let gen = minpoly_generic(&br);
        assert_eq!(gen.degree, 4);
        let rows: Vec<(usize, usize)> = (1..=4)
            .flat_map(|i| (1..=4).map(move |k| (i, k)))
            .collect();
        let probe = minpoly_probe(&br, 4, &rows).unwrap();
        assert_eq!(probe, gen);
        for k in 1..=gen.degree {
            assert_eq!(
                frac_coeff(elementary_symmetric(&gen.eigenvalues, k)),
                gen.elementary_symmetric[k - 1]
            );
        }
    }
}
