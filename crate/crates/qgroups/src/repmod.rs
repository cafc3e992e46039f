//! Representation data: Cartan data with an ambient bilinear form, weighted
//! bases, generator actions, the built-in modules used throughout the crate,
//! and structural validation of module data.
//!
//! Weights live in an ambient rational space with an explicit Gram matrix, so
//! epsilon-coordinates (the 8-dimensional spin module) and root-multiple
//! coordinates (the 4-dimensional spin-3/2 module) are handled uniformly.

use crate::qfield::{qint_base, rat_frac, rat_int, CoeffElem, Rat};
use crate::tensor::SparseSq;
use num::{One, ToPrimitive, Zero};

// ---------------------------------------------------------------------------
// Cartan data
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct CartanData {
    pub rank: usize,
    /// Simple roots in ambient coordinates.
    pub simple_roots: Vec<Vec<Rat>>,
    /// Symmetric Gram matrix of the ambient bilinear form.
    pub gram: Vec<Vec<Rat>>,
    /// d_i = (alpha_i, alpha_i)/2.
    pub d: Vec<Rat>,
}

impl CartanData {
    pub fn ambient_dim(&self) -> usize {
        self.gram.len()
    }

    /// The bilinear form (a, b) = a^T G b.
    pub fn pair(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                s += ai * &self.gram[i][j] * bj;
            }
        }
        s
    }

    pub fn check(&self) -> Result<(), String> {
        let m = self.ambient_dim();
        for row in &self.gram {
            if row.len() != m {
                return Err("gram matrix not square".into());
            }
        }
        for i in 0..m {
            for j in 0..m {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err("gram matrix not symmetric".into());
                }
            }
        }
        if self.simple_roots.len() != self.rank || self.d.len() != self.rank {
            return Err("rank mismatch".into());
        }
        for i in 0..self.rank {
            let a = &self.simple_roots[i];
            if self.pair(a, a) != &self.d[i] * rat_int(2) {
                return Err(format!("(alpha_{}, alpha_{}) != 2 d_{}", i + 1, i + 1, i + 1));
            }
        }
        Ok(())
    }
}

/// Convert a rational that must be a quarter integer into a v-exponent.
pub fn quarter_exponent(r: &Rat) -> i64 {
    let four = r * rat_int(4);
    assert!(
        four.is_integer(),
        "exponent {} is not a quarter integer",
        r
    );
    four.to_integer().to_i64().expect("exponent overflow")
}

/// q^r as a monomial in v (r must be a quarter integer).
pub fn q_rat_pow(r: &Rat) -> CoeffElem {
    CoeffElem::monomial_v(quarter_exponent(r))
}

/// The signed q-integer [n] in base q_b = v^{vstep}; [-n] = -[n].
pub fn qint_signed(n: i64, vstep: i64) -> CoeffElem {
    if n >= 0 {
        qint_base(n, vstep)
    } else {
        -qint_base(-n, vstep)
    }
}

// ---------------------------------------------------------------------------
// Module data
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleData {
    pub cartan: CartanData,
    pub dim: usize,
    /// Weight of each basis vector, ambient coordinates.
    pub weights: Vec<Vec<Rat>>,
    /// e_act[i] is the matrix of E_{i+1}: column j holds E(v_{j+1}).
    pub e_act: Vec<SparseSq>,
    pub f_act: Vec<SparseSq>,
    pub labels: Vec<String>,
}

impl ModuleData {
    /// (alpha_i, mu_j), 1-based i and j.
    pub fn root_weight_pair(&self, i: usize, j: usize) -> Rat {
        self.cartan.pair(&self.cartan.simple_roots[i - 1], &self.weights[j - 1])
    }

    /// (mu_i, mu_j), 1-based.
    pub fn weight_pairing(&self, i: usize, j: usize) -> Rat {
        self.cartan.pair(&self.weights[i - 1], &self.weights[j - 1])
    }

    /// Diagonal matrix of K_i: entry q^{(alpha_i, mu_j)} on v_j.
    pub fn k_act(&self, i: usize) -> SparseSq {
        self.k_act_pow(i, &Rat::one())
    }

    /// Diagonal matrix of K_i^p for a rational power p (half powers of K
    /// appear in the extracted generators).
    pub fn k_act_pow(&self, i: usize, p: &Rat) -> SparseSq {
        let mut m = SparseSq::zero(self.dim);
        for j in 1..=self.dim {
            let e = self.root_weight_pair(i, j) * p;
            m.set(j - 1, j - 1, q_rat_pow(&e));
        }
        m
    }

    /// Diagonal matrix of the weight monomial K_mu = q^{(mu, mu_j)} on v_j.
    pub fn k_weight(&self, mu: &[Rat]) -> SparseSq {
        let mut m = SparseSq::zero(self.dim);
        for j in 1..=self.dim {
            let e = self.cartan.pair(mu, &self.weights[j - 1]);
            m.set(j - 1, j - 1, q_rat_pow(&e));
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Built-in modules
// ---------------------------------------------------------------------------

/// The 8-dimensional spin module for the rank-3 orthogonal case.
///
/// Basis vectors are sign triples (s1, s2, s3) with weight (s1 e1 + s2 e2 +
/// s3 e3)/2, listed in binary order with the first sign slowest:
/// v1 = (-,-,-), ..., v8 = (+,+,+).  Generator arrows all have coefficient 1.
pub fn builtin_b3_spin() -> ModuleData {
    let gram = vec![
        vec![rat_int(1), rat_int(0), rat_int(0)],
        vec![rat_int(0), rat_int(1), rat_int(0)],
        vec![rat_int(0), rat_int(0), rat_int(1)],
    ];
    let simple_roots = vec![
        vec![rat_int(1), rat_int(-1), rat_int(0)],
        vec![rat_int(0), rat_int(1), rat_int(-1)],
        vec![rat_int(0), rat_int(0), rat_int(1)],
    ];
    let d = vec![rat_int(1), rat_int(1), rat_frac(1, 2)];
    let cartan = CartanData { rank: 3, simple_roots, gram, d };

    let mut weights = Vec::new();
    let mut labels = Vec::new();
    for j in 0..8u32 {
        let signs = [
            if j & 4 != 0 { 1 } else { -1 },
            if j & 2 != 0 { 1 } else { -1 },
            if j & 1 != 0 { 1 } else { -1 },
        ];
        weights.push(signs.iter().map(|s| rat_frac(*s, 2)).collect());
        labels.push(format!(
            "v{}=({},{},{})",
            j + 1,
            if signs[0] > 0 { "+" } else { "-" },
            if signs[1] > 0 { "+" } else { "-" },
            if signs[2] > 0 { "+" } else { "-" }
        ));
    }

    // Arrows v_a -> v_b for each generator (1-based indices).
    let e_edges: [&[(usize, usize)]; 3] = [
        &[(3, 5), (4, 6)],
        &[(2, 3), (6, 7)],
        &[(1, 2), (3, 4), (5, 6), (7, 8)],
    ];
    let mut e_act = Vec::new();
    let mut f_act = Vec::new();
    for edges in e_edges {
        let mut e = SparseSq::zero(8);
        let mut f = SparseSq::zero(8);
        for (a, b) in edges {
            e.set(b - 1, a - 1, CoeffElem::one());
            f.set(a - 1, b - 1, CoeffElem::one());
        }
        e_act.push(e);
        f_act.push(f);
    }

    ModuleData { cartan, dim: 8, weights, e_act, f_act, labels }
}

/// The 4-dimensional spin-3/2 module for rank 1.
///
/// Weights are the stated multiples of the simple root: -3/2 a1, -1/2 a1,
/// 1/2 a1, 3/2 a1 with (a1, a1) = 2, so (mu4, mu4) = 9/2.  The [3]^{1/2}
/// coefficients are the formal radical r3.
pub fn builtin_a1_spin32() -> ModuleData {
    let cartan = CartanData {
        rank: 1,
        simple_roots: vec![vec![rat_int(1)]],
        gram: vec![vec![rat_int(2)]],
        d: vec![rat_int(1)],
    };
    let weights = vec![
        vec![rat_frac(-3, 2)],
        vec![rat_frac(-1, 2)],
        vec![rat_frac(1, 2)],
        vec![rat_frac(3, 2)],
    ];
    let r3 = CoeffElem::r3();
    let two = qint_base(2, 4);
    let mut e = SparseSq::zero(4);
    // E: v1 -> q^{-3/2}[3]^{1/2} v2, v2 -> q^{-1/2}[2] v3, v3 -> q^{1/2}[3]^{1/2} v4
    e.set(1, 0, &CoeffElem::monomial_v(-6) * &r3);
    e.set(2, 1, &CoeffElem::monomial_v(-2) * &two);
    e.set(3, 2, &CoeffElem::monomial_v(2) * &r3);
    let mut f = SparseSq::zero(4);
    // F: v2 -> q^{3/2}[3]^{1/2} v1, v3 -> q^{1/2}[2] v2, v4 -> q^{-1/2}[3]^{1/2} v3
    f.set(0, 1, &CoeffElem::monomial_v(6) * &r3);
    f.set(1, 2, &CoeffElem::monomial_v(2) * &two);
    f.set(2, 3, &CoeffElem::monomial_v(-2) * &r3);
    let labels = (1..=4).map(|j| format!("v{}", j)).collect();
    ModuleData { cartan, dim: 4, weights, e_act: vec![e], f_act: vec![f], labels }
}

/// The 2-dimensional vector module for rank 1, in epsilon-coordinates chosen
/// so the built R-matrix reproduces the standard 4x4 matrix entry-for-entry
/// (diagonal q, 1, 1, q).
pub fn builtin_a1_vector() -> ModuleData {
    let cartan = CartanData {
        rank: 1,
        simple_roots: vec![vec![rat_int(1), rat_int(-1)]],
        gram: vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ],
        d: vec![rat_int(1)],
    };
    let weights = vec![
        vec![rat_int(0), rat_int(1)],
        vec![rat_int(1), rat_int(0)],
    ];
    let mut e = SparseSq::zero(2);
    e.set(1, 0, CoeffElem::one());
    let mut f = SparseSq::zero(2);
    f.set(0, 1, CoeffElem::one());
    let labels = vec!["v1".into(), "v2".into()];
    ModuleData { cartan, dim: 2, weights, e_act: vec![e], f_act: vec![f], labels }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Least k with E_i^k = 0 (resp. F_i^k) for each generator.
    pub nilpotency_e: Vec<u32>,
    pub nilpotency_f: Vec<u32>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn nilpotency_degree(m: &SparseSq) -> u32 {
    let mut p = m.clone();
    let mut k = 1u32;
    while !p.is_zero() {
        if k as usize > m.n + 1 {
            return 0; // not nilpotent
        }
        p = p.mul(m).unwrap();
        k += 1;
    }
    k
}

/// Structural checks: weight grading of every E/F entry, K-diagonality (by
/// construction), and the commutator relation
/// [E_i, F_j] = delta_ij (K_i - K_i^{-1}) / (q_i - q_i^{-1}).
pub fn validate_module(m: &ModuleData) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if let Err(e) = m.cartan.check() {
        rep.violations.push(Violation { kind: "cartan".into(), detail: e });
        return rep;
    }
    let rank = m.cartan.rank;

    // grading: E_i maps weight mu to mu + alpha_i, F_i to mu - alpha_i
    for i in 0..rank {
        for (act, sign, name) in [(&m.e_act[i], 1i64, "E"), (&m.f_act[i], -1i64, "F")] {
            for ((r, c), _) in &act.entries {
                let expect: Vec<Rat> = m.weights[*c]
                    .iter()
                    .zip(&m.cartan.simple_roots[i])
                    .map(|(w, a)| w + a * rat_int(sign))
                    .collect();
                if m.weights[*r] != expect {
                    rep.violations.push(Violation {
                        kind: "grading".into(),
                        detail: format!(
                            "{}_{} entry ({},{}) violates the weight grading",
                            name,
                            i + 1,
                            r + 1,
                            c + 1
                        ),
                    });
                }
            }
        }
    }

    // [E_i, F_j] relation
    for i in 0..rank {
        for j in 0..rank {
            let ef = m.e_act[i].mul(&m.f_act[j]).unwrap();
            let fe = m.f_act[j].mul(&m.e_act[i]).unwrap();
            let comm = ef.sub(&fe).unwrap();
            let expect = if i == j {
                // (K_i - K_i^{-1})/(q_i - q_i^{-1}) is diagonal with entry
                // the q_i-integer [(alpha_i, mu)/d_i] on each weight vector.
                let mut diag = SparseSq::zero(m.dim);
                let vstep = quarter_exponent(&m.cartan.d[i]) ; // 4*d_i
                for b in 0..m.dim {
                    let pairing = m.cartan.pair(&m.cartan.simple_roots[i], &m.weights[b]);
                    let n = &pairing / &m.cartan.d[i];
                    assert!(n.is_integer(), "non-integral K-exponent ratio");
                    let val = qint_signed(n.to_integer().to_i64().unwrap(), vstep);
                    diag.set(b, b, val);
                }
                diag
            } else {
                SparseSq::zero(m.dim)
            };
            if comm != expect {
                rep.violations.push(Violation {
                    kind: "commutator".into(),
                    detail: format!("[E_{}, F_{}] relation fails", i + 1, j + 1),
                });
            }
        }
    }

    for i in 0..rank {
        rep.nilpotency_e.push(nilpotency_degree(&m.e_act[i]));
        rep.nilpotency_f.push(nilpotency_degree(&m.f_act[i]));
    }
    rep
}

/// For every E-word sending v_i to v_k (nonzero coefficient) and the same
/// word read as F-generators sending v_j to v_l, assert the weight pairing
/// equality (mu_i, mu_j) = (mu_k, mu_l).  Words are enumerated with depth
/// pruning on zero products.
pub fn lemma_weight_check(m: &ModuleData, max_len: usize) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let rank = m.cartan.rank;
    // DFS over words; keep the running product for both polarities.
    let mut stack: Vec<(SparseSq, SparseSq)> =
        vec![(SparseSq::identity(m.dim), SparseSq::identity(m.dim))];
    let mut depth_stack: Vec<usize> = vec![0];
    while let Some((ew, fw)) = stack.pop() {
        let depth = depth_stack.pop().unwrap();
        for ((k, i), _) in &ew.entries {
            for ((l, j), _) in &fw.entries {
                let lhs = m.weight_pairing(i + 1, j + 1);
                let rhs = m.weight_pairing(k + 1, l + 1);
                if lhs != rhs {
                    rep.violations.push(Violation {
                        kind: "weight-pairing".into(),
                        detail: format!(
                            "(mu_{}, mu_{}) = {} but (mu_{}, mu_{}) = {}",
                            i + 1,
                            j + 1,
                            lhs,
                            k + 1,
                            l + 1,
                            rhs
                        ),
                    });
                }
            }
        }
        if depth < max_len {
            for g in 0..rank {
                let e2 = m.e_act[g].mul(&ew).unwrap();
                if e2.is_zero() {
                    continue;
                }
                let f2 = m.f_act[g].mul(&fw).unwrap();
                if f2.is_zero() {
                    continue;
                }
                stack.push((e2, f2));
                depth_stack.push(depth + 1);
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b3_spin_structure() {
        let m = builtin_b3_spin();
        let rep = validate_module(&m);
        assert!(rep.ok(), "violations: {:?}", rep.violations);
        assert_eq!(rep.nilpotency_e, vec![2, 2, 2]);
        assert_eq!(rep.nilpotency_f, vec![2, 2, 2]);
        // top edge: E_3 v7 = v8, F_3 v8 = v7
        assert!(m.e_act[2].get(7, 6).is_one());
        assert!(m.f_act[2].get(6, 7).is_one());
        // edge-set symmetry
        for i in 0..3 {
            assert_eq!(m.e_act[i].transpose(), m.f_act[i]);
        }
    }

    #[test]
    fn b3_weight_pairings() {
        let m = builtin_b3_spin();
        assert_eq!(m.weight_pairing(8, 8), rat_frac(3, 4));
        assert_eq!(m.weight_pairing(7, 8), rat_frac(1, 4));
    }

    #[test]
    fn b3_lemma_weight_check() {
        let m = builtin_b3_spin();
        let rep = lemma_weight_check(&m, 6);
        assert!(rep.ok(), "violations: {:?}", rep.violations);
    }

    #[test]
    fn a1_spin32_structure() {
        let m = builtin_a1_spin32();
        let rep = validate_module(&m);
        assert!(rep.ok(), "violations: {:?}", rep.violations);
        assert_eq!(rep.nilpotency_e, vec![4]);
        assert_eq!(rep.nilpotency_f, vec![4]);
        // K_1 v1 = q^{-3} v1
        let k = m.k_act(1);
        assert_eq!(k.get(0, 0), CoeffElem::q_pow(-3));
        assert_eq!(k.get(3, 3), CoeffElem::q_pow(3));
        // E_1 v1 = q^{-3/2}[3]^{1/2} v2
        assert_eq!(
            m.e_act[0].get(1, 0),
            &CoeffElem::monomial_v(-6) * &CoeffElem::r3()
        );
        assert_eq!(m.weight_pairing(4, 4), rat_frac(9, 2));
    }

    #[test]
    fn a1_vector_structure() {
        let m = builtin_a1_vector();
        let rep = validate_module(&m);
        assert!(rep.ok(), "violations: {:?}", rep.violations);
        assert_eq!(m.weight_pairing(1, 1), rat_int(1));
        assert_eq!(m.weight_pairing(1, 2), rat_int(0));
    }

    #[test]
    fn corrupted_module_reports_commutator() {
        let mut m = builtin_b3_spin();
        m.e_act[0].set(4, 2, CoeffElem::zero()); // drop the v3 -> v5 arrow
        let rep = validate_module(&m);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.kind == "commutator"));
    }
}
