//! R-matrix construction from module data and positive-root vector words.
//!
//! The two-leg matrix is built as diag(q^{(mu_i, mu_k)}) times the product,
//! over the listed positive-root order, of the q-exponentials
//! exp_{q_b}((1 - q_b^{-2}) E_b (x) F_b).  Words act with the rightmost
//! generator first, and the exponential factors multiply left to right in
//! the order the roots are listed.  Both matrix orientations are kept: in
//! `r_std` the raising operators act on the first leg (row = output), and
//! `r_paper` = P r_std P is the flip-conjugate that matches the printed
//! matrices in the sources this crate reproduces.

use crate::qfield::{qfactorial_base, rat_frac, rat_int, CoeffElem, FracElem, LaurentV, Rat};
use crate::repmod::{q_rat_pow, quarter_exponent, validate_module, ModuleData};
use crate::tensor::{permutation, qybe_residual, MatError, SparseSq, TensorMatrix};
use std::fmt;

// ---------------------------------------------------------------------------
// Root vector specifications
// ---------------------------------------------------------------------------

/// One summand c * X_{w1} X_{w2} ... X_{ws} of a root vector, with 1-based
/// generator indices; the rightmost generator is applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct RootTerm {
    pub coeff: CoeffElem,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootVectorSpec {
    /// The positive root in ambient coordinates.
    pub root: Vec<Rat>,
    /// v-step of the root length: q_beta = v^{qbeta_vstep}.
    pub qbeta_vstep: i64,
    pub e_terms: Vec<RootTerm>,
    pub f_terms: Vec<RootTerm>,
}

fn term(sign: i64, coeff_v_exp: i64, word: &[usize]) -> RootTerm {
    RootTerm {
        coeff: CoeffElem::monomial_v(coeff_v_exp).scale(&rat_int(sign)),
        word: word.to_vec(),
    }
}

/// The bar image of a coefficient: v -> v^{-1}.  The adjoined radicals square
/// to bar-invariant q-integers, so flipping every Laurent exponent is enough.
fn bar_coeff(c: &CoeffElem) -> CoeffElem {
    let flip = |l: &LaurentV| LaurentV {
        terms: l.terms.iter().map(|(e, r)| (-e, r.clone())).collect(),
    };
    CoeffElem {
        c0: flip(&c.c0),
        c2: flip(&c.c2),
        c3: flip(&c.c3),
        c23: flip(&c.c23),
    }
}

/// F-side terms dual to given E-side terms: reverse each word and bar the
/// coefficient.  For a simple root this is the identity; for the composite
/// roots it produces the lowering vectors that pair correctly with the
/// raising side (e.g. -E3E2 + q^{-1}E2E3 dualizes to -F2F3 + qF3F2).
pub fn dual_f_terms(e_terms: &[RootTerm]) -> Vec<RootTerm> {
    e_terms
        .iter()
        .map(|t| RootTerm {
            coeff: bar_coeff(&t.coeff),
            word: t.word.iter().rev().copied().collect(),
        })
        .collect()
}

fn spec(root: &[i64], qbeta_vstep: i64, e_terms: Vec<RootTerm>) -> RootVectorSpec {
    let f_terms = dual_f_terms(&e_terms);
    RootVectorSpec {
        root: root.iter().map(|n| rat_int(*n)).collect(),
        qbeta_vstep,
        e_terms,
        f_terms,
    }
}

/// The nine positive-root vectors for the rank-3 spin case, in the convex
/// order used throughout: a3, a2+2a3, a2+a3, a2, a1+2a2+2a3, a1+a2+2a3,
/// a1+a2+a3, a1+a2, a1 (epsilon-coordinates).  Long roots have q_b = q = v^4,
/// short roots q_b = q^{1/2} = v^2.
pub fn b3_root_vector_specs() -> Vec<RootVectorSpec> {
    vec![
        // a3 = e3
        spec(&[0, 0, 1], 2, vec![term(1, 0, &[3])]),
        // a2+2a3 = e2+e3
        spec(&[0, 1, 1], 4, vec![term(-1, -2, &[3, 2, 3])]),
        // a2+a3 = e2
        spec(&[0, 1, 0], 2, vec![term(-1, 0, &[3, 2]), term(1, -4, &[2, 3])]),
        // a2 = e2-e3
        spec(&[0, 1, -1], 4, vec![term(1, 0, &[2])]),
        // a1+2a2+2a3 = e1+e2
        spec(
            &[1, 1, 0],
            4,
            vec![term(-1, -6, &[2, 1, 3, 2, 3]), term(-1, -6, &[3, 2, 3, 1, 2])],
        ),
        // a1+a2+2a3 = e1+e3
        spec(
            &[1, 0, 1],
            4,
            vec![term(-1, -2, &[3, 2, 1, 3]), term(1, -6, &[3, 1, 2, 3])],
        ),
        // a1+a2+a3 = e1
        spec(
            &[1, 0, 0],
            2,
            vec![
                term(-1, 0, &[3, 2, 1]),
                term(1, -4, &[2, 3, 1]),
                term(1, -4, &[1, 3, 2]),
                term(-1, -8, &[1, 2, 3]),
            ],
        ),
        // a1+a2 = e1-e3
        spec(&[1, 0, -1], 4, vec![term(-1, 0, &[2, 1]), term(1, -4, &[1, 2])]),
        // a1 = e1-e2
        spec(&[1, -1, 0], 4, vec![term(1, 0, &[1])]),
    ]
}

/// The same data with the lowering vector for a2+a3 replaced by the non-dual
/// variant (q - q^{3/2}/2) F3F2 - (q^2 - q^{5/2}/2) F2F3.  The resulting
/// matrix fails both the flip symmetry and the Yang-Baxter equation; it is
/// kept as the documented counterexample.
pub fn b3_root_vector_specs_alt_fside() -> Vec<RootVectorSpec> {
    let mut specs = b3_root_vector_specs();
    let half = rat_frac(1, 2);
    let c1 = &CoeffElem::q_pow(1) - &CoeffElem::monomial_v(6).scale(&half);
    let c2 = &CoeffElem::q_pow(2) - &CoeffElem::monomial_v(10).scale(&half);
    specs[2].f_terms = vec![
        RootTerm { coeff: c1, word: vec![3, 2] },
        RootTerm { coeff: -&c2, word: vec![2, 3] },
    ];
    specs
}

/// Single root vector for the rank-1 modules (spin-3/2 and vector).
pub fn a1_root_vector_specs(m: &ModuleData) -> Vec<RootVectorSpec> {
    let root = m.cartan.simple_roots[0].clone();
    // q_beta = q^{d_1} = v^{4 d_1}
    let qbeta_vstep = quarter_exponent(&m.cartan.d[0]);
    vec![RootVectorSpec {
        root,
        qbeta_vstep,
        e_terms: vec![term(1, 0, &[1])],
        f_terms: vec![term(1, 0, &[1])],
    }]
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum BuildError {
    Module(Vec<String>),
    Grading(String),
    QbetaMismatch(String),
    NonPolynomial(String),
    Triangularity(String),
    Qybe,
    Mat(MatError),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::Module(v) => write!(f, "module validation failed: {}", v.join("; ")),
            BuildError::Grading(s) => write!(f, "root vector grading violated: {}", s),
            BuildError::QbetaMismatch(s) => write!(f, "q_beta inconsistent with root length: {}", s),
            BuildError::NonPolynomial(s) => {
                write!(f, "exponential coefficient not polynomial: {}", s)
            }
            BuildError::Triangularity(s) => write!(f, "triangularity violated: {}", s),
            BuildError::Qybe => write!(f, "Yang-Baxter equation fails"),
            BuildError::Mat(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for BuildError {}

impl From<MatError> for BuildError {
    fn from(e: MatError) -> Self {
        BuildError::Mat(e)
    }
}

/// Product of generator actions for a word, rightmost generator first.
pub fn eval_word(m: &ModuleData, word: &[usize], raising: bool) -> SparseSq {
    let acts = if raising { &m.e_act } else { &m.f_act };
    let mut out = SparseSq::identity(m.dim);
    for g in word {
        out = out.mul(&acts[g - 1]).unwrap();
    }
    out
}

/// Evaluate a root vector (sum of weighted words) on the module and check
/// that every nonzero entry shifts weights by exactly +-root.
pub fn eval_root_vector(
    m: &ModuleData,
    spec: &RootVectorSpec,
    raising: bool,
) -> Result<SparseSq, BuildError> {
    let terms = if raising { &spec.e_terms } else { &spec.f_terms };
    let mut out = SparseSq::zero(m.dim);
    for t in terms {
        let w = eval_word(m, &t.word, raising);
        out = out.add(&w.scale(&t.coeff))?;
    }
    let sign = if raising { 1i64 } else { -1 };
    for ((r, c), _) in &out.entries {
        let expect: Vec<Rat> = m.weights[*c]
            .iter()
            .zip(&spec.root)
            .map(|(w, a)| w + a * rat_int(sign))
            .collect();
        if m.weights[*r] != expect {
            return Err(BuildError::Grading(format!(
                "{} vector for root {:?} has an entry ({},{}) off the root grading",
                if raising { "raising" } else { "lowering" },
                spec.root,
                r + 1,
                c + 1
            )));
        }
    }
    Ok(out)
}

/// Kronecker product on V (x) V with `a` on the first leg.
pub fn kron(a: &SparseSq, b: &SparseSq) -> TensorMatrix {
    let dim = a.n;
    let mut out = TensorMatrix::zero(dim);
    for ((i, j), x) in &a.entries {
        for ((k, l), y) in &b.entries {
            out.set(i + 1, k + 1, j + 1, l + 1, x * y);
        }
    }
    out
}

/// exp_{q_b}(x) = sum_r q_b^{r(r+1)/2} / [r]_{q_b}! * x^r for a nilpotent x.
/// Intermediate divisions run in the fraction field; every fully assembled
/// entry must land back in the coefficient ring.
pub fn qexp(x: &TensorMatrix, qb_vstep: i64) -> Result<TensorMatrix, BuildError> {
    let dim = x.dim;
    let mut acc = TensorMatrix::identity(dim);
    let mut pow = TensorMatrix::identity(dim);
    let mut r: i64 = 0;
    loop {
        r += 1;
        pow = pow.mul(x)?;
        if pow.mat.is_zero() {
            return Ok(acc);
        }
        assert!(r <= (dim * dim) as i64, "argument of qexp is not nilpotent");
        let scalar = FracElem::new(
            CoeffElem::monomial_v(qb_vstep * r * (r + 1) / 2),
            qfactorial_base(r, qb_vstep),
        );
        for ((row, col), v) in &pow.mat.entries {
            let scaled = &FracElem::from_coeff(v.clone()) * &scalar;
            let c = scaled.as_coeff().ok_or_else(|| {
                BuildError::NonPolynomial(format!("order-{} term at ({},{})", r, row, col))
            })?;
            acc.mat.add_to(*row, *col, &c);
        }
    }
}

// ---------------------------------------------------------------------------
// The bundle
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RMatrixBundle {
    pub module: ModuleData,
    pub specs: Vec<RootVectorSpec>,
    /// Orientation with raising operators on the first leg (row = output).
    pub r_std: TensorMatrix,
    /// Flip conjugate P r_std P, the orientation of the printed matrices.
    pub r_paper: TensorMatrix,
    /// Whether the Yang-Baxter equation holds (always true from `build_rvv`).
    pub qybe_ok: bool,
}

impl RMatrixBundle {
    /// The braiding P R in the printed orientation.
    pub fn braiding(&self) -> TensorMatrix {
        permutation(self.module.dim).mul(&self.r_paper).unwrap()
    }
}

/// First witness ((row),(col)) where the matrix of `m` is not symmetric.
pub fn symmetry_witness(m: &TensorMatrix) -> Option<((usize, usize), (usize, usize))> {
    for ((r, c), v) in &m.mat.entries {
        if m.mat.get(*c, *r) != *v {
            let (a, b) = if r < c { (*r, *c) } else { (*c, *r) };
            return Some((m.unflat(a), m.unflat(b)));
        }
    }
    None
}

/// Like `build_rvv`, but a Yang-Baxter failure is recorded in the bundle
/// instead of aborting the build.  Used for the counterexample data.
pub fn build_rvv_lenient(
    m: &ModuleData,
    specs: &[RootVectorSpec],
) -> Result<RMatrixBundle, BuildError> {
    let rep = validate_module(m);
    if !rep.ok() {
        return Err(BuildError::Module(
            rep.violations.iter().map(|v| format!("{}: {}", v.kind, v.detail)).collect(),
        ));
    }

    let dim = m.dim;
    let mut quasi = TensorMatrix::identity(dim);
    for s in specs {
        let len2 = m.cartan.pair(&s.root, &s.root);
        // q_beta = q^{(b,b)/2}, i.e. v-step 2 (b,b)
        if quarter_exponent(&len2) != s.qbeta_vstep * 2 {
            return Err(BuildError::QbetaMismatch(format!(
                "root {:?} has (b,b) = {} but declares q_b = v^{}",
                s.root, len2, s.qbeta_vstep
            )));
        }
        let e = eval_root_vector(m, s, true)?;
        let f = eval_root_vector(m, s, false)?;
        // (1 - q_b^{-2}) E_b (x) F_b
        let one_minus = &CoeffElem::one() - &CoeffElem::monomial_v(-2 * s.qbeta_vstep);
        let arg = kron(&e, &f).scale(&one_minus);
        let factor = qexp(&arg, s.qbeta_vstep)?;
        quasi = quasi.mul(&factor)?;
    }

    // The unipotent part must raise the first leg and lower the second
    // strictly off the diagonal (basis indices increase with the weight).
    for ((row, col), _) in &quasi.mat.entries {
        if row == col {
            continue;
        }
        let (i, k) = quasi.unflat(*row);
        let (j, l) = quasi.unflat(*col);
        if i <= j || k >= l {
            return Err(BuildError::Triangularity(format!(
                "quasi entry ({}{}),({}{})",
                i, k, j, l
            )));
        }
    }

    // Diagonal weight factor q^{(mu_i, mu_k)} applied after the quasi part.
    let mut bdiag = TensorMatrix::zero(dim);
    for i in 1..=dim {
        for k in 1..=dim {
            let e = m.weight_pairing(i, k);
            bdiag.set(i, k, i, k, q_rat_pow(&e));
        }
    }
    let r_std = bdiag.mul(&quasi)?;
    let qybe_ok = qybe_residual(&r_std)?.is_zero();

    let p = permutation(dim);
    let r_paper = p.mul(&r_std)?.mul(&p)?;

    Ok(RMatrixBundle {
        module: m.clone(),
        specs: specs.to_vec(),
        r_std,
        r_paper,
        qybe_ok,
    })
}

/// Build the R-matrix for a module from root vector data, verifying module
/// structure, root gradings, q_beta lengths, triangularity of the unipotent
/// part, and the quantum Yang-Baxter equation.
pub fn build_rvv(m: &ModuleData, specs: &[RootVectorSpec]) -> Result<RMatrixBundle, BuildError> {
    let b = build_rvv_lenient(m, specs)?;
    if !b.qybe_ok {
        return Err(BuildError::Qybe);
    }
    Ok(b)
}
