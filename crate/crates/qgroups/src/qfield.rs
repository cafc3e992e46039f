//! Exact coefficient arithmetic.
//!
//! The ground ring is the Laurent polynomials Q[v, v^-1] with v = q^{1/4},
//! so every quarter power of q that shows up in an R-matrix entry is a plain
//! monomial with an integer exponent.  On top of that we adjoin two formal
//! square roots r2, r3 with r2^2 = [2]_q and r3^2 = [3]_q; an element of the
//! resulting tower is stored as c0 + c2*r2 + c3*r3 + c23*r2*r3.  Fractions of
//! such elements (`FracElem`) are only needed internally for linear solving.

use num::BigRational;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

// ---------------------------------------------------------------------------
// Laurent polynomials in v
// ---------------------------------------------------------------------------

/// A Laurent polynomial in v = q^{1/4} with rational coefficients.
/// The map never stores zero coefficients; the empty map is 0.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentV {
    pub terms: BTreeMap<i64, Rat>,
}

impl LaurentV {
    pub fn zero() -> Self {
        LaurentV { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Rat::one())
    }

    pub fn monomial(exp: i64, coeff: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentV { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(0, rat_int(n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }

    /// Some(exp) if this is a single term c * v^exp.
    pub fn as_monomial(&self) -> Option<(i64, &Rat)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((*e, c))
        } else {
            None
        }
    }

    fn add_term(&mut self, exp: i64, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentV {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiply by v^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentV {
            terms: self.terms.iter().map(|(e, a)| (*e + k, a.clone())).collect(),
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Evaluate at v = 1 (the classical specialization).
    pub fn eval_one(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |s, c| s + c)
    }

    /// Substitute v -> -v (flips the sign of odd-exponent terms).
    pub fn subst_neg_v(&self) -> Self {
        LaurentV {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// Exact division; None if the quotient is not a Laurent polynomial.
    pub fn div_exact(&self, d: &LaurentV) -> Option<LaurentV> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((e, c)) = d.as_monomial() {
            return Some(self.shift(-e).scale(&(Rat::one() / c)));
        }
        // Shift both so they are ordinary polynomials and long-divide.
        let sn = self.min_exp().unwrap();
        let sd = d.min_exp().unwrap();
        let mut rem = self.shift(-sn);
        let dd = d.shift(-sd);
        let (dlead_e, dlead_c) = {
            let e = dd.max_exp().unwrap();
            (e, dd.terms[&e].clone())
        };
        let mut quot = LaurentV::zero();
        while !rem.is_zero() {
            let re = rem.max_exp().unwrap();
            if re < dlead_e {
                return None;
            }
            let rc = rem.terms[&re].clone();
            let qc = rc / &dlead_c;
            let qe = re - dlead_e;
            quot.add_term(qe, &qc);
            let sub = dd.shift(qe).scale(&qc);
            rem = &rem - &sub;
        }
        Some(quot.shift(sn - sd))
    }

    /// Gcd as Laurent polynomials, returned monic with min exponent 0
    /// (units v^k are stripped).
    pub fn gcd(&self, other: &LaurentV) -> LaurentV {
        fn normalize(p: &LaurentV) -> LaurentV {
            if p.is_zero() {
                return LaurentV::zero();
            }
            let s = p.min_exp().unwrap();
            let lead = p.terms[&p.max_exp().unwrap()].clone();
            p.shift(-s).scale(&(Rat::one() / lead))
        }
        let mut a = normalize(self);
        let mut b = normalize(other);
        while !b.is_zero() {
            // a mod b via long division
            let r = {
                let blead_e = b.max_exp().unwrap();
                let blead_c = b.terms[&blead_e].clone();
                let mut rem = a.clone();
                while !rem.is_zero() && rem.max_exp().unwrap() >= blead_e {
                    let re = rem.max_exp().unwrap();
                    let qc = rem.terms[&re].clone() / &blead_c;
                    let sub = b.shift(re - blead_e).scale(&qc);
                    rem = &rem - &sub;
                }
                rem
            };
            a = b;
            b = normalize(&r);
        }
        normalize(&a)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a, 'b> Add<&'b LaurentV> for &'a LaurentV {
    type Output = LaurentV;
    fn add(self, rhs: &'b LaurentV) -> LaurentV {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl<'a, 'b> Sub<&'b LaurentV> for &'a LaurentV {
    type Output = LaurentV;
    fn sub(self, rhs: &'b LaurentV) -> LaurentV {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let n = -c.clone();
            out.add_term(*e, &n);
        }
        out
    }
}

impl<'a, 'b> Mul<&'b LaurentV> for &'a LaurentV {
    type Output = LaurentV;
    fn mul(self, rhs: &'b LaurentV) -> LaurentV {
        let mut out = LaurentV::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let p = c1 * c2;
                out.add_term(e1 + e2, &p);
            }
        }
        out
    }
}

impl<'a> Neg for &'a LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        LaurentV {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_binops {
    ($t:ty, $($trait:ident, $method:ident);*) => {$(
        impl $trait<$t> for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t { (&self).$method(&rhs) }
        }
        impl<'a> $trait<&'a $t> for $t {
            type Output = $t;
            fn $method(self, rhs: &'a $t) -> $t { (&self).$method(rhs) }
        }
        impl<'a> $trait<$t> for &'a $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t { self.$method(&rhs) }
        }
    )*};
}

forward_binops!(LaurentV, Add, add; Sub, sub; Mul, mul);

impl Neg for LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Tower elements: c0 + c2 r2 + c3 r3 + c23 r2 r3
// ---------------------------------------------------------------------------

/// [2]_q = v^4 + v^{-4} as a Laurent polynomial (the square of r2).
pub fn sq_r2() -> LaurentV {
    let mut t = BTreeMap::new();
    t.insert(4, Rat::one());
    t.insert(-4, Rat::one());
    LaurentV { terms: t }
}

/// [3]_q = v^8 + 1 + v^{-8} (the square of r3).
pub fn sq_r3() -> LaurentV {
    let mut t = BTreeMap::new();
    t.insert(8, Rat::one());
    t.insert(0, Rat::one());
    t.insert(-8, Rat::one());
    LaurentV { terms: t }
}

/// Element of Q(v)[r2, r3] / (r2^2 - [2]_q, r3^2 - [3]_q) with Laurent parts.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CoeffElem {
    pub c0: LaurentV,
    pub c2: LaurentV,
    pub c3: LaurentV,
    pub c23: LaurentV,
}

impl CoeffElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentV::one())
    }

    pub fn from_laurent(c0: LaurentV) -> Self {
        CoeffElem { c0, ..Default::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_laurent(LaurentV::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_laurent(LaurentV::monomial(0, r))
    }

    /// v^k, i.e. q^{k/4}.
    pub fn monomial_v(k: i64) -> Self {
        Self::from_laurent(LaurentV::monomial(k, Rat::one()))
    }

    /// q^n as v^{4n}.
    pub fn q_pow(n: i64) -> Self {
        Self::monomial_v(4 * n)
    }

    pub fn r2() -> Self {
        CoeffElem { c2: LaurentV::one(), ..Default::default() }
    }

    pub fn r3() -> Self {
        CoeffElem { c3: LaurentV::one(), ..Default::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c2.is_zero() && self.c3.is_zero() && self.c23.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c0.is_one() && self.c2.is_zero() && self.c3.is_zero() && self.c23.is_zero()
    }

    /// Some(laurent) if the element lies in the ground ring.
    pub fn as_laurent(&self) -> Option<&LaurentV> {
        if self.c2.is_zero() && self.c3.is_zero() && self.c23.is_zero() {
            Some(&self.c0)
        } else {
            None
        }
    }

    /// Sign conjugate r2 -> -r2.
    pub fn conj2(&self) -> Self {
        CoeffElem {
            c0: self.c0.clone(),
            c2: -&self.c2,
            c3: self.c3.clone(),
            c23: -&self.c23,
        }
    }

    /// Sign conjugate r3 -> -r3.
    pub fn conj3(&self) -> Self {
        CoeffElem {
            c0: self.c0.clone(),
            c2: self.c2.clone(),
            c3: -&self.c3,
            c23: -&self.c23,
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CoeffElem {
            c0: self.c0.scale(r),
            c2: self.c2.scale(r),
            c3: self.c3.scale(r),
            c23: self.c23.scale(r),
        }
    }

    pub fn scale_laurent(&self, l: &LaurentV) -> Self {
        CoeffElem {
            c0: &self.c0 * l,
            c2: &self.c2 * l,
            c3: &self.c3 * l,
            c23: &self.c23 * l,
        }
    }

    /// Field norm down to the ground ring: the product of the element with
    /// its three nontrivial sign conjugates.  Always a pure Laurent element.
    pub fn norm(&self) -> LaurentV {
        let p = self * &self.conj2();
        let p = &p * &(self.conj3() * self.conj2().conj3());
        debug_assert!(p.as_laurent().is_some());
        p.c0
    }

    /// Product of the three nontrivial sign conjugates, so that
    /// self * cofactor() = norm().
    pub fn norm_cofactor(&self) -> CoeffElem {
        &(self.conj2() * self.conj3()) * &self.conj2().conj3()
    }

    pub fn eval_one(&self) -> Option<Rat> {
        // r2 -> sqrt(2), r3 -> sqrt(3) are irrational, so a specialization to
        // a rational number only exists for pure Laurent elements.
        self.as_laurent().map(|l| l.eval_one())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl<'a, 'b> Add<&'b CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn add(self, rhs: &'b CoeffElem) -> CoeffElem {
        CoeffElem {
            c0: &self.c0 + &rhs.c0,
            c2: &self.c2 + &rhs.c2,
            c3: &self.c3 + &rhs.c3,
            c23: &self.c23 + &rhs.c23,
        }
    }
}

impl<'a, 'b> Sub<&'b CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn sub(self, rhs: &'b CoeffElem) -> CoeffElem {
        CoeffElem {
            c0: &self.c0 - &rhs.c0,
            c2: &self.c2 - &rhs.c2,
            c3: &self.c3 - &rhs.c3,
            c23: &self.c23 - &rhs.c23,
        }
    }
}

impl<'a, 'b> Mul<&'b CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn mul(self, rhs: &'b CoeffElem) -> CoeffElem {
        let s2 = sq_r2();
        let s3 = sq_r3();
        let (a0, a2, a3, a23) = (&self.c0, &self.c2, &self.c3, &self.c23);
        let (b0, b2, b3, b23) = (&rhs.c0, &rhs.c2, &rhs.c3, &rhs.c23);
        CoeffElem {
            c0: &(&(a0 * b0) + &(&(a2 * b2) * &s2))
                + &(&(&(a3 * b3) * &s3) + &(&(&(a23 * b23) * &s2) * &s3)),
            c2: &(&(a0 * b2) + &(a2 * b0)) + &(&(&(a3 * b23) + &(a23 * b3)) * &s3),
            c3: &(&(a0 * b3) + &(a3 * b0)) + &(&(&(a2 * b23) + &(a23 * b2)) * &s2),
            c23: &(&(a0 * b23) + &(a23 * b0)) + &(&(a2 * b3) + &(a3 * b2)),
        }
    }
}

impl<'a> Neg for &'a CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        CoeffElem {
            c0: -&self.c0,
            c2: -&self.c2,
            c3: -&self.c3,
            c23: -&self.c23,
        }
    }
}

forward_binops!(CoeffElem, Add, add; Sub, sub; Mul, mul);

impl Neg for CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        -&self
    }
}

// ---------------------------------------------------------------------------
// q-integers
// ---------------------------------------------------------------------------

/// Symmetric q-integer for a base q_b = v^{vstep}:
/// [n] = q_b^{n-1} + q_b^{n-3} + ... + q_b^{1-n}.
pub fn qint_base(n: i64, vstep: i64) -> CoeffElem {
    assert!(n >= 0, "qint requires n >= 0");
    let mut l = LaurentV::zero();
    let mut k = n - 1;
    while k >= 1 - n {
        l.add_term(vstep * k, &Rat::one());
        k -= 2;
    }
    CoeffElem::from_laurent(l)
}

/// [n]_q with q = v^4.
pub fn qint(n: i64) -> CoeffElem {
    qint_base(n, 4)
}

pub fn qfactorial_base(n: i64, vstep: i64) -> CoeffElem {
    assert!(n >= 0, "qfactorial requires n >= 0");
    let mut acc = CoeffElem::one();
    for k in 1..=n {
        acc = &acc * &qint_base(k, vstep);
    }
    acc
}

pub fn qfactorial(n: i64) -> CoeffElem {
    qfactorial_base(n, 4)
}

/// q-binomial [n choose k]; always a Laurent polynomial.
pub fn qbinomial(n: i64, k: i64) -> CoeffElem {
    assert!(0 <= k && k <= n, "qbinomial requires 0 <= k <= n");
    let num = qfactorial(n);
    let den = &qfactorial(k) * &qfactorial(n - k);
    let q = num
        .c0
        .div_exact(&den.c0)
        .expect("q-binomial divisibility failed");
    CoeffElem::from_laurent(q)
}

// ---------------------------------------------------------------------------
// Fractions
// ---------------------------------------------------------------------------

/// An element of the fraction field of the tower.  The denominator is kept
/// rationalized (pure Laurent, monic, min exponent 0), and the gcd of the
/// denominator with the numerator content is divided out, so equal fractions
/// compare equal structurally.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracElem {
    pub num: CoeffElem,
    pub den: CoeffElem,
}

impl FracElem {
    pub fn zero() -> Self {
        FracElem { num: CoeffElem::zero(), den: CoeffElem::one() }
    }

    pub fn one() -> Self {
        FracElem { num: CoeffElem::one(), den: CoeffElem::one() }
    }

    pub fn from_coeff(c: CoeffElem) -> Self {
        FracElem { num: c, den: CoeffElem::one() }
    }

    pub fn new(num: CoeffElem, den: CoeffElem) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = FracElem { num, den };
        f.normalize();
        f
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = CoeffElem::one();
            return;
        }
        // Rationalize the denominator down to the ground ring.
        let den_l = match self.den.as_laurent() {
            Some(l) => l.clone(),
            None => {
                let cof = self.den.norm_cofactor();
                self.num = &self.num * &cof;
                let n = self.den.norm();
                self.den = CoeffElem::from_laurent(n.clone());
                n
            }
        };
        // Divide out the common polynomial factor.
        let mut g = den_l.clone();
        for part in [&self.num.c0, &self.num.c2, &self.num.c3, &self.num.c23] {
            if !part.is_zero() {
                g = g.gcd(part);
            }
            if g.is_one() {
                break;
            }
        }
        let mut den = den_l;
        if !g.is_one() {
            den = den.div_exact(&g).unwrap();
            self.num = CoeffElem {
                c0: self.num.c0.div_exact(&g).unwrap_or_else(LaurentV::zero),
                c2: self.num.c2.div_exact(&g).unwrap_or_else(LaurentV::zero),
                c3: self.num.c3.div_exact(&g).unwrap_or_else(LaurentV::zero),
                c23: self.num.c23.div_exact(&g).unwrap_or_else(LaurentV::zero),
            };
        }
        // Canonical unit: denominator monic with min exponent 0.
        let s = den.min_exp().unwrap();
        let lead = den.terms[&den.max_exp().unwrap()].clone();
        if s != 0 || !lead.is_one() {
            let unit = LaurentV::monomial(-s, Rat::one() / lead);
            den = &den * &unit;
            self.num = self.num.scale_laurent(&unit);
        }
        self.den = CoeffElem::from_laurent(den);
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> FracElem {
        assert!(!self.is_zero(), "division by zero");
        FracElem::new(self.den.clone(), self.num.clone())
    }

    /// Some(c) if the fraction is actually a tower element.
    pub fn as_coeff(&self) -> Option<CoeffElem> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }
}

pub fn coeff_inv(a: &CoeffElem) -> FracElem {
    assert!(!a.is_zero(), "division by zero");
    FracElem::new(CoeffElem::one(), a.clone())
}

impl<'a, 'b> Add<&'b FracElem> for &'a FracElem {
    type Output = FracElem;
    fn add(self, rhs: &'b FracElem) -> FracElem {
        FracElem::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a, 'b> Sub<&'b FracElem> for &'a FracElem {
    type Output = FracElem;
    fn sub(self, rhs: &'b FracElem) -> FracElem {
        FracElem::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a, 'b> Mul<&'b FracElem> for &'a FracElem {
    type Output = FracElem;
    fn mul(self, rhs: &'b FracElem) -> FracElem {
        FracElem::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Neg for &'a FracElem {
    type Output = FracElem;
    fn neg(self) -> FracElem {
        FracElem { num: -&self.num, den: self.den.clone() }
    }
}

forward_binops!(FracElem, Add, add; Sub, sub; Mul, mul);

impl Neg for FracElem {
    type Output = FracElem;
    fn neg(self) -> FracElem {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Render v^k as a q-power with the exponent in lowest terms over 4,
/// e.g. k = -21 -> "q^{-21/4}", k = 4 -> "q", k = 0 -> "1".
pub fn render_qpow(k: i64) -> String {
    if k == 0 {
        return "1".to_string();
    }
    if k == 4 {
        return "q".to_string();
    }
    if k % 4 == 0 {
        return format!("q^{{{}}}", k / 4);
    }
    let g = num::integer::gcd(k.abs(), 4);
    format!("q^{{{}/{}}}", k / g, 4 / g)
}

fn render_laurent(l: &LaurentV, out: &mut Vec<String>, suffix: &str) {
    for (e, c) in l.terms.iter().rev() {
        let p = render_qpow(*e);
        let mut s = String::new();
        let abs = c.abs();
        if c.is_negative() {
            s.push('-');
        } else if !out.is_empty() {
            s.push('+');
        }
        let coeff_is_one = abs.is_one();
        if !coeff_is_one || (p == "1" && suffix.is_empty()) {
            s.push_str(&abs.to_string());
        }
        if p != "1" {
            if !coeff_is_one {
                s.push('*');
            }
            s.push_str(&p);
        }
        if !suffix.is_empty() {
            if p != "1" || !coeff_is_one {
                s.push('*');
            }
            s.push_str(suffix);
        }
        out.push(s);
    }
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        render_laurent(&self.c0, &mut parts, "");
        render_laurent(&self.c2, &mut parts, "[2]^{1/2}");
        render_laurent(&self.c3, &mut parts, "[3]^{1/2}");
        render_laurent(&self.c23, &mut parts, "[2]^{1/2}[3]^{1/2}");
        write!(f, "{}", parts.concat())
    }
}

impl fmt::Display for FracElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
