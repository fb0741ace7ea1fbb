//! Rational functions over F_{p^k} with all poles at rational points, kept in
//! a factored normal form, plus the Cartier operator on differentials of ℙ¹.
//!
//! A [`RatFunc`] is numerator polynomial over a denominator stored as a
//! multiset of linear factors {(x−a) ↦ multiplicity}. Every constructor and
//! arithmetic operation restores the canonical form (numerator nonvanishing
//! at each denominator root, zero = empty denominator), so representations
//! are unique and partial-fraction decomposition is exact bookkeeping — no
//! factorization is ever required.
//!
//! The local parameter at a finite point a is x_a = (x−a)⁻¹ and at infinity
//! x_∞ = x, matching the usual normalization for covers of ℙ¹. The Cartier
//! operator on k(x)dx acts per partial-fraction term:
//!
//! ```text
//! C(c·x^m dx)      = c^(1/p) · x^((m+1)/p − 1) dx   if m ≡ −1 (mod p), else 0
//! C(c·(x−a)^−j dx) = c^(1/p) · (x−a)^−((j−1)/p + 1) dx   if j ≡ 1 (mod p), else 0
//! ```
//!
//! (both specializations of C(x_P^(ap+ε_P) dx) = x_P^(a+ε_P) dx with
//! ε_∞ = −1 and ε_a = +1).

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf::{FieldDesc, FqElem, GfError};
use crate::poly::{series_div, Poly};

/// Errors from rational-function operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RfError {
    /// Laurent expansion requested at a pole of the function.
    #[error("expansion center is a pole of the function")]
    PoleAtCenter,
    /// A partial-fraction term violates the exchange format.
    #[error("invalid partial-fraction term: {0}")]
    BadTerm(String),
    /// A field element in a term is not canonical for the field.
    #[error(transparent)]
    Elem(#[from] GfError),
}

/// A point of ℙ¹(F_{p^k}): ∞ or a finite rational point.
///
/// The derived ordering puts ∞ before every finite point and orders finite
/// points lexicographically by coefficient vector; this is the linear order
/// used everywhere a deterministic point order is needed.
///
/// Serializes as the string `"inf"` or as the bare coefficient array of the
/// finite point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RatPoint {
    Infinity,
    Finite(FqElem),
}

impl Serialize for RatPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RatPoint::Infinity => s.serialize_str("inf"),
            RatPoint::Finite(a) => a.serialize(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatPointRaw {
    Name(String),
    Elem(FqElem),
}

impl<'de> Deserialize<'de> for RatPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RatPointRaw::deserialize(d)? {
            RatPointRaw::Name(s) if s == "inf" => Ok(RatPoint::Infinity),
            RatPointRaw::Name(s) => Err(serde::de::Error::custom(format!(
                "unknown point name {s:?} (expected \"inf\" or a coefficient array)"
            ))),
            RatPointRaw::Elem(e) => Ok(RatPoint::Finite(e)),
        }
    }
}

/// A rational function in factored canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    /// Denominator as {root a ↦ multiplicity ≥ 1}; the numerator does not
    /// vanish at any root, and the zero function has an empty map.
    den: BTreeMap<FqElem, u32>,
}

/// One term of the partial-fraction exchange format: `coeff·x^order` when
/// `point` is ∞, and `coeff·(x−point)^(−order)` (order ≥ 1) at a finite point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PFTerm {
    pub point: RatPoint,
    pub order: u64,
    pub coeff: FqElem,
}

/// The unique partial-fraction normal form of a [`RatFunc`]: a polynomial
/// part in x plus, per pole a, the coefficients c_1..c_m of (x−a)^{−1} …
/// (x−a)^{−m} (with c_m ≠ 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PFForm {
    pub polypart: Poly,
    pub principal: BTreeMap<FqElem, Vec<FqElem>>,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn from_poly(num: Poly) -> RatFunc {
        RatFunc {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn constant(c: FqElem) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn one(f: &FieldDesc) -> RatFunc {
        RatFunc::constant(f.one())
    }

    /// Builds num/Π(x−a)^m in canonical form, cancelling shared roots.
    pub fn new(f: &FieldDesc, num: Poly, den: BTreeMap<FqElem, u32>) -> RatFunc {
        let mut r = RatFunc { num, den };
        r.normalize(f);
        r
    }

    fn normalize(&mut self, f: &FieldDesc) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let roots: Vec<FqElem> = self.den.keys().cloned().collect();
        for a in roots {
            let linear = Poly::from_coeffs(vec![f.neg(&a), f.one()]);
            while self.den.get(&a).is_some_and(|&m| m > 0) && self.num.eval(f, &a).is_zero() {
                let (q, r) = self.num.divrem(f, &linear);
                debug_assert!(r.is_zero());
                self.num = q;
                *self.den.get_mut(&a).unwrap() -= 1;
            }
            if self.den.get(&a) == Some(&0) {
                self.den.remove(&a);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    /// Denominator roots with multiplicities.
    pub fn den(&self) -> &BTreeMap<FqElem, u32> {
        &self.den
    }

    /// The denominator expanded as a polynomial.
    pub fn den_poly(&self, f: &FieldDesc) -> Poly {
        let mut d = Poly::constant(f.one());
        for (a, &m) in &self.den {
            let linear = Poly::from_coeffs(vec![f.neg(a), f.one()]);
            d = d.mul(f, &linear.pow(f, m as u64));
        }
        d
    }

    /// x^e for any integer e (negative e gives 1/x^|e|).
    pub fn x_pow(f: &FieldDesc, e: i64) -> RatFunc {
        RatFunc::linear_pow(f, &f.zero(), e)
    }

    /// (x−a)^e for any integer e.
    pub fn linear_pow(f: &FieldDesc, a: &FqElem, e: i64) -> RatFunc {
        if e >= 0 {
            let linear = Poly::from_coeffs(vec![f.neg(a), f.one()]);
            RatFunc::from_poly(linear.pow(f, e as u64))
        } else {
            let mut den = BTreeMap::new();
            den.insert(a.clone(), e.unsigned_abs() as u32);
            RatFunc {
                num: Poly::constant(f.one()),
                den,
            }
        }
    }

    /// One partial-fraction building block: c·x^order at ∞, or
    /// c·(x−a)^(−order) at a finite point.
    pub fn pf_term(f: &FieldDesc, point: &RatPoint, order: u64, coeff: &FqElem) -> RatFunc {
        if coeff.is_zero() {
            return RatFunc::zero();
        }
        match point {
            RatPoint::Infinity => {
                RatFunc::from_poly(Poly::monomial(f, coeff.clone(), order as usize))
            }
            RatPoint::Finite(a) => {
                let mut den = BTreeMap::new();
                den.insert(a.clone(), order as u32);
                RatFunc {
                    num: Poly::constant(coeff.clone()),
                    den,
                }
            }
        }
    }

    pub fn add(&self, f: &FieldDesc, other: &RatFunc) -> RatFunc {
        // Common denominator: pointwise max multiplicity (exact lcm, the
        // denominators being split).
        let mut common: BTreeMap<FqElem, u32> = self.den.clone();
        for (a, &m) in &other.den {
            let e = common.entry(a.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |r: &RatFunc| -> Poly {
            let mut num = r.num.clone();
            for (a, &m) in &common {
                let have = r.den.get(a).copied().unwrap_or(0);
                if m > have {
                    let linear = Poly::from_coeffs(vec![f.neg(a), f.one()]);
                    num = num.mul(f, &linear.pow(f, (m - have) as u64));
                }
            }
            num
        };
        let num = lift(self).add(f, &lift(other));
        RatFunc::new(f, num, common)
    }

    pub fn neg(&self, f: &FieldDesc) -> RatFunc {
        RatFunc {
            num: self.num.neg(f),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, f: &FieldDesc, other: &RatFunc) -> RatFunc {
        self.add(f, &other.neg(f))
    }

    pub fn mul(&self, f: &FieldDesc, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(f, &other.num);
        let mut den = self.den.clone();
        for (a, &m) in &other.den {
            *den.entry(a.clone()).or_insert(0) += m;
        }
        RatFunc::new(f, num, den)
    }

    pub fn mul_scalar(&self, f: &FieldDesc, c: &FqElem) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.mul_scalar(f, c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, f: &FieldDesc, e: u64) -> RatFunc {
        let mut acc = RatFunc::one(f);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// The p-th power r^p, computed coefficientwise (Frobenius).
    pub fn frobenius(&self, f: &FieldDesc) -> RatFunc {
        let num = self.num.frobenius(f);
        let den = self
            .den
            .iter()
            .map(|(a, &m)| (a.clone(), m * f.p() as u32))
            .collect();
        // No cancellation can appear: roots are unchanged.
        RatFunc { num, den }
    }

    /// Evaluation at a finite point; None at a pole.
    pub fn eval(&self, f: &FieldDesc, at: &FqElem) -> Option<FqElem> {
        if self.den.contains_key(at) {
            return None;
        }
        let d = self.den_poly(f).eval(f, at);
        Some(f.div(&self.num.eval(f, at), &d).unwrap())
    }

    /// Pole order at P (0 when regular there). At ∞ this is
    /// deg(num) − deg(den) when positive.
    pub fn pole_order(&self, p: &RatPoint) -> u64 {
        match p {
            RatPoint::Infinity => {
                let dn = match self.num.degree() {
                    Some(d) => d as i64,
                    None => return 0,
                };
                let dd: i64 = self.den.values().map(|&m| m as i64).sum();
                (dn - dd).max(0) as u64
            }
            RatPoint::Finite(a) => self.den.get(a).copied().unwrap_or(0) as u64,
        }
    }

    /// Formal derivative d/dx, exact in characteristic p.
    pub fn derivative(&self, f: &FieldDesc) -> RatFunc {
        // r = N/Π(x−a)^{m_a} gives
        // r′ = [N′·Q − N·Σ_a m_a·Q/(x−a)] / (D·Q),  Q = Π(x−a).
        let mut q = Poly::constant(f.one());
        for a in self.den.keys() {
            q = q.mul(f, &Poly::from_coeffs(vec![f.neg(a), f.one()]));
        }
        let mut num = self.num.derivative(f).mul(f, &q);
        for a in self.den.keys() {
            let m = self.den[a];
            let (q_over, r) = q.divrem(f, &Poly::from_coeffs(vec![f.neg(a), f.one()]));
            debug_assert!(r.is_zero());
            let term = self
                .num
                .mul(f, &q_over)
                .mul_scalar(f, &f.from_int(m as i64));
            num = num.sub(f, &term);
        }
        let den = self.den.iter().map(|(a, &m)| (a.clone(), m + 1)).collect();
        RatFunc::new(f, num, den)
    }

    /// The unique partial-fraction normal form.
    pub fn pf_decompose(&self, f: &FieldDesc) -> PFForm {
        let den_poly = self.den_poly(f);
        let (polypart, rem) = self.num.divrem(f, &den_poly);
        let mut principal = BTreeMap::new();
        for (a, &m) in &self.den {
            // Expand rem / Π_{b≠a}(x−b)^{m_b} in t = x − a to order m;
            // the t^i coefficient is the (x−a)^{i−m} Laurent coefficient.
            let mut other = Poly::constant(f.one());
            for (b, &mb) in &self.den {
                if b != a {
                    let linear = Poly::from_coeffs(vec![f.neg(b), f.one()]);
                    other = other.mul(f, &linear.pow(f, mb as u64));
                }
            }
            let n = m as usize;
            let num_series = rem.shifted(f, a);
            let den_series = other.shifted(f, a);
            let s = series_div(f, num_series.coeffs(), den_series.coeffs(), n);
            // c_j = coefficient of (x−a)^{−j} = s[m−j], for j = 1..m.
            let cs: Vec<FqElem> = (1..=n).map(|j| s[n - j].clone()).collect();
            debug_assert!(!cs[n - 1].is_zero());
            principal.insert(a.clone(), cs);
        }
        PFForm {
            polypart,
            principal,
        }
    }

    /// Exact reassembly of a partial-fraction form.
    pub fn recombine(f: &FieldDesc, pf: &PFForm) -> RatFunc {
        let mut acc = RatFunc::from_poly(pf.polypart.clone());
        for (a, cs) in &pf.principal {
            for (j0, c) in cs.iter().enumerate() {
                if !c.is_zero() {
                    let term =
                        RatFunc::pf_term(f, &RatPoint::Finite(a.clone()), (j0 + 1) as u64, c);
                    acc = acc.add(f, &term);
                }
            }
        }
        acc
    }

    /// Whether this function is a reduced class representative: no
    /// partial-fraction term of p-divisible order — neither (x−a)^{−j} with
    /// p | j, nor x^m with p | m and m > 0 — and zero constant term.
    pub fn is_reduced(&self, f: &FieldDesc) -> bool {
        let p = f.p() as usize;
        let pf = self.pf_decompose(f);
        for (i, c) in pf.polypart.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 || i % p == 0 {
                return false;
            }
        }
        for cs in pf.principal.values() {
            for (j0, c) in cs.iter().enumerate() {
                if !c.is_zero() && (j0 + 1) % p == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Laurent coefficients a_0..a_{N−1} of the function in t = x − c.
    pub fn laurent_expand(
        &self,
        f: &FieldDesc,
        c: &FqElem,
        n: usize,
    ) -> Result<Vec<FqElem>, RfError> {
        if self.den.contains_key(c) {
            return Err(RfError::PoleAtCenter);
        }
        let num_series = self.num.shifted(f, c);
        let den_series = self.den_poly(f).shifted(f, c);
        Ok(series_div(f, num_series.coeffs(), den_series.coeffs(), n))
    }

    /// Partial-fraction terms in deterministic order (∞-part by ascending
    /// degree, then finite poles in point order by ascending order).
    pub fn to_pf_terms(&self, f: &FieldDesc) -> Vec<PFTerm> {
        let pf = self.pf_decompose(f);
        let mut terms = Vec::new();
        for (i, c) in pf.polypart.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push(PFTerm {
                    point: RatPoint::Infinity,
                    order: i as u64,
                    coeff: c.clone(),
                });
            }
        }
        for (a, cs) in &pf.principal {
            for (j0, c) in cs.iter().enumerate() {
                if !c.is_zero() {
                    terms.push(PFTerm {
                        point: RatPoint::Finite(a.clone()),
                        order: (j0 + 1) as u64,
                        coeff: c.clone(),
                    });
                }
            }
        }
        terms
    }

    /// Sums a list of partial-fraction terms (the JSON exchange format).
    pub fn from_pf_terms(f: &FieldDesc, terms: &[PFTerm]) -> Result<RatFunc, RfError> {
        let mut acc = RatFunc::zero();
        for t in terms {
            f.validate_elem(&t.coeff)?;
            if let RatPoint::Finite(a) = &t.point {
                f.validate_elem(a)?;
                if t.order == 0 {
                    return Err(RfError::BadTerm(
                        "finite-point term must have order >= 1".into(),
                    ));
                }
            }
            if t.order > u32::MAX as u64 {
                return Err(RfError::BadTerm("term order too large".into()));
            }
            acc = acc.add(f, &RatFunc::pf_term(f, &t.point, t.order, &t.coeff));
        }
        Ok(acc)
    }
}

/// The Cartier operator on differentials r·dx of ℙ¹: returns r′ with
/// C(r dx) = r′ dx, acting on each partial-fraction term by the monomial
/// rules in the module documentation.
pub fn cartier_rational(f: &FieldDesc, r: &RatFunc) -> RatFunc {
    let p = f.p() as usize;
    let pf = r.pf_decompose(f);
    let mut out = RatFunc::zero();
    for (m, c) in pf.polypart.coeffs().iter().enumerate() {
        if !c.is_zero() && (m + 1) % p == 0 {
            let term = Poly::monomial(f, f.pth_root(c), (m + 1) / p - 1);
            out = out.add(f, &RatFunc::from_poly(term));
        }
    }
    for (a, cs) in &pf.principal {
        for (j0, c) in cs.iter().enumerate() {
            let j = j0 + 1;
            if !c.is_zero() && j % p == 1 {
                let term = RatFunc::pf_term(
                    f,
                    &RatPoint::Finite(a.clone()),
                    ((j - 1) / p + 1) as u64,
                    &f.pth_root(c),
                );
                out = out.add(f, &term);
            }
        }
    }
    out
}
