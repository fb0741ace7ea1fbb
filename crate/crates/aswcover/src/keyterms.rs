//! Key terms of Cartier images: per-point parameters, the α/β split, the
//! key term κ(C(ω)) and its coefficient c_ω, the partial order ≺ on basis
//! differentials, and the resulting lower bound #K on the Cartier rank.
//!
//! At a branch point P of the first-level cover (a pole of f of order d_P
//! with d_P | p−1), write γ_P = (p−1)/d_P, ε_P = −1 at ∞ and 1 otherwise,
//! and split γ_P(v−ε_P) = p·α_P(v) + β_P(v) with 0 ≤ β_P(v) < p. A basis
//! differential ω = y₂^{a₂}y₁^{a₁}x_P^v dx has a key term iff
//! β_P(v) ≤ a₁ + p·a₂, namely
//!
//!   κ(C(ω)) = y₂^{a₂}·y₁^{a₁−β}·x_P^{v−d_Pα} dx        (a₁ ≥ β)
//!   κ(C(ω)) = y₂^{a₂−1}·y₁^{a₁−β+p}·x_P^{v−d_Pα} dx    (a₁ < β),
//!
//! and its coefficient in C(ω) has the closed form implemented in
//! [`key_coefficient`]. At a pole of h of order e_P (P away from the
//! first-level branch locus), δ_P = (p−1)/e_P and δ_P(v−1) = pα + β; the
//! key term exists iff β ≤ a₂ and is y₂^{a₂−β}y₁^{a₁}x_P^{v−e_Pα}dx, with
//! coefficient extracted from the computed Cartier image (it is provably
//! nonzero, but has no published closed form).
//!
//! Distinct differentials can share a key term; they do so exactly when
//! they are incomparable under the order ≺ implemented by [`prec_compare`].
//! Counting the distinct key terms K = κ(H) bounds the Cartier rank from
//! below whenever each key term is hit by some ω with c_ω ≠ 0 — automatic
//! for p = 3, checked explicitly here for all p.
//!
//! Two misprints in the source order definition are resolved the only way
//! consistent with the incomparability criterion: the h-pole weight
//! comparison reads w + e_P·b₂ < v + e_P·a₂, and the final tie-break
//! compares w − e_P·α_P(w) with v − e_P·α_P(v).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::asw::{carry_coeffs, is_minimal, AswError, CoverSpec};
use crate::basis::{enumerate_basis, BasisElement, BasisError};
use crate::cartier::{basis_diff, cartier_diff, DiffNF};
use crate::gf::{FieldDesc, FqElem};
use crate::ratfunc::RatPoint;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KeyTermError {
    /// Neither f nor h has a pole at the requested point.
    #[error("not a branch point of the cover")]
    NotBranchPoint,
    /// A conductor fails the divisibility required of minimal covers.
    #[error("the key-term analysis needs a minimal cover")]
    NotMinimal,
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Asw(#[from] AswError),
}

/// Whether the point lies under first-level branching (pole of f) or only
/// under second-level branching (pole of h alone).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    InB1,
    InB2Only,
}

/// The per-point constants entering key-term computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointParams {
    pub point: RatPoint,
    pub class: PointClass,
    /// Pole order of f (class InB1) or of h (class InB2Only) at the point.
    pub d: u64,
    /// (p−1)/d.
    pub gamma: u64,
    /// −1 at infinity, +1 at finite points.
    pub eps: i64,
    /// Leading partial-fraction coefficient of f (resp. h) at the point.
    pub u: FqElem,
    /// The ambient prime.
    pub p: u64,
}

/// Computes the key-term parameters of a branch point.
pub fn point_params(c: &CoverSpec, point: &RatPoint) -> Result<PointParams, KeyTermError> {
    let f = c.field();
    let p = f.p();
    let (class, d, source) = {
        let d = c.d_at(point);
        if d > 0 {
            (PointClass::InB1, d, c.f())
        } else {
            let e = c.h_pole_order(point);
            if e == 0 {
                return Err(KeyTermError::NotBranchPoint);
            }
            (PointClass::InB2Only, e, c.h())
        }
    };
    if !(p - 1).is_multiple_of(d) {
        return Err(KeyTermError::NotMinimal);
    }
    let pf = source.pf_decompose(f);
    let u = match point {
        RatPoint::Infinity => pf.polypart.leading().cloned().unwrap_or_else(|| f.zero()),
        RatPoint::Finite(a) => pf
            .principal
            .get(a)
            .and_then(|cs| cs.last())
            .cloned()
            .unwrap_or_else(|| f.zero()),
    };
    Ok(PointParams {
        point: point.clone(),
        class,
        d,
        gamma: (p - 1) / d,
        eps: if *point == RatPoint::Infinity { -1 } else { 1 },
        u,
        p,
    })
}

/// Parameters for every branch point of the cover.
pub fn all_point_params(c: &CoverSpec) -> Result<BTreeMap<RatPoint, PointParams>, KeyTermError> {
    let mut out = BTreeMap::new();
    for pt in c.b2_points() {
        out.insert(pt.clone(), point_params(c, &pt)?);
    }
    Ok(out)
}

/// The split γ_P(v−ε_P) = p·α + β (first-level points) or
/// δ_P(v−1) = p·α + β (h-poles), with 0 ≤ β < p.
pub fn alpha_beta(pp: &PointParams, v: u64) -> (u64, u64) {
    let shift = match pp.class {
        PointClass::InB1 => (v as i64 - pp.eps) as u64,
        PointClass::InB2Only => v - 1,
    };
    let t = pp.gamma * shift;
    (t / pp.p, t % pp.p)
}

/// The key term of a basis differential homed at the parameter point, or
/// None when the membership condition fails.
pub fn key_term(omega: &BasisElement, pp: &PointParams) -> Option<BasisElement> {
    debug_assert_eq!(omega.point, pp.point);
    let p = pp.p;
    let (alpha, beta) = alpha_beta(pp, omega.v);
    let v = omega.v - pp.d * alpha;
    match pp.class {
        PointClass::InB1 => {
            if beta > omega.a1 + p * omega.a2 {
                return None;
            }
            Some(if omega.a1 >= beta {
                BasisElement {
                    point: pp.point.clone(),
                    a2: omega.a2,
                    a1: omega.a1 - beta,
                    v,
                }
            } else {
                BasisElement {
                    point: pp.point.clone(),
                    a2: omega.a2 - 1,
                    a1: omega.a1 + p - beta,
                    v,
                }
            })
        }
        PointClass::InB2Only => {
            if beta > omega.a2 {
                return None;
            }
            Some(BasisElement {
                point: pp.point.clone(),
                a2: omega.a2 - beta,
                a1: omega.a1,
                v,
            })
        }
    }
}

fn binom_mod(f: &FieldDesc, a: u64, b: u64) -> FqElem {
    if b > a {
        return f.zero();
    }
    let mut acc: u128 = 1;
    for j in 0..b {
        acc = acc * (a - j) as u128 / (j + 1) as u128;
    }
    f.from_int((acc % f.p() as u128) as i64)
}

/// Coefficient of the key term κ(C(ω)) inside C(ω). For first-level points
/// this is the closed form
///
///   c_ω = (−1)^β·u_P^{β/p}·binom(a₁, β)                       (a₁ ≥ β)
///   c_ω = a₂·u_P^{β/p}·Σ_{i=β−a₁}^{p−1−a₁} (−1)^{β+i+1}·
///         (p−1)!/(i!(p−i)!)·binom(a₁+i, β)                    (a₁ < β),
///
/// with u_P^{β/p} the β-th power of the p-th root of u_P. The a₂ factor is
/// the multinomial binom(a₂; a₂−1, l) carried by the j = a₂−1 term of the
/// y₂-expansion; it is invisible when a₂ = 1 but flips the sign of the
/// a₂ = 2 rows in characteristic 3 (verified against the extracted
/// coefficients). For h-poles the coefficient is read off the computed
/// Cartier image. Requires ω to have a key term (returns zero otherwise).
pub fn key_coefficient(c: &CoverSpec, omega: &BasisElement, pp: &PointParams) -> FqElem {
    let f = c.field();
    let Some(kappa) = key_term(omega, pp) else {
        return f.zero();
    };
    match pp.class {
        PointClass::InB1 => {
            let (_, beta) = alpha_beta(pp, omega.v);
            let uroot = f.pow(&f.pth_root(&pp.u), beta);
            if omega.a1 >= beta {
                let sign = if beta % 2 == 1 { -1 } else { 1 };
                let b = f.scale(sign, &binom_mod(f, omega.a1, beta));
                f.mul(&uroot, &b)
            } else {
                let carries = carry_coeffs(pp.p);
                let mut sum = f.zero();
                for i in (beta - omega.a1)..=(pp.p - 1 - omega.a1) {
                    let sign = if (beta + i + 1) % 2 == 1 { -1 } else { 1 };
                    let ci = f.from_int(carries[(i - 1) as usize]);
                    let term = f.mul(&ci, &binom_mod(f, omega.a1 + i, beta));
                    sum = f.add(&sum, &f.scale(sign, &term));
                }
                let sum = f.mul(&sum, &f.from_int(omega.a2 as i64));
                f.mul(&uroot, &sum)
            }
        }
        PointClass::InB2Only => {
            let img = cartier_diff(c, &basis_diff(f, omega));
            monomial_coefficient(f, &img, &kappa)
        }
    }
}

/// Coefficient of a single basis monomial in a normal-form differential.
pub fn monomial_coefficient(f: &FieldDesc, omega: &DiffNF, b: &BasisElement) -> FqElem {
    let Some(r) = omega.coefficient(b.a2, b.a1) else {
        return f.zero();
    };
    let pf = r.pf_decompose(f);
    match &b.point {
        RatPoint::Infinity => pf.polypart.coeff(f, b.v as usize),
        RatPoint::Finite(a) => pf
            .principal
            .get(a)
            .and_then(|cs| cs.get(b.v as usize - 1))
            .cloned()
            .unwrap_or_else(|| f.zero()),
    }
}

/// Outcome of comparing two basis differentials under the partial order ≺.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecOrder {
    Less,
    Greater,
    Incomparable,
}

/// Whether x ≺ y.
fn strictly_less(
    x: &BasisElement,
    y: &BasisElement,
    params: &BTreeMap<RatPoint, PointParams>,
) -> bool {
    let p = params[&y.point].p;
    let ex = x.a1 + p * x.a2;
    let ey = y.a1 + p * y.a2;
    if x.point != y.point {
        // (i) smaller y-weight, or (ii) tie broken by the point order.
        return ex < ey || (ex == ey && x.point < y.point);
    }
    let pp = &params[&x.point];
    let d = pp.d;
    match pp.class {
        PointClass::InB1 => {
            let sx = x.v + d * ex;
            let sy = y.v + d * ey;
            // (iii) smaller total weight, or (iv) tie with larger reduced
            // x-exponent.
            sx < sy
                || (sx == sy
                    && x.v as i64 - (d * alpha_beta(pp, x.v).0) as i64
                        > y.v as i64 - (d * alpha_beta(pp, y.v).0) as i64)
        }
        PointClass::InB2Only => {
            let tx = x.v + d * x.a2;
            let ty = y.v + d * y.a2;
            // (v) smaller weight; (vi) tie and smaller y₁-exponent;
            // (vii) full tie with larger reduced x-exponent.
            tx < ty
                || (tx == ty && x.a1 < y.a1)
                || (tx == ty
                    && x.a1 == y.a1
                    && x.v as i64 - (d * alpha_beta(pp, x.v).0) as i64
                        > y.v as i64 - (d * alpha_beta(pp, y.v).0) as i64)
        }
    }
}

/// Evaluates the partial order ≺ between two basis differentials.
pub fn prec_compare(
    a: &BasisElement,
    b: &BasisElement,
    params: &BTreeMap<RatPoint, PointParams>,
) -> PrecOrder {
    if strictly_less(a, b, params) {
        PrecOrder::Less
    } else if strictly_less(b, a, params) {
        PrecOrder::Greater
    } else {
        PrecOrder::Incomparable
    }
}

/// The key-term rank bound of a minimal cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankBound {
    /// K: the distinct key terms.
    pub key_terms: BTreeSet<BasisElement>,
    /// H: the basis differentials possessing a key term.
    pub with_key_term: Vec<BasisElement>,
    /// Whether every key term is hit by some ω with c_ω ≠ 0; then the
    /// Cartier rank is at least `bound`.
    pub hypothesis_ok: bool,
    /// #K.
    pub bound: u64,
}

/// Computes H, K = κ(H), the nonvanishing hypothesis, and the bound #K.
pub fn rank_lower_bound(c: &CoverSpec) -> Result<RankBound, KeyTermError> {
    if !is_minimal(c.datum()) {
        return Err(KeyTermError::NotMinimal);
    }
    let params = all_point_params(c)?;
    let basis = enumerate_basis(c)?;
    let mut key_terms = BTreeSet::new();
    let mut with_key_term = Vec::new();
    let mut hit_nonzero: BTreeSet<BasisElement> = BTreeSet::new();
    for omega in &basis {
        let pp = &params[&omega.point];
        let Some(kappa) = key_term(omega, pp) else {
            continue;
        };
        if !key_coefficient(c, omega, pp).is_zero() {
            hit_nonzero.insert(kappa.clone());
        }
        key_terms.insert(kappa);
        with_key_term.push(omega.clone());
    }
    let hypothesis_ok = key_terms.iter().all(|k| hit_nonzero.contains(k));
    let bound = key_terms.len() as u64;
    Ok(RankBound {
        key_terms,
        with_key_term,
        hypothesis_ok,
        bound,
    })
}

/// One row of a per-point key-term table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyTermRecord {
    pub a2: u64,
    pub a1: u64,
    pub v: u64,
    pub omega: String,
    pub alpha: u64,
    pub beta: u64,
    pub kappa: Option<String>,
    pub c: Option<FqElem>,
}

/// Renders y₂^{a₂}y₁^{a₁}x_P^v dx with the symbolic x_P (or x at ∞).
pub fn symbolic_name(a2: u64, a1: u64, v: u64, at_infinity: bool) -> String {
    let mut parts = Vec::new();
    for (sym, e) in [("y2", a2), ("y1", a1)] {
        match e {
            0 => {}
            1 => parts.push(sym.to_string()),
            _ => parts.push(format!("{sym}^{e}")),
        }
    }
    let x = if at_infinity { "x" } else { "x_P" };
    match v {
        0 => {}
        1 => parts.push(x.to_string()),
        _ => parts.push(format!("{x}^{v}")),
    }
    parts.push("dx".to_string());
    parts.join("*")
}

/// The key-term table of one branch point: a row per basis differential
/// homed there, in basis order, with κ and c_ω where they exist.
pub fn point_report(c: &CoverSpec, pp: &PointParams) -> Result<Vec<KeyTermRecord>, KeyTermError> {
    let at_inf = pp.point == RatPoint::Infinity;
    let basis = enumerate_basis(c)?;
    let mut rows = Vec::new();
    for omega in basis.iter().filter(|b| b.point == pp.point) {
        let (alpha, beta) = alpha_beta(pp, omega.v);
        let kappa = key_term(omega, pp);
        let coeff = kappa.as_ref().map(|_| key_coefficient(c, omega, pp));
        rows.push(KeyTermRecord {
            a2: omega.a2,
            a1: omega.a1,
            v: omega.v,
            omega: symbolic_name(omega.a2, omega.a1, omega.v, at_inf),
            alpha,
            beta,
            kappa: kappa.map(|k| symbolic_name(k.a2, k.a1, k.v, at_inf)),
            c: coeff,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asw::{sample_minimal_cover, MinimalProfile, WittVec2};
    use crate::cartier::{cartier_manin, rank_and_anumber};
    use crate::poly::Poly;
    use crate::ratfunc::RatFunc;

    /// One expected report row: (a₂, a₁, v, α, β, κ as (a₂, a₁, v)).
    type ReportRow = (u64, u64, u64, u64, u64, Option<(u64, u64, u64)>);

    fn f3() -> FieldDesc {
        FieldDesc::new(3, 1, vec![0, 1]).unwrap()
    }

    fn f9() -> FieldDesc {
        FieldDesc::new(3, 2, vec![1, 0, 1]).unwrap()
    }

    fn poly(f: &FieldDesc, cs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_coeffs(
            cs.iter().map(|&c| f.from_int(c)).collect(),
        ))
    }

    fn cover(f: &FieldDesc, f1: RatFunc, f2: RatFunc) -> CoverSpec {
        CoverSpec::new(f.clone(), WittVec2 { f1, f2 }, 2).unwrap()
    }

    fn elem(point: &RatPoint, a2: u64, a1: u64, v: u64) -> BasisElement {
        BasisElement {
            point: point.clone(),
            a2,
            a1,
            v,
        }
    }

    #[test]
    fn point_params_examples() {
        let f = f3();
        // f = x: ∞ carries a first-level pole of order 1 with unit leading
        // coefficient.
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero());
        let pp = point_params(&c, &RatPoint::Infinity).unwrap();
        assert_eq!(pp.class, PointClass::InB1);
        assert_eq!((pp.d, pp.gamma, pp.eps), (1, 2, -1));
        assert_eq!(pp.u, f.one());
        // h = 1/(x−1)²: the point 1 branches only at the second level.
        let h = RatFunc::linear_pow(&f, &f.one(), -2);
        let c = cover(&f, poly(&f, &[0, 1]), h);
        let pp = point_params(&c, &RatPoint::Finite(f.one())).unwrap();
        assert_eq!(pp.class, PointClass::InB2Only);
        assert_eq!((pp.d, pp.gamma, pp.eps), (2, 1, 1));
        assert_eq!(pp.u, f.one());
        // A non-branch point.
        assert_eq!(
            point_params(&c, &RatPoint::Finite(f.from_int(2))),
            Err(KeyTermError::NotBranchPoint)
        );
        // p = 5 with d = 3: 3 does not divide 4.
        let f5 = FieldDesc::new(5, 1, vec![0, 1]).unwrap();
        let c = CoverSpec::new(
            f5.clone(),
            WittVec2 {
                f1: RatFunc::from_poly(Poly::monomial(&f5, f5.one(), 3)),
                f2: RatFunc::zero(),
            },
            1,
        )
        .unwrap();
        assert_eq!(
            point_params(&c, &RatPoint::Infinity),
            Err(KeyTermError::NotMinimal)
        );
    }

    #[test]
    fn alpha_beta_examples() {
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero());
        let inf = point_params(&c, &RatPoint::Infinity).unwrap();
        assert_eq!(alpha_beta(&inf, 0), (0, 2));
        assert_eq!(alpha_beta(&inf, 1), (1, 1));
        // Finite first-level point of order 2 (f = x + 1/x²).
        let c = cover(
            &f,
            poly(&f, &[0, 1]).add(&f, &RatFunc::x_pow(&f, -2)),
            RatFunc::zero(),
        );
        let pp = point_params(&c, &RatPoint::Finite(f.zero())).unwrap();
        assert_eq!((pp.d, pp.gamma), (2, 1));
        assert_eq!(alpha_beta(&pp, 4), (1, 0));
        assert_eq!(alpha_beta(&pp, 1), (0, 0));
        // h-poles.
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::linear_pow(&f, &f.one(), -1));
        let pp = point_params(&c, &RatPoint::Finite(f.one())).unwrap();
        assert_eq!(alpha_beta(&pp, 1), (0, 0));
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::linear_pow(&f, &f.one(), -2));
        let pp = point_params(&c, &RatPoint::Finite(f.one())).unwrap();
        assert_eq!(alpha_beta(&pp, 2), (0, 1));
    }

    #[test]
    fn one_point_jump_one_table() {
        // d_∞ = 1: six differentials, three with key terms, coefficients
        // (1, −1, 1).
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero());
        let pp = point_params(&c, &RatPoint::Infinity).unwrap();
        let inf = RatPoint::Infinity;
        for (omega, expect) in [
            (elem(&inf, 0, 0, 0), None),
            (elem(&inf, 0, 0, 1), None),
            (elem(&inf, 0, 1, 0), None),
            (elem(&inf, 0, 2, 0), Some(elem(&inf, 0, 0, 0))),
            (elem(&inf, 1, 0, 0), Some(elem(&inf, 0, 1, 0))),
            (elem(&inf, 1, 1, 0), Some(elem(&inf, 0, 2, 0))),
        ] {
            assert_eq!(key_term(&omega, &pp), expect, "{}", omega.display(&f));
        }
        assert_eq!(key_coefficient(&c, &elem(&inf, 0, 2, 0), &pp), f.one());
        assert_eq!(
            key_coefficient(&c, &elem(&inf, 1, 0, 0), &pp),
            f.from_int(-1)
        );
        assert_eq!(key_coefficient(&c, &elem(&inf, 1, 1, 0), &pp), f.one());
        let rb = rank_lower_bound(&c).unwrap();
        assert!(rb.hypothesis_ok);
        assert_eq!(rb.bound, 3);
        let kappas: Vec<String> = rb.key_terms.iter().map(|k| k.display(&f)).collect();
        assert_eq!(kappas, ["dx", "y1*dx", "y1^2*dx"]);
        assert_eq!(rb.with_key_term.len(), 3);
    }

    #[test]
    fn one_point_jump_two_table() {
        // d_∞ = 2: the full sixteen-row table of (α, β, κ).
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 0, 1]), RatFunc::zero());
        let pp = point_params(&c, &RatPoint::Infinity).unwrap();
        let inf = RatPoint::Infinity;
        let expected: [ReportRow; 16] = [
            (0, 0, 0, 0, 1, None),
            (0, 0, 1, 0, 2, None),
            (0, 0, 2, 1, 0, Some((0, 0, 0))),
            (0, 0, 3, 1, 1, None),
            (0, 1, 0, 0, 1, Some((0, 0, 0))),
            (0, 1, 1, 0, 2, None),
            (0, 1, 2, 1, 0, Some((0, 1, 0))),
            (0, 2, 0, 0, 1, Some((0, 1, 0))),
            (0, 2, 1, 0, 2, Some((0, 0, 1))),
            (0, 2, 2, 1, 0, Some((0, 2, 0))),
            (1, 0, 0, 0, 1, Some((0, 2, 0))),
            (1, 0, 1, 0, 2, Some((0, 1, 1))),
            (1, 1, 0, 0, 1, Some((1, 0, 0))),
            (1, 1, 1, 0, 2, Some((0, 2, 1))),
            (1, 2, 0, 0, 1, Some((1, 1, 0))),
            (2, 0, 0, 0, 1, Some((1, 2, 0))),
        ];
        let basis = enumerate_basis(&c).unwrap();
        assert_eq!(basis.len(), 16);
        for (b, (a2, a1, v, alpha, beta, kap)) in basis.iter().zip(expected) {
            assert_eq!((b.a2, b.a1, b.v), (a2, a1, v));
            assert_eq!(alpha_beta(&pp, v), (alpha, beta), "{}", b.display(&f));
            let expect = kap.map(|(k2, k1, kv)| elem(&inf, k2, k1, kv));
            assert_eq!(key_term(b, &pp), expect, "{}", b.display(&f));
        }
        let rb = rank_lower_bound(&c).unwrap();
        assert_eq!(rb.with_key_term.len(), 12);
        assert_eq!(rb.bound, 9);
        assert!(rb.hypothesis_ok);
    }

    #[test]
    fn finite_jump_one_table() {
        // A finite first-level point of order 1 (f = x + 1/x at the point
        // 0): fourteen rows, eleven with pairwise distinct key terms.
        let f = f3();
        let c = cover(
            &f,
            poly(&f, &[0, 1]).add(&f, &RatFunc::x_pow(&f, -1)),
            RatFunc::zero(),
        );
        let zero = RatPoint::Finite(f.zero());
        let pp = point_params(&c, &zero).unwrap();
        assert_eq!((pp.d, pp.gamma, pp.eps), (1, 2, 1));
        let expected: [ReportRow; 14] = [
            (0, 0, 1, 0, 0, Some((0, 0, 1))),
            (0, 0, 2, 0, 2, None),
            (0, 0, 3, 1, 1, None),
            (0, 1, 1, 0, 0, Some((0, 1, 1))),
            (0, 1, 2, 0, 2, None),
            (0, 2, 1, 0, 0, Some((0, 2, 1))),
            (0, 2, 2, 0, 2, Some((0, 0, 2))),
            (1, 0, 1, 0, 0, Some((1, 0, 1))),
            (1, 0, 2, 0, 2, Some((0, 1, 2))),
            (1, 1, 1, 0, 0, Some((1, 1, 1))),
            (1, 1, 2, 0, 2, Some((0, 2, 2))),
            (1, 2, 1, 0, 0, Some((1, 2, 1))),
            (2, 0, 1, 0, 0, Some((2, 0, 1))),
            (2, 1, 1, 0, 0, Some((2, 1, 1))),
        ];
        let basis = enumerate_basis(&c).unwrap();
        let local: Vec<&BasisElement> = basis.iter().filter(|b| b.point == zero).collect();
        assert_eq!(local.len(), 14);
        let mut kappas = BTreeSet::new();
        for (b, (a2, a1, v, alpha, beta, kap)) in local.iter().zip(expected) {
            assert_eq!((b.a2, b.a1, b.v), (a2, a1, v));
            assert_eq!(alpha_beta(&pp, v), (alpha, beta), "{}", b.display(&f));
            let expect = kap.map(|(k2, k1, kv)| elem(&zero, k2, k1, kv));
            assert_eq!(key_term(b, &pp), expect, "{}", b.display(&f));
            if let Some(k) = key_term(b, &pp) {
                kappas.insert(k);
            }
        }
        assert_eq!(kappas.len(), 11);
    }

    #[test]
    fn h_pole_tables() {
        let f = f3();
        // e = 1: all six differentials are their own key terms.
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::linear_pow(&f, &f.one(), -1));
        let one = RatPoint::Finite(f.one());
        let pp = point_params(&c, &one).unwrap();
        let basis = enumerate_basis(&c).unwrap();
        let local: Vec<&BasisElement> = basis.iter().filter(|b| b.point == one).collect();
        assert_eq!(local.len(), 6);
        for b in &local {
            assert_eq!(key_term(b, &pp).as_ref(), Some(*b), "{}", b.display(&f));
            assert!(!key_coefficient(&c, b, &pp).is_zero());
        }
        // e = 2: nine differentials, six with (unique) key terms; the
        // v = 2 rows have β = 1 > a₂ = 0.
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::linear_pow(&f, &f.one(), -2));
        let pp = point_params(&c, &one).unwrap();
        let basis = enumerate_basis(&c).unwrap();
        let local: Vec<&BasisElement> = basis.iter().filter(|b| b.point == one).collect();
        assert_eq!(local.len(), 9);
        let mut with_kappa = 0;
        for b in &local {
            match (b.a2, b.v) {
                (0, 2) => assert_eq!(key_term(b, &pp), None, "{}", b.display(&f)),
                _ => {
                    assert_eq!(key_term(b, &pp).as_ref(), Some(*b), "{}", b.display(&f));
                    assert!(!key_coefficient(&c, b, &pp).is_zero());
                    with_kappa += 1;
                }
            }
        }
        assert_eq!(with_kappa, 6);
    }

    #[test]
    fn closed_form_matches_extraction() {
        // On first-level points, the closed form for c_ω must equal the
        // coefficient read off the actual Cartier image.
        let f = f9();
        for (f1, label) in [
            (poly(&f, &[0, 0, 1]), "one-point order 2"),
            (
                poly(&f, &[0, 1]).add(&f, &RatFunc::x_pow(&f, -1)),
                "two points order 1",
            ),
        ] {
            let c = cover(&f, f1, RatFunc::zero());
            let params = all_point_params(&c).unwrap();
            for omega in enumerate_basis(&c).unwrap() {
                let pp = &params[&omega.point];
                let Some(kappa) = key_term(&omega, pp) else {
                    continue;
                };
                let img = cartier_diff(&c, &basis_diff(&f, &omega));
                let extracted = monomial_coefficient(&f, &img, &kappa);
                assert_eq!(
                    key_coefficient(&c, &omega, pp),
                    extracted,
                    "{label}: {}",
                    omega.display(&f)
                );
                assert!(!extracted.is_zero(), "{label}: {}", omega.display(&f));
            }
        }
    }

    #[test]
    fn prec_compare_examples() {
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 0, 1]), RatFunc::zero());
        let params = all_point_params(&c).unwrap();
        let inf = RatPoint::Infinity;
        let dx = elem(&inf, 0, 0, 0);
        let y1dx = elem(&inf, 0, 1, 0);
        let x2dx = elem(&inf, 0, 0, 2);
        assert_eq!(prec_compare(&dx, &y1dx, &params), PrecOrder::Less);
        assert_eq!(prec_compare(&y1dx, &dx, &params), PrecOrder::Greater);
        assert_eq!(prec_compare(&x2dx, &y1dx, &params), PrecOrder::Incomparable);
        assert_eq!(prec_compare(&dx, &dx, &params), PrecOrder::Incomparable);
        // Distinct points compare by y-weight, then by the point order.
        let c = cover(
            &f,
            poly(&f, &[0, 1]).add(&f, &RatFunc::x_pow(&f, -1)),
            RatFunc::zero(),
        );
        let params = all_point_params(&c).unwrap();
        let zero = RatPoint::Finite(f.zero());
        let xpdx = elem(&zero, 0, 0, 1);
        assert_eq!(prec_compare(&xpdx, &y1dx, &params), PrecOrder::Less);
        assert_eq!(prec_compare(&dx, &xpdx, &params), PrecOrder::Less);
        assert_eq!(prec_compare(&xpdx, &dx, &params), PrecOrder::Greater);
    }

    #[test]
    fn incomparable_iff_same_key_term() {
        // Within H, incomparability is exactly coincidence of key terms;
        // outside the same point it never happens.
        let f = f9();
        for f1 in [
            poly(&f, &[0, 0, 1]),
            poly(&f, &[0, 1]).add(&f, &RatFunc::x_pow(&f, -1)),
        ] {
            let c = cover(&f, f1, RatFunc::linear_pow(&f, &f.one(), -1));
            let params = all_point_params(&c).unwrap();
            let rb = rank_lower_bound(&c).unwrap();
            for a in &rb.with_key_term {
                for b in &rb.with_key_term {
                    let ka = key_term(a, &params[&a.point]).unwrap();
                    let kb = key_term(b, &params[&b.point]).unwrap();
                    let incomparable = prec_compare(a, b, &params) == PrecOrder::Incomparable;
                    assert_eq!(
                        incomparable,
                        ka == kb,
                        "{} vs {}",
                        a.display(&f),
                        b.display(&f)
                    );
                }
            }
        }
    }

    #[test]
    fn same_key_term_equations() {
        // The equation system that characterizes equal key terms, checked
        // in both directions on all same-point pairs in H.
        let f = f3();
        let c = cover(
            &f,
            poly(&f, &[0, 0, 1]).add(&f, &RatFunc::x_pow(&f, -2)),
            RatFunc::linear_pow(&f, &f.one(), -2),
        );
        let params = all_point_params(&c).unwrap();
        let rb = rank_lower_bound(&c).unwrap();
        let p = 3i64;
        for a in &rb.with_key_term {
            for b in &rb.with_key_term {
                let ka = key_term(a, &params[&a.point]).unwrap();
                let kb = key_term(b, &params[&b.point]).unwrap();
                if a.point != b.point {
                    assert_ne!(ka, kb);
                    continue;
                }
                let pp = &params[&a.point];
                let d = pp.d as i64;
                let (av, bv) = (a.v as i64, b.v as i64);
                let (aa1, ba1) = (a.a1 as i64, b.a1 as i64);
                let (aa2, ba2) = (a.a2 as i64, b.a2 as i64);
                let (a_alpha, b_alpha) =
                    (alpha_beta(pp, a.v).0 as i64, alpha_beta(pp, b.v).0 as i64);
                let same = match pp.class {
                    PointClass::InB1 => {
                        av + d * (aa1 + p * aa2) == bv + d * (ba1 + p * ba2)
                            && av - d * a_alpha == bv - d * b_alpha
                    }
                    PointClass::InB2Only => {
                        av + d * aa2 == bv + d * ba2
                            && aa1 == ba1
                            && av - d * a_alpha == bv - d * b_alpha
                    }
                };
                assert_eq!(ka == kb, same, "{} vs {}", a.display(&f), b.display(&f));
            }
        }
    }

    #[test]
    fn vanishing_below_the_key_term() {
        // For ω ∈ H and any ω′ ≺ ω, the key term of ω does not occur in
        // C(ω′).
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 0, 1]), RatFunc::zero());
        let params = all_point_params(&c).unwrap();
        let basis = enumerate_basis(&c).unwrap();
        let rb = rank_lower_bound(&c).unwrap();
        for omega in &rb.with_key_term {
            let kappa = key_term(omega, &params[&omega.point]).unwrap();
            for other in &basis {
                if prec_compare(other, omega, &params) != PrecOrder::Less {
                    continue;
                }
                let img = cartier_diff(&c, &basis_diff(&f, other));
                assert!(
                    monomial_coefficient(&f, &img, &kappa).is_zero(),
                    "{} below {}",
                    other.display(&f),
                    omega.display(&f)
                );
            }
        }
    }

    #[test]
    fn rank_bound_is_attained_on_minimal_covers() {
        let f = f9();
        for (profile, seed) in [
            (MinimalProfile::new(1, 0, 0, 0), 41u64),
            (MinimalProfile::new(1, 0, 1, 0), 42),
            (MinimalProfile::new(0, 1, 0, 1), 43),
        ] {
            let c = sample_minimal_cover(&f, &profile, seed).unwrap();
            let rb = rank_lower_bound(&c).unwrap();
            let expect = 11 * profile.n1 as u64
                + 17 * profile.n2 as u64
                + 6 * profile.n3 as u64
                + 6 * profile.n4 as u64
                - 8;
            assert_eq!(rb.bound, expect, "profile {profile:?}");
            assert!(rb.hypothesis_ok);
            let (rank, _) = rank_and_anumber(&f, &cartier_manin(&c).unwrap());
            assert_eq!(rank, rb.bound, "profile {profile:?}");
        }
    }

    #[test]
    fn non_minimal_covers_are_rejected() {
        let f = f3();
        // f = 1/x + x, h = 1/x⁵ − 1/(x−1): valid but not minimal.
        let f1 = RatFunc::x_pow(&f, -1).add(&f, &poly(&f, &[0, 1]));
        let f2 = RatFunc::x_pow(&f, -5).sub(&f, &RatFunc::linear_pow(&f, &f.one(), -1));
        let c = cover(&f, f1, f2);
        assert_eq!(rank_lower_bound(&c), Err(KeyTermError::NotMinimal));
    }

    #[test]
    fn report_rows_and_json_shape() {
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero());
        let pp = point_params(&c, &RatPoint::Infinity).unwrap();
        let rows = point_report(&c, &pp).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].omega, "dx");
        assert_eq!(rows[1].omega, "x*dx");
        assert_eq!(rows[3].omega, "y1^2*dx");
        assert_eq!(rows[3].kappa.as_deref(), Some("dx"));
        assert_eq!(rows[4].kappa.as_deref(), Some("y1*dx"));
        assert_eq!(rows[4].c, Some(f.from_int(-1)));
        assert_eq!(rows[0].kappa, None);
        assert_eq!(rows[0].c, None);
        let json = serde_json::to_value(&rows[3]).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "a2": 0, "a1": 2, "v": 0,
                "omega": "y1^2*dx",
                "alpha": 0, "beta": 2,
                "kappa": "dx",
                "c": [1],
            })
        );
        // Symbolic names at finite points use x_P.
        assert_eq!(symbolic_name(1, 0, 2, false), "y2*x_P^2*dx");
        assert_eq!(symbolic_name(0, 0, 0, false), "dx");
        assert_eq!(symbolic_name(2, 2, 1, true), "y2^2*y1^2*x*dx");
    }

    #[test]
    fn five_torsion_coefficients_are_consistent() {
        // p = 5 sanity: closed form matches extraction on a one-point
        // cover with d = 1 (all β values 0..4 occur).
        let f5 = FieldDesc::new(5, 1, vec![0, 1]).unwrap();
        let c = CoverSpec::new(
            f5.clone(),
            WittVec2 {
                f1: RatFunc::from_poly(Poly::monomial(&f5, f5.one(), 1)),
                f2: RatFunc::zero(),
            },
            2,
        )
        .unwrap();
        let pp = point_params(&c, &RatPoint::Infinity).unwrap();
        let mut checked = 0;
        for omega in enumerate_basis(&c).unwrap() {
            let Some(kappa) = key_term(&omega, &pp) else {
                continue;
            };
            let img = cartier_diff(&c, &basis_diff(&f5, &omega));
            assert_eq!(
                key_coefficient(&c, &omega, &pp),
                monomial_coefficient(&f5, &img, &kappa),
                "{}",
                omega.display(&f5)
            );
            checked += 1;
        }
        assert!(checked > 10);
    }
}
