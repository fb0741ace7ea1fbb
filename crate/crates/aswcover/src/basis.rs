//! Enumeration of the monomial basis of regular differentials on the curves
//! of a ℤ/p^nℤ-cover of ℙ¹ (n ≤ 2), and coordinates of differentials in
//! that basis.
//!
//! Every basis element is a monomial y₂^{a₂}·y₁^{a₁}·x_P^v·dx attached to a
//! branch point P, where x_P = 1/(x−P) for finite P and x_P = x at ∞. The
//! admissible exponents v are cut out by one valuation inequality per branch
//! point, driven by integer parameters λ(P,ν): the pole order of y_ν at the
//! points above P. Writing d_P = Σ_ν λ(P,ν) and A = Σ_ν a_ν λ(P,ν), the
//! home-point condition is
//!
//!   0 ≤ p^m·v ≤ (p−1)d_P − A − p^m − 1   at P = ∞,
//!   0 < p^m·v ≤ (p−1)d_P − A + p^m − 1   at finite P,
//!
//! with p^m the ramification index at P; candidates are then screened for
//! regularity above every other branch point. The λ come from the upper
//! ramification jumps u of the local tower at P: with m̃_s the jumps of the
//! successive Artin–Schreier steps (m̃_s = p^(s−1)u_s − (p−1)Σ_{σ<s}
//! p^(σ−1)u_σ), λ at the s-th ramified level is p^(m−s)·m̃_s. For a minimal
//! cover these inequalities specialize to coefficients p·d_P and
//! d_P(p²−p+1) at level-1 branch points and e_P(p−1−a₂)+p−1 at poles of the
//! second coordinate alone, which is checked by tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asw::{genus, AswError, BranchingDatum, CoverSpec, DatumRow};
use crate::cartier::DiffNF;
use crate::gf::{FieldDesc, FqElem};
use crate::ratfunc::RatPoint;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BasisError {
    /// Enumeration is implemented for covers with a level-1 branch point at
    /// ∞ (every sampled cover has one; Möbius-shift others first).
    #[error("basis enumeration requires a level-1 branch point at infinity")]
    UnsupportedCover,
    /// The element count disagrees with the genus — an internal
    /// inconsistency, never expected on valid covers.
    #[error("enumerated {got} basis elements but the genus is {expected}")]
    GenusMismatch { expected: u64, got: u64 },
    #[error(transparent)]
    Asw(#[from] AswError),
}

/// A monomial differential y₂^{a₂}·y₁^{a₁}·x_P^v·dx. Ordering: canonical
/// point order, then (a2, a1, v) lexicographic — this fixes matrix layouts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub point: RatPoint,
    pub a2: u64,
    pub a1: u64,
    pub v: u64,
}

impl BasisElement {
    /// Exponents in level order (a₁ first), length n.
    pub fn level_exponents(&self, n: usize) -> Vec<u64> {
        let mut a = vec![self.a1];
        if n == 2 {
            a.push(self.a2);
        }
        a
    }

    /// Compact display form, e.g. `y2*y1*x^2*dx` or `y1^2*(x-1)^-3*dx`.
    pub fn display(&self, f: &FieldDesc) -> String {
        let mut parts = Vec::new();
        for (sym, e) in [("y2", self.a2), ("y1", self.a1)] {
            match e {
                0 => {}
                1 => parts.push(sym.to_string()),
                _ => parts.push(format!("{sym}^{e}")),
            }
        }
        if self.v > 0 {
            let base = match &self.point {
                RatPoint::Infinity => "x".to_string(),
                RatPoint::Finite(a) if a.is_zero() => "x^-".to_string(),
                RatPoint::Finite(a) => format!("(x-{})^-", render_elem(f, a)),
            };
            match &self.point {
                RatPoint::Infinity => parts.push(if self.v == 1 {
                    base.clone()
                } else {
                    format!("{base}^{}", self.v)
                }),
                _ => parts.push(format!("{base}{}", self.v)),
            }
        }
        parts.push("dx".to_string());
        parts.join("*")
    }
}

fn render_elem(f: &FieldDesc, a: &FqElem) -> String {
    if f.k() == 1 {
        format!("{}", a.coeffs()[0])
    } else {
        format!("{:?}", a.coeffs())
    }
}

/// Integer ramification data of one datum row for basis inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaddenRow {
    pub point: RatPoint,
    /// Upper jumps N(P,ν) = e_ν − 1 per level (0 when unramified).
    pub n_vals: Vec<u64>,
    /// λ(P,ν): pole order of y_ν above P (0 when level ν is unramified).
    pub lambda: Vec<u64>,
    /// Number of ramified levels at P; ramification index is p^m.
    pub m: u32,
    /// d_P = Σ_ν λ(P,ν).
    pub d: u64,
    /// A = Σ_ν a_ν·λ(P,ν) for the supplied exponent vector.
    pub a: u64,
}

/// Per-row parameter table for a fixed exponent vector (a₁..a_n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaddenParams {
    pub rows: Vec<MaddenRow>,
}

/// Internal row data including valuations needed for regularity checks.
struct RowData {
    point: RatPoint,
    lambda: Vec<u64>,
    m: u32,
    d_sum: u64,
    /// p^m, the ramification index at the point.
    q: i128,
    /// Valuation of dx at the points above this branch point.
    vq_dx: i128,
}

fn row_data(p: u64, row: &DatumRow) -> RowData {
    let n = row.e.len();
    let u: Vec<u64> = row.e.iter().map(|&e| e.saturating_sub(1)).collect();
    let j0 = u.iter().position(|&x| x > 0).unwrap_or(n);
    let m = (n - j0) as u32;
    let mut lambda = vec![0u64; n];
    for s in 1..=(m as usize) {
        // Jump of the s-th local Artin–Schreier step, then spread by the
        // ramification of the steps above it.
        let mut mu = p.pow(s as u32 - 1) as i128 * u[j0 + s - 1] as i128;
        for sig in 1..s {
            mu -= (p - 1) as i128 * p.pow(sig as u32 - 1) as i128 * u[j0 + sig - 1] as i128;
        }
        debug_assert!(mu > 0);
        lambda[j0 + s - 1] = p.pow(m - s as u32) * mu as u64;
    }
    let q = p.pow(m) as i128;
    let mut d_q: i128 = 0;
    for s in 1..=(m as usize) {
        d_q += row.e[j0 + s - 1] as i128 * (p.pow(s as u32) - p.pow(s as u32 - 1)) as i128;
    }
    let vq_dx = if row.point == RatPoint::Infinity {
        d_q - 2 * q
    } else {
        d_q
    };
    RowData {
        point: row.point.clone(),
        d_sum: lambda.iter().sum(),
        lambda,
        m,
        q,
        vq_dx,
    }
}

/// The per-row integer table (jumps, λ, d, A) for an exponent vector given
/// in level order (a₁ first, length = datum levels).
pub fn madden_params(datum: &BranchingDatum, exponents: &[u64]) -> MaddenParams {
    assert_eq!(
        exponents.len(),
        datum.levels(),
        "need one exponent per level"
    );
    let rows = datum
        .rows
        .iter()
        .map(|row| {
            let rd = row_data(datum.p, row);
            let a = exponents.iter().zip(&rd.lambda).map(|(&a, &l)| a * l).sum();
            MaddenRow {
                point: rd.point,
                n_vals: row.e.iter().map(|&e| e.saturating_sub(1)).collect(),
                lambda: rd.lambda,
                m: rd.m,
                d: rd.d_sum,
                a,
            }
        })
        .collect();
    MaddenParams { rows }
}

/// Valuation of the x-part x_P^v at the points above the branch point `at`
/// (ramification index q there).
fn x_part_valuation(home: &RatPoint, at: &RatPoint, q: i128, v: i128) -> i128 {
    if home == at {
        return -q * v;
    }
    match (home, at) {
        // 1/(x−P) vanishes at ∞; x vanishes at 0.
        (RatPoint::Finite(_), RatPoint::Infinity) => q * v,
        (RatPoint::Infinity, RatPoint::Finite(a)) if a.is_zero() => q * v,
        _ => 0,
    }
}

/// ω = y-part · x_home^v · dx is regular above every branch point. y_ν with
/// unramified level ν is integral above the point (valuation ≥ 0 suffices).
fn regular_everywhere(rows: &[RowData], home: &RatPoint, a_levels: &[u64], v: i128) -> bool {
    rows.iter().all(|r| {
        let mut val = r.vq_dx;
        for (nu, &a) in a_levels.iter().enumerate() {
            val -= a as i128 * r.lambda[nu] as i128;
        }
        val += x_part_valuation(home, &r.point, r.q, v);
        val >= 0
    })
}

/// Enumerates the regular-differential basis of the top curve of the cover,
/// in canonical order. The element count must equal the genus.
pub fn enumerate_basis(c: &CoverSpec) -> Result<Vec<BasisElement>, BasisError> {
    let p = c.field().p();
    let datum = c.datum();
    let n = c.n() as usize;
    if !datum
        .rows
        .iter()
        .any(|r| r.point == RatPoint::Infinity && r.e[0] > 0)
    {
        return Err(BasisError::UnsupportedCover);
    }
    let g = genus(datum, c.n())?;
    let rows: Vec<RowData> = datum.rows.iter().map(|r| row_data(p, r)).collect();
    let mut out = Vec::new();
    for home in &rows {
        let is_inf = home.point == RatPoint::Infinity;
        let a2_range = if n == 2 { p } else { 1 };
        for a2 in 0..a2_range {
            for a1 in 0..p {
                let a_levels = if n == 2 { vec![a1, a2] } else { vec![a1] };
                let a_weight: i128 = a_levels
                    .iter()
                    .zip(&home.lambda)
                    .map(|(&a, &l)| a as i128 * l as i128)
                    .sum();
                let rhs = (p - 1) as i128 * home.d_sum as i128 - a_weight
                    + if is_inf { -home.q - 1 } else { home.q - 1 };
                let vmin: i128 = if is_inf { 0 } else { 1 };
                if rhs < home.q * vmin {
                    continue;
                }
                for v in vmin..=rhs.div_euclid(home.q) {
                    if regular_everywhere(&rows, &home.point, &a_levels, v) {
                        out.push(BasisElement {
                            point: home.point.clone(),
                            a2,
                            a1,
                            v: v as u64,
                        });
                    }
                }
            }
        }
    }
    out.sort();
    if out.len() as u64 != g {
        return Err(BasisError::GenusMismatch {
            expected: g,
            got: out.len() as u64,
        });
    }
    Ok(out)
}

/// Coordinates of a normal-form differential in a basis, by matching
/// partial-fraction terms of each y-coefficient to basis monomials. The flag
/// is true when some nonzero term has no matching basis element (the
/// differential is not in the span — e.g. not regular).
pub fn coordinates(f: &FieldDesc, omega: &DiffNF, basis: &[BasisElement]) -> (Vec<FqElem>, bool) {
    let mut index = BTreeMap::new();
    for (i, b) in basis.iter().enumerate() {
        index.insert((b.point.clone(), b.a2, b.a1, b.v), i);
    }
    let mut vec = vec![f.zero(); basis.len()];
    let mut remainder = false;
    for ((a2, a1), r) in omega.terms() {
        let pf = r.pf_decompose(f);
        for (v, c) in pf.polypart.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match index.get(&(RatPoint::Infinity, a2, a1, v as u64)) {
                Some(&i) => vec[i] = c.clone(),
                None => remainder = true,
            }
        }
        for (a, cs) in &pf.principal {
            for (j0, c) in cs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let key = (RatPoint::Finite(a.clone()), a2, a1, (j0 + 1) as u64);
                match index.get(&key) {
                    Some(&i) => vec[i] = c.clone(),
                    None => remainder = true,
                }
            }
        }
    }
    (vec, remainder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asw::{sample_minimal_cover, MinimalProfile, WittVec2};
    use crate::poly::Poly;
    use crate::ratfunc::RatFunc;

    fn f3() -> FieldDesc {
        FieldDesc::new(3, 1, vec![0, 1]).unwrap()
    }

    fn cover(f: &FieldDesc, f1: RatFunc, f2: RatFunc, n: u8) -> CoverSpec {
        CoverSpec::new(f.clone(), WittVec2 { f1, f2 }, n).unwrap()
    }

    fn poly(f: &FieldDesc, cs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_coeffs(
            cs.iter().map(|&c| f.from_int(c)).collect(),
        ))
    }

    fn be(point: RatPoint, a2: u64, a1: u64, v: u64) -> BasisElement {
        BasisElement { point, a2, a1, v }
    }

    #[test]
    fn madden_params_minimal_rows() {
        let f = f3();
        // ∞ with conductors [2,4]: λ = (3, 7) — the pole orders of y₁, y₂.
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero(), 2);
        let mp = madden_params(c.datum(), &[1, 1]);
        assert_eq!(mp.rows.len(), 1);
        assert_eq!(mp.rows[0].n_vals, vec![1, 3]);
        assert_eq!(mp.rows[0].lambda, vec![3, 7]);
        assert_eq!(mp.rows[0].d, 10);
        assert_eq!(mp.rows[0].a, 10);
        // [3,7]: λ = (6, 14) = (p·d, d(p²−p+1)) for d = 2.
        let c = cover(&f, poly(&f, &[0, 0, 1]), RatFunc::zero(), 2);
        let mp = madden_params(c.datum(), &[2, 1]);
        assert_eq!(mp.rows[0].lambda, vec![6, 14]);
        assert_eq!(mp.rows[0].a, 2 * 6 + 14);
        // Second-coordinate-only pole [0,2]: λ = (0, 1).
        let c = cover(
            &f,
            poly(&f, &[0, 1]),
            RatFunc::linear_pow(&f, &f.one(), -1),
            2,
        );
        let mp = madden_params(c.datum(), &[0, 1]);
        let row1 = &mp.rows[1];
        assert_eq!(row1.lambda, vec![0, 1]);
        assert_eq!(row1.m, 1);
        assert_eq!((row1.d, row1.a), (1, 1));
    }

    #[test]
    fn basis_of_one_point_jump_one_cover() {
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero(), 2);
        let basis = enumerate_basis(&c).unwrap();
        let inf = RatPoint::Infinity;
        assert_eq!(
            basis,
            vec![
                be(inf.clone(), 0, 0, 0), // dx
                be(inf.clone(), 0, 0, 1), // x dx
                be(inf.clone(), 0, 1, 0), // y₁ dx
                be(inf.clone(), 0, 2, 0), // y₁² dx
                be(inf.clone(), 1, 0, 0), // y₂ dx
                be(inf, 1, 1, 0),         // y₂ y₁ dx
            ]
        );
    }

    #[test]
    fn basis_counts_for_one_point_jump_two_cover() {
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 0, 1]), RatFunc::zero(), 2);
        let basis = enumerate_basis(&c).unwrap();
        assert_eq!(basis.len(), 16);
        assert_eq!(c.genus(2).unwrap(), 16);
        // Count with fixed y-exponents: (a2,a1) = (0,0) admits v = 0..3.
        let vs: Vec<u64> = basis
            .iter()
            .filter(|b| b.a2 == 0 && b.a1 == 0)
            .map(|b| b.v)
            .collect();
        assert_eq!(vs, vec![0, 1, 2, 3]);
    }

    #[test]
    fn per_point_counts_of_the_running_example() {
        let f = f3();
        let f1 = RatFunc::x_pow(&f, -1).add(&f, &RatFunc::x_pow(&f, 1));
        let f2 = RatFunc::x_pow(&f, -5).sub(&f, &RatFunc::linear_pow(&f, &f.one(), -1));
        let c = cover(&f, f1, f2, 2);
        let basis = enumerate_basis(&c).unwrap();
        assert_eq!(basis.len(), 32);
        let count_at = |pt: &RatPoint| basis.iter().filter(|b| &b.point == pt).count();
        assert_eq!(count_at(&RatPoint::Infinity), 6);
        assert_eq!(count_at(&RatPoint::Finite(f.zero())), 20);
        assert_eq!(count_at(&RatPoint::Finite(f.one())), 6);
    }

    #[test]
    fn table_counts_for_each_row_class() {
        let f = f3();
        // Finite jump-1 point (together with the mandatory ∞ row): 14.
        let c = cover(
            &f,
            RatFunc::x_pow(&f, 1).add(&f, &RatFunc::x_pow(&f, -1)),
            RatFunc::zero(),
            2,
        );
        let basis = enumerate_basis(&c).unwrap();
        let finite0 = basis
            .iter()
            .filter(|b| b.point == RatPoint::Finite(f.zero()))
            .count();
        assert_eq!(finite0, 14);
        assert_eq!(basis.len(), 20); // 6 at ∞ + 14 at 0
                                     // Finite jump-2 point: 24.
        let c = cover(
            &f,
            RatFunc::x_pow(&f, 1).add(&f, &RatFunc::x_pow(&f, -2)),
            RatFunc::zero(),
            2,
        );
        let basis = enumerate_basis(&c).unwrap();
        let finite0 = basis
            .iter()
            .filter(|b| b.point == RatPoint::Finite(f.zero()))
            .count();
        assert_eq!(finite0, 24);
        // Pole of the second coordinate, order 1: 6 elements; order 2: 9.
        for (ord, expect) in [(1u64, 6usize), (2, 9)] {
            let c = cover(
                &f,
                poly(&f, &[0, 1]),
                RatFunc::linear_pow(&f, &f.one(), -(ord as i64)),
                2,
            );
            let basis = enumerate_basis(&c).unwrap();
            let at_one = basis
                .iter()
                .filter(|b| b.point == RatPoint::Finite(f.one()))
                .count();
            assert_eq!(at_one, expect, "order {ord}");
            // a₁ ranges freely over 0..p at such points.
            for b in basis
                .iter()
                .filter(|b| b.point == RatPoint::Finite(f.one()))
            {
                assert!(b.a1 < 3);
            }
        }
    }

    #[test]
    fn one_level_covers() {
        let f = f3();
        // y³ − y = x: rational.
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero(), 1);
        assert_eq!(enumerate_basis(&c).unwrap().len(), 0);
        // y³ − y = x²: genus 1, basis {dx}.
        let c = cover(&f, poly(&f, &[0, 0, 1]), RatFunc::zero(), 1);
        let basis = enumerate_basis(&c).unwrap();
        assert_eq!(basis, vec![be(RatPoint::Infinity, 0, 0, 0)]);
        // y³ − y = 1/x + x: genus 2, both elements at the finite pole.
        let c = cover(
            &f,
            RatFunc::x_pow(&f, 1).add(&f, &RatFunc::x_pow(&f, -1)),
            RatFunc::zero(),
            1,
        );
        let basis = enumerate_basis(&c).unwrap();
        assert_eq!(
            basis,
            vec![
                be(RatPoint::Finite(f.zero()), 0, 0, 1),
                be(RatPoint::Finite(f.zero()), 0, 1, 1),
            ]
        );
    }

    #[test]
    fn unsupported_without_infinity_row() {
        let f = f3();
        let c = cover(&f, RatFunc::x_pow(&f, -1), RatFunc::zero(), 2);
        assert_eq!(
            enumerate_basis(&c).unwrap_err(),
            BasisError::UnsupportedCover
        );
    }

    #[test]
    fn minimal_specialized_inequalities_agree() {
        // For minimal covers the general inequalities must reproduce the
        // closed forms: at level-1 points rhs coefficients (p·d_P,
        // d_P(p²−p+1)); at second-level poles e_P(p−1−a₂)+p−1.
        let f9 = FieldDesc::new(3, 2, vec![1, 0, 1]).unwrap();
        for seed in [11u64, 12, 13] {
            let c = sample_minimal_cover(&f9, &MinimalProfile::new(1, 1, 1, 1), seed).unwrap();
            let p = 3i128;
            let basis = enumerate_basis(&c).unwrap();
            let mut expected = Vec::new();
            for row in &c.datum().rows {
                let (e1, e2) = (row.e[0], row.e[1]);
                for a2 in 0..3u64 {
                    for a1 in 0..3u64 {
                        if e1 > 0 {
                            let d = (e1 - 1) as i128;
                            let rhs = p * d * (p - 1 - a1 as i128)
                                + d * (p * p - p + 1) * (p - 1 - a2 as i128)
                                - p * p
                                - 1;
                            let (lo, add) = if row.point == RatPoint::Infinity {
                                (0i128, 0i128)
                            } else {
                                (1, 2 * p * p)
                            };
                            let rhs = rhs + add;
                            let mut v = lo;
                            while p * p * v <= rhs {
                                expected.push(be(row.point.clone(), a2, a1, v as u64));
                                v += 1;
                            }
                        } else {
                            let e = (e2 - 1) as i128;
                            let rhs = e * (p - 1 - a2 as i128) + p - 1;
                            let mut v = 1i128;
                            while p * v <= rhs {
                                expected.push(be(row.point.clone(), a2, a1, v as u64));
                                v += 1;
                            }
                        }
                    }
                }
            }
            expected.sort();
            assert_eq!(basis, expected, "seed {seed}");
        }
    }

    #[test]
    fn sampled_covers_count_matches_genus() {
        let f9 = FieldDesc::new(3, 2, vec![1, 0, 1]).unwrap();
        for (profile, seed) in [
            (MinimalProfile::new(1, 0, 0, 0), 21u64),
            (MinimalProfile::new(0, 1, 1, 0), 22),
            (MinimalProfile::new(2, 1, 0, 2), 23),
        ] {
            let c = sample_minimal_cover(&f9, &profile, seed).unwrap();
            let basis = enumerate_basis(&c).unwrap();
            assert_eq!(basis.len() as u64, c.genus(2).unwrap());
        }
    }

    #[test]
    fn coordinates_match_terms() {
        let f = f3();
        let c = cover(&f, poly(&f, &[0, 1]), RatFunc::zero(), 2);
        let basis = enumerate_basis(&c).unwrap();
        // dx → unit vector at position 0.
        let omega = DiffNF::from_term(0, 0, RatFunc::one(&f));
        let (v, rem) = coordinates(&f, &omega, &basis);
        assert!(!rem);
        assert_eq!(v[0], f.one());
        assert!(v[1..].iter().all(|c| c.is_zero()));
        // y₂y₁dx + 2·x dx → two coordinates.
        let mut omega = DiffNF::from_term(1, 1, RatFunc::one(&f));
        omega.add_term(
            &f,
            0,
            0,
            &RatFunc::from_poly(Poly::from_coeffs(vec![f.zero(), f.from_int(2)])),
        );
        let (v, rem) = coordinates(&f, &omega, &basis);
        assert!(!rem);
        assert_eq!(v[5], f.one());
        assert_eq!(v[1], f.from_int(2));
        // x^100 dx is outside the basis.
        let omega = DiffNF::from_term(0, 0, RatFunc::x_pow(&f, 100));
        let (_, rem) = coordinates(&f, &omega, &basis);
        assert!(rem);
        // A principal-part term at a non-branch point is outside too.
        let omega = DiffNF::from_term(0, 0, RatFunc::linear_pow(&f, &f.from_int(2), -1));
        let (_, rem) = coordinates(&f, &omega, &basis);
        assert!(rem);
    }

    #[test]
    fn display_forms() {
        let f = f3();
        assert_eq!(be(RatPoint::Infinity, 0, 0, 0).display(&f), "dx");
        assert_eq!(be(RatPoint::Infinity, 1, 2, 1).display(&f), "y2*y1^2*x*dx");
        assert_eq!(
            be(RatPoint::Finite(f.one()), 0, 1, 2).display(&f),
            "y1*(x-1)^-2*dx"
        );
        assert_eq!(
            be(RatPoint::Finite(f.zero()), 1, 0, 1).display(&f),
            "y2*x^-1*dx"
        );
    }

    #[test]
    fn basis_element_json_shape() {
        let b = be(RatPoint::Infinity, 1, 0, 2);
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"point":"inf","a2":1,"a1":0,"v":2}"#
        );
    }
}
