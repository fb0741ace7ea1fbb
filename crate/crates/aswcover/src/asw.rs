//! Length-2 Witt vectors over k(x), Artin–Schreier–Witt class reduction, and
//! the combinatorics of the resulting ℤ/p²ℤ-covers of ℙ¹: branching data,
//! genus, minimality, ramification-jump formulas, and a seeded sampler of
//! minimal covers.
//!
//! A vector (f₁, f₂) of rational functions defines the tower
//! y₁^p − y₁ = f₁, y₂^p − y₂ = g(y₁) + f₂ with g = [`g1_poly`]. Adding
//! ℘(u̲) = F(u̲) − u̲ to the vector gives an isomorphic tower, and every class
//! contains a unique *reduced* representative — no partial-fraction term of
//! p-divisible order and no constant term in either coordinate
//! ([`asw_reduce`]). All numeric invariants (conductors, genus, jumps) are
//! read off the reduced form.
//!
//! Branching data bookkeeping: at a branch point P the level-i conductor is
//! e_{P,i} = u_{P,i} + 1 where u_{P,i} = max{p^{i−l}·(pole order of f_l at P)
//! : l ≤ i}, and e_{P,i} = 0 where level i is unramified. A datum is
//! *minimal* when every row starts with a conductor e with (e−1) | (p−1) at
//! its first ramified level and grows exactly by u ↦ p·u afterwards.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldDesc, FqElem, GfError};
use crate::poly::Poly;
use crate::ratfunc::{RatFunc, RatPoint, RfError};

/// Errors from cover construction and the datum formulas.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AswError {
    /// The first coordinate reduces to a constant: it lies in ℘(k̄(x)) and
    /// defines no ℤ/p²ℤ-cover.
    #[error("first Witt coordinate reduces to a constant; not a cover")]
    NotACover,
    /// Reduction must remove a constant c with nonzero trace; the reduced
    /// representative only exists over an extension field (any degree
    /// divisible by p works).
    #[error("reduced form needs y^p - y = c solvable; extend the field (degree p)")]
    NeedsFieldExtension,
    /// A Witt vector that is required to be reduced is not.
    #[error("Witt vector is not reduced")]
    NotReduced,
    /// The genus formula did not produce a nonnegative integer — the datum
    /// is not realizable.
    #[error("genus formula gave a non-integral or negative value; invalid datum")]
    NonIntegralGenus,
    /// A formula that requires a minimal datum was applied to a non-minimal
    /// one.
    #[error("branching datum is not minimal")]
    NotMinimal,
    /// The requested sampling profile cannot be realized.
    #[error("profile infeasible: {0}")]
    ProfileInfeasible(String),
    /// Not enough rational points for the requested branch points.
    #[error("field has {have} elements but the profile needs {needed} distinct finite points")]
    FieldTooSmall { needed: u64, have: u128 },
    /// Malformed cover parameters.
    #[error("invalid cover: {0}")]
    BadCover(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Rational(#[from] RfError),
}

/// A length-2 Witt vector of rational functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittVec2 {
    pub f1: RatFunc,
    pub f2: RatFunc,
}

impl WittVec2 {
    pub fn zero() -> WittVec2 {
        WittVec2 {
            f1: RatFunc::zero(),
            f2: RatFunc::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f1.is_zero() && self.f2.is_zero()
    }

    /// Whether both coordinates are reduced class representatives.
    pub fn is_reduced(&self, f: &FieldDesc) -> bool {
        self.f1.is_reduced(f) && self.f2.is_reduced(f)
    }
}

/// Integer carry coefficients C(p,i)/p, i = 1..p−1, of the length-2 Witt
/// addition law (computed in characteristic 0, then used mod p).
pub(crate) fn carry_coeffs(p: u64) -> Vec<i64> {
    (1..p)
        .map(|i| {
            let mut binom: u128 = 1;
            for j in 0..i {
                binom = binom * (p - j) as u128 / (j + 1) as u128;
            }
            ((binom / p as u128) % p as u128) as i64
        })
        .collect()
}

/// Witt sum: (a₁+b₁, a₂+b₂ − Σ_{i=1}^{p−1} (C(p,i)/p)·a₁^i·b₁^{p−i}).
pub fn witt_add2(f: &FieldDesc, a: &WittVec2, b: &WittVec2) -> WittVec2 {
    let p = f.p();
    let f1 = a.f1.add(f, &b.f1);
    let mut carry = RatFunc::zero();
    if !a.f1.is_zero() && !b.f1.is_zero() {
        let coeffs = carry_coeffs(p);
        let mut a_pow = a.f1.clone();
        for i in 1..p {
            let term = a_pow
                .mul(f, &b.f1.pow(f, p - i))
                .mul_scalar(f, &f.from_int(coeffs[(i - 1) as usize]));
            carry = carry.add(f, &term);
            if i + 1 < p {
                a_pow = a_pow.mul(f, &a.f1);
            }
        }
    }
    let f2 = a.f2.add(f, &b.f2).sub(f, &carry);
    WittVec2 { f1, f2 }
}

/// Witt negation; for odd p this is coordinate-wise (the carry
/// Σ C(p,i)(−1)^{p−i} vanishes).
pub fn witt_neg2(f: &FieldDesc, a: &WittVec2) -> WittVec2 {
    WittVec2 {
        f1: a.f1.neg(f),
        f2: a.f2.neg(f),
    }
}

pub fn witt_sub2(f: &FieldDesc, a: &WittVec2, b: &WittVec2) -> WittVec2 {
    witt_add2(f, a, &witt_neg2(f, b))
}

/// The isogeny ℘ = F − id: Frobenius each coordinate, then Witt-subtract the
/// vector itself. Additive as a map.
pub fn witt_wp2(f: &FieldDesc, w: &WittVec2) -> WittVec2 {
    let fw = WittVec2 {
        f1: w.f1.frobenius(f),
        f2: w.f2.frobenius(f),
    };
    witt_sub2(f, &fw, w)
}

/// The polynomial g with y₂^p − y₂ = g(y₁) + f₂ on the second level:
/// g(T) = Σ_{i=1}^{p−1} (−1)^i · (p−1)!/(i!(p−i)!) · T^(p(p−i)+i).
pub fn g1_poly(f: &FieldDesc) -> Poly {
    let p = f.p();
    let coeffs = carry_coeffs(p);
    let mut g = Poly::zero();
    for i in 1..p {
        let sign = if i % 2 == 1 { -1 } else { 1 };
        let c = f.from_int(sign * coeffs[(i - 1) as usize]);
        let deg = (p * (p - i) + i) as usize;
        g = g.add(f, &Poly::monomial(f, c, deg));
    }
    g
}

enum Offense {
    /// A partial-fraction term of p-divisible order at a point.
    Term(RatPoint, u64, FqElem),
    /// A nonzero constant term.
    Constant(FqElem),
}

/// Highest-order p-divisible partial-fraction term, if any, else the
/// constant term if nonzero.
fn find_offense(f: &FieldDesc, r: &RatFunc) -> Option<Offense> {
    let p = f.p() as usize;
    let pf = r.pf_decompose(f);
    for (m, c) in pf.polypart.coeffs().iter().enumerate().rev() {
        if m > 0 && m % p == 0 && !c.is_zero() {
            return Some(Offense::Term(RatPoint::Infinity, m as u64, c.clone()));
        }
    }
    for (a, cs) in &pf.principal {
        for (j0, c) in cs.iter().enumerate().rev() {
            let j = j0 + 1;
            if j % p == 0 && !c.is_zero() {
                return Some(Offense::Term(
                    RatPoint::Finite(a.clone()),
                    j as u64,
                    c.clone(),
                ));
            }
        }
    }
    let c0 = pf.polypart.coeff(f, 0);
    if !c0.is_zero() {
        return Some(Offense::Constant(c0));
    }
    None
}

/// Whether r is a constant (possibly zero) rational function.
fn is_constant(r: &RatFunc) -> bool {
    r.den().is_empty() && r.num().degree().is_none_or(|d| d == 0)
}

/// Reduces a Witt vector to the canonical representative of its
/// Artin–Schreier–Witt class.
///
/// Returns (reduced, witness) with input = reduced + ℘(witness) exactly.
/// Each elimination step replaces a term c·x_P^(pj) by the strictly
/// lower-order term c^(1/p)·x_P^j, so the process terminates; the first
/// coordinate is cleared before the second because its witnesses perturb the
/// second coordinate through the addition carry.
pub fn asw_reduce(f: &FieldDesc, w: &WittVec2) -> Result<(WittVec2, WittVec2), AswError> {
    let mut witness = WittVec2::zero();
    let mut cur = w.clone();
    for coord in [1, 2] {
        loop {
            let target = if coord == 1 { &cur.f1 } else { &cur.f2 };
            let step = match find_offense(f, target) {
                None => break,
                Some(Offense::Term(point, order, coeff)) => {
                    RatFunc::pf_term(f, &point, order / f.p(), &f.pth_root(&coeff))
                }
                Some(Offense::Constant(c)) => {
                    if coord == 1 && is_constant(&cur.f1) {
                        // Entirely constant: the class is trivial over k̄.
                        return Err(AswError::NotACover);
                    }
                    match f.solve_artin_schreier(&c) {
                        Ok(s) => RatFunc::constant(s),
                        Err(GfError::NoSolution) => return Err(AswError::NeedsFieldExtension),
                        Err(e) => return Err(e.into()),
                    }
                }
            };
            let step_vec = if coord == 1 {
                WittVec2 {
                    f1: step,
                    f2: RatFunc::zero(),
                }
            } else {
                WittVec2 {
                    f1: RatFunc::zero(),
                    f2: step,
                }
            };
            witness = witt_add2(f, &witness, &step_vec);
            cur = witt_sub2(f, w, &witt_wp2(f, &witness));
        }
    }
    if cur.f1.is_zero() {
        return Err(AswError::NotACover);
    }
    debug_assert!(cur.is_reduced(f));
    Ok((cur, witness))
}

/// One row of a branching datum: the conductors e_{P,1}..e_{P,n} at a branch
/// point (0 = unramified at that level).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumRow {
    pub point: RatPoint,
    pub e: Vec<u64>,
}

/// The branching datum of a cover: one row per branch point, sorted in
/// canonical point order, plus the characteristic for the validity rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingDatum {
    pub p: u64,
    pub rows: Vec<DatumRow>,
}

impl BranchingDatum {
    /// Number of Witt levels (row length).
    pub fn levels(&self) -> usize {
        self.rows.first().map_or(0, |r| r.e.len())
    }

    pub fn row_at(&self, point: &RatPoint) -> Option<&DatumRow> {
        self.rows.iter().find(|r| &r.point == point)
    }
}

/// Branching datum of a reduced vector: conductors from pole orders by the
/// max-rule u_{P,i} = max{p^(i−l)·ord_P(f_l) : l ≤ i}.
pub fn branching_datum(f: &FieldDesc, w: &WittVec2, n: u8) -> BranchingDatum {
    let p = f.p();
    let coords = [&w.f1, &w.f2];
    let mut points: Vec<RatPoint> = Vec::new();
    let mut seen = BTreeMap::new();
    for coord in coords.iter().take(n as usize) {
        let mut pts: Vec<RatPoint> = coord.den().keys().cloned().map(RatPoint::Finite).collect();
        if coord.pole_order(&RatPoint::Infinity) > 0 {
            pts.push(RatPoint::Infinity);
        }
        for pt in pts {
            if seen.insert(pt.clone(), ()).is_none() {
                points.push(pt);
            }
        }
    }
    points.sort();
    let rows = points
        .into_iter()
        .map(|pt| {
            let mut e = Vec::new();
            for i in 1..=n as usize {
                let u = (1..=i)
                    .map(|l| p.pow((i - l) as u32) * coords[l - 1].pole_order(&pt))
                    .max()
                    .unwrap();
                e.push(if u > 0 { u + 1 } else { 0 });
            }
            DatumRow { point: pt, e }
        })
        .collect();
    BranchingDatum { p, rows }
}

/// Checks the three realizability conditions on a datum; returns overall
/// validity and a list of human-readable violations.
///
/// 1. a nonzero first-level conductor is never ≡ 1 (mod p);
/// 2. e_{P,j} ≥ p·e_{P,j−1} − p + 1 whenever e_{P,j−1} > 0;
/// 3. when that inequality is strict — including every fresh branching with
///    e_{P,j−1} = 0 — the new conductor is ≢ 1 (mod p).
pub fn validate_datum(d: &BranchingDatum) -> (bool, Vec<String>) {
    let p = d.p;
    let mut violations = Vec::new();
    for (i, row) in d.rows.iter().enumerate() {
        if row.e.iter().all(|&e| e == 0) {
            violations.push(format!("row {i}: all levels unramified"));
        }
        if row.e.first().is_some_and(|&e1| e1 > 0 && e1 % p == 1) {
            violations.push(format!("row {i}: e_1 = {} ≡ 1 mod {p}", row.e[0]));
        }
        for j in 1..row.e.len() {
            let prev = row.e[j - 1];
            let cur = row.e[j];
            if prev > 0 {
                let bound = p * prev - p + 1;
                if cur < bound {
                    violations.push(format!(
                        "row {i}: e_{} = {cur} < p·e_{} − p + 1 = {bound}",
                        j + 1,
                        j
                    ));
                } else if cur > bound && cur % p == 1 {
                    violations.push(format!(
                        "row {i}: strict growth with e_{} = {cur} ≡ 1 mod {p}",
                        j + 1
                    ));
                }
            } else if cur > 0 && cur % p == 1 {
                violations.push(format!(
                    "row {i}: fresh branching with e_{} = {cur} ≡ 1 mod {p}",
                    j + 1
                ));
            }
        }
    }
    (violations.is_empty(), violations)
}

/// Upper jumps of a row: u = e − 1 at ramified levels (0 when unramified).
fn row_jumps(row: &DatumRow) -> Vec<u64> {
    row.e.iter().map(|&e| e.saturating_sub(1)).collect()
}

/// A datum is minimal when each row's first ramified conductor e has
/// (e−1) | (p−1) and each later jump is exactly p times the previous one.
pub fn is_minimal(d: &BranchingDatum) -> bool {
    d.rows.iter().all(|row| {
        let u = row_jumps(row);
        let Some(j0) = u.iter().position(|&x| x > 0) else {
            return false;
        };
        if !(d.p - 1).is_multiple_of(u[j0]) {
            return false;
        }
        (j0 + 1..u.len()).all(|l| u[l] == d.p * u[l - 1])
    })
}

/// Genus of the level-i curve of the tower:
/// g_i = 1 − p^i + ½·Σ_{l≤i} (Σ_P e_{P,l}) · (p^l − p^(l−1)).
pub fn genus(d: &BranchingDatum, level: u8) -> Result<u64, AswError> {
    let p = d.p as i128;
    let i = level as usize;
    if i == 0 || i > d.levels() {
        return Err(AswError::BadCover(format!("no level {i} in this datum")));
    }
    let mut s: i128 = 0;
    for l in 1..=i {
        let e_sum: i128 = d.rows.iter().map(|r| r.e[l - 1] as i128).sum();
        s += e_sum * (p.pow(l as u32) - p.pow(l as u32 - 1));
    }
    let doubled = 2 * (1 - p.pow(i as u32)) + s;
    if doubled % 2 != 0 || doubled < 0 {
        return Err(AswError::NonIntegralGenus);
    }
    Ok((doubled / 2) as u64)
}

/// Upper ramification jumps at one point together with the jump of the
/// intermediate Artin–Schreier extension of the tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationJumps {
    pub m: Vec<u64>,
    pub mtilde: u64,
}

impl RamificationJumps {
    pub fn new(m: Vec<u64>, p: u64) -> RamificationJumps {
        let mtilde = intermediate_jump(&m, p);
        RamificationJumps { m, mtilde }
    }
}

/// Jump of the top Artin–Schreier step of the tower, from the upper jumps
/// m_1..m_n at one point: m̃ = p^(n−1)·m_n − (p−1)·Σ_{i<n} p^(i−1)·m_i.
pub fn intermediate_jump(m: &[u64], p: u64) -> u64 {
    let n = m.len();
    assert!(n >= 1, "need at least one jump");
    let p = p as i128;
    let mut val = p.pow((n - 1) as u32) * m[n - 1] as i128;
    for (i, &mi) in m.iter().enumerate().take(n - 1) {
        val -= (p - 1) * p.pow(i as u32) * mi as i128;
    }
    debug_assert!(val > 0);
    val as u64
}

/// Exact a-number of a union of one-point Artin–Schreier covers with jumps
/// d_P | p−1 (level-1 curves of minimal towers):
/// a = Σ_P (p−1)d/4 for even d, (p−1)(d²−1)/4 for odd d.
pub fn fp_anumber_minimal(d: &BranchingDatum) -> Result<u64, AswError> {
    if d.levels() != 1 {
        return Err(AswError::BadCover("expected a one-level datum".into()));
    }
    let p = d.p;
    let mut total = 0u64;
    for row in &d.rows {
        let dd = row.e[0].saturating_sub(1);
        if dd == 0 || !(p - 1).is_multiple_of(dd) {
            return Err(AswError::NotMinimal);
        }
        total += if dd % 2 == 0 {
            (p - 1) * dd / 4
        } else {
            (p - 1) * (dd * dd - 1) / 4
        };
    }
    Ok(total)
}

/// Interval bounds for the a-number of a one-point Artin–Schreier cover with
/// ramification jump d, given the a-number of the base curve:
///
/// lower = Σ_{i=q+1}^{p−1} (⌊id/p⌋ − ⌊id/p − (1−1/p)(q+1)d/p⌋), q = (p−1)/2;
/// upper = p·a_base + Σ_{i=1}^{p−1} (⌊id/p⌋ − (p−i)·⌊id/p²⌋).
pub fn bc_bounds(d: u64, p: u64, a_base: u64) -> (u64, u64) {
    let (d, p) = (d as i128, p as i128);
    let q = (p - 1) / 2;
    let mut lower: i128 = 0;
    for i in q + 1..p {
        let t1 = (i * d).div_euclid(p);
        let t2 = (i * d * p - (p - 1) * (q + 1) * d).div_euclid(p * p);
        lower += t1 - t2;
    }
    let mut upper: i128 = p * a_base as i128;
    for i in 1..p {
        upper += (i * d).div_euclid(p) - (p - i) * (i * d).div_euclid(p * p);
    }
    (lower.max(0) as u64, upper.max(0) as u64)
}

/// Row-type counts of a minimal two-level datum: n1 rows with first-level
/// jump 1, n2 with jump 2, n3 with a simple second-level-only pole, n4 with
/// a double one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalProfile {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub n4: u32,
}

impl MinimalProfile {
    pub fn new(n1: u32, n2: u32, n3: u32, n4: u32) -> MinimalProfile {
        MinimalProfile { n1, n2, n3, n4 }
    }

    pub fn rows(&self) -> u32 {
        self.n1 + self.n2 + self.n3 + self.n4
    }

    /// Classifies a two-level minimal datum into type counts; None when some
    /// row is not of the four minimal types [2, p+1], [3, 2p+1], [0, 2],
    /// [0, 3].
    pub fn from_datum(d: &BranchingDatum) -> Option<MinimalProfile> {
        if d.levels() != 2 {
            return None;
        }
        let p = d.p;
        let mut prof = MinimalProfile::new(0, 0, 0, 0);
        for row in &d.rows {
            match (row.e[0], row.e[1]) {
                (e1, e2) if e1 == 2 && e2 == p + 1 => prof.n1 += 1,
                (e1, e2) if e1 == 3 && e2 == 2 * p + 1 => prof.n2 += 1,
                (0, 2) => prof.n3 += 1,
                (0, 3) => prof.n4 += 1,
                _ => return None,
            }
        }
        Some(prof)
    }
}

/// A validated ℤ/p^nℤ-cover of ℙ¹ (n ≤ 2): field, reduced Witt vector, and
/// cached branching datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    field: FieldDesc,
    n: u8,
    witt: WittVec2,
    datum: BranchingDatum,
}

impl CoverSpec {
    /// Wraps an already-reduced vector; errors if it is not reduced, if n is
    /// not 1 or 2, or if the first coordinate has no pole.
    pub fn new(field: FieldDesc, witt: WittVec2, n: u8) -> Result<CoverSpec, AswError> {
        if !(n == 1 || n == 2) {
            return Err(AswError::BadCover(format!("n = {n}, expected 1 or 2")));
        }
        if n == 1 && !witt.f2.is_zero() {
            return Err(AswError::BadCover(
                "a one-level cover must have zero second coordinate".into(),
            ));
        }
        if !witt.is_reduced(&field) {
            return Err(AswError::NotReduced);
        }
        if witt.f1.is_zero() {
            return Err(AswError::NotACover);
        }
        let datum = branching_datum(&field, &witt, n);
        Ok(CoverSpec {
            field,
            n,
            witt,
            datum,
        })
    }

    /// Reduces an arbitrary vector first; returns the cover and the witness
    /// with input = reduced + ℘(witness).
    pub fn reduce(
        field: FieldDesc,
        witt: WittVec2,
        n: u8,
    ) -> Result<(CoverSpec, WittVec2), AswError> {
        let (reduced, witness) = asw_reduce(&field, &witt)?;
        if n == 1 && !reduced.f2.is_zero() {
            return Err(AswError::BadCover(
                "a one-level cover must have zero second coordinate".into(),
            ));
        }
        Ok((CoverSpec::new(field, reduced, n)?, witness))
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn witt(&self) -> &WittVec2 {
        &self.witt
    }

    /// f₁, the level-1 equation's right-hand side.
    pub fn f(&self) -> &RatFunc {
        &self.witt.f1
    }

    /// f₂, the extra rational part on level 2.
    pub fn h(&self) -> &RatFunc {
        &self.witt.f2
    }

    pub fn datum(&self) -> &BranchingDatum {
        &self.datum
    }

    /// Branch points of the level-1 subcover (poles of f₁).
    pub fn b1_points(&self) -> Vec<RatPoint> {
        self.datum
            .rows
            .iter()
            .filter(|r| r.e[0] > 0)
            .map(|r| r.point.clone())
            .collect()
    }

    /// All branch points of the tower.
    pub fn b2_points(&self) -> Vec<RatPoint> {
        self.datum.rows.iter().map(|r| r.point.clone()).collect()
    }

    /// Pole order of f₁ at P (the level-1 jump d_P), 0 off B₁.
    pub fn d_at(&self, point: &RatPoint) -> u64 {
        self.witt.f1.pole_order(point)
    }

    /// Pole order of f₂ at P.
    pub fn h_pole_order(&self, point: &RatPoint) -> u64 {
        self.witt.f2.pole_order(point)
    }

    /// Genus of the level-i curve.
    pub fn genus(&self, level: u8) -> Result<u64, AswError> {
        genus(&self.datum, level)
    }

    /// The level-1 subcover as its own (one-level) cover.
    pub fn level1(&self) -> CoverSpec {
        CoverSpec::new(
            self.field.clone(),
            WittVec2 {
                f1: self.witt.f1.clone(),
                f2: RatFunc::zero(),
            },
            1,
        )
        .expect("level-1 part of a valid cover is valid")
    }

    /// JSON form: {"p":…, "k":…, "field":{…}, "n":…, "f":{"terms":[…]}, "h":{…}}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.field.p(),
            "field": self.field,
            "n": self.n,
            "f": {"terms": self.witt.f1.to_pf_terms(&self.field)},
            "h": {"terms": self.witt.f2.to_pf_terms(&self.field)},
        })
    }

    /// Parses the JSON form, reducing the vector if necessary.
    pub fn from_json(value: &serde_json::Value) -> Result<CoverSpec, AswError> {
        let field: FieldDesc = serde_json::from_value(value["field"].clone())
            .map_err(|e| AswError::BadCover(format!("bad field: {e}")))?;
        if let Some(p) = value["p"].as_u64() {
            if p != field.p() {
                return Err(AswError::BadCover("p does not match field.p".into()));
            }
        }
        let n = value.get("n").and_then(|v| v.as_u64()).unwrap_or(2) as u8;
        let parse_rf = |key: &str| -> Result<RatFunc, AswError> {
            match value.get(key) {
                None | Some(serde_json::Value::Null) => Ok(RatFunc::zero()),
                Some(v) => {
                    let terms: Vec<crate::ratfunc::PFTerm> =
                        serde_json::from_value(v["terms"].clone())
                            .map_err(|e| AswError::BadCover(format!("bad {key}: {e}")))?;
                    Ok(RatFunc::from_pf_terms(&field, &terms)?)
                }
            }
        };
        let witt = WittVec2 {
            f1: parse_rf("f")?,
            f2: parse_rf("h")?,
        };
        Ok(CoverSpec::reduce(field, witt, n)?.0)
    }
}

fn random_nonzero(f: &FieldDesc, rng: &mut ChaCha8Rng) -> FqElem {
    loop {
        let idx = rng.gen_range(0..f.order());
        let e = f.nth_element(idx);
        if !e.is_zero() {
            return e;
        }
    }
}

fn random_elem(f: &FieldDesc, rng: &mut ChaCha8Rng) -> FqElem {
    let idx = rng.gen_range(0..f.order());
    f.nth_element(idx)
}

/// One partial-fraction block at a point: orders 1..=d, random coefficients,
/// nonzero at order d, never at p-divisible orders.
fn random_block(
    f: &FieldDesc,
    rng: &mut ChaCha8Rng,
    point: &RatPoint,
    d: u64,
    dense: bool,
) -> RatFunc {
    let p = f.p();
    let mut acc = RatFunc::pf_term(f, point, d, &random_nonzero(f, rng));
    if dense {
        for j in 1..d {
            if j % p != 0 {
                acc = acc.add(f, &RatFunc::pf_term(f, point, j, &random_elem(f, rng)));
            }
        }
    }
    acc
}

/// Samples a reduced minimal two-level cover realizing the profile exactly:
/// ∞ carries a level-1 row (jump 1 preferred), finite level-1 rows have
/// jumps 1 or 2, extra level-2-only poles have order 1 or 2, and optional
/// level-2 noise at level-1 points stays below order p·d_P. Deterministic in
/// the seed.
pub fn sample_minimal_cover(
    field: &FieldDesc,
    profile: &MinimalProfile,
    seed: u64,
) -> Result<CoverSpec, AswError> {
    let p = field.p();
    if profile.n1 + profile.n2 == 0 {
        return Err(AswError::ProfileInfeasible(
            "f must have a pole: n1 + n2 ≥ 1".into(),
        ));
    }
    let finite_needed = (profile.n1 + profile.n2 - 1) + profile.n3 + profile.n4;
    if (finite_needed as u128) > field.order() {
        return Err(AswError::FieldTooSmall {
            needed: finite_needed as u64,
            have: field.order(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..16 {
        // Distinct finite points for the remaining rows.
        let mut all: Vec<FqElem> = field.elements().collect();
        all.shuffle(&mut rng);
        let mut pool = all.into_iter();
        // Infinity takes a level-1 row of the smallest available jump.
        let (inf_d, mut rest1, mut rest2) = if profile.n1 > 0 {
            (1, profile.n1 - 1, profile.n2)
        } else {
            (2, 0, profile.n2 - 1)
        };
        let dense = rng.gen_bool(0.5);
        let mut f1 = random_block(field, &mut rng, &RatPoint::Infinity, inf_d, dense);
        let mut f2 = RatFunc::zero();
        let mut b1: Vec<(RatPoint, u64)> = vec![(RatPoint::Infinity, inf_d)];
        while rest1 + rest2 > 0 {
            let d = if rest1 > 0 {
                rest1 -= 1;
                1
            } else {
                rest2 -= 1;
                2
            };
            let pt = RatPoint::Finite(pool.next().expect("point pool sized above"));
            let dense = rng.gen_bool(0.5);
            f1 = f1.add(field, &random_block(field, &mut rng, &pt, d, dense));
            b1.push((pt, d));
        }
        for e in std::iter::repeat_n(1, profile.n3 as usize)
            .chain(std::iter::repeat_n(2, profile.n4 as usize))
        {
            let pt = RatPoint::Finite(pool.next().expect("point pool sized above"));
            let dense = rng.gen_bool(0.5);
            f2 = f2.add(field, &random_block(field, &mut rng, &pt, e, dense));
        }
        // Optional level-2 noise at level-1 points, below order p·d_P.
        for (pt, d) in &b1 {
            if rng.gen_bool(0.5) {
                for j in 1..p * d {
                    if j % p != 0 && rng.gen_bool(0.4) {
                        f2 = f2.add(
                            field,
                            &RatFunc::pf_term(field, pt, j, &random_elem(field, &mut rng)),
                        );
                    }
                }
            }
        }
        let witt = WittVec2 { f1, f2 };
        let Ok(cover) = CoverSpec::new(field.clone(), witt, 2) else {
            continue;
        };
        let got = MinimalProfile::from_datum(cover.datum());
        if got == Some(*profile) && is_minimal(cover.datum()) {
            return Ok(cover);
        }
    }
    Err(AswError::ProfileInfeasible(
        "sampler failed to realize the profile after bounded retries".into(),
    ))
}

/// Samples a reduced one-level cover with prescribed jumps d | p−1, the
/// first at ∞, the rest at distinct finite points. Deterministic in the
/// seed.
pub fn sample_as_cover(
    field: &FieldDesc,
    degrees: &[u64],
    seed: u64,
) -> Result<CoverSpec, AswError> {
    let p = field.p();
    if degrees.is_empty() {
        return Err(AswError::ProfileInfeasible("need at least one jump".into()));
    }
    if let Some(&d) = degrees
        .iter()
        .find(|&&d| d == 0 || !(p - 1).is_multiple_of(d))
    {
        return Err(AswError::ProfileInfeasible(format!(
            "jump {d} does not divide p − 1 = {}",
            p - 1
        )));
    }
    if (degrees.len() as u128 - 1) > field.order() {
        return Err(AswError::FieldTooSmall {
            needed: degrees.len() as u64 - 1,
            have: field.order(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<FqElem> = field.elements().collect();
    all.shuffle(&mut rng);
    let mut pool = all.into_iter();
    let mut f1 = random_block(field, &mut rng, &RatPoint::Infinity, degrees[0], true);
    for &d in &degrees[1..] {
        let pt = RatPoint::Finite(pool.next().expect("sized above"));
        f1 = f1.add(field, &random_block(field, &mut rng, &pt, d, true));
    }
    CoverSpec::new(
        field.clone(),
        WittVec2 {
            f1,
            f2: RatFunc::zero(),
        },
        1,
    )
}
