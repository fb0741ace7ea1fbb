//! Differentials on the top curve of a cover in normal form, the Cartier
//! operator on them, the Cartier–Manin matrix, rank and a-number, and an
//! independent power-series oracle.
//!
//! A differential is written ω = Σ y₂^{a₂}·y₁^{a₁}·r_{a₂,a₁}(x)·dx with
//! exponents below p ([`DiffNF`]); the relations y₁^p = y₁ + f and
//! y₂^p = y₂ + g(y₁) + h reduce arbitrary polynomial expressions to this
//! form ([`normalize_diff`]). The Cartier operator is computed by expanding
//! the y₂-power through the Witt-tower relation,
//!
//!   C(y₂^{a₂} y₁^{a₁} r dx) = Σ_{0≤j+l≤a₂} (−1)^{a₂−j}·(a₂; j, l)·y₂^j ·
//!                             C(g(y₁)^l · h^{a₂−j−l} · y₁^{a₁} · r dx),
//!
//! reducing the resulting y₁-polynomial, applying the analogous y₁-rule
//! C(y₁^a s dx) = Σ_m (a choose m)(−1)^m y₁^{a−m} C(f^m s dx), and finishing
//! with the explicit Cartier action on k(x)dx. The prime-field multinomial
//! scalars pass through C unchanged, so they can be applied outside.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::asw::{g1_poly, genus, AswError, CoverSpec};
use crate::basis::{coordinates, enumerate_basis, BasisElement, BasisError};
use crate::gf::{FieldDesc, FqElem, GfError};
use crate::poly::{series_mul, Poly};
use crate::ratfunc::{cartier_rational, RatFunc, RatPoint, RfError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CartierError {
    /// A Cartier image fell outside the regular basis — inconsistent cover
    /// data (never expected on valid covers).
    #[error("Cartier image has a component outside the basis")]
    NotRegularImage,
    /// The series expansion center is a branch point or pole.
    #[error("center is a branch point or pole; choose another expansion point")]
    BadCenter,
    /// The Artin–Schreier equation seeding a series lift has no root over
    /// this field (trace obstruction); extend the field.
    #[error("no Artin-Schreier root over this field at the chosen center")]
    NoASRoot,
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Asw(#[from] AswError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Rational(#[from] RfError),
}

/// A differential in normal form: map (a₂, a₁) → rational coefficient, all
/// exponents below p, zero coefficients not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffNF {
    terms: BTreeMap<(u64, u64), RatFunc>,
}

impl DiffNF {
    pub fn zero() -> DiffNF {
        DiffNF::default()
    }

    pub fn from_term(a2: u64, a1: u64, r: RatFunc) -> DiffNF {
        let mut nf = DiffNF::zero();
        if !r.is_zero() {
            nf.terms.insert((a2, a1), r);
        }
        nf
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u64, u64), &RatFunc)> + '_ {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn coefficient(&self, a2: u64, a1: u64) -> Option<&RatFunc> {
        self.terms.get(&(a2, a1))
    }

    /// Adds r·y₂^{a₂}y₁^{a₁}dx, dropping the entry if it cancels.
    pub fn add_term(&mut self, f: &FieldDesc, a2: u64, a1: u64, r: &RatFunc) {
        if r.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((a2, a1))
            .or_insert_with(RatFunc::zero)
            .add(f, r);
        if entry.is_zero() {
            self.terms.remove(&(a2, a1));
        } else {
            self.terms.insert((a2, a1), entry);
        }
    }

    pub fn add(&self, f: &FieldDesc, other: &DiffNF) -> DiffNF {
        let mut out = self.clone();
        for ((a2, a1), r) in other.terms() {
            out.add_term(f, a2, a1, r);
        }
        out
    }

    /// Multiplies every coefficient by a rational function.
    pub fn scale(&self, f: &FieldDesc, s: &RatFunc) -> DiffNF {
        let mut out = DiffNF::zero();
        for ((a2, a1), r) in self.terms() {
            out.add_term(f, a2, a1, &r.mul(f, s));
        }
        out
    }
}

/// The basis monomial as a normal-form differential.
pub fn basis_diff(f: &FieldDesc, b: &BasisElement) -> DiffNF {
    DiffNF::from_term(b.a2, b.a1, RatFunc::pf_term(f, &b.point, b.v, &f.one()))
}

/// Exact binomial coefficient, reduced into the field.
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

/// y₁-polynomial (coefficients rational functions) product.
fn y1_mul(f: &FieldDesc, a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RatFunc::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(f, &x.mul(f, y));
        }
    }
    out
}

fn y1_add_into(f: &FieldDesc, acc: &mut Vec<RatFunc>, other: &[RatFunc]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), RatFunc::zero());
    }
    for (i, r) in other.iter().enumerate() {
        acc[i] = acc[i].add(f, r);
    }
}

/// Reduces a y₁-polynomial modulo y₁^p = y₁ + f to degree < p.
fn reduce_y1(f: &FieldDesc, frat: &RatFunc, mut v: Vec<RatFunc>) -> Vec<RatFunc> {
    let p = f.p() as usize;
    while v.len() > p {
        let top = v.pop().unwrap();
        let deg = v.len();
        if top.is_zero() {
            continue;
        }
        let lo = deg - p;
        v[lo + 1] = v[lo + 1].add(f, &top);
        v[lo] = v[lo].add(f, &top.mul(f, frat));
    }
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Rewrites a polynomial expression Σ r·y₂^{e₂}y₁^{e₁}·dx (arbitrary
/// exponents) in normal form using the tower relations.
pub fn normalize_diff(c: &CoverSpec, raw: &[(u64, u64, RatFunc)]) -> DiffNF {
    let f = c.field();
    let p = f.p() as usize;
    let mut rows: Vec<Vec<RatFunc>> = Vec::new();
    for (e2, e1, r) in raw {
        let (e2, e1) = (*e2 as usize, *e1 as usize);
        if rows.len() <= e2 {
            rows.resize_with(e2 + 1, Vec::new);
        }
        if rows[e2].len() <= e1 {
            rows[e2].resize(e1 + 1, RatFunc::zero());
        }
        rows[e2][e1] = rows[e2][e1].add(f, r);
    }
    // y₂^p = y₂ + G with G = g(y₁) + h.
    let mut gvec: Vec<RatFunc> = g1_poly(f)
        .coeffs()
        .iter()
        .map(|c| RatFunc::constant(c.clone()))
        .collect();
    if gvec.is_empty() {
        gvec.push(RatFunc::zero());
    }
    gvec[0] = gvec[0].add(f, c.h());
    while rows.len() > p {
        let top = rows.pop().unwrap();
        let e = rows.len();
        if top.iter().all(|r| r.is_zero()) {
            continue;
        }
        let lo = e - p;
        let with_g = y1_mul(f, &top, &gvec);
        y1_add_into(f, &mut rows[lo + 1], &top);
        y1_add_into(f, &mut rows[lo], &with_g);
    }
    let mut out = DiffNF::zero();
    for (e2, row) in rows.into_iter().enumerate() {
        for (e1, coeff) in reduce_y1(f, c.f(), row).into_iter().enumerate() {
            out.add_term(f, e2 as u64, e1 as u64, &coeff);
        }
    }
    out
}

/// Per-cover caches for the Cartier computation.
struct CartierCtx<'a> {
    cover: &'a CoverSpec,
    /// f^m for m < p.
    f_pows: Vec<RatFunc>,
    /// h^m for m < p.
    h_pows: Vec<RatFunc>,
    /// reduce(y₁^{a₁}·g(y₁)^l) keyed by (l, a₁).
    gla: BTreeMap<(u64, u64), Vec<RatFunc>>,
}

impl<'a> CartierCtx<'a> {
    fn new(c: &'a CoverSpec) -> CartierCtx<'a> {
        let f = c.field();
        let p = f.p();
        let mut f_pows = vec![RatFunc::one(f)];
        let mut h_pows = vec![RatFunc::one(f)];
        for m in 1..p as usize {
            f_pows.push(f_pows[m - 1].mul(f, c.f()));
            h_pows.push(h_pows[m - 1].mul(f, c.h()));
        }
        let g = g1_poly(f);
        let mut gla = BTreeMap::new();
        let mut g_pow = Poly::constant(f.one());
        for l in 0..p {
            let gvec: Vec<RatFunc> = g_pow
                .coeffs()
                .iter()
                .map(|c| RatFunc::constant(c.clone()))
                .collect();
            let base = reduce_y1(f, c.f(), gvec);
            for a1 in 0..p {
                let mut shifted = vec![RatFunc::zero(); a1 as usize];
                shifted.extend(base.iter().cloned());
                gla.insert((l, a1), reduce_y1(f, c.f(), shifted));
            }
            if l + 1 < p {
                g_pow = g_pow.mul(f, &g);
            }
        }
        CartierCtx {
            cover: c,
            f_pows,
            h_pows,
            gla,
        }
    }

    /// C of a single normal-form term y₂^{a₂}y₁^{a₁}·r·dx.
    fn cartier_term(&self, a2: u64, a1: u64, r: &RatFunc) -> DiffNF {
        let f = self.cover.field();
        let mut out = DiffNF::zero();
        for j in 0..=a2 {
            for l in 0..=(a2 - j) {
                let m = a2 - j - l;
                let outer_sign = if (a2 - j) % 2 == 1 { -1 } else { 1 };
                let multi = {
                    let c1 = binom_mod(f, a2, j);
                    let c2 = binom_mod(f, a2 - j, l);
                    f.mul(&c1, &c2)
                };
                let outer = f.scale(outer_sign, &multi);
                if outer.is_zero() {
                    continue;
                }
                let scalar = self.h_pows[m as usize].mul(f, r);
                if scalar.is_zero() {
                    continue;
                }
                let poly = &self.gla[&(l, a1)];
                for (a, s) in poly.iter().enumerate() {
                    if s.is_zero() {
                        continue;
                    }
                    let arg_base = s.mul(f, &scalar);
                    for mm in 0..=(a as u64) {
                        let inner_sign = if mm % 2 == 1 { -1 } else { 1 };
                        let coef = f.mul(&outer, &f.scale(inner_sign, &binom_mod(f, a as u64, mm)));
                        if coef.is_zero() {
                            continue;
                        }
                        let arg = arg_base.mul(f, &self.f_pows[mm as usize]);
                        let img = cartier_rational(f, &arg).mul_scalar(f, &coef);
                        out.add_term(f, j, a as u64 - mm, &img);
                    }
                }
            }
        }
        out
    }

    fn cartier(&self, omega: &DiffNF) -> DiffNF {
        let f = self.cover.field();
        let mut out = DiffNF::zero();
        for ((a2, a1), r) in omega.terms() {
            out = out.add(f, &self.cartier_term(a2, a1, r));
        }
        out
    }
}

/// The Cartier operator on a differential, normalizing first if any
/// exponent is out of range.
pub fn cartier_diff(c: &CoverSpec, omega: &DiffNF) -> DiffNF {
    let p = c.field().p();
    if omega.terms().any(|((a2, a1), _)| a2 >= p || a1 >= p) {
        let raw: Vec<(u64, u64, RatFunc)> = omega
            .terms()
            .map(|((a2, a1), r)| (a2, a1, r.clone()))
            .collect();
        return CartierCtx::new(c).cartier(&normalize_diff(c, &raw));
    }
    CartierCtx::new(c).cartier(omega)
}

/// The Cartier–Manin matrix in a fixed ordered basis: row j holds the
/// coordinates of C(ω_j).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CMMatrix {
    pub basis: Vec<BasisElement>,
    pub rows: Vec<Vec<FqElem>>,
}

impl CMMatrix {
    /// CSV of integer-encoded entries (Σ cᵢ·pⁱ over the coefficient vector).
    pub fn to_csv(&self, f: &FieldDesc) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|e| {
                    let mut val: u128 = 0;
                    for (i, &c) in e.coeffs().iter().enumerate() {
                        val += c as u128 * (f.p() as u128).pow(i as u32);
                    }
                    val.to_string()
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Computes the Cartier–Manin matrix of the cover in the canonical basis.
pub fn cartier_manin(c: &CoverSpec) -> Result<CMMatrix, CartierError> {
    let basis = enumerate_basis(c)?;
    cartier_manin_in_basis(c, basis)
}

/// Same, in a caller-supplied ordered basis.
pub fn cartier_manin_in_basis(
    c: &CoverSpec,
    basis: Vec<BasisElement>,
) -> Result<CMMatrix, CartierError> {
    let f = c.field();
    let ctx = CartierCtx::new(c);
    let mut rows = Vec::with_capacity(basis.len());
    for b in &basis {
        let img = ctx.cartier(&basis_diff(f, b));
        let (coords, remainder) = coordinates(f, &img, &basis);
        if remainder {
            return Err(CartierError::NotRegularImage);
        }
        rows.push(coords);
    }
    Ok(CMMatrix { basis, rows })
}

/// Rank by exact Gaussian elimination, and a-number g − rank. The a-number
/// is the kernel dimension of the semilinear Cartier operator, since the
/// inverse Frobenius twist is bijective on coordinates.
#[allow(clippy::needless_range_loop)] // elimination reads one row while mutating another
pub fn rank_and_anumber(f: &FieldDesc, m: &CMMatrix) -> (u64, u64) {
    let g = m.rows.len();
    let mut rows: Vec<Vec<FqElem>> = m.rows.clone();
    let ncols = m.basis.len();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = f.inv(&rows[rank][col]).expect("nonzero pivot");
        for c in col..ncols {
            rows[rank][c] = f.mul(&rows[rank][c], &inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let sub = f.mul(&factor, &rows[rank][c]);
                    rows[r][c] = f.sub(&rows[r][c], &sub);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    (rank as u64, (g - rank) as u64)
}

/// Solves b^p − b = rhs (as power series) coefficient by coefficient; the
/// constant term comes from the field's Artin–Schreier solver.
fn artin_schreier_series(f: &FieldDesc, rhs: &[FqElem]) -> Result<Vec<FqElem>, CartierError> {
    let p = f.p() as usize;
    let mut b = vec![f.zero(); rhs.len()];
    b[0] = f
        .solve_artin_schreier(&rhs[0])
        .map_err(|_| CartierError::NoASRoot)?;
    for m in 1..rhs.len() {
        let mut val = f.neg(&rhs[m]);
        if m % p == 0 {
            let lift = f.pow(&b[m / p], f.p());
            val = f.add(&val, &lift);
        }
        b[m] = val;
    }
    Ok(b)
}

fn series_pow(f: &FieldDesc, base: &[FqElem], e: u64, n: usize) -> Vec<FqElem> {
    let mut acc = vec![f.one()];
    acc.resize(n, f.zero());
    for _ in 0..e {
        acc = series_mul(f, &acc, base, n);
    }
    acc
}

/// Power-series expansion of ω at x = center + t, to `nterms` coefficients
/// of r(x)dx in dt. Lifts y₁, then y₂, as series seeded by Artin–Schreier
/// roots over the base field.
pub fn series_oracle(
    c: &CoverSpec,
    omega: &DiffNF,
    center: &FqElem,
    nterms: usize,
) -> Result<Vec<FqElem>, CartierError> {
    let f = c.field();
    for pt in c.b2_points() {
        if pt == RatPoint::Finite(center.clone()) {
            return Err(CartierError::BadCenter);
        }
    }
    let f_series = c
        .f()
        .laurent_expand(f, center, nterms)
        .map_err(|_| CartierError::BadCenter)?;
    let y1 = artin_schreier_series(f, &f_series)?;
    let y2 = if c.n() == 2 {
        // G = g(y₁) + h as a series, then solve the level-2 equation.
        let g = g1_poly(f);
        let mut acc = vec![f.zero(); nterms];
        for coeff in g.coeffs().iter().rev() {
            acc = series_mul(f, &acc, &y1, nterms);
            acc[0] = f.add(&acc[0], coeff);
        }
        let h_series = c
            .h()
            .laurent_expand(f, center, nterms)
            .map_err(|_| CartierError::BadCenter)?;
        for (i, hc) in h_series.iter().enumerate() {
            acc[i] = f.add(&acc[i], hc);
        }
        Some(artin_schreier_series(f, &acc)?)
    } else {
        None
    };
    let mut out = vec![f.zero(); nterms];
    for ((a2, a1), r) in omega.terms() {
        let r_series = r
            .laurent_expand(f, center, nterms)
            .map_err(|_| CartierError::BadCenter)?;
        let mut term = r_series;
        term.resize(nterms, f.zero());
        if a1 > 0 {
            term = series_mul(f, &term, &series_pow(f, &y1, a1, nterms), nterms);
        }
        if a2 > 0 {
            let y2s = y2.as_ref().expect("a2 > 0 only on two-level covers");
            term = series_mul(f, &term, &series_pow(f, y2s, a2, nterms), nterms);
        }
        for (i, v) in term.iter().enumerate() {
            out[i] = f.add(&out[i], v);
        }
    }
    Ok(out)
}

/// The Cartier operator on series: keep exponents ≡ −1 (mod p), take p-th
/// roots, re-index.
pub fn decimate_series(f: &FieldDesc, coeffs: &[FqElem]) -> Vec<FqElem> {
    let p = f.p() as usize;
    let mut out = Vec::new();
    let mut idx = p - 1;
    while idx < coeffs.len() {
        out.push(f.pth_root(&coeffs[idx]));
        idx += p;
    }
    out
}

/// Independent check that cartier_diff agrees with the series-level Cartier
/// action at the given center, to precision 2g + margin. Any margin > 0
/// suffices to separate distinct regular differentials; extra terms only
/// harden the comparison.
pub fn series_check_cartier(
    c: &CoverSpec,
    omega: &DiffNF,
    center: &FqElem,
    margin: u64,
) -> Result<bool, CartierError> {
    let f = c.field();
    let g = genus(c.datum(), c.n())?;
    let nprime = (2 * g + margin.max(1)) as usize;
    let n_in = f.p() as usize * nprime + f.p() as usize;
    let direct = series_oracle(c, &cartier_diff(c, omega), center, nprime)?;
    let via_series = decimate_series(f, &series_oracle(c, omega, center, n_in)?);
    Ok(via_series[..nprime] == direct[..])
}

/// First field element usable as a series center for this cover (not a
/// branch point, all Artin–Schreier lifts solvable), if any.
pub fn find_series_center(c: &CoverSpec) -> Option<FqElem> {
    let f = c.field();
    let probe = DiffNF::from_term(0, 0, RatFunc::one(f));
    f.elements()
        .find(|center| series_oracle(c, &probe, center, 2).is_ok())
}
