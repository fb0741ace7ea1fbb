//! Arithmetic in finite fields F_{p^k} of odd characteristic p.
//!
//! Elements are coefficient vectors over F_p modulo a monic irreducible
//! polynomial of degree k; [`FieldDesc`] is the validated context handle and
//! every operation is a pure method on it, so elements stay plain data
//! ([`FqElem`]) and the handle can be shared freely across threads.
//!
//! Besides ring arithmetic this module provides the three semilinear
//! ingredients the Cartier operator needs on coefficients:
//!
//! * [`FieldDesc::pth_root`] — the inverse Frobenius σ⁻¹, realized as
//!   a ↦ a^(p^(k−1)) (finite fields are perfect, so this is exact);
//! * [`FieldDesc::trace`] — the absolute trace down to F_p;
//! * [`FieldDesc::solve_artin_schreier`] — a deterministic solution of
//!   y^p − y = c (exists iff the trace of c vanishes), used to seed
//!   power-series expansions of cover coordinates at unramified points.
//!
//! When no modulus is supplied, [`canonical_modulus`] picks the
//! lexicographically smallest monic irreducible of the requested degree
//! (comparing constant coefficient first), so field descriptions are
//! reproducible across runs and machines.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported characteristic; products of two residues must fit in u64.
const MAX_P: u64 = 1 << 31;

/// Errors from field construction and arithmetic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GfError {
    /// The stated characteristic is not an odd prime.
    #[error("p = {0} is not an odd prime")]
    NotPrime(u64),
    /// The modulus factors over F_p.
    #[error("modulus is not irreducible over F_p")]
    NotIrreducible,
    /// The modulus is not monic of the stated degree.
    #[error("modulus is not monic of degree k")]
    NotMonic,
    /// Attempted to invert or divide by zero.
    #[error("division by zero")]
    DivisionByZero,
    /// y^p − y = c is unsolvable in this field (nonzero trace).
    #[error("y^p - y = c has no solution: trace(c) is nonzero")]
    NoSolution,
    /// A coefficient vector does not describe an element of this field.
    #[error("invalid element: {0}")]
    InvalidElement(String),
    /// Parameters outside the supported range.
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
}

/// An element of F_{p^k}: coefficients of 1, t, …, t^(k−1), each in [0, p).
///
/// The representation is canonical (fixed length k, reduced entries), so the
/// derived equality, hashing, and ordering — lexicographic starting from the
/// constant coefficient — agree with field-element identity. Serializes as a
/// bare JSON array, e.g. `[2,1]` for 2 + t.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElem(Vec<u64>);

impl FqElem {
    /// Coefficients of 1, t, …, t^(k−1).
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    /// Whether this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldDescRaw {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

/// A validated description of F_{p^k} = F_p[t]/(modulus).
///
/// Construction (via [`make_field`] / [`FieldDesc::new`]) checks that p is an
/// odd prime and the modulus is monic irreducible of degree k, so a value of
/// this type always denotes an actual field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FieldDescRaw", into = "FieldDescRaw")]
pub struct FieldDesc {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    /// t^k reduced modulo the modulus (negated low coefficients); cached for
    /// multiplication.
    reduction: Vec<u64>,
}

impl TryFrom<FieldDescRaw> for FieldDesc {
    type Error = GfError;
    fn try_from(raw: FieldDescRaw) -> Result<Self, GfError> {
        FieldDesc::new(raw.p, raw.k, raw.modulus)
    }
}

impl From<FieldDesc> for FieldDescRaw {
    fn from(fd: FieldDesc) -> FieldDescRaw {
        FieldDescRaw {
            p: fd.p,
            k: fd.k,
            modulus: fd.modulus,
        }
    }
}

/// Builds a validated field description; see [`FieldDesc::new`].
pub fn make_field(p: u64, k: usize, modulus: Vec<u64>) -> Result<FieldDesc, GfError> {
    FieldDesc::new(p, k, modulus)
}

/// The lexicographically smallest monic irreducible of degree k over F_p,
/// as a little-endian coefficient list of length k+1 (constant first).
///
/// "Smallest" compares the non-leading coefficients (c₀, …, c_{k−1}) as a
/// tuple, constant coefficient most significant. Examples: (3,1) → t,
/// (3,2) → t²+1, (3,3) → t³+2t+1.
pub fn canonical_modulus(p: u64, k: usize) -> Result<Vec<u64>, GfError> {
    check_p(p)?;
    if k == 0 {
        return Err(GfError::Unsupported("extension degree must be >= 1".into()));
    }
    let count = (p as u128)
        .checked_pow(k as u32)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| GfError::Unsupported("p^k too large for modulus search".into()))?;
    for idx in 0..count {
        // Decode idx with the constant coefficient as the most significant
        // base-p digit, so increasing idx walks candidates in lex order.
        let mut f = vec![0u64; k + 1];
        f[k] = 1;
        let mut rem = idx;
        for (i, slot) in f.iter_mut().enumerate().take(k) {
            let place = (p as u128).pow((k - 1 - i) as u32);
            *slot = (rem / place) as u64;
            rem %= place;
        }
        if k == 1 || is_irreducible(p, &f) {
            return Ok(f);
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

impl FieldDesc {
    /// Validates p (odd prime) and the modulus (monic irreducible of degree
    /// k over F_p; coefficients are reduced mod p first).
    pub fn new(p: u64, k: usize, modulus: Vec<u64>) -> Result<Self, GfError> {
        check_p(p)?;
        if k == 0 {
            return Err(GfError::Unsupported("extension degree must be >= 1".into()));
        }
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        if modulus.len() != k + 1 || modulus[k] != 1 {
            return Err(GfError::NotMonic);
        }
        if k > 1 && !is_irreducible(p, &modulus) {
            return Err(GfError::NotIrreducible);
        }
        let reduction: Vec<u64> = modulus[..k].iter().map(|&c| (p - c) % p).collect();
        Ok(FieldDesc {
            p,
            k,
            modulus,
            reduction,
        })
    }

    /// The field with the canonical (lex-smallest) modulus for (p, k).
    pub fn canonical(p: u64, k: usize) -> Result<Self, GfError> {
        Self::new(p, k, canonical_modulus(p, k)?)
    }

    /// Characteristic p.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Extension degree k over F_p.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The modulus as a little-endian coefficient list of length k+1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, p^k.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    /// The zero element.
    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.k])
    }

    /// The unit element.
    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        let mut c = vec![0; self.k];
        c[0] = n.rem_euclid(self.p as i64) as u64;
        FqElem(c)
    }

    /// Builds an element from up to k coefficients (missing ones are zero);
    /// entries may be any integers and are reduced mod p.
    ///
    /// Panics if more than k coefficients are given; use [`Self::parse_elem`]
    /// for untrusted input.
    pub fn elem(&self, coeffs: &[i64]) -> FqElem {
        self.parse_elem(coeffs)
            .expect("coefficient list too long for field")
    }

    /// Fallible version of [`Self::elem`] for user-supplied vectors.
    pub fn parse_elem(&self, coeffs: &[i64]) -> Result<FqElem, GfError> {
        if coeffs.len() > self.k {
            return Err(GfError::InvalidElement(format!(
                "got {} coefficients for an extension of degree {}",
                coeffs.len(),
                self.k
            )));
        }
        let mut c = vec![0; self.k];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(self.p as i64) as u64;
        }
        Ok(FqElem(c))
    }

    /// Checks that an element (e.g. freshly deserialized) is canonical for
    /// this field.
    pub fn validate_elem(&self, a: &FqElem) -> Result<(), GfError> {
        if a.0.len() != self.k {
            return Err(GfError::InvalidElement(format!(
                "length {} vector in an extension of degree {}",
                a.0.len(),
                self.k
            )));
        }
        if let Some(c) = a.0.iter().find(|&&c| c >= self.p) {
            return Err(GfError::InvalidElement(format!(
                "coefficient {c} not reduced mod {}",
                self.p
            )));
        }
        Ok(())
    }

    /// The idx-th element in lexicographic order (constant coefficient most
    /// significant); idx < p^k.
    pub fn nth_element(&self, idx: u128) -> FqElem {
        debug_assert!(idx < self.order());
        let mut c = vec![0; self.k];
        let mut rem = idx;
        for (i, slot) in c.iter_mut().enumerate() {
            let place = (self.p as u128).pow((self.k - 1 - i) as u32);
            *slot = (rem / place) as u64;
            rem %= place;
        }
        FqElem(c)
    }

    /// All field elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(|i| self.nth_element(i))
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let (p, k) = (self.p, self.k);
        if k == 1 {
            return FqElem(vec![a.0[0] * b.0[0] % p]);
        }
        let mut acc = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..k {
                acc[i + j] = (acc[i + j] + a.0[i] * b.0[j]) % p;
            }
        }
        // Fold degrees ≥ k down using t^k = reduction.
        for d in (k..2 * k - 1).rev() {
            let c = acc[d];
            if c != 0 {
                acc[d] = 0;
                for j in 0..k {
                    acc[d - k + j] = (acc[d - k + j] + c * self.reduction[j]) % p;
                }
            }
        }
        acc.truncate(k);
        FqElem(acc)
    }

    /// Multiplication by an integer scalar (image in the prime subfield).
    pub fn scale(&self, n: i64, a: &FqElem) -> FqElem {
        let r = n.rem_euclid(self.p as i64) as u64;
        FqElem(a.0.iter().map(|&x| x * r % self.p).collect())
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let mut poly = a.0.clone();
        bp_trim(&mut poly);
        let inv = bp_inv_mod(self.p, &poly, &self.modulus)
            .expect("nonzero residue is invertible modulo an irreducible");
        let mut c = inv;
        c.resize(self.k, 0);
        Ok(FqElem(c))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem, GfError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// a^e for e ≥ 0 (with 0^0 = 1).
    pub fn pow(&self, a: &FqElem, e: u64) -> FqElem {
        let mut base = a.clone();
        let mut e = e;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// a^e for any integer e (negative exponents invert; error on 0^(−n)).
    pub fn pow_i(&self, a: &FqElem, e: i64) -> Result<FqElem, GfError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// The Frobenius a ↦ a^p.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p)
    }

    /// The inverse Frobenius: the unique b with b^p = a, i.e. a^(p^(k−1)).
    pub fn pth_root(&self, a: &FqElem) -> FqElem {
        let mut r = a.clone();
        for _ in 1..self.k {
            r = self.frobenius(&r);
        }
        r
    }

    /// Absolute trace Tr(a) = Σ_{i<k} a^(p^i); the result lies in the prime
    /// subfield.
    pub fn trace(&self, a: &FqElem) -> FqElem {
        let mut acc = a.clone();
        let mut r = a.clone();
        for _ in 1..self.k {
            r = self.frobenius(&r);
            acc = self.add(&acc, &r);
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0));
        acc
    }

    /// A deterministic solution y of y^p − y = c, when one exists
    /// (equivalently, when trace(c) = 0).
    ///
    /// The full solution set is y + F_p; this returns its lexicographically
    /// least member, which is the unique solution with zero constant
    /// coefficient.
    pub fn solve_artin_schreier(&self, c: &FqElem) -> Result<FqElem, GfError> {
        if !self.trace(c).is_zero() {
            return Err(GfError::NoSolution);
        }
        // y ↦ y^p − y is F_p-linear; solve the k×k system over F_p.
        let k = self.k;
        let mut aug = vec![vec![0u64; k + 1]; k];
        for j in 0..k {
            let mut e = vec![0; k];
            e[j] = 1;
            let col = self.frobenius(&FqElem(e.clone()));
            for i in 0..k {
                aug[i][j] = (col.0[i] + self.p - e[i]) % self.p;
            }
        }
        for (row, &ci) in aug.iter_mut().zip(&c.0) {
            row[k] = ci;
        }
        let mut y = solve_fp_system(self.p, &mut aug, k).ok_or(GfError::NoSolution)?;
        // Shift by a constant to the canonical (lex-least) representative.
        y[0] = 0;
        let y = FqElem(y);
        debug_assert_eq!(self.sub(&self.frobenius(&y), &y), *c);
        Ok(y)
    }
}

fn check_p(p: u64) -> Result<(), GfError> {
    if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if p >= MAX_P {
        return Err(GfError::Unsupported(format!("p = {p} exceeds 2^31 - 1")));
    }
    Ok(())
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Gaussian elimination over F_p on a k×(k+1) augmented matrix; returns one
/// solution (free variables set to 0), or None if inconsistent.
#[allow(clippy::needless_range_loop)] // elimination reads one row while mutating another
fn solve_fp_system(p: u64, aug: &mut [Vec<u64>], k: usize) -> Option<Vec<u64>> {
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0;
    for col in 0..k {
        if let Some(r) = (row..k).find(|&r| aug[r][col] != 0) {
            aug.swap(row, r);
            let inv = scalar_inv(p, aug[row][col]);
            for x in aug[row][col..].iter_mut() {
                *x = *x * inv % p;
            }
            for r2 in 0..k {
                if r2 != row && aug[r2][col] != 0 {
                    let factor = aug[r2][col];
                    for c2 in col..=k {
                        aug[r2][c2] = (aug[r2][c2] + (p - factor % p) * aug[row][c2]) % p;
                    }
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
        }
    }
    if aug[row..k].iter().any(|r| r[k] != 0) {
        return None;
    }
    let mut y = vec![0u64; k];
    for (r, &col) in pivot_col_of_row.iter().enumerate() {
        y[col] = aug[r][k];
    }
    Some(y)
}

fn scalar_inv(p: u64, a: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    // Fermat: a^(p−2) mod p.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

// --- Polynomial arithmetic over F_p (little-endian Vec<u64>, trimmed) ---
// Used for modulus validation and inversion; field-element hot paths use the
// fixed-length representation above instead.

fn bp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn bp_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x * y) % p;
        }
    }
    bp_trim(&mut acc);
    acc
}

fn bp_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    debug_assert!(!m.is_empty());
    let mut r = a.to_vec();
    bp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = scalar_inv(p, m[dm]);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d] * lead_inv % p;
        if c != 0 {
            for j in 0..=dm {
                r[d - dm + j] = (r[d - dm + j] + (p - c * m[j] % p)) % p;
            }
        }
        r.pop();
        bp_trim(&mut r);
    }
    r
}

fn bp_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    bp_rem(p, &bp_mul(p, a, b), m)
}

fn bp_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    bp_trim(&mut a);
    bp_trim(&mut b);
    while !b.is_empty() {
        let r = bp_rem(p, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = scalar_inv(p, lead);
        for c in &mut a {
            *c = *c * inv % p;
        }
    }
    a
}

/// Inverse of a modulo m via the extended Euclidean algorithm; None when
/// gcd(a, m) is not constant.
fn bp_inv_mod(p: u64, a: &[u64], m: &[u64]) -> Option<Vec<u64>> {
    // Invariants: old_r = old_s·a (mod m), r = s·a (mod m).
    let (mut old_r, mut r) = (a.to_vec(), m.to_vec());
    let (mut old_s, mut s) = (vec![1u64], vec![]);
    bp_trim(&mut old_r);
    while !r.is_empty() {
        // Divide old_r by r: quotient q, remainder rem.
        let (q, rem) = bp_divrem(p, &old_r, &r);
        old_r = r;
        r = rem;
        let qs = bp_mul(p, &q, &s);
        let new_s = bp_sub(p, &old_s, &qs);
        old_s = s;
        s = new_s;
    }
    if old_r.len() != 1 {
        return None;
    }
    let inv = scalar_inv(p, old_r[0]);
    let mut out: Vec<u64> = old_s.iter().map(|&c| c * inv % p).collect();
    out = bp_rem(p, &out, m);
    Some(out)
}

fn bp_sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    bp_trim(&mut out);
    out
}

fn bp_divrem(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(!b.is_empty());
    let mut r = a.to_vec();
    bp_trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    let lead_inv = scalar_inv(p, b[db]);
    while r.len() > db {
        let d = r.len() - 1;
        let c = r[d] * lead_inv % p;
        q[d - db] = c;
        if c != 0 {
            for j in 0..=db {
                r[d - db + j] = (r[d - db + j] + (p - c * b[j] % p)) % p;
            }
        }
        r.pop();
        bp_trim(&mut r);
    }
    bp_trim(&mut q);
    (q, r)
}

/// Rabin irreducibility test for a polynomial of degree ≥ 2 over F_p.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let k = f.len() - 1;
    let x = vec![0u64, 1];
    // x^(p^m) mod f, computed by m successive p-th powers.
    let frob_iter = |m: usize| -> Vec<u64> {
        let mut r = bp_rem(p, &x, f);
        for _ in 0..m {
            r = bp_powmod(p, &r, p, f);
        }
        r
    };
    // For each prime q | k: gcd(f, x^(p^(k/q)) − x) must be constant.
    let mut rem_k = k;
    let mut q = 2;
    let mut prime_divs = Vec::new();
    while q * q <= rem_k {
        if rem_k.is_multiple_of(q) {
            prime_divs.push(q);
            while rem_k.is_multiple_of(q) {
                rem_k /= q;
            }
        }
        q += 1;
    }
    if rem_k > 1 {
        prime_divs.push(rem_k);
    }
    for q in prime_divs {
        let t = frob_iter(k / q);
        let diff = bp_sub(p, &t, &bp_rem(p, &x, f));
        let g = bp_gcd(p, f, &diff);
        if g.len() != 1 {
            return false;
        }
    }
    // x^(p^k) ≡ x mod f.
    let t = frob_iter(k);
    t == bp_rem(p, &x, f)
}

fn bp_powmod(p: u64, a: &[u64], e: u64, m: &[u64]) -> Vec<u64> {
    let mut base = bp_rem(p, a, m);
    let mut e = e;
    let mut acc = bp_rem(p, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = bp_mulmod(p, &acc, &base, m);
        }
        base = bp_mulmod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> FieldDesc {
        FieldDesc::new(3, 1, vec![0, 1]).unwrap()
    }

    fn f9() -> FieldDesc {
        FieldDesc::new(3, 2, vec![1, 0, 1]).unwrap()
    }

    fn f27() -> FieldDesc {
        FieldDesc::canonical(3, 3).unwrap()
    }

    /// Trial-division irreducibility: no monic divisor of degree 1..=deg/2.
    fn brute_irreducible(p: u64, f: &[u64]) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g = vec![0u64; d + 1];
                g[d] = 1;
                let mut rem = idx;
                for c in g.iter_mut().take(d) {
                    *c = rem % p;
                    rem /= p;
                }
                if bp_rem(p, f, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn make_field_validates() {
        assert!(FieldDesc::new(3, 1, vec![0, 1]).is_ok());
        assert!(FieldDesc::new(3, 2, vec![1, 0, 1]).is_ok());
        assert_eq!(
            FieldDesc::new(3, 2, vec![0, 0, 1]).unwrap_err(),
            GfError::NotIrreducible
        );
        assert_eq!(
            FieldDesc::new(4, 1, vec![0, 1]).unwrap_err(),
            GfError::NotPrime(4)
        );
        assert_eq!(
            FieldDesc::new(2, 1, vec![0, 1]).unwrap_err(),
            GfError::NotPrime(2)
        );
        assert_eq!(
            FieldDesc::new(9, 1, vec![0, 1]).unwrap_err(),
            GfError::NotPrime(9)
        );
        assert_eq!(
            FieldDesc::new(3, 2, vec![1, 0, 2]).unwrap_err(),
            GfError::NotMonic
        );
        assert_eq!(
            FieldDesc::new(3, 2, vec![1, 1]).unwrap_err(),
            GfError::NotMonic
        );
    }

    #[test]
    fn rabin_matches_trial_division() {
        for p in [3u64, 5] {
            for deg in 2..=3usize {
                let count = p.pow(deg as u32);
                for idx in 0..count {
                    let mut f = vec![0u64; deg + 1];
                    f[deg] = 1;
                    let mut rem = idx;
                    for c in f.iter_mut().take(deg) {
                        *c = rem % p;
                        rem /= p;
                    }
                    assert_eq!(
                        is_irreducible(p, &f),
                        brute_irreducible(p, &f),
                        "p={p} f={f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn canonical_moduli_are_lex_least() {
        assert_eq!(canonical_modulus(3, 1).unwrap(), vec![0, 1]);
        assert_eq!(canonical_modulus(3, 2).unwrap(), vec![1, 0, 1]);
        // Independent check: scan all monic cubics over F_3 by brute force.
        let mut expect = None;
        'outer: for c0 in 0..3u64 {
            for c1 in 0..3u64 {
                for c2 in 0..3u64 {
                    let f = vec![c0, c1, c2, 1];
                    if brute_irreducible(3, &f) {
                        expect = Some(f);
                        break 'outer;
                    }
                }
            }
        }
        assert_eq!(canonical_modulus(3, 3).unwrap(), expect.unwrap());
        // Degree-2 canonical moduli over F_5 and F_7 by the same scan.
        for p in [5u64, 7] {
            let mut expect = None;
            'scan: for c0 in 0..p {
                for c1 in 0..p {
                    let f = vec![c0, c1, 1];
                    if brute_irreducible(p, &f) {
                        expect = Some(f);
                        break 'scan;
                    }
                }
            }
            assert_eq!(canonical_modulus(p, 2).unwrap(), expect.unwrap());
        }
    }

    #[test]
    fn basic_arithmetic_examples() {
        let f3 = f3();
        assert_eq!(f3.mul(&f3.from_int(2), &f3.from_int(2)), f3.from_int(1));
        assert_eq!(f3.inv(&f3.from_int(2)).unwrap(), f3.from_int(2));
        assert_eq!(f3.inv(&f3.zero()).unwrap_err(), GfError::DivisionByZero);
        let f9 = f9();
        let t = f9.elem(&[0, 1]);
        assert_eq!(f9.mul(&t, &t), f9.from_int(2)); // t² = −1 = 2
    }

    #[test]
    fn inverses_exhaustive() {
        for field in [f9(), f27()] {
            for a in field.elements().skip(1) {
                let inv = field.inv(&a).unwrap();
                assert_eq!(field.mul(&a, &inv), field.one());
            }
        }
    }

    #[test]
    fn pth_root_is_inverse_frobenius() {
        for field in [f3(), f9(), f27(), FieldDesc::canonical(5, 2).unwrap()] {
            for a in field.elements() {
                let r = field.pth_root(&a);
                assert_eq!(field.pow(&r, field.p()), a);
                assert_eq!(field.pth_root(&field.pow(&a, field.p())), a);
            }
        }
    }

    #[test]
    fn trace_examples_and_frobenius_invariance() {
        let f9 = f9();
        let t = f9.elem(&[0, 1]);
        assert_eq!(f9.trace(&t), f9.zero()); // t + t³ = t − t
        assert_eq!(f9.trace(&f9.one()), f9.from_int(2));
        assert_eq!(f9.trace(&f9.zero()), f9.zero());
        let f27 = f27();
        for a in f27.elements() {
            assert_eq!(f27.trace(&a), f27.trace(&f27.frobenius(&a)));
        }
    }

    #[test]
    fn artin_schreier_solver_matches_brute_force() {
        // Solvable iff trace vanishes; solution exact and lex-least.
        for field in [f3(), f9(), f27()] {
            for c in field.elements() {
                let mut solutions: Vec<FqElem> = field
                    .elements()
                    .filter(|y| field.sub(&field.frobenius(y), y) == c)
                    .collect();
                solutions.sort();
                match field.solve_artin_schreier(&c) {
                    Ok(y) => {
                        assert!(field.trace(&c).is_zero());
                        assert_eq!(Some(&y), solutions.first());
                    }
                    Err(GfError::NoSolution) => {
                        assert!(!field.trace(&c).is_zero());
                        assert!(solutions.is_empty());
                    }
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
        // Named cases.
        let f3 = f3();
        assert_eq!(f3.solve_artin_schreier(&f3.zero()).unwrap(), f3.zero());
        assert_eq!(
            f3.solve_artin_schreier(&f3.one()).unwrap_err(),
            GfError::NoSolution
        );
        let f9 = f9();
        let t = f9.elem(&[0, 1]);
        assert_eq!(f9.solve_artin_schreier(&t).unwrap(), t); // y³−y=t has roots t, t±1
    }

    #[test]
    fn serde_round_trip() {
        let f9 = f9();
        let json = serde_json::to_string(&f9).unwrap();
        assert_eq!(json, r#"{"p":3,"k":2,"modulus":[1,0,1]}"#);
        let back: FieldDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f9);
        // Deserialization re-validates.
        let bad: Result<FieldDesc, _> = serde_json::from_str(r#"{"p":3,"k":2,"modulus":[0,0,1]}"#);
        assert!(bad.is_err());
        let a = f9.elem(&[2, 1]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[2,1]");
        assert_eq!(serde_json::from_str::<FqElem>("[2,1]").unwrap(), a);
    }

    fn arb_pair_idx(order: u128) -> impl Strategy<Value = (u128, u128, u128)> {
        (0..order, 0..order, 0..order)
    }

    proptest! {
        #[test]
        fn field_axioms_f9((ia, ib, ic) in arb_pair_idx(9)) {
            let f = f9();
            axioms(&f, ia, ib, ic);
        }

        #[test]
        fn field_axioms_f27((ia, ib, ic) in arb_pair_idx(27)) {
            let f = f27();
            axioms(&f, ia, ib, ic);
        }

        #[test]
        fn field_axioms_f25((ia, ib, ic) in arb_pair_idx(25)) {
            let f = FieldDesc::canonical(5, 2).unwrap();
            axioms(&f, ia, ib, ic);
        }

        #[test]
        fn trace_is_additive(ia in 0u128..27, ib in 0u128..27) {
            let f = f27();
            let (a, b) = (f.nth_element(ia), f.nth_element(ib));
            prop_assert_eq!(f.trace(&f.add(&a, &b)), f.add(&f.trace(&a), &f.trace(&b)));
        }
    }

    fn axioms(f: &FieldDesc, ia: u128, ib: u128, ic: u128) {
        let a = f.nth_element(ia);
        let b = f.nth_element(ib);
        let c = f.nth_element(ic);
        assert_eq!(f.add(&a, &b), f.add(&b, &a));
        assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        assert_eq!(f.sub(&f.add(&a, &b), &b), a);
        assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        if !a.is_zero() {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }
}
