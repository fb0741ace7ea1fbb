//! Dense univariate polynomials over F_{p^k}, plus the truncated power-series
//! helpers (multiplication, inversion, division) that Laurent expansion and
//! the series oracle build on.
//!
//! Coefficients are little-endian ([`Poly::coeffs`]`[i]` multiplies x^i) with
//! trailing zeros trimmed, so equality of representations is equality of
//! polynomials. The zero polynomial has an empty coefficient list and degree
//! `None`.

use crate::gf::{FieldDesc, FqElem};

/// A polynomial over F_{p^k} in canonical (trimmed) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    /// Builds a polynomial from little-endian coefficients, trimming zeros.
    pub fn from_coeffs(coeffs: Vec<FqElem>) -> Poly {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// The constant polynomial c.
    pub fn constant(c: FqElem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial c·x^deg.
    pub fn monomial(f: &FieldDesc, c: FqElem, deg: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![f.zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    /// The polynomial x.
    pub fn x(f: &FieldDesc) -> Poly {
        Poly::monomial(f, f.one(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(FqElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Little-endian coefficients (trimmed).
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, f: &FieldDesc, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    /// Leading coefficient, if nonzero.
    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn add(&self, f: &FieldDesc, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, f: &FieldDesc, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(&self.coeff(f, i), &other.coeff(f, i)))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self, f: &FieldDesc) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn mul(&self, f: &FieldDesc, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut acc = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                acc[i + j] = f.add(&acc[i + j], &f.mul(a, b));
            }
        }
        Poly::from_coeffs(acc)
    }

    pub fn mul_scalar(&self, f: &FieldDesc, c: &FqElem) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    /// Multiplies by x^n.
    pub fn shift_up(&self, f: &FieldDesc, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![f.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, f: &FieldDesc, e: u64) -> Poly {
        let mut acc = Poly::constant(f.one());
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

    /// Horner evaluation at x = at.
    pub fn eval(&self, f: &FieldDesc, at: &FqElem) -> FqElem {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, at), c);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self, f: &FieldDesc) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.scale(i as i64, c))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, f: &FieldDesc, den: &Poly) -> (Poly, Poly) {
        let dd = den.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(den.leading().unwrap()).unwrap();
        let mut rem = self.clone();
        if rem.degree().is_none_or(|d| d < dd) {
            return (Poly::zero(), rem);
        }
        let mut quot = vec![f.zero(); rem.coeffs.len() - dd];
        while rem.degree().is_some_and(|d| d >= dd) {
            let d = rem.degree().unwrap();
            let c = f.mul(&rem.coeffs[d], &lead_inv);
            quot[d - dd] = c.clone();
            for j in 0..=dd {
                rem.coeffs[d - dd + j] = f.sub(&rem.coeffs[d - dd + j], &f.mul(&c, &den.coeffs[j]));
            }
            rem.trim();
        }
        (Poly::from_coeffs(quot), rem)
    }

    /// Monic greatest common divisor.
    pub fn gcd(f: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(f, &b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading() {
            let inv = f.inv(lead).unwrap();
            return a.mul_scalar(f, &inv);
        }
        a
    }

    /// Coefficients of P(c + t) as a polynomial in t (Horner-based Taylor
    /// shift; exact in any characteristic).
    pub fn shifted(&self, f: &FieldDesc, c: &FqElem) -> Poly {
        // acc(t) ← acc(t)·(t + c) + a_i, folding from the top coefficient.
        let mut acc = Poly::zero();
        for a in self.coeffs.iter().rev() {
            let mut next = acc.shift_up(f, 1);
            next = next.add(f, &acc.mul_scalar(f, c));
            next = next.add(f, &Poly::constant(a.clone()));
            acc = next;
        }
        acc
    }

    /// Coefficient-wise p-th power with degrees multiplied by p: the
    /// polynomial P(x)^p written in x (char-p "freshman's dream").
    pub fn frobenius(&self, f: &FieldDesc) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let p = f.p() as usize;
        let mut coeffs = vec![f.zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = f.pow(c, f.p());
        }
        Poly { coeffs }
    }
}

// --- Truncated power series on plain coefficient slices ---
// A series to precision n is a Vec<FqElem> of length exactly n
// (coefficients of t^0 … t^(n−1)).

/// Truncated product of two series to precision n.
pub fn series_mul(f: &FieldDesc, a: &[FqElem], b: &[FqElem], n: usize) -> Vec<FqElem> {
    let mut out = vec![f.zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Truncated inverse of a series with nonzero constant term.
pub fn series_inv(f: &FieldDesc, a: &[FqElem], n: usize) -> Vec<FqElem> {
    let a0 = f
        .inv(&a[0])
        .expect("series unit must have nonzero constant term");
    let mut out = vec![f.zero(); n];
    out[0] = a0.clone();
    for i in 1..n {
        // coefficient of t^i in a·out must vanish: Σ_{j≤i} a_j·out_{i−j} = 0.
        let mut s = f.zero();
        for j in 1..=i {
            let aj = match a.get(j) {
                Some(c) => c,
                None => break,
            };
            s = f.add(&s, &f.mul(aj, &out[i - j]));
        }
        out[i] = f.neg(&f.mul(&a0, &s));
    }
    out
}

/// Truncated quotient num/den, den a unit.
pub fn series_div(f: &FieldDesc, num: &[FqElem], den: &[FqElem], n: usize) -> Vec<FqElem> {
    series_mul(f, num, &series_inv(f, den, n), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldDesc;
    use proptest::prelude::*;

    fn f9() -> FieldDesc {
        FieldDesc::new(3, 2, vec![1, 0, 1]).unwrap()
    }

    fn poly_from_ints(f: &FieldDesc, ints: &[i64]) -> Poly {
        Poly::from_coeffs(ints.iter().map(|&c| f.from_int(c)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let f = f9();
        let a = poly_from_ints(&f, &[1, 0, 2, 0, 1]); // x⁴+2x²+1
        let b = poly_from_ints(&f, &[1, 1]); // x+1
        let (q, r) = a.divrem(&f, &b);
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = f9();
        let b = poly_from_ints(&f, &[1, 1]); // x+1
        let a = b.mul(&f, &poly_from_ints(&f, &[2, 1, 1])); // ·(x²+x+2), no shared roots
        let c = b.mul(&f, &poly_from_ints(&f, &[2, 1])); // ·(x+2)
        let g = Poly::gcd(&f, &a, &c);
        assert_eq!(g, b); // monic x+1
    }

    #[test]
    fn shifted_evaluates_consistently() {
        let f = f9();
        let p = poly_from_ints(&f, &[2, 1, 0, 1]); // x³+x+2
        let c = f.elem(&[1, 1]);
        let shifted = p.shifted(&f, &c);
        // P(c + t) at t = u equals P(c + u) for every u.
        for u in f.elements() {
            let lhs = shifted.eval(&f, &u);
            let rhs = p.eval(&f, &f.add(&c, &u));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn frobenius_is_pth_power() {
        let f = f9();
        let p = Poly::from_coeffs(vec![f.elem(&[0, 1]), f.from_int(2), f.elem(&[1, 1])]);
        assert_eq!(p.frobenius(&f), p.pow(&f, 3));
    }

    #[test]
    fn derivative_product_rule() {
        let f = f9();
        let a = poly_from_ints(&f, &[1, 2, 0, 1]);
        let b = Poly::from_coeffs(vec![f.elem(&[0, 1]), f.one(), f.from_int(2)]);
        let lhs = a.mul(&f, &b).derivative(&f);
        let rhs = a
            .derivative(&f)
            .mul(&f, &b)
            .add(&f, &a.mul(&f, &b.derivative(&f)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_inverse_round_trip() {
        let f = f9();
        let a: Vec<_> = [1, 2, 0, 1, 1, 2].iter().map(|&c| f.from_int(c)).collect();
        let inv = series_inv(&f, &a, 6);
        let prod = series_mul(&f, &a, &inv, 6);
        let mut expect = vec![f.zero(); 6];
        expect[0] = f.one();
        assert_eq!(prod, expect);
    }

    proptest! {
        #[test]
        fn mul_commutes_and_degree_adds(
            a in proptest::collection::vec(0i64..9, 0..6),
            b in proptest::collection::vec(0i64..9, 0..6),
        ) {
            let f = f9();
            let pa = Poly::from_coeffs(a.iter().map(|&c| f.elem(&[c % 3, c / 3])).collect());
            let pb = Poly::from_coeffs(b.iter().map(|&c| f.elem(&[c % 3, c / 3])).collect());
            prop_assert_eq!(pa.mul(&f, &pb), pb.mul(&f, &pa));
            if !pa.is_zero() && !pb.is_zero() {
                prop_assert_eq!(
                    pa.mul(&f, &pb).degree().unwrap(),
                    pa.degree().unwrap() + pb.degree().unwrap()
                );
            }
        }
    }
}
