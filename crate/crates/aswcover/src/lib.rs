//! Exact arithmetic for ℤ/p²ℤ-covers of the projective line in odd
//! characteristic.
//!
//! A length-2 Witt vector (f, h) of rational functions over F_{p^k} defines a
//! tower Y₂ → Y₁ → ℙ¹ by the Artin–Schreier–Witt equations
//!
//! ```text
//! Y₁ : y₁^p − y₁ = f(x)
//! Y₂ : y₂^p − y₂ = g(y₁) + h(x)      g(T) = Σ_{i=1}^{p−1} (−1)^i (p−1)!/(i!(p−i)!) · T^{p(p−i)+i}
//! ```
//!
//! This crate computes, without ever leaving exact field arithmetic:
//!
//! * reduced Witt representatives, branching data, and genera of such towers
//!   ([`asw`]);
//! * an explicit basis of regular differentials on Y₂ ([`basis`]);
//! * the Cartier–Manin matrix, its rank, and the a-number of Y₂, checked
//!   against an independent power-series oracle ([`cartier`]);
//! * "key term" data for each basis differential — the leading surviving
//!   monomial of its Cartier image and that monomial's coefficient — which
//!   yields a combinatorial lower bound for the Cartier rank and, for
//!   minimal covers with p = 3, the exact a-number ([`keyterms`]);
//! * random minimal covers with a prescribed branching profile for bulk
//!   verification ([`asw::sample_minimal_cover`]).
//!
//! All values are immutable and every operation is a pure function of its
//! inputs, so the whole API is safe to drive from concurrent callers.

pub mod asw;
pub mod basis;
pub mod cartier;
pub mod gf;
pub mod keyterms;
pub mod poly;
pub mod ratfunc;
