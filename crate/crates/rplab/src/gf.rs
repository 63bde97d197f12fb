//! Arithmetic for the prime field `F_p` and its quadratic extension `F_{p^2}`.
//!
//! The extension is presented as `F_p[x]/(x^2 - n)` with `n` the smallest
//! quadratic nonresidue mod `p`, so a fixed `p` always yields the same field.
//! Square roots, multiplicative orders and quadratic roots are computed by
//! exhaustive scan over the field; at the scales this crate targets
//! (`q <= 65025`) that keeps the trusted base free of special-case algebra.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("p = {0} out of supported range")]
    UnsupportedPrime(u32),
    #[error("unsupported extension degree {0}")]
    BadDegree(u8),
    #[error("division by zero")]
    DivisionByZero,
    #[error("multiplicative order of zero is undefined")]
    OrderOfZero,
    #[error("4 does not divide q - 1 = {0}")]
    NoOrderFour(u64),
    #[error("leading coefficient is zero")]
    DegenerateQuadratic,
}

/// An element of `F_q`, stored as `a0 + a1*x` with both residues reduced.
/// In a degree-1 context `a1` is always zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FqElem {
    pub a0: u32,
    pub a1: u32,
}

impl FqElem {
    pub const ZERO: FqElem = FqElem { a0: 0, a1: 0 };

    pub fn is_zero(self) -> bool {
        self.a0 == 0 && self.a1 == 0
    }
}

/// The field `F_p` (degree 1) or `F_{p^2}` (degree 2) for an odd prime `p`.
///
/// Immutable after construction; all operations are pure functions of the
/// context and their arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldCtx {
    p: u32,
    degree: u8,
    /// Quadratic nonresidue presenting the extension; 0 in degree 1.
    nonresidue: u32,
    q: u64,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// Builds the field context. Degree-1 contexts accept any odd prime up to
    /// `2^15`; degree-2 contexts cap `p` at 251 so that packed matrix codes
    /// (base `q^4`) stay inside 64 bits.
    pub fn new(p: u32, degree: u8) -> Result<FieldCtx, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Err(FieldError::UnsupportedPrime(p));
        }
        match degree {
            1 => {
                if p > 32_749 {
                    return Err(FieldError::UnsupportedPrime(p));
                }
                Ok(FieldCtx { p, degree, nonresidue: 0, q: p as u64 })
            }
            2 => {
                if p > 251 {
                    return Err(FieldError::UnsupportedPrime(p));
                }
                let n = smallest_nonresidue(p);
                Ok(FieldCtx { p, degree, nonresidue: n, q: (p as u64) * (p as u64) })
            }
            d => Err(FieldError::BadDegree(d)),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn nonresidue(&self) -> Option<u32> {
        (self.degree == 2).then_some(self.nonresidue)
    }

    /// Builds an element from signed integers, reducing mod `p`.
    pub fn el(&self, a0: i64, a1: i64) -> FqElem {
        let p = self.p as i64;
        let r0 = a0.rem_euclid(p) as u32;
        let r1 = if self.degree == 1 { 0 } else { a1.rem_euclid(p) as u32 };
        FqElem { a0: r0, a1: r1 }
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }

    pub fn one(&self) -> FqElem {
        FqElem { a0: 1, a1: 0 }
    }

    pub fn minus_one(&self) -> FqElem {
        FqElem { a0: self.p - 1, a1: 0 }
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p;
        let mut r0 = a.a0 + b.a0;
        if r0 >= p {
            r0 -= p;
        }
        let mut r1 = a.a1 + b.a1;
        if r1 >= p {
            r1 -= p;
        }
        FqElem { a0: r0, a1: r1 }
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let p = self.p;
        FqElem {
            a0: if a.a0 == 0 { 0 } else { p - a.a0 },
            a1: if a.a1 == 0 { 0 } else { p - a.a1 },
        }
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p as u64;
        if self.degree == 1 {
            FqElem { a0: ((a.a0 as u64 * b.a0 as u64) % p) as u32, a1: 0 }
        } else {
            // (a0 + a1 x)(b0 + b1 x) with x^2 = n.
            let n = self.nonresidue as u64;
            let r0 = (a.a0 as u64 * b.a0 as u64 + n * (a.a1 as u64 * b.a1 as u64 % p)) % p;
            let r1 = (a.a0 as u64 * b.a1 as u64 + a.a1 as u64 * b.a0 as u64) % p;
            FqElem { a0: r0 as u32, a1: r1 as u32 }
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.degree == 1 {
            Ok(FqElem { a0: mod_inv(a.a0, self.p), a1: 0 })
        } else {
            // 1/(a0 + a1 x) = (a0 - a1 x) / (a0^2 - n a1^2); the norm is
            // nonzero because n is a nonresidue.
            let p = self.p as u64;
            let n = self.nonresidue as u64;
            let norm =
                ((a.a0 as u64 * a.a0 as u64) % p + p - (n * (a.a1 as u64 * a.a1 as u64 % p)) % p)
                    % p;
            let ninv = mod_inv(norm as u32, self.p) as u64;
            Ok(FqElem {
                a0: ((a.a0 as u64 * ninv) % p) as u32,
                a1: (((self.p - a.a1) as u64 % p * ninv) % p) as u32,
            })
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Canonical index of an element: `a0*p + a1` in degree 2, `a0` in
    /// degree 1. Ascending index order is lexicographic on `(a0, a1)`.
    pub fn enc(&self, a: FqElem) -> u64 {
        if self.degree == 1 {
            a.a0 as u64
        } else {
            a.a0 as u64 * self.p as u64 + a.a1 as u64
        }
    }

    pub fn dec(&self, e: u64) -> FqElem {
        if self.degree == 1 {
            FqElem { a0: e as u32, a1: 0 }
        } else {
            FqElem { a0: (e / self.p as u64) as u32, a1: (e % self.p as u64) as u32 }
        }
    }

    /// All field elements in ascending canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |e| self.dec(e))
    }

    pub fn in_prime_subfield(&self, a: FqElem) -> bool {
        a.a1 == 0
    }

    pub fn is_square(&self, a: FqElem) -> bool {
        if a.is_zero() {
            return true;
        }
        self.pow(a, (self.q - 1) / 2) == self.one()
    }

    /// Smallest square root of `a` in canonical order, if one exists.
    pub fn sqrt(&self, a: FqElem) -> Option<FqElem> {
        self.elements().find(|&r| self.mul(r, r) == a)
    }

    /// Least `k >= 1` with `a^k = 1`; always divides `q - 1`.
    pub fn mult_order(&self, a: FqElem) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::OrderOfZero);
        }
        let one = self.one();
        let mut acc = a;
        let mut k = 1u64;
        while acc != one {
            acc = self.mul(acc, a);
            k += 1;
        }
        debug_assert_eq!((self.q - 1) % k, 0);
        Ok(k)
    }

    /// The canonically smallest element of multiplicative order 4 (its square
    /// is -1). Requires `4 | q - 1`.
    pub fn find_order4(&self) -> Result<FqElem, FieldError> {
        if (self.q - 1) % 4 != 0 {
            return Err(FieldError::NoOrderFour(self.q - 1));
        }
        let minus_one = self.minus_one();
        self.elements()
            .find(|&a| self.mul(a, a) == minus_one)
            .ok_or(FieldError::NoOrderFour(self.q - 1))
    }

    /// All roots of `c2 t^2 + c1 t + c0` in this field, in ascending canonical
    /// order with multiplicity collapsed.
    pub fn roots_of_quadratic(
        &self,
        c2: FqElem,
        c1: FqElem,
        c0: FqElem,
    ) -> Result<Vec<FqElem>, FieldError> {
        if c2.is_zero() {
            return Err(FieldError::DegenerateQuadratic);
        }
        Ok(self
            .elements()
            .filter(|&t| {
                let v = self.add(self.mul(c2, self.mul(t, t)), self.add(self.mul(c1, t), c0));
                v.is_zero()
            })
            .collect())
    }
}

fn smallest_nonresidue(p: u32) -> u32 {
    let mut squares = vec![false; p as usize];
    for a in 0..p as u64 {
        squares[((a * a) % p as u64) as usize] = true;
    }
    (2..p).find(|&n| !squares[n as usize]).expect("odd prime has a nonresidue")
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2) mod p.
    let mut e = p - 2;
    let mut base = a as u64;
    let mut acc = 1u64;
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u32
}
