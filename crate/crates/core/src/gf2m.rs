//! Arithmetic in GF(2^m) over a polynomial basis.
//!
//! An element is stored as the integer whose bit `i` is the coefficient of
//! `x^i`. Addition is XOR; multiplication is a carry-less product reduced
//! modulo the field's reduction polynomial. Every degree from 1 to 16 has a
//! built-in reduction polynomial: the numerically smallest irreducible one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 16;

/// Smallest irreducible polynomial of each degree 1..=16 over F2.
const REDUCTION_POLYS: [u32; MAX_DEGREE as usize] = [
    0b10,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1000011,
    0b10000011,
    0b100011011,
    0b1000000011,
    0b10000001001,
    0b100000000101,
    0b1000000001001,
    0b10000000011011,
    0b100000000100001,
    0b1000000000000011,
    0b10000000000101011,
];

/// An element of GF(2^m) in polynomial-basis coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// The field GF(2^m), described by its degree and reduction polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    m: u32,
    poly: u32,
}

impl FieldSpec {
    /// The field of degree `m` with the built-in reduction polynomial.
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(m));
        }
        Ok(FieldSpec { m, poly: REDUCTION_POLYS[m as usize - 1] })
    }

    /// A field with an explicit reduction polynomial, checked for degree and
    /// irreducibility.
    pub fn with_poly(m: u32, poly: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(m));
        }
        if poly_degree(poly) != Some(m) || !is_irreducible(poly) {
            return Err(Error::InvalidReductionPolynomial { m, poly });
        }
        Ok(FieldSpec { m, poly })
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn reduction_poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, `2^m`.
    #[inline]
    pub fn order(&self) -> u32 {
        1 << self.m
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.order() {
            return Err(Error::InvalidElement { m: self.m, value });
        }
        Ok(FieldElement(value))
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.order()
    }

    /// Nonzero elements in increasing order of value.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.order()).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let top = 1u32 << self.m;
        let mut a = a.0;
        let mut b = b.0;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.poly;
            }
        }
        FieldElement(acc)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// `a^k` by square-and-multiply, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k != 0 {
            if k & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, computed as `a^(2^m - 2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero { m: self.m });
        }
        Ok(self.pow(a, u64::from(self.order()) - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#b}", self.m, self.poly)
    }
}

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of `a` modulo `b` as polynomials over F2. `b` must be nonzero.
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = 31 - b.leading_zeros();
    while a != 0 {
        let da = 31 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: u32) -> bool {
    let Some(deg) = poly_degree(poly) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let limit = 1u32 << (deg / 2 + 1);
    (2..limit).all(|q| poly_rem(poly, q) != 0)
}
