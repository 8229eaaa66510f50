//! Arithmetic in GF(2^ℓ) for 1 ≤ ℓ ≤ 16.
//!
//! Elements are polynomials over GF(2) reduced modulo a fixed irreducible
//! polynomial, stored as bit masks (bit `i` is the coefficient of `x^i`).
//! Multiplication goes through log/antilog tables built once per field.

use std::sync::{Arc, OnceLock};

use crate::{Error, Result};

pub const MAX_ELL: u32 = 16;

/// Lexicographically smallest irreducible polynomial of each degree 1..=16,
/// degree-ℓ term included.
pub const STANDARD_POLYS: [u32; MAX_ELL as usize] = [
    0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree 1..=deg/2.
pub fn is_irreducible(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let d = degree(poly);
    (2u32..(1 << (d / 2 + 1))).all(|q| degree(q) > d / 2 || poly_rem(poly, q) != 0)
}

/// Field descriptor: symbol width and reduction polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    ell: u32,
    poly: u32,
}

impl FieldParams {
    pub fn new(ell: u32, poly: u32) -> Result<Self> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(Error::InvalidParams(format!(
                "symbol width {ell} outside 1..={MAX_ELL}"
            )));
        }
        if poly == 0 || degree(poly) != ell {
            return Err(Error::InvalidParams(format!(
                "polynomial {poly:#x} does not have degree {ell}"
            )));
        }
        if !is_irreducible(poly) {
            return Err(Error::InvalidParams(format!(
                "polynomial {poly:#x} is reducible"
            )));
        }
        Ok(Self { ell, poly })
    }

    pub fn standard(ell: u32) -> Result<Self> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(Error::InvalidParams(format!(
                "symbol width {ell} outside 1..={MAX_ELL}"
            )));
        }
        Self::new(ell, STANDARD_POLYS[ell as usize - 1])
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of field elements, q = 2^ℓ.
    pub fn order(&self) -> usize {
        1 << self.ell
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Caller guarantees `v` fits the field in use.
    #[inline]
    pub(crate) const fn from_raw(v: u16) -> Self {
        Self(v)
    }
}

#[derive(Debug, Clone)]
pub struct Field {
    params: FieldParams,
    /// `exp[i] = g^i` for `i < 2(q-1)` so that log sums need no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

fn mul_reduce(a: u32, b: u32, poly: u32, ell: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> ell & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

impl Field {
    pub fn new(params: FieldParams) -> Self {
        let q = params.order() as u32;
        let ell = params.ell;
        let poly = params.poly;
        let generator = (1..q)
            .find(|&g| {
                let mut x = g;
                let mut order = 1;
                while x != 1 {
                    x = mul_reduce(x, g, poly, ell);
                    order += 1;
                }
                order == q - 1
            })
            .expect("multiplicative group of a finite field is cyclic");

        let group = (q - 1) as usize;
        let mut exp = vec![0u16; 2 * group];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for i in 0..group {
            exp[i] = x as u16;
            exp[i + group] = x as u16;
            log[x as usize] = i as u16;
            x = mul_reduce(x, generator, poly, ell);
        }
        Self { params, exp, log }
    }

    /// Shared field for the standard polynomial of degree `ell`.
    pub fn standard(ell: u32) -> Result<Arc<Field>> {
        static FIELDS: [OnceLock<Arc<Field>>; MAX_ELL as usize] =
            [const { OnceLock::new() }; MAX_ELL as usize];
        let params = FieldParams::standard(ell)?;
        Ok(FIELDS[ell as usize - 1]
            .get_or_init(|| Arc::new(Field::new(params)))
            .clone())
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn ell(&self) -> u32 {
        self.params.ell
    }

    pub fn order(&self) -> usize {
        self.params.order()
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if (value as usize) < self.order() {
            Ok(FieldElement(value as u16))
        } else {
            Err(Error::InvalidParams(format!(
                "{value} is not an element of GF(2^{})",
                self.ell()
            )))
        }
    }

    /// All field elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(|v| FieldElement(v as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElement(self.exp[s])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let group = self.order() - 1;
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(group - l) % group]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Maps up to ℓ bits (most significant first) to a symbol. Shorter input
    /// is zero-padded on the right.
    pub fn symbol_from_bits(&self, bits: &[u8]) -> Result<FieldElement> {
        let ell = self.ell() as usize;
        if bits.len() > ell {
            return Err(Error::LengthMismatch {
                expected: ell,
                actual: bits.len(),
            });
        }
        let v = bits.iter().fold(0u32, |acc, &b| acc << 1 | u32::from(b & 1));
        Ok(FieldElement((v << (ell - bits.len())) as u16))
    }

    /// The ℓ-bit representation of `e`, most significant bit first.
    pub fn bits_from_symbol(&self, e: FieldElement) -> Vec<u8> {
        let ell = self.ell();
        (0..ell).rev().map(|i| (e.0 >> i & 1) as u8).collect()
    }
}
