use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::str::FromStr;

use rand::Rng;

use super::{Field, ScalarError};

/// Parameters of GF(2^k) = GF(2)[z]/(z^k + r(z)).
///
/// Only the low part `r` of the modulus is stored; the leading `z^k` is
/// implicit. Elements are kept fully reduced in the low `k` bits of a `u128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2kField {
    k: u32,
    low: u128,
}

impl fmt::Debug for Gf2kField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; z^{} + {:#x})", self.k, self.k, self.low)
    }
}

impl Gf2kField {
    pub const SUPPORTED: [u32; 5] = [8, 16, 32, 64, 128];

    /// Default modulus for each supported size. All are irreducible
    /// (checked by `is_irreducible` in the tests):
    ///
    /// | k   | modulus                          |
    /// |-----|----------------------------------|
    /// | 8   | z^8 + z^4 + z^3 + z + 1          |
    /// | 16  | z^16 + z^5 + z^3 + z + 1         |
    /// | 32  | z^32 + z^7 + z^3 + z^2 + 1       |
    /// | 64  | z^64 + z^4 + z^3 + z + 1         |
    /// | 128 | z^128 + z^7 + z^2 + z + 1        |
    pub fn new(k: u32) -> Result<Self, ScalarError> {
        let low = match k {
            8 => 0x1b,
            16 => 0x2b,
            32 => 0x8d,
            64 => 0x1b,
            128 => 0x87,
            _ => return Err(ScalarError::UnsupportedDegree(k)),
        };
        Ok(Self { k, low })
    }

    /// Field with a caller-supplied modulus `z^k + low`. The modulus is
    /// rejected unless it is irreducible.
    pub fn with_modulus(k: u32, low: u128) -> Result<Self, ScalarError> {
        if !Self::SUPPORTED.contains(&k) {
            return Err(ScalarError::UnsupportedDegree(k));
        }
        if k < 128 && low >> k != 0 {
            return Err(ScalarError::ReducibleModulus(k));
        }
        let field = Self { k, low };
        if !field.modulus().is_irreducible() {
            return Err(ScalarError::ReducibleModulus(k));
        }
        Ok(field)
    }

    /// Parses a modulus override given as a hex bit string of the full
    /// polynomial, including the leading `z^k` term (e.g. `11b` for GF(2^8)).
    pub fn from_hex_modulus(hex: &str) -> Result<Self, ScalarError> {
        let poly = Gf2Poly::from_hex(hex).ok_or_else(|| ScalarError::BadFieldSpec(hex.into()))?;
        let k = poly.degree().ok_or_else(|| ScalarError::BadFieldSpec(hex.into()))? as u32;
        let mut low = poly.clone();
        low.set_bit(k as usize, false);
        let low = low.to_u128().ok_or(ScalarError::UnsupportedDegree(k))?;
        Self::with_modulus(k, low)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mask(&self) -> u128 {
        if self.k == 128 {
            u128::MAX
        } else {
            (1u128 << self.k) - 1
        }
    }

    pub fn modulus(&self) -> Gf2Poly {
        let mut p = Gf2Poly::from_u128(self.low);
        p.set_bit(self.k as usize, true);
        p
    }

    pub fn zero(&self) -> Gf2k {
        Gf2k { bits: 0, field: *self }
    }

    pub fn one(&self) -> Gf2k {
        Gf2k { bits: 1, field: *self }
    }

    /// Element from a bit pattern; bits above `k` are reduced away.
    pub fn element(&self, bits: u128) -> Gf2k {
        if self.k == 128 {
            Gf2k { bits, field: *self }
        } else {
            Gf2k {
                bits: self.reduce(bits >> self.k, bits & self.mask()),
                field: *self,
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf2k {
        let bits: u128 = rng.gen();
        Gf2k {
            bits: bits & self.mask(),
            field: *self,
        }
    }

    /// Uniform nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf2k {
        loop {
            let x = self.random(rng);
            if x.bits != 0 {
                return x;
            }
        }
    }

    /// Reduces `hi * z^k + lo` where `lo < 2^k`.
    fn reduce(&self, mut hi: u128, mut lo: u128) -> u128 {
        let k = self.k;
        while hi != 0 {
            // hi * z^k == hi * low (mod modulus); the product has degree
            // < deg(hi) + k, so the overflow strictly shrinks each round.
            let (phi, plo) = clmul128(hi, self.low);
            if k == 128 {
                lo ^= plo;
                hi = phi;
            } else {
                let mask = self.mask();
                lo ^= plo & mask;
                hi = (plo >> k) | (phi << (128 - k));
            }
        }
        lo
    }

    fn mul_bits(&self, a: u128, b: u128) -> u128 {
        if self.k <= 64 {
            let p = clmul64(a as u64, b as u64);
            if self.k == 64 {
                self.reduce(p >> 64, p & self.mask())
            } else {
                self.reduce(p >> self.k, p & self.mask())
            }
        } else {
            let (hi, lo) = clmul128(a, b);
            self.reduce(hi, lo)
        }
    }
}

/// Carry-less 64x64 -> 128 multiplication, four bits of `b` at a time.
fn clmul64(a: u64, b: u64) -> u128 {
    let a = a as u128;
    let mut table = [0u128; 16];
    for i in 1..16 {
        table[i] = if i & 1 == 1 {
            table[i - 1] ^ a
        } else {
            table[i >> 1] << 1
        };
    }
    let mut acc = 0u128;
    for nib in (0..16).rev() {
        acc = (acc << 4) ^ table[((b >> (4 * nib)) & 0xf) as usize];
    }
    acc
}

/// Carry-less 128x128 -> 256 multiplication, returned as (high, low).
fn clmul128(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64, (a >> 64) as u64);
    let (b0, b1) = (b as u64, (b >> 64) as u64);
    let lo = clmul64(a0, b0);
    let hi = clmul64(a1, b1);
    let mid = clmul64(a0 ^ a1, b0 ^ b1) ^ lo ^ hi;
    (hi ^ (mid >> 64), lo ^ (mid << 64))
}

/// An element of GF(2^k).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2k {
    bits: u128,
    field: Gf2kField,
}

impl fmt::Debug for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.bits)
    }
}

impl fmt::Display for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.bits)
    }
}

/// Serialized as the hex bit pattern.
impl serde::Serialize for Gf2k {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl Gf2k {
    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn field(&self) -> Gf2kField {
        self.field
    }

    pub fn to_hex(&self) -> String {
        let width = (self.field.k as usize).div_ceil(4);
        format!("{:0width$x}", self.bits, width = width)
    }

    fn same_field(&self, rhs: &Self) {
        debug_assert_eq!(self.field, rhs.field, "mixing elements of different fields");
    }
}

impl Add for Gf2k {
    type Output = Gf2k;
    fn add(self, rhs: Gf2k) -> Gf2k {
        self.same_field(&rhs);
        Gf2k {
            bits: self.bits ^ rhs.bits,
            field: self.field,
        }
    }
}

impl AddAssign for Gf2k {
    fn add_assign(&mut self, rhs: Gf2k) {
        *self = *self + rhs;
    }
}

impl Mul for Gf2k {
    type Output = Gf2k;
    fn mul(self, rhs: Gf2k) -> Gf2k {
        self.same_field(&rhs);
        Gf2k {
            bits: self.field.mul_bits(self.bits, rhs.bits),
            field: self.field,
        }
    }
}

impl MulAssign for Gf2k {
    fn mul_assign(&mut self, rhs: Gf2k) {
        *self = *self * rhs;
    }
}

impl Field for Gf2k {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }

    fn one_like(&self) -> Self {
        self.field.one()
    }

    fn is_zero(&self) -> bool {
        self.bits == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    /// a^(2^k - 2) = a^2 * a^4 * ... * a^(2^(k-1)).
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.bits == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        let mut acc = self.one_like();
        let mut sq = *self;
        for _ in 1..self.field.k {
            sq = sq * sq;
            acc = acc * sq;
        }
        Ok(acc)
    }

    fn encode(&self) -> String {
        self.to_hex()
    }
}

/// Field selection as written in configuration: `gf2k:<k>` or `exact`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Gf2k(Gf2kField),
    Exact,
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "exact" {
            return Ok(FieldSpec::Exact);
        }
        let rest = s
            .strip_prefix("gf2k:")
            .ok_or_else(|| ScalarError::BadFieldSpec(s.into()))?;
        let k: u32 = rest.parse().map_err(|_| ScalarError::BadFieldSpec(s.into()))?;
        Ok(FieldSpec::Gf2k(Gf2kField::new(k)?))
    }
}

/// Dense polynomial over GF(2), bit `i` holding the coefficient of `z^i`.
/// Only used for modulus validation, so it favours clarity over speed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn from_u128(x: u128) -> Self {
        let mut p = Self {
            words: vec![x as u64, (x >> 64) as u64],
        };
        p.trim();
        p
    }

    pub fn from_hex(hex: &str) -> Option<Self> {
        let hex = hex.trim().trim_start_matches("0x");
        if hex.is_empty() {
            return None;
        }
        let mut p = Self::default();
        for (i, c) in hex.chars().rev().enumerate() {
            let nib = c.to_digit(16)?;
            for b in 0..4 {
                if nib >> b & 1 == 1 {
                    p.set_bit(4 * i + b, true);
                }
            }
        }
        Some(p)
    }

    pub fn to_u128(&self) -> Option<u128> {
        if self.words.len() > 2 {
            return None;
        }
        let lo = self.words.first().copied().unwrap_or(0) as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        Some(lo | hi << 64)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some(64 * (self.words.len() - 1) + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn set_bit(&mut self, i: usize, on: bool) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        if on {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
        self.trim();
    }

    fn xor_shifted(&mut self, other: &Self, shift: usize) {
        if let Some(deg) = other.degree() {
            for i in 0..=deg {
                if other.bit(i) {
                    let cur = self.bit(i + shift);
                    self.set_bit(i + shift, !cur);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_shifted(other, 0);
        out
    }

    pub fn rem(&self, m: &Self) -> Self {
        let dm = m.degree().expect("reduction modulo zero");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            r.xor_shifted(m, dr - dm);
        }
        r
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        let mut acc = Self::default();
        if let Some(deg) = other.degree() {
            for i in 0..=deg {
                if other.bit(i) {
                    acc.xor_shifted(self, i);
                }
            }
        }
        acc.rem(m)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's test: f of degree n is irreducible iff z^(2^n) = z mod f and
    /// gcd(z^(2^(n/q)) - z, f) = 1 for every prime q dividing n.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        let z = Self::from_u128(2).rem(self);
        let frob = |times: usize| {
            let mut x = z.clone();
            for _ in 0..times {
                x = x.mul_mod(&x, self);
            }
            x
        };
        if frob(n) != z {
            return false;
        }
        let mut m = n;
        let mut q = 2;
        let mut primes = Vec::new();
        while q * q <= m {
            if m % q == 0 {
                primes.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        primes.into_iter().all(|q| {
            let g = frob(n / q).add(&z).gcd(self);
            g.degree() == Some(0)
        })
    }
}
