//! Binary extension fields GF(2^m), 2 <= m <= 64, seen as the top of a tower
//!
//! ```text
//! GF(2^m0) ⊂ GF(2^(2·m0)) ⊂ GF(2^(4·m0)) ⊂ … ⊂ GF(2^(m0·2^levels)) = GF(2^m)
//! ```
//!
//! All arithmetic happens in the top field, in a polynomial basis over GF(2)
//! packed into a `u64`. Subfields are never represented on their own: an
//! element lies in the level-`i` subfield iff it is fixed by the Frobenius
//! power `x ↦ x^(2^(m0·2^i))`.
//!
//! Fields of degree at most 16 get log/exp tables; larger fields fall back to
//! a shift-and-add carry-less multiplier.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 64;

const TABLE_MAX_DEGREE: u32 = 16;

/// Lexicographically least irreducible polynomial of each degree over GF(2),
/// stored without its leading `x^m` term. Indexed by degree; entries 0 and 1
/// are unused.
pub const MODULUS_TABLE: [u64; 65] = [
    0, 0, 0x3, 0x3, 0x3, 0x5, 0x3, 0x3, 0x1b, 0x3, 0x9, 0x5, 0x9, 0x1b, 0x21, 0x3, 0x2b, 0x9, 0x9,
    0x27, 0x9, 0x5, 0x3, 0x21, 0x1b, 0x9, 0x1b, 0x27, 0x3, 0x5, 0x3, 0x9, 0x8d, 0x4b, 0x1b, 0x5,
    0x35, 0x3f, 0x63, 0x11, 0x39, 0x9, 0x27, 0x59, 0x21, 0x1b, 0x3, 0x21, 0x2d, 0x71, 0x1d, 0x4b,
    0x9, 0x47, 0x7d, 0x47, 0x95, 0x11, 0x63, 0x7b, 0x3, 0x27, 0x69, 0x3, 0x1b,
];

/// Errors raised by field construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfError {
    #[error("unsupported tower: base degree {base_degree} with {levels} levels (top degree must lie in 2..=64)")]
    UnsupportedDegree { base_degree: u32, levels: u32 },
    #[error("modulus x^{degree} + {modulus:#x} is not irreducible")]
    Reducible { degree: u32, modulus: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("subfield level {level} out of range {min}..={max}")]
    LevelOutOfRange { level: u32, min: u32, max: u32 },
    #[error("value {value:#x} is not an element of GF(2^{degree})")]
    ValueOutOfRange { value: u64, degree: u32 },
    #[error("no element of order {0}: it does not divide the multiplicative group order")]
    OrderNotDivisor(u64),
    #[error("element order {0} too large to factor")]
    OrderTooLarge(u64),
    #[error("element encoding must be {expected} bytes, got {got}")]
    EncodingLength { expected: usize, got: usize },
}

/// A raw element of some [`FieldTower`]: the polynomial-basis bit vector.
///
/// `Elem` does not know which field it belongs to; matrices and polynomials
/// store these and pass the field alongside. Use [`FieldElement`] when the
/// field identity has to travel with the value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub const fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Wraps a raw bit pattern; the caller guarantees it fits the field.
    pub(crate) const fn from_value_unchecked(v: u64) -> Elem {
        Elem(v)
    }
}

impl fmt::LowerHex for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

struct Tables {
    // exp has length 2(q-1) so that log a + log b never needs reducing.
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    base_degree: u32,
    levels: u32,
    degree: u32,
    modulus: u64,
    mask: u64,
    tables: Option<Tables>,
}

/// GF(2^m) together with its chain of subfields.
///
/// Cloning is cheap (shared handle). Two towers describe the same field for
/// arithmetic purposes when degree and modulus agree, see [`same_field`].
///
/// [`same_field`]: FieldTower::same_field
#[derive(Clone)]
pub struct FieldTower(Arc<Inner>);

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF(2^{}) [base 2^{}, {} levels, modulus x^{} + {:#x}]",
            self.0.degree, self.0.base_degree, self.0.levels, self.0.degree, self.0.modulus
        )
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.same_field(other)
                && self.0.base_degree == other.0.base_degree
                && self.0.levels == other.0.levels)
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    /// The tower over GF(2^base_degree) with `levels` quadratic steps, using
    /// the tabulated modulus for the top degree.
    pub fn new(base_degree: u32, levels: u32) -> Result<Self, GfError> {
        let degree = top_degree(base_degree, levels)?;
        Self::with_modulus(base_degree, levels, MODULUS_TABLE[degree as usize])
    }

    /// Like [`new`](Self::new) but with an explicit modulus (low-order
    /// coefficients, leading term implicit). The modulus is checked for
    /// irreducibility.
    pub fn with_modulus(base_degree: u32, levels: u32, modulus: u64) -> Result<Self, GfError> {
        let degree = top_degree(base_degree, levels)?;
        let mask = mask_for(degree);
        if modulus & !mask != 0 || modulus & 1 == 0 {
            return Err(GfError::Reducible { degree, modulus });
        }
        let mut inner = Inner { base_degree, levels, degree, modulus, mask, tables: None };
        if !is_irreducible(&inner) {
            return Err(GfError::Reducible { degree, modulus });
        }
        if degree <= TABLE_MAX_DEGREE {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldTower(Arc::new(inner)))
    }

    /// Extension degree m of the top field over GF(2).
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn base_degree(&self) -> u32 {
        self.0.base_degree
    }

    pub fn levels(&self) -> u32 {
        self.0.levels
    }

    /// Modulus without its leading `x^m` term.
    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }

    /// q - 1, the order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.0.mask
    }

    /// Degree over GF(2) of the level-`level` subfield, `m0·2^level`.
    pub fn subfield_degree(&self, level: u32) -> Result<u32, GfError> {
        self.check_level(level, 0)?;
        Ok(self.0.base_degree << level)
    }

    /// Number of bytes in the serialized form of one element.
    pub fn byte_width(&self) -> usize {
        self.0.degree.div_ceil(8) as usize
    }

    /// Same degree and modulus, hence interchangeable elements.
    pub fn same_field(&self, other: &FieldTower) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.degree == other.0.degree && self.0.modulus == other.0.modulus)
    }

    pub fn elem(&self, value: u64) -> Result<Elem, GfError> {
        if value & !self.0.mask != 0 {
            return Err(GfError::ValueOutOfRange { value, degree: self.0.degree });
        }
        Ok(Elem(value))
    }

    /// The element `x` of the polynomial basis.
    pub fn generator_x(&self) -> Elem {
        Elem(2)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(a.0 ^ b.0)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        Elem(a.0 ^ b.0)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        a
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Elem::ZERO
                } else {
                    let i = t.log[a.0 as usize] + t.log[b.0 as usize];
                    Elem(u64::from(t.exp[i as usize]))
                }
            }
            None => Elem(clmul_mod(a.0, b.0, self.0.degree, self.0.modulus, self.0.mask)),
        }
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        match &self.0.tables {
            Some(t) => {
                let order = self.0.mask as u32;
                let l = t.log[a.0 as usize];
                Some(Elem(u64::from(t.exp[((order - l) % order) as usize])))
            }
            None => Some(self.pow(a, self.0.mask - 1)),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        let inv = self.inv(b).ok_or(GfError::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let order = u128::from(self.0.mask);
            let l = (u128::from(t.log[a.0 as usize]) * u128::from(e)) % order;
            return Elem(u64::from(t.exp[l as usize]));
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// The integer `n` mapped into the field, `n·1` (i.e. `n mod 2`).
    pub fn from_integer(&self, n: u64) -> Elem {
        Elem(n & 1)
    }

    /// Frobenius fixed-point test for the level-`level` subfield
    /// GF(2^(m0·2^level)).
    pub fn is_in_subfield(&self, x: Elem, level: u32) -> Result<bool, GfError> {
        let d = self.subfield_degree(level)?;
        Ok(self.is_in_subfield_of_degree(x, d))
    }

    /// `x^(2^d) == x`. Meaningful when `d` divides the extension degree.
    pub fn is_in_subfield_of_degree(&self, x: Elem, d: u32) -> bool {
        let mut y = x;
        for _ in 0..d {
            y = self.square(y);
        }
        y == x
    }

    /// Uniform element of GF(s_level) \ GF(s_{level-1}) for `1 <= level <= levels`.
    ///
    /// A uniform nonzero element is pushed through the norm map
    /// `x ↦ x^((q-1)/(s_level - 1))` onto GF(s_level)^*, and rejected while it
    /// still lies in the next smaller subfield.
    pub fn sample_eta<R: Rng + ?Sized>(&self, level: u32, rng: &mut R) -> Result<Elem, GfError> {
        self.check_level(level, 1)?;
        let d = self.0.base_degree << level;
        let prev = self.0.base_degree << (level - 1);
        let exponent = self.0.mask / mask_for(d);
        loop {
            let y = self.pow(self.random_nonzero(rng), exponent);
            if !self.is_in_subfield_of_degree(y, prev) {
                return Ok(y);
            }
        }
    }

    /// Uniform nonzero element of the level-`level` subfield.
    pub fn random_subfield_nonzero<R: Rng + ?Sized>(
        &self,
        level: u32,
        rng: &mut R,
    ) -> Result<Elem, GfError> {
        let d = self.subfield_degree(level)?;
        let exponent = self.0.mask / mask_for(d);
        Ok(self.pow(self.random_nonzero(rng), exponent))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen::<u64>() & self.0.mask)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Multiplicative order of `x`, or `None` for zero. Only for fields whose
    /// group order can be factored by trial division (see [`element_of_order`]).
    ///
    /// [`element_of_order`]: FieldTower::element_of_order
    pub fn order_of(&self, x: Elem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        let mut order = self.0.mask;
        for p in prime_factors(order) {
            while order.is_multiple_of(p) && self.pow(x, order / p) == Elem::ONE {
                order /= p;
            }
        }
        Some(order)
    }

    /// A random element of multiplicative order exactly `order`, which must
    /// divide q - 1. `order` is factored by trial division, so it is limited
    /// to 2^40.
    pub fn element_of_order<R: Rng + ?Sized>(&self, order: u64, rng: &mut R) -> Result<Elem, GfError> {
        if order == 0 || !self.0.mask.is_multiple_of(order) {
            return Err(GfError::OrderNotDivisor(order));
        }
        if order > 1 << 40 {
            return Err(GfError::OrderTooLarge(order));
        }
        let primes = prime_factors(order);
        let cofactor = self.0.mask / order;
        loop {
            let x = self.pow(self.random_nonzero(rng), cofactor);
            if primes.iter().all(|&p| self.pow(x, order / p) != Elem::ONE) {
                return Ok(x);
            }
        }
    }

    /// Every element in increasing bit-pattern order: 0, 1, x, x+1, …
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..=self.0.mask).map(Elem)
    }

    /// Appends the little-endian `byte_width()`-byte encoding of `x`.
    pub fn write_elem(&self, x: Elem, out: &mut Vec<u8>) {
        out.extend_from_slice(&x.0.to_le_bytes()[..self.byte_width()]);
    }

    pub fn read_elem(&self, bytes: &[u8]) -> Result<Elem, GfError> {
        let w = self.byte_width();
        if bytes.len() != w {
            return Err(GfError::EncodingLength { expected: w, got: bytes.len() });
        }
        let mut buf = [0u8; 8];
        buf[..w].copy_from_slice(bytes);
        self.elem(u64::from_le_bytes(buf))
    }

    /// `dst[i] += c · src[i]`, the row operation behind all eliminations.
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], c: Elem, src: &[Elem]) {
        debug_assert_eq!(dst.len(), src.len());
        if c.is_zero() {
            return;
        }
        match &self.0.tables {
            Some(t) => {
                let lc = t.log[c.0 as usize];
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        d.0 ^= u64::from(t.exp[(lc + t.log[s.0 as usize]) as usize]);
                    }
                }
            }
            None => {
                for (d, s) in dst.iter_mut().zip(src) {
                    d.0 ^= clmul_mod(c.0, s.0, self.0.degree, self.0.modulus, self.0.mask);
                }
            }
        }
    }

    /// `v[i] *= c`.
    pub fn scale(&self, v: &mut [Elem], c: Elem) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    fn check_level(&self, level: u32, min: u32) -> Result<(), GfError> {
        if level < min || level > self.0.levels {
            return Err(GfError::LevelOutOfRange { level, min, max: self.0.levels });
        }
        Ok(())
    }
}

/// An element that carries its field, for callers that want mixing checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldTower,
    value: Elem,
}

impl FieldElement {
    pub fn new(field: &FieldTower, value: u64) -> Result<Self, GfError> {
        Ok(FieldElement { value: field.elem(value)?, field: field.clone() })
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn elem(&self) -> Elem {
        self.value
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.binary(other, |f, a, b| Ok(f.add(a, b)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.binary(other, |f, a, b| Ok(f.sub(a, b)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.binary(other, |f, a, b| Ok(f.mul(a, b)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.binary(other, |f, a, b| f.div(a, b))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }

    fn binary(
        &self,
        other: &FieldElement,
        op: impl FnOnce(&FieldTower, Elem, Elem) -> Result<Elem, GfError>,
    ) -> Result<FieldElement, GfError> {
        if !self.field.same_field(&other.field) {
            return Err(GfError::FieldMismatch);
        }
        let value = op(&self.field, self.value, other.value)?;
        Ok(FieldElement { field: self.field.clone(), value })
    }
}

fn top_degree(base_degree: u32, levels: u32) -> Result<u32, GfError> {
    let err = GfError::UnsupportedDegree { base_degree, levels };
    if base_degree == 0 || levels > 6 {
        return Err(err);
    }
    let degree = base_degree.checked_shl(levels).ok_or(err.clone())?;
    if !(2..=MAX_DEGREE).contains(&degree) {
        return Err(err);
    }
    Ok(degree)
}

#[inline]
fn mask_for(degree: u32) -> u64 {
    if degree >= 64 {
        u64::MAX
    } else {
        (1u64 << degree) - 1
    }
}

#[inline]
fn clmul_mod(mut a: u64, mut b: u64, degree: u32, modulus: u64, mask: u64) -> u64 {
    let top = 1u64 << (degree - 1);
    let mut r = 0u64;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        b >>= 1;
        let carry = a & top != 0;
        a = (a << 1) & mask;
        if carry {
            a ^= modulus;
        }
    }
    r
}

fn is_irreducible(inner: &Inner) -> bool {
    let m = inner.degree;
    let frob = |d: u32| {
        let mut y = 2u64;
        for _ in 0..d {
            y = clmul_mod(y, y, m, inner.modulus, inner.mask);
        }
        y
    };
    if frob(m) != 2 {
        return false;
    }
    let full = (1u128 << m) | u128::from(inner.modulus);
    (1..m)
        .filter(|d| m.is_multiple_of(*d))
        .all(|d| gf2_poly_gcd(full, u128::from(frob(d) ^ 2)) == 1)
}

fn gf2_poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let db = 127 - b.leading_zeros();
        while a != 0 && 127 - a.leading_zeros() >= db {
            a ^= b << (127 - a.leading_zeros() - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn build_tables(inner: &Inner) -> Tables {
    let order = inner.mask;
    let primes = prime_factors(order);
    let mul = |a: u64, b: u64| clmul_mod(a, b, inner.degree, inner.modulus, inner.mask);
    let pow = |a: u64, mut e: u64| {
        let (mut base, mut acc) = (a, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let primitive = (2..=order)
        .find(|&g| primes.iter().all(|&p| pow(g, order / p) != 1))
        .expect("a finite field has a primitive element");
    let n = order as usize;
    let mut exp = vec![0u32; 2 * n];
    let mut log = vec![0u32; n + 1];
    let mut x = 1u64;
    for i in 0..n {
        exp[i] = x as u32;
        exp[i + n] = x as u32;
        log[x as usize] = i as u32;
        x = mul(x, primitive);
    }
    Tables { exp, log }
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
