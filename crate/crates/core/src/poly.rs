//! Dense univariate polynomials over a [`FieldTower`].
//!
//! Coefficients are stored lowest degree first and kept normalized (no
//! trailing zeros). The zero polynomial has degree `None`, which orders below
//! every `Some(d)` and therefore behaves like −∞ in degree comparisons.

use std::collections::HashSet;

use crate::gf::{Elem, FieldTower};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("evaluation points are not distinct (index {0} repeats an earlier point)")]
    DuplicatePoint(usize),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Elem::ONE] }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c · X^d`.
    pub fn monomial(c: Elem, d: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; d + 1];
        coeffs[d] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `∏ (X − a)` over the given roots.
    pub fn from_roots(f: &FieldTower, roots: &[Elem]) -> Self {
        let mut coeffs = vec![Elem::ONE];
        for &a in roots {
            coeffs.push(Elem::ZERO);
            for i in (1..coeffs.len()).rev() {
                coeffs[i] = f.sub(coeffs[i - 1], f.mul(a, coeffs[i]));
            }
            coeffs[0] = f.neg(f.mul(a, coeffs[0]));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn set_coeff(&mut self, i: usize, c: Elem) {
        if i >= self.coeffs.len() {
            if c.is_zero() {
                return;
            }
            self.coeffs.resize(i + 1, Elem::ZERO);
        }
        self.coeffs[i] = c;
        self.normalize();
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &FieldTower, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &FieldTower, other: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = f.add(*c, s);
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, f: &FieldTower, other: &Poly) -> Poly {
        // characteristic 2
        self.add(f, other)
    }

    pub fn scale(&self, f: &FieldTower, c: Elem) -> Poly {
        let mut coeffs = self.coeffs.clone();
        f.scale(&mut coeffs, c);
        Poly::from_coeffs(coeffs)
    }

    /// Schoolbook product.
    pub fn mul(&self, f: &FieldTower, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            f.axpy(&mut coeffs[i..i + other.coeffs.len()], a, &other.coeffs);
        }
        Poly::from_coeffs(coeffs)
    }

    /// Quotient and remainder of `self / divisor`.
    pub fn div_rem(&self, f: &FieldTower, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::ZeroDivisor)?;
        let Some(sd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if sd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = f.inv(divisor.coeffs[dd]).expect("normalized leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; sd - dd + 1];
        for shift in (0..=sd - dd).rev() {
            let c = rem[shift + dd];
            if c.is_zero() {
                continue;
            }
            let q = f.mul(c, lead_inv);
            quot[shift] = q;
            f.axpy(&mut rem[shift..=shift + dd], q, &divisor.coeffs);
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, f: &FieldTower, modulus: &Poly) -> Result<Poly, PolyError> {
        Ok(self.div_rem(f, modulus)?.1)
    }

    /// `(self · other) mod modulus`.
    pub fn mul_mod(&self, f: &FieldTower, other: &Poly, modulus: &Poly) -> Result<Poly, PolyError> {
        if modulus.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        self.mul(f, other).rem(f, modulus)
    }

    /// Formal derivative.
    pub fn derivative(&self, f: &FieldTower) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_integer(i as u64), c))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

/// Rejects repeated evaluation points.
pub fn check_distinct(points: &[Elem]) -> Result<(), PolyError> {
    let mut seen = HashSet::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if !seen.insert(*p) {
            return Err(PolyError::DuplicatePoint(i));
        }
    }
    Ok(())
}

/// The evaluation map: `[f(α_1), …, f(α_n)]`.
pub fn eval_vector(f: &FieldTower, poly: &Poly, alpha: &[Elem]) -> Result<Vec<Elem>, PolyError> {
    check_distinct(alpha)?;
    Ok(eval_unchecked(f, poly, alpha))
}

pub(crate) fn eval_unchecked(f: &FieldTower, poly: &Poly, alpha: &[Elem]) -> Vec<Elem> {
    alpha.iter().map(|&a| poly.eval(f, a)).collect()
}

/// Lagrange interpolation: the unique polynomial of degree `< points.len()`
/// through all `(x, y)` pairs.
pub fn interpolate(f: &FieldTower, points: &[(Elem, Elem)]) -> Result<Poly, PolyError> {
    let xs: Vec<Elem> = points.iter().map(|p| p.0).collect();
    check_distinct(&xs)?;
    let ys: Vec<Elem> = points.iter().map(|p| p.1).collect();
    let vanishing = Poly::from_roots(f, &xs);
    Ok(interpolate_with(f, &xs, &ys, &vanishing))
}

/// Interpolation against a precomputed `∏ (X − x_i)`; `xs` must be distinct.
pub(crate) fn interpolate_with(f: &FieldTower, xs: &[Elem], ys: &[Elem], vanishing: &Poly) -> Poly {
    let n = xs.len();
    let deriv = vanishing.derivative(f);
    let mut acc = vec![Elem::ZERO; n];
    let mut quotient = vec![Elem::ZERO; n];
    let m = vanishing.coeffs();
    for (&x, &y) in xs.iter().zip(ys) {
        if y.is_zero() {
            continue;
        }
        // M(X) / (X − x) by synthetic division; exact since x is a root.
        let mut carry = Elem::ZERO;
        for i in (0..n).rev() {
            carry = f.add(m[i + 1], f.mul(carry, x));
            quotient[i] = carry;
        }
        let w = f
            .div(y, deriv.eval(f, x))
            .expect("M'(x) is nonzero at a simple root");
        f.axpy(&mut acc, w, &quotient);
    }
    Poly::from_coeffs(acc)
}

/// Output of [`euclid_step_sequence`]: `u·a + v·b = r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidTriple {
    pub u: Poly,
    pub v: Poly,
    pub r: Poly,
}

/// Extended Euclid on `(a, b)`, halted at the first remainder in the sequence
/// `a, b, r_1, r_2, …` whose degree is below `stop_degree`.
///
/// The sequence never runs past a zero remainder: if the next remainder
/// would be zero the current one (the gcd) is returned, so `b = 0` yields
/// `(1, 0, a)` and `stop_degree = 0` computes a full gcd.
pub fn euclid_step_sequence(f: &FieldTower, a: &Poly, b: &Poly, stop_degree: usize) -> EuclidTriple {
    let (u, v, r) = euclid(f, a, b, stop_degree, true);
    EuclidTriple { u: u.expect("tracked"), v, r }
}

/// Shared core; the decoder skips the `u` cofactor.
pub(crate) fn euclid(
    f: &FieldTower,
    a: &Poly,
    b: &Poly,
    stop_degree: usize,
    track_u: bool,
) -> (Option<Poly>, Poly, Poly) {
    let stop = Some(stop_degree);
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut u0 = track_u.then(Poly::one);
    let mut u1 = track_u.then(Poly::zero);
    let mut v0 = Poly::zero();
    let mut v1 = Poly::one();
    loop {
        if r0.degree() < stop || r1.is_zero() {
            return (u0, v0, r0);
        }
        let (q, r2) = r0.div_rem(f, &r1).expect("r1 is nonzero");
        let v2 = v0.sub(f, &q.mul(f, &v1));
        let u2 = match (&u0, &u1) {
            (Some(u0), Some(u1)) => Some(u0.sub(f, &q.mul(f, u1))),
            _ => None,
        };
        r0 = std::mem::replace(&mut r1, r2);
        v0 = std::mem::replace(&mut v1, v2);
        u0 = std::mem::replace(&mut u1, u2);
    }
}
