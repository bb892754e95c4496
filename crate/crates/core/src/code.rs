//! Twisted Reed–Solomon codes.
//!
//! A code is the image under the evaluation map of the `k`-dimensional space
//!
//! ```text
//! { Σ_{i<k} f_i X^i + Σ_j η_j f_{h_j} X^{k-1+t_j} }
//! ```
//!
//! where each twist `j` has a twist `t_j ∈ [1, n-k]`, a hook `h_j ∈ [0, k)` and
//! a nonzero coefficient `η_j`. With no twists this is a plain RS code.
//!
//! This module holds the parameter set and its validation, the
//! cryptographic sub-family with its parameter formulas, generator and
//! systematic matrices, explicit duals for multiplicative-group evaluation
//! points, and two MDS checks (the subfield-chain certificate and exhaustive
//! minors).

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::gf::{Elem, FieldTower, GfError};
use crate::linalg::{LinalgError, Matrix};
use crate::poly::Poly;

/// Default ceiling on the number of k×k minors [`mds_brute_check`] will visit.
pub const MAX_BRUTE_MINORS: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CodeError {
    #[error("invalid code parameters: {}", .0.iter().map(ToString::to_string).join("; "))]
    InvalidParams(Vec<Violation>),
    #[error("parameter rejected: {check} fails ({detail})")]
    ParameterRejected { check: String, detail: String },
    #[error("leftmost k columns of the generator are singular")]
    SingularLeftBlock,
    #[error("message has length {got}, expected {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("evaluation points do not form a multiplicative group")]
    NotMultiplicativeGroup,
    #[error("length n = {0} is zero in the field")]
    LengthNotInvertible(usize),
    #[error("dual generator is not orthogonal to the code")]
    DualVerificationFailed,
    #[error("{minors} minors exceed the brute-force limit of {limit}; use the subfield-chain certificate")]
    BruteForceTooLarge { minors: u128, limit: u128 },
    #[error("parameter file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One violated condition of the parameter rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroDimension,
    DimensionNotBelowLength { n: usize, k: usize },
    TwistOutOfRange { index: usize, twist: usize, max: usize },
    DuplicateTwist { twist: usize },
    HookOutOfRange { index: usize, hook: usize, k: usize },
    DuplicateHook { hook: usize },
    ZeroCoefficient { index: usize },
    ElementOutOfField { what: &'static str, index: usize },
    DuplicateEvalPoint { index: usize },
    DegreeTooLarge { degree: usize, n: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension => write!(f, "dimension k must be positive"),
            Violation::DimensionNotBelowLength { n, k } => write!(f, "k = {k} is not below n = {n}"),
            Violation::TwistOutOfRange { index, twist, max } => {
                write!(f, "twist out of range: t[{index}] = {twist} not in 1..={max}")
            }
            Violation::DuplicateTwist { twist } => write!(f, "duplicate twist {twist}"),
            Violation::HookOutOfRange { index, hook, k } => {
                write!(f, "hook out of range: h[{index}] = {hook} not below k = {k}")
            }
            Violation::DuplicateHook { hook } => write!(f, "duplicate hook {hook}"),
            Violation::ZeroCoefficient { index } => write!(f, "coefficient eta[{index}] is zero"),
            Violation::ElementOutOfField { what, index } => {
                write!(f, "{what}[{index}] is not a field element")
            }
            Violation::DuplicateEvalPoint { index } => {
                write!(f, "evaluation point alpha[{index}] repeats an earlier point")
            }
            Violation::DegreeTooLarge { degree, n } => {
                write!(f, "twisted degree {degree} is not below n = {n}")
            }
        }
    }
}

/// A single twist: adds `coeff · f_hook · X^(k-1+twist)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Twist {
    pub twist: usize,
    pub hook: usize,
    pub coeff: Elem,
}

/// Full (secret) description of a twisted RS code. The length is
/// `alpha.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedCodeParams {
    pub field: FieldTower,
    pub k: usize,
    pub twists: Vec<Twist>,
    pub alpha: Vec<Elem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRole {
    Generator,
    SystematicGenerator,
    ParityCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMatrix {
    pub matrix: Matrix,
    pub role: MatrixRole,
}

/// Dual code parameters plus the column multipliers that turn the dual's
/// generator into a parity-check matrix of the original code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCode {
    pub params: TwistedCodeParams,
    pub multipliers: Vec<Elem>,
}

impl TwistedCodeParams {
    /// Builds and validates.
    pub fn new(
        field: FieldTower,
        k: usize,
        twists: Vec<Twist>,
        alpha: Vec<Elem>,
    ) -> Result<Self, CodeError> {
        let p = TwistedCodeParams { field, k, twists, alpha };
        p.check()?;
        Ok(p)
    }

    /// A plain RS code: no twists.
    pub fn reed_solomon(field: FieldTower, k: usize, alpha: Vec<Elem>) -> Result<Self, CodeError> {
        Self::new(field, k, Vec::new(), alpha)
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// Number of twists.
    pub fn ell(&self) -> usize {
        self.twists.len()
    }

    /// Every violated condition; empty when the parameters are valid.
    pub fn validate(&self) -> Vec<Violation> {
        let (n, k) = (self.n(), self.k);
        let mut out = Vec::new();
        if k == 0 {
            out.push(Violation::ZeroDimension);
        }
        if k >= n {
            out.push(Violation::DimensionNotBelowLength { n, k });
        }
        let max_twist = n.saturating_sub(k);
        let mut twists = HashSet::new();
        let mut hooks = HashSet::new();
        for (i, tw) in self.twists.iter().enumerate() {
            if tw.twist == 0 || tw.twist > max_twist {
                out.push(Violation::TwistOutOfRange { index: i, twist: tw.twist, max: max_twist });
            }
            if !twists.insert(tw.twist) {
                out.push(Violation::DuplicateTwist { twist: tw.twist });
            }
            if tw.hook >= k {
                out.push(Violation::HookOutOfRange { index: i, hook: tw.hook, k });
            }
            if !hooks.insert(tw.hook) {
                out.push(Violation::DuplicateHook { hook: tw.hook });
            }
            if tw.coeff.is_zero() {
                out.push(Violation::ZeroCoefficient { index: i });
            }
            if self.field.elem(tw.coeff.value()).is_err() {
                out.push(Violation::ElementOutOfField { what: "eta", index: i });
            }
        }
        if let Some(t) = self.twists.iter().map(|t| t.twist).max() {
            let degree = k + t - 1;
            if degree >= n && k < n && t <= max_twist {
                out.push(Violation::DegreeTooLarge { degree, n });
            }
        }
        let mut seen = HashSet::new();
        for (i, a) in self.alpha.iter().enumerate() {
            if self.field.elem(a.value()).is_err() {
                out.push(Violation::ElementOutOfField { what: "alpha", index: i });
            }
            if !seen.insert(*a) {
                out.push(Violation::DuplicateEvalPoint { index: i });
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), CodeError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(CodeError::InvalidParams(v))
        }
    }

    /// Largest degree occurring in the polynomial space.
    pub fn max_degree(&self) -> usize {
        self.twists.iter().map(|t| self.k - 1 + t.twist).max().unwrap_or(self.k - 1)
    }

    /// Degrees of the monomial-like basis: `{0..k} \ hooks ∪ {k-1+t}`.
    pub fn basis_degrees(&self) -> Vec<usize> {
        let hooks: HashSet<usize> = self.twists.iter().map(|t| t.hook).collect();
        let mut s: Vec<usize> = (0..self.k).filter(|j| !hooks.contains(j)).collect();
        s.extend(self.twists.iter().map(|t| self.k - 1 + t.twist));
        s.sort_unstable();
        s
    }

    /// Basis polynomial `j`: `X^j`, or `X^h + η X^(k-1+t)` when `j` is a hook.
    pub fn basis_poly(&self, j: usize) -> Poly {
        let mut p = Poly::monomial(Elem::ONE, j);
        if let Some(tw) = self.twists.iter().find(|t| t.hook == j) {
            p.set_coeff(self.k - 1 + tw.twist, tw.coeff);
        }
        p
    }

    /// The twisted polynomial with `f_j = message[j]`.
    pub fn message_poly(&self, message: &[Elem]) -> Result<Poly, CodeError> {
        if message.len() != self.k {
            return Err(CodeError::MessageLength { expected: self.k, got: message.len() });
        }
        let f = &self.field;
        let mut coeffs = vec![Elem::ZERO; self.max_degree() + 1];
        coeffs[..self.k].copy_from_slice(message);
        for tw in &self.twists {
            let d = self.k - 1 + tw.twist;
            coeffs[d] = f.add(coeffs[d], f.mul(tw.coeff, message[tw.hook]));
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Codeword of `message` (coefficients `f_0..f_{k-1}`).
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        let p = self.message_poly(message)?;
        Ok(self.alpha.iter().map(|&a| p.eval(&self.field, a)).collect())
    }

    /// `(max_degree + 1) × n` matrix with `V[d][i] = α_i^d`.
    pub fn power_table(&self, rows: usize) -> Matrix {
        let f = &self.field;
        let n = self.n();
        let mut v = Matrix::zeros(rows, n);
        for (i, &a) in self.alpha.iter().enumerate() {
            let mut x = Elem::ONE;
            for d in 0..rows {
                v[(d, i)] = x;
                x = f.mul(x, a);
            }
        }
        v
    }

    /// Generator from the monomial-like basis: row `j` is `ev(X^j)`, or
    /// `ev(X^h + η X^(k-1+t))` for a hook `j = h`.
    pub fn generator_matrix(&self) -> Result<CodeMatrix, CodeError> {
        self.check()?;
        let f = &self.field;
        let v = self.power_table(self.max_degree() + 1);
        let mut g = Matrix::zeros(self.k, self.n());
        for j in 0..self.k {
            g.row_mut(j).copy_from_slice(v.row(j));
        }
        for tw in &self.twists {
            let src = v.row(self.k - 1 + tw.twist).to_vec();
            f.axpy(g.row_mut(tw.hook), tw.coeff, &src);
        }
        Ok(CodeMatrix { matrix: g, role: MatrixRole::Generator })
    }

    /// `[I | L] · V` with the full n×n Vandermonde matrix, where
    /// `L[h][t-1] = η` for every twist. Equals [`generator_matrix`].
    ///
    /// [`generator_matrix`]: Self::generator_matrix
    pub fn generator_from_vandermonde(&self) -> Result<Matrix, CodeError> {
        self.check()?;
        let (n, k) = (self.n(), self.k);
        let mut il = Matrix::zeros(k, n);
        for i in 0..k {
            il[(i, i)] = Elem::ONE;
        }
        for tw in &self.twists {
            il[(tw.hook, k + tw.twist - 1)] = tw.coeff;
        }
        Ok(il.mul(&self.field, &self.power_table(n))?)
    }

    /// True when the evaluation points are the full group of n-th roots of
    /// unity: distinct, nonzero and `α^n = 1`. Distinctness plus `α^n = 1`
    /// already forces closure, since `X^n - 1` has at most n roots.
    pub fn alpha_is_multiplicative_group(&self) -> bool {
        let f = &self.field;
        let n = self.n() as u64;
        let distinct = self.alpha.iter().collect::<HashSet<_>>().len() == self.alpha.len();
        distinct && self.alpha.iter().all(|&a| !a.is_zero() && f.pow(a, n) == Elem::ONE)
    }

    /// Explicit dual for multiplicative-group evaluation points: the code
    /// with dimension `n-k`, twists `k-h`, hooks `n-k-t` and coefficients
    /// `-η`, scaled column-wise by `α_i / n`. Orthogonality is verified
    /// before returning.
    pub fn dual(&self) -> Result<DualCode, CodeError> {
        self.check()?;
        if !self.alpha_is_multiplicative_group() {
            return Err(CodeError::NotMultiplicativeGroup);
        }
        let f = &self.field;
        let (n, k) = (self.n(), self.k);
        let n_in_field = f.from_integer(n as u64);
        if n_in_field.is_zero() {
            return Err(CodeError::LengthNotInvertible(n));
        }
        let twists = self
            .twists
            .iter()
            .map(|tw| Twist { twist: k - tw.hook, hook: n - k - tw.twist, coeff: f.neg(tw.coeff) })
            .collect();
        let params = TwistedCodeParams::new(f.clone(), n - k, twists, self.alpha.clone())?;
        let multipliers = self
            .alpha
            .iter()
            .map(|&a| f.div(a, n_in_field))
            .collect::<Result<Vec<_>, _>>()?;
        let g = self.generator_matrix()?.matrix;
        let h = params.generator_matrix()?.matrix.scale_columns(f, &multipliers);
        if !g.mul(f, &h.transpose())?.is_zero() {
            return Err(CodeError::DualVerificationFailed);
        }
        Ok(DualCode { params, multipliers })
    }

    /// `[I | −J Lᵀ J] · V · diag(α/n)`, built directly from the twist matrix
    /// rather than from the dual parameters.
    pub fn parity_check_from_vandermonde(&self) -> Result<CodeMatrix, CodeError> {
        self.check()?;
        if !self.alpha_is_multiplicative_group() {
            return Err(CodeError::NotMultiplicativeGroup);
        }
        let f = &self.field;
        let (n, k) = (self.n(), self.k);
        let n_in_field = f.from_integer(n as u64);
        if n_in_field.is_zero() {
            return Err(CodeError::LengthNotInvertible(n));
        }
        let mut l = Matrix::zeros(k, n - k);
        for tw in &self.twists {
            l[(tw.hook, tw.twist - 1)] = tw.coeff;
        }
        // −J Lᵀ J: transpose, then reverse both rows and columns.
        let lt = l.transpose();
        let mut block = Matrix::zeros(n - k, n);
        for i in 0..n - k {
            block[(i, i)] = Elem::ONE;
            for j in 0..k {
                block[(i, n - k + j)] = f.neg(lt[(n - k - 1 - i, k - 1 - j)]);
            }
        }
        let scale: Vec<Elem> =
            self.alpha.iter().map(|&a| f.div(a, n_in_field)).collect::<Result<_, _>>()?;
        let h = block.mul(f, &self.power_table(n))?.scale_columns(f, &scale);
        Ok(CodeMatrix { matrix: h, role: MatrixRole::ParityCheck })
    }

    /// Subfield-chain MDS certificate.
    ///
    /// Uses the top `ell + 1` levels of the tower as the chain. Holds when
    /// the parameters are valid, every evaluation point lies in the chain's
    /// bottom field `F_s0` with `n <= s0`, and the coefficients occupy the
    /// chain's level differences one each: after sorting by level, the
    /// `i`-th coefficient lies in `F_si \ F_s(i-1)`.
    pub fn mds_tower_certificate(&self) -> bool {
        if !self.validate().is_empty() {
            return false;
        }
        let f = &self.field;
        let levels = f.levels() as usize;
        let ell = self.ell();
        if ell > levels {
            return false;
        }
        let base = (levels - ell) as u32;
        let Ok(s0_degree) = f.subfield_degree(base) else {
            return false;
        };
        if s0_degree < 64 && self.n() as u128 > 1u128 << s0_degree {
            return false;
        }
        if !self.alpha.iter().all(|&a| f.is_in_subfield(a, base).unwrap_or(false)) {
            return false;
        }
        let mut coeff_levels: Vec<u32> = self
            .twists
            .iter()
            .map(|tw| (0..=f.levels()).find(|&l| f.is_in_subfield(tw.coeff, l).unwrap_or(false)))
            .map(|l| l.unwrap_or(u32::MAX))
            .collect();
        coeff_levels.sort_unstable();
        coeff_levels.iter().enumerate().all(|(i, &l)| l == base + 1 + i as u32)
    }

    /// Serializes to the key = value parameter file format.
    pub fn to_text(&self) -> String {
        let f = &self.field;
        let hex = |xs: &mut dyn Iterator<Item = Elem>| xs.map(|x| format!("{x:x}")).join(" ");
        let list = |xs: &mut dyn Iterator<Item = usize>| xs.map(|x| x.to_string()).join(" ");
        let mut s = String::from("# twisted Reed-Solomon code parameters\n");
        s += &format!("q0 = 2^{}\n", f.base_degree());
        s += &format!("levels = {}\n", f.levels());
        s += &format!("modulus = {:#x}\n", f.modulus());
        s += &format!("n = {}\n", self.n());
        s += &format!("k = {}\n", self.k);
        s += &format!("t = {}\n", list(&mut self.twists.iter().map(|t| t.twist)));
        s += &format!("h = {}\n", list(&mut self.twists.iter().map(|t| t.hook)));
        s += &format!("eta = {}\n", hex(&mut self.twists.iter().map(|t| t.coeff)));
        s += &format!("alpha = {}\n", hex(&mut self.alpha.iter().copied()));
        s
    }

    /// Parses the parameter file format written by [`to_text`](Self::to_text)
    /// and validates the result.
    pub fn from_text(text: &str) -> Result<Self, CodeError> {
        let mut kv = std::collections::HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CodeError::Parse {
                line: i + 1,
                msg: "expected `key = value`".into(),
            })?;
            kv.insert(key.trim().to_string(), (i + 1, value.trim().to_string()));
        }
        let get = |key: &str| {
            kv.get(key).cloned().ok_or_else(|| CodeError::Parse { line: 0, msg: format!("missing `{key}`") })
        };
        let parse_err = |line: usize, what: &str| CodeError::Parse { line, msg: format!("bad {what}") };

        let (line, q0) = get("q0")?;
        let base_degree: u32 = q0
            .strip_prefix("2^")
            .and_then(|e| e.parse().ok())
            .or_else(|| q0.parse::<u64>().ok().filter(|v| v.is_power_of_two()).map(|v| v.trailing_zeros()))
            .ok_or_else(|| parse_err(line, "q0 (expected a power of two)"))?;
        let (line, levels) = get("levels")?;
        let levels: u32 = levels.parse().map_err(|_| parse_err(line, "levels"))?;
        let (line, modulus) = get("modulus")?;
        let modulus = u64::from_str_radix(modulus.trim_start_matches("0x"), 16)
            .map_err(|_| parse_err(line, "modulus"))?;
        let field = FieldTower::with_modulus(base_degree, levels, modulus)?;

        let usizes = |key: &str| -> Result<Vec<usize>, CodeError> {
            let (line, v) = get(key)?;
            v.split_whitespace().map(|x| x.parse().map_err(|_| parse_err(line, key))).collect()
        };
        let elems = |key: &str| -> Result<Vec<Elem>, CodeError> {
            let (line, v) = get(key)?;
            v.split_whitespace()
                .map(|x| {
                    let raw = u64::from_str_radix(x, 16).map_err(|_| parse_err(line, key))?;
                    field.elem(raw).map_err(|_| parse_err(line, key))
                })
                .collect()
        };
        let n = usizes("n")?;
        let k = usizes("k")?;
        let (t, h, eta, alpha) = (usizes("t")?, usizes("h")?, elems("eta")?, elems("alpha")?);
        let [n] = n[..] else { return Err(parse_err(get("n")?.0, "n")) };
        let [k] = k[..] else { return Err(parse_err(get("k")?.0, "k")) };
        if t.len() != h.len() || t.len() != eta.len() {
            return Err(CodeError::Parse { line: 0, msg: "t, h and eta lengths differ".into() });
        }
        if alpha.len() != n {
            return Err(CodeError::Parse { line: get("alpha")?.0, msg: format!("expected {n} points") });
        }
        let twists = t
            .into_iter()
            .zip(h)
            .zip(eta)
            .map(|((twist, hook), coeff)| Twist { twist, hook, coeff })
            .collect();
        TwistedCodeParams::new(field, k, twists, alpha)
    }
}

/// Reduces a generator to `[I | A]`, pivoting only on the first k columns.
pub fn systematic_form(f: &FieldTower, g: &CodeMatrix) -> Result<CodeMatrix, CodeError> {
    let k = g.matrix.rows();
    if k > g.matrix.cols() {
        return Err(CodeError::SingularLeftBlock);
    }
    let left = g.matrix.select_columns(&(0..k).collect::<Vec<_>>());
    let inv = left.inverse(f).map_err(|e| match e {
        LinalgError::Singular => CodeError::SingularLeftBlock,
        other => other.into(),
    })?;
    let sys = inv.mul(f, &g.matrix)?;
    Ok(CodeMatrix { matrix: sys, role: MatrixRole::SystematicGenerator })
}

/// Exhaustive MDS test: every k×k minor is nonzero.
pub fn mds_brute_check(f: &FieldTower, g: &Matrix) -> Result<bool, CodeError> {
    mds_brute_check_with_limit(f, g, MAX_BRUTE_MINORS)
}

pub fn mds_brute_check_with_limit(f: &FieldTower, g: &Matrix, limit: u128) -> Result<bool, CodeError> {
    let (k, n) = (g.rows(), g.cols());
    if k > n {
        return Ok(false);
    }
    let minors = binomial(n as u128, k as u128);
    if minors > limit {
        return Err(CodeError::BruteForceTooLarge { minors, limit });
    }
    for cols in (0..n).combinations(k) {
        if g.select_columns(&cols).det(f)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The two members of the cryptographic sub-family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyVariant {
    /// Evaluation points: any distinct nonzero elements of the base field.
    Plain,
    /// Evaluation points: the order-n subgroup of the base field; requires
    /// `n | q0 - 1` and gives codes with explicit duals.
    Multiplicative,
}

impl fmt::Display for FamilyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyVariant::Plain => "F",
            FamilyVariant::Multiplicative => "Ftilde",
        })
    }
}

/// How strictly [`family_f_params`] applies the sub-family's inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyProfile {
    /// Every inequality on `(n, k, ell)` is enforced.
    Strict,
    /// Only the structural requirements are enforced (field size, divisibility,
    /// room for the twists); twists and hooks come from the same formulas,
    /// clamped into their valid ranges. For toy sizes the strict bounds
    /// cannot be met.
    Relaxed,
}

/// One inequality of the sub-family definition, with its evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
    /// Structural checks are enforced even in the relaxed profile.
    pub structural: bool,
}

/// Derived quantities of the sub-family for `(n, k, ell, q0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyShape {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub base_degree: u32,
    pub variant: FamilyVariant,
    pub r: usize,
    /// Twists and hooks straight from the formulas (may be out of range when
    /// checks fail).
    pub raw_twists: Vec<i64>,
    pub raw_hooks: Vec<i64>,
    /// log2 q of the code field, `base_degree · 2^ell`.
    pub field_degree: u64,
    pub checks: Vec<FamilyCheck>,
}

impl FamilyShape {
    pub fn holds(&self, profile: FamilyProfile) -> bool {
        self.first_failure(profile).is_none()
    }

    pub fn first_failure(&self, profile: FamilyProfile) -> Option<&FamilyCheck> {
        self.checks
            .iter()
            .find(|c| !c.holds && (c.structural || profile == FamilyProfile::Strict))
    }

    /// Twists and hooks for the given profile.
    pub fn twists_and_hooks(&self, profile: FamilyProfile) -> (Vec<usize>, Vec<usize>) {
        match profile {
            FamilyProfile::Strict => (
                self.raw_twists.iter().map(|&t| t.max(0) as usize).collect(),
                self.raw_hooks.iter().map(|&h| h.max(0) as usize).collect(),
            ),
            FamilyProfile::Relaxed => {
                let (n, k, ell) = (self.n as i64, self.k as i64, self.ell as i64);
                let t = (1..=ell)
                    .zip(&self.raw_twists)
                    .map(|(i, &t)| t.clamp(i, n - k - ell + i) as usize)
                    .collect();
                let h = (1..=ell)
                    .zip(&self.raw_hooks)
                    .map(|(i, &h)| h.min(k - 1 - ell + i) as usize)
                    .collect();
                (t, h)
            }
        }
    }
}

/// Evaluates the sub-family formulas and inequalities without sampling.
///
/// `r = ⌈(n+1)/(ell+2)⌉ + 2`, `t_i = (i+1)(r-2) - k + 2`, `h_i = r - 1 + i`,
/// `q = q0^(2^ell)`. The irrational bounds are decided with exact integer
/// arithmetic.
pub fn family_shape(
    n: usize,
    k: usize,
    ell: usize,
    base_degree: u32,
    variant: FamilyVariant,
) -> FamilyShape {
    let (ni, ki, li) = (n as i128, k as i128, ell as i128);
    let sqrt_n = (n as f64).sqrt();
    let q0_minus_1: u128 = (1u128 << base_degree.min(64)) - 1;
    let field_degree = u64::from(base_degree).checked_shl(ell.min(63) as u32).unwrap_or(u64::MAX);
    let mut checks = Vec::new();
    let mut push = |name, holds, detail: String, structural| {
        checks.push(FamilyCheck { name, holds, detail, structural });
    };

    push(
        "n <= q0 - 1",
        (n as u128) <= q0_minus_1,
        format!("{n} <= {q0_minus_1}"),
        true,
    );
    push("k < n", k < n, format!("{k} < {n}"), true);
    push(
        "q0^(2^l) <= 2^64",
        ell < 7 && field_degree <= 64,
        format!("log2 q = {field_degree}"),
        true,
    );
    push(
        "twists fit",
        k > ell && n >= k + ell,
        format!("need k > {ell} and n - k >= {ell}"),
        true,
    );
    if variant == FamilyVariant::Multiplicative {
        push(
            "n | q0 - 1",
            n > 0 && q0_minus_1.is_multiple_of(n as u128),
            format!("{q0_minus_1} mod {n} = {}", if n > 0 { q0_minus_1 % n as u128 } else { 0 }),
            true,
        );
    }
    // 2√n + 6 < k  ⇔  k > 6 ∧ (k-6)² > 4n
    push(
        "2*sqrt(n) + 6 < k",
        ki > 6 && (ki - 6) * (ki - 6) > 4 * ni,
        format!("{:.3} < {k}", 2.0 * sqrt_n + 6.0),
        false,
    );
    // k <= n/2 - 2  ⇔  2k <= n - 4
    push("k <= n/2 - 2", 2 * ki <= ni - 4, format!("{k} <= {:.1}", n as f64 / 2.0 - 2.0), false);
    // (n+1)/(k-√n) - 2 < ell  ⇔  (ell+2)(k-√n) > n+1  (with k > √n)
    let lower = {
        let c = (li + 2) * ki - (ni + 1);
        ki * ki > ni && c > 0 && (li + 2) * (li + 2) * ni < c * c
    };
    let lower_val = (n as f64 + 1.0) / (k as f64 - sqrt_n) - 2.0;
    push("(n+1)/(k - sqrt(n)) - 2 < l", lower, format!("{lower_val:.3} < {ell}"), false);
    push("l < k + 1", li < ki + 1, format!("{ell} < {}", k + 1), false);
    // ell < 2n/k - 2  ⇔  (ell+2)k < 2n
    push(
        "l < 2n/k - 2",
        k > 0 && (li + 2) * ki < 2 * ni,
        format!("{ell} < {:.3}", 2.0 * n as f64 / k as f64 - 2.0),
        false,
    );
    // ell < √n - 4  ⇔  n > (ell+4)²
    push(
        "l < sqrt(n) - 4",
        ni > (li + 4) * (li + 4),
        format!("{ell} < {:.3}", sqrt_n - 4.0),
        false,
    );

    let r = (n + 1).div_ceil(ell + 2) + 2;
    let raw_twists = (1..=ell as i64).map(|i| (i + 1) * (r as i64 - 2) - k as i64 + 2).collect();
    let raw_hooks = (1..=ell as i64).map(|i| r as i64 - 1 + i).collect();
    FamilyShape { n, k, ell, base_degree, variant, r, raw_twists, raw_hooks, field_degree, checks }
}

/// Draws a member of the cryptographic sub-family.
///
/// The field is the tower over GF(2^base_degree) with `ell` levels. Each
/// `η_i` is drawn from level `i` minus level `i - 1`. Evaluation points are
/// uniformly random distinct nonzero base-field elements ([`Plain`]), or the
/// order-n subgroup listed as powers of a random generator under a random
/// permutation ([`Multiplicative`]).
///
/// [`Plain`]: FamilyVariant::Plain
/// [`Multiplicative`]: FamilyVariant::Multiplicative
pub fn family_f_params<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    ell: usize,
    base_degree: u32,
    variant: FamilyVariant,
    profile: FamilyProfile,
    rng: &mut R,
) -> Result<TwistedCodeParams, CodeError> {
    let shape = family_shape(n, k, ell, base_degree, variant);
    if let Some(c) = shape.first_failure(profile) {
        return Err(CodeError::ParameterRejected { check: c.name.into(), detail: c.detail.clone() });
    }
    let field = FieldTower::new(base_degree, ell as u32)?;
    let (t, h) = shape.twists_and_hooks(profile);
    let twists = t
        .into_iter()
        .zip(h)
        .enumerate()
        .map(|(i, (twist, hook))| {
            Ok(Twist { twist, hook, coeff: field.sample_eta(i as u32 + 1, rng)? })
        })
        .collect::<Result<Vec<_>, GfError>>()?;
    let alpha = match variant {
        FamilyVariant::Plain => distinct_subfield_points(&field, 0, n, rng)?,
        FamilyVariant::Multiplicative => subgroup_points(&field, n, rng)?,
    };
    TwistedCodeParams::new(field, k, twists, alpha)
}

/// Where [`sample_tower_params`] draws evaluation points from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaChoice {
    /// Distinct nonzero elements of the chain's bottom field.
    Subfield,
    /// The order-n subgroup, in random order.
    Subgroup,
}

/// A random code satisfying the subfield-chain hypotheses: random distinct
/// twists and hooks, coefficients in successive level differences of the top
/// `ell + 1` tower levels.
pub fn sample_tower_params<R: Rng + ?Sized>(
    field: &FieldTower,
    n: usize,
    k: usize,
    ell: usize,
    alpha: AlphaChoice,
    rng: &mut R,
) -> Result<TwistedCodeParams, CodeError> {
    let levels = field.levels() as usize;
    if ell > levels || k == 0 || k >= n || ell > k || ell > n - k {
        return Err(CodeError::ParameterRejected {
            check: "tower shape".into(),
            detail: format!("n={n} k={k} ell={ell} with {levels} tower levels"),
        });
    }
    let base = (levels - ell) as u32;
    let mut twist_pool: Vec<usize> = (1..=n - k).collect();
    let mut hook_pool: Vec<usize> = (0..k).collect();
    twist_pool.shuffle(rng);
    hook_pool.shuffle(rng);
    let twists = (0..ell)
        .map(|i| {
            Ok(Twist {
                twist: twist_pool[i],
                hook: hook_pool[i],
                coeff: field.sample_eta(base + 1 + i as u32, rng)?,
            })
        })
        .collect::<Result<Vec<_>, GfError>>()?;
    let alpha = match alpha {
        AlphaChoice::Subfield => distinct_subfield_points(field, base, n, rng)?,
        AlphaChoice::Subgroup => subgroup_points(field, n, rng)?,
    };
    TwistedCodeParams::new(field.clone(), k, twists, alpha)
}

/// `count` distinct uniformly random nonzero elements of the level-`level`
/// subfield, by rejection through the norm map.
pub fn distinct_subfield_points<R: Rng + ?Sized>(
    field: &FieldTower,
    level: u32,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Elem>, CodeError> {
    let d = field.subfield_degree(level)?;
    if d < 64 && count as u128 > (1u128 << d) - 1 {
        return Err(CodeError::ParameterRejected {
            check: "n <= s0 - 1".into(),
            detail: format!("{count} points requested from GF(2^{d})^*"),
        });
    }
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = field.random_subfield_nonzero(level, rng)?;
        if seen.insert(x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// The n-th roots of unity as `γ^π(0), …, γ^π(n-1)` for a random generator
/// `γ` and random permutation `π`.
pub fn subgroup_points<R: Rng + ?Sized>(
    field: &FieldTower,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Elem>, CodeError> {
    let gamma = field.element_of_order(n as u64, rng)?;
    let mut exps: Vec<u64> = (0..n as u64).collect();
    exps.shuffle(rng);
    Ok(exps.into_iter().map(|e| field.pow(gamma, e)).collect())
}
