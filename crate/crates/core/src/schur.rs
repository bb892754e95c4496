//! Schur squares and the structural quantities behind square-code
//! distinguishers: square dimensions (also of shortenings and the dual),
//! degree-set lower bounds, the RS envelope of a twisted code and the GRS
//! separation bounds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::code::{CodeError, TwistedCodeParams};
use crate::gf::{Elem, FieldTower};
use crate::linalg::{Echelon, LinalgError, Matrix};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchurError {
    #[error("vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("generator has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("shortening at {0:?} leaves the zero code")]
    EmptyShortening(Vec<usize>),
    #[error("position {position} is outside 0..{n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Componentwise product.
pub fn schur_product(f: &FieldTower, x: &[Elem], y: &[Elem]) -> Result<Vec<Elem>, SchurError> {
    if x.len() != y.len() {
        return Err(SchurError::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.iter().zip(y).map(|(&a, &b)| f.mul(a, b)).collect())
}

/// Dimension of the span of the rows' pairwise products.
///
/// Products are inserted diagonal by diagonal (`r_i ⋆ r_(i+d)` for
/// `d = 0, 1, …`) into an incremental echelon basis, stopping once the basis
/// spans the whole ambient space.
pub fn square_dimension(f: &FieldTower, g: &Matrix) -> Result<usize, SchurError> {
    let (k, n) = (g.rows(), g.cols());
    let mut base = Echelon::new(f.clone(), n);
    for row in g.iter_rows() {
        base.insert(row.to_vec());
    }
    if base.rank() != k {
        return Err(SchurError::RankDeficient { rank: base.rank(), rows: k });
    }
    let mut sq = Echelon::new(f.clone(), n);
    'outer: for d in 0..k {
        for i in 0..k - d {
            let p = g.row(i).iter().zip(g.row(i + d)).map(|(&a, &b)| f.mul(a, b)).collect();
            sq.insert(p);
            if sq.is_full() {
                break 'outer;
            }
        }
    }
    Ok(sq.rank())
}

/// Generator of the code shortened at `positions`: codewords vanishing
/// there, with those coordinates deleted.
pub fn shorten(f: &FieldTower, g: &Matrix, positions: &[usize]) -> Result<Matrix, SchurError> {
    let n = g.cols();
    if let Some(&p) = positions.iter().find(|&&p| p >= n) {
        return Err(SchurError::PositionOutOfRange { position: p, n });
    }
    let mut rows: Vec<Vec<Elem>> = g.iter_rows().map(<[Elem]>::to_vec).collect();
    for &p in positions {
        let Some(pivot) = rows.iter().position(|r| !r[p].is_zero()) else {
            continue;
        };
        let pr = rows.swap_remove(pivot);
        let inv = f.inv(pr[p]).expect("nonzero pivot");
        for r in rows.iter_mut() {
            let c = r[p];
            if !c.is_zero() {
                f.axpy(r, f.mul(c, inv), &pr);
            }
        }
    }
    if rows.is_empty() {
        return Err(SchurError::EmptyShortening(positions.to_vec()));
    }
    let keep: Vec<usize> = (0..n).filter(|c| !positions.contains(c)).collect();
    let m = Matrix::from_rows(rows)?;
    let short = m.select_columns(&keep);
    if short.is_zero() {
        return Err(SchurError::EmptyShortening(positions.to_vec()));
    }
    Ok(short)
}

/// Square dimension of the code shortened at `positions`.
pub fn shortened_square_dim(f: &FieldTower, g: &Matrix, positions: &[usize]) -> Result<usize, SchurError> {
    if positions.is_empty() {
        return square_dimension(f, g);
    }
    square_dimension(f, &shorten(f, g, positions)?)
}

/// `|(S + S) ∩ [0, n)|` for the degree set `S` of the polynomial space.
pub fn degree_bound_cor7(p: &TwistedCodeParams) -> usize {
    let s = p.basis_degrees();
    let n = p.n();
    let mut sums = BTreeSet::new();
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i..] {
            if a + b < n {
                sums.insert(a + b);
            }
        }
    }
    sums.len()
}

/// Number of distinct degrees of `(b_i · b_j) mod ∏(X - α)` over pairs of
/// basis polynomials.
pub fn degree_bound_thm6(p: &TwistedCodeParams) -> usize {
    let f = &p.field;
    let n = p.n();
    let m = Poly::from_roots(f, &p.alpha);
    // X^d mod M for every degree a product of two basis polynomials can have.
    let top = 2 * p.max_degree();
    let mut reduced: Vec<Vec<Elem>> = Vec::with_capacity(top + 1);
    let mut cur = vec![Elem::ZERO; n];
    cur[0] = Elem::ONE;
    let mc = m.coeffs();
    for _ in 0..=top {
        reduced.push(cur.clone());
        // multiply by X and reduce with the monic M
        let carry = cur[n - 1];
        cur.rotate_right(1);
        cur[0] = Elem::ZERO;
        if !carry.is_zero() {
            f.axpy(&mut cur, carry, &mc[..n]);
        }
    }
    let terms: Vec<Vec<(usize, Elem)>> = (0..p.k)
        .map(|j| {
            let b = p.basis_poly(j);
            b.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(d, &c)| (d, c)).collect()
        })
        .collect();
    let mut degrees = BTreeSet::new();
    let mut acc = vec![Elem::ZERO; n];
    for i in 0..p.k {
        for j in i..p.k {
            acc.fill(Elem::ZERO);
            for &(da, ca) in &terms[i] {
                for &(db, cb) in &terms[j] {
                    f.axpy(&mut acc, f.mul(ca, cb), &reduced[da + db]);
                }
            }
            if let Some(d) = acc.iter().rposition(|c| !c.is_zero()) {
                degrees.insert(d);
            }
        }
    }
    degrees.len()
}

/// `(min h, k + max t)`: dimensions of the evident RS subcode and supercode
/// on the same points. A plain RS code gives `(k, k)`.
pub fn grs_envelope(p: &TwistedCodeParams) -> (usize, usize) {
    match (p.twists.iter().map(|t| t.hook).min(), p.twists.iter().map(|t| t.twist).max()) {
        (Some(h), Some(t)) => (h, p.k + t),
        _ => (p.k, p.k),
    }
}

/// Bounds on any GRS subcode/supercode pair around a code whose square
/// exceeds the GRS value by `delta = dim_sq - (2k - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    /// `delta <= 0`: the square is consistent with a GRS code.
    NotApplicable,
    Bounds {
        delta: usize,
        /// A GRS supercode has dimension at least `k + delta/2`.
        outer_min: f64,
        /// A GRS subcode has dimension at most `√((k-5/2)² - 2δ) + 5/2`;
        /// `None` when the radicand is negative.
        inner_max: Option<f64>,
    },
}

pub fn separation_bounds(_n: usize, k: usize, dim_sq: usize) -> Separation {
    let grs = 2 * k as i64 - 1;
    let delta = dim_sq as i64 - grs;
    if delta <= 0 {
        return Separation::NotApplicable;
    }
    let kf = k as f64 - 2.5;
    let radicand = kf * kf - 2.0 * delta as f64;
    Separation::Bounds {
        delta: delta as usize,
        outer_min: k as f64 + delta as f64 / 2.0,
        inner_max: (radicand >= 0.0).then(|| radicand.sqrt() + 2.5),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    GrsLike,
    RandomLike,
    Intermediate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::GrsLike => "GRS-like",
            Verdict::RandomLike => "random-like",
            Verdict::Intermediate => "intermediate",
        })
    }
}

/// Classifies a square dimension for an `[n, k]` code. When the GRS and
/// random values coincide the code is called GRS-like.
pub fn verdict(n: usize, k: usize, dim: usize) -> Verdict {
    if dim == (2 * k).saturating_sub(1).min(n) {
        Verdict::GrsLike
    } else if dim == (k * (k + 1) / 2).min(n) {
        Verdict::RandomLike
    } else {
        Verdict::Intermediate
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortenedDim {
    pub length: usize,
    pub dimension: usize,
    pub square: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub n: usize,
    pub k: usize,
    pub dim_square: usize,
    pub square_verdict: Verdict,
    pub dim_dual_square: usize,
    pub dual_square_verdict: Verdict,
    pub shortened_dims: BTreeMap<Vec<usize>, ShortenedDim>,
    pub bound_cor7: Option<usize>,
    pub bound_thm6: Option<usize>,
    pub grs_envelope: Option<(usize, usize)>,
    pub separation: Separation,
}

/// Parity-check matrix of the row space of `g` (a generator of the dual).
/// Uses `[-Aᵀ | I]` when `g` reduces to `[I | A]`, else a kernel basis.
pub fn dual_generator(f: &FieldTower, g: &Matrix) -> Matrix {
    let (k, n) = (g.rows(), g.cols());
    let left = g.select_columns(&(0..k).collect::<Vec<_>>());
    if let Ok(inv) = left.inverse(f) {
        let sys = inv.mul(f, g).expect("shapes agree");
        let mut h = Matrix::zeros(n - k, n);
        for i in 0..n - k {
            for j in 0..k {
                h[(i, j)] = f.neg(sys[(j, k + i)]);
            }
            h[(i, k + i)] = Elem::ONE;
        }
        h
    } else {
        g.kernel(f)
    }
}

/// Measures the square of the code, its dual and the listed shortenings,
/// plus the parameter-based bounds when the secret parameters are known.
pub fn distinguisher_report(
    f: &FieldTower,
    g: &Matrix,
    params: Option<&TwistedCodeParams>,
    shortenings: &[Vec<usize>],
) -> Result<AnalysisReport, SchurError> {
    let (k, n) = (g.rows(), g.cols());
    let dim_square = square_dimension(f, g)?;
    let h = dual_generator(f, g);
    let dim_dual_square = if h.rows() == 0 { 0 } else { square_dimension(f, &h)? };
    let mut shortened_dims = BTreeMap::new();
    for pos in shortenings {
        let mut key = pos.clone();
        key.sort_unstable();
        key.dedup();
        let s = shorten(f, g, &key)?;
        let square = square_dimension(f, &s)?;
        let (length, dimension) = (s.cols(), s.rows());
        let v = verdict(length, dimension, square);
        shortened_dims.insert(key, ShortenedDim { length, dimension, square, verdict: v });
    }
    Ok(AnalysisReport {
        n,
        k,
        dim_square,
        square_verdict: verdict(n, k, dim_square),
        dim_dual_square,
        dual_square_verdict: verdict(n, n - k, dim_dual_square),
        shortened_dims,
        bound_cor7: params.map(degree_bound_cor7),
        bound_thm6: params.map(degree_bound_thm6),
        grs_envelope: params.map(grs_envelope),
        separation: separation_bounds(n, k, dim_square),
    })
}

impl AnalysisReport {
    /// Key = value lines followed by a table of shortened dimensions.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<usize>| v.map_or("none".to_string(), |x| x.to_string());
        s += &format!("n = {}\nk = {}\n", self.n, self.k);
        s += &format!("dim_square = {}\n", self.dim_square);
        s += &format!("verdict_square = {}\n", self.square_verdict);
        s += &format!("dim_dual_square = {}\n", self.dim_dual_square);
        s += &format!("verdict_dual_square = {}\n", self.dual_square_verdict);
        s += &format!("bound_cor7 = {}\n", opt(self.bound_cor7));
        s += &format!("bound_thm6 = {}\n", opt(self.bound_thm6));
        match self.grs_envelope {
            Some((inner, outer)) => s += &format!("grs_envelope = {inner} {outer}\n"),
            None => s += "grs_envelope = none\n",
        }
        match self.separation {
            Separation::NotApplicable => s += "separation = not-applicable\n",
            Separation::Bounds { delta, outer_min, inner_max } => {
                s += &format!("separation_delta = {delta}\n");
                s += &format!("separation_outer_min = {outer_min}\n");
                match inner_max {
                    Some(v) => s += &format!("separation_inner_max = {v:.4}\n"),
                    None => s += "separation_inner_max = vacuous\n",
                }
            }
        }
        if !self.shortened_dims.is_empty() {
            let counts = |v: Verdict| self.shortened_dims.values().filter(|d| d.verdict == v).count();
            s += &format!(
                "shortened_verdicts = {} GRS-like, {} random-like, {} intermediate\n",
                counts(Verdict::GrsLike),
                counts(Verdict::RandomLike),
                counts(Verdict::Intermediate)
            );
            s += "\n# positions  length  dimension  square  verdict\n";
            for (pos, d) in &self.shortened_dims {
                let p: Vec<String> = pos.iter().map(ToString::to_string).collect();
                s += &format!(
                    "{:<12} {:>6}  {:>9}  {:>6}  {}\n",
                    p.join(","),
                    d.length,
                    d.dimension,
                    d.square,
                    d.verdict
                );
            }
        }
        s
    }
}
