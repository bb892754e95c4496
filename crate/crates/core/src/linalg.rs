//! Dense matrices over a [`FieldTower`] and exact Gaussian elimination.

use crate::gf::{Elem, FieldTower};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries for {rows}x{cols}", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, f: &FieldTower, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if !a.is_zero() {
                    let (src, dst) = (other.row(k), &mut out.data[i * other.cols..(i + 1) * other.cols]);
                    f.axpy(dst, a, src);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &FieldTower, v: &[Elem]) -> Result<Vec<Elem>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::Shape(format!("vector of length {} for {} rows", v.len(), self.rows)));
        }
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            f.axpy(&mut out, c, self.row(i));
        }
        Ok(out)
    }

    /// Scales column `j` by `d[j]`, i.e. `self · diag(d)`.
    pub fn scale_columns(&self, f: &FieldTower, d: &[Elem]) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for (x, &c) in out.row_mut(i).iter_mut().zip(d) {
                *x = f.mul(*x, c);
            }
        }
        out
    }

    /// Columns in `cols`, in that order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Shape("hstack row count".into()));
        }
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().chain(other.row(i)).copied().collect())
            .collect();
        Matrix::from_rows(rows)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Shape("vstack column count".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn rank(&self, f: &FieldTower) -> usize {
        let mut basis = Echelon::new(f.clone(), self.cols);
        for r in self.iter_rows() {
            basis.insert(r.to_vec());
        }
        basis.rank()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: &FieldTower) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = f.inv(self[(row, col)]).expect("pivot is nonzero");
            f.scale(self.row_mut(row), inv);
            let pivot_row = self.row(row).to_vec();
            for r in 0..self.rows {
                if r != row {
                    let c = self[(r, col)];
                    f.axpy(self.row_mut(r), c, &pivot_row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn inverse(&self, f: &FieldTower) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(n))?;
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(aug.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Determinant by elimination.
    pub fn det(&self, f: &FieldTower) -> Result<Elem, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Elem::ONE;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Ok(Elem::ZERO);
            };
            // row swaps flip the sign, which is invisible in characteristic 2
            a.swap_rows(col, p);
            let pivot = a[(col, col)];
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("nonzero pivot");
            let pivot_row = a.row(col).to_vec();
            for r in col + 1..n {
                let c = f.mul(a[(r, col)], inv);
                f.axpy(a.row_mut(r), c, &pivot_row);
            }
        }
        Ok(det)
    }

    /// A basis of the right kernel `{x : self · xᵀ = 0}`, one vector per row.
    pub fn kernel(&self, f: &FieldTower) -> Matrix {
        let mut a = self.clone();
        let pivots = a.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out[(k, fc)] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                out[(k, pc)] = f.neg(a[(r, fc)]);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

/// Incrementally built row-echelon basis.
///
/// Each stored row is monic at its pivot, which is its first nonzero
/// column, and is zero at the pivots of all earlier rows.
pub struct Echelon {
    field: FieldTower,
    width: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: FieldTower, width: usize) -> Self {
        Echelon { field, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Reduces `v` against the basis; returns true if it was independent
    /// (and is now part of the basis).
    pub fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                f.axpy(&mut v[p..], c, &row[p..]);
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[p]).expect("nonzero pivot");
        f.scale(&mut v[p..], inv);
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                self.field.axpy(&mut v[p..], c, &row[p..]);
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn random_matrix(f: &FieldTower, r: usize, c: usize, rng: &mut ChaCha20Rng) -> Matrix {
        Matrix::from_vec(r, c, (0..r * c).map(|_| f.random(rng)).collect()).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let f = FieldTower::new(8, 0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for n in 1..8 {
            let a = random_matrix(&f, n, n, &mut rng);
            let det = a.det(&f).unwrap();
            match a.inverse(&f) {
                Ok(inv) => {
                    assert!(!det.is_zero());
                    assert_eq!(a.mul(&f, &inv).unwrap(), Matrix::identity(n));
                }
                Err(LinalgError::Singular) => assert!(det.is_zero()),
                Err(e) => panic!("{e}"),
            }
        }
        let mut s = Matrix::identity(3);
        s[(2, 2)] = Elem::ZERO;
        assert_eq!(s.inverse(&f), Err(LinalgError::Singular));
        assert_eq!(s.det(&f).unwrap(), Elem::ZERO);
    }

    #[test]
    fn kernel_is_orthogonal_and_complementary() {
        let f = FieldTower::new(4, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let a = random_matrix(&f, 4, 10, &mut rng);
        let k = a.kernel(&f);
        assert_eq!(k.rows() + a.rank(&f), 10);
        assert!(a.mul(&f, &k.transpose()).unwrap().is_zero());
        assert_eq!(k.rank(&f), k.rows());
    }

    #[test]
    fn echelon_rank_matches_rref() {
        let f = FieldTower::new(3, 0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_matrix(&f, 3, 6, &mut rng);
            let b = a.vstack(&a.mul(&f, &random_matrix(&f, 6, 6, &mut rng)).unwrap()).unwrap();
            let mut c = b.clone();
            assert_eq!(b.rank(&f), c.rref(&f).len());
            let mut e = Echelon::new(f.clone(), 6);
            for r in a.iter_rows() {
                e.insert(r.to_vec());
            }
            for r in a.iter_rows() {
                assert!(e.contains(r));
            }
        }
    }
}
