//! Dense matrices over the integers with exact arithmetic.
//!
//! Entries are arbitrary-precision [`BigInt`]s: Smith normal form is run on
//! relation matrices whose intermediate entries can outgrow machine words
//! even when the inputs are tiny, and every result here must be exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::ops::{Index, IndexMut};

/// A rectangular integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// The `rows x cols` zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    /// The `n x n` identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of `BigInt`s.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            entries.extend(row);
        }
        IntMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        }
    }

    /// Builds a matrix from a fixed-size array of `i64` rows.
    pub fn from_array<const M: usize, const N: usize>(a: [[i64; N]; M]) -> Self {
        IntMatrix {
            rows: M,
            cols: N,
            entries: a.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The `i`-th row as a slice.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// The `j`-th column, copied out.
    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    ///
    /// Panics on a dimension mismatch.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let term = a * &rhs[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "column count mismatch in vstack");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        let mut out = IntMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Scales every entry by `c`.
    pub fn scaled(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[a] -= q * row[b]`
    fn row_sub_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] -= t;
        }
    }

    /// `col[a] -= q * col[b]`
    fn col_sub_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] -= t;
        }
    }

    /// `row[a] += row[b]`
    fn row_add(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            let t = self[(b, j)].clone();
            self[(a, j)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -self[(i, j)].clone();
            self[(i, j)] = t;
        }
    }

    /// Rank over the rationals, read off the Smith normal form.
    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Panics if the matrix is not square.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

/// Smith normal form `U * A * V = S` of an integer matrix.
///
/// `S` is diagonal with nonnegative entries `d_1 | d_2 | ...` and all zeros
/// trailing; `U` and `V` are unimodular. `S` is unique; `U` and `V` are not,
/// so consumers must only rely on the triple identity.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal entries of `S`, including zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Locates the entry of smallest nonzero absolute value in `m[t.., t..]`.
fn min_abs_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            if m[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(b) if m[(b.0, b.1)].abs() <= m[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form of `a`.
///
/// Smallest-absolute-value pivoting keeps intermediate entries from blowing
/// up; all arithmetic is exact regardless.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let dim = a.rows().min(a.cols());

    'next_pivot: for t in 0..dim {
        loop {
            let Some((pi, pj)) = min_abs_pivot(&s, t) else {
                // remaining submatrix is zero, so all trailing diagonal
                // entries stay zero
                break 'next_pivot;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // Reduce the pivot column and row. Truncated division leaves
            // remainders strictly smaller than the pivot, so if anything
            // survives, re-picking the pivot makes strict progress.
            let mut clean = true;
            for r in t + 1..s.rows() {
                if s[(r, t)].is_zero() {
                    continue;
                }
                let q = &s[(r, t)] / &s[(t, t)];
                if !q.is_zero() {
                    s.row_sub_mul(r, t, &q);
                    u.row_sub_mul(r, t, &q);
                }
                if !s[(r, t)].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..s.cols() {
                if s[(t, c)].is_zero() {
                    continue;
                }
                let q = &s[(t, c)] / &s[(t, t)];
                if !q.is_zero() {
                    s.col_sub_mul(c, t, &q);
                    v.col_sub_mul(c, t, &q);
                }
                if !s[(t, c)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Pivot row and column are clear. Enforce that the pivot divides
            // the rest of the submatrix, which gives the divisibility chain.
            let bad_row = (t + 1..s.rows()).find(|&r| {
                (t + 1..s.cols()).any(|c| !(&s[(r, c)] % &s[(t, t)]).is_zero())
            });
            match bad_row {
                Some(r) => {
                    s.row_add(t, r);
                    u.row_add(t, r);
                }
                None => break,
            }
        }
    }

    for i in 0..dim {
        if s[(i, i)].is_negative() {
            s.negate_row(i);
            u.negate_row(i);
        }
    }

    SnfResult { s, u, v }
}

/// A basis of the kernel lattice `{ x : m * x = 0 }`.
///
/// The returned vectors are columns of the unimodular `V` from the Smith
/// normal form, so they generate the full (saturated) kernel.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank()..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// Decides whether `x` lies in the lattice spanned by the rows of `basis`.
///
/// Solves `S y = U x` after putting the transposed basis in Smith normal
/// form; membership reduces to exact divisibility checks against the
/// invariant factors.
pub fn row_lattice_contains(basis: &IntMatrix, x: &[BigInt]) -> bool {
    assert_eq!(basis.cols(), x.len(), "vector length mismatch");
    let at = basis.transpose();
    let snf = smith_normal_form(&at);
    let c = snf.u.mul_vec(x);
    let dim = at.rows().min(at.cols());
    for (i, ci) in c.iter().enumerate() {
        if i < dim && !snf.s[(i, i)].is_zero() {
            if !(ci % &snf.s[(i, i)]).is_zero() {
                return false;
            }
        } else if !ci.is_zero() {
            return false;
        }
    }
    true
}
