//! Exact integer and rational linear algebra.
//!
//! Everything here is dense and naive on purpose of size: the matrices that
//! come out of characteristic maps and quotient bases are at most a few
//! dozen rows wide.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinAlgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LinAlgError::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self, LinAlgError> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(LinAlgError::ShapeMismatch("ragged columns".into()));
        }
        let mut m = Self::zeros(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T>,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] = out[(i, j)].clone() + p;
                }
            }
        }
        Ok(out)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinAlgError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rational::from_integer(x.clone())).collect(),
        }
    }
}

impl RatMatrix {
    /// Returns the integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let data = self.data.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_bareiss(a: &IntMatrix) -> Result<BigInt, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NonSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                // exact by Sylvester's identity
                m[(i, j)] = num / &prev;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * m[(n - 1, n - 1)].clone())
}

/// Result of [`smith_normal_form`]: `u * a * v == d`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Checks the defining properties against the input matrix.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let uav = match self.u.mul(a).and_then(|ua| ua.mul(&self.v)) {
            Ok(m) => m,
            Err(_) => return false,
        };
        if uav != self.d {
            return false;
        }
        let unimodular = |m: &IntMatrix| det_bareiss(m).map(|d| d.abs().is_one()).unwrap_or(false);
        if !unimodular(&self.u) || !unimodular(&self.v) {
            return false;
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(Signed::is_negative) {
            return false;
        }
        diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) })
    }
}

/// Smith normal form by elementary row and column operations with gcd pivots.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (r, c) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                debug_assert!(Snf { u: u.clone(), d: d.clone(), v: v.clone() }.verify(a));
                return Snf { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for j in 0..c {
                d[(t, j)] = -d[(t, j)].clone();
            }
            for j in 0..r {
                u[(t, j)] = -u[(t, j)].clone();
            }
        }
    }
    debug_assert!(Snf { u: u.clone(), d: d.clone(), v: v.clone() }.verify(a));
    Snf { u, d, v }
}

// row[dst] -= q * row[src]
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for j in 0..m.cols {
        let delta = q * &m[(src, j)];
        m[(dst, j)] -= delta;
    }
}

// col[dst] -= q * col[src]
fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for i in 0..m.rows {
        let delta = q * &m[(i, src)];
        m[(i, dst)] -= delta;
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut RatMatrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = m[(row, col)].recip();
        for j in 0..m.cols {
            m[(row, j)] = &m[(row, j)] * &inv;
        }
        for i in 0..m.rows {
            if i == row || m[(i, col)].is_zero() {
                continue;
            }
            let f = m[(i, col)].clone();
            for j in 0..m.cols {
                let delta = &f * &m[(row, j)];
                m[(i, j)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rat_rank(a: &RatMatrix) -> usize {
    let mut m = a.clone();
    rref(&mut m, a.cols).len()
}

/// Solves `a * x = b` for a particular solution (free variables set to zero).
pub fn rat_solve(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix, LinAlgError> {
    if a.rows != b.rows {
        return Err(LinAlgError::ShapeMismatch(format!(
            "{}x{} system with {}-row right-hand side",
            a.rows, a.cols, b.rows
        )));
    }
    let mut aug = RatMatrix::zeros(a.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        for j in 0..b.cols {
            aug[(i, a.cols + j)] = b[(i, j)].clone();
        }
    }
    let pivots = rref(&mut aug, a.cols);
    for i in pivots.len()..a.rows {
        if (0..b.cols).any(|j| !aug[(i, a.cols + j)].is_zero()) {
            return Err(LinAlgError::NoSolution);
        }
    }
    let mut x = RatMatrix::zeros(a.cols, b.cols);
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x[(pc, j)] = aug[(i, a.cols + j)].clone();
        }
    }
    Ok(x)
}

/// Basis of the right nullspace, one vector per free column.
pub fn rat_nullspace(a: &RatMatrix) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m, a.cols);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); a.cols];
            v[f] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(i, f)].clone();
            }
            v
        })
        .collect()
}

pub fn rat_inverse(a: &RatMatrix) -> Result<RatMatrix, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NonSquare { rows: a.rows, cols: a.cols });
    }
    if rat_rank(a) < a.rows {
        return Err(LinAlgError::Singular);
    }
    rat_solve(a, &RatMatrix::identity(a.rows))
}

pub fn rat_det(a: &RatMatrix) -> Result<Rational, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NonSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            m.swap_rows(k, p);
            det = -det;
        }
        det *= m[(k, k)].clone();
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] / &m[(k, k)];
            for j in k..n {
                let delta = &f * &m[(k, j)];
                m[(i, j)] -= delta;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    // Laplace expansion along the first row.
    fn det_minors(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_minors(&minor)
            })
            .sum()
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(det_bareiss(&IntMatrix::identity(3)).unwrap(), BigInt::from(1));
        assert_eq!(det_bareiss(&int(&[vec![2, 1], vec![1, 1]])).unwrap(), BigInt::from(1));
        assert_eq!(det_bareiss(&int(&[vec![2, 0], vec![0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(det_bareiss(&int(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert!(matches!(det_bareiss(&int(&[vec![1, 2, 3]])), Err(LinAlgError::NonSquare { rows: 1, cols: 3 })));
    }

    #[test]
    fn snf_examples() {
        let a = int(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);

        let id = IntMatrix::identity(3);
        let s = smith_normal_form(&id);
        assert_eq!(s.d, id);

        let z = int(&[vec![0]]);
        let s = smith_normal_form(&z);
        assert_eq!(s.d, z);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn snf_rectangular() {
        let a = int(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);

        let b = int(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
        let s = smith_normal_form(&b);
        assert!(s.verify(&b));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn solve_examples() {
        let b = RatMatrix::from_rows(vec![vec![q(3, 1)], vec![q(-1, 2)]]).unwrap();
        assert_eq!(rat_solve(&RatMatrix::identity(2), &b).unwrap(), b);

        let a = RatMatrix::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(0, 1)]]).unwrap();
        let b = RatMatrix::from_rows(vec![vec![q(0, 1)], vec![q(1, 1)]]).unwrap();
        assert_eq!(rat_solve(&a, &b), Err(LinAlgError::NoSolution));

        let a = RatMatrix::from_rows(vec![vec![q(2, 1)]]).unwrap();
        let b = RatMatrix::from_rows(vec![vec![q(1, 1)]]).unwrap();
        assert_eq!(rat_solve(&a, &b).unwrap()[(0, 0)], q(1, 2));

        let bad = RatMatrix::from_rows(vec![vec![q(1, 1)], vec![q(1, 1)]]).unwrap();
        assert!(matches!(rat_solve(&a, &bad), Err(LinAlgError::ShapeMismatch(_))));
    }

    #[test]
    fn nullspace_and_rank() {
        let a = RatMatrix::from_rows(vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]]).unwrap();
        assert_eq!(rat_rank(&a), 1);
        let ns = rat_nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = RatMatrix::from_columns(&[v]).unwrap();
            assert!(a.mul(&col).unwrap().is_zero());
        }
    }

    fn small_square() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n))
    }

    fn small_rect() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
    }

    proptest! {
        #[test]
        fn bareiss_matches_minor_expansion(m in small_square()) {
            prop_assert_eq!(det_bareiss(&int(&m)).unwrap(), BigInt::from(det_minors(&m)));
        }

        #[test]
        fn rational_det_matches_bareiss(m in small_square()) {
            let a = int(&m);
            prop_assert_eq!(rat_det(&a.to_rational()).unwrap(), Rational::from_integer(det_bareiss(&a).unwrap()));
        }

        #[test]
        fn snf_postconditions(m in small_rect()) {
            let a = int(&m);
            let s = smith_normal_form(&a);
            prop_assert!(s.verify(&a));
            prop_assert_eq!(s.rank(), rat_rank(&a.to_rational()));
        }

        #[test]
        fn solve_substitutes_back(m in small_rect(), rhs in prop::collection::vec(-5i64..=5, 4)) {
            let a = int(&m).to_rational();
            let b = RatMatrix::from_columns(&[rhs[..a.rows()].iter().map(|&x| Rational::from_integer(x.into())).collect()]).unwrap();
            match rat_solve(&a, &b) {
                Ok(x) => prop_assert_eq!(a.mul(&x).unwrap(), b),
                Err(LinAlgError::NoSolution) => prop_assert!(rat_rank(&a) < a.rows()),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
