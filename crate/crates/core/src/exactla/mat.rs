use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::int(v)).collect())
                .collect(),
        )
    }

    pub fn column(values: Vec<Rat>) -> Mat {
        let n = values.len();
        Mat {
            rows: n,
            cols: 1,
            data: values,
        }
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

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        Ok(Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    /// `[[a, b], [bᵀ, c]]`.
    pub fn block_symmetric(a: &Mat, b: &Mat, c: &Mat) -> Result<Mat> {
        let n = a.rows;
        let k = b.cols;
        if a.cols != n || b.rows != n || c.rows != k || c.cols != k {
            return Err(Error::DimensionMismatch {
                expected: n + k,
                found: b.rows + c.rows,
            });
        }
        Ok(Mat::from_fn(n + k, n + k, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - n)].clone(),
            (false, true) => b[(j, i - n)].clone(),
            (false, false) => c[(i - n, j - n)].clone(),
        }))
    }

    pub fn checked_mul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        Ok(Mat::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &rhs[(k, j)]).sum()
        }))
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Rows scaled to integers, with the product of the scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let l = self
                    .row(i)
                    .iter()
                    .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                scale *= &l;
                self.row(i)
                    .iter()
                    .map(|r| r.numer() * (&l / r.denom()))
                    .collect()
            })
            .collect();
        (rows, scale)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = &m[(r, j)] * &f;
                        m[(i, j)] -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul<&Mat> for &Mat {
    type Output = Mat;
    /// Panics on dimension mismatch; see [`Mat::checked_mul`].
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).expect("matrix dimensions")
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Rat::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact determinant by Bareiss fraction-free elimination on the integer-scaled rows.
pub fn det(m: &Mat) -> Result<Rat> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rat::one());
    }
    let (mut a, scale) = m.integer_rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return Ok(Rat::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    let d = if negate { -d } else { d };
    Ok(Rat::new(d, scale))
}

/// Exact rank by fraction-free elimination with full pivoting.
pub fn rank(m: &Mat) -> usize {
    let (mut a, _) = m.integer_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut col_perm: Vec<usize> = (0..cols).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    while r < rows.min(cols) {
        let pivot = (r..rows)
            .flat_map(|i| (r..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][col_perm[j]].is_zero());
        let Some((pi, pj)) = pivot else { break };
        a.swap(r, pi);
        col_perm.swap(r, pj);
        let pc = col_perm[r];
        for i in r + 1..rows {
            for jj in r + 1..cols {
                let j = col_perm[jj];
                let v = (&a[i][j] * &a[r][pc] - &a[i][pc] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][pc] = BigInt::zero();
        }
        prev = a[r][pc].clone();
        r += 1;
    }
    r
}

/// Exact positive semi-definiteness by pivoted Schur-complement elimination.
pub fn is_psd(m: &Mat) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a = m.to_rows();
    loop {
        let n = a.len();
        if n == 0 {
            return Ok(true);
        }
        if (0..n).any(|i| a[i][i].is_negative()) {
            return Ok(false);
        }
        // A zero diagonal entry forces its whole row to vanish.
        for i in 0..n {
            if a[i][i].is_zero() && a[i].iter().any(|v| !v.is_zero()) {
                return Ok(false);
            }
        }
        let Some(p) = (0..n).find(|&i| a[i][i].is_positive()) else {
            return Ok(true);
        };
        let pivot = a[p][p].clone();
        let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        a = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| &a[i][j] - &(&a[i][p] * &a[p][j]) / &pivot)
                    .collect()
            })
            .collect();
    }
}

/// Returns `W` with `a·W = b`, provided `Ran b ⊆ Ran a`.
///
/// Free variables of the eliminated system are set to zero, so `W` is supported on the pivot
/// rows only. Callers should rely on `a·W = b` and `Wᵀ·a·W`, not on `W` itself.
pub fn solve_in_range(a: &Mat, b: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let aug = a.hstack(b)?;
    let (red, pivots) = aug.rref();
    if pivots.iter().any(|&c| c >= a.cols) {
        return Err(Error::Range);
    }
    let mut w = Mat::zeros(a.cols, b.cols);
    for (r, &c) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            w[(c, j)] = red[(r, a.cols + j)].clone();
        }
    }
    Ok(w)
}

/// The rank-preserving corner `C = Wᵀ·a·W` for `a·W = b`.
pub fn flat_complete(a: &Mat, b: &Mat) -> Result<Mat> {
    let w = solve_in_range(a, b)?;
    let c = &(&w.transpose() * a) * &w;
    if cfg!(debug_assertions) {
        // Any other solution W + N (a·N = 0) yields the same corner.
        if let Some(v) = kernel_basis(a).into_iter().next() {
            let shifted = Mat::from_fn(w.rows, w.cols, |i, j| &w[(i, j)] + &v[i]);
            let c2 = &(&shifted.transpose() * a) * &shifted;
            debug_assert_eq!(c, c2, "flat corner depends on the choice of W");
        }
    }
    Ok(c)
}

/// Basis of the right null space, one vector per free column of the reduced echelon form.
///
/// Each vector carries a 1 at its free column and is zero at every later column.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<Rat>> {
    let (red, pivots) = m.rref();
    (0..m.cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rat::zero(); m.cols];
            v[free] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&red[(r, free)];
            }
            v
        })
        .collect()
}

/// Inverse of an invertible square matrix.
pub fn inverse(m: &Mat) -> Result<Mat> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let (red, pivots) = m.hstack(&Mat::identity(n))?.rref();
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Range);
    }
    Ok(Mat::from_fn(n, n, |i, j| red[(i, n + j)].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &Mat) -> Rat {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)].clone();
        }
        (0..n)
            .map(|j| {
                let rest: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = m.select(&(1..n).collect::<Vec<_>>(), &rest);
                let term = &m[(0, j)] * &cofactor_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Mat::identity(3)).unwrap(), Rat::one());
        let t = Mat::from_i64(&[&[1, 4, 5], &[4, 17, 19], &[5, 19, 27]]);
        assert_eq!(cofactor_det(&t), Rat::one());
        assert_eq!(det(&t).unwrap(), Rat::one());
        assert_eq!(det(&Mat::from_i64(&[&[1, 1], &[1, 1]])).unwrap(), Rat::zero());
        assert!(matches!(det(&Mat::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_with_fractions_and_pivoting() {
        let m = Mat::from_rows(vec![
            vec![Rat::zero(), Rat::frac(1, 2), Rat::int(3)],
            vec![Rat::frac(2, 3), Rat::int(1), Rat::zero()],
            vec![Rat::int(1), Rat::zero(), Rat::frac(-1, 4)],
        ]);
        assert_eq!(det(&m).unwrap(), cofactor_det(&m));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Mat::zeros(3, 3)), 0);
        assert_eq!(rank(&Mat::from_i64(&[&[1, 1, 2], &[1, 2, 3], &[2, 3, 5]])), 2);
        assert_eq!(rank(&Mat::identity(4)), 4);
        assert_eq!(rank(&Mat::from_i64(&[&[0, 0, 1], &[0, 0, 2]])), 1);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&Mat::from_i64(&[&[1, 1], &[1, 1]])).unwrap());
        assert!(!is_psd(&Mat::from_i64(&[&[1, 2], &[2, 1]])).unwrap());
        assert!(is_psd(&Mat::from_i64(&[&[1, 1, 1], &[1, 2, 1], &[1, 1, 2]])).unwrap());
        assert!(!is_psd(&Mat::from_i64(&[&[0, 1], &[1, 5]])).unwrap());
        assert!(is_psd(&Mat::zeros(3, 3)).unwrap());
        assert_eq!(is_psd(&Mat::from_i64(&[&[1, 2], &[3, 1]])), Err(Error::NotSymmetric));
    }

    #[test]
    fn solve_in_range_examples() {
        let a = Mat::from_i64(&[&[1, 1], &[1, 1]]);
        let b = Mat::from_i64(&[&[2], &[2]]);
        let w = solve_in_range(&a, &b).unwrap();
        assert_eq!(&a * &w, b);
        assert_eq!(w, Mat::from_i64(&[&[2], &[0]]));
        assert_eq!(solve_in_range(&a, &Mat::from_i64(&[&[1], &[0]])), Err(Error::Range));

        let m1 = Mat::from_i64(&[&[1, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        let bb = Mat::from_i64(&[&[2, 1, 2], &[4, 2, 1], &[2, 1, 5]]);
        let w = solve_in_range(&m1, &bb).unwrap();
        assert_eq!(&m1 * &w, bb);
    }

    #[test]
    fn flat_complete_examples() {
        let i2 = Mat::identity(2);
        assert_eq!(flat_complete(&i2, &i2).unwrap(), i2);
        let a = Mat::from_i64(&[&[1, 1], &[1, 1]]);
        let c = flat_complete(&a, &Mat::from_i64(&[&[1], &[1]])).unwrap();
        assert_eq!(c, Mat::from_i64(&[&[1]]));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Mat::identity(3)).is_empty());
        let k = kernel_basis(&Mat::from_i64(&[&[1, 1, 2], &[1, 2, 3], &[2, 3, 5]]));
        assert_eq!(k, vec![vec![Rat::int(-1), Rat::int(-1), Rat::int(1)]]);
    }

    #[test]
    fn inverse_roundtrip() {
        let t = Mat::from_i64(&[&[1, 4, 5], &[4, 17, 19], &[5, 19, 27]]);
        let inv = inverse(&t).unwrap();
        assert_eq!(&t * &inv, Mat::identity(3));
        assert!(inverse(&Mat::from_i64(&[&[1, 1], &[1, 1]])).is_err());
    }
}
