use std::fmt::Debug;
use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::real::{cabs, Cx, Real};

/// Scalars usable in [`Mat`] and [`super::Subspace`].
///
/// Exact fields (rationals) ignore the pivot tolerance; inexact ones treat an
/// entry as zero when its magnitude is at most the threshold.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    fn magnitude(&self) -> f64;
    fn conjugate(&self) -> Self;
}

impl<R: Real> Field for Cx<R> {
    const EXACT: bool = false;
    fn magnitude(&self) -> f64 {
        cabs(*self).to_f64()
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Field for BigRational {
    const EXACT: bool = true;
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type CMat<R> = Mat<Cx<R>>;
pub type QMat = Mat<BigRational>;

impl<T: Field> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_columns(columns: &[Vec<T>], rows: usize) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conjugate())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc = acc + self[(i, j)].clone() * vj.clone();
                }
                acc
            })
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exponential of a nilpotent matrix as a finite series.
    pub fn exp_nilpotent(&self) -> Self {
        let n = self.rows;
        let mut out = Self::identity(n);
        let mut term = Self::identity(n);
        let mut k = T::zero();
        for _ in 1..n.max(1) {
            k = k + T::one();
            term = (&term * self).scale(&(T::one() / k.clone()));
            if term.is_zero() {
                break;
            }
            out = &out + &term;
        }
        out
    }

    /// Logarithm of a unipotent matrix as a finite series.
    pub fn log_unipotent(&self) -> Self {
        let n = self.rows;
        let x = self - &Self::identity(n);
        let mut out = Self::zeros(n, n);
        let mut power = Self::identity(n);
        let mut k = T::zero();
        let mut sign = T::one();
        for _ in 1..n.max(1) {
            k = k + T::one();
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            out = &out + &power.scale(&(sign.clone() / k.clone()));
            sign = -sign;
        }
        out
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| {
                a[(i, c)].magnitude().partial_cmp(&a[(j, c)].magnitude()).unwrap()
            })?;
            if a[(p, c)].is_zero() || a[(p, c)].magnitude() == 0.0 {
                return None;
            }
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = T::one() / a[(c, c)].clone();
            a.scale_row(c, &piv);
            inv.scale_row(c, &piv);
            for r in 0..n {
                if r != c && !a[(r, c)].is_zero() {
                    let f = a[(r, c)].clone();
                    a.axpy_row(r, c, &f);
                    inv.axpy_row(r, c, &f);
                }
            }
        }
        Some(inv)
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, f: &T) {
        for c in 0..self.cols {
            let v = self[(i, c)].clone() * f.clone();
            self[(i, c)] = v;
        }
    }

    /// row_r -= f * row_c
    pub(crate) fn axpy_row(&mut self, r: usize, c: usize, f: &T) {
        for k in 0..self.cols {
            let v = self[(r, k)].clone() - f.clone() * self[(c, k)].clone();
            self[(r, k)] = v;
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { other[(i, j - self.cols)].clone() }
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Reduced row echelon form. Returns the reduced matrix (zero rows
    /// dropped) and the pivot columns. Pivots are chosen column by column
    /// from the left with partial pivoting; an entry counts as zero when its
    /// magnitude is at most `tol * max|entry|` (inexact fields only).
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        self.rref_limited(tol, self.cols)
    }

    /// As [`Mat::rref`] but only the first `pivot_cols` columns may hold
    /// pivots; the remaining columns are carried along (augmented systems).
    fn rref_limited(&self, tol: f64, pivot_cols: usize) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let threshold = if T::EXACT {
            0.0
        } else {
            let mut m: f64 = 0.0;
            for i in 0..a.rows {
                for j in 0..pivot_cols {
                    m = m.max(a[(i, j)].magnitude());
                }
            }
            tol * m
        };
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == a.rows {
                break;
            }
            let (p, mag) = (r..a.rows)
                .map(|i| (i, a[(i, c)].magnitude()))
                .fold((r, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let negligible = if T::EXACT { a[(p, c)].is_zero() } else { mag <= threshold };
            if negligible {
                continue;
            }
            a.swap_rows(p, r);
            let piv = T::one() / a[(r, c)].clone();
            a.scale_row(r, &piv);
            a[(r, c)] = T::one();
            for i in 0..a.rows {
                if i != r && !a[(i, c)].is_zero() {
                    let f = a[(i, c)].clone();
                    a.axpy_row(i, r, &f);
                    a[(i, c)] = T::zero();
                }
            }
            pivots.push(c);
            r += 1;
        }
        a.rows = r;
        a.data.truncate(r * a.cols);
        (a, pivots)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of the null space `{x : self * x = 0}` as rows.
    pub fn kernel(&self, tol: f64) -> Self {
        let (r, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis[(k, f)] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                basis[(k, p)] = -r[(i, f)].clone();
            }
        }
        basis
    }

    /// A particular solution of `self * x = b`, or `None` when the system is
    /// inconsistent at the given tolerance. Free variables are set to zero.
    pub fn solve(&self, b: &[T], tol: f64) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let bcol = Mat::from_fn(self.rows, 1, |i, _| b[i].clone());
        let aug = self.hstack(&bcol);
        let (r, pivots) = aug.rref_limited(tol, self.cols);
        let mut x = vec![T::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        let residual: Vec<T> =
            self.mul_vec(&x).into_iter().zip(b).map(|(ax, bi)| ax - bi.clone()).collect();
        if T::EXACT {
            return residual.iter().all(|v| v.is_zero()).then_some(x);
        }
        let xmax = x.iter().map(|v| v.magnitude()).fold(0.0, f64::max);
        let bmax = b.iter().map(|v| v.magnitude()).fold(0.0, f64::max);
        let scale = (self.max_abs() * xmax).max(bmax);
        let rmax = residual.iter().map(|v| v.magnitude()).fold(0.0, f64::max);
        (rmax <= tol * scale || rmax == 0.0).then_some(x)
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Field> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, b: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, b.rows, "matrix product shape mismatch");
        let mut out: Mat<T> = Mat::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let v = out[(i, j)].clone() + a.clone() * b[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Field> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, b: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&b.data).map(|(x, y)| x.clone() + y.clone()).collect(),
        }
    }
}

impl<T: Field> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, b: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (b.rows, b.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&b.data).map(|(x, y)| x.clone() - y.clone()).collect(),
        }
    }
}

impl<T: Field> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl<R: Real> Mat<Cx<R>> {
    pub fn re(&self) -> Mat<Cx<R>> {
        self.map(|z| Cx::new(z.re, R::zero()))
    }

    pub fn im(&self) -> Mat<Cx<R>> {
        self.map(|z| Cx::new(z.im, R::zero()))
    }

    /// Largest imaginary part, as a realness check.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs().to_f64()).fold(0.0, f64::max)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<[f64; 2]>> {
        self.rows_vec()
            .into_iter()
            .map(|r| r.into_iter().map(|z| [z.re.to_f64(), z.im.to_f64()]).collect())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }
}

impl QMat {
    pub fn to_complex<R: Real>(&self) -> CMat<R> {
        self.map(|q| Cx::new(R::from_rational(q), R::zero()))
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> QMat {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect::<Vec<_>>(),
            cols,
        )
    }

    /// Nilpotency index: least k with self^k = 0, if any.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let n = self.rows;
        let mut p = Mat::identity(n);
        for k in 0..=n {
            if p.is_zero() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
