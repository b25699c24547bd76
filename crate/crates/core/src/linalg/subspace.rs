use crate::error::{HodgeError, Result};

use super::mat::{Field, Mat};

/// A linear subspace of `T^n`, stored as the reduced row echelon basis of
/// its generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    ambient: usize,
    basis: Mat<T>,
    pivots: Vec<usize>,
}

impl<T: Field> Subspace<T> {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Mat::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: Mat::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Row space of `generators`, in canonical echelon form.
    pub fn echelonize(generators: &Mat<T>, tol: f64) -> Self {
        let (basis, pivots) = generators.rref(tol);
        Self { ambient: generators.ncols(), basis, pivots }
    }

    pub fn span(vectors: &[Vec<T>], ambient: usize, tol: f64) -> Self {
        Self::echelonize(&Mat::from_rows(vectors, ambient), tol)
    }

    /// Coordinate subspace spanned by the standard basis vectors `indices`.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let rows: Vec<Vec<T>> = indices
            .iter()
            .map(|&i| (0..ambient).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Self::span(&rows, ambient, 0.0)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Echelon basis, one generator per row.
    pub fn basis(&self) -> &Mat<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.rows_vec()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(HodgeError::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self, tol: f64) -> Result<Self> {
        self.check(other)?;
        Ok(Self::echelonize(&self.basis.vstack(&other.basis), tol))
    }

    /// Annihilator under the bilinear pairing `<x, y> = sum x_i y_i`.
    pub fn annihilator(&self, tol: f64) -> Self {
        if self.dim() == 0 {
            return Self::full(self.ambient);
        }
        Self::echelonize(&self.basis.kernel(tol), tol)
    }

    pub fn intersect(&self, other: &Self, tol: f64) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let anns = self.annihilator(tol).sum(&other.annihilator(tol), tol)?;
        Ok(anns.annihilator(tol))
    }

    pub fn conj(&self) -> Self {
        Self { ambient: self.ambient, basis: self.basis.conj(), pivots: self.pivots.clone() }
    }

    pub fn contains_vector(&self, v: &[T], tol: f64) -> bool {
        let before = self.dim();
        let m = self.basis.vstack(&Mat::from_rows(&[v.to_vec()], self.ambient));
        m.rank(tol) == before
    }

    pub fn is_subspace_of(&self, other: &Self, tol: f64) -> bool {
        self.ambient == other.ambient
            && other.basis.vstack(&self.basis).rank(tol) == other.dim()
    }

    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other, tol)
    }

    /// Image under the linear map `v -> m v`.
    pub fn image(&self, m: &Mat<T>, tol: f64) -> Self {
        if self.is_zero() {
            return Self::zero(m.nrows());
        }
        Self::echelonize(&(&self.basis * &m.transpose()), tol)
    }

    pub fn map_field<U: Field>(&self, f: impl Fn(&T) -> U) -> Subspace<U> {
        Subspace { ambient: self.ambient, basis: self.basis.map(f), pivots: self.pivots.clone() }
    }
}

/// Null space of a matrix as a subspace.
pub fn kernel<T: Field>(m: &Mat<T>, tol: f64) -> Subspace<T> {
    if m.nrows() == 0 {
        return Subspace::full(m.ncols());
    }
    Subspace::echelonize(&m.kernel(tol), tol)
}

/// Column space of a matrix as a subspace.
pub fn column_space<T: Field>(m: &Mat<T>, tol: f64) -> Subspace<T> {
    Subspace::echelonize(&m.transpose(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, CMat, QMat};
    use crate::real::{cxf, Cx};

    type S = Subspace<Cx<f64>>;

    fn v(xs: &[(f64, f64)]) -> Vec<Cx<f64>> {
        xs.iter().map(|&(a, b)| cxf(a, b)).collect()
    }

    #[test]
    fn identity_has_full_rank() {
        let s = S::echelonize(&CMat::<f64>::identity(3), 1e-9);
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn proportional_rows_have_rank_one() {
        let s = S::span(&[v(&[(1.0, 0.0), (2.0, 1.0)]), v(&[(2.0, 0.0), (4.0, 2.0)])], 2, 1e-9);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn complementary_planes_meet_in_zero() {
        let a = S::coordinate(4, &[0, 1]);
        let b = S::coordinate(4, &[2, 3]);
        assert!(a.intersect(&b, 1e-9).unwrap().is_zero());
        assert_eq!(a.sum(&b, 1e-9).unwrap().dim(), 4);
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        let a = S::zero(2);
        let b = S::zero(3);
        assert!(matches!(a.sum(&b, 1e-9), Err(HodgeError::DimensionMismatch { .. })));
    }

    #[test]
    fn non_real_line_and_its_conjugate_span_a_plane() {
        let a = S::span(&[v(&[(1.0, 0.0), (0.0, 1.0)])], 2, 1e-9);
        assert_eq!(a.sum(&a.conj(), 1e-9).unwrap().dim(), 2);
    }

    #[test]
    fn rational_intersection_exact() {
        let a = Subspace::echelonize(&QMat::from_ints(&[vec![1, 1, 0], vec![0, 0, 1]]), 0.0);
        let b = Subspace::echelonize(&QMat::from_ints(&[vec![1, 0, 0], vec![0, 1, 1]]), 0.0);
        let c = a.intersect(&b, 0.0).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.basis().row(0), vec![q(1), q(1), q(1)]);
    }

    #[test]
    fn image_and_kernel() {
        let n = QMat::from_ints(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(kernel(&n, 0.0).basis().row(0), vec![q(0), q(0), q(1)]);
        let full = Subspace::<num_rational::BigRational>::full(3);
        assert_eq!(full.image(&n, 0.0).dim(), 2);
        assert_eq!(column_space(&n, 0.0).dim(), 2);
    }
}
