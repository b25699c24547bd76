//! Dense matrices and subspaces over exact rationals and complex floats.

mod mat;
mod subspace;

pub use mat::{q, qfrac, CMat, Field, Mat, QMat};
pub use subspace::{column_space, kernel, Subspace};

use num_rational::BigRational;

use crate::real::{Cx, Real};

pub type CSubspace<R> = Subspace<Cx<R>>;
pub type QSubspace = Subspace<BigRational>;

/// Default relative pivot tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

impl QSubspace {
    pub fn to_complex<R: Real>(&self) -> CSubspace<R> {
        self.map_field(|x| Cx::new(R::from_rational(x), R::zero()))
    }
}
