//! Dense least-squares helpers on top of nalgebra's SVD.

use nalgebra::{ComplexField, DMatrix, DVector, SVD};

use crate::{Error, Result};

/// Minimum-norm least-squares solution of `A X = B`.
#[derive(Debug, Clone)]
pub struct Lstsq<T: ComplexField<RealField = f64>> {
    pub solution: DMatrix<T>,
    /// Singular values of `A`, descending.
    pub singular_values: DVector<f64>,
    /// Number of singular values above the cutoff.
    pub rank: usize,
}

impl<T: ComplexField<RealField = f64>> Lstsq<T> {
    /// Ratio of the largest to the smallest singular value. Infinite when
    /// the smallest is zero.
    pub fn condition(&self) -> f64 {
        condition_number(&self.singular_values)
    }

    pub fn full_rank(&self) -> bool {
        self.rank == self.singular_values.len()
    }
}

pub fn condition_number(sv: &DVector<f64>) -> f64 {
    let max = sv.max();
    let min = sv.min();
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Cutoff used when the caller has no problem-specific rank threshold:
/// machine epsilon times the larger dimension, relative to the top
/// singular value.
pub fn default_rcond(rows: usize, cols: usize) -> f64 {
    f64::EPSILON * rows.max(cols) as f64
}

/// Solves `A X = B` in the least-squares sense. Singular values at or below
/// `rcond * sigma_max` are treated as zero, giving the minimum-norm solution
/// on the retained subspace.
pub fn lstsq<T: ComplexField<RealField = f64>>(
    a: DMatrix<T>,
    b: &DMatrix<T>,
    rcond: f64,
) -> Result<Lstsq<T>> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    let cols = a.ncols();
    // Tall systems: reduce to the triangular factor first. Singular values
    // and the minimum-norm solution are unchanged, the SVD is far cheaper.
    let (a, b) = if a.nrows() > cols {
        let qr = a.qr();
        let mut qtb = b.clone();
        qr.q_tr_mul(&mut qtb);
        (qr.r(), qtb.rows(0, cols).into_owned())
    } else {
        (a, b.clone())
    };
    let svd = SVD::try_new(a, true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let sigma_max = svd.singular_values.max();
    let cutoff = rcond * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let solution = if rank == 0 {
        DMatrix::zeros(cols, b.ncols())
    } else {
        svd.solve(&b, cutoff).map_err(|e| Error::Numerical(e.into()))?
    };
    Ok(Lstsq {
        solution,
        singular_values: svd.singular_values,
        rank,
    })
}
