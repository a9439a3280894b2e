use std::collections::HashMap;

use super::poly::{monomial_basis, Monomial, PolyRelation};
use super::seq::MomentSeq2;
use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, Mat, Rat};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixKind {
    Moment,
    LocalizingX,
    LocalizingY,
    /// `M_u(ℓ)` with `u = (ydeg, xdeg)`.
    Hyponormality { u: Monomial, ell: usize },
}

impl MatrixKind {
    fn shift(&self) -> Monomial {
        match self {
            MatrixKind::Moment => Monomial::ONE,
            MatrixKind::LocalizingX => Monomial::X,
            MatrixKind::LocalizingY => Monomial::Y,
            MatrixKind::Hyponormality { u, .. } => *u,
        }
    }
}

/// A moment-type matrix together with its row/column labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentMat {
    pub n: usize,
    pub basis: Vec<Monomial>,
    pub mat: Mat,
    pub kind: MatrixKind,
}

impl MomentMat {
    pub fn entry(&self, p: Monomial, q: Monomial) -> Option<&Rat> {
        let i = self.basis.iter().position(|m| *m == p)?;
        let j = self.basis.iter().position(|m| *m == q)?;
        Some(&self.mat[(i, j)])
    }

    pub fn rank(&self) -> usize {
        crate::exactla::rank(&self.mat)
    }

    pub fn is_psd(&self) -> bool {
        crate::exactla::is_psd(&self.mat).unwrap_or(false)
    }
}

fn shifted(seq: &MomentSeq2, n: usize, kind: MatrixKind) -> Result<MomentMat> {
    let u = kind.shift();
    seq.require_degree(2 * n + u.degree())?;
    let basis = monomial_basis(n);
    let mat = Mat::from_fn(basis.len(), basis.len(), |i, j| {
        let m = basis[i].times(&basis[j]).times(&u);
        seq.gamma(m.ydeg, m.xdeg)
    });
    Ok(MomentMat {
        n,
        basis,
        mat,
        kind,
    })
}

/// `M(n)`; needs moments up to degree `2n`.
pub fn moment_matrix(seq: &MomentSeq2, n: usize) -> Result<MomentMat> {
    shifted(seq, n, MatrixKind::Moment)
}

/// `M_x(n)` or `M_y(n)`; needs moments up to degree `2n + 1`.
pub fn localizing_matrix(seq: &MomentSeq2, n: usize, axis: Axis) -> Result<MomentMat> {
    let kind = match axis {
        Axis::X => MatrixKind::LocalizingX,
        Axis::Y => MatrixKind::LocalizingY,
    };
    shifted(seq, n, kind)
}

/// `M_u(ℓ) = (γ_{u + p + q})` over the degree-`ℓ` basis; `u = (ydeg, xdeg)`.
pub fn hyponormality_matrix(seq: &MomentSeq2, u: (usize, usize), ell: usize) -> Result<MomentMat> {
    let u = Monomial::new(u.0, u.1);
    shifted(seq, ell, MatrixKind::Hyponormality { u, ell })
}

/// Hankel-type consistency: entries whose label sums coincide are equal.
pub fn is_moment_matrix(m: &MomentMat) -> bool {
    let size = m.basis.len();
    if m.mat.rows() != size || m.mat.cols() != size {
        return false;
    }
    let mut seen: HashMap<Monomial, &Rat> = HashMap::new();
    for i in 0..size {
        for j in 0..size {
            let key = m.basis[i].times(&m.basis[j]);
            let v = &m.mat[(i, j)];
            if *seen.entry(key).or_insert(v) != v {
                return false;
            }
        }
    }
    true
}

/// One normalized relation per kernel vector of a moment matrix.
pub fn column_relations(m: &MomentMat) -> Result<Vec<PolyRelation>> {
    if m.kind != MatrixKind::Moment {
        return Err(Error::Precondition("column relations need a moment matrix".into()));
    }
    Ok(kernel_basis(&m.mat)
        .into_iter()
        .filter_map(|v| PolyRelation::from_coefficients(&m.basis, &v))
        .collect())
}

impl MomentSeq2 {
    /// Reads the moments of degree `≤ 2n` back from `M(n)`, rejecting non-Hankel input.
    pub fn from_moment_matrix(m: &MomentMat) -> Result<MomentSeq2> {
        if m.kind != MatrixKind::Moment || !is_moment_matrix(m) {
            return Err(Error::InvalidMoments("not a moment matrix".into()));
        }
        let mut table: HashMap<Monomial, Rat> = HashMap::new();
        for (i, p) in m.basis.iter().enumerate() {
            for (j, q) in m.basis.iter().enumerate() {
                table.insert(p.times(q), m.mat[(i, j)].clone());
            }
        }
        MomentSeq2::from_fn(2 * m.n, |i, j| table[&Monomial::new(i, j)].clone())
    }
}
