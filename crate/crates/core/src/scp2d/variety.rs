//! Atoms and densities of the representing measure of a flat moment matrix.

use crate::error::{Error, Result};
use crate::exactla::{quadratic_roots, solve_unique, Mat, QuadExt, Rat};
use crate::moments2d::{column_relations, moment_matrix, MatrixKind, Monomial, MomentMat};
use crate::shifts::{moments_of_measure, AtomicMeasure2};

/// Univariate polynomial, coefficient `i` multiplies `tⁱ`.
type UPoly = Vec<QuadExt>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(QuadExt::is_zero) {
        p.pop();
    }
    p
}

fn rem(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = trim(a.clone());
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = r.last().expect("nonempty") / lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&factor * c);
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn gcd(a: UPoly, b: UPoly) -> UPoly {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Real roots of a polynomial of degree at most 2.
fn low_degree_roots(p: &UPoly) -> Result<Vec<QuadExt>> {
    let p = trim(p.clone());
    match p.len() {
        0 => Err(Error::Internal("zero polynomial has no finite root set".into())),
        1 => Ok(vec![]),
        2 => Ok(vec![-&(&p[0] / &p[1])]),
        3 => {
            let b = &p[1] / &p[2];
            let c = &p[0] / &p[2];
            match (b.as_rational(), c.as_rational()) {
                (Some(b), Some(c)) => Ok(quadratic_roots(b, c)),
                _ => Err(Error::Unsupported(
                    "root of a quadratic with irrational coefficients".into(),
                )),
            }
        }
        _ => Err(Error::Unsupported(format!(
            "variety needs roots of a degree-{} polynomial",
            p.len() - 1
        ))),
    }
}

/// Minimal polynomial of a square rational matrix (monic, ascending coefficients).
fn minimal_polynomial(m: &Mat) -> Vec<Rat> {
    let n = m.rows();
    let flat = |a: &Mat| -> Vec<Rat> { (0..n).flat_map(|i| a.row(i).to_vec()).collect() };
    let mut powers = vec![flat(&Mat::identity(n))];
    let mut current = Mat::identity(n);
    loop {
        current = &current * m;
        let target = flat(&current);
        let rows: Vec<Vec<Rat>> = (0..n * n)
            .map(|e| powers.iter().map(|p| p[e].clone()).collect())
            .collect();
        if let Some(c) = solve_unique(&rows, &target) {
            let mut poly: Vec<Rat> = c.into_iter().map(|v| -v).collect();
            poly.push(Rat::one());
            return poly;
        }
        powers.push(target);
    }
}

/// Linear structure of a flat moment matrix: pivot monomials and normal forms.
struct Quotient {
    basis: Vec<Monomial>,
    pivots: Vec<Monomial>,
    reduced: Mat,
}

impl Quotient {
    fn new(m: &MomentMat) -> Quotient {
        let (reduced, cols) = m.mat.rref();
        Quotient {
            basis: m.basis.clone(),
            pivots: cols.iter().map(|&c| m.basis[c]).collect(),
            reduced,
        }
    }

    /// Coordinates of the column of `mono` in terms of the pivot columns.
    fn normal_form(&self, mono: Monomial) -> Option<Vec<Rat>> {
        let j = self.basis.iter().position(|b| *b == mono)?;
        Some((0..self.pivots.len()).map(|r| self.reduced[(r, j)].clone()).collect())
    }

    fn multiplication(&self, by: Monomial) -> Result<Mat> {
        let r = self.pivots.len();
        let mut out = Mat::zeros(r, r);
        for (col, p) in self.pivots.iter().enumerate() {
            let nf = self.normal_form(p.times(&by)).ok_or_else(|| {
                Error::Precondition("moment matrix is not flat over its predecessor".into())
            })?;
            for (row, v) in nf.into_iter().enumerate() {
                out[(row, col)] = v;
            }
        }
        Ok(out)
    }
}

fn rational_poly(p: &[Rat]) -> UPoly {
    p.iter().map(|c| QuadExt::from(c.clone())).collect()
}

/// Solves for atoms as points of the variety cut out by the column relations, then for
/// densities from the moments on the pivot monomials.
///
/// Requires a flat moment matrix `M(n)` (`rank M(n) = rank M(n−1)`).
pub fn measure_from_flat(m: &MomentMat) -> Result<AtomicMeasure2> {
    if m.kind != MatrixKind::Moment || m.n == 0 {
        return Err(Error::Precondition("a moment matrix M(n), n ≥ 1, is required".into()));
    }
    if !m.is_psd() {
        return Err(Error::Precondition("moment matrix is not positive semi-definite".into()));
    }
    let q = Quotient::new(m);
    if q.pivots.iter().any(|p| p.degree() >= m.n) {
        return Err(Error::Precondition("moment matrix is not flat over its predecessor".into()));
    }
    let mx = minimal_polynomial(&q.multiplication(Monomial::X)?);
    let my = minimal_polynomial(&q.multiplication(Monomial::Y)?);
    let relations: Vec<_> = column_relations(m)?;

    // Split along the coordinate whose minimal polynomial has the lower degree.
    let x_first = mx.len() <= my.len();
    let (outer, inner) = if x_first { (&mx, &my) } else { (&my, &mx) };
    let mut atoms = Vec::new();
    for t in low_degree_roots(&rational_poly(outer))? {
        let mut g = rational_poly(inner);
        for rel in &relations {
            let restricted = if x_first {
                rel.poly().restrict_x(&t)
            } else {
                rel.poly().restrict_y(&t)
            };
            g = gcd(g, restricted);
        }
        for s in low_degree_roots(&g)? {
            atoms.push(if x_first { (t.clone(), s) } else { (s, t.clone()) });
        }
    }
    if atoms.len() != q.pivots.len() {
        return Err(Error::Internal(format!(
            "variety has {} real points, rank is {}",
            atoms.len(),
            q.pivots.len()
        )));
    }

    let rows: Vec<Vec<QuadExt>> = q
        .pivots
        .iter()
        .map(|b| atoms.iter().map(|(x, y)| b.eval(x, y)).collect())
        .collect();
    let rhs: Vec<QuadExt> = q
        .pivots
        .iter()
        .map(|b| QuadExt::from(m.entry(Monomial::ONE, *b).expect("pivot in basis").clone()))
        .collect();
    let densities = solve_unique(&rows, &rhs)
        .ok_or_else(|| Error::Internal("density system is singular".into()))?;
    let mu = AtomicMeasure2::new(atoms, densities)?;
    let back = moment_matrix(&moments_of_measure(&mu, 2 * m.n), m.n)?;
    if back.mat != m.mat {
        return Err(Error::Internal("extracted measure does not interpolate the moments".into()));
    }
    Ok(mu)
}
