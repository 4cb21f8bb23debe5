//! The correspondence between restricted NMF and the nested polytope
//! problem, and the exact minimal RNMF of matrices of rank at most 3.

use crate::exact::{Field, Rational};
use crate::geometry::{vpoly_contains, HPolytope, Point2, Polygon2D, VPolytope};
use crate::linalg::{column_stochastic_normalize, solve_linear, FieldMatrix, StochasticNormalization};
use crate::npp2d::{minimal_nested_polygon, NestedSolution};
use crate::{Error, Result};

/// Outer polytope `{x | A x + b >= 0}` and inner points `s_1..s_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NppInstance<F> {
    pub outer: HPolytope<F>,
    pub inner: VPolytope<F>,
}

impl<F: Field> NppInstance<F> {
    pub fn new(outer: HPolytope<F>, inner: VPolytope<F>) -> Result<Self> {
        if outer.dim() != inner.dim() {
            return Err(Error::DimensionMismatch(format!(
                "outer polytope in dimension {} but inner points in dimension {}",
                outer.dim(),
                inner.dim()
            )));
        }
        Ok(NppInstance { outer, inner })
    }

    pub fn dim(&self) -> usize {
        self.outer.dim()
    }

    /// Checks that every inner point lies in the outer polytope and that
    /// both are full-dimensional.
    pub fn validate(&self) -> Result<()> {
        for (j, s) in self.inner.points().iter().enumerate() {
            if !self.outer.contains(s)? {
                return Err(Error::NotNested(format!("inner point {} lies outside the outer polytope", j + 1)));
            }
        }
        if !self.outer.full_dimensional() {
            return Err(Error::Degenerate("outer polytope is not full-dimensional".into()));
        }
        if !self.inner.full_dimensional() {
            return Err(Error::Degenerate("inner points are not full-dimensional".into()));
        }
        Ok(())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> NppInstance<G> {
        NppInstance {
            outer: self.outer.map(&f),
            inner: self.inner.map(&f),
        }
    }

    /// `(A b)`.
    pub fn augmented(&self) -> FieldMatrix<F> {
        self.outer
            .a()
            .hstack(&FieldMatrix::column_vector(self.outer.b()))
            .expect("row counts agree")
    }
}

/// `M = W H` with nonnegative factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<F> {
    pub w: FieldMatrix<F>,
    pub h: FieldMatrix<F>,
    /// `rank(W) = rank(W H)`, i.e. `W` spans the column space of the product.
    pub restricted: bool,
}

impl<F: Field> Factorization<F> {
    /// Builds a factorization, checking shapes and signs and computing the
    /// restricted flag.
    pub fn new(w: FieldMatrix<F>, h: FieldMatrix<F>) -> Result<Self> {
        let product = w.mul(&h)?;
        if let Some((row, col)) = w.find_negative() {
            return Err(Error::NegativeEntry { row, col });
        }
        if let Some((row, col)) = h.find_negative() {
            return Err(Error::NegativeEntry { row, col });
        }
        let restricted = w.rank() == product.rank();
        Ok(Factorization { w, h, restricted })
    }

    pub fn inner_dim(&self) -> usize {
        self.w.cols()
    }

    pub fn product(&self) -> Result<FieldMatrix<F>> {
        self.w.mul(&self.h)
    }

    /// `W H = m` exactly with nonnegative factors.
    pub fn reproduces(&self, m: &FieldMatrix<F>) -> bool {
        self.w.is_nonnegative() && self.h.is_nonnegative() && self.product().is_ok_and(|p| &p == m)
    }
}

/// The nested polytope instance of a matrix plus the data to map back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixReduction<F> {
    pub instance: NppInstance<F>,
    pub normalization: StochasticNormalization<F>,
    /// Columns of the normalized matrix forming the affine basis; the last
    /// one is `b`.
    pub basis_columns: Vec<usize>,
}

/// Nested polytope instance of a nonnegative matrix of rank `r >= 2`.
///
/// The matrix is made column-stochastic, `r` independent columns
/// `c_1..c_r` are picked, `b = c_r` and `A = (c_1 - b, ..., c_{r-1} - b)`.
/// Columns of `A` sum to 0 and `b` sums to 1, so `x -> A x + b` maps `P`
/// injectively into the probability simplex, which makes `P` bounded.
pub fn reduce_matrix<F: Field>(m: &FieldMatrix<F>) -> Result<MatrixReduction<F>> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let normalization = column_stochastic_normalize(m)?;
    let mp = &normalization.normalized;
    let basis = mp.independent_columns();
    let r = basis.len();
    if r < 2 {
        return Err(Error::DimensionZero(r));
    }
    let b = mp.column(basis[r - 1]);
    let a_cols: Vec<Vec<F>> = basis[..r - 1]
        .iter()
        .map(|&j| mp.column(j).into_iter().zip(&b).map(|(x, y)| x - y).collect())
        .collect();
    let a = FieldMatrix::from_columns(&a_cols)?;
    let mut points = Vec::with_capacity(mp.cols());
    for j in 0..mp.cols() {
        let rhs: Vec<F> = mp.column(j).into_iter().zip(&b).map(|(x, y)| x - y).collect();
        let sol = solve_linear(&a, &rhs)?
            .ok_or_else(|| Error::Degenerate(format!("column {j} is outside the affine span")))?;
        debug_assert!(sol.kernel.is_empty());
        points.push(sol.particular);
    }
    let instance = NppInstance::new(HPolytope::new(a, b)?, VPolytope::new(points)?)?;
    Ok(MatrixReduction {
        instance,
        normalization,
        basis_columns: basis,
    })
}

pub fn rnmf_to_npp<F: Field>(m: &FieldMatrix<F>) -> Result<NppInstance<F>> {
    Ok(reduce_matrix(m)?.instance)
}

/// Matrix with columns `A s_i + b`.
pub fn npp_to_rnmf<F: Field>(inst: &NppInstance<F>) -> Result<FieldMatrix<F>> {
    let mut cols = Vec::with_capacity(inst.inner.len());
    for (i, s) in inst.inner.points().iter().enumerate() {
        let col = inst.outer.evaluate(s)?;
        if col.iter().any(F::is_negative) {
            return Err(Error::NotNested(format!("inner point {} lies outside the outer polytope", i + 1)));
        }
        cols.push(col);
    }
    FieldMatrix::from_columns(&cols)
}

/// Factorization of `m = npp_to_rnmf(inst)` from points `q` spanning a
/// nested polytope: `W^i = A q_i + b` and `H` holds the convex coefficients
/// of each inner point.
pub fn points_to_factorization<F: Field>(
    inst: &NppInstance<F>,
    m: &FieldMatrix<F>,
    q: &VPolytope<F>,
) -> Result<Factorization<F>> {
    let mut w_cols = Vec::with_capacity(q.len());
    for (i, qi) in q.points().iter().enumerate() {
        let col = inst.outer.evaluate(qi)?;
        if col.iter().any(F::is_negative) {
            return Err(Error::NotNested(format!("point {} lies outside the outer polytope", i + 1)));
        }
        w_cols.push(col);
    }
    let mut h_cols = Vec::with_capacity(inst.inner.len());
    for (j, s) in inst.inner.points().iter().enumerate() {
        let coeffs = vpoly_contains(q, s)?
            .ok_or_else(|| Error::NotNested(format!("inner point {} is not covered", j + 1)))?;
        h_cols.push(coeffs);
    }
    let f = Factorization::new(FieldMatrix::from_columns(&w_cols)?, FieldMatrix::from_columns(&h_cols)?)?;
    if &f.product()? != m {
        return Err(Error::DimensionMismatch("W H differs from the instance matrix".into()));
    }
    Ok(f)
}

/// Points recovered from a restricted factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredPoints<F> {
    pub points: VPolytope<F>,
    /// Inner dimension of the given factorization.
    pub raw_dim: usize,
    /// Inner dimension after dropping zero columns of `W`.
    pub stripped_dim: usize,
}

/// Nested points `q_i = c_i / C_{r,i}` where `W = (A b) C`.
pub fn factorization_to_points<F: Field>(
    inst: &NppInstance<F>,
    w: &FieldMatrix<F>,
    h: &FieldMatrix<F>,
) -> Result<RecoveredPoints<F>> {
    let m = npp_to_rnmf(inst)?;
    if w.mul(h)? != m {
        return Err(Error::NotRestricted("W H differs from the instance matrix".into()));
    }
    let kept: Vec<usize> = (0..w.cols()).filter(|&i| w.column(i).iter().any(|x| !x.is_zero())).collect();
    let ab = inst.augmented();
    let r = ab.cols();
    if ab.rank() != r {
        return Err(Error::Degenerate("outer polytope is not full-dimensional".into()));
    }
    let mut points = Vec::with_capacity(kept.len());
    for &i in &kept {
        let sol = solve_linear(&ab, &w.column(i))?.ok_or_else(|| {
            Error::NotRestricted(format!("column {} of W is outside the column space of (A b)", i + 1))
        })?;
        let c = sol.particular;
        let scale = &c[r - 1];
        if !scale.is_positive() {
            return Err(Error::NotRestricted(format!("column {} of W has a nonpositive offset weight", i + 1)));
        }
        let inv = scale.inv()?;
        points.push(c[..r - 1].iter().map(|x| x.clone() * &inv).collect::<Vec<F>>());
    }
    let q = VPolytope::new(points)?;
    for (i, qi) in q.points().iter().enumerate() {
        if !inst.outer.contains(qi)? {
            return Err(Error::NotNested(format!("recovered point {} lies outside the outer polytope", i + 1)));
        }
    }
    for (j, s) in inst.inner.points().iter().enumerate() {
        if vpoly_contains(&q, s)?.is_none() {
            return Err(Error::NotNested(format!("inner point {} is not covered", j + 1)));
        }
    }
    Ok(RecoveredPoints {
        points: q,
        raw_dim: w.cols(),
        stripped_dim: kept.len(),
    })
}

/// Output of [`rnmf_rank3`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank3Rnmf {
    pub factorization: Factorization<Rational>,
    pub rank: usize,
    /// The nested polygon behind a rank-3 answer.
    pub solution: Option<NestedSolution>,
}

impl Rank3Rnmf {
    pub fn d(&self) -> usize {
        self.factorization.inner_dim()
    }
}

/// Minimal rational restricted NMF of a nonnegative rational matrix of rank
/// at most 3. The factorization targets `m` itself, zero columns included.
pub fn rnmf_rank3(m: &FieldMatrix<Rational>) -> Result<Rank3Rnmf> {
    if let Some((row, col)) = m.find_negative() {
        return Err(Error::NegativeEntry { row, col });
    }
    let rank = m.rank();
    let (factorization, solution) = match rank {
        0 => (
            Factorization::new(FieldMatrix::zeros(m.rows(), 0), FieldMatrix::zeros(0, m.cols()))?,
            None,
        ),
        1 => {
            let norm = column_stochastic_normalize(m)?;
            let w = FieldMatrix::column_vector(&norm.normalized.column(0));
            let h = rescale(&FieldMatrix::new(1, norm.kept_columns.len(), vec![Rational::one(); norm.kept_columns.len()])?, &norm)?;
            (Factorization::new(w, h)?, None)
        }
        2 => {
            let red = reduce_matrix(m)?;
            let (lo, hi) = interval_ends(&red.instance.outer)?;
            let q = VPolytope::new(vec![vec![lo], vec![hi]])?;
            let f = points_to_factorization(&red.instance, &red.normalization.normalized, &q)?;
            (Factorization::new(f.w, rescale(&f.h, &red.normalization)?)?, None)
        }
        3 => {
            let red = reduce_matrix(m)?;
            let outer = Polygon2D::from_halfplanes(&red.instance.outer)?;
            let inner_pts: Vec<Point2> = red
                .instance
                .inner
                .points()
                .iter()
                .map(|p| Point2::from_slice(p))
                .collect::<Result<_>>()?;
            let inner = Polygon2D::from_points(&inner_pts)?;
            let sol = minimal_nested_polygon(&outer, &inner)?;
            let q = VPolytope::new(sol.vertices.iter().map(Point2::to_vec).collect())?;
            let f = points_to_factorization(&red.instance, &red.normalization.normalized, &q)?;
            (Factorization::new(f.w, rescale(&f.h, &red.normalization)?)?, Some(sol))
        }
        r => return Err(Error::UnsupportedRank(r)),
    };
    if !factorization.reproduces(m) || !factorization.restricted {
        return Err(Error::Degenerate("factorization failed re-verification".into()));
    }
    Ok(Rank3Rnmf {
        factorization,
        rank,
        solution,
    })
}

/// Endpoints of a bounded interval `{x | a_i x + b_i >= 0}`.
fn interval_ends(p: &HPolytope<Rational>) -> Result<(Rational, Rational)> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for i in 0..p.constraint_count() {
        let a = p.a().get(i, 0);
        if a.is_zero() {
            continue;
        }
        let root = -p.b()[i].clone() / a;
        if a.is_positive() {
            if lo.as_ref().is_none_or(|l| root > *l) {
                lo = Some(root);
            }
        } else if hi.as_ref().is_none_or(|h| root < *h) {
            hi = Some(root);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) if lo < hi => Ok((lo, hi)),
        _ => Err(Error::Degenerate("outer segment is unbounded or empty".into())),
    }
}

/// Maps a column-stochastic `H` for the normalized matrix back to the
/// original columns: kept column `k` is scaled by its column sum and zero
/// columns get zero coefficients.
fn rescale(h: &FieldMatrix<Rational>, norm: &StochasticNormalization<Rational>) -> Result<FieldMatrix<Rational>> {
    let mut out = FieldMatrix::zeros(h.rows(), norm.original_cols);
    for (k, (&j, s)) in norm.kept_columns.iter().zip(&norm.scale_factors).enumerate() {
        for i in 0..h.rows() {
            out.set(i, j, h.get(i, k).clone() * s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::exact::QuadraticNumber;

    #[test]
    fn irrational_instance_matrix() {
        assert_eq!(npp_to_rnmf(&data::irrational_npp()).unwrap(), data::irrational_matrix());
    }

    #[test]
    fn cube_instance_matrix() {
        assert_eq!(npp_to_rnmf(&data::cube_npp()).unwrap(), data::cube_matrix());
    }

    #[test]
    fn vertex_point_has_active_zeros() {
        let mut inst = data::cube_npp();
        inst.inner = VPolytope::new(vec![vec![Rational::zero(); 3]]).unwrap();
        let m = npp_to_rnmf(&inst).unwrap();
        assert_eq!(m.column(0), ["0", "1", "0", "1", "0", "1"].map(|s| s.parse().unwrap()).to_vec());
    }

    #[test]
    fn point_outside_rejected() {
        let mut inst = data::cube_npp();
        inst.inner = VPolytope::new(vec![vec![Rational::from_int(2), Rational::zero(), Rational::zero()]]).unwrap();
        assert!(matches!(npp_to_rnmf(&inst), Err(Error::NotNested(_))));
    }

    #[test]
    fn roundtrip_irrational_matrix() {
        let m = data::irrational_matrix();
        let red = reduce_matrix(&m).unwrap();
        assert_eq!(npp_to_rnmf(&red.instance).unwrap(), red.normalization.normalized);
        red.instance.validate().unwrap();
    }

    #[test]
    fn cube_inner_points_extremal() {
        let red = reduce_matrix(&data::cube_matrix()).unwrap();
        let pts = red.instance.inner.points();
        assert_eq!(pts.len(), 8);
        assert!(red.instance.inner.full_dimensional());
        for i in 0..8 {
            let others = VPolytope::new(pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect()).unwrap();
            assert!(vpoly_contains(&others, &pts[i]).unwrap().is_none());
        }
    }

    #[test]
    fn rank_one_rejected_by_reduction() {
        let m = FieldMatrix::from_rows(vec![vec![Rational::new(1, 2)], vec![Rational::new(1, 2)]]).unwrap();
        assert_eq!(rnmf_to_npp(&m), Err(Error::DimensionZero(1)));
        assert_eq!(rnmf_to_npp(&FieldMatrix::<Rational>::zeros(2, 2)), Err(Error::ZeroMatrix));
    }

    #[test]
    fn irrational_points_give_irrational_factorization() {
        let inst = data::irrational_npp().map(QuadraticNumber::embed);
        let m = data::irrational_matrix().map(QuadraticNumber::embed);
        let f = points_to_factorization(&inst, &m, &data::irrational_points()).unwrap();
        assert_eq!(f.w, data::irrational_w());
        assert_eq!(f.h, data::irrational_h());
        assert!(f.restricted);
    }

    #[test]
    fn irrational_factorization_gives_points() {
        let inst = data::irrational_npp().map(QuadraticNumber::embed);
        let rec = factorization_to_points(&inst, &data::irrational_w(), &data::irrational_h()).unwrap();
        assert_eq!(rec.points, data::irrational_points());
        assert_eq!((rec.raw_dim, rec.stripped_dim), (5, 5));
    }

    #[test]
    fn cube_all_vertices() {
        let inst = data::cube_npp();
        let m = data::cube_matrix();
        let f = points_to_factorization(&inst, &m, &inst.inner).unwrap();
        assert_eq!(f.inner_dim(), 8);
        assert!(f.restricted);
        assert_eq!(f.h, FieldMatrix::identity(8));
        let rec = factorization_to_points(&inst, &m, &FieldMatrix::identity(8)).unwrap();
        assert_eq!(rec.points, inst.inner);
    }

    #[test]
    fn zero_columns_of_w_are_stripped() {
        let inst = data::cube_npp();
        let m = data::cube_matrix();
        let w = m.hstack(&FieldMatrix::zeros(6, 1)).unwrap();
        let h = FieldMatrix::identity(8).transpose().hstack(&FieldMatrix::zeros(8, 1)).unwrap().transpose();
        let rec = factorization_to_points(&inst, &w, &h).unwrap();
        assert_eq!((rec.raw_dim, rec.stripped_dim), (9, 8));
    }

    #[test]
    fn rank4_unsupported() {
        assert_eq!(rnmf_rank3(&data::irrational_matrix()).unwrap_err(), Error::UnsupportedRank(4));
    }

    #[test]
    fn rank1_and_rank2() {
        let m = FieldMatrix::from_rows(vec![
            vec![Rational::new(1, 2), Rational::zero(), Rational::one()],
            vec![Rational::new(1, 2), Rational::zero(), Rational::one()],
        ])
        .unwrap();
        let out = rnmf_rank3(&m).unwrap();
        assert_eq!(out.d(), 1);
        assert_eq!(out.factorization.w.column(0), vec![Rational::new(1, 2); 2]);
        let fig1 = data::small_stochastic_matrix();
        let out = rnmf_rank3(&fig1).unwrap();
        assert_eq!(out.d(), 2);
        assert!(out.factorization.reproduces(&fig1));
    }

    #[test]
    fn xy_face_matrix_rank3() {
        let inst = data::xy_face_npp();
        let m = npp_to_rnmf(&inst).unwrap();
        assert_eq!(m.rank(), 3);
        let out = rnmf_rank3(&m).unwrap();
        assert_eq!(out.d(), 3);
        assert_eq!(out.factorization.w.rank(), 3);
        assert!(out.factorization.reproduces(&m));
    }
}
