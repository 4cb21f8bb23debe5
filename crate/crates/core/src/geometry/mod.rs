//! Exact polytopes: half-space and spanning-point forms, membership with
//! certificates, cones, and planar convex polygons.

mod lp;
mod polygon;

pub use lp::nonnegative_solution;
pub use polygon::{orient, Point2, Polygon2D, Tangent};

use crate::exact::{dot, sum, Field};
use crate::linalg::FieldMatrix;
use crate::{Error, Result};

/// `{x | A x + b >= 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope<F> {
    a: FieldMatrix<F>,
    b: Vec<F>,
}

impl<F: Field> HPolytope<F> {
    pub fn new(a: FieldMatrix<F>, b: Vec<F>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} inequalities but {} offsets",
                a.rows(),
                b.len()
            )));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::DimensionMismatch("empty half-space system".into()));
        }
        Ok(HPolytope { a, b })
    }

    pub fn a(&self) -> &FieldMatrix<F> {
        &self.a
    }

    pub fn b(&self) -> &[F] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn constraint_count(&self) -> usize {
        self.a.rows()
    }

    /// `A x + b`.
    pub fn evaluate(&self, x: &[F]) -> Result<Vec<F>> {
        let ax = self.a.mul_vec(x)?;
        Ok(ax.into_iter().zip(&self.b).map(|(v, b)| v + b).collect())
    }

    pub fn contains(&self, x: &[F]) -> Result<bool> {
        Ok(self.evaluate(x)?.iter().all(|v| !v.is_negative()))
    }

    /// `rank((A b)) = dim + 1`. Boundedness is not checked.
    pub fn full_dimensional(&self) -> bool {
        let ab = self
            .a
            .hstack(&FieldMatrix::column_vector(&self.b))
            .expect("row counts agree");
        ab.rank() == self.dim() + 1
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> HPolytope<G> {
        HPolytope {
            a: self.a.map(&f),
            b: self.b.iter().map(f).collect(),
        }
    }
}

/// Convex hull of finitely many points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope<F> {
    points: Vec<Vec<F>>,
}

impl<F: Field> VPolytope<F> {
    pub fn new(points: Vec<Vec<F>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::DimensionMismatch("no points".into()));
        };
        let d = first.len();
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::DimensionMismatch("points of different dimension".into()));
        }
        Ok(VPolytope { points })
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Convex coefficients expressing `x`, if `x` lies in the hull.
    pub fn contains(&self, x: &[F]) -> Result<Option<Vec<F>>> {
        vpoly_contains(self, x)
    }

    /// Affine rank of the points equals the ambient dimension.
    pub fn full_dimensional(&self) -> bool {
        let p0 = &self.points[0];
        let diffs: Vec<Vec<F>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(p0).map(|(a, b)| a.clone() - b).collect())
            .collect();
        if diffs.is_empty() {
            return false;
        }
        FieldMatrix::from_columns(&diffs).expect("equal dimensions").rank() == self.dim()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> VPolytope<G> {
        VPolytope {
            points: self.points.iter().map(|p| p.iter().map(&f).collect()).collect(),
        }
    }
}

/// `A x + b >= 0` for every row.
pub fn hpoly_contains<F: Field>(p: &HPolytope<F>, x: &[F]) -> Result<bool> {
    p.contains(x)
}

/// Convex-combination certificate for `x` in `conv(points)`.
///
/// The returned coefficients are nonnegative, sum to one, and reproduce `x`;
/// all three facts are checked before returning.
pub fn vpoly_contains<F: Field>(v: &VPolytope<F>, x: &[F]) -> Result<Option<Vec<F>>> {
    if x.len() != v.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point of dimension {} against polytope of dimension {}",
            x.len(),
            v.dim()
        )));
    }
    let mut columns: Vec<Vec<F>> = v.points.clone();
    for c in &mut columns {
        c.push(F::one());
    }
    let a = FieldMatrix::from_columns(&columns)?;
    let mut rhs = x.to_vec();
    rhs.push(F::one());
    let Some(lambda) = nonnegative_solution(&a, &rhs) else {
        return Ok(None);
    };
    let combo = combine(&v.points, &lambda);
    assert!(
        sum(&lambda) == F::one() && combo == x && lambda.iter().all(|l| !l.is_negative()),
        "convex certificate failed re-verification"
    );
    Ok(Some(lambda))
}

/// Nonnegative coefficients with `sum lambda_i g_i = x`, if they exist.
pub fn cone_member<F: Field>(generators: &[Vec<F>], x: &[F]) -> Result<Option<Vec<F>>> {
    if generators.iter().any(|g| g.len() != x.len()) {
        return Err(Error::DimensionMismatch("generator and point dimensions differ".into()));
    }
    if generators.is_empty() {
        return Ok(x.iter().all(F::is_zero).then(Vec::new));
    }
    let a = FieldMatrix::from_columns(generators)?;
    let Some(lambda) = nonnegative_solution(&a, x) else {
        return Ok(None);
    };
    assert!(
        combine(generators, &lambda) == x && lambda.iter().all(|l| !l.is_negative()),
        "cone certificate failed re-verification"
    );
    Ok(Some(lambda))
}

/// Entry `i` is true iff generator `i` is not in the cone of the others.
pub fn extremal_generators<F: Field>(generators: &[Vec<F>]) -> Result<Vec<bool>> {
    (0..generators.len())
        .map(|i| {
            let others: Vec<Vec<F>> = generators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            Ok(cone_member(&others, &generators[i])?.is_none())
        })
        .collect()
}

/// `sum_i lambda_i p_i`.
pub fn combine<F: Field>(points: &[Vec<F>], lambda: &[F]) -> Vec<F> {
    let d = points.first().map_or(0, Vec::len);
    (0..d)
        .map(|k| {
            let col: Vec<F> = points.iter().map(|p| p[k].clone()).collect();
            dot(&col, lambda)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{QuadraticNumber, Rational};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pt(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| r(s)).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| Rational::from_int(n)).collect()
    }

    fn cube_vertices() -> Vec<Vec<Rational>> {
        (0..8)
            .map(|k| ints(&[(k >> 2) & 1, (k >> 1) & 1, k & 1]))
            .collect()
    }

    #[test]
    fn outer_polytope_membership() {
        let inst = crate::data::irrational_npp();
        let p = &inst.outer;
        assert!(p.contains(&pt(&["3/4", "1/8", "0"])).unwrap());
        assert!(!p.contains(&ints(&[-1, 0, 0])).unwrap());
        let pq = p.map(QuadraticNumber::embed);
        let q1: Vec<QuadraticNumber> =
            ["2-sqrt2", "0", "0"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(pq.contains(&q1).unwrap());
        assert!(p.full_dimensional());
        assert!(p.contains(&ints(&[0, 0])).is_err());
    }

    #[test]
    fn square_center() {
        let sq = VPolytope::new(vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[1, 1]), ints(&[0, 1])]).unwrap();
        let lambda = sq.contains(&pt(&["1/2", "1/2"])).unwrap().unwrap();
        assert_eq!(combine(sq.points(), &lambda), pt(&["1/2", "1/2"]));
        assert!(sq.contains(&ints(&[2, 0])).unwrap().is_none());
    }

    #[test]
    fn cube_vertex_is_extreme() {
        let v = VPolytope::new(cube_vertices()[1..].to_vec()).unwrap();
        assert!(v.contains(&ints(&[0, 0, 0])).unwrap().is_none());
        assert!(v.contains(&pt(&["1/2", "1/2", "1/2"])).unwrap().is_some());
    }

    #[test]
    fn full_dimensionality() {
        assert!(VPolytope::new(cube_vertices()).unwrap().full_dimensional());
        assert!(!VPolytope::new(vec![ints(&[0, 0]), ints(&[1, 1])]).unwrap().full_dimensional());
    }

    #[test]
    fn cone_basics() {
        let gens = vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])];
        assert_eq!(extremal_generators(&gens).unwrap(), vec![true, true, false]);
        assert_eq!(cone_member(&gens, &ints(&[0, 0])).unwrap().unwrap(), ints(&[0, 0, 0]));
        assert!(cone_member(&gens, &ints(&[-1, 0])).unwrap().is_none());
    }

    #[test]
    fn quadratic_feasibility() {
        let s = crate::data::irrational_npp().inner.map(QuadraticNumber::embed);
        let q = crate::data::irrational_points();
        for sj in s.points() {
            assert!(q.contains(sj).unwrap().is_some());
        }
    }
}
