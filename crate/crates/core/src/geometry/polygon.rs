use std::fmt;

use crate::exact::{Field, Rational};
use crate::{Error, Result};

use super::{HPolytope, VPolytope};

/// A rational point in the plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(Rational::from_int(x), Rational::from_int(y))
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Rational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &Point2, t: &Rational) -> Point2 {
        self.add(&other.sub(self).scale(t))
    }

    pub fn cross(&self, o: &Point2) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Point2) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        vec![self.x.clone(), self.y.clone()]
    }

    pub fn from_slice(v: &[Rational]) -> Result<Self> {
        match v {
            [x, y] => Ok(Point2::new(x.clone(), y.clone())),
            _ => Err(Error::DimensionMismatch(format!("expected a 2D point, got {} coordinates", v.len()))),
        }
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of the turn `a -> b -> c`: +1 left, -1 right, 0 collinear.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> i8 {
    // a_x (b_y - c_y) + b_x (c_y - a_y) + c_x (a_y - b_y), scaled by the
    // product of all six denominators so no fraction is ever reduced
    let (axn, axd, ayn, ayd) = (a.x.numer(), a.x.denom(), a.y.numer(), a.y.denom());
    let (bxn, bxd, byn, byd) = (b.x.numer(), b.x.denom(), b.y.numer(), b.y.denom());
    let (cxn, cxd, cyn, cyd) = (c.x.numer(), c.x.denom(), c.y.numer(), c.y.denom());
    let t1 = axn * (byn * cyd - cyn * byd) * (ayd * bxd * cxd);
    let t2 = bxn * (cyn * ayd - ayn * cyd) * (byd * axd * cxd);
    let t3 = cxn * (ayn * byd - byn * ayd) * (cyd * axd * bxd);
    match (t1 + t2 + t3).sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// Result of a left-tangent query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tangent {
    pub index: usize,
    /// The query point was a vertex of the polygon or collinear with one of
    /// its edges, so the tie rule decided the answer.
    pub tie: bool,
}

/// Strictly convex polygon with vertices in counter-clockwise order.
#[derive(Clone, PartialEq, Eq)]
pub struct Polygon2D {
    vertices: Vec<Point2>,
}

impl Polygon2D {
    /// Validates that `vertices` already form a strictly convex CCW polygon.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Degenerate(format!("polygon with {n} vertices")));
        }
        for i in 0..n {
            if orient(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]) <= 0 {
                return Err(Error::Degenerate(format!(
                    "vertices {i}..{} do not make a strict left turn",
                    i + 2
                )));
            }
        }
        // left turns alone allow a star-shaped walk that winds twice
        for i in 0..n {
            let (p, q) = (&vertices[i], &vertices[(i + 1) % n]);
            if vertices.iter().any(|w| orient(p, q, w) < 0) {
                return Err(Error::Degenerate("polygon is not convex".into()));
            }
        }
        Ok(Polygon2D { vertices })
    }

    /// Convex hull in CCW order starting from the lexicographically smallest
    /// point; duplicates, interior points and collinear hull points dropped.
    pub fn from_points(points: &[Point2]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::Degenerate("fewer than 3 distinct points".into()));
        }
        let mut lower: Vec<Point2> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point2> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::Degenerate("points are collinear".into()));
        }
        Polygon2D::new(lower)
    }

    /// Vertices of a bounded planar `{x | A x + b >= 0}` by pairwise line
    /// intersection and feasibility filtering.
    pub fn from_halfplanes(p: &HPolytope<Rational>) -> Result<Self> {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("expected dimension 2, got {}", p.dim())));
        }
        let a = p.a();
        let b = p.b();
        let n = a.rows();
        let mut candidates = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a1, b1, c1) = (a.get(i, 0), a.get(i, 1), &b[i]);
                let (a2, b2, c2) = (a.get(j, 0), a.get(j, 1), &b[j]);
                let det = a1.clone() * b2 - a2.clone() * b1;
                if det.is_zero() {
                    continue;
                }
                // a1 x + b1 y = -c1, a2 x + b2 y = -c2
                let x = (b1.clone() * c2 - b2.clone() * c1) / &det;
                let y = (a2.clone() * c1 - a1.clone() * c2) / &det;
                let v = vec![x, y];
                if p.contains(&v)? {
                    candidates.push(Point2::from_slice(&v)?);
                }
            }
        }
        Polygon2D::from_points(&candidates)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex `i` modulo the vertex count.
    pub fn vertex(&self, i: usize) -> &Point2 {
        &self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (&Point2, &Point2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    /// `(1 - lambda) p + lambda q` on edge `i = pq`.
    pub fn point_at(&self, edge: usize, lambda: &Rational) -> Point2 {
        let (p, q) = self.edge(edge);
        p.lerp(q, lambda)
    }

    /// The unique `lambda in [0, 1]` placing `point` on edge `edge`.
    pub fn convex_representation(&self, edge: usize, point: &Point2) -> Result<Rational> {
        let (p, q) = self.edge(edge);
        let d = q.sub(p);
        let w = point.sub(p);
        if !d.cross(&w).is_zero() {
            return Err(Error::NotOnEdge(edge));
        }
        let lambda = w.dot(&d) / d.dot(&d);
        if lambda.is_negative() || lambda > Rational::one() {
            return Err(Error::NotOnEdge(edge));
        }
        Ok(lambda)
    }

    /// Closed containment.
    pub fn contains(&self, x: &Point2) -> bool {
        (0..self.len()).all(|i| {
            let (p, q) = self.edge(i);
            orient(p, q, x) >= 0
        })
    }

    pub fn strictly_contains(&self, x: &Point2) -> bool {
        (0..self.len()).all(|i| {
            let (p, q) = self.edge(i);
            orient(p, q, x) > 0
        })
    }

    pub fn contains_polygon(&self, other: &Polygon2D) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Index of the vertex `t` such that every vertex lies on or left of the
    /// directed line `u -> t`; among collinear candidates the one farthest
    /// from `u` wins. A vertex equal to `u` is never returned.
    pub fn left_tangent_vertex(&self, u: &Point2) -> Result<Tangent> {
        let n = self.vertices.len();
        // by convexity a vertex supports the line iff both neighbours do
        let neighbours = |t: usize| [&self.vertices[(t + n - 1) % n], &self.vertices[(t + 1) % n]];
        let mut best: Option<usize> = None;
        let mut valid = 0;
        for (t, vt) in self.vertices.iter().enumerate() {
            if vt == u {
                continue;
            }
            if neighbours(t).iter().all(|w| orient(u, vt, w) >= 0) {
                valid += 1;
                let farther = best.is_none_or(|b| {
                    vt.sub(u).dot(&vt.sub(u)) > self.vertices[b].sub(u).dot(&self.vertices[b].sub(u))
                });
                if farther {
                    best = Some(t);
                }
            }
        }
        let index = best.ok_or(Error::InsideInner)?;
        let vt = &self.vertices[index];
        let tie = valid > 1
            || self.vertices.contains(u)
            || neighbours(index).iter().any(|w| *w != u && orient(u, vt, w) == 0);
        Ok(Tangent { index, tie })
    }

    pub fn to_vpolytope(&self) -> VPolytope<Rational> {
        VPolytope::new(self.vertices.iter().map(Point2::to_vec).collect()).expect("nonempty")
    }

    /// Inequalities `cross(q - p, x - p) >= 0`, one per edge.
    pub fn to_hpolytope(&self) -> HPolytope<Rational> {
        let mut rows = Vec::new();
        let mut b = Vec::new();
        for i in 0..self.len() {
            let (p, q) = self.edge(i);
            let d = q.sub(p);
            // d.x (y - p.y) - d.y (x - p.x)
            rows.push(vec![-d.y.clone(), d.x.clone()]);
            b.push(&d.y * &p.x - &d.x * &p.y);
        }
        let a = crate::linalg::FieldMatrix::from_rows(rows).expect("two columns");
        HPolytope::new(a, b).expect("nonempty")
    }
}

impl fmt::Debug for Polygon2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &str, y: &str) -> Point2 {
        Point2::new(x.parse().unwrap(), y.parse().unwrap())
    }

    fn unit_square() -> Polygon2D {
        Polygon2D::from_points(&[p("1", "1"), p("0", "0"), p("0", "1"), p("1", "0")]).unwrap()
    }

    fn xy_inner() -> Polygon2D {
        Polygon2D::from_points(&[p("3/4", "1/8"), p("3/4", "1/2"), p("3/11", "17/22")]).unwrap()
    }

    #[test]
    fn scrambled_square() {
        let sq = unit_square();
        assert_eq!(sq.vertices(), &[p("0", "0"), p("1", "0"), p("1", "1"), p("0", "1")]);
    }

    #[test]
    fn inner_triangle_is_ccw() {
        let s = xy_inner();
        assert_eq!(s.len(), 3);
        assert_eq!(orient(s.vertex(0), s.vertex(1), s.vertex(2)), 1);
    }

    #[test]
    fn interior_point_dropped() {
        let pts = [p("0", "0"), p("4", "0"), p("4", "4"), p("0", "4"), p("1", "2"), p("2", "0")];
        let poly = Polygon2D::from_points(&pts).unwrap();
        assert_eq!(poly.len(), 4);
        assert!(pts.iter().all(|x| poly.contains(x)));
        assert!(Polygon2D::from_points(&[p("0", "0"), p("1", "1"), p("2", "2")]).is_err());
    }

    #[test]
    fn rejects_non_convex_order() {
        assert!(Polygon2D::new(vec![p("0", "0"), p("0", "1"), p("1", "1"), p("1", "0")]).is_err());
    }

    #[test]
    fn halfplanes_to_vertices() {
        let sq = unit_square();
        assert_eq!(Polygon2D::from_halfplanes(&sq.to_hpolytope()).unwrap(), sq);
    }

    #[test]
    fn convex_representations() {
        let quad = Polygon2D::new(vec![p("0", "0"), p("1", "0"), p("1", "1/2"), p("0", "1")]).unwrap();
        assert_eq!(quad.convex_representation(0, &p("3/5", "0")).unwrap(), "3/5".parse().unwrap());
        assert_eq!(quad.convex_representation(1, &p("1", "1/2")).unwrap(), Rational::one());
        assert_eq!(quad.convex_representation(2, &p("1/2", "3/4")).unwrap(), "1/2".parse().unwrap());
        assert_eq!(quad.point_at(2, &"1/2".parse().unwrap()), p("1/2", "3/4"));
        assert!(matches!(quad.convex_representation(0, &p("2", "0")), Err(Error::NotOnEdge(0))));
        assert!(matches!(quad.convex_representation(0, &p("1/2", "1")), Err(Error::NotOnEdge(0))));
    }

    #[test]
    fn tangent_from_bottom_edge() {
        let s = xy_inner();
        let t = s.left_tangent_vertex(&p("3/5", "0")).unwrap();
        assert_eq!(s.vertex(t.index), &p("3/4", "1/8"));
        assert!(!t.tie);
    }

    #[test]
    fn tangent_to_square() {
        let sq = unit_square();
        let t = sq.left_tangent_vertex(&p("2", "1/2")).unwrap();
        assert_eq!(sq.vertex(t.index), &p("1", "1"));
        for w in sq.vertices() {
            assert!(orient(&p("2", "1/2"), sq.vertex(t.index), w) >= 0);
        }
    }

    #[test]
    fn tangent_tie_rules() {
        let sq = unit_square();
        // at a vertex: successor
        let t = sq.left_tangent_vertex(&p("1", "0")).unwrap();
        assert_eq!(sq.vertex(t.index), &p("1", "1"));
        assert!(t.tie);
        // collinear with the bottom edge: farther vertex
        let t = sq.left_tangent_vertex(&p("-1", "0")).unwrap();
        assert_eq!(sq.vertex(t.index), &p("1", "0"));
        assert!(t.tie);
        assert!(matches!(sq.left_tangent_vertex(&p("1/2", "1/2")), Err(Error::InsideInner)));
    }
}
