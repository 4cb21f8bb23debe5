//! Embedded instances in the crate's text formats.
//!
//! The irrationality instance: a 3D nested polytope instance whose minimal
//! nested polytope has 5 vertices, all of them irrational, together
//! with its 6x6 matrix and the inner-dimension-5 factorization over Q(sqrt2).
//! Also the 3D-cube instance, the small two-row matrix behind the smallest
//! gadget example, and the cone counterexamples.

use crate::exact::{QuadraticNumber, Rational};
use crate::geometry::{Point2, Polygon2D, VPolytope};
use crate::linalg::FieldMatrix;
use crate::reductions::NppInstance;
use crate::text::{parse_matrix, parse_npp};

/// Outer polytope `{A x + b >= 0}` with 6 facets and 6 inner points, three on
/// the `z = 0` face and three on the `y = 0` face.
pub const IRRATIONAL_NPP: &str = "
npp 3 6 6
halfspace 0 1 0 0
halfspace 0 0 1 0
halfspace 1 0 0 0
halfspace -1 0 5/2 1
halfspace -1/2 -1 1/4 1
halfspace -1/4 -1 -7/8 1
point 3/4 1/8 0
point 3/4 1/2 0
point 3/11 17/22 0
point 2 0 1/2
point 1/2 0 3/4
point 1/6 0 7/12
";

pub const IRRATIONAL_MATRIX: &str = "
matrix 6 6
1/8   1/2   17/22 0    0     0
0     0     0     1/2  3/4   7/12
3/4   3/4   3/11  2    1/2   1/6
1/4   1/4   8/11  1/4  19/8  55/24
1/2   1/8   1/11  1/8  15/16 17/16
11/16 5/16  7/44  1/16 7/32  43/96
";

pub const IRRATIONAL_W: &str = "
matrix-quad 6 5
0             3/14+1/14*sqrt2  11/14+1/14*sqrt2  0                  0
0             0                0                 12/17-2/17*sqrt2   5/7+1/14*sqrt2
2-sqrt2       1                3/7-1/7*sqrt2     26/17+7/17*sqrt2   0
-1+sqrt2      0                4/7+1/7*sqrt2     21/17-12/17*sqrt2  39/14+5/28*sqrt2
1/2*sqrt2     2/7-1/14*sqrt2   0                 7/17-4/17*sqrt2    33/28+1/56*sqrt2
1/2+1/4*sqrt2 15/28-1/14*sqrt2 3/28-1/28*sqrt2   0                  3/8-1/16*sqrt2
";

pub const IRRATIONAL_H: &str = "
matrix-quad 5 6
1/4+1/4*sqrt2 0               1/11*sqrt2    1/4-1/8*sqrt2 0                 1/6+1/12*sqrt2
3/4-1/4*sqrt2 1/2+1/8*sqrt2   0             0             0                 0
0             1/2-1/8*sqrt2   1-1/11*sqrt2  0             0                 0
0             0               0             3/4+1/8*sqrt2 13/34-7/68*sqrt2  0
0             0               0             0             21/34+7/68*sqrt2  5/6-1/12*sqrt2
";

/// The unit cube as both outer and inner polytope. Rows: `x, 1-x, y, 1-y,
/// z, 1-z`; column `k` is the vertex with bits `(x, y, z)` of `k`.
pub const CUBE_NPP: &str = "
npp 3 6 8
halfspace 1 0 0 0
halfspace -1 0 0 1
halfspace 0 1 0 0
halfspace 0 -1 0 1
halfspace 0 0 1 0
halfspace 0 0 -1 1
point 0 0 0
point 0 0 1
point 0 1 0
point 0 1 1
point 1 0 0
point 1 0 1
point 1 1 0
point 1 1 1
";

pub const CUBE_MATRIX: &str = "
matrix 6 8
0 0 0 0 1 1 1 1
1 1 1 1 0 0 0 0
0 0 1 1 0 0 1 1
1 1 0 0 1 1 0 0
0 1 0 1 0 1 0 1
1 0 1 0 1 0 1 0
";

pub const SMALL_STOCHASTIC_MATRIX: &str = "
matrix 2 3
1/4 1/2 3/4
3/4 1/2 1/4
";

fn embedded<T>(r: crate::Result<T>) -> T {
    r.expect("embedded data parses")
}

pub fn irrational_npp() -> NppInstance<Rational> {
    embedded(parse_npp(IRRATIONAL_NPP))
}

pub fn irrational_matrix() -> FieldMatrix<Rational> {
    embedded(parse_matrix(IRRATIONAL_MATRIX))
}

pub fn irrational_w() -> FieldMatrix<QuadraticNumber> {
    embedded(parse_matrix(IRRATIONAL_W))
}

pub fn irrational_h() -> FieldMatrix<QuadraticNumber> {
    embedded(parse_matrix(IRRATIONAL_H))
}

fn quad(s: &str) -> QuadraticNumber {
    s.parse().expect("embedded scalar parses")
}

/// The five vertices of the unique nested polytope with 5 vertices.
pub fn irrational_points() -> VPolytope<QuadraticNumber> {
    let pts = [
        ["2-sqrt2", "0", "0"],
        ["1", "3/14+1/14*sqrt2", "0"],
        ["3/7-1/7*sqrt2", "11/14+1/14*sqrt2", "0"],
        ["26/17+7/17*sqrt2", "0", "12/17-2/17*sqrt2"],
        ["0", "0", "5/7+1/14*sqrt2"],
    ];
    embedded(VPolytope::new(pts.iter().map(|p| p.iter().map(|s| quad(s)).collect()).collect()))
}

/// `2 - sqrt2`, the start parameter of the irrational triangles on both
/// faces.
pub fn irrational_root() -> QuadraticNumber {
    quad("2-sqrt2")
}

pub fn cube_npp() -> NppInstance<Rational> {
    embedded(parse_npp(CUBE_NPP))
}

pub fn cube_matrix() -> FieldMatrix<Rational> {
    embedded(parse_matrix(CUBE_MATRIX))
}

pub fn small_stochastic_matrix() -> FieldMatrix<Rational> {
    embedded(parse_matrix(SMALL_STOCHASTIC_MATRIX))
}

fn pt(x: &str, y: &str) -> Point2 {
    Point2::new(x.parse().expect("embedded scalar"), y.parse().expect("embedded scalar"))
}

/// The `z = 0` face in `(x, y)` coordinates.
pub fn xy_face_outer() -> Polygon2D {
    embedded(Polygon2D::new(vec![pt("0", "0"), pt("1", "0"), pt("1", "1/2"), pt("0", "1")]))
}

pub fn xy_face_inner() -> Polygon2D {
    embedded(Polygon2D::from_points(&[pt("3/4", "1/8"), pt("3/4", "1/2"), pt("3/11", "17/22")]))
}

/// The `y = 0` face in `(x, z)` coordinates.
pub fn xz_face_outer() -> Polygon2D {
    embedded(Polygon2D::new(vec![pt("0", "0"), pt("1", "0"), pt("9/4", "1/2"), pt("0", "8/7")]))
}

pub fn xz_face_inner() -> Polygon2D {
    embedded(Polygon2D::from_points(&[pt("2", "1/2"), pt("1/2", "3/4"), pt("1/6", "7/12")]))
}

/// The `z = 0` face as a 2D instance with its 4 facets `y, x, 1-x,
/// 1-x/2-y`; its matrix is 4x3 of rank 3.
pub fn xy_face_npp() -> NppInstance<Rational> {
    embedded(parse_npp(
        "npp 2 4 3
halfspace 0 1 0
halfspace 1 0 0
halfspace -1 0 1
halfspace -1/2 -1 1
point 3/4 1/8
point 3/4 1/2
point 3/11 17/22",
    ))
}

fn int_vectors(rows: &[[i64; 6]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect()
}

/// Generators of the cone `0 <= x_i <= x_{i+3}` in R^6.
pub fn cone_c_generators() -> Vec<Vec<Rational>> {
    int_vectors(&[
        [1, 0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 1, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 1, 0, 0, 1],
        [0, 0, 0, 0, 0, 1],
    ])
}

/// Generators of the cone `0 <= x_1, x_2, x_3 <= x_4 = x_5 = x_6`: the
/// bit patterns of `0..8` (with `x_3` lowest) followed by `1, 1, 1`.
pub fn cone_c_prime_generators() -> Vec<Vec<Rational>> {
    (0..8)
        .map(|k: i64| {
            [(k >> 2) & 1, (k >> 1) & 1, k & 1, 1, 1, 1]
                .iter()
                .map(|&x| Rational::from_int(x))
                .collect()
        })
        .collect()
}

/// `{0,1}^3 x {1}`, generating the cone `0 <= x_i <= y` in R^4.
pub fn cube_cone_vectors() -> Vec<Vec<Rational>> {
    (0..8)
        .map(|k: i64| {
            [(k >> 2) & 1, (k >> 1) & 1, k & 1, 1]
                .iter()
                .map(|&x| Rational::from_int(x))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Field;
    use crate::reductions::npp_to_rnmf;

    #[test]
    fn embedded_matrix_is_instance_matrix() {
        assert_eq!(npp_to_rnmf(&irrational_npp()).unwrap(), irrational_matrix());
    }

    #[test]
    fn embedded_factorization() {
        let w = irrational_w();
        let h = irrational_h();
        assert_eq!(w.mul(&h).unwrap(), irrational_matrix().map(QuadraticNumber::embed));
        assert!(h.is_column_stochastic());
    }

    #[test]
    fn embedded_points_are_irrational() {
        let q = irrational_points();
        assert_eq!(q.points()[0][0], irrational_root());
        assert!(q.points().iter().all(|p| p.iter().any(|x| x.to_rational().is_none())));
    }

    #[test]
    fn faces_are_instance_faces() {
        let inst = irrational_npp();
        let pts = inst.inner.points();
        for v in xy_face_inner().vertices() {
            assert!(pts.iter().any(|p| p[0] == v.x && p[1] == v.y && p[2].is_zero()));
        }
        for v in xz_face_inner().vertices() {
            assert!(pts.iter().any(|p| p[0] == v.x && p[1].is_zero() && p[2] == v.y));
        }
    }
}
