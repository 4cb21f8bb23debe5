use crate::exact::{Field, Rational};
use crate::geometry::{vpoly_contains, Point2, Polygon2D, VPolytope};
use crate::{Error, Result};

use super::chain::{local_breakpoints, search_chains, slack_feasible, trace_until_closed};

/// A minimum-vertex polygon nested between the outer and inner polygons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedSolution {
    pub k: usize,
    pub start_edge: usize,
    pub start_lambda: Rational,
    /// Vertices on the outer boundary in counter-clockwise order. Every edge
    /// except the closing one is a supporting segment.
    pub vertices: Vec<Point2>,
    /// Vertex count of the greedy wrap from vertex 0 of the outer polygon.
    pub greedy_bound: usize,
    /// A tangent query hit the tie rule (a boundary point on an edge line or
    /// vertex of the inner polygon) while building the solution.
    pub tie_rule_used: bool,
}

/// A start point whose supporting chain closes after `length` segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub edge: usize,
    pub lambda: Rational,
    pub length: usize,
}

/// Searches every start edge and every refined interval for a chain of at
/// most `length` supporting segments that closes up. Witnesses are checked
/// by tracing the segments geometrically before being returned.
pub fn sweep(p: &Polygon2D, s: &Polygon2D, length: usize) -> Result<Option<Witness>> {
    let n = p.len();
    let locals: Vec<Vec<Rational>> = (0..n).map(|e| local_breakpoints(p, s, e)).collect();
    for edge in 0..n {
        let found = search_chains(p, s, &locals, edge, length, &mut |chain| {
            let Some(lambda) = slack_feasible(chain, n) else {
                return Ok(None);
            };
            let depth = chain.rays.len();
            let (_, closed) = trace_until_closed(p, s, edge, &lambda, depth)?;
            if !closed {
                return Err(Error::Degenerate(format!(
                    "slack witness {lambda} on edge {edge} does not close geometrically"
                )));
            }
            Ok(Some(Witness {
                edge,
                lambda,
                length: depth,
            }))
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Minimum-vertex rational polygon `Q` with `S ⊆ Q ⊆ P`.
///
/// A greedy wrap from vertex 0 bounds the answer; shorter chain lengths are
/// then swept until one admits no closing start point. The polygon is
/// rebuilt by tracing from the shortest witness, and both inclusions are
/// re-checked before returning.
pub fn minimal_nested_polygon(p: &Polygon2D, s: &Polygon2D) -> Result<NestedSolution> {
    if let Some(v) = s.vertices().iter().find(|v| !p.contains(v)) {
        return Err(Error::NotNested(format!("inner vertex {v:?} lies outside the outer polygon")));
    }
    let n = p.len();
    let cap = 2 * (n + s.len()) + 4;
    let (greedy, closed) = trace_until_closed(p, s, 0, &Rational::zero(), cap)?;
    if !closed {
        return Err(Error::Degenerate("greedy wrap does not close".into()));
    }
    let greedy_bound = greedy.points.len();

    let mut best = Witness {
        edge: 0,
        lambda: Rational::zero(),
        length: greedy_bound,
    };
    while best.length > 3 {
        match sweep(p, s, best.length - 1)? {
            Some(w) => best = w,
            None => break,
        }
    }

    let (trace, closed) = trace_until_closed(p, s, best.edge, &best.lambda, best.length)?;
    if !closed || trace.points.len() != best.length {
        return Err(Error::Degenerate(format!(
            "witness trace has {} segments, expected {}",
            trace.points.len(),
            best.length
        )));
    }
    let solution = NestedSolution {
        k: best.length,
        start_edge: best.edge,
        start_lambda: best.lambda,
        vertices: trace.points,
        greedy_bound,
        tie_rule_used: trace.tie || greedy.tie,
    };
    verify_nesting(p, s, &solution.vertices)?;
    Ok(solution)
}

/// `S ⊆ conv(vertices) ⊆ P`, with a convex certificate for every inner
/// vertex.
pub fn verify_nesting(p: &Polygon2D, s: &Polygon2D, vertices: &[Point2]) -> Result<()> {
    if let Some(v) = vertices.iter().find(|v| !p.contains(v)) {
        return Err(Error::NotNested(format!("vertex {v:?} lies outside the outer polygon")));
    }
    let q = VPolytope::new(vertices.iter().map(Point2::to_vec).collect())?;
    for v in s.vertices() {
        let cert = vpoly_contains(&q, &v.to_vec())?;
        if cert.is_none() {
            return Err(Error::NotNested(format!("inner vertex {v:?} is not covered")));
        }
    }
    Ok(())
}

/// Certificate that no polygon with `k - 1` vertices is nested.
pub fn minimality_certificate(p: &Polygon2D, s: &Polygon2D, k: usize) -> Result<bool> {
    if k <= 3 {
        return Ok(true);
    }
    Ok(sweep(p, s, k - 1)?.is_none())
}

impl NestedSolution {
    /// The solution polygon as a point set with a strictly convex hull.
    pub fn polygon(&self) -> Result<Polygon2D> {
        Polygon2D::from_points(&self.vertices)
    }

    pub fn all_rational(&self) -> bool {
        self.vertices.iter().all(|v| v.x.to_rational().is_some() && v.y.to_rational().is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &str, y: &str) -> Point2 {
        Point2::new(x.parse().unwrap(), y.parse().unwrap())
    }

    fn square() -> Polygon2D {
        Polygon2D::new(vec![p("0", "0"), p("1", "0"), p("1", "1"), p("0", "1")]).unwrap()
    }

    #[test]
    fn square_in_itself() {
        let sol = minimal_nested_polygon(&square(), &square()).unwrap();
        assert_eq!(sol.k, 4);
        assert!(sol.tie_rule_used);
        assert!(minimality_certificate(&square(), &square(), 4).unwrap());
    }

    #[test]
    fn xy_face_needs_three() {
        let outer = Polygon2D::new(vec![p("0", "0"), p("1", "0"), p("1", "1/2"), p("0", "1")]).unwrap();
        let inner = Polygon2D::from_points(&[p("3/4", "1/8"), p("3/4", "1/2"), p("3/11", "17/22")]).unwrap();
        let sol = minimal_nested_polygon(&outer, &inner).unwrap();
        assert_eq!(sol.k, 3);
        assert_eq!(sol.greedy_bound, 4);
        verify_nesting(&outer, &inner, &sol.vertices).unwrap();
    }

    #[test]
    fn triangle_uses_outer_corners() {
        let outer = Polygon2D::new(vec![p("0", "0"), p("6", "0"), p("0", "6")]).unwrap();
        let inner = Polygon2D::new(vec![p("1", "1"), p("2", "1"), p("1", "2")]).unwrap();
        let sol = minimal_nested_polygon(&outer, &inner).unwrap();
        assert_eq!(sol.k, 3);
    }

    #[test]
    fn inner_outside_rejected() {
        let inner = Polygon2D::new(vec![p("0", "0"), p("2", "0"), p("0", "2")]).unwrap();
        assert!(matches!(minimal_nested_polygon(&square(), &inner), Err(Error::NotNested(_))));
    }
}
