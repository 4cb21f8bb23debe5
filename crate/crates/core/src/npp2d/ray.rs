use crate::exact::{Field, Rational};
use crate::geometry::{Point2, Polygon2D};
use crate::{Error, Result};

use super::Mobius;

/// How the coefficients of a [`RayFunction`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayFormula {
    /// Source and target edge lines are parallel.
    Parallel,
    /// The edge lines meet ahead of the source edge and behind the target.
    Intersecting,
    /// The edge lines meet behind the source edge and ahead of the target;
    /// both edges are reversed, the intersecting formula applied, and the
    /// result conjugated by `x -> 1 - x`.
    IntersectingReversed,
    /// Direct collinearity condition; used when the other forms have a zero
    /// denominator (for example when the tangent vertex lies on the target
    /// line and the map is constant).
    General,
}

/// One geometric step: from a boundary point, along the left tangent of the
/// inner polygon, to the exit point on the outer boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayStep {
    pub start: Point2,
    pub tangent_vertex: usize,
    pub tie: bool,
    /// Landing edge and parameter; a landing vertex is reported as the start
    /// of the following edge, so `mu < 1`.
    pub target_edge: usize,
    pub mu: Rational,
    /// Edges advanced from the source edge, in `1..n`.
    pub offset: usize,
    pub end: Point2,
}

/// Traces the supporting segment that starts at parameter `lambda` on edge
/// `edge` of `p` and keeps `s` on its left.
pub fn trace_ray(p: &Polygon2D, s: &Polygon2D, edge: usize, lambda: &Rational) -> Result<RayStep> {
    let n = p.len();
    let edge = edge % n;
    let u = p.point_at(edge, lambda);
    let tangent = s.left_tangent_vertex(&u)?;
    let dir = s.vertex(tangent.index).sub(&u);
    // leave P at the first outward crossing of an edge line
    let mut exit: Option<Rational> = None;
    for j in 0..n {
        let (pj, qj) = p.edge(j);
        let e = qj.sub(pj);
        let rate = e.cross(&dir);
        if !rate.is_negative() {
            continue;
        }
        let slack = e.cross(&u.sub(pj));
        let t = slack / -rate;
        if exit.as_ref().is_none_or(|best| t < *best) {
            exit = Some(t);
        }
    }
    let t = exit.ok_or_else(|| Error::Degenerate("supporting ray never leaves the outer polygon".into()))?;
    let end = u.add(&dir.scale(&t));
    let (target_edge, mu) = (0..n)
        .find_map(|j| {
            let mu = p.convex_representation(j, &end).ok()?;
            (mu < Rational::one()).then_some((j, mu))
        })
        .ok_or_else(|| Error::Degenerate("exit point is not on the outer boundary".into()))?;
    let offset = (target_edge + n - edge) % n;
    if offset == 0 {
        return Err(Error::Degenerate(format!(
            "supporting ray from edge {edge} lands on its own edge"
        )));
    }
    Ok(RayStep {
        start: u,
        tangent_vertex: tangent.index,
        tie: tangent.tie,
        target_edge,
        mu,
        offset,
        end,
    })
}

/// The linear fractional map sending the source parameter of a supporting
/// segment to its landing parameter, valid while the tangent vertex and the
/// landing edge stay fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayFunction {
    pub coeffs: Mobius,
    pub source_edge: usize,
    pub target_edge: usize,
    pub tangent_vertex: usize,
    pub offset: usize,
    pub formula: RayFormula,
}

impl RayFunction {
    pub fn apply(&self, lambda: &Rational) -> Option<Rational> {
        self.coeffs.apply(lambda)
    }
}

/// Builds the ray function through the supporting segment at `lambda` on
/// edge `edge`.
pub fn build_ray(p: &Polygon2D, s: &Polygon2D, edge: usize, lambda: &Rational) -> Result<RayFunction> {
    let n = p.len();
    let edge = edge % n;
    let step = trace_ray(p, s, edge, lambda)?;
    let (p1, p1b) = p.edge(edge);
    let (p2, p2b) = p.edge(step.target_edge);
    let s1 = s.vertex(step.tangent_vertex);

    let mut candidates = Vec::new();
    if let Some(m) = similar_triangles_form(p1, p1b, p2, p2b, s1) {
        candidates.push(m);
    }
    candidates.push((general_form(p1, p1b, p2, p2b, s1), RayFormula::General));

    for (coeffs, formula) in candidates {
        if coeffs.apply(lambda).as_ref() != Some(&step.mu) {
            continue;
        }
        // a rank-one matrix is a constant map; store it in a form with a
        // denominator that never vanishes
        let coeffs = if coeffs.is_singular() {
            Mobius::constant(step.mu.clone())
        } else {
            coeffs
        };
        return Ok(RayFunction {
            coeffs,
            source_edge: edge,
            target_edge: step.target_edge,
            tangent_vertex: step.tangent_vertex,
            offset: step.offset,
            formula,
        });
    }
    Err(Error::Degenerate(format!(
        "no linear fractional form reproduces the ray from edge {edge} at {lambda}"
    )))
}

fn similar_triangles_form(
    p1: &Point2,
    p1b: &Point2,
    p2: &Point2,
    p2b: &Point2,
    s1: &Point2,
) -> Option<(Mobius, RayFormula)> {
    let d1 = p1b.sub(p1);
    let d2 = p2b.sub(p2);
    if d1.cross(&d2).is_zero() {
        return parallel_form(p1, p1b, p2, p2b, s1).map(|m| (m, RayFormula::Parallel));
    }
    if let Some(m) = intersecting_form(p1, p1b, p2, p2b, s1) {
        return Some((m, RayFormula::Intersecting));
    }
    let reversed = intersecting_form(p1b, p1, p2b, p2, s1)?;
    let j = Mobius::reflection();
    Some((j.compose(&reversed).compose(&j), RayFormula::IntersectingReversed))
}

/// `lambda2 = d/(1-b) lambda1 - b d/(1-b)` where `t = (1-b) p1 + b p1'` lies
/// on line `s1 p2` and `t' = (1-d) p2 + d p2'` lies on line `s1 p1'`.
fn parallel_form(p1: &Point2, p1b: &Point2, p2: &Point2, p2b: &Point2, s1: &Point2) -> Option<Mobius> {
    let d1 = p1b.sub(p1);
    let d2 = p2b.sub(p2);
    let to_p2 = p2.sub(s1);
    let b = (-p1.sub(s1).cross(&to_p2)).checked_div(&d1.cross(&to_p2)).ok()?;
    let to_p1b = p1b.sub(s1);
    let d = (-p2.sub(s1).cross(&to_p1b)).checked_div(&d2.cross(&to_p1b)).ok()?;
    let one_minus_b = Rational::one() - &b;
    if one_minus_b.is_zero() {
        return None;
    }
    Some(Mobius::new(d.clone(), -(b * &d), Rational::zero(), one_minus_b))
}

/// With `t` the intersection of the edge lines, `p1' = (1-a) p1 + a t`,
/// `p2 = (1-b) t + b p2'`, and `s1 - t = c (p1 - t) + d (p2' - t)`:
/// `lambda2 = (a(b-d) lambda1 + b(c-1) + d) / (a(b-1) lambda1 + (b-1)(c-1))`.
fn intersecting_form(p1: &Point2, p1b: &Point2, p2: &Point2, p2b: &Point2, s1: &Point2) -> Option<Mobius> {
    let d1 = p1b.sub(p1);
    let d2 = p2b.sub(p2);
    let den = d1.cross(&d2);
    let alpha = p2.sub(p1).cross(&d2).checked_div(&den).ok()?;
    let t = p1.add(&d1.scale(&alpha));
    if &t == p1 || &t == p2b {
        return None;
    }
    let a = alpha.inv().ok()?;
    let beta = p1.sub(p2).cross(&d1).checked_div(&d2.cross(&d1)).ok()?;
    let b = (-beta.clone()).checked_div(&(Rational::one() - beta)).ok()?;
    let u1 = p1.sub(&t);
    let u2 = p2b.sub(&t);
    let w = s1.sub(&t);
    let basis = u1.cross(&u2);
    let c = w.cross(&u2).checked_div(&basis).ok()?;
    let d = u1.cross(&w).checked_div(&basis).ok()?;
    let one = Rational::one();
    let m = Mobius::new(
        &a * &(&b - &d),
        &b * &(&c - &one) + &d,
        &a * &(&b - &one),
        (&b - &one) * (&c - &one),
    );
    (!m.c.is_zero() || !m.d.is_zero()).then_some(m)
}

/// Direct solution of `cross(u - s1, v - s1) = 0` with `u = p1 + lambda1 D`
/// and `v = p2 + lambda2 B`.
fn general_form(p1: &Point2, p1b: &Point2, p2: &Point2, p2b: &Point2, s1: &Point2) -> Mobius {
    let a = p2.sub(s1);
    let b = p2b.sub(p2);
    let c = p1.sub(s1);
    let d = p1b.sub(p1);
    Mobius::new(-a.cross(&d), -a.cross(&c), b.cross(&d), b.cross(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &str, y: &str) -> Point2 {
        Point2::new(x.parse().unwrap(), y.parse().unwrap())
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn xy_face() -> (Polygon2D, Polygon2D) {
        let outer = Polygon2D::new(vec![p("0", "0"), p("1", "0"), p("1", "1/2"), p("0", "1")]).unwrap();
        let inner = Polygon2D::from_points(&[p("3/4", "1/8"), p("3/4", "1/2"), p("3/11", "17/22")]).unwrap();
        (outer, inner)
    }

    #[test]
    fn xy_face_first_ray() {
        let (outer, inner) = xy_face();
        let ray = build_ray(&outer, &inner, 0, &r("3/5")).unwrap();
        assert_eq!(inner.vertex(ray.tangent_vertex), &p("3/4", "1/8"));
        assert_eq!(ray.target_edge, 1);
        assert_eq!(ray.formula, RayFormula::Intersecting);
        // (3/5,0) -> (3/4,1/8) reaches x = 1 at y = 1/3, i.e. 2/3 up the edge
        assert_eq!(ray.apply(&r("3/5")).unwrap(), r("2/3"));
    }

    #[test]
    fn xy_face_chain_wraps() {
        let (outer, inner) = xy_face();
        let mut edge = 0;
        let mut lambda = r("59/100");
        let mut tangents = Vec::new();
        for _ in 0..3 {
            let step = trace_ray(&outer, &inner, edge, &lambda).unwrap();
            tangents.push(inner.vertex(step.tangent_vertex).clone());
            edge = step.target_edge;
            lambda = step.mu;
        }
        assert_eq!(tangents, vec![p("3/4", "1/8"), p("3/4", "1/2"), p("3/11", "17/22")]);
        assert_eq!(edge, 0);
    }

    #[test]
    fn parallel_square() {
        let outer = Polygon2D::new(vec![p("0", "0"), p("1", "0"), p("1", "1"), p("0", "1")]).unwrap();
        let inner = Polygon2D::new(vec![p("1/4", "1/4"), p("3/4", "1/4"), p("3/4", "3/4"), p("1/4", "3/4")]).unwrap();
        // t = (2/3, 0) gives b = 2/3 and t' = (0, 1) gives d = 1
        let ray = build_ray(&outer, &inner, 0, &r("7/10")).unwrap();
        assert_eq!(ray.formula, RayFormula::Parallel);
        assert_eq!(ray.target_edge, 2);
        assert!(ray.coeffs.proportional(&Mobius::from_ints(3, -2, 0, 1)));
        assert_eq!(ray.apply(&r("7/10")).unwrap(), r("1/10"));
    }

    #[test]
    fn reversed_configuration_in_triangle() {
        let outer = Polygon2D::new(vec![p("0", "0"), p("4", "0"), p("0", "4")]).unwrap();
        let inner = Polygon2D::new(vec![p("1", "1"), p("2", "1"), p("1", "2")]).unwrap();
        let ray = build_ray(&outer, &inner, 0, &r("7/8")).unwrap();
        assert_eq!(ray.target_edge, 2);
        assert_eq!(ray.formula, RayFormula::IntersectingReversed);
        let step = trace_ray(&outer, &inner, 0, &r("7/8")).unwrap();
        assert_eq!(step.mu, r("3/10"));
        assert_eq!(ray.apply(&r("7/8")).unwrap(), step.mu);
        let g = general_form(outer.vertex(0), outer.vertex(1), outer.vertex(2), outer.vertex(3), inner.vertex(ray.tangent_vertex));
        assert!(ray.coeffs.proportional(&g));
    }

    #[test]
    fn tangent_vertex_on_target_edge_gives_constant() {
        let outer = Polygon2D::new(vec![p("0", "0"), p("2", "0"), p("2", "2"), p("0", "2")]).unwrap();
        let inner = Polygon2D::new(vec![p("1", "1"), p("2", "1"), p("1", "3/2")]).unwrap();
        let ray = build_ray(&outer, &inner, 0, &r("1/4")).unwrap();
        assert_eq!(ray.target_edge, 1);
        assert_eq!(ray.apply(&r("1/4")).unwrap(), r("1/2"));
        assert_eq!(ray.apply(&r("1/3")).unwrap(), r("1/2"));
    }
}
