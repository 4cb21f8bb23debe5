use std::ops::ControlFlow;

use crate::exact::{Field, Rational};
use crate::geometry::{Point2, Polygon2D};
use crate::{Error, Result};

use super::ray::{build_ray, RayFunction};
use super::Mobius;

/// Product of the ray matrices, last ray leftmost.
pub fn compose_chain(rays: &[RayFunction]) -> Result<Mobius> {
    for (i, pair) in rays.windows(2).enumerate() {
        if pair[0].target_edge != pair[1].source_edge {
            return Err(Error::IncompatibleChain(i + 1));
        }
    }
    Ok(rays
        .iter()
        .fold(Mobius::identity(), |acc, r| r.coeffs.compose(&acc)))
}

/// A fixed sequence of ray functions valid for every start parameter in
/// `interval` on `start_edge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackChain {
    pub start_edge: usize,
    pub rays: Vec<RayFunction>,
    pub interval: (Rational, Rational),
    pub composed: Mobius,
    /// Sum of the rays' edge offsets.
    pub total_offset: usize,
}

impl SlackChain {
    fn root(start_edge: usize) -> Self {
        SlackChain {
            start_edge,
            rays: Vec::new(),
            interval: (Rational::zero(), Rational::one()),
            composed: Mobius::identity(),
            total_offset: 0,
        }
    }

    /// Edge the chain currently ends on.
    pub fn end_edge(&self, n: usize) -> usize {
        (self.start_edge + self.total_offset) % n
    }

    /// The map `lambda -> lambda + s(lambda)`: the end parameter measured on
    /// the start edge one lap later, so the chain closes at `lambda` iff the
    /// map's value is at least `lambda`.
    pub fn slack_matrix(&self, n: usize) -> Mobius {
        let shift = self.total_offset as i64 - n as i64;
        Mobius::translation(Rational::from_int(shift)).compose(&self.composed)
    }

    /// `s(lambda)` for a chain around an `n`-gon.
    pub fn slack<F: Field>(&self, n: usize, lambda: &F) -> Option<F> {
        Some(self.slack_matrix(n).apply(lambda)? - lambda.clone())
    }

    pub fn contains(&self, lambda: &Rational) -> bool {
        &self.interval.0 <= lambda && lambda <= &self.interval.1
    }
}

/// A rational `lambda` in the chain's interval with `s(lambda) >= 0`.
///
/// With slack matrix `((a, b), (c, d))`, `s(lambda) = q(lambda) / (c lambda
/// + d)` for `q(lambda) = -c lambda^2 + (a - d) lambda + b`. The denominator
/// keeps one sign on the interval, so the question is whether `q` times
/// that sign reaches zero; a quadratic attains its maximum over a closed
/// interval at an endpoint or at its stationary point `(a - d) / (2c)`.
pub fn slack_feasible(chain: &SlackChain, n: usize) -> Option<Rational> {
    let m = chain.slack_matrix(n);
    let (lo, hi) = &chain.interval;
    let mut candidates = vec![lo.clone(), hi.clone()];
    if !m.c.is_zero() {
        let vertex = (&m.a - &m.d) / (Rational::from_int(2) * &m.c);
        if lo < &vertex && &vertex < hi {
            candidates.push(vertex);
        }
    }
    let [q2, q1, q0] = m.fixed_point_quadratic();
    candidates.into_iter().find(|x| {
        let sign = m.denominator_sign(x);
        if sign == 0 {
            return false;
        }
        let q = &q2 * x * x + &q1 * x + &q0;
        q.signum() * sign >= 0
    })
}

/// Parameters on edge `edge` where the chain of rays can change: crossings
/// of the lines through edges of `s` (tangent vertex switches) and of lines
/// through a vertex of `s` and a vertex of `p` (landing edge switches).
/// Always contains 0 and 1; sorted and deduplicated.
pub fn local_breakpoints(p: &Polygon2D, s: &Polygon2D, edge: usize) -> Vec<Rational> {
    let (e0, e1) = p.edge(edge);
    let dir = e1.sub(e0);
    let mut out = vec![Rational::zero(), Rational::one()];
    let mut cut = |a: &Point2, b: &Point2| {
        // cross(b - a, e0 + x dir - a) = 0
        let ab = b.sub(a);
        let slope = ab.cross(&dir);
        if slope.is_zero() {
            return;
        }
        let x = -ab.cross(&e0.sub(a)) / slope;
        if !x.is_negative() && x <= Rational::one() {
            out.push(x);
        }
    };
    for i in 0..s.len() {
        cut(s.vertex(i), s.vertex(i + 1));
    }
    for sv in s.vertices() {
        for pv in p.vertices() {
            if sv != pv {
                cut(sv, pv);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Breakpoints of the full chain started on `edge`, followed until it has
/// advanced at least once around `p`.
pub fn edge_breakpoints(p: &Polygon2D, s: &Polygon2D, edge: usize) -> Result<Vec<Rational>> {
    let n = p.len();
    let locals: Vec<Vec<Rational>> = (0..n).map(|e| local_breakpoints(p, s, e)).collect();
    let mut out = vec![Rational::zero(), Rational::one()];
    visit_chains(p, s, &locals, edge, n + 1, &mut |chain| {
        out.push(chain.interval.0.clone());
        out.push(chain.interval.1.clone());
        if chain.total_offset >= n {
            ControlFlow::Break(Prune)
        } else {
            ControlFlow::Continue(())
        }
    })?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Returned by a chain visitor to stop descending below the current node.
pub(crate) struct Prune;

/// Depth-first enumeration of the chains starting on `edge`, refining the
/// start interval so every node carries a single ray sequence. The visitor
/// sees each node after its last ray is added; `Break(Prune)` skips the
/// node's subtree. Recursion stops at `max_depth` rays.
pub(crate) fn visit_chains(
    p: &Polygon2D,
    s: &Polygon2D,
    locals: &[Vec<Rational>],
    edge: usize,
    max_depth: usize,
    visit: &mut dyn FnMut(&SlackChain) -> ControlFlow<Prune>,
) -> Result<()> {
    descend(p, s, locals, SlackChain::root(edge), max_depth, visit).map(|_| ())
}

/// Like [`visit_chains`], with a visitor that can abort the whole search.
pub(crate) fn search_chains<T>(
    p: &Polygon2D,
    s: &Polygon2D,
    locals: &[Vec<Rational>],
    edge: usize,
    max_depth: usize,
    visit: &mut dyn FnMut(&SlackChain) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let mut found = None;
    let mut failure = None;
    visit_chains(p, s, locals, edge, max_depth, &mut |chain| {
        if found.is_some() || failure.is_some() {
            return ControlFlow::Break(Prune);
        }
        match visit(chain) {
            Ok(Some(t)) => {
                found = Some(t);
                ControlFlow::Break(Prune)
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(Prune)
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

fn descend(
    p: &Polygon2D,
    s: &Polygon2D,
    locals: &[Vec<Rational>],
    chain: SlackChain,
    depth_left: usize,
    visit: &mut dyn FnMut(&SlackChain) -> ControlFlow<Prune>,
) -> Result<()> {
    if !chain.rays.is_empty() && visit(&chain).is_break() {
        return Ok(());
    }
    if depth_left == 0 {
        return Ok(());
    }
    let n = p.len();
    let edge = chain.end_edge(n);
    let (lo, hi) = chain.interval.clone();
    let eval = |x: &Rational| {
        chain
            .composed
            .apply(x)
            .ok_or_else(|| Error::Degenerate("ray chain has a pole inside its interval".into()))
    };
    let (x_lo, x_hi) = (eval(&lo)?, eval(&hi)?);
    if x_lo > x_hi {
        return Err(Error::Degenerate("ray chain is not monotone".into()));
    }
    // pieces of the image interval between the current edge's breakpoints
    let mut xs = vec![x_lo.clone()];
    xs.extend(locals[edge].iter().filter(|x| &x_lo < *x && *x < &x_hi).cloned());
    xs.push(x_hi.clone());
    let pieces: Vec<(Rational, Rational)> = if x_lo == x_hi {
        vec![(x_lo.clone(), x_hi.clone())]
    } else {
        xs.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
    };
    let midpoint = |(a, b): &(Rational, Rational)| (a + b) / Rational::from_int(2);
    // each ray skips ahead to the first breakpoint on its own tangent and
    // landing lines; the skip is confirmed on the last piece it covers
    let mut merged: Vec<(Rational, RayFunction)> = Vec::new();
    let mut i = 0;
    while i < pieces.len() {
        let ray = build_ray(p, s, edge, &midpoint(&pieces[i]))?;
        let mut j = i;
        if let Some(reach) = ray_reach(p, s, edge, &ray, &pieces[i].1) {
            while j + 1 < pieces.len() && pieces[j + 1].1 <= reach {
                j += 1;
            }
        } else {
            j = pieces.len() - 1;
        }
        if j > i && !same_ray(&ray, &build_ray(p, s, edge, &midpoint(&pieces[j]))?) {
            j = i;
        }
        let end = pieces[j].1.clone();
        match merged.last_mut() {
            Some(last) if same_ray(&last.1, &ray) => last.0 = end,
            _ => merged.push((end, ray)),
        }
        i = j + 1;
    }
    // pull the piece ends back to the start edge
    let inv = chain.composed.inverse();
    let count = merged.len();
    let mut a = lo.clone();
    for (k, (x_end, ray)) in merged.into_iter().enumerate() {
        let b = if k + 1 == count {
            hi.clone()
        } else {
            inv.apply(&x_end)
                .ok_or_else(|| Error::Degenerate("ray chain inverse has a pole".into()))?
        };
        let mut rays = chain.rays.clone();
        let composed = ray.coeffs.compose(&chain.composed);
        let total_offset = chain.total_offset + ray.offset;
        rays.push(ray);
        let child = SlackChain {
            start_edge: chain.start_edge,
            rays,
            interval: (a, b.clone()),
            composed,
            total_offset,
        };
        descend(p, s, locals, child, depth_left - 1, visit)?;
        a = b;
    }
    Ok(())
}

/// First parameter at or after `from` on `edge` where `ray` can stop being
/// valid: a crossing of the lines from its tangent vertex to the adjacent
/// inner vertices or to the ends of its landing edge.
fn ray_reach(p: &Polygon2D, s: &Polygon2D, edge: usize, ray: &RayFunction, from: &Rational) -> Option<Rational> {
    let (e0, e1) = p.edge(edge);
    let dir = e1.sub(e0);
    let t = s.vertex(ray.tangent_vertex);
    let (l0, l1) = p.edge(ray.target_edge);
    let others = [
        s.vertex(ray.tangent_vertex + s.len() - 1),
        s.vertex(ray.tangent_vertex + 1),
        l0,
        l1,
    ];
    others
        .into_iter()
        .filter(|o| *o != t)
        .filter_map(|o| {
            let ab = o.sub(t);
            let slope = ab.cross(&dir);
            if slope.is_zero() {
                return None;
            }
            let x = -ab.cross(&e0.sub(t)) / slope;
            (&x >= from).then_some(x)
        })
        .min()
}

fn same_ray(a: &RayFunction, b: &RayFunction) -> bool {
    a.target_edge == b.target_edge
        && a.tangent_vertex == b.tangent_vertex
        && a.offset == b.offset
        && a.coeffs.proportional(&b.coeffs)
}

/// Unwrapped boundary position `edge + lambda` of a traced sequence of
/// supporting segments.
#[derive(Debug, Clone)]
pub struct Trace {
    /// Start points of the segments, in order.
    pub points: Vec<Point2>,
    pub end_edge: usize,
    pub end_lambda: Rational,
    /// Total edges advanced.
    pub advanced: usize,
    pub tie: bool,
}

/// Follows supporting segments from `lambda` on `edge` until the boundary
/// position has advanced by at least one full lap, or `max_steps` segments
/// have been used. Returns the trace and whether it closed.
pub fn trace_until_closed(
    p: &Polygon2D,
    s: &Polygon2D,
    edge: usize,
    lambda: &Rational,
    max_steps: usize,
) -> Result<(Trace, bool)> {
    let n = p.len();
    let start = lambda.clone();
    let mut trace = Trace {
        points: Vec::new(),
        end_edge: edge % n,
        end_lambda: lambda.clone(),
        advanced: 0,
        tie: false,
    };
    let closed = |t: &Trace| {
        let lap = t.advanced as i64 - n as i64;
        Rational::from_int(lap) + &t.end_lambda >= start
    };
    while trace.points.len() < max_steps {
        let step = super::ray::trace_ray(p, s, trace.end_edge, &trace.end_lambda)?;
        trace.points.push(step.start);
        trace.tie |= step.tie;
        trace.advanced += step.offset;
        trace.end_edge = step.target_edge;
        trace.end_lambda = step.mu;
        if closed(&trace) {
            return Ok((trace, true));
        }
    }
    Ok((trace, false))
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

    fn chain_at(p: &Polygon2D, s: &Polygon2D, edge: usize, lambda: &Rational, len: usize) -> Vec<RayFunction> {
        let mut rays = Vec::new();
        let mut e = edge;
        let mut x = lambda.clone();
        for _ in 0..len {
            let ray = build_ray(p, s, e, &x).unwrap();
            x = ray.apply(&x).unwrap();
            e = ray.target_edge;
            rays.push(ray);
        }
        rays
    }

    #[test]
    fn irrational_face_composition() {
        let (outer, inner) = xy_face();
        let rays = chain_at(&outer, &inner, 0, &r("59/100"), 3);
        let offsets: Vec<usize> = rays.iter().map(|r| r.offset).collect();
        assert_eq!(offsets, vec![1, 1, 2]);
        let m = compose_chain(&rays).unwrap();
        assert!(m.proportional(&Mobius::from_ints(52, -30, 15, -8)), "{m:?}");
    }

    #[test]
    fn empty_chain_is_identity() {
        assert_eq!(compose_chain(&[]).unwrap(), Mobius::identity());
    }

    #[test]
    fn incompatible_chain_rejected() {
        let (outer, inner) = xy_face();
        let rays = chain_at(&outer, &inner, 0, &r("3/5"), 2);
        let swapped = vec![rays[1].clone(), rays[0].clone()];
        assert_eq!(compose_chain(&swapped), Err(Error::IncompatibleChain(1)));
    }

    #[test]
    fn witness_in_root_piece() {
        let (outer, inner) = xy_face();
        let rays = chain_at(&outer, &inner, 0, &r("59/100"), 3);
        let chain = SlackChain {
            start_edge: 0,
            composed: compose_chain(&rays).unwrap(),
            total_offset: 4,
            rays,
            interval: (r("15/26"), r("13/22")),
        };
        assert!(chain.slack(4, &r("15/26")).unwrap().is_negative());
        assert!(chain.slack(4, &r("59/100")).unwrap().is_positive());
        let w = slack_feasible(&chain, 4).unwrap();
        assert!(!chain.slack(4, &w).unwrap().is_negative());
    }

    #[test]
    fn vertex_landing_chain_at_three_fifths() {
        let (outer, inner) = xy_face();
        let rays = chain_at(&outer, &inner, 0, &r("3/5"), 3);
        let offsets: Vec<usize> = rays.iter().map(|r| r.offset).collect();
        assert_eq!(offsets, vec![1, 2, 1]);
        let chain = SlackChain {
            start_edge: 0,
            composed: compose_chain(&rays).unwrap(),
            total_offset: 4,
            rays,
            interval: (r("3/5"), r("3/5")),
        };
        // the second segment ends at the corner (0, 1), the third lands at 6/7
        assert_eq!(chain.slack(4, &r("3/5")).unwrap(), r("9/35"));
        assert_eq!(slack_feasible(&chain, 4), Some(r("3/5")));
    }

    #[test]
    fn no_witness_left_of_root() {
        let (outer, inner) = xy_face();
        let rays = chain_at(&outer, &inner, 0, &r("29/50"), 3);
        let chain = SlackChain {
            start_edge: 0,
            composed: compose_chain(&rays).unwrap(),
            total_offset: rays.iter().map(|r| r.offset).sum(),
            rays,
            interval: (r("15/26"), r("29/50")),
        };
        assert!(chain.slack(4, &r("29/50")).unwrap().is_negative());
        assert_eq!(slack_feasible(&chain, 4), None);
    }

    #[test]
    fn affine_slack_uses_endpoint() {
        let chain = SlackChain {
            start_edge: 0,
            rays: Vec::new(),
            interval: (r("0"), r("1")),
            composed: Mobius::from_ints(1, 3, 0, 2),
            total_offset: 4,
        };
        // s(x) = (x + 3)/2 - x is positive at 0
        assert_eq!(slack_feasible(&chain, 4), Some(r("0")));
    }

    #[test]
    fn breakpoints_separate_root_neighbourhood() {
        let (outer, inner) = xy_face();
        let bps = edge_breakpoints(&outer, &inner, 0).unwrap();
        let pos = |x: &Rational| bps.iter().filter(|b| *b < x).count();
        assert_eq!(pos(&r("29/50")), pos(&r("59/100")));
        assert!(bps.contains(&r("15/26")) && bps.contains(&r("13/22")));
        // 15/26 and 13/22 are consecutive, so the root lies in one piece
        assert_eq!(pos(&r("13/22")), pos(&r("15/26")) + 1);
    }
}
