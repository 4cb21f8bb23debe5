//! Rational minimum-vertex nested polygons.
//!
//! A supporting segment starts on the outer boundary, touches the inner
//! polygon on its left, and ends on the outer boundary. Writing boundary
//! points by their convex parameter on an edge, the end parameter is a
//! linear fractional function of the start parameter (a [`RayFunction`])
//! as long as the touching vertex and the landing edge stay fixed. Chains of
//! such maps compose by 2x2 matrix multiplication, and a chain of length `k`
//! closes into a nested `k`-gon exactly where its slack is nonnegative.

mod chain;
mod mobius;
mod ray;
mod solver;

pub use chain::{
    compose_chain, edge_breakpoints, local_breakpoints, slack_feasible, trace_until_closed, SlackChain, Trace,
};
pub use mobius::Mobius;
pub use ray::{build_ray, trace_ray, RayFormula, RayFunction, RayStep};
pub use solver::{minimal_nested_polygon, minimality_certificate, sweep, verify_nesting, NestedSolution, Witness};

use crate::exact::Rational;
use crate::geometry::{Point2, Polygon2D};
use crate::Result;

/// Convex parameter of `point` on `edge`, with the inverse map.
pub fn convex_representation(p: &Polygon2D, edge: usize, point: &Point2) -> Result<Rational> {
    p.convex_representation(edge, point)
}

/// Builds the chain of `length` rays followed from `lambda` on `edge`.
pub fn chain_from(
    p: &Polygon2D,
    s: &Polygon2D,
    edge: usize,
    lambda: &Rational,
    length: usize,
) -> Result<SlackChain> {
    let mut rays = Vec::with_capacity(length);
    let mut e = edge % p.len();
    let mut x = lambda.clone();
    for _ in 0..length {
        let ray = build_ray(p, s, e, &x)?;
        x = ray
            .apply(&x)
            .ok_or_else(|| crate::Error::Degenerate("ray has a pole at its own start".into()))?;
        e = ray.target_edge;
        rays.push(ray);
    }
    let composed = compose_chain(&rays)?;
    let total_offset = rays.iter().map(|r| r.offset).sum();
    Ok(SlackChain {
        start_edge: edge % p.len(),
        rays,
        interval: (lambda.clone(), lambda.clone()),
        composed,
        total_offset,
    })
}
