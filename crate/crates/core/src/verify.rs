//! End-to-end exact verification of the irrationality instance and of the
//! cube-based covering counterexample.
//!
//! Each driver has a `_with` form taking the data, so that perturbed inputs
//! can be run as negative controls.

use crate::data;
use crate::exact::{Field, QuadraticNumber, Rational};
use crate::geometry::{vpoly_contains, Polygon2D, VPolytope};
use crate::linalg::{column_stochastic_normalize, FieldMatrix};
use crate::lmc::{check_cover, cover_witness, covering_lmc, gadget_lmc, lmc_rank};
use crate::npp2d::{chain_from, edge_breakpoints, Mobius};
use crate::reductions::{factorization_to_points, npp_to_rnmf, NppInstance};
use crate::report::Report;

/// Inputs of [`verify_irrational_with`].
#[derive(Debug, Clone)]
pub struct IrrationalData {
    pub npp: NppInstance<Rational>,
    pub m: FieldMatrix<Rational>,
    pub w: FieldMatrix<QuadraticNumber>,
    pub h: FieldMatrix<QuadraticNumber>,
}

impl IrrationalData {
    pub fn embedded() -> Self {
        IrrationalData {
            npp: data::irrational_npp(),
            m: data::irrational_matrix(),
            w: data::irrational_w(),
            h: data::irrational_h(),
        }
    }
}

pub fn verify_irrational() -> Report {
    verify_irrational_with(&IrrationalData::embedded())
}

/// A face of the instance: outer and inner polygons and the expected slack
/// matrix of the triangle through `2 - sqrt2` on edge 0.
struct Face {
    name: &'static str,
    outer: Polygon2D,
    inner: Polygon2D,
    expected: Mobius,
}

fn faces() -> [Face; 2] {
    [
        Face {
            name: "xy",
            outer: data::xy_face_outer(),
            inner: data::xy_face_inner(),
            expected: Mobius::from_ints(52, -30, 15, -8),
        },
        Face {
            name: "xz",
            outer: data::xz_face_outer(),
            inner: data::xz_face_inner(),
            expected: Mobius::from_ints(23, -80, 40, -137),
        },
    ]
}

/// Rational convergent of `2 - sqrt2` from its continued fraction
/// `[0; 1, 1, 2, 2, 2, ...]`, close enough to share the root's chain piece.
fn root_convergent() -> Rational {
    Rational::new(99, 169)
}

/// Whether no chain breakpoint of `edge` separates `x` from the root.
fn same_piece(outer: &Polygon2D, inner: &Polygon2D, x: &Rational) -> crate::Result<bool> {
    let root = data::irrational_root();
    let xq = QuadraticNumber::embed(x);
    let (lo, hi) = if xq < root { (xq, root) } else { (root, xq) };
    Ok(edge_breakpoints(outer, inner, 0)?.iter().all(|b| {
        let bq = QuadraticNumber::embed(b);
        !(lo <= bq && bq <= hi)
    }))
}

pub fn verify_irrational_with(d: &IrrationalData) -> Report {
    let mut r = Report::new("irrationality instance");
    let mq = d.m.map(QuadraticNumber::embed);
    let m_from_npp = npp_to_rnmf(&d.npp);

    let product = d.w.mul(&d.h);
    let prod_ok = product.as_ref().is_ok_and(|p| p == &mq) && m_from_npp.as_ref().is_ok_and(|m| m == &d.m);
    r.check(
        "M = W H over Q(sqrt2), M from the instance",
        "equal",
        match (&product, &m_from_npp) {
            (Ok(_), Ok(_)) if prod_ok => "equal".to_string(),
            (Ok(_), Ok(_)) => "differ".to_string(),
            (Err(e), _) | (_, Err(e)) => e.to_string(),
        },
        prod_ok,
    );

    let neg_w = d.w.find_negative();
    let neg_h = d.h.find_negative();
    r.check(
        "W and H nonnegative",
        "no negative entry",
        match (neg_w, neg_h) {
            (None, None) => "no negative entry".to_string(),
            (Some(p), _) => format!("W{p:?} negative"),
            (_, Some(p)) => format!("H{p:?} negative"),
        },
        neg_w.is_none() && neg_h.is_none(),
    );

    let (rank_m, rank_w) = (d.m.rank(), d.w.rank());
    r.check(
        "rank M = rank W",
        "4 = 4",
        format!("{rank_m} = {rank_w}"),
        rank_m == 4 && rank_w == 4,
    );

    let inst = d.npp.map(QuadraticNumber::embed);
    let recovered = factorization_to_points(&inst, &d.w, &d.h);
    let expected_q1 = vec![data::irrational_root(), QuadraticNumber::zero(), QuadraticNumber::zero()];
    match &recovered {
        Ok(rec) => {
            let pts = rec.points.points();
            let same = same_points(&rec.points, &data::irrational_points());
            r.check(
                "recovered points, first (2-sqrt2, 0, 0)",
                "(2-sqrt2, 0, 0)",
                format!("({}, {}, {}) of {} points", pts[0][0], pts[0][1], pts[0][2], pts.len()),
                pts[0] == expected_q1 && same,
            );
        }
        Err(e) => {
            r.check("recovered points, first (2-sqrt2, 0, 0)", "(2-sqrt2, 0, 0)", e, false);
        }
    }

    let nesting = recovered.as_ref().map(|rec| {
        let covered = inst
            .inner
            .points()
            .iter()
            .filter(|s| vpoly_contains(&rec.points, s).is_ok_and(|c| c.is_some()))
            .count();
        let inside = rec
            .points
            .points()
            .iter()
            .filter(|q| inst.outer.contains(q).unwrap_or(false))
            .count();
        (covered, inside, rec.points.len())
    });
    match nesting {
        Ok((covered, inside, k)) => r.check(
            "every s_j in conv(q), every q_i in P",
            format!("{} covered, {k} inside", inst.inner.len()),
            format!("{covered} covered, {inside} inside"),
            covered == inst.inner.len() && inside == k,
        ),
        Err(e) => r.check("every s_j in conv(q), every q_i in P", "certificates", e, false),
    };

    let x = root_convergent();
    let mut chains = Vec::new();
    let mut computed = Vec::new();
    let mut all_prop = true;
    for face in faces() {
        let n = face.outer.len();
        let chain = chain_from(&face.outer, &face.inner, 0, &x, 3);
        let piece = same_piece(&face.outer, &face.inner, &x);
        match (chain, piece) {
            (Ok(c), Ok(piece)) => {
                let sm = c.slack_matrix(n);
                all_prop &= piece && sm.proportional(&face.expected);
                computed.push(format!("{} {:?}{}", face.name, sm.normalized(), if piece { "" } else { " (other piece)" }));
                chains.push((face, c));
            }
            (Err(e), _) | (_, Err(e)) => {
                all_prop = false;
                computed.push(format!("{} {e}", face.name));
            }
        }
    }
    r.check(
        "slack matrices of both faces",
        "xy ~ ((52,-30),(15,-8)), xz ~ ((23,-80),(40,-137))",
        computed.join(", "),
        all_prop && chains.len() == 2,
    );

    let root = data::irrational_root();
    let mut values = Vec::new();
    let mut all_zero = chains.len() == 2;
    for (face, c) in &chains {
        let v = c.slack(face.outer.len(), &root);
        all_zero &= v.as_ref().is_some_and(QuadraticNumber::is_zero);
        values.push(format!(
            "{} {}",
            face.name,
            v.map_or_else(|| "pole".to_string(), |v| v.to_string())
        ));
    }
    r.check("slack at 2-sqrt2", "xy 0, xz 0", values.join(", "), all_zero);
    r
}

fn same_points(a: &VPolytope<QuadraticNumber>, b: &VPolytope<QuadraticNumber>) -> bool {
    a.len() == b.len() && a.points().iter().all(|p| b.points().contains(p))
}

pub fn verify_paz() -> Report {
    verify_paz_with(&data::cube_npp())
}

/// The chain of facts refuting rank-preserving state reduction of
/// coverings, on the cube instance `npp`.
pub fn verify_paz_with(npp: &NppInstance<Rational>) -> Report {
    let mut r = Report::new("covering counterexample");
    let m = match npp_to_rnmf(npp) {
        Ok(m) => m,
        Err(e) => {
            r.check("instance matrix", "6x8", e, false);
            return r;
        }
    };
    let rank = m.rank();
    let c1 = r.check("rank of the cube matrix", 4, rank, rank == 4);

    let norm = match column_stochastic_normalize(&m) {
        Ok(n) => n.normalized,
        Err(e) => {
            r.check("column-stochastic normalization", "exists", e, false);
            return r;
        }
    };
    let m_cols = norm.cols();
    let gadget = gadget_lmc(&norm);
    let (g_states, g_rank) = gadget
        .as_ref()
        .map(|g| (g.state_count(), lmc_rank(g)))
        .unwrap_or((0, 0));
    let c2 = r.check(
        "gadget states and rank",
        "10 states, rank 6",
        format!("{g_states} states, rank {g_rank}"),
        g_states == 10 && g_rank == 6 && g_rank == rank + 2,
    );

    let w = FieldMatrix::identity(norm.rows());
    let covering = covering_lmc(&w, &norm);
    let (c_states, c_rank) = covering
        .as_ref()
        .map(|c| (c.state_count(), lmc_rank(c)))
        .unwrap_or((0, 0));
    let c3 = r.check(
        "covering chain from W = I_6",
        "8 states, rank 8",
        format!("{c_states} states, rank {c_rank}"),
        c_states == 8 && c_rank == w.rank() + 2,
    );

    let cover = match (&gadget, &covering, cover_witness(&norm)) {
        (Ok(g), Ok(c), Ok(a)) => check_cover(g, c, &a).map_err(|e| e.to_string()),
        _ => Err("chains or witness unavailable".to_string()),
    };
    let c4 = r.check(
        "covering verified on every basis distribution",
        "covers",
        match &cover {
            Ok(true) => "covers".to_string(),
            Ok(false) => "does not cover".to_string(),
            Err(e) => e.clone(),
        },
        cover == Ok(true),
    );

    let pts = npp.inner.points();
    let extremal = (0..pts.len())
        .filter(|&i| {
            let others: Vec<_> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
            VPolytope::new(others).is_ok_and(|o| vpoly_contains(&o, &pts[i]).is_ok_and(|c| c.is_none()))
        })
        .count();
    let c5 = r.check(
        "inner points extremal, so rrk+ = 8",
        8,
        extremal,
        extremal == 8 && pts.len() == 8,
    );

    let all = c1 && c2 && c3 && c4 && c5;
    r.note(format!(
        "the {}-state gadget is covered by an {c_states}-state chain (checks 3, 4)",
        m_cols + 2
    ));
    r.note(format!(
        "a rank-{g_rank} covering with at most {} states would give rrk+ <= {}",
        m_cols + 1,
        m_cols - 1
    ));
    r.note(format!("but every inner point is extremal, so rrk+ = {extremal} (check 5)"));
    r.check(
        "no equal-rank covering with fewer states exists",
        "contradiction established",
        if all { "contradiction established" } else { "chain incomplete" },
        all,
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irrational_passes() {
        let r = verify_irrational();
        assert_eq!(r.checks.len(), 7);
        assert!(r.overall(), "{r}");
    }

    #[test]
    fn perturbed_w_fails_first_check() {
        let mut d = IrrationalData::embedded();
        let x = d.w.get(2, 1).clone() + QuadraticNumber::embed(&Rational::new(1, 100));
        d.w.set(2, 1, x);
        let r = verify_irrational_with(&d);
        assert!(!r.checks[0].pass);
        assert!(!r.overall());
    }

    #[test]
    fn paz_passes() {
        let r = verify_paz();
        assert_eq!(r.checks.len(), 6);
        assert!(r.overall(), "{r}");
    }

    #[test]
    fn dropped_point_has_seven_extremal() {
        let mut npp = data::cube_npp();
        npp.inner = VPolytope::new(npp.inner.points()[1..].to_vec()).unwrap();
        let r = verify_paz_with(&npp);
        assert_eq!(r.checks[4].computed, "7");
        assert!(!r.overall());
    }

    #[test]
    fn convergent_is_close() {
        let diff = QuadraticNumber::embed(&root_convergent()) - data::irrational_root();
        assert!(diff.abs() < QuadraticNumber::embed(&Rational::new(1, 10000)));
    }
}
