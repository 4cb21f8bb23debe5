//! Subcommands of the `rnmf` binary as plain functions from input text to
//! output text, so that they can be tested without spawning a process.

pub mod svg;

use std::fmt::Write as _;

use rnmf_core::exact::Rational;
use rnmf_core::geometry::{Point2, Polygon2D};
use rnmf_core::lmc::check_cover;
use rnmf_core::npp2d::{minimal_nested_polygon, minimality_certificate, NestedSolution};
use rnmf_core::reductions::{npp_to_rnmf, reduce_matrix, rnmf_rank3, NppInstance};
use rnmf_core::report::Report;
use rnmf_core::text::{
    is_quadratic_matrix, parse_lmc, parse_matrix, parse_npp, parse_solution, render_factorization, render_matrix,
    render_npp, render_solution,
};
use rnmf_core::{verify, Error, QuadraticNumber, Result};

/// Text to print, plus the report whose verdict sets the exit code.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub report: Option<Report>,
}

impl Output {
    fn plain(text: String) -> Self {
        Output { text, report: None }
    }

    /// Whether the command succeeded: no report or a passing one.
    pub fn success(&self) -> bool {
        self.report.as_ref().is_none_or(Report::overall)
    }
}

/// Rank and a set of independent columns of a rational or Q(sqrt2) matrix.
pub fn cmd_rank(matrix: &str) -> Result<Output> {
    let (rank, cols) = if is_quadratic_matrix(matrix) {
        let m = parse_matrix::<QuadraticNumber>(matrix)?;
        (m.rank(), m.independent_columns())
    } else {
        let m = parse_matrix::<Rational>(matrix)?;
        (m.rank(), m.independent_columns())
    };
    let cols: Vec<String> = cols.iter().map(ToString::to_string).collect();
    Ok(Output::plain(format!("rank {rank}\nindependent columns {}\n", cols.join(" "))))
}

/// Minimal rational restricted NMF of a matrix of rank at most 3.
pub fn cmd_rnmf3(matrix: &str) -> Result<Output> {
    let m = parse_matrix::<Rational>(matrix)?;
    let out = rnmf_rank3(&m)?;
    let f = &out.factorization;
    let mut report = Report::new("restricted NMF");
    let product = f.product()?;
    report.check("M = W H", "equal", if product == m { "equal" } else { "differ" }, product == m);
    let rw = f.w.rank();
    report.check("rank W = rank M", out.rank, rw, rw == out.rank);
    if let Some(sol) = &out.solution {
        let p = reduce_matrix(&m)?;
        let outer = Polygon2D::from_halfplanes(&p.instance.outer)?;
        let inner = inner_polygon(&p.instance)?;
        let minimal = minimality_certificate(&outer, &inner, sol.k)?;
        report.check(
            format!("no nested polygon with {} vertices", sol.k - 1),
            "none",
            if minimal { "none" } else { "found" },
            minimal,
        );
    }
    let text = format!("d {}\n{}", out.d(), render_factorization(f));
    Ok(Output {
        text,
        report: Some(report),
    })
}

fn inner_polygon(inst: &NppInstance<Rational>) -> Result<Polygon2D> {
    let pts = inst
        .inner
        .points()
        .iter()
        .map(|p| Point2::from_slice(p))
        .collect::<Result<Vec<_>>>()?;
    Polygon2D::from_points(&pts)
}

/// The outer and inner polygons of a planar instance.
pub fn planar_instance(npp: &str) -> Result<(Polygon2D, Polygon2D)> {
    let inst = parse_npp::<Rational>(npp)?;
    if inst.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a planar instance, got dimension {}", inst.dim())));
    }
    Ok((Polygon2D::from_halfplanes(&inst.outer)?, inner_polygon(&inst)?))
}

/// Minimum-vertex nested polygon, with an SVG picture when asked for.
pub fn cmd_npp2d(npp: &str, want_svg: bool) -> Result<(Output, NestedSolution, Option<String>)> {
    let (outer, inner) = planar_instance(npp)?;
    let sol = minimal_nested_polygon(&outer, &inner)?;
    let mut report = Report::new("nested polygon");
    let minimal = minimality_certificate(&outer, &inner, sol.k)?;
    report.check(
        format!("no nested polygon with {} vertices", sol.k - 1),
        "none",
        if minimal { "none" } else { "found" },
        minimal,
    );
    let mut text = render_solution(&sol.vertices);
    let _ = writeln!(text, "# greedy bound {}", sol.greedy_bound);
    if sol.tie_rule_used {
        text.push_str("# tangent tie rule used\n");
    }
    let svg = want_svg.then(|| svg::render_svg(&outer, &inner, Some(&sol.vertices)));
    Ok((
        Output {
            text,
            report: Some(report),
        },
        sol,
        svg,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToNpp,
    ToMatrix,
}

/// A matrix to its nested polytope instance or back.
pub fn cmd_reduce(direction: Direction, input: &str) -> Result<Output> {
    let text = match direction {
        Direction::ToNpp => render_npp(&reduce_matrix(&parse_matrix::<Rational>(input)?)?.instance),
        Direction::ToMatrix => render_matrix(&npp_to_rnmf(&parse_npp::<Rational>(input)?)?),
    };
    Ok(Output::plain(text))
}

/// Checks a covering witness between two chains.
pub fn cmd_lmc_check(gadget: &str, covering: &str, witness: &str) -> Result<Output> {
    let g = parse_lmc(gadget)?;
    let c = parse_lmc(covering)?;
    let a = parse_matrix::<Rational>(witness)?;
    let covers = check_cover(&g, &c, &a)?;
    let mut report = Report::new("covering witness");
    report.check(
        "witness row-stochastic and every state trace equivalent",
        "covers",
        if covers { "covers" } else { "does not cover" },
        covers,
    );
    Ok(Output {
        text: String::new(),
        report: Some(report),
    })
}

pub fn cmd_verify_paz() -> Output {
    Output {
        text: String::new(),
        report: Some(verify::verify_paz()),
    }
}

pub fn cmd_verify_irrational() -> Output {
    Output {
        text: String::new(),
        report: Some(verify::verify_irrational()),
    }
}

/// SVG of a planar instance, with a nested polygon if one is given.
pub fn cmd_plot(npp: &str, solution: Option<&str>) -> Result<String> {
    let (outer, inner) = planar_instance(npp)?;
    let nested = solution.map(parse_solution).transpose()?;
    Ok(svg::render_svg(&outer, &inner, nested.as_deref()))
}
