//! Plain-text formats for matrices, nested polytope instances, labelled
//! Markov chains, nested polygon solutions and factorizations.
//!
//! Blank lines and `#` comments are ignored. Scalars use the rendering of
//! [`crate::exact`]: `p/q` or `p` for rationals and `a+b*sqrt2` for Q(sqrt2).
//! Every renderer's output parses back to an equal value.

use std::fmt::Write as _;

use crate::exact::{Field, Rational};
use crate::geometry::{HPolytope, Point2, VPolytope};
use crate::linalg::FieldMatrix;
use crate::lmc::Lmc;
use crate::reductions::{Factorization, NppInstance};
use crate::{Error, Result};

/// One significant line: its 1-based number and whitespace tokens.
struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn lines(input: &str) -> std::vec::IntoIter<Line<'_>> {
    input
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect::<Vec<_>>()
        .into_iter()
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn next_line<'a>(it: &mut std::vec::IntoIter<Line<'a>>, what: &str, last: usize) -> Result<Line<'a>> {
    it.next().ok_or_else(|| err(last + 1, format!("unexpected end of input, expected {what}")))
}

fn count(line: &Line<'_>, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| err(line.number, format!("expected a count, found {tok:?}")))
}

fn scalar<F: Field>(line: &Line<'_>, tok: &str) -> Result<F> {
    tok.parse::<F>().map_err(|e| err(line.number, e.to_string()))
}

fn expect_keyword(line: &Line<'_>, keyword: &str, arity: usize) -> Result<()> {
    if line.tokens[0] != keyword {
        return Err(err(
            line.number,
            format!("expected `{keyword}`, found `{}`", line.tokens[0]),
        ));
    }
    if line.tokens.len() != arity + 1 {
        return Err(err(
            line.number,
            format!("`{keyword}` takes {arity} values, found {}", line.tokens.len() - 1),
        ));
    }
    Ok(())
}

/// Whether a matrix text uses the `matrix-quad` header.
pub fn is_quadratic_matrix(input: &str) -> bool {
    lines(input).next().is_some_and(|l| l.tokens[0] == "matrix-quad")
}

fn matrix_block<F: Field>(it: &mut std::vec::IntoIter<Line<'_>>, last: &mut usize) -> Result<FieldMatrix<F>> {
    let header = next_line(it, "a `matrix` header", *last)?;
    *last = header.number;
    let quad = match header.tokens[0] {
        "matrix" => false,
        "matrix-quad" => true,
        other => return Err(err(header.number, format!("expected `matrix`, found `{other}`"))),
    };
    expect_keyword(&header, header.tokens[0], 2)?;
    let rows = count(&header, header.tokens[1])?;
    let cols = count(&header, header.tokens[2])?;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let line = next_line(it, "a matrix row", *last)?;
        *last = line.number;
        if line.tokens.len() != cols {
            return Err(err(
                line.number,
                format!("expected {cols} entries, found {}", line.tokens.len()),
            ));
        }
        for tok in &line.tokens {
            if !quad {
                // a plain header promises rational entries
                scalar::<Rational>(&line, tok)?;
            }
            data.push(scalar::<F>(&line, tok)?);
        }
    }
    FieldMatrix::new(rows, cols, data)
}

fn ensure_end(it: &mut std::vec::IntoIter<Line<'_>>) -> Result<()> {
    match it.next() {
        Some(l) => Err(err(l.number, "unexpected trailing content")),
        None => Ok(()),
    }
}

pub fn parse_matrix<F: Field>(input: &str) -> Result<FieldMatrix<F>> {
    let mut it = lines(input);
    let mut last = 0;
    let m = matrix_block(&mut it, &mut last)?;
    ensure_end(&mut it)?;
    Ok(m)
}

pub fn render_matrix<F: Field>(m: &FieldMatrix<F>) -> String {
    let quad = m.entries().iter().any(|e| e.to_rational().is_none());
    let mut out = format!(
        "{} {} {}\n",
        if quad { "matrix-quad" } else { "matrix" },
        m.rows(),
        m.cols()
    );
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_npp<F: Field>(input: &str) -> Result<NppInstance<F>> {
    let mut it = lines(input);
    let header = next_line(&mut it, "an `npp` header", 0)?;
    expect_keyword(&header, "npp", 3)?;
    let dim = count(&header, header.tokens[1])?;
    let n = count(&header, header.tokens[2])?;
    let m = count(&header, header.tokens[3])?;
    if dim == 0 || n == 0 || m == 0 {
        return Err(err(header.number, "dimension and counts must be positive"));
    }
    let mut last = header.number;
    let mut rows = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        let line = next_line(&mut it, "a `halfspace` line", last)?;
        last = line.number;
        expect_keyword(&line, "halfspace", dim + 1)?;
        let vals: Vec<F> = line.tokens[1..]
            .iter()
            .map(|t| scalar(&line, t))
            .collect::<Result<_>>()?;
        rows.push(vals[..dim].to_vec());
        b.push(vals[dim].clone());
    }
    let mut points = Vec::with_capacity(m);
    for _ in 0..m {
        let line = next_line(&mut it, "a `point` line", last)?;
        last = line.number;
        expect_keyword(&line, "point", dim)?;
        points.push(
            line.tokens[1..]
                .iter()
                .map(|t| scalar(&line, t))
                .collect::<Result<Vec<F>>>()?,
        );
    }
    ensure_end(&mut it)?;
    let outer = HPolytope::new(FieldMatrix::from_rows(rows)?, b)?;
    NppInstance::new(outer, VPolytope::new(points)?)
}

pub fn render_npp<F: Field>(inst: &NppInstance<F>) -> String {
    let (a, b) = (inst.outer.a(), inst.outer.b());
    let mut out = format!("npp {} {} {}\n", inst.dim(), a.rows(), inst.inner.len());
    for i in 0..a.rows() {
        let mut toks: Vec<String> = a.row(i).iter().map(ToString::to_string).collect();
        toks.push(b[i].to_string());
        let _ = writeln!(out, "halfspace {}", toks.join(" "));
    }
    for pt in inst.inner.points() {
        let toks: Vec<String> = pt.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "point {}", toks.join(" "));
    }
    out
}

pub fn parse_lmc(input: &str) -> Result<Lmc> {
    let mut it = lines(input);
    let header = next_line(&mut it, "an `lmc` header", 0)?;
    expect_keyword(&header, "lmc", 1)?;
    let n = count(&header, header.tokens[1])?;
    let labels_line = next_line(&mut it, "a `labels` line", header.number)?;
    if labels_line.tokens[0] != "labels" || labels_line.tokens.len() < 2 {
        return Err(err(labels_line.number, "expected `labels` followed by at least one label"));
    }
    let labels: Vec<String> = labels_line.tokens[1..].iter().map(|s| s.to_string()).collect();
    let mut mu = vec![FieldMatrix::<Rational>::zeros(n, n); labels.len()];
    for line in it {
        expect_keyword(&line, "trans", 4)?;
        let sigma = labels
            .iter()
            .position(|l| l == line.tokens[1])
            .ok_or_else(|| err(line.number, format!("unknown label {:?}", line.tokens[1])))?;
        let i = count(&line, line.tokens[2])?;
        let j = count(&line, line.tokens[3])?;
        if i >= n || j >= n {
            return Err(err(line.number, format!("state index out of range 0..{n}")));
        }
        let p: Rational = scalar(&line, line.tokens[4])?;
        mu[sigma].set(i, j, p);
    }
    Lmc::new(n, labels, mu).map_err(|e| err(header.number, e.to_string()))
}

pub fn render_lmc(lmc: &Lmc) -> String {
    let mut out = format!("lmc {}\nlabels {}\n", lmc.state_count(), lmc.labels().join(" "));
    for (label, m) in lmc.labels().iter().zip(lmc.transitions()) {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m.get(i, j).is_zero() {
                    let _ = writeln!(out, "trans {label} {i} {j} {}", m.get(i, j));
                }
            }
        }
    }
    out
}

/// Vertex list of a nested polygon solution.
pub fn render_solution(vertices: &[Point2]) -> String {
    let mut out = format!("k {}\n", vertices.len());
    for v in vertices {
        let _ = writeln!(out, "vertex {} {}", v.x, v.y);
    }
    out
}

pub fn parse_solution(input: &str) -> Result<Vec<Point2>> {
    let mut it = lines(input);
    let header = next_line(&mut it, "a `k` header", 0)?;
    expect_keyword(&header, "k", 1)?;
    let k = count(&header, header.tokens[1])?;
    let mut last = header.number;
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let line = next_line(&mut it, "a `vertex` line", last)?;
        last = line.number;
        expect_keyword(&line, "vertex", 2)?;
        out.push(Point2::new(scalar(&line, line.tokens[1])?, scalar(&line, line.tokens[2])?));
    }
    ensure_end(&mut it)?;
    Ok(out)
}

pub fn render_factorization<F: Field>(f: &Factorization<F>) -> String {
    format!(
        "{}{}restricted: {}\n",
        render_matrix(&f.w),
        render_matrix(&f.h),
        f.restricted
    )
}

pub fn parse_factorization<F: Field>(input: &str) -> Result<Factorization<F>> {
    let mut it = lines(input);
    let mut last = 0;
    let w = matrix_block(&mut it, &mut last)?;
    let h = matrix_block(&mut it, &mut last)?;
    let line = next_line(&mut it, "a `restricted:` line", last)?;
    expect_keyword(&line, "restricted:", 1)?;
    let restricted = match line.tokens[1] {
        "true" => true,
        "false" => false,
        other => return Err(err(line.number, format!("expected true or false, found {other:?}"))),
    };
    ensure_end(&mut it)?;
    Ok(Factorization { w, h, restricted })
}
