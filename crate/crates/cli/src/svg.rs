use std::fmt::Write as _;

use rnmf_core::exact::{Field, Rational};
use rnmf_core::geometry::{Point2, Polygon2D};

/// `x` with at most 12 significant digits, trailing zeros trimmed.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let places = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.places$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn points_attr(points: &[Point2]) -> String {
    points
        .iter()
        // SVG's y axis points down
        .map(|p| format!("{},{}", decimal(p.x.to_f64()), decimal(-p.y.to_f64())))
        .collect::<Vec<_>>()
        .join(" ")
}

/// The outer polygon outlined, the inner polygon filled gray and the nested
/// polygon in red, framed by the outer bounding box plus a 5% margin.
pub fn render_svg(outer: &Polygon2D, inner: &Polygon2D, nested: Option<&[Point2]>) -> String {
    let xs: Vec<Rational> = outer.vertices().iter().map(|v| v.x.clone()).collect();
    let ys: Vec<Rational> = outer.vertices().iter().map(|v| v.y.clone()).collect();
    let (min_x, max_x) = (xs.iter().min().unwrap().to_f64(), xs.iter().max().unwrap().to_f64());
    let (min_y, max_y) = (ys.iter().min().unwrap().to_f64(), ys.iter().max().unwrap().to_f64());
    let (w, h) = (max_x - min_x, max_y - min_y);
    let (mx, my) = (0.05 * w, 0.05 * h);
    let stroke = 0.004 * w.max(h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        decimal(min_x - mx),
        decimal(-max_y - my),
        decimal(w + 2.0 * mx),
        decimal(h + 2.0 * my)
    );
    let _ = writeln!(
        out,
        r#"  <polygon points="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
        points_attr(outer.vertices()),
        decimal(stroke)
    );
    let _ = writeln!(
        out,
        r#"  <polygon points="{}" fill="gray" stroke="none"/>"#,
        points_attr(inner.vertices())
    );
    if let Some(q) = nested {
        let _ = writeln!(
            out,
            r#"  <polygon points="{}" fill="none" stroke="red" stroke-width="{}"/>"#,
            points_attr(q),
            decimal(stroke)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(decimal(2.0 - std::f64::consts::SQRT_2), "0.585786437627");
        assert_eq!(decimal(1234.5), "1234.5");
        assert_eq!(decimal(-0.25), "-0.25");
        assert_eq!(decimal(0.0), "0");
        assert_eq!(decimal(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn view_box_has_margin() {
        let sq = Polygon2D::from_points(&[
            Point2::from_ints(0, 0),
            Point2::from_ints(10, 0),
            Point2::from_ints(10, 10),
            Point2::from_ints(0, 10),
        ])
        .unwrap();
        let svg = render_svg(&sq, &sq, Some(sq.vertices()));
        assert!(svg.contains(r#"viewBox="-0.5 -10.5 11 11""#), "{svg}");
        assert_eq!(svg.matches("<polygon").count(), 3);
    }
}
