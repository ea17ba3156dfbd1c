//! Static SVG plots of Newton polygons.

use std::fmt::Write as _;

use qsplit_core::newton::NewtonPolygonReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Points `(k, val)` as dots and the lower hull as a polyline.
pub fn newton_svg(title: &str, report: &NewtonPolygonReport) -> String {
    let kmax = report.points.iter().map(|p| p.0).max().unwrap_or(1).max(1) as f64;
    let vmin = report.points.iter().map(|p| p.1).min().unwrap_or(0).min(0) as f64;
    let vmax = report.points.iter().map(|p| p.1).max().unwrap_or(1).max(vmin as i64 + 1) as f64;
    let x = |k: usize| MARGIN + (k as f64) / kmax * (WIDTH - 2.0 * MARGIN);
    let y = |v: i64| HEIGHT - MARGIN - (v as f64 - vmin) / (vmax - vmin) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#).unwrap();
    writeln!(s, r#"<title>{}</title>"#, escape(title)).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<line x1="{MARGIN}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="black"/>"#, y(0), WIDTH - MARGIN).unwrap();
    writeln!(s, r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{:.2}" stroke="black"/>"#, HEIGHT - MARGIN).unwrap();
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="12">k = {kmax}</text>"#, WIDTH - MARGIN, HEIGHT - MARGIN / 3.0).unwrap();
    writeln!(s, r#"<text x="4" y="{:.2}" font-size="12">{vmax}</text>"#, MARGIN).unwrap();
    for &(k, v) in &report.points {
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#, x(k), y(v)).unwrap();
    }
    let hull: Vec<String> = report.hull.iter().map(|&(k, v)| format!("{:.2},{:.2}", x(k), y(v))).collect();
    writeln!(s, r#"<polyline points="{}" fill="none" stroke="crimson" stroke-width="1.5"/>"#, hull.join(" ")).unwrap();
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsplit_core::newton::newton_polygon;
    use qsplit_core::reference::{reference_series, ReferenceSeries};
    use qsplit_core::PrimeContext;

    #[test]
    fn draws_every_point_and_the_hull() {
        let s = reference_series(ReferenceSeries::Cp1H21, 20);
        let r = newton_polygon(&s, &PrimeContext::new(3).unwrap()).unwrap();
        let svg = newton_svg("cp1 <H21>", &r);
        assert_eq!(svg.matches("<circle").count(), r.points.len());
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("cp1 &lt;H21&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
