//! SVG output for limit-shape curves and Young diagrams.

use std::fmt::Write;

use crate::carrier::YoungTuple;
use crate::mc::ShapeCurves;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Staircase outline of a rescaled diagram: rows are stacked upward from
/// y = 0, row i spanning [i-1, i], so the picture is the usual English
/// drawing flipped vertically.
fn outline(points: &[(f64, usize)]) -> Vec<(f64, f64)> {
    let mut path = vec![(0.0, 0.0)];
    for &(x, i) in points {
        path.push((x, (i - 1) as f64));
        path.push((x, i as f64));
    }
    path.push((0.0, points.last().map_or(0.0, |p| p.1 as f64)));
    path
}

/// Limit curves (solid) and optional empirical outlines (dashed), one color
/// per diagram.
pub fn shape_svg(limit: &ShapeCurves, empirical: Option<&ShapeCurves>, width: f64, height: f64) -> String {
    let all = limit.iter().chain(empirical.into_iter().flatten());
    let x_max = all.clone().flatten().map(|p| p.0).fold(0.0, f64::max).max(1e-12);
    let y_max = all.flatten().map(|p| p.1).max().unwrap_or(1).max(1) as f64;
    let m = 30.0;
    let sx = |x: f64| m + x / x_max * (width - 2.0 * m);
    let sy = |y: f64| height - m - y / y_max * (height - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#);
    let _ = writeln!(
        s,
        r#"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="black" fill="none"/>"#,
        sx(0.0),
        sy(0.0),
        sx(x_max),
        sy(0.0),
        sx(0.0),
        sy(0.0),
        sx(0.0),
        sy(y_max)
    );
    let mut draw = |curves: &ShapeCurves, dash: &str| {
        for (a, c) in curves.iter().enumerate() {
            let d: Vec<String> = outline(c).iter().map(|&(x, y)| format!("{:.3} {:.3}", sx(x), sy(y))).collect();
            let _ = writeln!(
                s,
                r#"<path d="M{}" stroke="{}" fill="none"{}/>"#,
                d.join(" L"),
                COLORS[a % COLORS.len()],
                dash
            );
        }
    };
    draw(limit, "");
    if let Some(e) = empirical {
        draw(e, r#" stroke-dasharray="4 3""#);
    }
    s.push_str("</svg>\n");
    s
}

/// Box drawing of each diagram side by side, first row at the bottom.
pub fn young_svg(y: &YoungTuple, cell: f64) -> String {
    let widths: Vec<usize> = y.diagrams.iter().map(|d| d.row(1)).collect();
    let depth = y.diagrams.iter().map(|d| d.len()).max().unwrap_or(0);
    let gap = 2.0 * cell;
    let total_w = widths.iter().map(|&w| w as f64 * cell + gap).sum::<f64>() + gap;
    let total_h = depth as f64 * cell + 2.0 * gap;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}">"#);
    let mut left = gap;
    for (a, d) in y.diagrams.iter().enumerate() {
        for (i, &r) in d.parts().iter().enumerate() {
            let top = total_h - gap - (i + 1) as f64 * cell;
            for j in 0..r {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{top}" width="{cell}" height="{cell}" fill="none" stroke="{}"/>"#,
                    left + j as f64 * cell,
                    COLORS[a % COLORS.len()]
                );
            }
        }
        left += widths[a] as f64 * cell + gap;
    }
    s.push_str("</svg>\n");
    s
}
