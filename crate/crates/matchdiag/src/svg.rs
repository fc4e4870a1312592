//! Deterministic SVG rendering of matching diagrams: square viewport, both
//! axes, the diagonal as a dashed guide, and a separate vertical line at the
//! right margin carrying the points with infinite first coordinate.
//!
//! All geometry is formatted with fixed precision and content order is fully
//! determined by the input, so equal diagrams render byte-identical files —
//! the property the round-trip tests lean on.

use crate::blockfn::{Endpoint, MatchingDiagram};
use crate::matching::DeltaMatching;
use std::fmt::Write;

const SIZE: u32 = 600;
const ORIGIN_X: f64 = 60.0;
const ORIGIN_Y: f64 = 540.0;
const FINITE_SPAN: f64 = 440.0;
const INF_X: f64 = 540.0;
const TOP_Y: f64 = ORIGIN_Y - FINITE_SPAN;

/// Maps data coordinates onto the fixed viewport.
struct Frame {
    scale: f64,
    max_value: f64,
}

impl Frame {
    fn new(diagrams: &[&MatchingDiagram]) -> Self {
        let mut max_value = 0.0f64;
        for diagram in diagrams {
            for &(a, b, _) in diagram.points() {
                if let Endpoint::Finite(v) = a {
                    max_value = max_value.max(v);
                }
                max_value = max_value.max(b);
            }
        }
        if max_value <= 0.0 {
            max_value = 1.0;
        }
        Frame {
            scale: FINITE_SPAN / max_value,
            max_value,
        }
    }

    fn x(&self, a: Endpoint) -> f64 {
        match a {
            Endpoint::Finite(v) => ORIGIN_X + v * self.scale,
            Endpoint::Infinity => INF_X,
        }
    }

    fn y(&self, b: f64) -> f64 {
        ORIGIN_Y - b * self.scale
    }
}

fn open_svg(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\" font-family=\"monospace\">"
    );
}

fn draw_frame(out: &mut String, frame: &Frame) {
    let right = ORIGIN_X + FINITE_SPAN;
    let _ = writeln!(
        out,
        "  <line x1=\"{ORIGIN_X}\" y1=\"{ORIGIN_Y}\" x2=\"{right}\" y2=\"{ORIGIN_Y}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{ORIGIN_X}\" y1=\"{ORIGIN_Y}\" x2=\"{ORIGIN_X}\" y2=\"{TOP_Y}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{ORIGIN_X}\" y1=\"{ORIGIN_Y}\" x2=\"{right}\" y2=\"{TOP_Y}\" stroke=\"black\" stroke-dasharray=\"4 4\"/>"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{INF_X}\" y1=\"{ORIGIN_Y}\" x2=\"{INF_X}\" y2=\"{TOP_Y}\" stroke=\"blue\"/>"
    );
    let _ = writeln!(
        out,
        "  <text x=\"{INF_X}\" y=\"{}\" font-size=\"16\" fill=\"blue\" text-anchor=\"middle\">&#8734;</text>",
        TOP_Y - 8.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"{ORIGIN_X}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">0</text>",
        ORIGIN_Y + 16.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"{right}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{:.3}</text>",
        ORIGIN_Y + 16.0,
        frame.max_value
    );
    let _ = writeln!(
        out,
        "  <text x=\"{}\" y=\"{TOP_Y}\" font-size=\"12\" text-anchor=\"end\">{:.3}</text>",
        ORIGIN_X - 8.0,
        frame.max_value
    );
}

fn draw_points(out: &mut String, frame: &Frame, diagram: &MatchingDiagram, color: &str, r: f64) {
    for &(a, b, mult) in diagram.points() {
        let (cx, cy) = (frame.x(a), frame.y(b));
        let _ = writeln!(
            out,
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r}\" fill=\"{color}\" fill-opacity=\"0.8\"/>"
        );
        if mult > 1 {
            let _ = writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{color}\">{mult}</text>",
                cx + 8.0,
                cy - 6.0
            );
        }
    }
}

/// Renders one diagram.
pub fn render_diagram(diagram: &MatchingDiagram) -> String {
    let frame = Frame::new(&[diagram]);
    let mut out = String::new();
    open_svg(&mut out);
    draw_frame(&mut out, &frame);
    draw_points(&mut out, &frame, diagram, "steelblue", 5.0);
    out.push_str("</svg>\n");
    out
}

/// Renders two diagrams over one frame — the first red, the second blue —
/// with a gray segment for every matched pair of the witness and its delta
/// printed in the corner.
pub fn render_overlay(
    first: &MatchingDiagram,
    second: &MatchingDiagram,
    matching: &DeltaMatching,
) -> String {
    let frame = Frame::new(&[first, second]);
    let mut out = String::new();
    open_svg(&mut out);
    draw_frame(&mut out, &frame);
    for &(p, q) in matching.pairs() {
        let _ = writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"gray\" stroke-width=\"1.5\"/>",
            frame.x(p.0),
            frame.y(p.1),
            frame.x(q.0),
            frame.y(q.1)
        );
    }
    draw_points(&mut out, &frame, first, "red", 5.0);
    draw_points(&mut out, &frame, second, "blue", 3.5);
    let _ = writeln!(
        out,
        "  <text x=\"{ORIGIN_X}\" y=\"{}\" font-size=\"14\">delta {:.3}</text>",
        TOP_Y - 8.0,
        matching.delta()
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::min_delta_matching;

    fn diagram(points: &[(Endpoint, f64, usize)]) -> MatchingDiagram {
        MatchingDiagram::new(points.to_vec()).unwrap()
    }

    #[test]
    fn empty_diagram_renders_axes_and_diagonal_only() {
        let svg = render_diagram(&diagram(&[]));
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<circle"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("&#8734;"));
    }

    #[test]
    fn marks_and_labels_follow_multiplicities() {
        let d = diagram(&[
            (Endpoint::Finite(2.0), 2f64.sqrt(), 2),
            (Endpoint::Finite(8f64.sqrt()), 2f64.sqrt(), 1),
            (Endpoint::Infinity, 2f64.sqrt(), 2),
            (Endpoint::Infinity, 8f64.sqrt(), 1),
        ]);
        let svg = render_diagram(&d);
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches(">2</text>").count(), 2);
    }

    #[test]
    fn infinite_points_sit_on_the_right_column() {
        let svg = render_diagram(&diagram(&[(Endpoint::Infinity, 1.0, 1)]));
        assert!(svg.contains("cx=\"540.00\""));
    }

    #[test]
    fn rendering_is_deterministic() {
        let d = diagram(&[(Endpoint::Finite(1.5), 0.5, 1)]);
        assert_eq!(render_diagram(&d), render_diagram(&d));
    }

    #[test]
    fn overlay_draws_both_colors_and_segments() {
        let d1 = diagram(&[(Endpoint::Finite(2.0), 1.0, 1), (Endpoint::Infinity, 1.0, 1)]);
        let d2 = diagram(&[(Endpoint::Finite(2.2), 1.1, 1), (Endpoint::Infinity, 0.9, 1)]);
        let matching = min_delta_matching(&d1, &d2);
        let svg = render_overlay(&d1, &d2, &matching);
        assert!(svg.contains("fill=\"red\""));
        assert!(svg.contains("fill=\"blue\""));
        assert_eq!(
            svg.matches("stroke=\"gray\"").count(),
            matching.pairs().len()
        );
        assert!(svg.contains("delta 0.200"));
    }
}
