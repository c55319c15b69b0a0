//! SVG rendering of a portrait report on the quarter Poincaré disc.

use std::fmt::Write;

use super::{Limit, PortraitReport, TaggedOrbit};
use crate::compactify::{to_disc, Chart, Separatrix};
use crate::model::{Kind, Point2, PointName, Status};

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    /// Side of the quarter disc in pixels.
    pub size: f64,
    pub margin: f64,
    pub orbit_color: String,
    pub separatrix_color: String,
    pub cycle_color: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            size: 520.0,
            margin: 40.0,
            orbit_color: "#4a6fa5".into(),
            separatrix_color: "#111111".into(),
            cycle_color: "#c0392b".into(),
        }
    }
}

struct Canvas<'a> {
    style: &'a SvgStyle,
    out: String,
}

impl Canvas<'_> {
    fn px(&self, q: Point2) -> (f64, f64) {
        let s = self.style;
        (s.margin + q.x * s.size, s.margin + (1.0 - q.y) * s.size)
    }

    fn polyline(&mut self, pts: &[Point2], color: &str, width: f64, closed: bool) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (k, q) in pts.iter().enumerate() {
            let (x, y) = self.px(*q);
            let _ = write!(d, "{}{x:.2},{y:.2}", if k == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        let _ = writeln!(
            self.out,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="{width}" stroke-linejoin="round"/>"#
        );
    }

    /// Arrowhead halfway along the path, pointing in forward time.
    fn arrow(&mut self, pts: &[Point2], color: &str) {
        if pts.len() < 3 {
            return;
        }
        let mid = pts.len() / 2;
        let (x0, y0) = self.px(pts[mid - 1]);
        let (x1, y1) = self.px(pts[mid + 1]);
        let (dx, dy) = (x1 - x0, y1 - y0);
        let n = (dx * dx + dy * dy).sqrt();
        if n == 0.0 {
            return;
        }
        let (ux, uy) = (dx / n, dy / n);
        let (cx, cy) = self.px(pts[mid]);
        let len = 7.0;
        let tip = (cx + ux * len * 0.5, cy + uy * len * 0.5);
        let l = (
            cx - ux * len * 0.5 - uy * len * 0.4,
            cy - uy * len * 0.5 + ux * len * 0.4,
        );
        let r = (
            cx - ux * len * 0.5 + uy * len * 0.4,
            cy - uy * len * 0.5 - ux * len * 0.4,
        );
        let _ = writeln!(
            self.out,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
            tip.0, tip.1, l.0, l.1, r.0, r.1
        );
    }

    fn glyph(&mut self, q: Point2, kind: Kind, label: &str) {
        let (x, y) = self.px(q);
        let shape = match kind {
            Kind::Saddle => format!(
                r#"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="white" stroke="black" stroke-width="1.5"/>"#,
                x - 4.0,
                y - 4.0
            ),
            Kind::StableNode | Kind::StableFocus | Kind::WeakStableFocus => {
                format!(r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="black"/>"#)
            }
            Kind::UnstableNode | Kind::UnstableFocus => {
                format!(r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="white" stroke="black" stroke-width="1.5"/>"#)
            }
            Kind::SaddleNode => format!(
                r#"<path d="M{:.2},{y:.2} A5,5 0 0 1 {:.2},{y:.2} Z" fill="black" stroke="black"/><circle cx="{x:.2}" cy="{y:.2}" r="5" fill="none" stroke="black" stroke-width="1.5"/>"#,
                x - 5.0,
                x + 5.0
            ),
            Kind::Degenerate => format!(
                r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="white" stroke="black" stroke-width="1.5"/>"#,
                x,
                y - 6.0,
                x + 6.0,
                y,
                x,
                y + 6.0,
                x - 6.0,
                y
            ),
        };
        let _ = writeln!(self.out, "{shape}");
        let _ = writeln!(
            self.out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{label}</text>"#,
            x + 7.0,
            y - 7.0
        );
    }
}

fn is_separatrix_on_boundary(o: &TaggedOrbit) -> bool {
    o.seed.x == 0.0 || o.seed.y == 0.0
}

/// Renders the report. Identical reports give byte-identical documents.
pub fn render_svg(report: &PortraitReport, style: &SvgStyle) -> String {
    let w = style.size + 2.0 * style.margin;
    let h = w + 50.0;
    let mut c = Canvas {
        style,
        out: String::new(),
    };
    let _ = writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(c.out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // boundary of the closed quadrant: both axes and the arc at infinity
    let (ox, oy) = c.px(Point2::new(0.0, 0.0));
    let (ax, _) = c.px(Point2::new(1.0, 0.0));
    let (_, ay) = c.px(Point2::new(0.0, 1.0));
    let _ = writeln!(
        c.out,
        r#"<path d="M{ox:.2},{oy:.2} L{ax:.2},{oy:.2} A{r:.2},{r:.2} 0 0 0 {ox:.2},{ay:.2} Z" fill="none" stroke="black" stroke-width="2"/>"#,
        r = style.size
    );

    for o in &report.representative_orbits {
        c.polyline(&o.disc_path, &style.orbit_color, 1.0, false);
        c.arrow(&o.disc_path, &style.orbit_color);
    }
    for o in &report.separatrices {
        if is_separatrix_on_boundary(o) {
            c.arrow(&o.disc_path, &style.separatrix_color);
        } else {
            c.polyline(&o.disc_path, &style.separatrix_color, 2.5, false);
            c.arrow(&o.disc_path, &style.separatrix_color);
        }
    }
    if let Some(cy) = &report.cycle_path {
        c.polyline(cy, &style.cycle_color, 2.5, true);
    }

    // O2 from the analytic sector description: flow arrives along the arc
    // and leaves along the y-axis
    if let Some(o2) = report.infinite_points.iter().find(|p| p.name() == Some(PointName::O2)) {
        if let Some(sd) = &o2.sector_data {
            let pick = |s: Separatrix, t: f64| match s {
                Separatrix::InfinityArc => Point2::new(t.sin(), t.cos()),
                Separatrix::YAxis => Point2::new(0.0, 1.0 - t),
            };
            let inc = [
                pick(sd.incoming, 0.25),
                pick(sd.incoming, 0.15),
                pick(sd.incoming, 0.05),
            ];
            let out = [
                pick(sd.outgoing, 0.05),
                pick(sd.outgoing, 0.15),
                pick(sd.outgoing, 0.25),
            ];
            c.arrow(&inc, &style.separatrix_color);
            c.arrow(&out, &style.separatrix_color);
        }
    }

    for p in &report.finite_points {
        c.glyph(to_disc(Chart::U3, p.location), p.kind, &p.name.to_string());
    }
    for p in &report.infinite_points {
        if let Some(n) = p.name() {
            c.glyph(to_disc(p.chart, p.location), p.kind, &n.to_string());
        }
    }

    let lab = &report.case_label;
    let caption = format!(
        "b = {}, c = {}, δ = {}: case {}, region {}, portrait {} ({})",
        report.params.b,
        report.params.c,
        report.params.delta,
        lab.case,
        lab.region,
        report.portrait_letter,
        report.status
    );
    let _ = writeln!(
        c.out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14">{}</text>"#,
        style.margin,
        w + 10.0,
        escape(&caption)
    );
    if report.status == Status::Conjectured {
        let _ = writeln!(
            c.out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="22" font-weight="bold" fill="{}">CONJECTURED</text>"#,
            style.margin + style.size * 0.55,
            style.margin + 30.0,
            style.cycle_color
        );
    }
    if report
        .representative_orbits
        .iter()
        .any(|o| o.omega == Limit::Unknown || o.alpha == Limit::Unknown)
    {
        let _ = writeln!(
            c.out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">some orbit limits were not resolved numerically</text>"#,
            style.margin,
            w + 30.0
        );
    }
    c.out.push_str("</svg>\n");
    c.out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Params;
    use crate::portrait::classification_report;

    #[test]
    fn skeleton_only_is_valid() {
        let r = classification_report(&Params::new(2.0, 1.0, 1.0).unwrap());
        let s = render_svg(&r, &SvgStyle::default());
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("portrait A (proven)"));
        assert_eq!(s, render_svg(&r, &SvgStyle::default()));
    }

    #[test]
    fn conjectured_stamp() {
        let r = classification_report(&Params::new(1.0, 1.6, 0.2).unwrap());
        let s = render_svg(&r, &SvgStyle::default());
        assert!(s.contains("CONJECTURED"));
        assert!(s.contains("(conjectured)"));
    }
}
