//! Minimal SVG writer with fixed three-decimal coordinates.

use std::fmt::Write;

pub const CANVAS: f64 = 800.0;

/// Affine map from plot coordinates to canvas coordinates with a uniform
/// scale and the `y` axis flipped.
#[derive(Debug, Clone, Copy)]
pub struct Viewport {
    pub scale: f64,
    /// Canvas position of the plot origin.
    pub origin: (f64, f64),
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl Viewport {
    pub fn to_canvas(&self, x: f64, y: f64) -> (f64, f64) {
        (self.origin.0 + self.scale * x, self.origin.1 - self.scale * y)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_range.0 && x <= self.x_range.1 && y >= self.y_range.0 && y <= self.y_range.1
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    // avoid "-0.000"
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.000".to_string()
    } else {
        s
    }
}

pub struct Svg {
    body: String,
}

impl Svg {
    pub fn new() -> Self {
        Svg { body: String::new() }
    }

    /// Polyline through plot points; `closed` appends `Z`.
    pub fn path(&mut self, vp: &Viewport, pts: &[(f64, f64)], closed: bool, id: &str, class: &str) {
        if pts.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let (cx, cy) = vp.to_canvas(x, y);
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(cx), num(cy));
        }
        if closed {
            d.push_str(" Z");
        }
        let _ = writeln!(self.body, r#"<path id="{id}" class="{class}" d="{d}"/>"#);
    }

    pub fn line(&mut self, vp: &Viewport, a: (f64, f64), b: (f64, f64), class: &str) {
        let (x1, y1) = vp.to_canvas(a.0, a.1);
        let (x2, y2) = vp.to_canvas(b.0, b.1);
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }

    /// Filled triangle at plot point `at` pointing along `dir` (plot
    /// coordinates), `size` canvas units long.
    pub fn arrowhead(&mut self, vp: &Viewport, at: (f64, f64), dir: (f64, f64), size: f64) {
        let norm = dir.0.hypot(dir.1);
        if !norm.is_finite() || norm <= 0.0 {
            return;
        }
        // canvas y points down
        let (ux, uy) = (dir.0 / norm, -dir.1 / norm);
        let (cx, cy) = vp.to_canvas(at.0, at.1);
        let tip = (cx + 0.5 * size * ux, cy + 0.5 * size * uy);
        let base = (cx - 0.5 * size * ux, cy - 0.5 * size * uy);
        let half = 0.35 * size;
        let l = (base.0 - half * uy, base.1 + half * ux);
        let r = (base.0 + half * uy, base.1 - half * ux);
        let _ = writeln!(
            self.body,
            r#"<polygon class="arrow" points="{},{} {},{} {},{}"/>"#,
            num(tip.0),
            num(tip.1),
            num(l.0),
            num(l.1),
            num(r.0),
            num(r.1)
        );
    }

    pub fn text(&mut self, vp: &Viewport, at: (f64, f64), label: &str) {
        let (x, y) = vp.to_canvas(at.0, at.1);
        let _ = writeln!(self.body, r#"<text x="{}" y="{}">{}</text>"#, num(x), num(y), escape(label));
    }

    pub fn finish(self, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
            c = CANVAS as u32
        );
        let _ = writeln!(out, "<title>{}</title>", escape(title));
        out.push_str(concat!(
            "<style>",
            "path{fill:none;stroke:#1f4e79;stroke-width:1.5}",
            "path.boundary{stroke:#000;stroke-width:2}",
            "path.image{stroke:#b03a2e;stroke-dasharray:6 3}",
            "line{stroke:#000;stroke-width:1}",
            "line.boundary{stroke-width:2.5}",
            "polygon.arrow{fill:#1f4e79}",
            "text{font:12px sans-serif;fill:#333}",
            "</style>\n"
        ));
        let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
