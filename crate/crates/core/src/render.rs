//! SVG snapshots of a game state: Apollonius discs, the safe-set boundary,
//! arc centroids, agents and their headings.

use std::fmt::Write as _;

use crate::geometry::Vec2;
use crate::gradients::arc_geometry;
use crate::simulator::GameState;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 800.0;
const MARGIN: f64 = 0.05;

/// Fixed world-to-viewport mapping. Built once from the initial state so
/// every frame of a run shares it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    min: Vec2,
    scale: f64,
}

impl Viewport {
    /// Fits the initial agents and every initial disc, with a small margin.
    pub fn fit(state: &GameState) -> Self {
        let mut lo = state.evader.position;
        let mut hi = lo;
        let mut include = |p: Vec2, r: f64| {
            lo = Vec2::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Vec2::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        for p in &state.pursuers {
            include(p.position, 0.0);
        }
        if let Some(b) = &state.boundary {
            for d in &b.discs {
                include(d.center, d.radius);
            }
        }
        let span = (hi - lo).x.max((hi - lo).y).max(1e-9);
        let pad = MARGIN * span;
        let side = span + 2.0 * pad;
        let mid = (lo + hi) * 0.5;
        Self {
            min: mid - Vec2::new(0.5 * side, 0.5 * side),
            scale: WIDTH.min(HEIGHT) / side,
        }
    }

    /// World point to SVG user units (y axis flipped).
    pub fn map(&self, p: Vec2) -> (f64, f64) {
        ((p.x - self.min.x) * self.scale, HEIGHT - (p.y - self.min.y) * self.scale)
    }

    pub fn len(&self, l: f64) -> f64 {
        l * self.scale
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

/// One SVG 1.1 document for `state`.
pub fn render_svg(state: &GameState, view: &Viewport, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    s.push_str(
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker></defs>
<rect width="100%" height="100%" fill="white"/>
"##,
    );

    if let Some(b) = &state.boundary {
        for (i, d) in b.discs.iter().enumerate() {
            let (cx, cy) = view.map(d.center);
            let dash = if b.active.contains(&i) { "" } else { r#" stroke-dasharray="6,4""# };
            let _ = writeln!(
                s,
                r##"<circle class="disc" data-pursuer="{i}" cx="{}" cy="{}" r="{}" fill="none" stroke="#7a9cc6" stroke-width="1"{dash}/>"##,
                fmt(cx),
                fmt(cy),
                fmt(view.len(d.radius))
            );
        }

        if !b.arcs.is_empty() {
            let mut path = String::new();
            for (k, arc) in b.arcs.iter().enumerate() {
                let d = b.disc_of(arc);
                let r = fmt(view.len(d.radius));
                let (x0, y0) = view.map(arc.start_point(d));
                if k == 0 {
                    let _ = write!(path, "M{},{} ", fmt(x0), fmt(y0));
                }
                // SVG arcs cannot span a full turn; split every arc in two
                let mid = d.point_at(arc.mid_angle());
                let (xm, ym) = view.map(mid);
                let (x1, y1) = view.map(arc.end_point(d));
                // sweep-flag 0: counterclockwise in world is counterclockwise
                // on screen after the y flip
                let _ = write!(path, "A{r},{r} 0 0 0 {},{} ", fmt(xm), fmt(ym));
                let _ = write!(path, "A{r},{r} 0 0 0 {},{} ", fmt(x1), fmt(y1));
            }
            path.push('Z');
            let _ = writeln!(
                s,
                r##"<path class="safe-set" d="{path}" fill="#f4d35e" fill-opacity="0.45" stroke="#d1495b" stroke-width="2"/>"##
            );
            for arc in &b.arcs {
                let g = arc_geometry(b.disc_of(arc), arc);
                let (x, y) = view.map(g.centroid);
                let _ = writeln!(
                    s,
                    r##"<circle class="centroid" data-pursuer="{}" cx="{}" cy="{}" r="3.5" fill="#d1495b"/>"##,
                    arc.disc_index,
                    fmt(x),
                    fmt(y)
                );
            }
        }
    }

    let headings = state.headings();
    let arrow = 0.08 * WIDTH.min(HEIGHT);
    let agent = |s: &mut String, class: &str, idx: Option<usize>, p: Vec2, dir: Vec2, colour: &str| {
        let (x, y) = view.map(p);
        let data = idx.map(|i| format!(r#" data-pursuer="{i}""#)).unwrap_or_default();
        if dir != Vec2::ZERO {
            let (tx, ty) = (x + arrow * dir.x, y - arrow * dir.y);
            let _ = writeln!(
                s,
                r##"<line class="heading {class}"{data} x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333" stroke-width="1.5" marker-end="url(#arrow)"/>"##,
                fmt(x),
                fmt(y),
                fmt(tx),
                fmt(ty)
            );
        }
        let _ = writeln!(
            s,
            r#"<circle class="{class}"{data} cx="{}" cy="{}" r="5" fill="{colour}"/>"#,
            fmt(x),
            fmt(y)
        );
        if let Some(i) = idx {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
                fmt(x + 7.0),
                fmt(y - 7.0),
                i + 1
            );
        }
    };
    for (i, (p, u)) in state.pursuers.iter().zip(&headings.pursuers).enumerate() {
        agent(&mut s, "pursuer", Some(i), p.position, u.direction(), "#2e4057");
    }
    agent(&mut s, "evader", None, state.evader.position, headings.evader.direction(), "#d1495b");

    let _ = writeln!(
        s,
        r#"<text x="10" y="20" font-family="sans-serif" font-size="14">{} t={:.4} area={:.4}</text>"#,
        escape(title),
        state.time,
        state.area
    );
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
