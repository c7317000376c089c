//! Static SVG of the pieces of `S` with one arrow per scheduled transition.

use std::fmt::Write;

use compdyn_core::geometry::{center, CarlemanFamily, Primitive, Window};
use compdyn_core::schedule::{builtin, Schedule, TheoremId};
use compdyn_core::Region;

const SCALE: f64 = 10.0;
const F_COLOUR: &str = "#1f77b4";
const G_COLOUR: &str = "#d62728";

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

struct Canvas {
    w: Window,
}

impl Canvas {
    fn x(&self, re: f64) -> String {
        num((re - self.w.min_re) * SCALE)
    }

    fn y(&self, im: f64) -> String {
        num((self.w.max_im - im) * SCALE)
    }

    fn pt(&self, re: f64, im: f64) -> String {
        format!("{},{}", self.x(re), self.y(im))
    }

    fn shows(&self, re: f64) -> bool {
        self.w.min_re <= re && re <= self.w.max_re && self.w.min_im <= 0.0 && 0.0 <= self.w.max_im
    }
}

pub struct Diagram {
    pub svg: String,
    pub arrows: usize,
}

fn regions_in(c: &Canvas) -> Vec<Region> {
    let reach = c.w.max_re.abs().max(c.w.min_re.abs());
    let max_k = (reach / 4.0).ceil() as i64 + 1;
    let mut out = vec![Region::Base];
    for k in 1..=max_k {
        out.push(Region::GDisk(k));
        out.push(Region::BDisk(k));
    }
    out.retain(|r| c.shows(center(*r).expect("disk").re as f64));
    out
}

fn arrow(out: &mut String, c: &Canvas, from: f64, to: f64, above: bool) {
    let s = if above { 1.0 } else { -1.0 };
    let (colour, marker, dash) =
        if above { (F_COLOUR, "head-f", "") } else { (G_COLOUR, "head-g", " stroke-dasharray=\"4 3\"") };
    let d = if from == to {
        format!(
            "M{} C{} {} {}",
            c.pt(from - 0.5, s),
            c.pt(from - 1.5, 3.5 * s),
            c.pt(from + 1.5, 3.5 * s),
            c.pt(from + 0.5, s)
        )
    } else {
        let h = 1.0 + 1.5 + (to - from).abs() / 6.0;
        format!("M{} Q{} {}", c.pt(from, s), c.pt(0.5 * (from + to), h * s), c.pt(to, s))
    };
    let _ = writeln!(
        out,
        "    <path d=\"{d}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.2\"{dash} marker-end=\"url(#{marker})\"/>"
    );
}

pub fn emit_diagram(id: TheoremId, window: Window) -> Diagram {
    let mut svg = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if window.is_empty() {
        svg.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"0\" height=\"0\" viewBox=\"0 0 0 0\"/>\n");
        return Diagram { svg, arrows: 0 };
    }
    let c = Canvas { w: window };
    let (wpx, hpx) = (num((window.max_re - window.min_re) * SCALE), num((window.max_im - window.min_im) * SCALE));
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{wpx}\" height=\"{hpx}\" viewBox=\"0 0 {wpx} {hpx}\">"
    );
    let _ = writeln!(svg, "  <title>Schedule pair {id}</title>");
    svg.push_str("  <defs>\n");
    let _ = writeln!(svg, "    <clipPath id=\"window\"><rect x=\"0\" y=\"0\" width=\"{wpx}\" height=\"{hpx}\"/></clipPath>");
    for (name, colour) in [("head-f", F_COLOUR), ("head-g", G_COLOUR)] {
        let _ = writeln!(
            svg,
            "    <marker id=\"{name}\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"{colour}\"/></marker>"
        );
    }
    svg.push_str("  </defs>\n");
    let _ = writeln!(svg, "  <rect x=\"0\" y=\"0\" width=\"{wpx}\" height=\"{hpx}\" fill=\"white\"/>");

    svg.push_str("  <g clip-path=\"url(#window)\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n");
    let reach = window.max_re.abs().max(window.min_re.abs());
    let pieces = CarlemanFamily::paper().pieces((reach / 4.0).ceil() as i64 + 1);
    for piece in &pieces {
        for part in &piece.parts {
            match *part {
                Primitive::Disk { center, radius } => {
                    let _ = writeln!(
                        svg,
                        "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#eeeeee\"/>",
                        c.x(center as f64),
                        c.y(0.0),
                        num(radius as f64 * SCALE)
                    );
                }
                Primitive::Ray { x, from, up } => {
                    let (a, b) = if up {
                        (from as f64, window.max_im.max(from as f64))
                    } else {
                        (-(from as f64), window.min_im.min(-(from as f64)))
                    };
                    let _ = writeln!(
                        svg,
                        "    <line x1=\"{x1}\" y1=\"{}\" x2=\"{x1}\" y2=\"{}\"/>",
                        c.y(a),
                        c.y(b),
                        x1 = c.x(x as f64)
                    );
                }
                Primitive::Line { x } => {
                    let _ = writeln!(
                        svg,
                        "    <line x1=\"{x1}\" y1=\"{}\" x2=\"{x1}\" y2=\"{}\" stroke-dasharray=\"2 2\"/>",
                        c.y(window.max_im),
                        c.y(window.min_im),
                        x1 = c.x(x as f64)
                    );
                }
                Primitive::UpperHalfPlane { .. } => {}
            }
        }
    }
    svg.push_str("  </g>\n");

    let pair = builtin(id);
    let mode = pair.f.mode();
    let regions = regions_in(&c);
    svg.push_str("  <g font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\" fill=\"black\">\n");
    for r in &regions {
        let re = center(*r).expect("disk").re as f64;
        let _ = writeln!(svg, "    <text x=\"{}\" y=\"{}\">{}</text>", c.x(re), c.y(-1.9), mode.display(*r));
    }
    svg.push_str("  </g>\n");

    let mut arrows = 0;
    for (label, s, above) in [("f", &pair.f, true), ("g", &pair.g, false)] {
        let _ = writeln!(svg, "  <g id=\"arrows-{label}\">");
        for r in &regions {
            let Ok(t) = s.apply(*r) else { continue };
            let to = center(t).expect("disk").re as f64;
            if !c.shows(to) {
                continue;
            }
            arrow(&mut svg, &c, center(*r).expect("disk").re as f64, to, above);
            arrows += 1;
        }
        svg.push_str("  </g>\n");
    }
    svg.push_str("</svg>\n");
    Diagram { svg, arrows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_unit_disks_at_centres() {
        let d = emit_diagram(TheoremId::T2_5, Window::square(30.0));
        // Centre +6 sits 36 units from the left edge.
        assert!(d.svg.contains("<circle cx=\"360.00\" cy=\"300.00\" r=\"10.00\""));
        assert!(d.svg.contains("<circle cx=\"240.00\" cy=\"300.00\" r=\"10.00\""));
        assert!(d.svg.contains("<circle cx=\"400.00\" cy=\"300.00\" r=\"10.00\""));
        assert!(d.arrows > 0);
        assert_eq!(d.svg, emit_diagram(TheoremId::T2_5, Window::square(30.0)).svg);
    }

    #[test]
    fn grid_labels_and_arrows() {
        let d = emit_diagram(TheoremId::T2_1, Window::square(30.0));
        assert!(d.svg.contains(">G(0,2)</text>"));
        assert!(d.svg.contains(">B(0,2)</text>"));
        // f: G(0,2) at +10 to B(0,2) at -10.
        assert!(d.svg.contains("M400.00,290.00 Q300.00,241.67 200.00,290.00"));
    }

    #[test]
    fn empty_window() {
        let d = emit_diagram(TheoremId::T2_1, Window { min_re: 0.0, max_re: 0.0, min_im: 0.0, max_im: 0.0 });
        assert_eq!(d.arrows, 0);
        assert!(d.svg.contains("width=\"0\" height=\"0\""));
    }
}
