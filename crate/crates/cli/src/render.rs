use std::fmt::Write as _;

use hiveflow::lattice::{EdgeId, Lattice};
use hiveflow::{slack, FlowClass};

const UNIT: f64 = 80.0;
const MARGIN: f64 = 30.0;
const ARROW: f64 = 14.0;

/// Edges that are the diagonal of a rhombus with positive slack.
pub fn thick_edges(lat: &Lattice, f: &FlowClass) -> Vec<EdgeId> {
    let mut thick: Vec<EdgeId> =
        lat.rhombi().filter(|&r| slack(lat, r, f) > 0).map(|r| lat.rhombus(r).diagonal).collect();
    thick.sort();
    thick.dedup();
    thick
}

/// SVG 1.1 drawing of the lattice with the throughput of `f` through every
/// edge. Arrows point in the direction of positive throughput; diagonals of
/// rhombi with positive slack are drawn thick. Output depends only on `f`.
pub fn render_svg(lat: &Lattice, f: &FlowClass) -> String {
    let n = lat.n() as f64;
    let width = n * UNIT + 2.0 * MARGIN;
    let height = n * UNIT * 3f64.sqrt() / 2.0 + 2.0 * MARGIN;
    let to_screen = |(x, y): (f64, f64)| (MARGIN + x * UNIT, height - MARGIN - y * UNIT);
    let thick = thick_edges(lat, f);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.2}\" height=\"{height:.2}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );
    s.push_str("<defs><marker id=\"head\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#b03020\"/></marker></defs>\n");
    s.push_str("<g id=\"lattice\" stroke=\"#333\" stroke-linecap=\"round\">\n");
    for e in lat.edges() {
        let [a, b] = lat.edge(e).ends;
        let (x1, y1) = to_screen(lat.position(a));
        let (x2, y2) = to_screen(lat.position(b));
        let (class, w) = if thick.binary_search(&e).is_ok() { ("edge thick", 4.0) } else { ("edge", 1.0) };
        let _ = writeln!(
            s,
            "<line class=\"{class}\" data-edge=\"{}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke-width=\"{w}\"/>",
            e.index()
        );
    }
    s.push_str("</g>\n<g id=\"throughputs\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n");
    for e in lat.edges() {
        let edge = lat.edge(e);
        let [a, b] = edge.ends;
        let (ax, ay) = to_screen(lat.position(a));
        let (bx, by) = to_screen(lat.position(b));
        let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
        let corners = lat.triangle(edge.upright).corners;
        let (cx, cy) = corners
            .iter()
            .map(|&v| to_screen(lat.position(v)))
            .fold((0.0, 0.0), |acc, p| (acc.0 + p.0 / 3.0, acc.1 + p.1 / 3.0));
        // Unit normal pointing into the upright triangle, the positive direction.
        let (nx, ny) = {
            let (dx, dy) = (cx - mx, cy - my);
            let len = (dx * dx + dy * dy).sqrt();
            (dx / len, dy / len)
        };
        let d = f.get(e);
        if d != 0 {
            let sign = d.signum() as f64;
            let (x1, y1) = (mx - sign * nx * ARROW / 2.0, my - sign * ny * ARROW / 2.0);
            let (x2, y2) = (mx + sign * nx * ARROW / 2.0, my + sign * ny * ARROW / 2.0);
            let _ = writeln!(
                s,
                "<line class=\"arrow\" data-edge=\"{}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#b03020\" stroke-width=\"1.5\" marker-end=\"url(#head)\"/>",
                e.index()
            );
        }
        // The label sits beside the arrow, along the edge.
        let (ex, ey) = ((bx - ax) / UNIT, (by - ay) / UNIT);
        let (lx, ly) = (mx + ex * 16.0, my + ey * 16.0 + 4.0);
        let _ = writeln!(
            s,
            "<text class=\"throughput\" data-edge=\"{}\" x=\"{lx:.2}\" y=\"{ly:.2}\">{}</text>",
            e.index(),
            d.abs()
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_flow_has_zero_labels_and_no_thick_edges() {
        let lat = Lattice::build(3).unwrap();
        let svg = render_svg(&lat, &FlowClass::zero(3));
        assert!(!svg.contains("edge thick"));
        assert!(!svg.contains("class=\"arrow\""));
        assert_eq!(svg.matches(">0</text>").count(), lat.num_edges());
    }

    #[test]
    fn rendering_is_deterministic() {
        let lat = Lattice::build(2).unwrap();
        let f = FlowClass::zero(2);
        assert_eq!(render_svg(&lat, &f), render_svg(&lat, &f));
    }
}
