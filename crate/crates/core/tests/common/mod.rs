#![allow(dead_code)]

use hiveflow::lattice::{EdgeId, Lattice};
use hiveflow::{FlowClass, Partition};

pub fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

// Figure coordinates: unit edge 30 wide, rows 25.98 apart, bottom-left corner at the origin.
fn vertex_at(lat: &Lattice, x: f64, y: f64) -> hiveflow::lattice::VertexId {
    let row = (y / 25.98).round() as usize;
    let pos = ((x - 15.0 * row as f64) / 30.0).round() as usize;
    lat.vertex_id(row, pos).expect("figure point on the lattice")
}

pub fn edge_at(lat: &Lattice, a: (f64, f64), b: (f64, f64)) -> EdgeId {
    let u = vertex_at(lat, a.0, a.1);
    let v = vertex_at(lat, b.0, b.1);
    lat.edges()
        .find(|&e| {
            let ends = lat.edge(e).ends;
            (ends[0] == u && ends[1] == v) || (ends[0] == v && ends[1] == u)
        })
        .expect("figure segment is a lattice edge")
}

/// The throughputs drawn in the n = 3 example figure for λ = (4,2,0),
/// μ = (5,2,0), ν = (6,4,3), positive into the upright triangle.
type LabelledSegment = ((f64, f64), (f64, f64), i64);

pub const FIG_EDGES: [LabelledSegment; 18] = [
    ((0.0, 0.0), (30.0, 0.0), 0),
    ((30.0, 0.0), (60.0, 0.0), 2),
    ((60.0, 0.0), (90.0, 0.0), 5),
    ((15.0, 26.0), (45.0, 26.0), 0),
    ((45.0, 26.0), (75.0, 26.0), 4),
    ((30.0, 52.0), (60.0, 52.0), 2),
    ((0.0, 0.0), (15.0, 26.0), -3),
    ((30.0, 0.0), (45.0, 26.0), -3),
    ((60.0, 0.0), (75.0, 26.0), -5),
    ((15.0, 26.0), (30.0, 52.0), -4),
    ((45.0, 26.0), (60.0, 52.0), -6),
    ((30.0, 52.0), (45.0, 78.0), -6),
    ((30.0, 0.0), (15.0, 26.0), 3),
    ((60.0, 0.0), (45.0, 26.0), 1),
    ((90.0, 0.0), (75.0, 26.0), 0),
    ((45.0, 26.0), (30.0, 52.0), 4),
    ((75.0, 26.0), (60.0, 52.0), 2),
    ((60.0, 52.0), (45.0, 78.0), 4),
];

/// The diagonals drawn thick in the figure, as unit segments.
pub const FIG_THICK: [((f64, f64), (f64, f64)); 7] = [
    ((30.0, 0.0), (45.0, 26.0)),
    ((45.0, 26.0), (60.0, 52.0)),
    ((15.0, 26.0), (45.0, 26.0)),
    ((45.0, 26.0), (75.0, 26.0)),
    ((60.0, 0.0), (45.0, 26.0)),
    ((45.0, 26.0), (30.0, 52.0)),
    ((60.0, 0.0), (75.0, 26.0)),
];

pub fn fig_flow(lat: &Lattice) -> FlowClass {
    let mut delta = vec![0; lat.num_edges()];
    for (a, b, v) in FIG_EDGES {
        delta[edge_at(lat, a, b).index()] = v;
    }
    FlowClass::new(lat, delta).expect("figure flow conserves at every triangle")
}

pub fn fig_thick(lat: &Lattice) -> Vec<EdgeId> {
    let mut v: Vec<EdgeId> = FIG_THICK.iter().map(|&(a, b)| edge_at(lat, a, b)).collect();
    v.sort();
    v
}
