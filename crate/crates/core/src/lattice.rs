//! The triangular graph with parameter `n`: vertices, edges, hive triangles,
//! rhombi, turns and turnedges, all with dense ids and precomputed adjacency.
//!
//! Coordinates are `(row, pos)` with rows counted from the bottom and
//! positions from the left; row `r` holds `n + 1 - r` vertices. Every edge
//! bounds exactly one upright triangle, so edges are numbered three per
//! upright triangle (bottom, left, right) in row-major order.

use crate::error::{Error, Result};

macro_rules! dense_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub(crate) u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }

            #[inline]
            pub fn from_index(i: usize) -> Self {
                $name(i as u32)
            }
        }
    };
}

dense_id!(
    /// Index of a vertex of the triangular graph.
    VertexId
);
dense_id!(
    /// Index of an edge of the triangular graph.
    EdgeId
);
dense_id!(
    /// Index of a hive triangle.
    TriId
);
dense_id!(
    /// Index of a rhombus (one per interior edge, its diagonal).
    RhombusId
);
dense_id!(
    /// Index of a turn, i.e. a turnvertex of the turn digraph.
    TurnId
);
dense_id!(
    /// Index of a turnedge.
    TurnEdgeId
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TriVertex {
    pub row: usize,
    pub pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Horizontal,
    Rising,
    Falling,
}

/// One of the three sides of the big triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
}

/// Border membership of an edge with the 1-based index used for the fixed
/// throughputs: right and left sides count from the top, the bottom side
/// counts from the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BorderClass {
    Interior,
    Left(usize),
    Right(usize),
    Bottom(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Upright,
    Downright,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Clockwise,
    Counterclockwise,
}

#[derive(Clone, Debug)]
pub struct TriEdge {
    /// Endpoints in counterclockwise order with respect to the upright
    /// triangle bounded by this edge (tail, head).
    pub ends: [VertexId; 2],
    pub axis: Axis,
    pub border: BorderClass,
    pub upright: TriId,
    pub downright: Option<TriId>,
}

#[derive(Clone, Debug)]
pub struct HiveTriangle {
    pub orientation: Orientation,
    /// `corners[i]` is the corner opposite `sides[i]`.
    pub corners: [VertexId; 3],
    pub sides: [EdgeId; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContributionKind {
    Positive,
    Negative,
    Neutral,
}

impl ContributionKind {
    pub fn sign(self) -> i64 {
        match self {
            ContributionKind::Positive => 1,
            ContributionKind::Negative => -1,
            ContributionKind::Neutral => 0,
        }
    }
}

/// The shape of a slack contribution inside a rhombus: either a single turn
/// around one of the acute corners, or a turnedge crossing the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContributionShape {
    AcuteTurn(TurnId),
    Crossing(TurnEdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlackContribution {
    pub rhombus: RhombusId,
    pub kind: ContributionKind,
    pub shape: ContributionShape,
}

#[derive(Clone, Debug)]
pub struct Rhombus {
    pub up_tri: TriId,
    pub down_tri: TriId,
    pub diagonal: EdgeId,
    /// Sides in counterclockwise cyclic order, starting at the acute corner
    /// of the upright triangle.
    pub sides: [EdgeId; 4],
    /// Acute corners: `[upright apex, downright apex]`.
    pub acute: [VertexId; 2],
    /// Obtuse corners, i.e. the endpoints of the diagonal. `acute[0]`,
    /// `obtuse[0]`, `acute[1]`, `obtuse[1]` is the counterclockwise order.
    pub obtuse: [VertexId; 2],
    /// Position class: the axis of the diagonal.
    pub position: Axis,
    /// The 4 positive, 4 negative and 4 neutral contributions.
    pub contributions: [SlackContribution; 12],
    /// The two counterclockwise turns at the acute corners.
    pub negative_turns: [TurnId; 2],
    /// The two turnedges wrapping clockwise around an obtuse corner.
    pub negative_crossings: [TurnEdgeId; 2],
}

#[derive(Clone, Debug)]
pub struct Turn {
    pub triangle: TriId,
    pub entry: EdgeId,
    pub exit: EdgeId,
    /// The corner shared by the entry and exit sides.
    pub pivot: VertexId,
    pub sense: Sense,
}

#[derive(Clone, Debug)]
pub struct TurnEdge {
    pub from: TurnId,
    pub to: TurnId,
    /// The Δ-edge crossed when passing from `from` to `to`.
    pub crossed: EdgeId,
    /// Whether the crossing enters the upright triangle of `crossed`.
    pub into_upright: bool,
}

/// The fully indexed triangular graph.
#[derive(Clone, Debug)]
pub struct Lattice {
    n: usize,
    row_offset: Vec<usize>,
    up_offset: Vec<usize>,
    vertices: Vec<TriVertex>,
    edges: Vec<TriEdge>,
    triangles: Vec<HiveTriangle>,
    up_ids: Vec<TriId>,
    down_ids: Vec<Option<TriId>>,
    rhombi: Vec<Rhombus>,
    rhombus_of_edge: Vec<Option<RhombusId>>,
    rhombi_of_tri: Vec<Vec<RhombusId>>,
    turns: Vec<Turn>,
    turn_edges: Vec<TurnEdge>,
    out_start: Vec<u32>,
    out_len: Vec<u8>,
    in_edges: Vec<Vec<TurnEdgeId>>,
    border_edges: Vec<EdgeId>,
}

// (entry side index, exit side index) for the six turns of a triangle.
const TURN_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

impl Lattice {
    pub fn build(n: usize) -> Result<Lattice> {
        if n == 0 {
            return Err(Error::InvalidLatticeSize(n));
        }
        let mut row_offset = Vec::with_capacity(n + 2);
        let mut acc = 0;
        for r in 0..=n {
            row_offset.push(acc);
            acc += n + 1 - r;
        }
        let mut vertices = Vec::with_capacity(acc);
        for r in 0..=n {
            for p in 0..=(n - r) {
                vertices.push(TriVertex { row: r, pos: p });
            }
        }
        let mut up_offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for r in 0..n {
            up_offset.push(acc);
            acc += n - r;
        }
        let up_count = acc;

        let mut lat = Lattice {
            n,
            row_offset,
            up_offset,
            vertices,
            edges: Vec::with_capacity(3 * up_count),
            triangles: Vec::with_capacity(n * n),
            up_ids: vec![TriId(0); up_count],
            down_ids: vec![None; up_count],
            rhombi: Vec::new(),
            rhombus_of_edge: Vec::new(),
            rhombi_of_tri: Vec::new(),
            turns: Vec::with_capacity(6 * n * n),
            turn_edges: Vec::new(),
            out_start: Vec::new(),
            out_len: Vec::new(),
            in_edges: Vec::new(),
            border_edges: Vec::new(),
        };

        // Triangles in row-major order, uprights and downrights interleaved.
        for r in 0..n {
            for p in 0..(n - r) {
                let id = TriId::from_index(lat.triangles.len());
                lat.up_ids[lat.up_offset[r] + p] = id;
                let v = |row, pos| lat.vid(row, pos);
                lat.triangles.push(HiveTriangle {
                    orientation: Orientation::Upright,
                    corners: [v(r, p), v(r, p + 1), v(r + 1, p)],
                    sides: [
                        EdgeId::from_index(3 * (lat.up_offset[r] + p) + 2),
                        EdgeId::from_index(3 * (lat.up_offset[r] + p) + 1),
                        EdgeId::from_index(3 * (lat.up_offset[r] + p)),
                    ],
                });
                if p + 1 < n - r {
                    let id = TriId::from_index(lat.triangles.len());
                    lat.down_ids[lat.up_offset[r] + p] = Some(id);
                    let v = |row, pos| lat.vid(row, pos);
                    // Opposite (r+1,p): the left side of up(r,p+1); opposite
                    // (r+1,p+1): the right side of up(r,p); opposite (r,p+1):
                    // the bottom of up(r+1,p).
                    lat.triangles.push(HiveTriangle {
                        orientation: Orientation::Downright,
                        corners: [v(r + 1, p), v(r + 1, p + 1), v(r, p + 1)],
                        sides: [
                            EdgeId::from_index(3 * (lat.up_offset[r] + p + 1) + 1),
                            EdgeId::from_index(3 * (lat.up_offset[r] + p) + 2),
                            EdgeId::from_index(3 * (lat.up_offset[r + 1] + p)),
                        ],
                    });
                }
            }
        }

        // Edges: bottom, left, right of each upright triangle.
        for r in 0..n {
            for p in 0..(n - r) {
                let up = lat.up_ids[lat.up_offset[r] + p];
                let bottom_down = if r >= 1 { lat.down_ids[lat.up_offset[r - 1] + p] } else { None };
                let left_down = if p >= 1 { lat.down_ids[lat.up_offset[r] + p - 1] } else { None };
                let right_down = lat.down_ids[lat.up_offset[r] + p];
                let v = |row, pos| lat.vid(row, pos);
                let bottom = TriEdge {
                    ends: [v(r, p), v(r, p + 1)],
                    axis: Axis::Horizontal,
                    border: if r == 0 { BorderClass::Bottom(n - p) } else { BorderClass::Interior },
                    upright: up,
                    downright: bottom_down,
                };
                let left = TriEdge {
                    ends: [v(r + 1, p), v(r, p)],
                    axis: Axis::Rising,
                    border: if p == 0 { BorderClass::Left(n - r) } else { BorderClass::Interior },
                    upright: up,
                    downright: left_down,
                };
                let right = TriEdge {
                    ends: [v(r, p + 1), v(r + 1, p)],
                    axis: Axis::Falling,
                    border: if p + 1 == n - r { BorderClass::Right(n - r) } else { BorderClass::Interior },
                    upright: up,
                    downright: right_down,
                };
                lat.edges.push(bottom);
                lat.edges.push(left);
                lat.edges.push(right);
            }
        }
        lat.border_edges = (0..lat.edges.len())
            .filter(|&e| lat.edges[e].border != BorderClass::Interior)
            .map(EdgeId::from_index)
            .collect();

        lat.build_turns();
        lat.build_rhombi();
        Ok(lat)
    }

    fn build_turns(&mut self) {
        for t in 0..self.triangles.len() {
            let tri = &self.triangles[t];
            for &(i, j) in TURN_PAIRS.iter() {
                let pivot = tri.corners[3 - i - j];
                let sense = self.sense_of(pivot, tri.sides[i], tri.sides[j]);
                self.turns.push(Turn {
                    triangle: TriId::from_index(t),
                    entry: tri.sides[i],
                    exit: tri.sides[j],
                    pivot,
                    sense,
                });
            }
        }
        self.out_start = vec![0; self.turns.len()];
        self.out_len = vec![0; self.turns.len()];
        self.in_edges = vec![Vec::new(); self.turns.len()];
        for t in 0..self.turns.len() {
            self.out_start[t] = self.turn_edges.len() as u32;
            let exit = self.turns[t].exit;
            let here = self.turns[t].triangle;
            let Some(there) = self.other_triangle(exit, here) else { continue };
            let into_upright = self.triangles[there.index()].orientation == Orientation::Upright;
            for k in 0..6 {
                let cand = 6 * there.index() + k;
                if self.turns[cand].entry == exit {
                    let id = TurnEdgeId::from_index(self.turn_edges.len());
                    self.turn_edges.push(TurnEdge {
                        from: TurnId::from_index(t),
                        to: TurnId::from_index(cand),
                        crossed: exit,
                        into_upright,
                    });
                    self.in_edges[cand].push(id);
                    self.out_len[t] += 1;
                }
            }
        }
    }

    fn build_rhombi(&mut self) {
        self.rhombus_of_edge = vec![None; self.edges.len()];
        self.rhombi_of_tri = vec![Vec::new(); self.triangles.len()];
        for e in 0..self.edges.len() {
            let edge = &self.edges[e];
            let Some(down) = edge.downright else { continue };
            let up = edge.upright;
            let diag = EdgeId::from_index(e);
            let rid = RhombusId::from_index(self.rhombi.len());
            let up_apex = self.opposite_corner(up, diag);
            let down_apex = self.opposite_corner(down, diag);
            // ccw order: up apex, o1, down apex, o2.
            let [d0, d1] = edge.ends;
            let (o1, o2) = if self.cross(up_apex, d0, down_apex) > 0 { (d0, d1) } else { (d1, d0) };
            let sides = [
                self.edge_between(up, up_apex, o1),
                self.edge_between(down, o1, down_apex),
                self.edge_between(down, down_apex, o2),
                self.edge_between(up, o2, up_apex),
            ];

            let mut contributions = Vec::with_capacity(12);
            let mut negative_turns = Vec::with_capacity(2);
            let mut negative_crossings = Vec::with_capacity(2);
            for tri in [up, down] {
                for k in 0..6 {
                    let tid = TurnId::from_index(6 * tri.index() + k);
                    let turn = &self.turns[tid.index()];
                    if turn.entry == diag || turn.exit == diag {
                        continue;
                    }
                    let kind = match turn.sense {
                        Sense::Clockwise => ContributionKind::Positive,
                        Sense::Counterclockwise => {
                            negative_turns.push(tid);
                            ContributionKind::Negative
                        }
                    };
                    contributions.push(SlackContribution {
                        rhombus: rid,
                        kind,
                        shape: ContributionShape::AcuteTurn(tid),
                    });
                }
            }
            for te in 0..self.turn_edges.len() {
                let tedge = &self.turn_edges[te];
                if tedge.crossed != diag {
                    continue;
                }
                let a = &self.turns[tedge.from.index()];
                let b = &self.turns[tedge.to.index()];
                let kind = if a.pivot == b.pivot {
                    debug_assert_eq!(a.sense, b.sense);
                    match a.sense {
                        Sense::Counterclockwise => ContributionKind::Positive,
                        Sense::Clockwise => {
                            negative_crossings.push(TurnEdgeId::from_index(te));
                            ContributionKind::Negative
                        }
                    }
                } else {
                    ContributionKind::Neutral
                };
                contributions.push(SlackContribution {
                    rhombus: rid,
                    kind,
                    shape: ContributionShape::Crossing(TurnEdgeId::from_index(te)),
                });
            }
            let rhombus = Rhombus {
                up_tri: up,
                down_tri: down,
                diagonal: diag,
                sides,
                acute: [up_apex, down_apex],
                obtuse: [o1, o2],
                position: edge.axis,
                contributions: contributions.try_into().expect("12 contributions per rhombus"),
                negative_turns: negative_turns.try_into().expect("2 negative turns"),
                negative_crossings: negative_crossings.try_into().expect("2 negative crossings"),
            };
            self.rhombus_of_edge[e] = Some(rid);
            self.rhombi_of_tri[up.index()].push(rid);
            self.rhombi_of_tri[down.index()].push(rid);
            self.rhombi.push(rhombus);
        }
    }

    // Doubled x and unscaled y; orientation signs are preserved.
    fn coords(&self, v: VertexId) -> (i64, i64) {
        let tv = self.vertices[v.index()];
        ((2 * tv.pos + tv.row) as i64, tv.row as i64)
    }

    fn cross(&self, o: VertexId, a: VertexId, b: VertexId) -> i64 {
        let (ox, oy) = self.coords(o);
        let (ax, ay) = self.coords(a);
        let (bx, by) = self.coords(b);
        (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
    }

    fn sense_of(&self, pivot: VertexId, entry: EdgeId, exit: EdgeId) -> Sense {
        let mid = |e: EdgeId| {
            let [a, b] = self.edges[e.index()].ends;
            let (ax, ay) = self.coords(a);
            let (bx, by) = self.coords(b);
            (ax + bx, ay + by)
        };
        let (px, py) = self.coords(pivot);
        let (ex, ey) = mid(entry);
        let (xx, xy) = mid(exit);
        let (ux, uy) = (ex - 2 * px, ey - 2 * py);
        let (wx, wy) = (xx - 2 * px, xy - 2 * py);
        if ux * wy - uy * wx > 0 {
            Sense::Counterclockwise
        } else {
            Sense::Clockwise
        }
    }

    fn opposite_corner(&self, tri: TriId, side: EdgeId) -> VertexId {
        let t = &self.triangles[tri.index()];
        let i = t.sides.iter().position(|&s| s == side).expect("side of triangle");
        t.corners[i]
    }

    fn edge_between(&self, tri: TriId, a: VertexId, b: VertexId) -> EdgeId {
        let t = &self.triangles[tri.index()];
        *t.sides
            .iter()
            .find(|&&s| {
                let ends = self.edges[s.index()].ends;
                (ends[0] == a && ends[1] == b) || (ends[0] == b && ends[1] == a)
            })
            .expect("edge of triangle")
    }

    fn vid(&self, row: usize, pos: usize) -> VertexId {
        VertexId::from_index(self.row_offset[row] + pos)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_id(&self, row: usize, pos: usize) -> Option<VertexId> {
        (row <= self.n && pos <= self.n - row).then(|| self.vid(row, pos))
    }

    pub fn vertex(&self, v: VertexId) -> TriVertex {
        self.vertices[v.index()]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_rhombi(&self) -> usize {
        self.rhombi.len()
    }

    pub fn num_turns(&self) -> usize {
        self.turns.len()
    }

    pub fn num_turn_edges(&self) -> usize {
        self.turn_edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &TriEdge {
        &self.edges[e.index()]
    }

    pub fn triangle(&self, t: TriId) -> &HiveTriangle {
        &self.triangles[t.index()]
    }

    pub fn rhombus(&self, r: RhombusId) -> &Rhombus {
        &self.rhombi[r.index()]
    }

    pub fn turn(&self, t: TurnId) -> &Turn {
        &self.turns[t.index()]
    }

    pub fn turn_edge(&self, e: TurnEdgeId) -> &TurnEdge {
        &self.turn_edges[e.index()]
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId::from_index)
    }

    pub fn triangles(&self) -> impl Iterator<Item = TriId> {
        (0..self.triangles.len()).map(TriId::from_index)
    }

    pub fn rhombi(&self) -> impl Iterator<Item = RhombusId> {
        (0..self.rhombi.len()).map(RhombusId::from_index)
    }

    pub fn turns(&self) -> impl Iterator<Item = TurnId> {
        (0..self.turns.len()).map(TurnId::from_index)
    }

    pub fn turn_edges(&self) -> impl Iterator<Item = TurnEdgeId> {
        (0..self.turn_edges.len()).map(TurnEdgeId::from_index)
    }

    pub fn border_edges(&self) -> &[EdgeId] {
        &self.border_edges
    }

    /// The upright triangle with lower-left corner `(row, pos)`.
    pub fn upright_at(&self, row: usize, pos: usize) -> Option<TriId> {
        (row < self.n && pos < self.n - row).then(|| self.up_ids[self.up_offset[row] + pos])
    }

    /// The downright triangle whose bottom corner is `(row, pos + 1)`.
    pub fn downright_at(&self, row: usize, pos: usize) -> Option<TriId> {
        if row + 1 < self.n && pos + 1 < self.n - row {
            self.down_ids[self.up_offset[row] + pos]
        } else {
            None
        }
    }

    /// The triangle across `edge` from `tri`, if `edge` is interior.
    pub fn other_triangle(&self, edge: EdgeId, tri: TriId) -> Option<TriId> {
        let e = &self.edges[edge.index()];
        if e.upright == tri {
            e.downright
        } else if e.downright == Some(tri) {
            Some(e.upright)
        } else {
            None
        }
    }

    pub fn rhombus_with_diagonal(&self, edge: EdgeId) -> Option<RhombusId> {
        self.rhombus_of_edge[edge.index()]
    }

    /// Rhombi having `tri` as their upright or downright half.
    pub fn rhombi_containing(&self, tri: TriId) -> &[RhombusId] {
        &self.rhombi_of_tri[tri.index()]
    }

    pub fn rhombi_overlap(&self, a: RhombusId, b: RhombusId) -> bool {
        if a == b {
            return false;
        }
        let ra = &self.rhombi[a.index()];
        let rb = &self.rhombi[b.index()];
        ra.up_tri == rb.up_tri || ra.down_tri == rb.down_tri
    }

    pub fn border_edge(&self, side: Side, i: usize) -> Result<EdgeId> {
        let n = self.n;
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let r = n - i;
        let e = match side {
            Side::Bottom => 3 * (self.up_offset[0] + (n - i)),
            Side::Left => 3 * self.up_offset[r] + 1,
            Side::Right => 3 * (self.up_offset[r] + (n - r - 1)) + 2,
        };
        Ok(EdgeId::from_index(e))
    }

    /// Turns in `tri`, in id order.
    pub fn turns_in(&self, tri: TriId) -> impl Iterator<Item = TurnId> {
        (6 * tri.index()..6 * tri.index() + 6).map(TurnId::from_index)
    }

    /// Outgoing turnedges of `t` in id order (zero or two).
    pub fn out_edges(&self, t: TurnId) -> impl Iterator<Item = TurnEdgeId> {
        let s = self.out_start[t.index()] as usize;
        (s..s + self.out_len[t.index()] as usize).map(TurnEdgeId::from_index)
    }

    pub fn in_edges(&self, t: TurnId) -> &[TurnEdgeId] {
        &self.in_edges[t.index()]
    }

    /// The turnedge from `a` to `b`, if the two turns can be concatenated.
    pub fn find_turn_edge(&self, a: TurnId, b: TurnId) -> Option<TurnEdgeId> {
        self.out_edges(a).find(|&e| self.turn_edges[e.index()].to == b)
    }

    /// The same triangle and sides traversed the other way.
    pub fn reverse_turn(&self, t: TurnId) -> TurnId {
        let turn = &self.turns[t.index()];
        let tri = turn.triangle.index();
        (6 * tri..6 * tri + 6)
            .map(TurnId::from_index)
            .find(|&c| self.turns[c.index()].entry == turn.exit && self.turns[c.index()].exit == turn.entry)
            .expect("every turn has a reverse")
    }

    /// The turn in `tri` entering through `entry` and leaving through `exit`.
    pub fn turn_between(&self, tri: TriId, entry: EdgeId, exit: EdgeId) -> Option<TurnId> {
        self.turns_in(tri).find(|&t| self.turns[t.index()].entry == entry && self.turns[t.index()].exit == exit)
    }

    /// Triangles sharing an interior side with `tri`.
    pub fn neighbors(&self, tri: TriId) -> impl Iterator<Item = (EdgeId, TriId)> + '_ {
        self.triangles[tri.index()].sides.iter().filter_map(move |&s| self.other_triangle(s, tri).map(|o| (s, o)))
    }

    /// Planar position of a vertex (unit side length, y pointing up).
    pub fn position(&self, v: VertexId) -> (f64, f64) {
        let tv = self.vertices[v.index()];
        (tv.pos as f64 + 0.5 * tv.row as f64, tv.row as f64 * 3f64.sqrt() / 2.0)
    }
}
