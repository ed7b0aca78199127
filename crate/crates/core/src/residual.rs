//! The turn digraph R, its restriction R_f for a hive flow f, the further
//! restriction R_f[p] around a turnpath p, and breadth-first search for
//! completing p into a turncycle.
//!
//! Restrictions are overlays on the immutable lattice: R_f is a pair of
//! alive-masks, R_f[p] is a set of counters updated as p grows and shrinks.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::flow::{slacks, FlowClass};
use crate::lattice::{ContributionShape, Lattice, RhombusId, TriId, TurnEdgeId, TurnId};

/// R_f: R without the negative contributions of every f-flat rhombus.
#[derive(Clone, Debug)]
pub struct RestrictedRf<'a> {
    lat: &'a Lattice,
    flow: FlowClass,
    slack: Vec<i64>,
    turn_alive: Vec<bool>,
    edge_alive: Vec<bool>,
}

impl<'a> RestrictedRf<'a> {
    /// Requires `f` to be an integral hive flow on `lat`.
    pub fn build(lat: &'a Lattice, f: &FlowClass) -> Result<RestrictedRf<'a>> {
        f.validate(lat)?;
        let slack = slacks(lat, f);
        if slack.iter().any(|&s| s < 0) {
            return Err(Error::NotInPolytope);
        }
        let mut turn_alive = vec![true; lat.num_turns()];
        let mut edge_alive = vec![true; lat.num_turn_edges()];
        for r in lat.rhombi() {
            if slack[r.index()] == 0 {
                let rh = lat.rhombus(r);
                for t in rh.negative_turns {
                    turn_alive[t.index()] = false;
                }
                for e in rh.negative_crossings {
                    edge_alive[e.index()] = false;
                }
            }
        }
        Ok(RestrictedRf { lat, flow: f.clone(), slack, turn_alive, edge_alive })
    }

    pub fn lattice(&self) -> &'a Lattice {
        self.lat
    }

    pub fn flow(&self) -> &FlowClass {
        &self.flow
    }

    pub fn slack(&self, r: RhombusId) -> i64 {
        self.slack[r.index()]
    }

    pub fn has_turn(&self, t: TurnId) -> bool {
        self.turn_alive[t.index()]
    }

    /// Whether the turnedge and both of its turns survive in R_f.
    pub fn has_turn_edge(&self, e: TurnEdgeId) -> bool {
        let te = self.lat.turn_edge(e);
        self.edge_alive[e.index()] && self.turn_alive[te.from.index()] && self.turn_alive[te.to.index()]
    }

    pub fn deleted_turns(&self) -> usize {
        self.turn_alive.iter().filter(|a| !**a).count()
    }

    pub fn deleted_turn_edges(&self) -> usize {
        self.edge_alive.iter().filter(|a| !**a).count()
    }

    /// Checks that `turns` is a turnpath in R_f: alive, pairwise distinct,
    /// consecutive turns joined by surviving turnedges.
    pub fn check_path(&self, turns: &[TurnId]) -> Result<()> {
        if turns.is_empty() {
            return Err(Error::InvalidTurnPath("empty turnpath".into()));
        }
        if let Some(t) = turns.iter().find(|t| !self.has_turn(**t)) {
            return Err(Error::InvalidTurnPath(format!("turn {} is not in R_f", t.index())));
        }
        let distinct: HashSet<_> = turns.iter().collect();
        if distinct.len() != turns.len() {
            return Err(Error::InvalidTurnPath("turnpath repeats a turn".into()));
        }
        for w in turns.windows(2) {
            match self.lat.find_turn_edge(w[0], w[1]) {
                Some(e) if self.has_turn_edge(e) => {}
                _ => {
                    return Err(Error::InvalidTurnPath(format!(
                        "no turnedge from {} to {} in R_f",
                        w[0].index(),
                        w[1].index()
                    )))
                }
            }
        }
        Ok(())
    }

    /// Ordinary, and in no rhombus of slack 1 are both counterclockwise
    /// acute-corner turns used. Works for paths and cycles alike.
    pub fn is_secure_turnpath(&self, turns: &[TurnId]) -> bool {
        is_ordinary(self.lat, turns)
            && self
                .lat
                .rhombi()
                .all(|r| self.slack(r) != 1 || !self.lat.rhombus(r).negative_turns.iter().all(|t| turns.contains(t)))
    }
}

/// At most one turn in each hive triangle.
pub fn is_ordinary(lat: &Lattice, turns: &[TurnId]) -> bool {
    let mut seen = HashSet::with_capacity(turns.len());
    turns.iter().all(|&t| seen.insert(lat.turn(t).triangle))
}

/// The flow class of a turncycle given as its cyclic turn sequence (the
/// closing turn not repeated): every crossing adds 1 into the triangle it
/// enters, measured positive into upright triangles.
pub fn comb(lat: &Lattice, cycle: &[TurnId]) -> FlowClass {
    let mut f = FlowClass::zero(lat.n());
    let k = cycle.len();
    for i in 0..k {
        let a = cycle[i];
        let b = cycle[(i + 1) % k];
        let exit = lat.turn(a).exit;
        debug_assert_eq!(exit, lat.turn(b).entry, "turns do not concatenate");
        let into_up = lat.edge(exit).upright == lat.turn(b).triangle;
        f.delta[exit.index()] += if into_up { 1 } else { -1 };
    }
    f
}

/// Slack of `comb(cycle)` in `rho`, summed over the contributions the
/// turncycle uses: the crossings of the diagonal plus the acute-corner turns.
pub fn turncycle_slack(lat: &Lattice, cycle: &[TurnId], rho: RhombusId) -> i64 {
    let k = cycle.len();
    let consecutive = |from: TurnId, to: TurnId| (0..k).any(|i| cycle[i] == from && cycle[(i + 1) % k] == to);
    lat.rhombus(rho)
        .contributions
        .iter()
        .filter(|c| match c.shape {
            ContributionShape::AcuteTurn(t) => cycle.contains(&t),
            ContributionShape::Crossing(e) => {
                let te = lat.turn_edge(e);
                consecutive(te.from, te.to)
            }
        })
        .map(|c| c.kind.sign())
        .sum()
}

/// R_f[p] for a growing turnpath p: every turn in a triangle used by p is
/// removed, and so is every turn of a slack-1 rhombus in which p uses a
/// counterclockwise acute-corner turn; the endpoints of p stay.
#[derive(Clone, Debug)]
pub struct PathOverlay {
    path: Vec<TurnId>,
    tri_uses: Vec<u32>,
    rho_block: Vec<u32>,
}

impl PathOverlay {
    pub fn new(lat: &Lattice) -> PathOverlay {
        PathOverlay { path: Vec::new(), tri_uses: vec![0; lat.num_triangles()], rho_block: vec![0; lat.num_rhombi()] }
    }

    /// Builds the overlay for `p` after checking that p is an f-secure
    /// turnpath in R_f.
    pub fn for_path(rf: &RestrictedRf<'_>, p: &[TurnId]) -> Result<PathOverlay> {
        rf.check_path(p)?;
        if !rf.is_secure_turnpath(p) {
            return Err(Error::InvalidTurnPath("turnpath is not secure".into()));
        }
        let mut o = PathOverlay::new(rf.lattice());
        for &t in p {
            o.push(rf, t);
        }
        Ok(o)
    }

    pub fn path(&self) -> &[TurnId] {
        &self.path
    }

    pub fn start(&self) -> TurnId {
        self.path[0]
    }

    pub fn end(&self) -> TurnId {
        *self.path.last().expect("nonempty turnpath")
    }

    pub fn clear(&mut self, rf: &RestrictedRf<'_>) {
        while !self.path.is_empty() {
            self.pop(rf);
        }
    }

    pub fn push(&mut self, rf: &RestrictedRf<'_>, t: TurnId) {
        let lat = rf.lattice();
        let tri = lat.turn(t).triangle;
        self.tri_uses[tri.index()] += 1;
        for &r in lat.rhombi_containing(tri) {
            if rf.slack(r) == 1 && lat.rhombus(r).negative_turns.contains(&t) {
                self.rho_block[r.index()] += 1;
            }
        }
        self.path.push(t);
    }

    pub fn pop(&mut self, rf: &RestrictedRf<'_>) {
        let lat = rf.lattice();
        let t = self.path.pop().expect("pop on empty turnpath");
        let tri = lat.turn(t).triangle;
        self.tri_uses[tri.index()] -= 1;
        for &r in lat.rhombi_containing(tri) {
            if rf.slack(r) == 1 && lat.rhombus(r).negative_turns.contains(&t) {
                self.rho_block[r.index()] -= 1;
            }
        }
    }

    fn tri_free(&self, lat: &Lattice, tri: TriId) -> bool {
        self.tri_uses[tri.index()] == 0 && lat.rhombi_containing(tri).iter().all(|r| self.rho_block[r.index()] == 0)
    }

    /// Whether turn `v` is a vertex of R_f[p].
    pub fn has_turn(&self, rf: &RestrictedRf<'_>, v: TurnId) -> bool {
        if !rf.has_turn(v) {
            return false;
        }
        if v == self.start() || v == self.end() {
            return true;
        }
        self.tri_free(rf.lattice(), rf.lattice().turn(v).triangle)
    }

    pub fn has_turn_edge(&self, rf: &RestrictedRf<'_>, e: TurnEdgeId) -> bool {
        let te = rf.lattice().turn_edge(e);
        rf.has_turn_edge(e) && self.has_turn(rf, te.from) && self.has_turn(rf, te.to)
    }
}

/// Reusable breadth-first search state over R_f[p]. Layers are expanded in
/// ascending turn id, so among equally short completions the one whose
/// predecessors have the lowest ids wins.
#[derive(Clone, Debug)]
pub struct Bfs {
    stamp: Vec<u32>,
    generation: u32,
    pred: Vec<TurnId>,
    layer: Vec<TurnId>,
    next: Vec<TurnId>,
    ops: u64,
}

impl Bfs {
    pub fn new(lat: &Lattice) -> Bfs {
        Bfs {
            stamp: vec![0; lat.num_turns()],
            generation: 0,
            pred: vec![TurnId::from_index(0); lat.num_turns()],
            layer: Vec::new(),
            next: Vec::new(),
            ops: 0,
        }
    }

    /// Elementary operations (vertex expansions and edge inspections) so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    fn run(&mut self, rf: &RestrictedRf<'_>, overlay: &PathOverlay) -> bool {
        let lat = rf.lattice();
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let gen = self.generation;
        let (source, target) = (overlay.end(), overlay.start());
        self.layer.clear();
        self.layer.push(source);
        self.stamp[source.index()] = gen;
        while !self.layer.is_empty() {
            self.layer.sort_unstable();
            self.next.clear();
            for i in 0..self.layer.len() {
                let u = self.layer[i];
                self.ops += 1;
                for e in lat.out_edges(u) {
                    self.ops += 1;
                    let v = lat.turn_edge(e).to;
                    if self.stamp[v.index()] == gen || !overlay.has_turn_edge(rf, e) {
                        continue;
                    }
                    self.stamp[v.index()] = gen;
                    self.pred[v.index()] = u;
                    if v == target {
                        return true;
                    }
                    self.next.push(v);
                }
            }
            std::mem::swap(&mut self.layer, &mut self.next);
        }
        false
    }

    /// Whether R_f[p] has a turnpath from end(p) to start(p).
    pub fn is_extendable(&mut self, rf: &RestrictedRf<'_>, overlay: &PathOverlay) -> bool {
        self.run(rf, overlay)
    }

    /// A shortest turnpath q from end(p) to start(p) in R_f[p], both
    /// endpoints included.
    pub fn shortest_extension(&mut self, rf: &RestrictedRf<'_>, overlay: &PathOverlay) -> Option<Vec<TurnId>> {
        if !self.run(rf, overlay) {
            return None;
        }
        let (source, target) = (overlay.end(), overlay.start());
        let mut q = vec![target];
        let mut v = target;
        while v != source {
            v = self.pred[v.index()];
            q.push(v);
        }
        q.reverse();
        Some(q)
    }
}

/// Whether `p` (an f-secure turnpath in R_f) can be completed in R_f[p].
pub fn is_extendable(rf: &RestrictedRf<'_>, p: &[TurnId]) -> Result<bool> {
    let overlay = PathOverlay::for_path(rf, p)?;
    Ok(Bfs::new(rf.lattice()).is_extendable(rf, &overlay))
}

/// A shortest completion q of `p`; `p` followed by the interior of q is a
/// turncycle in R_f.
pub fn shortest_extension(rf: &RestrictedRf<'_>, p: &[TurnId]) -> Result<Vec<TurnId>> {
    if p.len() < 3 {
        return Err(Error::Precondition("shortest extensions need a turnpath of at least 3 turns".into()));
    }
    let overlay = PathOverlay::for_path(rf, p)?;
    Bfs::new(rf.lattice()).shortest_extension(rf, &overlay).ok_or(Error::NotExtendable)
}

/// The turncycle `p q` with the shared endpoints of q dropped.
pub fn close_cycle(p: &[TurnId], q: &[TurnId]) -> Vec<TurnId> {
    let mut c = p.to_vec();
    if q.len() > 2 {
        c.extend_from_slice(&q[1..q.len() - 1]);
    }
    c
}

/// Whether a turnpath uses some turn together with its reverse.
pub fn uses_turn_and_reverse(lat: &Lattice, q: &[TurnId]) -> bool {
    let set: HashSet<_> = q.iter().copied().collect();
    q.iter().any(|&t| set.contains(&lat.reverse_turn(t)))
}

/// Rhombi whose diagonal `q` crosses twice.
pub fn special_rhombi(lat: &Lattice, q: &[TurnId]) -> Vec<RhombusId> {
    let mut counts = vec![0u32; lat.num_rhombi()];
    for w in q.windows(2) {
        let edge = lat.turn(w[0]).exit;
        if let Some(r) = lat.rhombus_with_diagonal(edge) {
            counts[r.index()] += 1;
        }
    }
    lat.rhombi().filter(|r| counts[r.index()] >= 2).collect()
}

/// Whether some two rhombi crossed twice by `q` share a triangle.
pub fn special_rhombi_overlap(lat: &Lattice, q: &[TurnId]) -> bool {
    let sp = special_rhombi(lat, q);
    sp.iter().enumerate().any(|(i, &a)| sp[i + 1..].iter().any(|&b| lat.rhombi_overlap(a, b)))
}
