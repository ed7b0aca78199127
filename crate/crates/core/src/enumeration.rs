//! The neighbourhood generator (FindNeigh driven over all 3-turn seeds),
//! breadth-first enumeration of the integral hive flows with an optional
//! threshold, and the stretching check built on top of it.

use std::collections::HashSet;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::flow::{check_triple, in_polytope, BorderSpec, FlowClass, Partition};
use crate::lattice::{Lattice, TurnId};
use crate::oracles::{initial_hive_flow, SearchCap};
use crate::residual::{
    close_cycle, comb, special_rhombi_overlap, uses_turn_and_reverse, Bfs, PathOverlay, RestrictedRf,
};

/// Environment variable capping the instrumented operation count.
pub const OP_BUDGET_ENV: &str = "HIVEFLOW_OP_BUDGET";

/// Instrumentation shared by the generator and the enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Breadth-first searches on R_f[p].
    pub bfs_calls: u64,
    /// Vertex expansions and edge inspections inside those searches.
    pub bfs_ops: u64,
    /// Steps of the FindNeigh state machine (child inspections, frame pops).
    pub steps: u64,
    /// Nodes of the FindNeigh recursion tree, seeds included.
    pub recursion_nodes: u64,
    /// Seeds that passed the extendability check.
    pub seeds: u64,
    /// Flows printed by FindNeigh before deduplication.
    pub emissions: u64,
    /// Printed flows equal to the source flow.
    pub self_emissions: u64,
    /// Printed flows outside the polytope; never yielded.
    pub unsound_emissions: u64,
    /// Shortest extensions using a turn together with its reverse.
    pub reverse_violations: u64,
    /// Shortest extensions with two overlapping rhombi crossed twice.
    pub special_overlap_violations: u64,
    /// Shortest extensions computed.
    pub shortest_extensions: u64,
    /// Membership checks of printed flows.
    pub membership_checks: u64,
}

impl Counters {
    /// Elementary operations: search work, state machine steps, and one unit
    /// per rhombus for every membership check.
    pub fn ops(&self, lat: &Lattice) -> u64 {
        self.bfs_ops + self.steps + self.membership_checks * (lat.num_rhombi() as u64 + lat.num_edges() as u64)
    }

    pub fn absorb(&mut self, other: &Counters) {
        self.bfs_calls += other.bfs_calls;
        self.bfs_ops += other.bfs_ops;
        self.steps += other.steps;
        self.recursion_nodes += other.recursion_nodes;
        self.seeds += other.seeds;
        self.emissions += other.emissions;
        self.self_emissions += other.self_emissions;
        self.unsound_emissions += other.unsound_emissions;
        self.reverse_violations += other.reverse_violations;
        self.special_overlap_violations += other.special_overlap_violations;
        self.shortest_extensions += other.shortest_extensions;
        self.membership_checks += other.membership_checks;
    }
}

/// A Littlewood-Richardson query: the triple, the lattice and the border.
#[derive(Clone, Debug)]
pub struct Problem {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
    lattice: Lattice,
    spec: BorderSpec,
}

impl Problem {
    /// `n` defaults to the largest number of nonzero parts (at least 1).
    pub fn new(lambda: &Partition, mu: &Partition, nu: &Partition, n: Option<usize>) -> Result<Problem> {
        let default = check_triple(lambda, mu, nu)?;
        let n = n.unwrap_or(default);
        let spec = BorderSpec::new(lambda, mu, nu, n)?;
        Ok(Problem { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone(), lattice: Lattice::build(n)?, spec })
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn spec(&self) -> &BorderSpec {
        &self.spec
    }

    pub fn contains(&self, f: &FlowClass) -> bool {
        f.validate(&self.lattice).is_ok() && in_polytope(&self.lattice, f, &self.spec)
    }

    pub fn initial_flow(&self) -> Result<Option<FlowClass>> {
        initial_hive_flow(&self.lattice, &self.spec, SearchCap::default())
    }

    pub fn neighbors(&self, f: &FlowClass) -> Result<NeighborStream<'_>> {
        if !self.contains(f) {
            return Err(Error::NotInPolytope);
        }
        NeighborStream::new(&self.lattice, &self.spec, f)
    }
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    next_child: usize,
    found: bool,
}

/// The flows printed by FindNeigh over every extendable 3-turn seed in R_f,
/// in seed order, deduplicated, with the source flow itself suppressed.
pub struct NeighborStream<'a> {
    lat: &'a Lattice,
    spec: &'a BorderSpec,
    rf: RestrictedRf<'a>,
    overlay: PathOverlay,
    bfs: Bfs,
    seeds: Vec<[TurnId; 3]>,
    next_seed: usize,
    stack: Vec<Frame>,
    pending: Option<FlowClass>,
    seen: HashSet<FlowClass>,
    counters: Counters,
    budget: Option<u64>,
    budget_hit: bool,
}

impl<'a> NeighborStream<'a> {
    fn new(lat: &'a Lattice, spec: &'a BorderSpec, f: &FlowClass) -> Result<NeighborStream<'a>> {
        let rf = RestrictedRf::build(lat, f)?;
        let mut seeds = Vec::new();
        for t1 in lat.turns() {
            if !rf.has_turn(t1) {
                continue;
            }
            for e1 in lat.out_edges(t1) {
                if !rf.has_turn_edge(e1) {
                    continue;
                }
                let t2 = lat.turn_edge(e1).to;
                for e2 in lat.out_edges(t2) {
                    if rf.has_turn_edge(e2) {
                        seeds.push([t1, t2, lat.turn_edge(e2).to]);
                    }
                }
            }
        }
        let mut seen = HashSet::new();
        seen.insert(f.clone());
        Ok(NeighborStream {
            lat,
            spec,
            overlay: PathOverlay::new(lat),
            bfs: Bfs::new(lat),
            rf,
            seeds,
            next_seed: 0,
            stack: Vec::new(),
            pending: None,
            seen,
            counters: Counters::default(),
            budget: None,
            budget_hit: false,
        })
    }

    /// Stops the stream once the operation count exceeds `budget`.
    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn counters(&self) -> Counters {
        let mut c = self.counters.clone();
        c.bfs_ops = self.bfs.ops();
        c
    }

    pub fn ops(&self) -> u64 {
        self.counters().ops(self.lat)
    }

    pub fn budget_exceeded(&self) -> bool {
        self.budget_hit
    }

    pub fn num_seeds(&self) -> usize {
        self.seeds.len()
    }

    fn extendable(&mut self) -> bool {
        self.counters.bfs_calls += 1;
        self.bfs.is_extendable(&self.rf, &self.overlay)
    }

    fn print(&mut self, cycle: &[TurnId]) {
        self.counters.emissions += 1;
        let flow = self.rf.flow();
        let g = match flow.checked_add(&comb(self.lat, cycle)) {
            Ok(g) => g,
            Err(_) => {
                self.counters.unsound_emissions += 1;
                return;
            }
        };
        if g == *flow {
            self.counters.self_emissions += 1;
        }
        self.counters.membership_checks += 1;
        if !in_polytope(self.lat, &g, self.spec) {
            self.counters.unsound_emissions += 1;
            return;
        }
        if self.seen.insert(g.clone()) {
            self.pending = Some(g);
        }
    }

    // Advances the FindNeigh state machine by one step.
    fn step(&mut self) -> bool {
        self.counters.steps += 1;
        let Some(frame) = self.stack.last().copied() else {
            if self.next_seed == self.seeds.len() {
                return false;
            }
            let seed = self.seeds[self.next_seed];
            self.next_seed += 1;
            self.overlay.clear(&self.rf);
            for t in seed {
                self.overlay.push(&self.rf, t);
            }
            debug_assert!(self.rf.is_secure_turnpath(&seed));
            if self.extendable() {
                self.counters.seeds += 1;
                self.counters.recursion_nodes += 1;
                self.stack.push(Frame { next_child: 0, found: false });
            } else {
                self.overlay.clear(&self.rf);
            }
            return true;
        };
        let end = self.overlay.end();
        let children: Vec<_> = self.lat.out_edges(end).collect();
        if frame.next_child < children.len() {
            let e = children[frame.next_child];
            self.stack.last_mut().unwrap().next_child += 1;
            if !self.overlay.has_turn_edge(&self.rf, e) {
                return true;
            }
            let z = self.lat.turn_edge(e).to;
            if z == self.overlay.start() {
                self.stack.last_mut().unwrap().found = true;
                let cycle = self.overlay.path().to_vec();
                self.print(&cycle);
                return true;
            }
            self.overlay.push(&self.rf, z);
            debug_assert!(self.rf.is_secure_turnpath(self.overlay.path()));
            if self.extendable() {
                self.stack.last_mut().unwrap().found = true;
                self.counters.recursion_nodes += 1;
                self.stack.push(Frame { next_child: 0, found: false });
            } else {
                self.overlay.pop(&self.rf);
            }
            return true;
        }
        if !frame.found {
            self.counters.bfs_calls += 1;
            self.counters.shortest_extensions += 1;
            let q = self
                .bfs
                .shortest_extension(&self.rf, &self.overlay)
                .expect("frames are only opened on extendable turnpaths");
            if uses_turn_and_reverse(self.lat, &q) {
                self.counters.reverse_violations += 1;
            }
            if special_rhombi_overlap(self.lat, &q) {
                self.counters.special_overlap_violations += 1;
            }
            let cycle = close_cycle(self.overlay.path(), &q);
            self.print(&cycle);
        }
        self.stack.pop();
        if self.stack.is_empty() {
            self.overlay.clear(&self.rf);
        } else {
            self.overlay.pop(&self.rf);
        }
        true
    }
}

impl Iterator for NeighborStream<'_> {
    type Item = FlowClass;

    fn next(&mut self) -> Option<FlowClass> {
        loop {
            if let Some(g) = self.pending.take() {
                return Some(g);
            }
            if let Some(b) = self.budget {
                if self.ops() > b {
                    self.budget_hit = true;
                    return None;
                }
            }
            if !self.step() {
                return None;
            }
        }
    }
}

/// The neighbourhood generator for `f`, which must be an integral hive
/// flow with the border of `problem`.
pub fn neigh_gen<'a>(problem: &'a Problem, f: &FlowClass) -> Result<NeighborStream<'a>> {
    problem.neighbors(f)
}

/// Progress snapshot passed to the enumeration callback.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress<'a> {
    pub discovered: usize,
    pub expanded: usize,
    pub ops: u64,
    /// The flow just discovered, if this snapshot reports a discovery.
    pub found: Option<&'a FlowClass>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumOptions {
    /// Stop as soon as this many flows are known.
    pub threshold: Option<u64>,
    /// Refuse once more operations than this were spent.
    pub op_budget: Option<u64>,
}

impl EnumOptions {
    /// Options with the operation budget taken from `HIVEFLOW_OP_BUDGET`.
    pub fn from_env() -> EnumOptions {
        let op_budget = std::env::var(OP_BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok());
        EnumOptions { threshold: None, op_budget }
    }
}

/// Result of a breadth-first enumeration.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// Discovered flows in discovery order.
    pub flows: Vec<FlowClass>,
    /// Number of flows whose neighbourhood was generated completely.
    pub expanded: usize,
    /// Whether the threshold was reached (always false without one).
    pub reached_threshold: bool,
    pub counters: Counters,
    pub ops: u64,
    /// Largest operation count between two consecutive new discoveries,
    /// counted from the start of the first expansion.
    pub max_gap: u64,
    /// Operations after the last new discovery until termination.
    pub tail_ops: u64,
    /// Operation count at each discovery.
    pub discovery_ops: Vec<u64>,
}

impl Enumeration {
    pub fn count(&self) -> u64 {
        self.flows.len() as u64
    }
}

/// Breadth-first search over the neighbourhood graph from `start`. With a
/// threshold `t` this is the thresholded search: it returns as soon as `t`
/// flows are known, including the case `t = 1` where only the start is.
pub fn enumerate_from(
    problem: &Problem,
    start: &FlowClass,
    opts: EnumOptions,
    progress: &mut dyn FnMut(Progress<'_>),
) -> Result<Enumeration> {
    if !problem.contains(start) {
        return Err(Error::NotInPolytope);
    }
    let lat = problem.lattice();
    let mut s: IndexSet<FlowClass> = IndexSet::new();
    s.insert(start.clone());
    let mut out = Enumeration::default();
    out.discovery_ops.push(0);
    let reached = |len: usize| opts.threshold.is_some_and(|t| len as u64 >= t);
    if reached(s.len()) {
        out.reached_threshold = true;
        out.flows = s.into_iter().collect();
        return Ok(out);
    }
    let mut spent = 0u64;
    let mut last_new = 0u64;
    let mut t = 0usize;
    while t < s.len() {
        let f = s[t].clone();
        let remaining = opts.op_budget.map(|b| b.saturating_sub(spent));
        let mut stream = problem.neighbors(&f)?.with_budget(remaining);
        let base = spent;
        while let Some(g) = stream.next() {
            let now = base + stream.ops();
            if s.insert(g) {
                out.max_gap = out.max_gap.max(now - last_new);
                last_new = now;
                out.discovery_ops.push(now);
                progress(Progress { discovered: s.len(), expanded: t, ops: now, found: s.last() });
                if reached(s.len()) {
                    out.counters.absorb(&stream.counters());
                    out.ops = now;
                    out.expanded = t;
                    out.reached_threshold = true;
                    out.flows = s.into_iter().collect();
                    return Ok(out);
                }
            }
        }
        if stream.budget_exceeded() {
            return Err(Error::OpBudgetExceeded(opts.op_budget.unwrap_or(0)));
        }
        spent = base + stream.ops();
        out.counters.absorb(&stream.counters());
        t += 1;
        progress(Progress { discovered: s.len(), expanded: t, ops: spent, found: None });
    }
    debug_assert_eq!(out.counters.ops(lat), spent);
    out.ops = spent;
    out.tail_ops = spent - last_new;
    out.expanded = t;
    out.flows = s.into_iter().collect();
    Ok(out)
}

/// Enumerates all integral hive flows of the problem, starting from the
/// flow found by the feasibility search. Empty when there is none.
pub fn enumerate(problem: &Problem, opts: EnumOptions, progress: &mut dyn FnMut(Progress<'_>)) -> Result<Enumeration> {
    match problem.initial_flow()? {
        None => Ok(Enumeration::default()),
        Some(f) => enumerate_from(problem, &f, opts, progress),
    }
}

/// Whether c(λ, μ, ν) ≥ t.
pub fn lr_threshold(lambda: &Partition, mu: &Partition, nu: &Partition, t: u64) -> Result<bool> {
    if t == 0 {
        return Err(Error::Precondition("the threshold must be positive".into()));
    }
    let problem = Problem::new(lambda, mu, nu, None)?;
    let opts = EnumOptions { threshold: Some(t), ..EnumOptions::from_env() };
    Ok(enumerate(&problem, opts, &mut |_| {})?.reached_threshold)
}

/// c(λ, μ, ν) together with all integral hive flows.
pub fn lr_compute(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<(u64, Vec<FlowClass>)> {
    let problem = Problem::new(lambda, mu, nu, None)?;
    let e = enumerate(&problem, EnumOptions::from_env(), &mut |_| {})?;
    Ok((e.count(), e.flows))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StretchRow {
    pub m: u64,
    pub count: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StretchReport {
    pub rows: Vec<StretchRow>,
}

impl StretchReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// For a triple with coefficient 2, computes c(Mλ, Mμ, Mν) for M = 1..=m_max
/// and compares with M + 1.
pub fn stretch_check(lambda: &Partition, mu: &Partition, nu: &Partition, m_max: u64) -> Result<StretchReport> {
    let (c, _) = lr_compute(lambda, mu, nu)?;
    if c != 2 {
        return Err(Error::Precondition(format!("stretching check needs coefficient 2, got {c}")));
    }
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let (count, _) = lr_compute(&lambda.scaled(m)?, &mu.scaled(m)?, &nu.scaled(m)?)?;
        rows.push(StretchRow { m, count, pass: count == m + 1 });
    }
    Ok(StretchReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn zero_triple_has_one_flow() {
        let (c, flows) = lr_compute(&p(""), &p(""), &p("")).unwrap();
        assert_eq!(c, 1);
        assert!(flows[0].is_zero());
    }

    #[test]
    fn smallest_coefficient_two() {
        let (c, flows) = lr_compute(&p("2,1"), &p("2,1"), &p("3,2,1")).unwrap();
        assert_eq!(c, 2);
        assert_ne!(flows[0], flows[1]);
    }

    #[test]
    fn threshold_with_one_flow() {
        assert!(lr_threshold(&p("1"), &p("1"), &p("2"), 1).unwrap());
        assert!(!lr_threshold(&p("1"), &p("1"), &p("2"), 2).unwrap());
        assert!(!lr_threshold(&p("2"), &p("2"), &p("1,1,1,1"), 1).unwrap());
        assert!(lr_threshold(&p("1"), &p("1"), &p("2"), 0).is_err());
    }

    #[test]
    fn size_mismatch_is_rejected() {
        assert!(matches!(lr_compute(&p("1"), &p("1"), &p("3")), Err(Error::SizeMismatch { .. })));
    }
}
