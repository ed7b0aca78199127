//! Hives, the flow/hive bridge, a complete backtracking search over integral
//! hives (feasibility and brute-force counting), the Littlewood-Richardson
//! rule by tableau backtracking, and brute-force neighbourhoods via explicit
//! proper cycles.

use std::io::Write;

use crate::error::{Error, Result};
use crate::flow::{check_triple, in_polytope, BorderSpec, FlowClass, Partition, ProperCycle};
use crate::lattice::{Lattice, RhombusId, TriId, VertexId};

/// Integer labels on the vertices of Δ, indexed by vertex id. The top
/// vertex carries 0; going down the right side adds λ₁, λ₂, …, going down
/// the left side adds ν₁, ν₂, …, and the bottom row adds μ₁, μ₂, … from
/// right to left.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hive {
    pub n: usize,
    pub labels: Vec<i64>,
}

impl Hive {
    pub fn label(&self, v: VertexId) -> i64 {
        self.labels[v.index()]
    }

    /// Obtuse-corner labels minus acute-corner labels.
    pub fn surplus(&self, lat: &Lattice, r: RhombusId) -> i64 {
        let rh = lat.rhombus(r);
        self.label(rh.obtuse[0]) + self.label(rh.obtuse[1]) - self.label(rh.acute[0]) - self.label(rh.acute[1])
    }

    pub fn is_valid(&self, lat: &Lattice) -> bool {
        lat.rhombi().all(|r| self.surplus(lat, r) >= 0)
    }
}

/// Throughput of an edge is the label drop along its counterclockwise
/// orientation around the upright triangle.
pub fn hive_to_flow(lat: &Lattice, h: &Hive) -> FlowClass {
    let delta = lat
        .edges()
        .map(|e| {
            let [tail, head] = lat.edge(e).ends;
            h.label(tail) - h.label(head)
        })
        .collect();
    FlowClass { n: lat.n(), delta }
}

/// Integrates a conserving flow into hive labels, top vertex 0.
pub fn flow_to_hive(lat: &Lattice, f: &FlowClass) -> Result<Hive> {
    f.validate(lat)?;
    let n = lat.n();
    let mut labels = vec![0i64; lat.num_vertices()];
    for r in (0..n).rev() {
        let left = lat.border_edge(crate::lattice::Side::Left, n - r)?;
        let [upper, lower] = lat.edge(left).ends;
        labels[lower.index()] = labels[upper.index()].checked_sub(f.get(left)).ok_or(Error::Overflow)?;
        for p in 0..(n - r) {
            let up = lat.upright_at(r, p).expect("upright triangle in range");
            let bottom = lat.triangle(up).sides[2];
            let [a, b] = lat.edge(bottom).ends;
            labels[b.index()] = labels[a.index()].checked_sub(f.get(bottom)).ok_or(Error::Overflow)?;
        }
    }
    let h = Hive { n, labels };
    if hive_to_flow(lat, &h) != *f {
        return Err(Error::InvalidFlow("flow does not integrate to a hive".into()));
    }
    Ok(h)
}

/// Boundary labels forced by (λ, μ, ν), `None` on interior vertices.
pub fn boundary_labels(lat: &Lattice, spec: &BorderSpec) -> Vec<Option<i64>> {
    use crate::lattice::Side;
    let n = lat.n();
    let lambda = spec.side_values(Side::Right);
    let mu = spec.side_values(Side::Bottom);
    let nu: Vec<i64> = spec.side_values(Side::Left).iter().map(|v| -v).collect();
    let mut labels = vec![None; lat.num_vertices()];
    let prefix = |v: &[i64], k: usize| v[..k].iter().sum::<i64>();
    let size_lambda = prefix(&lambda, n);
    for k in 0..=n {
        let r = n - k;
        labels[lat.vertex_id(r, n - r).unwrap().index()] = Some(prefix(&lambda, k));
        labels[lat.vertex_id(r, 0).unwrap().index()] = Some(prefix(&nu, k));
        // bottom vertex (0, n - k)
        labels[lat.vertex_id(0, n - k).unwrap().index()] = Some(size_lambda + prefix(&mu, k));
    }
    labels
}

const INF: i64 = i64::MAX / 8;

/// Limits for the exhaustive hive search.
#[derive(Clone, Copy, Debug)]
pub struct SearchCap {
    /// Maximum number of search nodes before refusing.
    pub max_nodes: u64,
}

impl Default for SearchCap {
    fn default() -> Self {
        SearchCap { max_nodes: 20_000_000 }
    }
}

struct HiveSearch {
    // Per rhombus: [o1, o2, a1, a2].
    constraints: Vec<[usize; 4]>,
    // Rhombi touching each vertex.
    touching: Vec<Vec<usize>>,
    nodes: u64,
    cap: SearchCap,
}

impl HiveSearch {
    fn new(lat: &Lattice, cap: SearchCap) -> HiveSearch {
        let constraints: Vec<[usize; 4]> = lat
            .rhombi()
            .map(|r| {
                let rh = lat.rhombus(r);
                [rh.obtuse[0].index(), rh.obtuse[1].index(), rh.acute[0].index(), rh.acute[1].index()]
            })
            .collect();
        let mut touching = vec![Vec::new(); lat.num_vertices()];
        for (i, c) in constraints.iter().enumerate() {
            for &v in c {
                touching[v].push(i);
            }
        }
        HiveSearch { constraints, touching, nodes: 0, cap }
    }

    // Tightens intervals to a fixpoint (bounded number of rounds). Returns
    // false if some interval becomes empty.
    fn propagate(&self, lo: &mut [i64], hi: &mut [i64]) -> bool {
        let mut dirty: Vec<bool> = vec![true; self.constraints.len()];
        let mut queue: Vec<usize> = (0..self.constraints.len()).collect();
        let mut steps = 0usize;
        let limit = 64 * self.constraints.len().max(1);
        while let Some(ci) = queue.pop() {
            dirty[ci] = false;
            steps += 1;
            if steps > limit {
                break;
            }
            let [o1, o2, a1, a2] = self.constraints[ci];
            let mut changed = Vec::new();
            // o1 + o2 >= a1 + a2
            let tighten_lo = |x: usize, other: usize, lo: &mut [i64], hi: &[i64], changed: &mut Vec<usize>| {
                if lo[a1] <= -INF || lo[a2] <= -INF || hi[other] >= INF {
                    return;
                }
                let b = lo[a1] + lo[a2] - hi[other];
                if b > lo[x] {
                    lo[x] = b;
                    changed.push(x);
                }
            };
            tighten_lo(o1, o2, lo, hi, &mut changed);
            tighten_lo(o2, o1, lo, hi, &mut changed);
            let tighten_hi = |x: usize, other: usize, lo: &[i64], hi: &mut [i64], changed: &mut Vec<usize>| {
                if hi[o1] >= INF || hi[o2] >= INF || lo[other] <= -INF {
                    return;
                }
                let b = hi[o1] + hi[o2] - lo[other];
                if b < hi[x] {
                    hi[x] = b;
                    changed.push(x);
                }
            };
            tighten_hi(a1, a2, lo, hi, &mut changed);
            tighten_hi(a2, a1, lo, hi, &mut changed);
            for v in changed {
                if lo[v] > hi[v] {
                    return false;
                }
                for &cj in &self.touching[v] {
                    if !dirty[cj] {
                        dirty[cj] = true;
                        queue.push(cj);
                    }
                }
            }
        }
        true
    }

    // Depth-first search; `visit` returns false to stop early.
    fn search(&mut self, lo: Vec<i64>, hi: Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.cap.max_nodes {
            return Err(Error::CapExceeded(format!("hive search exceeded {} nodes", self.cap.max_nodes)));
        }
        let mut lo = lo;
        let mut hi = hi;
        if !self.propagate(&mut lo, &mut hi) {
            return Ok(true);
        }
        // Smallest open domain first, lowest vertex id on ties.
        let pick = (0..lo.len()).filter(|&v| lo[v] < hi[v]).min_by_key(|&v| (hi[v].saturating_sub(lo[v]), v));
        let Some(v) = pick else {
            if self.constraints.iter().all(|&[o1, o2, a1, a2]| lo[o1] + lo[o2] >= lo[a1] + lo[a2]) {
                return Ok(visit(&lo));
            }
            return Ok(true);
        };
        if lo[v] <= -INF || hi[v] >= INF {
            return Err(Error::CapExceeded(format!("unbounded label domain at vertex {v}")));
        }
        for x in lo[v]..=hi[v] {
            let mut l = lo.clone();
            let mut h = hi.clone();
            l[v] = x;
            h[v] = x;
            if !self.search(l, h, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Visits every integral hive with the boundary of `spec`, in a fixed
/// deterministic order, until `visit` returns false.
pub fn for_each_hive(
    lat: &Lattice,
    spec: &BorderSpec,
    cap: SearchCap,
    visit: &mut dyn FnMut(&Hive) -> bool,
) -> Result<()> {
    let boundary = boundary_labels(lat, spec);
    let lo: Vec<i64> = boundary.iter().map(|b| b.unwrap_or(-INF)).collect();
    let hi: Vec<i64> = boundary.iter().map(|b| b.unwrap_or(INF)).collect();
    let n = lat.n();
    let mut search = HiveSearch::new(lat, cap);
    search.search(lo, hi, &mut |labels| visit(&Hive { n, labels: labels.to_vec() }))?;
    Ok(())
}

pub fn enumerate_hives(lat: &Lattice, spec: &BorderSpec, cap: SearchCap) -> Result<Vec<Hive>> {
    let mut out = Vec::new();
    for_each_hive(lat, spec, cap, &mut |h| {
        out.push(h.clone());
        true
    })?;
    Ok(out)
}

/// Number of integral hives with the boundary given by (λ, μ, ν) on the
/// lattice of size `n`.
pub fn hive_count_bruteforce(
    lambda: &Partition,
    mu: &Partition,
    nu: &Partition,
    n: usize,
    cap: SearchCap,
) -> Result<u64> {
    let lat = Lattice::build(n)?;
    let spec = BorderSpec::new(lambda, mu, nu, n)?;
    let mut count = 0u64;
    for_each_hive(&lat, &spec, cap, &mut |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// An integral hive flow with the given border, or `None` if there is none.
/// Complete but exponential in the worst case.
pub fn initial_hive_flow(lat: &Lattice, spec: &BorderSpec, cap: SearchCap) -> Result<Option<FlowClass>> {
    let mut found = None;
    for_each_hive(lat, spec, cap, &mut |h| {
        found = Some(hive_to_flow(lat, h));
        false
    })?;
    Ok(found)
}

/// Number of skew tableaux of shape ν/λ and content μ whose reverse
/// reading word is a lattice word. Zero when the sizes do not match or λ
/// does not fit inside ν.
pub fn lr_rule_count(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.size() + mu.size() != nu.size() {
        return 0;
    }
    let rows = nu.length();
    if lambda.length() > rows || (1..=rows).any(|i| lambda.part(i) > nu.part(i)) {
        return 0;
    }
    // Cells in reading order: rows top to bottom, right to left.
    let mut cells = Vec::new();
    for i in 1..=rows {
        for j in (lambda.part(i)..nu.part(i)).rev() {
            cells.push((i, j as usize));
        }
    }
    let width = nu.part(1) as usize;
    let content: Vec<u64> = mu.parts().iter().copied().take_while(|&p| p > 0).collect();
    let mut grid = vec![vec![0usize; width]; rows + 1];
    let mut counts = vec![0u64; content.len() + 1];
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        lambda: &Partition,
        nu: &Partition,
        content: &[u64],
        grid: &mut Vec<Vec<usize>>,
        counts: &mut Vec<u64>,
    ) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let (i, j) = cells[k];
        // Weakly increasing rows: at most the entry to the right.
        let mut max = content.len();
        if (j as u64) + 1 < nu.part(i) {
            max = max.min(grid[i][j + 1]);
        }
        // Strictly increasing columns: above the entry in the row above.
        let mut min = 1;
        if i > 1 && (j as u64) >= lambda.part(i - 1) {
            min = grid[i - 1][j] + 1;
        }
        let mut total = 0;
        for v in min..=max {
            if counts[v] >= content[v - 1] || (v > 1 && counts[v] >= counts[v - 1]) {
                continue;
            }
            counts[v] += 1;
            grid[i][j] = v;
            total += go(k + 1, cells, lambda, nu, content, grid, counts);
            counts[v] -= 1;
        }
        grid[i][j] = 0;
        total
    }
    go(0, &cells, lambda, nu, &content, &mut grid, &mut counts)
}

/// All proper cycles (each simple cycle of the triangle adjacency graph in
/// both directions). Refuses above `n = 5`.
pub fn proper_cycles(lat: &Lattice) -> Result<Vec<ProperCycle>> {
    if lat.n() > 5 {
        return Err(Error::CapExceeded(format!("proper cycle enumeration is limited to n <= 5, got {}", lat.n())));
    }
    let adj: Vec<Vec<TriId>> = lat.triangles().map(|t| lat.neighbors(t).map(|(_, o)| o).collect()).collect();
    let mut out = Vec::new();
    let mut on_path = vec![false; lat.num_triangles()];
    let mut path = Vec::new();
    fn dfs(
        lat: &Lattice,
        adj: &[Vec<TriId>],
        s: TriId,
        u: TriId,
        path: &mut Vec<TriId>,
        on_path: &mut [bool],
        out: &mut Vec<ProperCycle>,
    ) {
        for &w in &adj[u.index()] {
            if w == s && path.len() >= 3 {
                out.push(ProperCycle::from_triangles(lat, path).expect("simple cycle of adjacent triangles"));
            } else if w > s && !on_path[w.index()] {
                on_path[w.index()] = true;
                path.push(w);
                dfs(lat, adj, s, w, path, on_path, out);
                path.pop();
                on_path[w.index()] = false;
            }
        }
    }
    for s in lat.triangles() {
        on_path[s.index()] = true;
        path.push(s);
        dfs(lat, &adj, s, s, &mut path, &mut on_path, &mut out);
        path.pop();
        on_path[s.index()] = false;
    }
    Ok(out)
}

/// `{f + c : c proper cycle, f + c integral hive flow with the border of
/// spec}`, sorted. Refuses above `n = 4`.
pub fn bruteforce_neighbors(lat: &Lattice, spec: &BorderSpec, f: &FlowClass) -> Result<Vec<FlowClass>> {
    if lat.n() > 4 {
        return Err(Error::CapExceeded(format!("brute-force neighbourhoods are limited to n <= 4, got {}", lat.n())));
    }
    bruteforce_neighbors_with(lat, spec, f, &proper_cycles(lat)?)
}

/// As [`bruteforce_neighbors`], with the cycle list computed by the caller.
pub fn bruteforce_neighbors_with(
    lat: &Lattice,
    spec: &BorderSpec,
    f: &FlowClass,
    cycles: &[ProperCycle],
) -> Result<Vec<FlowClass>> {
    let mut out = Vec::new();
    for c in cycles {
        let g = f.checked_add(&c.flow(lat))?;
        if in_polytope(lat, &g, spec) {
            out.push(g);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// One row of an oracle sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRow {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
    pub lr_rule: u64,
    pub hive_bf: Option<u64>,
    pub flow_enum: Option<u64>,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.hive_bf.is_none_or(|h| h == self.lr_rule) && self.flow_enum.is_none_or(|f| f == self.lr_rule)
    }
}

/// Writes rows as `;`-separated CSV with header
/// `lambda;mu;nu;lr_rule;hive_bf;flow_enum`.
pub fn write_oracle_csv<W: Write>(out: W, rows: &[OracleRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().delimiter(b';').from_writer(out);
    w.write_record(["lambda", "mu", "nu", "lr_rule", "hive_bf", "flow_enum"])?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.lambda.to_string(),
            r.mu.to_string(),
            r.nu.to_string(),
            r.lr_rule.to_string(),
            opt(r.hive_bf),
            opt(r.flow_enum),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// All partitions of `k` with at most `parts` parts, in lexicographically
/// decreasing order.
pub fn partitions_of(k: u64, parts: usize) -> Vec<Partition> {
    fn go(k: u64, max: u64, parts: usize, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if k == 0 {
            out.push(Partition::new(cur.clone()).expect("generated parts are decreasing"));
            return;
        }
        if parts == 0 {
            return;
        }
        for p in (1..=max.min(k)).rev() {
            cur.push(p);
            go(k - p, p, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, parts, &mut Vec::new(), &mut out);
    out
}

/// Every triple (λ, μ, ν) with at most `n` parts each, |λ| + |μ| = |ν| and
/// |ν| ≤ `max_size`.
pub fn sweep_triples(n: usize, max_size: u64) -> Vec<(Partition, Partition, Partition)> {
    let mut out = Vec::new();
    for total in 0..=max_size {
        let nus = partitions_of(total, n);
        for a in 0..=total {
            let lambdas = partitions_of(a, n);
            let mus = partitions_of(total - a, n);
            for l in &lambdas {
                for m in &mus {
                    for v in &nus {
                        out.push((l.clone(), m.clone(), v.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Default lattice size for a triple, checking the size condition.
pub fn default_n(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<usize> {
    check_triple(lambda, mu, nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn lr_rule_small_cases() {
        assert_eq!(lr_rule_count(&p("1"), &p("1"), &p("2")), 1);
        assert_eq!(lr_rule_count(&p("1"), &p("1"), &p("1,1")), 1);
        assert_eq!(lr_rule_count(&p("2,1"), &p("2,1"), &p("3,2,1")), 2);
        assert_eq!(lr_rule_count(&p("2"), &p("2"), &p("1,1,1,1")), 0);
        assert_eq!(lr_rule_count(&p("1"), &p("1"), &p("3")), 0);
        assert_eq!(lr_rule_count(&p(""), &p(""), &p("")), 1);
        assert_eq!(lr_rule_count(&p(""), &p("2,1"), &p("2,1")), 1);
        assert_eq!(lr_rule_count(&p("3"), &p(""), &p("2,1")), 0);
    }

    #[test]
    fn partitions_counts() {
        let counts: Vec<usize> = (0..8).map(|k| partitions_of(k, k as usize).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(partitions_of(4, 2).len(), 3);
    }

    #[test]
    fn zero_hive_round_trip() {
        let lat = Lattice::build(3).unwrap();
        let h = Hive { n: 3, labels: vec![0; lat.num_vertices()] };
        let f = hive_to_flow(&lat, &h);
        assert!(f.is_zero());
        assert_eq!(flow_to_hive(&lat, &f).unwrap(), h);
    }

    #[test]
    fn no_proper_cycles_for_small_lattices() {
        for n in 1..=2 {
            let lat = Lattice::build(n).unwrap();
            assert!(proper_cycles(&lat).unwrap().is_empty());
        }
        let lat = Lattice::build(3).unwrap();
        let cycles = proper_cycles(&lat).unwrap();
        assert!(!cycles.is_empty());
        assert_eq!(cycles.len() % 2, 0);
    }

    #[test]
    fn csv_rows() {
        let row =
            OracleRow { lambda: p("2,1"), mu: p("2,1"), nu: p("3,2,1"), lr_rule: 2, hive_bf: Some(2), flow_enum: None };
        let mut buf = Vec::new();
        write_oracle_csv(&mut buf, &[row]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "lambda;mu;nu;lr_rule;hive_bf;flow_enum\n2,1;2,1;3,2,1;2;2;\n");
    }
}
