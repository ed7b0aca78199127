//! Partitions, border specifications, flow classes (throughput vectors on the
//! edges of Δ), rhombus slack, and proper cycles with their slack
//! contributions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    BorderClass, ContributionKind, ContributionShape, EdgeId, Lattice, RhombusId, Side, TriId, TurnId, VertexId,
};

/// Largest supported |ν|; keeps every slack expression far from i64 limits.
pub const MAX_SIZE: u64 = 1 << 30;

/// A weakly decreasing tuple of nonnegative integers. Trailing zeros are
/// kept as given but carry no meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Partition> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(format!("{parts:?} is not weakly decreasing")));
        }
        if parts.iter().any(|&p| p > MAX_SIZE) {
            return Err(Error::InputTooLarge(*parts.iter().max().unwrap()));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// The 1-based part `i`, zero beyond the stored length.
    pub fn part(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn scaled(&self, m: u64) -> Result<Partition> {
        let parts = self.parts.iter().map(|&p| p.checked_mul(m).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }

    /// Nonzero parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u64> {
        (1..=n).map(|i| self.part(i)).collect()
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map_err(|_| Error::NotAPartition(format!("cannot parse part {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Checks the preconditions shared by all (λ, μ, ν) entry points and
/// returns the default lattice size, the largest number of nonzero parts.
pub fn check_triple(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<usize> {
    for p in [lambda, mu, nu] {
        if p.size() > MAX_SIZE {
            return Err(Error::InputTooLarge(p.size()));
        }
    }
    let sum = lambda.size() + mu.size();
    if nu.size() != sum {
        return Err(Error::SizeMismatch { nu: nu.size(), sum });
    }
    Ok(lambda.length().max(mu.length()).max(nu.length()).max(1))
}

/// Fixed throughputs on the border edges: λ down the right side, μ along
/// the bottom from the right, −ν down the left side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderSpec {
    n: usize,
    lambda: Vec<i64>,
    mu: Vec<i64>,
    nu: Vec<i64>,
}

impl BorderSpec {
    pub fn new(lambda: &Partition, mu: &Partition, nu: &Partition, n: usize) -> Result<BorderSpec> {
        if n == 0 {
            return Err(Error::InvalidLatticeSize(n));
        }
        check_triple(lambda, mu, nu)?;
        for p in [lambda, mu, nu] {
            if p.length() > n {
                return Err(Error::TooManyParts { parts: p.length(), n });
            }
        }
        let conv = |p: &Partition| p.padded(n).into_iter().map(|x| x as i64).collect();
        Ok(BorderSpec { n, lambda: conv(lambda), mu: conv(mu), nu: conv(nu) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The fixed throughput of a border edge, `None` for interior edges.
    pub fn fixed(&self, border: BorderClass) -> Option<i64> {
        match border {
            BorderClass::Interior => None,
            BorderClass::Right(i) => Some(self.lambda[i - 1]),
            BorderClass::Bottom(i) => Some(self.mu[i - 1]),
            BorderClass::Left(i) => Some(-self.nu[i - 1]),
        }
    }

    pub fn side_values(&self, side: Side) -> Vec<i64> {
        match side {
            Side::Right => self.lambda.clone(),
            Side::Bottom => self.mu.clone(),
            Side::Left => self.nu.iter().map(|v| -v).collect(),
        }
    }
}

/// A flow class on the honeycomb graph, stored as its throughput through
/// every edge of Δ (positive into the adjacent upright triangle), indexed by
/// edge id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlowClass {
    pub n: usize,
    pub delta: Vec<i64>,
}

impl FlowClass {
    pub fn zero(n: usize) -> FlowClass {
        FlowClass { n, delta: vec![0; 3 * n * (n + 1) / 2] }
    }

    /// Builds a flow class and checks triangle conservation.
    pub fn new(lat: &Lattice, delta: Vec<i64>) -> Result<FlowClass> {
        let f = FlowClass { n: lat.n(), delta };
        f.validate(lat)?;
        Ok(f)
    }

    pub fn get(&self, e: EdgeId) -> i64 {
        self.delta[e.index()]
    }

    pub fn validate(&self, lat: &Lattice) -> Result<()> {
        if self.n != lat.n() {
            return Err(Error::InvalidFlow(format!("flow has n = {}, lattice has n = {}", self.n, lat.n())));
        }
        if self.delta.len() != lat.num_edges() {
            return Err(Error::InvalidFlow(format!(
                "expected {} throughputs, got {}",
                lat.num_edges(),
                self.delta.len()
            )));
        }
        for t in lat.triangles() {
            let sum: i128 = lat.triangle(t).sides.iter().map(|&s| self.get(s) as i128).sum();
            if sum != 0 {
                return Err(Error::InvalidFlow(format!("conservation fails at triangle {}", t.index())));
            }
        }
        Ok(())
    }

    /// Parses the canonical JSON form `{"n": .., "delta": [..]}` and checks
    /// length and conservation.
    pub fn from_json(s: &str) -> Result<FlowClass> {
        let f: FlowClass = serde_json::from_str(s)?;
        if f.n == 0 {
            return Err(Error::InvalidLatticeSize(0));
        }
        let expected =
            f.n.checked_add(1).and_then(|m| m.checked_mul(f.n)).and_then(|x| x.checked_mul(3)).map(|x| x / 2);
        if expected != Some(f.delta.len()) {
            return Err(Error::InvalidFlow(format!("wrong number of throughputs for n = {}", f.n)));
        }
        let lat = Lattice::build(f.n)?;
        f.validate(&lat)?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("flow classes always serialize")
    }

    pub fn checked_add(&self, other: &FlowClass) -> Result<FlowClass> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &FlowClass) -> Result<FlowClass> {
        self.zip_with(other, i64::checked_sub)
    }

    pub fn checked_scale(&self, k: i64) -> Result<FlowClass> {
        let delta = self.delta.iter().map(|&d| d.checked_mul(k).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        Ok(FlowClass { n: self.n, delta })
    }

    pub fn neg(&self) -> FlowClass {
        FlowClass { n: self.n, delta: self.delta.iter().map(|d| -d).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.delta.iter().all(|&d| d == 0)
    }

    fn zip_with(&self, other: &FlowClass, op: fn(i64, i64) -> Option<i64>) -> Result<FlowClass> {
        if self.n != other.n {
            return Err(Error::InvalidFlow("flows live on different lattices".into()));
        }
        let delta = self
            .delta
            .iter()
            .zip(&other.delta)
            .map(|(&a, &b)| op(a, b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(FlowClass { n: self.n, delta })
    }
}

// Difference h(v) - h(u) of the hive labels along the side `e` from u to v.
fn step(lat: &Lattice, f: &FlowClass, e: EdgeId, u: VertexId, v: VertexId) -> i64 {
    let ends = lat.edge(e).ends;
    debug_assert!((ends[0] == u && ends[1] == v) || (ends[0] == v && ends[1] == u));
    if ends[0] == u {
        -f.get(e)
    } else {
        f.get(e)
    }
}

/// The four ways of writing the slack of a rhombus as a sum of throughputs.
/// They agree on every flow satisfying triangle conservation.
pub fn slack_forms(lat: &Lattice, rho: RhombusId, f: &FlowClass) -> [i64; 4] {
    let r = lat.rhombus(rho);
    let [a1, a2] = r.acute;
    let [o1, o2] = r.obtuse;
    let [s0, s1, s2, s3] = r.sides;
    let d = r.diagonal;
    [
        step(lat, f, s0, a1, o1) + step(lat, f, s2, a2, o2),
        step(lat, f, s3, a1, o2) + step(lat, f, s1, a2, o1),
        step(lat, f, s0, a1, o1) + step(lat, f, s1, a2, o1) + step(lat, f, d, o1, o2),
        step(lat, f, s3, a1, o2) + step(lat, f, s2, a2, o2) + step(lat, f, d, o2, o1),
    ]
}

/// Slack of a rhombus: the obtuse-corner labels minus the acute-corner
/// labels of the associated hive.
pub fn slack(lat: &Lattice, rho: RhombusId, f: &FlowClass) -> i64 {
    let forms = slack_forms(lat, rho, f);
    debug_assert!(forms.iter().all(|&s| s == forms[0]), "slack forms disagree: {forms:?}");
    forms[0]
}

pub fn slacks(lat: &Lattice, f: &FlowClass) -> Vec<i64> {
    lat.rhombi().map(|r| slack(lat, r, f)).collect()
}

pub fn is_hive_flow(lat: &Lattice, f: &FlowClass) -> bool {
    lat.rhombi().all(|r| slack(lat, r, f) >= 0)
}

pub fn border_matches(lat: &Lattice, f: &FlowClass, spec: &BorderSpec) -> bool {
    if f.n != spec.n() || f.delta.len() != lat.num_edges() {
        return false;
    }
    lat.border_edges().iter().all(|&e| spec.fixed(lat.edge(e).border) == Some(f.get(e)))
}

pub fn in_polytope(lat: &Lattice, f: &FlowClass, spec: &BorderSpec) -> bool {
    border_matches(lat, f, spec) && is_hive_flow(lat, f)
}

/// A cycle on the honeycomb graph avoiding the outer vertex, stored as the
/// cyclic sequence of turns it makes, one per visited triangle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProperCycle {
    turns: Vec<TurnId>,
}

impl ProperCycle {
    /// The cycle visiting `tris` in order (and back to the first).
    pub fn from_triangles(lat: &Lattice, tris: &[TriId]) -> Result<ProperCycle> {
        let k = tris.len();
        if k < 3 {
            return Err(Error::InvalidTurnPath("a proper cycle visits at least 3 triangles".into()));
        }
        let mut seen = tris.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != k {
            return Err(Error::InvalidTurnPath("a proper cycle visits each triangle once".into()));
        }
        let shared = |a: TriId, b: TriId| {
            lat.neighbors(a).find(|&(_, t)| t == b).map(|(e, _)| e).ok_or_else(|| {
                Error::InvalidTurnPath(format!("triangles {} and {} are not adjacent", a.index(), b.index()))
            })
        };
        let mut turns = Vec::with_capacity(k);
        for i in 0..k {
            let prev = tris[(i + k - 1) % k];
            let next = tris[(i + 1) % k];
            let entry = shared(prev, tris[i])?;
            let exit = shared(tris[i], next)?;
            turns.push(lat.turn_between(tris[i], entry, exit).expect("distinct sides form a turn"));
        }
        Ok(ProperCycle { turns })
    }

    pub fn turns(&self) -> &[TurnId] {
        &self.turns
    }

    pub fn reversed(&self, lat: &Lattice) -> ProperCycle {
        ProperCycle { turns: self.turns.iter().rev().map(|&t| lat.reverse_turn(t)).collect() }
    }

    /// The flow class of the cycle: ±1 on every crossed edge.
    pub fn flow(&self, lat: &Lattice) -> FlowClass {
        crate::residual::comb(lat, &self.turns)
    }

    fn uses_crossing(&self, lat: &Lattice, from: TurnId, to: TurnId) -> bool {
        let k = self.turns.len();
        (0..k).any(|i| self.turns[i] == from && self.turns[(i + 1) % k] == to) && lat.find_turn_edge(from, to).is_some()
    }

    fn uses(&self, lat: &Lattice, shape: ContributionShape) -> bool {
        match shape {
            ContributionShape::AcuteTurn(t) => self.turns.contains(&t),
            ContributionShape::Crossing(te) => {
                let e = lat.turn_edge(te);
                self.uses_crossing(lat, e.from, e.to)
            }
        }
    }
}

/// Slack of the cycle's flow in `rho`, computed from the slack
/// contributions it uses.
pub fn cycle_slack_by_contributions(lat: &Lattice, c: &ProperCycle, rho: RhombusId) -> i64 {
    lat.rhombus(rho).contributions.iter().filter(|k| c.uses(lat, k.shape)).map(|k| k.kind.sign()).sum()
}

fn uses_negative_in(lat: &Lattice, c: &ProperCycle, rho: RhombusId) -> bool {
    lat.rhombus(rho).contributions.iter().any(|k| k.kind == ContributionKind::Negative && c.uses(lat, k.shape))
}

/// Whether `f + εc` stays in the polytope for small ε > 0: no negative
/// contribution is used in an f-flat rhombus.
pub fn is_hive_preserving(lat: &Lattice, f: &FlowClass, c: &ProperCycle) -> bool {
    lat.rhombi().all(|r| slack(lat, r, f) != 0 || !uses_negative_in(lat, c, r))
}

/// Hive preserving, and in no rhombus of slack 1 are both counterclockwise
/// acute-corner turns used.
pub fn is_secure(lat: &Lattice, f: &FlowClass, c: &ProperCycle) -> bool {
    is_hive_preserving(lat, f, c)
        && lat
            .rhombi()
            .all(|r| slack(lat, r, f) != 1 || !lat.rhombus(r).negative_turns.iter().all(|t| c.turns.contains(t)))
}

pub fn add_cycle(lat: &Lattice, f: &FlowClass, c: &ProperCycle) -> Result<FlowClass> {
    f.checked_add(&c.flow(lat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn partition_parsing() {
        assert_eq!(p("4,2,0").parts(), &[4, 2, 0]);
        assert_eq!(p("4, 2").length(), 2);
        assert_eq!(p("").size(), 0);
        assert!("1,2".parse::<Partition>().is_err());
        assert!("1,-1".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert!("1,,1".parse::<Partition>().is_err());
        assert_eq!(p("3,1").part(2), 1);
        assert_eq!(p("3,1").part(5), 0);
        assert_eq!(p("3,1").to_string(), "3,1");
    }

    #[test]
    fn border_spec_examples() {
        let spec = BorderSpec::new(&p("4,2,0"), &p("5,2,0"), &p("6,4,3"), 3).unwrap();
        assert_eq!(spec.side_values(Side::Right), vec![4, 2, 0]);
        assert_eq!(spec.side_values(Side::Bottom), vec![5, 2, 0]);
        assert_eq!(spec.side_values(Side::Left), vec![-6, -4, -3]);
        let zero = BorderSpec::new(&p("0"), &p("0"), &p("0"), 2).unwrap();
        assert!(zero.side_values(Side::Left).iter().all(|&v| v == 0));
        assert!(matches!(BorderSpec::new(&p("1"), &p("1"), &p("3"), 1), Err(Error::SizeMismatch { nu: 3, sum: 2 })));
        assert!(matches!(BorderSpec::new(&p("1,1"), &p("1"), &p("2,1"), 1), Err(Error::TooManyParts { .. })));
    }

    #[test]
    fn border_values_sum_to_zero() {
        let spec = BorderSpec::new(&p("4,2,0"), &p("5,2,0"), &p("6,4,3"), 3).unwrap();
        let lat = Lattice::build(3).unwrap();
        let total: i64 = lat.border_edges().iter().map(|&e| spec.fixed(lat.edge(e).border).unwrap()).sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn zero_flow_has_zero_slack() {
        let lat = Lattice::build(4).unwrap();
        let f = FlowClass::zero(4);
        assert!(lat.rhombi().all(|r| slack(&lat, r, &f) == 0));
        assert!(is_hive_flow(&lat, &f));
        let spec = BorderSpec::new(&p(""), &p(""), &p(""), 4).unwrap();
        assert!(in_polytope(&lat, &f, &spec));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let f = FlowClass::zero(2);
        let s = f.to_json();
        assert_eq!(s, r#"{"n":2,"delta":[0,0,0,0,0,0,0,0,0]}"#);
        assert_eq!(FlowClass::from_json(&s).unwrap(), f);
        assert!(FlowClass::from_json(r#"{"n":1,"delta":[1,0,0]}"#).is_err());
        assert!(FlowClass::from_json(r#"{"n":1,"delta":[1,-1,0]}"#).is_ok());
        assert!(FlowClass::from_json(r#"{"n":0,"delta":[]}"#).is_err());
        assert!(FlowClass::from_json(r#"{"n":2,"delta":[0]}"#).is_err());
        assert!(FlowClass::from_json(r#"{"n":18446744073709551615,"delta":[]}"#).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let a = FlowClass { n: 1, delta: vec![i64::MAX, 0, 0] };
        let b = FlowClass { n: 1, delta: vec![1, 0, 0] };
        assert!(matches!(a.checked_add(&b), Err(Error::Overflow)));
    }

    #[test]
    fn hexagon_cycle_slack_matches_contributions() {
        let lat = Lattice::build(3).unwrap();
        // The six triangles around the interior vertex (1,1).
        let tris = [
            lat.upright_at(0, 1).unwrap(),
            lat.downright_at(0, 1).unwrap(),
            lat.upright_at(1, 1).unwrap(),
            lat.downright_at(1, 0).unwrap(),
            lat.upright_at(1, 0).unwrap(),
            lat.downright_at(0, 0).unwrap(),
        ];
        let c = ProperCycle::from_triangles(&lat, &tris).unwrap();
        let flow = c.flow(&lat);
        flow.validate(&lat).unwrap();
        assert_eq!(flow.delta.iter().filter(|&&d| d != 0).count(), 6);
        for r in lat.rhombi() {
            assert_eq!(cycle_slack_by_contributions(&lat, &c, r), slack(&lat, r, &flow));
        }
        let back = add_cycle(&lat, &add_cycle(&lat, &flow, &c).unwrap(), &c.reversed(&lat)).unwrap();
        assert_eq!(back, flow);
    }
}
