//! Exact Littlewood-Richardson coefficients through hive flows on the
//! honeycomb graph: a polynomial-delay neighbourhood generator over the
//! integral points of the hive flow polytope, breadth-first enumeration on
//! top of it, and two brute-force oracles to check it against.

pub mod enumeration;
pub mod error;
pub mod flow;
pub mod lattice;
pub mod oracles;
pub mod residual;

pub use enumeration::{
    enumerate, enumerate_from, lr_compute, lr_threshold, neigh_gen, stretch_check, Counters, EnumOptions, Enumeration,
    NeighborStream, Problem, Progress,
};
pub use error::{Error, Result};
pub use flow::{check_triple, in_polytope, is_hive_flow, slack, BorderSpec, FlowClass, Partition, ProperCycle};
pub use lattice::Lattice;
