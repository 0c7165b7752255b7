//! Combinatorial statistics of square-tiled surfaces.
//!
//! A square-tiled surface on `n` unit squares is encoded by a pair of
//! permutations `(sigma, tau)` in `S_n`: `sigma` glues each square to the one
//! on its right, `tau` to the one above. This crate provides
//!
//! * exact permutation / partition / character machinery ([`perm`],
//!   [`partition`], [`character`]),
//! * topological analysis of a gluing pair — vertices, genus, stratum,
//!   horizontal cylinders, holonomy ([`surface`]),
//! * exact distributions of the commutator class and vertex count under the
//!   uniform and horizontally-restricted random models, with total-variation
//!   and tail bounds, all in big-rational arithmetic ([`exact`]),
//! * a seeded, reproducible Monte Carlo harness that samples surfaces at
//!   large `n` and streams per-trial records to CSV ([`montecarlo`]),
//! * self-check suites shared by the CLI and the test suite ([`verify`]).

pub mod character;
pub mod exact;
pub mod montecarlo;
pub mod partition;
pub mod perm;
pub mod rng;
pub mod surface;
pub mod verify;

pub use partition::Partition;
pub use perm::Permutation;
pub use rng::RngStream;
