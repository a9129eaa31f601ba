//! Uniform random plane trees with a prescribed child sequence.
//!
//! The crate counts, enumerates and samples plane trees whose multiset of
//! child counts is fixed, converts between trees and their BFS / lex-DFS /
//! rev-DFS child-count sequences, and checks sub-Gaussian tail bounds on
//! width and height both exactly (small sizes, by enumeration) and by
//! Monte Carlo (large sizes).
//!
//! ```
//! use ptree_core::{ChildSequence, OrderKind, RandomStream};
//!
//! let c: ChildSequence = "2^3,0^4".parse().unwrap();
//! assert_eq!(c.count_trees(), 5u32.into());
//! let mut rng = RandomStream::new(42);
//! let t = ptree_core::sampler::sample_uniform(&c, &mut rng, OrderKind::Bfs);
//! assert_eq!(t.canonical_code().histogram(), c.histogram());
//! ```

pub mod bounds;
pub mod codec;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod par;
pub mod report;
pub mod rng;
pub mod sampler;
pub mod selfcheck;
pub mod seq;
pub mod stats;
pub mod tree;

/// Exact rational used for sequence invariants and martingale values.
pub type Rational = num_rational::Ratio<i128>;

pub use codec::{OrderKind, QueueProcess};
pub use error::{Error, Result};
pub use lattice::{LatticePath, Rotation};
pub use report::{McConfig, TailReport};
pub use rng::RandomStream;
pub use sampler::SubdivisionPlan;
pub use seq::{ChildSequence, DegreeHistogram, SequenceInvariants};
pub use stats::Profile;
pub use tree::PlaneTree;
