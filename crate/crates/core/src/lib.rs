//! Greedy modularity agglomeration with consolidation-ratio heuristics.
//!
//! The engine starts from singleton communities and repeatedly merges the
//! best-scoring pair of adjacent communities. Scores are the exact
//! modularity gain, optionally weighted by how balanced the two communities
//! are ([`Heuristic`]). All modularity arithmetic is integer arithmetic on
//! `Q · 4m²` ([`ScaledQ`]).
//!
//! ```
//! use greedymod::{load_edge_list, run, Heuristic, LoadOptions, StopPolicy};
//!
//! let text = "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3\n";
//! let g = load_edge_list(text.as_bytes(), LoadOptions::default()).unwrap();
//! let res = run(&g, Heuristic::Plain, StopPolicy::NegativeDq).unwrap();
//! assert_eq!(res.peak_q.0, 70); // 70 / (4 · 7²) = 5/14
//! ```

pub mod dendrogram;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod heuristics;
pub mod io;
pub mod metrics;
pub mod modularity;

pub use dendrogram::{Dendrogram, Merge};
pub use engine::{run, run_observed, CommunityPair, Engine, MergeOutcome, RunResult, StopPolicy};
pub use error::{EngineError, FormatError, GenError, GraphError, MetricsError, ModularityError};
pub use generators::{generate_ba, generate_er, GenMetadata, GenSpec};
pub use graph::{load_edge_list, write_edge_list, Graph, GraphStats, LoadOptions, NodeId};
pub use heuristics::{ratio, Heuristic, Ratio, Score, SizeMeasure};
pub use metrics::{MergeLog, MergeRecord};
pub use modularity::{q_scaled_scratch, Partition, ScaledQ};
