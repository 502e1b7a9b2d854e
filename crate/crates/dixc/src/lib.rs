//! File formats, the `dixc` command implementations and the reproduction
//! harness on top of `dixc-core`.

pub mod bound;
pub mod enumerate;
pub mod error;
pub mod expected;
pub mod format;
pub mod presets;
pub mod render;
pub mod repro;

pub use bound::{run_bound, BoundRequest, BoundResult, DecodingChoice, GroupingChoice, Query, Scheme};
pub use error::{Error, Result};
pub use render::Format;
pub use repro::{ReproId, ReproReport};
