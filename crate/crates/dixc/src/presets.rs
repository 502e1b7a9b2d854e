//! Shipped server groupings and decoding sets.

use dixc_core::inner::align;
use dixc_core::{DecodingConfig, ServerGrouping};

use crate::error::{format_err, Result};
use crate::format::{decoding_from_json, groups_from_json, DecodingDoc};

pub const TABLE3_GROUPING: &str = include_str!("../presets/table3.json");
pub const TABLE3_DECODING: &str = include_str!("../presets/table3-decoding.json");

/// The four-receiver grouping and its per-group decoding sets.
pub fn table3() -> Result<(ServerGrouping, Vec<DecodingConfig>)> {
    let groups = groups_from_json(TABLE3_GROUPING, 4)?;
    let DecodingDoc::PerGroup(configs) = decoding_from_json(TABLE3_DECODING, 4)? else {
        return Err(format_err("table3 decoding preset must be per group"));
    };
    if configs.len() != groups.len() {
        return Err(format_err("table3 presets disagree on the number of groups"));
    }
    Ok(align(4, groups.into_iter().zip(configs).collect())?)
}
