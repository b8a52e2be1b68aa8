//! Exhaustive-search bounds.
//!
//! Every exhaustive loop in the crate declares a default bound here. The
//! environment variable `MATROID_FORGE_MAX_GROUND` may lower (never raise)
//! any of them.

use crate::error::{Error, Result};

pub const ENV_MAX_GROUND: &str = "MATROID_FORGE_MAX_GROUND";

/// Ground-size bound for the literal base-axiom checker.
pub const BASE_AXIOMS_GROUND: usize = 12;
/// Ground-size bound for family verification and gen-truncation checks.
pub const FAMILY_GROUND: usize = 12;
/// Ground-size bound for level-based enumeration.
pub const ENUMERATE_GROUND: usize = 10;
/// Independent-set count bound for the raw brute-force enumerator.
pub const RAW_INDEPENDENTS: usize = 16;
/// Ground-size bound for listing bases and independent sets.
pub const LISTING_GROUND: usize = 24;

/// Effective bound: the default, lowered by the environment override if set.
pub fn effective(default: usize) -> usize {
    match std::env::var(ENV_MAX_GROUND)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(v) => v.min(default),
        None => default,
    }
}

pub(crate) fn ensure(what: &'static str, size: usize, default: usize) -> Result<()> {
    let bound = effective(default);
    if size > bound {
        return Err(Error::TooLarge { what, size, bound });
    }
    Ok(())
}
