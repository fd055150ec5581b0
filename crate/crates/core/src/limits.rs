//! Size caps shared by chain construction and the exact oracles.

use crate::error::{Error, Result};

/// Maximum number of `l`-gram states a game chain may have.
pub const STATE_CAP: u64 = 1 << 20;

/// Default working-set cap in bytes.
pub const DEFAULT_RESOURCE_CAP: u128 = 4 << 30;

/// Environment variable overriding [`DEFAULT_RESOURCE_CAP`] (bytes).
pub const RESOURCE_CAP_ENV: &str = "LITT_RESOURCE_CAP";

/// Rough heap footprint of one dense rational matrix entry.
pub const RATIONAL_ENTRY_BYTES: u128 = 64;

/// Effective resource cap: the environment override when it parses,
/// otherwise the default.
pub fn resource_cap() -> u128 {
    std::env::var(RESOURCE_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_RESOURCE_CAP)
}

pub fn check_resources(estimate: u128, cap: u128) -> Result<()> {
    if estimate > cap {
        Err(Error::ResourceCap { estimate, cap })
    } else {
        Ok(())
    }
}

/// `q^len` as `u128`, saturating.
pub fn state_count(q: u32, len: usize) -> u128 {
    (0..len).fold(1u128, |acc, _| acc.saturating_mul(u128::from(q)))
}
