//! Shared fixtures for the criterion benches.

use hlmoments::{LambdaTable, SieveConfig};

pub fn table(limit: u64) -> LambdaTable {
    LambdaTable::build(limit, &SieveConfig::default()).expect("sieve")
}
