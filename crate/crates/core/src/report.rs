//! Serialization helpers shared by the JSON reports.

use std::fmt::Display;

use serde::Serializer;

/// Emits an arbitrary-precision integer as a decimal string; counts
/// routinely exceed the 53-bit range JSON consumers handle safely.
pub fn as_decimal<T: Display, S: Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
