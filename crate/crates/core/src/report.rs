//! Serialization helpers shared by the JSON reports.

use std::fmt::Display;

use serde::Serializer;

/// Serialize any `Display` value as its text form.
pub fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize")
}
