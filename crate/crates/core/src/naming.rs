//! Composite identifiers.
//!
//! Reductions and generators build labels and directions out of tuples of
//! other identifiers. They are rendered as compact JSON arrays, which keeps
//! them unambiguous for arbitrary component names and lets the tuple be
//! recovered from the name alone.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Error, Result};

pub(crate) fn encode<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("identifier tuples always serialize")
}

pub(crate) fn decode<T: DeserializeOwned>(name: &str, what: &str) -> Result<T> {
    serde_json::from_str(name)
        .map_err(|e| Error::Malformed(format!("{what} identifier {name:?}: {e}")))
}
