//! Serialize satisfaction-like values with 17 significant digits, enough for
//! any f64 to survive a text round trip. Only meaningful for JSON output.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub fn format(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(S::Error::custom(format!("non-finite value {x}")));
    }
    RawValue::from_string(format(*x))
        .map_err(S::Error::custom)?
        .serialize(s)
}
