//! Exact arithmetic layer: the coefficient field 𝔽_{p^m}, truncated Laurent
//! series in ε with honest precision tracking, and the series text format.

pub mod field;
pub mod parse;
pub mod series;

pub use field::{FieldElem, FieldParams};
pub use parse::{parse_series, render_series};
pub use series::{Series, Valuation};
