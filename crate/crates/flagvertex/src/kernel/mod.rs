//! Exact scalar arithmetic, q-Pochhammer symbols, canonical φ rewriting and
//! truncated multigraded series.

pub mod params;
pub mod phi;
pub mod qpoch;
pub mod scalar;
pub mod series;
pub mod sz;

pub use params::ParamPoint;
pub use phi::{phi_shift, Monomial, PhiProduct, Symbol};
pub use qpoch::{curly_bracket, qpoch, qpoch_with};
pub use scalar::{format_q, int, parse_q, qpow, rat, Q};
pub use series::{series_combine, SeriesOp, SeriesTerm, TruncatedSeries};
pub use sz::{sz_compare, sz_equal, SzOutcome};
