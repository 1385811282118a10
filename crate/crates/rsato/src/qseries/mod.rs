//! Exact truncated q-series algebra: coefficient rings, fractional-
//! exponent series, polynomial recognition, and eta quotients.

pub mod coeff;
pub mod eta;
pub mod poly;
pub mod series;

pub use coeff::Coeff;
pub use eta::{eta_quotient, EtaQuotientSpec};
pub use poly::{coefficients_in_x, express_in_x, Poly};
pub use series::FractionalQSeries;
