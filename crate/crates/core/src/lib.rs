//! Spectral laboratory for the operator `L = Δ + c·Scal`.

pub mod eigensolver;
pub mod error;
pub mod grid;
pub mod kappa_bounds;
pub mod metric_field;
pub mod model_spectra;
pub mod neck_surgery;
pub mod operator_assembly;
pub mod small;
pub mod spinor_kato;
pub mod sparse;

pub use error::{Error, Result};

/// Fixed 17-significant-digit rendering used by every CSV writer.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
