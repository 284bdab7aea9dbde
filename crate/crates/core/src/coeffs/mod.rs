//! Exact cusp-form coefficients and the Rankin–Selberg convolution
//! coefficients `c_n`.

mod cache;
mod fourier;
pub(crate) mod ntt;
mod table;

pub use cache::{header_line, load_fourier, load_fourier_for, read_header, save_fourier};
pub use fourier::{compute_fourier, FourierTable, InvariantReport, WeightConfig};
pub use table::{CoeffTable, CROSS_PATH_TOLERANCE};

use crate::error::Result;
use crate::scalar::Real;

/// Convenience: `c_n` table straight from exact coefficients.
pub fn compute_coeffs<F: Real>(ft: &FourierTable) -> Result<CoeffTable<F>> {
    CoeffTable::from_fourier(ft)
}
