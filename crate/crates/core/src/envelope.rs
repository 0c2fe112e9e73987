//! Scalar pulse envelopes. Only the total area enters the evolution; the
//! profile matters only for the slice-by-slice integrators.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Envelope {
    Rectangular,
    /// Gaussian centred on the pulse window; `width` is the standard
    /// deviation as a fraction of the pulse duration.
    Gaussian {
        width: f64,
    },
}

impl Envelope {
    /// Area carried by each of `slices` equal time slices (midpoint rule),
    /// normalized so the slices sum to `area`.
    pub fn slice_areas(&self, area: f64, slices: usize) -> Result<Vec<f64>> {
        if slices == 0 {
            return Err(Error::InvalidArgument("slice count must be positive"));
        }
        match *self {
            Envelope::Rectangular => Ok(alloc::vec![area / slices as f64; slices]),
            Envelope::Gaussian { width } => {
                if !(width > 0.0 && width.is_finite()) {
                    return Err(Error::InvalidArgument("gaussian width must be positive"));
                }
                let weights: Vec<f64> = (0..slices)
                    .map(|k| {
                        let t = (k as f64 + 0.5) / slices as f64 - 0.5;
                        (-t * t / (2.0 * width * width)).exp()
                    })
                    .collect();
                let total: f64 = weights.iter().sum();
                Ok(weights.into_iter().map(|w| area * w / total).collect())
            }
        }
    }
}
