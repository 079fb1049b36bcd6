//! Classical special functions used by the kernel and the eigenbasis.

mod bessel;
mod orthopoly;

use std::collections::HashMap;
use std::sync::Arc;

pub use bessel::{
    bessel_j, bessel_j_scaled, bessel_j_scaled_sequence, bessel_j_scaled_sequence_with,
    BesselParams,
};
pub use orthopoly::{gegenbauer, gegenbauer_derivative, laguerre, RecurrenceRow};

use crate::error::Result;

/// Per-worker cache of recurrence rows plus Bessel tunables.
///
/// Rows are keyed by the bit pattern of the parameter and the degree, so a
/// cached row is identical to a freshly built one.
#[derive(Debug, Clone, Default)]
pub struct SpecialFnWorkspace {
    pub bessel: BesselParams,
    gegenbauer_rows: HashMap<(u64, usize), Arc<RecurrenceRow>>,
    laguerre_rows: HashMap<(u64, usize), Arc<RecurrenceRow>>,
}

impl SpecialFnWorkspace {
    pub fn new(bessel: BesselParams) -> Self {
        SpecialFnWorkspace {
            bessel,
            ..Default::default()
        }
    }

    pub fn gegenbauer_row(&mut self, lambda: f64, max_degree: usize) -> Result<Arc<RecurrenceRow>> {
        if let Some(r) = self.gegenbauer_rows.get(&(lambda.to_bits(), max_degree)) {
            return Ok(r.clone());
        }
        let row = Arc::new(RecurrenceRow::gegenbauer(lambda, max_degree)?);
        self.gegenbauer_rows
            .insert((lambda.to_bits(), max_degree), row.clone());
        Ok(row)
    }

    pub fn laguerre_row(&mut self, alpha: f64, max_degree: usize) -> Result<Arc<RecurrenceRow>> {
        if let Some(r) = self.laguerre_rows.get(&(alpha.to_bits(), max_degree)) {
            return Ok(r.clone());
        }
        let row = Arc::new(RecurrenceRow::laguerre(alpha, max_degree)?);
        self.laguerre_rows.insert((alpha.to_bits(), max_degree), row.clone());
        Ok(row)
    }

    pub fn bessel_j_scaled_sequence(&self, nu0: f64, len: usize, z: f64) -> Result<Vec<f64>> {
        bessel_j_scaled_sequence_with(&self.bessel, nu0, len, z)
    }
}
