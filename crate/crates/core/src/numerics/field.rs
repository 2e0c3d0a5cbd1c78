use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A function of `(t, x)`.
pub trait Field: Send + Sync {
    fn value(&self, t: f64, x: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64 + Send + Sync> Field for F {
    fn value(&self, t: f64, x: f64) -> f64 {
        self(t, x)
    }
}

/// Verification results attached to a constructed field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FieldMetadata {
    pub terminal_sup_error: Option<f64>,
    pub max_pde_residual: Option<f64>,
    pub energy_drift: Option<f64>,
    /// Which construction produced the field, e.g. `"line/poly-bridge"`.
    pub provenance: String,
    pub warnings: Vec<String>,
}

/// An evaluable solution with its verification metadata.
#[derive(Clone)]
pub struct SolutionField {
    field: Arc<dyn Field>,
    pub metadata: FieldMetadata,
}

impl SolutionField {
    pub fn new(field: Arc<dyn Field>, provenance: impl Into<String>) -> SolutionField {
        SolutionField { field, metadata: FieldMetadata { provenance: provenance.into(), ..Default::default() } }
    }

    pub fn inner(&self) -> &Arc<dyn Field> {
        &self.field
    }
}

impl Field for SolutionField {
    fn value(&self, t: f64, x: f64) -> f64 {
        self.field.value(t, x)
    }
}

impl fmt::Debug for SolutionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionField").field("metadata", &self.metadata).finish_non_exhaustive()
    }
}
