//! The Chow ring of the moduli stack of genus-3 curves: strata derivations,
//! the four-step gluing pipeline and the comparison with the reference
//! relation list.

pub mod constants;
pub mod strata;

pub use constants::{ConstantSet, PIPELINE_JSON, RELATIONS_TXT, STRATA_TXT};
pub use strata::NamedPresentation;
pub mod pipeline;
pub mod report;

pub use pipeline::{run_pipeline, PipelineOutcome, PipelineSpec};
pub use report::{verify, Status, VerificationReport, VerifyOptions};

use crate::error::{Error, Result};

/// Resolves the derived presentations named in the shipped pipeline, checking
/// each against the reference values.
pub fn builtin_resolver(reference: &ConstantSet, bound: u32) -> impl Fn(&str) -> Result<NamedPresentation> + Sync + '_ {
    move |name| match name {
        "quartic" => {
            let (pres, independent) = strata::derive_open(reference)?;
            if !independent {
                return Err(Error::Invalid("z2 lies in the ideal of p0, p1, p2".into()));
            }
            Ok(pres)
        }
        "hyperelliptic" => strata::derive_hyperelliptic(reference, bound),
        "delta1" => strata::derive_delta1(reference),
        "delta11" => Ok(strata::derive_delta11(bound)?.0),
        "delta111" => strata::derive_delta111(bound),
        other => Err(Error::Invalid(format!("unknown derived presentation {other:?}"))),
    }
}
