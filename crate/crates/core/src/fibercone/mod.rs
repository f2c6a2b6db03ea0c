//! Almost minimal multiplicity, reduction-number bounds, Hilbert series of
//! fiber cones, depth probes and the Cohen-Macaulay criterion.

mod amm;
mod bounds;
mod cm;
mod depth;
mod series;

pub use amm::{amm_check, laddered_one_check, AMMVerdict};
pub use bounds::{audit_bounds, BoundAudit, BoundRecord, Hypothesis};
pub use cm::{cm_check, CmVerdict};
pub use depth::{
    depth_by_sop, depth_report, fiber_presentation, h0_pieces, presentation_series_check, sop_images, DepthReport,
    FiberPresentation, PairTest, SopDepth,
};
pub use series::{expand_rational, rr_probe, series, ClosedForm, SeriesReport};

#[cfg(test)]
mod tests;
