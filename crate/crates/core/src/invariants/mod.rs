//! Reductions, Ratliff-Rush closures with respect to an ideal `K`, Hilbert
//! functions of `K`-fiber filtrations, and the ρ/ν/v sequences.

mod hilbert;
mod ratliff_rush;
mod reduction;
mod sequences;
mod setup;
mod superficial;

pub use hilbert::{binomial, fit_hilbert_polynomial, hilbert_data, hilbert_function, HilbertData};
pub use ratliff_rush::{ratliff_rush_wrt, rr_colength, RRClosure};
pub use reduction::{find_minimal_reduction, k_reduction_number, reduction_data, reduction_number, ReductionData};
pub use sequences::{fundamental_lemma_rows, rho_nu_sequences, rr_is_trivial, LemmaRow, SequenceReport};
pub use setup::{LocalSetup, Options};
pub use superficial::{
    check_superficial, image_in, quotient_by_element, superficial_candidate, ColonCheck, SuperficialRecord,
};
