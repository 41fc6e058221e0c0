//! Identifiability machinery: generalized Vandermonde determinants, the
//! Bernoulli first-order system, non-identifiability witnesses, and numeric
//! first-order checks for general kernels.

mod bernoulli;
mod dd;
mod first_order;
mod linear;
mod vandermonde;

pub use bernoulli::{bernoulli_first_order_system, bernoulli_nonidentifiable_witness, NonIdentWitness};
pub use first_order::{
    degenerate_direction_check, first_order_gram, first_order_gram_with, gamma_pathological_direction,
    normalized_gram_eigenvalues, Direction, GramReport, GridSpec, DEGENERACY_THRESHOLD,
};
pub use linear::LinearSystemReport;
pub use vandermonde::{gen_vandermonde_det, vandermonde_product, Basis};
