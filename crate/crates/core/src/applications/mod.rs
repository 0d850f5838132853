//! Spatial search, transport, universality certificates and the eigenvector
//! lemmas built on the Krylov reduction.

pub mod certify;
pub mod lemmas;
pub mod prop_ib;
pub mod search;
pub mod transport;

pub use certify::{certify_adjacency_dependence, certify_laplacian_universality, CertificationReport};
pub use lemmas::{lemma_eigenvector_checks, LemmaReport};
pub use prop_ib::{proposition_ib_scan, proposition_ib_table, PropIbReport, PropIbRow};
pub use search::{run_spatial_search, search_success_closed_form, SearchResult};
pub use transport::{run_transport, TransportResult};
