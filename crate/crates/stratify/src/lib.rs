pub mod chart_valuation;
pub mod coord_ring;
pub mod error;
pub mod exact_arith;
pub mod fan_monoids;
pub mod hilbert_geometry;
pub mod lattice;
pub mod ls_paths;
pub mod shipped;
pub mod smt_subduction;
pub mod strat_poset;

pub use error::{Error, Result};
