//! Holes for the doubling map: symbolic words, exact arithmetic, survivor
//! automata and the catalogue of critical holes.

pub mod error;
pub mod exact;
pub mod holes;
mod perron;
pub mod survivor;
pub mod trap;
pub mod words;

pub use error::{Error, Result};
pub use exact::{binary_expansion, doubling_map, orbit, pi_value, ExpansionForm, OrbitResult, Rational};
pub use holes::{catalog, gap_interval, sturmian_hole, test_supercritical, CatalogEntry, Endpoint, Family, GapInterval};
pub use perron::Entropy;
pub use survivor::{classify, Classification, Hole, Kind, SurvivorAutomaton};
pub use trap::{is_trap, TrapReport, TrapVerdict};
pub use words::{CfTuple, EvPeriodicWord, Extension, Fraction, Word};
