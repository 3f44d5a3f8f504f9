//! Cartan data, root data, Weyl reflections and Weyl-invariant quadratic
//! forms.

mod cartan;
mod classify;
mod datum;
mod presets;
mod quadratic;

pub use cartan::{dual_cartan, validate_cartan, CartanDatum, CartanReport, DualCartan};
pub use classify::{classify_cartan, classify_cartan_matrix, DynkinType};
pub use datum::{RootDatum, RootSystem, Side};
pub use presets::{preset, preset_names, symplectic, Preset};
pub use quadratic::{is_weyl_invariant, weyl_invariance_report, QuadraticForm, WeylReport};
