//! Exact engine for open r-spin Landau-Ginzburg mirror symmetry in
//! dimension one.
//!
//! The A-side builds the deformed potential `W_t` from closed-form open
//! r-spin invariants ([`potential`]). The B-side expands oscillatory
//! integrals `∫_{Ξ_d} e^{W/ħ} dx` formally ([`oscillatory`]) and reads off
//! primitivity and flat coordinates ([`flatness`]). [`cycles`] checks the
//! explicit dual cycle basis numerically.

pub mod combinatorics;
pub mod cycles;
pub mod flatness;
pub mod invariants;
pub mod oscillatory;
pub mod poly;
pub mod potential;
pub mod rational;
pub mod registry;
pub mod series;

pub use combinatorics::{MultisetPartition, SetPartition, TwistMultiset};
pub use invariants::{InvariantEntry, InvariantKey};
pub use poly::{Monomial, Poly, PolyError};
pub use rational::Rational;
pub use registry::{Registry, VarRegistry, VarRole};
pub use series::HbarSeries;
