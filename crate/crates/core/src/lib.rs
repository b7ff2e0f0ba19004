//! Analysis on the p-adic line for the Vladimirov operator `D^alpha`:
//! exact p-adic arithmetic on rationals, test functions, the wavelet
//! eigenbasis, Green functions of `D^alpha + I`, and finite-rank point
//! interactions with their self-adjointness classification.

pub mod cyclotomic;
pub mod error;
pub mod green;
pub mod padic;
pub mod realization;
pub mod schwartz;
pub mod vladimirov;
pub mod wavelets;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use green::{DeltaFunctional, GreenFunction};
pub use padic::{Ball, BallRelation, PadicRational, Prime, UnitPhase};
pub use realization::{BoundaryData, DomainElement, InteractionConfig, RMatrix};
pub use schwartz::{Coefficient, ExactTestFunction, TestFunction};
pub use vladimirov::{Counterexample, SpectralMultiplier};
pub use wavelets::{WaveletExpansion, WaveletIndex};
