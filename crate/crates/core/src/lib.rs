//! Ergodic theory of 1-Lipschitz maps on `F2[[T]]`, computed.
//!
//! The crate provides exact arithmetic over F2 ([`gf2ps`]), finite-level
//! dynamics oracles on function tables ([`dynamics`]), the Van der Put and
//! Carlitz expansions with their Lipschitz / measure-preservation / ergodicity
//! criteria ([`vanderput`], [`carlitz`]), a single-cycle generator
//! ([`cyclegen`]), and the 2-adic reference theory ([`z2compare`]).

pub mod carlitz;
pub mod cyclegen;
pub mod dynamics;
pub mod error;
pub mod gf2ps;
pub mod io;
pub mod sample;
pub mod vanderput;
pub mod verdict;
pub mod z2compare;

pub use carlitz::{CarlitzCoefficients, CarlitzContext};
pub use cyclegen::{CycleData, GeneratedCycle};
pub use dynamics::FunctionTable;
pub use error::{Error, Result};
pub use gf2ps::{Degree, Poly, Residue, Valuation};
pub use vanderput::VdpCoefficients;
pub use verdict::{LevelVerdicts, Verdict};
pub use z2compare::{MahlerCoefficients, Z2FunctionTable, Z2Residue, Z2VdpCoefficients};
