//! Simulator for assembly computation in the NEMO model: random areas with
//! k-cap firing, Hebbian plasticity and homeostasis, gated by interneurons.
//!
//! The building blocks are [`network::Network`] and [`gates`]. On top of them
//! sit the sequence memorisation protocols ([`sequences`]), finite state
//! machine learning ([`fsm`]) and the stack tape and Turing machine
//! construction ([`tape`], [`tm`]). With the `harness` feature the
//! [`harness`] module runs seeded multi-trial experiments and writes CSV.

pub mod alternation;
pub mod arcnet;
pub mod assembly;
pub mod error;
pub mod fsm;
pub mod fsmnet;
pub mod gates;
pub mod graph;
#[cfg(feature = "harness")]
pub mod harness;
pub mod kcap;
pub mod network;
pub mod params;
pub mod rng;
pub mod sequences;
pub mod tape;
pub mod tm;

pub use assembly::{Assembly, StimulusSet};
pub use error::{Error, Result};
pub use network::{AreaId, AreaKind, Mode, Network, NetworkBuilder};
pub use params::ModelParams;
