//! Reduced cortical learning circuit.
//!
//! Analog frames are encoded into sparse binary vectors, a bank of
//! permanence-based columns picks winners and learns, and a segment memory
//! forms synaptic potentials that are matched, stored and used to predict
//! the next inputs. See [`Circuit::step`] for the per-step pipeline.
//!
//! Everything real-valued is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` and `*32` aliases below fix the precision.

pub mod circuit;
pub mod datasets;
pub mod encoder;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod persistence;
pub mod rng;
pub mod scalar;
pub mod sdr;
pub mod spatial_pooler;
pub mod temporal_pooler;

pub use circuit::{Circuit, CircuitConfig, StepReport};
pub use encoder::{encode, AnalogFrame, EncoderConfig, FlattenOrder, NormalizedFrame, Rule, RuleThreshold};
pub use error::{Error, Result};
pub use metrics::{percent_accuracy, AccuracyRecord};
pub use scalar::Scalar;
pub use sdr::Sdr;

pub type Circuit64 = Circuit<f64>;
pub type Circuit32 = Circuit<f32>;
pub type CircuitConfig64 = CircuitConfig<f64>;
pub type CircuitConfig32 = CircuitConfig<f32>;
pub type AnalogFrame64 = AnalogFrame<f64>;
pub type AnalogFrame32 = AnalogFrame<f32>;
pub type RunConfig64 = experiment::RunConfig<f64>;
pub type RunConfig32 = experiment::RunConfig<f32>;
