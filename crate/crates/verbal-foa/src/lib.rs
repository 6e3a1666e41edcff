//! Verbal focus-of-attention (FoA) filters for understanding recorded
//! manipulation demonstrations.
//!
//! A demonstration is a time-ordered log of object detections and hand
//! positions together with a transcribed instruction. This crate turns that
//! log into a set of spatio-temporal filters and, from them, a simplified
//! task model:
//!
//! 1. [`lang`] parses the instruction into task verbs, a target-object name,
//!    and an optional color attribute.
//! 2. [`object`] filters detections by name/color and aggregates the
//!    surviving observations into a voxel grid.
//! 3. [`detector`] localizes grasp and release events per voxel from
//!    hand-to-object distances and object existence probabilities.
//! 4. [`encoder`] encodes a task model (pick-place waypoints or a fitted
//!    circle for revolute motion) from the events and the hand trajectory.
//!
//! [`synth`] generates deterministic synthetic demonstrations with exact
//! ground truth for robustness experiments, and [`eval`] measures timing
//! errors of detected events against that ground truth. [`pipeline`] wires
//! the stages together and produces a machine-readable report.

pub mod color;
pub mod demo;
pub mod detector;
pub mod encoder;
pub mod eval;
pub mod lang;
pub mod object;
pub mod pipeline;
pub mod rng;
pub mod synth;

pub use demo::{load_demonstration, Demonstration, Hand, ManipulationKind, Position, VoxelIndex};
pub use pipeline::{run_pipeline, FoaReport, PipelineConfig};
