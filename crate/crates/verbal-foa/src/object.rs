//! Object selector: name/attribute filtering of detections and voxel-grid
//! aggregation of the surviving target observations.
//!
//! No cross-frame identity tracking is performed; every surviving
//! detection is an independent observation keyed only by its voxel.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::{classify_dominant_color, ColorError};
use crate::demo::{voxel_index, Demonstration, Position, VoxelIndex};
use crate::lang::InstructionFoa;

/// Observations of the target object that fell into one voxel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoxelAggregate {
    pub idx: VoxelIndex,
    /// (snapshot time, detected position) pairs, in time order.
    pub observations: Vec<(f64, Position)>,
    /// Componentwise median of the observation positions (the lower of the
    /// two middle values for even counts).
    pub median: Position,
}

/// The target-object-location filter: per-voxel aggregates plus the
/// snapshot timeline they are defined over.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetLocationFoa {
    pub voxels: BTreeMap<VoxelIndex, VoxelAggregate>,
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SelectError {
    #[error("no detection matched the target filters")]
    NoTargetObserved,
    #[error("attribute filtering requested but a {class:?} detection at t={t} has neither a color label nor a histogram")]
    MissingColorData { class: String, t: f64 },
    #[error(transparent)]
    Color(#[from] ColorError),
}

#[derive(Debug, Error, PartialEq)]
#[error("voxel {0} is not part of the location filter")]
pub struct UnknownVoxel(pub VoxelIndex);

/// Filters detections by the target name and, when present, the color
/// attribute. A detection's explicit `color` label takes precedence over
/// its histogram. Returns (snapshot time, position) pairs in time order.
pub fn select_targets(
    demo: &Demonstration,
    foa: &InstructionFoa,
) -> Result<Vec<(f64, Position)>, SelectError> {
    let mut out = Vec::new();
    for frame in &demo.frames {
        let Some(detections) = &frame.detections else {
            continue;
        };
        for det in detections {
            if det.class_name != foa.target_name {
                continue;
            }
            if let Some(wanted) = foa.attribute {
                let color = match (det.color, &det.color_histogram) {
                    (Some(c), _) => c,
                    (None, Some(hist)) => classify_dominant_color(hist)?,
                    (None, None) => {
                        return Err(SelectError::MissingColorData {
                            class: det.class_name.clone(),
                            t: frame.t,
                        })
                    }
                };
                if color != wanted {
                    continue;
                }
            }
            out.push((frame.t, det.position.clone()));
        }
    }
    if out.is_empty() {
        return Err(SelectError::NoTargetObserved);
    }
    Ok(out)
}

/// Componentwise median; for even counts the lower of the two middle
/// values is taken, so every component is an observed coordinate.
fn componentwise_median(positions: &[&Position]) -> Position {
    let dim = positions[0].dim();
    let mut coords = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut axis: Vec<f64> = positions.iter().map(|p| p.coords[k]).collect();
        axis.sort_by(|a, b| a.partial_cmp(b).unwrap());
        coords.push(axis[(axis.len() - 1) / 2]);
    }
    Position::new(coords)
}

/// Groups target observations by voxel and computes per-voxel medians.
pub fn build_location_foa(
    targets: &[(f64, Position)],
    snapshot_times: Vec<f64>,
    cell_size: f64,
) -> TargetLocationFoa {
    let mut groups: BTreeMap<VoxelIndex, Vec<(f64, Position)>> = BTreeMap::new();
    for (t, p) in targets {
        groups
            .entry(voxel_index(p, cell_size))
            .or_default()
            .push((*t, p.clone()));
    }
    let voxels = groups
        .into_iter()
        .map(|(idx, observations)| {
            let refs: Vec<&Position> = observations.iter().map(|(_, p)| p).collect();
            let median = componentwise_median(&refs);
            (
                idx.clone(),
                VoxelAggregate {
                    idx,
                    observations,
                    median,
                },
            )
        })
        .collect();
    TargetLocationFoa {
        voxels,
        snapshot_times,
    }
}

/// Binary presence of the target in voxel `i` at each snapshot time:
/// 1 where at least one observation of that voxel was taken, else 0.
pub fn existence_series(foa: &TargetLocationFoa, i: &VoxelIndex) -> Result<Vec<f64>, UnknownVoxel> {
    let agg = foa.voxels.get(i).ok_or_else(|| UnknownVoxel(i.clone()))?;
    Ok(foa
        .snapshot_times
        .iter()
        .map(|t| {
            if agg.observations.iter().any(|(ot, _)| ot == t) {
                1.0
            } else {
                0.0
            }
        })
        .collect())
}
