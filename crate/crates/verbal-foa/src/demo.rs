//! Domain types for recorded demonstrations, the JSON log format, and the
//! voxel-grid arithmetic shared by the downstream filters.
//!
//! A demonstration interleaves two channels sampled at different nominal
//! rates: object-detection snapshots (typically 5 Hz) and hand positions
//! (typically 15 Hz). Both live in a single time-ordered frame list with
//! optional channels. A present-but-empty detection snapshot means "nothing
//! detected"; an absent one means "no observation was taken at this time"
//! and is excluded from existence-probability computation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::ColorName;

/// A point in the demonstration space: meters in 3-D mode, pixels in 2-D.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position {
    pub coords: Vec<f64>,
}

impl Position {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Euclidean distance to another point of the same dimensionality.
    pub fn distance(&self, other: &Position) -> f64 {
        debug_assert_eq!(self.coords.len(), other.coords.len());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

/// One bin of an HSV color histogram: (hue degrees [0,360), saturation
/// [0,1], value [0,1], pixel count >= 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsvBin(pub f64, pub f64, pub f64, pub u64);

impl HsvBin {
    pub fn hue(&self) -> f64 {
        self.0
    }
    pub fn saturation(&self) -> f64 {
        self.1
    }
    pub fn value(&self) -> f64 {
        self.2
    }
    pub fn count(&self) -> u64 {
        self.3
    }
}

/// A single object detection reported by an upstream detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detection {
    #[serde(rename = "class")]
    pub class_name: String,
    pub position: Position,
    /// Precomputed color label. Takes precedence over the histogram.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<ColorName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color_histogram: Option<Vec<HsvBin>>,
}

/// One time step of the log. At least one channel must be present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Frame {
    pub t: f64,
    /// `Some(vec![])` is a snapshot that detected nothing; `None` means no
    /// snapshot was taken at this frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detections: Option<Vec<Detection>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_hand: Option<Position>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_hand: Option<Position>,
}

impl Frame {
    pub fn hand(&self, hand: Hand) -> Option<&Position> {
        match hand {
            Hand::Left => self.left_hand.as_ref(),
            Hand::Right => self.right_hand.as_ref(),
        }
    }
}

/// Laterality of the manipulating hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hand {
    Left,
    Right,
}

impl std::fmt::Display for Hand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hand::Left => write!(f, "left"),
            Hand::Right => write!(f, "right"),
        }
    }
}

/// Whether an object was taken or set down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManipulationKind {
    Grasp,
    Release,
}

impl std::fmt::Display for ManipulationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ManipulationKind::Grasp => write!(f, "grasp"),
            ManipulationKind::Release => write!(f, "release"),
        }
    }
}

/// A manually labeled event used by the evaluation harness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthEvent {
    pub t: f64,
    pub kind: ManipulationKind,
    pub hand: Hand,
    pub position: Position,
}

/// A full recorded session: frames plus transcript and optional labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Demonstration {
    pub dim: usize,
    pub cell_size: f64,
    pub transcript: String,
    pub frames: Vec<Frame>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<Vec<GroundTruthEvent>>,
}

impl Demonstration {
    /// Times of all detection snapshots, strictly increasing.
    pub fn snapshot_times(&self) -> Vec<f64> {
        self.frames
            .iter()
            .filter(|f| f.detections.is_some())
            .map(|f| f.t)
            .collect()
    }

    /// Time-ordered samples of one hand.
    pub fn hand_samples(&self, hand: Hand) -> Vec<(f64, Position)> {
        self.frames
            .iter()
            .filter_map(|f| f.hand(hand).map(|p| (f.t, p.clone())))
            .collect()
    }

    /// First and last frame times.
    pub fn span(&self) -> (f64, f64) {
        (self.frames[0].t, self.frames[self.frames.len() - 1].t)
    }
}

/// Grid cell holding a position, anchored at the world origin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VoxelIndex {
    pub cells: Vec<i64>,
}

impl VoxelIndex {
    pub fn new(cells: Vec<i64>) -> Self {
        Self { cells }
    }
}

impl std::fmt::Display for VoxelIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Componentwise `floor(p / cell_size)`.
pub fn voxel_index(p: &Position, cell_size: f64) -> VoxelIndex {
    debug_assert!(cell_size > 0.0);
    VoxelIndex::new(
        p.coords
            .iter()
            .map(|c| (c / cell_size).floor() as i64)
            .collect(),
    )
}

/// Center point of a voxel: `(idx + 0.5) * cell_size` per component.
/// Inverse of [`voxel_index`] for any integer index.
pub fn voxel_center(idx: &VoxelIndex, cell_size: f64) -> Position {
    debug_assert!(cell_size > 0.0);
    Position::new(
        idx.cells
            .iter()
            .map(|&c| (c as f64 + 0.5) * cell_size)
            .collect(),
    )
}

#[derive(Debug, Error)]
pub enum LoadError {
    /// The document is not well-formed under the log schema.
    #[error("schema error: {0}")]
    Schema(#[from] serde_json::Error),
    /// The document parsed but violates a demonstration invariant.
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> LoadError {
    LoadError::Validation {
        path: path.into(),
        message: message.into(),
    }
}

/// Parses and validates a demonstration log document.
///
/// Frames are returned sorted by time; frames sharing an exactly equal
/// timestamp are merged (it is an error for the same channel to appear
/// twice at one time). All stated invariants hold on the returned value.
pub fn load_demonstration(document: &[u8]) -> Result<Demonstration, LoadError> {
    let mut demo: Demonstration = serde_json::from_slice(document)?;
    validate_header(&demo)?;
    for (i, frame) in demo.frames.iter().enumerate() {
        validate_frame(frame, i, demo.dim)?;
    }
    demo.frames
        .sort_by(|a, b| a.t.partial_cmp(&b.t).expect("finite after validation"));
    demo.frames = merge_equal_timestamps(std::mem::take(&mut demo.frames))?;
    validate_channels(&demo)?;
    validate_ground_truth(&demo)?;
    Ok(demo)
}

fn validate_header(demo: &Demonstration) -> Result<(), LoadError> {
    if demo.dim != 2 && demo.dim != 3 {
        return Err(invalid("dim", format!("must be 2 or 3, got {}", demo.dim)));
    }
    if !(demo.cell_size.is_finite() && demo.cell_size > 0.0) {
        return Err(invalid("cell_size", "must be a finite positive number"));
    }
    if demo.frames.is_empty() {
        return Err(invalid("frames", "must be non-empty"));
    }
    Ok(())
}

fn validate_position(p: &Position, path: &str, dim: usize) -> Result<(), LoadError> {
    if p.dim() != dim {
        return Err(invalid(
            path,
            format!("expected {dim} components, got {}", p.dim()),
        ));
    }
    if !p.is_finite() {
        return Err(invalid(path, "coordinates must be finite"));
    }
    Ok(())
}

fn validate_frame(frame: &Frame, i: usize, dim: usize) -> Result<(), LoadError> {
    let base = format!("frames[{i}]");
    if !(frame.t.is_finite() && frame.t >= 0.0) {
        return Err(invalid(format!("{base}.t"), "must be finite and >= 0"));
    }
    if frame.detections.is_none() && frame.left_hand.is_none() && frame.right_hand.is_none() {
        return Err(invalid(base, "frame carries no channel"));
    }
    if let Some(dets) = &frame.detections {
        for (j, det) in dets.iter().enumerate() {
            let dpath = format!("{base}.detections[{j}]");
            if det.class_name.is_empty() {
                return Err(invalid(format!("{dpath}.class"), "must be non-empty"));
            }
            validate_position(&det.position, &format!("{dpath}.position"), dim)?;
            if let Some(hist) = &det.color_histogram {
                for (k, bin) in hist.iter().enumerate() {
                    let bpath = format!("{dpath}.color_histogram[{k}]");
                    if !(bin.hue().is_finite() && (0.0..360.0).contains(&bin.hue())) {
                        return Err(invalid(&bpath, "hue must be in [0,360)"));
                    }
                    if !((0.0..=1.0).contains(&bin.saturation())
                        && (0.0..=1.0).contains(&bin.value()))
                    {
                        return Err(invalid(&bpath, "saturation and value must be in [0,1]"));
                    }
                    if bin.count() == 0 {
                        return Err(invalid(&bpath, "count must be >= 1"));
                    }
                }
            }
        }
    }
    if let Some(p) = &frame.left_hand {
        validate_position(p, &format!("{base}.left_hand"), dim)?;
    }
    if let Some(p) = &frame.right_hand {
        validate_position(p, &format!("{base}.right_hand"), dim)?;
    }
    Ok(())
}

/// Merges channels of sorted frames that share an exact timestamp.
fn merge_equal_timestamps(frames: Vec<Frame>) -> Result<Vec<Frame>, LoadError> {
    let mut merged: Vec<Frame> = Vec::with_capacity(frames.len());
    for frame in frames {
        match merged.last_mut() {
            Some(last) if last.t == frame.t => {
                let t = frame.t;
                let dup = |channel: &str| {
                    invalid(
                        "frames",
                        format!("channel {channel} appears twice at t={t}"),
                    )
                };
                if frame.detections.is_some() {
                    if last.detections.is_some() {
                        return Err(dup("detections"));
                    }
                    last.detections = frame.detections;
                }
                if frame.left_hand.is_some() {
                    if last.left_hand.is_some() {
                        return Err(dup("left_hand"));
                    }
                    last.left_hand = frame.left_hand;
                }
                if frame.right_hand.is_some() {
                    if last.right_hand.is_some() {
                        return Err(dup("right_hand"));
                    }
                    last.right_hand = frame.right_hand;
                }
            }
            _ => merged.push(frame),
        }
    }
    Ok(merged)
}

fn validate_channels(demo: &Demonstration) -> Result<(), LoadError> {
    if !demo.frames.iter().any(|f| f.detections.is_some()) {
        return Err(invalid("frames", "no frame carries a detection snapshot"));
    }
    if !demo
        .frames
        .iter()
        .any(|f| f.left_hand.is_some() || f.right_hand.is_some())
    {
        return Err(invalid("frames", "no frame carries a hand sample"));
    }
    Ok(())
}

fn validate_ground_truth(demo: &Demonstration) -> Result<(), LoadError> {
    let Some(events) = &demo.ground_truth else {
        return Ok(());
    };
    let (start, end) = demo.span();
    for (i, ev) in events.iter().enumerate() {
        let base = format!("ground_truth[{i}]");
        if !ev.t.is_finite() || ev.t < start || ev.t > end {
            return Err(invalid(
                format!("{base}.t"),
                format!("must lie within the demonstration span [{start}, {end}]"),
            ));
        }
        validate_position(&ev.position, &format!("{base}.position"), demo.dim)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = r#"{
        "dim": 3,
        "cell_size": 0.15,
        "transcript": "open the fridge",
        "frames": [
            {"t": 0.0, "detections": [{"class": "fridge", "position": [1.0, 0.0, 1.0]}]},
            {"t": 0.1, "right_hand": [0.0, 0.0, 1.0]}
        ]
    }"#;

    #[test]
    fn loads_minimal_document() {
        let demo = load_demonstration(MINIMAL.as_bytes()).unwrap();
        assert_eq!(demo.frames.len(), 2);
        assert_eq!(demo.transcript, "open the fridge");
        assert_eq!(demo.snapshot_times(), vec![0.0]);
        assert_eq!(demo.hand_samples(Hand::Right).len(), 1);
    }

    #[test]
    fn frames_are_sorted_by_time() {
        let doc = r#"{
            "dim": 2, "cell_size": 10.0, "transcript": "pick the cup",
            "frames": [
                {"t": 2.0, "left_hand": [5.0, 5.0]},
                {"t": 0.5, "detections": []},
                {"t": 1.0, "detections": [{"class": "cup", "position": [1.0, 2.0]}]}
            ]
        }"#;
        let demo = load_demonstration(doc.as_bytes()).unwrap();
        let times: Vec<f64> = demo.frames.iter().map(|f| f.t).collect();
        assert_eq!(times, vec![0.5, 1.0, 2.0]);
    }

    #[test]
    fn rejects_document_without_snapshot() {
        let doc = r#"{
            "dim": 3, "cell_size": 0.15, "transcript": "open the fridge",
            "frames": [{"t": 0.0, "right_hand": [0.0, 0.0, 0.0]}]
        }"#;
        match load_demonstration(doc.as_bytes()) {
            Err(LoadError::Validation { path, .. }) => assert_eq!(path, "frames"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys() {
        let doc = r#"{
            "dim": 3, "cell_size": 0.15, "transcript": "x", "frames": [], "extra": 1
        }"#;
        assert!(matches!(
            load_demonstration(doc.as_bytes()),
            Err(LoadError::Schema(_))
        ));
    }

    #[test]
    fn rejects_dimension_mismatch_with_path() {
        let doc = r#"{
            "dim": 3, "cell_size": 0.15, "transcript": "x",
            "frames": [{"t": 0.0, "detections": [{"class": "cup", "position": [1.0, 2.0]}]}]
        }"#;
        match load_demonstration(doc.as_bytes()) {
            Err(LoadError::Validation { path, .. }) => {
                assert_eq!(path, "frames[0].detections[0].position");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn merges_channels_at_equal_timestamps() {
        let doc = r#"{
            "dim": 3, "cell_size": 0.15, "transcript": "x",
            "frames": [
                {"t": 0.2, "detections": []},
                {"t": 0.2, "right_hand": [0.0, 0.0, 0.0]}
            ]
        }"#;
        let demo = load_demonstration(doc.as_bytes()).unwrap();
        assert_eq!(demo.frames.len(), 1);
        assert!(demo.frames[0].detections.is_some());
        assert!(demo.frames[0].right_hand.is_some());
    }

    #[test]
    fn rejects_duplicate_channel_at_one_timestamp() {
        let doc = r#"{
            "dim": 3, "cell_size": 0.15, "transcript": "x",
            "frames": [
                {"t": 0.2, "right_hand": [0.0, 0.0, 0.0], "detections": []},
                {"t": 0.2, "right_hand": [1.0, 0.0, 0.0]}
            ]
        }"#;
        let err = load_demonstration(doc.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("right_hand"), "{err}");
    }

    #[test]
    fn rejects_ground_truth_outside_span() {
        let doc = r#"{
            "dim": 3, "cell_size": 0.15, "transcript": "x",
            "frames": [
                {"t": 0.0, "detections": [], "right_hand": [0.0, 0.0, 0.0]},
                {"t": 1.0, "right_hand": [0.0, 0.0, 0.0]}
            ],
            "ground_truth": [{"t": 2.0, "kind": "grasp", "hand": "right", "position": [0.0, 0.0, 0.0]}]
        }"#;
        match load_demonstration(doc.as_bytes()) {
            Err(LoadError::Validation { path, .. }) => assert_eq!(path, "ground_truth[0].t"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn loading_is_deterministic() {
        let a = load_demonstration(MINIMAL.as_bytes()).unwrap();
        let b = load_demonstration(MINIMAL.as_bytes()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn voxel_index_examples() {
        let cell = 0.15;
        assert_eq!(
            voxel_index(&Position::new(vec![0.0, 0.0, 0.0]), cell),
            VoxelIndex::new(vec![0, 0, 0])
        );
        assert_eq!(
            voxel_index(&Position::new(vec![0.15, -0.01, 0.31]), cell),
            VoxelIndex::new(vec![1, -1, 2])
        );
        // 2-D mode with a ten-pixel grid.
        assert_eq!(
            voxel_index(&Position::new(vec![14.9, 3.0]), 10.0),
            VoxelIndex::new(vec![1, 0])
        );
    }

    #[test]
    fn voxel_center_examples() {
        let c = voxel_center(&VoxelIndex::new(vec![0, 0, 0]), 0.15);
        assert_eq!(c.coords, vec![0.075, 0.075, 0.075]);
        let c = voxel_center(&VoxelIndex::new(vec![1, -1, 2]), 0.15);
        assert_eq!(c.coords, vec![0.225, -0.075, 0.375]);
    }

    proptest! {
        // voxel_index . voxel_center = identity for all integer indices.
        #[test]
        fn voxel_center_round_trips(
            cells in proptest::collection::vec(-1_000_000i64..1_000_000, 2..=3),
            cell_size in prop_oneof![Just(0.15), Just(10.0), 0.01f64..5.0],
        ) {
            let idx = VoxelIndex::new(cells);
            let back = voxel_index(&voxel_center(&idx, cell_size), cell_size);
            prop_assert_eq!(back, idx);
        }

        #[test]
        fn distance_is_symmetric(
            a in proptest::collection::vec(-10.0f64..10.0, 3),
            b in proptest::collection::vec(-10.0f64..10.0, 3),
        ) {
            let pa = Position::new(a);
            let pb = Position::new(b);
            prop_assert_eq!(pa.distance(&pb), pb.distance(&pa));
        }
    }
}
