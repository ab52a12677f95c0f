use thiserror::Error;

use crate::net::NodeId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("bearing between coincident points is undefined")]
    CoincidentPoints,
    #[error("sector needs at least one destination")]
    NoDestinations,
    #[error("sector margins must be non-negative")]
    NegativeMargin,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("a network needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("bounds must be positive and finite, got {width} x {height} km")]
    InvalidBounds { width: f64, height: f64 },
    #[error("max segment length must be positive, got {0}")]
    InvalidSegmentLength(f64),
    #[error("node ids must be dense 0..n-1: found {found} at position {position}")]
    NonDenseIds { position: usize, found: usize },
    #[error("duplicate node id {0}")]
    DuplicateNode(NodeId),
    #[error("node {0} has a non-finite position")]
    NonFinitePosition(NodeId),
    #[error("node {0} lies outside the network bounds")]
    OutOfBounds(NodeId),
    #[error("segment references unknown node {0}")]
    UnknownNode(NodeId),
    #[error("segment {0} -> {0} is a self loop")]
    SelfLoop(NodeId),
    #[error("duplicate segment {0} - {1}")]
    DuplicateSegment(NodeId, NodeId),
    #[error("segment {from} - {to} has length {stated} km but endpoints are {actual} km apart")]
    LengthMismatch {
        from: NodeId,
        to: NodeId,
        stated: f64,
        actual: f64,
    },
    #[error("network is disconnected: node {0} is unreachable from node 0")]
    Disconnected(NodeId),
}

/// Errors reading or writing one of the versioned JSON files.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format {found:?}, expected {expected:?}")]
    Version { expected: String, found: String },
    #[error("invalid network: {0}")]
    Network(#[from] NetworkError),
    #[error("invalid schedule: {0}")]
    Schedule(#[from] ScheduleError),
}

impl FormatError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        FormatError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DroneError {
    #[error("payload {payload} kg exceeds the drone's maximum of {max} kg")]
    Overload { payload: f64, max: f64 },
    #[error("negative payload {0} kg")]
    NegativePayload(f64),
    #[error("negative flight length {0} km")]
    NegativeLength(f64),
    #[error("leg of {length} km exceeds the {available} km of remaining range")]
    InsufficientBattery { length: f64, available: f64 },
    #[error("invalid drone spec: {0}")]
    InvalidSpec(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("node {0} has no recharging pads")]
    NoPads(NodeId),
    #[error("schedule lists station {0} which is not in the network")]
    UnknownStation(NodeId),
    #[error("station {station} has {found} pads in the schedule but {expected} in the network")]
    PadCount {
        station: NodeId,
        expected: usize,
        found: usize,
    },
    #[error("station {station} pad {pad}: interval [{start}, {end}] is empty or non-finite")]
    InvalidInterval {
        station: NodeId,
        pad: usize,
        start: f64,
        end: f64,
    },
    #[error("station {station} pad {pad}: intervals are unsorted or overlap")]
    Overlap { station: NodeId, pad: usize },
    #[error("load factor must lie in [0, 1], got {0}")]
    LoadFactor(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RequestError {
    #[error("request has no packages")]
    NoPackages,
    #[error("node {0} is not in the network")]
    UnknownNode(NodeId),
    #[error("destination {0} is listed more than once")]
    DuplicateDestination(NodeId),
    #[error("destination {0} coincides with the source")]
    DestinationIsSource(NodeId),
    #[error("package for node {0} has non-positive weight")]
    BadWeight(NodeId),
    #[error("total payload {total} kg exceeds the drone's maximum of {max} kg")]
    Overweight { total: f64, max: f64 },
    #[error("departure clock must be finite")]
    BadClock,
    #[error("{count} destinations exceed the ordering-search limit of {limit}")]
    TooManyDestinations { count: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComposeError {
    #[error("invalid request: {0}")]
    Request(#[from] RequestError),
    #[error("no battery-feasible route from {from} to {to}; {reached} nodes reachable")]
    UnreachableLeg {
        from: NodeId,
        to: NodeId,
        reached: usize,
    },
    #[error("no feasible delivery order exists for this request")]
    Infeasible,
    #[error("instance too large for the brute-force oracle: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Drone(#[from] DroneError),
}
