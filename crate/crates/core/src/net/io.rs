use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Bounds, Node, NodeId, Point, SkywayNetwork, LENGTH_TOLERANCE};
use crate::error::{FormatError, NetworkError};

pub const NETWORK_FORMAT: &str = "skyway-net/1";

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    format: String,
    bounds: Bounds,
    nodes: Vec<NodeRecord>,
    segments: Vec<SegmentRecord>,
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: NodeId,
    x_km: f64,
    y_km: f64,
    pads: usize,
}

#[derive(Serialize, Deserialize)]
struct SegmentRecord {
    from: NodeId,
    to: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length_km: Option<f64>,
}

pub fn network_to_json(net: &SkywayNetwork) -> String {
    let file = NetworkFile {
        format: NETWORK_FORMAT.to_string(),
        bounds: net.bounds(),
        nodes: net
            .nodes()
            .iter()
            .map(|n| NodeRecord {
                id: n.id,
                x_km: n.position.x,
                y_km: n.position.y,
                pads: n.pads,
            })
            .collect(),
        segments: net
            .segments()
            .iter()
            .map(|s| SegmentRecord {
                from: s.from,
                to: s.to,
                length_km: Some(s.length),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("network serializes")
}

pub fn network_from_json(text: &str) -> Result<SkywayNetwork, FormatError> {
    let file: NetworkFile = serde_json::from_str(text)?;
    if file.format != NETWORK_FORMAT {
        return Err(FormatError::Version {
            expected: NETWORK_FORMAT.to_string(),
            found: file.format,
        });
    }
    let mut nodes: Vec<Node> = file
        .nodes
        .into_iter()
        .map(|r| Node {
            id: r.id,
            position: Point::new(r.x_km, r.y_km),
            pads: r.pads,
        })
        .collect();
    nodes.sort_by_key(|n| n.id);
    let positions: Vec<Point> = nodes.iter().map(|n| n.position).collect();

    for s in &file.segments {
        let (Some(a), Some(b)) = (positions.get(s.from.0), positions.get(s.to.0)) else {
            continue; // reported as UnknownNode by the constructor
        };
        if let Some(stated) = s.length_km {
            let actual = a.distance(b);
            if (stated - actual).abs() > LENGTH_TOLERANCE {
                return Err(NetworkError::LengthMismatch {
                    from: s.from,
                    to: s.to,
                    stated,
                    actual,
                }
                .into());
            }
        }
    }
    let links: Vec<_> = file.segments.iter().map(|s| (s.from, s.to)).collect();
    Ok(SkywayNetwork::new(file.bounds, nodes, links)?)
}

pub fn save_network(net: &SkywayNetwork, path: impl AsRef<Path>) -> Result<(), FormatError> {
    let path = path.as_ref();
    fs::write(path, network_to_json(net)).map_err(|e| FormatError::io(path, e))
}

pub fn load_network(path: impl AsRef<Path>) -> Result<SkywayNetwork, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    network_from_json(&text)
}
