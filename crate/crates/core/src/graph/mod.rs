//! In-memory heterogeneous text-attributed graph.
//!
//! Nodes carry a type label, a map of textual features, and per-edge-type
//! adjacency lists. A graph is immutable once loaded; any number of readers
//! may query it concurrently.

mod ego;
pub(crate) mod load;

pub use ego::EgoGraph;
pub use load::{manifest_path_for, verify_reciprocity, GraphManifest, LoadReport, ReciprocityRule};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown node id `{0}`")]
    UnknownNode(String),
    #[error("node `{id}` has no feature `{feature}`")]
    UnknownFeature { id: String, feature: String },
    #[error("edge type `{edge_type}` is not defined for `{node_type}` nodes")]
    UnknownEdgeType {
        node_type: String,
        edge_type: String,
    },
    #[error("invalid node id `{0}`: ids must be non-empty and contain no whitespace or commas")]
    InvalidNodeId(String),
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("node `{node}` references missing node `{target}` via edge type `{edge_type}`")]
    DanglingEdge {
        node: String,
        target: String,
        edge_type: String,
    },
    #[error("node `{node}` lists neighbor `{target}` more than once under edge type `{edge_type}`")]
    DuplicateNeighbor {
        node: String,
        target: String,
        edge_type: String,
    },
    #[error("unknown top-level node-type section `{0}`")]
    UnknownSection(String),
    #[error("edge type `{edge_type}` on node `{node}` is not declared in the manifest")]
    UndeclaredEdgeType { node: String, edge_type: String },
    #[error(
        "reciprocity violated: `{node}` -{edge_type}-> `{target}` has no \
         `{reverse_edge_type}` edge back"
    )]
    ReciprocityViolation {
        node: String,
        edge_type: String,
        target: String,
        reverse_edge_type: String,
    },
    #[error("ego-graph node cap must be at least 1")]
    ZeroNodeCap,
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Identifier of a node, unique within a graph.
///
/// Ids are bare tokens: non-empty, no whitespace, no commas. The restriction
/// lets the interaction DSL split two-argument calls on the first comma.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(value: impl Into<String>) -> Result<Self, GraphError> {
        let value = value.into();
        if value.is_empty() || value.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(GraphError::InvalidNodeId(value));
        }
        Ok(NodeId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for NodeId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        NodeId::new(raw).map_err(serde::de::Error::custom)
    }
}

/// The value of one node feature. All features are textual; numbers read
/// from graph files are kept in their JSON form so serialization round-trips.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureValue {
    Text(String),
    List(Vec<String>),
    Number(serde_json::Number),
}

impl FeatureValue {
    /// Render the value the way graph observations show it: text verbatim,
    /// lists in `['a', 'b']` form, numbers as digits.
    pub fn display(&self) -> String {
        match self {
            FeatureValue::Text(s) => s.clone(),
            FeatureValue::List(items) => {
                let quoted: Vec<String> = items.iter().map(|s| format!("'{s}'")).collect();
                format!("[{}]", quoted.join(", "))
            }
            FeatureValue::Number(n) => n.to_string(),
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            FeatureValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[String]> {
        match self {
            FeatureValue::List(items) => Some(items),
            _ => None,
        }
    }
}

/// One node: type label, feature map, and per-edge-type neighbor lists.
#[derive(Debug, Clone)]
pub struct Node {
    pub id: NodeId,
    pub node_type: String,
    pub features: BTreeMap<String, FeatureValue>,
    pub neighbors: BTreeMap<String, Vec<NodeId>>,
}

impl Node {
    pub fn feature(&self, name: &str) -> Option<&FeatureValue> {
        self.features.get(name)
    }
}

/// Immutable heterogeneous graph with typed adjacency.
#[derive(Debug, Clone)]
pub struct Graph {
    nodes: BTreeMap<NodeId, Node>,
    manifest: GraphManifest,
    /// Edge types valid for each node type, derived at load time from the
    /// observed adjacency keys plus the manifest's reciprocity rules.
    type_edges: BTreeMap<String, BTreeSet<String>>,
}

impl Graph {
    pub(crate) fn from_parts(
        nodes: BTreeMap<NodeId, Node>,
        manifest: GraphManifest,
        type_edges: BTreeMap<String, BTreeSet<String>>,
    ) -> Self {
        Graph {
            nodes,
            manifest,
            type_edges,
        }
    }

    pub fn manifest(&self) -> &GraphManifest {
        &self.manifest
    }

    /// The natural-language definition of the graph, shown to LLMs.
    pub fn description(&self) -> &str {
        &self.manifest.description
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    fn require_node(&self, id: &NodeId) -> Result<&Node, GraphError> {
        self.nodes
            .get(id)
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))
    }

    /// All nodes in id order.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    /// Nodes of one type, in id order.
    pub fn nodes_of_type<'a>(&'a self, node_type: &'a str) -> impl Iterator<Item = &'a Node> {
        self.nodes.values().filter(move |n| n.node_type == node_type)
    }

    pub fn node_types(&self) -> &[String] {
        &self.manifest.node_types
    }

    pub fn edge_types(&self) -> &[String] {
        &self.manifest.edge_types
    }

    /// Edge types valid for a node type.
    pub fn edge_types_of(&self, node_type: &str) -> Option<&BTreeSet<String>> {
        self.type_edges.get(node_type)
    }

    /// The stored value of one feature on one node.
    ///
    /// Unknown node and unknown feature are distinct errors; list values come
    /// back as lists, never pre-joined.
    pub fn node_feature(&self, id: &NodeId, feature: &str) -> Result<&FeatureValue, GraphError> {
        let node = self.require_node(id)?;
        node.feature(feature).ok_or_else(|| GraphError::UnknownFeature {
            id: id.to_string(),
            feature: feature.to_string(),
        })
    }

    /// The stored neighbor list of one node under one edge type.
    ///
    /// Empty when the node's type declares the edge type but this node has no
    /// entries; an error when the edge type does not exist for that node type.
    pub fn neighbor_check(&self, id: &NodeId, edge_type: &str) -> Result<&[NodeId], GraphError> {
        let node = self.require_node(id)?;
        if let Some(list) = node.neighbors.get(edge_type) {
            return Ok(list);
        }
        let allowed = self
            .type_edges
            .get(&node.node_type)
            .is_some_and(|set| set.contains(edge_type));
        if allowed {
            Ok(&[])
        } else {
            Err(GraphError::UnknownEdgeType {
                node_type: node.node_type.clone(),
                edge_type: edge_type.to_string(),
            })
        }
    }

    /// Number of neighbors of one node under one edge type.
    pub fn node_degree(&self, id: &NodeId, edge_type: &str) -> Result<usize, GraphError> {
        self.neighbor_check(id, edge_type).map(|list| list.len())
    }

    /// Breadth-first ego-graph around `center`, crossing all edge types.
    ///
    /// Expansion is deterministic (edge-type name order, then stored neighbor
    /// order) and stops with `truncated = true` once `node_cap` nodes are in.
    pub fn ego_graph(
        &self,
        center: &NodeId,
        hops: usize,
        node_cap: usize,
    ) -> Result<EgoGraph, GraphError> {
        self.ego_graph_filtered(center, hops, node_cap, None)
    }

    /// Ego-graph restricted to a set of edge types (`None` means all).
    pub fn ego_graph_filtered(
        &self,
        center: &NodeId,
        hops: usize,
        node_cap: usize,
        edge_filter: Option<&[String]>,
    ) -> Result<EgoGraph, GraphError> {
        ego::extract(self, center, hops, node_cap, edge_filter)
    }
}
