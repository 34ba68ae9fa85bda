//! Graph JSON loading, validation, and canonical serialization.
//!
//! A graph is stored as two files. The node file is a top-level object keyed
//! by node-type section (`paper_nodes`, `author_nodes`, ...); each section
//! maps node id to `{"features": {...}, "neighbors": {...}}`. A sidecar
//! manifest declares node types, edge types, reciprocity rules, and the
//! natural-language graph description.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FeatureValue, Graph, GraphError, Node, NodeId};

/// Suffix that turns a node-type label into its file section name.
const SECTION_SUFFIX: &str = "_nodes";

/// One reciprocal edge declaration: every `edge_type` edge from a
/// `src_type` node to a `dst_type` node is mirrored by a
/// `reverse_edge_type` edge in the other direction, and vice versa.
///
/// Rules are scoped by node type because edge-type names repeat across
/// types (both author and venue nodes carry a `paper` edge, with different
/// reverse edges).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityRule {
    pub src_type: String,
    pub edge_type: String,
    pub dst_type: String,
    pub reverse_edge_type: String,
}

/// Sidecar metadata for one graph file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphManifest {
    pub graph_id: String,
    #[serde(default)]
    pub domain: String,
    pub node_types: Vec<String>,
    pub edge_types: Vec<String>,
    #[serde(default)]
    pub reciprocity: Vec<ReciprocityRule>,
    pub description: String,
}

impl GraphManifest {
    pub fn from_json(json: &str) -> Result<Self, GraphError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("manifest serializes");
        out.push('\n');
        out
    }
}

/// What a lenient load dropped on the floor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub dangling_dropped: usize,
    pub duplicate_neighbors_dropped: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeRecord {
    #[serde(default)]
    features: BTreeMap<String, FeatureValue>,
    #[serde(default)]
    neighbors: BTreeMap<String, Vec<NodeId>>,
}

type NodeFile = BTreeMap<String, BTreeMap<String, NodeRecord>>;

impl Graph {
    /// Load a graph from JSON strings. In strict mode every referenced node
    /// must resolve and all declared reciprocity rules must hold; in lenient
    /// mode dangling references and duplicate neighbor entries are dropped
    /// and counted in the report.
    pub fn from_json(
        nodes_json: &str,
        manifest_json: &str,
        strict: bool,
    ) -> Result<(Graph, LoadReport), GraphError> {
        let manifest = GraphManifest::from_json(manifest_json)?;
        let file: NodeFile = serde_json::from_str(nodes_json)?;
        build(file, manifest, strict)
    }

    /// Load from readers (see [`Graph::from_json`]).
    pub fn from_readers(
        mut nodes: impl Read,
        mut manifest: impl Read,
        strict: bool,
    ) -> Result<(Graph, LoadReport), GraphError> {
        let mut nodes_json = String::new();
        nodes.read_to_string(&mut nodes_json)?;
        let mut manifest_json = String::new();
        manifest.read_to_string(&mut manifest_json)?;
        Graph::from_json(&nodes_json, &manifest_json, strict)
    }

    /// Load `graph.json` plus its `graph.manifest.json` sidecar.
    pub fn load_files(
        graph_path: &Path,
        manifest_path: &Path,
        strict: bool,
    ) -> Result<(Graph, LoadReport), GraphError> {
        let nodes_json = std::fs::read_to_string(graph_path)?;
        let manifest_json = std::fs::read_to_string(manifest_path)?;
        Graph::from_json(&nodes_json, &manifest_json, strict)
    }

    /// Load a graph given only the node-file path, deriving the manifest
    /// path by replacing the `.json` extension with `.manifest.json`.
    pub fn load_with_sidecar(graph_path: &Path, strict: bool) -> Result<(Graph, LoadReport), GraphError> {
        Graph::load_files(graph_path, &manifest_path_for(graph_path), strict)
    }

    /// Canonical node-file JSON: sections, ids, features, and edge types in
    /// sorted key order, neighbor lists in stored order.
    pub fn to_node_json(&self) -> String {
        let mut file: NodeFile = BTreeMap::new();
        for node in self.nodes() {
            file.entry(section_name(&node.node_type)).or_default().insert(
                node.id.to_string(),
                NodeRecord {
                    features: node.features.clone(),
                    neighbors: node.neighbors.clone(),
                },
            );
        }
        // every declared node type gets a section, even when empty
        for node_type in self.node_types() {
            file.entry(section_name(node_type)).or_default();
        }
        let mut out = serde_json::to_string_pretty(&file).expect("graph serializes");
        out.push('\n');
        out
    }

    /// Write the node file and manifest sidecar next to each other.
    pub fn save_files(&self, graph_path: &Path, manifest_path: &Path) -> Result<(), GraphError> {
        std::fs::write(graph_path, self.to_node_json())?;
        std::fs::write(manifest_path, self.manifest().to_json())?;
        Ok(())
    }
}

/// `graph.json` -> `graph.manifest.json`.
pub fn manifest_path_for(graph_path: &Path) -> std::path::PathBuf {
    graph_path.with_extension("manifest.json")
}

fn section_name(node_type: &str) -> String {
    format!("{node_type}{SECTION_SUFFIX}")
}

fn node_type_of_section(section: &str) -> Option<&str> {
    section.strip_suffix(SECTION_SUFFIX).filter(|t| !t.is_empty())
}

fn build(
    file: NodeFile,
    manifest: GraphManifest,
    strict: bool,
) -> Result<(Graph, LoadReport), GraphError> {
    let declared_types: BTreeSet<&str> = manifest.node_types.iter().map(String::as_str).collect();
    let declared_edges: BTreeSet<&str> = manifest.edge_types.iter().map(String::as_str).collect();
    let mut report = LoadReport::default();

    let mut nodes: BTreeMap<NodeId, Node> = BTreeMap::new();
    for (section, records) in file {
        let node_type = node_type_of_section(&section)
            .filter(|t| declared_types.contains(t))
            .ok_or_else(|| GraphError::UnknownSection(section.clone()))?
            .to_string();
        for (raw_id, record) in records {
            let id = NodeId::new(raw_id)?;
            for edge_type in record.neighbors.keys() {
                if !declared_edges.contains(edge_type.as_str()) {
                    return Err(GraphError::UndeclaredEdgeType {
                        node: id.to_string(),
                        edge_type: edge_type.clone(),
                    });
                }
            }
            let node = Node {
                id: id.clone(),
                node_type: node_type.clone(),
                features: record.features,
                neighbors: record.neighbors,
            };
            if nodes.insert(id.clone(), node).is_some() {
                return Err(GraphError::DuplicateNode(id.to_string()));
            }
        }
    }

    // resolve dangling references and duplicate neighbor entries
    let known: BTreeSet<NodeId> = nodes.keys().cloned().collect();
    for node in nodes.values_mut() {
        for (edge_type, targets) in node.neighbors.iter_mut() {
            let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
            let mut keep = Vec::with_capacity(targets.len());
            for target in targets.iter() {
                if !known.contains(target) {
                    if strict {
                        return Err(GraphError::DanglingEdge {
                            node: node.id.to_string(),
                            target: target.to_string(),
                            edge_type: edge_type.clone(),
                        });
                    }
                    report.dangling_dropped += 1;
                    continue;
                }
                if !seen.insert(target) {
                    if strict {
                        return Err(GraphError::DuplicateNeighbor {
                            node: node.id.to_string(),
                            target: target.to_string(),
                            edge_type: edge_type.clone(),
                        });
                    }
                    report.duplicate_neighbors_dropped += 1;
                    continue;
                }
                keep.push(target.clone());
            }
            *targets = keep;
        }
    }

    let mut type_edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for node_type in &manifest.node_types {
        type_edges.entry(node_type.clone()).or_default();
    }
    for node in nodes.values() {
        let set = type_edges.entry(node.node_type.clone()).or_default();
        set.extend(node.neighbors.keys().cloned());
    }
    for rule in &manifest.reciprocity {
        type_edges
            .entry(rule.src_type.clone())
            .or_default()
            .insert(rule.edge_type.clone());
        type_edges
            .entry(rule.dst_type.clone())
            .or_default()
            .insert(rule.reverse_edge_type.clone());
    }

    let graph = Graph::from_parts(nodes, manifest, type_edges);
    if strict {
        verify_reciprocity(&graph)?;
    }
    Ok((graph, report))
}

/// Exhaustive scan of every declared reciprocity rule.
pub fn verify_reciprocity(graph: &Graph) -> Result<(), GraphError> {
    for rule in &graph.manifest().reciprocity {
        for node in graph.nodes_of_type(&rule.src_type) {
            let Some(targets) = node.neighbors.get(&rule.edge_type) else {
                continue;
            };
            for target in targets {
                let back = graph
                    .node(target)
                    .map(|t| {
                        t.node_type == rule.dst_type
                            && t.neighbors
                                .get(&rule.reverse_edge_type)
                                .is_some_and(|list| list.contains(&node.id))
                    })
                    .unwrap_or(false);
                if !back {
                    return Err(GraphError::ReciprocityViolation {
                        node: node.id.to_string(),
                        edge_type: rule.edge_type.clone(),
                        target: target.to_string(),
                        reverse_edge_type: rule.reverse_edge_type.clone(),
                    });
                }
            }
        }
        // and the mirror direction
        for node in graph.nodes_of_type(&rule.dst_type) {
            let Some(targets) = node.neighbors.get(&rule.reverse_edge_type) else {
                continue;
            };
            for target in targets {
                let back = graph
                    .node(target)
                    .map(|t| {
                        t.node_type == rule.src_type
                            && t.neighbors
                                .get(&rule.edge_type)
                                .is_some_and(|list| list.contains(&node.id))
                    })
                    .unwrap_or(false);
                if !back {
                    return Err(GraphError::ReciprocityViolation {
                        node: node.id.to_string(),
                        edge_type: rule.reverse_edge_type.clone(),
                        target: target.to_string(),
                        reverse_edge_type: rule.edge_type.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}
