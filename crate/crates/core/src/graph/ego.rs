//! BFS ego-graph extraction.

use std::collections::{HashSet, VecDeque};

use super::{Graph, GraphError, NodeId};

/// The subgraph of all nodes within `hops` edges of a center node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgoGraph {
    pub center: NodeId,
    pub hops: usize,
    /// Included nodes in BFS discovery order; the center comes first.
    pub nodes: Vec<NodeId>,
    /// True when expansion stopped because the node cap was reached.
    pub truncated: bool,
}

impl EgoGraph {
    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

pub(super) fn extract(
    graph: &Graph,
    center: &NodeId,
    hops: usize,
    node_cap: usize,
    edge_filter: Option<&[String]>,
) -> Result<EgoGraph, GraphError> {
    if node_cap == 0 {
        return Err(GraphError::ZeroNodeCap);
    }
    graph
        .node(center)
        .ok_or_else(|| GraphError::UnknownNode(center.to_string()))?;

    let mut order = vec![center.clone()];
    let mut seen: HashSet<NodeId> = HashSet::from([center.clone()]);
    let mut queue: VecDeque<(NodeId, usize)> = VecDeque::from([(center.clone(), 0)]);
    let mut truncated = false;

    'bfs: while let Some((id, depth)) = queue.pop_front() {
        if depth == hops {
            continue;
        }
        let node = graph.node(&id).expect("queued nodes exist");
        // neighbors is a BTreeMap, so edge types come out in name order
        for (edge_type, targets) in &node.neighbors {
            if let Some(filter) = edge_filter {
                if !filter.iter().any(|t| t == edge_type) {
                    continue;
                }
            }
            for target in targets {
                if !graph.contains(target) || seen.contains(target) {
                    continue;
                }
                if order.len() == node_cap {
                    truncated = true;
                    break 'bfs;
                }
                order.push(target.clone());
                seen.insert(target.clone());
                queue.push_back((target.clone(), depth + 1));
            }
        }
    }

    Ok(EgoGraph {
        center: center.clone(),
        hops,
        nodes: order,
        truncated,
    })
}
