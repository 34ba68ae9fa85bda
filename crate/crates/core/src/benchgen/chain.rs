//! The declarative function-chain language that computes ground-truth
//! answers by walking the graph.
//!
//! A chain is an ordered list of steps over named bindings. Steps either
//! bind a value (node, node list, text, text list, integer) or assert a
//! precondition. A failed precondition or an ambiguous argmax aborts the
//! chain, which makes the enclosing sampler draw a fresh starting point;
//! misconfigured steps (unknown bindings, bad edge types) are hard errors.
//!
//! Chains run in two modes: sampling (random choices drawn from a seeded
//! RNG) and replay (random choices resolved from stored bindings), so a
//! stored sample can be re-executed to reproduce its answer exactly.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{FeatureValue, Graph, Node, NodeId};

/// One bound value in the chain environment.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Node(NodeId),
    Nodes(Vec<NodeId>),
    Text(String),
    Texts(Vec<String>),
    Int(i64),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Node(_) => "node",
            Value::Nodes(_) => "nodes",
            Value::Text(_) => "text",
            Value::Texts(_) => "texts",
            Value::Int(_) => "int",
        }
    }

    /// Text form used for question slots and stored bindings.
    pub fn to_text(&self) -> Option<String> {
        match self {
            Value::Text(s) => Some(s.clone()),
            Value::Int(i) => Some(i.to_string()),
            Value::Node(id) => Some(id.to_string()),
            _ => None,
        }
    }
}

/// Why a chain run stopped without a result.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainFailure {
    /// Precondition failed or a choice was ambiguous; resample.
    Abort(String),
    /// The chain itself is wrong for this graph; do not retry.
    Error(String),
}

impl std::fmt::Display for ChainFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChainFailure::Abort(m) => write!(f, "chain aborted: {m}"),
            ChainFailure::Error(m) => write!(f, "chain error: {m}"),
        }
    }
}

fn abort(message: impl Into<String>) -> ChainFailure {
    ChainFailure::Abort(message.into())
}

fn error(message: impl Into<String>) -> ChainFailure {
    ChainFailure::Error(message.into())
}

/// One step of a chain. Bindings are referenced by name; `bind` names the
/// step's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ChainStep {
    /// Pick a random node of a type; with `unique_by`, only nodes whose
    /// value for that feature is unique within the type qualify.
    SampleNode {
        node_type: String,
        bind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unique_by: Option<String>,
    },
    /// Pick a random element of a node or text list.
    SampleFrom {
        list: String,
        bind: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        distinct_from: Vec<String>,
    },
    /// All nodes of a type, in id order.
    AllNodes { node_type: String, bind: String },
    /// Neighbors of a node (or of every node in a list, concatenated with
    /// multiplicity) under one edge type.
    FollowEdge { from: String, edge_type: String, bind: String },
    /// Feature of a node (text) or of every node in a list (texts, with
    /// multiplicity; list-valued features are flattened).
    ReadFeature { from: String, feature: String, bind: String },
    Count { of: String, bind: String },
    /// Join texts with ", ".
    Join { of: String, bind: String },
    /// Keep first occurrences only.
    Dedup { of: String, bind: String },
    /// Drop one node from a node list.
    ExcludeNode { from: String, node: String, bind: String },
    /// Drop every element of `minus` from `from`.
    ExcludeList { from: String, minus: String, bind: String },
    /// Elements of `a` also present in `b` (deduplicated, order of `a`).
    Intersect { a: String, b: String, bind: String },
    /// Abort unless the list length is within bounds.
    RequireCount {
        of: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max: Option<usize>,
    },
    /// Keep nodes whose feature (rendered as text) equals the bound text.
    FilterByFeature { list: String, feature: String, equals: String, bind: String },
    /// Keep nodes whose list-feature shares at least one value with the
    /// bound texts.
    FilterFeatureIntersects { list: String, feature: String, with: String, bind: String },
    /// Keep nodes whose list-feature contains the bound text.
    FilterFeatureContains { list: String, feature: String, value: String, bind: String },
    /// Keep nodes whose neighbors under `edge_type` include the bound node.
    FilterByNeighborContains { list: String, edge_type: String, node: String, bind: String },
    /// Most frequent element of a list-with-multiplicity; aborts on a tie.
    ArgmaxCount { of: String, bind: String },
    /// The `k` most frequent texts, most frequent first; aborts when the
    /// boundary is tied.
    TopKByCount { of: String, k: usize, bind: String },
    /// Node in the list with the highest degree under `edge_type`; tie aborts.
    ArgmaxByDegree { list: String, edge_type: String, bind: String },
    /// Node with the smallest numeric feature; tie aborts.
    ArgminByNumericFeature { list: String, feature: String, bind: String },
    /// Node with the largest numeric feature; tie aborts.
    ArgmaxByNumericFeature { list: String, feature: String, bind: String },
    /// Mean of a numeric feature over the list, fixed decimals, as text.
    AvgNumericFeature { list: String, feature: String, decimals: u8, bind: String },
    /// Among nodes sharing at least one `edge_type` neighbor with `center`
    /// (same node type, symmetric edges), the one sharing the most; binds
    /// the node and the shared count. Ties abort.
    MaxSharedNeighbors {
        center: String,
        edge_type: String,
        bind_node: String,
        bind_count: String,
    },
    /// How many same-type nodes share at least one `edge_type` neighbor
    /// with `center`.
    CountSharingNeighbor { center: String, edge_type: String, bind: String },
    /// How many same-type nodes have exactly the same `edge_type` neighbor
    /// set as `center`.
    CountSameNeighborSet { center: String, edge_type: String, bind: String },
    /// "True" when the bound node list contains the bound node.
    ContainsNode { list: String, node: String, bind: String },
    /// BFS hop count from one node to another across the given edge types;
    /// unreachable aborts.
    BfsDistance { from: String, to: String, via: Vec<String>, bind: String },
    /// value = from / divide + offset (integer arithmetic).
    IntAffine {
        from: String,
        #[serde(default = "default_divide")]
        divide: i64,
        #[serde(default)]
        offset: i64,
        bind: String,
    },
}

fn default_divide() -> i64 {
    1
}

/// How sampling steps resolve their choices.
pub enum SampleSource<'a> {
    Random(&'a mut ChaCha8Rng),
    /// Replay stored bindings: every sampling step's `bind` must be present.
    Replay(&'a BTreeMap<String, String>),
}

/// Shared lookup caches, reusable across many runs over one graph.
pub struct ChainContext<'g> {
    graph: &'g Graph,
    ids_by_type: HashMap<String, Vec<NodeId>>,
    feature_multiplicity: HashMap<(String, String), HashMap<String, usize>>,
}

impl<'g> ChainContext<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        let mut ids_by_type: HashMap<String, Vec<NodeId>> = HashMap::new();
        for node in graph.nodes() {
            ids_by_type.entry(node.node_type.clone()).or_default().push(node.id.clone());
        }
        ChainContext { graph, ids_by_type, feature_multiplicity: HashMap::new() }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    fn ids_of(&self, node_type: &str) -> Result<&[NodeId], ChainFailure> {
        self.ids_by_type
            .get(node_type)
            .map(Vec::as_slice)
            .ok_or_else(|| error(format!("no nodes of type `{node_type}`")))
    }

    /// Number of nodes of `node_type` sharing each rendered value of
    /// `feature`; built once per (type, feature).
    fn multiplicity(&mut self, node_type: &str, feature: &str) -> &HashMap<String, usize> {
        let key = (node_type.to_string(), feature.to_string());
        if !self.feature_multiplicity.contains_key(&key) {
            let mut counts: HashMap<String, usize> = HashMap::new();
            for node in self.graph.nodes_of_type(node_type) {
                if let Some(value) = node.feature(feature) {
                    *counts.entry(value.display()).or_insert(0) += 1;
                }
            }
            self.feature_multiplicity.insert(key.clone(), counts);
        }
        &self.feature_multiplicity[&key]
    }
}

pub type Env = BTreeMap<String, Value>;

/// Execute a chain over the graph. Returns the final environment with all
/// bindings, or a failure (abort = resample, error = fix the chain).
pub fn run_chain(
    ctx: &mut ChainContext<'_>,
    steps: &[ChainStep],
    source: &mut SampleSource<'_>,
) -> Result<Env, ChainFailure> {
    let mut env = Env::new();
    for step in steps {
        run_step(ctx, step, source, &mut env)?;
    }
    Ok(env)
}

fn lookup<'e>(env: &'e Env, name: &str) -> Result<&'e Value, ChainFailure> {
    env.get(name).ok_or_else(|| error(format!("unknown binding `{name}`")))
}

fn as_node<'e>(env: &'e Env, name: &str) -> Result<&'e NodeId, ChainFailure> {
    match lookup(env, name)? {
        Value::Node(id) => Ok(id),
        other => Err(error(format!("binding `{name}` is {}, expected node", other.kind()))),
    }
}

fn as_nodes<'e>(env: &'e Env, name: &str) -> Result<&'e [NodeId], ChainFailure> {
    match lookup(env, name)? {
        Value::Nodes(ids) => Ok(ids),
        other => Err(error(format!("binding `{name}` is {}, expected nodes", other.kind()))),
    }
}

fn as_text(env: &Env, name: &str) -> Result<String, ChainFailure> {
    match lookup(env, name)? {
        Value::Text(s) => Ok(s.clone()),
        Value::Int(i) => Ok(i.to_string()),
        other => Err(error(format!("binding `{name}` is {}, expected text", other.kind()))),
    }
}

fn as_texts<'e>(env: &'e Env, name: &str) -> Result<&'e [String], ChainFailure> {
    match lookup(env, name)? {
        Value::Texts(items) => Ok(items),
        other => Err(error(format!("binding `{name}` is {}, expected texts", other.kind()))),
    }
}

fn node<'g>(ctx: &ChainContext<'g>, id: &NodeId) -> Result<&'g Node, ChainFailure> {
    ctx.graph.node(id).ok_or_else(|| error(format!("node `{id}` missing from graph")))
}

fn numeric_feature(node: &Node, feature: &str) -> Result<f64, ChainFailure> {
    let value = node
        .feature(feature)
        .ok_or_else(|| error(format!("node `{}` has no feature `{feature}`", node.id)))?;
    value
        .display()
        .parse::<f64>()
        .map_err(|_| abort(format!("feature `{feature}` of `{}` is not numeric", node.id)))
}

fn list_len(value: &Value) -> Option<usize> {
    match value {
        Value::Nodes(ids) => Some(ids.len()),
        Value::Texts(items) => Some(items.len()),
        _ => None,
    }
}

fn run_step(
    ctx: &mut ChainContext<'_>,
    step: &ChainStep,
    source: &mut SampleSource<'_>,
    env: &mut Env,
) -> Result<(), ChainFailure> {
    match step {
        ChainStep::SampleNode { node_type, bind, unique_by } => {
            let id = match source {
                SampleSource::Random(rng) => {
                    let ids = ctx.ids_of(node_type)?;
                    if ids.is_empty() {
                        return Err(abort(format!("no `{node_type}` nodes to sample")));
                    }
                    ids[rng.gen_range(0..ids.len())].clone()
                }
                SampleSource::Replay(bindings) => replay_node(ctx, bindings, bind)?,
            };
            if let Some(feature) = unique_by {
                let value = node(ctx, &id)?
                    .feature(feature)
                    .ok_or_else(|| error(format!("node `{id}` has no feature `{feature}`")))?
                    .display();
                let node_type = node(ctx, &id)?.node_type.clone();
                if ctx.multiplicity(&node_type, feature).get(&value).copied().unwrap_or(0) != 1 {
                    return Err(abort(format!("`{feature}` value of `{id}` is not unique")));
                }
            }
            env.insert(bind.clone(), Value::Node(id));
        }
        ChainStep::SampleFrom { list, bind, distinct_from } => {
            let taken: HashSet<String> = distinct_from
                .iter()
                .map(|name| lookup(env, name).and_then(|v| v.to_text().ok_or_else(|| error(format!("binding `{name}` has no text form")))))
                .collect::<Result<_, _>>()?;
            match lookup(env, list)?.clone() {
                Value::Nodes(ids) => {
                    let candidates: Vec<&NodeId> =
                        ids.iter().filter(|id| !taken.contains(id.as_str())).collect();
                    if candidates.is_empty() {
                        return Err(abort(format!("nothing left to sample from `{list}`")));
                    }
                    let id = match source {
                        SampleSource::Random(rng) => {
                            candidates[rng.gen_range(0..candidates.len())].clone()
                        }
                        SampleSource::Replay(bindings) => {
                            let id = replay_node(ctx, bindings, bind)?;
                            if !candidates.iter().any(|c| **c == id) {
                                return Err(error(format!(
                                    "replayed `{bind}` is not a member of `{list}`"
                                )));
                            }
                            id
                        }
                    };
                    env.insert(bind.clone(), Value::Node(id));
                }
                Value::Texts(items) => {
                    let candidates: Vec<&String> =
                        items.iter().filter(|t| !taken.contains(*t)).collect();
                    if candidates.is_empty() {
                        return Err(abort(format!("nothing left to sample from `{list}`")));
                    }
                    let text = match source {
                        SampleSource::Random(rng) => {
                            candidates[rng.gen_range(0..candidates.len())].clone()
                        }
                        SampleSource::Replay(bindings) => {
                            let text = bindings
                                .get(bind)
                                .ok_or_else(|| error(format!("replay missing binding `{bind}`")))?
                                .clone();
                            if !candidates.iter().any(|c| **c == text) {
                                return Err(error(format!(
                                    "replayed `{bind}` is not a member of `{list}`"
                                )));
                            }
                            text
                        }
                    };
                    env.insert(bind.clone(), Value::Text(text));
                }
                other => {
                    return Err(error(format!(
                        "binding `{list}` is {}, expected a list",
                        other.kind()
                    )))
                }
            }
        }
        ChainStep::AllNodes { node_type, bind } => {
            let ids = ctx.ids_of(node_type)?.to_vec();
            env.insert(bind.clone(), Value::Nodes(ids));
        }
        ChainStep::FollowEdge { from, edge_type, bind } => {
            let sources: Vec<NodeId> = match lookup(env, from)? {
                Value::Node(id) => vec![id.clone()],
                Value::Nodes(ids) => ids.clone(),
                other => {
                    return Err(error(format!(
                        "binding `{from}` is {}, expected node or nodes",
                        other.kind()
                    )))
                }
            };
            let mut out = Vec::new();
            for id in sources {
                let list = ctx
                    .graph
                    .neighbor_check(&id, edge_type)
                    .map_err(|e| error(e.to_string()))?;
                out.extend(list.iter().cloned());
            }
            env.insert(bind.clone(), Value::Nodes(out));
        }
        ChainStep::ReadFeature { from, feature, bind } => {
            let from_value = lookup(env, from)?.clone();
            let bound = match from_value {
                Value::Node(id) => {
                    let value = node(ctx, &id)?
                        .feature(feature)
                        .ok_or_else(|| error(format!("node `{id}` has no feature `{feature}`")))?;
                    match value {
                        FeatureValue::List(items) => Value::Texts(items.clone()),
                        other => Value::Text(other.display()),
                    }
                }
                Value::Nodes(ids) => {
                    let mut out = Vec::new();
                    for id in &ids {
                        let value = node(ctx, id)?.feature(feature).ok_or_else(|| {
                            error(format!("node `{id}` has no feature `{feature}`"))
                        })?;
                        match value {
                            FeatureValue::List(items) => out.extend(items.iter().cloned()),
                            other => out.push(other.display()),
                        }
                    }
                    Value::Texts(out)
                }
                other => {
                    return Err(error(format!(
                        "binding `{from}` is {}, expected node or nodes",
                        other.kind()
                    )))
                }
            };
            env.insert(bind.clone(), bound);
        }
        ChainStep::Count { of, bind } => {
            let len = list_len(lookup(env, of)?)
                .ok_or_else(|| error(format!("binding `{of}` is not a list")))?;
            env.insert(bind.clone(), Value::Int(len as i64));
        }
        ChainStep::Join { of, bind } => {
            let items = as_texts(env, of)?.to_vec();
            env.insert(bind.clone(), Value::Text(items.join(", ")));
        }
        ChainStep::Dedup { of, bind } => {
            let value = match lookup(env, of)? {
                Value::Nodes(ids) => {
                    let mut seen = HashSet::new();
                    Value::Nodes(ids.iter().filter(|id| seen.insert((*id).clone())).cloned().collect())
                }
                Value::Texts(items) => {
                    let mut seen = HashSet::new();
                    Value::Texts(items.iter().filter(|t| seen.insert((*t).clone())).cloned().collect())
                }
                other => {
                    return Err(error(format!("binding `{of}` is {}, expected a list", other.kind())))
                }
            };
            env.insert(bind.clone(), value);
        }
        ChainStep::ExcludeNode { from, node, bind } => {
            let drop = as_node(env, node)?.clone();
            let kept: Vec<NodeId> =
                as_nodes(env, from)?.iter().filter(|id| **id != drop).cloned().collect();
            env.insert(bind.clone(), Value::Nodes(kept));
        }
        ChainStep::ExcludeList { from, minus, bind } => {
            let minus: HashSet<NodeId> = as_nodes(env, minus)?.iter().cloned().collect();
            let kept: Vec<NodeId> =
                as_nodes(env, from)?.iter().filter(|id| !minus.contains(id)).cloned().collect();
            env.insert(bind.clone(), Value::Nodes(kept));
        }
        ChainStep::Intersect { a, b, bind } => {
            let right: HashSet<NodeId> = as_nodes(env, b)?.iter().cloned().collect();
            let mut seen = HashSet::new();
            let kept: Vec<NodeId> = as_nodes(env, a)?
                .iter()
                .filter(|id| right.contains(id) && seen.insert((*id).clone()))
                .cloned()
                .collect();
            env.insert(bind.clone(), Value::Nodes(kept));
        }
        ChainStep::RequireCount { of, min, max } => {
            let len = list_len(lookup(env, of)?)
                .ok_or_else(|| error(format!("binding `{of}` is not a list")))?;
            if let Some(min) = min {
                if len < *min {
                    return Err(abort(format!("`{of}` has {len} elements, need at least {min}")));
                }
            }
            if let Some(max) = max {
                if len > *max {
                    return Err(abort(format!("`{of}` has {len} elements, need at most {max}")));
                }
            }
        }
        ChainStep::FilterByFeature { list, feature, equals, bind } => {
            let wanted = as_text(env, equals)?;
            let mut kept = Vec::new();
            for id in as_nodes(env, list)?.iter() {
                let value = node(ctx, id)?.feature(feature).map(FeatureValue::display);
                if value.as_deref() == Some(wanted.as_str()) {
                    kept.push(id.clone());
                }
            }
            env.insert(bind.clone(), Value::Nodes(kept));
        }
        ChainStep::FilterFeatureIntersects { list, feature, with, bind } => {
            let wanted: HashSet<&String> = as_texts(env, with)?.iter().collect();
            let ids = as_nodes(env, list)?.to_vec();
            let mut kept = Vec::new();
            for id in ids {
                let overlap = match node(ctx, &id)?.feature(feature) {
                    Some(FeatureValue::List(items)) => items.iter().any(|i| wanted.contains(i)),
                    Some(other) => wanted.contains(&other.display()),
                    None => false,
                };
                if overlap {
                    kept.push(id);
                }
            }
            env.insert(bind.clone(), Value::Nodes(kept));
        }
        ChainStep::FilterFeatureContains { list, feature, value, bind } => {
            let wanted = as_text(env, value)?;
            let ids = as_nodes(env, list)?.to_vec();
            let mut kept = Vec::new();
            for id in ids {
                let contains = match node(ctx, &id)?.feature(feature) {
                    Some(FeatureValue::List(items)) => items.contains(&wanted),
                    Some(other) => other.display() == wanted,
                    None => false,
                };
                if contains {
                    kept.push(id);
                }
            }
            env.insert(bind.clone(), Value::Nodes(kept));
        }
        ChainStep::FilterByNeighborContains { list, edge_type, node: node_binding, bind } => {
            let wanted = as_node(env, node_binding)?.clone();
            let ids = as_nodes(env, list)?.to_vec();
            let mut kept = Vec::new();
            for id in ids {
                let neighbors = ctx
                    .graph
                    .neighbor_check(&id, edge_type)
                    .map_err(|e| error(e.to_string()))?;
                if neighbors.contains(&wanted) {
                    kept.push(id);
                }
            }
            env.insert(bind.clone(), Value::Nodes(kept));
        }
        ChainStep::ArgmaxCount { of, bind } => {
            let of_value = lookup(env, of)?.clone();
            let bound = match of_value {
                Value::Nodes(ids) => {
                    let winner = argmax_count(ids.iter().map(|id| id.to_string()))?;
                    Value::Node(NodeId::new(winner).map_err(|e| error(e.to_string()))?)
                }
                Value::Texts(items) => Value::Text(argmax_count(items.into_iter())?),
                other => {
                    return Err(error(format!(
                        "binding `{of}` is {}, expected a list",
                        other.kind()
                    )))
                }
            };
            env.insert(bind.clone(), bound);
        }
        ChainStep::TopKByCount { of, k, bind } => {
            let items = as_texts(env, of)?;
            let mut counts: BTreeMap<&String, usize> = BTreeMap::new();
            for item in items {
                *counts.entry(item).or_insert(0) += 1;
            }
            if counts.len() < *k {
                return Err(abort(format!("`{of}` has only {} distinct values", counts.len())));
            }
            let mut ranked: Vec<(&String, usize)> = counts.into_iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            if ranked.len() > *k && ranked[*k - 1].1 == ranked[*k].1 {
                return Err(abort("tie at the top-k boundary".to_string()));
            }
            let top: Vec<String> = ranked.iter().take(*k).map(|(t, _)| (*t).clone()).collect();
            env.insert(bind.clone(), Value::Texts(top));
        }
        ChainStep::ArgmaxByDegree { list, edge_type, bind } => {
            let ids = as_nodes(env, list)?.to_vec();
            if ids.is_empty() {
                return Err(abort(format!("`{list}` is empty")));
            }
            let mut best: Option<(usize, NodeId)> = None;
            let mut tied = false;
            for id in ids {
                let degree = ctx
                    .graph
                    .node_degree(&id, edge_type)
                    .map_err(|e| error(e.to_string()))?;
                match &best {
                    Some((b, _)) if degree == *b => tied = true,
                    Some((b, _)) if degree > *b => {
                        best = Some((degree, id));
                        tied = false;
                    }
                    None => best = Some((degree, id)),
                    _ => {}
                }
            }
            if tied {
                return Err(abort("degree argmax is tied".to_string()));
            }
            env.insert(bind.clone(), Value::Node(best.expect("non-empty").1));
        }
        ChainStep::ArgminByNumericFeature { list, feature, bind } => {
            let id = numeric_extreme(ctx, env, list, feature, false)?;
            env.insert(bind.clone(), Value::Node(id));
        }
        ChainStep::ArgmaxByNumericFeature { list, feature, bind } => {
            let id = numeric_extreme(ctx, env, list, feature, true)?;
            env.insert(bind.clone(), Value::Node(id));
        }
        ChainStep::AvgNumericFeature { list, feature, decimals, bind } => {
            let ids = as_nodes(env, list)?.to_vec();
            if ids.is_empty() {
                return Err(abort(format!("`{list}` is empty")));
            }
            let mut total = 0.0;
            for id in &ids {
                total += numeric_feature(node(ctx, id)?, feature)?;
            }
            let mean = total / ids.len() as f64;
            env.insert(
                bind.clone(),
                Value::Text(format!("{mean:.prec$}", prec = *decimals as usize)),
            );
        }
        ChainStep::MaxSharedNeighbors { center, edge_type, bind_node, bind_count } => {
            let center = as_node(env, center)?.clone();
            let shared = shared_neighbor_counts(ctx, &center, edge_type)?;
            if shared.is_empty() {
                return Err(abort("no node shares a neighbor with the center".to_string()));
            }
            let best = shared.iter().map(|(_, c)| *c).max().expect("non-empty");
            let winners: Vec<&NodeId> =
                shared.iter().filter(|(_, c)| *c == best).map(|(id, _)| id).collect();
            if winners.len() != 1 {
                return Err(abort("shared-neighbor argmax is tied".to_string()));
            }
            env.insert(bind_node.clone(), Value::Node(winners[0].clone()));
            env.insert(bind_count.clone(), Value::Int(best as i64));
        }
        ChainStep::CountSharingNeighbor { center, edge_type, bind } => {
            let center = as_node(env, center)?.clone();
            let shared = shared_neighbor_counts(ctx, &center, edge_type)?;
            env.insert(bind.clone(), Value::Int(shared.len() as i64));
        }
        ChainStep::CountSameNeighborSet { center, edge_type, bind } => {
            let center_id = as_node(env, center)?.clone();
            let center_node = node(ctx, &center_id)?;
            let reference: std::collections::BTreeSet<&NodeId> = ctx
                .graph
                .neighbor_check(&center_id, edge_type)
                .map_err(|e| error(e.to_string()))?
                .iter()
                .collect();
            let mut count = 0i64;
            for other in ctx.graph.nodes_of_type(&center_node.node_type) {
                if other.id == center_id {
                    continue;
                }
                let theirs: std::collections::BTreeSet<&NodeId> = ctx
                    .graph
                    .neighbor_check(&other.id, edge_type)
                    .map_err(|e| error(e.to_string()))?
                    .iter()
                    .collect();
                if theirs == reference {
                    count += 1;
                }
            }
            env.insert(bind.clone(), Value::Int(count));
        }
        ChainStep::ContainsNode { list, node, bind } => {
            let wanted = as_node(env, node)?.clone();
            let found = as_nodes(env, list)?.contains(&wanted);
            env.insert(
                bind.clone(),
                Value::Text(if found { "True" } else { "False" }.to_string()),
            );
        }
        ChainStep::BfsDistance { from, to, via, bind } => {
            let start = as_node(env, from)?.clone();
            let goal = as_node(env, to)?.clone();
            let mut seen = HashSet::from([start.clone()]);
            let mut queue = VecDeque::from([(start, 0i64)]);
            let mut distance = None;
            while let Some((id, hops)) = queue.pop_front() {
                if id == goal {
                    distance = Some(hops);
                    break;
                }
                // the walk crosses node types, so edge types missing on a
                // node simply contribute nothing
                let current = node(ctx, &id)?;
                for edge_type in via {
                    for next in current.neighbors.get(edge_type).into_iter().flatten() {
                        if seen.insert(next.clone()) {
                            queue.push_back((next.clone(), hops + 1));
                        }
                    }
                }
            }
            match distance {
                Some(hops) => {
                    env.insert(bind.clone(), Value::Int(hops));
                }
                None => return Err(abort(format!("`{to}` unreachable from `{from}`"))),
            }
        }
        ChainStep::IntAffine { from, divide, offset, bind } => {
            let value = match lookup(env, from)? {
                Value::Int(i) => *i,
                other => {
                    return Err(error(format!("binding `{from}` is {}, expected int", other.kind())))
                }
            };
            if *divide == 0 {
                return Err(error("divide by zero".to_string()));
            }
            env.insert(bind.clone(), Value::Int(value / divide + offset));
        }
    }
    Ok(())
}

fn replay_node(
    ctx: &ChainContext<'_>,
    bindings: &BTreeMap<String, String>,
    bind: &str,
) -> Result<NodeId, ChainFailure> {
    let raw = bindings
        .get(bind)
        .ok_or_else(|| error(format!("replay missing binding `{bind}`")))?;
    let id = NodeId::new(raw.clone()).map_err(|e| error(e.to_string()))?;
    if !ctx.graph.contains(&id) {
        return Err(error(format!("replayed node `{id}` missing from graph")));
    }
    Ok(id)
}

/// Most frequent element; first occurrence order breaks nothing because a
/// tie aborts instead.
fn argmax_count(items: impl Iterator<Item = String>) -> Result<String, ChainFailure> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for item in items {
        *counts.entry(item).or_insert(0) += 1;
    }
    if counts.is_empty() {
        return Err(abort("argmax over an empty list".to_string()));
    }
    let best = counts.values().copied().max().expect("non-empty");
    let winners: Vec<&String> =
        counts.iter().filter(|(_, c)| **c == best).map(|(k, _)| k).collect();
    if winners.len() != 1 {
        return Err(abort("count argmax is tied".to_string()));
    }
    Ok(winners[0].clone())
}

/// For every same-type node other than `center`, how many `edge_type`
/// neighbors it shares with `center`; nodes sharing none are omitted.
/// Sound for symmetric edge families (the neighbor's same-name edge points
/// back at sharers).
fn shared_neighbor_counts(
    ctx: &ChainContext<'_>,
    center: &NodeId,
    edge_type: &str,
) -> Result<Vec<(NodeId, usize)>, ChainFailure> {
    let mine: HashSet<&NodeId> = ctx
        .graph
        .neighbor_check(center, edge_type)
        .map_err(|e| error(e.to_string()))?
        .iter()
        .collect();
    let mut counts: BTreeMap<NodeId, usize> = BTreeMap::new();
    for shared in &mine {
        let holders = ctx
            .graph
            .neighbor_check(shared, edge_type)
            .map_err(|e| error(e.to_string()))?;
        for holder in holders {
            if holder != center {
                *counts.entry(holder.clone()).or_insert(0) += 1;
            }
        }
    }
    Ok(counts.into_iter().collect())
}

fn numeric_extreme(
    ctx: &ChainContext<'_>,
    env: &Env,
    list: &str,
    feature: &str,
    maximize: bool,
) -> Result<NodeId, ChainFailure> {
    let ids = as_nodes(env, list)?.to_vec();
    if ids.is_empty() {
        return Err(abort(format!("`{list}` is empty")));
    }
    let mut best: Option<(f64, NodeId)> = None;
    let mut tied = false;
    for id in ids {
        let value = numeric_feature(node(ctx, &id)?, feature)?;
        match &best {
            Some((b, _)) if value == *b => tied = true,
            Some((b, _)) if (maximize && value > *b) || (!maximize && value < *b) => {
                best = Some((value, id));
                tied = false;
            }
            None => best = Some((value, id)),
            _ => {}
        }
    }
    if tied {
        return Err(abort("numeric extreme is tied".to_string()));
    }
    Ok(best.expect("non-empty").1)
}
