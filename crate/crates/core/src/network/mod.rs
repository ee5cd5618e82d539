//! The labeled social network: actors mapped one-to-one onto nodes, relations
//! onto (possibly parallel) undirected edges, and attribute labels attached to
//! nodes and edges.

mod extract;
mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::normalize_name;

pub use extract::{extract_network, Extraction, ExtractionError};
pub use io::{parse_seeds, GraphFormat, GraphIoError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("actor already present: {0}")]
    DuplicateActor(String),
    #[error("unknown actor: {0}")]
    UnknownActor(String),
    #[error("self-loop on actor {0}")]
    SelfLoop(String),
    #[error("actor name must not be empty")]
    EmptyName,
    #[error("relation weight {0} outside [0, 1]")]
    InvalidWeight(f64),
    #[error("relation {a} -- {b} ({method}) already present with the same labels")]
    DuplicateRelation { a: String, b: String, method: Method },
}

/// Which extraction method produced a relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "SRS")]
    Srs,
    #[serde(rename = "USR")]
    Usr,
    #[serde(rename = "ARS")]
    Ars,
    /// Edges read from an outside source such as a benchmark edge list.
    #[serde(rename = "external")]
    External,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Srs => "SRS",
            Method::Usr => "USR",
            Method::Ars => "ARS",
            Method::External => "external",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "srs" => Ok(Method::Srs),
            "usr" | "urs" => Ok(Method::Usr),
            "ars" => Ok(Method::Ars),
            "external" => Ok(Method::External),
            other => Err(format!("unknown method {other:?} (expected srs, usr or ars)")),
        }
    }
}

/// A named social entity and its attribute set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Actor {
    pub name: String,
    #[serde(default)]
    pub attributes: BTreeSet<String>,
}

impl Actor {
    pub fn new(name: impl Into<String>) -> Self {
        Actor { name: name.into(), attributes: BTreeSet::new() }
    }

    pub fn with_attributes<I, S>(name: impl Into<String>, attributes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Actor { name: name.into(), attributes: attributes.into_iter().map(Into::into).collect() }
    }

    /// Identity used for the actor-to-node map.
    pub fn key(&self) -> String {
        normalize_name(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub actor: Actor,
}

/// A relation between two actors, stored as an undirected edge with
/// `source < target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
    pub method: Method,
    /// `Z_a ∩ Z_b` of the endpoints when the relation was added.
    pub shared_attributes: BTreeSet<String>,
    /// Set on association-rule edges.
    pub conditional_probability: Option<f64>,
}

/// Attribute-to-node and attribute-to-edge label maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub node_labels: BTreeMap<String, BTreeSet<NodeId>>,
    pub edge_labels: BTreeMap<String, BTreeSet<EdgeId>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SocialNetwork {
    nodes: BTreeMap<NodeId, Node>,
    edges: BTreeMap<EdgeId, Edge>,
    actor_map: BTreeMap<String, NodeId>,
    labels: Option<Labels>,
    /// Edges per endpoint pair, for the parallel-edge check.
    pair_edges: BTreeMap<(NodeId, NodeId), Vec<EdgeId>>,
}

impl SocialNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    /// Node assigned to the actor with this name, if any.
    pub fn node_of(&self, name: &str) -> Option<NodeId> {
        self.actor_map.get(&normalize_name(name)).copied()
    }

    pub fn actor(&self, name: &str) -> Option<&Actor> {
        self.node_of(name).map(|id| &self.nodes[&id].actor)
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    fn next_node_id(&self) -> NodeId {
        NodeId(self.nodes.keys().next_back().map_or(0, |id| id.0 + 1))
    }

    fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().next_back().map_or(0, |id| id.0 + 1))
    }

    pub fn add_actor(&mut self, actor: Actor) -> Result<NodeId, NetworkError> {
        let id = self.next_node_id();
        self.insert_node(id, actor)?;
        Ok(id)
    }

    fn insert_node(&mut self, id: NodeId, actor: Actor) -> Result<(), NetworkError> {
        let key = actor.key();
        if key.is_empty() {
            return Err(NetworkError::EmptyName);
        }
        if self.actor_map.contains_key(&key) {
            return Err(NetworkError::DuplicateActor(actor.name));
        }
        self.actor_map.insert(key, id);
        self.nodes.insert(id, Node { id, actor });
        self.refresh_labels();
        Ok(())
    }

    /// Removes the actor and every relation touching it.
    pub fn remove_actor(&mut self, name: &str) -> Result<Actor, NetworkError> {
        let key = normalize_name(name);
        let id = self.actor_map.remove(&key).ok_or_else(|| NetworkError::UnknownActor(name.to_string()))?;
        self.edges.retain(|_, e| e.source != id && e.target != id);
        self.pair_edges.retain(|&(a, b), _| a != id && b != id);
        let node = self.nodes.remove(&id).expect("actor map points at a node");
        self.refresh_labels();
        Ok(node.actor)
    }

    pub fn add_relation(&mut self, a: &str, b: &str, weight: f64, method: Method) -> Result<EdgeId, NetworkError> {
        let id = self.next_edge_id();
        self.insert_edge(id, a, b, weight, method, None)?;
        Ok(id)
    }

    /// Like [`add_relation`](Self::add_relation) but also records the
    /// rule's conditional probability.
    pub fn add_rule_relation(&mut self, a: &str, b: &str, weight: f64, probability: f64) -> Result<EdgeId, NetworkError> {
        let id = self.next_edge_id();
        self.insert_edge(id, a, b, weight, Method::Ars, Some(probability))?;
        Ok(id)
    }

    fn insert_edge(
        &mut self,
        id: EdgeId,
        a: &str,
        b: &str,
        weight: f64,
        method: Method,
        conditional_probability: Option<f64>,
    ) -> Result<(), NetworkError> {
        let na = self.node_of(a).ok_or_else(|| NetworkError::UnknownActor(a.to_string()))?;
        let nb = self.node_of(b).ok_or_else(|| NetworkError::UnknownActor(b.to_string()))?;
        if na == nb {
            return Err(NetworkError::SelfLoop(a.to_string()));
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(NetworkError::InvalidWeight(weight));
        }
        let (source, target) = if na < nb { (na, nb) } else { (nb, na) };
        let shared: BTreeSet<String> = self.nodes[&na]
            .actor
            .attributes
            .intersection(&self.nodes[&nb].actor.attributes)
            .cloned()
            .collect();
        let parallel = self.pair_edges.get(&(source, target)).map_or(&[][..], Vec::as_slice);
        let duplicate = parallel.iter().any(|eid| {
            let e = &self.edges[eid];
            e.method == method && e.shared_attributes == shared
        });
        if duplicate {
            return Err(NetworkError::DuplicateRelation { a: a.to_string(), b: b.to_string(), method });
        }
        self.pair_edges.entry((source, target)).or_default().push(id);
        self.edges.insert(
            id,
            Edge { id, source, target, weight, method, shared_attributes: shared, conditional_probability },
        );
        self.refresh_labels();
        Ok(())
    }

    /// Builds the node and edge label maps from the actors' attributes and
    /// the edges' shared attributes.
    pub fn attach_labels(mut self) -> Self {
        self.labels = Some(self.compute_labels());
        self
    }

    fn compute_labels(&self) -> Labels {
        let mut labels = Labels::default();
        for node in self.nodes.values() {
            for z in &node.actor.attributes {
                labels.node_labels.entry(z.clone()).or_default().insert(node.id);
            }
        }
        for edge in self.edges.values() {
            for z in &edge.shared_attributes {
                labels.edge_labels.entry(z.clone()).or_default().insert(edge.id);
            }
        }
        labels
    }

    fn refresh_labels(&mut self) {
        if self.labels.is_some() {
            self.labels = Some(self.compute_labels());
        }
    }

    /// Display names of an edge's endpoints.
    pub fn endpoint_names(&self, edge: &Edge) -> (&str, &str) {
        (&self.nodes[&edge.source].actor.name, &self.nodes[&edge.target].actor.name)
    }

    /// Distinct unordered endpoint pairs by normalized name; parallel edges
    /// collapse to one pair.
    pub fn name_pairs(&self) -> BTreeSet<(String, String)> {
        self.edges
            .values()
            .map(|e| {
                let (a, b) = self.endpoint_names(e);
                let (a, b) = (normalize_name(a), normalize_name(b));
                if a <= b { (a, b) } else { (b, a) }
            })
            .collect()
    }

    /// Checks the structural invariants; returns a description of the first
    /// violation.
    pub fn validate(&self) -> Result<(), String> {
        if self.actor_map.len() != self.nodes.len() {
            return Err(format!("{} actors map onto {} nodes", self.actor_map.len(), self.nodes.len()));
        }
        for (key, id) in &self.actor_map {
            match self.nodes.get(id) {
                Some(n) if n.actor.key() == *key && n.id == *id => {}
                _ => return Err(format!("actor {key:?} maps to a missing or mismatched node")),
            }
        }
        for e in self.edges.values() {
            let (Some(a), Some(b)) = (self.nodes.get(&e.source), self.nodes.get(&e.target)) else {
                return Err(format!("edge {:?} has a dangling endpoint", e.id));
            };
            if e.source >= e.target {
                return Err(format!("edge {:?} endpoints not ordered", e.id));
            }
            if !e.shared_attributes.is_subset(&a.actor.attributes) || !e.shared_attributes.is_subset(&b.actor.attributes) {
                return Err(format!("edge {:?} carries a label not shared by both endpoints", e.id));
            }
        }
        let mut by_pair: BTreeMap<(NodeId, NodeId), Vec<EdgeId>> = BTreeMap::new();
        for e in self.edges.values() {
            by_pair.entry((e.source, e.target)).or_default().push(e.id);
        }
        if by_pair != self.pair_edges {
            return Err("pair index out of date".into());
        }
        if let Some(labels) = &self.labels {
            if *labels != self.compute_labels() {
                return Err("label maps out of date".into());
            }
        }
        Ok(())
    }
}
