//! GraphML, JSON and edge-list serialization of [`SocialNetwork`].
//!
//! GraphML and JSON round-trip losslessly, ids included. The edge list keeps
//! only endpoint names (plus an optional weight column on import).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Actor, EdgeId, Method, NetworkError, NodeId, SocialNetwork};

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("{0}")]
    Network(#[from] NetworkError),
    #[error("malformed graph input: {0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot infer graph format from {0:?}; use .graphml, .json or .tsv/.txt")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Graphml,
    Json,
    Edgelist,
}

impl GraphFormat {
    pub fn from_path(path: &Path) -> Option<GraphFormat> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "graphml" | "xml" => Some(GraphFormat::Graphml),
            "json" => Some(GraphFormat::Json),
            "tsv" | "txt" | "edges" | "edgelist" => Some(GraphFormat::Edgelist),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Graphml => "graphml",
            GraphFormat::Json => "json",
            GraphFormat::Edgelist => "tsv",
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(GraphFormat::Graphml),
            "json" => Ok(GraphFormat::Json),
            "edgelist" | "tsv" => Ok(GraphFormat::Edgelist),
            other => Err(format!("unknown graph format {other:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    labeled: bool,
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: u32,
    name: String,
    #[serde(default)]
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    id: u32,
    source: u32,
    target: u32,
    weight: f64,
    method: Method,
    #[serde(default)]
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conditional_probability: Option<f64>,
}

struct EdgeRecord {
    id: EdgeId,
    source: NodeId,
    target: NodeId,
    weight: f64,
    method: Method,
    labels: Option<BTreeSet<String>>,
    conditional_probability: Option<f64>,
}

impl SocialNetwork {
    fn assemble(
        labeled: bool,
        nodes: Vec<(NodeId, Actor)>,
        edges: Vec<EdgeRecord>,
    ) -> Result<SocialNetwork, GraphIoError> {
        let mut net = SocialNetwork::new();
        let mut names = HashMap::new();
        for (id, actor) in nodes {
            if net.nodes.contains_key(&id) {
                return Err(GraphIoError::Malformed(format!("node id {} repeated", id.0)));
            }
            names.insert(id, actor.name.clone());
            net.insert_node(id, actor)?;
        }
        for e in edges {
            if net.edges.contains_key(&e.id) {
                return Err(GraphIoError::Malformed(format!("edge id {} repeated", e.id.0)));
            }
            let name = |n: NodeId| {
                names
                    .get(&n)
                    .cloned()
                    .ok_or_else(|| GraphIoError::Malformed(format!("edge {} references unknown node {}", e.id.0, n.0)))
            };
            let (a, b) = (name(e.source)?, name(e.target)?);
            net.insert_edge(e.id, &a, &b, e.weight, e.method, e.conditional_probability)?;
            if let Some(labels) = e.labels {
                if net.edges[&e.id].shared_attributes != labels {
                    return Err(GraphIoError::Malformed(format!(
                        "edge {} labels are not the endpoints' shared attributes",
                        e.id.0
                    )));
                }
            }
        }
        Ok(if labeled { net.attach_labels() } else { net })
    }

    pub fn to_json(&self) -> String {
        let graph = JsonGraph {
            labeled: self.is_labeled(),
            nodes: self
                .nodes()
                .map(|n| JsonNode {
                    id: n.id.0,
                    name: n.actor.name.clone(),
                    labels: n.actor.attributes.iter().cloned().collect(),
                })
                .collect(),
            edges: self
                .edges()
                .map(|e| JsonEdge {
                    id: e.id.0,
                    source: e.source.0,
                    target: e.target.0,
                    weight: e.weight,
                    method: e.method,
                    labels: e.shared_attributes.iter().cloned().collect(),
                    conditional_probability: e.conditional_probability,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&graph).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn from_json(input: &str) -> Result<SocialNetwork, GraphIoError> {
        let g: JsonGraph = serde_json::from_str(input).map_err(|e| GraphIoError::Malformed(e.to_string()))?;
        let nodes = g
            .nodes
            .into_iter()
            .map(|n| (NodeId(n.id), Actor::with_attributes(n.name, n.labels)))
            .collect();
        let edges = g
            .edges
            .into_iter()
            .map(|e| EdgeRecord {
                id: EdgeId(e.id),
                source: NodeId(e.source),
                target: NodeId(e.target),
                weight: e.weight,
                method: e.method,
                labels: Some(e.labels.into_iter().collect()),
                conditional_probability: e.conditional_probability,
            })
            .collect();
        SocialNetwork::assemble(g.labeled, nodes, edges)
    }

    pub fn to_graphml(&self) -> String {
        let mut s = String::new();
        s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
        for (id, scope, ty) in [
            ("labeled", "graph", "boolean"),
            ("name", "node", "string"),
            ("attributes", "node", "string"),
            ("weight", "edge", "double"),
            ("method", "edge", "string"),
            ("labels", "edge", "string"),
            ("conditional_probability", "edge", "double"),
        ] {
            let _ = writeln!(s, "  <key id=\"{id}\" for=\"{scope}\" attr.name=\"{id}\" attr.type=\"{ty}\"/>");
        }
        s.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
        let _ = writeln!(s, "    <data key=\"labeled\">{}</data>", self.is_labeled());
        for n in self.nodes() {
            let attrs = serde_json::to_string(&n.actor.attributes).expect("strings serialize");
            let _ = writeln!(s, "    <node id=\"n{}\">", n.id.0);
            let _ = writeln!(s, "      <data key=\"name\">{}</data>", xml_escape(&n.actor.name));
            let _ = writeln!(s, "      <data key=\"attributes\">{}</data>", xml_escape(&attrs));
            s.push_str("    </node>\n");
        }
        for e in self.edges() {
            let labels = serde_json::to_string(&e.shared_attributes).expect("strings serialize");
            let _ = writeln!(s, "    <edge id=\"e{}\" source=\"n{}\" target=\"n{}\">", e.id.0, e.source.0, e.target.0);
            let _ = writeln!(s, "      <data key=\"weight\">{}</data>", e.weight);
            let _ = writeln!(s, "      <data key=\"method\">{}</data>", e.method);
            let _ = writeln!(s, "      <data key=\"labels\">{}</data>", xml_escape(&labels));
            if let Some(p) = e.conditional_probability {
                let _ = writeln!(s, "      <data key=\"conditional_probability\">{p}</data>");
            }
            s.push_str("    </edge>\n");
        }
        s.push_str("  </graph>\n</graphml>\n");
        s
    }

    /// Reads GraphML. Data keys are matched by `attr.name`; nodes without a
    /// `name` use their id, edges without a `weight` get 1 and without a
    /// `method` are tagged external.
    pub fn from_graphml(input: &str) -> Result<SocialNetwork, GraphIoError> {
        let doc = roxmltree::Document::parse(input).map_err(|e| GraphIoError::Malformed(e.to_string()))?;
        let root = doc.root_element();
        if root.tag_name().name() != "graphml" {
            return Err(GraphIoError::Malformed("root element is not <graphml>".into()));
        }
        let mut key_names: HashMap<&str, &str> = HashMap::new();
        for key in root.children().filter(|n| n.tag_name().name() == "key") {
            if let Some(id) = key.attribute("id") {
                key_names.insert(id, key.attribute("attr.name").unwrap_or(id));
            }
        }
        let graph = root
            .children()
            .find(|n| n.tag_name().name() == "graph")
            .ok_or_else(|| GraphIoError::Malformed("no <graph> element".into()))?;
        let data_of = |node: roxmltree::Node| -> BTreeMap<String, String> {
            node.children()
                .filter(|c| c.tag_name().name() == "data")
                .filter_map(|c| {
                    let key = c.attribute("key")?;
                    let name = key_names.get(key).copied().unwrap_or(key);
                    Some((name.to_string(), c.text().unwrap_or("").to_string()))
                })
                .collect()
        };
        let labeled = data_of(graph).get("labeled").is_some_and(|v| v.trim() == "true");

        let raw_nodes: Vec<_> = graph.children().filter(|n| n.tag_name().name() == "node").collect();
        let raw_edges: Vec<_> = graph.children().filter(|n| n.tag_name().name() == "edge").collect();
        let node_ids: Vec<NodeId> = numbered_ids(raw_nodes.iter().map(|n| n.attribute("id").unwrap_or("")), 'n')?;
        let mut by_label: HashMap<String, NodeId> = HashMap::new();
        let mut nodes = Vec::new();
        for (raw, id) in raw_nodes.iter().zip(node_ids) {
            let xml_id = raw.attribute("id").unwrap_or("").to_string();
            let data = data_of(*raw);
            let name = data.get("name").cloned().unwrap_or_else(|| xml_id.clone());
            let attributes: BTreeSet<String> = match data.get("attributes") {
                Some(a) => serde_json::from_str(a).map_err(|e| GraphIoError::Malformed(format!("node {xml_id}: {e}")))?,
                None => BTreeSet::new(),
            };
            by_label.insert(xml_id, id);
            nodes.push((id, Actor { name, attributes }));
        }
        let edge_ids: Vec<EdgeId> = numbered_ids(raw_edges.iter().map(|n| n.attribute("id").unwrap_or("")), 'e')?;
        let mut edges = Vec::new();
        for (raw, id) in raw_edges.iter().zip(edge_ids) {
            let endpoint = |attr: &str| -> Result<NodeId, GraphIoError> {
                let label = raw.attribute(attr).unwrap_or("");
                by_label
                    .get(label)
                    .copied()
                    .ok_or_else(|| GraphIoError::Malformed(format!("edge {} {attr} {label:?} is not a node", id.0)))
            };
            let data = data_of(*raw);
            let float = |key: &str| -> Result<Option<f64>, GraphIoError> {
                data.get(key)
                    .map(|v| v.trim().parse::<f64>().map_err(|e| GraphIoError::Malformed(format!("edge {} {key}: {e}", id.0))))
                    .transpose()
            };
            let (a, b) = (endpoint("source")?, endpoint("target")?);
            edges.push(EdgeRecord {
                id,
                source: a.min(b),
                target: a.max(b),
                weight: float("weight")?.unwrap_or(1.0),
                method: match data.get("method") {
                    Some(m) => m.parse().map_err(GraphIoError::Malformed)?,
                    None => Method::External,
                },
                labels: data
                    .get("labels")
                    .map(|l| serde_json::from_str(l).map_err(|e| GraphIoError::Malformed(format!("edge {}: {e}", id.0))))
                    .transpose()?,
                conditional_probability: float("conditional_probability")?,
            });
        }
        SocialNetwork::assemble(labeled, nodes, edges)
    }

    /// One `nameA<TAB>nameB` line per distinct endpoint pair, in edge order.
    pub fn to_edge_list(&self) -> String {
        let mut seen = BTreeSet::new();
        let mut s = String::new();
        for e in self.edges() {
            if seen.insert((e.source, e.target)) {
                let (a, b) = self.endpoint_names(e);
                let _ = writeln!(s, "{}\t{}", single_line(a), single_line(b));
            }
        }
        s
    }

    /// Reads `nameA<TAB>nameB[<TAB>weight]` lines. Blank lines and `#`
    /// comments are skipped, as are repeated pairs.
    pub fn from_edge_list(input: &str) -> Result<SocialNetwork, GraphIoError> {
        let mut net = SocialNetwork::new();
        for (i, line) in input.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let bad = |message: String| GraphIoError::Line { line: line_no, message };
            if !(2..=3).contains(&fields.len()) {
                return Err(bad(format!("expected 2 or 3 tab-separated fields, found {}", fields.len())));
            }
            let weight = match fields.get(2) {
                Some(w) => w.parse::<f64>().map_err(|e| bad(format!("weight: {e}")))?,
                None => 1.0,
            };
            for name in &fields[..2] {
                if net.node_of(name).is_none() {
                    net.add_actor(Actor::new(*name)).map_err(|e| bad(e.to_string()))?;
                }
            }
            match net.add_relation(fields[0], fields[1], weight, Method::External) {
                Ok(_) | Err(NetworkError::DuplicateRelation { .. }) => {}
                Err(e) => return Err(bad(e.to_string())),
            }
        }
        Ok(net)
    }

    pub fn export(&self, format: GraphFormat) -> String {
        match format {
            GraphFormat::Graphml => self.to_graphml(),
            GraphFormat::Json => self.to_json(),
            GraphFormat::Edgelist => self.to_edge_list(),
        }
    }

    pub fn import(input: &str, format: GraphFormat) -> Result<SocialNetwork, GraphIoError> {
        match format {
            GraphFormat::Graphml => SocialNetwork::from_graphml(input),
            GraphFormat::Json => SocialNetwork::from_json(input),
            GraphFormat::Edgelist => SocialNetwork::from_edge_list(input),
        }
    }

    /// Reads a graph file, inferring the format from its extension.
    pub fn read_file(path: &Path) -> Result<SocialNetwork, GraphIoError> {
        let format = GraphFormat::from_path(path).ok_or_else(|| GraphIoError::UnknownFormat(path.display().to_string()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|source| GraphIoError::Io { path: path.display().to_string(), source })?;
        SocialNetwork::import(&text, format)
    }

    pub fn write_file(&self, path: &Path, format: GraphFormat) -> Result<(), GraphIoError> {
        std::fs::write(path, self.export(format))
            .map_err(|source| GraphIoError::Io { path: path.display().to_string(), source })
    }
}

/// Uses the numeric suffix of ids like `n12` when every id has one and they
/// are distinct; otherwise numbers the elements in document order.
fn numbered_ids<'a, T: From<u32>>(ids: impl Iterator<Item = &'a str> + Clone, prefix: char) -> Result<Vec<T>, GraphIoError> {
    let parsed: Option<Vec<u32>> = ids.clone().map(|s| s.strip_prefix(prefix)?.parse().ok()).collect();
    match parsed {
        Some(nums) if nums.iter().collect::<BTreeSet<_>>().len() == nums.len() => Ok(nums.into_iter().map(T::from).collect()),
        _ => Ok((0..ids.count() as u32).map(T::from).collect()),
    }
}

/// Reads a seed list: one actor per line as `name[<TAB>attr,attr,...]`.
/// Blank lines and `#` comments are skipped; a repeated name is an error.
pub fn parse_seeds(input: &str) -> Result<Vec<Actor>, GraphIoError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |message: String| GraphIoError::Line { line: i + 1, message };
        let (name, attrs) = line.split_once('\t').unwrap_or((line, ""));
        let actor = Actor::with_attributes(
            name.trim(),
            attrs.split(',').map(str::trim).filter(|a| !a.is_empty()).map(str::to_lowercase),
        );
        if actor.key().is_empty() {
            return Err(bad("empty actor name".into()));
        }
        if !seen.insert(actor.key()) {
            return Err(bad(format!("actor {:?} listed twice", actor.name)));
        }
        out.push(actor);
    }
    Ok(out)
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

impl From<u32> for EdgeId {
    fn from(v: u32) -> Self {
        EdgeId(v)
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SocialNetwork {
        let mut net = SocialNetwork::new();
        net.add_actor(Actor::with_attributes("Ann <Lee> & co", ["grid", "data \"mining\""])).unwrap();
        net.add_actor(Actor::with_attributes("Raj Kumar", ["grid"])).unwrap();
        net.add_actor(Actor::new("Mei Tan")).unwrap();
        net.add_relation("Ann <Lee> & co", "Raj Kumar", 0.125, Method::Srs).unwrap();
        net.add_rule_relation("Raj Kumar", "Mei Tan", 1.0 / 3.0, 0.5).unwrap();
        net.add_relation("Ann <Lee> & co", "Raj Kumar", 0.0001, Method::Usr).unwrap();
        net.remove_actor("Mei Tan").unwrap();
        net.add_actor(Actor::new("Mei Tan")).unwrap();
        net.add_rule_relation("Raj Kumar", "Mei Tan", 0.1 + 0.2, 0.7).unwrap();
        net.attach_labels()
    }

    #[test]
    fn json_round_trip() {
        let net = sample();
        let back = SocialNetwork::from_json(&net.to_json()).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.to_json(), net.to_json());
    }

    #[test]
    fn graphml_round_trip() {
        let net = sample();
        let xml = net.to_graphml();
        let back = SocialNetwork::from_graphml(&xml).unwrap();
        assert_eq!(back, net);
        assert_eq!(back.to_graphml(), xml);
    }

    #[test]
    fn foreign_graphml_defaults() {
        let xml = r#"<?xml version="1.0"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key id="d0" for="node" attr.name="name" attr.type="string"/>
  <graph edgedefault="undirected">
    <node id="alice"><data key="d0">Alice</data></node>
    <node id="bob"/>
    <edge source="bob" target="alice"/>
  </graph>
</graphml>"#;
        let net = SocialNetwork::from_graphml(xml).unwrap();
        assert_eq!(net.node_count(), 2);
        assert!(net.actor("Alice").is_some() && net.actor("bob").is_some());
        let e = net.edges().next().unwrap();
        assert_eq!((e.weight, e.method), (1.0, Method::External));
    }

    #[test]
    fn graphml_errors() {
        assert!(SocialNetwork::from_graphml("<graphml/>").is_err());
        assert!(SocialNetwork::from_graphml("<nope/>").is_err());
        let dangling = r#"<graphml><graph><node id="n0"/><edge source="n0" target="n9"/></graph></graphml>"#;
        assert!(matches!(SocialNetwork::from_graphml(dangling), Err(GraphIoError::Malformed(_))));
    }

    #[test]
    fn edge_list_import_export() {
        let input = "# benchmark\nAnn Lee\tRaj Kumar\nraj kumar\tann lee\n\nRaj Kumar\tMei Tan\t0.5\n";
        let net = SocialNetwork::from_edge_list(input).unwrap();
        assert_eq!(net.node_count(), 3);
        assert_eq!(net.edge_count(), 2);
        assert_eq!(net.to_edge_list(), "Ann Lee\tRaj Kumar\nRaj Kumar\tMei Tan\n");
        let err = SocialNetwork::from_edge_list("a\tb\nonly-one\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2:"), "{err}");
        assert!(SocialNetwork::from_edge_list("a\ta\n").is_err());
    }

    #[test]
    fn seed_lists() {
        let seeds = parse_seeds("# people\nAnn Lee\tGrid, Storage\n\nRaj Kumar\n").unwrap();
        assert_eq!(seeds.len(), 2);
        assert_eq!(seeds[0].attributes.iter().collect::<Vec<_>>(), vec!["grid", "storage"]);
        assert!(seeds[1].attributes.is_empty());
        let err = parse_seeds("a\nb\n A \n").unwrap_err();
        assert!(err.to_string().starts_with("line 3:"), "{err}");
        assert!(parse_seeds("# only comments\n").unwrap().is_empty());
    }

    #[test]
    fn format_inference() {
        assert_eq!(GraphFormat::from_path(Path::new("g.GraphML")), Some(GraphFormat::Graphml));
        assert_eq!(GraphFormat::from_path(Path::new("g.tsv")), Some(GraphFormat::Edgelist));
        assert_eq!(GraphFormat::from_path(Path::new("g")), None);
        assert_eq!("edgelist".parse::<GraphFormat>().unwrap(), GraphFormat::Edgelist);
    }

    proptest! {
        #[test]
        fn random_networks_round_trip(
            attrs in prop::collection::vec(prop::collection::btree_set("[a-d]", 0..3), 2..8),
            edges in prop::collection::vec((0usize..8, 0usize..8, 0.0f64..=1.0, 0u8..3), 0..20),
            labeled in any::<bool>(),
        ) {
            let mut net = SocialNetwork::new();
            for (i, a) in attrs.iter().enumerate() {
                net.add_actor(Actor { name: format!("p{i}"), attributes: a.clone() }).unwrap();
            }
            let n = attrs.len();
            for (a, b, w, m) in edges {
                let method = [Method::Srs, Method::Usr, Method::Ars][m as usize];
                let _ = net.add_relation(&format!("p{}", a % n), &format!("p{}", b % n), w, method);
            }
            let net = if labeled { net.attach_labels() } else { net };
            prop_assert_eq!(&SocialNetwork::from_json(&net.to_json()).unwrap(), &net);
            prop_assert_eq!(&SocialNetwork::from_graphml(&net.to_graphml()).unwrap(), &net);
        }
    }
}
