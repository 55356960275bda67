use std::collections::HashMap;
use std::fmt::Write as _;

use quick_xml::escape::{escape, unescape};
use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use super::{AnnotatedGraph, CommunityLabels};
use crate::error::{Error, Result};
use crate::graph::{CentralityScores, CooccurrenceGraph};

const HEADER: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">
"#;

/// GraphML 1.0 with node attributes `label`, `frequency`, and when present
/// `betweenness` and `community`; edge attribute `weight`. Nodes and edges
/// are written in ascending id order.
pub fn export_graphml(g: &AnnotatedGraph) -> Vec<u8> {
    let mut out = String::from(HEADER);
    let mut key = |id: &str, target: &str, ty: &str| {
        let _ = writeln!(out, r#"  <key id="{id}" for="{target}" attr.name="{id}" attr.type="{ty}"/>"#);
    };
    key("label", "node", "string");
    key("frequency", "node", "int");
    if g.centrality.is_some() {
        key("betweenness", "node", "double");
        key("betweenness_mode", "graph", "string");
    }
    if g.communities.is_some() {
        key("community", "node", "int");
        key("modularity", "graph", "double");
    }
    key("weight", "edge", "int");

    out.push_str("  <graph id=\"storychart\" edgedefault=\"undirected\">\n");
    if let Some(mode) = g.betweenness_mode() {
        let _ = writeln!(out, r#"    <data key="betweenness_mode">{mode}</data>"#);
    }
    if let Some(c) = &g.communities {
        let _ = writeln!(out, r#"    <data key="modularity">{}</data>"#, c.modularity_q);
    }
    for node in g.graph.nodes() {
        let _ = writeln!(out, r#"    <node id="n{}">"#, node.id);
        let _ = writeln!(out, r#"      <data key="label">{}</data>"#, escape(node.label.as_str()));
        let _ = writeln!(out, r#"      <data key="frequency">{}</data>"#, node.weight);
        if let Some(c) = &g.centrality {
            let _ = writeln!(out, r#"      <data key="betweenness">{}</data>"#, c.scores[node.id]);
        }
        if let Some(c) = &g.communities {
            let _ = writeln!(out, r#"      <data key="community">{}</data>"#, c.membership[node.id]);
        }
        out.push_str("    </node>\n");
    }
    for (i, (u, v, w)) in g.graph.edges().enumerate() {
        let _ = writeln!(
            out,
            r#"    <edge id="e{i}" source="n{u}" target="n{v}"><data key="weight">{w}</data></edge>"#
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out.into_bytes()
}

fn attr(e: &BytesStart, name: &str) -> Result<Option<String>> {
    for a in e.attributes() {
        let a = a.map_err(|err| Error::GraphMl(err.to_string()))?;
        if a.key.as_ref() == name {
            let v = a.normalized_value(XmlVersion::Implicit1_0).map_err(|err| Error::GraphMl(err.to_string()))?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn required(e: &BytesStart, name: &str) -> Result<String> {
    attr(e, name)?.ok_or_else(|| {
        Error::GraphMl(format!(
            "<{}> without {name:?}",
            e.name().as_ref()
        ))
    })
}

fn number<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::GraphMl(format!("{what}: cannot parse {text:?}")))
}

#[derive(Default)]
struct RawNode {
    id: String,
    data: HashMap<String, String>,
}

#[derive(Default)]
struct RawEdge {
    source: String,
    target: String,
    data: HashMap<String, String>,
}

enum Owner {
    Graph,
    Node,
    Edge,
}

/// Reads GraphML written by [`export_graphml`] (or any GraphML using the
/// same attribute names) back into an annotated graph. Nodes are numbered
/// in document order.
pub fn parse_graphml(bytes: &[u8]) -> Result<AnnotatedGraph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::GraphMl(e.to_string()))?;
    let mut reader = Reader::from_str(text);

    // key id -> attribute name
    let mut keys: HashMap<String, String> = HashMap::new();
    let mut graph_data: HashMap<String, String> = HashMap::new();
    let mut nodes: Vec<RawNode> = Vec::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut owner = Owner::Graph;
    let mut data_key: Option<String> = None;
    let mut buffer = String::new();

    loop {
        let event = reader
            .read_event()
            .map_err(|e| Error::GraphMl(format!("at byte {}: {e}", reader.buffer_position())))?;
        let empty = matches!(event, Event::Empty(_));
        match event {
            Event::Start(e) | Event::Empty(e) => {
                match e.local_name().as_ref() {
                    "key" => {
                        let id = required(&e, "id")?;
                        let name = attr(&e, "attr.name")?.unwrap_or_else(|| id.clone());
                        keys.insert(id, name);
                    }
                    "node" => {
                        nodes.push(RawNode {
                            id: required(&e, "id")?,
                            ..RawNode::default()
                        });
                        if !empty {
                            owner = Owner::Node;
                        }
                    }
                    "edge" => {
                        edges.push(RawEdge {
                            source: required(&e, "source")?,
                            target: required(&e, "target")?,
                            ..RawEdge::default()
                        });
                        if !empty {
                            owner = Owner::Edge;
                        }
                    }
                    "data" if !empty => {
                        data_key = Some(required(&e, "key")?);
                        buffer.clear();
                    }
                    _ => {}
                }
            }
            Event::Text(t) if data_key.is_some() => buffer.push_str(&t.xml10_content()),
            Event::CData(t) if data_key.is_some() => {
                buffer.push_str(&t.into_inner())
            }
            Event::GeneralRef(r) if data_key.is_some() => {
                let raw = format!("&{};", r.xml10_content());
                let resolved = unescape(&raw).map_err(|e| Error::GraphMl(e.to_string()))?;
                buffer.push_str(&resolved);
            }
            Event::End(e) => match e.local_name().as_ref() {
                "data" => {
                    let key = data_key.take().unwrap_or_default();
                    let name = keys.get(&key).cloned().unwrap_or(key);
                    let value = std::mem::take(&mut buffer);
                    match owner {
                        Owner::Graph => graph_data.insert(name, value),
                        Owner::Node => nodes.last_mut().and_then(|n| n.data.insert(name, value)),
                        Owner::Edge => edges.last_mut().and_then(|n| n.data.insert(name, value)),
                    };
                }
                "node" | "edge" => owner = Owner::Graph,
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    build(graph_data, nodes, edges)
}

fn build(
    graph_data: HashMap<String, String>,
    nodes: Vec<RawNode>,
    edges: Vec<RawEdge>,
) -> Result<AnnotatedGraph> {
    let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
    let mut graph_nodes = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let label = n.data.get("label").cloned().unwrap_or_else(|| n.id.clone());
        let weight = match n.data.get("frequency") {
            Some(f) => number(f, "frequency")?,
            None => 1,
        };
        graph_nodes.push((label, weight));
    }
    let mut graph = CooccurrenceGraph::with_nodes(graph_nodes);
    for e in &edges {
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::GraphMl(format!("edge endpoint {id:?} is not a node")))
        };
        let weight = match e.data.get("weight") {
            Some(w) => number(w, "weight")?,
            None => 1,
        };
        graph.add_edge(lookup(&e.source)?, lookup(&e.target)?, weight)?;
    }

    let mut annotated = AnnotatedGraph::new(graph);
    if nodes.iter().any(|n| n.data.contains_key("betweenness")) {
        let scores = nodes
            .iter()
            .map(|n| match n.data.get("betweenness") {
                Some(b) => number(b, "betweenness"),
                None => Err(Error::GraphMl(format!("node {:?} lacks betweenness", n.id))),
            })
            .collect::<Result<Vec<f64>>>()?;
        let mode = match graph_data.get("betweenness_mode") {
            Some(m) => m.parse()?,
            None => Default::default(),
        };
        annotated = annotated.with_centrality(CentralityScores { scores, mode })?;
    }
    if nodes.iter().any(|n| n.data.contains_key("community")) {
        let membership = nodes
            .iter()
            .map(|n| match n.data.get("community") {
                Some(c) => number(c, "community"),
                None => Err(Error::GraphMl(format!("node {:?} lacks community", n.id))),
            })
            .collect::<Result<Vec<usize>>>()?;
        let modularity_q = match graph_data.get("modularity") {
            Some(q) => number(q, "modularity")?,
            None => f64::NAN,
        };
        annotated = annotated.with_communities(CommunityLabels {
            membership,
            modularity_q,
        })?;
    }
    Ok(annotated)
}
