//! Source-labeled graphs: the problem instance.
//!
//! Nodes are opaque string identifiers kept in lexicographic order, so node
//! index order and identifier order coincide. Every edge joins two distinct
//! nodes and carries one source label in `1..=K`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// On-disk graph document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    #[serde(rename = "K")]
    pub k: usize,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub u: String,
    pub v: String,
    pub w: usize,
}

/// An edge between node indices `u < v`, labeled with a 1-based source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub source: usize,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StorageGraph {
    k: usize,
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    // (neighbor, source), sorted by neighbor
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl StorageGraph {
    /// Builds and fully validates a graph.
    pub fn new<S: Into<String>>(
        k: usize,
        nodes: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (S, S, usize)>,
    ) -> Result<Self> {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let edges: Vec<(String, String, usize)> = edges
            .into_iter()
            .map(|(u, v, w)| (u.into(), v.into(), w))
            .collect();
        let graph = Self::build(k, nodes, &edges)?;
        if let Some(isolated) = (0..graph.node_count()).find(|&i| graph.adjacency[i].is_empty()) {
            return Err(Error::IsolatedNode(graph.nodes[isolated].clone()));
        }
        Ok(graph)
    }

    fn build(k: usize, mut nodes: Vec<String>, edges: &[(String, String, usize)]) -> Result<Self> {
        if k == 0 {
            return Err(Error::Malformed("K must be at least 1".into()));
        }
        nodes.sort();
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateNode(w[0].clone()));
        }
        let index: HashMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i))
            .collect();
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            let iu = *index.get(u).ok_or_else(|| Error::UnknownNode(u.clone()))?;
            let iv = *index.get(v).ok_or_else(|| Error::UnknownNode(v.clone()))?;
            if iu == iv {
                return Err(Error::SelfLoop(u.clone()));
            }
            if *w == 0 || *w > k {
                return Err(Error::LabelOutOfRange {
                    u: u.clone(),
                    v: v.clone(),
                    label: *w,
                    k,
                });
            }
            let (a, b) = (iu.min(iv), iu.max(iv));
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge(nodes[a].clone(), nodes[b].clone()));
            }
            normalized.push(Edge {
                u: a,
                v: b,
                source: *w,
            });
        }
        normalized.sort();
        Ok(Self::from_normalized(k, nodes, index, normalized))
    }

    fn from_normalized(
        k: usize,
        nodes: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<Edge>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for e in &edges {
            adjacency[e.u].push((e.v, e.source));
            adjacency[e.v].push((e.u, e.source));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            k,
            nodes,
            index,
            edges,
            adjacency,
        }
    }

    pub fn from_document(doc: GraphDocument) -> Result<Self> {
        let edges = doc.edges.into_iter().map(|e| (e.u, e.v, e.w));
        Self::new(doc.k, doc.nodes, edges)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            k: self.k,
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    u: self.nodes[e.u].clone(),
                    v: self.nodes[e.v].clone(),
                    w: e.source,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph documents always serialize")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn name(&self, node: usize) -> &str {
        &self.nodes[node]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `node` with the label of the connecting edge.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn neighbors_via(&self, node: usize, source: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[node]
            .iter()
            .filter(move |&&(_, s)| s == source)
            .map(|&(n, _)| n)
    }

    pub fn edge_label(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| self.adjacency[a][i].1)
    }

    /// Labels of the edges incident to `node`, ascending.
    pub fn node_sources(&self, node: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.adjacency[node].iter().map(|&(_, s)| s).collect();
        set.into_iter().collect()
    }

    pub fn node_sources_by_name(&self, name: &str) -> Result<Vec<usize>> {
        Ok(self.node_sources(self.require(name)?))
    }

    pub fn color_count(&self, node: usize) -> usize {
        self.node_sources(node).len()
    }

    /// Nodes incident to at least one edge labeled `source`.
    pub fn nodes_with_source(&self, source: usize) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&n| self.adjacency[n].iter().any(|&(_, s)| s == source))
            .collect()
    }

    /// Induced subgraph on the nodes flagged in `keep`. Nodes left without
    /// edges are kept, so the result may contain isolated nodes.
    pub fn induced_subgraph(&self, keep: &[bool]) -> StorageGraph {
        assert_eq!(keep.len(), self.node_count());
        let nodes: Vec<String> = (0..self.node_count())
            .filter(|&i| keep[i])
            .map(|i| self.nodes[i].clone())
            .collect();
        let index: HashMap<String, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i))
            .collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| keep[e.u] && keep[e.v])
            .map(|e| Edge {
                u: index[&self.nodes[e.u]],
                v: index[&self.nodes[e.v]],
                source: e.source,
            })
            .collect();
        // Dropping nodes preserves relative order, so `edges` is still sorted.
        Self::from_normalized(self.k, nodes, index, edges)
    }

    /// Same graph with every identifier passed through `rename`.
    pub fn relabeled(&self, rename: impl Fn(&str) -> String) -> Result<StorageGraph> {
        let nodes: Vec<String> = self.nodes.iter().map(|n| rename(n)).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| (nodes[e.u].clone(), nodes[e.v].clone(), e.source));
        Self::new(self.k, nodes.clone(), edges)
    }

    /// Same graph with label `s` replaced by `perm[s - 1]`.
    pub fn with_sources_permuted(&self, perm: &[usize]) -> Result<StorageGraph> {
        if perm.len() != self.k {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {} for K = {}",
                perm.len(),
                self.k
            )));
        }
        let edges = self.edges.iter().map(|e| {
            (
                self.nodes[e.u].clone(),
                self.nodes[e.v].clone(),
                perm[e.source - 1],
            )
        });
        Self::new(self.k, self.nodes.clone(), edges)
    }

    /// Copy of the graph with one more edge.
    pub fn with_edge(&self, u: &str, v: &str, source: usize) -> Result<StorageGraph> {
        let mut edges: Vec<(String, String, usize)> = self
            .edges
            .iter()
            .map(|e| (self.nodes[e.u].clone(), self.nodes[e.v].clone(), e.source))
            .collect();
        edges.push((u.to_string(), v.to_string(), source));
        Self::new(self.k, self.nodes.clone(), edges)
    }
}

/// Parses and validates a JSON graph document.
pub fn parse_graph(document: &str) -> Result<StorageGraph> {
    let doc: GraphDocument =
        serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    StorageGraph::from_document(doc)
}
