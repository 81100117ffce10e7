//! Structural predicates: node colors, special/normal 2-color nodes,
//! label-restricted components, internal edges and their residing paths.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, StorageGraph};

/// Default cap on the number of simple paths enumerated per internal edge.
pub const DEFAULT_PATH_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeClass {
    pub node: String,
    pub colors: usize,
    pub sources: Vec<usize>,
    /// Sources `k` for which a 2-color node is W_k-special. Empty otherwise.
    pub special_for: Vec<usize>,
}

impl NodeClass {
    pub fn is_normal(&self) -> bool {
        self.colors == 2 && self.special_for.is_empty()
    }

    pub fn is_special(&self) -> bool {
        self.colors == 2 && !self.special_for.is_empty()
    }
}

/// A simple path whose edges all carry `label`, joining the endpoints of
/// `edge` (a differently labeled edge).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidingPath {
    pub edge: Edge,
    pub label: usize,
    pub nodes: Vec<usize>,
}

impl ResidingPath {
    pub fn names<'g>(&self, g: &'g StorageGraph) -> Vec<&'g str> {
        self.nodes.iter().map(|&n| g.name(n)).collect()
    }
}

fn class_of(g: &StorageGraph, node: usize) -> NodeClass {
    let sources = g.node_sources(node);
    let special_for = if sources.len() == 2 {
        sources
            .iter()
            .copied()
            .filter(|&k| g.neighbors_via(node, k).all(|n| g.color_count(n) == 1))
            .collect()
    } else {
        Vec::new()
    };
    NodeClass {
        node: g.name(node).to_string(),
        colors: sources.len(),
        sources,
        special_for,
    }
}

pub fn classify_node(g: &StorageGraph, name: &str) -> Result<NodeClass> {
    Ok(class_of(g, g.require(name)?))
}

/// Classes of every node, in node index order.
pub fn node_classes(g: &StorageGraph) -> Vec<NodeClass> {
    (0..g.node_count()).map(|n| class_of(g, n)).collect()
}

pub fn max_color_count(g: &StorageGraph) -> usize {
    (0..g.node_count())
        .map(|n| g.color_count(n))
        .max()
        .unwrap_or(0)
}

/// Components of the subgraph induced on `subset` using only edges labeled
/// `k`. Blocks are sorted and ordered by their smallest node.
pub fn k_components(g: &StorageGraph, subset: &[usize], k: usize) -> Vec<Vec<usize>> {
    components_where(g, subset, |label| label == k)
}

/// Like [`k_components`] but keeps every edge whose label satisfies `keep`.
pub(crate) fn components_where(
    g: &StorageGraph,
    subset: &[usize],
    keep: impl Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut member = vec![false; g.node_count()];
    for &n in subset {
        member[n] = true;
    }
    let mut seen = vec![false; g.node_count()];
    let mut ordered: Vec<usize> = subset.to_vec();
    ordered.sort_unstable();
    ordered.dedup();
    let mut blocks = Vec::new();
    for &start in &ordered {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut block = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, label) in g.neighbors(x) {
                if member[y] && !seen[y] && keep(label) {
                    seen[y] = true;
                    block.push(y);
                    queue.push_back(y);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

/// Shortest path from `from` to `to` along `label` edges, if one exists.
fn shortest_path(g: &StorageGraph, from: usize, to: usize, label: usize) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; g.node_count()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for y in g.neighbors_via(x, label) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Every internal edge with one shortest residing path as witness.
///
/// Existence of a residing path is a reachability question, so this never
/// needs the path-enumeration limit.
pub fn internal_edges(g: &StorageGraph) -> Vec<(Edge, ResidingPath)> {
    g.edges()
        .iter()
        .filter_map(|&e| {
            (1..=g.k())
                .filter(|&label| label != e.source)
                .find_map(|label| {
                    shortest_path(g, e.u, e.v, label).map(|nodes| ResidingPath {
                        edge: e,
                        label,
                        nodes,
                    })
                })
                .map(|path| (e, path))
        })
        .collect()
}

pub fn has_internal_edge(g: &StorageGraph) -> bool {
    !internal_edges(g).is_empty()
}

/// Outcome of a bounded path search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Search {
    /// The visitor asked to stop early.
    Stopped,
    /// All paths were visited; carries how many.
    Exhausted(usize),
}

/// Filters applied during simple-path enumeration.
pub(crate) struct PathFilter<'a> {
    /// Every node on the path must satisfy this.
    pub allowed: &'a dyn Fn(usize) -> bool,
    /// At most `.1` path nodes may satisfy `.0`; longer prefixes are pruned.
    pub marked: Option<(&'a dyn Fn(usize) -> bool, usize)>,
}

impl PathFilter<'_> {
    pub fn any() -> PathFilter<'static> {
        PathFilter {
            allowed: &|_| true,
            marked: None,
        }
    }
}

/// Depth-first enumeration of simple `label`-paths from `from` to `to`, in
/// ascending neighbor order. Returns `Err(found)` once more than `limit`
/// paths have been produced.
pub(crate) fn simple_paths(
    g: &StorageGraph,
    from: usize,
    to: usize,
    label: usize,
    filter: &PathFilter<'_>,
    limit: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> std::result::Result<Search, usize> {
    if !(filter.allowed)(from) || !(filter.allowed)(to) {
        return Ok(Search::Exhausted(0));
    }
    let weight = |n: usize| match filter.marked {
        Some((is_marked, _)) => usize::from(is_marked(n)),
        None => 0,
    };
    let budget = filter.marked.map_or(usize::MAX, |(_, b)| b);
    if weight(from) > budget {
        return Ok(Search::Exhausted(0));
    }
    let neighbors: Vec<Vec<usize>> = (0..g.node_count())
        .map(|n| g.neighbors_via(n, label).collect())
        .collect();
    let mut on_path = vec![false; g.node_count()];
    let mut path = vec![from];
    let mut cursor = vec![0usize];
    let mut used = weight(from);
    on_path[from] = true;
    let mut found = 0usize;
    while let Some(&top) = path.last() {
        let i = cursor.last_mut().expect("cursor tracks path");
        if top == to {
            found += 1;
            if found > limit {
                return Err(found);
            }
            if visit(&path) {
                return Ok(Search::Stopped);
            }
        } else if *i < neighbors[top].len() {
            let next = neighbors[top][*i];
            *i += 1;
            if !on_path[next] && (filter.allowed)(next) && used + weight(next) <= budget {
                on_path[next] = true;
                used += weight(next);
                path.push(next);
                cursor.push(0);
            }
            continue;
        }
        on_path[top] = false;
        used -= weight(top);
        path.pop();
        cursor.pop();
    }
    Ok(Search::Exhausted(found))
}

pub(crate) fn overflow(g: &StorageGraph, e: &Edge, limit: usize, found: usize) -> Error {
    Error::PathOverflow {
        u: g.name(e.u).to_string(),
        v: g.name(e.v).to_string(),
        limit,
        found,
    }
}

/// Every simple residing path of `e`, over all labels other than its own,
/// in ascending label order then depth-first order.
pub fn residing_paths(g: &StorageGraph, e: &Edge, limit: usize) -> Result<Vec<ResidingPath>> {
    residing_paths_where(g, e, &PathFilter::any(), limit)
}

pub(crate) fn residing_paths_where(
    g: &StorageGraph,
    e: &Edge,
    filter: &PathFilter<'_>,
    limit: usize,
) -> Result<Vec<ResidingPath>> {
    let mut out = Vec::new();
    for label in (1..=g.k()).filter(|&l| l != e.source) {
        let remaining = limit - out.len();
        let mut batch = Vec::new();
        simple_paths(g, e.u, e.v, label, filter, remaining, &mut |p| {
            batch.push(ResidingPath {
                edge: *e,
                label,
                nodes: p.to_vec(),
            });
            false
        })
        .map_err(|found| overflow(g, e, limit, out.len() + found))?;
        out.extend(batch);
    }
    Ok(out)
}

/// Induced subgraph on the nodes with at least two colors. Applied once;
/// the result may itself contain 1-color or isolated nodes.
pub fn strip_one_color(g: &StorageGraph) -> StorageGraph {
    let keep: Vec<bool> = (0..g.node_count()).map(|n| g.color_count(n) >= 2).collect();
    g.induced_subgraph(&keep)
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    /// Nodes touching source `k` ...
    pub k: usize,
    /// ... split along edges of this other source.
    pub k_prime: usize,
    pub blocks: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    pub label: usize,
    pub nodes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InternalEdgeReport {
    pub u: String,
    pub v: String,
    pub w: usize,
    pub witness: PathReport,
    pub residing_paths: Vec<PathReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    #[serde(rename = "K")]
    pub k: usize,
    pub nodes: Vec<NodeClass>,
    pub components: Vec<ComponentReport>,
    pub internal_edges: Vec<InternalEdgeReport>,
}

/// Full structural report. Fails if any internal edge has more than `limit`
/// residing paths.
pub fn analyze(g: &StorageGraph, limit: usize) -> Result<AnalysisReport> {
    let names = |ns: &[usize]| {
        ns.iter()
            .map(|&n| g.name(n).to_string())
            .collect::<Vec<_>>()
    };
    let path_report = |p: &ResidingPath| PathReport {
        label: p.label,
        nodes: names(&p.nodes),
    };
    let mut components = Vec::new();
    for k in 1..=g.k() {
        let members = g.nodes_with_source(k);
        for k_prime in (1..=g.k()).filter(|&kp| kp != k) {
            components.push(ComponentReport {
                k,
                k_prime,
                blocks: k_components(g, &members, k_prime)
                    .iter()
                    .map(|b| names(b))
                    .collect(),
            });
        }
    }
    let mut internal = Vec::new();
    for (e, witness) in internal_edges(g) {
        let paths = residing_paths(g, &e, limit)?;
        internal.push(InternalEdgeReport {
            u: g.name(e.u).to_string(),
            v: g.name(e.v).to_string(),
            w: e.source,
            witness: path_report(&witness),
            residing_paths: paths.iter().map(path_report).collect(),
        });
    }
    Ok(AnalysisReport {
        k: g.k(),
        nodes: node_classes(g),
        components,
        internal_edges: internal,
    })
}
