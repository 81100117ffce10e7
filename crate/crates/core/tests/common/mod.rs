#![allow(dead_code)]

use std::collections::BTreeMap;

use graphstore_core::code::CodeDocument;
use graphstore_core::field::random_matrix;
use graphstore_core::{LinearCode, StorageGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random graph on up to `max_nodes` nodes with labels in `1..=k`. Isolated
/// nodes are dropped; at least one edge is always present.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize, k: usize, density: f64) -> StorageGraph {
    let n = rng.gen_range(2..=max_nodes);
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((names[i].clone(), names[j].clone(), rng.gen_range(1..=k)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((names[0].clone(), names[1].clone(), rng.gen_range(1..=k)));
    }
    let used: Vec<String> = names
        .iter()
        .filter(|n| edges.iter().any(|(u, v, _)| u == *n || v == *n))
        .cloned()
        .collect();
    StorageGraph::new(k, used, edges).expect("generated graphs are valid")
}

/// Random graph whose nodes are all 1-color.
pub fn random_c2_graph<R: Rng>(rng: &mut R, k: usize) -> StorageGraph {
    let n = rng.gen_range(2..=12);
    let color: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=k)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if color[i] == color[j] && rng.gen_bool(0.4) {
                edges.push((format!("n{i}"), format!("n{j}"), color[i]));
            }
        }
    }
    // Give every node at least one edge.
    let mut extra = 0;
    for (i, &c) in color.iter().enumerate().take(n) {
        if !edges
            .iter()
            .any(|(u, v, _)| *u == format!("n{i}") || *v == format!("n{i}"))
        {
            edges.push((format!("n{i}"), format!("x{extra}"), c));
            extra += 1;
        }
    }
    finish(k, edges)
}

/// Random graph of 1- and 2-color nodes with at least one 2-color node and
/// no two 2-color nodes adjacent.
pub fn random_c3_2_graph<R: Rng>(rng: &mut R, k: usize) -> StorageGraph {
    let ones = rng.gen_range(1..=8);
    let twos = rng.gen_range(1..=4);
    let one_label: Vec<usize> = (0..ones).map(|_| rng.gen_range(1..=k)).collect();
    let mut edges = Vec::new();
    for i in 0..ones {
        for j in i + 1..ones {
            if one_label[i] == one_label[j] && rng.gen_bool(0.3) {
                edges.push((format!("a{i}"), format!("a{j}"), one_label[i]));
            }
        }
    }
    let mut extra = 0;
    for t in 0..twos {
        let mut pair: Vec<usize> = (1..=k).collect();
        pair.shuffle(rng);
        pair.truncate(2);
        for &label in &pair {
            let partners: Vec<usize> = (0..ones).filter(|&i| one_label[i] == label).collect();
            let mut linked = false;
            for &i in &partners {
                if rng.gen_bool(0.5) {
                    edges.push((format!("b{t}"), format!("a{i}"), label));
                    linked = true;
                }
            }
            if !linked {
                edges.push((format!("b{t}"), format!("x{extra}"), label));
                extra += 1;
            }
        }
    }
    for (i, &label) in one_label.iter().enumerate().take(ones) {
        let name = format!("a{i}");
        if !edges.iter().any(|(u, v, _)| *u == name || *v == name) {
            edges.push((name, format!("x{extra}"), label));
            extra += 1;
        }
    }
    finish(k, edges)
}

fn finish(k: usize, edges: Vec<(String, String, usize)>) -> StorageGraph {
    let mut nodes: Vec<String> = edges
        .iter()
        .flat_map(|(u, v, _)| [u.clone(), v.clone()])
        .collect();
    nodes.sort();
    nodes.dedup();
    StorageGraph::new(k, nodes, edges).expect("generated graphs are valid")
}

/// Random code for `g`: each generator row is either a random row or a
/// random unit vector, to get a mix of decodable and undecodable edges.
pub fn random_code<R: Rng>(
    rng: &mut R,
    g: &StorageGraph,
    p: u64,
    lw: usize,
    lv: usize,
) -> LinearCode {
    let cols = g.k() * lw;
    let generators = (0..g.node_count())
        .map(|_| {
            let mut m = random_matrix(lv, cols, p, rng);
            for r in 0..lv {
                if rng.gen_bool(0.5) {
                    let row = m.row_mut(r);
                    row.fill(0);
                    row[rng.gen_range(0..cols)] = 1;
                }
            }
            m
        })
        .collect();
    LinearCode::new(p, g.k(), lw, lv, g.nodes().to_vec(), generators).unwrap()
}

/// Random injective renaming of the graph's nodes.
pub fn random_renaming<R: Rng>(rng: &mut R, g: &StorageGraph) -> BTreeMap<String, String> {
    let mut targets: Vec<String> = (0..g.node_count()).map(|i| format!("z{i:03}")).collect();
    targets.shuffle(rng);
    g.nodes().iter().cloned().zip(targets).collect()
}

/// Applies a node renaming and a source permutation (`s -> perm[s-1]`) to
/// a code, moving column blocks accordingly.
pub fn transform_code(
    code: &LinearCode,
    rename: &BTreeMap<String, String>,
    perm: &[usize],
) -> LinearCode {
    let lw = code.lw();
    let doc = code.to_document();
    let nodes = doc
        .nodes
        .iter()
        .map(|(name, rows)| {
            let moved = rows
                .iter()
                .map(|row| {
                    let mut out = vec![0i64; row.len()];
                    for s in 1..=code.k() {
                        let t = perm[s - 1];
                        out[(t - 1) * lw..t * lw].copy_from_slice(&row[(s - 1) * lw..s * lw]);
                    }
                    out
                })
                .collect();
            (rename[name].clone(), moved)
        })
        .collect();
    LinearCode::from_document(CodeDocument { nodes, ..doc }).unwrap()
}

pub fn transform_graph(
    g: &StorageGraph,
    rename: &BTreeMap<String, String>,
    perm: &[usize],
) -> StorageGraph {
    g.relabeled(|n| rename[n].clone())
        .unwrap()
        .with_sources_permuted(perm)
        .unwrap()
}

pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (1..=k)
                    .filter(|s| !p.contains(s))
                    .map(|s| {
                        let mut q = p.clone();
                        q.push(s);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}
