//! Isomorphism of source-labeled graphs, up to node renaming and a
//! permutation of the source labels.

use crate::graph::StorageGraph;

/// All permutations of `1..=k`, as vectors mapping label `s` to `perm[s - 1]`.
pub(crate) fn label_permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for s in 0..used.len() {
            if !used[s] {
                used[s] = true;
                prefix.push(s + 1);
                rec(prefix, used, out);
                prefix.pop();
                used[s] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Per-node label profile: number of incident edges per label.
fn profile(g: &StorageGraph, n: usize, perm: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; g.k()];
    for &(_, s) in g.neighbors(n) {
        counts[perm[s - 1] - 1] += 1;
    }
    counts
}

/// Returns a mapping from nodes of `a` to nodes of `b` and the label
/// permutation, if `a` and `b` are isomorphic.
pub fn find_isomorphism(a: &StorageGraph, b: &StorageGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    if a.k() != b.k() || a.node_count() != b.node_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let identity: Vec<usize> = (1..=b.k()).collect();
    let b_profiles: Vec<Vec<usize>> = (0..b.node_count())
        .map(|n| profile(b, n, &identity))
        .collect();
    for perm in label_permutations(a.k()) {
        let a_profiles: Vec<Vec<usize>> =
            (0..a.node_count()).map(|n| profile(a, n, &perm)).collect();
        let mut pa = a_profiles.clone();
        let mut pb = b_profiles.clone();
        pa.sort();
        pb.sort();
        if pa != pb {
            continue;
        }
        // Visit `a` in BFS order so each new node has mapped neighbors.
        let order = bfs_order(a);
        let mut map = vec![usize::MAX; a.node_count()];
        let mut taken = vec![false; b.node_count()];
        if extend(
            a,
            b,
            &perm,
            &a_profiles,
            &b_profiles,
            &order,
            0,
            &mut map,
            &mut taken,
        ) {
            return Some((map, perm));
        }
    }
    None
}

pub fn is_isomorphic(a: &StorageGraph, b: &StorageGraph) -> bool {
    find_isomorphism(a, b).is_some()
}

fn bfs_order(g: &StorageGraph) -> Vec<usize> {
    let mut seen = vec![false; g.node_count()];
    let mut order = Vec::with_capacity(g.node_count());
    let mut starts: Vec<usize> = (0..g.node_count()).collect();
    starts.sort_by_key(|&n| std::cmp::Reverse(g.neighbors(n).len()));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &(y, _) in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &StorageGraph,
    b: &StorageGraph,
    perm: &[usize],
    a_profiles: &[Vec<usize>],
    b_profiles: &[Vec<usize>],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    taken: &mut [bool],
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    for y in 0..b.node_count() {
        if taken[y] || a_profiles[x] != b_profiles[y] {
            continue;
        }
        // Every already-mapped neighbor of x must be a neighbor of y with the
        // permuted label; degrees match, so unmapped edges are checked later.
        let consistent = a
            .neighbors(x)
            .iter()
            .all(|&(n, s)| map[n] == usize::MAX || b.edge_label(y, map[n]) == Some(perm[s - 1]));
        let mapped_a = a
            .neighbors(x)
            .iter()
            .filter(|&&(n, _)| map[n] != usize::MAX)
            .count();
        let mapped_b = b.neighbors(y).iter().filter(|&&(n, _)| taken[n]).count();
        if !consistent || mapped_a != mapped_b {
            continue;
        }
        map[x] = y;
        taken[y] = true;
        if extend(
            a,
            b,
            perm,
            a_profiles,
            b_profiles,
            order,
            depth + 1,
            map,
            taken,
        ) {
            return true;
        }
        map[x] = usize::MAX;
        taken[y] = false;
    }
    false
}
