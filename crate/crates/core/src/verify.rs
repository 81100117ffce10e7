//! Decodability checks for linear codes on a graph.
//!
//! An edge labeled `k` is decodable when the rows stored at its two
//! endpoints span the selector of `W_k`. Because the sources are independent
//! and uniform, that rank criterion is equivalent to zero conditional entropy
//! of `W_k` given both endpoints; `oracle_exhaustive_decode` checks the same
//! property by brute force on tiny instances.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::FpMatrix;
use crate::graph::{Edge, StorageGraph};

/// Default number of source vectors the exhaustive oracle may enumerate.
pub const DEFAULT_ORACLE_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeReport {
    pub u: String,
    pub v: String,
    pub w: usize,
    pub decodable: bool,
    pub interference_dim: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub edge_count: usize,
    pub failed: usize,
    pub edges: Vec<EdgeReport>,
}

impl VerificationReport {
    pub fn failing_edges(&self) -> impl Iterator<Item = &EdgeReport> {
        self.edges.iter().filter(|e| !e.decodable)
    }
}

/// Checks that `code` has the graph's node set and source count.
pub fn check_compatible(code: &LinearCode, g: &StorageGraph) -> Result<()> {
    if code.k() != g.k() {
        return Err(Error::ShapeMismatch(format!(
            "code has K = {}, graph has K = {}",
            code.k(),
            g.k()
        )));
    }
    if code.nodes() != g.nodes() {
        let missing = g.nodes().iter().find(|n| code.generator(n).is_none());
        let extra = code.nodes().iter().find(|n| g.index_of(n).is_none());
        return Err(Error::ShapeMismatch(match (missing, extra) {
            (Some(n), _) => format!("no generator for graph node `{n}`"),
            (None, Some(n)) => format!("generator for unknown node `{n}`"),
            (None, None) => "node sets differ".into(),
        }));
    }
    Ok(())
}

/// The `lw × K·lw` matrix selecting source `k`'s block.
pub fn selector(code: &LinearCode, k: usize) -> FpMatrix {
    let mut s = FpMatrix::zeros(code.p(), code.lw(), code.k() * code.lw());
    for i in 0..code.lw() {
        s.set(i, (k - 1) * code.lw() + i, 1);
    }
    s
}

fn other_columns(code: &LinearCode, k: usize) -> Vec<usize> {
    (0..code.k() * code.lw())
        .filter(|c| c / code.lw() != k - 1)
        .collect()
}

fn stacked(code: &LinearCode, e: &Edge) -> FpMatrix {
    let gens = code.generators();
    gens[e.u]
        .stack(&gens[e.v])
        .expect("generators share one shape")
}

fn check_edge(code: &LinearCode, g: &StorageGraph, e: &Edge) -> Result<()> {
    check_compatible(code, g)?;
    if g.edge_label(e.u, e.v) != Some(e.source) {
        return Err(Error::InvalidArgument(format!(
            "{{{}, {}}} is not an edge labeled {}",
            g.name(e.u),
            g.name(e.v),
            e.source
        )));
    }
    Ok(())
}

fn edge_report(code: &LinearCode, g: &StorageGraph, e: &Edge) -> EdgeReport {
    let stack = stacked(code, e);
    let rank = stack.rank();
    let decodable = stack
        .stack(&selector(code, e.source))
        .expect("selector matches generator width")
        .rank()
        == rank;
    let interference_dim = stack.select_columns(&other_columns(code, e.source)).rank();
    EdgeReport {
        u: g.name(e.u).to_string(),
        v: g.name(e.v).to_string(),
        w: e.source,
        decodable,
        interference_dim,
        rank,
    }
}

/// True iff both endpoints of `e` together determine its source.
pub fn verify_edge(code: &LinearCode, g: &StorageGraph, e: &Edge) -> Result<bool> {
    check_edge(code, g, e)?;
    stacked(code, e).rowspace_contains(&selector(code, e.source))
}

/// Rank of the endpoints' stored rows restricted to the other sources.
pub fn interference_dimension(code: &LinearCode, g: &StorageGraph, e: &Edge) -> Result<usize> {
    check_edge(code, g, e)?;
    Ok(stacked(code, e)
        .select_columns(&other_columns(code, e.source))
        .rank())
}

pub fn verify_code(code: &LinearCode, g: &StorageGraph) -> Result<VerificationReport> {
    check_compatible(code, g)?;
    let edges = g.edges().iter().map(|e| edge_report(code, g, e)).collect();
    Ok(summarize(edges))
}

/// [`verify_code`] spread over `jobs` worker threads. The report is
/// identical to the sequential one.
pub fn verify_code_parallel(
    code: &LinearCode,
    g: &StorageGraph,
    jobs: usize,
) -> Result<VerificationReport> {
    if jobs <= 1 {
        return verify_code(code, g);
    }
    check_compatible(code, g)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {jobs} workers: {e}")))?;
    let edges = pool.install(|| {
        g.edges()
            .par_iter()
            .map(|e| edge_report(code, g, e))
            .collect()
    });
    Ok(summarize(edges))
}

fn summarize(edges: Vec<EdgeReport>) -> VerificationReport {
    let failed = edges.iter().filter(|e| !e.decodable).count();
    VerificationReport {
        pass: failed == 0,
        edge_count: edges.len(),
        failed,
        edges,
    }
}

/// Explicit decoder `D` with `D · stack(G_u, G_v) = S_k`, if the edge
/// decodes.
pub fn decoder(code: &LinearCode, g: &StorageGraph, e: &Edge) -> Result<Option<FpMatrix>> {
    check_edge(code, g, e)?;
    stacked(code, e).solve_left(&selector(code, e.source))
}

/// Brute-force decodability: enumerates every source vector, groups by the
/// pair of stored values and checks that no group holds two different values
/// of the edge's source.
pub fn oracle_exhaustive_decode(
    code: &LinearCode,
    g: &StorageGraph,
    e: &Edge,
    cap: u128,
) -> Result<bool> {
    check_edge(code, g, e)?;
    let p = code.p();
    let dims = code.k() * code.lw();
    let needed = (p as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let (gu, gv) = (&code.generators()[e.u], &code.generators()[e.v]);
    let block = (e.source - 1) * code.lw()..e.source * code.lw();
    let mut seen: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
    let mut x = vec![0u64; dims];
    for _ in 0..needed {
        let mut key = gu.apply(&x);
        key.extend(gv.apply(&x));
        let wanted = &x[block.clone()];
        match seen.get(&key) {
            Some(prev) if prev.as_slice() != wanted => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(key, wanted.to_vec());
            }
        }
        // Next vector in base-p counting order.
        for digit in x.iter_mut() {
            *digit += 1;
            if *digit < p {
                break;
            }
            *digit = 0;
        }
    }
    Ok(true)
}
