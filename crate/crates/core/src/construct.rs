//! Explicit code constructions for rates 2, 3/2 and 4/3, plus the
//! replication fallback.
//!
//! The rate-4/3 constructions are randomized: each source `k` gets a uniform
//! random matrix `H_k` whose rows `X_k(i)` are generic combinations of the
//! four symbols of `W_k`, and nodes store fixed linear combinations of those
//! rows. Every candidate is verified; failures are retried with fresh draws
//! from the same seeded stream and, if needed, over a larger field.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier;
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{
    add_mod, mul_mod, random_matrix, smallest_prime_geq, smallest_prime_gt, vandermonde, FpMatrix,
};
use crate::graph::{Edge, StorageGraph};
use crate::structure::{self, components_where, PathFilter, DEFAULT_PATH_LIMIT};
use crate::verify::{verify_code, VerificationReport};

/// Random draws tried per field size before moving to a larger prime.
pub const ATTEMPTS_PER_PRIME: usize = 32;
/// How many times the field may be enlarged before giving up.
pub const MAX_ESCALATIONS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Thm1,
    Thm2,
    Thm4,
    Thm7,
    Replication,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Thm1 => "thm1",
            Rule::Thm2 => "thm2",
            Rule::Thm4 => "thm4",
            Rule::Thm7 => "thm7",
            Rule::Replication => "replication",
        }
    }
}

/// A verified code together with how it was obtained.
#[derive(Debug, Clone)]
pub struct Construction {
    pub code: LinearCode,
    pub rule: Rule,
    /// Candidates drawn, including the accepted one.
    pub attempts: usize,
    pub report: VerificationReport,
    pub plan: Option<OneEdgePlan>,
}

/// Decomposition of the subgraph around one source `k`: nodes touching `k`,
/// split into components along the edges of every other source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceComponents {
    pub source: usize,
    /// Singleton components of 1-color nodes.
    pub one_color: Vec<usize>,
    /// Components made of 2-color nodes, each sorted.
    pub two_color: Vec<Vec<usize>>,
    /// Singleton components of 3-color nodes.
    pub three_color: Vec<usize>,
}

impl SourceComponents {
    /// Number of generic combinations `X_k` the construction needs.
    pub fn x_len(&self) -> usize {
        3 * self.one_color.len() + 2 * self.two_color.len() + self.three_color.len()
    }

    /// Index of the 2-color component containing `node`, and the node's
    /// 1-based position inside it.
    pub fn slot(&self, node: usize) -> Option<(usize, usize)> {
        self.two_color
            .iter()
            .enumerate()
            .find_map(|(m, block)| block.iter().position(|&n| n == node).map(|j| (m, j + 1)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentAssignment {
    pub per_source: Vec<SourceComponents>,
}

impl ComponentAssignment {
    pub fn source(&self, k: usize) -> &SourceComponents {
        &self.per_source[k - 1]
    }
}

/// Builds the per-source component decomposition. Fails if a component
/// mixes node types, or holds a node with four or more colors.
pub fn component_assignment(g: &StorageGraph) -> Result<ComponentAssignment> {
    let mut per_source = Vec::with_capacity(g.k());
    for k in 1..=g.k() {
        let members = g.nodes_with_source(k);
        let mut sc = SourceComponents {
            source: k,
            one_color: Vec::new(),
            two_color: Vec::new(),
            three_color: Vec::new(),
        };
        for block in components_where(g, &members, |label| label != k) {
            let colors: Vec<usize> = block.iter().map(|&n| g.color_count(n)).collect();
            match (block.len(), colors[0]) {
                (1, 1) => sc.one_color.push(block[0]),
                (1, 3) => sc.three_color.push(block[0]),
                (_, 2) if colors.iter().all(|&c| c == 2) => sc.two_color.push(block),
                _ => {
                    let names: Vec<&str> = block.iter().map(|&n| g.name(n)).collect();
                    return Err(Error::Precondition(format!(
                        "component {names:?} around source {k} mixes color counts {colors:?}"
                    )));
                }
            }
        }
        per_source.push(sc);
    }
    Ok(ComponentAssignment { per_source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Sym {
    /// `X_k(i)`, 0-based.
    X(usize, usize),
    /// Extra combination `X̄(i)` of the internal edge's source.
    Bar(usize),
}

/// Linear combination of symbols; coefficients are small positive integers
/// reduced mod `p` when instantiated.
type Comb = Vec<(Sym, u64)>;

fn x(k: usize, i: usize) -> Comb {
    vec![(Sym::X(k, i), 1)]
}

fn sum(a: &Comb, b: &Comb) -> Comb {
    let mut out = a.clone();
    out.extend(b.iter().cloned());
    out
}

/// Symbolic row layout for every node, independent of the random draws.
#[derive(Debug, Clone)]
struct Layout {
    lw: usize,
    lv: usize,
    x_len: Vec<usize>,
    bar_source: Option<usize>,
    rows: Vec<Vec<Comb>>,
}

/// Generator rows of a node's share for source `k`: one row if special for
/// `k`, otherwise two.
type Parts = HashMap<(usize, usize), Vec<Comb>>;

fn four_thirds_parts(g: &StorageGraph, assignment: &ComponentAssignment) -> Result<Parts> {
    let classes = structure::node_classes(g);
    let mut parts = Parts::new();
    for sc in &assignment.per_source {
        let k = sc.source;
        let q_base = 3 * sc.one_color.len();
        let s_base = q_base + 2 * sc.two_color.len();
        for (m, &n) in sc.one_color.iter().enumerate() {
            parts.insert((n, k), (0..3).map(|i| x(k, 3 * m + i)).collect());
        }
        for (m, block) in sc.two_color.iter().enumerate() {
            for (j0, &n) in block.iter().enumerate() {
                let j = j0 as u64 + 1;
                let (lo, hi) = (Sym::X(k, q_base + 2 * m), Sym::X(k, q_base + 2 * m + 1));
                let first = vec![(lo, 1), (hi, 2 * j - 1)];
                let share = if classes[n].special_for.contains(&k) {
                    vec![first]
                } else {
                    vec![first, vec![(lo, 1), (hi, 2 * j)]]
                };
                parts.insert((n, k), share);
            }
        }
        for (m, &n) in sc.three_color.iter().enumerate() {
            parts.insert((n, k), vec![x(k, s_base + m)]);
        }
    }
    Ok(parts)
}

fn merge_parts(
    g: &StorageGraph,
    assignment: &ComponentAssignment,
    parts: &Parts,
    bar: Option<usize>,
) -> Result<Layout> {
    let classes = structure::node_classes(g);
    let mut rows = Vec::with_capacity(g.node_count());
    for (n, class) in classes.iter().enumerate() {
        let sources = &class.sources;
        let share = |k: usize| -> Result<&Vec<Comb>> {
            parts.get(&(n, k)).ok_or_else(|| {
                Error::Precondition(format!("node `{}` has no share for source {k}", g.name(n)))
            })
        };
        let mut node_rows: Vec<Comb> = match sources.len() {
            1 => share(sources[0])?.clone(),
            2 => {
                let (a, b) = (share(sources[0])?, share(sources[1])?);
                if a.len() == 2 && b.len() == 2 {
                    vec![a[0].clone(), b[0].clone(), sum(&a[1], &b[1])]
                } else {
                    a.iter().chain(b.iter()).cloned().collect()
                }
            }
            3 => sources
                .iter()
                .map(|&k| share(k).map(|s| s[0].clone()))
                .collect::<Result<_>>()?,
            m => {
                return Err(Error::Precondition(format!(
                    "node `{}` has {m} colors; rate 4/3 needs at most 3",
                    g.name(n)
                )))
            }
        };
        if node_rows.len() > 3 {
            return Err(Error::Precondition(format!(
                "node `{}` would need {} symbols",
                g.name(n),
                node_rows.len()
            )));
        }
        node_rows.resize(3, Vec::new());
        rows.push(node_rows);
    }
    Ok(Layout {
        lw: 4,
        lv: 3,
        x_len: assignment.per_source.iter().map(|s| s.x_len()).collect(),
        bar_source: bar,
        rows,
    })
}

fn instantiate(
    g: &StorageGraph,
    layout: &Layout,
    p: u64,
    h: &[FpMatrix],
    hbar: Option<&FpMatrix>,
) -> Result<LinearCode> {
    let width = g.k() * layout.lw;
    let generators = layout
        .rows
        .iter()
        .map(|node_rows| {
            let mut m = FpMatrix::zeros(p, layout.lv, width);
            for (r, comb) in node_rows.iter().enumerate() {
                let row = m.row_mut(r);
                for &(sym, coeff) in comb {
                    let (k, source_row) = match sym {
                        Sym::X(k, i) => (k, h[k - 1].row(i)),
                        Sym::Bar(i) => (
                            layout.bar_source.expect("bar symbols imply a bar source"),
                            hbar.expect("bar symbols imply a bar matrix").row(i),
                        ),
                    };
                    let c = coeff % p;
                    for (t, &value) in source_row.iter().enumerate() {
                        let col = (k - 1) * layout.lw + t;
                        row[col] = add_mod(row[col], mul_mod(c, value, p), p);
                    }
                }
            }
            m
        })
        .collect();
    LinearCode::new(
        p,
        g.k(),
        layout.lw,
        layout.lv,
        g.nodes().to_vec(),
        generators,
    )
}

/// Draws random `H_k` (and `H̄`) until the instantiated code verifies,
/// escalating the field size after every `ATTEMPTS_PER_PRIME` failures.
fn randomized(
    g: &StorageGraph,
    layout: &Layout,
    seed: u64,
    rule: Rule,
    plan: Option<OneEdgePlan>,
) -> Result<Construction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = smallest_prime_gt(4 * g.edge_count() as u64);
    let mut attempts = 0;
    for escalation in 0..=MAX_ESCALATIONS {
        if escalation > 0 {
            p = smallest_prime_gt(2 * p);
        }
        for _ in 0..ATTEMPTS_PER_PRIME {
            attempts += 1;
            let h: Vec<FpMatrix> = layout
                .x_len
                .iter()
                .map(|&rows| random_matrix(rows, layout.lw, p, &mut rng))
                .collect();
            let hbar = layout
                .bar_source
                .map(|_| random_matrix(2, layout.lw, p, &mut rng));
            let code = instantiate(g, layout, p, &h, hbar.as_ref())?;
            let report = verify_code(&code, g)?;
            if report.pass {
                return Ok(Construction {
                    code,
                    rule,
                    attempts,
                    report,
                    plan,
                });
            }
        }
    }
    Err(Error::ConstructionFailed {
        attempts,
        last_prime: p,
    })
}

fn certified(g: &StorageGraph, code: LinearCode, rule: Rule) -> Result<Construction> {
    let report = verify_code(&code, g)?;
    if !report.pass {
        return Err(Error::ConstructionFailed {
            attempts: 1,
            last_prime: code.p(),
        });
    }
    Ok(Construction {
        code,
        rule,
        attempts: 1,
        report,
        plan: None,
    })
}

/// Rate 2 for graphs whose nodes are all 1-color: every node stores one
/// distinct row of a Vandermonde (MDS) code of its source.
pub fn construct_rate2(g: &StorageGraph, _seed: u64) -> Result<Construction> {
    if !classifier::check_c2(g) {
        return Err(Error::Precondition(
            "rate 2 needs every node to be 1-color".into(),
        ));
    }
    let holders: Vec<Vec<usize>> = (1..=g.k()).map(|k| g.nodes_with_source(k)).collect();
    let p = smallest_prime_geq(holders.iter().map(Vec::len).max().unwrap_or(0).max(2) as u64);
    let mut generators = vec![FpMatrix::zeros(p, 1, 2 * g.k()); g.node_count()];
    for (k0, nodes) in holders.iter().enumerate() {
        let v = vandermonde(nodes.len(), 2, p)?;
        for (i, &n) in nodes.iter().enumerate() {
            generators[n].row_mut(0)[2 * k0..2 * k0 + 2].copy_from_slice(v.row(i));
        }
    }
    let code = LinearCode::new(p, g.k(), 2, 1, g.nodes().to_vec(), generators)?;
    certified(g, code, Rule::Thm1)
}

/// Rate 3/2 for graphs of 1- and 2-color nodes with no two 2-color nodes
/// adjacent: 1-color nodes store two MDS rows, 2-color nodes one per source.
pub fn construct_rate3_2(g: &StorageGraph, _seed: u64) -> Result<Construction> {
    if !classifier::check_c3_2(g) {
        return Err(Error::Precondition(
            "rate 3/2 needs 1- and 2-color nodes only, at least one 2-color node, and no adjacent 2-color nodes".into(),
        ));
    }
    let holders: Vec<Vec<usize>> = (1..=g.k()).map(|k| g.nodes_with_source(k)).collect();
    let rows_needed = |nodes: &Vec<usize>| -> usize {
        nodes
            .iter()
            .map(|&n| if g.color_count(n) == 1 { 2 } else { 1 })
            .sum()
    };
    let p = smallest_prime_geq(holders.iter().map(rows_needed).max().unwrap_or(0).max(2) as u64);
    let mut generators = vec![FpMatrix::zeros(p, 2, 3 * g.k()); g.node_count()];
    let mut filled = vec![0usize; g.node_count()];
    for (k0, nodes) in holders.iter().enumerate() {
        let v = vandermonde(rows_needed(nodes), 3, p)?;
        let mut next = 0;
        for &n in nodes {
            let take = if g.color_count(n) == 1 { 2 } else { 1 };
            for _ in 0..take {
                let r = filled[n];
                generators[n].row_mut(r)[3 * k0..3 * k0 + 3].copy_from_slice(v.row(next));
                filled[n] += 1;
                next += 1;
            }
        }
    }
    let code = LinearCode::new(p, g.k(), 3, 2, g.nodes().to_vec(), generators)?;
    certified(g, code, Rule::Thm1)
}

fn four_thirds_layout(g: &StorageGraph) -> Result<(ComponentAssignment, Parts)> {
    let assignment = component_assignment(g)?;
    let parts = four_thirds_parts(g, &assignment)?;
    Ok((assignment, parts))
}

/// Rate 4/3 for two sources when no internal edge survives removing the
/// 1-color nodes.
pub fn construct_thm2(g: &StorageGraph, seed: u64) -> Result<Construction> {
    if !classifier::check_thm2(g)? {
        return Err(Error::Precondition(
            "an internal edge remains after removing 1-color nodes".into(),
        ));
    }
    let (assignment, parts) = four_thirds_layout(g)?;
    let layout = merge_parts(g, &assignment, &parts, None)?;
    randomized(g, &layout, seed, Rule::Thm2, None)
}

/// Rate 4/3 for any number of sources, when no node has four or more
/// colors, 3-color nodes only touch 1-color nodes, normal 2-color nodes only
/// touch 2-color nodes of the same source pair, and no internal edge survives
/// removing the 1-color nodes.
pub fn construct_thm7(g: &StorageGraph, seed: u64) -> Result<Construction> {
    if !classifier::check_thm7(g) {
        return Err(Error::Precondition(
            "graph has a rate-limiting structure or an internal edge between multi-color nodes"
                .into(),
        ));
    }
    let (assignment, parts) = four_thirds_layout(g)?;
    let layout = merge_parts(g, &assignment, &parts, None)?;
    randomized(g, &layout, seed, Rule::Thm7, None)
}

/// How the single internal edge is handled by [`construct_thm4`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneEdgePlan {
    pub u: String,
    pub v: String,
    pub w: usize,
    /// Normal nodes reachable from each endpoint without crossing a special
    /// node; they trade one combination for an extra generic one.
    pub region_u: Vec<String>,
    pub region_v: Vec<String>,
    /// Special nodes bordering each region; they keep a single pure
    /// combination.
    pub boundary_u: Vec<String>,
    pub boundary_v: Vec<String>,
    /// First special node met on each all-2-color residing path, walking
    /// from either endpoint.
    pub nearest_u: Vec<String>,
    pub nearest_v: Vec<String>,
}

/// Rate 4/3 for two sources with exactly one internal edge whose every
/// all-2-color residing path holds at least two special nodes.
pub fn construct_thm4(g: &StorageGraph, seed: u64) -> Result<Construction> {
    construct_thm4_with_limit(g, seed, DEFAULT_PATH_LIMIT)
}

pub fn construct_thm4_with_limit(
    g: &StorageGraph,
    seed: u64,
    path_limit: usize,
) -> Result<Construction> {
    if !classifier::check_thm4(g, path_limit, false)? {
        return Err(Error::Precondition(
            "needs exactly one internal edge whose all-2-color residing paths each hold two special nodes".into(),
        ));
    }
    let (e, _) = structure::internal_edges(g)
        .into_iter()
        .next()
        .expect("check_thm4 guarantees one internal edge");
    let k = e.source;
    let other = 3 - k;
    let classes = structure::node_classes(g);
    let special_k = |n: usize| classes[n].special_for.contains(&k);

    let (assignment, mut parts) = four_thirds_layout(g)?;
    let sc = assignment.source(k);
    let (m_star, _) = sc
        .slot(e.u)
        .ok_or_else(|| Error::Precondition("internal edge endpoint is not 2-color".into()))?;
    let block = &sc.two_color[m_star];
    let in_block = |n: usize| block.contains(&n);
    let base = 3 * sc.one_color.len() + 2 * m_star;

    let region = |start: usize| -> Vec<usize> {
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in g.neighbors_via(a, other) {
                if in_block(b) && !special_k(b) && !seen.contains(&b) {
                    seen.push(b);
                    stack.push(b);
                }
            }
        }
        seen.sort_unstable();
        seen
    };
    let boundary = |reg: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = reg
            .iter()
            .flat_map(|&a| g.neighbors_via(a, other).collect::<Vec<_>>())
            .filter(|&b| in_block(b) && special_k(b))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    let (region_u, region_v) = (region(e.u), region(e.v));
    let (boundary_u, boundary_v) = (boundary(&region_u), boundary(&region_v));
    if region_u.contains(&e.v) || boundary_u.iter().any(|n| boundary_v.contains(n)) {
        return Err(Error::Precondition(
            "the internal edge's endpoints are separated by fewer than two special nodes".into(),
        ));
    }

    let substitute = |share: &mut Vec<Comb>, from: Sym, to: Sym| {
        for comb in share.iter_mut() {
            for term in comb.iter_mut() {
                if term.0 == from {
                    term.0 = to;
                }
            }
        }
    };
    let (lo, hi) = (Sym::X(k, base), Sym::X(k, base + 1));
    for &n in &region_u {
        substitute(
            parts.get_mut(&(n, k)).expect("block nodes have shares"),
            hi,
            Sym::Bar(0),
        );
    }
    for &n in &region_v {
        substitute(
            parts.get_mut(&(n, k)).expect("block nodes have shares"),
            lo,
            Sym::Bar(1),
        );
    }
    for &n in &boundary_u {
        parts.insert((n, k), vec![vec![(lo, 1)]]);
    }
    for &n in &boundary_v {
        parts.insert((n, k), vec![vec![(hi, 1)]]);
    }

    let (nearest_u, nearest_v) = nearest_specials(g, &e, &classes, path_limit)?;
    let names = |ns: &[usize]| {
        ns.iter()
            .map(|&n| g.name(n).to_string())
            .collect::<Vec<_>>()
    };
    let plan = OneEdgePlan {
        u: g.name(e.u).to_string(),
        v: g.name(e.v).to_string(),
        w: k,
        region_u: names(&region_u),
        region_v: names(&region_v),
        boundary_u: names(&boundary_u),
        boundary_v: names(&boundary_v),
        nearest_u: names(&nearest_u),
        nearest_v: names(&nearest_v),
    };
    let layout = merge_parts(g, &assignment, &parts, Some(k))?;
    randomized(g, &layout, seed, Rule::Thm4, Some(plan))
}

/// First special node on every all-2-color residing path, seen from each
/// endpoint of `e`.
fn nearest_specials(
    g: &StorageGraph,
    e: &Edge,
    classes: &[structure::NodeClass],
    limit: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let two_color = |n: usize| classes[n].colors == 2;
    let filter = PathFilter {
        allowed: &two_color,
        marked: None,
    };
    let paths = structure::residing_paths_where(g, e, &filter, limit)?;
    let first_special =
        |path: &mut dyn Iterator<Item = &usize>| path.copied().find(|&n| classes[n].is_special());
    let mut from_u = Vec::new();
    let mut from_v = Vec::new();
    for p in &paths {
        // Paths run from the smaller endpoint `e.u` to `e.v`.
        from_u.extend(first_special(&mut p.nodes.iter()));
        from_v.extend(first_special(&mut p.nodes.iter().rev()));
    }
    for list in [&mut from_u, &mut from_v] {
        list.sort_unstable();
        list.dedup();
    }
    Ok((from_u, from_v))
}

/// One plain copy of every incident source per node: rate `1/M` for the
/// largest color count `M`. Always decodable.
pub fn construct_replication(g: &StorageGraph) -> Result<Construction> {
    let lv = structure::max_color_count(g).max(1);
    let p = 2;
    let generators = (0..g.node_count())
        .map(|n| {
            let mut m = FpMatrix::zeros(p, lv, g.k());
            for (r, &k) in g.node_sources(n).iter().enumerate() {
                m.set(r, k - 1, 1);
            }
            m
        })
        .collect();
    let code = LinearCode::new(p, g.k(), 1, lv, g.nodes().to_vec(), generators)?;
    certified(g, code, Rule::Replication)
}

/// Target rate for [`construct`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetRate {
    Auto,
    Two,
    ThreeHalves,
    FourThirds,
}

impl std::str::FromStr for TargetRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "2" | "2/1" => Ok(Self::Two),
            "3/2" => Ok(Self::ThreeHalves),
            "4/3" => Ok(Self::FourThirds),
            other => Err(Error::InvalidArgument(format!(
                "unsupported rate `{other}` (expected auto, 2, 3/2 or 4/3)"
            ))),
        }
    }
}

/// Builds the best code available for `target`. Returns
/// [`Error::Precondition`] listing the failed checks when no construction
/// applies.
pub fn construct(
    g: &StorageGraph,
    target: TargetRate,
    seed: u64,
    path_limit: usize,
) -> Result<Construction> {
    let mut failed = Vec::new();
    if matches!(target, TargetRate::Auto | TargetRate::Two) {
        if classifier::check_c2(g) {
            return construct_rate2(g, seed);
        }
        failed.push("rate 2: some node has two or more colors");
    }
    if matches!(target, TargetRate::Auto | TargetRate::ThreeHalves) {
        if classifier::check_c3_2(g) {
            return construct_rate3_2(g, seed);
        }
        failed.push("rate 3/2: needs 1- and 2-color nodes only, with no adjacent 2-color nodes");
    }
    if matches!(target, TargetRate::Auto | TargetRate::FourThirds) {
        if g.k() == 2 {
            if classifier::check_thm2(g)? {
                return construct_thm2(g, seed);
            }
            failed.push("thm2: an internal edge remains after removing 1-color nodes");
            if classifier::check_thm4(g, path_limit, false)? {
                return construct_thm4_with_limit(g, seed, path_limit);
            }
            failed.push("thm4: not exactly one internal edge with two specials on every all-2-color residing path");
        } else {
            if classifier::check_thm7(g) {
                return construct_thm7(g, seed);
            }
            failed.push("thm7: rate-limiting structure present or an internal edge between multi-color nodes");
        }
    }
    Err(Error::Precondition(format!(
        "no construction applies ({})",
        failed.join("; ")
    )))
}
