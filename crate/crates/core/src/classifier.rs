//! Capacity classification.
//!
//! Capacity 2 and 3/2 have exact structural characterizations. Every other
//! graph has capacity at most 4/3; sufficient conditions certify 4/3 with a
//! verified code, and a set of structural obstructions certify that 4/3 is
//! out of reach.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crate::code::{CodeDocument, LinearCode};
use crate::construct::{self, Construction};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{Edge, StorageGraph};
use crate::isomorphism::find_isomorphism;
use crate::structure::{self, simple_paths, NodeClass, PathFilter, Search, DEFAULT_PATH_LIMIT};

pub type Rate = Ratio<u64>;

/// Formats a rate as `num/den`, keeping the denominator even when it is 1.
pub fn format_rate(r: Rate) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn rate(n: u64, d: u64) -> Rate {
    Ratio::new(n, d)
}

/// Every node is 1-color.
pub fn check_c2(g: &StorageGraph) -> bool {
    (0..g.node_count()).all(|n| g.color_count(n) == 1)
}

/// All nodes have 1 or 2 colors, some node has 2, and no edge joins two
/// 2-color nodes.
pub fn check_c3_2(g: &StorageGraph) -> bool {
    let colors: Vec<usize> = (0..g.node_count()).map(|n| g.color_count(n)).collect();
    colors.iter().all(|&c| c <= 2)
        && colors.contains(&2)
        && g.edges()
            .iter()
            .all(|e| colors[e.u] != 2 || colors[e.v] != 2)
}

fn require_two_sources(g: &StorageGraph) -> Result<()> {
    if g.k() == 2 {
        Ok(())
    } else {
        Err(Error::Inapplicable(g.k()))
    }
}

/// Two sources, and no internal edge once the 1-color nodes are removed.
pub fn check_thm2(g: &StorageGraph) -> Result<bool> {
    require_two_sources(g)?;
    Ok(!structure::has_internal_edge(&structure::strip_one_color(
        g,
    )))
}

/// A residing path together with the special nodes on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness {
    pub edge: Edge,
    pub label: usize,
    pub path: Vec<usize>,
    pub specials: Vec<usize>,
}

impl PathWitness {
    fn to_json(&self, g: &StorageGraph) -> Value {
        let names = |ns: &[usize]| ns.iter().map(|&n| g.name(n)).collect::<Vec<_>>();
        json!({
            "edge": {"u": g.name(self.edge.u), "v": g.name(self.edge.v), "w": self.edge.source},
            "label": self.label,
            "path": names(&self.path),
            "specials": names(&self.specials),
        })
    }
}

/// Searches the residing paths of `e` for one using only nodes allowed by
/// `allowed` and holding at most one special node.
fn thin_residing_path(
    g: &StorageGraph,
    e: &Edge,
    classes: &[NodeClass],
    allowed: &dyn Fn(usize) -> bool,
    limit: usize,
) -> Result<Option<PathWitness>> {
    let special = |n: usize| classes[n].is_special();
    let filter = PathFilter {
        allowed,
        marked: Some((&special, 1)),
    };
    for label in (1..=g.k()).filter(|&l| l != e.source) {
        let mut hit = None;
        let outcome = simple_paths(g, e.u, e.v, label, &filter, limit, &mut |p| {
            hit = Some(p.to_vec());
            true
        })
        .map_err(|found| structure::overflow(g, e, limit, found))?;
        if outcome == Search::Stopped {
            let path = hit.expect("stopped searches record their path");
            let specials = path.iter().copied().filter(|&n| special(n)).collect();
            return Ok(Some(PathWitness {
                edge: *e,
                label,
                path,
                specials,
            }));
        }
    }
    Ok(None)
}

/// Two sources, and some internal edge has a residing path made only of
/// 2-color nodes with at most one special node among them.
pub fn check_thm3(g: &StorageGraph, limit: usize) -> Result<Option<PathWitness>> {
    require_two_sources(g)?;
    let classes = structure::node_classes(g);
    let two_color = |n: usize| classes[n].colors == 2;
    for (e, _) in structure::internal_edges(g) {
        if let Some(w) = thin_residing_path(g, &e, &classes, &two_color, limit)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Two sources, exactly one internal edge, and each of its residing paths
/// holds at least two special nodes. By default paths through a 1-color node
/// are exempt; `strict` applies the count to every residing path.
pub fn check_thm4(g: &StorageGraph, limit: usize, strict: bool) -> Result<bool> {
    require_two_sources(g)?;
    let internal = structure::internal_edges(g);
    let [(e, _)] = internal.as_slice() else {
        return Ok(false);
    };
    let classes = structure::node_classes(g);
    let two_color = |n: usize| classes[n].colors == 2;
    let any = |_: usize| true;
    let allowed: &dyn Fn(usize) -> bool = if strict { &any } else { &two_color };
    Ok(thin_residing_path(g, e, &classes, allowed, limit)?.is_none())
}

/// Match of the whole graph against the reference obstruction graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionMatch {
    /// Node of `g` for each reference node, in reference node order.
    pub mapping: Vec<usize>,
    pub label_permutation: Vec<usize>,
}

/// Isomorphic to the bundled two-internal-edge obstruction (`fig8`), up to
/// node names and swapping the source labels.
pub fn check_thm5(g: &StorageGraph) -> Option<ObstructionMatch> {
    let reference = fixtures::fig8();
    find_isomorphism(&reference, g).map(|(mapping, label_permutation)| ObstructionMatch {
        mapping,
        label_permutation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum Obstruction {
    /// A node with four or more colors.
    #[serde(rename = "a")]
    ManyColors { node: String, colors: usize },
    /// A 3-color node next to a node with two or more colors.
    #[serde(rename = "b")]
    CrowdedThreeColor { node: String, neighbor: String },
    /// A normal 2-color node next to a 2-color node with another source pair.
    #[serde(rename = "c")]
    MixedPair { node: String, neighbor: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub obstruction: Obstruction,
    /// Upper bound on the rate implied by this structure (not strict).
    pub bound: Rate,
}

impl ObstructionWitness {
    fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(&self.obstruction).expect("obstructions serialize");
        v["bound"] = json!(format_rate(self.bound));
        v
    }
}

/// Every rate-limiting local structure in `g`.
pub fn check_thm6(g: &StorageGraph) -> Vec<ObstructionWitness> {
    let classes = structure::node_classes(g);
    let mut out = Vec::new();
    for (n, c) in classes.iter().enumerate() {
        let name = || g.name(n).to_string();
        if c.colors >= 4 {
            out.push(ObstructionWitness {
                obstruction: Obstruction::ManyColors {
                    node: name(),
                    colors: c.colors,
                },
                bound: rate(c.colors as u64 + 1, c.colors as u64),
            });
        }
        for &(m, _) in g.neighbors(n) {
            let neighbor = || g.name(m).to_string();
            if c.colors == 3 && classes[m].colors >= 2 {
                out.push(ObstructionWitness {
                    obstruction: Obstruction::CrowdedThreeColor {
                        node: name(),
                        neighbor: neighbor(),
                    },
                    bound: rate(5, 4),
                });
            }
            if c.is_normal() && classes[m].colors == 2 && classes[m].sources != c.sources {
                out.push(ObstructionWitness {
                    obstruction: Obstruction::MixedPair {
                        node: name(),
                        neighbor: neighbor(),
                    },
                    bound: rate(5, 4),
                });
            }
        }
    }
    out
}

/// No rate-limiting local structure, and no internal edge once the 1-color
/// nodes are removed. Applies to any number of sources.
pub fn check_thm7(g: &StorageGraph) -> bool {
    check_thm6(g).is_empty() && !structure::has_internal_edge(&structure::strip_one_color(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub seed: u64,
    pub path_limit: usize,
    pub strict_thm4: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            path_limit: DEFAULT_PATH_LIMIT,
            strict_thm4: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CapacityClass {
    Exact,
    Bounds,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct CapacityVerdict {
    pub class: CapacityClass,
    /// Set only for exact verdicts.
    pub capacity: Option<Rate>,
    /// Rate of `certificate`, which is verified.
    pub lower: Rate,
    pub upper: Rate,
    /// The capacity is strictly below `upper`.
    pub strict_upper: bool,
    pub rules: Vec<String>,
    pub witnesses: BTreeMap<String, Value>,
    pub reason: Option<String>,
    /// A path enumeration hit its limit while deciding.
    pub limit_exceeded: bool,
    pub certificate: Construction,
}

#[derive(Serialize)]
struct CertificateDocument<'a> {
    rule: &'a str,
    attempts: usize,
    rate: String,
    code: CodeDocument,
}

#[derive(Serialize)]
struct VerdictDocument<'a> {
    class: CapacityClass,
    capacity: Option<String>,
    lower: String,
    upper: String,
    strict_upper: bool,
    rules: &'a [String],
    witnesses: &'a BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
    limit_exceeded: bool,
    certificate: CertificateDocument<'a>,
}

impl CapacityVerdict {
    pub fn to_value(&self) -> Value {
        let code: &LinearCode = &self.certificate.code;
        let doc = VerdictDocument {
            class: self.class,
            capacity: self.capacity.map(format_rate),
            lower: format_rate(self.lower),
            upper: format_rate(self.upper),
            strict_upper: self.strict_upper,
            rules: &self.rules,
            witnesses: &self.witnesses,
            reason: self.reason.as_deref(),
            limit_exceeded: self.limit_exceeded,
            certificate: CertificateDocument {
                rule: self.certificate.rule.name(),
                attempts: self.certificate.attempts,
                rate: format_rate(code.rate()),
                code: code.to_document(),
            },
        };
        serde_json::to_value(doc).expect("verdicts serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("verdicts serialize")
    }
}

fn exact(
    value: Rate,
    rules: &[&str],
    witnesses: BTreeMap<String, Value>,
    certificate: Construction,
) -> CapacityVerdict {
    CapacityVerdict {
        class: CapacityClass::Exact,
        capacity: Some(value),
        lower: value,
        upper: value,
        strict_upper: false,
        rules: rules.iter().map(|r| r.to_string()).collect(),
        witnesses,
        reason: None,
        limit_exceeded: false,
        certificate,
    }
}

/// Decides the capacity class of `g`.
///
/// Exact verdicts always carry a verified code of that rate; bounds and
/// unknown verdicts carry the replication code as the certified lower bound.
pub fn classify_capacity(g: &StorageGraph, opts: &ClassifyOptions) -> Result<CapacityVerdict> {
    let m_max = structure::max_color_count(g);
    let mut witnesses = BTreeMap::new();
    witnesses.insert("thm1".to_string(), json!({"max_colors": m_max}));
    let mut notes: Vec<String> = Vec::new();
    let mut limit_exceeded = false;

    if check_c2(g) {
        match construct::construct_rate2(g, opts.seed) {
            Ok(c) => return Ok(exact(rate(2, 1), &["thm1"], witnesses, c)),
            Err(e) => notes.push(format!("rate-2 construction failed: {e}")),
        }
    } else if check_c3_2(g) {
        match construct::construct_rate3_2(g, opts.seed) {
            Ok(c) => return Ok(exact(rate(3, 2), &["thm1"], witnesses, c)),
            Err(e) => notes.push(format!("rate-3/2 construction failed: {e}")),
        }
    } else if let Some(e) = g
        .edges()
        .iter()
        .find(|e| g.color_count(e.u) >= 2 && g.color_count(e.v) >= 2)
    {
        witnesses.insert(
            "thm1".to_string(),
            json!({"max_colors": m_max, "adjacent_multicolor": [g.name(e.u), g.name(e.v)]}),
        );
    }

    let four_thirds = rate(4, 3);
    let attempt = |rule: &str,
                   built: Result<Construction>,
                   notes: &mut Vec<String>,
                   limit: &mut bool| match built {
        Ok(c) => Some((rule.to_string(), c)),
        Err(e) => {
            *limit |= matches!(e, Error::PathOverflow { .. });
            notes.push(format!("{rule} construction failed: {e}"));
            None
        }
    };
    let mut sufficient = None;
    if g.k() == 2 {
        if check_thm2(g)? {
            sufficient = attempt(
                "thm2",
                construct::construct_thm2(g, opts.seed),
                &mut notes,
                &mut limit_exceeded,
            );
        }
        if sufficient.is_none() {
            match check_thm4(g, opts.path_limit, opts.strict_thm4) {
                Ok(true) => {
                    sufficient = attempt(
                        "thm4",
                        construct::construct_thm4_with_limit(g, opts.seed, opts.path_limit),
                        &mut notes,
                        &mut limit_exceeded,
                    );
                }
                Ok(false) => {}
                Err(e @ Error::PathOverflow { .. }) => {
                    limit_exceeded = true;
                    notes.push(format!("thm4 undecided: {e}"));
                }
                Err(e) => return Err(e),
            }
        }
    } else if check_thm7(g) {
        sufficient = attempt(
            "thm7",
            construct::construct_thm7(g, opts.seed),
            &mut notes,
            &mut limit_exceeded,
        );
    }
    if let Some((rule, c)) = sufficient {
        if let Some(plan) = &c.plan {
            witnesses.insert(
                rule.clone(),
                serde_json::to_value(plan).expect("plans serialize"),
            );
        } else {
            witnesses.insert(
                rule.clone(),
                json!({"internal_edges_between_multicolor_nodes": 0}),
            );
        }
        return Ok(exact(four_thirds, &["thm1", &rule], witnesses, c));
    }

    // Strict converse rules.
    let mut fired: Vec<(&str, Rate, bool)> = Vec::new();
    if g.k() == 2 {
        match check_thm3(g, opts.path_limit) {
            Ok(Some(w)) => {
                witnesses.insert("thm3".into(), w.to_json(g));
                fired.push(("thm3", four_thirds, true));
            }
            Ok(None) => {}
            Err(e @ Error::PathOverflow { .. }) => {
                limit_exceeded = true;
                notes.push(format!("thm3 undecided: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(m) = check_thm5(g) {
        let reference = fixtures::fig8();
        let mapping: BTreeMap<&str, &str> = m
            .mapping
            .iter()
            .enumerate()
            .map(|(r, &n)| (reference.name(r), g.name(n)))
            .collect();
        witnesses.insert(
            "thm5".into(),
            json!({"reference": "fig8", "mapping": mapping, "label_permutation": m.label_permutation}),
        );
        fired.push(("thm5", four_thirds, true));
    }
    let obstructions = check_thm6(g);
    if let Some(bound) = obstructions.iter().map(|o| o.bound).min() {
        witnesses.insert(
            "thm6".into(),
            Value::Array(
                obstructions
                    .iter()
                    .map(ObstructionWitness::to_json)
                    .collect(),
            ),
        );
        fired.push(("thm6", bound, false));
    }

    let replication = construct::construct_replication(g)?;
    let lower = replication.code.rate();
    let mut rules = vec!["thm1".to_string()];
    if let Some(upper) = fired.iter().map(|f| f.1).min() {
        let strict_upper = fired.iter().any(|f| f.1 == upper && f.2);
        rules.extend(fired.iter().map(|f| f.0.to_string()));
        return Ok(CapacityVerdict {
            class: CapacityClass::Bounds,
            capacity: None,
            lower,
            upper,
            strict_upper,
            rules,
            witnesses,
            reason: None,
            limit_exceeded,
            certificate: replication,
        });
    }

    let reason = if notes.is_empty() {
        "no sufficient condition or obstruction applies".to_string()
    } else {
        notes.join("; ")
    };
    Ok(CapacityVerdict {
        class: CapacityClass::Unknown,
        capacity: None,
        lower,
        upper: four_thirds,
        strict_upper: false,
        rules,
        witnesses,
        reason: Some(reason),
        limit_exceeded,
        certificate: replication,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(g: &StorageGraph, ns: &[usize]) -> Vec<String> {
        ns.iter().map(|&n| g.name(n).to_string()).collect()
    }

    #[test]
    fn c2_and_c3_2_examples() {
        assert!(check_c2(&fixtures::fig3a()));
        assert!(!check_c2(&fixtures::fig3b()));
        assert!(check_c2(
            &StorageGraph::new(1, ["a", "b"], [("a", "b", 1)]).unwrap()
        ));
        assert!(check_c3_2(&fixtures::fig3b()));
        assert!(!check_c3_2(&fixtures::fig3c()));
        assert!(!check_c3_2(&fixtures::fig3a()));
    }

    #[test]
    fn thm2_examples() {
        assert!(check_thm2(&fixtures::fig5a()).unwrap());
        assert!(check_thm2(&fixtures::fig5b()).unwrap());
        assert!(!check_thm2(&fixtures::fig6()).unwrap());
        assert_eq!(check_thm2(&fixtures::fig1()), Err(Error::Inapplicable(3)));
    }

    /// Operational form (strip, then look for internal edges) agrees with
    /// the path form (every residing path of every internal edge passes
    /// through a 1-color node).
    #[test]
    fn thm2_forms_agree_on_fixtures() {
        for (name, g) in fixtures::all().into_iter().filter(|(_, g)| g.k() == 2) {
            let mut path_form = true;
            for (e, _) in structure::internal_edges(&g) {
                for p in structure::residing_paths(&g, &e, DEFAULT_PATH_LIMIT).unwrap() {
                    if p.nodes.iter().all(|&n| g.color_count(n) >= 2) {
                        path_form = false;
                    }
                }
            }
            assert_eq!(check_thm2(&g).unwrap(), path_form, "{name}");
        }
    }

    #[test]
    fn thm3_examples() {
        let g = fixtures::fig6();
        let w = check_thm3(&g, DEFAULT_PATH_LIMIT).unwrap().unwrap();
        assert_eq!(names(&g, &[w.edge.u, w.edge.v]), ["V1", "V2"]);
        assert_eq!(names(&g, &w.path), ["V1", "V3", "V4", "V2"]);
        assert_eq!(names(&g, &w.specials), ["V3"]);
        assert!(check_thm3(&fixtures::fig7(), DEFAULT_PATH_LIMIT)
            .unwrap()
            .is_none());
        assert!(check_thm3(&fixtures::fig3a(), DEFAULT_PATH_LIMIT)
            .unwrap()
            .is_none());
    }

    #[test]
    fn thm4_examples() {
        assert!(check_thm4(&fixtures::fig7(), DEFAULT_PATH_LIMIT, false).unwrap());
        assert!(!check_thm4(&fixtures::fig8(), DEFAULT_PATH_LIMIT, false).unwrap());
        assert!(!check_thm4(&fixtures::fig5a(), DEFAULT_PATH_LIMIT, false).unwrap());
        assert!(check_thm4(&fixtures::fig1(), DEFAULT_PATH_LIMIT, false).is_err());
    }

    #[test]
    fn thm5_examples() {
        let g = fixtures::fig8();
        assert!(check_thm5(&g).is_some());
        assert!(check_thm5(&g.with_sources_permuted(&[2, 1]).unwrap()).is_some());
        assert!(check_thm5(&fixtures::fig7()).is_none());
    }

    #[test]
    fn thm6_examples() {
        let g = fixtures::fig10();
        let w = check_thm6(&g);
        assert!(w.iter().any(|o| o.obstruction
            == Obstruction::MixedPair {
                node: "V1".into(),
                neighbor: "V4".into()
            }
            && o.bound == rate(5, 4)));
        assert!(check_thm6(&fixtures::fig1()).is_empty());
        let star = StorageGraph::new(
            4,
            ["c", "a", "b", "d", "e"],
            [("c", "a", 1), ("c", "b", 2), ("c", "d", 3), ("c", "e", 4)],
        )
        .unwrap();
        let w = check_thm6(&star);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].bound, rate(5, 4));
        assert!(matches!(
            w[0].obstruction,
            Obstruction::ManyColors { colors: 4, .. }
        ));
    }

    #[test]
    fn thm7_examples() {
        assert!(check_thm7(&fixtures::fig1()));
        assert!(check_thm7(&fixtures::fig9()));
        assert!(!check_thm7(&fixtures::fig10()));
    }

    #[test]
    fn sufficiency_and_obstructions_are_exclusive_on_fixtures() {
        for (name, g) in fixtures::all() {
            let limit = DEFAULT_PATH_LIMIT;
            let sufficient = if g.k() == 2 {
                check_thm2(&g).unwrap() || check_thm4(&g, limit, false).unwrap()
            } else {
                false
            } || check_thm7(&g);
            let converse = (g.k() == 2 && check_thm3(&g, limit).unwrap().is_some())
                || check_thm5(&g).is_some()
                || !check_thm6(&g).is_empty();
            assert!(!(sufficient && converse), "{name}");
        }
    }

    fn verdict(g: &StorageGraph) -> CapacityVerdict {
        classify_capacity(g, &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn fixture_verdicts() {
        let v = verdict(&fixtures::fig1());
        assert_eq!(
            (v.class, v.capacity),
            (CapacityClass::Exact, Some(rate(4, 3)))
        );
        assert_eq!(v.certificate.code.rate(), rate(4, 3));
        let v = verdict(&fixtures::fig3c());
        assert_eq!(v.capacity, Some(rate(4, 3)));
        let v = verdict(&fixtures::fig8());
        assert_eq!(v.class, CapacityClass::Bounds);
        assert_eq!(
            (v.lower, v.upper, v.strict_upper),
            (rate(1, 2), rate(4, 3), true)
        );
        assert!(v.rules.contains(&"thm5".to_string()));
        let v = verdict(&fixtures::fig10());
        assert_eq!((v.upper, v.strict_upper), (rate(5, 4), false));
    }

    #[test]
    fn verdict_json_shape() {
        let v = verdict(&fixtures::fig3a()).to_value();
        assert_eq!(v["class"], "exact");
        assert_eq!(v["capacity"], "2/1");
        assert_eq!(v["lower"], "2/1");
        let v = verdict(&fixtures::fig6()).to_value();
        assert_eq!(v["class"], "bounds");
        assert_eq!(v["capacity"], Value::Null);
        assert_eq!(v["upper"], "4/3");
        assert_eq!(v["strict_upper"], true);
        assert_eq!(
            v["witnesses"]["thm3"]["path"],
            json!(["V1", "V3", "V4", "V2"])
        );
    }

    #[test]
    fn overflow_yields_unknown() {
        // fig6 with a tiny limit: thm3's search cannot finish.
        let g = fixtures::fig6();
        let opts = ClassifyOptions {
            path_limit: 0,
            ..ClassifyOptions::default()
        };
        let v = classify_capacity(&g, &opts).unwrap();
        assert_eq!(v.class, CapacityClass::Unknown);
        assert!(v.limit_exceeded);
        assert!(v.reason.unwrap().contains("limit"));
    }

    #[test]
    fn construction_overflow_is_reported() {
        // fig7 passes the thm4 check without enumerating anything, but the
        // construction must walk every all-2-color path to its specials.
        let opts = ClassifyOptions {
            path_limit: 0,
            ..ClassifyOptions::default()
        };
        let v = classify_capacity(&fixtures::fig7(), &opts).unwrap();
        assert_eq!(v.class, CapacityClass::Unknown);
        assert!(v.limit_exceeded);
    }

    #[test]
    fn adding_an_edge_between_two_color_nodes_never_raises_the_upper_bound() {
        for (name, g) in fixtures::all() {
            let before = verdict(&g).upper;
            let multi: Vec<usize> = (0..g.node_count())
                .filter(|&n| g.color_count(n) == 2)
                .collect();
            for (i, &a) in multi.iter().enumerate() {
                for &b in &multi[i + 1..] {
                    if g.edge_label(a, b).is_some() {
                        continue;
                    }
                    for k in 1..=g.k() {
                        let h = g.with_edge(g.name(a), g.name(b), k).unwrap();
                        let after = verdict(&h).upper;
                        assert!(
                            after <= before,
                            "{name} + {{{}, {}}}:{k}",
                            g.name(a),
                            g.name(b)
                        );
                    }
                }
            }
        }
    }
}
