//! Linear storage codes: one generator matrix per node.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, FpMatrix};

/// A linear code over `F_p`. Source `k` occupies columns
/// `(k-1)*lw .. k*lw` of every generator; node `n` stores
/// `generators[n] · (W_1; …; W_K)`, an `lv`-symbol vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    p: u64,
    k: usize,
    lw: usize,
    lv: usize,
    nodes: Vec<String>,
    generators: Vec<FpMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDocument {
    pub p: u64,
    #[serde(rename = "K")]
    pub k: usize,
    pub lw: usize,
    pub lv: usize,
    pub nodes: BTreeMap<String, Vec<Vec<i64>>>,
}

impl LinearCode {
    /// `nodes` must be sorted and distinct; each generator must be
    /// `lv × (k·lw)` over `F_p`.
    pub fn new(
        p: u64,
        k: usize,
        lw: usize,
        lv: usize,
        nodes: Vec<String>,
        generators: Vec<FpMatrix>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "field size {p} is not prime"
            )));
        }
        if k == 0 || lw == 0 || lv == 0 {
            return Err(Error::InvalidArgument(
                "K, lw and lv must be positive".into(),
            ));
        }
        if nodes.len() != generators.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} nodes but {} generators",
                nodes.len(),
                generators.len()
            )));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "node names must be sorted and distinct".into(),
            ));
        }
        for (name, g) in nodes.iter().zip(&generators) {
            if g.p() != p || g.rows() != lv || g.cols() != k * lw {
                return Err(Error::ShapeMismatch(format!(
                    "generator of `{name}` is {}x{} over F_{}, expected {lv}x{} over F_{p}",
                    g.rows(),
                    g.cols(),
                    g.p(),
                    k * lw
                )));
            }
        }
        Ok(Self {
            p,
            k,
            lw,
            lv,
            nodes,
            generators,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lw(&self) -> usize {
        self.lw
    }

    pub fn lv(&self) -> usize {
        self.lv
    }

    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.lw as u64, self.lv as u64)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn generators(&self) -> &[FpMatrix] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&FpMatrix> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| &self.generators[i])
    }

    pub fn generator_mut(&mut self, name: &str) -> Option<&mut FpMatrix> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| &mut self.generators[i])
    }

    pub fn to_document(&self) -> CodeDocument {
        CodeDocument {
            p: self.p,
            k: self.k,
            lw: self.lw,
            lv: self.lv,
            nodes: self
                .nodes
                .iter()
                .zip(&self.generators)
                .map(|(n, g)| {
                    let rows = g
                        .to_rows()
                        .into_iter()
                        .map(|r| r.into_iter().map(|x| x as i64).collect())
                        .collect();
                    (n.clone(), rows)
                })
                .collect(),
        }
    }

    pub fn from_document(doc: CodeDocument) -> Result<Self> {
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        let mut generators = Vec::with_capacity(doc.nodes.len());
        let cols = doc.k * doc.lw;
        for (name, rows) in doc.nodes {
            if rows.len() != doc.lv {
                return Err(Error::ShapeMismatch(format!(
                    "node `{name}` has {} rows, expected lv = {}",
                    rows.len(),
                    doc.lv
                )));
            }
            if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
                return Err(Error::ShapeMismatch(format!(
                    "node `{name}` has a row of {} entries, expected K*lw = {cols}",
                    bad.len()
                )));
            }
            generators.push(FpMatrix::from_rows(doc.p, cols, &rows)?);
            nodes.push(name);
        }
        Self::new(doc.p, doc.k, doc.lw, doc.lv, nodes, generators)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("code documents always serialize")
    }
}

pub fn parse_code(document: &str) -> Result<LinearCode> {
    let doc: CodeDocument =
        serde_json::from_str(document).map_err(|e| Error::Malformed(e.to_string()))?;
    LinearCode::from_document(doc)
}
