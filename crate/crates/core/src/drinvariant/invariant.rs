//! The graph invariant `C(G)` and its top-degree part, by any of the evaluators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::laurent::Flavor;
use super::oracle::{cg_oracle_with, OracleParams};
use super::{division, laurent};
use crate::error::{Error, Result};
use crate::exactmath::poly::MultiPoly;
use crate::graph::StableGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Oracle,
    ZagierLaurent,
    ZagierDivision,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Oracle, Method::ZagierLaurent, Method::ZagierDivision];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::ZagierLaurent => "zagier-laurent",
            Method::ZagierDivision => "zagier-division",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "laurent" | "zagier-laurent" => Ok(Method::ZagierLaurent),
            "division" | "zagier-division" => Ok(Method::ZagierDivision),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Zagier strategy selector for callers that do not want the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Laurent,
    Division,
}

impl From<Strategy> for Method {
    fn from(s: Strategy) -> Method {
        match s {
            Strategy::Laurent => Method::ZagierLaurent,
            Strategy::Division => Method::ZagierDivision,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInvariant {
    pub graph: StableGraph,
    pub method: Method,
    /// Polynomial in the vertex charges `x_1, ..., x_{V-1}`; `x_0` is eliminated.
    pub value: MultiPoly,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

/// `C(G)` by the requested method.
pub fn cg(g: &StableGraph, method: Method) -> Result<GraphInvariant> {
    cg_with(g, method, &OracleParams::default())
}

/// As [`cg`], with explicit oracle sampling parameters.
pub fn cg_with(g: &StableGraph, method: Method, oracle: &OracleParams) -> Result<GraphInvariant> {
    let mut provenance = BTreeMap::new();
    let value = match method {
        Method::Oracle => {
            let (p, stats) = cg_oracle_with(g, oracle)?;
            provenance.insert("charge_points".into(), stats.charge_points.to_string());
            provenance.insert("r_samples".into(), stats.r_samples.to_string());
            provenance.insert("max_r0".into(), stats.max_r0.to_string());
            p
        }
        Method::ZagierLaurent => {
            provenance.insert("truncation".into(), format!("box {:?}", laurent::target(g.num_edges())));
            laurent::evaluate(g, Flavor::Full)?
        }
        Method::ZagierDivision => division::evaluate(g, Flavor::Full)?,
    };
    Ok(GraphInvariant { graph: g.clone(), method, value, provenance })
}

pub fn cg_zagier(g: &StableGraph, strategy: Strategy) -> Result<GraphInvariant> {
    cg(g, strategy.into())
}

/// The degree-`2|E|` part of `C(G)`, straight from the top-degree tree formula.
pub fn cg_top(g: &StableGraph, strategy: Strategy) -> Result<GraphInvariant> {
    let value = match strategy {
        Strategy::Laurent => laurent::evaluate(g, Flavor::Top)?,
        Strategy::Division => division::evaluate(g, Flavor::Top)?,
    };
    let mut provenance = BTreeMap::new();
    provenance.insert("part".into(), "top-degree".into());
    Ok(GraphInvariant { graph: g.clone(), method: strategy.into(), value, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("magic".parse::<Method>().is_err());
    }
}
