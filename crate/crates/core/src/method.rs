//! Named ranking methods and dispatch.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{self, CentralityResult};
use crate::cks::{analyze, ScoringOptions};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cks,
    #[serde(rename = "bc")]
    Betweenness,
    #[serde(rename = "cc")]
    Closeness,
    Enc,
    Degree,
    Kshell,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Cks,
        Method::Betweenness,
        Method::Closeness,
        Method::Enc,
        Method::Degree,
        Method::Kshell,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cks => "cks",
            Method::Betweenness => "bc",
            Method::Closeness => "cc",
            Method::Enc => "enc",
            Method::Degree => "degree",
            Method::Kshell => "kshell",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method {s:?}")))
    }
}

/// Which neighborhood-coreness variant the ENC baseline uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncMode {
    Basic,
    #[default]
    Extended,
}

impl FromStr for EncMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(EncMode::Basic),
            "extended" => Ok(EncMode::Extended),
            _ => Err(Error::invalid(format!("unknown ENC mode {s:?}"))),
        }
    }
}

/// Parameters shared by every method; each uses only what it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodParams {
    /// Louvain seed (CKS only).
    pub rng_seed: u64,
    pub resolution: f64,
    pub exclude_own_community: bool,
    pub enc_mode: EncMode,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self {
            rng_seed: 0,
            resolution: crate::DEFAULT_RESOLUTION,
            exclude_own_community: false,
            enc_mode: EncMode::Extended,
        }
    }
}

/// Scores every node of `g` with `method`.
pub fn compute<T: Scalar>(
    g: &Graph,
    method: Method,
    params: &MethodParams,
) -> Result<CentralityResult<T>> {
    Ok(match method {
        Method::Cks => {
            let opts = ScoringOptions {
                exclude_own_community: params.exclude_own_community,
                log_base: None,
            };
            let analysis = analyze(g, params.rng_seed, T::lit(params.resolution), &opts)?;
            CentralityResult {
                method,
                table: analysis.table,
            }
        }
        Method::Betweenness => baselines::betweenness(g),
        Method::Closeness => baselines::closeness(g),
        Method::Enc => baselines::enc(g, params.enc_mode),
        Method::Degree => baselines::degree_centrality(g),
        Method::Kshell => baselines::kshell_centrality(g),
    })
}
