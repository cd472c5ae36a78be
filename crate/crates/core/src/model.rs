//! JSON model schema shared by the CLI and test fixtures.
//!
//! ```json
//! {
//!   "host": {"kind": "complete" | "complete_minus" | "multipartite",
//!            "n": 5, "r": 3, "forbidden": [[0, 1]]},
//!   "families": [[[0, 1], [2, 3]], [[4, 5]]]
//! }
//! ```
//!
//! `r` applies to multipartite hosts, `forbidden` to complete-minus hosts.
//! Edges are `[u, v]` pairs; endpoint order does not matter.

use serde::{Deserialize, Serialize};

use crate::graphs::{Edge, HostGraph, HostKind, SubgraphFamily};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HostKindSpec {
    Complete,
    CompleteMinus,
    Multipartite,
}

impl From<HostKindSpec> for HostKind {
    fn from(k: HostKindSpec) -> HostKind {
        match k {
            HostKindSpec::Complete => HostKind::Complete,
            HostKindSpec::CompleteMinus => HostKind::CompleteMinus,
            HostKindSpec::Multipartite => HostKind::Multipartite,
        }
    }
}

impl From<HostKind> for HostKindSpec {
    fn from(k: HostKind) -> HostKindSpec {
        match k {
            HostKind::Complete => HostKindSpec::Complete,
            HostKind::CompleteMinus => HostKindSpec::CompleteMinus,
            HostKind::Multipartite => HostKindSpec::Multipartite,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostSpec {
    pub kind: HostKindSpec,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<(u32, u32)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub host: HostSpec,
    pub families: Vec<Vec<(u32, u32)>>,
}

impl ModelFile {
    /// Validates the model into a host and family. Overlapping members are
    /// accepted; disjointness requirements are enforced downstream where the
    /// theory needs them.
    pub fn build(&self) -> Result<(HostGraph, SubgraphFamily)> {
        let forbidden = self
            .host
            .forbidden
            .as_ref()
            .map(|edges| edges.iter().map(|&(u, v)| Edge::new(u, v)).collect::<Result<Vec<_>>>())
            .transpose()?;
        let host = HostGraph::build(self.host.kind.into(), self.host.n, self.host.r, forbidden)?;
        let members = self
            .families
            .iter()
            .map(|member| member.iter().map(|&(u, v)| Edge::new(u, v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let family = SubgraphFamily::validate(&host, members, false)?;
        Ok((host, family))
    }

    /// Reconstructs the schema view of validated parts (for report emission).
    pub fn from_parts(host: &HostGraph, family: &SubgraphFamily) -> ModelFile {
        let forbidden = match host.kind() {
            HostKind::CompleteMinus => {
                Some(host.forbidden().iter().map(|e| e.endpoints()).collect())
            }
            _ => None,
        };
        let r = match host.kind() {
            HostKind::Multipartite => Some(host.r()),
            _ => None,
        };
        ModelFile {
            host: HostSpec { kind: host.kind().into(), n: host.n(), r, forbidden },
            families: family
                .members()
                .iter()
                .map(|member| member.iter().map(|e| e.endpoints()).collect())
                .collect(),
        }
    }
}
