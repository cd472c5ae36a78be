//! Named family generators for sweeps. Templates are deterministic in `n`
//! (and `r`), and every template produces matchings, so the family degree
//! bound stays at 1 for all sizes.

use std::fmt;
use std::str::FromStr;

use matchdist::{Edge, HostGraph, SubgraphFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    /// One member: the canonical perfect matching of `K_{2n}`, edges `(2i, 2i+1)`.
    PerfectMatching,
    /// Two members: the canonical perfect matching split into alternating edges.
    TwoDisjointMatchings,
    /// One member: the canonical balanced perfect matching of `K_{r x (r-1)n}`.
    BalancedPm,
}

impl FromStr for Template {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "perfect-matching" => Ok(Template::PerfectMatching),
            "two-disjoint-matchings" => Ok(Template::TwoDisjointMatchings),
            "balanced-pm" => Ok(Template::BalancedPm),
            other => Err(format!(
                "unknown template '{other}' (expected perfect-matching, \
                 two-disjoint-matchings, or balanced-pm)"
            )),
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Template::PerfectMatching => "perfect-matching",
            Template::TwoDisjointMatchings => "two-disjoint-matchings",
            Template::BalancedPm => "balanced-pm",
        };
        f.write_str(name)
    }
}

/// Edges `(2i, 2i+1)` for `i < n`.
pub fn canonical_pm_edges(n: u64) -> Vec<Edge> {
    (0..n as u32).map(|i| Edge::new(2 * i, 2 * i + 1).expect("distinct")).collect()
}

/// The canonical balanced perfect matching of `K_{r x (r-1)n}`: part `i` is
/// cut into ascending blocks of size `n`, one per other part, and the block
/// of `i` for `j` is matched index-by-index with the block of `j` for `i`.
pub fn canonical_balanced_pm_edges(r: u32, n: u64) -> Vec<Edge> {
    let part_size = u64::from(r - 1) * n;
    let block_index = |i: u32, j: u32| -> u64 {
        // Position of j among the parts other than i.
        u64::from(if j < i { j } else { j - 1 })
    };
    let mut edges = Vec::with_capacity((u64::from(r) * part_size / 2) as usize);
    for i in 0..r {
        for j in (i + 1)..r {
            for t in 0..n {
                let u = u64::from(i) * part_size + block_index(i, j) * n + t;
                let v = u64::from(j) * part_size + block_index(j, i) * n + t;
                edges.push(Edge::new(u as u32, v as u32).expect("distinct"));
            }
        }
    }
    edges
}

impl Template {
    /// Builds the host and family for size `n` (and `r` where relevant).
    pub fn instantiate(&self, n: u64, r: u32) -> matchdist::Result<(HostGraph, SubgraphFamily)> {
        match self {
            Template::PerfectMatching => {
                let host = HostGraph::complete(n)?;
                let family = SubgraphFamily::validate(&host, vec![canonical_pm_edges(n)], true)?;
                Ok((host, family))
            }
            Template::TwoDisjointMatchings => {
                let host = HostGraph::complete(n)?;
                let all = canonical_pm_edges(n);
                let (even, odd): (Vec<_>, Vec<_>) =
                    all.into_iter().enumerate().partition(|(i, _)| i % 2 == 0);
                let members = vec![
                    even.into_iter().map(|(_, e)| e).collect(),
                    odd.into_iter().map(|(_, e)| e).collect(),
                ];
                let family = SubgraphFamily::validate(&host, members, true)?;
                Ok((host, family))
            }
            Template::BalancedPm => {
                let host = HostGraph::multipartite(r, n)?;
                let family = SubgraphFamily::validate(
                    &host,
                    vec![canonical_balanced_pm_edges(r, n)],
                    true,
                )?;
                Ok((host, family))
            }
        }
    }
}
