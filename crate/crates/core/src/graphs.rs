//! Host graphs, subgraph families, matchings, and profile extraction.
//!
//! Three hosts are supported: the complete graph on `2n` vertices, the
//! complete graph minus a forbidden edge set `N`, and the balanced complete
//! `r`-partite graph with parts of size `(r-1)n`. Vertices are contiguous
//! integers; multipartite parts are contiguous blocks, so part lookup is a
//! division. All types are immutable after construction and safe to share
//! across workers.

use std::collections::{BTreeSet, HashMap};

use crate::profile::{IntersectionProfile, ProfileShape};
use crate::{Error, Result};

/// Vertex id, contiguous in `[0, V)`.
pub type Vertex = u32;

/// Largest family count supported by the overlap decomposition (2^l - 1 pieces).
pub const MAX_FAMILIES: usize = 16;

/// An undirected edge in canonical form `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Canonicalizes endpoint order; rejects self-loops.
    pub fn new(a: Vertex, b: Vertex) -> Result<Edge> {
        if a == b {
            return Err(Error::MalformedEdge { u: a, v: b });
        }
        Ok(Edge { u: a.min(b), v: a.max(b) })
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn touches(&self, w: Vertex) -> bool {
        self.u == w || self.v == w
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }
}

/// Which uniform measure the host carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HostKind {
    /// `K_{2n}`, uniform over all perfect matchings.
    Complete,
    /// `K_{2n} - N`, uniform over perfect matchings avoiding `N`.
    CompleteMinus,
    /// `K_{r x (r-1)n}`, uniform over balanced perfect matchings.
    Multipartite,
}

/// A validated probability space selector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostGraph {
    kind: HostKind,
    n: u64,
    r: u32,
    forbidden: Vec<Edge>,
}

impl HostGraph {
    /// Builds and validates a host. `r` is required for multipartite hosts,
    /// `forbidden` only applies to complete-minus hosts.
    pub fn build(
        kind: HostKind,
        n: u64,
        r: Option<u32>,
        forbidden: Option<Vec<Edge>>,
    ) -> Result<HostGraph> {
        match kind {
            HostKind::Complete => HostGraph::complete(n),
            HostKind::CompleteMinus => HostGraph::complete_minus(n, forbidden.unwrap_or_default()),
            HostKind::Multipartite => HostGraph::multipartite(r.unwrap_or(0), n),
        }
    }

    /// `K_{2n}`.
    pub fn complete(n: u64) -> Result<HostGraph> {
        if n == 0 {
            return Err(Error::EmptyHost);
        }
        check_vertex_range(2 * n)?;
        Ok(HostGraph { kind: HostKind::Complete, n, r: 0, forbidden: Vec::new() })
    }

    /// `K_{2n} - N`. Rejects forbidden sets that leave no perfect matching.
    pub fn complete_minus(n: u64, forbidden: Vec<Edge>) -> Result<HostGraph> {
        if n == 0 {
            return Err(Error::EmptyHost);
        }
        check_vertex_range(2 * n)?;
        let vertices = 2 * n;
        let mut set: BTreeSet<Edge> = BTreeSet::new();
        let mut degree: HashMap<Vertex, u64> = HashMap::new();
        for e in forbidden {
            if u64::from(e.v()) >= vertices {
                return Err(Error::MalformedEdge { u: e.u(), v: e.v() });
            }
            if set.insert(e) {
                *degree.entry(e.u()).or_insert(0) += 1;
                *degree.entry(e.v()).or_insert(0) += 1;
            }
        }
        let max_forbidden_degree = degree.values().copied().max().unwrap_or(0);
        if max_forbidden_degree >= vertices - 1 {
            return Err(Error::ForbiddenTooDense { vertices });
        }
        let host = HostGraph {
            kind: HostKind::CompleteMinus,
            n,
            r: 0,
            forbidden: set.into_iter().collect(),
        };
        // The degree condition alone does not guarantee a perfect matching
        // (a forbidden triangle on 4 vertices kills all of them), so search
        // for one explicitly.
        if !host.some_perfect_matching_exists() {
            return Err(Error::ForbiddenTooDense { vertices });
        }
        Ok(host)
    }

    /// `K_{r x (r-1)n}` with parts of size `(r-1)n`.
    pub fn multipartite(r: u32, n: u64) -> Result<HostGraph> {
        if r < 2 {
            return Err(Error::InvalidPartition(r));
        }
        if n == 0 {
            return Err(Error::EmptyHost);
        }
        let vertices = u64::from(r) * u64::from(r - 1) * n;
        check_vertex_range(vertices)?;
        Ok(HostGraph { kind: HostKind::Multipartite, n, r, forbidden: Vec::new() })
    }

    pub fn kind(&self) -> HostKind {
        self.kind
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of parts (multipartite hosts only).
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn forbidden(&self) -> &[Edge] {
        &self.forbidden
    }

    pub fn vertex_count(&self) -> u64 {
        match self.kind {
            HostKind::Complete | HostKind::CompleteMinus => 2 * self.n,
            HostKind::Multipartite => u64::from(self.r) * self.part_size(),
        }
    }

    /// Size of each part: `(r-1)n` (multipartite hosts only).
    pub fn part_size(&self) -> u64 {
        u64::from(self.r.saturating_sub(1)) * self.n
    }

    /// Part containing `v` (multipartite hosts only).
    pub fn part_of(&self, v: Vertex) -> u32 {
        debug_assert_eq!(self.kind, HostKind::Multipartite);
        (u64::from(v) / self.part_size()) as u32
    }

    pub fn is_forbidden(&self, e: &Edge) -> bool {
        self.forbidden.binary_search(e).is_ok()
    }

    /// Checks that `e` is an edge of this host.
    pub fn validate_edge(&self, e: &Edge) -> Result<()> {
        if u64::from(e.v()) >= self.vertex_count() {
            return Err(Error::EdgeOutOfHost { u: e.u(), v: e.v() });
        }
        match self.kind {
            HostKind::Complete => Ok(()),
            HostKind::CompleteMinus => {
                if self.is_forbidden(e) {
                    Err(Error::EdgeInForbiddenSet { u: e.u(), v: e.v() })
                } else {
                    Ok(())
                }
            }
            HostKind::Multipartite => {
                if self.part_of(e.u()) == self.part_of(e.v()) {
                    Err(Error::EdgeOutOfHost { u: e.u(), v: e.v() })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Profile shape for an `ell`-member family on this host.
    pub fn profile_shape(&self, ell: usize) -> ProfileShape {
        match self.kind {
            HostKind::Complete | HostKind::CompleteMinus => ProfileShape::complete(ell),
            HostKind::Multipartite => ProfileShape::multipartite(ell, self.r),
        }
    }

    /// Denominator of the limiting Poisson rates: `2n`, or `(r-1)^2 n`.
    pub fn rate_denominator(&self) -> u64 {
        match self.kind {
            HostKind::Complete | HostKind::CompleteMinus => 2 * self.n,
            HostKind::Multipartite => u64::from(self.r - 1) * u64::from(self.r - 1) * self.n,
        }
    }

    /// Greedy search with backtracking for one perfect matching avoiding the
    /// forbidden set. The host is dense, so this terminates quickly.
    fn some_perfect_matching_exists(&self) -> bool {
        let v = self.vertex_count() as usize;
        let mut used = vec![false; v];
        self.extend_matching(&mut used, 0)
    }

    fn extend_matching(&self, used: &mut [bool], from: usize) -> bool {
        let v = used.len();
        let mut u = from;
        while u < v && used[u] {
            u += 1;
        }
        if u == v {
            return true;
        }
        used[u] = true;
        for w in (u + 1)..v {
            if used[w] {
                continue;
            }
            let e = Edge { u: u as Vertex, v: w as Vertex };
            if self.is_forbidden(&e) {
                continue;
            }
            used[w] = true;
            if self.extend_matching(used, u + 1) {
                used[u] = false;
                used[w] = false;
                return true;
            }
            used[w] = false;
        }
        used[u] = false;
        false
    }
}

fn check_vertex_range(vertices: u64) -> Result<()> {
    if vertices > u64::from(u32::MAX) {
        Err(Error::HostTooLarge(vertices))
    } else {
        Ok(())
    }
}

/// A set of pairwise non-incident edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    /// Sorts the edges and verifies pairwise non-incidence.
    pub fn new(mut edges: Vec<Edge>) -> Result<Matching> {
        edges.sort_unstable();
        edges.dedup();
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            if !seen.insert(e.u()) || !seen.insert(e.v()) {
                let other = edges[..i]
                    .iter()
                    .find(|f| f.shares_vertex(e))
                    .copied()
                    .unwrap_or(*e);
                return Err(Error::NotAMatching {
                    first: other.endpoints(),
                    second: e.endpoints(),
                });
            }
        }
        Ok(Matching { edges })
    }

    /// Caller guarantees sortedness and non-incidence (enumeration loops).
    pub(crate) fn from_sorted_unchecked(edges: Vec<Edge>) -> Matching {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Matching { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Covers every host vertex?
    pub fn is_perfect(&self, host: &HostGraph) -> bool {
        2 * self.edges.len() as u64 == host.vertex_count()
    }

    /// Perfect with exactly `n` edges between every pair of parts?
    pub fn is_balanced(&self, host: &HostGraph) -> bool {
        if host.kind() != HostKind::Multipartite || !self.is_perfect(host) {
            return false;
        }
        let shape = ProfileShape::multipartite(1, host.r());
        let mut per_pair = vec![0u64; shape.part_pairs().len()];
        for e in &self.edges {
            let (i, j) = (host.part_of(e.u()), host.part_of(e.v()));
            match shape.pair_slot(i, j) {
                Some(s) => per_pair[s] += 1,
                None => return false,
            }
        }
        per_pair.iter().all(|&c| c == host.n())
    }
}

/// A validated family of edge sets `D_1..D_l` with derived statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphFamily {
    members: Vec<Vec<Edge>>,
    d: Vec<u64>,
    dcube: Vec<u64>,
    max_degree: u32,
    pairwise_disjoint: bool,
    shape: ProfileShape,
}

impl SubgraphFamily {
    /// Validates `members` against `host`. In `disjoint_mode` the members
    /// must be pairwise edge-disjoint; otherwise overlaps are recorded and
    /// allowed. Individual members may be empty.
    pub fn validate(
        host: &HostGraph,
        members: Vec<Vec<Edge>>,
        disjoint_mode: bool,
    ) -> Result<SubgraphFamily> {
        if members.len() > MAX_FAMILIES {
            return Err(Error::TooManyFamilies(members.len()));
        }
        SubgraphFamily::validate_uncapped(host, members, disjoint_mode)
    }

    /// [`SubgraphFamily::validate`] without the member-count cap. The cap
    /// limits user input; decomposition output (2^l - 1 pieces) may
    /// legitimately exceed it.
    pub(crate) fn validate_uncapped(
        host: &HostGraph,
        members: Vec<Vec<Edge>>,
        disjoint_mode: bool,
    ) -> Result<SubgraphFamily> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut sorted: Vec<Vec<Edge>> = Vec::with_capacity(members.len());
        for member in members {
            let mut m = member;
            m.sort_unstable();
            m.dedup();
            for e in &m {
                host.validate_edge(e)?;
            }
            sorted.push(m);
        }

        let ell = sorted.len();
        let shape = host.profile_shape(ell);
        let mut d = vec![0u64; ell];
        let mut dcube = vec![0u64; shape.len()];
        let mut max_degree: u32 = 0;
        let mut owner: HashMap<Edge, usize> = HashMap::new();
        let mut pairwise_disjoint = true;
        for (m, member) in sorted.iter().enumerate() {
            d[m] = member.len() as u64;
            let mut degree: HashMap<Vertex, u32> = HashMap::new();
            for e in member {
                let deg_u = degree.entry(e.u()).or_insert(0);
                *deg_u += 1;
                max_degree = max_degree.max(*deg_u);
                let deg_v = degree.entry(e.v()).or_insert(0);
                *deg_v += 1;
                max_degree = max_degree.max(*deg_v);
                let slot = match host.kind() {
                    HostKind::Multipartite => shape
                        .pair_slot(host.part_of(e.u()), host.part_of(e.v()))
                        .expect("validated multipartite edge has a part pair"),
                    _ => 0,
                };
                dcube[shape.flat(m, slot)] += 1;
                if let Some(&prev) = owner.get(e) {
                    pairwise_disjoint = false;
                    if disjoint_mode {
                        return Err(Error::OverlapInDisjointMode {
                            a: prev,
                            b: m,
                            u: e.u(),
                            v: e.v(),
                        });
                    }
                } else {
                    owner.insert(*e, m);
                }
            }
        }
        if max_degree > 8 {
            log::warn!(
                "family max degree {max_degree} is large; Poisson references assume sparse members"
            );
        }
        Ok(SubgraphFamily { members: sorted, d, dcube, max_degree, pairwise_disjoint, shape })
    }

    pub fn ell(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Vec<Edge>] {
        &self.members
    }

    pub fn member(&self, m: usize) -> &[Edge] {
        &self.members[m]
    }

    /// Edge counts `d_m = |E(D_m)|`.
    pub fn d(&self) -> &[u64] {
        &self.d
    }

    /// Per-profile-coordinate edge counts; equals `d` on complete hosts.
    pub fn dcube(&self) -> &[u64] {
        &self.dcube
    }

    /// The computed degree bound `C = max_m Δ(D_m)`.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn is_pairwise_disjoint(&self) -> bool {
        self.pairwise_disjoint
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn member_contains(&self, m: usize, e: &Edge) -> bool {
        self.members[m].binary_search(e).is_ok()
    }
}

/// The overlap decomposition of a family: one piece per nonempty subset of
/// members, where an edge lands in the piece of exactly the subset of
/// members containing it.
#[derive(Debug, Clone)]
pub struct Decomposition {
    original_ell: usize,
    subsets: Vec<u16>,
    family: SubgraphFamily,
}

impl Decomposition {
    /// The decomposed family: `2^l - 1` pairwise disjoint members, indexed
    /// like [`Decomposition::subsets`].
    pub fn family(&self) -> &SubgraphFamily {
        &self.family
    }

    /// Bitmasks over the original members, ascending from `1` to `2^l - 1`;
    /// bit `m` set means original member `m` belongs to the subset.
    pub fn subsets(&self) -> &[u16] {
        &self.subsets
    }

    pub fn original_ell(&self) -> usize {
        self.original_ell
    }

    /// Member indices (0-based) of the subset at `idx`.
    pub fn subset_members(&self, idx: usize) -> Vec<usize> {
        let mask = self.subsets[idx];
        (0..self.original_ell).filter(|m| mask & (1 << m) != 0).collect()
    }

    /// The summation map from per-subset counts back to per-member counts.
    pub fn push_profile(&self, kbar: &[u32]) -> Vec<u32> {
        debug_assert_eq!(kbar.len(), self.subsets.len());
        let mut k = vec![0u32; self.original_ell];
        for (idx, &mask) in self.subsets.iter().enumerate() {
            for (m, slot) in k.iter_mut().enumerate() {
                if mask & (1 << m) != 0 {
                    *slot += kbar[idx];
                }
            }
        }
        k
    }
}

/// Splits overlapping members into the `2^l - 1` disjoint pieces `D_S`.
/// Pieces may be empty; they partition the union of the members.
pub fn decompose_family(host: &HostGraph, family: &SubgraphFamily) -> Result<Decomposition> {
    let ell = family.ell();
    let piece_count = (1usize << ell) - 1;
    let mut pieces: Vec<Vec<Edge>> = vec![Vec::new(); piece_count];
    let mut mask_of: HashMap<Edge, u16> = HashMap::new();
    for (m, member) in family.members().iter().enumerate() {
        for e in member {
            *mask_of.entry(*e).or_insert(0) |= 1 << m;
        }
    }
    for (e, mask) in mask_of {
        pieces[usize::from(mask) - 1].push(e);
    }
    let decomposed = SubgraphFamily::validate_uncapped(host, pieces, true)?;
    Ok(Decomposition {
        original_ell: ell,
        subsets: (1..=piece_count as u16).collect(),
        family: decomposed,
    })
}

/// The profile of a matching against a family: entry `(m, i, j)` counts the
/// matching edges of `D_m` between parts `i` and `j` (multipartite hosts),
/// or entry `m` counts matching edges of `D_m` (complete hosts). Members may
/// overlap; an edge contributes to every member containing it.
pub fn intersect_profile(
    matching: &Matching,
    family: &SubgraphFamily,
    host: &HostGraph,
) -> IntersectionProfile {
    let shape = family.shape().clone();
    let mut counts = vec![0u32; shape.len()];
    for e in matching.edges() {
        for m in 0..family.ell() {
            if family.member_contains(m, e) {
                let slot = match host.kind() {
                    HostKind::Multipartite => shape
                        .pair_slot(host.part_of(e.u()), host.part_of(e.v()))
                        .expect("family edge has a part pair"),
                    _ => 0,
                };
                counts[shape.flat(m, slot)] += 1;
            }
        }
    }
    IntersectionProfile::new(shape, counts)
}
