//! Exact x-matching counting over a disjoint family.
//!
//! An x-matching is a set of pairwise non-incident family edges whose profile
//! (per member, and per part pair on multipartite hosts) equals `x`. Counts
//! factor over connected components of the family's union graph: each
//! component's profile polynomial is computed by backtracking in canonical
//! edge order, and the component maps are convolved. The convolution order is
//! fixed, so counts are identical regardless of worker count.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exec::{map_indexed, ExecMode};
use crate::graphs::{Edge, HostGraph, HostKind, SubgraphFamily, Vertex};
use crate::{Error, Result};

/// Cap on the sparse profile-map support during convolution; exact runs on
/// oversized instances fail cleanly instead of exhausting memory.
pub const MAX_PROFILE_SUPPORT: usize = 500_000;

/// The union edge list of a disjoint family, each edge tagged with its flat
/// profile coordinate, split into connected components.
pub(crate) struct UnionGraph {
    edges: Vec<Edge>,
    coords: Vec<usize>,
    components: Vec<Vec<usize>>,
}

pub(crate) fn union_graph(host: &HostGraph, family: &SubgraphFamily) -> Result<UnionGraph> {
    if !family.is_pairwise_disjoint() {
        for (a, ma) in family.members().iter().enumerate() {
            for (b, mb) in family.members().iter().enumerate().skip(a + 1) {
                if let Some(e) = ma.iter().find(|e| mb.binary_search(e).is_ok()) {
                    return Err(Error::OverlapInDisjointMode { a, b, u: e.u(), v: e.v() });
                }
            }
        }
        unreachable!("family flagged overlapping must contain an overlap");
    }
    let shape = family.shape();
    let mut edges: Vec<Edge> = Vec::new();
    let mut coords: Vec<usize> = Vec::new();
    for (m, member) in family.members().iter().enumerate() {
        for e in member {
            let slot = match host.kind() {
                HostKind::Multipartite => shape
                    .pair_slot(host.part_of(e.u()), host.part_of(e.v()))
                    .expect("validated edge has a part pair"),
                _ => 0,
            };
            edges.push(*e);
            coords.push(shape.flat(m, slot));
        }
    }
    // Connected components over shared vertices, ordered by first edge.
    let mut vertex_edges: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (idx, e) in edges.iter().enumerate() {
        vertex_edges.entry(e.u()).or_default().push(idx);
        vertex_edges.entry(e.v()).or_default().push(idx);
    }
    let mut assigned = vec![false; edges.len()];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..edges.len() {
        if assigned[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        assigned[start] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            let e = edges[i];
            for w in [e.u(), e.v()] {
                for &j in &vertex_edges[&w] {
                    if !assigned[j] {
                        assigned[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    Ok(UnionGraph { edges, coords, components })
}

/// Profile polynomial of one component: profile -> number of matchings
/// within the component realizing it. Backtracking over the component's
/// edges in canonical order; each matching is reached once.
fn component_profile_map(
    union: &UnionGraph,
    comp: &[usize],
    shape_len: usize,
    cap: Option<&[u32]>,
) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    let mut profile = vec![0u32; shape_len];
    let mut used: Vec<Vertex> = Vec::new();
    fn rec(
        union: &UnionGraph,
        comp: &[usize],
        pos: usize,
        profile: &mut Vec<u32>,
        used: &mut Vec<Vertex>,
        cap: Option<&[u32]>,
        out: &mut BTreeMap<Vec<u32>, BigInt>,
    ) {
        if pos == comp.len() {
            let slot = out.entry(profile.clone()).or_insert_with(BigInt::zero);
            *slot += 1;
            return;
        }
        // Branch 1: skip this edge.
        rec(union, comp, pos + 1, profile, used, cap, out);
        // Branch 2: take it if both endpoints are free and the cap allows.
        let idx = comp[pos];
        let e = union.edges[idx];
        if used.contains(&e.u()) || used.contains(&e.v()) {
            return;
        }
        let coord = union.coords[idx];
        if let Some(cap) = cap {
            if profile[coord] >= cap[coord] {
                return;
            }
        }
        profile[coord] += 1;
        used.push(e.u());
        used.push(e.v());
        rec(union, comp, pos + 1, profile, used, cap, out);
        used.pop();
        used.pop();
        profile[coord] -= 1;
    }
    rec(union, comp, 0, &mut profile, &mut used, cap, &mut out);
    out
}

/// Sparse convolution of two profile polynomials, honoring `cap` and
/// aborting as soon as the support outgrows [`MAX_PROFILE_SUPPORT`].
fn convolve(
    a: &BTreeMap<Vec<u32>, BigInt>,
    b: &BTreeMap<Vec<u32>, BigInt>,
    cap: Option<&[u32]>,
) -> Result<BTreeMap<Vec<u32>, BigInt>> {
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (xa, ca) in a {
        'inner: for (xb, cb) in b {
            let mut key = xa.clone();
            for (k, &vb) in key.iter_mut().zip(xb.iter()) {
                *k += vb;
            }
            if let Some(cap) = cap {
                for (k, &c) in key.iter().zip(cap.iter()) {
                    if *k > c {
                        continue 'inner;
                    }
                }
            }
            let slot = out.entry(key).or_insert_with(BigInt::zero);
            *slot += ca * cb;
            if out.len() > MAX_PROFILE_SUPPORT {
                return Err(Error::TooLargeToEnumerate {
                    size: out.len() as u64,
                    cap: MAX_PROFILE_SUPPORT as u64,
                });
            }
        }
    }
    Ok(out)
}

/// The full map `x -> mu_x` of x-matching counts for a pairwise disjoint
/// family, optionally restricted to profiles `<= cap` componentwise.
pub(crate) fn profile_counts(
    host: &HostGraph,
    family: &SubgraphFamily,
    cap: Option<&[u32]>,
    mode: ExecMode,
) -> Result<BTreeMap<Vec<u32>, BigInt>> {
    let union = union_graph(host, family)?;
    let shape_len = family.shape().len();
    let maps = map_indexed(union.components.len(), mode, |i| {
        component_profile_map(&union, &union.components[i], shape_len, cap)
    });
    let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    acc.insert(vec![0u32; shape_len], BigInt::one());
    for m in &maps {
        acc = convolve(&acc, m, cap)?;
    }
    Ok(acc)
}

/// Exact count of x-matchings with profile exactly `x`.
pub fn count_x_matchings(
    family: &SubgraphFamily,
    x: &[u32],
    host: &HostGraph,
) -> Result<BigInt> {
    let shape = family.shape();
    if x.len() != shape.len() {
        return Err(Error::DimensionMismatch(x.len(), shape.len()));
    }
    for (coord, (&xi, &di)) in x.iter().zip(family.dcube().iter()).enumerate() {
        if u64::from(xi) > di {
            return Err(Error::ProfileOutOfRange(coord));
        }
    }
    let counts = profile_counts(host, family, Some(x), ExecMode::default())?;
    Ok(counts.get(x).cloned().unwrap_or_else(BigInt::zero))
}
