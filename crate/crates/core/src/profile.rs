//! Intersection profiles and their reductions.
//!
//! A profile records, for each family member (and on multipartite hosts for
//! each unordered part pair), how many edges of a matching land there.
//! Complete-host profiles are vectors over the `l` members; multipartite
//! profiles are `l × C(r,2)` arrays stored flat, member-major, with part
//! pairs `(i, j)`, `i < j`, in lexicographic order.

/// Index layout of a profile: `l` members times one slot (complete hosts)
/// or one slot per unordered part pair (multipartite hosts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileShape {
    ell: usize,
    part_pairs: Vec<(u32, u32)>,
}

impl ProfileShape {
    /// Shape for complete-style hosts: one slot per family member.
    pub fn complete(ell: usize) -> Self {
        ProfileShape { ell, part_pairs: Vec::new() }
    }

    /// Shape for a balanced complete `r`-partite host.
    pub fn multipartite(ell: usize, r: u32) -> Self {
        let mut part_pairs = Vec::with_capacity((r as usize * (r as usize - 1)) / 2);
        for i in 0..r {
            for j in (i + 1)..r {
                part_pairs.push((i, j));
            }
        }
        ProfileShape { ell, part_pairs }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Unordered part pairs, empty on complete-style shapes.
    pub fn part_pairs(&self) -> &[(u32, u32)] {
        &self.part_pairs
    }

    /// Number of parts of the underlying host (0 for complete-style shapes).
    pub fn parts(&self) -> u32 {
        self.part_pairs.iter().map(|&(_, j)| j + 1).max().unwrap_or(0)
    }

    /// Slots per family member: 1, or the number of part pairs.
    pub fn slots(&self) -> usize {
        self.part_pairs.len().max(1)
    }

    /// Total flat length of a profile vector of this shape.
    pub fn len(&self) -> usize {
        self.ell * self.slots()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of member `m`, slot `s`.
    pub fn flat(&self, m: usize, s: usize) -> usize {
        m * self.slots() + s
    }

    /// Slot index of the unordered part pair containing `i` and `j`.
    pub fn pair_slot(&self, i: u32, j: u32) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.part_pairs.iter().position(|&p| p == key)
    }

    /// Per-member totals: the reduction from the full profile to `N^l`.
    pub fn psi1(&self, x: &[u32]) -> Vec<u32> {
        debug_assert_eq!(x.len(), self.len());
        let s = self.slots();
        (0..self.ell).map(|m| x[m * s..(m + 1) * s].iter().sum()).collect()
    }

    /// Per-part totals (multipartite shapes only; empty otherwise).
    pub fn psi2(&self, x: &[u32]) -> Vec<u32> {
        debug_assert_eq!(x.len(), self.len());
        let parts = self.parts() as usize;
        let mut out = vec![0u32; parts];
        for m in 0..self.ell {
            for (s, &(i, j)) in self.part_pairs.iter().enumerate() {
                let v = x[self.flat(m, s)];
                out[i as usize] += v;
                out[j as usize] += v;
            }
        }
        out
    }

    /// Per-pair totals across members (multipartite shapes only; empty otherwise).
    pub fn psi3(&self, x: &[u32]) -> Vec<u32> {
        debug_assert_eq!(x.len(), self.len());
        let mut out = vec![0u32; self.part_pairs.len()];
        for m in 0..self.ell {
            for s in 0..self.part_pairs.len() {
                out[s] += x[self.flat(m, s)];
            }
        }
        out
    }

    /// Sum of all profile entries.
    pub fn total(&self, x: &[u32]) -> u32 {
        debug_assert_eq!(x.len(), self.len());
        x.iter().sum()
    }
}

/// A concrete profile together with its shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionProfile {
    shape: ProfileShape,
    counts: Vec<u32>,
}

impl IntersectionProfile {
    pub fn new(shape: ProfileShape, counts: Vec<u32>) -> Self {
        assert_eq!(counts.len(), shape.len(), "profile length must match shape");
        IntersectionProfile { shape, counts }
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn psi1(&self) -> Vec<u32> {
        self.shape.psi1(&self.counts)
    }

    pub fn psi2(&self) -> Vec<u32> {
        self.shape.psi2(&self.counts)
    }

    pub fn psi3(&self) -> Vec<u32> {
        self.shape.psi3(&self.counts)
    }

    pub fn total(&self) -> u32 {
        self.shape.total(&self.counts)
    }
}
