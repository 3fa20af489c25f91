use crate::error::{Error, Result};

/// A simple graph on `vertex_count` vertices.
///
/// `edges` holds unordered pairs `(i, j)` with `i < j`, sorted and unique.
/// Graphs extracted from multiplicity spectra additionally carry the ordered
/// relation they were built from, diagonal pairs included; its off-diagonal
/// symmetric closure is exactly `edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGraph {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
    ordered_pairs: Option<Vec<(u32, u32)>>,
}

/// Counts reported by [`EdgeGraph::from_edges_lossy`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cleanup {
    pub loops: usize,
    pub duplicates: usize,
}

/// Lexicographic sort of index pairs, compared as one packed word.
pub(crate) fn sort_pairs(pairs: &mut [(u32, u32)]) {
    let Some(top) = pairs.iter().map(|p| p.0 as usize).max() else { return };
    if top > pairs.len() {
        pairs.sort_unstable_by_key(|&(a, b)| (a as u64) << 32 | b as u64);
        return;
    }
    // bucket by first vertex, then sort each bucket
    let mut start = vec![0usize; top + 2];
    for p in pairs.iter() {
        start[p.0 as usize + 1] += 1;
    }
    for i in 1..start.len() {
        start[i] += start[i - 1];
    }
    let mut next = start.clone();
    let mut out = vec![(0u32, 0u32); pairs.len()];
    for &p in pairs.iter() {
        out[next[p.0 as usize]] = p;
        next[p.0 as usize] += 1;
    }
    for w in start.windows(2) {
        out[w[0]..w[1]].sort_unstable_by_key(|p| p.1);
    }
    pairs.copy_from_slice(&out);
}

fn check_index(i: u32, vertex_count: usize) -> Result<()> {
    if i as usize >= vertex_count {
        return Err(Error::IndexOutOfRange { index: i as usize, vertex_count });
    }
    Ok(())
}

impl EdgeGraph {
    pub fn empty(vertex_count: usize) -> Self {
        EdgeGraph { vertex_count, edges: Vec::new(), ordered_pairs: None }
    }

    /// Strict constructor: loops and repeated edges are errors.
    pub fn from_edges(vertex_count: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            check_index(a, vertex_count)?;
            check_index(b, vertex_count)?;
            if a == b {
                return Err(Error::Loop(a as usize));
            }
            norm.push((a.min(b), a.max(b)));
        }
        sort_pairs(&mut norm);
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        Ok(EdgeGraph { vertex_count, edges: norm, ordered_pairs: None })
    }

    /// Drops loops and merges repeated edges, reporting how many of each.
    pub fn from_edges_lossy(vertex_count: usize, edges: Vec<(u32, u32)>) -> Result<(Self, Cleanup)> {
        let mut cleanup = Cleanup::default();
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            check_index(a, vertex_count)?;
            check_index(b, vertex_count)?;
            if a == b {
                cleanup.loops += 1;
            } else {
                norm.push((a.min(b), a.max(b)));
            }
        }
        sort_pairs(&mut norm);
        let before = norm.len();
        norm.dedup();
        cleanup.duplicates = before - norm.len();
        Ok((EdgeGraph { vertex_count, edges: norm, ordered_pairs: None }, cleanup))
    }

    /// Graph carrying an ordered-pair relation (possibly with diagonal pairs).
    pub fn from_ordered_pairs(vertex_count: usize, mut pairs: Vec<(u32, u32)>) -> Result<Self> {
        sort_pairs(&mut pairs);
        pairs.dedup();
        let (mut g, _) = Self::from_edges_lossy(vertex_count, pairs.clone())?;
        g.ordered_pairs = Some(pairs);
        Ok(g)
    }

    pub(crate) fn from_sorted_unchecked(vertex_count: usize, edges: Vec<(u32, u32)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(a, b)| a < b && (b as usize) < vertex_count));
        EdgeGraph { vertex_count, edges, ordered_pairs: None }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn ordered_pairs(&self) -> Option<&[(u32, u32)]> {
        self.ordered_pairs.as_deref()
    }

    pub fn contains_edge(&self, a: u32, b: u32) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.vertex_count];
        for &(a, b) in &self.edges {
            d[a as usize] += 1;
            d[b as usize] += 1;
        }
        d
    }

    /// `Σ_u deg(u)²`.
    pub fn degree_square_sum(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128 * d as u128).sum()
    }

    /// Every vertex has degree exactly one.
    pub fn is_perfect_matching(&self) -> bool {
        self.degrees().iter().all(|&d| d == 1)
    }

    /// Keep the edges selected by `keep`; the ordered relation is dropped.
    pub fn retain_edges(&self, mut keep: impl FnMut(u32, u32) -> bool) -> EdgeGraph {
        let edges = self.edges.iter().copied().filter(|&(a, b)| keep(a, b)).collect();
        EdgeGraph { vertex_count: self.vertex_count, edges, ordered_pairs: None }
    }

    /// Edges of `self` are a subset of the edges of `other`.
    pub fn is_subgraph_of(&self, other: &EdgeGraph) -> bool {
        self.vertex_count == other.vertex_count && self.edges.iter().all(|&(a, b)| other.contains_edge(a, b))
    }
}
