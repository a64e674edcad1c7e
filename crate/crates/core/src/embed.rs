//! Pattern automorphisms, copy enumeration, and through-tuple counts.
//!
//! A *copy* of the pattern `H` in the host `G` is a subgraph of `G`
//! isomorphic to `H`, identified by its vertex set together with its edge
//! image. Copies are deduplicated as subgraphs: enumerating all injective
//! homomorphisms finds each copy exactly `|Aut(H)|` times, and the index
//! stores each once. Downstream modules consume copies almost exclusively
//! through [`CopyIndex`], which also answers `D_w` queries — the number of
//! copies whose vertex set contains a given tuple `w` — via per-vertex and
//! per-vertex-pair buckets.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::{Error, Result};

/// Default cap on the number of distinct copies an enumeration may produce.
pub const DEFAULT_COPY_CAP: usize = 5_000_000;

/// Largest pattern accepted by the automorphism search.
pub const MAX_PATTERN_VERTICES: u32 = 10;

/// A connected simple pattern graph `H` with `r ≥ 2` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    graph: Graph,
    r: u32,
}

impl Pattern {
    /// Wraps a graph as a pattern, enforcing connectivity and `r ≥ 2`.
    pub fn new(graph: Graph) -> Result<Pattern> {
        if graph.vertex_count() < 2 {
            return Err(Error::Validation("pattern needs at least 2 vertices".to_owned()));
        }
        if !graph.is_connected() {
            return Err(Error::Validation("pattern must be connected".to_owned()));
        }
        let r = graph.vertex_count();
        Ok(Pattern { graph, r })
    }

    /// The underlying graph.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of pattern vertices.
    pub fn r(&self) -> u32 {
        self.r
    }
}

/// One subgraph of the host isomorphic to the pattern.
///
/// Two copies are equal iff both the vertex set and the edge image agree;
/// distinct copies may share a vertex set (three cherries live on one
/// triangle). Ordering is lexicographic on (vertices, edge image), which
/// fixes the canonical enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Copy {
    vertices: Vec<u32>,
    edge_image: Vec<(u32, u32)>,
}

impl Copy {
    /// Sorted host vertex ids (length `r`).
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Sorted host edges realizing the pattern's edges.
    pub fn edge_image(&self) -> &[(u32, u32)] {
        &self.edge_image
    }

    /// Whether the copy's vertex set contains `v`.
    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// `|V(self) ∩ V(other)|` by sorted merge.
    pub fn intersection_size(&self, other: &Copy) -> usize {
        let (mut i, mut j, mut k) = (0, 0, 0);
        while i < self.vertices.len() && j < other.vertices.len() {
            match self.vertices[i].cmp(&other.vertices[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    k += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        k
    }

    /// `|V(self) ∪ V(other)|`.
    pub fn union_size(&self, other: &Copy) -> usize {
        self.vertices.len() + other.vertices.len() - self.intersection_size(other)
    }
}

/// Copy id within a [`CopyIndex`] (dense, `0..copies.len()`).
pub type CopyId = u32;

/// All copies of one pattern in one host, with lookup buckets.
#[derive(Debug, Clone)]
pub struct CopyIndex {
    host_n: u32,
    r: u32,
    aut_count: u64,
    copies: Vec<Copy>,
    by_vertex: Vec<Vec<CopyId>>,
    by_pair: BTreeMap<(u32, u32), Vec<CopyId>>,
}

impl CopyIndex {
    /// Copies in canonical (sorted) order.
    pub fn copies(&self) -> &[Copy] {
        &self.copies
    }

    /// Number of copies.
    pub fn copy_count(&self) -> u64 {
        self.copies.len() as u64
    }

    /// Pattern vertex count `r`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Host vertex count.
    pub fn host_vertex_count(&self) -> u32 {
        self.host_n
    }

    /// `|Aut(H)|`, cached from enumeration.
    pub fn aut_count(&self) -> u64 {
        self.aut_count
    }

    /// Ids of copies containing vertex `v` (sorted).
    pub fn copies_at(&self, v: u32) -> &[CopyId] {
        &self.by_vertex[v as usize]
    }

    /// Ids of copies containing both `u` and `v` (sorted); `u ≠ v`.
    pub fn copies_at_pair(&self, u: u32, v: u32) -> &[CopyId] {
        let key = (u.min(v), u.max(v));
        self.by_pair.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Nonempty pair buckets, i.e. every unordered host pair `{u, v}` lying
    /// inside at least one copy, in sorted order.
    pub fn pair_buckets(&self) -> impl Iterator<Item = (&(u32, u32), &Vec<CopyId>)> {
        self.by_pair.iter()
    }

    /// `D_w`: the number of copies whose vertex set contains every vertex of
    /// `w`. `w` must be nonempty with at most `r` distinct vertices; larger
    /// tuples cannot fit inside one copy.
    pub fn copies_through(&self, w: &[u32]) -> u64 {
        debug_assert!(!w.is_empty() && w.len() <= self.r as usize);
        match w.len() {
            1 => self.by_vertex[w[0] as usize].len() as u64,
            2 => self.copies_at_pair(w[0], w[1]).len() as u64,
            _ => {
                // Start from one pair bucket and filter by full containment.
                let bucket = self.copies_at_pair(w[0], w[1]);
                bucket
                    .iter()
                    .filter(|&&id| w[2..].iter().all(|&v| self.copies[id as usize].contains(v)))
                    .count() as u64
            }
        }
    }
}

/// `|Aut(H)|` by pruned permutation search. Patterns are capped at
/// [`MAX_PATTERN_VERTICES`] vertices; the census operations keep `r` far
/// smaller in practice.
pub fn automorphism_count(h: &Pattern) -> Result<u64> {
    if h.r() > MAX_PATTERN_VERTICES {
        return Err(Error::Capacity(format!(
            "automorphism search supports at most {MAX_PATTERN_VERTICES} pattern vertices, got {}",
            h.r()
        )));
    }
    let g = h.graph();
    let n = h.r() as usize;
    let mut image = vec![0u32; n + 1];
    let mut used = vec![false; n + 1];
    fn extend(g: &Graph, v: usize, image: &mut [u32], used: &mut [bool]) -> u64 {
        let n = g.vertex_count() as usize;
        if v > n {
            return 1;
        }
        let mut total = 0;
        for cand in 1..=n as u32 {
            if used[cand as usize] || g.degree(v as u32) != g.degree(cand) {
                continue;
            }
            // Adjacency must be preserved against every already-placed vertex.
            let consistent = (1..v)
                .all(|u| g.has_edge(u as u32, v as u32) == g.has_edge(image[u], cand));
            if consistent {
                image[v] = cand;
                used[cand as usize] = true;
                total += extend(g, v + 1, image, used);
                used[cand as usize] = false;
            }
        }
        total
    }
    Ok(extend(g, 1, &mut image, &mut used))
}

/// Enumerates every copy of `h` in `g` with the default copy cap.
pub fn enumerate_copies(h: &Pattern, g: &Graph) -> Result<CopyIndex> {
    enumerate_copies_capped(h, g, DEFAULT_COPY_CAP)
}

/// Enumerates every copy of `h` in `g`, failing once more than `cap`
/// distinct copies exist.
///
/// The search runs over injective homomorphisms in a connected pattern
/// order (degree-descending tie-break), deduplicating into subgraph copies.
/// The homomorphism total is checked against `copies · |Aut(H)|` — an exact
/// identity — before the index is built.
pub fn enumerate_copies_capped(h: &Pattern, g: &Graph, cap: usize) -> Result<CopyIndex> {
    let aut = automorphism_count(h)?;
    let order = search_order(h);
    let r = h.r() as usize;

    // earlier_neighbors[i] = positions j < i whose pattern vertex is
    // adjacent to order[i]; nonempty for i ≥ 1 because the order is connected.
    let mut earlier_neighbors: Vec<Vec<usize>> = vec![Vec::new(); r];
    for i in 1..r {
        for j in 0..i {
            if h.graph().has_edge(order[i], order[j]) {
                earlier_neighbors[i].push(j);
            }
        }
    }
    let pattern_edges: Vec<(u32, u32)> = h.graph().edges().collect();

    let mut set: BTreeSet<Copy> = BTreeSet::new();
    let mut injections: u64 = 0;
    let mut image = vec![0u32; r];
    let mut used = vec![false; g.vertex_count() as usize + 1];

    struct Ctx<'a> {
        g: &'a Graph,
        order: &'a [u32],
        earlier: &'a [Vec<usize>],
        pattern_edges: &'a [(u32, u32)],
        cap: usize,
    }
    fn place(
        ctx: &Ctx<'_>,
        pos: usize,
        image: &mut [u32],
        used: &mut [bool],
        set: &mut BTreeSet<Copy>,
        injections: &mut u64,
    ) -> Result<()> {
        let r = ctx.order.len();
        if pos == r {
            *injections += 1;
            let mut vertices: Vec<u32> = image.to_vec();
            vertices.sort_unstable();
            let mut edge_image: Vec<(u32, u32)> = ctx
                .pattern_edges
                .iter()
                .map(|&(a, b)| {
                    let ia = image[ctx.order.iter().position(|&o| o == a).unwrap()];
                    let ib = image[ctx.order.iter().position(|&o| o == b).unwrap()];
                    (ia.min(ib), ia.max(ib))
                })
                .collect();
            edge_image.sort_unstable();
            set.insert(Copy { vertices, edge_image });
            if set.len() > ctx.cap {
                return Err(Error::Capacity(format!(
                    "copy enumeration exceeded the copy cap of {} copies",
                    ctx.cap
                )));
            }
            return Ok(());
        }
        // Candidates: host neighbors of the image of one earlier pattern
        // neighbor, then filtered against the rest. Copies are not induced,
        // so only pattern edges are required.
        let first = ctx.earlier[pos][0];
        let rest = &ctx.earlier[pos][1..];
        let base = image[first];
        for &cand in ctx.g.neighbors(base) {
            if used[cand as usize] {
                continue;
            }
            if rest.iter().all(|&j| ctx.g.has_edge(image[j], cand)) {
                image[pos] = cand;
                used[cand as usize] = true;
                place(ctx, pos + 1, image, used, set, injections)?;
                used[cand as usize] = false;
            }
        }
        Ok(())
    }

    let ctx = Ctx { g, order: &order, earlier: &earlier_neighbors, pattern_edges: &pattern_edges, cap };
    for root in 1..=g.vertex_count() {
        image[0] = root;
        used[root as usize] = true;
        place(&ctx, 1, &mut image, &mut used, &mut set, &mut injections)?;
        used[root as usize] = false;
    }

    let copies: Vec<Copy> = set.into_iter().collect();
    debug_assert_eq!(injections, copies.len() as u64 * aut, "injections must be copies × |Aut|");

    let mut by_vertex: Vec<Vec<CopyId>> = vec![Vec::new(); g.vertex_count() as usize + 1];
    let mut by_pair: BTreeMap<(u32, u32), Vec<CopyId>> = BTreeMap::new();
    for (id, c) in copies.iter().enumerate() {
        let id = id as CopyId;
        for (i, &u) in c.vertices.iter().enumerate() {
            by_vertex[u as usize].push(id);
            for &v in &c.vertices[i + 1..] {
                by_pair.entry((u, v)).or_default().push(id);
            }
        }
    }

    Ok(CopyIndex {
        host_n: g.vertex_count(),
        r: h.r(),
        aut_count: aut,
        copies,
        by_vertex,
        by_pair,
    })
}

/// Connected search order over pattern vertices: start at a maximum-degree
/// vertex, then repeatedly append the highest-degree vertex adjacent to the
/// prefix (ties by ascending id). Pure pruning heuristic; no semantic effect.
fn search_order(h: &Pattern) -> Vec<u32> {
    let g = h.graph();
    let n = g.vertex_count();
    let mut order = Vec::with_capacity(n as usize);
    let mut placed = vec![false; n as usize + 1];
    let first = (1..=n).max_by_key(|&v| (g.degree(v), core::cmp::Reverse(v))).unwrap();
    order.push(first);
    placed[first as usize] = true;
    while order.len() < n as usize {
        let next = (1..=n)
            .filter(|&v| !placed[v as usize])
            .filter(|&v| order.iter().any(|&u| g.has_edge(u, v)))
            .max_by_key(|&v| (g.degree(v), core::cmp::Reverse(v)))
            .expect("pattern is connected");
        order.push(next);
        placed[next as usize] = true;
    }
    order
}
