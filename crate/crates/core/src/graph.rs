//! Host- and pattern-graph representation, generators, and the edge-list
//! text format.
//!
//! Graphs are simple and undirected with 1-based vertex ids `1..=n`.
//! Instances are immutable after construction, so they can be shared across
//! threads freely. The edge-list format and the generator spec strings are
//! the only interchange formats; both are plain strings, parsed and rendered
//! here without any IO.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::color;
use crate::{Error, Result};

/// Simple undirected graph with vertices `1..=vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    /// Edges as ordered pairs `(u, v)` with `u < v`, deduplicated.
    edges: BTreeSet<(u32, u32)>,
    /// Sorted neighbor lists, indexed by vertex id (slot 0 unused).
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge iterator, validating simplicity.
    ///
    /// Duplicate edges collapse (set semantics, either orientation);
    /// self-loops and out-of-range endpoints are rejected.
    pub fn new(n: u32, edge_iter: impl IntoIterator<Item = (u32, u32)>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::Validation("graph must have at least one vertex".to_owned()));
        }
        let mut edges = BTreeSet::new();
        for (a, b) in edge_iter {
            if a == b {
                return Err(Error::Validation(format!("self-loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::Validation(format!(
                    "edge ({a}, {b}) has an endpoint outside 1..={n}"
                )));
            }
            edges.insert((a.min(b), a.max(b)));
        }
        let mut adj = vec![Vec::new(); n as usize + 1];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    /// Whether `{u, v}` is an edge. Symmetric; false for out-of-range ids.
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n || u == v {
            return false;
        }
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Degree of `v`.
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// True iff the graph has exactly one connected component.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n as usize + 1];
        let mut stack = vec![1u32];
        seen[1] = true;
        let mut reached = 1u32;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.n
    }

    /// Renders the graph in the edge-list format. The `n=` header is always
    /// emitted so isolated vertices survive a round trip.
    pub fn render_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list format:
///
/// * optional first meaningful line `n=<int>` declaring the vertex count;
/// * each following meaningful line `<u> <v>` with 1-based ids separated by
///   whitespace;
/// * `#` starts a comment running to end of line; blank lines are ignored.
///
/// Without a header, the vertex count is the largest id mentioned.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared_n: Option<u32> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut max_id = 0u32;
    let mut first_meaningful = true;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if first_meaningful {
            first_meaningful = false;
            if let Some(rest) = line.strip_prefix("n=") {
                declared_n = Some(rest.trim().parse::<u32>().map_err(|_| {
                    Error::Parse(format!("line {line_no}: invalid vertex count {rest:?}"))
                })?);
                continue;
            }
        }
        let mut it = line.split_whitespace();
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(Error::Parse(format!(
                    "line {line_no}: expected two vertex ids, got {line:?}"
                )))
            }
        };
        let u: u32 = u
            .parse()
            .map_err(|_| Error::Parse(format!("line {line_no}: invalid vertex id {u:?}")))?;
        let v: u32 = v
            .parse()
            .map_err(|_| Error::Parse(format!("line {line_no}: invalid vertex id {v:?}")))?;
        if u == v {
            return Err(Error::Validation(format!("line {line_no}: self-loop at vertex {u}")));
        }
        if u == 0 || v == 0 {
            return Err(Error::Validation(format!("line {line_no}: vertex ids are 1-based")));
        }
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }

    let n = match declared_n {
        Some(n) => {
            if max_id > n {
                return Err(Error::Validation(format!(
                    "edge mentions vertex {max_id} but header declares n={n}"
                )));
            }
            n
        }
        None => max_id,
    };
    Graph::new(n, edges)
}

/// Deterministic graph families plus the seeded Erdős–Rényi model.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// Path on `k ≥ 1` vertices (`k − 1` edges).
    Path(u32),
    /// Cycle on `k ≥ 3` vertices.
    Cycle(u32),
    /// Star: center vertex 1 plus `leaves ≥ 1` leaves.
    Star(u32),
    /// Complete graph on `k ≥ 1` vertices.
    Complete(u32),
    /// Complete bipartite graph with sides of size `a ≥ 1` and `b ≥ 1`.
    CompleteBipartite(u32, u32),
    /// `m ≥ 1` vertex-disjoint copies of the inner family.
    DisjointUnion(Box<GeneratorSpec>, u32),
    /// G(n, p) with each pair decided independently by the seeded stream,
    /// in lexicographic pair order.
    ErdosRenyi { n: u32, p: f64, seed: u64 },
}

/// Parses a generator spec string: `path:<k>`, `cycle:<k>`, `star:<leaves>`,
/// `complete:<k>`, `kbipartite:<a>:<b>`, `union:<spec>x<m>`,
/// `er:<n>:<p>:<seed>`. For `union`, the multiplicity is taken after the
/// last `x`, so inner specs may themselves be unions.
pub fn parse_spec(spec: &str) -> Result<GeneratorSpec> {
    fn int(field: &str, whole: &str) -> Result<u32> {
        field
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("invalid integer {field:?} in generator spec {whole:?}")))
    }

    if let Some(rest) = spec.strip_prefix("union:") {
        let (inner, mult) = rest.rsplit_once('x').ok_or_else(|| {
            Error::Parse(format!("union spec {spec:?} must look like union:<spec>x<m>"))
        })?;
        let m = int(mult, spec)?;
        return Ok(GeneratorSpec::DisjointUnion(Box::new(parse_spec(inner)?), m));
    }
    let (family, args) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("generator spec {spec:?} has no parameters")))?;
    match family {
        "path" => Ok(GeneratorSpec::Path(int(args, spec)?)),
        "cycle" => Ok(GeneratorSpec::Cycle(int(args, spec)?)),
        "star" => Ok(GeneratorSpec::Star(int(args, spec)?)),
        "complete" => Ok(GeneratorSpec::Complete(int(args, spec)?)),
        "kbipartite" => {
            let (a, b) = args.split_once(':').ok_or_else(|| {
                Error::Parse(format!("kbipartite spec {spec:?} must look like kbipartite:<a>:<b>"))
            })?;
            Ok(GeneratorSpec::CompleteBipartite(int(a, spec)?, int(b, spec)?))
        }
        "er" => {
            let mut parts = args.split(':');
            let (n, p, seed) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
                (Some(n), Some(p), Some(seed), None) => (n, p, seed),
                _ => {
                    return Err(Error::Parse(format!(
                        "er spec {spec:?} must look like er:<n>:<p>:<seed>"
                    )))
                }
            };
            let p: f64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("invalid probability {p:?} in {spec:?}")))?;
            let seed: u64 = seed
                .parse()
                .map_err(|_| Error::Parse(format!("invalid seed {seed:?} in {spec:?}")))?;
            Ok(GeneratorSpec::ErdosRenyi { n: int(n, spec)?, p, seed })
        }
        other => Err(Error::Parse(format!("unknown generator family {other:?}"))),
    }
}

/// Builds the graph described by `spec`. Deterministic for the deterministic
/// families; for Erdős–Rényi, deterministic given the seed.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    match *spec {
        GeneratorSpec::Path(k) => {
            require(k >= 1, "path needs at least 1 vertex")?;
            Graph::new(k, (1..k).map(|i| (i, i + 1)))
        }
        GeneratorSpec::Cycle(k) => {
            require(k >= 3, "cycle needs at least 3 vertices")?;
            Graph::new(k, (1..k).map(|i| (i, i + 1)).chain([(k, 1)]))
        }
        GeneratorSpec::Star(leaves) => {
            require(leaves >= 1, "star needs at least 1 leaf")?;
            Graph::new(leaves + 1, (2..=leaves + 1).map(|v| (1, v)))
        }
        GeneratorSpec::Complete(k) => {
            require(k >= 1, "complete graph needs at least 1 vertex")?;
            Graph::new(k, (1..=k).flat_map(|u| (u + 1..=k).map(move |v| (u, v))))
        }
        GeneratorSpec::CompleteBipartite(a, b) => {
            require(a >= 1 && b >= 1, "kbipartite needs both sides nonempty")?;
            Graph::new(a + b, (1..=a).flat_map(move |u| (a + 1..=a + b).map(move |v| (u, v))))
        }
        GeneratorSpec::DisjointUnion(ref inner, m) => {
            require(m >= 1, "union needs at least 1 copy")?;
            let base = generate(inner)?;
            let n = base.vertex_count();
            let total = n
                .checked_mul(m)
                .ok_or_else(|| Error::Capacity("disjoint union exceeds u32 vertex ids".to_owned()))?;
            let mut edges = Vec::with_capacity(base.edge_count() * m as usize);
            for i in 0..m {
                let off = i * n;
                edges.extend(base.edges().map(|(u, v)| (u + off, v + off)));
            }
            Graph::new(total, edges)
        }
        GeneratorSpec::ErdosRenyi { n, p, seed } => {
            require(n >= 1, "er needs at least 1 vertex")?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Validation(format!("er probability {p} outside [0, 1]")));
            }
            // Each pair is decided by one word of the keyed stream, indexed
            // by the pair's position in lexicographic order; the graph is a
            // pure function of (n, p, seed).
            const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;
            let threshold = (p * TWO_POW_64) as u128;
            let mut edges = Vec::new();
            let mut counter = 0u64;
            for u in 1..=n {
                for v in u + 1..=n {
                    let word = color::keyed_word(seed, color::STREAM_ER_EDGES, counter);
                    if (word as u128) < threshold {
                        edges.push((u, v));
                    }
                    counter += 1;
                }
            }
            Graph::new(n, edges)
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(msg.to_owned()))
    }
}
