//! Uniform random colorings and the monochromatic-copy statistic.
//!
//! Colors are sampled by a counter-based pseudorandom function keyed on
//! `(master_seed, stream_index, vertex)` rather than by a sequential
//! generator, so parallel and serial runs produce bit-identical colorings:
//! any worker can evaluate any vertex of any stream independently. The
//! statistic `T` counts copies whose vertices all share one color; its
//! centered per-copy indicator `1{monochromatic} − c^{1−r}` is exact, which
//! the moment and decomposition identities downstream rely on.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::vec::Vec;

use crate::embed::{Copy, CopyIndex};
use crate::rat::{q_int, q_pow, Q};
use crate::{Error, Result};

/// Weyl increment of splitmix64; spaces counters before finalizing.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream index reserved for edge sampling in generated random hosts.
/// Coloring streams are small sample indices, so the two never collide.
pub const STREAM_ER_EDGES: u64 = 0xE7E5_65F3_9D0A_8B11;

/// splitmix64 finalizer: a bijective avalanche mix on 64-bit words.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless PRF word for `(master_seed, stream, counter)`.
///
/// Each argument passes through its own finalizer layer, so distinct keys
/// decorrelate even when they differ in a single bit.
pub fn keyed_word(master_seed: u64, stream: u64, counter: u64) -> u64 {
    let k1 = mix(master_seed.wrapping_add(GOLDEN_GAMMA));
    let k2 = mix(k1 ^ stream.wrapping_mul(GOLDEN_GAMMA).wrapping_add(0x94D0_49BB_1331_11EB));
    mix(k2.wrapping_add(counter.wrapping_mul(GOLDEN_GAMMA)))
}

/// Identifies one coloring stream: the pair determines the coloring
/// bit-exactly, and distinct stream indices give independent colorings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

/// An assignment of each host vertex to a color in `1..=c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    c: u32,
}

impl Coloring {
    /// Wraps explicit colors, enforcing `c ≥ 2` and entries in `1..=c`.
    pub fn new(colors: Vec<u32>, c: u32) -> Result<Coloring> {
        if c < 2 {
            return Err(Error::Validation(format!("need at least 2 colors, got {c}")));
        }
        if let Some(&bad) = colors.iter().find(|&&x| x < 1 || x > c) {
            return Err(Error::Validation(format!("color {bad} outside 1..={c}")));
        }
        Ok(Coloring { colors, c })
    }

    /// Color of vertex `v` (1-based).
    pub fn color(&self, v: u32) -> u32 {
        self.colors[v as usize - 1]
    }

    /// Number of colored vertices.
    pub fn vertex_count(&self) -> u32 {
        self.colors.len() as u32
    }

    /// The color count `c`.
    pub fn color_count(&self) -> u32 {
        self.c
    }

    /// All colors, indexed by vertex − 1.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }
}

/// Samples an i.i.d. uniform coloring of `n` vertices with `c` colors.
///
/// Per vertex, PRF words are drawn at counters `attempt·2^40 + vertex` and
/// rejected while they fall in the partial residue block at the top of the
/// 64-bit range, making each color exactly equally likely.
pub fn sample_coloring(n: u32, c: u32, seed: SeedSpec) -> Result<Coloring> {
    if c < 2 {
        return Err(Error::Validation(format!("need at least 2 colors, got {c}")));
    }
    let span = 1u128 << 64;
    let limit = span - span % c as u128;
    let mut colors = Vec::with_capacity(n as usize);
    for v in 1..=n as u64 {
        let mut attempt = 0u64;
        let word = loop {
            let w = keyed_word(seed.master_seed, seed.stream_index, (attempt << 40) | v);
            if (w as u128) < limit {
                break w;
            }
            attempt += 1;
        };
        colors.push((word % c as u64) as u32 + 1);
    }
    Ok(Coloring { colors, c })
}

/// Whether every vertex of the copy has the same color under `x`.
pub fn is_monochromatic(copy: &Copy, x: &Coloring) -> bool {
    let first = x.color(copy.vertices()[0]);
    copy.vertices()[1..].iter().all(|&v| x.color(v) == first)
}

/// `T`: the number of monochromatic copies under the coloring `x`.
pub fn monochromatic_count(idx: &CopyIndex, x: &Coloring) -> Result<u64> {
    if x.vertex_count() != idx.host_vertex_count() {
        return Err(Error::Validation(format!(
            "coloring has {} vertices but host has {}",
            x.vertex_count(),
            idx.host_vertex_count()
        )));
    }
    Ok(idx.copies().iter().filter(|cp| is_monochromatic(cp, x)).count() as u64)
}

/// The centered indicator of one copy: `1 − c^{1−r}` if the copy is
/// monochromatic under `x`, else `−c^{1−r}`, as an exact rational. Summing
/// these over all copies and adding back `c^{1−r}` each recovers `T`.
pub fn centered_indicator(copy: &Copy, x: &Coloring, c: u32) -> Q {
    let expectation = q_pow(c as u64, 1 - copy.vertices().len() as i64);
    if is_monochromatic(copy, x) {
        q_int(1) - expectation
    } else {
        -expectation
    }
}

/// Enumerates all `c^n` colorings of `n` vertices in lexicographic order.
/// Only intended for exhaustive verification on small hosts.
pub fn all_colorings(n: u32, c: u32) -> Result<impl Iterator<Item = Coloring>> {
    if c < 2 {
        return Err(Error::Validation("need at least 2 colors".to_owned()));
    }
    let total = (c as u128).checked_pow(n).filter(|&t| t <= 1 << 24).ok_or_else(|| {
        Error::Capacity(format!("c^n colorings exceed the exhaustive-enumeration cap (n={n}, c={c})"))
    })?;
    Ok((0..total as u64).map(move |code| {
        let mut digits = Vec::with_capacity(n as usize);
        let mut rest = code;
        for _ in 0..n {
            digits.push((rest % c as u64) as u32 + 1);
            rest /= c as u64;
        }
        Coloring { colors: digits, c }
    }))
}
