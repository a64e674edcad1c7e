//! Hoeffding-style decomposition of the monochromatic-copy count.
//!
//! The centered count splits into contributions indexed by increasing
//! vertex tuples: for each tuple `w` of 2 ≤ k ≤ r host vertices,
//!
//! ```text
//! Ỹ_w = D_w · Σ_{p=2}^{k} (−1)^{k−p} Σ_{i₁<…<i_p ⊆ w} c^{p−r} · 1{equal colors}
//! Y_w = Ỹ_w − E[Ỹ_w]
//! ```
//!
//! where `D_w` counts the copies containing all of `w`. Summing `Ỹ_w` over
//! all tuples telescopes to `T` exactly, and grouping `Y_w` by the tuple's
//! last vertex (in an explicit vertex ordering) yields terms
//! `V_t = Σ_{w anchored at t} Y_w` with `Σ_t V_t = T − E[T]` and
//! `E[Y_w | colors of w except the anchor] = 0`: the `V_t` form a
//! martingale difference sequence. [`verify_decomposition`] and
//! [`verify_martingale`] check all three statements exactly in rational
//! arithmetic; [`estimate_ab`] measures the two quantities that control
//! the martingale CLT, `A = Σ_t E[(V_t/σ)⁴]` and `B = Var[Σ_t (V_t/σ)²]`,
//! by Monte Carlo.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// Builds that link std (tests, clippy) shadow the trait with inherent
// float methods and would flag this import; pure no_std builds need it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::census::VertexOrdering;
use crate::color::{sample_coloring, Coloring, SeedSpec};
use crate::embed::CopyIndex;
use crate::moments::{exact_variance, expected_t};
use crate::rat::{q_int, q_pow, to_f64, Q};
use crate::{color, Error, Result};

/// Default bound on the total martingale-check work `Σ_w c^k`.
pub const DEFAULT_MARTINGALE_WORK: u64 = 20_000_000;

/// A strictly increasing vertex tuple in the active ordering, with its
/// copy count `D_w` cached. Tuples with `D_w = 0` contribute zero to every
/// sum and are never materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncreasingTuple {
    /// Host vertices in ascending rank of the active ordering.
    vertices: Vec<u32>,
    /// The last (highest-rank) vertex.
    anchor: u32,
    /// `D_w`: copies whose vertex set contains the whole tuple.
    d: u64,
    /// Pattern size of the index the tuple was enumerated from.
    pattern_r: u32,
}

impl IncreasingTuple {
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn anchor(&self) -> u32 {
        self.anchor
    }

    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn d(&self) -> u64 {
        self.d
    }
}

/// Exact residuals of the two decomposition identities plus the number of
/// martingale-property violations; a passing check is all zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionCheck {
    /// `T(x) − Σ_w Ỹ_w(x)`.
    pub t_identity_residual: Q,
    /// `(T(x) − E[T]) − Σ_t V_t(x)`.
    pub z_identity_residual: Q,
    /// Nonzero conditional averages found by [`verify_martingale`].
    pub martingale_violations: u64,
}

/// Monte Carlo estimates of the martingale CLT statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct AbEstimate {
    /// `A = Σ_t E[(V_t/σ)⁴]`.
    pub a: f64,
    pub a_se: f64,
    /// `B = Var[Σ_t (V_t/σ)²]`.
    pub b: f64,
    pub b_se: f64,
    pub samples: u64,
}

/// All strictly increasing k-tuples with `D_w > 0`, ordered
/// lexicographically by rank, optionally restricted to one anchor.
///
/// Every such tuple lies inside some copy's vertex set, so enumeration
/// walks k-subsets of the distinct copy vertex sets rather than all
/// k-subsets of the host.
pub fn enumerate_tuples(
    idx: &CopyIndex,
    k: u32,
    anchor: Option<u32>,
    ordering: &VertexOrdering,
) -> Result<Vec<IncreasingTuple>> {
    if k < 2 || k > idx.r() {
        return Err(Error::Validation(format!(
            "tuple length must lie in 2..={}, got {k}",
            idx.r()
        )));
    }
    if ordering.vertex_count() != idx.host_vertex_count() {
        return Err(Error::Validation(format!(
            "ordering covers {} vertices but the host has {}",
            ordering.vertex_count(),
            idx.host_vertex_count()
        )));
    }
    let mut subsets: BTreeSet<Vec<u32>> = BTreeSet::new();
    for cp in idx.copies() {
        let verts = cp.vertices();
        let r = verts.len() as u32;
        for mask in 1u32..1 << r {
            if mask.count_ones() != k {
                continue;
            }
            let sub: Vec<u32> =
                (0..r).filter(|i| mask & (1 << i) != 0).map(|i| verts[i as usize]).collect();
            subsets.insert(sub);
        }
    }
    let mut out: Vec<IncreasingTuple> = Vec::new();
    for sub in subsets {
        let d = idx.copies_through(&sub);
        debug_assert!(d > 0, "subsets of copies always lie in at least one copy");
        let mut seq = sub;
        seq.sort_by_key(|&v| ordering.rank(v));
        let last = *seq.last().expect("k >= 2");
        if anchor.is_some_and(|t| t != last) {
            continue;
        }
        out.push(IncreasingTuple { vertices: seq, anchor: last, d, pattern_r: idx.r() });
    }
    out.sort_by_key(|w| w.vertices.iter().map(|&v| ordering.rank(v)).collect::<Vec<u32>>());
    Ok(out)
}

/// `C(k, p)` for the small arguments of the centering constant.
fn binom_small(k: u32, p: u32) -> i64 {
    let mut res: i64 = 1;
    for i in 1..=p.min(k - p) {
        res = res * (k - p.min(k - p) + i) as i64 / i as i64;
    }
    res
}

/// `E[Ỹ_w] / D_w = Σ_{p=2}^{k} (−1)^{k−p} C(k,p) c^{1−r}`.
fn centering_constant(k: u32, r: u32, c: u32) -> Q {
    let mut acc = q_int(0);
    for p in 2..=k {
        let sign = if (k - p).is_multiple_of(2) { 1 } else { -1 };
        acc += q_int(sign * binom_small(k, p));
    }
    acc * q_pow(c as u64, 1 - r as i64)
}

/// `Ỹ_w / D_w` from the colors of `w`'s vertices alone.
fn y_tilde_from_colors(r: u32, c: u32, cols: &[u32]) -> Q {
    let k = cols.len() as u32;
    let mut acc = q_int(0);
    for mask in 1u32..1 << k {
        let p = mask.count_ones();
        if p < 2 {
            continue;
        }
        let mut iter = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| cols[i as usize]);
        let first = iter.next().expect("p >= 2");
        if iter.all(|col| col == first) {
            let sign = if (k - p).is_multiple_of(2) { 1 } else { -1 };
            acc += q_int(sign) * q_pow(c as u64, p as i64 - r as i64);
        }
    }
    acc
}

fn tuple_colors(w: &IncreasingTuple, x: &Coloring) -> Vec<u32> {
    w.vertices.iter().map(|&v| x.color(v)).collect()
}

/// `Ỹ_w(x)`: the raw decomposition term.
pub fn y_tilde(w: &IncreasingTuple, x: &Coloring, c: u32) -> Q {
    if w.d == 0 {
        return q_int(0);
    }
    q_int(w.d as i64) * y_tilde_from_colors(w.pattern_r, c, &tuple_colors(w, x))
}

/// `Y_w(x) = Ỹ_w(x) − E[Ỹ_w]`: the centered decomposition term.
pub fn y_centered(w: &IncreasingTuple, x: &Coloring, c: u32) -> Q {
    if w.d == 0 {
        return q_int(0);
    }
    let cols = tuple_colors(w, x);
    q_int(w.d as i64)
        * (y_tilde_from_colors(w.pattern_r, c, &cols)
            - centering_constant(cols.len() as u32, w.pattern_r, c))
}

/// The unnormalized martingale increment `V_t(x) = Σ_{k} Σ_{w ∈ Λ_{k,t}} Y_w(x)`,
/// summing over tuples anchored at `t` in the given ordering. `Σ_t V_t`
/// recovers `T − E[T]` exactly; the normalized increment `V_t / σ` is a
/// floating-point view only, since `σ` is irrational in general.
pub fn u_term(idx: &CopyIndex, t: u32, x: &Coloring, c: u32, ordering: &VertexOrdering) -> Result<Q> {
    if t == 0 || t > idx.host_vertex_count() {
        return Err(Error::Validation(format!(
            "vertex {t} is outside the host (1..={})",
            idx.host_vertex_count()
        )));
    }
    let mut acc = q_int(0);
    for k in 2..=idx.r() {
        for w in enumerate_tuples(idx, k, Some(t), ordering)? {
            acc += y_centered(&w, x, c);
        }
    }
    Ok(acc)
}

/// Checks both decomposition identities on one coloring and runs the full
/// martingale check: `T(x) = Σ Ỹ_w(x)`, `T(x) − E[T] = Σ_t V_t(x)`, and
/// every conditional average of `Y_w` over its anchor's color is zero.
pub fn verify_decomposition(
    idx: &CopyIndex,
    c: u32,
    x: &Coloring,
    ordering: &VertexOrdering,
) -> Result<DecompositionCheck> {
    if x.color_count() != c {
        return Err(Error::Validation(format!(
            "coloring uses {} colors but the check is for c = {c}",
            x.color_count()
        )));
    }
    let t_count = color::monochromatic_count(idx, x)?;
    let mut sum_tilde = q_int(0);
    let mut sum_centered = q_int(0);
    for k in 2..=idx.r() {
        for w in enumerate_tuples(idx, k, None, ordering)? {
            sum_tilde += y_tilde(&w, x, c);
            sum_centered += y_centered(&w, x, c);
        }
    }
    Ok(DecompositionCheck {
        t_identity_residual: q_int(t_count as i64) - sum_tilde,
        z_identity_residual: (q_int(t_count as i64) - expected_t(idx, c)?) - sum_centered,
        martingale_violations: verify_martingale(idx, c, ordering)?,
    })
}

/// Counts violations of the martingale property under the default work
/// bound: for every tuple `w` and every coloring of `w` minus its anchor,
/// the average of `Y_w` over the anchor's `c` colors must be zero.
pub fn verify_martingale(idx: &CopyIndex, c: u32, ordering: &VertexOrdering) -> Result<u64> {
    verify_martingale_capped(idx, c, ordering, DEFAULT_MARTINGALE_WORK)
}

/// [`verify_martingale`] with an explicit bound on the total work `Σ_w c^k`.
pub fn verify_martingale_capped(
    idx: &CopyIndex,
    c: u32,
    ordering: &VertexOrdering,
    cap: u64,
) -> Result<u64> {
    if c < 2 {
        return Err(Error::Validation(format!("need at least 2 colors, got {c}")));
    }
    let mut tuples: Vec<IncreasingTuple> = Vec::new();
    for k in 2..=idx.r() {
        tuples.extend(enumerate_tuples(idx, k, None, ordering)?);
    }
    let mut work: u128 = 0;
    for w in &tuples {
        work += (c as u128).pow(w.k() as u32);
    }
    if work > cap as u128 {
        return Err(Error::Capacity(format!(
            "martingale check needs {work} evaluations, over the cap of {cap}"
        )));
    }
    let mut violations = 0u64;
    for w in &tuples {
        let k = w.k();
        let constant = q_int(w.d as i64) * centering_constant(k as u32, w.pattern_r, c);
        // Odometer over the colors of w minus its anchor.
        let mut cols = vec![1u32; k];
        loop {
            let mut avg = q_int(0);
            for color in 1..=c {
                cols[k - 1] = color;
                avg += q_int(w.d as i64) * y_tilde_from_colors(w.pattern_r, c, &cols)
                    - constant.clone();
            }
            if avg != q_int(0) {
                violations += 1;
            }
            let mut pos = 0;
            while pos < k - 1 && cols[pos] == c {
                cols[pos] = 1;
                pos += 1;
            }
            if pos == k - 1 {
                break;
            }
            cols[pos] += 1;
        }
    }
    Ok(violations)
}

/// `Y_w / D_w` in floating point, for the Monte Carlo estimators.
fn y_centered_f64(r: u32, c: u32, cols: &[u32], constant: f64) -> f64 {
    let k = cols.len() as u32;
    let mut acc = 0.0f64;
    for mask in 1u32..1 << k {
        let p = mask.count_ones();
        if p < 2 {
            continue;
        }
        let mut iter = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| cols[i as usize]);
        let first = iter.next().expect("p >= 2");
        if iter.all(|col| col == first) {
            let sign = if (k - p).is_multiple_of(2) { 1.0 } else { -1.0 };
            acc += sign * (c as f64).powi(p as i32 - r as i32);
        }
    }
    acc - constant
}

/// Jackknife standard error from leave-one-out estimates.
fn jackknife_se(loo: &[f64]) -> f64 {
    let m = loo.len() as f64;
    let mean = loo.iter().sum::<f64>() / m;
    let ss: f64 = loo.iter().map(|v| (v - mean) * (v - mean)).sum();
    ((m - 1.0) / m * ss).sqrt()
}

/// Monte Carlo estimates of `A = Σ_t E[(V_t/σ)⁴]` and
/// `B = Var[Σ_t (V_t/σ)²]` with jackknife standard errors, over colorings
/// drawn from streams `0..samples` of the master seed.
pub fn estimate_ab(
    idx: &CopyIndex,
    c: u32,
    samples: u64,
    seed: u64,
    ordering: &VertexOrdering,
) -> Result<AbEstimate> {
    if samples < 3 {
        return Err(Error::Validation(format!(
            "jackknife errors need at least 3 samples, got {samples}"
        )));
    }
    let variance = exact_variance(idx, c)?;
    if variance == q_int(0) {
        return Err(Error::UndefinedStatistic(
            "martingale statistics undefined: the variance is zero".to_owned(),
        ));
    }
    let sigma = to_f64(&variance).sqrt();
    let n = idx.host_vertex_count();
    // Tuples grouped by anchor, with per-tuple constants precomputed.
    let mut by_anchor: Vec<Vec<(f64, f64, Vec<u32>)>> = vec![Vec::new(); n as usize + 1];
    for k in 2..=idx.r() {
        let constant = to_f64(&centering_constant(k, idx.r(), c));
        for w in enumerate_tuples(idx, k, None, ordering)? {
            by_anchor[w.anchor as usize].push((w.d as f64, constant, w.vertices));
        }
    }
    let m = samples as usize;
    let mut s = vec![0.0f64; m]; // per-sample Σ_t (V_t/σ)⁴
    let mut q = vec![0.0f64; m]; // per-sample Σ_t (V_t/σ)²
    let mut cols: Vec<u32> = Vec::new();
    for (i, (si, qi)) in s.iter_mut().zip(q.iter_mut()).enumerate() {
        let x = sample_coloring(n, c, SeedSpec { master_seed: seed, stream_index: i as u64 })?;
        for tuples in &by_anchor {
            if tuples.is_empty() {
                continue;
            }
            let mut v = 0.0f64;
            for (d, constant, verts) in tuples {
                cols.clear();
                cols.extend(verts.iter().map(|&vx| x.color(vx)));
                v += d * y_centered_f64(idx.r(), c, &cols, *constant);
            }
            let u = v / sigma;
            *si += u * u * u * u;
            *qi += u * u;
        }
    }
    let s_total: f64 = s.iter().sum();
    let a = s_total / m as f64;
    let a_loo: Vec<f64> = s.iter().map(|si| (s_total - si) / (m as f64 - 1.0)).collect();
    let q1: f64 = q.iter().sum();
    let q2: f64 = q.iter().map(|v| v * v).sum();
    let b = (q2 - q1 * q1 / m as f64) / (m as f64 - 1.0);
    let b_loo: Vec<f64> = q
        .iter()
        .map(|qi| {
            let rest1 = q1 - qi;
            let rest2 = q2 - qi * qi;
            (rest2 - rest1 * rest1 / (m as f64 - 1.0)) / (m as f64 - 2.0)
        })
        .collect();
    Ok(AbEstimate { a, a_se: jackknife_se(&a_loo), b, b_se: jackknife_se(&b_loo), samples })
}
