//! Join census: 2-shared tuples, good joins, per-vertex ξ counts, the
//! ξ-descending vertex ordering, and the ordering-dependent functional Υ.
//!
//! A *k-join* is an ordered k-tuple of copies (repetition allowed). It is
//! *2-shared* when at least two host vertices lie in every copy. A quadruple
//! is a *good join* when
//!
//! 1. dropping any one copy loses at most `r − 2` vertices from the union
//!    of all four, and
//! 2. the union has at most `min` over the three pairings of
//!    `|V(H_a ∪ H_b)| + |V(H_c ∪ H_d)| − 2` vertices.
//!
//! Together these force every copy to overlap the rest in at least two
//! vertices, which bounds the union by `4r − 4` and keeps good joins
//! connected — the facts the enumerators exploit. All counts are over
//! ordered tuples with repetition.
//!
//! Because a copy is monochromatic exactly when its vertex set is, every
//! census (and moment) computation collapses copies onto their distinct
//! vertex sets with multiplicities; the multiplicities re-expand counts to
//! copy tuples. On hosts whose set space is *uniform complete* (every
//! r-subset of the host realized with equal multiplicity — any pattern on a
//! complete host), good-quadruple scans further collapse to one windowed
//! enumeration per union size scaled by binomial coefficients, which is
//! what makes exact fourth moments on hosts like complete(18) tractable.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::embed::{Copy, CopyIndex};
use crate::{Error, Result};

/// Default cap on visited supports in the general good-join scan.
pub const DEFAULT_SUPPORT_CAP: u64 = 10_000_000;

/// Largest pattern admitted by [`upsilon`] (tuple space grows as `n^r`).
pub const MAX_UPSILON_PATTERN: u32 = 6;

/// Iteration budget for the uniform-complete fast path; beyond it the scan
/// falls back to general support enumeration.
const FAST_PATH_BUDGET: u128 = 200_000_000;

/// Cap on anchored tuple-pair evaluations inside [`upsilon`].
const UPSILON_PAIR_CAP: u128 = 400_000_000;

/// Census totals for one `(H, G)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    /// Ordered 2-shared pairs (diagonal included).
    pub pair2_tuples: u128,
    /// Ordered 2-shared quadruples.
    pub q4_tuples: u128,
    /// Ordered good-join quadruples.
    pub good_tuples: u128,
    /// ξ per host vertex (index `v − 1`).
    pub xi: Vec<u128>,
    /// Υ under the ordering the report was built with.
    pub upsilon: u128,
}

/// Whether at least two host vertices lie in every copy of the tuple.
pub fn is_2shared(copies: &[&Copy]) -> Result<bool> {
    if copies.len() < 2 {
        return Err(Error::Validation("2-shared test needs at least 2 copies".to_owned()));
    }
    let mut common: Vec<u32> = copies[0].vertices().to_vec();
    for cp in &copies[1..] {
        common.retain(|&v| cp.contains(v));
        if common.len() < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the quadruple is a good join (both conditions above).
pub fn is_good_join(q: [&Copy; 4]) -> Result<bool> {
    let r = q[0].vertices().len();
    if r < 3 {
        return Err(Error::Validation("good joins need patterns with at least 3 vertices".to_owned()));
    }
    if q.iter().any(|cp| cp.vertices().len() != r) {
        return Err(Error::Validation("good-join test needs copies of one pattern".to_owned()));
    }
    let slots = [q[0].vertices(), q[1].vertices(), q[2].vertices(), q[3].vertices()];
    Ok(good_slots(&slots, r as u32))
}

/// Outcome of classifying a quadruple of copy vertex sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinClass {
    /// At least two host vertices lie in all four copies.
    TwoShared,
    /// A good join that is not 2-shared.
    Good,
    /// The private-vertex condition fails for some copy.
    FailsGood,
    /// Every copy is covered, but some pairing leaves the union too large.
    FailsVgood,
}

/// Classifies four copy vertex sets by join quality. The conditions depend
/// only on the vertex sets, so the input is four lists of distinct host
/// vertices of a common size `r >= 3`; order within a list does not matter.
/// When both conditions fail, the private-vertex condition is reported.
pub fn classify_join_sets(lists: [&[u32]; 4]) -> Result<JoinClass> {
    let r = lists[0].len();
    if r < 3 {
        return Err(Error::Validation("join classification needs at least 3 vertices per copy".to_owned()));
    }
    let mut sorted: [Vec<u32>; 4] = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for (slot, list) in sorted.iter_mut().zip(lists.iter()) {
        if list.len() != r {
            return Err(Error::Validation("join classification needs four vertex sets of one size".to_owned()));
        }
        let mut s = list.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != r {
            return Err(Error::Validation("copy vertex lists must not repeat a vertex".to_owned()));
        }
        *slot = s;
    }
    let slots = [sorted[0].as_slice(), sorted[1].as_slice(), sorted[2].as_slice(), sorted[3].as_slice()];
    let mut common = sorted[0].clone();
    for s in &slots[1..] {
        common.retain(|&v| s.binary_search(&v).is_ok());
    }
    if common.len() >= 2 {
        return Ok(JoinClass::TwoShared);
    }
    let u = union_of(&slots[..]).len();
    for i in 0..4 {
        let others: Vec<&[u32]> = (0..4).filter(|&j| j != i).map(|j| slots[j]).collect();
        if u - union_of(&others).len() > r - 2 {
            return Ok(JoinClass::FailsGood);
        }
    }
    let p = |a: usize, b: usize| union2_size(slots[a], slots[b]);
    let best = (p(0, 1) + p(2, 3)).min(p(0, 2) + p(1, 3)).min(p(0, 3) + p(1, 2));
    if u + 2 > best {
        return Ok(JoinClass::FailsVgood);
    }
    Ok(JoinClass::Good)
}

/// Merge-count of `|a ∪ b|` for sorted slices.
fn union2_size(a: &[u32], b: &[u32]) -> usize {
    a.len() + b.len() - intersect_count(a, b)
}

/// Merge-count of `|a ∩ b|` for sorted slices.
pub(crate) fn intersect_count(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
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

/// Sorted union of a family of sorted slices.
pub(crate) fn union_of(sets: &[&[u32]]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for s in sets {
        out.extend_from_slice(s);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The good-join predicate on four sorted vertex sets.
pub(crate) fn good_slots(slots: &[&[u32]; 4], r: u32) -> bool {
    let all = union_of(&slots[..]);
    let u = all.len();
    // Condition 1: each copy's private vertices number at most r − 2.
    for i in 0..4 {
        let others: Vec<&[u32]> = (0..4).filter(|&j| j != i).map(|j| slots[j]).collect();
        let rest = union_of(&others).len();
        if u - rest > r as usize - 2 {
            return false;
        }
    }
    // Condition 2: the union fits under the best pairing.
    let p = |a: usize, b: usize| union2_size(slots[a], slots[b]);
    let best = (p(0, 1) + p(2, 3)).min(p(0, 2) + p(1, 3)).min(p(0, 3) + p(1, 2));
    u + 2 <= best
}

/// Distinct copy vertex sets with multiplicities. A copy is monochromatic
/// iff its vertex set is, so joins, covariances, and mixed moments all
/// reduce to this space; `mult[i]` copies share `sets[i]`.
pub(crate) struct SetSpace {
    pub r: usize,
    pub host_n: u32,
    pub sets: Vec<Vec<u32>>,
    pub mult: Vec<u64>,
    by_pair: BTreeMap<(u32, u32), Vec<u32>>,
}

impl SetSpace {
    pub fn build(idx: &CopyIndex) -> SetSpace {
        let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for cp in idx.copies() {
            *counts.entry(cp.vertices().to_vec()).or_default() += 1;
        }
        let mut sets = Vec::with_capacity(counts.len());
        let mut mult = Vec::with_capacity(counts.len());
        for (s, m) in counts {
            sets.push(s);
            mult.push(m);
        }
        let mut by_pair: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        for (id, s) in sets.iter().enumerate() {
            for (i, &u) in s.iter().enumerate() {
                for &v in &s[i + 1..] {
                    by_pair.entry((u, v)).or_default().push(id as u32);
                }
            }
        }
        SetSpace { r: idx.r() as usize, host_n: idx.host_vertex_count(), sets, mult, by_pair }
    }

    /// Calls `f(a, b, intersection)` once per ordered pair of set ids whose
    /// sets share at least two vertices (diagonal included).
    pub fn two_shared_scan(&self, mut f: impl FnMut(usize, usize, &[u32])) {
        let mut stamp: Vec<u32> = vec![u32::MAX; self.sets.len()];
        let mut inter: Vec<u32> = Vec::new();
        for a in 0..self.sets.len() {
            let sa = &self.sets[a];
            for (i, &u) in sa.iter().enumerate() {
                for &v in &sa[i + 1..] {
                    if let Some(bucket) = self.by_pair.get(&(u, v)) {
                        for &b in bucket {
                            if stamp[b as usize] == a as u32 {
                                continue;
                            }
                            stamp[b as usize] = a as u32;
                            let sb = &self.sets[b as usize];
                            inter.clear();
                            inter.extend(sa.iter().filter(|&&x| sb.binary_search(&x).is_ok()));
                            debug_assert!(inter.len() >= 2);
                            f(a, b as usize, &inter);
                        }
                    }
                }
            }
        }
    }

    /// `Some(m)` when the space is every r-subset of the host with one
    /// common multiplicity m — true for any pattern on a complete host.
    pub fn uniform_complete_multiplicity(&self) -> Option<u64> {
        let expected = binom_u128(self.host_n as u64, self.r as u64)?;
        if self.sets.len() as u128 != expected || self.sets.is_empty() {
            return None;
        }
        let m = self.mult[0];
        self.mult.iter().all(|&x| x == m).then_some(m)
    }
}

/// Exact `C(n, k)` in 128 bits; `None` on overflow.
pub(crate) fn binom_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut res: u128 = 1;
    for i in 1..=k {
        res = res.checked_mul((n - k + i) as u128)? / i as u128;
    }
    Some(res)
}

fn capacity_overflow() -> Error {
    Error::Capacity("census count exceeds the 128-bit accumulator".to_owned())
}

/// Number of ordered k-tuples of copies (repetition allowed) sharing at
/// least two common vertices, for k ∈ {2, 4}.
///
/// Runs over vertex-pair buckets: for each host pair `{u, v}` it counts the
/// tuples whose common intersection has `u, v` as its two smallest
/// elements, by sieving out tuples whose common intersection meets a
/// smaller vertex. Each qualifying tuple is counted at exactly one pair.
pub fn count_2shared_tuples(idx: &CopyIndex, k: u32) -> Result<u128> {
    if k != 2 && k != 4 {
        return Err(Error::Validation(format!("2-shared tuple counting supports k ∈ {{2, 4}}, got {k}")));
    }
    let mut total: u128 = 0;
    for (&(u, v), bucket) in idx.pair_buckets() {
        // Vertices smaller than v (other than u) occurring in this bucket;
        // tuples whose common intersection meets one belong to an earlier pair.
        let mut forbidden: Vec<u32> = Vec::new();
        for &id in bucket {
            for &w in idx.copies()[id as usize].vertices() {
                if w < v && w != u && !forbidden.contains(&w) {
                    forbidden.push(w);
                }
            }
        }
        forbidden.sort_unstable();
        let ids: Vec<u32> = bucket.clone();
        let count = tuples_avoiding(idx, &ids, &forbidden, k)?;
        total = total.checked_add(u128::try_from(count).map_err(|_| capacity_overflow())?).ok_or_else(capacity_overflow)?;
    }
    Ok(total)
}

/// k-tuples from `bucket` whose common intersection avoids every vertex of
/// `forbidden`, by signed sieve over the forbidden vertices.
fn tuples_avoiding(idx: &CopyIndex, bucket: &[u32], forbidden: &[u32], k: u32) -> Result<i128> {
    let mut res: i128 = (bucket.len() as i128).checked_pow(k).ok_or_else(capacity_overflow)?;
    for (i, &w) in forbidden.iter().enumerate() {
        let sub: Vec<u32> = bucket
            .iter()
            .copied()
            .filter(|&id| idx.copies()[id as usize].contains(w))
            .collect();
        if !sub.is_empty() {
            res = res.checked_sub(tuples_avoiding(idx, &sub, &forbidden[..i], k)?).ok_or_else(capacity_overflow)?;
        }
    }
    Ok(res)
}

/// Ordered good-join quadruples under the default support cap.
pub fn count_good_tuples(idx: &CopyIndex) -> Result<u128> {
    count_good_tuples_capped(idx, DEFAULT_SUPPORT_CAP)
}

/// Ordered good-join quadruples; general-path support visits beyond `cap`
/// raise a capacity error.
pub fn count_good_tuples_capped(idx: &CopyIndex, cap: u64) -> Result<u128> {
    let mut total: u128 = 0;
    let mut overflow = false;
    scan_good_quadruples(idx, cap, |_slots, mult| {
        match total.checked_add(mult) {
            Some(t) => total = t,
            None => overflow = true,
        }
    })?;
    if overflow {
        return Err(capacity_overflow());
    }
    Ok(total)
}

/// Visits every good-join quadruple of copies, aggregated: `visit(slots,
/// mult)` receives four sorted vertex sets (a multiset of distinct sets,
/// possibly relabeled into a canonical window on the fast path) and the
/// number of ordered copy quadruples realizing that multiset. The sum of
/// `mult` over all visits is the ordered good-tuple count; any quantity
/// depending only on vertex-set overlap structure (union sizes, overlap
/// components) can be summed exactly through this interface.
pub(crate) fn scan_good_quadruples(
    idx: &CopyIndex,
    cap: u64,
    mut visit: impl FnMut(&[&[u32]; 4], u128),
) -> Result<()> {
    if idx.r() < 3 {
        return Err(Error::Validation("good joins need patterns with at least 3 vertices".to_owned()));
    }
    let space = SetSpace::build(idx);
    if space.sets.is_empty() {
        return Ok(());
    }
    if let Some(m) = space.uniform_complete_multiplicity() {
        if fast_path_budget(&space).is_some_and(|b| b <= FAST_PATH_BUDGET) {
            return scan_fast(&space, m, &mut visit);
        }
    }
    scan_general(&space, cap, &mut visit)
}

/// Iteration count of the fast path, or `None` on overflow.
fn fast_path_budget(space: &SetSpace) -> Option<u128> {
    let r = space.r as u64;
    let u_max = (4 * r - 4).min(space.host_n as u64);
    let mut total: u128 = 0;
    for u in r..=u_max {
        let k = u64::try_from(binom_u128(u, r)?).ok()?;
        total = total.checked_add(binom_u128(k + 3, 4)?)?;
    }
    Some(total)
}

/// Mask form of the good-join predicate (fast path).
fn good_masks(ms: [u64; 4], r: u32) -> bool {
    let all = ms[0] | ms[1] | ms[2] | ms[3];
    let u = all.count_ones();
    for i in 0..4 {
        let mut others = 0u64;
        for (j, &m) in ms.iter().enumerate() {
            if j != i {
                others |= m;
            }
        }
        if u - others.count_ones() > r - 2 {
            return false;
        }
    }
    let p = |a: usize, b: usize| (ms[a] | ms[b]).count_ones();
    let best = (p(0, 1) + p(2, 3)).min(p(0, 2) + p(1, 3)).min(p(0, 3) + p(1, 2));
    u + 2 <= best
}

/// Uniform-complete scan: every quadruple with union size `u` is some
/// relabeling of a spanning quadruple of r-subsets of `[u]`, so each window
/// is enumerated once and scaled by `C(n, u)` and the common multiplicity.
fn scan_fast(space: &SetSpace, m: u64, visit: &mut impl FnMut(&[&[u32]; 4], u128)) -> Result<()> {
    let r = space.r as u64;
    let n = space.host_n as u64;
    let u_max = (4 * r - 4).min(n);
    let m4 = (m as u128).pow(4);
    for u in r..=u_max {
        let scale = binom_u128(n, u)
            .and_then(|b| b.checked_mul(m4))
            .ok_or_else(capacity_overflow)?;
        // All r-subsets of [u], as masks plus 1-based vertex lists.
        let mut subs: Vec<(u64, Vec<u32>)> = Vec::new();
        let mut pick: Vec<u32> = Vec::new();
        gen_subsets(u as u32, space.r as u32, 1, &mut pick, &mut subs);
        let full: u64 = (1 << u) - 1;
        let kk = subs.len();
        for i in 0..kk {
            for j in i..kk {
                let mij = subs[i].0 | subs[j].0;
                for k in j..kk {
                    let mijk = mij | subs[k].0;
                    for l in k..kk {
                        let masks = [subs[i].0, subs[j].0, subs[k].0, subs[l].0];
                        if mijk | subs[l].0 != full || !good_masks(masks, space.r as u32) {
                            continue;
                        }
                        let orderings = orderings_of_multiset([i, j, k, l]);
                        let mult = scale.checked_mul(orderings as u128).ok_or_else(capacity_overflow)?;
                        let slots = [
                            subs[i].1.as_slice(),
                            subs[j].1.as_slice(),
                            subs[k].1.as_slice(),
                            subs[l].1.as_slice(),
                        ];
                        visit(&slots, mult);
                    }
                }
            }
        }
    }
    Ok(())
}

/// All size-`r` subsets of `{1..u}` with their bitmasks.
fn gen_subsets(u: u32, r: u32, from: u32, pick: &mut Vec<u32>, out: &mut Vec<(u64, Vec<u32>)>) {
    if pick.len() == r as usize {
        let mask = pick.iter().fold(0u64, |m, &v| m | 1 << (v - 1));
        out.push((mask, pick.clone()));
        return;
    }
    for v in from..=u {
        pick.push(v);
        gen_subsets(u, r, v + 1, pick, out);
        pick.pop();
    }
}

/// `4! / ∏ (repeat count)!` for a sorted index quadruple.
fn orderings_of_multiset(ids: [usize; 4]) -> u64 {
    let mut denom = 1u64;
    let mut run = 1u64;
    for w in 1..4 {
        if ids[w] == ids[w - 1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    24 / denom
}

fn factorial(k: u64) -> u64 {
    (1..=k).product::<u64>().max(1)
}

/// General scan: canonical-growth enumeration of connected supports (1–4
/// distinct sets, union ≤ 4r − 4), then multiplicity compositions per
/// support. Good joins always have overlap-connected supports within that
/// union bound, so the walk is exhaustive.
fn scan_general(space: &SetSpace, cap: u64, visit: &mut impl FnMut(&[&[u32]; 4], u128)) -> Result<()> {
    let r = space.r;
    let u_cap = 4 * r - 4;
    // Overlap adjacency between distinct sets, via per-vertex buckets.
    let mut by_vertex: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (id, s) in space.sets.iter().enumerate() {
        for &v in s {
            by_vertex.entry(v).or_default().push(id as u32);
        }
    }
    let mut nbrs: Vec<Vec<u32>> = vec![Vec::new(); space.sets.len()];
    for (id, s) in space.sets.iter().enumerate() {
        let mut seen: Vec<u32> = Vec::new();
        for &v in s {
            for &other in &by_vertex[&v] {
                if other != id as u32 && !seen.contains(&other) {
                    seen.push(other);
                }
            }
        }
        seen.sort_unstable();
        nbrs[id] = seen;
    }

    let adjacent = |a: u32, b: u32| nbrs[a as usize].binary_search(&b).is_ok();
    // Greedy canonical sequence of a connected support: start at the
    // smallest id, repeatedly append the smallest member adjacent to the
    // prefix. A child extension is canonical iff it appends last.
    let canon = |members: &[u32]| -> Vec<u32> {
        let mut seq = vec![*members.iter().min().unwrap()];
        while seq.len() < members.len() {
            let next = members
                .iter()
                .copied()
                .filter(|v| !seq.contains(v))
                .filter(|&v| seq.iter().any(|&s| adjacent(s, v)))
                .min()
                .expect("support is connected");
            seq.push(next);
        }
        seq
    };

    let mut visited: u64 = 0;
    let mut stack: Vec<u32> = Vec::new();
    let mut err: Option<Error> = None;

    fn process(
        space: &SetSpace,
        members: &[u32],
        visit: &mut impl FnMut(&[&[u32]; 4], u128),
        compositions: &[&[u64]],
    ) -> Result<()> {
        let r = space.r as u32;
        for comp in compositions {
            let mut slots: Vec<&[u32]> = Vec::with_capacity(4);
            let mut weight: u128 = 1;
            let mut denom = 1u64;
            for (pos, &a) in comp.iter().enumerate() {
                let id = members[pos] as usize;
                for _ in 0..a {
                    slots.push(&space.sets[id]);
                }
                weight = weight
                    .checked_mul((space.mult[id] as u128).pow(a as u32))
                    .ok_or_else(capacity_overflow)?;
                denom *= factorial(a);
            }
            let slots: &[&[u32]; 4] = slots.as_slice().try_into().unwrap();
            if good_slots(slots, r) {
                let mult = weight.checked_mul((24 / denom) as u128).ok_or_else(capacity_overflow)?;
                visit(slots, mult);
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        space: &SetSpace,
        nbrs: &[Vec<u32>],
        canon: &impl Fn(&[u32]) -> Vec<u32>,
        stack: &mut Vec<u32>,
        union: &Vec<u32>,
        u_cap: usize,
        cap: u64,
        visited: &mut u64,
        visit: &mut impl FnMut(&[&[u32]; 4], u128),
    ) -> Result<()> {
        *visited += 1;
        if *visited > cap {
            return Err(Error::Capacity(format!(
                "good-join scan exceeded the support cap of {cap} (raise --max-tuples)"
            )));
        }
        const COMPOSITIONS: [&[&[u64]]; 4] = [
            &[&[4]],
            &[&[1, 3], &[2, 2], &[3, 1]],
            &[&[1, 1, 2], &[1, 2, 1], &[2, 1, 1]],
            &[&[1, 1, 1, 1]],
        ];
        process(space, stack, visit, COMPOSITIONS[stack.len() - 1])?;
        if stack.len() == 4 {
            return Ok(());
        }
        let mut cands: Vec<u32> = Vec::new();
        for &s in stack.iter() {
            for &x in &nbrs[s as usize] {
                if !stack.contains(&x) && !cands.contains(&x) {
                    cands.push(x);
                }
            }
        }
        cands.sort_unstable();
        for x in cands {
            let merged = union_of(&[union.as_slice(), &space.sets[x as usize]]);
            if merged.len() > u_cap {
                continue;
            }
            stack.push(x);
            let seq = canon(stack);
            let is_child = seq[..seq.len() - 1] == stack[..stack.len() - 1] && seq[seq.len() - 1] == x;
            // The prefix comparison works because the stack itself is grown
            // in canonical order, so stack[..len-1] is canon of the parent.
            if is_child {
                grow(space, nbrs, canon, stack, &merged, u_cap, cap, visited, visit)?;
            }
            stack.pop();
        }
        Ok(())
    }

    for a in 0..space.sets.len() as u32 {
        stack.push(a);
        let union = space.sets[a as usize].clone();
        if union.len() <= u_cap {
            if let Err(e) = grow(space, &nbrs, &canon, &mut stack, &union, u_cap, cap, &mut visited, visit) {
                err = Some(e);
            }
        }
        stack.pop();
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(())
}

/// ξ per vertex: the number of ordered 2-shared pairs of copies whose
/// common vertex set contains the vertex (diagonal pairs included).
pub fn xi_counts(idx: &CopyIndex) -> Vec<u128> {
    let space = SetSpace::build(idx);
    let mut xi = vec![0u128; idx.host_vertex_count() as usize];
    space.two_shared_scan(|a, b, inter| {
        let weight = space.mult[a] as u128 * space.mult[b] as u128;
        for &t in inter {
            xi[t as usize - 1] += weight;
        }
    });
    xi
}

/// A total order on host vertices: `order[k]` is the vertex processed
/// k-th, `rank(v)` its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrdering {
    order: Vec<u32>,
    rank: Vec<u32>,
}

impl VertexOrdering {
    /// Natural order 1, 2, …, n.
    pub fn natural(n: u32) -> VertexOrdering {
        VertexOrdering::from_order((1..=n).collect()).unwrap()
    }

    /// Wraps an explicit processing order (a permutation of 1..=n).
    pub fn from_order(order: Vec<u32>) -> Result<VertexOrdering> {
        let n = order.len() as u32;
        let mut rank = vec![u32::MAX; n as usize + 1];
        for (pos, &v) in order.iter().enumerate() {
            if v < 1 || v > n || rank[v as usize] != u32::MAX {
                return Err(Error::Validation("ordering must be a permutation of the host vertices".to_owned()));
            }
            rank[v as usize] = pos as u32;
        }
        Ok(VertexOrdering { order, rank })
    }

    /// Position of `v` in the order (0-based).
    pub fn rank(&self, v: u32) -> u32 {
        self.rank[v as usize]
    }

    /// Vertices in processing order.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn vertex_count(&self) -> u32 {
        self.order.len() as u32
    }
}

/// The ξ-descending vertex ordering (ties by ascending vertex id).
pub fn sorted_ordering(idx: &CopyIndex) -> VertexOrdering {
    let xi = xi_counts(idx);
    let mut order: Vec<u32> = (1..=idx.host_vertex_count()).collect();
    order.sort_by_key(|&v| (core::cmp::Reverse(xi[v as usize - 1]), v));
    VertexOrdering::from_order(order).unwrap()
}

/// Υ under the given ordering: over all anchors t and all pairs of
/// increasing tuples (each with positive D) that share exactly the anchor,
/// the sum of `D_{w1}² · D_{w2}²`.
pub fn upsilon(idx: &CopyIndex, ordering: &VertexOrdering) -> Result<u128> {
    if idx.r() > MAX_UPSILON_PATTERN {
        return Err(Error::Capacity(format!(
            "Υ supports patterns with at most {MAX_UPSILON_PATTERN} vertices, got {}",
            idx.r()
        )));
    }
    if ordering.vertex_count() != idx.host_vertex_count() {
        return Err(Error::Validation("ordering size does not match the host".to_owned()));
    }
    let mut total: u128 = 0;
    let mut budget: u128 = 0;
    for &t in ordering.order() {
        // Distinct increasing tuples anchored at t, drawn from copies
        // through t; every tuple not inside some copy has D = 0.
        let mut tuples: BTreeSet<Vec<u32>> = BTreeSet::new();
        for &id in idx.copies_at(t) {
            let below: Vec<u32> = idx.copies()[id as usize]
                .vertices()
                .iter()
                .copied()
                .filter(|&v| ordering.rank(v) < ordering.rank(t))
                .collect();
            let mut pick: Vec<u32> = Vec::new();
            collect_subsets(&below, 0, &mut pick, &mut |subset| {
                if !subset.is_empty() {
                    let mut w = subset.to_vec();
                    w.push(t);
                    w.sort_unstable();
                    tuples.insert(w);
                }
            });
        }
        let with_d: Vec<(Vec<u32>, u64)> = tuples
            .into_iter()
            .map(|w| {
                let d = idx.copies_through(&w);
                (w, d)
            })
            .filter(|&(_, d)| d > 0)
            .collect();
        budget = budget
            .checked_add((with_d.len() as u128).pow(2))
            .filter(|&b| b <= UPSILON_PAIR_CAP)
            .ok_or_else(|| Error::Capacity("Υ tuple-pair enumeration exceeds its cap".to_owned()))?;
        for (w1, d1) in &with_d {
            for (w2, d2) in &with_d {
                let common = w1.iter().filter(|v| w2.contains(v)).count();
                if common == 1 {
                    let term = (*d1 as u128 * *d1 as u128)
                        .checked_mul(*d2 as u128 * *d2 as u128)
                        .ok_or_else(capacity_overflow)?;
                    total = total.checked_add(term).ok_or_else(capacity_overflow)?;
                }
            }
        }
    }
    Ok(total)
}

/// All subsets of `items` (by recursion), passed to `f` as slices of `pick`.
fn collect_subsets(items: &[u32], from: usize, pick: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    f(pick);
    for i in from..items.len() {
        pick.push(items[i]);
        collect_subsets(items, i + 1, pick, f);
        pick.pop();
    }
}

/// Assembles the full census under the given ordering and support cap.
pub fn census_report(idx: &CopyIndex, ordering: &VertexOrdering, cap: u64) -> Result<CensusReport> {
    Ok(CensusReport {
        pair2_tuples: count_2shared_tuples(idx, 2)?,
        q4_tuples: count_2shared_tuples(idx, 4)?,
        good_tuples: count_good_tuples_capped(idx, cap)?,
        xi: xi_counts(idx),
        upsilon: upsilon(idx, ordering)?,
    })
}
