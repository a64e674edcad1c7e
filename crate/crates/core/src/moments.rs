//! Exact moments of the monochromatic-copy count.
//!
//! Everything here is exact rational arithmetic: the mean and variance of
//! `T`, mixed central moments `E[∏ Z_s]` of centered copy indicators, and
//! the fourth moment of the standardized count `Z = (T − E[T]) / σ`. The
//! fourth moment is *not* computed by summing all `copies⁴` quadruples;
//! instead it uses the identity
//!
//! ```text
//! E[(T − E[T])⁴] = Σ over good-join quadruples of E[Z₁Z₂Z₃Z₄]
//!                + 3 · Σ over pairs of 2-shared pairs whose unions share
//!                      at most one vertex of E[Z₁Z₂]·E[Z₃Z₄]
//! ```
//!
//! Quadruples that are not good joins either have a vanishing mixed moment
//! or split (in exactly one of the three pairings) into two 2-shared pairs
//! whose unions meet in at most one vertex, where the moment factorizes;
//! conversely no good join splits that way. The second sum equals
//! `σ⁴ − S₂₊` with `S₂₊` the aggregated sum over union-overlapping pairs of
//! pairs, so only vertex-localized structures are ever enumerated. The
//! identity is cross-checked against direct quadruple summation on small
//! hosts and against the all-colorings oracle.
//!
//! Inside the good-join scan every mixed moment is a signed sum of sixteen
//! terms `±c^e` with integer exponents, so the scan accumulates integer
//! coefficients per exponent and touches big rationals only once at the end.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::census::{intersect_count, scan_good_quadruples, union_of, SetSpace, DEFAULT_SUPPORT_CAP};
use crate::color::{all_colorings, monochromatic_count};
use crate::embed::{Copy, CopyIndex};
use crate::rat::{q_i128, q_int, q_pow, q_u128, Q};
use crate::{Error, Result};

/// Largest collection accepted by [`mixed_central_moment`].
pub const MAX_MIXED_LEN: usize = 8;

/// Largest copy count accepted by [`fourth_moment_direct`].
pub const MAX_DIRECT_COPIES: u64 = 16;

/// Exact mean, variance, and (optionally) standardized fourth moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub mean_t: Q,
    pub variance_t: Q,
    /// Present only when requested and the variance is positive.
    pub fourth_moment_z: Option<Q>,
    pub copy_count: u64,
    /// Ordered 2-shared copy pairs (the variance support).
    pub pair2_count: u128,
}

fn validate_colors(c: u32) -> Result<()> {
    if c < 2 {
        return Err(Error::Validation(format!("need at least 2 colors, got {c}")));
    }
    Ok(())
}

/// `E[T] = copies · c^{1−r}`.
pub fn expected_t(idx: &CopyIndex, c: u32) -> Result<Q> {
    validate_colors(c)?;
    Ok(q_int(idx.copy_count() as i64) * q_pow(c as u64, 1 - idx.r() as i64))
}

/// `Cov(Z_a, Z_b)`: zero when the copies share at most one vertex, else
/// `c^{1−|a∪b|} − c^{2−|a|−|b|}` (strictly positive).
pub fn pair_covariance(a: &Copy, b: &Copy, c: u32) -> Q {
    if a.intersection_size(b) <= 1 {
        return q_int(0);
    }
    let u = a.union_size(b) as i64;
    let ra = a.vertices().len() as i64;
    let rb = b.vertices().len() as i64;
    q_pow(c as u64, 1 - u) - q_pow(c as u64, 2 - ra - rb)
}

/// Per-union aggregation of ordered 2-shared set pairs: the variance and
/// the fourth-moment correction need only these totals, never the pairs.
struct PairAggregate {
    /// Σ m_a·m_b per union size |a ∪ b|.
    by_union_size: BTreeMap<usize, u128>,
    /// Σ m_a·m_b over all ordered 2-shared pairs.
    total: u128,
    /// Σ m_a·m_b per distinct union set.
    union_weights: BTreeMap<Vec<u32>, u128>,
}

fn aggregate_pairs(space: &SetSpace) -> Result<PairAggregate> {
    let mut agg = PairAggregate {
        by_union_size: BTreeMap::new(),
        total: 0,
        union_weights: BTreeMap::new(),
    };
    let mut overflow = false;
    space.two_shared_scan(|a, b, inter| {
        let w = space.mult[a] as u128 * space.mult[b] as u128;
        let u = 2 * space.r - inter.len();
        *agg.by_union_size.entry(u).or_default() += w;
        match agg.total.checked_add(w) {
            Some(t) => agg.total = t,
            None => overflow = true,
        }
        let union = union_of(&[&space.sets[a], &space.sets[b]]);
        *agg.union_weights.entry(union).or_default() += w;
    });
    if overflow {
        return Err(Error::Capacity("2-shared pair totals exceed the 128-bit accumulator".to_owned()));
    }
    Ok(agg)
}

/// `Var[T] = Σ over ordered 2-shared copy pairs of Cov(Z_a, Z_b)`, summed
/// over distinct vertex-set pairs with multiplicities.
pub fn exact_variance(idx: &CopyIndex, c: u32) -> Result<Q> {
    validate_colors(c)?;
    let space = SetSpace::build(idx);
    let agg = aggregate_pairs(&space)?;
    Ok(variance_from_aggregate(&agg, space.r, c))
}

fn variance_from_aggregate(agg: &PairAggregate, r: usize, c: u32) -> Q {
    let mut var = q_int(0);
    for (&u, &cnt) in &agg.by_union_size {
        var += q_u128(cnt) * q_pow(c as u64, 1 - u as i64);
    }
    var - q_u128(agg.total) * q_pow(c as u64, 2 - 2 * r as i64)
}

/// Emits the signed exponent terms of `E[∏_j Z_{s_j}]`: for each subset `A`
/// of the collection, sign `(−1)^{L−|A|}` at exponent
/// `Σ_{j∉A}(1−r_j) + comp(A) − |∪_{j∈A} s_j|`, where `comp(A)` counts
/// connected components of the overlap graph on `A`. The probability that
/// every copy in `A` is monochromatic is exactly `c^{comp(A)−|∪A|}`, each
/// component contributing one free color choice.
fn mcm_exponent_terms(sets: &[&[u32]], mut emit: impl FnMut(i64, i64)) {
    let l = sets.len();
    debug_assert!((1..=MAX_MIXED_LEN).contains(&l));
    let mut overlap = [[false; MAX_MIXED_LEN]; MAX_MIXED_LEN];
    for i in 0..l {
        for j in i + 1..l {
            overlap[i][j] = intersect_count(sets[i], sets[j]) > 0;
        }
    }
    let absent_exp: Vec<i64> = sets.iter().map(|s| 1 - s.len() as i64).collect();
    for mask in 0u32..1 << l {
        let mut exp: i64 = 0;
        for (j, &e) in absent_exp.iter().enumerate() {
            if mask & (1 << j) == 0 {
                exp += e;
            }
        }
        // Union size and component count of the members of `mask`.
        let members: Vec<usize> = (0..l).filter(|&j| mask & (1 << j) != 0).collect();
        if !members.is_empty() {
            let mset: Vec<&[u32]> = members.iter().map(|&j| sets[j]).collect();
            exp -= union_of(&mset).len() as i64;
            let mut root: Vec<usize> = (0..members.len()).collect();
            fn find(root: &mut Vec<usize>, x: usize) -> usize {
                if root[x] != x {
                    let r = find(root, root[x]);
                    root[x] = r;
                }
                root[x]
            }
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    let (ma, mb) = (members[a].min(members[b]), members[a].max(members[b]));
                    if overlap[ma][mb] || sets[ma] == sets[mb] {
                        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
                        if ra != rb {
                            root[ra] = rb;
                        }
                    }
                }
            }
            let comp = (0..members.len()).filter(|&x| find(&mut root, x) == x).count();
            exp += comp as i64;
        }
        let sign = if (l - members.len()).is_multiple_of(2) { 1 } else { -1 };
        emit(exp, sign);
    }
}

/// `E[∏_j Z_{s_j}]` for a collection of 1 ≤ L ≤ 8 copies (repetition
/// allowed), by inclusion–exclusion over subcollections with the
/// connected-components correction for disconnected subcollections.
pub fn mixed_central_moment(copies: &[&Copy], c: u32) -> Result<Q> {
    validate_colors(c)?;
    if copies.is_empty() {
        return Err(Error::Validation("mixed moment needs at least one copy".to_owned()));
    }
    if copies.len() > MAX_MIXED_LEN {
        return Err(Error::Capacity(format!(
            "mixed moments support at most {MAX_MIXED_LEN} copies, got {}",
            copies.len()
        )));
    }
    let sets: Vec<&[u32]> = copies.iter().map(|cp| cp.vertices()).collect();
    let mut acc = q_int(0);
    mcm_exponent_terms(&sets, |exp, sign| {
        acc += q_int(sign) * q_pow(c as u64, exp);
    });
    Ok(acc)
}

/// `E[Z⁴]` by the good-join identity, under the default support cap.
pub fn exact_fourth_moment(idx: &CopyIndex, c: u32) -> Result<Q> {
    exact_fourth_moment_capped(idx, c, DEFAULT_SUPPORT_CAP)
}

/// `E[Z⁴]` by the good-join identity; the general-path scan respects `cap`.
pub fn exact_fourth_moment_capped(idx: &CopyIndex, c: u32, cap: u64) -> Result<Q> {
    validate_colors(c)?;
    if idx.copy_count() == 0 {
        return Err(Error::UndefinedStatistic(
            "fourth moment undefined: the host has no copies, so the variance is zero".to_owned(),
        ));
    }
    let space = SetSpace::build(idx);
    let agg = aggregate_pairs(&space)?;
    let variance = variance_from_aggregate(&agg, space.r, c);
    let sigma4 = variance.clone() * variance;

    // Good-join sum, accumulated as integer coefficients per c-exponent.
    let mut coeffs: BTreeMap<i64, i128> = BTreeMap::new();
    let mut overflow = false;
    scan_good_quadruples(idx, cap, |slots, mult| {
        let sets: [&[u32]; 4] = *slots;
        mcm_exponent_terms(&sets, |exp, sign| {
            let entry = coeffs.entry(exp).or_default();
            match entry.checked_add(sign as i128 * mult as i128) {
                Some(v) => *entry = v,
                None => overflow = true,
            }
        });
    })?;
    if overflow {
        return Err(Error::Capacity("good-join moment sum exceeds the 128-bit accumulator".to_owned()));
    }
    let mut good_sum = q_int(0);
    for (&exp, &coef) in &coeffs {
        if coef != 0 {
            good_sum += q_i128(coef) * q_pow(c as u64, exp);
        }
    }

    let s2_plus = overlapping_pair_products(&agg, space.r, c)?;
    let centered_fourth = good_sum + q_int(3) * (sigma4.clone() - s2_plus);
    Ok(centered_fourth / sigma4)
}

/// `S₂₊ = Σ E[pair₁]·E[pair₂]` over ordered pairs of ordered 2-shared pairs
/// whose union sets share at least two vertices, aggregated by union set.
fn overlapping_pair_products(agg: &PairAggregate, r: usize, c: u32) -> Result<Q> {
    let unions: Vec<(&Vec<u32>, u128)> = agg.union_weights.iter().map(|(u, &w)| (u, w)).collect();
    // Vertex-pair buckets over union sets, mirroring the copy-pair scan.
    let mut by_pair: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for (id, (u, _)) in unions.iter().enumerate() {
        for (i, &a) in u.iter().enumerate() {
            for &b in &u[i + 1..] {
                by_pair.entry((a, b)).or_default().push(id as u32);
            }
        }
    }
    let mut by_sizes: BTreeMap<(usize, usize), u128> = BTreeMap::new();
    let mut stamp: Vec<u32> = vec![u32::MAX; unions.len()];
    let mut overflow = false;
    for (id, (u1, w1)) in unions.iter().enumerate() {
        for (i, &a) in u1.iter().enumerate() {
            for &b in &u1[i + 1..] {
                if let Some(bucket) = by_pair.get(&(a, b)) {
                    for &other in bucket {
                        if stamp[other as usize] == id as u32 {
                            continue;
                        }
                        stamp[other as usize] = id as u32;
                        let (u2, w2) = unions[other as usize];
                        let entry = by_sizes.entry((u1.len(), u2.len())).or_default();
                        match w1.checked_mul(w2).and_then(|p| entry.checked_add(p)) {
                            Some(v) => *entry = v,
                            None => overflow = true,
                        }
                    }
                }
            }
        }
    }
    if overflow {
        return Err(Error::Capacity("pair-product totals exceed the 128-bit accumulator".to_owned()));
    }
    let pair_expectation =
        |u: usize| q_pow(c as u64, 1 - u as i64) - q_pow(c as u64, 2 - 2 * r as i64);
    let mut total = q_int(0);
    for (&(u1, u2), &cnt) in &by_sizes {
        total += q_u128(cnt) * pair_expectation(u1) * pair_expectation(u2);
    }
    Ok(total)
}

/// `E[Z⁴]` by direct summation of mixed moments over all ordered copy
/// quadruples; a small-host cross-check for the identity route.
pub fn fourth_moment_direct(idx: &CopyIndex, c: u32) -> Result<Q> {
    validate_colors(c)?;
    if idx.copy_count() == 0 {
        return Err(Error::UndefinedStatistic(
            "fourth moment undefined: the host has no copies, so the variance is zero".to_owned(),
        ));
    }
    if idx.copy_count() > MAX_DIRECT_COPIES {
        return Err(Error::Capacity(format!(
            "direct fourth-moment summation supports at most {MAX_DIRECT_COPIES} copies, got {}",
            idx.copy_count()
        )));
    }
    let copies = idx.copies();
    let mut coeffs: BTreeMap<i64, i128> = BTreeMap::new();
    for a in copies {
        for b in copies {
            for d in copies {
                for e in copies {
                    let sets: [&[u32]; 4] = [a.vertices(), b.vertices(), d.vertices(), e.vertices()];
                    mcm_exponent_terms(&sets, |exp, sign| {
                        *coeffs.entry(exp).or_default() += sign as i128;
                    });
                }
            }
        }
    }
    let mut centered_fourth = q_int(0);
    for (&exp, &coef) in &coeffs {
        if coef != 0 {
            centered_fourth += q_i128(coef) * q_pow(c as u64, exp);
        }
    }
    let variance = exact_variance(idx, c)?;
    let sigma4 = variance.clone() * variance;
    Ok(centered_fourth / sigma4)
}

/// Exact distribution of `T` by enumerating all `c^n` colorings of the
/// host; the oracle every exact-moment operation is tested against.
pub fn brute_force_distribution(idx: &CopyIndex, c: u32) -> Result<BTreeMap<u64, Q>> {
    validate_colors(c)?;
    let n = idx.host_vertex_count();
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut total: u64 = 0;
    for x in all_colorings(n, c)? {
        let t = monochromatic_count(idx, &x)?;
        *counts.entry(t).or_default() += 1;
        total += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(t, cnt)| (t, q_int(cnt as i64) / q_int(total as i64)))
        .collect())
}

/// Central moment `E[(T − E[T])^k]` of an exact distribution.
pub fn distribution_central_moment(dist: &BTreeMap<u64, Q>, k: u32) -> Q {
    let mean = distribution_mean(dist);
    let mut acc = q_int(0);
    for (&t, p) in dist {
        let d = q_int(t as i64) - mean.clone();
        let mut pw = q_int(1);
        for _ in 0..k {
            pw *= d.clone();
        }
        acc += pw * p.clone();
    }
    acc
}

/// Mean of an exact distribution.
pub fn distribution_mean(dist: &BTreeMap<u64, Q>) -> Q {
    dist.iter().map(|(&t, p)| q_int(t as i64) * p.clone()).sum()
}

/// Assembles the exact moment report; the fourth moment is included only
/// when requested and defined (at least one copy).
pub fn moment_report(idx: &CopyIndex, c: u32, with_fourth: bool) -> Result<MomentReport> {
    validate_colors(c)?;
    let space = SetSpace::build(idx);
    let agg = aggregate_pairs(&space)?;
    let fourth = if with_fourth && idx.copy_count() > 0 {
        Some(exact_fourth_moment(idx, c)?)
    } else {
        None
    };
    Ok(MomentReport {
        mean_t: expected_t(idx, c)?,
        variance_t: variance_from_aggregate(&agg, space.r, c),
        fourth_moment_z: fourth,
        copy_count: idx.copy_count(),
        pair2_count: agg.total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::centered_indicator;
    use crate::embed::{enumerate_copies, Pattern};
    use crate::graph::{generate, parse_edge_list, parse_spec, Graph};
    use crate::rat::q_ratio;

    fn index(hs: &str, gs: &str) -> CopyIndex {
        let h = Pattern::new(generate(&parse_spec(hs).unwrap()).unwrap()).unwrap();
        let g = generate(&parse_spec(gs).unwrap()).unwrap();
        enumerate_copies(&h, &g).unwrap()
    }

    fn index_on(hs: &str, g: &Graph) -> CopyIndex {
        let h = Pattern::new(generate(&parse_spec(hs).unwrap()).unwrap()).unwrap();
        enumerate_copies(&h, g).unwrap()
    }

    /// Whether the pairwise-overlap graph of the collection is connected.
    fn overlap_connected(sets: &[&[u32]]) -> bool {
        let n = sets.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && intersect_count(sets[i], sets[j]) > 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All-colorings oracle for `E[∏ Z_s]`, independent of the
    /// inclusion–exclusion formula.
    fn mcm_oracle(copies: &[&Copy], n: u32, c: u32) -> Q {
        let mut acc = q_int(0);
        let mut count = 0i64;
        for x in all_colorings(n, c).unwrap() {
            let mut prod = q_int(1);
            for cp in copies {
                prod *= centered_indicator(cp, &x, c);
            }
            acc += prod;
            count += 1;
        }
        acc / q_int(count)
    }

    #[test]
    fn expected_value_examples() {
        assert_eq!(expected_t(&index("complete:3", "complete:4"), 2).unwrap(), q_int(1));
        assert_eq!(expected_t(&index("complete:3", "star:5"), 2).unwrap(), q_int(0));
        assert_eq!(expected_t(&index("star:2", "path:3"), 3).unwrap(), q_ratio(1, 9));
    }

    #[test]
    fn pair_covariance_examples() {
        let k4 = index("complete:3", "complete:4");
        let a = &k4.copies()[0];
        assert_eq!(pair_covariance(a, a, 2), q_ratio(3, 16));
        let b = k4.copies().iter().find(|b| a.intersection_size(b) == 2).unwrap();
        assert_eq!(pair_covariance(a, b, 2), q_ratio(1, 16));
        let far = index("complete:3", "union:complete:3x2");
        assert_eq!(pair_covariance(&far.copies()[0], &far.copies()[1], 2), q_int(0));
        // Cherries sharing exactly one vertex.
        let cherries = index("star:2", "path:5");
        let c1 = cherries.copies().iter().find(|c| c.vertices() == [1, 2, 3]).unwrap();
        let c2 = cherries.copies().iter().find(|c| c.vertices() == [3, 4, 5]).unwrap();
        assert_eq!(pair_covariance(c1, c2, 2), q_int(0));
    }

    #[test]
    fn variance_examples() {
        assert_eq!(exact_variance(&index("complete:3", "complete:4"), 2).unwrap(), q_ratio(3, 2));
        assert_eq!(exact_variance(&index("path:2", "path:3"), 2).unwrap(), q_ratio(1, 2));
        for m in [1i64, 4, 9] {
            let idx = index("complete:3", &alloc::format!("union:complete:3x{m}"));
            assert_eq!(exact_variance(&idx, 2).unwrap(), q_ratio(3 * m, 16));
        }
    }

    /// Three triangles glued along one edge: vertex sets {1,2,3}, {1,2,4},
    /// {1,2,5}.
    fn book_of_three_triangles() -> CopyIndex {
        let g = parse_edge_list("n=5\n1 2\n1 3\n2 3\n1 4\n2 4\n1 5\n2 5\n").unwrap();
        let idx = index_on("complete:3", &g);
        assert_eq!(idx.copy_count(), 3);
        idx
    }

    #[test]
    fn mixed_moment_examples() {
        let far = index("complete:3", "union:complete:3x2");
        let (a, b) = (&far.copies()[0], &far.copies()[1]);
        assert_eq!(mixed_central_moment(&[a, b], 2).unwrap(), q_int(0));
        assert_eq!(mixed_central_moment(&[a], 2).unwrap(), q_int(0));
        let book = book_of_three_triangles();
        let all: Vec<&Copy> = book.copies().iter().collect();
        assert_eq!(mixed_central_moment(&all, 3).unwrap(), q_ratio(2, 729));
        assert_eq!(mixed_central_moment(&all, 2).unwrap(), q_int(0));
    }

    #[test]
    fn mixed_moment_matches_coloring_oracle() {
        let book = book_of_three_triangles();
        let copies: Vec<&Copy> = book.copies().iter().collect();
        for c in [2, 3] {
            for subset in [&copies[..1], &copies[..2], &copies[..3]] {
                assert_eq!(
                    mixed_central_moment(subset, c).unwrap(),
                    mcm_oracle(subset, 5, c),
                    "c={c}, L={}",
                    subset.len()
                );
            }
        }
        // A disconnected-with-two-components collection exercises the
        // component correction: two disjoint 2-shared pairs.
        let two = index_on("complete:3", &parse_edge_list("n=8\n1 2\n2 3\n1 3\n1 4\n2 4\n5 6\n6 7\n5 7\n5 8\n6 8\n").unwrap());
        assert_eq!(two.copy_count(), 4);
        let quad: Vec<&Copy> = two.copies().iter().collect();
        for c in [2, 3] {
            assert_eq!(mixed_central_moment(&quad, c).unwrap(), mcm_oracle(&quad, 8, c), "c={c}");
        }
    }

    #[test]
    fn mixed_moment_vanishes_with_a_loose_copy() {
        // Cherries (1,2,3) and (3,4,5) share one vertex.
        let idx = index("star:2", "path:5");
        let c1 = idx.copies().iter().find(|c| c.vertices() == [1, 2, 3]).unwrap();
        let c2 = idx.copies().iter().find(|c| c.vertices() == [3, 4, 5]).unwrap();
        for c in [2, 3, 5] {
            assert_eq!(mixed_central_moment(&[c1, c2], c).unwrap(), q_int(0));
        }
    }

    #[test]
    fn mixed_moment_factorizes_over_split_pairs() {
        // Disjoint pair unions.
        let idx = index("complete:3", "union:complete:4x2");
        let first: Vec<&Copy> = idx.copies().iter().filter(|c| c.vertices()[0] <= 4).collect();
        let second: Vec<&Copy> = idx.copies().iter().filter(|c| c.vertices()[0] > 4).collect();
        assert_eq!(first.len(), 4);
        assert_eq!(second.len(), 4);
        for c in [2, 3] {
            let quad = [first[0], first[1], second[0], second[2]];
            let left = mixed_central_moment(&quad, c).unwrap();
            let right = mixed_central_moment(&quad[..2], c).unwrap()
                * mixed_central_moment(&quad[2..], c).unwrap();
            assert_eq!(left, right, "c={c}");
        }
        // Pair unions sharing exactly one vertex: two 2-page books whose
        // spines meet at vertex 4.
        let g = parse_edge_list("n=7\n1 2\n1 3\n2 3\n1 4\n2 4\n4 5\n4 6\n5 6\n4 7\n5 7\n").unwrap();
        let idx = index_on("complete:3", &g);
        assert_eq!(idx.copy_count(), 4);
        let left_pair: Vec<&Copy> = idx.copies().iter().filter(|c| c.vertices()[0] <= 2).collect();
        let right_pair: Vec<&Copy> = idx.copies().iter().filter(|c| c.vertices()[0] >= 4).collect();
        assert_eq!(left_pair.len(), 2);
        assert_eq!(right_pair.len(), 2);
        for c in [2, 3, 5] {
            let quad = [left_pair[0], left_pair[1], right_pair[0], right_pair[1]];
            let split = mixed_central_moment(&quad[..2], c).unwrap()
                * mixed_central_moment(&quad[2..], c).unwrap();
            assert_eq!(mixed_central_moment(&quad, c).unwrap(), split, "c={c}");
            assert_eq!(mixed_central_moment(&quad, c).unwrap(), mcm_oracle(&quad, 7, c), "c={c}");
        }
    }

    #[test]
    fn mixed_moment_length_guards() {
        let idx = index("complete:3", "complete:4");
        let a = &idx.copies()[0];
        assert!(matches!(mixed_central_moment(&[], 2), Err(Error::Validation(_))));
        let nine = [a; 9];
        assert!(matches!(mixed_central_moment(&nine, 2), Err(Error::Capacity(_))));
    }

    #[test]
    fn fourth_moment_examples() {
        assert_eq!(exact_fourth_moment(&index("complete:3", "complete:3"), 2).unwrap(), q_ratio(7, 3));
        assert_eq!(
            exact_fourth_moment(&index("complete:3", "union:complete:3x50"), 2).unwrap(),
            q_ratio(224, 75)
        );
    }

    #[test]
    fn fourth_moment_matches_brute_force() {
        for (hs, gs, c) in [
            ("complete:3", "complete:4", 2u32),
            ("complete:3", "union:complete:3x2", 2),
            ("star:2", "path:4", 2),
            ("star:2", "cycle:5", 3),
        ] {
            let idx = index(hs, gs);
            let dist = brute_force_distribution(&idx, c).unwrap();
            let variance = distribution_central_moment(&dist, 2);
            let fourth = distribution_central_moment(&dist, 4);
            let expected = fourth / (variance.clone() * variance);
            assert_eq!(exact_fourth_moment(&idx, c).unwrap(), expected, "{hs}/{gs}/c={c}");
        }
    }

    #[test]
    fn identity_route_equals_direct_summation() {
        for (hs, gs, c) in [
            ("complete:3", "complete:4", 2u32),
            ("complete:3", "complete:4", 7),
            ("star:2", "path:6", 2),
            ("star:2", "cycle:6", 3),
            ("star:2", "complete:4", 3),
            ("path:4", "path:7", 2),
            ("complete:3", "er:8:0.55:4", 2),
        ] {
            let idx = index(hs, gs);
            assert!(idx.copy_count() >= 1 && idx.copy_count() <= MAX_DIRECT_COPIES, "{hs}/{gs}");
            assert_eq!(
                exact_fourth_moment(&idx, c).unwrap(),
                fourth_moment_direct(&idx, c).unwrap(),
                "{hs}/{gs}/c={c}"
            );
        }
    }

    #[test]
    fn fourth_moment_refused_without_copies() {
        let idx = index("complete:3", "star:5");
        assert!(matches!(exact_fourth_moment(&idx, 2), Err(Error::UndefinedStatistic(_))));
    }

    #[test]
    fn distribution_examples() {
        let tri = brute_force_distribution(&index("complete:3", "complete:3"), 2).unwrap();
        assert_eq!(tri.get(&1), Some(&q_ratio(1, 4)));
        assert_eq!(tri.get(&0), Some(&q_ratio(3, 4)));
        let edge = brute_force_distribution(&index("path:2", "path:3"), 2).unwrap();
        assert_eq!(edge.get(&2), Some(&q_ratio(1, 4)));
        assert_eq!(edge.get(&1), Some(&q_ratio(1, 2)));
        assert_eq!(edge.get(&0), Some(&q_ratio(1, 4)));
        let total: Q = tri.values().cloned().sum();
        assert_eq!(total, q_int(1));
    }

    #[test]
    fn distribution_cap_is_enforced() {
        let idx = index("complete:3", "complete:13");
        assert!(matches!(brute_force_distribution(&idx, 4), Err(Error::Capacity(_))));
    }

    #[test]
    fn moments_agree_with_distribution_on_small_instances() {
        for (hs, gs, c) in [("complete:3", "complete:4", 2u32), ("complete:3", "complete:4", 3)] {
            let idx = index(hs, gs);
            let dist = brute_force_distribution(&idx, c).unwrap();
            assert_eq!(expected_t(&idx, c).unwrap(), distribution_mean(&dist));
            assert_eq!(exact_variance(&idx, c).unwrap(), distribution_central_moment(&dist, 2));
        }
    }

    #[test]
    fn variance_sandwich_holds() {
        use crate::census::count_2shared_tuples;
        for (hs, gs, c) in [
            ("complete:3", "complete:4", 2u32),
            ("complete:3", "complete:5", 3),
            ("star:2", "cycle:6", 2),
            ("path:4", "path:6", 3),
        ] {
            let idx = index(hs, gs);
            let r = idx.r() as i64;
            let pair2 = q_u128(count_2shared_tuples(&idx, 2).unwrap());
            let variance = exact_variance(&idx, c).unwrap();
            let low = pair2.clone() * q_pow(c as u64, 2 - 2 * r) * q_int(c as i64 - 1);
            let high = pair2 * q_pow(c as u64, 1 - r);
            assert!(low <= variance && variance <= high, "{hs}/{gs}/c={c}");
        }
    }

    #[test]
    fn connected_mixed_moments_sandwich_at_large_c() {
        // For heavily-overlapping collections (every copy sharing ≥ 2
        // vertices with the union of the rest) and c ≥ 2^{L+1} − 2, the
        // moment lies within [1/2, 3/2]·c^{1−|∪|}.
        let idx = index("complete:3", "complete:5");
        let c = 30u32;
        let copies = idx.copies();
        let mut tested = 0usize;
        for a in copies {
            for b in copies {
                for d in copies {
                    for e in copies {
                        let quad = [a, b, d, e];
                        let sets: Vec<&[u32]> = quad.iter().map(|x| x.vertices()).collect();
                        let union = union_of(&sets);
                        let tight = (0..4).all(|i| {
                            let others: Vec<&[u32]> =
                                (0..4).filter(|&j| j != i).map(|j| sets[j]).collect();
                            let rest = union_of(&others);
                            sets[i].iter().filter(|v| rest.binary_search(v).is_ok()).count() >= 2
                        });
                        if !tight || !overlap_connected(&sets) {
                            continue;
                        }
                        tested += 1;
                        let m = mixed_central_moment(&quad, c).unwrap();
                        let scale = q_pow(c as u64, 1 - union.len() as i64);
                        assert!(m >= q_ratio(1, 2) * scale.clone(), "below sandwich");
                        assert!(m <= q_ratio(3, 2) * scale, "above sandwich");
                    }
                }
            }
        }
        assert!(tested > 0);
    }

    #[test]
    fn report_assembly() {
        let idx = index("complete:3", "complete:4");
        let rep = moment_report(&idx, 2, true).unwrap();
        assert_eq!(rep.mean_t, q_int(1));
        assert_eq!(rep.variance_t, q_ratio(3, 2));
        assert_eq!(rep.copy_count, 4);
        assert_eq!(rep.pair2_count, 16);
        assert!(rep.fourth_moment_z.is_some());
        let empty = moment_report(&index("complete:3", "star:5"), 2, true).unwrap();
        assert_eq!(empty.variance_t, q_int(0));
        assert!(empty.fourth_moment_z.is_none());
    }
}
