//! Seeded Monte Carlo simulation of the monochromatic-copy count.
//!
//! Samples are pushed through an exact integer histogram of `T` values;
//! every statistic — moments of `Z`, standard errors, the Kolmogorov
//! distance to the standard normal — is computed from the merged histogram
//! afterwards. Because histogram merging is associative and `Z` is
//! standardized by the *exact* mean and standard deviation from the moment
//! engine, results are bit-identical for a given seed no matter how the
//! sample range is split across workers.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_2_SQRT_PI};

// Builds that link std (tests, clippy) shadow the trait with inherent
// float methods and would flag this import; pure no_std builds need it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::color::{monochromatic_count, sample_coloring, SeedSpec};
use crate::embed::{enumerate_copies, CopyIndex, Pattern};
use crate::graph::{generate, GeneratorSpec};
use crate::moments::{exact_variance, expected_t};
use crate::rat::{q_int, to_f64};
use crate::{Error, Result};

/// Fixed sampling block size: sample `i` always lands in block `i / 4096`,
/// so any partition of blocks across workers yields the same histogram.
pub const BLOCK_SIZE: u64 = 4096;

/// Absolute-moment exponents reported by [`moment_sweep`].
pub const SWEEP_POWERS: [u32; 4] = [2, 4, 6, 8];

/// Empirical statistics of one simulation run, all derived from the
/// integer histogram of `T` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub samples: u64,
    /// Empirical mean of `T` and its standard error.
    pub mean_t: f64,
    pub mean_t_se: f64,
    /// Empirical mean of `Z` (exactly standardized) and its standard error.
    pub mean_z: f64,
    pub mean_z_se: f64,
    /// Unbiased sample variance of `Z` and its asymptotic standard error.
    pub variance_z: f64,
    pub variance_z_se: f64,
    /// Empirical `E[Z⁴]` and its standard error.
    pub fourth_z: f64,
    pub fourth_z_se: f64,
    /// `sup_x |empirical CDF of Z − Φ(x)|`.
    pub ks_distance: f64,
    /// Exact standardization constants used for `Z`.
    pub exact_mean_t: f64,
    pub exact_sigma_t: f64,
    /// Count of samples per `T` value.
    pub histogram: BTreeMap<u64, u64>,
}

/// One host of a [`moment_sweep`]: empirical `E[|Z|^m]` for the exponents
/// in [`SWEEP_POWERS`], each with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub host_n: u32,
    pub copy_count: u64,
    pub samples: u64,
    /// `[value, standard error]` per exponent, in [`SWEEP_POWERS`] order.
    pub abs_moments: [[f64; 2]; 4],
}

/// The exact mean and standard deviation of `T`, as floats, for
/// standardizing simulated counts.
pub fn standardization(idx: &CopyIndex, c: u32) -> Result<(f64, f64)> {
    let mean = to_f64(&expected_t(idx, c)?);
    let variance = exact_variance(idx, c)?;
    if variance == q_int(0) {
        return Err(Error::UndefinedStatistic(
            "simulation undefined: the variance of the copy count is zero".to_owned(),
        ));
    }
    Ok((mean, to_f64(&variance).sqrt()))
}

/// Histogram of `T` over the sample streams `start..start + len`. Pure:
/// block results depend only on `(idx, c, seed, start, len)`.
pub fn simulate_block(
    idx: &CopyIndex,
    c: u32,
    seed: u64,
    start: u64,
    len: u64,
) -> Result<BTreeMap<u64, u64>> {
    let n = idx.host_vertex_count();
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for stream in start..start + len {
        let x = sample_coloring(n, c, SeedSpec { master_seed: seed, stream_index: stream })?;
        let t = monochromatic_count(idx, &x)?;
        *hist.entry(t).or_default() += 1;
    }
    Ok(hist)
}

/// Adds `from` into `into`; the merge is commutative and associative.
pub fn merge_histograms(into: &mut BTreeMap<u64, u64>, from: BTreeMap<u64, u64>) {
    for (t, cnt) in from {
        *into.entry(t).or_default() += cnt;
    }
}

/// Runs `samples` draws serially (block by block) and summarizes them.
pub fn simulate(idx: &CopyIndex, c: u32, samples: u64, seed: u64) -> Result<SimResult> {
    if samples == 0 {
        return Err(Error::Validation("need at least one sample".to_owned()));
    }
    let (mean, sigma) = standardization(idx, c)?;
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mut start = 0;
    while start < samples {
        let len = BLOCK_SIZE.min(samples - start);
        merge_histograms(&mut hist, simulate_block(idx, c, seed, start, len)?);
        start += len;
    }
    Ok(result_from_histogram(hist, mean, sigma))
}

/// Summarizes a merged histogram. With fewer than two samples the spread
/// statistics and standard errors are reported as zero.
pub fn result_from_histogram(
    histogram: BTreeMap<u64, u64>,
    exact_mean_t: f64,
    exact_sigma_t: f64,
) -> SimResult {
    let samples: u64 = histogram.values().sum();
    let n = samples as f64;
    let mut sum_t = 0.0f64;
    let mut sum_z = 0.0f64;
    let mut sum_z2 = 0.0f64;
    let mut sum_z4 = 0.0f64;
    let mut sum_z8 = 0.0f64;
    for (&t, &cnt) in &histogram {
        let w = cnt as f64;
        let z = (t as f64 - exact_mean_t) / exact_sigma_t;
        sum_t += w * t as f64;
        sum_z += w * z;
        let z2 = z * z;
        sum_z2 += w * z2;
        sum_z4 += w * z2 * z2;
        sum_z8 += w * z2 * z2 * z2 * z2;
    }
    let mean_t = sum_t / n;
    let mean_z = sum_z / n;
    let fourth_z = sum_z4 / n;
    let (mut variance_z, mut variance_z_se) = (0.0, 0.0);
    let (mut mean_t_se, mut mean_z_se, mut fourth_z_se) = (0.0, 0.0, 0.0);
    if samples > 1 {
        variance_z = (sum_z2 - n * mean_z * mean_z) / (n - 1.0);
        mean_z_se = (variance_z / n).sqrt();
        mean_t_se = mean_z_se * exact_sigma_t;
        // Central fourth moment of z for the variance's error bar.
        let mut sum_c4 = 0.0f64;
        for (&t, &cnt) in &histogram {
            let d = (t as f64 - exact_mean_t) / exact_sigma_t - mean_z;
            sum_c4 += cnt as f64 * d * d * d * d;
        }
        let m4c = sum_c4 / n;
        variance_z_se = ((m4c - variance_z * variance_z).max(0.0) / n).sqrt();
        fourth_z_se = ((sum_z8 / n - fourth_z * fourth_z).max(0.0) / n).sqrt();
    }
    let ks_distance = ks_statistic(&histogram, samples, exact_mean_t, exact_sigma_t);
    SimResult {
        samples,
        mean_t,
        mean_t_se,
        mean_z,
        mean_z_se,
        variance_z,
        variance_z_se,
        fourth_z,
        fourth_z_se,
        ks_distance,
        exact_mean_t,
        exact_sigma_t,
        histogram,
    }
}

/// `sup_x |F̂(x) − Φ(x)|` for the empirical CDF `F̂` of the standardized
/// samples. `T` is integer-valued, so `F̂` is a step function and the sup
/// is attained at an atom: both the gap just below each atom (against the
/// CDF value before the jump) and the gap at the atom are taken.
fn ks_statistic(histogram: &BTreeMap<u64, u64>, samples: u64, mean: f64, sigma: f64) -> f64 {
    let n = samples as f64;
    let mut cum = 0u64;
    let mut ks = 0.0f64;
    for (&t, &cnt) in histogram {
        let phi = normal_cdf((t as f64 - mean) / sigma);
        let below = cum as f64 / n;
        cum += cnt;
        let at = cum as f64 / n;
        ks = ks.max((phi - below).abs()).max((at - phi).abs());
    }
    ks
}

/// Maclaurin series `erf(z) = (2/√π) Σ (−1)^n z^{2n+1} / (n! (2n+1))`,
/// used for `z < 2` where cancellation stays below one part in 10¹⁵.
fn erf_series(z: f64) -> f64 {
    let zz = z * z;
    let mut power = z; // z^{2n+1} / n!
    let mut acc = z;
    for n in 1..200u32 {
        power *= -zz / n as f64;
        let term = power / (2 * n + 1) as f64;
        acc += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    FRAC_2_SQRT_PI * acc
}

/// Continued fraction
/// `erfc(z) = exp(−z²)/√π / (z + (1/2)/(z + 1/(z + (3/2)/(z + …))))`,
/// evaluated backwards from depth 64; used for `z ≥ 2`, where it converges
/// to machine precision and avoids the series' cancellation.
fn erfc_continued_fraction(z: f64) -> f64 {
    let mut v = z;
    for k in (1..=64u32).rev() {
        v = z + (k as f64 / 2.0) / v;
    }
    (-z * z).exp() * (FRAC_2_SQRT_PI / 2.0) / v
}

/// Standard normal CDF `Φ(x)`, accurate to well under 10⁻¹² absolutely.
/// The lower tail is computed directly (never as `1 − …`), so extreme
/// negative arguments keep full relative precision.
pub fn normal_cdf(x: f64) -> f64 {
    let t = x.abs() * FRAC_1_SQRT_2;
    let lower_tail = if t < 2.0 { 0.5 * (1.0 - erf_series(t)) } else { 0.5 * erfc_continued_fraction(t) };
    if x >= 0.0 {
        1.0 - lower_tail
    } else {
        lower_tail
    }
}

/// Simulates the pattern on every host of the family and reports empirical
/// `E[|Z|^m]` for `m ∈ {2, 4, 6, 8}` with standard errors.
pub fn moment_sweep(
    family: &[GeneratorSpec],
    h: &Pattern,
    c: u32,
    samples: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(family.len());
    for spec in family {
        let g = generate(spec)?;
        let idx = enumerate_copies(h, &g)?;
        let sim = simulate(&idx, c, samples, seed)?;
        let n = sim.samples as f64;
        let mut abs_moments = [[0.0f64; 2]; 4];
        for (slot, &power) in abs_moments.iter_mut().zip(SWEEP_POWERS.iter()) {
            let mut sum = 0.0f64;
            let mut sum_sq = 0.0f64;
            for (&t, &cnt) in &sim.histogram {
                let z = (t as f64 - sim.exact_mean_t) / sim.exact_sigma_t;
                let v = z.abs().powi(power as i32);
                sum += cnt as f64 * v;
                sum_sq += cnt as f64 * v * v;
            }
            let mean = sum / n;
            let se = if sim.samples > 1 { ((sum_sq / n - mean * mean).max(0.0) / n).sqrt() } else { 0.0 };
            *slot = [mean, se];
        }
        rows.push(SweepRow {
            host_n: idx.host_vertex_count(),
            copy_count: idx.copy_count(),
            samples: sim.samples,
            abs_moments,
        });
    }
    Ok(rows)
}

/// Histogram as CSV with a `t,count` header, rows in increasing `T`.
pub fn render_histogram_csv(histogram: &BTreeMap<u64, u64>) -> String {
    let mut out = String::from("t,count\n");
    for (t, cnt) in histogram {
        out.push_str(&format!("{t},{cnt}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_spec;
    use crate::moments::brute_force_distribution;
    use crate::rat::Q;

    fn index(hs: &str, gs: &str) -> CopyIndex {
        let h = Pattern::new(generate(&parse_spec(hs).unwrap()).unwrap()).unwrap();
        let g = generate(&parse_spec(gs).unwrap()).unwrap();
        enumerate_copies(&h, &g).unwrap()
    }

    /// Simpson integration of the normal density over [0, x]: an oracle
    /// for `normal_cdf` independent of the erf expansions.
    fn simpson_phi(x: f64) -> f64 {
        let steps = 4000usize; // even
        let h = x / steps as f64;
        let density = |u: f64| (-u * u / 2.0).exp() / (2.0 * core::f64::consts::PI).sqrt();
        let mut acc = density(0.0) + density(x);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * density(i as f64 * h);
        }
        0.5 + acc * h / 3.0
    }

    #[test]
    fn normal_cdf_matches_numerical_integration() {
        assert_eq!(normal_cdf(0.0), 0.5);
        for x in [0.25, 0.5, 1.0, 1.959964, 2.5, 2.9, 3.5, 4.5, 6.0] {
            assert!((normal_cdf(x) - simpson_phi(x)).abs() < 1e-10, "x = {x}");
            assert!((normal_cdf(-x) - (1.0 - simpson_phi(x))).abs() < 1e-10, "x = -{x}");
        }
        assert!((normal_cdf(1.959964) - 0.975).abs() < 1e-6);
    }

    #[test]
    fn normal_cdf_symmetry_and_tails() {
        let mut x = -8.0;
        while x <= 8.0 {
            let s = normal_cdf(x) + normal_cdf(-x);
            assert!((s - 1.0).abs() < 1e-12, "x = {x}, sum = {s}");
            x += 0.17;
        }
        assert!(normal_cdf(-9.0) < 1e-12);
        assert!(normal_cdf(9.0) > 1.0 - 1e-12);
        // The two expansions agree where they hand over.
        let boundary = 2.0f64;
        assert!(((1.0 - erf_series(boundary)) - erfc_continued_fraction(boundary)).abs() < 1e-15);
    }

    #[test]
    fn ks_matches_a_hand_computed_step_function() {
        // The exact T distribution of triangles in complete:4 at c=2 as a
        // 16-sample histogram; the largest gap sits just below T=1, where
        // the empirical CDF has climbed to 14/16 while Φ(0) = 1/2.
        let hist = BTreeMap::from([(0u64, 6u64), (1, 8), (4, 2)]);
        let result = result_from_histogram(hist, 1.0, 1.5f64.sqrt());
        assert_eq!(result.samples, 16);
        assert!((result.ks_distance - 0.375).abs() < 1e-12);
    }

    #[test]
    fn single_sample_is_degenerate_but_valid() {
        let idx = index("complete:3", "complete:4");
        let result = simulate(&idx, 2, 1, 99).unwrap();
        assert_eq!(result.samples, 1);
        assert!(result.ks_distance >= 0.5 && result.ks_distance <= 1.0);
        assert_eq!(result.variance_z, 0.0);
        assert_eq!(result.histogram.values().sum::<u64>(), 1);
    }

    #[test]
    fn identical_seeds_and_any_block_split_agree() {
        let idx = index("complete:3", "union:complete:3x3");
        let a = simulate(&idx, 2, 5000, 12345).unwrap();
        let b = simulate(&idx, 2, 5000, 12345).unwrap();
        assert_eq!(a, b);
        // Merge mismatched manual splits: 0..1700, 1700..4096, 4096..5000.
        let mut hist = simulate_block(&idx, 2, 12345, 0, 1700).unwrap();
        merge_histograms(&mut hist, simulate_block(&idx, 2, 12345, 1700, 2396).unwrap());
        merge_histograms(&mut hist, simulate_block(&idx, 2, 12345, 4096, 904).unwrap());
        let (mean, sigma) = standardization(&idx, 2).unwrap();
        let c = result_from_histogram(hist, mean, sigma);
        assert_eq!(a, c);
        let other_seed = simulate(&idx, 2, 5000, 54321).unwrap();
        assert_ne!(a.histogram, other_seed.histogram);
    }

    #[test]
    fn standardized_moments_concentrate() {
        let idx = index("complete:3", "union:complete:3x32");
        let result = simulate(&idx, 2, 20_000, 7).unwrap();
        assert!((result.mean_t - 8.0).abs() <= 4.0 * result.mean_t_se, "mean {}", result.mean_t);
        assert!(result.mean_z.abs() <= 4.0 * result.mean_z_se);
        assert!((result.variance_z - 1.0).abs() <= 4.0 * result.variance_z_se);
        assert!(result.ks_distance < 0.1);
    }

    #[test]
    fn sweep_tracks_exact_fourth_moments() {
        let h = Pattern::new(generate(&parse_spec("complete:3").unwrap()).unwrap()).unwrap();
        let family: Vec<GeneratorSpec> = [25u32, 50, 100, 200]
            .iter()
            .map(|m| parse_spec(&format!("union:complete:3x{m}")).unwrap())
            .collect();
        let rows = moment_sweep(&family, &h, 2, 20_000, 11).unwrap();
        assert_eq!(rows.len(), 4);
        for (row, m) in rows.iter().zip([25u32, 50, 100, 200]) {
            assert_eq!(row.host_n, 3 * m);
            assert_eq!(row.copy_count, m as u64);
            let [sq, sq_se] = row.abs_moments[0];
            assert!((sq - 1.0).abs() <= 4.0 * sq_se, "m={m}: E[Z^2] = {sq}");
            let [fourth, fourth_se] = row.abs_moments[1];
            let exact = 3.0 - 2.0 / (3.0 * m as f64);
            assert!((fourth - exact).abs() <= 4.0 * fourth_se, "m={m}: E[Z^4] = {fourth}");
        }
        // Bounded higher moments along the sweep.
        let eighth: Vec<f64> = rows.iter().map(|r| r.abs_moments[3][0]).collect();
        let min = eighth.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = eighth.iter().cloned().fold(0.0, f64::max);
        assert!(max <= 3.0 * min, "E[|Z|^8] spread {min}..{max}");
    }

    #[test]
    fn histogram_converges_to_the_exact_distribution() {
        let idx = index("complete:3", "complete:4");
        let result = simulate(&idx, 2, 1_000_000, 2024).unwrap();
        let exact = brute_force_distribution(&idx, 2).unwrap();
        let n = result.samples as f64;
        let mut tv = 0.0f64;
        for (&t, p) in &exact {
            let observed = result.histogram.get(&t).copied().unwrap_or(0) as f64 / n;
            tv += (observed - to_f64(p)).abs();
        }
        for (&t, &cnt) in &result.histogram {
            if !exact.contains_key(&t) {
                tv += cnt as f64 / n;
            }
        }
        tv /= 2.0;
        assert!(tv <= 0.02, "total variation {tv}");
        let _: &Q = exact.values().next().unwrap();
    }

    #[test]
    fn rejects_degenerate_requests() {
        let idx = index("complete:3", "complete:4");
        assert!(matches!(simulate(&idx, 2, 0, 1), Err(Error::Validation(_))));
        let empty = index("complete:3", "star:5");
        assert!(matches!(simulate(&empty, 2, 10, 1), Err(Error::UndefinedStatistic(_))));
    }

    #[test]
    fn csv_rendering_is_plot_ready() {
        let hist = BTreeMap::from([(0u64, 3u64), (2, 5), (7, 1)]);
        assert_eq!(render_histogram_csv(&hist), "t,count\n0,3\n2,5\n7,1\n");
    }
}
