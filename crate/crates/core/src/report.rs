//! Normality diagnostics assembled from the census, moment, and
//! simulation engines, plus the deterministic JSON rendering of a full
//! report.
//!
//! The two headline quantities are the join-census ratio
//! `good_tuples / pair2_tuples²` and the fourth-moment gap `E[Z⁴] − 3`,
//! each also reported at the 1/20-th power at which they bound the
//! Kolmogorov distance. No multiplicative constant is applied to either:
//! the bounds hold up to unspecified constants, so the report exposes raw
//! values only. The variance sandwich `pair2·c^{2−2r}(c−1) ≤ Var[T] ≤
//! pair2·c^{1−r}` is carried in exact rationals.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;

// Builds that link std (tests, clippy) shadow the trait with inherent
// float methods and would flag this import; pure no_std builds need it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::census::CensusReport;
use crate::embed::CopyIndex;
use crate::moments::{exact_fourth_moment, MomentReport};
use crate::rat::{q_int, q_pow, q_u128, render, to_f64, Q};
use crate::sim::SimResult;
use crate::{Error, Result};

/// Colors at which the fourth-moment bound's hypotheses are met; below
/// this the gap can be negative and the report flags it.
pub const LARGE_C_THRESHOLD: u32 = 30;

/// The assembled diagnostics for one `(pattern, host, c)` instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `good_tuples / pair2_tuples²`.
    pub ratio: f64,
    /// `ratio^{1/20}`: the scale at which the ratio bounds the
    /// Kolmogorov distance.
    pub ratio_pow: f64,
    /// `E[Z⁴] − 3`, exactly.
    pub fourth_gap: Q,
    /// `|fourth_gap|^{1/20}`.
    pub gap_pow: f64,
    /// Exact lower bound `pair2_tuples · c^{2−2r} (c−1)` on the variance.
    pub sandwich_low: Q,
    /// Exact upper bound `pair2_tuples · c^{1−r}` on the variance.
    pub sandwich_high: Q,
    /// Measured Kolmogorov distance, when a simulation was attached.
    pub ks_distance: Option<f64>,
    /// Whether `c` is large enough for the fourth-moment bound's regime.
    pub large_c_regime: bool,
    /// Whether the gap is negative (possible below the large-c regime);
    /// flags that `gap_pow` must not be read as a one-sided bound.
    pub gap_negative: bool,
}

/// `good_tuples / pair2_tuples²` and its 1/20-th power.
pub fn clt_ratio(census: &CensusReport) -> Result<(f64, f64)> {
    if census.pair2_tuples == 0 {
        return Err(Error::UndefinedStatistic(
            "join ratio undefined: the host has no copies".to_owned(),
        ));
    }
    let pair2 = census.pair2_tuples as f64;
    let ratio = census.good_tuples as f64 / (pair2 * pair2);
    Ok((ratio, ratio.powf(0.05)))
}

/// `E[Z⁴] − 3`, exactly.
pub fn fourth_gap(idx: &CopyIndex, c: u32) -> Result<Q> {
    Ok(exact_fourth_moment(idx, c)? - q_int(3))
}

/// Builds the full diagnostic report; `census` must come from the same
/// index, and an attached simulation contributes its Kolmogorov distance.
pub fn assemble_report(
    idx: &CopyIndex,
    c: u32,
    census: &CensusReport,
    sim: Option<&SimResult>,
) -> Result<BoundReport> {
    let (ratio, ratio_pow) = clt_ratio(census)?;
    let gap = fourth_gap(idx, c)?;
    let gap_pow = to_f64(&gap).abs().powf(0.05);
    let r = idx.r() as i64;
    let pair2 = q_u128(census.pair2_tuples);
    Ok(BoundReport {
        ratio,
        ratio_pow,
        gap_negative: gap < q_int(0),
        fourth_gap: gap,
        gap_pow,
        sandwich_low: pair2.clone() * q_pow(c as u64, 2 - 2 * r) * q_int(c as i64 - 1),
        sandwich_high: pair2 * q_pow(c as u64, 1 - r),
        ks_distance: sim.map(|s| s.ks_distance),
        large_c_regime: c >= LARGE_C_THRESHOLD,
    })
}

/// Appends `s` as a JSON string literal, escaping as needed.
pub fn push_json_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            ch if (ch as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", ch as u32)),
            ch => out.push(ch),
        }
    }
    out.push('"');
}

/// Floats are rendered with 17 significant digits, enough to round-trip
/// every f64 and therefore reproduce byte-identical reports.
pub fn push_json_float(out: &mut String, v: f64) {
    out.push_str(&format!("{v:.16e}"));
}

/// Appends an exact rational as a `"p/q"` JSON string.
pub fn push_json_rational(out: &mut String, q: &Q) {
    push_json_string(out, &render(q));
}

/// Everything [`render_report_json`] serializes for one instance.
#[derive(Debug, Clone, Copy)]
pub struct ReportInputs<'a> {
    pub host_label: &'a str,
    pub pattern_label: &'a str,
    pub c: u32,
    pub census: &'a CensusReport,
    pub moments: &'a MomentReport,
    pub bound: &'a BoundReport,
    pub sim: Option<&'a SimResult>,
    pub seed: Option<u64>,
}

/// Renders the full report as single-line JSON with a fixed key order.
/// Identical inputs produce byte-identical output; optional fields render
/// as `null`.
pub fn render_report_json(inputs: &ReportInputs) -> String {
    let ReportInputs { host_label, pattern_label, c, census, moments, bound, sim, seed } = *inputs;
    let mut out = String::from("{\"host\":");
    push_json_string(&mut out, host_label);
    out.push_str(",\"pattern\":");
    push_json_string(&mut out, pattern_label);
    out.push_str(&format!(",\"c\":{c}"));
    out.push_str(&format!(",\"copies\":{}", moments.copy_count));
    out.push_str(&format!(",\"pair2_tuples\":{}", census.pair2_tuples));
    out.push_str(&format!(",\"q4_tuples\":{}", census.q4_tuples));
    out.push_str(&format!(",\"good_tuples\":{}", census.good_tuples));
    out.push_str(",\"mean_T\":");
    push_json_rational(&mut out, &moments.mean_t);
    out.push_str(",\"variance_T\":");
    push_json_rational(&mut out, &moments.variance_t);
    out.push_str(",\"fourth_moment_Z\":");
    match &moments.fourth_moment_z {
        Some(q) => push_json_rational(&mut out, q),
        None => out.push_str("null"),
    }
    out.push_str(",\"fourth_gap\":");
    push_json_rational(&mut out, &bound.fourth_gap);
    out.push_str(",\"clt_ratio\":");
    push_json_float(&mut out, bound.ratio);
    out.push_str(",\"clt_ratio_pow\":");
    push_json_float(&mut out, bound.ratio_pow);
    out.push_str(",\"sandwich\":[");
    push_json_rational(&mut out, &bound.sandwich_low);
    out.push(',');
    push_json_rational(&mut out, &bound.sandwich_high);
    out.push(']');
    out.push_str(",\"upsilon\":");
    out.push_str(&format!("{}", census.upsilon));
    out.push_str(",\"ks_distance\":");
    match bound.ks_distance {
        Some(ks) => push_json_float(&mut out, ks),
        None => out.push_str("null"),
    }
    out.push_str(",\"samples\":");
    match sim {
        Some(s) => out.push_str(&format!("{}", s.samples)),
        None => out.push_str("null"),
    }
    out.push_str(",\"seed\":");
    match seed {
        Some(s) => out.push_str(&format!("{s}")),
        None => out.push_str("null"),
    }
    out.push('}');
    out
}
