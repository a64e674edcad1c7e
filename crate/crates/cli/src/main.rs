//! Command-line front end for `monocopy-core`.
//!
//! Every subcommand builds a host graph (from `--graph FILE` or `--gen SPEC`),
//! embeds a connected pattern, and prints a deterministic artifact: rationals
//! are exact `p/q` strings, floats carry 17 significant digits, and map-backed
//! aggregation makes identical invocations produce byte-identical output,
//! including across different `--threads` settings.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use monocopy_core::census::{
    census_report, classify_join_sets, sorted_ordering, JoinClass, VertexOrdering,
    DEFAULT_SUPPORT_CAP,
};
use monocopy_core::decomp::verify_decomposition;
use monocopy_core::embed::{enumerate_copies_capped, CopyIndex, Pattern, DEFAULT_COPY_CAP};
use monocopy_core::graph::{generate, parse_edge_list, parse_spec, Graph};
use monocopy_core::moments::{brute_force_distribution, moment_report};
use monocopy_core::rat::{q_int, render};
use monocopy_core::report::{
    assemble_report, push_json_float, push_json_rational, push_json_string, render_report_json,
    ReportInputs,
};
use monocopy_core::sim::{
    merge_histograms, moment_sweep, render_histogram_csv, result_from_histogram, simulate,
    simulate_block, standardization, SimResult, BLOCK_SIZE, SWEEP_POWERS,
};
use monocopy_core::{color, Error as CoreError};

const EXIT_CODES_HELP: &str = "Exit codes:
  0  success
  2  command-line usage error
  3  input parsing error (graph file, generator spec, pattern spec, or copy list)
  4  validation error (unusable parameter, graph, or coloring)
  5  capacity limit exceeded (see --max-copies and --max-tuples)
  6  requested statistic is undefined for the instance
  7  I/O error
  8  decomposition check found a violation";

#[derive(Parser)]
#[command(
    name = "monocopy",
    version,
    about = "Monochromatic subgraph-copy statistics under uniform random colorings",
    after_help = EXIT_CODES_HELP,
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Host graph source; exactly one of the two must be given.
#[derive(Args)]
struct HostArgs {
    /// Host graph as an edge-list file: an `n=<count>` header line, then one
    /// `u v` pair per line (1-based), with `#` comments.
    #[arg(long, value_name = "FILE", conflicts_with = "gen", required_unless_present = "gen")]
    graph: Option<PathBuf>,

    /// Host graph from a generator spec: path:N, cycle:N, star:N, complete:N,
    /// kbipartite:A:B, union:<spec>x<M>, or er:N:P:SEED.
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
}

#[derive(Args)]
struct PatternArgs {
    /// Connected pattern spec; aliases: triangle = complete:3, cherry = star:2.
    #[arg(long, value_name = "SPEC")]
    pattern: String,

    /// Abort if the host has more embedded copies than this.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_COPY_CAP as u64)]
    max_copies: u64,
}

/// Vertex ordering used for anchors, Υ, and the decomposition.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderingChoice {
    /// Vertices in ξ-descending order (ties by vertex id).
    Sorted,
    /// Vertices in id order.
    Natural,
}

impl OrderingChoice {
    fn build(self, idx: &CopyIndex) -> VertexOrdering {
        match self {
            OrderingChoice::Sorted => sorted_ordering(idx),
            OrderingChoice::Natural => VertexOrdering::natural(idx.host_vertex_count()),
        }
    }

    fn label(self) -> &'static str {
        match self {
            OrderingChoice::Sorted => "sorted",
            OrderingChoice::Natural => "natural",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count the embedded copies of the pattern in the host.
    Copies {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Exact mean, variance, and standardized fourth moment of the
    /// monochromatic copy count, as single-line JSON.
    Moments {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Number of colors.
        #[arg(long, value_name = "C", default_value_t = 2)]
        colors: u32,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Join census: 2-shared pairs and quadruples, good quadruples, per-vertex
    /// ξ counts, and Υ under the chosen ordering, as single-line JSON.
    Joins {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Vertex ordering for Υ.
        #[arg(long, value_enum, default_value_t = OrderingChoice::Sorted)]
        ordering: OrderingChoice,
        /// Abort if the good-quadruple scan needs more support sets than this.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_SUPPORT_CAP)]
        max_tuples: u64,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Check the orthogonal decomposition identities and the martingale
    /// property on seeded random colorings; exits nonzero on any violation.
    DecomposeVerify {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Number of colors.
        #[arg(long, value_name = "C", default_value_t = 2)]
        colors: u32,
        /// How many seeded colorings to check.
        #[arg(long, value_name = "N", default_value_t = 10)]
        samples: u64,
        /// Master seed for the coloring streams.
        #[arg(long, value_name = "SEED", default_value_t = 0)]
        seed: u64,
        /// Vertex ordering for anchors and martingale prefixes.
        #[arg(long, value_enum, default_value_t = OrderingChoice::Sorted)]
        ordering: OrderingChoice,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Full report: census totals, exact moments, fourth-moment gap, variance
    /// sandwich, CLT ratio, and optionally a seeded simulation, as
    /// single-line JSON.
    Bound {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Number of colors.
        #[arg(long, value_name = "C", default_value_t = 2)]
        colors: u32,
        /// Monte Carlo sample count; 0 skips the simulation.
        #[arg(long, value_name = "N", default_value_t = 0)]
        samples: u64,
        /// Master seed for the simulation streams.
        #[arg(long, value_name = "SEED", default_value_t = 0)]
        seed: u64,
        /// Worker threads for the simulation; the output does not depend on it.
        #[arg(long, value_name = "N", default_value_t = 1)]
        threads: usize,
        /// Abort if the good-quadruple scan needs more support sets than this.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_SUPPORT_CAP)]
        max_tuples: u64,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Seeded Monte Carlo simulation of the standardized copy count: one JSON
    /// summary line, then the histogram as `t,count` CSV.
    Simulate {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Number of colors.
        #[arg(long, value_name = "C", default_value_t = 2)]
        colors: u32,
        /// Monte Carlo sample count.
        #[arg(long, value_name = "N")]
        samples: u64,
        /// Master seed for the simulation streams.
        #[arg(long, value_name = "SEED", default_value_t = 0)]
        seed: u64,
        /// Worker threads; the output does not depend on it.
        #[arg(long, value_name = "N", default_value_t = 1)]
        threads: usize,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Empirical absolute moments of Z across a family of hosts, as CSV.
    Sweep {
        /// Generator spec for one host; repeat the flag for the family.
        #[arg(long, value_name = "SPEC", required = true)]
        gen: Vec<String>,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Number of colors.
        #[arg(long, value_name = "C", default_value_t = 2)]
        colors: u32,
        /// Monte Carlo sample count per host.
        #[arg(long, value_name = "N")]
        samples: u64,
        /// Master seed for the simulation streams.
        #[arg(long, value_name = "SEED", default_value_t = 0)]
        seed: u64,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Classify four copies, given as comma-separated vertex lists, by join
    /// quality: good-join, 2-shared-4-join, 4-join-only (naming the failed
    /// condition), or not-a-join.
    Classify {
        /// Four copies, e.g. `1,2,3 2,3,4 4,5,6 5,6,7`.
        #[arg(value_name = "COPY", num_args = 4)]
        copies: Vec<String>,
        /// Host graph file for membership validation (needs --pattern).
        #[arg(long, value_name = "FILE", conflicts_with = "gen")]
        graph: Option<PathBuf>,
        /// Host generator spec for membership validation (needs --pattern).
        #[arg(long, value_name = "SPEC")]
        gen: Option<String>,
        /// Pattern whose copies the lists must be (needs a graph source).
        #[arg(long, value_name = "SPEC")]
        pattern: Option<String>,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Exact distribution of the copy count over all colorings, as
    /// `t,probability` CSV with exact rationals.
    Oracle {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        pattern: PatternArgs,
        /// Number of colors.
        #[arg(long, value_name = "C", default_value_t = 2)]
        colors: u32,
        /// Write the output here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// Errors carry the exit code documented in `--help`.
enum CliError {
    Core(CoreError),
    Io(String),
    Violations(u64),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Violations(n) => write!(f, "decomposition check failed: {n} violation(s)"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::Parse(_)) => 3,
            CliError::Core(CoreError::Validation(_)) => 4,
            CliError::Core(CoreError::Capacity(_)) => 5,
            CliError::Core(CoreError::UndefinedStatistic(_)) => 6,
            CliError::Io(_) => 7,
            CliError::Violations(_) => 8,
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Reads or generates the host graph; the label echoes the user's source.
fn load_host(graph: &Option<PathBuf>, gen: &Option<String>) -> Result<(Graph, String), CliError> {
    if let Some(path) = graph {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Ok((parse_edge_list(&text)?, path.display().to_string()))
    } else if let Some(spec) = gen {
        Ok((generate(&parse_spec(spec)?)?, spec.clone()))
    } else {
        Err(CliError::Core(CoreError::Validation(
            "a host graph needs --graph FILE or --gen SPEC".to_owned(),
        )))
    }
}

fn resolve_pattern_spec(spec: &str) -> &str {
    match spec {
        "triangle" => "complete:3",
        "cherry" => "star:2",
        other => other,
    }
}

/// Builds the pattern; the label echoes the user's spelling, aliases included.
fn build_pattern(spec: &str) -> Result<(Pattern, String), CliError> {
    let g = generate(&parse_spec(resolve_pattern_spec(spec))?)?;
    Ok((Pattern::new(g)?, spec.to_owned()))
}

fn build_index(host: &HostArgs, pattern: &PatternArgs) -> Result<(CopyIndex, String, String), CliError> {
    let (g, host_label) = load_host(&host.graph, &host.gen)?;
    let (h, pattern_label) = build_pattern(&pattern.pattern)?;
    let idx = enumerate_copies_capped(&h, &g, pattern.max_copies as usize)?;
    Ok((idx, host_label, pattern_label))
}

/// Writes the artifact to `--out` or stdout.
fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Shards simulation blocks round-robin over `threads` workers. Merging
/// per-block histograms is commutative, so the result is identical to the
/// serial run no matter the worker count.
fn simulate_threaded(
    idx: &CopyIndex,
    c: u32,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<SimResult, CliError> {
    if threads <= 1 {
        return Ok(simulate(idx, c, samples, seed)?);
    }
    if samples == 0 {
        return Err(CliError::Core(CoreError::Validation("need at least one sample".to_owned())));
    }
    let (mean, sigma) = standardization(idx, c)?;
    let block_count = samples.div_ceil(BLOCK_SIZE);
    let workers = threads.min(block_count as usize).max(1) as u64;
    let partials: Vec<Result<BTreeMap<u64, u64>, CoreError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut local: BTreeMap<u64, u64> = BTreeMap::new();
                    let mut block = w;
                    while block < block_count {
                        let start = block * BLOCK_SIZE;
                        let len = BLOCK_SIZE.min(samples - start);
                        merge_histograms(&mut local, simulate_block(idx, c, seed, start, len)?);
                        block += workers;
                    }
                    Ok(local)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("simulation worker panicked")).collect()
    });
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for partial in partials {
        merge_histograms(&mut hist, partial?);
    }
    Ok(result_from_histogram(hist, mean, sigma))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Copies { host, pattern, out } => {
            let (g, host_label) = load_host(&host.graph, &host.gen)?;
            let (h, pattern_label) = build_pattern(&pattern.pattern)?;
            let idx = enumerate_copies_capped(&h, &g, pattern.max_copies as usize)?;
            let mut text = String::new();
            text.push_str(&format!(
                "host: {host_label}: {} vertices, {} edges\n",
                g.vertex_count(),
                g.edge_count(),
            ));
            text.push_str(&format!(
                "pattern: {pattern_label}: {} vertices, {} automorphisms\n",
                idx.r(),
                idx.aut_count(),
            ));
            text.push_str(&format!("copies: {}\n", idx.copy_count()));
            text.push_str(&format!(
                "embeddings: {}\n",
                idx.copy_count() as u128 * idx.aut_count() as u128
            ));
            emit(&out, &text)
        }

        Command::Moments { host, pattern, colors, out } => {
            let (idx, host_label, pattern_label) = build_index(&host, &pattern)?;
            let rep = moment_report(&idx, colors, true)?;
            let mut json = String::from("{\"host\":");
            push_json_string(&mut json, &host_label);
            json.push_str(",\"pattern\":");
            push_json_string(&mut json, &pattern_label);
            json.push_str(&format!(",\"c\":{colors}"));
            json.push_str(&format!(",\"copies\":{}", rep.copy_count));
            json.push_str(&format!(",\"pair2_tuples\":{}", rep.pair2_count));
            json.push_str(",\"mean_T\":");
            push_json_rational(&mut json, &rep.mean_t);
            json.push_str(",\"variance_T\":");
            push_json_rational(&mut json, &rep.variance_t);
            json.push_str(",\"fourth_moment_Z\":");
            match &rep.fourth_moment_z {
                Some(q) => push_json_rational(&mut json, q),
                None => json.push_str("null"),
            }
            json.push_str("}\n");
            emit(&out, &json)
        }

        Command::Joins { host, pattern, ordering, max_tuples, out } => {
            let (idx, host_label, pattern_label) = build_index(&host, &pattern)?;
            let rep = census_report(&idx, &ordering.build(&idx), max_tuples)?;
            let mut json = String::from("{\"host\":");
            push_json_string(&mut json, &host_label);
            json.push_str(",\"pattern\":");
            push_json_string(&mut json, &pattern_label);
            json.push_str(",\"ordering\":");
            push_json_string(&mut json, ordering.label());
            json.push_str(&format!(",\"pair2_tuples\":{}", rep.pair2_tuples));
            json.push_str(&format!(",\"q4_tuples\":{}", rep.q4_tuples));
            json.push_str(&format!(",\"good_tuples\":{}", rep.good_tuples));
            json.push_str(&format!(",\"upsilon\":{}", rep.upsilon));
            json.push_str(",\"xi\":[");
            for (i, count) in rep.xi.iter().enumerate() {
                if i > 0 {
                    json.push(',');
                }
                json.push_str(&count.to_string());
            }
            json.push_str("]}\n");
            emit(&out, &json)
        }

        Command::DecomposeVerify { host, pattern, colors, samples, seed, ordering, out } => {
            let (idx, host_label, pattern_label) = build_index(&host, &pattern)?;
            let ord = ordering.build(&idx);
            let n = idx.host_vertex_count();
            let (mut t_bad, mut z_bad, mut mart_bad) = (0u64, 0u64, 0u64);
            for stream in 0..samples {
                let x = color::sample_coloring(
                    n,
                    colors,
                    color::SeedSpec { master_seed: seed, stream_index: stream },
                )?;
                let check = verify_decomposition(&idx, colors, &x, &ord)?;
                if check.t_identity_residual != q_int(0) {
                    t_bad += 1;
                }
                if check.z_identity_residual != q_int(0) {
                    z_bad += 1;
                }
                mart_bad += check.martingale_violations;
            }
            let total = t_bad + z_bad + mart_bad;
            let mut text = String::new();
            text.push_str(&format!("host: {host_label}\n"));
            text.push_str(&format!("pattern: {pattern_label}\n"));
            text.push_str(&format!("colors: {colors}\n"));
            text.push_str(&format!("colorings: {samples} (seed {seed}, ordering {})\n", ordering.label()));
            text.push_str(&format!("t identity violations: {t_bad}\n"));
            text.push_str(&format!("z identity violations: {z_bad}\n"));
            text.push_str(&format!("martingale violations: {mart_bad}\n"));
            text.push_str(if total == 0 { "status: ok\n" } else { "status: FAILED\n" });
            emit(&out, &text)?;
            if total == 0 {
                Ok(())
            } else {
                Err(CliError::Violations(total))
            }
        }

        Command::Bound { host, pattern, colors, samples, seed, threads, max_tuples, out } => {
            let (idx, host_label, pattern_label) = build_index(&host, &pattern)?;
            let census = census_report(&idx, &sorted_ordering(&idx), max_tuples)?;
            let moments = moment_report(&idx, colors, true)?;
            let sim_result = if samples > 0 {
                Some(simulate_threaded(&idx, colors, samples, seed, threads)?)
            } else {
                None
            };
            let bound = assemble_report(&idx, colors, &census, sim_result.as_ref())?;
            let json = render_report_json(&ReportInputs {
                host_label: &host_label,
                pattern_label: &pattern_label,
                c: colors,
                census: &census,
                moments: &moments,
                bound: &bound,
                sim: sim_result.as_ref(),
                seed: sim_result.as_ref().map(|_| seed),
            });
            emit(&out, &format!("{json}\n"))
        }

        Command::Simulate { host, pattern, colors, samples, seed, threads, out } => {
            let (idx, host_label, pattern_label) = build_index(&host, &pattern)?;
            let res = simulate_threaded(&idx, colors, samples, seed, threads)?;
            let mut text = String::from("{\"host\":");
            push_json_string(&mut text, &host_label);
            text.push_str(",\"pattern\":");
            push_json_string(&mut text, &pattern_label);
            text.push_str(&format!(",\"c\":{colors}"));
            text.push_str(&format!(",\"samples\":{}", res.samples));
            text.push_str(&format!(",\"seed\":{seed}"));
            for (key, value) in [
                ("mean_T", res.mean_t),
                ("mean_T_se", res.mean_t_se),
                ("mean_Z", res.mean_z),
                ("mean_Z_se", res.mean_z_se),
                ("variance_Z", res.variance_z),
                ("variance_Z_se", res.variance_z_se),
                ("fourth_Z", res.fourth_z),
                ("fourth_Z_se", res.fourth_z_se),
                ("ks_distance", res.ks_distance),
                ("exact_mean_T", res.exact_mean_t),
                ("exact_sigma_T", res.exact_sigma_t),
            ] {
                text.push_str(&format!(",\"{key}\":"));
                push_json_float(&mut text, value);
            }
            text.push_str("}\n");
            text.push_str(&render_histogram_csv(&res.histogram));
            emit(&out, &text)
        }

        Command::Sweep { gen, pattern, colors, samples, seed, out } => {
            let family = gen
                .iter()
                .map(|s| parse_spec(s))
                .collect::<Result<Vec<_>, _>>()?;
            let (h, _) = build_pattern(&pattern.pattern)?;
            let rows = moment_sweep(&family, &h, colors, samples, seed)?;
            let mut text = String::from("n,copies,samples");
            for p in SWEEP_POWERS {
                text.push_str(&format!(",m{p},m{p}_se"));
            }
            text.push('\n');
            for row in &rows {
                text.push_str(&format!("{},{},{}", row.host_n, row.copy_count, row.samples));
                for [value, se] in row.abs_moments {
                    text.push_str(&format!(",{value:.16e},{se:.16e}"));
                }
                text.push('\n');
            }
            emit(&out, &text)
        }

        Command::Classify { copies, graph, gen, pattern, out } => {
            let lists = copies
                .iter()
                .map(|s| parse_vertex_list(s))
                .collect::<Result<Vec<Vec<u32>>, CliError>>()?;
            let line = classify_line(&lists, &graph, &gen, &pattern)?;
            emit(&out, &format!("{line}\n"))
        }

        Command::Oracle { host, pattern, colors, out } => {
            let (idx, _, _) = build_index(&host, &pattern)?;
            let dist = brute_force_distribution(&idx, colors)?;
            let mut text = String::from("t,probability\n");
            for (t, p) in &dist {
                text.push_str(&format!("{t},{}\n", render(p)));
            }
            emit(&out, &text)
        }
    }
}

/// Parses `1,2,3` into a vertex list.
fn parse_vertex_list(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|field| {
            field
                .trim()
                .parse::<u32>()
                .map_err(|_| {
                    CliError::Core(CoreError::Parse(format!(
                        "invalid vertex {field:?} in copy list {s:?}"
                    )))
                })
        })
        .collect()
}

/// Classifies four vertex lists, optionally validating each against the
/// copies of a pattern in a host.
fn classify_line(
    lists: &[Vec<u32>],
    graph: &Option<PathBuf>,
    gen: &Option<String>,
    pattern: &Option<String>,
) -> Result<String, CliError> {
    let has_host = graph.is_some() || gen.is_some();
    match (has_host, pattern) {
        (true, Some(spec)) => {
            let (g, _) = load_host(graph, gen)?;
            let (h, _) = build_pattern(spec)?;
            let idx = enumerate_copies_capped(&h, &g, DEFAULT_COPY_CAP)?;
            for list in lists {
                let mut sorted = list.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != list.len() || idx.copies_through(&sorted) == 0
                    || sorted.len() != idx.r() as usize
                {
                    return Ok(format!(
                        "not-a-join: {} is not a copy of the pattern in the host",
                        render_list(list)
                    ));
                }
            }
        }
        (false, None) => {}
        _ => {
            return Err(CliError::Core(CoreError::Validation(
                "membership validation needs both a graph source and --pattern".to_owned(),
            )))
        }
    }
    let slots: [&[u32]; 4] = [&lists[0], &lists[1], &lists[2], &lists[3]];
    Ok(match classify_join_sets(slots)? {
        JoinClass::TwoShared => "2-shared-4-join".to_owned(),
        JoinClass::Good => "good-join".to_owned(),
        JoinClass::FailsGood => "4-join-only: fails condition (good)".to_owned(),
        JoinClass::FailsVgood => "4-join-only: fails condition (vgood)".to_owned(),
    })
}

fn render_list(list: &[u32]) -> String {
    let mut out = String::new();
    for (i, v) in list.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&v.to_string());
    }
    out
}
