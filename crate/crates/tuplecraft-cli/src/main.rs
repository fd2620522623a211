//! One binary in front of the whole toolkit: sieving, prime counting,
//! admissibility, censuses, equidistribution audits, and representation
//! experiments, each with text/JSON/CSV output. Identical invocations
//! produce byte-identical reports regardless of thread count.

mod output;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::{csv_pairs, csv_table, Format, Sink};
use tuplecraft::audit::{self, AuditConfig, WindowSet};
use tuplecraft::census::{self, Span, WindowEnd};
use tuplecraft::forms::{self, ScanOrder, TupleSet};
use tuplecraft::romanoff::{self, ProbeEntry};
use tuplecraft::{arith, sieve};

#[derive(Parser)]
#[command(
    name = "tuplecraft",
    version,
    about = "Prime tuples, window censuses, and equidistribution audits"
)]
struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Shorthand for --format json
    #[arg(long, global = true)]
    json: bool,

    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap worker threads (1 reproduces parallel output byte for byte)
    #[arg(long, global = true, env = "TUPLECRAFT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the primes in [lo, hi), one per line
    Sieve {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
    },
    /// Count primes up to x, optionally restricted to a residue class
    Pi {
        #[arg(long)]
        x: f64,
        /// Modulus of the residue class (needs --a)
        #[arg(long, requires = "a")]
        q: Option<u64>,
        /// Residue of the class (needs --q; may be negative)
        #[arg(long, requires = "q")]
        a: Option<i64>,
    },
    /// Logarithmic integral of x
    Li {
        #[arg(long)]
        x: f64,
    },
    /// Decide whether a tuple of forms is admissible
    Admissible {
        #[command(flatten)]
        tuple: TupleInput,
        /// Also report the singular-series product over primes up to this cutoff
        #[arg(long)]
        series_cutoff: Option<u64>,
    },
    /// Greedily extract an admissible subsystem (indices are 1-based)
    Subset {
        #[command(flatten)]
        tuple: TupleInput,
        /// Shuffle the scan order reproducibly before the greedy pass
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Count window points where at least m of the forms take prime values
    Census(CensusArgs),
    /// Equidistribution audits over residue classes
    #[command(subcommand)]
    Audit(AuditCmd),
    /// Additive representation experiments
    #[command(subcommand)]
    Romanoff(RomanoffCmd),
    /// Smallest prime above 0.9 ln ln x (the audits' excluded modulus)
    ChooseB {
        #[arg(long)]
        x: f64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TupleInput {
    /// Tuple file: one form per line as "a b", '#' starts a comment
    #[arg(long)]
    tuple_file: Option<PathBuf>,
    /// Comma-separated offsets o_j building the system {n + o_j}
    #[arg(long)]
    offsets: Option<String>,
}

impl TupleInput {
    fn load(&self) -> Result<TupleSet> {
        match (&self.tuple_file, &self.offsets) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading tuple file {}", path.display()))?;
                Ok(TupleSet::parse(&text)?)
            }
            (None, Some(list)) => Ok(TupleSet::from_offsets(&parse_int_list::<i64>(list)?)?),
            _ => unreachable!("clap enforces exactly one tuple source"),
        }
    }
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    tuple: TupleInput,
    /// Left end of the window [x, span*x)
    #[arg(long)]
    x: u64,
    /// Window span factor: 2 or 3
    #[arg(long, value_parser = parse_span)]
    span: Span,
    /// Minimum prime hits for a point to count (default: max(1, ceil(ln k / C)))
    #[arg(long)]
    threshold: Option<u32>,
    /// Constant C in the comparison bound x/((ln x)^k e^(Ck))
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    /// Shrink the window's right end by one point
    #[arg(long)]
    trimmed_end: bool,
}

#[derive(Subcommand)]
enum AuditCmd {
    /// Summed worst-class discrepancy of the set's own members
    Hyp1 {
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        ceiling: ModulusCeiling,
        /// Audit this explicit set instead of the naturals
        #[arg(long)]
        set_file: Option<PathBuf>,
    },
    /// Summed worst-class discrepancy of the primes each form finds
    Hyp2 {
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        tuple: TupleInput,
        /// Prime modulus excluded from the audit (default: choose-b for x)
        #[arg(long = "B")]
        b: Option<u64>,
        #[command(flatten)]
        ceiling: ModulusCeiling,
        #[arg(long)]
        set_file: Option<PathBuf>,
    },
    /// Worst-class concentration at one modulus, or swept up to a ceiling
    Hyp3 {
        #[arg(long)]
        x: u64,
        /// Single modulus to inspect
        #[arg(long, conflicts_with = "q_max", required_unless_present = "q_max")]
        q: Option<u64>,
        /// Sweep every modulus up to this ceiling
        #[arg(long = "Q")]
        q_max: Option<u64>,
        #[arg(long)]
        set_file: Option<PathBuf>,
    },
    /// Prime-counting discrepancy against li across moduli (exact sup scan)
    Bv {
        /// Scale annotation for the formal right side
        #[arg(long)]
        x: u64,
        /// Largest modulus audited
        #[arg(long)]
        rmax: u64,
        /// Right end of the inner scan over u
        #[arg(long = "U")]
        ucap: u64,
        /// Prime modulus excluded from the audit (default: choose-b for x)
        #[arg(long = "B")]
        b: Option<u64>,
        /// Stand-in constant c2 of the formal right side
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        /// Stand-in constant c3 of the formal right side
        #[arg(long, default_value_t = 1.0)]
        c3: f64,
    },
    /// Weighted prime-density statistic against its thresholds
    Delta {
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        tuple: TupleInput,
        /// Prime modulus whose density factor scales the statistic
        #[arg(long = "B")]
        b: Option<u64>,
        #[arg(long)]
        set_file: Option<PathBuf>,
    },
    /// Smallest prime above 0.9 ln ln x
    ChooseB {
        #[arg(long)]
        x: f64,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct ModulusCeiling {
    /// Modulus ceiling Q, given directly
    #[arg(long = "Q")]
    q_max: Option<u64>,
    /// Exponent with Q = floor(x^theta); default 1/3
    #[arg(long)]
    theta: Option<f64>,
}

impl ModulusCeiling {
    fn resolve(&self, x: u64) -> Result<u64> {
        match self.q_max {
            Some(q) => Ok(q),
            // the B/k slots of the config are placeholders here; only the
            // x^theta flooring is borrowed
            None => Ok(AuditConfig::new(x, self.theta.unwrap_or(1.0 / 3.0), 2, 1)?.q_max()),
        }
    }
}

#[derive(Subcommand)]
enum RomanoffCmd {
    /// Moments of the representation function f over [1, x]
    Profile {
        #[command(flatten)]
        set: SetInput,
        #[arg(long)]
        x: u64,
    },
    /// Running maxima of f at increasing checkpoints
    Probe {
        #[command(flatten)]
        set: SetInput,
        /// Largest checkpoint (default checkpoints: powers of 10 up to x)
        #[arg(long)]
        x: u64,
        /// Comma-separated checkpoint list overriding the default
        #[arg(long)]
        checkpoints: Option<String>,
    },
    /// Census the tuple built from the set's k largest members below x
    Cor1 {
        #[command(flatten)]
        set: SetInput,
        #[arg(long)]
        x: u64,
        /// How many of the largest members seed the tuple
        #[arg(long)]
        k: usize,
        /// Census threshold m (default: max(1, ceil(ln k)))
        #[arg(long)]
        threshold: Option<u32>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SetSource {
    /// Powers of this base
    #[arg(long)]
    base: Option<u64>,
    /// Repeated squares of this base
    #[arg(long)]
    doubly_exp: Option<u64>,
    /// Explicit members, one positive integer per line
    #[arg(long)]
    set_file: Option<PathBuf>,
}

#[derive(Args)]
struct SetInput {
    #[command(flatten)]
    source: SetSource,
    /// Drop duplicate members in --set-file instead of erroring
    #[arg(long, requires = "set_file")]
    dedup: bool,
}

impl SetInput {
    /// Materialize the set, capping generated members at `cap`.
    fn load(&self, cap: u64) -> Result<Vec<u64>> {
        if let Some(base) = self.source.base {
            return Ok(romanoff::powers(base, cap)?);
        }
        if let Some(base) = self.source.doubly_exp {
            return Ok(romanoff::doubly_exponential(base, cap)?);
        }
        let path = self
            .source
            .set_file
            .as_ref()
            .expect("clap enforces a source");
        let (members, dropped) = read_set_file(path, self.dedup)?;
        if dropped > 0 {
            eprintln!(
                "note: dropped {dropped} duplicate member(s) from {}",
                path.display()
            );
        }
        Ok(members)
    }
}

fn parse_span(s: &str) -> Result<Span, String> {
    match s {
        "2" => Ok(Span::Double),
        "3" => Ok(Span::Triple),
        _ => Err(format!("span must be 2 or 3, got {s}")),
    }
}

fn parse_int_list<T: std::str::FromStr>(list: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let mut out = Vec::new();
    for piece in list.split(',').flat_map(str::split_whitespace) {
        out.push(
            piece
                .parse::<T>()
                .with_context(|| format!("bad integer {piece:?} in list"))?,
        );
    }
    if out.is_empty() {
        bail!("empty integer list");
    }
    Ok(out)
}

fn read_set_file(path: &PathBuf, dedup: bool) -> Result<(Vec<u64>, usize)> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading set file {}", path.display()))?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: u64 = line
            .parse()
            .with_context(|| format!("{}:{}: bad member {line:?}", path.display(), idx + 1))?;
        values.push(v);
    }
    Ok(romanoff::from_values(values, dedup)?)
}

/// Window side of an audit: the naturals by default, a file-backed set
/// when one is supplied.
fn audit_window(set_file: &Option<PathBuf>, x: u64) -> Result<WindowSet> {
    match set_file {
        None => Ok(WindowSet::naturals(x)?),
        Some(path) => {
            let (members, _) = read_set_file(path, false)?;
            Ok(WindowSet::explicit(members, x)?)
        }
    }
}

/// Default excluded modulus when --B is omitted.
fn default_b(x: u64) -> Result<u64> {
    Ok(audit::choose_b(x as f64)?.b)
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    configure_threads(cli.threads)?;
    let sink = Sink::new(cli.format, cli.json, cli.out.clone());
    match cli.command {
        Command::Sieve { lo, hi } => cmd_sieve(&sink, lo, hi),
        Command::Pi { x, q, a } => cmd_pi(&sink, x, q, a),
        Command::Li { x } => cmd_li(&sink, x),
        Command::Admissible {
            tuple,
            series_cutoff,
        } => cmd_admissible(&sink, &tuple, series_cutoff),
        Command::Subset { tuple, seed } => cmd_subset(&sink, &tuple, seed),
        Command::Census(args) => cmd_census(&sink, &args),
        Command::Audit(audit_cmd) => match audit_cmd {
            AuditCmd::Hyp1 {
                x,
                ceiling,
                set_file,
            } => cmd_hyp1(&sink, x, &ceiling, &set_file),
            AuditCmd::Hyp2 {
                x,
                tuple,
                b,
                ceiling,
                set_file,
            } => cmd_hyp2(&sink, x, &tuple, b, &ceiling, &set_file),
            AuditCmd::Hyp3 {
                x,
                q,
                q_max,
                set_file,
            } => cmd_hyp3(&sink, x, q, q_max, &set_file),
            AuditCmd::Bv {
                x,
                rmax,
                ucap,
                b,
                c2,
                c3,
            } => cmd_bv(&sink, x, rmax, ucap, b, c2, c3),
            AuditCmd::Delta {
                x,
                tuple,
                b,
                set_file,
            } => cmd_delta(&sink, x, &tuple, b, &set_file),
            AuditCmd::ChooseB { x } => cmd_choose_b(&sink, x),
        },
        Command::Romanoff(rom) => match rom {
            RomanoffCmd::Profile { set, x } => cmd_profile(&sink, &set, x),
            RomanoffCmd::Probe {
                set,
                x,
                checkpoints,
            } => cmd_probe(&sink, &set, x, &checkpoints),
            RomanoffCmd::Cor1 {
                set,
                x,
                k,
                threshold,
            } => cmd_cor1(&sink, &set, x, k, threshold),
        },
        Command::ChooseB { x } => cmd_choose_b(&sink, x),
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) -> Result<()> {
    Ok(()) // sequential build: the flag is accepted and moot
}

#[derive(Serialize)]
struct SieveReport {
    lo: u64,
    hi: u64,
    count: u64,
    primes: Vec<u64>,
}

fn cmd_sieve(sink: &Sink, lo: u64, hi: u64) -> Result<()> {
    let table = sieve::sieve_window(lo, hi)?;
    let primes: Vec<u64> = table.iter().collect();
    let report = SieveReport {
        lo,
        hi,
        count: primes.len() as u64,
        primes,
    };
    sink.render(
        &report,
        || {
            report
                .primes
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join("\n")
        },
        || {
            csv_table(
                &["prime"],
                report.primes.iter().map(|p| vec![p.to_string()]),
            )
        },
    )
}

#[derive(Serialize)]
struct PiReport {
    x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<i64>,
    count: u64,
}

fn cmd_pi(sink: &Sink, x: f64, q: Option<u64>, a: Option<i64>) -> Result<()> {
    let count = match (q, a) {
        (Some(q), Some(a)) => sieve::prime_count_ap(x, q, a)?,
        _ => sieve::prime_count(x)?,
    };
    let report = PiReport { x, q, a, count };
    sink.render(
        &report,
        || match (q, a) {
            (Some(q), Some(a)) => format!("pi({x}; {q}, {a}) = {count}"),
            _ => format!("pi({x}) = {count}"),
        },
        || {
            let mut pairs = vec![("x", x.to_string())];
            if let (Some(q), Some(a)) = (q, a) {
                pairs.push(("q", q.to_string()));
                pairs.push(("a", a.to_string()));
            }
            pairs.push(("count", count.to_string()));
            csv_pairs(&pairs)
        },
    )
}

#[derive(Serialize)]
struct LiReport {
    x: f64,
    value: f64,
}

fn cmd_li(sink: &Sink, x: f64) -> Result<()> {
    let value = arith::log_integral(x)?;
    let report = LiReport { x, value };
    sink.render(
        &report,
        || format!("li({x}) = {value:.9}"),
        || csv_pairs(&[("x", x.to_string()), ("value", format!("{value:.9}"))]),
    )
}

#[derive(Serialize)]
struct AdmissibleReport {
    k: usize,
    tuple: String,
    admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series_cutoff: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    singular_series: Option<f64>,
}

fn cmd_admissible(sink: &Sink, tuple: &TupleInput, series_cutoff: Option<u64>) -> Result<()> {
    let tuple = tuple.load()?;
    let verdict = forms::is_admissible(&tuple);
    let singular_series = match series_cutoff {
        Some(cutoff) => Some(forms::singular_series(&tuple, cutoff)?),
        None => None,
    };
    let report = AdmissibleReport {
        k: tuple.k(),
        tuple: tuple.to_string(),
        admissible: verdict.is_admissible(),
        witness: verdict.witness(),
        series_cutoff,
        singular_series,
    };
    sink.render(
        &report,
        || {
            let mut text = match report.witness {
                None => "admissible: true".to_string(),
                Some(p) => format!("admissible: false (witness p={p})"),
            };
            if let (Some(s), Some(cutoff)) = (report.singular_series, series_cutoff) {
                let _ = write!(text, "\nsingular series (p <= {cutoff}): {s:.9}");
            }
            text
        },
        || {
            let mut pairs = vec![
                ("k", report.k.to_string()),
                ("admissible", report.admissible.to_string()),
                (
                    "witness",
                    report.witness.map_or_else(String::new, |p| p.to_string()),
                ),
            ];
            if let Some(s) = report.singular_series {
                pairs.push(("singular_series", format!("{s:.9}")));
            }
            csv_pairs(&pairs)
        },
    )
}

#[derive(Serialize)]
struct SubsetReport {
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    size: usize,
    /// 1-based positions into the input tuple, ascending.
    indices: Vec<usize>,
}

fn cmd_subset(sink: &Sink, tuple: &TupleInput, seed: Option<u64>) -> Result<()> {
    let tuple = tuple.load()?;
    let order = match seed {
        None => ScanOrder::Given,
        Some(s) => ScanOrder::Seeded(s),
    };
    let indices: Vec<usize> = forms::admissible_subset(&tuple, order)?
        .into_iter()
        .map(|i| i + 1)
        .collect();
    let report = SubsetReport {
        k: tuple.k(),
        seed,
        size: indices.len(),
        indices,
    };
    sink.render(
        &report,
        || {
            format!(
                "size: {}\nindices: {}",
                report.size,
                report
                    .indices
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            )
        },
        || {
            csv_table(
                &["index"],
                report.indices.iter().map(|i| vec![i.to_string()]),
            )
        },
    )
}

#[derive(Serialize)]
struct CensusReport {
    x: i64,
    span: u8,
    k: usize,
    m: u32,
    count: u64,
    bound: f64,
    histogram: BTreeMap<u32, u64>,
    meets_bound: bool,
    window: [i64; 2],
    value_collisions: bool,
    tuple: String,
}

fn cmd_census(sink: &Sink, args: &CensusArgs) -> Result<()> {
    let tuple = args.tuple.load()?;
    let m = match args.threshold {
        Some(m) => m,
        None => census::suggested_threshold(tuple.k(), args.c)?.max(1),
    };
    let end = if args.trimmed_end {
        WindowEnd::Trimmed
    } else {
        WindowEnd::Exclusive
    };
    let result = census::tuple_census(&tuple, args.x, args.span, m, end)?;
    let bound = census::theorem_bound(args.x, tuple.k(), args.c)?;
    let report = CensusReport {
        x: result.x,
        span: result.span.expect("tuple_census always sets the span"),
        k: result.k,
        m: result.m,
        count: result.count,
        bound,
        meets_bound: result.count as f64 >= bound,
        histogram: result.histogram.clone(),
        window: result.window,
        value_collisions: result.value_collisions,
        tuple: tuple.to_string(),
    };
    sink.render(
        &report,
        || {
            let mut text = format!(
                "tuple {} (k = {}), window [{}, {}), threshold m = {}\n\
                 count = {} points with >= {m} prime form-values\n\
                 bound x/((ln x)^k e^(Ck)) = {:.6} -> {}",
                report.tuple,
                report.k,
                report.window[0],
                report.window[1],
                report.m,
                report.count,
                report.bound,
                if report.meets_bound { "met" } else { "not met" },
            );
            text.push_str("\nhistogram:");
            for (hits, points) in &report.histogram {
                let _ = write!(text, "\n  {hits} prime values: {points} points");
            }
            if report.value_collisions {
                text.push_str("\nnote: some forms collide in value on this window");
            }
            text
        },
        || {
            csv_table(
                &["hits", "points"],
                report
                    .histogram
                    .iter()
                    .map(|(h, c)| vec![h.to_string(), c.to_string()]),
            )
        },
    )
}

fn discrepancy_text(report: &audit::DiscrepancyReport, label: &str) -> String {
    let mut text = format!(
        "{label}: x = {}, Q = {}{}\n",
        report.x,
        report.q_max,
        match report.modulus_filter {
            Some(b) => format!(", skipping multiples of B = {b}"),
            None => String::new(),
        }
    );
    for term in &report.terms {
        let _ = match term.worst_a {
            Some(a) => writeln!(
                text,
                "  q = {}: worst a = {a}, value = {}",
                term.q, term.value
            ),
            None => writeln!(text, "  q = {}: no eligible class, value = 0", term.q),
        };
    }
    let _ = write!(
        text,
        "sum = {}\nformal rhs {}/(ln x)^(100 k^2) ~ 10^{:.1} (k = {})",
        report.sum,
        match report.comparator.prime_count {
            Some(p) => format!("#P = {p}"),
            None => format!("#A = {}", report.comparator.set_size),
        },
        report.comparator.formal_rhs_log10,
        report.comparator.k,
    );
    text
}

fn discrepancy_csv(report: &audit::DiscrepancyReport) -> String {
    csv_table(
        &["q", "worst_a", "value"],
        report.terms.iter().map(|t| {
            vec![
                t.q.to_string(),
                t.worst_a.map_or_else(String::new, |a| a.to_string()),
                t.value.float.to_string(),
            ]
        }),
    )
}

fn cmd_hyp1(
    sink: &Sink,
    x: u64,
    ceiling: &ModulusCeiling,
    set_file: &Option<PathBuf>,
) -> Result<()> {
    let window = audit_window(set_file, x)?;
    let qmax = ceiling.resolve(x)?;
    let report = audit::hyp1_sum(&window, qmax, 1)?;
    sink.render(
        &report,
        || discrepancy_text(&report, "set equidistribution"),
        || discrepancy_csv(&report),
    )
}

#[derive(Serialize)]
struct FormDiscrepancy {
    form: String,
    #[serde(flatten)]
    report: audit::DiscrepancyReport,
}

fn cmd_hyp2(
    sink: &Sink,
    x: u64,
    tuple: &TupleInput,
    b: Option<u64>,
    ceiling: &ModulusCeiling,
    set_file: &Option<PathBuf>,
) -> Result<()> {
    let tuple = tuple.load()?;
    let window = audit_window(set_file, x)?;
    let bmod = match b {
        Some(b) => b,
        None => default_b(x)?,
    };
    let qmax = ceiling.resolve(x)?;
    let mut per_form = Vec::with_capacity(tuple.k());
    for form in tuple.forms() {
        per_form.push(FormDiscrepancy {
            form: form.to_string(),
            report: audit::hyp2_sum(&window, form, bmod, qmax, tuple.k())?,
        });
    }
    sink.render(
        &per_form,
        || {
            per_form
                .iter()
                .map(|f| {
                    discrepancy_text(&f.report, &format!("prime equidistribution of {}", f.form))
                })
                .collect::<Vec<_>>()
                .join("\n\n")
        },
        || {
            csv_table(
                &["form", "q", "worst_a", "value"],
                per_form.iter().flat_map(|f| {
                    f.report.terms.iter().map(|t| {
                        vec![
                            f.form.clone(),
                            t.q.to_string(),
                            t.worst_a.map_or_else(String::new, |a| a.to_string()),
                            t.value.float.to_string(),
                        ]
                    })
                }),
            )
        },
    )
}

fn cmd_hyp3(
    sink: &Sink,
    x: u64,
    q: Option<u64>,
    q_max: Option<u64>,
    set_file: &Option<PathBuf>,
) -> Result<()> {
    let window = audit_window(set_file, x)?;
    let moduli: Vec<u64> = match (q, q_max) {
        (Some(q), None) => vec![q],
        (None, Some(qmax)) => (1..=qmax).collect(),
        _ => unreachable!("clap enforces exactly one of --q/--Q"),
    };
    let reports = moduli
        .iter()
        .map(|&q| audit::hyp3_concentration(&window, q))
        .collect::<Result<Vec<_>, _>>()?;
    sink.render(
        &reports,
        || {
            let mut text = format!("concentration: x = {x}, #A = {}\n", reports[0].set_size);
            for r in &reports {
                let _ = writeln!(
                    text,
                    "  q = {}: max class count = {} at a = {}, ratio to #A/q = {}{}",
                    r.q,
                    r.max_count,
                    r.worst_a,
                    r.ratio,
                    if r.within_double { "" } else { "  (exceeds 2)" },
                );
            }
            let worst = reports
                .iter()
                .max_by(|l, r| {
                    l.ratio
                        .float
                        .partial_cmp(&r.ratio.float)
                        .expect("ratios are finite")
                })
                .expect("at least one modulus");
            let _ = write!(text, "largest ratio: {} at q = {}", worst.ratio, worst.q);
            text
        },
        || {
            csv_table(
                &["q", "max_count", "worst_a", "ratio"],
                reports.iter().map(|r| {
                    vec![
                        r.q.to_string(),
                        r.max_count.to_string(),
                        r.worst_a.to_string(),
                        r.ratio.float.to_string(),
                    ]
                }),
            )
        },
    )
}

fn cmd_bv(
    sink: &Sink,
    x: u64,
    rmax: u64,
    ucap: u64,
    b: Option<u64>,
    c2: f64,
    c3: f64,
) -> Result<()> {
    let bmod = match b {
        Some(b) => b,
        None => default_b(x)?,
    };
    let report = audit::bv_discrepancy(x, rmax, bmod, ucap, c2, c3)?;
    sink.render(
        &report,
        || {
            let mut text = format!(
                "prime-count discrepancy vs li: u <= {}, r <= {}, skipping multiples of B = {}\n",
                report.ucap, report.rmax, report.b
            );
            for term in &report.terms {
                let _ = writeln!(
                    text,
                    "  r = {}: worst class b = {}, sup = {:.6}",
                    term.q,
                    term.worst_a.expect("every modulus has a coprime class"),
                    term.value.float,
                );
            }
            let _ = write!(
                text,
                "sum = {:.6}\nformal rhs c2*x*exp(-c3*sqrt(ln x)) = {:.6} (c2 = {}, c3 = {})\n\
                 exceptional modulus branch: {}",
                report.sum.float,
                report.formal_rhs,
                report.c2,
                report.c3,
                report.exceptional_branch,
            );
            text
        },
        || {
            csv_table(
                &["r", "worst_b", "sup"],
                report.terms.iter().map(|t| {
                    vec![
                        t.q.to_string(),
                        t.worst_a.map_or_else(String::new, |a| a.to_string()),
                        t.value.float.to_string(),
                    ]
                }),
            )
        },
    )
}

fn cmd_delta(
    sink: &Sink,
    x: u64,
    tuple: &TupleInput,
    b: Option<u64>,
    set_file: &Option<PathBuf>,
) -> Result<()> {
    let tuple = tuple.load()?;
    let window = audit_window(set_file, x)?;
    let bmod = match b {
        Some(b) => b,
        None => default_b(x)?,
    };
    let report = audit::delta_statistic(&window, &tuple, bmod)?;
    sink.render(
        &report,
        || {
            let mut text = format!(
                "delta = {:.9} at x = {} (tuple {}, B = {})\n\
                 exact part (delta / ln x) = {}\n\
                 prime counts per form: {:?}\n\
                 exceeds 1/8: {}",
                report.delta,
                report.x,
                tuple,
                report.b,
                report.scaled,
                report.prime_counts,
                if report.exceeds_one_eighth {
                    "yes"
                } else {
                    "no"
                },
            );
            match (report.log_threshold, report.exceeds_log_threshold) {
                (Some(t), Some(met)) => {
                    let _ = write!(
                        text,
                        "\nexceeds 1/ln k = {:.6}: {}",
                        t,
                        if met { "yes" } else { "no" }
                    );
                }
                _ => text.push_str("\n1/ln k threshold: undefined for k = 1"),
            }
            text
        },
        || {
            csv_pairs(&[
                ("x", report.x.to_string()),
                ("k", report.k.to_string()),
                ("b", report.b.to_string()),
                ("delta", report.delta.to_string()),
                ("exceeds_one_eighth", report.exceeds_one_eighth.to_string()),
            ])
        },
    )
}

fn cmd_choose_b(sink: &Sink, x: f64) -> Result<()> {
    let report = audit::choose_b(x)?;
    sink.render(
        &report,
        || {
            format!(
                "B = {} (smallest prime above 0.9 ln ln x = {:.6}; exceptional modulus branch: {})",
                report.b, report.threshold, report.exceptional_branch
            )
        },
        || {
            csv_pairs(&[
                ("x", report.x.to_string()),
                ("threshold", report.threshold.to_string()),
                ("b", report.b.to_string()),
            ])
        },
    )
}

fn cmd_profile(sink: &Sink, set: &SetInput, x: u64) -> Result<()> {
    let members = set.load(x)?;
    let report = romanoff::profile(&members, x)?;
    sink.render(
        &report,
        || {
            let mut text = format!(
                "representation profile over [1, {}], {} set members\n\
                 sum f = {}, sum f^2 = {}, represented = {}\n\
                 Cauchy-Schwarz floor (sum f)^2 / sum f^2 = {}",
                report.x,
                report.set_size,
                report.sum_f,
                report.sum_f2,
                report.represented,
                report.cs_bound,
            );
            text.push_str("\nhistogram:");
            for (f, count) in &report.histogram {
                let _ = write!(text, "\n  f = {f}: {count} values of n");
            }
            text
        },
        || {
            csv_table(
                &["f", "count"],
                report
                    .histogram
                    .iter()
                    .map(|(f, c)| vec![f.to_string(), c.to_string()]),
            )
        },
    )
}

#[derive(Serialize)]
struct ProbeReport {
    set_size: usize,
    entries: Vec<ProbeEntry>,
}

fn cmd_probe(sink: &Sink, set: &SetInput, x: u64, checkpoints: &Option<String>) -> Result<()> {
    let checkpoints = match checkpoints {
        Some(list) => parse_int_list::<u64>(list)?,
        None => {
            let mut c = 10u64;
            let mut out = Vec::new();
            while c <= x {
                out.push(c);
                match c.checked_mul(10) {
                    Some(next) => c = next,
                    None => break,
                }
            }
            if out.is_empty() {
                out.push(x);
            }
            out
        }
    };
    let last = *checkpoints.last().expect("parse_int_list rejects empty");
    let members = set.load(last)?;
    let entries = romanoff::erdos_probe(&members, &checkpoints)?;
    let report = ProbeReport {
        set_size: members.len(),
        entries,
    };
    sink.render(
        &report,
        || {
            let mut text = format!("running maxima of f, {} set members\n", report.set_size);
            for e in &report.entries {
                let _ = writeln!(
                    text,
                    "  up to {}: max f = {} (first at n = {})",
                    e.x, e.max_f, e.attained_at
                );
            }
            text.pop();
            text
        },
        || {
            csv_table(
                &["x", "max_f", "attained_at"],
                report.entries.iter().map(|e| {
                    vec![
                        e.x.to_string(),
                        e.max_f.to_string(),
                        e.attained_at.to_string(),
                    ]
                }),
            )
        },
    )
}

fn cmd_cor1(sink: &Sink, set: &SetInput, x: u64, k: usize, threshold: Option<u32>) -> Result<()> {
    let members = set.load(x)?;
    let m = match threshold {
        Some(m) => m,
        None => census::suggested_threshold(k.max(1), 1.0)?.max(1),
    };
    let report = romanoff::corollary1_experiment(&members, k, x, m)?;
    sink.render(
        &report,
        || {
            let mut text = format!(
                "largest members: {:?}\nraw tuple {} shifted by {} to {}\n\
                 census over [{}, {}), threshold m = {}: count = {}",
                report.members,
                report.raw_tuple,
                report.shift,
                report.shifted_tuple,
                report.census.window[0],
                report.census.window[1],
                report.m,
                report.census.count,
            );
            text.push_str("\nhistogram:");
            for (hits, points) in &report.census.histogram {
                let _ = write!(text, "\n  {hits} prime values: {points} points");
            }
            text
        },
        || {
            csv_table(
                &["hits", "points"],
                report
                    .census
                    .histogram
                    .iter()
                    .map(|(h, c)| vec![h.to_string(), c.to_string()]),
            )
        },
    )
}
