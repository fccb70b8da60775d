//! The `ahj` command line.
//!
//! Exit codes: 0 success or claim holds, 1 claim fails, 2 usage or input error,
//! 3 budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds;
use crate::coloring::Coloring;
use crate::constructions;
use crate::error::Error;
use crate::hypercube::Shape;
use crate::repro;
use crate::search::{self, Certificate, SearchConfig, SearchOutcome, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ahj",
    version,
    about = "Exact search and verification for anti-Hales-Jewett numbers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count or list the combinatorial lines of [k]^n
    Lines(LinesArgs),
    /// Check a coloring file against expectations
    Verify(VerifyArgs),
    /// Build an explicit coloring
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Exact branch-and-bound search
    Search {
        #[command(subcommand)]
        mode: SearchMode,
    },
    /// Enumerate minimal rainbow-free colorings of [3]^n
    Enumerate(EnumerateArgs),
    /// Complete a partial coloring to a rainbow-free one with a given color count
    Complete(CompleteArgs),
    /// Table of best known bounds on ah(k, n)
    Bounds(BoundsArgs),
    /// Re-run every reproducible claim and print a pass/fail table
    Repro(ReproArgs),
}

#[derive(Args, Debug)]
struct LinesArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, conflicts_with = "list", required_unless_present = "list")]
    count: bool,
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: PathBuf,
    /// Require a total rainbow-free coloring
    #[arg(long)]
    expect_rf: bool,
    /// Require exactly this many distinct colors
    #[arg(long, value_name = "C")]
    expect_colors: Option<usize>,
    /// Require at most one repeated color
    #[arg(long)]
    expect_minimal: bool,
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the coloring here instead of stdout
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ConstructKind {
    /// (k-1)^n colors from the positions of symbols 1..k-2
    DigitPosition {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// One color everywhere
    Monochromatic {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stack a rainbow-free base coloring of [k]^(n-1) into [k]^n
    Recursive {
        #[arg(long)]
        base: PathBuf,
        /// Stacking coordinate (1-based)
        #[arg(long, default_value_t = 1)]
        coord: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Distinct colors on the given points, one dominant color elsewhere
    Singleton {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Comma-separated point indices
        #[arg(long, value_delimiter = ',')]
        points: Vec<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Partial [3]^4 coloring with the two 10-colorings of [3]^3 on two layers
    Arrangement {
        /// Three digits, one per layer along coordinate 1: pattern 1, pattern 2 or 0 (free)
        #[arg(long)]
        code: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Wall-clock budget in seconds
    #[arg(long, value_name = "SECS")]
    time_limit: Option<f64>,
    /// Node budget
    #[arg(long)]
    node_limit: Option<u64>,
    /// Disable root symmetry reduction
    #[arg(long)]
    no_symmetry: bool,
}

impl BudgetArgs {
    fn config(&self) -> Result<SearchConfig, Error> {
        let time_limit = match self.time_limit {
            None => None,
            Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
            Some(s) => {
                return Err(Error::InvalidArgument(format!(
                    "time limit must be positive, got {s}"
                )))
            }
        };
        let config = SearchConfig {
            time_limit,
            worker_count: self.threads,
            symmetry_reduction: !self.no_symmetry,
            node_limit: self.node_limit,
        };
        config.validate()?;
        Ok(config)
    }

    fn flags(&self) -> String {
        let mut s = format!("--threads {}", self.threads);
        if let Some(t) = self.time_limit {
            s += &format!(" --time-limit {t}");
        }
        if let Some(n) = self.node_limit {
            s += &format!(" --node-limit {n}");
        }
        if self.no_symmetry {
            s += " --no-symmetry";
        }
        s
    }
}

#[derive(Subcommand, Debug)]
enum SearchMode {
    /// Largest color count of a rainbow-free coloring; ah(k, n) is one more
    MaxColors {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the witness coloring here
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Number of colors
    #[arg(long)]
    colors: usize,
    /// Enumerate minimal colorings (the only supported mode)
    #[arg(long)]
    minimal_only: bool,
    /// Directory for one coloring file per result
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Feasible,
    Infeasible,
}

#[derive(Args, Debug)]
struct CompleteArgs {
    file: PathBuf,
    #[arg(long)]
    total_colors: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the completed coloring here when one exists
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Exit 1 unless the outcome matches
    #[arg(long, value_enum)]
    expect: Option<Expectation>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n_max: u32,
    /// Replace table entries with live exact searches where they are small enough
    #[arg(long)]
    recompute: bool,
    /// Per-search budget for --recompute, in seconds
    #[arg(long, default_value_t = 900.0)]
    time_limit: f64,
    /// Emit key=value records instead of the aligned table
    #[arg(long)]
    records: bool,
}

#[derive(Args, Debug)]
struct ReproArgs {
    /// Skip the slow claims (exact [3]^3 search and size-9/10 enumeration)
    #[arg(long)]
    quick: bool,
    /// Directory holding the shipped fixture colorings
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

/// Failure that maps to an exit code.
struct Exit {
    code: i32,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Exit {
    Exit {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    }
}

type Outcome = Result<i32, Exit>;

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Lines(a) => lines(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Construct { kind } => construct(kind, out),
        Command::Search { mode } => search_cmd(mode, out),
        Command::Enumerate(a) => enumerate(a, out),
        Command::Complete(a) => complete(a, out),
        Command::Bounds(a) => bounds_cmd(a, out),
        Command::Repro(a) => repro_cmd(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Exit { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn w(out: &mut dyn Write, text: impl AsRef<str>) {
    let _ = out.write_all(text.as_ref().as_bytes());
}

fn read_coloring(path: &Path) -> Result<Coloring, Exit> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Coloring::parse(&text).map_err(|e| Exit {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn lines(a: LinesArgs, out: &mut dyn Write) -> Outcome {
    let shape = Shape::new(a.k, a.n)?;
    if a.count {
        w(out, format!("{}\n", shape.line_count()));
    } else {
        for t in shape.lines() {
            w(out, format!("{t}\n"));
        }
    }
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let coloring = read_coloring(&a.file)?;
    let census = coloring.census();
    let shape = coloring.shape();
    w(
        out,
        format!(
            "file={}\nk={}\nn={}\n",
            a.file.display(),
            shape.k(),
            shape.n()
        ),
    );
    w(
        out,
        format!(
            "total={}\nunassigned={}\ncolors={}\n",
            coloring.is_total(),
            census.unassigned,
            census.distinct
        ),
    );
    let profile: Vec<String> = census
        .size_profile()
        .iter()
        .map(|s| s.to_string())
        .collect();
    w(out, format!("class_sizes={}\n", profile.join(",")));
    w(out, format!("minimal={}\n", census.is_minimal()));
    match census.dominant() {
        Some(d) => w(out, format!("dominant={d}\n")),
        None => w(out, "dominant=none\n"),
    }
    let rainbow = coloring.assigned_rainbow_lines();
    w(out, format!("rainbow_lines={}\n", rainbow.len()));
    for l in &rainbow {
        w(out, format!("rainbow={l}\n"));
    }

    let mut failed = false;
    let mut fail = |out: &mut dyn Write, what: &str, detail: String| {
        if !failed {
            w(out, format!("counterexample={detail}\n"));
        }
        w(out, format!("expectation={what} result=FAIL\n"));
        failed = true;
    };
    if a.expect_rf {
        if !coloring.is_total() {
            fail(
                out,
                "rf",
                format!("{} unassigned points", census.unassigned),
            );
        } else if let Some(l) = rainbow.first() {
            fail(out, "rf", format!("{l}"));
        } else {
            w(out, "expectation=rf result=PASS\n");
        }
    }
    if let Some(c) = a.expect_colors {
        if census.distinct == c {
            w(out, format!("expectation=colors:{c} result=PASS\n"));
        } else {
            fail(
                out,
                &format!("colors:{c}"),
                format!("found {} colors", census.distinct),
            );
        }
    }
    if a.expect_minimal {
        if census.is_minimal() {
            w(out, "expectation=minimal result=PASS\n");
        } else {
            fail(
                out,
                "minimal",
                format!(
                    "{} repeated colors",
                    census.size_profile().iter().filter(|&&s| s > 1).count()
                ),
            );
        }
    }
    Ok(if failed { EXIT_CLAIM_FAILS } else { EXIT_OK })
}

fn construct(kind: ConstructKind, out: &mut dyn Write) -> Outcome {
    let (name, coloring, output) = match kind {
        ConstructKind::DigitPosition { shape, out } => (
            "digit-position",
            constructions::digit_position(Shape::new(shape.k, shape.n)?)?,
            out.output,
        ),
        ConstructKind::Monochromatic { shape, out } => (
            "monochromatic",
            constructions::monochromatic(Shape::new(shape.k, shape.n)?),
            out.output,
        ),
        ConstructKind::Recursive { base, coord, out } => {
            let base = read_coloring(&base)?;
            (
                "recursive",
                constructions::stack_recursive(&base, coord)?,
                out.output,
            )
        }
        ConstructKind::Singleton { shape, points, out } => (
            "singleton",
            constructions::singleton_set(Shape::new(shape.k, shape.n)?, &points)?,
            out.output,
        ),
        ConstructKind::Arrangement { code, out } => {
            ("arrangement", search::arrangement(&code)?, out.output)
        }
    };
    // self-check before anything is written
    if let Some(line) = coloring.assigned_rainbow_lines().first() {
        return Err(Exit {
            code: EXIT_USAGE,
            message: format!("construction produced rainbow line {line}"),
        });
    }
    let text = coloring.to_text();
    match output {
        Some(path) => {
            write_file(&path, &text)?;
            let shape = coloring.shape();
            w(
                out,
                format!("construction={name}\nk={}\nn={}\n", shape.k(), shape.n()),
            );
            w(
                out,
                format!(
                    "colors={}\ntotal={}\noutput={}\n",
                    coloring.distinct_colors(),
                    coloring.is_total(),
                    path.display()
                ),
            );
        }
        None => w(out, text),
    }
    Ok(EXIT_OK)
}

fn record_outcome(out: &mut dyn Write, outcome: &SearchOutcome, started: Instant) {
    w(
        out,
        format!(
            "status={}\nvalue={}\nnodes={}\n",
            outcome.status, outcome.best_value, outcome.nodes_explored
        ),
    );
    match &outcome.certificate {
        Some(Certificate::RainbowLine(l)) => w(out, format!("reason=rainbow-line\nline={l}\n")),
        Some(Certificate::ForcedCell(cell)) => {
            w(
                out,
                format!("reason=forced-cell\nforced_point={}\n", cell.point),
            );
            for l in &cell.lines {
                w(out, format!("forced_line={l}\n"));
            }
        }
        None => {}
    }
    w(out, format!("wall_ms={}\n", started.elapsed().as_millis()));
}

fn write_witness(
    out: &mut dyn Write,
    outcome: &SearchOutcome,
    path: Option<&Path>,
) -> Result<(), Exit> {
    match (path, &outcome.witness) {
        (Some(path), Some(witness)) => {
            write_file(path, &witness.to_text())?;
            w(out, format!("certificate={}\n", path.display()));
        }
        _ => w(out, "certificate=none\n"),
    }
    Ok(())
}

fn budget_exit(status: Status) -> i32 {
    match status {
        Status::Optimal | Status::Infeasible => EXIT_OK,
        Status::FeasibleOnly | Status::Timeout => EXIT_BUDGET,
    }
}

fn search_cmd(mode: SearchMode, out: &mut dyn Write) -> Outcome {
    let SearchMode::MaxColors {
        shape,
        budget,
        certificate,
    } = mode;
    let config = budget.config()?;
    let s = Shape::new(shape.k, shape.n)?;
    let started = Instant::now();
    let outcome = search::max_rf_colors(s, &config)?;
    w(out, "command=search\nmode=max-colors\n");
    w(
        out,
        format!(
            "invocation=ahj search max-colors --k {} --n {} {}\n",
            shape.k,
            shape.n,
            budget.flags()
        ),
    );
    w(out, format!("k={}\nn={}\n", shape.k, shape.n));
    match outcome.anti_hales_jewett() {
        Some(ah) => w(out, format!("ah={ah}\n")),
        None => w(out, format!("ah_lower={}\n", outcome.best_value + 1)),
    }
    write_witness(out, &outcome, certificate.as_deref())?;
    record_outcome(out, &outcome, started);
    Ok(budget_exit(outcome.status))
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> Outcome {
    if !a.minimal_only {
        return Err(Exit {
            code: EXIT_USAGE,
            message: "only minimal colorings can be enumerated; pass --minimal-only".into(),
        });
    }
    let shape = Shape::new(a.shape.k, a.shape.n)?;
    if a.colors == 0 {
        return Err(Error::InvalidArgument("--colors must be at least 1".into()).into());
    }
    let started = Instant::now();
    let sets = search::enumerate_independent_sets(shape, a.colors - 1, false)?;
    let colorings = search::enumerate_minimal_rf(shape, a.colors)?;
    let orbits = search::orbit_representatives(shape, sets.clone())?;
    w(out, "command=enumerate\n");
    w(
        out,
        format!(
            "invocation=ahj enumerate --k {} --n {} --colors {} --minimal-only\n",
            a.shape.k, a.shape.n, a.colors
        ),
    );
    w(
        out,
        format!("k={}\nn={}\ncolors={}\n", a.shape.k, a.shape.n, a.colors),
    );
    w(
        out,
        format!(
            "independent_sets={}\ncount={}\ncount_up_to_symmetry={}\n",
            sets.len(),
            colorings.len(),
            orbits.len()
        ),
    );
    for (i, set) in sets.iter().enumerate() {
        let pts: Vec<String> = set.iter().map(|p| p.to_string()).collect();
        w(out, format!("set_{}={}\n", i + 1, pts.join(",")));
    }
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        for (i, c) in colorings.iter().enumerate() {
            let path = dir.join(format!("minimal_{:02}.ahj", i + 1));
            write_file(&path, &c.to_text())?;
            w(out, format!("written={}\n", path.display()));
        }
    }
    w(
        out,
        format!(
            "status=OPTIMAL\nwall_ms={}\n",
            started.elapsed().as_millis()
        ),
    );
    Ok(EXIT_OK)
}

fn complete(a: CompleteArgs, out: &mut dyn Write) -> Outcome {
    let config = a.budget.config()?;
    let partial = read_coloring(&a.file)?;
    let started = Instant::now();
    let outcome = search::complete(&partial, a.total_colors, &config)?;
    w(out, "command=complete\n");
    w(
        out,
        format!(
            "invocation=ahj complete {} --total-colors {} {}\n",
            a.file.display(),
            a.total_colors,
            a.budget.flags()
        ),
    );
    w(
        out,
        format!(
            "file={}\ntotal_colors={}\n",
            a.file.display(),
            a.total_colors
        ),
    );
    write_witness(out, &outcome, a.certificate.as_deref())?;
    record_outcome(out, &outcome, started);
    let code = budget_exit(outcome.status);
    let matched = match a.expect {
        None => true,
        Some(Expectation::Feasible) => outcome.status == Status::Optimal,
        Some(Expectation::Infeasible) => outcome.status == Status::Infeasible,
    };
    Ok(if code == EXIT_OK && !matched {
        EXIT_CLAIM_FAILS
    } else {
        code
    })
}

/// Shapes small enough for `--recompute` to search exactly.
fn recomputable(k: u32, n: u32) -> bool {
    Shape::new(k, n).is_ok_and(|s| s.point_count() <= 27)
}

fn bounds_cmd(a: BoundsArgs, out: &mut dyn Write) -> Outcome {
    let mut report = bounds::bounds_table(a.k, a.n_max)?;
    if a.recompute && a.k >= 2 {
        let config = SearchConfig {
            time_limit: Some(Duration::from_secs_f64(a.time_limit.max(0.001))),
            ..SearchConfig::default()
        };
        for n in (1..=a.n_max).filter(|&n| recomputable(a.k, n)) {
            let outcome = search::max_rf_colors(Shape::new(a.k, n)?, &config)?;
            if let Some(ah) = outcome.anti_hales_jewett() {
                report = report.with_exact(n, ah)?;
            }
        }
    }
    if a.records {
        w(out, report.to_records());
    } else {
        w(out, format!("bounds on ah({}, n), inclusive\n", a.k));
        w(out, report.to_table());
    }
    Ok(EXIT_OK)
}

fn repro_cmd(a: ReproArgs, out: &mut dyn Write) -> Outcome {
    let fixtures = a.fixtures.unwrap_or_else(repro::default_fixture_dir);
    let results = repro::run_all(&repro::ReproOptions {
        quick: a.quick,
        fixtures,
    });
    w(out, repro::render(&results));
    let failed = results.iter().any(|r| r.verdict == repro::Verdict::Fail);
    Ok(if failed { EXIT_CLAIM_FAILS } else { EXIT_OK })
}
