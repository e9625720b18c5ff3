//! `mcsort`: generate, simulate, measure, export and verify
//! metastability-containing sorting circuits.
//!
//! Exit status: 0 on success, 1 when a verification finds a failure, 2 on
//! usage, input or format errors.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcsort::netlist::{
    export_structural_hdl, from_json, metrics, propagate_constants, simulate, to_json, Metrics,
    Netlist,
};
use mcsort::network::{
    build_schedule_sort, builtin_schedule, ComparatorSchedule, NetworkVariant, Orientation,
};
use mcsort::synth::{build_two_sort, build_two_sort_unfolded};
use mcsort::verify::{
    run_property_suites, verify_network_netlist, verify_schedule, verify_two_sort_netlist, Mode,
    VerifyReport,
};
use mcsort::{TernaryWord, Trit};
use ports::group_outputs;

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn write_stdout(args: std::fmt::Arguments) {
    let mut stdout = io::stdout().lock();
    if let Err(e) = stdout.write_fmt(args).and_then(|_| stdout.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing to stdout: {e}");
        std::process::exit(2);
    }
}

macro_rules! out {
    ($($t:tt)*) => { write_stdout(format_args!($($t)*)) };
}

macro_rules! outln {
    () => { out!("\n") };
    ($($t:tt)*) => { write_stdout(format_args!("{}\n", format_args!($($t)*))) };
}

mod ports;

#[derive(Parser)]
#[command(
    name = "mcsort",
    version,
    about = "Metastability-containing sorting circuits over Gray code"
)]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for verification (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a netlist.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Ternary simulation of a netlist.
    Sim(SimArgs),
    /// Gate counts and depth.
    Stats(NetlistArg),
    /// Write a netlist as JSON or structural Verilog.
    Export(ExportArgs),
    /// Check circuits against their oracles.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// 2-sort(B) comparator.
    TwoSort(TwoSortArgs),
    /// n-channel sorting network of 2-sort(B) comparators.
    NSort(NSortArgs),
}

#[derive(Args)]
struct TwoSortArgs {
    /// Bits per input word.
    #[arg(long)]
    bits: usize,
    /// Build the first column from a constant-fed out_M block.
    #[arg(long)]
    unfolded: bool,
    /// Run constant propagation on the result.
    #[arg(long)]
    propagate_constants: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Size,
    Depth,
}

#[derive(Args, Clone)]
struct NetworkArgs {
    /// Channel count; 4, 7 and 10 use stored schedules, others Batcher's.
    #[arg(long)]
    channels: Option<usize>,
    #[arg(long, value_enum, default_value = "size")]
    variant: Variant,
    /// Schedule file `{"channels": n, "layers": [[[i, j], ...], ...]}`.
    #[arg(long)]
    schedule: Option<PathBuf>,
}

#[derive(Args)]
struct NSortArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Bits per input word.
    #[arg(long)]
    bits: usize,
    /// Route the minimum to the lower channel.
    #[arg(long)]
    ascending: bool,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NetlistArg {
    /// Netlist JSON file.
    #[arg(long)]
    netlist: PathBuf,
}

#[derive(Args)]
struct SimArgs {
    /// Netlist JSON file.
    #[arg(long)]
    netlist: PathBuf,
    /// Word for inputs g_1..g_B.
    #[arg(long, requires = "h")]
    g: Option<String>,
    /// Word for inputs h_1..h_B.
    #[arg(long, requires = "g")]
    h: Option<String>,
    /// `name=word`: a single input, or inputs name_1..name_k.
    #[arg(long, value_name = "NAME=WORD")]
    assign: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Hdl,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    /// Netlist JSON file.
    #[arg(long)]
    netlist: PathBuf,
    #[arg(long, value_enum)]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModeArgs {
    /// Every tuple of valid inputs (the default).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Uniformly sampled tuples, seeded by --seed.
    #[arg(long)]
    samples: Option<u64>,
}

impl ModeArgs {
    fn mode(&self, seed: u64) -> Mode {
        match self.samples {
            Some(samples) => Mode::Random { seed, samples },
            None => Mode::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// 2-sort(B) against the closure of the stable max/min.
    TwoSort {
        /// Bits per input word.
        #[arg(long)]
        bits: usize,
        /// Verify this netlist instead of a freshly generated one.
        #[arg(long)]
        netlist: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Sorting network against a rank sort of its inputs.
    Network {
        #[command(flatten)]
        network: NetworkArgs,
        /// Bits per input word.
        #[arg(long)]
        bits: usize,
        /// Verify this netlist instead of a freshly generated one.
        #[arg(long)]
        netlist: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// The FSM and code property suites.
    Properties,
}

fn read_netlist(path: &Path) -> Result<Netlist> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            out!("{text}");
            if !text.ends_with('\n') {
                outln!();
            }
            Ok(())
        }
    }
}

fn metrics_text(m: &Metrics) -> String {
    format!(
        "gates: {}\n  AND: {}\n  OR: {}\n  NOT: {}\n  CONST: {}\ndepth: {}",
        m.total, m.count_and, m.count_or, m.count_not, m.count_const, m.depth
    )
}

fn print_json(v: &serde_json::Value) {
    outln!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON value serialises")
    );
}

fn schedule_for(args: &NetworkArgs) -> Result<(ComparatorSchedule, String)> {
    if let Some(path) = &args.schedule {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let s = ComparatorSchedule::from_json(&text)
            .with_context(|| format!("in {}", path.display()))?;
        if let Some(c) = args.channels {
            if c != s.channels() {
                bail!(
                    "--channels {c} does not match the schedule's {} channels",
                    s.channels()
                );
            }
        }
        return Ok((s, path.display().to_string()));
    }
    let channels = args
        .channels
        .ok_or_else(|| anyhow!("either --channels or --schedule is required"))?;
    let v = NetworkVariant::for_channels(channels, matches!(args.variant, Variant::Depth));
    Ok((builtin_schedule(v)?, v.to_string()))
}

/// Generated netlists go to the file and a summary to stdout, or the
/// netlist itself to stdout.
fn emit_generated(n: &Netlist, out: Option<&Path>, json: bool) -> Result<()> {
    let m = metrics(n)?;
    match out {
        Some(p) => {
            write_or_print(Some(p), &to_json(n))?;
            if json {
                print_json(&serde_json::json!({ "name": n.name, "file": p, "metrics": m }));
            } else {
                outln!("wrote {}\n{}", p.display(), metrics_text(&m));
            }
        }
        None => write_or_print(None, &to_json(n))?,
    }
    Ok(())
}

fn parse_word(s: &str) -> Result<TernaryWord> {
    s.parse::<TernaryWord>()
        .map_err(|e| anyhow!("bad word {s:?}: {e}"))
}

fn bind_word(
    n: &Netlist,
    a: &mut HashMap<String, Trit>,
    name: &str,
    word: &TernaryWord,
) -> Result<()> {
    if word.width() == 1 && n.inputs.iter().any(|i| i == name) {
        a.insert(name.to_string(), word.trits()[0]);
        return Ok(());
    }
    for (i, &t) in word.trits().iter().enumerate() {
        let port = format!("{name}_{}", i + 1);
        if !n.inputs.contains(&port) {
            bail!("netlist has no input {port:?}");
        }
        a.insert(port, t);
    }
    Ok(())
}

fn run_sim(args: &SimArgs, json: bool) -> Result<()> {
    let n = read_netlist(&args.netlist)?;
    let mut a = HashMap::new();
    if let (Some(g), Some(h)) = (&args.g, &args.h) {
        bind_word(&n, &mut a, "g", &parse_word(g)?)?;
        bind_word(&n, &mut a, "h", &parse_word(h)?)?;
    }
    for item in &args.assign {
        let (name, word) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("--assign expects NAME=WORD, got {item:?}"))?;
        bind_word(&n, &mut a, name, &parse_word(word)?)?;
    }
    let out = simulate(&n, &a)?;
    let groups = group_outputs(&out);
    if json {
        let map: serde_json::Map<String, serde_json::Value> =
            groups.into_iter().map(|(k, v)| (k, v.into())).collect();
        print_json(&serde_json::json!({ "outputs": map }));
    } else {
        let parts: Vec<String> = groups
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        outln!("{}", parts.join(" "));
    }
    Ok(())
}

fn run_export(args: &ExportArgs, json: bool) -> Result<()> {
    let n = read_netlist(&args.netlist)?;
    match args.format {
        Format::Json => write_or_print(args.out.as_deref(), &to_json(&n)),
        Format::Hdl => {
            let e = export_structural_hdl(&n)?;
            for (from, to) in &e.renames {
                eprintln!("renamed {from:?} -> {to}");
            }
            if json {
                let renames: Vec<_> = e
                    .renames
                    .iter()
                    .map(|(a, b)| serde_json::json!([a, b]))
                    .collect();
                print_json(&serde_json::json!({ "hdl": e.text, "renames": renames }));
                if let Some(p) = &args.out {
                    write_or_print(Some(p), &e.text)?;
                }
                Ok(())
            } else {
                write_or_print(args.out.as_deref(), &e.text)
            }
        }
    }
}

fn run_verify(cmd: &VerifyCommand, seed: u64) -> Result<VerifyReport> {
    Ok(match cmd {
        VerifyCommand::TwoSort {
            bits,
            netlist,
            mode,
        } => {
            let (n, target) = match netlist {
                Some(p) => (
                    read_netlist(p)?,
                    format!("{} as 2-sort({bits})", p.display()),
                ),
                None => (build_two_sort(*bits)?, format!("2-sort({bits})")),
            };
            verify_two_sort_netlist(target, &n, *bits, mode.mode(seed))?
        }
        VerifyCommand::Network {
            network,
            bits,
            netlist,
            mode,
        } => {
            let (s, name) = schedule_for(network)?;
            match netlist {
                Some(p) => {
                    let n = read_netlist(p)?;
                    let target = format!(
                        "{} as {}-channel sorter, B={bits}",
                        p.display(),
                        s.channels()
                    );
                    verify_network_netlist(target, &n, s.channels(), *bits, mode.mode(seed))?
                }
                None => verify_schedule(format!("{name}, B={bits}"), &s, *bits, mode.mode(seed))?,
            }
        }
        VerifyCommand::Properties => run_property_suites()?,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring worker threads")?;
    }
    match &cli.command {
        Command::Gen(GenCommand::TwoSort(a)) => {
            let mut n = if a.unfolded {
                build_two_sort_unfolded(a.bits)?
            } else {
                build_two_sort(a.bits)?
            };
            if a.propagate_constants {
                n = propagate_constants(&n)?;
            }
            emit_generated(&n, a.out.as_deref(), cli.json)?;
        }
        Command::Gen(GenCommand::NSort(a)) => {
            let (s, _) = schedule_for(&a.network)?;
            let orientation = if a.ascending {
                Orientation::Ascending
            } else {
                Orientation::Descending
            };
            let n = build_schedule_sort(&s, a.bits, orientation)?;
            emit_generated(&n, a.out.as_deref(), cli.json)?;
        }
        Command::Sim(a) => run_sim(a, cli.json)?,
        Command::Stats(a) => {
            let n = read_netlist(&a.netlist)?;
            let m = metrics(&n)?;
            if cli.json {
                print_json(&serde_json::json!({ "name": n.name, "metrics": m }));
            } else {
                outln!("{}\n{}", n.name, metrics_text(&m));
            }
        }
        Command::Export(a) => run_export(a, cli.json)?,
        Command::Verify(v) => {
            let report = run_verify(v, cli.seed)?;
            if cli.json {
                outln!("{}", report.to_json());
            } else {
                outln!("{}", report.summary());
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
