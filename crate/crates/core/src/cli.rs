//! Command-line interface.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complexity::{
    complexity_with, labelled_complexity, medium_articulation, weighted_complexity_with,
    ComplexityOptions, LogBase, WeightNormalization,
};
use crate::error::Error;
use crate::generators::{DuplicatePolicy, GeneratorSpec, WeightModel};
use crate::graph::{slot_count, Network};
use crate::io::{
    matrix_to_foodweb, parse_edgelist, parse_matrix, parse_pajek, write_edgelist, write_measures,
    write_report, Format, MeasureReport, Report,
};
use crate::neutral::{
    normal_weight_null, null_model, parse_seed, EnsembleStats, Scoring, DEFAULT_SAMPLES,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// Largest slot count enumerated exhaustively.
const EXHAUSTIVE_MAX_SLOTS: u64 = 20;
/// Largest order accepted by `enumerate`.
const ENUMERATE_MAX_ORDER: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "netcomplexity", version, about = "Information-content complexity of networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complexity and medium articulation of one network.
    Complexity(ComplexityArgs),
    /// Compare a network's complexity with link-shuffled replicas.
    Nullmodel(NullModelArgs),
    /// Write a random network as an edge list.
    Generate {
        #[command(subcommand)]
        model: GenerateCommand,
    },
    /// Complexity of every (or a sample of) network with a given order.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InputFormat {
    Auto,
    Pajek,
    Edgelist,
    Matrix,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Tsv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Tsv => Format::Tsv,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MaBase {
    #[value(name = "2")]
    Two,
    E,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Normalization {
    Sum,
    Max,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Network file, or `-` for standard input.
    path: String,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    input: InputFormat,
    /// Read edge lists as directed.
    #[arg(long)]
    directed: bool,
    /// Allow self-loops even when the input has none.
    #[arg(long)]
    self_loops: bool,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Use the weighted integral even for unit weights.
    #[arg(long)]
    weighted: bool,
    /// Ignore link weights.
    #[arg(long, conflicts_with = "weighted")]
    unweighted: bool,
    /// Round the link-list payload up to whole bits.
    #[arg(long)]
    ceil: bool,
    #[arg(long, value_enum, default_value_t = Normalization::Sum)]
    normalization: Normalization,
    /// Abort the automorphism search after this many nodes.
    #[arg(long)]
    node_budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

impl MeasureArgs {
    fn options(&self) -> ComplexityOptions {
        ComplexityOptions {
            ceil: self.ceil,
            node_budget: self.node_budget,
            normalization: match self.normalization {
                Normalization::Sum => WeightNormalization::Sum,
                Normalization::Max => WeightNormalization::Max,
            },
        }
    }

    fn scoring(&self, net: &Network) -> Scoring {
        if self.weighted {
            Scoring::Weighted
        } else if self.unweighted {
            Scoring::Unweighted
        } else {
            Scoring::for_network(net)
        }
    }
}

#[derive(Args, Debug)]
struct ComplexityArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    /// Report the labelled variant, which skips the automorphism term.
    #[arg(long)]
    labelled: bool,
    #[arg(long, value_enum, default_value_t = MaBase::Two)]
    ma_base: MaBase,
}

#[derive(Args, Debug)]
struct NullModelArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Decimal or `0x` hex.
    #[arg(long, default_value = "0")]
    seed: String,
    /// Add this many points of the fitted log-normal density to the report.
    #[arg(long)]
    density_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Weights {
    Unit,
    Uniform,
    Normal,
}

impl From<Weights> for WeightModel {
    fn from(w: Weights) -> Self {
        match w {
            Weights::Unit => WeightModel::Unit,
            Weights::Uniform => WeightModel::Uniform01,
            Weights::Normal => WeightModel::NormalMean0,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Duplicates {
    Redraw,
    Drop,
}

#[derive(Subcommand, Debug)]
enum GenerateCommand {
    /// Uniformly random network with exactly `l` links.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        directed: bool,
        #[arg(long, value_enum, default_value_t = Weights::Unit)]
        weights: Weights,
        #[arg(long, default_value = "0")]
        seed: String,
    },
    /// Preferential attachment, `m` links per arriving node.
    Pa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        directed: bool,
        #[arg(long, value_enum, default_value_t = Weights::Unit)]
        weights: Weights,
        #[arg(long, default_value = "0")]
        seed: String,
        #[arg(long, default_value_t = 1)]
        seed_clique: usize,
        #[arg(long, value_enum, default_value_t = Duplicates::Redraw)]
        duplicates: Duplicates,
    },
    /// Digraph with normally distributed signed weights folded into direction.
    NormalNull {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value = "0")]
        seed: String,
        #[arg(long, default_value_t = 1.0)]
        std_dev: f64,
    },
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    order: usize,
    #[arg(long)]
    directed: bool,
    /// Sample this many link lists per link count instead of enumerating.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value = "0")]
    seed: String,
    #[arg(long)]
    ceil: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource() {
            EXIT_RESOURCE
        } else if matches!(e, Error::InvalidArgument(_)) {
            EXIT_USAGE
        } else {
            EXIT_PARSE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Complexity(a) => cmd_complexity(&a, stdin),
        Command::Nullmodel(a) => cmd_nullmodel(&a, stdin),
        Command::Generate { model } => cmd_generate(&model),
        Command::Enumerate(a) => cmd_enumerate(&a),
    };
    match result {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_PARSE
            }
        },
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_network(args: &InputArgs, stdin: &mut dyn Read) -> Result<Network, Failure> {
    let text = if args.path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&args.path).map_err(|e| Failure {
            code: EXIT_PARSE,
            message: format!("{}: {e}", args.path),
        })?
    };
    let format = match args.input {
        InputFormat::Auto => sniff(&args.path, &text),
        f => f,
    };
    let net = match format {
        InputFormat::Pajek => parse_pajek(&text)?.0,
        InputFormat::Matrix => matrix_to_foodweb(&parse_matrix(&text)?),
        _ => parse_edgelist(&text, args.directed)?.0,
    };
    if args.self_loops && !net.allows_self_loops() {
        let mut looped = Network::new(net.node_count(), net.is_directed(), true)?;
        for l in net.links() {
            looped.add_link(l.source, l.target, l.weight)?;
        }
        return Ok(looped);
    }
    Ok(net)
}

fn sniff(path: &str, text: &str) -> InputFormat {
    let ext = Path::new(path)
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("net" | "paj") => InputFormat::Pajek,
        Some("mat" | "matrix") => InputFormat::Matrix,
        _ => {
            let first = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('%') && !l.starts_with('#'));
            if first.is_some_and(|l| l.starts_with('*')) {
                InputFormat::Pajek
            } else {
                InputFormat::Edgelist
            }
        }
    }
}

fn cmd_complexity(a: &ComplexityArgs, stdin: &mut dyn Read) -> Result<String, Failure> {
    let net = read_network(&a.input, stdin)?;
    let opts = a.measure.options();
    let structure = if a.labelled {
        labelled_complexity(&net)
    } else {
        complexity_with(&net, &opts)?
    };
    let weighted = a.measure.scoring(&net) == Scoring::Weighted && !a.labelled;
    let weighted_bits = if weighted && net.link_count() > 0 {
        Some(weighted_complexity_with(&net, &opts)?)
    } else {
        None
    };
    let base = match a.ma_base {
        MaBase::Two => LogBase::Two,
        MaBase::E => LogBase::E,
    };
    let ma = match medium_articulation(&net, base) {
        Ok(ma) => Some(ma),
        Err(Error::NoLinks) => None,
        Err(e) => return Err(e.into()),
    };
    let report = MeasureReport {
        complexity_bits: weighted_bits.unwrap_or(structure.total_bits),
        weighted: weighted_bits.is_some(),
        structure,
        weighted_bits,
        medium_articulation: ma,
    };
    Ok(write_measures(&report, a.measure.format.into()))
}

fn cmd_nullmodel(a: &NullModelArgs, stdin: &mut dyn Read) -> Result<String, Failure> {
    let net = read_network(&a.input, stdin)?;
    let seed = parse_seed(&a.seed)?;
    let opts = a.measure.options();
    let run = null_model(&net, a.samples, seed, a.measure.scoring(&net), &opts)?;
    let structure = complexity_with(&net, &opts)?;
    let mut report = Report::from_run(&run, Some(structure));
    if let Some(k) = a.density_points {
        report.density = Some(density_curve(&run.stats, k));
    }
    Ok(write_report(&report, a.measure.format.into()))
}

// Evenly spaced in ln C over four standard deviations either side.
fn density_curve(stats: &EnsembleStats, points: usize) -> Vec<(f64, f64)> {
    let (mean, std) = (stats.mean_ln_c, stats.std_ln_c);
    if points == 0 || std == 0.0 {
        return Vec::new();
    }
    let step = if points > 1 { 8.0 * std / (points - 1) as f64 } else { 0.0 };
    (0..points)
        .map(|i| {
            let c = if points > 1 { (mean - 4.0 * std + step * i as f64).exp() } else { mean.exp() };
            (c, stats.lognormal_density(c))
        })
        .collect()
}

fn cmd_generate(model: &GenerateCommand) -> Result<String, Failure> {
    let net = match model {
        GenerateCommand::Er {
            n,
            l,
            directed,
            weights,
            seed,
        } => GeneratorSpec::erdos_renyi(*n, *l, *directed, parse_seed(seed)?)
            .with_weights((*weights).into())
            .generate()?,
        GenerateCommand::Pa {
            n,
            m,
            directed,
            weights,
            seed,
            seed_clique,
            duplicates,
        } => {
            let mut spec = GeneratorSpec::preferential_attachment(*n, *m, *directed, parse_seed(seed)?)
                .with_weights((*weights).into());
            spec.seed_clique = *seed_clique;
            spec.duplicates = match duplicates {
                Duplicates::Redraw => DuplicatePolicy::Redraw,
                Duplicates::Drop => DuplicatePolicy::Drop,
            };
            spec.generate()?
        }
        GenerateCommand::NormalNull { n, l, seed, std_dev } => {
            normal_weight_null(*n, *l, parse_seed(seed)?, *std_dev)?
        }
    };
    Ok(write_edgelist(&net, None))
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<String, Failure> {
    let n = a.order;
    if n == 0 {
        return Err(Error::NoNodes.into());
    }
    if n > ENUMERATE_MAX_ORDER {
        return Err(Error::TooLarge {
            n,
            max: ENUMERATE_MAX_ORDER,
        }
        .into());
    }
    let opts = ComplexityOptions {
        ceil: a.ceil,
        ..ComplexityOptions::default()
    };
    let slots: Vec<(usize, usize)> = Network::new(n, a.directed, false)?.slots().collect();
    let total = slot_count(n, a.directed, false);
    let mut out = String::new();
    let mut emit = |chosen: &mut dyn Iterator<Item = usize>| -> Result<(), Failure> {
        let mut net = Network::new(n, a.directed, false)?;
        for i in chosen {
            let (u, v) = slots[i];
            net.add_link(u, v, 1.0)?;
        }
        let c = complexity_with(&net, &opts)?;
        out.push_str(&format!("{}\t{}\n", net.link_count(), c.total_bits));
        Ok(())
    };
    match a.sample {
        None => {
            if total > EXHAUSTIVE_MAX_SLOTS {
                return Err(Failure {
                    code: EXIT_RESOURCE,
                    message: format!(
                        "{total} slots is too many to enumerate exhaustively; pass --sample"
                    ),
                });
            }
            for mask in 0u64..1 << total {
                emit(&mut (0..total as usize).filter(|i| mask >> i & 1 == 1))?;
            }
        }
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(parse_seed(&a.seed)?);
            for l in 0..=total as usize {
                for _ in 0..k {
                    let mut picked = sample(&mut rng, total as usize, l).into_vec();
                    picked.sort_unstable();
                    emit(&mut picked.into_iter())?;
                }
            }
        }
    }
    Ok(out)
}
