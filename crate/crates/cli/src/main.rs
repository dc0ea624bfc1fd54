//! `gpmap` command line: one subcommand per experiment.
//!
//! Tables go to `--out` or stdout. Exit codes: 0 success, 1 invalid input,
//! 2 partial result (the table is still written), 3 resource limit.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gpmap::complexity::{
    genotype_tononi, kolmogorov_table, KolmogorovConfig, SubsetSampling, TononiOptions, EXHAUSTIVE_CAP,
};
use gpmap::evolution::{default_max_steps, neutral_walk, EpochalSearch};
use gpmap::experiment::{
    correlate_columns, density_csv, dingle_from_pheno, draw_phenotypes, epochal_csv, genotype_sample_csv,
    join_pheno, merge_redundancy, rank_csv, read_redundancy, redundancy_table, sample_genotype_tononi, walk_csv,
    ExperimentConfig, Header, Table,
};
use gpmap::metrics::{
    find_neutral_genotypes, rank_table, sample_redundancy_shard, GenotypeSource, NeutralSample, RedundancyTable,
    SourceSpec, DEFAULT_K,
};
use gpmap::oracle::{exact_map_summary, EnumerationSpec, DEFAULT_ENUMERATION_CAP};
use gpmap::rng::{stream, TAG_WALK};
use gpmap::{
    parse_circuit, ChromosomeParams, Error, GateSet, Genotype, Phenotype, Result, TextFormat, PAPER_CGP_4IN,
    PAPER_LGP_4IN,
};

#[derive(Parser)]
#[command(name = "gpmap", version, about = "Genotype-phenotype map experiments for logic-gate circuits")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "GPMAP_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phenotype counts over uniform random genotypes.
    Redundancy(RedundancyArgs),
    /// Rank table from a redundancy table.
    Rank(RankArgs),
    /// Phenotype robustness from evolved or sampled genotypes.
    Robustness(PhenotypeArgs),
    /// Phenotype evolvability from evolved or sampled genotypes.
    Evolvability(PhenotypeArgs),
    /// Tononi complexity of a circuit, of phenotypes, or of random genotypes.
    Tononi(TononiArgs),
    /// Minimum gate count of phenotypes.
    Kolmogorov(KolmogorovArgs),
    /// Neutral walk from a circuit or a random genotype.
    NeutralWalk(WalkArgs),
    /// Epochal evolution towards a target phenotype.
    Epochal(EpochalArgs),
    /// Exact counts, robustness and evolvability by full enumeration.
    OracleEnumerate(OracleArgs),
    /// Merge redundancy shards, or join per-phenotype tables into pheno.csv.
    Join(JoinArgs),
    /// Pearson and Spearman correlation of two columns.
    Correlate(CorrelateArgs),
    /// Equal-width histogram of a column.
    Density(DensityArgs),
    /// Least-squares fit of log2 frequency against minimum gate count.
    DingleFit(DingleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Repr {
    Cgp,
    Lgp,
}

#[derive(Args, Clone, Debug, Serialize)]
struct ParamArgs {
    #[arg(long, value_enum, default_value = "cgp")]
    repr: Repr,
    #[arg(long, default_value_t = 3)]
    inputs: usize,
    /// CGP gate count.
    #[arg(long, default_value_t = 11)]
    gates: usize,
    /// CGP levels-back.
    #[arg(long, default_value_t = 8)]
    levels_back: usize,
    /// LGP instruction count.
    #[arg(long, default_value_t = 10)]
    instructions: usize,
    #[arg(long, default_value_t = 2)]
    calc_registers: usize,
    /// `full`, `no-xor`, or a comma list such as `and,or,nand`.
    #[arg(long, default_value = "full")]
    gate_set: String,
    /// Four-input circuit presets (CGP 11 gates / 8 levels-back, LGP 10
    /// instructions / 2 registers) and full-size budgets. Slow.
    #[arg(long)]
    paper_scale: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ParamArgs {
    fn params(&self) -> Result<ChromosomeParams> {
        let gate_set: GateSet = self.gate_set.parse()?;
        if self.paper_scale {
            let mut p = match self.repr {
                Repr::Cgp => PAPER_CGP_4IN,
                Repr::Lgp => PAPER_LGP_4IN,
            };
            p.gate_set = gate_set;
            return Ok(p);
        }
        match self.repr {
            Repr::Cgp => ChromosomeParams::cgp(self.inputs, self.gates, self.levels_back, gate_set),
            Repr::Lgp => ChromosomeParams::lgp(self.inputs, self.instructions, self.calc_registers, gate_set),
        }
    }

    fn text_format(&self) -> TextFormat {
        match self.repr {
            Repr::Cgp => TextFormat::CGP,
            Repr::Lgp => TextFormat::Lgp {
                n_inputs: self.inputs,
                calc_registers: self.calc_registers,
            },
        }
    }
}

#[derive(Args, Serialize)]
struct RedundancyArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Compute only shard `i` of `n`, written as `i/n`; merge with `join`.
    #[arg(long, value_parser = parse_shard)]
    #[serde(skip)]
    shard: Option<(u64, u64)>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RankArgs {
    /// Redundancy table.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Serialize)]
struct Selection {
    /// Phenotype in hex; repeatable.
    #[arg(long = "phenotype")]
    phenotypes: Vec<String>,
    /// Every phenotype of the input count (up to 4 inputs).
    #[arg(long)]
    all: bool,
    /// This many distinct phenotypes drawn uniformly with `--seed`.
    #[arg(long)]
    random: Option<usize>,
    /// Phenotypes in the `phenotype` column of a table.
    #[arg(long)]
    from: Option<PathBuf>,
}

impl Selection {
    fn resolve(&self, n_inputs: usize, seed: u64) -> Result<Vec<Phenotype>> {
        let mut out = Vec::new();
        for p in &self.phenotypes {
            out.push(Phenotype::parse_hex(p, n_inputs)?);
        }
        if self.all {
            out.extend(Phenotype::all(n_inputs)?);
        }
        if let Some(count) = self.random {
            out.extend(draw_phenotypes(n_inputs, count, seed)?);
        }
        if let Some(path) = &self.from {
            let t = Table::read_path(path)?;
            let c = t.column("phenotype")?;
            for row in &t.rows {
                out.push(Phenotype::parse_hex(&row[c], n_inputs)?);
            }
        }
        if out.is_empty() {
            return Err(Error::Config(
                "no phenotypes selected (use --phenotype, --all, --random or --from)".into(),
            ));
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Evolution,
    Sampling,
}

#[derive(Args, Clone, Serialize)]
struct SourceArgs {
    #[arg(long, value_enum, default_value = "evolution")]
    method: Method,
    /// Genotypes per phenotype.
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    /// Step limit per evolution run (default depends on the input count).
    #[arg(long)]
    max_steps: Option<u64>,
    /// Neutral-walk steps after each evolution run finds its target.
    #[arg(long, default_value_t = 0)]
    drift: u64,
    /// Random draws allowed per phenotype for `--method sampling`.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

impl SourceArgs {
    fn spec(&self, n_inputs: usize, seed: u64) -> SourceSpec {
        let source = match self.method {
            Method::Evolution => GenotypeSource::Evolution {
                max_steps: self.max_steps.unwrap_or_else(|| default_max_steps(n_inputs)),
                drift: self.drift,
            },
            Method::Sampling => GenotypeSource::Sampling { budget: self.budget },
        };
        SourceSpec {
            source,
            k: self.k,
            seed,
        }
    }
}

#[derive(Args, Serialize)]
struct PhenotypeArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    select: Selection,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct TononiArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Circuit text; prints its complexity.
    #[arg(long)]
    circuit: Option<String>,
    /// Measure random genotypes instead of phenotypes.
    #[arg(long)]
    genotype_samples: Option<usize>,
    #[command(flatten)]
    select: Selection,
    #[command(flatten)]
    source: SourceArgs,
    /// Only gates that can reach the output.
    #[arg(long)]
    active_only: bool,
    /// Subsets per size when a matrix is too large for exact computation.
    #[arg(long)]
    subset_samples: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct KolmogorovArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    select: Selection,
    /// Largest genotype space searched exhaustively.
    #[arg(long, default_value_t = EXHAUSTIVE_CAP)]
    cap: u128,
    /// Epochal runs per size beyond the cap.
    #[arg(long, default_value_t = 20)]
    attempts: u64,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long, default_value_t = 32)]
    max_size: usize,
    /// Use the configured levels-back at every size instead of letting each
    /// gate read any earlier node.
    #[arg(long)]
    restrict_levels_back: bool,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct WalkArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Start circuit; a random genotype when absent.
    #[arg(long)]
    circuit: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct EpochalArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    target: String,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct OracleArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// Also count neutral components.
    #[arg(long)]
    components: bool,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum JoinMode {
    /// Merge redundancy shards if every input is a redundancy table, else
    /// join into pheno.csv.
    Auto,
    Redundancy,
    Pheno,
}

#[derive(Args)]
struct JoinArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    mode: JoinMode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CorrelateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    column: String,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DingleArgs {
    /// A pheno.csv with `kolmogorov` and `log10_redundancy` columns.
    #[arg(long = "in")]
    input: PathBuf,
    /// Sample total used to turn counts into frequencies.
    #[arg(long)]
    total_samples: Option<u64>,
}

fn parse_shard(s: &str) -> std::result::Result<(u64, u64), String> {
    let (i, n) = s.split_once('/').ok_or("expected i/n")?;
    let i: u64 = i.parse().map_err(|_| "bad shard index")?;
    let n: u64 = n.parse().map_err(|_| "bad shard count")?;
    if n == 0 || i >= n {
        return Err(format!("shard {i}/{n} out of range"));
    }
    Ok((i, n))
}

/// Header for a table produced from `args` (minus output location).
fn config<A: Serialize>(name: &str, params: Option<ChromosomeParams>, seed: u64, args: &A) -> ExperimentConfig {
    let json = serde_json::to_string(args).expect("arguments serialize");
    ExperimentConfig::new(name, params, seed).option("args", json)
}

fn emit(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => table.write_path(path),
        None => table.write(io::stdout().lock()),
    }
}

/// Reports shortfalls on stderr; the caller exits 2 when any occurred.
fn note_partial(sample: &NeutralSample, partial: &mut bool) {
    if !sample.is_complete() {
        *partial = true;
        eprintln!(
            "warning: {} found {} of {} genotypes for {}",
            sample.source.label(),
            sample.achieved(),
            sample.requested,
            sample.phenotype
        );
    }
}

fn partial_exit(partial: bool) -> Result<ExitCode> {
    Ok(if partial { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Redundancy(a) => {
            let params = a.params.params()?;
            let samples = if a.params.paper_scale { a.samples.max(10_000_000_000) } else { a.samples };
            let (shard, shards) = a.shard.unwrap_or((0, 1));
            let t = sample_redundancy_shard(&params, samples, a.params.seed, shard, shards)?;
            let mut cfg = config("redundancy", Some(params), a.params.seed, &a);
            cfg.budgets.samples = Some(samples);
            cfg.shard = a.shard;
            emit(&redundancy_table(&t, cfg.header()), a.out.as_deref())?;
            if let Some(space) = Phenotype::space_size(params.n_inputs) {
                eprintln!("distinct {} of {space}; unrepresented {}", t.distinct(), space - t.distinct() as u128);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rank(a) => {
            let input = Table::read_path(&a.input)?;
            let (rows, total) = read_redundancy(&input)?;
            let n = rows
                .first()
                .map(|(p, _)| p.n_inputs())
                .ok_or_else(|| Error::Table("redundancy table is empty".into()))?;
            let params = ChromosomeParams::cgp(n, 1, 1, GateSet::FULL)?;
            let mut t = RedundancyTable::from_counts(params, 0, rows);
            t.total_samples = total;
            emit(&rank_csv(&rank_table(&t), input.header.clone()), a.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Robustness(a) => phenotype_measure("robustness", a),
        Command::Evolvability(a) => phenotype_measure("evolvability", a),
        Command::Tononi(a) => tononi(a),
        Command::Kolmogorov(a) => {
            let params = a.params.params()?;
            let phenotypes = a.select.resolve(params.n_inputs, a.params.seed)?;
            let kcfg = KolmogorovConfig {
                exhaustive_cap: a.cap,
                attempts: a.attempts,
                step_budget: a.max_steps,
                max_size: a.max_size,
                levels_back: match params.layout {
                    gpmap::Layout::Cgp { levels_back, .. } if a.restrict_levels_back => Some(levels_back),
                    _ => None,
                },
                seed: a.params.seed,
            };
            let results = kolmogorov_table(&params, &phenotypes, &kcfg)?;
            let cfg = config("kolmogorov", Some(params), a.params.seed, &a);
            let mut table = Table::new(cfg.header(), &["phenotype", "kolmogorov", "k_exact"]);
            let mut missing = false;
            for (p, r) in phenotypes.iter().zip(&results) {
                match r {
                    Ok(r) => {
                        table.push(vec![p.to_string(), r.value.to_string(), r.exact.to_string()]);
                        if phenotypes.len() == 1 {
                            eprintln!("witness: {}", r.witness);
                        }
                    }
                    Err(e) => {
                        missing = true;
                        eprintln!("warning: {e}");
                        table.push(vec![p.to_string(), String::new(), String::new()]);
                    }
                }
            }
            emit(&table, a.out.as_deref())?;
            partial_exit(missing)
        }
        Command::NeutralWalk(a) => {
            let params = a.params.params()?;
            let gs = params.gate_set;
            let mut rng = stream(a.params.seed, &[TAG_WALK]);
            let start = match &a.circuit {
                Some(text) => parse_circuit(text, a.params.text_format())?,
                None => Genotype::random(&params, &mut rng),
            };
            let r = neutral_walk(&start, &gs, a.steps, true, &mut rng)?;
            let cfg = config("neutral-walk", Some(params), a.params.seed, &a);
            emit(&walk_csv(r.events.as_deref().unwrap_or(&[]), cfg.header()), a.out.as_deref())?;
            eprintln!(
                "phenotype {} accepted {} of {} ({})",
                r.phenotype,
                r.accepted_steps,
                r.steps_taken,
                gpmap::format::real(r.acceptance_rate())
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Epochal(a) => {
            let params = a.params.params()?;
            let target = Phenotype::parse_hex(&a.target, params.n_inputs)?;
            let steps = a.max_steps.unwrap_or_else(|| default_max_steps(params.n_inputs));
            let mut rng = stream(a.params.seed, &[gpmap::rng::TAG_EVOLVE]);
            let r = EpochalSearch::new(params)
                .max_steps(steps)
                .record_trace(true)
                .run(&target, &mut rng)?;
            let cfg = config("epochal", Some(params), a.params.seed, &a);
            emit(&epochal_csv(r.distance_trace.as_deref().unwrap_or(&[]), cfg.header()), a.out.as_deref())?;
            eprintln!(
                "{} after {} steps: {}",
                if r.found() { "found" } else { "step limit" },
                r.steps_taken,
                r.final_genotype
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleEnumerate(a) => {
            let params = a.params.params()?;
            let spec = EnumerationSpec::new(params, a.cap)?;
            let map = exact_map_summary(&spec, a.components)?;
            let cfg = config("oracle-enumerate", Some(params), a.params.seed, &a);
            let mut buf = Vec::new();
            for (k, v) in &cfg.header().entries {
                writeln!(buf, "# {k}: {v}")?;
            }
            writeln!(buf, "# space_size: {}", map.space_size)?;
            map.write_csv(&mut buf)?;
            match &a.out {
                Some(p) => std::fs::write(p, buf)?,
                None => io::stdout().lock().write_all(&buf)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Join(a) => {
            let tables = a
                .inputs
                .iter()
                .map(|p| Table::read_path(p))
                .collect::<Result<Vec<_>>>()?;
            let is_redundancy = |t: &Table| t.columns == ["phenotype", "count", "total_samples"];
            let redundancy = match a.mode {
                JoinMode::Auto => tables.iter().all(is_redundancy),
                JoinMode::Redundancy => true,
                JoinMode::Pheno => false,
            };
            let out = if redundancy {
                merge_redundancy(&tables)?
            } else {
                let mut h = Header::default();
                h.set("tool", format!("gpmap {}", gpmap::experiment::TOOL_VERSION));
                for (i, t) in tables.iter().enumerate() {
                    if let Some(hash) = t.header.get("config_hash") {
                        h.set(&format!("source_{i}"), hash.to_string());
                    }
                }
                join_pheno(&tables, h)?
            };
            emit(&out, a.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Correlate(a) => {
            let t = Table::read_path(&a.input)?;
            let c = correlate_columns(&t, &a.x, &a.y)?;
            println!("pearson {}", gpmap::format::real(c.pearson));
            println!("spearman {}", gpmap::format::real(c.spearman));
            println!("n {}", c.n);
            Ok(ExitCode::SUCCESS)
        }
        Command::Density(a) => {
            let t = Table::read_path(&a.input)?;
            let values: Vec<f64> = t.numeric(&a.column)?.into_iter().flatten().collect();
            if values.is_empty() {
                return Err(Error::Table(format!("column `{}` has no values", a.column)));
            }
            let mut h = t.header.clone();
            h.set("column", a.column.clone());
            emit(&density_csv(&values, a.bins, h)?, a.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::DingleFit(a) => {
            let t = Table::read_path(&a.input)?;
            let fit = dingle_from_pheno(&t, a.total_samples)?;
            println!("slope {}", gpmap::format::real(fit.slope));
            println!("intercept {}", gpmap::format::real(fit.intercept));
            println!("spearman {}", gpmap::format::real(fit.spearman));
            println!("n {}", fit.n_points);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn phenotype_measure(kind: &str, a: PhenotypeArgs) -> Result<ExitCode> {
    let params = a.params.params()?;
    let phenotypes = a.select.resolve(params.n_inputs, a.params.seed)?;
    let spec = a.source.spec(params.n_inputs, a.params.seed);
    let samples = phenotypes
        .iter()
        .map(|p| find_neutral_genotypes(p, &params, &spec))
        .collect::<Result<Vec<_>>>()?;
    let column = match (kind, a.source.method) {
        ("robustness", _) => "robustness",
        (_, Method::Evolution) => "evolvability_evo",
        (_, Method::Sampling) => "evolvability_samp",
    };
    let cfg = config(kind, Some(params), a.params.seed, &a);
    let mut table = Table::new(cfg.header(), &["phenotype", column, "k_achieved"]);
    let mut partial = false;
    for s in &samples {
        note_partial(s, &mut partial);
        let value = if s.achieved() == 0 {
            String::new()
        } else if kind == "robustness" {
            s.robustness()?.map(gpmap::format::real).unwrap_or_default()
        } else {
            s.evolvability(false)?.to_string()
        };
        table.push(vec![s.phenotype.to_string(), value, s.achieved().to_string()]);
    }
    emit(&table, a.out.as_deref())?;
    partial_exit(partial)
}

fn tononi(a: TononiArgs) -> Result<ExitCode> {
    let params = a.params.params()?;
    let gs = params.gate_set;
    let opts = TononiOptions {
        active_only: a.active_only,
        sampling: a.subset_samples.map(|per_k| SubsetSampling {
            per_k,
            seed: a.params.seed,
        }),
    };
    if let Some(text) = &a.circuit {
        let g = parse_circuit(text, a.params.text_format())?;
        let r = genotype_tononi(&g, &gs, &opts)?;
        println!("{:.4}", r.complexity);
        if !r.exact {
            eprintln!("note: estimated from sampled subsets");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let cfg = config("tononi", Some(params), a.params.seed, &a);
    if let Some(count) = a.genotype_samples {
        let rows = sample_genotype_tononi(&params, count, a.params.seed, &opts)?;
        emit(&genotype_sample_csv(&rows, cfg.header()), a.out.as_deref())?;
        return Ok(ExitCode::SUCCESS);
    }
    let phenotypes = a.select.resolve(params.n_inputs, a.params.seed)?;
    let spec = a.source.spec(params.n_inputs, a.params.seed);
    let mut table = Table::new(cfg.header(), &["phenotype", "tononi", "k_achieved"]);
    let mut partial = false;
    for p in &phenotypes {
        let s = find_neutral_genotypes(p, &params, &spec)?;
        note_partial(&s, &mut partial);
        let values = s
            .genotypes
            .iter()
            .map(|g| genotype_tononi(g, &gs, &opts).map(|r| r.complexity))
            .collect::<Result<Vec<_>>>()?;
        let cell = if values.is_empty() {
            String::new()
        } else {
            gpmap::format::real(values.iter().sum::<f64>() / values.len() as f64)
        };
        table.push(vec![p.to_string(), cell, s.achieved().to_string()]);
    }
    emit(&table, a.out.as_deref())?;
    partial_exit(partial)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: cannot start {w} workers: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
