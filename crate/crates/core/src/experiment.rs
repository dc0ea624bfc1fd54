//! Experiment plumbing: configuration and its hash, CSV tables with `#`
//! header lines, and the per-phenotype measurement driver.
//!
//! Every parallel task draws from a stream named by what it computes (a
//! sampling batch, a phenotype's evolution run), never by the thread that
//! runs it, so tables do not depend on the worker count.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complexity::{genotype_tononi, kolmogorov_table, KolmogorovConfig, TononiOptions};
use crate::error::{Error, Result};
use crate::evolution::{DistancePoint, WalkEvent};
use crate::format::real;
use crate::genotype::{Evaluator, Genotype};
use crate::metrics::{find_neutral_genotypes, GenotypeSource, RankTable, RedundancyTable, SourceSpec};
use crate::params::ChromosomeParams;
use crate::phenotype::Phenotype;
use crate::rng::{stream, TAG_GENOTYPE_DRAW, TAG_PHENOTYPE_DRAW};
use crate::stats::{correlate, density, dingle_fit, CorrelationMethod, DingleFit};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const REDUNDANCY_COLUMNS: [&str; 3] = ["phenotype", "count", "total_samples"];
pub const RANK_COLUMNS: [&str; 4] = ["rank", "phenotype", "count", "log10_redundancy"];
pub const PHENO_COLUMNS: [&str; 8] = [
    "phenotype",
    "log10_redundancy",
    "robustness",
    "evolvability_evo",
    "evolvability_samp",
    "tononi",
    "kolmogorov",
    "k_exact",
];
pub const WALK_COLUMNS: [&str; 3] = ["step", "accepted", "phenotype"];
pub const EPOCHAL_COLUMNS: [&str; 3] = ["step", "hamming_distance", "phenotype"];
pub const GENOTYPE_SAMPLE_COLUMNS: [&str; 3] = ["index", "phenotype", "tononi"];
pub const DENSITY_COLUMNS: [&str; 5] = ["bin_lo", "bin_hi", "bin_center", "count", "density"];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attempts: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_budget: Option<u64>,
}

/// Everything that determines an output table. `workers`, `output` and
/// `shard` are excluded from the hash: they change how a result is
/// produced, not what it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ChromosomeParams>,
    #[serde(default)]
    pub budgets: Budgets,
    /// Experiment-specific settings, e.g. the phenotype selection.
    #[serde(default)]
    pub options: BTreeMap<String, String>,
    pub master_seed: u64,
    #[serde(default)]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shard: Option<(u64, u64)>,
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>, params: Option<ChromosomeParams>, master_seed: u64) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            params,
            budgets: Budgets::default(),
            options: BTreeMap::new(),
            master_seed,
            workers: 0,
            output: None,
            shard: None,
        }
    }

    pub fn option(mut self, key: &str, value: impl ToString) -> Self {
        self.options.insert(key.into(), value.to_string());
        self
    }

    /// First 16 hex digits of SHA-256 over the canonical JSON form.
    pub fn config_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            for key in ["workers", "output", "shard"] {
                m.remove(key);
            }
        }
        let digest = Sha256::digest(v.to_string().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn header(&self) -> Header {
        let mut h = Header::default();
        h.set("tool", format!("gpmap {TOOL_VERSION}"));
        h.set("config_hash", self.config_hash());
        h.set("seed", self.master_seed.to_string());
        if let Some((i, n)) = self.shard {
            h.set("shard", format!("{i}/{n}"));
        }
        h
    }
}

/// `# key: value` lines above a table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Header {
    pub entries: Vec<(String, String)>,
}

impl Header {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, key: &str, value: String) {
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.into(), value)),
        }
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.retain(|(k, _)| k != key);
    }
}

/// A CSV table. Cells never contain commas or quotes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Header, columns: &[&str]) -> Self {
        Table {
            header,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.header.entries {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("tables are UTF-8")
    }

    pub fn write_path(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn read<R: Read>(mut r: R) -> Result<Table> {
        let mut text = String::new();
        r.read_to_string(&mut text)?;
        let mut header = Header::default();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len();
            if let Some((k, v)) = rest.trim().split_once(':') {
                header.entries.push((k.trim().into(), v.trim().into()));
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Table(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if columns.iter().all(|c| c.is_empty()) {
            return Err(Error::Table("table has no header row".into()));
        }
        let rows = rdr
            .records()
            .map(|r| {
                r.map(|rec| rec.iter().map(str::to_string).collect())
                    .map_err(|e| Error::Table(e.to_string()))
            })
            .collect::<Result<Vec<Vec<String>>>>()?;
        Ok(Table { header, columns, rows })
    }

    pub fn read_path(path: &Path) -> Result<Table> {
        let f = fs::File::open(path)
            .map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Table::read(f)
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Table(format!("no column `{name}` (have {})", self.columns.join(","))))
    }

    /// Numeric cells; empty cells are `None`. `true`/`false` read as 1/0.
    pub fn numeric(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let c = self.column(name)?;
        self.rows
            .iter()
            .map(|row| {
                let cell = row[c].trim();
                match cell {
                    "" => Ok(None),
                    "true" => Ok(Some(1.0)),
                    "false" => Ok(Some(0.0)),
                    _ => cell
                        .parse::<f64>()
                        .map(Some)
                        .map_err(|_| Error::Table(format!("`{cell}` in column `{name}` is not a number"))),
                }
            })
            .collect()
    }

    /// Rows where both columns are present.
    pub fn numeric_pairs(&self, x: &str, y: &str) -> Result<(Vec<f64>, Vec<f64>)> {
        let xs = self.numeric(x)?;
        let ys = self.numeric(y)?;
        Ok(xs
            .into_iter()
            .zip(ys)
            .filter_map(|(a, b)| Some((a?, b?)))
            .unzip())
    }
}

pub fn redundancy_table(t: &RedundancyTable, header: Header) -> Table {
    let mut table = Table::new(header, &REDUNDANCY_COLUMNS);
    let total = t.total_samples.to_string();
    for (p, c) in t.iter() {
        table.push(vec![p.to_string(), c.to_string(), total.clone()]);
    }
    table
}

/// Phenotype counts and total samples of a redundancy CSV.
pub fn read_redundancy(table: &Table) -> Result<(Vec<(Phenotype, u64)>, u64)> {
    let (pc, cc, tc) = (table.column("phenotype")?, table.column("count")?, table.column("total_samples")?);
    let mut total = None;
    let mut out = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let p = Phenotype::parse_canonical(&row[pc])?;
        let c: u64 = row[cc]
            .parse()
            .map_err(|_| Error::Table(format!("bad count `{}`", row[cc])))?;
        let t: u64 = row[tc]
            .parse()
            .map_err(|_| Error::Table(format!("bad total `{}`", row[tc])))?;
        if *total.get_or_insert(t) != t {
            return Err(Error::Table("total_samples differs between rows".into()));
        }
        out.push((p, c));
    }
    Ok((out, total.unwrap_or(0)))
}

/// Merges redundancy shards of one run. All inputs must carry the same
/// config hash and seed; the merged header drops the shard line.
pub fn merge_redundancy(tables: &[Table]) -> Result<Table> {
    let first = tables.first().ok_or_else(|| Error::Table("nothing to merge".into()))?;
    let mut seen_shards = HashSet::new();
    for t in tables {
        for key in ["config_hash", "seed"] {
            if t.header.get(key) != first.header.get(key) {
                return Err(Error::Table(format!("inputs disagree on `{key}`")));
            }
        }
        if let Some(s) = t.header.get("shard") {
            if !seen_shards.insert(s.to_string()) {
                return Err(Error::Table(format!("shard {s} given twice")));
            }
        }
    }
    let mut counts: BTreeMap<Phenotype, u64> = BTreeMap::new();
    let mut total = 0;
    for t in tables {
        let (rows, t_total) = read_redundancy(t)?;
        total += t_total;
        for (p, c) in rows {
            *counts.entry(p).or_insert(0) += c;
        }
    }
    let mut header = first.header.clone();
    header.remove("shard");
    let mut out = Table::new(header, &REDUNDANCY_COLUMNS);
    for (p, c) in counts {
        out.push(vec![p.to_string(), c.to_string(), total.to_string()]);
    }
    Ok(out)
}

pub fn rank_csv(r: &RankTable, header: Header) -> Table {
    let mut table = Table::new(header, &RANK_COLUMNS);
    for e in &r.entries {
        table.push(vec![
            e.rank.to_string(),
            e.phenotype.to_string(),
            e.count.to_string(),
            real(e.log10_redundancy),
        ]);
    }
    table
}

pub fn walk_csv(events: &[WalkEvent], header: Header) -> Table {
    let mut table = Table::new(header, &WALK_COLUMNS);
    for e in events {
        table.push(vec![e.step.to_string(), e.accepted.to_string(), e.phenotype.to_string()]);
    }
    table
}

pub fn epochal_csv(trace: &[DistancePoint], header: Header) -> Table {
    let mut table = Table::new(header, &EPOCHAL_COLUMNS);
    for d in trace {
        table.push(vec![d.step.to_string(), d.distance.to_string(), d.phenotype.to_string()]);
    }
    table
}

/// One row of the per-phenotype table. Missing measures are empty cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhenotypeRecord {
    pub phenotype: Option<Phenotype>,
    pub log10_redundancy: Option<f64>,
    pub robustness: Option<f64>,
    pub evolvability_evo: Option<f64>,
    pub evolvability_samp: Option<f64>,
    pub tononi: Option<f64>,
    pub kolmogorov: Option<usize>,
    pub k_exact: Option<bool>,
}

impl PhenotypeRecord {
    pub fn new(p: Phenotype) -> Self {
        PhenotypeRecord {
            phenotype: Some(p),
            ..Default::default()
        }
    }

    fn cells(&self) -> Vec<String> {
        let r = |v: Option<f64>| v.map(real).unwrap_or_default();
        vec![
            self.phenotype.map(|p| p.to_string()).unwrap_or_default(),
            r(self.log10_redundancy),
            r(self.robustness),
            r(self.evolvability_evo),
            r(self.evolvability_samp),
            r(self.tononi),
            self.kolmogorov.map(|k| k.to_string()).unwrap_or_default(),
            self.k_exact.map(|b| b.to_string()).unwrap_or_default(),
        ]
    }

    /// Fills fields from any pheno-schema columns of `row`, and
    /// `log10_redundancy` from a `count` column.
    fn absorb(&mut self, columns: &[String], row: &[String]) -> Result<()> {
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| Error::Table(format!("`{s}` is not a number")))
            }
        };
        for (c, cell) in columns.iter().zip(row) {
            let cell = cell.trim();
            if cell.is_empty() {
                continue;
            }
            match c.as_str() {
                "log10_redundancy" => self.log10_redundancy = num(cell)?,
                "count" => self.log10_redundancy = num(cell)?.filter(|&c| c > 0.0).map(f64::log10),
                "robustness" => self.robustness = num(cell)?,
                "evolvability_evo" => self.evolvability_evo = num(cell)?,
                "evolvability_samp" => self.evolvability_samp = num(cell)?,
                "tononi" => self.tononi = num(cell)?,
                "kolmogorov" => {
                    self.kolmogorov = Some(cell.parse().map_err(|_| Error::Table(format!("bad kolmogorov `{cell}`")))?)
                }
                "k_exact" => self.k_exact = Some(cell == "true"),
                _ => {}
            }
        }
        Ok(())
    }
}

pub fn pheno_csv(records: &[PhenotypeRecord], header: Header) -> Table {
    let mut table = Table::new(header, &PHENO_COLUMNS);
    for r in records {
        table.push(r.cells());
    }
    table
}

/// Outer join on `phenotype` of any tables carrying pheno-schema columns
/// (a redundancy table contributes `log10_redundancy` via its counts).
/// Later tables win on conflicting cells. Rows come out in phenotype order.
pub fn join_pheno(tables: &[Table], header: Header) -> Result<Table> {
    let mut by_p: BTreeMap<Phenotype, PhenotypeRecord> = BTreeMap::new();
    for t in tables {
        let pc = t.column("phenotype")?;
        for row in &t.rows {
            let p = Phenotype::parse_canonical(&row[pc])?;
            by_p.entry(p)
                .or_insert_with(|| PhenotypeRecord::new(p))
                .absorb(&t.columns, row)?;
        }
    }
    let records: Vec<PhenotypeRecord> = by_p.into_values().collect();
    Ok(pheno_csv(&records, header))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationSummary {
    pub pearson: f64,
    pub spearman: f64,
    pub n: usize,
}

pub fn correlate_columns(table: &Table, x: &str, y: &str) -> Result<CorrelationSummary> {
    let (xs, ys) = table.numeric_pairs(x, y)?;
    Ok(CorrelationSummary {
        pearson: correlate(&xs, &ys, CorrelationMethod::Pearson)?,
        spearman: correlate(&xs, &ys, CorrelationMethod::Spearman)?,
        n: xs.len(),
    })
}

pub fn density_csv(values: &[f64], bins: usize, header: Header) -> Result<Table> {
    let mut table = Table::new(header, &DENSITY_COLUMNS);
    for b in density(values, bins)? {
        table.push(vec![
            real(b.lo),
            real(b.hi),
            real((b.lo + b.hi) / 2.0),
            b.count.to_string(),
            real(b.proportion),
        ]);
    }
    Ok(table)
}

/// Fit over rows with both `kolmogorov` and a positive redundancy. The
/// frequency is `10^log10_redundancy / total`; the total only shifts the
/// intercept.
pub fn dingle_from_pheno(table: &Table, total_samples: Option<u64>) -> Result<DingleFit> {
    let (k, lr) = table.numeric_pairs("kolmogorov", "log10_redundancy")?;
    let norm = total_samples.map_or(1.0, |t| t as f64);
    let points: Vec<(f64, f64)> = k
        .into_iter()
        .zip(lr)
        .map(|(k, l)| (k, 10f64.powf(l) / norm))
        .collect();
    dingle_fit(&points)
}

/// `count` distinct phenotypes drawn uniformly, in draw order.
pub fn draw_phenotypes(n_inputs: usize, count: usize, seed: u64) -> Result<Vec<Phenotype>> {
    let space = Phenotype::space_size(n_inputs).unwrap_or(u128::MAX);
    if count as u128 > space {
        return Err(Error::Config(format!("cannot draw {count} distinct phenotypes from {space}")));
    }
    let mut rng = stream(seed, &[TAG_PHENOTYPE_DRAW, n_inputs as u64]);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = crate::metrics::random_phenotype(n_inputs, &mut rng)?;
        if seen.insert(p) {
            out.push(p);
        }
    }
    Ok(out)
}

const GENOTYPE_DRAW_BATCH: usize = 1024;

/// Tononi complexity of `count` uniform random genotypes. Genotype `i`
/// comes from batch stream `[TAG_GENOTYPE_DRAW, i / 1024]`.
pub fn sample_genotype_tononi(
    params: &ChromosomeParams,
    count: usize,
    seed: u64,
    opts: &TononiOptions,
) -> Result<Vec<(Phenotype, f64)>> {
    params.validate()?;
    let gs = params.gate_set;
    let batches = count.div_ceil(GENOTYPE_DRAW_BATCH);
    let parts = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, &[TAG_GENOTYPE_DRAW, b as u64]);
            let len = GENOTYPE_DRAW_BATCH.min(count - b * GENOTYPE_DRAW_BATCH);
            let mut ev = Evaluator::default();
            (0..len)
                .map(|_| {
                    let g = Genotype::random(params, &mut rng);
                    let t = genotype_tononi(&g, &gs, opts)?;
                    Ok((ev.phenotype(&g, &gs), t.complexity))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn genotype_sample_csv(rows: &[(Phenotype, f64)], header: Header) -> Table {
    let mut table = Table::new(header, &GENOTYPE_SAMPLE_COLUMNS);
    for (i, (p, t)) in rows.iter().enumerate() {
        table.push(vec![i.to_string(), p.to_string(), real(*t)]);
    }
    table
}

/// Settings of [`measure_phenotypes`].
#[derive(Clone, Debug)]
pub struct MeasureOptions {
    /// Evolved genotypes per phenotype, shared by robustness, evolvability
    /// and Tononi complexity.
    pub k: usize,
    pub max_steps: u64,
    /// Neutral-walk steps applied to each evolved genotype.
    pub drift: u64,
    /// Also measure sampling-based evolvability with this draw budget.
    pub sampling_budget: Option<u64>,
    pub tononi: Option<TononiOptions>,
    pub kolmogorov: Option<KolmogorovConfig>,
    pub seed: u64,
}

/// A phenotype whose source found fewer genotypes than asked for. Its
/// measures are computed over what was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shortfall {
    pub phenotype: Phenotype,
    pub source: GenotypeSource,
    pub achieved: usize,
    pub requested: usize,
}

#[derive(Clone, Debug)]
pub struct Measured {
    pub records: Vec<PhenotypeRecord>,
    pub shortfalls: Vec<Shortfall>,
}

/// Per-phenotype robustness, evolvability (evolution and optionally
/// sampling), Tononi complexity and Kolmogorov complexity. `redundancy`
/// supplies `log10_redundancy`.
pub fn measure_phenotypes(
    params: &ChromosomeParams,
    phenotypes: &[Phenotype],
    redundancy: Option<&RedundancyTable>,
    opts: &MeasureOptions,
) -> Result<Measured> {
    params.validate()?;
    let gs = params.gate_set;
    let rows = phenotypes
        .par_iter()
        .map(|p| {
            let mut rec = PhenotypeRecord::new(*p);
            let mut short = Vec::new();
            if let Some(t) = redundancy {
                let c = t.count(p);
                rec.log10_redundancy = (c > 0).then(|| (c as f64).log10());
            }
            let spec = SourceSpec {
                source: GenotypeSource::Evolution {
                    max_steps: opts.max_steps,
                    drift: opts.drift,
                },
                k: opts.k,
                seed: opts.seed,
            };
            let evo = find_neutral_genotypes(p, params, &spec)?;
            if !evo.is_complete() {
                short.push(Shortfall {
                    phenotype: *p,
                    source: evo.source,
                    achieved: evo.achieved(),
                    requested: evo.requested,
                });
            }
            if evo.achieved() > 0 {
                rec.robustness = evo.robustness()?;
                rec.evolvability_evo = Some(evo.evolvability(false)? as f64);
                if let Some(topts) = &opts.tononi {
                    let sum = evo
                        .genotypes
                        .iter()
                        .map(|g| genotype_tononi(g, &gs, topts).map(|r| r.complexity))
                        .sum::<Result<f64>>()?;
                    rec.tononi = Some(sum / evo.achieved() as f64);
                }
            }
            if let Some(budget) = opts.sampling_budget {
                let spec = SourceSpec {
                    source: GenotypeSource::Sampling { budget },
                    ..spec
                };
                let samp = find_neutral_genotypes(p, params, &spec)?;
                if !samp.is_complete() {
                    short.push(Shortfall {
                        phenotype: *p,
                        source: samp.source,
                        achieved: samp.achieved(),
                        requested: samp.requested,
                    });
                }
                if samp.achieved() > 0 {
                    rec.evolvability_samp = Some(samp.evolvability(false)? as f64);
                }
            }
            Ok((rec, short))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(rows.len());
    let mut shortfalls = Vec::new();
    for (r, s) in rows {
        records.push(r);
        shortfalls.extend(s);
    }
    if let Some(kcfg) = &opts.kolmogorov {
        for (rec, k) in records.iter_mut().zip(kolmogorov_table(params, phenotypes, kcfg)?) {
            match k {
                Ok(k) => {
                    rec.kolmogorov = Some(k.value);
                    rec.k_exact = Some(k.exact);
                }
                Err(Error::NotFound { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Measured { records, shortfalls })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateSet;

    #[test]
    fn hash_ignores_workers_and_output() {
        let params = ChromosomeParams::cgp(3, 11, 8, GateSet::FULL).unwrap();
        let mut a = ExperimentConfig::new("redundancy", Some(params), 42);
        a.budgets.samples = Some(1000);
        let mut b = a.clone();
        b.workers = 8;
        b.output = Some("x.csv".into());
        b.shard = Some((0, 2));
        assert_eq!(a.config_hash(), b.config_hash());
        b.master_seed = 43;
        assert_ne!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 16);
    }

    #[test]
    fn table_round_trip() {
        let params = ChromosomeParams::cgp(2, 2, 2, GateSet::FULL).unwrap();
        let cfg = ExperimentConfig::new("redundancy", Some(params), 1);
        let t = crate::metrics::sample_redundancy(&params, 500, 1).unwrap();
        let table = redundancy_table(&t, cfg.header());
        let text = table.to_csv_string();
        assert!(text.starts_with("# tool: gpmap "));
        assert!(text.contains("\nphenotype,count,total_samples\n"));
        let back = Table::read(text.as_bytes()).unwrap();
        assert_eq!(back, table);
        let (rows, total) = read_redundancy(&back).unwrap();
        assert_eq!(total, 500);
        assert_eq!(rows.iter().map(|r| r.1).sum::<u64>(), 500);
    }

    #[test]
    fn join_fills_columns() {
        let h = Header::default();
        let mut a = Table::new(h.clone(), &["phenotype", "count", "total_samples"]);
        a.push(vec!["0x8".into(), "100".into(), "1000".into()]);
        let mut b = Table::new(h.clone(), &["phenotype", "kolmogorov", "k_exact"]);
        b.push(vec!["0x8".into(), "1".into(), "true".into()]);
        b.push(vec!["0x9".into(), "2".into(), "true".into()]);
        let j = join_pheno(&[a, b], h).unwrap();
        assert_eq!(j.rows[0], ["0x8", "2", "", "", "", "", "1", "true"]);
        assert_eq!(j.rows[1], ["0x9", "", "", "", "", "", "2", "true"]);
    }

    #[test]
    fn missing_column() {
        let t = Table::new(Header::default(), &["phenotype"]);
        assert!(matches!(correlate_columns(&t, "robustness", "tononi"), Err(Error::Table(_))));
    }
}
