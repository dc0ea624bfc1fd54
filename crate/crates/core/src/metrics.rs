//! Structural measures of the genotype-phenotype map.
//!
//! Genotype robustness and evolvability are exact: they walk the full
//! 1-mutant neighbourhood. Phenotype-level measures need genotypes that map
//! to the phenotype, found either by epochal evolution or by filtering
//! uniform random samples ([`GenotypeSource`]).

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{neutral_walk, EpochalSearch};
use crate::gate::GateSet;
use crate::genotype::{Evaluator, Genotype};
use crate::params::ChromosomeParams;
use crate::phenotype::Phenotype;
use crate::rng::{phenotype_key, stream, TAG_EVOLVE, TAG_SAMPLE, TAG_SAMPLING_SOURCE};

/// Samples per independently seeded batch. Batch `b` of a redundancy run
/// always uses stream `[TAG_SAMPLE, b]`, whatever the worker count.
pub const SAMPLE_BATCH: u64 = 1 << 16;

/// Phenotype occurrence counts from uniform genotype sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct RedundancyTable {
    pub params: ChromosomeParams,
    pub seed: u64,
    pub total_samples: u64,
    counts: BTreeMap<Phenotype, u64>,
}

impl RedundancyTable {
    pub fn new(params: ChromosomeParams, seed: u64) -> Self {
        RedundancyTable {
            params,
            seed,
            total_samples: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts(
        params: ChromosomeParams,
        seed: u64,
        counts: impl IntoIterator<Item = (Phenotype, u64)>,
    ) -> Self {
        let mut t = RedundancyTable::new(params, seed);
        for (p, c) in counts {
            t.add(p, c);
        }
        t
    }

    pub fn add(&mut self, p: Phenotype, count: u64) {
        if count > 0 {
            *self.counts.entry(p).or_insert(0) += count;
            self.total_samples += count;
        }
    }

    pub fn count(&self, p: &Phenotype) -> u64 {
        self.counts.get(p).copied().unwrap_or(0)
    }

    /// Represented phenotypes in numeric order.
    pub fn iter(&self) -> impl Iterator<Item = (Phenotype, u64)> + '_ {
        self.counts.iter().map(|(p, c)| (*p, *c))
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn frequency(&self, p: &Phenotype) -> f64 {
        self.count(p) as f64 / self.total_samples.max(1) as f64
    }

    /// Adds `other`'s counts. Parameters must agree.
    pub fn merge(&mut self, other: &RedundancyTable) -> Result<()> {
        if other.params != self.params {
            return Err(Error::Config("cannot merge tables with different parameters".into()));
        }
        for (p, c) in other.iter() {
            *self.counts.entry(p).or_insert(0) += c;
        }
        self.total_samples += other.total_samples;
        Ok(())
    }
}

fn sample_batch(params: &ChromosomeParams, seed: u64, batch: u64, samples: u64) -> HashMap<Phenotype, u64> {
    let mut rng = stream(seed, &[TAG_SAMPLE, batch]);
    let mut ev = Evaluator::default();
    let gs = params.gate_set;
    let mut counts = HashMap::new();
    for _ in 0..samples {
        let g = Genotype::random(params, &mut rng);
        *counts.entry(ev.phenotype(&g, &gs)).or_insert(0) += 1;
    }
    counts
}

fn batches(n_samples: u64) -> u64 {
    n_samples.div_ceil(SAMPLE_BATCH)
}

/// Counts phenotypes of `n_samples` uniform random genotypes. Runs on the
/// current rayon pool; the result does not depend on its size.
pub fn sample_redundancy(params: &ChromosomeParams, n_samples: u64, seed: u64) -> Result<RedundancyTable> {
    sample_redundancy_shard(params, n_samples, seed, 0, 1)
}

/// The part of a `n_samples` run that shard `shard` of `n_shards` owns
/// (batches `b` with `b % n_shards == shard`). Merging every shard gives the
/// single-process table exactly.
pub fn sample_redundancy_shard(
    params: &ChromosomeParams,
    n_samples: u64,
    seed: u64,
    shard: u64,
    n_shards: u64,
) -> Result<RedundancyTable> {
    params.validate()?;
    if n_samples == 0 {
        return Err(Error::Config("n_samples must be at least 1".into()));
    }
    if n_shards == 0 || shard >= n_shards {
        return Err(Error::Config(format!("shard {shard} of {n_shards} is invalid")));
    }
    let parts: Vec<_> = (0..batches(n_samples))
        .filter(|b| b % n_shards == shard)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| {
            let len = SAMPLE_BATCH.min(n_samples - b * SAMPLE_BATCH);
            sample_batch(params, seed, b, len)
        })
        .collect();
    let mut table = RedundancyTable::new(*params, seed);
    for part in parts {
        for (p, c) in part {
            table.add(p, c);
        }
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankEntry {
    pub rank: usize,
    pub phenotype: Phenotype,
    pub count: u64,
    pub log10_redundancy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankTable {
    pub entries: Vec<RankEntry>,
    /// Phenotypes with zero count, when the phenotype space size is known.
    pub unrepresented: Option<u128>,
}

/// Descending count, ties by ascending phenotype value.
pub fn rank_table(t: &RedundancyTable) -> RankTable {
    let mut rows: Vec<(Phenotype, u64)> = t.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let entries = rows
        .into_iter()
        .enumerate()
        .map(|(i, (phenotype, count))| RankEntry {
            rank: i + 1,
            phenotype,
            count,
            log10_redundancy: (count as f64).log10(),
        })
        .collect();
    RankTable {
        entries,
        unrepresented: Phenotype::space_size(t.params.n_inputs).map(|s| s - t.distinct() as u128),
    }
}

/// Exact 1-neighbourhood statistics of a genotype.
#[derive(Clone, Debug)]
pub struct Neighborhood {
    pub phenotype: Phenotype,
    pub neighbors: usize,
    pub neutral: usize,
    /// Distinct phenotypes among the neighbours, excluding `phenotype`.
    pub others: HashSet<Phenotype>,
}

impl Neighborhood {
    pub fn robustness(&self) -> f64 {
        self.neutral as f64 / self.neighbors as f64
    }

    pub fn evolvability(&self) -> usize {
        self.others.len()
    }
}

pub fn neighborhood(g: &Genotype, gs: &GateSet) -> Result<Neighborhood> {
    g.check_gate_set(gs)?;
    if !g.has_mutable_locus(gs) {
        return Err(Error::NoMutableLoci);
    }
    let mut ev = Evaluator::default();
    let phenotype = ev.phenotype(g, gs);
    let mut nb = Neighborhood {
        phenotype,
        neighbors: 0,
        neutral: 0,
        others: HashSet::new(),
    };
    g.for_each_neighbor(gs, |m| {
        let p = ev.phenotype(m, gs);
        nb.neighbors += 1;
        if p == phenotype {
            nb.neutral += 1;
        } else {
            nb.others.insert(p);
        }
    });
    Ok(nb)
}

/// Fraction of the exact 1-neighbourhood that keeps the phenotype.
pub fn genotype_robustness(g: &Genotype, gs: &GateSet) -> Result<f64> {
    neighborhood(g, gs).map(|n| n.robustness())
}

/// Distinct phenotypes, other than its own, one mutation away from `g`.
pub fn genotype_evolvability(g: &Genotype, gs: &GateSet) -> Result<usize> {
    neighborhood(g, gs).map(|n| n.evolvability())
}

/// How genotypes mapping to a phenotype are found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenotypeSource {
    /// Independent epochal evolution runs from random starts. With
    /// `drift > 0` each found genotype then takes a neutral walk of that
    /// many steps; the first genotype to hit a target sits at the edge of its
    /// neutral network, and the walk moves it towards a uniform draw from it.
    Evolution { max_steps: u64, drift: u64 },
    /// Uniform random genotypes, filtered; at most `budget` draws.
    Sampling { budget: u64 },
}

impl GenotypeSource {
    pub fn label(&self) -> &'static str {
        match self {
            GenotypeSource::Evolution { .. } => "evolution",
            GenotypeSource::Sampling { .. } => "sampling",
        }
    }
}

/// Evolution runs allowed per requested genotype before giving up.
pub const EVOLUTION_RUN_FACTOR: u64 = 4;

/// Default number of source genotypes per phenotype.
pub const DEFAULT_K: usize = 600;

#[derive(Clone, Copy, Debug)]
pub struct SourceSpec {
    pub source: GenotypeSource,
    pub k: usize,
    pub seed: u64,
}

/// Genotypes found for a phenotype.
#[derive(Clone, Debug)]
pub struct NeutralSample {
    pub phenotype: Phenotype,
    pub params: ChromosomeParams,
    pub source: GenotypeSource,
    pub requested: usize,
    pub genotypes: Vec<Genotype>,
    /// Evolution runs or random draws spent.
    pub attempts: u64,
}

const SAMPLING_CHUNK: u64 = 1 << 14;

/// Finds up to `spec.k` genotypes mapping to `p`. Evolution run `i` uses
/// stream `[TAG_EVOLVE, key(p), i]`; sampling chunk `c` uses
/// `[TAG_SAMPLING_SOURCE, key(p), c]`.
pub fn find_neutral_genotypes(p: &Phenotype, params: &ChromosomeParams, spec: &SourceSpec) -> Result<NeutralSample> {
    params.validate()?;
    if spec.k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if p.n_inputs() != params.n_inputs {
        return Err(Error::Config("phenotype and parameters disagree on input count".into()));
    }
    let key = phenotype_key(p);
    let (genotypes, attempts) = match spec.source {
        GenotypeSource::Evolution { max_steps, drift } => {
            let search = EpochalSearch::new(*params).max_steps(max_steps);
            let gs = params.gate_set;
            let k = spec.k as u64;
            let mut found = Vec::new();
            let mut runs = 0;
            // Runs that stall are replaced, up to EVOLUTION_RUN_FACTOR * k in total.
            while (found.len() as u64) < k && runs < EVOLUTION_RUN_FACTOR * k {
                let wave = runs..runs + (k - found.len() as u64);
                runs = wave.end;
                let results = wave
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = stream(spec.seed, &[TAG_EVOLVE, key, i]);
                        let r = search.run(p, &mut rng)?;
                        if !r.found() {
                            return Ok(None);
                        }
                        if drift == 0 {
                            return Ok(Some(r.final_genotype));
                        }
                        neutral_walk(&r.final_genotype, &gs, drift, false, &mut rng).map(|w| Some(w.final_genotype))
                    })
                    .collect::<Result<Vec<_>>>()?;
                found.extend(results.into_iter().flatten());
            }
            (found, runs)
        }
        GenotypeSource::Sampling { budget } => {
            let gs = params.gate_set;
            let mut ev = Evaluator::default();
            let mut out = Vec::new();
            let mut drawn = 0u64;
            let mut chunk = 0u64;
            'outer: while drawn < budget {
                let mut rng = stream(spec.seed, &[TAG_SAMPLING_SOURCE, key, chunk]);
                chunk += 1;
                for _ in 0..SAMPLING_CHUNK.min(budget - drawn) {
                    let g = Genotype::random(params, &mut rng);
                    drawn += 1;
                    if ev.phenotype(&g, &gs) == *p {
                        out.push(g);
                        if out.len() == spec.k {
                            break 'outer;
                        }
                    }
                }
            }
            (out, drawn)
        }
    };
    Ok(NeutralSample {
        phenotype: *p,
        params: *params,
        source: spec.source,
        requested: spec.k,
        genotypes,
        attempts,
    })
}

/// A phenotype-level estimate with its provenance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhenotypeEstimate {
    pub value: f64,
    pub achieved: usize,
    pub requested: usize,
    pub source: GenotypeSource,
}

impl NeutralSample {
    pub fn achieved(&self) -> usize {
        self.genotypes.len()
    }

    pub fn is_complete(&self) -> bool {
        self.genotypes.len() >= self.requested
    }

    /// Mean exact genotype robustness, `None` when nothing was found.
    pub fn robustness(&self) -> Result<Option<f64>> {
        if self.genotypes.is_empty() {
            return Ok(None);
        }
        let gs = self.params.gate_set;
        let sum: f64 = self
            .genotypes
            .iter()
            .map(|g| genotype_robustness(g, &gs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        Ok(Some(sum / self.genotypes.len() as f64))
    }

    /// Size of the union of the neighbourhood phenotypes of every genotype,
    /// optionally counting the focal phenotype itself.
    pub fn evolvability(&self, include_self: bool) -> Result<usize> {
        let gs = self.params.gate_set;
        let mut union = HashSet::new();
        let mut self_seen = false;
        for g in &self.genotypes {
            let nb = neighborhood(g, &gs)?;
            self_seen |= nb.neutral > 0;
            union.extend(nb.others);
        }
        Ok(union.len() + usize::from(include_self && self_seen))
    }

    /// Converts to an estimate, or to [`Error::Partial`] carrying the value
    /// over what was found.
    pub fn finish(&self, value: Option<f64>) -> Result<PhenotypeEstimate> {
        if !self.is_complete() {
            return Err(Error::Partial {
                phenotype: self.phenotype,
                achieved: self.achieved(),
                requested: self.requested,
                estimate: value,
            });
        }
        Ok(PhenotypeEstimate {
            value: value.unwrap_or(f64::NAN),
            achieved: self.achieved(),
            requested: self.requested,
            source: self.source,
        })
    }
}

/// Mean genotype robustness over `spec.k` source genotypes of `p`.
pub fn phenotype_robustness(p: &Phenotype, params: &ChromosomeParams, spec: &SourceSpec) -> Result<PhenotypeEstimate> {
    let sample = find_neutral_genotypes(p, params, spec)?;
    let value = sample.robustness()?;
    sample.finish(value)
}

/// Distinct phenotypes (other than `p`) in the union of the neighbourhoods
/// of `spec.k` source genotypes.
pub fn phenotype_evolvability(p: &Phenotype, params: &ChromosomeParams, spec: &SourceSpec) -> Result<PhenotypeEstimate> {
    let sample = find_neutral_genotypes(p, params, spec)?;
    let value = sample.evolvability(false)? as f64;
    sample.finish(Some(value))
}

/// Draws a uniformly random phenotype of `n` inputs.
pub fn random_phenotype<R: Rng + ?Sized>(n_inputs: usize, rng: &mut R) -> Result<Phenotype> {
    crate::phenotype::check_inputs(n_inputs)?;
    let bits: u128 = rng.random();
    Phenotype::new(n_inputs, bits & crate::phenotype::width_mask(n_inputs))
}
