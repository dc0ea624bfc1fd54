//! Exhaustive enumeration of small genotype spaces.
//!
//! Genotypes are visited in odometer order over locus digits, the last
//! locus varying fastest; a genotype's rank is its mixed-radix value. The
//! space is split into shards by the digits of the leading loci, and shards
//! are processed in parallel and merged in shard order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genotype::{Evaluator, Genotype};
use crate::params::ChromosomeParams;
use crate::phenotype::Phenotype;

pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

/// Largest space for which neutral components are counted.
pub const COMPONENT_CAP: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub params: ChromosomeParams,
    pub predicted_space_size: u128,
}

impl EnumerationSpec {
    /// Fails with [`Error::Resource`] when the space exceeds `cap`.
    pub fn new(params: ChromosomeParams, cap: u128) -> Result<Self> {
        params.validate()?;
        let size = params.space_size().unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::Resource {
                what: "genotype space",
                required: size,
                limit: cap,
            });
        }
        Ok(EnumerationSpec {
            params,
            predicted_space_size: size,
        })
    }
}

/// Visits every genotype of a space (or of one shard of it).
pub struct SpaceIter {
    params: ChromosomeParams,
    radices: Vec<usize>,
    /// Loci below this index stay fixed.
    fixed: usize,
    next: Option<Genotype>,
    digits: Vec<usize>,
}

impl SpaceIter {
    fn new(params: ChromosomeParams, prefix: &[usize]) -> Self {
        let radices = params.radices();
        let mut digits = vec![0; radices.len()];
        digits[..prefix.len()].copy_from_slice(prefix);
        let next = Genotype::from_digits(&params, &digits).ok();
        SpaceIter {
            params,
            radices,
            fixed: prefix.len(),
            next,
            digits,
        }
    }

    /// Locus digits of the genotype the next call returns.
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }
}

impl Iterator for SpaceIter {
    type Item = Genotype;

    fn next(&mut self) -> Option<Genotype> {
        let current = self.next.take()?;
        let gs = self.params.gate_set;
        let mut g = current.clone();
        let mut l = self.radices.len();
        loop {
            if l == self.fixed {
                break;
            }
            l -= 1;
            if self.digits[l] + 1 < self.radices[l] {
                self.digits[l] += 1;
                g.set_digit(l, self.digits[l], &gs);
                self.next = Some(g);
                break;
            }
            self.digits[l] = 0;
            g.set_digit(l, 0, &gs);
        }
        Some(current)
    }
}

pub fn enumerate_space(spec: &EnumerationSpec) -> SpaceIter {
    SpaceIter::new(spec.params, &[])
}

/// Leading-locus prefixes, in rank order, that split the space into at
/// least `min_shards` pieces (fewer if the space is tiny).
pub fn shard_prefixes(params: &ChromosomeParams, min_shards: usize) -> Vec<Vec<usize>> {
    let radices = params.radices();
    let mut len = 0;
    let mut count = 1usize;
    while count < min_shards && len < radices.len() {
        count *= radices[len];
        len += 1;
    }
    let mut out = Vec::with_capacity(count);
    let mut prefix = vec![0; len];
    loop {
        out.push(prefix.clone());
        let mut l = len;
        loop {
            if l == 0 {
                return out;
            }
            l -= 1;
            prefix[l] += 1;
            if prefix[l] < radices[l] {
                break;
            }
            prefix[l] = 0;
        }
    }
}

pub fn enumerate_shard(params: &ChromosomeParams, prefix: &[usize]) -> SpaceIter {
    SpaceIter::new(*params, prefix)
}

/// Exact statistics of one phenotype. Measures are `None` for phenotypes no
/// genotype maps to.
#[derive(Clone, Debug, PartialEq)]
pub struct PhenotypeSummary {
    pub phenotype: Phenotype,
    pub count: u64,
    pub robustness: Option<f64>,
    pub evolvability: Option<usize>,
    pub components: Option<u64>,
    pub largest_component: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactMap {
    pub params: ChromosomeParams,
    pub space_size: u128,
    /// Every phenotype of the input count, in numeric order, when
    /// `n_inputs <= 4`; otherwise only represented phenotypes.
    pub phenotypes: Vec<PhenotypeSummary>,
}

impl ExactMap {
    pub fn get(&self, p: &Phenotype) -> Option<&PhenotypeSummary> {
        self.phenotypes
            .binary_search_by(|s| s.phenotype.cmp(p))
            .ok()
            .map(|i| &self.phenotypes[i])
    }

    pub fn count(&self, p: &Phenotype) -> u64 {
        self.get(p).map_or(0, |s| s.count)
    }

    pub fn represented(&self) -> impl Iterator<Item = &PhenotypeSummary> {
        self.phenotypes.iter().filter(|s| s.count > 0)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "phenotype,count,robustness,evolvability,components,largest_component")?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for s in &self.phenotypes {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                s.phenotype,
                s.count,
                opt(s.robustness.map(crate::format::real)),
                opt(s.evolvability.map(|v| v.to_string())),
                opt(s.components.map(|v| v.to_string())),
                opt(s.largest_component.map(|v| v.to_string())),
            )?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Acc {
    count: u64,
    neutral: u64,
    others: HashSet<Phenotype>,
}

fn merge_into(into: &mut HashMap<Phenotype, Acc>, part: HashMap<Phenotype, Acc>) {
    for (p, a) in part {
        let e = into.entry(p).or_default();
        e.count += a.count;
        e.neutral += a.neutral;
        e.others.extend(a.others);
    }
}

fn union_find_components(params: &ChromosomeParams, size: usize) -> HashMap<Phenotype, (u64, u64)> {
    let gs = params.gate_set;
    let radices = params.radices();
    let mut weights = vec![1usize; radices.len()];
    for l in (0..radices.len().saturating_sub(1)).rev() {
        weights[l] = weights[l + 1] * radices[l + 1];
    }
    let mut pheno = Vec::with_capacity(size);
    let mut ev = Evaluator::default();
    for g in SpaceIter::new(*params, &[]) {
        pheno.push(ev.phenotype(&g, &gs));
    }
    let mut parent: Vec<u32> = (0..size as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut digits = vec![0usize; radices.len()];
    for r in 0..size {
        for l in 0..radices.len() {
            for d in digits[l] + 1..radices[l] {
                let r2 = r + (d - digits[l]) * weights[l];
                if pheno[r2] == pheno[r] {
                    let (a, b) = (find(&mut parent, r as u32), find(&mut parent, r2 as u32));
                    if a != b {
                        parent[a.max(b) as usize] = a.min(b);
                    }
                }
            }
        }
        for l in (0..radices.len()).rev() {
            digits[l] += 1;
            if digits[l] < radices[l] {
                break;
            }
            digits[l] = 0;
        }
    }
    let mut sizes: HashMap<u32, u64> = HashMap::new();
    for r in 0..size as u32 {
        *sizes.entry(find(&mut parent, r)).or_insert(0) += 1;
    }
    let mut out: HashMap<Phenotype, (u64, u64)> = HashMap::new();
    for (root, n) in sizes {
        let e = out.entry(pheno[root as usize]).or_insert((0, 0));
        e.0 += 1;
        e.1 = e.1.max(n);
    }
    out
}

/// Counts, exact robustness and exact evolvability for every phenotype.
/// Neutral components (genotypes linked by neutral point mutations) are
/// counted when `components` is set and the space is at most
/// [`COMPONENT_CAP`].
pub fn exact_map_summary(spec: &EnumerationSpec, components: bool) -> Result<ExactMap> {
    let params = spec.params;
    let gs = params.gate_set;
    if components && spec.predicted_space_size > COMPONENT_CAP {
        return Err(Error::Resource {
            what: "genotypes for component counting",
            required: spec.predicted_space_size,
            limit: COMPONENT_CAP,
        });
    }
    let parts: Vec<HashMap<Phenotype, Acc>> = shard_prefixes(&params, 256)
        .into_par_iter()
        .map(|prefix| {
            let mut ev = Evaluator::default();
            let mut acc: HashMap<Phenotype, Acc> = HashMap::new();
            for g in SpaceIter::new(params, &prefix) {
                let p = ev.phenotype(&g, &gs);
                let e = acc.entry(p).or_default();
                e.count += 1;
                g.for_each_neighbor(&gs, |m| {
                    let q = ev.phenotype(m, &gs);
                    if q == p {
                        e.neutral += 1;
                    } else {
                        e.others.insert(q);
                    }
                });
            }
            acc
        })
        .collect();
    let mut all = HashMap::new();
    for part in parts {
        merge_into(&mut all, part);
    }
    let neighbors = match SpaceIter::new(params, &[]).next() {
        Some(g) => g.neighbor_count(&gs) as u64,
        None => 0,
    };
    let comps = components.then(|| union_find_components(&params, spec.predicted_space_size as usize));

    let mut keys: BTreeMap<Phenotype, ()> = all.keys().map(|p| (*p, ())).collect();
    if params.n_inputs <= 4 {
        for p in Phenotype::all(params.n_inputs)? {
            keys.insert(p, ());
        }
    }
    let phenotypes = keys
        .into_keys()
        .map(|p| match all.get(&p) {
            Some(a) => PhenotypeSummary {
                phenotype: p,
                count: a.count,
                robustness: (neighbors > 0).then(|| a.neutral as f64 / (a.count * neighbors) as f64),
                evolvability: Some(a.others.len()),
                components: comps.as_ref().map(|c| c[&p].0),
                largest_component: comps.as_ref().map(|c| c[&p].1),
            },
            None => PhenotypeSummary {
                phenotype: p,
                count: 0,
                robustness: None,
                evolvability: None,
                components: None,
                largest_component: None,
            },
        })
        .collect();
    Ok(ExactMap {
        params,
        space_size: spec.predicted_space_size,
        phenotypes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateSet;

    #[test]
    fn enumeration_is_complete_and_distinct() {
        let params = ChromosomeParams::cgp(2, 2, 2, GateSet::FULL).unwrap();
        let spec = EnumerationSpec::new(params, DEFAULT_ENUMERATION_CAP).unwrap();
        let all: Vec<Genotype> = enumerate_space(&spec).collect();
        assert_eq!(all.len(), 900);
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 900);
        let sharded: Vec<Genotype> = shard_prefixes(&params, 7)
            .iter()
            .flat_map(|p| enumerate_shard(&params, p))
            .collect();
        assert_eq!(sharded, all);
    }

    #[test]
    fn cap_is_enforced() {
        let err = EnumerationSpec::new(ChromosomeParams::cgp(3, 11, 8, GateSet::FULL).unwrap(), 1_000_000).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn single_gate_map() {
        let params = ChromosomeParams::cgp(2, 1, 1, GateSet::FULL).unwrap();
        let spec = EnumerationSpec::new(params, DEFAULT_ENUMERATION_CAP).unwrap();
        let map = exact_map_summary(&spec, true).unwrap();
        assert_eq!(map.phenotypes.len(), 16);
        assert_eq!(map.phenotypes.iter().map(|s| s.count).sum::<u64>(), 20);
        // AND(1,2) and AND(2,1)
        let and = map.get(&Phenotype::new(2, 0x8).unwrap()).unwrap();
        assert_eq!(and.count, 2);
        assert_eq!(and.components, Some(2));
        // a appears as AND(1,1) and OR(1,1)
        let a = map.get(&Phenotype::new(2, 0xc).unwrap()).unwrap();
        assert_eq!(a.count, 2);
        assert_eq!(a.components, Some(1));
        assert_eq!(map.count(&Phenotype::new(2, 0x9).unwrap()), 0);
        assert_eq!(map.get(&Phenotype::new(2, 0x9).unwrap()).unwrap().robustness, None);
    }
}
