//! Minimum gate count of a phenotype.
//!
//! Sizes `m = 1, 2, ...` are tried in order. A size whose genotype space fits
//! under the exhaustive cap is enumerated depth-first with gate values
//! computed incrementally along the search path; larger sizes fall back to
//! independent epochal runs. The value is exact only when every smaller size
//! was enumerated exhaustively.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolution::{default_max_steps, EpochalSearch};
use crate::gate::GateFunction;
use crate::genotype::{CgpGenotype, CgpNode, Genotype, LgpGenotype, LgpInstruction};
use crate::params::{ChromosomeParams, Layout};
use crate::phenotype::{width_mask, Phenotype};
use crate::rng::{phenotype_key, stream, TAG_KOLMOGOROV};

pub const EXHAUSTIVE_CAP: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KolmogorovConfig {
    /// Largest genotype space enumerated exhaustively.
    pub exhaustive_cap: u128,
    /// Epochal runs per size beyond the cap.
    pub attempts: u64,
    /// Steps per epochal run; `None` uses the evolution default.
    pub step_budget: Option<u64>,
    /// Give up after this size.
    pub max_size: usize,
    /// CGP levels-back at every size; `None` lets every gate read any
    /// earlier node.
    pub levels_back: Option<usize>,
    pub seed: u64,
}

impl Default for KolmogorovConfig {
    fn default() -> Self {
        KolmogorovConfig {
            exhaustive_cap: EXHAUSTIVE_CAP,
            attempts: 20,
            step_budget: None,
            max_size: 32,
            levels_back: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeMethod {
    Exhaustive { space: u128 },
    Epochal { attempts: u64, step_budget: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeRecord {
    pub size: usize,
    pub method: SizeMethod,
    pub found: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KolmogorovResult {
    pub phenotype: Phenotype,
    pub value: usize,
    pub exact: bool,
    pub sizes: Vec<SizeRecord>,
    pub witness: Genotype,
}

fn sized(base: &ChromosomeParams, m: usize, cfg: &KolmogorovConfig) -> Result<ChromosomeParams> {
    match (base.layout, cfg.levels_back) {
        (Layout::Cgp { .. }, Some(lb)) => ChromosomeParams::cgp(base.n_inputs, m, lb, base.gate_set),
        _ => base.with_size(m, true),
    }
}

/// Lookup from phenotype bits to a target slot.
enum Targets {
    Dense(Vec<u32>),
    Sparse(HashMap<u128, u32>),
}

impl Targets {
    fn new(n_inputs: usize, bits: &[u128]) -> Targets {
        if n_inputs <= 4 {
            let mut v = vec![0; 1 << (1 << n_inputs)];
            for (i, &b) in bits.iter().enumerate() {
                v[b as usize] = i as u32 + 1;
            }
            Targets::Dense(v)
        } else {
            Targets::Sparse(bits.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect())
        }
    }

    #[inline]
    fn get(&self, bits: u128) -> Option<usize> {
        match self {
            Targets::Dense(v) => v[bits as usize].checked_sub(1).map(|i| i as usize),
            Targets::Sparse(m) => m.get(&bits).map(|&i| i as usize),
        }
    }
}

/// First witness (in enumeration order) per target, within one branch of the
/// search tree.
struct Finds<T> {
    witness: Vec<Option<Vec<T>>>,
    missing: usize,
}

impl<T: Clone> Finds<T> {
    fn new(n: usize) -> Self {
        Finds {
            witness: vec![None; n],
            missing: n,
        }
    }

    #[inline]
    fn offer(&mut self, slot: usize, path: &[T]) {
        if self.witness[slot].is_none() {
            self.witness[slot] = Some(path.to_vec());
            self.missing -= 1;
        }
    }

    fn absorb(&mut self, other: Finds<T>) {
        for (mine, theirs) in self.witness.iter_mut().zip(other.witness) {
            if mine.is_none() && theirs.is_some() {
                *mine = theirs;
                self.missing -= 1;
            }
        }
    }
}

struct CgpSearch<'a> {
    n: usize,
    lb: usize,
    funcs: &'a [GateFunction],
    mask: u128,
    targets: &'a Targets,
    vals: Vec<u128>,
    path: Vec<CgpNode>,
}

impl CgpSearch<'_> {
    fn radix(&self, j: usize) -> usize {
        self.n + self.lb.min(j)
    }

    fn node_index(&self, j: usize, digit: usize) -> usize {
        if digit < self.n {
            digit
        } else {
            self.n + j - self.lb.min(j) + (digit - self.n)
        }
    }

    /// Returns true when every target has a witness.
    fn dfs(&mut self, j: usize, m: usize, finds: &mut Finds<CgpNode>) -> bool {
        let r = self.radix(j);
        let last = j + 1 == m;
        for &f in self.funcs {
            for d1 in 0..r {
                let a = self.node_index(j, d1);
                for d2 in 0..r {
                    let b = self.node_index(j, d2);
                    let v = f.apply(self.vals[a], self.vals[b], self.mask);
                    self.path[j] = CgpNode::new(f, a + 1, b + 1);
                    if last {
                        if let Some(slot) = self.targets.get(v) {
                            finds.offer(slot, &self.path);
                            if finds.missing == 0 {
                                return true;
                            }
                        }
                    } else {
                        self.vals[self.n + j] = v;
                        if self.dfs(j + 1, m, finds) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
}

struct LgpSearch<'a> {
    n: usize,
    calc: usize,
    funcs: &'a [GateFunction],
    mask: u128,
    targets: &'a Targets,
    regs: Vec<Vec<u128>>,
    path: Vec<LgpInstruction>,
}

impl LgpSearch<'_> {
    fn dfs(&mut self, j: usize, m: usize, finds: &mut Finds<LgpInstruction>) -> bool {
        let nr = self.calc + self.n;
        let last = j + 1 == m;
        for (fi, f) in self.funcs.iter().enumerate() {
            for out in 0..self.calc {
                for a in 0..nr {
                    for b in 0..nr {
                        let v = f.apply(self.regs[j][a], self.regs[j][b], self.mask);
                        self.path[j] = LgpInstruction::new(fi + 1, out + 1, a + 1, b + 1);
                        if last {
                            let result = if out == 0 { v } else { self.regs[j][0] };
                            if let Some(slot) = self.targets.get(result) {
                                finds.offer(slot, &self.path);
                                if finds.missing == 0 {
                                    return true;
                                }
                            }
                        } else {
                            let (head, tail) = self.regs.split_at_mut(j + 1);
                            tail[0].copy_from_slice(&head[j]);
                            tail[0][out] = v;
                            if self.dfs(j + 1, m, finds) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }
}

/// Exhaustive search of one size for every target, in parallel over the
/// first gate's choices. Witnesses are the first hits in enumeration order.
fn exhaustive(params: &ChromosomeParams, targets: &[Phenotype]) -> Vec<Option<Genotype>> {
    let n = params.n_inputs;
    let bits: Vec<u128> = targets.iter().map(|p| p.bits()).collect();
    let lookup = Targets::new(n, &bits);
    let funcs = params.gate_set.functions();
    let mask = width_mask(n);
    let inputs: Vec<u128> = crate::phenotype::standard_contexts(n)
        .expect("validated input count")
        .rows()
        .to_vec();
    match params.layout {
        Layout::Cgp { gates, levels_back } => {
            let firsts: Vec<CgpNode> = funcs
                .iter()
                .flat_map(|&f| (0..n).flat_map(move |a| (0..n).map(move |b| CgpNode::new(f, a + 1, b + 1))))
                .collect();
            let parts: Vec<Finds<CgpNode>> = firsts
                .par_iter()
                .map(|first| {
                    let mut s = CgpSearch {
                        n,
                        lb: levels_back,
                        funcs,
                        mask,
                        targets: &lookup,
                        vals: inputs.iter().copied().chain(std::iter::repeat_n(0, gates)).collect(),
                        path: vec![*first; gates],
                    };
                    let mut finds = Finds::new(targets.len());
                    let v = first
                        .function
                        .apply(s.vals[first.in1 - 1], s.vals[first.in2 - 1], mask);
                    if gates == 1 {
                        if let Some(slot) = lookup.get(v) {
                            finds.offer(slot, &s.path);
                        }
                    } else {
                        s.vals[n] = v;
                        s.dfs(1, gates, &mut finds);
                    }
                    finds
                })
                .collect();
            let mut all = Finds::new(targets.len());
            for p in parts {
                all.absorb(p);
            }
            all.witness
                .into_iter()
                .map(|w| w.map(|nodes| CgpGenotype::from_parts_unchecked(n, levels_back, nodes).into()))
                .collect()
        }
        Layout::Lgp {
            instructions,
            calc_registers,
        } => {
            let mut finds = Finds::new(targets.len());
            if instructions > 0 {
                let mut start = vec![0u128; calc_registers];
                start.extend(&inputs);
                let mut s = LgpSearch {
                    n,
                    calc: calc_registers,
                    funcs,
                    mask,
                    targets: &lookup,
                    regs: vec![start; instructions],
                    path: vec![LgpInstruction::new(1, 1, 1, 1); instructions],
                };
                s.dfs(0, instructions, &mut finds);
            }
            finds
                .witness
                .into_iter()
                .map(|w| w.map(|prog| LgpGenotype::from_parts_unchecked(n, calc_registers, prog).into()))
                .collect()
        }
    }
}

/// Epochal attempts at one size; attempt `a` uses stream
/// `[TAG_KOLMOGOROV, key(p), m, a]` and the lowest successful attempt wins.
fn epochal(params: &ChromosomeParams, p: &Phenotype, cfg: &KolmogorovConfig, budget: u64) -> Result<Option<Genotype>> {
    let search = EpochalSearch::new(*params).max_steps(budget);
    let key = phenotype_key(p);
    let m = params.size() as u64;
    let runs = (0..cfg.attempts)
        .into_par_iter()
        .map(|a| {
            let mut rng = stream(cfg.seed, &[TAG_KOLMOGOROV, key, m, a]);
            search.run(p, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(runs.into_iter().find(|r| r.found()).map(|r| r.final_genotype))
}

/// Minimum size for each phenotype. One exhaustive enumeration per size
/// serves every phenotype still unresolved. Phenotypes not found by
/// `cfg.max_size` get [`Error::NotFound`].
pub fn kolmogorov_table(
    base: &ChromosomeParams,
    phenotypes: &[Phenotype],
    cfg: &KolmogorovConfig,
) -> Result<Vec<Result<KolmogorovResult>>> {
    base.validate()?;
    if let Some(p) = phenotypes.iter().find(|p| p.n_inputs() != base.n_inputs) {
        return Err(Error::Config(format!("phenotype {p} does not have {} inputs", base.n_inputs)));
    }
    let budget = cfg.step_budget.unwrap_or_else(|| default_max_steps(base.n_inputs));
    let mut records: Vec<Vec<SizeRecord>> = vec![Vec::new(); phenotypes.len()];
    let mut done: Vec<Option<KolmogorovResult>> = vec![None; phenotypes.len()];
    let mut remaining: Vec<usize> = (0..phenotypes.len()).collect();
    for m in 1..=cfg.max_size {
        if remaining.is_empty() {
            break;
        }
        let params = sized(base, m, cfg)?;
        let targets: Vec<Phenotype> = remaining.iter().map(|&i| phenotypes[i]).collect();
        let (method, found) = match params.space_size().filter(|&s| s <= cfg.exhaustive_cap) {
            Some(space) => (SizeMethod::Exhaustive { space }, exhaustive(&params, &targets)),
            None => {
                let found = targets
                    .par_iter()
                    .map(|p| epochal(&params, p, cfg, budget))
                    .collect::<Result<Vec<_>>>()?;
                (
                    SizeMethod::Epochal {
                        attempts: cfg.attempts,
                        step_budget: budget,
                    },
                    found,
                )
            }
        };
        let mut still = Vec::new();
        for (&i, witness) in remaining.iter().zip(found) {
            records[i].push(SizeRecord {
                size: m,
                method,
                found: witness.is_some(),
            });
            match witness {
                Some(w) => {
                    let exact = records[i][..records[i].len() - 1]
                        .iter()
                        .all(|r| matches!(r.method, SizeMethod::Exhaustive { .. }));
                    done[i] = Some(KolmogorovResult {
                        phenotype: phenotypes[i],
                        value: m,
                        exact,
                        sizes: std::mem::take(&mut records[i]),
                        witness: w,
                    });
                }
                None => still.push(i),
            }
        }
        remaining = still;
    }
    Ok(done
        .into_iter()
        .zip(phenotypes)
        .map(|(d, p)| {
            d.ok_or(Error::NotFound {
                phenotype: *p,
                max_gates: cfg.max_size,
            })
        })
        .collect())
}

/// Minimum size of circuits in `base`'s representation, input count and gate
/// set computing `p`. `base`'s own size is ignored.
pub fn kolmogorov_complexity(p: &Phenotype, base: &ChromosomeParams, cfg: &KolmogorovConfig) -> Result<KolmogorovResult> {
    kolmogorov_table(base, std::slice::from_ref(p), cfg)?
        .pop()
        .expect("one result per phenotype")
}
