//! Independent reference implementations and reusable checks shared by the
//! property tests and the acceptance target.

#![allow(dead_code)]

use std::collections::HashMap;

use gpmap::complexity::{matrix_entropy, mutual_information, tononi_complexity, TononiOptions};
use gpmap::experiment::{merge_redundancy, redundancy_table, ExperimentConfig};
use gpmap::rng::stream;
use gpmap::{
    sample_redundancy_shard, CgpGenotype, ChromosomeParams, EpochalSearch, GateSet, GateStateMatrix, Genotype,
    LgpGenotype, Phenotype,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Evaluates one input assignment at a time with plain booleans. Returns the
/// output truth table and the per-gate truth tables.
pub fn naive_eval(g: &Genotype, gs: &GateSet) -> (u128, Vec<u128>) {
    let n = g.n_inputs();
    let mut out = 0u128;
    let mut rows = vec![0u128; g.size()];
    for b in 0..(1usize << n) {
        // input i (1-based) is bit n - i of the column index
        let input = |i: usize| (b >> (n - i)) & 1 == 1;
        let result = match g {
            Genotype::Cgp(c) => {
                let mut vals: Vec<bool> = (1..=n).map(input).collect();
                for (j, node) in c.nodes().iter().enumerate() {
                    let v = node.function.eval(vals[node.in1 - 1], vals[node.in2 - 1]);
                    if v {
                        rows[j] |= 1 << b;
                    }
                    vals.push(v);
                }
                *vals.last().unwrap()
            }
            Genotype::Lgp(l) => {
                let mut regs = vec![false; l.registers()];
                for i in 1..=n {
                    regs[l.calc_registers() + i - 1] = input(i);
                }
                for (j, ins) in l.instructions().iter().enumerate() {
                    let f = gs.by_index(ins.function).unwrap();
                    let v = f.eval(regs[ins.in1 - 1], regs[ins.in2 - 1]);
                    regs[ins.out - 1] = v;
                    if v {
                        rows[j] |= 1 << b;
                    }
                }
                regs[0]
            }
        };
        if result {
            out |= 1 << b;
        }
    }
    (out, rows)
}

/// Shannon entropy (bits) of the columns of `rows` restricted to `subset`.
pub fn naive_entropy(x: &GateStateMatrix, subset: &[usize]) -> f64 {
    let mut counts: HashMap<Vec<bool>, usize> = HashMap::new();
    for c in 0..x.columns() {
        let key = subset.iter().map(|&r| (x.rows()[r] >> c) & 1 == 1).collect();
        *counts.entry(key).or_default() += 1;
    }
    let total = x.columns() as f64;
    counts
        .values()
        .map(|&k| {
            let p = k as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Mean bipartition mutual information summed over subset sizes up to
/// `M/2`, with the `k = M/2` term halved when `M` is even.
pub fn tononi_left_form(x: &GateStateMatrix) -> f64 {
    let m = x.len();
    if m < 2 {
        return 0.0;
    }
    let all: Vec<usize> = (0..m).collect();
    let h = naive_entropy(x, &all);
    let mut total = 0.0;
    for k in 1..=m / 2 {
        let (mut sum, mut n) = (0.0, 0usize);
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let a: Vec<usize> = all.iter().copied().filter(|&r| mask >> r & 1 == 1).collect();
            let b: Vec<usize> = all.iter().copied().filter(|&r| mask >> r & 1 == 0).collect();
            sum += naive_entropy(x, &a) + naive_entropy(x, &b) - h;
            n += 1;
        }
        let weight = if 2 * k == m { 0.5 } else { 1.0 };
        total += weight * sum / n as f64;
    }
    total
}

pub fn chi_square_99(df: usize) -> f64 {
    ChiSquared::new(df as f64).unwrap().inverse_cdf(0.99)
}

/// Pearson chi-square statistic of observed counts against probabilities.
pub fn chi_square(observed: &[u64], expected_p: &[f64]) -> f64 {
    let n: u64 = observed.iter().sum();
    observed
        .iter()
        .zip(expected_p)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum()
}

/// Small random parameter sets covering both representations.
pub fn random_params(seed: u64) -> ChromosomeParams {
    use rand::Rng;
    let mut rng = stream(seed, &[99]);
    let n = rng.random_range(1..=5);
    let gs = if rng.random_bool(0.5) { GateSet::FULL } else { GateSet::NO_XOR };
    let size = rng.random_range(1..=12);
    if rng.random_bool(0.5) {
        ChromosomeParams::cgp(n, size, rng.random_range(1..=size), gs).unwrap()
    } else {
        ChromosomeParams::lgp(n, size, rng.random_range(1..=3), gs).unwrap()
    }
}

/// The mutant is structurally valid and differs from `g` in one locus.
pub fn check_mutant(g: &Genotype, m: &Genotype, gs: &GateSet) -> Result<(), String> {
    match m {
        Genotype::Cgp(c) => {
            let rebuilt = CgpGenotype::new(c.n_inputs(), c.levels_back(), c.nodes().to_vec())
                .map_err(|e| format!("invalid CGP mutant: {e}"))?;
            if &rebuilt != c {
                return Err("CGP mutant does not round-trip".into());
            }
        }
        Genotype::Lgp(l) => {
            let rebuilt = LgpGenotype::new(l.n_inputs(), l.calc_registers(), l.instructions().to_vec())
                .map_err(|e| format!("invalid LGP mutant: {e}"))?;
            if &rebuilt != l {
                return Err("LGP mutant does not round-trip".into());
            }
        }
    }
    m.check_gate_set(gs).map_err(|e| e.to_string())?;
    let (a, b) = (g.digits(gs), m.digits(gs));
    let changed = a.iter().zip(&b).filter(|(x, y)| x != y).count();
    if changed != 1 {
        return Err(format!("{changed} loci changed"));
    }
    for (i, &d) in b.iter().enumerate() {
        if d >= m.radix(i, gs) {
            return Err(format!("digit {i} out of range"));
        }
    }
    Ok(())
}

/// `count` mutations spread over random genotypes of varied parameters.
pub fn mutation_closure(count: usize, seed: u64) -> Result<(), String> {
    let per_genotype = 100;
    for chunk in 0..count.div_ceil(per_genotype) {
        let params = random_params(seed ^ chunk as u64);
        let gs = params.gate_set;
        let mut rng = stream(seed, &[chunk as u64]);
        let mut g = Genotype::random(&params, &mut rng);
        for _ in 0..per_genotype {
            if !g.has_mutable_locus(&gs) {
                break;
            }
            let m = gpmap::point_mutate(&g, &gs, &mut rng).map_err(|e| e.to_string())?;
            check_mutant(&g, &m, &gs).map_err(|e| format!("{params:?}: {e}"))?;
            let (naive, _) = naive_eval(&m, &gs);
            if m.phenotype(&gs).unwrap().bits() != naive {
                return Err(format!("evaluation disagrees with reference for {m}"));
            }
            g = m;
        }
    }
    Ok(())
}

/// Every genotype a neutral walk visits has the start phenotype.
pub fn walk_closure(params: &ChromosomeParams, steps: u64, seed: u64) -> Result<(), String> {
    let gs = params.gate_set;
    let mut rng = stream(seed, &[1]);
    let start = Genotype::random(params, &mut rng);
    let p = start.phenotype(&gs).unwrap();
    let r = gpmap::neutral_walk(&start, &gs, steps, true, &mut rng).map_err(|e| e.to_string())?;
    if r.phenotype != p || r.final_genotype.phenotype(&gs).unwrap() != p {
        return Err("walk left its phenotype".into());
    }
    let trace = r.trace.unwrap();
    if trace.len() as u64 != r.accepted_steps {
        return Err("trace length differs from accepted steps".into());
    }
    for g in &trace {
        if g.phenotype(&gs).unwrap() != p {
            return Err(format!("visited {g} with another phenotype"));
        }
    }
    for e in r.events.unwrap() {
        if e.accepted != (e.phenotype == p) {
            return Err(format!("step {} acceptance inconsistent", e.step));
        }
    }
    Ok(())
}

/// Epoch transitions strictly lower the Hamming distance and each recorded
/// phenotype is at its recorded distance.
pub fn epochal_monotone(params: &ChromosomeParams, seed: u64) -> Result<(), String> {
    let mut rng = stream(seed, &[2]);
    let target = gpmap::metrics::random_phenotype(params.n_inputs, &mut rng).unwrap();
    let r = EpochalSearch::new(*params)
        .max_steps(20_000)
        .record_trace(true)
        .run(&target, &mut rng)
        .map_err(|e| e.to_string())?;
    let trace = r.distance_trace.as_deref().unwrap();
    for w in trace.windows(2) {
        if w[1].distance >= w[0].distance || w[1].step <= w[0].step {
            return Err(format!("trace not strictly decreasing: {w:?}"));
        }
    }
    for pt in trace {
        if pt.phenotype.hamming(&target) != pt.distance {
            return Err("recorded distance is wrong".into());
        }
    }
    let last = trace.last().unwrap();
    if last.phenotype != r.final_phenotype || r.final_genotype.phenotype(&params.gate_set).unwrap() != r.final_phenotype {
        return Err("final phenotype differs from last epoch".into());
    }
    if r.found() != (r.final_phenotype == target) {
        return Err("outcome inconsistent".into());
    }
    Ok(())
}

/// Exact complexity agrees with the left form on a random circuit.
pub fn tononi_forms_agree(params: &ChromosomeParams, seed: u64) -> Result<f64, String> {
    let gs = params.gate_set;
    let g = Genotype::random(params, &mut stream(seed, &[3]));
    let (_, x) = g.evaluate(&gs).unwrap();
    let right = tononi_complexity(&x, &TononiOptions::default()).map_err(|e| e.to_string())?;
    let left = tononi_left_form(&x);
    let diff = (right.complexity - left).abs();
    if diff > 1e-9 || right.complexity < -1e-9 {
        return Err(format!("{g}: right {} left {left}", right.complexity));
    }
    let h = matrix_entropy(&x).unwrap();
    let all: Vec<usize> = (0..x.len()).collect();
    if (h - naive_entropy(&x, &all)).abs() > 1e-12 {
        return Err("matrix entropy disagrees with reference".into());
    }
    Ok(diff)
}

/// MI is symmetric, non-negative and matches the reference entropies.
pub fn mi_properties(params: &ChromosomeParams, seed: u64) -> Result<(), String> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let gs = params.gate_set;
    let mut rng = stream(seed, &[4]);
    let g = Genotype::random(params, &mut rng);
    let (_, x) = g.evaluate(&gs).unwrap();
    if x.len() < 2 {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.shuffle(&mut rng);
    let cut = rng.random_range(1..idx.len());
    let (a, b) = idx.split_at(cut);
    let ab = mutual_information(&x, a, b).unwrap();
    let ba = mutual_information(&x, b, a).unwrap();
    if ab != ba {
        return Err(format!("MI not symmetric: {ab} vs {ba}"));
    }
    if ab < 0.0 {
        return Err(format!("negative MI {ab}"));
    }
    let joint: Vec<usize> = a.iter().chain(b).copied().collect();
    let reference = naive_entropy(&x, a) + naive_entropy(&x, b) - naive_entropy(&x, &joint);
    if (ab - reference.max(0.0)).abs() > 1e-9 {
        return Err(format!("MI {ab} vs reference {reference}"));
    }
    Ok(())
}

/// Shards of a redundancy run merged through the CSV layer reproduce the
/// single-process CSV byte for byte.
pub fn shards_match_single(params: &ChromosomeParams, samples: u64, shards: u64, seed: u64) -> Result<(), String> {
    let cfg = |shard| {
        let mut c = ExperimentConfig::new("redundancy", Some(*params), seed);
        c.budgets.samples = Some(samples);
        c.shard = shard;
        c
    };
    let single = sample_redundancy_shard(params, samples, seed, 0, 1).unwrap();
    let single = redundancy_table(&single, cfg(None).header()).to_csv_string();
    let parts = (0..shards)
        .map(|i| {
            let t = sample_redundancy_shard(params, samples, seed, i, shards).unwrap();
            redundancy_table(&t, cfg(Some((i, shards))).header())
        })
        .collect::<Vec<_>>();
    let merged = merge_redundancy(&parts).map_err(|e| e.to_string())?.to_csv_string();
    if merged != single {
        return Err("merged shards differ from the single run".into());
    }
    Ok(())
}

/// The worked-example circuit in both text forms.
pub const WORKED_CGP: &str = "circuit((1,2,3), ((4,OR,1,2), (5,AND,2,3), (6,XOR,4,5)))";
pub const WORKED_LGP: &str = "[(2, 1, 3, 4), (1, 2, 4, 5), (5, 1, 1, 2)]";

pub fn phenotype(n: usize, bits: u128) -> Phenotype {
    Phenotype::new(n, bits).unwrap()
}
