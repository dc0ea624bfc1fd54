//! Entropy, mutual information and Tononi complexity of gate-state matrices.
//!
//! A matrix has `M` rows (gates) and `2^n` columns (input contexts). The
//! entropy of a row subset `S` is the Shannon entropy, in bits, of the
//! distribution of its column vectors, each column weighted `2^-n`. The empty
//! subset has entropy 0.
//!
//! Complexity is computed as
//!
//! ```text
//! C(X) = 1/2 * sum_{k=1..M} 1/binom(M,k) * sum_{|S|=k} [H(S) + H(X\S) - H(X)]
//! ```
//!
//! which needs `H` for every subset. Columns are packed as row bitmasks so a
//! subset's column states are `column & S`.

use rand::seq::index;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gate::GateSet;
use crate::genotype::Genotype;
use crate::matrix::GateStateMatrix;
use crate::metrics::{NeutralSample, PhenotypeEstimate};
use crate::rng::stream;

/// Largest row count computed exactly (all `2^M` subsets).
pub const EXACT_ROW_LIMIT: usize = 24;

/// Monte Carlo estimate: `per_k` random subsets for every size `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetSampling {
    pub per_k: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TononiOptions {
    /// Drop gates that cannot reach the output before measuring.
    pub active_only: bool,
    /// Used only when the row count exceeds [`EXACT_ROW_LIMIT`]; without it
    /// such matrices are a resource error.
    pub sampling: Option<SubsetSampling>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TononiResult {
    pub complexity: f64,
    /// Mean `H(S) + H(X\S) - H(X)` over subsets of size `k`, at index `k - 1`.
    pub per_k_terms: Vec<f64>,
    pub rows: usize,
    pub exact: bool,
}

/// Entropy of a multiset of column states. Sorts `states`.
fn entropy_of(states: &mut [u64]) -> f64 {
    states.sort_unstable();
    let total = states.len() as f64;
    let mut h = 0.0;
    let mut i = 0;
    while i < states.len() {
        let j = i + states[i..].iter().take_while(|&&s| s == states[i]).count();
        let p = (j - i) as f64 / total;
        h += p * (1.0 / p).log2();
        i = j;
    }
    h
}

fn masked_entropy(cols: &[u64], mask: u64, buf: &mut [u64]) -> f64 {
    for (b, c) in buf.iter_mut().zip(cols) {
        *b = c & mask;
    }
    entropy_of(buf)
}

fn row_mask(x: &GateStateMatrix, rows: &[usize]) -> Result<u64> {
    rows.iter().try_fold(0u64, |acc, &r| {
        if r >= x.len() {
            Err(Error::Config(format!("row {r} out of range for {} rows", x.len())))
        } else {
            Ok(acc | (1 << r))
        }
    })
}

fn check_rows(x: &GateStateMatrix) -> Result<()> {
    if x.len() > 64 {
        return Err(Error::Resource {
            what: "gate-state matrix rows",
            required: x.len() as u128,
            limit: 64,
        });
    }
    Ok(())
}

/// Entropy of the rows listed in `rows` (0-based).
pub fn subset_entropy(x: &GateStateMatrix, rows: &[usize]) -> Result<f64> {
    check_rows(x)?;
    let mask = row_mask(x, rows)?;
    let cols = x.column_states();
    let mut buf = vec![0; cols.len()];
    Ok(masked_entropy(&cols, mask, &mut buf))
}

/// `H(X)` of the whole matrix.
pub fn matrix_entropy(x: &GateStateMatrix) -> Result<f64> {
    let all: Vec<usize> = (0..x.len()).collect();
    subset_entropy(x, &all)
}

/// `H(A) + H(B) - H(A u B)` for disjoint row sets.
pub fn mutual_information(x: &GateStateMatrix, a: &[usize], b: &[usize]) -> Result<f64> {
    check_rows(x)?;
    let ma = row_mask(x, a)?;
    let mb = row_mask(x, b)?;
    if ma & mb != 0 {
        return Err(Error::Overlap);
    }
    let cols = x.column_states();
    let mut buf = vec![0; cols.len()];
    let mi = masked_entropy(&cols, ma, &mut buf) + masked_entropy(&cols, mb, &mut buf)
        - masked_entropy(&cols, ma | mb, &mut buf);
    // rounding can leave a tiny negative residue for independent sets
    Ok(mi.max(0.0))
}

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

fn exact(cols: &[u64], m: usize) -> TononiResult {
    let full: u64 = if m == 64 { u64::MAX } else { (1 << m) - 1 };
    let h: Vec<f64> = (0..=full)
        .into_par_iter()
        .map_init(
            || vec![0u64; cols.len()],
            |buf, s| if s == 0 { 0.0 } else { masked_entropy(cols, s, buf) },
        )
        .collect();
    let hx = h[full as usize];
    let mut sums = vec![0.0; m];
    for s in 1..=full {
        sums[s.count_ones() as usize - 1] += h[s as usize] + h[(full ^ s) as usize] - hx;
    }
    let per_k_terms: Vec<f64> = sums
        .iter()
        .enumerate()
        .map(|(i, s)| s / binomial(m, i + 1))
        .collect();
    TononiResult {
        complexity: 0.5 * per_k_terms.iter().sum::<f64>(),
        per_k_terms,
        rows: m,
        exact: true,
    }
}

fn sampled(cols: &[u64], m: usize, opts: SubsetSampling) -> TononiResult {
    let full: u64 = if m == 64 { u64::MAX } else { (1 << m) - 1 };
    let mut buf = vec![0u64; cols.len()];
    let hx = masked_entropy(cols, full, &mut buf);
    let mut rng = stream(opts.seed, &[m as u64]);
    let per_k_terms: Vec<f64> = (1..=m)
        .map(|k| {
            if k == m {
                return 0.0;
            }
            let draws = opts.per_k.max(1);
            let total: f64 = (0..draws)
                .map(|_| {
                    let s = index::sample(&mut rng, m, k)
                        .into_iter()
                        .fold(0u64, |acc, r| acc | (1 << r));
                    masked_entropy(cols, s, &mut buf) + masked_entropy(cols, full ^ s, &mut buf) - hx
                })
                .sum();
            total / draws as f64
        })
        .collect();
    TononiResult {
        complexity: 0.5 * per_k_terms.iter().sum::<f64>(),
        per_k_terms,
        rows: m,
        exact: false,
    }
}

/// Tononi complexity of every row of `x`. Exact up to [`EXACT_ROW_LIMIT`]
/// rows; beyond that `opts.sampling` must be set. `opts.active_only` is
/// ignored here since a bare matrix has no wiring; see [`genotype_tononi`].
pub fn tononi_complexity(x: &GateStateMatrix, opts: &TononiOptions) -> Result<TononiResult> {
    check_rows(x)?;
    let m = x.len();
    if m == 0 {
        return Ok(TononiResult {
            complexity: 0.0,
            per_k_terms: Vec::new(),
            rows: 0,
            exact: true,
        });
    }
    let cols = x.column_states();
    if m <= EXACT_ROW_LIMIT {
        return Ok(exact(&cols, m));
    }
    match opts.sampling {
        Some(s) => Ok(sampled(&cols, m, s)),
        None => Err(Error::Resource {
            what: "row subsets",
            required: 1u128 << m,
            limit: 1u128 << EXACT_ROW_LIMIT,
        }),
    }
}

pub fn genotype_tononi(g: &Genotype, gs: &GateSet, opts: &TononiOptions) -> Result<TononiResult> {
    let (_, x) = g.evaluate(gs)?;
    let x = if opts.active_only {
        let keep: Vec<usize> = g
            .active_mask()
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| a.then_some(i))
            .collect();
        x.select(&keep)
    } else {
        x
    };
    tononi_complexity(&x, opts)
}

/// Mean genotype complexity over the sample's genotypes.
pub fn phenotype_tononi(sample: &NeutralSample, opts: &TononiOptions) -> Result<PhenotypeEstimate> {
    let gs = sample.params.gate_set;
    let values = sample
        .genotypes
        .iter()
        .map(|g| genotype_tononi(g, &gs, opts).map(|r| r.complexity))
        .collect::<Result<Vec<_>>>()?;
    let mean = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
    sample.finish(mean)
}
