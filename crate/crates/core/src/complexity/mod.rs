//! Circuit complexity: Tononi complexity of the gate-state matrix and the
//! minimum gate count (a Kolmogorov-style complexity) of a phenotype.

mod kolmogorov;
mod tononi;

pub use kolmogorov::{
    kolmogorov_complexity, kolmogorov_table, KolmogorovConfig, KolmogorovResult, SizeMethod, SizeRecord,
    EXHAUSTIVE_CAP,
};
pub use tononi::{
    genotype_tononi, matrix_entropy, mutual_information, phenotype_tononi, subset_entropy, tononi_complexity,
    SubsetSampling, TononiOptions, TononiResult, EXACT_ROW_LIMIT,
};
