//! Genotype-phenotype map analysis for logic-gate circuits.

pub mod complexity;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod format;
pub mod gate;
pub mod genotype;
pub mod matrix;
pub mod oracle;
pub mod metrics;
pub mod params;
pub mod parse;
pub mod phenotype;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use evolution::{
    default_max_steps, enumerate_neighbors, epochal_evolve, neutral_walk, point_mutate, DistancePoint, EpochalResult,
    EpochalSearch, Outcome, WalkEvent, WalkResult,
};
pub use gate::{GateFunction, GateSet};
pub use genotype::{CgpGenotype, CgpNode, Evaluator, Field, Genotype, LgpGenotype, LgpInstruction, MutationLocus};
pub use matrix::GateStateMatrix;
pub use metrics::{
    find_neutral_genotypes, genotype_evolvability, genotype_robustness, neighborhood, phenotype_evolvability,
    phenotype_robustness, rank_table, sample_redundancy, sample_redundancy_shard, GenotypeSource, NeutralSample,
    PhenotypeEstimate, RankEntry, RankTable, RedundancyTable, SourceSpec,
};
pub use params::{ChromosomeParams, Layout, Representation, PAPER_CGP_4IN, PAPER_LGP_4IN};
pub use parse::{parse_circuit, TextFormat};
pub use phenotype::{standard_contexts, InputContext, Phenotype};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/redundancy.md")]
    mod redundancy {}
    #[doc = include_str!("../../../book/src/neighbourhoods.md")]
    mod neighbourhoods {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    mod evolution {}
    #[doc = include_str!("../../../book/src/complexity.md")]
    mod complexity {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
