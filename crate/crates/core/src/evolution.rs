//! Point mutation and the two single-genotype search strategies: neutral
//! walks and Hamming-guided epochal evolution.
//!
//! Mutation is locus-uniform: a mutable locus (gate function, a connection,
//! or for LGP the output register) is chosen uniformly, then a new value is
//! chosen uniformly among the locus's other legal values.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gate::GateSet;
use crate::genotype::{Evaluator, Genotype};
use crate::params::ChromosomeParams;
use crate::phenotype::Phenotype;

pub fn point_mutate<R: Rng + ?Sized>(g: &Genotype, gs: &GateSet, rng: &mut R) -> Result<Genotype> {
    let mut m = g.clone();
    m.mutate_in_place(gs, rng)?;
    Ok(m)
}

/// All single-locus variants, locus-major and value-minor.
pub fn enumerate_neighbors(g: &Genotype, gs: &GateSet) -> Vec<Genotype> {
    let mut out = Vec::with_capacity(g.neighbor_count(gs));
    g.for_each_neighbor(gs, |n| out.push(n.clone()));
    out
}

/// One step of a recorded walk. `phenotype` is the mutant's phenotype.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkEvent {
    pub step: u64,
    pub accepted: bool,
    pub phenotype: Phenotype,
}

#[derive(Clone, Debug)]
pub struct WalkResult {
    pub final_genotype: Genotype,
    pub phenotype: Phenotype,
    pub steps_taken: u64,
    pub accepted_steps: u64,
    /// Accepted genotypes, in order, when recording was requested.
    pub trace: Option<Vec<Genotype>>,
    pub events: Option<Vec<WalkEvent>>,
}

impl WalkResult {
    pub fn acceptance_rate(&self) -> f64 {
        if self.steps_taken == 0 {
            0.0
        } else {
            self.accepted_steps as f64 / self.steps_taken as f64
        }
    }
}

/// Runs exactly `max_steps` mutations, keeping each mutant that maps to the
/// starting phenotype.
pub fn neutral_walk<R: Rng + ?Sized>(
    start: &Genotype,
    gs: &GateSet,
    max_steps: u64,
    record: bool,
    rng: &mut R,
) -> Result<WalkResult> {
    start.check_gate_set(gs)?;
    let mut ev = Evaluator::default();
    let mut g = start.clone();
    let phenotype = ev.phenotype(&g, gs);
    let mut trace = record.then(Vec::new);
    let mut events = record.then(Vec::new);
    let mut accepted_steps = 0;
    for step in 1..=max_steps {
        let change = g.mutate_in_place(gs, rng)?;
        let p = ev.phenotype(&g, gs);
        let accepted = p == phenotype;
        if accepted {
            accepted_steps += 1;
            if let Some(t) = trace.as_mut() {
                t.push(g.clone());
            }
        } else {
            g.undo(change, gs);
        }
        if let Some(e) = events.as_mut() {
            e.push(WalkEvent {
                step,
                accepted,
                phenotype: p,
            });
        }
    }
    Ok(WalkResult {
        final_genotype: g,
        phenotype,
        steps_taken: max_steps,
        accepted_steps,
        trace,
        events,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found,
    StepLimit,
}

/// Hamming distance to the target at the start and after every epoch
/// transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistancePoint {
    pub step: u64,
    pub distance: u32,
    pub phenotype: Phenotype,
}

#[derive(Clone, Debug)]
pub struct EpochalResult {
    pub outcome: Outcome,
    pub final_genotype: Genotype,
    pub final_phenotype: Phenotype,
    pub steps_taken: u64,
    pub distance_trace: Option<Vec<DistancePoint>>,
}

impl EpochalResult {
    pub fn found(&self) -> bool {
        self.outcome == Outcome::Found
    }
}

/// Step limits used when none is given: 2e5 up to 3 inputs, 1e6 beyond.
pub fn default_max_steps(n_inputs: usize) -> u64 {
    if n_inputs <= 3 {
        200_000
    } else {
        1_000_000
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EpochalSearch {
    pub params: ChromosomeParams,
    pub max_steps: u64,
    pub record_trace: bool,
}

impl EpochalSearch {
    pub fn new(params: ChromosomeParams) -> Self {
        EpochalSearch {
            params,
            max_steps: default_max_steps(params.n_inputs),
            record_trace: false,
        }
    }

    pub fn max_steps(mut self, steps: u64) -> Self {
        self.max_steps = steps;
        self
    }

    pub fn record_trace(mut self, on: bool) -> Self {
        self.record_trace = on;
        self
    }

    /// Starts from a uniform random genotype drawn from `rng`.
    pub fn run<R: Rng + ?Sized>(&self, target: &Phenotype, rng: &mut R) -> Result<EpochalResult> {
        if target.n_inputs() != self.params.n_inputs {
            return Err(Error::Config(format!(
                "target has {} inputs, parameters have {}",
                target.n_inputs(),
                self.params.n_inputs
            )));
        }
        let start = Genotype::random(&self.params, rng);
        self.run_from(start, target, rng)
    }

    /// Accepts neutral mutants and mutants strictly Hamming-closer to the
    /// target; everything else is rejected.
    pub fn run_from<R: Rng + ?Sized>(
        &self,
        start: Genotype,
        target: &Phenotype,
        rng: &mut R,
    ) -> Result<EpochalResult> {
        let gs = self.params.gate_set;
        start.check_gate_set(&gs)?;
        let mut ev = Evaluator::default();
        let mut g = start;
        let mut current = ev.phenotype(&g, &gs);
        let mut distance = current.hamming(target);
        let mut trace = self.record_trace.then(Vec::new);
        let mark = |trace: &mut Option<Vec<DistancePoint>>, step, distance, phenotype| {
            if let Some(t) = trace.as_mut() {
                t.push(DistancePoint {
                    step,
                    distance,
                    phenotype,
                });
            }
        };
        mark(&mut trace, 0, distance, current);
        let mut steps = 0;
        while distance > 0 && steps < self.max_steps {
            steps += 1;
            let change = g.mutate_in_place(&gs, rng)?;
            let p = ev.phenotype(&g, &gs);
            if p == current {
                continue;
            }
            let d = p.hamming(target);
            if d < distance {
                current = p;
                distance = d;
                mark(&mut trace, steps, d, p);
            } else {
                g.undo(change, &gs);
            }
        }
        Ok(EpochalResult {
            outcome: if distance == 0 {
                Outcome::Found
            } else {
                Outcome::StepLimit
            },
            final_genotype: g,
            final_phenotype: current,
            steps_taken: steps,
            distance_trace: trace,
        })
    }
}

pub fn epochal_evolve<R: Rng + ?Sized>(
    target: &Phenotype,
    params: &ChromosomeParams,
    max_steps: u64,
    rng: &mut R,
) -> Result<EpochalResult> {
    EpochalSearch::new(*params).max_steps(max_steps).run(target, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateFunction;
    use crate::genotype::{CgpGenotype, CgpNode};
    use crate::rng::stream;

    fn and12() -> Genotype {
        CgpGenotype::new(2, 1, vec![CgpNode::new(GateFunction::And, 1, 2)])
            .unwrap()
            .into()
    }

    #[test]
    fn single_gate_neighbourhood() {
        let ns = enumerate_neighbors(&and12(), &GateSet::FULL);
        assert_eq!(ns.len(), 6);
        let text: Vec<String> = ns.iter().map(|g| g.to_string()).collect();
        assert_eq!(
            text,
            [
                "circuit((1,2), ((3,OR,1,2)))",
                "circuit((1,2), ((3,NAND,1,2)))",
                "circuit((1,2), ((3,NOR,1,2)))",
                "circuit((1,2), ((3,XOR,1,2)))",
                "circuit((1,2), ((3,AND,2,2)))",
                "circuit((1,2), ((3,AND,1,1)))",
            ]
        );
        assert!(!ns.contains(&and12()));
    }

    #[test]
    fn mutation_changes_exactly_one_locus() {
        let g = and12();
        let mut rng = stream(1, &[0]);
        for _ in 0..200 {
            let m = point_mutate(&g, &GateSet::FULL, &mut rng).unwrap();
            let diff = g
                .digits(&GateSet::FULL)
                .iter()
                .zip(m.digits(&GateSet::FULL))
                .filter(|(a, b)| **a != *b)
                .count();
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn no_mutable_loci() {
        let g: Genotype = CgpGenotype::new(1, 1, vec![CgpNode::new(GateFunction::And, 1, 1)])
            .unwrap()
            .into();
        let gs = GateSet::new(&[GateFunction::And]).unwrap();
        let mut rng = stream(1, &[0]);
        assert!(matches!(point_mutate(&g, &gs, &mut rng), Err(Error::NoMutableLoci)));
        assert!(g.mutable_loci(&gs).is_empty());
    }

    #[test]
    fn zero_step_walk() {
        let mut rng = stream(3, &[0]);
        let r = neutral_walk(&and12(), &GateSet::FULL, 0, true, &mut rng).unwrap();
        assert_eq!(r.final_genotype, and12());
        assert_eq!((r.steps_taken, r.accepted_steps), (0, 0));
    }

    #[test]
    fn epochal_finds_initial_phenotype_immediately() {
        let params = ChromosomeParams::cgp(3, 11, 8, GateSet::FULL).unwrap();
        let mut rng = stream(11, &[0]);
        let start = Genotype::random(&params, &mut rng.clone());
        let target = start.phenotype(&GateSet::FULL).unwrap();
        let r = epochal_evolve(&target, &params, 1000, &mut rng).unwrap();
        assert!(r.found());
        assert_eq!(r.steps_taken, 0);
        assert_eq!(r.final_genotype, start);
    }

    #[test]
    fn epochal_rejects_mismatched_target() {
        let params = ChromosomeParams::cgp(3, 4, 4, GateSet::FULL).unwrap();
        let target = Phenotype::new(2, 0x9).unwrap();
        let mut rng = stream(1, &[0]);
        assert!(matches!(epochal_evolve(&target, &params, 10, &mut rng), Err(Error::Config(_))));
    }
}
