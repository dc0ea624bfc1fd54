//! CGP and LGP genotypes.
//!
//! Both representations expose the same *locus* view: a genotype is a
//! fixed-length sequence of loci, each holding a digit in `0..radix`. CGP
//! gates contribute `[function, in1, in2]`, LGP instructions contribute
//! `[function, out, in1, in2]`. Uniform random genotypes draw every digit
//! uniformly, point mutation rewrites one digit, and the oracle enumerates
//! the digit odometer.

mod cgp;
mod lgp;

use rand::Rng;

pub use cgp::{CgpGenotype, CgpNode};
pub use lgp::{LgpGenotype, LgpInstruction};

use crate::error::{Error, Result};
use crate::gate::GateSet;
use crate::matrix::GateStateMatrix;
use crate::params::{ChromosomeParams, Layout, Representation};
use crate::phenotype::{width_mask, Phenotype};

/// `PATTERNS[k]` alternates blocks of `2^k` ones and zeros, ones on top.
const PATTERNS: [u128; 7] = {
    let mut p = [0u128; 7];
    let mut k = 0;
    while k < 7 {
        let block = 1u32 << k;
        p[k] = (u128::MAX / ((1u128 << block) + 1)) << block;
        k += 1;
    }
    p
};

/// Standard context row `i` (1-based) for `n` inputs.
#[inline]
pub(crate) fn context_row(n: usize, i: usize) -> u128 {
    PATTERNS[n - i] & width_mask(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Function,
    Out,
    In1,
    In2,
}

/// Address of a mutable field: gate or instruction index (0-based) and field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MutationLocus {
    pub item: usize,
    pub field: Field,
}

const CGP_FIELDS: [Field; 3] = [Field::Function, Field::In1, Field::In2];
const LGP_FIELDS: [Field; 4] = [Field::Function, Field::Out, Field::In1, Field::In2];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Genotype {
    Cgp(CgpGenotype),
    Lgp(LgpGenotype),
}

impl From<CgpGenotype> for Genotype {
    fn from(g: CgpGenotype) -> Self {
        Genotype::Cgp(g)
    }
}

impl From<LgpGenotype> for Genotype {
    fn from(g: LgpGenotype) -> Self {
        Genotype::Lgp(g)
    }
}

impl Genotype {
    pub fn representation(&self) -> Representation {
        match self {
            Genotype::Cgp(_) => Representation::Cgp,
            Genotype::Lgp(_) => Representation::Lgp,
        }
    }

    pub fn n_inputs(&self) -> usize {
        match self {
            Genotype::Cgp(g) => g.n_inputs(),
            Genotype::Lgp(g) => g.n_inputs(),
        }
    }

    /// Gate or instruction count `M`.
    pub fn size(&self) -> usize {
        match self {
            Genotype::Cgp(g) => g.nodes().len(),
            Genotype::Lgp(g) => g.instructions().len(),
        }
    }

    /// Parameters describing the space this genotype lives in.
    pub fn params(&self, gate_set: GateSet) -> ChromosomeParams {
        let layout = match self {
            Genotype::Cgp(g) => Layout::Cgp {
                gates: g.nodes().len(),
                levels_back: g.levels_back(),
            },
            Genotype::Lgp(g) => Layout::Lgp {
                instructions: g.instructions().len(),
                calc_registers: g.calc_registers(),
            },
        };
        ChromosomeParams {
            n_inputs: self.n_inputs(),
            layout,
            gate_set,
        }
    }

    pub fn check_gate_set(&self, gs: &GateSet) -> Result<()> {
        match self {
            Genotype::Cgp(g) => g.check_gate_set(gs),
            Genotype::Lgp(g) => g.check_gate_set(gs),
        }
    }

    pub fn evaluate(&self, gs: &GateSet) -> Result<(Phenotype, GateStateMatrix)> {
        match self {
            Genotype::Cgp(g) => g.evaluate(gs),
            Genotype::Lgp(g) => g.evaluate(gs),
        }
    }

    /// Gates (CGP) or instructions (LGP) that influence the output.
    pub fn active_mask(&self) -> Vec<bool> {
        match self {
            Genotype::Cgp(g) => g.active_gates(),
            Genotype::Lgp(g) => g.effective_instructions(),
        }
    }

    pub fn phenotype(&self, gs: &GateSet) -> Result<Phenotype> {
        self.check_gate_set(gs)?;
        Ok(Evaluator::default().phenotype(self, gs))
    }

    /// Uniform over the representable space of `params`.
    pub fn random<R: Rng + ?Sized>(params: &ChromosomeParams, rng: &mut R) -> Genotype {
        let n = params.n_inputs;
        let funcs = params.gate_set.functions();
        match params.layout {
            Layout::Cgp { gates, levels_back } => {
                let mut g = CgpGenotype::from_parts_unchecked(n, levels_back, Vec::with_capacity(gates));
                for j in 0..gates {
                    let r = g.input_radix(j);
                    let function = funcs[rng.random_range(0..funcs.len())];
                    let in1 = g.digit_to_input(j, rng.random_range(0..r));
                    let in2 = g.digit_to_input(j, rng.random_range(0..r));
                    g.push_node(CgpNode { function, in1, in2 });
                }
                Genotype::Cgp(g)
            }
            Layout::Lgp {
                instructions,
                calc_registers,
            } => {
                let regs = calc_registers + n;
                let prog = (0..instructions)
                    .map(|_| LgpInstruction {
                        function: rng.random_range(1..=funcs.len()),
                        out: rng.random_range(1..=calc_registers),
                        in1: rng.random_range(1..=regs),
                        in2: rng.random_range(1..=regs),
                    })
                    .collect();
                Genotype::Lgp(LgpGenotype::from_parts_unchecked(n, calc_registers, prog))
            }
        }
    }

    /// Builds the genotype whose locus digits are `digits`.
    pub fn from_digits(params: &ChromosomeParams, digits: &[usize]) -> Result<Genotype> {
        let radices = params.radices();
        if digits.len() != radices.len() || digits.iter().zip(&radices).any(|(d, r)| d >= r) {
            return Err(Error::invalid("digit vector does not match the parameter layout"));
        }
        let n = params.n_inputs;
        let funcs = params.gate_set.functions();
        Ok(match params.layout {
            Layout::Cgp { gates, levels_back } => {
                let mut g = CgpGenotype::from_parts_unchecked(n, levels_back, Vec::with_capacity(gates));
                for (j, d) in digits.chunks_exact(3).enumerate() {
                    let node = CgpNode {
                        function: funcs[d[0]],
                        in1: g.digit_to_input(j, d[1]),
                        in2: g.digit_to_input(j, d[2]),
                    };
                    g.push_node(node);
                }
                Genotype::Cgp(g)
            }
            Layout::Lgp { calc_registers, .. } => {
                let prog = digits
                    .chunks_exact(4)
                    .map(|d| LgpInstruction::new(d[0] + 1, d[1] + 1, d[2] + 1, d[3] + 1))
                    .collect();
                Genotype::Lgp(LgpGenotype::from_parts_unchecked(n, calc_registers, prog))
            }
        })
    }

    pub fn loci_count(&self) -> usize {
        match self {
            Genotype::Cgp(g) => 3 * g.nodes().len(),
            Genotype::Lgp(g) => 4 * g.instructions().len(),
        }
    }

    pub fn locus(&self, index: usize) -> MutationLocus {
        match self {
            Genotype::Cgp(_) => MutationLocus {
                item: index / 3,
                field: CGP_FIELDS[index % 3],
            },
            Genotype::Lgp(_) => MutationLocus {
                item: index / 4,
                field: LGP_FIELDS[index % 4],
            },
        }
    }

    /// Number of legal values at locus `index`.
    pub fn radix(&self, index: usize, gs: &GateSet) -> usize {
        let MutationLocus { item, field } = self.locus(index);
        match (self, field) {
            (_, Field::Function) => gs.len(),
            (Genotype::Cgp(g), _) => g.input_radix(item),
            (Genotype::Lgp(g), Field::Out) => g.calc_registers(),
            (Genotype::Lgp(g), _) => g.registers(),
        }
    }

    pub fn digit(&self, index: usize, gs: &GateSet) -> usize {
        let MutationLocus { item, field } = self.locus(index);
        match self {
            Genotype::Cgp(g) => {
                let node = g.nodes()[item];
                match field {
                    Field::Function => gs
                        .position(node.function)
                        .expect("genotype function outside the gate set"),
                    Field::In1 => g.input_to_digit(item, node.in1),
                    _ => g.input_to_digit(item, node.in2),
                }
            }
            Genotype::Lgp(g) => {
                let ins = g.instructions()[item];
                match field {
                    Field::Function => ins.function - 1,
                    Field::Out => ins.out - 1,
                    Field::In1 => ins.in1 - 1,
                    Field::In2 => ins.in2 - 1,
                }
            }
        }
    }

    pub fn set_digit(&mut self, index: usize, digit: usize, gs: &GateSet) {
        let MutationLocus { item, field } = self.locus(index);
        match self {
            Genotype::Cgp(g) => {
                let input = g.digit_to_input(item, digit);
                let node = &mut g.nodes_mut()[item];
                match field {
                    Field::Function => node.function = gs.functions()[digit],
                    Field::In1 => node.in1 = input,
                    _ => node.in2 = input,
                }
            }
            Genotype::Lgp(g) => {
                let ins = &mut g.instructions_mut()[item];
                let v = digit + 1;
                match field {
                    Field::Function => ins.function = v,
                    Field::Out => ins.out = v,
                    Field::In1 => ins.in1 = v,
                    Field::In2 => ins.in2 = v,
                }
            }
        }
    }

    pub fn digits(&self, gs: &GateSet) -> Vec<usize> {
        (0..self.loci_count()).map(|l| self.digit(l, gs)).collect()
    }

    /// Loci with at least one alternative value.
    pub fn mutable_loci(&self, gs: &GateSet) -> Vec<MutationLocus> {
        (0..self.loci_count())
            .filter(|&l| self.radix(l, gs) > 1)
            .map(|l| self.locus(l))
            .collect()
    }

    pub fn has_mutable_locus(&self, gs: &GateSet) -> bool {
        (0..self.loci_count()).any(|l| self.radix(l, gs) > 1)
    }

    /// Size of the exact 1-mutant neighbourhood.
    pub fn neighbor_count(&self, gs: &GateSet) -> usize {
        (0..self.loci_count()).map(|l| self.radix(l, gs) - 1).sum()
    }

    /// Rewrites one uniformly chosen mutable locus to a uniformly chosen
    /// different value. Returns `(locus, previous digit)` for [`Genotype::undo`].
    pub fn mutate_in_place<R: Rng + ?Sized>(&mut self, gs: &GateSet, rng: &mut R) -> Result<(usize, usize)> {
        if !self.has_mutable_locus(gs) {
            return Err(Error::NoMutableLoci);
        }
        let loci = self.loci_count();
        loop {
            let l = rng.random_range(0..loci);
            let r = self.radix(l, gs);
            if r < 2 {
                continue;
            }
            let cur = self.digit(l, gs);
            let mut d = rng.random_range(0..r - 1);
            if d >= cur {
                d += 1;
            }
            self.set_digit(l, d, gs);
            return Ok((l, cur));
        }
    }

    pub fn undo(&mut self, change: (usize, usize), gs: &GateSet) {
        self.set_digit(change.0, change.1, gs);
    }

    /// Calls `f` on every single-locus variant, locus-major and value-minor.
    pub fn for_each_neighbor(&self, gs: &GateSet, mut f: impl FnMut(&Genotype)) {
        let mut g = self.clone();
        for l in 0..self.loci_count() {
            let cur = self.digit(l, gs);
            for d in 0..self.radix(l, gs) {
                if d == cur {
                    continue;
                }
                g.set_digit(l, d, gs);
                f(&g);
            }
            g.set_digit(l, cur, gs);
        }
    }
}

/// Reusable evaluation buffer for hot loops.
#[derive(Default, Clone)]
pub struct Evaluator {
    buf: Vec<u128>,
}

impl Evaluator {
    /// The genotype's functions must belong to `gs` (checked in debug builds).
    #[inline]
    pub fn phenotype(&mut self, g: &Genotype, gs: &GateSet) -> Phenotype {
        debug_assert!(g.check_gate_set(gs).is_ok());
        let bits = match g {
            Genotype::Cgp(c) => c.eval_into(&mut self.buf),
            Genotype::Lgp(l) => l.run(gs, &mut self.buf, |_| {}),
        };
        Phenotype::from_raw(g.n_inputs(), bits)
    }
}
