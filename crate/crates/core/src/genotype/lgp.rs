use crate::error::{Error, Result};
use crate::gate::GateSet;
use crate::matrix::GateStateMatrix;
use crate::phenotype::{check_inputs, width_mask, Phenotype};

use super::context_row;

/// `(function, out, in1, in2)`, all 1-based. `function` indexes the active
/// gate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LgpInstruction {
    pub function: usize,
    pub out: usize,
    pub in1: usize,
    pub in2: usize,
}

impl LgpInstruction {
    pub fn new(function: usize, out: usize, in1: usize, in2: usize) -> Self {
        LgpInstruction {
            function,
            out,
            in1,
            in2,
        }
    }
}

/// A register-machine program. Registers `1..=calc_registers` are writable
/// and start at zero; the next `n` registers hold the input contexts and are
/// read-only. The result is register 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LgpGenotype {
    n_inputs: usize,
    calc_registers: usize,
    instructions: Vec<LgpInstruction>,
}

impl LgpGenotype {
    pub fn new(n_inputs: usize, calc_registers: usize, instructions: Vec<LgpInstruction>) -> Result<Self> {
        check_inputs(n_inputs)?;
        if calc_registers == 0 {
            return Err(Error::invalid("at least one computational register is required"));
        }
        let registers = calc_registers + n_inputs;
        for (j, ins) in instructions.iter().enumerate() {
            if ins.function == 0 {
                return Err(Error::invalid(format!("instruction {}: function index 0", j + 1)));
            }
            if !(1..=calc_registers).contains(&ins.out) {
                return Err(Error::invalid(format!(
                    "instruction {}: output register {} is not in 1..={calc_registers}",
                    j + 1,
                    ins.out
                )));
            }
            for r in [ins.in1, ins.in2] {
                if !(1..=registers).contains(&r) {
                    return Err(Error::invalid(format!(
                        "instruction {}: register {r} is not in 1..={registers}",
                        j + 1
                    )));
                }
            }
        }
        Ok(LgpGenotype {
            n_inputs,
            calc_registers,
            instructions,
        })
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn calc_registers(&self) -> usize {
        self.calc_registers
    }

    pub fn registers(&self) -> usize {
        self.calc_registers + self.n_inputs
    }

    pub fn instructions(&self) -> &[LgpInstruction] {
        &self.instructions
    }

    pub(crate) fn instructions_mut(&mut self) -> &mut [LgpInstruction] {
        &mut self.instructions
    }

    pub(crate) fn from_parts_unchecked(
        n_inputs: usize,
        calc_registers: usize,
        instructions: Vec<LgpInstruction>,
    ) -> Self {
        LgpGenotype {
            n_inputs,
            calc_registers,
            instructions,
        }
    }

    pub fn check_gate_set(&self, gs: &GateSet) -> Result<()> {
        match self.instructions.iter().find(|i| i.function > gs.len()) {
            Some(i) => Err(Error::GateNotInSet(format!(
                "index {} (gate set has {})",
                i.function,
                gs.len()
            ))),
            None => Ok(()),
        }
    }

    pub fn evaluate(&self, gs: &GateSet) -> Result<(Phenotype, GateStateMatrix)> {
        self.check_gate_set(gs)?;
        let mut regs = Vec::new();
        let mut rows = Vec::with_capacity(self.instructions.len());
        let out = self.run(gs, &mut regs, |v| rows.push(v));
        Ok((
            Phenotype::from_raw(self.n_inputs, out),
            GateStateMatrix::new(self.n_inputs, rows),
        ))
    }

    /// Instructions whose result can reach output register 1.
    pub fn effective_instructions(&self) -> Vec<bool> {
        let mut needed = vec![false; self.registers()];
        needed[0] = true;
        let mut effective = vec![false; self.instructions.len()];
        for (i, ins) in self.instructions.iter().enumerate().rev() {
            if !needed[ins.out - 1] {
                continue;
            }
            effective[i] = true;
            needed[ins.out - 1] = false;
            needed[ins.in1 - 1] = true;
            needed[ins.in2 - 1] = true;
        }
        effective
    }

    #[inline]
    pub(crate) fn run(&self, gs: &GateSet, regs: &mut Vec<u128>, mut on_write: impl FnMut(u128)) -> u128 {
        let n = self.n_inputs;
        let mask = width_mask(n);
        let funcs = gs.functions();
        regs.clear();
        regs.resize(self.calc_registers, 0);
        regs.extend((1..=n).map(|i| context_row(n, i)));
        for ins in &self.instructions {
            let v = funcs[ins.function - 1].apply(regs[ins.in1 - 1], regs[ins.in2 - 1], mask);
            regs[ins.out - 1] = v;
            on_write(v);
        }
        regs[0]
    }
}
