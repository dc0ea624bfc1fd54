use crate::error::{Error, Result};
use crate::gate::{GateFunction, GateSet};
use crate::matrix::GateStateMatrix;
use crate::params::cgp_input_radix;
use crate::phenotype::{check_inputs, width_mask, Phenotype};

use super::context_row;

/// One CGP gate. Inputs are 1-based node indices: `1..=n` are the program
/// inputs, `n + j` is gate `j` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CgpNode {
    pub function: GateFunction,
    pub in1: usize,
    pub in2: usize,
}

impl CgpNode {
    pub fn new(function: GateFunction, in1: usize, in2: usize) -> Self {
        CgpNode { function, in1, in2 }
    }
}

/// A single row of feed-forward gates; the last gate is the output.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CgpGenotype {
    n_inputs: usize,
    levels_back: usize,
    nodes: Vec<CgpNode>,
}

impl CgpGenotype {
    /// Validates feed-forward and levels-back constraints. `levels_back` is
    /// clamped to the gate count.
    pub fn new(n_inputs: usize, levels_back: usize, nodes: Vec<CgpNode>) -> Result<Self> {
        check_inputs(n_inputs)?;
        if nodes.is_empty() {
            return Err(Error::invalid("a CGP circuit needs at least one gate"));
        }
        if levels_back == 0 {
            return Err(Error::invalid("levels_back must be at least 1"));
        }
        let g = CgpGenotype {
            n_inputs,
            levels_back: levels_back.min(nodes.len()),
            nodes,
        };
        for (j, node) in g.nodes.iter().enumerate() {
            for input in [node.in1, node.in2] {
                if !g.is_legal_input(j, input) {
                    let (lo, hi) = g.gate_window(j);
                    return Err(Error::invalid(format!(
                        "gate {} reads node {input}; legal: 1..={} or {lo}..={hi}",
                        n_inputs + j + 1,
                        n_inputs,
                    )));
                }
            }
        }
        Ok(g)
    }

    /// Unrestricted levels-back (any previous node).
    pub fn unrestricted(n_inputs: usize, nodes: Vec<CgpNode>) -> Result<Self> {
        let lb = nodes.len().max(1);
        CgpGenotype::new(n_inputs, lb, nodes)
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn levels_back(&self) -> usize {
        self.levels_back
    }

    pub fn nodes(&self) -> &[CgpNode] {
        &self.nodes
    }

    /// 1-based node indices of the gates gate `j` (0-based) may read, beyond
    /// the program inputs. Empty when `lo > hi`.
    fn gate_window(&self, j: usize) -> (usize, usize) {
        let back = self.levels_back.min(j);
        (self.n_inputs + j - back + 1, self.n_inputs + j)
    }

    fn is_legal_input(&self, j: usize, input: usize) -> bool {
        let (lo, hi) = self.gate_window(j);
        (1..=self.n_inputs).contains(&input) || (lo..=hi).contains(&input)
    }

    pub(crate) fn input_radix(&self, j: usize) -> usize {
        cgp_input_radix(self.n_inputs, j, self.levels_back)
    }

    pub(crate) fn input_to_digit(&self, j: usize, input: usize) -> usize {
        if input <= self.n_inputs {
            input - 1
        } else {
            input - self.gate_window(j).0 + self.n_inputs
        }
    }

    pub(crate) fn digit_to_input(&self, j: usize, digit: usize) -> usize {
        if digit < self.n_inputs {
            digit + 1
        } else {
            self.gate_window(j).0 + digit - self.n_inputs
        }
    }

    pub(crate) fn push_node(&mut self, node: CgpNode) {
        self.nodes.push(node);
    }

    pub(crate) fn nodes_mut(&mut self) -> &mut [CgpNode] {
        &mut self.nodes
    }

    pub(crate) fn from_parts_unchecked(n_inputs: usize, levels_back: usize, nodes: Vec<CgpNode>) -> Self {
        CgpGenotype {
            n_inputs,
            levels_back,
            nodes,
        }
    }

    pub fn check_gate_set(&self, gs: &GateSet) -> Result<()> {
        match self.nodes.iter().find(|n| !gs.contains(n.function)) {
            Some(n) => Err(Error::GateNotInSet(n.function.to_string())),
            None => Ok(()),
        }
    }

    /// Evaluates every gate once, in index order.
    pub fn evaluate(&self, gs: &GateSet) -> Result<(Phenotype, GateStateMatrix)> {
        self.check_gate_set(gs)?;
        let mut buf = Vec::with_capacity(self.n_inputs + self.nodes.len());
        let out = self.eval_into(&mut buf);
        let rows = buf[self.n_inputs..].to_vec();
        Ok((
            Phenotype::from_raw(self.n_inputs, out),
            GateStateMatrix::new(self.n_inputs, rows),
        ))
    }

    /// Fills `buf` with input then gate states and returns the output state.
    #[inline]
    pub(crate) fn eval_into(&self, buf: &mut Vec<u128>) -> u128 {
        let n = self.n_inputs;
        let mask = width_mask(n);
        buf.clear();
        buf.extend((1..=n).map(|i| context_row(n, i)));
        for node in &self.nodes {
            let v = node.function.apply(buf[node.in1 - 1], buf[node.in2 - 1], mask);
            buf.push(v);
        }
        *buf.last().expect("at least one gate")
    }

    /// Gates on a path to the output gate.
    pub fn active_gates(&self) -> Vec<bool> {
        let m = self.nodes.len();
        let mut active = vec![false; m];
        active[m - 1] = true;
        for j in (0..m).rev() {
            if !active[j] {
                continue;
            }
            let node = self.nodes[j];
            for input in [node.in1, node.in2] {
                if input > self.n_inputs {
                    active[input - self.n_inputs - 1] = true;
                }
            }
        }
        active
    }
}
