use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::GateSet;
use crate::phenotype::check_inputs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Cgp,
    Lgp,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Representation::Cgp => "cgp",
            Representation::Lgp => "lgp",
        })
    }
}

/// Shape of the genotype: a single row of CGP gates, or a linear program of
/// LGP instructions over a small register file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "lowercase")]
pub enum Layout {
    Cgp { gates: usize, levels_back: usize },
    Lgp { instructions: usize, calc_registers: usize },
}

/// Everything needed to define a genotype space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChromosomeParams {
    pub n_inputs: usize,
    pub layout: Layout,
    pub gate_set: GateSet,
}

pub const DEFAULT_CALC_REGISTERS: usize = 2;

/// CGP, 4 inputs, 11 gates, 8 levels back, all five gates.
pub const PAPER_CGP_4IN: ChromosomeParams = ChromosomeParams {
    n_inputs: 4,
    layout: Layout::Cgp {
        gates: 11,
        levels_back: 8,
    },
    gate_set: GateSet::FULL,
};

/// LGP, 4 inputs, 10 instructions, 2 computational registers.
pub const PAPER_LGP_4IN: ChromosomeParams = ChromosomeParams {
    n_inputs: 4,
    layout: Layout::Lgp {
        instructions: 10,
        calc_registers: 2,
    },
    gate_set: GateSet::FULL,
};

impl ChromosomeParams {
    /// `levels_back` beyond the gate count means "any previous node" and is
    /// clamped.
    pub fn cgp(n_inputs: usize, gates: usize, levels_back: usize, gate_set: GateSet) -> Result<Self> {
        let p = ChromosomeParams {
            n_inputs,
            layout: Layout::Cgp {
                gates,
                levels_back: levels_back.min(gates.max(1)),
            },
            gate_set,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn lgp(
        n_inputs: usize,
        instructions: usize,
        calc_registers: usize,
        gate_set: GateSet,
    ) -> Result<Self> {
        let p = ChromosomeParams {
            n_inputs,
            layout: Layout::Lgp {
                instructions,
                calc_registers,
            },
            gate_set,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_inputs(self.n_inputs)?;
        match self.layout {
            Layout::Cgp { gates, levels_back } => {
                if gates == 0 {
                    return Err(Error::Config("CGP needs at least one gate".into()));
                }
                if levels_back == 0 {
                    return Err(Error::Config("levels_back must be at least 1".into()));
                }
                if gates + self.n_inputs > u16::MAX as usize {
                    return Err(Error::Config("too many CGP nodes".into()));
                }
            }
            Layout::Lgp { calc_registers, .. } => {
                if calc_registers == 0 {
                    return Err(Error::Config("LGP needs at least one calc register".into()));
                }
                if calc_registers + self.n_inputs > u8::MAX as usize {
                    return Err(Error::Config("too many LGP registers".into()));
                }
            }
        }
        Ok(())
    }

    pub fn representation(&self) -> Representation {
        match self.layout {
            Layout::Cgp { .. } => Representation::Cgp,
            Layout::Lgp { .. } => Representation::Lgp,
        }
    }

    /// Gate or instruction count.
    pub fn size(&self) -> usize {
        match self.layout {
            Layout::Cgp { gates, .. } => gates,
            Layout::Lgp { instructions, .. } => instructions,
        }
    }

    /// Same representation with a different gate/instruction count. For CGP
    /// the levels-back policy is `unrestricted` (levels_back = size) or the
    /// current value clamped.
    pub fn with_size(&self, size: usize, unrestricted: bool) -> Result<Self> {
        match self.layout {
            Layout::Cgp { levels_back, .. } => {
                let lb = if unrestricted { size } else { levels_back };
                ChromosomeParams::cgp(self.n_inputs, size, lb, self.gate_set)
            }
            Layout::Lgp { calc_registers, .. } => {
                ChromosomeParams::lgp(self.n_inputs, size, calc_registers, self.gate_set)
            }
        }
    }

    /// Legal-value count of every locus, in locus order.
    pub fn radices(&self) -> Vec<usize> {
        let gs = self.gate_set.len();
        let n = self.n_inputs;
        match self.layout {
            Layout::Cgp { gates, levels_back } => (0..gates)
                .flat_map(|j| {
                    let r = cgp_input_radix(n, j, levels_back);
                    [gs, r, r]
                })
                .collect(),
            Layout::Lgp {
                instructions,
                calc_registers,
            } => (0..instructions)
                .flat_map(|_| {
                    let r = calc_registers + n;
                    [gs, calc_registers, r, r]
                })
                .collect(),
        }
    }

    /// Closed-form genotype count, `None` on overflow.
    pub fn space_size(&self) -> Option<u128> {
        self.radices()
            .into_iter()
            .try_fold(1u128, |acc, r| acc.checked_mul(r as u128))
    }
}

/// Legal input choices for CGP gate `j` (0-based): all program inputs plus
/// the previous `min(levels_back, j)` gates.
#[inline]
pub(crate) fn cgp_input_radix(n_inputs: usize, j: usize, levels_back: usize) -> usize {
    n_inputs + levels_back.min(j)
}
