use std::fmt;

/// Gate output rows of an evaluated circuit: row `j` is the `2^n`-bit state
/// of gate `j` (CGP) or of instruction `j`'s destination register right after
/// it executed (LGP). Inactive CGP gates are included.
#[derive(Clone, PartialEq, Eq)]
pub struct GateStateMatrix {
    n_inputs: usize,
    rows: Vec<u128>,
}

impl GateStateMatrix {
    pub fn new(n_inputs: usize, rows: Vec<u128>) -> Self {
        GateStateMatrix { n_inputs, rows }
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    /// Gate count `M`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn columns(&self) -> usize {
        1 << self.n_inputs
    }

    /// Matrix restricted to the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> GateStateMatrix {
        GateStateMatrix {
            n_inputs: self.n_inputs,
            rows: rows.iter().map(|&r| self.rows[r]).collect(),
        }
    }

    /// Column `c` as a row-bitmask (row `r` -> bit `r`). Needs `M <= 64`.
    pub fn column_states(&self) -> Vec<u64> {
        assert!(self.rows.len() <= 64, "column states need at most 64 rows");
        (0..self.columns())
            .map(|c| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (r, &row)| acc | ((((row >> c) & 1) as u64) << r))
            })
            .collect()
    }
}

impl fmt::Debug for GateStateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = crate::phenotype::Phenotype::hex_digits(self.n_inputs);
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("0x{r:0width$x}"))
            .collect();
        f.debug_struct("GateStateMatrix")
            .field("n_inputs", &self.n_inputs)
            .field("rows", &rows)
            .finish()
    }
}
