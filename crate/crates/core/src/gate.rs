use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-input gate functions.
///
/// The declaration order is also the LGP function index order (AND = 1 ...
/// XOR = 5), which is what makes the LGP program `[(2,1,3,4), (1,2,4,5),
/// (5,1,1,2)]` compute the same function as the CGP circuit
/// `circuit((1,2,3), ((4,OR,1,2), (5,AND,2,3), (6,XOR,4,5)))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateFunction {
    And,
    Or,
    Nand,
    Nor,
    Xor,
}

impl GateFunction {
    pub const ALL: [GateFunction; 5] = [
        GateFunction::And,
        GateFunction::Or,
        GateFunction::Nand,
        GateFunction::Nor,
        GateFunction::Xor,
    ];

    /// 1-based index used by the LGP text form under the full gate set.
    pub fn lgp_index(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            GateFunction::And => "AND",
            GateFunction::Or => "OR",
            GateFunction::Nand => "NAND",
            GateFunction::Nor => "NOR",
            GateFunction::Xor => "XOR",
        }
    }

    /// Applies the gate to every column at once. `mask` has the low `2^n`
    /// bits set and keeps the inverting gates inside the phenotype width.
    #[inline(always)]
    pub fn apply(self, a: u128, b: u128, mask: u128) -> u128 {
        match self {
            GateFunction::And => a & b,
            GateFunction::Or => a | b,
            GateFunction::Nand => !(a & b) & mask,
            GateFunction::Nor => !(a | b) & mask,
            GateFunction::Xor => a ^ b,
        }
    }

    pub fn eval(self, x: bool, y: bool) -> bool {
        self.apply(x as u128, y as u128, 1) == 1
    }
}

impl fmt::Display for GateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(GateFunction::And),
            "OR" => Ok(GateFunction::Or),
            "NAND" => Ok(GateFunction::Nand),
            "NOR" => Ok(GateFunction::Nor),
            "XOR" => Ok(GateFunction::Xor),
            _ => Err(Error::UnknownGate(s.to_string())),
        }
    }
}

/// An ordered, duplicate-free, non-empty set of gate functions.
///
/// Position in the set is the LGP function index (1-based) and the digit
/// used when enumerating CGP function loci.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GateSet {
    funcs: [GateFunction; 5],
    len: u8,
}

impl GateSet {
    pub const FULL: GateSet = GateSet {
        funcs: GateFunction::ALL,
        len: 5,
    };

    pub const NO_XOR: GateSet = GateSet {
        funcs: GateFunction::ALL,
        len: 4,
    };

    pub fn new(functions: &[GateFunction]) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::Config("gate set must not be empty".into()));
        }
        let mut funcs = GateFunction::ALL;
        for (i, &f) in functions.iter().enumerate() {
            if functions[..i].contains(&f) {
                return Err(Error::Config(format!("duplicate gate {f} in gate set")));
            }
            funcs[i] = f;
        }
        Ok(GateSet {
            funcs,
            len: functions.len() as u8,
        })
    }

    pub fn functions(&self) -> &[GateFunction] {
        &self.funcs[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// 0-based position of `f`, if present.
    pub fn position(&self, f: GateFunction) -> Option<usize> {
        self.functions().iter().position(|&g| g == f)
    }

    pub fn contains(&self, f: GateFunction) -> bool {
        self.position(f).is_some()
    }

    /// Function for a 1-based LGP index.
    pub fn by_index(&self, index: usize) -> Option<GateFunction> {
        index
            .checked_sub(1)
            .and_then(|i| self.functions().get(i).copied())
    }
}

impl fmt::Debug for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.functions()).finish()
    }
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == GateSet::FULL {
            return f.write_str("full");
        }
        if *self == GateSet::NO_XOR {
            return f.write_str("no-xor");
        }
        let names: Vec<_> = self.functions().iter().map(|g| g.name()).collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for GateSet {
    type Err = Error;

    /// Accepts `full`, `no-xor`, or a comma separated list of gate names.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(GateSet::FULL),
            "no-xor" | "no_xor" | "noxor" => Ok(GateSet::NO_XOR),
            list => {
                let funcs = list
                    .split(',')
                    .map(|t| t.trim().parse())
                    .collect::<Result<Vec<GateFunction>>>()?;
                GateSet::new(&funcs)
            }
        }
    }
}

impl Serialize for GateSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GateSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
