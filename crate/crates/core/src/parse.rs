//! Circuit text forms.
//!
//! CGP: `circuit((1,2,3), ((4,OR,1,2), (5,AND,2,3), (6,XOR,4,5)))`. The
//! leading `circuit` keyword is optional. Each gate is `(node, FUNCTION, in1,
//! in2)` and node numbers must continue the input numbering.
//!
//! LGP: `[(2, 1, 3, 4), (1, 2, 4, 5), (5, 1, 1, 2)]`, each instruction
//! `(function index, out register, in1, in2)`. The text does not carry the
//! input or register counts, so the caller supplies them.
//!
//! Whitespace is ignored everywhere.

use std::fmt;

use crate::error::{Error, Result};
use crate::gate::GateFunction;
use crate::genotype::{CgpGenotype, CgpNode, Genotype, LgpGenotype, LgpInstruction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TextFormat {
    /// `levels_back: None` means unrestricted.
    Cgp { levels_back: Option<usize> },
    Lgp { n_inputs: usize, calc_registers: usize },
}

impl TextFormat {
    pub const CGP: TextFormat = TextFormat::Cgp { levels_back: None };
}

pub fn parse_circuit(text: &str, format: TextFormat) -> Result<Genotype> {
    let mut p = Parser { src: text, pos: 0 };
    let g = match format {
        TextFormat::Cgp { levels_back } => p.cgp(levels_back)?.into(),
        TextFormat::Lgp {
            n_inputs,
            calc_registers,
        } => p.lgp(n_inputs, calc_registers)?.into(),
    };
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(g)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected `{c}`, found `{got}`"))),
            None => Err(self.error(format!("expected `{c}`, found end of input"))),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn number(&mut self) -> Result<usize> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let w = self.word();
        if w.is_empty() || !w.bytes().all(|b| b.is_ascii_digit()) {
            self.pos = start;
            return Err(self.error(format!("expected a number, found `{w}`")));
        }
        w.parse().map_err(|_| {
            self.pos = start;
            self.error("number too large")
        })
    }

    fn cgp(&mut self, levels_back: Option<usize>) -> Result<CgpGenotype> {
        self.skip_ws();
        let save = self.pos;
        if self.word() != "circuit" {
            self.pos = save;
        }
        self.expect('(')?;
        self.expect('(')?;
        let mut n_inputs = 0;
        loop {
            let start = self.pos;
            let k = self.number()?;
            if k != n_inputs + 1 {
                self.pos = start;
                return Err(self.error(format!("input {k} out of sequence, expected {}", n_inputs + 1)));
            }
            n_inputs = k;
            if !self.eat(',') {
                break;
            }
        }
        self.expect(')')?;
        self.expect(',')?;
        self.expect('(')?;
        let mut nodes = Vec::new();
        loop {
            self.expect('(')?;
            let start = self.pos;
            let id = self.number()?;
            let want = n_inputs + nodes.len() + 1;
            if id != want {
                self.pos = start;
                return Err(self.error(format!("gate number {id} out of sequence, expected {want}")));
            }
            self.expect(',')?;
            self.skip_ws();
            let name = self.word();
            let function: GateFunction = name.parse()?;
            self.expect(',')?;
            let in1 = self.number()?;
            self.expect(',')?;
            let in2 = self.number()?;
            self.expect(')')?;
            nodes.push(CgpNode::new(function, in1, in2));
            if !self.eat(',') {
                break;
            }
        }
        self.expect(')')?;
        self.expect(')')?;
        let lb = levels_back.unwrap_or(nodes.len());
        CgpGenotype::new(n_inputs, lb, nodes)
    }

    fn lgp(&mut self, n_inputs: usize, calc_registers: usize) -> Result<LgpGenotype> {
        self.expect('[')?;
        let mut prog = Vec::new();
        if !self.eat(']') {
            loop {
                self.expect('(')?;
                let mut f = [0usize; 4];
                for (i, v) in f.iter_mut().enumerate() {
                    if i > 0 {
                        self.expect(',')?;
                    }
                    *v = self.number()?;
                }
                self.expect(')')?;
                prog.push(LgpInstruction::new(f[0], f[1], f[2], f[3]));
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
        }
        LgpGenotype::new(n_inputs, calc_registers, prog)
    }
}

impl fmt::Display for CgpGenotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_inputs();
        let inputs: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let gates: Vec<String> = self
            .nodes()
            .iter()
            .enumerate()
            .map(|(j, g)| format!("({},{},{},{})", n + j + 1, g.function, g.in1, g.in2))
            .collect();
        write!(f, "circuit(({}), ({}))", inputs.join(","), gates.join(", "))
    }
}

impl fmt::Display for LgpGenotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self
            .instructions()
            .iter()
            .map(|i| format!("({}, {}, {}, {})", i.function, i.out, i.in1, i.in2))
            .collect();
        write!(f, "[{}]", ins.join(", "))
    }
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genotype::Cgp(g) => g.fmt(f),
            Genotype::Lgp(g) => g.fmt(f),
        }
    }
}
