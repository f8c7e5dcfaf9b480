//! Gate-level combinational netlists: construction, simulation, gate census
//! and symbolic critical path.
//!
//! Wire ids number the primary inputs first, then one wire per gate output
//! in gate order, so a gate may only read wires below its own.

pub mod blocks;
pub mod cse;

use std::fmt::{self, Write as _};
use std::ops::Add;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use blocks::{build_block, BlockId, PublishedTarget, UnknownBlock};
pub use cse::cse_xor;

pub type Wire = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GateKind {
    Xor,
    Xnor,
    And,
    Or,
    Nand,
    Nor,
    Not,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::And,
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Not,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Not => "NOT",
        }
    }

    pub fn arity(self) -> usize {
        if self == GateKind::Not {
            1
        } else {
            2
        }
    }

    /// Bitwise evaluation on 64 lanes at once.
    #[inline]
    pub fn eval(self, a: u64, b: u64) -> u64 {
        match self {
            GateKind::Xor => a ^ b,
            GateKind::Xnor => !(a ^ b),
            GateKind::And => a & b,
            GateKind::Or => a | b,
            GateKind::Nand => !(a & b),
            GateKind::Nor => !(a | b),
            GateKind::Not => !a,
        }
    }

    /// Doubled abstract delay: T_X = 2, T_NA = T_NO = T_A = 1.5, T_N = 0.5.
    fn weight2(self) -> u32 {
        match self {
            GateKind::Xor | GateKind::Xnor => 4,
            GateKind::And | GateKind::Or | GateKind::Nand | GateKind::Nor => 3,
            GateKind::Not => 1,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    /// Second entry is ignored for NOT.
    pub inputs: [Wire; 2],
    pub output: Wire,
}

impl Gate {
    pub fn operands(&self) -> &[Wire] {
        &self.inputs[..self.kind.arity()]
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetlistError {
    #[error("expected {expected} input bits, got {got}")]
    Width { expected: usize, got: usize },
    #[error("gate {gate} reads wire {wire}, which is not driven before it")]
    Undriven { gate: usize, wire: Wire },
    #[error("gate {gate} has output wire {got}, expected {expected}")]
    OutputWire {
        gate: usize,
        got: Wire,
        expected: Wire,
    },
    #[error("output {name:?} refers to undriven wire {wire}")]
    UndrivenOutput { name: String, wire: Wire },
    #[error("{0} input and output names do not match their wires")]
    Names(&'static str),
    #[error("order is not a permutation of the gates")]
    NotPermutation,
    #[error("output {0} has no terms")]
    EmptyOutput(usize),
    #[error("output {output} refers to input {index}, but there are {inputs} inputs")]
    TermRange {
        output: usize,
        index: usize,
        inputs: usize,
    },
    #[error("exhaustive evaluation supports at most {max} inputs and 64 outputs")]
    TooWide { max: usize },
}

/// Gates in topological order over named primary inputs and outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Netlist {
    label: String,
    inputs: Vec<String>,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
    output_names: Vec<String>,
}

/// Most inputs [`Netlist::truth_table`] will enumerate.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 24;

impl Netlist {
    /// Assembles and validates a netlist from its parts.
    pub fn from_parts(
        label: impl Into<String>,
        inputs: Vec<String>,
        gates: Vec<Gate>,
        outputs: Vec<Wire>,
        output_names: Vec<String>,
    ) -> Result<Self, NetlistError> {
        let n = Self {
            label: label.into(),
            inputs,
            gates,
            outputs,
            output_names,
        };
        n.validate()?;
        Ok(n)
    }

    /// Checks acyclicity (every operand driven earlier), dense output wire
    /// numbering and that every primary output is driven.
    pub fn validate(&self) -> Result<(), NetlistError> {
        let base = self.inputs.len() as Wire;
        for (i, g) in self.gates.iter().enumerate() {
            let expected = base + i as Wire;
            if g.output != expected {
                return Err(NetlistError::OutputWire {
                    gate: i,
                    got: g.output,
                    expected,
                });
            }
            if let Some(&w) = g.operands().iter().find(|&&w| w >= expected) {
                return Err(NetlistError::Undriven { gate: i, wire: w });
            }
        }
        if self.outputs.len() != self.output_names.len() {
            return Err(NetlistError::Names("output"));
        }
        let wires = self.wire_count() as Wire;
        for (name, &w) in self.output_names.iter().zip(&self.outputs) {
            if w >= wires {
                return Err(NetlistError::UndrivenOutput {
                    name: name.clone(),
                    wire: w,
                });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn input_names(&self) -> &[String] {
        &self.inputs
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    fn wire_count(&self) -> usize {
        self.inputs.len() + self.gates.len()
    }

    fn wire_name(&self, w: Wire) -> String {
        match self.inputs.get(w as usize) {
            Some(name) => name.clone(),
            None => format!("g{}", w as usize - self.inputs.len()),
        }
    }

    /// Evaluates 64 independent input vectors: `lanes[i]` carries input i.
    pub fn eval_lanes(&self, lanes: &[u64]) -> Result<Vec<u64>, NetlistError> {
        if lanes.len() != self.inputs.len() {
            return Err(NetlistError::Width {
                expected: self.inputs.len(),
                got: lanes.len(),
            });
        }
        let mut w = Vec::with_capacity(self.wire_count());
        w.extend_from_slice(lanes);
        for g in &self.gates {
            let a = w[g.inputs[0] as usize];
            let b = if g.kind == GateKind::Not {
                0
            } else {
                w[g.inputs[1] as usize]
            };
            w.push(g.kind.eval(a, b));
        }
        Ok(self.outputs.iter().map(|&o| w[o as usize]).collect())
    }

    pub fn simulate(&self, bits: &[bool]) -> Result<Vec<bool>, NetlistError> {
        let lanes: Vec<u64> = bits.iter().map(|&b| b as u64).collect();
        Ok(self
            .eval_lanes(&lanes)?
            .into_iter()
            .map(|w| w & 1 == 1)
            .collect())
    }

    /// Single evaluation with input i at bit i and output j at bit j.
    pub fn eval_word(&self, x: u64) -> Result<u64, NetlistError> {
        if self.inputs.len() > 64 || self.outputs.len() > 64 {
            return Err(NetlistError::TooWide { max: 64 });
        }
        let lanes: Vec<u64> = (0..self.inputs.len()).map(|i| (x >> i) & 1).collect();
        let out = self.eval_lanes(&lanes)?;
        Ok(out
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &w)| acc | ((w & 1) << j)))
    }

    /// Output word for every input word, bit-sliced 64 inputs at a time.
    pub fn truth_table(&self) -> Result<Vec<u64>, NetlistError> {
        let n = self.inputs.len();
        if n > MAX_EXHAUSTIVE_INPUTS || self.outputs.len() > 64 {
            return Err(NetlistError::TooWide {
                max: MAX_EXHAUSTIVE_INPUTS,
            });
        }
        const PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let size = 1usize << n;
        let chunks = size.div_ceil(64);
        let per: Vec<Vec<u64>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let base = (c * 64) as u64;
                let lanes: Vec<u64> = (0..n)
                    .map(|i| {
                        if i < 6 {
                            PATTERNS[i]
                        } else if (base >> i) & 1 == 1 {
                            !0
                        } else {
                            0
                        }
                    })
                    .collect();
                let outs = self.eval_lanes(&lanes).expect("lane count matches");
                let mut words = vec![0u64; 64.min(size)];
                for (j, w) in outs.iter().enumerate() {
                    for (t, word) in words.iter_mut().enumerate() {
                        *word |= ((w >> t) & 1) << j;
                    }
                }
                words
            })
            .collect();
        Ok(per.concat())
    }

    pub fn census(&self) -> Census {
        let mut c = Census::default();
        for g in &self.gates {
            match g.kind {
                GateKind::Xor => c.xor += 1,
                GateKind::Xnor => c.xnor += 1,
                GateKind::And => c.and += 1,
                GateKind::Or => c.or += 1,
                GateKind::Nand => c.nand += 1,
                GateKind::Nor => c.nor += 1,
                GateKind::Not => c.not += 1,
            }
        }
        c
    }

    /// Worst input-to-output path under the doubled weighting of
    /// [`GateKind`]; among equally heavy paths the lexicographically larger
    /// delay vector wins, so the answer never depends on gate order.
    pub fn critical_path(&self) -> DelayVector {
        let mut arr: Vec<(u32, DelayVector)> = vec![(0, DelayVector::ZERO); self.inputs.len()];
        arr.reserve(self.gates.len());
        for g in &self.gates {
            let worst = g
                .operands()
                .iter()
                .map(|&w| arr[w as usize])
                .max_by(|x, y| (x.0, x.1.key()).cmp(&(y.0, y.1.key())))
                .expect("gates have operands");
            arr.push((
                worst.0 + g.kind.weight2(),
                worst.1 + DelayVector::of(g.kind),
            ));
        }
        self.outputs
            .iter()
            .map(|&o| arr[o as usize])
            .max_by(|x, y| (x.0, x.1.key()).cmp(&(y.0, y.1.key())))
            .map_or(DelayVector::ZERO, |a| a.1)
    }

    /// Longest path counted in gates.
    pub fn depth(&self) -> u32 {
        let mut d = vec![0u32; self.inputs.len()];
        for g in &self.gates {
            d.push(
                1 + g
                    .operands()
                    .iter()
                    .map(|&w| d[w as usize])
                    .max()
                    .unwrap_or(0),
            );
        }
        self.outputs
            .iter()
            .map(|&o| d[o as usize])
            .max()
            .unwrap_or(0)
    }

    /// Same circuit with gates listed in `order` (old gate indices); fails
    /// unless `order` is a topological permutation.
    pub fn reordered(&self, order: &[usize]) -> Result<Self, NetlistError> {
        let k = self.gates.len();
        let mut seen = vec![false; k];
        if order.len() != k
            || order
                .iter()
                .any(|&i| i >= k || std::mem::replace(&mut seen[i], true))
        {
            return Err(NetlistError::NotPermutation);
        }
        let base = self.inputs.len() as Wire;
        let mut remap: Vec<Wire> = (0..self.wire_count() as Wire).collect();
        for (new, &old) in order.iter().enumerate() {
            remap[base as usize + old] = base + new as Wire;
        }
        let map = |w: Wire| remap[w as usize];
        let gates = order
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                let g = self.gates[old];
                Gate {
                    kind: g.kind,
                    inputs: [map(g.inputs[0]), map(g.inputs[1])],
                    output: base + new as Wire,
                }
            })
            .map(|mut g| {
                if g.kind == GateKind::Not {
                    g.inputs[1] = g.inputs[0];
                }
                g
            })
            .collect();
        let outputs = self.outputs.iter().map(|&w| map(w)).collect();
        Self::from_parts(
            self.label.clone(),
            self.inputs.clone(),
            gates,
            outputs,
            self.output_names.clone(),
        )
    }

    /// Plain-text structural dump, one gate per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.label);
        let _ = writeln!(s, "inputs: {}", self.inputs.join(" "));
        let _ = writeln!(s, "outputs: {}", self.output_names.join(" "));
        for (i, g) in self.gates.iter().enumerate() {
            let args: Vec<String> = g.operands().iter().map(|&w| self.wire_name(w)).collect();
            let _ = writeln!(s, "g{i} = {}({})", g.kind, args.join(", "));
        }
        for (name, &w) in self.output_names.iter().zip(&self.outputs) {
            let _ = writeln!(s, "{name} = {}", self.wire_name(w));
        }
        s
    }
}

/// Gates per kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub xor: u32,
    pub xnor: u32,
    pub and: u32,
    pub or: u32,
    pub nand: u32,
    pub nor: u32,
    pub not: u32,
}

impl Census {
    /// XOR and XNOR together, as gate tables usually report them.
    pub fn xor_pooled(&self) -> u32 {
        self.xor + self.xnor
    }

    pub fn nand_nor(&self) -> u32 {
        self.nand + self.nor
    }

    pub fn and_or(&self) -> u32 {
        self.and + self.or
    }

    pub fn total(&self) -> u32 {
        self.xor_pooled() + self.nand_nor() + self.and_or() + self.not
    }
}

impl Add for Census {
    type Output = Census;
    fn add(self, o: Census) -> Census {
        Census {
            xor: self.xor + o.xor,
            xnor: self.xnor + o.xnor,
            and: self.and + o.and,
            or: self.or + o.or,
            nand: self.nand + o.nand,
            nor: self.nor + o.nor,
            not: self.not + o.not,
        }
    }
}

/// Gate delays along one path, per symbol. OR shares the AND symbol.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct DelayVector {
    pub x: u32,
    pub na: u32,
    pub no: u32,
    pub a: u32,
    pub n: u32,
}

impl DelayVector {
    pub const ZERO: Self = Self {
        x: 0,
        na: 0,
        no: 0,
        a: 0,
        n: 0,
    };

    pub const fn new(x: u32, na: u32, no: u32, a: u32, n: u32) -> Self {
        Self { x, na, no, a, n }
    }

    pub fn of(kind: GateKind) -> Self {
        match kind {
            GateKind::Xor | GateKind::Xnor => Self::new(1, 0, 0, 0, 0),
            GateKind::Nand => Self::new(0, 1, 0, 0, 0),
            GateKind::Nor => Self::new(0, 0, 1, 0, 0),
            GateKind::And | GateKind::Or => Self::new(0, 0, 0, 1, 0),
            GateKind::Not => Self::new(0, 0, 0, 0, 1),
        }
    }

    fn key(self) -> (u32, u32, u32, u32, u32) {
        (self.x, self.na, self.no, self.a, self.n)
    }

    /// Doubled abstract delay.
    pub fn weight2(self) -> u32 {
        4 * self.x + 3 * (self.na + self.no + self.a) + self.n
    }
}

impl Add for DelayVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.x + o.x,
            self.na + o.na,
            self.no + o.no,
            self.a + o.a,
            self.n + o.n,
        )
    }
}

impl fmt::Display for DelayVector {
    /// `3T_X+T_NA`; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [
            (self.x, "T_X"),
            (self.na, "T_NA"),
            (self.no, "T_NO"),
            (self.a, "T_A"),
            (self.n, "T_N"),
        ]
        .iter()
        .filter(|(c, _)| *c > 0)
        .map(|&(c, sym)| {
            if c == 1 {
                sym.to_string()
            } else {
                format!("{c}{sym}")
            }
        })
        .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Incremental construction; gates are appended in topological order by
/// construction.
#[derive(Debug)]
pub struct Builder {
    label: String,
    inputs: Vec<String>,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
    output_names: Vec<String>,
}

impl Builder {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            inputs: Vec::new(),
            gates: Vec::new(),
            outputs: Vec::new(),
            output_names: Vec::new(),
        }
    }

    /// Declares a primary input. All inputs must precede the first gate.
    pub fn input(&mut self, name: impl Into<String>) -> Wire {
        assert!(
            self.gates.is_empty(),
            "inputs must be declared before gates"
        );
        self.inputs.push(name.into());
        (self.inputs.len() - 1) as Wire
    }

    /// Declares `prefix0 .. prefix{n-1}`.
    pub fn inputs(&mut self, prefix: &str, n: usize) -> Vec<Wire> {
        (0..n).map(|i| self.input(format!("{prefix}{i}"))).collect()
    }

    pub fn gate(&mut self, kind: GateKind, a: Wire, b: Wire) -> Wire {
        let output = (self.inputs.len() + self.gates.len()) as Wire;
        debug_assert!(a < output && b < output);
        self.gates.push(Gate {
            kind,
            inputs: [a, b],
            output,
        });
        output
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(GateKind::Xor, a, b)
    }

    pub fn xnor(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(GateKind::Xnor, a, b)
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(GateKind::And, a, b)
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(GateKind::Or, a, b)
    }

    pub fn nand(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(GateKind::Nand, a, b)
    }

    pub fn nor(&mut self, a: Wire, b: Wire) -> Wire {
        self.gate(GateKind::Nor, a, b)
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        self.gate(GateKind::Not, a, a)
    }

    /// Element-wise XOR of two buses.
    pub fn xor_bus(&mut self, a: &[Wire], b: &[Wire]) -> Vec<Wire> {
        a.iter().zip(b).map(|(&x, &y)| self.xor(x, y)).collect()
    }

    pub fn output(&mut self, name: impl Into<String>, w: Wire) {
        self.output_names.push(name.into());
        self.outputs.push(w);
    }

    /// Declares `prefix0 ..` for each wire of `bus`.
    pub fn outputs(&mut self, prefix: &str, bus: &[Wire]) {
        for (i, &w) in bus.iter().enumerate() {
            self.output(format!("{prefix}{i}"), w);
        }
    }

    pub fn finish(self) -> Netlist {
        Netlist::from_parts(
            self.label,
            self.inputs,
            self.gates,
            self.outputs,
            self.output_names,
        )
        .expect("builder output is valid by construction")
    }
}
