//! Hidden-weighted-bit circuits and their equivalence miters.
//!
//! `HWB_n(x_1..x_n) = x_s` where `s` is the number of true inputs and
//! `x_0 = 0`. Two structurally different circuits compute it: one sorts the
//! inputs with a Batcher odd-even merge network and reads off the position
//! where the sorted vector steps from 1 to 0; the other counts the inputs with
//! a full-adder tree and selects `x_s` with a multiplexer tree. Their miter is
//! unsatisfiable.

use crate::cnf::{Clause, CnfFormula, Lit, Var};

/// Reference semantics on a bit vector (`bits[0]` is `x_1`).
pub fn hwb_reference(bits: &[bool]) -> bool {
    let sum = bits.iter().filter(|&&b| b).count();
    sum > 0 && bits[sum - 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    And,
    Or,
    Xor,
    Not,
    /// `Mux(s, a, b) = if s { a } else { b }`.
    Mux,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signal {
    Const(bool),
    Wire(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    /// Wires only; constants are folded away when the circuit is built.
    pub inputs: Vec<usize>,
}

/// Wires `0..num_inputs` are inputs; gate `i` drives wire `num_inputs + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub num_inputs: usize,
    pub gates: Vec<Gate>,
    pub output: Signal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwbVariant {
    Sorter,
    CounterMux,
}

impl HwbVariant {
    pub fn name(self) -> &'static str {
        match self {
            HwbVariant::Sorter => "sorter",
            HwbVariant::CounterMux => "counter-mux",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HwbSpec {
    pub n: usize,
    pub variant: HwbVariant,
}

/// Builds a circuit gate by gate, folding constants as it goes.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    num_inputs: usize,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(num_inputs: usize) -> CircuitBuilder {
        CircuitBuilder {
            num_inputs,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, i: usize) -> Signal {
        assert!(i < self.num_inputs);
        Signal::Wire(i)
    }

    fn gate(&mut self, kind: GateKind, inputs: Vec<usize>) -> Signal {
        self.gates.push(Gate { kind, inputs });
        Signal::Wire(self.num_inputs + self.gates.len() - 1)
    }

    pub fn not(&mut self, a: Signal) -> Signal {
        match a {
            Signal::Const(v) => Signal::Const(!v),
            Signal::Wire(w) => self.gate(GateKind::Not, vec![w]),
        }
    }

    pub fn and(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(false), _) | (_, Signal::Const(false)) => Signal::Const(false),
            (Signal::Const(true), x) | (x, Signal::Const(true)) => x,
            (Signal::Wire(x), Signal::Wire(y)) if x == y => a,
            (Signal::Wire(x), Signal::Wire(y)) => self.gate(GateKind::And, vec![x, y]),
        }
    }

    pub fn or(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(true), _) | (_, Signal::Const(true)) => Signal::Const(true),
            (Signal::Const(false), x) | (x, Signal::Const(false)) => x,
            (Signal::Wire(x), Signal::Wire(y)) if x == y => a,
            (Signal::Wire(x), Signal::Wire(y)) => self.gate(GateKind::Or, vec![x, y]),
        }
    }

    pub fn xor(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(false), x) | (x, Signal::Const(false)) => x,
            (Signal::Const(true), x) | (x, Signal::Const(true)) => self.not(x),
            (Signal::Wire(x), Signal::Wire(y)) if x == y => Signal::Const(false),
            (Signal::Wire(x), Signal::Wire(y)) => self.gate(GateKind::Xor, vec![x, y]),
        }
    }

    pub fn mux(&mut self, s: Signal, a: Signal, b: Signal) -> Signal {
        if a == b {
            return a;
        }
        match (s, a, b) {
            (Signal::Const(true), _, _) => a,
            (Signal::Const(false), _, _) => b,
            (_, Signal::Const(true), Signal::Const(false)) => s,
            (_, Signal::Const(false), Signal::Const(true)) => self.not(s),
            (_, Signal::Const(false), _) => {
                let ns = self.not(s);
                self.and(ns, b)
            }
            (_, Signal::Const(true), _) => self.or(s, b),
            (_, _, Signal::Const(false)) => self.and(s, a),
            (_, _, Signal::Const(true)) => {
                let ns = self.not(s);
                self.or(ns, a)
            }
            (Signal::Wire(sw), Signal::Wire(aw), Signal::Wire(bw)) => self.gate(GateKind::Mux, vec![sw, aw, bw]),
        }
    }

    pub fn finish(self, output: Signal) -> Circuit {
        Circuit {
            num_inputs: self.num_inputs,
            gates: self.gates,
            output,
        }
    }
}

impl Circuit {
    pub fn num_wires(&self) -> usize {
        self.num_inputs + self.gates.len()
    }

    pub fn simulate(&self, inputs: &[bool]) -> bool {
        assert_eq!(inputs.len(), self.num_inputs);
        let mut wires: Vec<bool> = inputs.to_vec();
        wires.reserve(self.gates.len());
        for g in &self.gates {
            let v = |i: usize| wires[g.inputs[i]];
            let out = match g.kind {
                GateKind::And => v(0) && v(1),
                GateKind::Or => v(0) || v(1),
                GateKind::Xor => v(0) ^ v(1),
                GateKind::Not => !v(0),
                GateKind::Mux => {
                    if v(0) {
                        v(1)
                    } else {
                        v(2)
                    }
                }
            };
            wires.push(out);
        }
        match self.output {
            Signal::Const(b) => b,
            Signal::Wire(w) => wires[w],
        }
    }

    /// Appends a NOT on the output.
    pub fn negated(&self) -> Circuit {
        let mut b = CircuitBuilder {
            num_inputs: self.num_inputs,
            gates: self.gates.clone(),
        };
        let out = b.not(self.output);
        b.finish(out)
    }
}

/// Sorts `wires` into descending order (true first) with Batcher's odd-even
/// merge network; the length is padded to a power of two with constant false.
pub fn batcher_sort(b: &mut CircuitBuilder, wires: &[Signal]) -> Vec<Signal> {
    let n = wires.len();
    let size = n.next_power_of_two();
    let mut a: Vec<Signal> = wires.to_vec();
    a.resize(size, Signal::Const(false));
    let mut p = 1;
    while p < size {
        let mut k = p;
        while k >= 1 {
            let mut j = k % p;
            while j + k < size {
                for i in 0..k.min(size - j - k) {
                    if (i + j) / (2 * p) == (i + j + k) / (2 * p) {
                        let (x, y) = (a[i + j], a[i + j + k]);
                        a[i + j] = b.or(x, y);
                        a[i + j + k] = b.and(x, y);
                    }
                }
                j += 2 * k;
            }
            k /= 2;
        }
        p *= 2;
    }
    a.truncate(n);
    a
}

/// Binary popcount of `wires`, least significant bit first, from a tree of
/// full and half adders.
pub fn adder_tree_count(b: &mut CircuitBuilder, wires: &[Signal]) -> Vec<Signal> {
    let width = usize::BITS as usize - wires.len().leading_zeros() as usize;
    let mut columns: Vec<std::collections::VecDeque<Signal>> = vec![Default::default(); width.max(1) + 1];
    columns[0].extend(wires.iter().copied());
    let mut out = Vec::with_capacity(width);
    for w in 0..width {
        while columns[w].len() > 1 {
            let x = columns[w].pop_front().expect("len > 1");
            let y = columns[w].pop_front().expect("len > 1");
            if let Some(z) = columns[w].pop_front() {
                let t = b.xor(x, y);
                let sum = b.xor(t, z);
                let c1 = b.and(x, y);
                let c2 = b.and(t, z);
                let carry = b.or(c1, c2);
                columns[w].push_back(sum);
                columns[w + 1].push_back(carry);
            } else {
                let sum = b.xor(x, y);
                let carry = b.and(x, y);
                columns[w].push_back(sum);
                columns[w + 1].push_back(carry);
            }
        }
        out.push(columns[w].pop_front().unwrap_or(Signal::Const(false)));
    }
    out
}

pub fn build_circuit(spec: HwbSpec) -> Circuit {
    let n = spec.n;
    let mut b = CircuitBuilder::new(n);
    let inputs: Vec<Signal> = (0..n).map(|i| b.input(i)).collect();
    let output = match spec.variant {
        HwbVariant::Sorter => {
            let sorted = batcher_sort(&mut b, &inputs);
            let mut out = Signal::Const(false);
            for i in 0..n {
                let next = if i + 1 < n { sorted[i + 1] } else { Signal::Const(false) };
                let not_next = b.not(next);
                let step = b.and(sorted[i], not_next);
                let pick = b.and(step, inputs[i]);
                out = b.or(out, pick);
            }
            out
        }
        HwbVariant::CounterMux => {
            let count = adder_tree_count(&mut b, &inputs);
            let mut leaves: Vec<Signal> = (0..1usize << count.len())
                .map(|i| {
                    if i >= 1 && i <= n {
                        inputs[i - 1]
                    } else {
                        Signal::Const(false)
                    }
                })
                .collect();
            for &bit in &count {
                leaves = leaves
                    .chunks(2)
                    .map(|pair| b.mux(bit, pair[1], pair[0]))
                    .collect();
            }
            leaves[0]
        }
    };
    b.finish(output)
}

#[derive(Debug, Clone)]
pub struct TseitinEncoding {
    pub clauses: Vec<Clause>,
    pub output: Lit,
    /// Literal of every wire.
    pub wire_lits: Vec<Lit>,
    /// First variable not used by the encoding.
    pub next_var: Var,
}

/// Encodes `circuit` with fresh variables from `first_free_var`: inputs first,
/// then one per gate in order.
pub fn tseitin_encode(circuit: &Circuit, first_free_var: Var) -> TseitinEncoding {
    let inputs: Vec<Lit> = (0..circuit.num_inputs as Var).map(|i| Lit::pos(first_free_var + i)).collect();
    tseitin_encode_with_inputs(circuit, &inputs, first_free_var + circuit.num_inputs as Var)
}

/// Encodes `circuit` over given input literals; gate variables start at
/// `first_free_var`.
pub fn tseitin_encode_with_inputs(circuit: &Circuit, inputs: &[Lit], first_free_var: Var) -> TseitinEncoding {
    assert_eq!(inputs.len(), circuit.num_inputs);
    let mut wire_lits: Vec<Lit> = inputs.to_vec();
    let mut clauses = Vec::new();
    let mut next = first_free_var;
    let cl = |lits: &[Lit]| Clause::new(lits.iter().copied());
    for g in &circuit.gates {
        let c = Lit::pos(next);
        next += 1;
        let i = |k: usize| wire_lits[g.inputs[k]];
        match g.kind {
            GateKind::And => {
                let (a, b) = (i(0), i(1));
                clauses.extend([cl(&[!c, a]), cl(&[!c, b]), cl(&[!a, !b, c])]);
            }
            GateKind::Or => {
                let (a, b) = (i(0), i(1));
                clauses.extend([cl(&[c, !a]), cl(&[c, !b]), cl(&[!c, a, b])]);
            }
            GateKind::Xor => {
                let (a, b) = (i(0), i(1));
                clauses.extend([
                    cl(&[!c, a, b]),
                    cl(&[!c, !a, !b]),
                    cl(&[c, !a, b]),
                    cl(&[c, a, !b]),
                ]);
            }
            GateKind::Not => {
                let a = i(0);
                clauses.extend([cl(&[c, a]), cl(&[!c, !a])]);
            }
            GateKind::Mux => {
                let (s, a, b) = (i(0), i(1), i(2));
                clauses.extend([
                    cl(&[!s, !a, c]),
                    cl(&[!s, a, !c]),
                    cl(&[s, !b, c]),
                    cl(&[s, b, !c]),
                ]);
            }
        }
        wire_lits.push(c);
    }
    let output = match circuit.output {
        Signal::Wire(w) => wire_lits[w],
        Signal::Const(v) => {
            let c = Lit::pos(next);
            next += 1;
            clauses.push(Clause::unit(if v { c } else { !c }));
            c
        }
    };
    TseitinEncoding {
        clauses,
        output,
        wire_lits,
        next_var: next,
    }
}

/// Inputs `1..=n`, circuit `a`'s gates, circuit `b`'s gates, then
/// `(out_a | out_b)(-out_a | -out_b)`.
pub fn build_miter_from(a: &Circuit, b: &Circuit) -> CnfFormula {
    assert_eq!(a.num_inputs, b.num_inputs);
    let n = a.num_inputs as Var;
    let inputs: Vec<Lit> = (1..=n).map(Lit::pos).collect();
    let ea = tseitin_encode_with_inputs(a, &inputs, n + 1);
    let eb = tseitin_encode_with_inputs(b, &inputs, ea.next_var);
    let mut clauses = ea.clauses;
    clauses.extend(eb.clauses);
    clauses.push(Clause::new([ea.output, eb.output]));
    clauses.push(Clause::new([!ea.output, !eb.output]));
    CnfFormula::from_parts(eb.next_var - 1, clauses, Vec::new())
}

/// Sorter-versus-counter miter for `HWB_n`.
pub fn build_miter(n: usize) -> CnfFormula {
    let a = build_circuit(HwbSpec {
        n,
        variant: HwbVariant::Sorter,
    });
    let b = build_circuit(HwbSpec {
        n,
        variant: HwbVariant::CounterMux,
    });
    build_miter_from(&a, &b)
}

/// Header comments recorded in generated miter files.
pub fn miter_comments(n: usize) -> Vec<String> {
    vec![
        format!("hwb miter n={n}"),
        format!(
            "variants {} vs {}",
            HwbVariant::Sorter.name(),
            HwbVariant::CounterMux.name()
        ),
        format!("generator logicsat {}", env!("CARGO_PKG_VERSION")),
        "expect UNSAT".to_string(),
    ]
}
