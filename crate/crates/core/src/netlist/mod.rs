//! Gate-level netlists over `{AND, OR, NOT, CONST0, CONST1}`.
//!
//! A [`Netlist`] is a plain, serialisable description: named inputs, a list of
//! gates referring to signals by id, and named outputs. Every consumer goes
//! through [`validate_and_sort`] first; simulation runs on a
//! [`CompiledNetlist`], an index-based form that can be shared across threads.

mod hdl;
mod json;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ternary::Trit;

pub use hdl::{export_structural_hdl, is_verilog_identifier, HdlExport};
pub use json::{from_json, to_json};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("signal id {0:?} is defined more than once")]
    DuplicateId(String),
    #[error("signal id {0:?} is not an ASCII identifier")]
    BadId(String),
    #[error("gate {gate:?} refers to undefined signal {signal:?}")]
    Dangling { gate: String, signal: String },
    #[error("output {output:?} refers to undefined signal {signal:?}")]
    DanglingOutput { output: String, signal: String },
    #[error("gate {gate:?} ({kind}) expects {expected} input(s), got {got}")]
    Arity {
        gate: String,
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("combinational cycle through gate {0:?}")]
    Cycle(String),
    #[error("no value assigned to input {0:?}")]
    MissingInput(String),
    #[error("{0:?} is not an input of this netlist")]
    UnknownInput(String),
    #[error("expected {expected} input values, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("malformed netlist document at {location}: {message}")]
    Format { location: String, message: String },
}

impl NetlistError {
    /// Where in a document the problem sits, for error reports.
    pub fn location(&self) -> String {
        match self {
            NetlistError::DuplicateId(id) | NetlistError::BadId(id) => format!("id {id:?}"),
            NetlistError::Dangling { gate, .. } | NetlistError::Arity { gate, .. } => {
                format!("gates[{gate:?}]")
            }
            NetlistError::Cycle(gate) => format!("gates[{gate:?}]"),
            NetlistError::DanglingOutput { output, .. } => format!("outputs[{output:?}]"),
            NetlistError::MissingInput(id) | NetlistError::UnknownInput(id) => {
                format!("inputs[{id:?}]")
            }
            NetlistError::InputCount { .. } => "inputs".to_string(),
            NetlistError::Format { location, .. } => location.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    And,
    Or,
    Not,
    Const0,
    Const1,
}

impl GateKind {
    pub const fn arity(self) -> usize {
        match self {
            GateKind::And | GateKind::Or => 2,
            GateKind::Not => 1,
            GateKind::Const0 | GateKind::Const1 => 0,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Netlist {
    pub name: String,
    pub inputs: Vec<String>,
    pub gates: Vec<Gate>,
    pub outputs: IndexMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub count_and: usize,
    pub count_or: usize,
    pub count_not: usize,
    pub count_const: usize,
    pub total: usize,
    /// Longest input-to-output path, every gate counting one level.
    pub depth: usize,
}

fn is_identifier(id: &str) -> bool {
    !id.is_empty() && id.bytes().all(|b| b.is_ascii_graphic())
}

/// Checks well-formedness and returns an equivalent netlist whose gates are in
/// topological order. Gates already in order keep their relative order.
pub fn validate_and_sort(n: &Netlist) -> Result<Netlist, NetlistError> {
    let mut seen: HashSet<&str> = HashSet::with_capacity(n.inputs.len() + n.gates.len());
    for id in n.inputs.iter().chain(n.gates.iter().map(|g| &g.id)) {
        if !is_identifier(id) {
            return Err(NetlistError::BadId(id.clone()));
        }
        if !seen.insert(id) {
            return Err(NetlistError::DuplicateId(id.clone()));
        }
    }

    let gate_index: HashMap<&str, usize> = n
        .gates
        .iter()
        .enumerate()
        .map(|(i, g)| (g.id.as_str(), i))
        .collect();

    let mut indegree = vec![0usize; n.gates.len()];
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n.gates.len()];
    for (i, g) in n.gates.iter().enumerate() {
        if g.inputs.len() != g.kind.arity() {
            return Err(NetlistError::Arity {
                gate: g.id.clone(),
                kind: g.kind,
                expected: g.kind.arity(),
                got: g.inputs.len(),
            });
        }
        for s in &g.inputs {
            if let Some(&j) = gate_index.get(s.as_str()) {
                indegree[i] += 1;
                dependents[j].push(i);
            } else if !seen.contains(s.as_str()) {
                return Err(NetlistError::Dangling {
                    gate: g.id.clone(),
                    signal: s.clone(),
                });
            }
        }
    }
    for (out, sig) in &n.outputs {
        if !seen.contains(sig.as_str()) {
            return Err(NetlistError::DanglingOutput {
                output: out.clone(),
                signal: sig.clone(),
            });
        }
    }

    let mut ready: BinaryHeap<Reverse<usize>> = indegree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(i, _)| Reverse(i))
        .collect();
    let mut order = Vec::with_capacity(n.gates.len());
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &d in &dependents[i] {
            indegree[d] -= 1;
            if indegree[d] == 0 {
                ready.push(Reverse(d));
            }
        }
    }
    if order.len() < n.gates.len() {
        return Err(NetlistError::Cycle(find_cycle(n, &gate_index, &indegree)));
    }

    Ok(Netlist {
        name: n.name.clone(),
        inputs: n.inputs.clone(),
        gates: order.into_iter().map(|i| n.gates[i].clone()).collect(),
        outputs: n.outputs.clone(),
    })
}

/// Walks backwards through unsorted gates until one repeats. Every such gate
/// has an unsorted predecessor, so the walk must close a cycle.
fn find_cycle(n: &Netlist, gate_index: &HashMap<&str, usize>, indegree: &[usize]) -> String {
    let start = indegree
        .iter()
        .position(|&d| d > 0)
        .expect("some gate is unsorted");
    let mut visited = vec![false; n.gates.len()];
    let mut cur = start;
    while !visited[cur] {
        visited[cur] = true;
        cur = n.gates[cur]
            .inputs
            .iter()
            .filter_map(|s| gate_index.get(s.as_str()).copied())
            .find(|&j| indegree[j] > 0)
            .expect("unsorted gate has an unsorted predecessor");
    }
    n.gates[cur].id.clone()
}

/// Exact gate counts per kind and unit-delay depth.
pub fn metrics(n: &Netlist) -> Result<Metrics, NetlistError> {
    let sorted = validate_and_sort(n)?;
    let mut m = Metrics::default();
    let mut level: HashMap<&str, usize> = sorted.inputs.iter().map(|i| (i.as_str(), 0)).collect();
    for g in &sorted.gates {
        match g.kind {
            GateKind::And => m.count_and += 1,
            GateKind::Or => m.count_or += 1,
            GateKind::Not => m.count_not += 1,
            GateKind::Const0 | GateKind::Const1 => m.count_const += 1,
        }
        let l = g
            .inputs
            .iter()
            .map(|s| level[s.as_str()])
            .max()
            .unwrap_or(0)
            + 1;
        level.insert(&g.id, l);
    }
    m.total = m.count_and + m.count_or + m.count_not + m.count_const;
    m.depth = sorted
        .outputs
        .values()
        .map(|s| level[s.as_str()])
        .max()
        .unwrap_or(0);
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    And(u32, u32),
    Or(u32, u32),
    Not(u32),
    Const(Trit),
}

/// Index-based form of a validated netlist. Slots `0..inputs` hold the
/// inputs, slot `inputs + k` the k-th gate in topological order.
#[derive(Debug, Clone)]
pub struct CompiledNetlist {
    input_names: Vec<String>,
    output_names: Vec<String>,
    ops: Vec<Op>,
    outputs: Vec<u32>,
}

impl CompiledNetlist {
    pub fn new(n: &Netlist) -> Result<Self, NetlistError> {
        let sorted = validate_and_sort(n)?;
        let mut slot: HashMap<&str, u32> =
            HashMap::with_capacity(sorted.inputs.len() + sorted.gates.len());
        for (i, id) in sorted.inputs.iter().enumerate() {
            slot.insert(id, i as u32);
        }
        let base = sorted.inputs.len();
        let mut ops = Vec::with_capacity(sorted.gates.len());
        for (k, g) in sorted.gates.iter().enumerate() {
            let arg = |i: usize| slot[g.inputs[i].as_str()];
            ops.push(match g.kind {
                GateKind::And => Op::And(arg(0), arg(1)),
                GateKind::Or => Op::Or(arg(0), arg(1)),
                GateKind::Not => Op::Not(arg(0)),
                GateKind::Const0 => Op::Const(Trit::Zero),
                GateKind::Const1 => Op::Const(Trit::One),
            });
            slot.insert(&g.id, (base + k) as u32);
        }
        let outputs = sorted.outputs.values().map(|s| slot[s.as_str()]).collect();
        Ok(CompiledNetlist {
            input_names: sorted.inputs.clone(),
            output_names: sorted.outputs.keys().cloned().collect(),
            ops,
            outputs,
        })
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    /// Evaluates with inputs in declaration order; outputs in declaration
    /// order are written to `out`. `scratch` is reused between calls.
    pub fn eval_into(
        &self,
        inputs: &[Trit],
        scratch: &mut Vec<Trit>,
        out: &mut Vec<Trit>,
    ) -> Result<(), NetlistError> {
        if inputs.len() != self.input_names.len() {
            return Err(NetlistError::InputCount {
                expected: self.input_names.len(),
                got: inputs.len(),
            });
        }
        scratch.clear();
        scratch.extend_from_slice(inputs);
        for op in &self.ops {
            let v = match *op {
                Op::And(a, b) => scratch[a as usize] & scratch[b as usize],
                Op::Or(a, b) => scratch[a as usize] | scratch[b as usize],
                Op::Not(a) => !scratch[a as usize],
                Op::Const(c) => c,
            };
            scratch.push(v);
        }
        out.clear();
        out.extend(self.outputs.iter().map(|&s| scratch[s as usize]));
        Ok(())
    }

    pub fn eval(&self, inputs: &[Trit]) -> Result<Vec<Trit>, NetlistError> {
        let mut scratch = Vec::with_capacity(self.input_names.len() + self.ops.len());
        let mut out = Vec::with_capacity(self.outputs.len());
        self.eval_into(inputs, &mut scratch, &mut out)?;
        Ok(out)
    }
}

/// Ternary simulation: evaluates every gate in topological order under the
/// closed gate semantics. Returns output values keyed by output name.
pub fn simulate(
    n: &Netlist,
    assignment: &HashMap<String, Trit>,
) -> Result<IndexMap<String, Trit>, NetlistError> {
    if let Some(extra) = assignment.keys().find(|k| !n.inputs.contains(k)) {
        return Err(NetlistError::UnknownInput(extra.clone()));
    }
    let compiled = CompiledNetlist::new(n)?;
    let values = n
        .inputs
        .iter()
        .map(|i| {
            assignment
                .get(i)
                .copied()
                .ok_or_else(|| NetlistError::MissingInput(i.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let out = compiled.eval(&values)?;
    Ok(compiled.output_names.iter().cloned().zip(out).collect())
}

/// Incremental construction of a netlist with generated gate ids.
#[derive(Debug, Clone)]
pub struct NetlistBuilder {
    name: String,
    inputs: Vec<String>,
    gates: Vec<Gate>,
    outputs: IndexMap<String, String>,
    used: HashSet<String>,
    counter: usize,
}

impl NetlistBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetlistBuilder {
            name: name.into(),
            inputs: Vec::new(),
            gates: Vec::new(),
            outputs: IndexMap::new(),
            used: HashSet::new(),
            counter: 0,
        }
    }

    /// Declares a primary input and returns its signal id.
    ///
    /// Panics if the id is already taken; builder callers control all names.
    pub fn input(&mut self, id: impl Into<String>) -> String {
        let id = id.into();
        assert!(self.used.insert(id.clone()), "duplicate input {id}");
        self.inputs.push(id.clone());
        id
    }

    fn fresh_id(&mut self) -> String {
        loop {
            let id = format!("n{}", self.counter);
            self.counter += 1;
            if self.used.insert(id.clone()) {
                return id;
            }
        }
    }

    pub fn gate(&mut self, kind: GateKind, inputs: &[&str]) -> String {
        debug_assert_eq!(inputs.len(), kind.arity());
        let id = self.fresh_id();
        self.gates.push(Gate {
            id: id.clone(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
        });
        id
    }

    pub fn and(&mut self, a: &str, b: &str) -> String {
        self.gate(GateKind::And, &[a, b])
    }

    pub fn or(&mut self, a: &str, b: &str) -> String {
        self.gate(GateKind::Or, &[a, b])
    }

    pub fn not(&mut self, a: &str) -> String {
        self.gate(GateKind::Not, &[a])
    }

    pub fn constant(&mut self, value: bool) -> String {
        self.gate(
            if value {
                GateKind::Const1
            } else {
                GateKind::Const0
            },
            &[],
        )
    }

    pub fn output(&mut self, name: impl Into<String>, signal: &str) {
        self.outputs.insert(name.into(), signal.to_string());
    }

    /// Number of gates added so far.
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Copies `sub` into this netlist, driving its inputs from `bindings`
    /// (keyed by `sub`'s input ids). Returns `sub`'s outputs as local signals.
    pub fn instantiate(
        &mut self,
        sub: &Netlist,
        bindings: &HashMap<String, String>,
    ) -> Result<IndexMap<String, String>, NetlistError> {
        let sub = validate_and_sort(sub)?;
        let mut map: HashMap<&str, String> = HashMap::new();
        for i in &sub.inputs {
            let s = bindings
                .get(i)
                .ok_or_else(|| NetlistError::MissingInput(i.clone()))?;
            map.insert(i, s.clone());
        }
        for g in &sub.gates {
            let args: Vec<String> = g.inputs.iter().map(|s| map[s.as_str()].clone()).collect();
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let id = self.gate(g.kind, &refs);
            map.insert(&g.id, id);
        }
        Ok(sub
            .outputs
            .iter()
            .map(|(o, s)| (o.clone(), map[s.as_str()].clone()))
            .collect())
    }

    pub fn finish(self) -> Result<Netlist, NetlistError> {
        let n = Netlist {
            name: self.name,
            inputs: self.inputs,
            gates: self.gates,
            outputs: self.outputs,
        };
        validate_and_sort(&n)
    }
}

/// Folds constants through the netlist and drops gates that no longer reach
/// an output. Never applied implicitly.
pub fn propagate_constants(n: &Netlist) -> Result<Netlist, NetlistError> {
    #[derive(Clone)]
    enum Val {
        Const(bool),
        Sig(String),
    }

    let sorted = validate_and_sort(n)?;
    let mut val: HashMap<String, Val> = sorted
        .inputs
        .iter()
        .map(|i| (i.clone(), Val::Sig(i.clone())))
        .collect();
    let mut kept: Vec<Gate> = Vec::new();

    for g in &sorted.gates {
        let args: Vec<Val> = g.inputs.iter().map(|s| val[s].clone()).collect();
        let keep = |kind: GateKind, ins: Vec<String>, kept: &mut Vec<Gate>| {
            kept.push(Gate {
                id: g.id.clone(),
                kind,
                inputs: ins,
            });
            Val::Sig(g.id.clone())
        };
        let v = match (g.kind, args.as_slice()) {
            (GateKind::Const0, _) => Val::Const(false),
            (GateKind::Const1, _) => Val::Const(true),
            (GateKind::Not, [Val::Const(c)]) => Val::Const(!c),
            (GateKind::Not, [Val::Sig(a)]) => keep(GateKind::Not, vec![a.clone()], &mut kept),
            (GateKind::And, [Val::Const(false), _] | [_, Val::Const(false)]) => Val::Const(false),
            (GateKind::Or, [Val::Const(true), _] | [_, Val::Const(true)]) => Val::Const(true),
            (GateKind::And | GateKind::Or, [Val::Const(c), Val::Const(_)]) => Val::Const(*c),
            (GateKind::And | GateKind::Or, [Val::Const(_), other] | [other, Val::Const(_)]) => {
                other.clone()
            }
            (GateKind::And | GateKind::Or, [Val::Sig(a), Val::Sig(b)]) if a == b => {
                Val::Sig(a.clone())
            }
            (kind, [Val::Sig(a), Val::Sig(b)]) => keep(kind, vec![a.clone(), b.clone()], &mut kept),
            _ => unreachable!("arity checked by validate_and_sort"),
        };
        val.insert(g.id.clone(), v);
    }

    // Materialise at most one gate per constant value, only if an output needs it.
    let mut used: HashSet<String> = sorted.inputs.iter().cloned().collect();
    used.extend(sorted.gates.iter().map(|g| g.id.clone()));
    let mut const_ids: [Option<String>; 2] = [None, None];
    let mut outputs = IndexMap::new();
    for (o, s) in &sorted.outputs {
        let sig = match &val[s] {
            Val::Sig(x) => x.clone(),
            Val::Const(c) => const_ids[usize::from(*c)]
                .get_or_insert_with(|| {
                    let base = if *c { "const1" } else { "const0" };
                    let mut id = base.to_string();
                    let mut k = 0;
                    while used.contains(&id) {
                        k += 1;
                        id = format!("{base}_{k}");
                    }
                    used.insert(id.clone());
                    kept.push(Gate {
                        id: id.clone(),
                        kind: if *c {
                            GateKind::Const1
                        } else {
                            GateKind::Const0
                        },
                        inputs: vec![],
                    });
                    id
                })
                .clone(),
        };
        outputs.insert(o.clone(), sig);
    }

    // Drop everything that does not feed an output.
    let by_id: HashMap<&str, &Gate> = kept.iter().map(|g| (g.id.as_str(), g)).collect();
    let mut live: HashSet<&str> = HashSet::new();
    let mut stack: Vec<&str> = outputs.values().map(String::as_str).collect();
    while let Some(s) = stack.pop() {
        if let Some(g) = by_id.get(s) {
            if live.insert(s) {
                stack.extend(g.inputs.iter().map(String::as_str));
            }
        }
    }
    let gates = kept
        .iter()
        .filter(|g| live.contains(g.id.as_str()))
        .cloned()
        .collect();

    validate_and_sort(&Netlist {
        name: sorted.name.clone(),
        inputs: sorted.inputs.clone(),
        gates,
        outputs,
    })
}
