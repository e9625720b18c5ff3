//! Gate-level construction of `2-sort(B)`.
//!
//! The circuit has three parts:
//!
//! - a parallel prefix tree of `⋄̂_M` blocks that computes the hat-form
//!   state after every prefix of the inputs;
//! - one `out_M` block per column that turns the state and the column's
//!   bit pair into `max_i`, `min_i`;
//! - a two-gate output stage for the first column.
//!
//! All blocks are built from the same four-gate selection cell. The gate
//! structure is fixed; it is never re-derived from truth tables because a
//! Boolean-equivalent circuit can lose containment.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{Netlist, NetlistBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("prefix computation needs at least one input")]
    EmptyPrefix,
}

/// Ports of a block added to a netlist under construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubcircuitHandle {
    pub inputs: IndexMap<String, String>,
    pub outputs: IndexMap<String, String>,
}

impl SubcircuitHandle {
    fn new(inputs: &[(&str, &str)]) -> Self {
        SubcircuitHandle {
            inputs: inputs
                .iter()
                .map(|(p, s)| (p.to_string(), s.to_string()))
                .collect(),
            outputs: IndexMap::new(),
        }
    }

    pub fn output(&self, port: &str) -> &str {
        &self.outputs[port]
    }
}

/// The selection cell `f = OR(AND(b, OR(sel1, a)), AND(a, not_sel2))`.
///
/// The second select enters inverted; callers provide the inverted signal.
/// With `sel1 = sel2 = s` this is a closed multiplexer: `s = 0` picks `a`,
/// `s = 1` picks `b`.
pub fn build_selection(
    nb: &mut NetlistBuilder,
    a: &str,
    b: &str,
    sel1: &str,
    not_sel2: &str,
) -> SubcircuitHandle {
    let mut h =
        SubcircuitHandle::new(&[("a", a), ("b", b), ("sel1", sel1), ("not_sel2", not_sel2)]);
    let t = nb.or(sel1, a);
    let upper = nb.and(b, &t);
    let lower = nb.and(a, not_sel2);
    let f = nb.or(&upper, &lower);
    h.outputs.insert("f".into(), f);
    h
}

/// `x ⋄̂_M y` on hat-form pairs. Ports `x1 x2 y1 y2`, outputs `p1 p2`,
/// again in hat form. 4 AND, 4 OR, 2 NOT.
pub fn build_hat_diamond_op(
    nb: &mut NetlistBuilder,
    x: [&str; 2],
    y: [&str; 2],
) -> SubcircuitHandle {
    let mut h = SubcircuitHandle::new(&[("x1", x[0]), ("x2", x[1]), ("y1", y[0]), ("y2", y[1])]);
    // y[0] already carries NOT b_1, so this inverter recovers b_1.
    let b1 = nb.not(y[0]);
    let not_b2 = nb.not(y[1]);
    let p1 = build_selection(nb, x[1], x[0], y[0], &b1);
    let p2 = build_selection(nb, x[1], x[0], y[1], &not_b2);
    h.outputs.insert("p1".into(), p1.outputs["f"].clone());
    h.outputs.insert("p2".into(), p2.outputs["f"].clone());
    h
}

/// `out_M(s, b)` with `s` in hat form and `b = (g_i, h_i)`. Ports
/// `s1 s2 g h`, outputs `max min`. 4 AND, 4 OR, 2 NOT.
pub fn build_out_m(nb: &mut NetlistBuilder, s: [&str; 2], b: [&str; 2]) -> SubcircuitHandle {
    let mut h = SubcircuitHandle::new(&[("s1", s[0]), ("s2", s[1]), ("g", b[0]), ("h", b[1])]);
    let not_s2 = nb.not(s[1]);
    let s1 = nb.not(s[0]);
    let max = build_selection(nb, b[0], b[1], s[0], &not_s2);
    let min = build_selection(nb, b[1], b[0], s[1], &s1);
    h.outputs.insert("max".into(), max.outputs["f"].clone());
    h.outputs.insert("min".into(), min.outputs["f"].clone());
    h
}

/// Output stage of the first column, where the state is the constant
/// `hat(00) = (1, 0)` and `out_M` collapses to one OR and one AND.
pub fn build_base_out(nb: &mut NetlistBuilder, g1: &str, h1: &str) -> SubcircuitHandle {
    let mut h = SubcircuitHandle::new(&[("g", g1), ("h", h1)]);
    let max = nb.or(g1, h1);
    let min = nb.and(g1, h1);
    h.outputs.insert("max".into(), max);
    h.outputs.insert("min".into(), min);
    h
}

/// Operator-block count of the prefix tree on `n` inputs:
/// `f(1) = 0`, `f(n) = f(⌈n/2⌉) + (n − 1)` for even `n`, `+ (n − 2)` for odd.
pub fn ppc_op_count(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        _ => ppc_op_count(n.div_ceil(2)) + if n.is_multiple_of(2) { n - 1 } else { n - 2 },
    }
}

/// Upper bound on the prefix tree's depth in operator levels.
pub fn predict_ppc_delay(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        let log = usize::BITS - (n - 1).leading_zeros();
        2 * log as usize - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PpcShape {
    pub n: usize,
    pub op_count: usize,
    pub op_depth_levels: usize,
}

/// Operator schedule of the recursive prefix tree, independent of what the
/// operator is. Nodes `0..n` are the inputs; operator `k` creates node
/// `n + k` from `(left, right)`, where `left` covers the earlier indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpcPlan {
    n: usize,
    ops: Vec<(usize, usize)>,
    outputs: Vec<usize>,
}

impl PpcPlan {
    pub fn new(n: usize) -> Result<Self, SynthError> {
        if n == 0 {
            return Err(SynthError::EmptyPrefix);
        }
        let mut plan = PpcPlan {
            n,
            ops: Vec::new(),
            outputs: Vec::new(),
        };
        let inputs: Vec<usize> = (0..n).collect();
        plan.outputs = plan.build(&inputs);
        Ok(plan)
    }

    fn op(&mut self, l: usize, r: usize) -> usize {
        self.ops.push((l, r));
        self.n + self.ops.len() - 1
    }

    fn build(&mut self, d: &[usize]) -> Vec<usize> {
        let n = d.len();
        if n == 1 {
            return vec![d[0]];
        }
        let mut upper: Vec<usize> = (0..n / 2)
            .map(|k| self.op(d[2 * k], d[2 * k + 1]))
            .collect();
        if n % 2 == 1 {
            upper.push(d[n - 1]);
        }
        let p = self.build(&upper);
        let mut out = vec![0; n];
        out[0] = d[0];
        for k in 0..n / 2 {
            out[2 * k + 1] = p[k];
        }
        for k in 1..n.div_ceil(2) {
            out[2 * k] = if 2 * k == n - 1 {
                p[k]
            } else {
                self.op(p[k - 1], d[2 * k])
            };
        }
        out
    }

    pub fn inputs(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[(usize, usize)] {
        &self.ops
    }

    /// Node carrying `π_i` for each `i`.
    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn shape(&self) -> PpcShape {
        let mut level = vec![0usize; self.n + self.ops.len()];
        for (k, &(l, r)) in self.ops.iter().enumerate() {
            level[self.n + k] = level[l].max(level[r]) + 1;
        }
        PpcShape {
            n: self.n,
            op_count: self.ops.len(),
            op_depth_levels: self.outputs.iter().map(|&o| level[o]).max().unwrap_or(0),
        }
    }

    /// Evaluates the plan with an arbitrary operator.
    pub fn eval<T: Clone>(&self, inputs: &[T], mut op: impl FnMut(&T, &T) -> T) -> Vec<T> {
        assert_eq!(inputs.len(), self.n);
        let mut nodes: Vec<T> = inputs.to_vec();
        for &(l, r) in &self.ops {
            let v = op(&nodes[l], &nodes[r]);
            nodes.push(v);
        }
        self.outputs.iter().map(|&o| nodes[o].clone()).collect()
    }
}

/// Prefix tree of `⋄̂_M` blocks over hat-form pairs. `π_0` is `δ_0` itself.
pub fn build_ppc(
    nb: &mut NetlistBuilder,
    deltas: &[[String; 2]],
) -> Result<Vec<[String; 2]>, SynthError> {
    let plan = PpcPlan::new(deltas.len())?;
    Ok(plan.eval(deltas, |x, y| {
        let h = build_hat_diamond_op(nb, [&x[0], &x[1]], [&y[0], &y[1]]);
        [h.outputs["p1"].clone(), h.outputs["p2"].clone()]
    }))
}

pub fn input_name(word: &str, i: usize) -> String {
    format!("{word}_{i}")
}

/// Gate total predicted for `2-sort(B)`: `10·f(B−1) + 11·(B−1) + 2`.
pub fn predict_two_sort_gates(width: usize) -> usize {
    let k = width.saturating_sub(1);
    10 * ppc_op_count(k) + 11 * k + 2
}

fn two_sort(width: usize, folded_base: bool) -> Result<Netlist, SynthError> {
    if width == 0 {
        return Err(SynthError::ZeroWidth);
    }
    let mut nb = NetlistBuilder::new(format!("two_sort_{width}"));
    let g: Vec<String> = (1..=width).map(|i| nb.input(input_name("g", i))).collect();
    let h: Vec<String> = (1..=width).map(|i| nb.input(input_name("h", i))).collect();

    let mut max = Vec::with_capacity(width);
    let mut min = Vec::with_capacity(width);
    let base = if folded_base {
        build_base_out(&mut nb, &g[0], &h[0])
    } else {
        let one = nb.constant(true);
        let zero = nb.constant(false);
        build_out_m(&mut nb, [&one, &zero], [&g[0], &h[0]])
    };
    max.push(base.outputs["max"].clone());
    min.push(base.outputs["min"].clone());

    if width > 1 {
        let deltas: Vec<[String; 2]> = (0..width - 1)
            .map(|i| [nb.not(&g[i]), h[i].clone()])
            .collect();
        let pi = build_ppc(&mut nb, &deltas)?;
        for i in 1..width {
            let s = &pi[i - 1];
            let o = build_out_m(&mut nb, [&s[0], &s[1]], [&g[i], &h[i]]);
            max.push(o.outputs["max"].clone());
            min.push(o.outputs["min"].clone());
        }
    }

    for (i, s) in max.iter().enumerate() {
        nb.output(input_name("max", i + 1), s);
    }
    for (i, s) in min.iter().enumerate() {
        nb.output(input_name("min", i + 1), s);
    }
    Ok(nb.finish().expect("generated netlist is well formed"))
}

/// The `2-sort(B)` netlist: inputs `g_1..g_B, h_1..h_B`, outputs
/// `max_1..max_B, min_1..min_B`.
pub fn build_two_sort(width: usize) -> Result<Netlist, SynthError> {
    two_sort(width, true)
}

/// Like [`build_two_sort`], but the first column uses a full `out_M` block
/// fed by constants instead of the two-gate stage. Constant propagation turns
/// it back into the folded circuit.
pub fn build_two_sort_unfolded(width: usize) -> Result<Netlist, SynthError> {
    two_sort(width, false)
}

/// Standalone block netlists with the port names used by the builders, for
/// exhaustive checks and export.
pub fn selection_netlist() -> Netlist {
    let mut nb = NetlistBuilder::new("selection");
    let ports: Vec<String> = ["a", "b", "sel1", "not_sel2"]
        .iter()
        .map(|p| nb.input(*p))
        .collect();
    let h = build_selection(&mut nb, &ports[0], &ports[1], &ports[2], &ports[3]);
    nb.output("f", h.output("f"));
    nb.finish().unwrap()
}

pub fn hat_diamond_netlist() -> Netlist {
    let mut nb = NetlistBuilder::new("hat_diamond");
    let p: Vec<String> = ["x1", "x2", "y1", "y2"]
        .iter()
        .map(|s| nb.input(*s))
        .collect();
    let h = build_hat_diamond_op(&mut nb, [&p[0], &p[1]], [&p[2], &p[3]]);
    nb.output("p1", h.output("p1"));
    nb.output("p2", h.output("p2"));
    nb.finish().unwrap()
}

pub fn out_m_netlist() -> Netlist {
    let mut nb = NetlistBuilder::new("out_m");
    let p: Vec<String> = ["s1", "s2", "g", "h"]
        .iter()
        .map(|s| nb.input(*s))
        .collect();
    let h = build_out_m(&mut nb, [&p[0], &p[1]], [&p[2], &p[3]]);
    nb.output("max", h.output("max"));
    nb.output("min", h.output("min"));
    nb.finish().unwrap()
}

/// Binds block ports to values, for use with [`crate::netlist::simulate`].
pub fn port_assignment<T: Copy>(pairs: &[(&str, T)]) -> HashMap<String, T> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
