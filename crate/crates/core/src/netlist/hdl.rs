use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use super::{validate_and_sort, GateKind, Netlist, NetlistError};

/// Structural Verilog text plus every identifier that had to be renamed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HdlExport {
    pub text: String,
    /// `(original, emitted)` pairs in order of first appearance.
    pub renames: Vec<(String, String)>,
}

const KEYWORDS: &[&str] = &[
    "always",
    "and",
    "assign",
    "automatic",
    "begin",
    "buf",
    "bufif0",
    "bufif1",
    "case",
    "casex",
    "casez",
    "cell",
    "cmos",
    "config",
    "deassign",
    "default",
    "defparam",
    "design",
    "disable",
    "edge",
    "else",
    "end",
    "endcase",
    "endconfig",
    "endfunction",
    "endgenerate",
    "endmodule",
    "endprimitive",
    "endspecify",
    "endtable",
    "endtask",
    "event",
    "for",
    "force",
    "forever",
    "fork",
    "function",
    "generate",
    "genvar",
    "highz0",
    "highz1",
    "if",
    "ifnone",
    "incdir",
    "include",
    "initial",
    "inout",
    "input",
    "instance",
    "integer",
    "join",
    "large",
    "liblist",
    "library",
    "localparam",
    "macromodule",
    "medium",
    "module",
    "nand",
    "negedge",
    "nmos",
    "nor",
    "noshowcancelled",
    "not",
    "notif0",
    "notif1",
    "or",
    "output",
    "parameter",
    "pmos",
    "posedge",
    "primitive",
    "pull0",
    "pull1",
    "pulldown",
    "pullup",
    "pulsestyle_onevent",
    "pulsestyle_ondetect",
    "rcmos",
    "real",
    "realtime",
    "reg",
    "release",
    "repeat",
    "rnmos",
    "rpmos",
    "rtran",
    "rtranif0",
    "rtranif1",
    "scalared",
    "showcancelled",
    "signed",
    "small",
    "specify",
    "specparam",
    "strong0",
    "strong1",
    "supply0",
    "supply1",
    "table",
    "task",
    "time",
    "tran",
    "tranif0",
    "tranif1",
    "tri",
    "tri0",
    "tri1",
    "triand",
    "trior",
    "trireg",
    "unsigned",
    "use",
    "uwire",
    "vectored",
    "wait",
    "wand",
    "weak0",
    "weak1",
    "while",
    "wire",
    "wor",
    "xnor",
    "xor",
];

/// Whether `s` can be emitted as a plain Verilog identifier.
pub fn is_verilog_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'$') && !KEYWORDS.contains(&s)
}

#[derive(Default)]
struct Namer {
    used: HashSet<String>,
    map: HashMap<String, String>,
    renames: Vec<(String, String)>,
}

impl Namer {
    /// Emitted name for a signal; the same signal always maps to the same name.
    fn signal(&mut self, id: &str) -> String {
        if let Some(n) = self.map.get(id) {
            return n.clone();
        }
        let n = self.fresh(id);
        self.map.insert(id.to_string(), n.clone());
        n
    }

    fn fresh(&mut self, id: &str) -> String {
        let mut base: String = id
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '_' || c == '$' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        if !base.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            base.insert(0, '_');
        }
        if KEYWORDS.contains(&base.as_str()) {
            base.push('_');
        }
        let mut name = base.clone();
        let mut k = 1;
        while self.used.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        self.used.insert(name.clone());
        if name != id {
            self.renames.push((id.to_string(), name.clone()));
        }
        name
    }
}

/// One library cell per gate: `AND2_X1`, `OR2_X1`, `INV_X1`, `LOGIC0_X1`,
/// `LOGIC1_X1`. Output ports are driven by `assign`.
pub fn export_structural_hdl(n: &Netlist) -> Result<HdlExport, NetlistError> {
    let n = validate_and_sort(n)?;
    let mut names = Namer::default();
    let module = names.fresh(&n.name);

    let inputs: Vec<String> = n.inputs.iter().map(|i| names.signal(i)).collect();
    // Output ports live in their own namespace from the netlist's point of
    // view, but share one with signals in Verilog.
    let outputs: Vec<String> = n.outputs.keys().map(|o| names.fresh(o)).collect();
    let wires: Vec<String> = n.gates.iter().map(|g| names.signal(&g.id)).collect();

    let mut out = String::new();
    let ports: Vec<&String> = inputs.iter().chain(&outputs).collect();
    if ports.is_empty() {
        writeln!(out, "module {module};").unwrap();
    } else {
        writeln!(out, "module {module} (").unwrap();
        for (k, p) in ports.iter().enumerate() {
            let sep = if k + 1 < ports.len() { "," } else { "" };
            writeln!(out, "  {p}{sep}").unwrap();
        }
        writeln!(out, ");").unwrap();
    }
    for i in &inputs {
        writeln!(out, "  input {i};").unwrap();
    }
    for o in &outputs {
        writeln!(out, "  output {o};").unwrap();
    }
    for w in &wires {
        writeln!(out, "  wire {w};").unwrap();
    }

    for (g, w) in n.gates.iter().zip(&wires) {
        // Instance names are synthetic, so their renames are not reported.
        let reported = names.renames.len();
        let inst = names.fresh(&format!("U_{w}"));
        names.renames.truncate(reported);
        let arg = |k: usize| names.map[&g.inputs[k]].clone();
        let line = match g.kind {
            GateKind::And => format!(
                "AND2_X1 {inst} (.A1({}), .A2({}), .ZN({w}));",
                arg(0),
                arg(1)
            ),
            GateKind::Or => format!(
                "OR2_X1 {inst} (.A1({}), .A2({}), .ZN({w}));",
                arg(0),
                arg(1)
            ),
            GateKind::Not => format!("INV_X1 {inst} (.A({}), .ZN({w}));", arg(0)),
            GateKind::Const0 => format!("LOGIC0_X1 {inst} (.Z({w}));"),
            GateKind::Const1 => format!("LOGIC1_X1 {inst} (.Z({w}));"),
        };
        writeln!(out, "  {line}").unwrap();
    }
    for (o, s) in outputs.iter().zip(n.outputs.values()) {
        writeln!(out, "  assign {o} = {};", names.map[s]).unwrap();
    }
    writeln!(out, "endmodule").unwrap();

    Ok(HdlExport {
        text: out,
        renames: names.renames,
    })
}
