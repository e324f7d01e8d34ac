//! Line-oriented circuit text format.
//!
//! ```text
//! n=2 init=zero
//! GATE H 0
//! GATE CZ 0,1
//! GATE DIAG(0,0,0,3.14) 0,1
//! GATE [1:0,0:0,0:0,0:1] 1
//! ```
//!
//! Raw matrices are row-major `re:im` pairs; `DIAG` may act on any number of
//! qubits. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Circuit, Gate, GateKind, InitialState};
use crate::{fmt_f64, Error, Result};

pub fn write_circuit(circuit: &Circuit) -> String {
    let init = match circuit.init() {
        InitialState::AllZero => "zero",
        InitialState::AllPlus => "plus",
    };
    let mut out = format!("n={} init={init}\n", circuit.n_qubits());
    for g in circuit.gates() {
        let name = match g.kind() {
            GateKind::Matrix => {
                let parts: Vec<String> =
                    g.matrix().iter().map(|z| format!("{}:{}", fmt_f64(z.re), fmt_f64(z.im))).collect();
                format!("[{}]", parts.join(","))
            }
            k => k.to_string(),
        };
        let qs: Vec<String> = g.support().iter().map(|q| q.to_string()).collect();
        writeln!(out, "GATE {name} {}", qs.join(",")).expect("write to string");
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut n = None;
    let mut init = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|e| Error::parse(hline, e.to_string()))?),
            Some(("init", "zero")) => init = Some(InitialState::AllZero),
            Some(("init", "plus")) => init = Some(InitialState::AllPlus),
            _ => return Err(Error::parse(hline, format!("unexpected header token '{tok}'"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(hline, "header lacks n="))?;
    let init = init.ok_or_else(|| Error::parse(hline, "header lacks init="))?;
    let mut circuit = Circuit::new(n, init);
    for (ln, line) in lines {
        let gate = parse_gate_line(line).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(ln, msg),
            other => Error::parse(ln, other.to_string()),
        })?;
        circuit.push(gate).map_err(|e| Error::parse(ln, e.to_string()))?;
    }
    Ok(circuit)
}

fn parse_gate_line(line: &str) -> Result<Gate> {
    let rest = line.strip_prefix("GATE").ok_or_else(|| Error::parse(0, "line must start with GATE"))?;
    let rest = rest.trim();
    let (name, qubits) = rest.rsplit_once(char::is_whitespace).ok_or_else(|| Error::parse(0, "missing qubits"))?;
    let support = qubits
        .split(',')
        .map(|q| q.trim().parse::<usize>().map_err(|e| Error::parse(0, format!("bad qubit '{q}': {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let name = name.trim();
    if let Some(body) = name.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let matrix = body
            .split(',')
            .map(|pair| {
                let (re, im) = pair.split_once(':').ok_or_else(|| Error::parse(0, format!("bad entry '{pair}'")))?;
                Ok(Complex64::new(parse_f(re)?, parse_f(im)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return Gate::from_matrix(support, matrix);
    }
    let kind = match name {
        "H" => GateKind::H,
        "X" => GateKind::X,
        "Z" => GateKind::Z,
        "S" => GateKind::S,
        "T" => GateKind::T,
        "CZ" => GateKind::CZ,
        _ => {
            let (head, args) = name
                .strip_suffix(')')
                .and_then(|s| s.split_once('('))
                .ok_or_else(|| Error::UnsupportedGate(name.to_string()))?;
            let args = args.split(',').map(parse_f).collect::<Result<Vec<f64>>>()?;
            match (head, args.len()) {
                ("RZ", 1) => GateKind::Rz(args[0]),
                ("RX", 1) => GateKind::Rx(args[0]),
                ("DIAG", _) => GateKind::Diag(args),
                _ => return Err(Error::UnsupportedGate(name.to_string())),
            }
        }
    };
    Gate::named(kind, support)
}

fn parse_f(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::parse(0, format!("bad number '{s}': {e}")))
}
