//! JSON circuit documents.
//!
//! ```json
//! {
//!   "num_qubits": 4,
//!   "initial_state": "1100",
//!   "gates": [
//!     {"type": "matchgate", "modes": [0, 1], "u": [[[1,0],[0,0]], [[0,0],[1,0]]]},
//!     {"type": "cphase", "modes": [0, 3], "theta": 0.5}
//!   ]
//! }
//! ```
//!
//! `u` is row-major with row/column 0 referring to the lower mode. The
//! leftmost character of `initial_state` is mode 0.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::{BasisState, Circuit, Gate};
use crate::error::{Error, Result};
use crate::gates::Mat2;

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::schema("<document>", e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::schema("<document>", "expected a JSON object"))?;

    let n = field(obj, "num_qubits", "num_qubits")?
        .as_u64()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::schema("num_qubits", "expected a positive integer"))?
        as usize;

    let init_str = field(obj, "initial_state", "initial_state")?
        .as_str()
        .ok_or_else(|| Error::schema("initial_state", "expected a binary string"))?;
    if init_str.chars().count() != n {
        return Err(Error::schema(
            "initial_state",
            format!(
                "length {} does not match num_qubits {n}",
                init_str.chars().count()
            ),
        ));
    }
    let initial =
        BasisState::parse(init_str).map_err(|e| Error::schema("initial_state", e.to_string()))?;

    let gate_values = field(obj, "gates", "gates")?
        .as_array()
        .ok_or_else(|| Error::schema("gates", "expected an array"))?;

    let mut gates = Vec::with_capacity(gate_values.len());
    for (idx, gv) in gate_values.iter().enumerate() {
        gates.push(parse_gate(idx, gv, n)?);
    }
    Circuit::new(initial, gates)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(path, "missing required field"))
}

fn parse_modes(idx: usize, g: &Map<String, Value>, n: usize) -> Result<(usize, usize)> {
    let path = format!("gates[{idx}].modes");
    let arr = field(g, "modes", &path)?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::schema(&path, "expected an array of two mode indices"))?;
    let mut out = [0usize; 2];
    for (slot, v) in out.iter_mut().zip(arr) {
        let m = v
            .as_u64()
            .ok_or_else(|| Error::schema(&path, "mode indices must be non-negative integers"))?
            as usize;
        if m >= n {
            return Err(Error::ModeOutOfRange {
                gate: idx,
                mode: m,
                n,
            });
        }
        *slot = m;
    }
    Ok((out[0], out[1]))
}

fn parse_gate(idx: usize, gv: &Value, n: usize) -> Result<Gate> {
    let g = gv
        .as_object()
        .ok_or_else(|| Error::schema(format!("gates[{idx}]"), "expected an object"))?;
    let kind = field(g, "type", &format!("gates[{idx}].type"))?
        .as_str()
        .ok_or_else(|| Error::schema(format!("gates[{idx}].type"), "expected a string"))?;
    match kind {
        "matchgate" => {
            let (p, q) = parse_modes(idx, g, n)?;
            if q != p + 1 {
                return Err(Error::NonNearestNeighbor { gate: idx, p, q });
            }
            let u = parse_u(idx, field(g, "u", &format!("gates[{idx}].u"))?)?;
            Ok(Gate::Matchgate { p, u })
        }
        "cphase" => {
            let (q1, q2) = parse_modes(idx, g, n)?;
            let path = format!("gates[{idx}].theta");
            let theta = field(g, "theta", &path)?
                .as_f64()
                .ok_or_else(|| Error::schema(&path, "expected a real number"))?;
            Ok(Gate::ControlledPhase { q1, q2, theta })
        }
        other => Err(Error::schema(
            format!("gates[{idx}].type"),
            format!("unknown gate type {other:?} (expected \"matchgate\" or \"cphase\")"),
        )),
    }
}

fn parse_u(idx: usize, v: &Value) -> Result<Mat2> {
    let bad = || {
        Error::schema(
            format!("gates[{idx}].u"),
            "expected a 2x2 array of [re, im] pairs",
        )
    };
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
    let mut u = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let cols = row.as_array().filter(|c| c.len() == 2).ok_or_else(bad)?;
        for (j, entry) in cols.iter().enumerate() {
            let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let re = pair[0].as_f64().ok_or_else(bad)?;
            let im = pair[1].as_f64().ok_or_else(bad)?;
            u[i][j] = Complex64::new(re, im);
        }
    }
    Ok(u)
}

/// Emits the document schema accepted by [`parse_circuit`], with normalized angles.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let gates: Vec<Value> = circuit
        .gates()
        .iter()
        .map(|g| match g {
            Gate::Matchgate { p, u } => json!({
                "type": "matchgate",
                "modes": [p, p + 1],
                "u": u.iter()
                    .map(|row| row.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            }),
            Gate::ControlledPhase { q1, q2, theta } => json!({
                "type": "cphase",
                "modes": [q1, q2],
                "theta": theta,
            }),
        })
        .collect();
    let doc = json!({
        "num_qubits": circuit.n(),
        "initial_state": circuit.initial().to_string(),
        "gates": gates,
    });
    serde_json::to_string_pretty(&doc).expect("circuit documents always serialize")
}
