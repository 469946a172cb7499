//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! qubits 3
//! RZ(1.5707963267948966) q[0]
//! CNOT q[0],q[1]
//! ```
//!
//! Angles are written with 17 significant digits, enough for every `f64`
//! to parse back to the identical value.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gates::circuit::Circuit;
use crate::gates::gate::{Gate, GateKind};

/// Renders `x` with exactly 17 significant digits.
pub fn format_angle(x: f64) -> String {
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mut out = String::from(sign);
    if exp >= 0 {
        let split = exp as usize + 1;
        out.push_str(&digits[..split]);
        out.push('.');
        if split < digits.len() {
            out.push_str(&digits[split..]);
        } else {
            out.push('0');
        }
    } else {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    }
    out
}

pub fn format_gate(g: &Gate) -> String {
    let mut s = g.kind().name().to_string();
    if !g.params().is_empty() {
        let ps: Vec<String> = g.params().iter().map(|&p| format_angle(p)).collect();
        let _ = write!(s, "({})", ps.join(","));
    }
    let qs: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
    let _ = write!(s, " {}", qs.join(","));
    s
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.num_qubits());
    for g in c.gates() {
        out.push_str(&format_gate(g));
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Parse {
            line: line_no,
            reason,
        };
        match circuit.as_mut() {
            None => {
                let n = line
                    .strip_prefix("qubits")
                    .map(str::trim)
                    .ok_or_else(|| err("expected header `qubits N`".into()))?;
                let n: usize = n
                    .parse()
                    .map_err(|_| err(format!("invalid qubit count `{n}`")))?;
                circuit = Some(Circuit::new(n));
            }
            Some(c) => {
                let gate = parse_gate_line(line).map_err(err)?;
                c.push(gate).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    circuit.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        reason: "missing `qubits N` header".into(),
    })
}

fn parse_gate_line(line: &str) -> std::result::Result<Gate, String> {
    let name_end = line
        .find(|c: char| c == '(' || c.is_whitespace())
        .ok_or_else(|| format!("missing operands in `{line}`"))?;
    let kind: GateKind = line[..name_end].parse().map_err(|e: Error| e.to_string())?;
    let mut rest = line[name_end..].trim_start();

    let mut params = Vec::new();
    if let Some(after) = rest.strip_prefix('(') {
        let close = after.find(')').ok_or("unclosed parameter list")?;
        for p in after[..close].split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v: f64 = p.parse().map_err(|_| format!("invalid angle `{p}`"))?;
            params.push(v);
        }
        rest = after[close + 1..].trim_start();
    }

    let mut qubits = Vec::new();
    for operand in rest.split(',').map(str::trim) {
        let q = operand
            .strip_prefix("q[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| format!("invalid qubit operand `{operand}`"))?;
        qubits.push(
            q.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid qubit index `{q}`"))?,
        );
    }
    Gate::new(kind, params, qubits).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn rz_line_format() {
        assert_eq!(format_gate(&Gate::rz(FRAC_PI_2, 0)), "RZ(1.5707963267948966) q[0]");
    }

    #[test]
    fn angle_rendering() {
        assert_eq!(format_angle(0.5), "0.50000000000000000");
        assert_eq!(format_angle(-PI), "-3.1415926535897931");
        assert_eq!(format_angle(0.0), "0.0000000000000000");
        assert_eq!(format_angle(1e-7), "9.9999999999999995e-8");
        for x in [0.1, -2.5e-5, 123.456, 7.0e20, f64::MIN_POSITIVE] {
            assert_eq!(format_angle(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn rejects_arity_violation() {
        let err = parse_circuit("qubits 2\nCNOT q[0]\n").unwrap_err();
        match err {
            Error::Parse { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("qubit"), "{reason}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("CNOT q[0],q[1]", 1),
            ("qubits x", 1),
            ("qubits 2\n\nFOO q[0]", 3),
            ("qubits 2\nX q[5]", 2),
            ("qubits 2\nRZ(abc) q[0]", 2),
            ("qubits 2\nX q0", 2),
            ("# only a comment", 1),
        ];
        for (text, line) in cases {
            match parse_circuit(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_whitespace() {
        let c = parse_circuit("# header\nqubits 3 # three\n  ecr q[1], q[2]  \nRZ( -0.25 ) q[0]\n").unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert_eq!(c.gates(), &[Gate::ecr(1, 2), Gate::rz(-0.25, 0)]);
    }
}
