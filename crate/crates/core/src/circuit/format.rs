//! Line-oriented circuit files.
//!
//! ```text
//! ionjw-circuit 1
//! qubits 3
//! meta op single
//! ms axis=XX dir=forward qubits=0,1,2
//! rz qubits=0 angle=-1.5707963267948966
//! crz qubits=3,0 angle=0.25
//! ```
//!
//! The first line names the format and its version. `#` starts a comment. Each gate
//! record is `<name> key=value ...`; qubit lists are comma separated with the control
//! first for `crz` and `cnot`. Angles are written in shortest round-trip form.

use super::{Circuit, Direction, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Clifford1, MsAxis};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "ionjw-circuit";

pub fn serialize(c: &Circuit) -> String {
    let mut out = format!("{MAGIC} {FORMAT_VERSION}\nqubits {}\n", c.n_qubits());
    for (k, v) in &c.metadata {
        out.push_str(&format!("meta {k} {v}\n"));
    }
    for g in c.gates() {
        out.push_str(&gate_record(g));
        out.push('\n');
    }
    out
}

fn join(qs: &[usize]) -> String {
    qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

fn gate_record(g: &Gate) -> String {
    match g {
        Gate::Ms {
            axis,
            direction,
            qubits,
        } => format!(
            "ms axis={} dir={} qubits={}",
            axis.name(),
            match direction {
                Direction::Forward => "forward",
                Direction::Backward => "backward",
            },
            join(qubits)
        ),
        Gate::Rz { qubit, angle } => format!("rz qubits={qubit} angle={angle:?}"),
        Gate::CRz {
            control,
            target,
            angle,
        } => format!("crz qubits={control},{target} angle={angle:?}"),
        Gate::Rzz { a, b, angle } => format!("rzz qubits={a},{b} angle={angle:?}"),
        Gate::Clifford1 { gate, qubit } => format!("{} qubits={qubit}", gate.name()),
        Gate::Cnot { control, target } => format!("cnot qubits={control},{target}"),
        Gate::GlobalPhase { angle } => format!("gphase angle={angle:?}"),
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn deserialize(doc: &str) -> Result<Circuit> {
    let mut lines = doc
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty document"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(perr(ln, format!("expected `{MAGIC} <version>` header")));
    }
    let version: u32 = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| perr(ln, "missing format version"))?;
    if version != FORMAT_VERSION {
        return Err(Error::Schema(format!(
            "format version {version} is not supported (expected {FORMAT_VERSION})"
        )));
    }

    let (ln, qline) = lines.next().ok_or_else(|| perr(ln + 1, "missing `qubits` line"))?;
    let n_qubits = match qline.split_whitespace().collect::<Vec<_>>()[..] {
        ["qubits", n] => n.parse().map_err(|_| perr(ln, format!("bad qubit count {n:?}")))?,
        _ => return Err(perr(ln, "expected `qubits <n>`")),
    };
    let mut c = Circuit::new(n_qubits);

    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("meta ") {
            let (k, v) = rest.trim().split_once(' ').unwrap_or((rest.trim(), ""));
            c.metadata.insert(k.to_string(), v.trim().to_string());
            continue;
        }
        let gate = parse_gate(ln, line)?;
        c.push(gate).map_err(|e| perr(ln, e.to_string()))?;
    }
    Ok(c)
}

fn parse_gate(ln: usize, line: &str) -> Result<Gate> {
    let mut it = line.split_whitespace();
    let name = it.next().unwrap_or_default();
    let mut qubits: Option<Vec<usize>> = None;
    let mut angle: Option<f64> = None;
    let mut axis: Option<MsAxis> = None;
    let mut dir: Option<Direction> = None;
    for field in it {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| perr(ln, format!("expected key=value, got {field:?}")))?;
        match k {
            "qubits" => {
                let qs = v
                    .split(',')
                    .map(|s| s.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| perr(ln, format!("bad qubit list {v:?}")))?;
                qubits = Some(qs);
            }
            "angle" => {
                angle = Some(v.parse().map_err(|_| perr(ln, format!("bad angle {v:?}")))?);
            }
            "axis" => {
                axis = Some(match v {
                    "XX" => MsAxis::XX,
                    "YY" => MsAxis::YY,
                    _ => return Err(perr(ln, format!("bad MS axis {v:?}"))),
                })
            }
            "dir" => {
                dir = Some(match v {
                    "forward" => Direction::Forward,
                    "backward" => Direction::Backward,
                    _ => return Err(perr(ln, format!("bad MS direction {v:?}"))),
                })
            }
            _ => return Err(perr(ln, format!("unknown field {k:?}"))),
        }
    }
    let need_q = |n: usize| -> Result<Vec<usize>> {
        let qs = qubits.clone().ok_or_else(|| perr(ln, "missing qubits"))?;
        if n > 0 && qs.len() != n {
            return Err(perr(ln, format!("{name} takes {n} qubit(s), got {}", qs.len())));
        }
        Ok(qs)
    };
    let need_angle = || angle.ok_or_else(|| perr(ln, "missing angle"));
    let gate = match name {
        "ms" => Gate::Ms {
            axis: axis.ok_or_else(|| perr(ln, "missing axis"))?,
            direction: dir.ok_or_else(|| perr(ln, "missing dir"))?,
            qubits: {
                let mut qs = need_q(0)?;
                qs.sort_unstable();
                qs
            },
        },
        "rz" => Gate::Rz {
            qubit: need_q(1)?[0],
            angle: need_angle()?,
        },
        "crz" => {
            let qs = need_q(2)?;
            Gate::CRz {
                control: qs[0],
                target: qs[1],
                angle: need_angle()?,
            }
        }
        "rzz" => {
            let qs = need_q(2)?;
            Gate::Rzz {
                a: qs[0],
                b: qs[1],
                angle: need_angle()?,
            }
        }
        "cnot" => {
            let qs = need_q(2)?;
            Gate::Cnot {
                control: qs[0],
                target: qs[1],
            }
        }
        "gphase" => Gate::GlobalPhase {
            angle: need_angle()?,
        },
        other => match Clifford1::from_name(other) {
            Some(gate) => Gate::Clifford1 {
                gate,
                qubit: need_q(1)?[0],
            },
            None => {
                return Err(Error::Schema(format!(
                    "line {ln}: unknown gate {other:?} in format version {FORMAT_VERSION}"
                )))
            }
        },
    };
    Ok(gate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_is_header_only() {
        let c = Circuit::new(3);
        let doc = serialize(&c);
        assert_eq!(doc, "ionjw-circuit 1\nqubits 3\n");
        assert_eq!(deserialize(&doc).unwrap(), c);
    }

    #[test]
    fn ms_record_round_trips() {
        let mut c = Circuit::new(3);
        c.push(Gate::ms(MsAxis::XX, Direction::Forward, &[0, 1, 2])).unwrap();
        let doc = serialize(&c);
        assert!(doc.contains("ms axis=XX dir=forward qubits=0,1,2"));
        assert_eq!(deserialize(&doc).unwrap(), c);
    }

    #[test]
    fn angle_survives_exactly() {
        let mut c = Circuit::new(1);
        let a = -std::f64::consts::FRAC_PI_2;
        c.push(Gate::rz(0, a)).unwrap();
        let back = deserialize(&serialize(&c)).unwrap();
        match &back.gates()[0] {
            Gate::Rz { angle, .. } => {
                assert_eq!(angle.to_bits(), a.to_bits());
                assert_eq!(format!("{angle:.17e}"), format!("{a:.17e}"));
            }
            g => panic!("unexpected {g:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let doc = "ionjw-circuit 1\nqubits 2\n\nrz qubits=0 angle=abc\n";
        match deserialize(doc) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let doc = "ionjw-circuit 1\nqubits 2\nrz qubits=5 angle=0.1\n";
        assert!(matches!(deserialize(doc), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn unknown_gate_and_version_are_schema_errors() {
        let doc = "ionjw-circuit 1\nqubits 2\ntoffoli qubits=0,1\n";
        assert!(matches!(deserialize(doc), Err(Error::Schema(_))));
        let doc = "ionjw-circuit 7\nqubits 2\n";
        assert!(matches!(deserialize(doc), Err(Error::Schema(_))));
    }
}
