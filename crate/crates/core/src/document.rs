//! Schedule documents.
//!
//! ```json
//! { "version": 1, "num_ions": 2, "cutoff": 12, "label": "cnot-sideband1",
//!   "pulses": [ { "ion": 0, "kind": "red", "order": 1, "theta": "pi", "phi": "0" } ] }
//! ```
//!
//! Angles are written as expression strings and read back verbatim; plain
//! JSON numbers are accepted on input.

use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::pulse::{Pulse, PulseKind};
use crate::schedule::Schedule;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize)]
struct PulseDoc<'a> {
    ion: usize,
    kind: &'static str,
    order: usize,
    theta: &'a str,
    phi: &'a str,
}

#[derive(Serialize)]
struct ScheduleDoc<'a> {
    version: u64,
    num_ions: usize,
    cutoff: usize,
    label: &'a str,
    pulses: Vec<PulseDoc<'a>>,
}

fn format_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Format {
        field: field.into(),
        message: message.into(),
    }
}

pub fn schedule_to_string(s: &Schedule) -> String {
    let doc = ScheduleDoc {
        version: FORMAT_VERSION,
        num_ions: s.num_ions,
        cutoff: s.cutoff,
        label: &s.label,
        pulses: s
            .pulses
            .iter()
            .map(|p| PulseDoc {
                ion: p.ion,
                kind: p.kind.name(),
                order: p.order,
                theta: p.theta.text(),
                phi: p.phi.text(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("schedule serializes");
    out.push('\n');
    out
}

fn get<'a>(obj: &'a Map<String, Value>, field: &str, path: &str) -> Result<&'a Value> {
    obj.get(field)
        .ok_or_else(|| format_err(format!("{path}{field}"), "missing"))
}

fn get_uint(obj: &Map<String, Value>, field: &str, path: &str) -> Result<usize> {
    get(obj, field, path)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| format_err(format!("{path}{field}"), "expected a non-negative integer"))
}

fn get_angle(obj: &Map<String, Value>, field: &str, path: &str) -> Result<Angle> {
    let name = format!("{path}{field}");
    let text = match get(obj, field, path)? {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(format_err(name, "expected an angle expression or number")),
    };
    Angle::parse(&text).map_err(|e| format_err(name, e.to_string()))
}

fn parse_pulse(v: &Value, k: usize, num_ions: usize) -> Result<Pulse> {
    let path = format!("pulses[{k}].");
    let obj = v
        .as_object()
        .ok_or_else(|| format_err(format!("pulses[{k}]"), "expected an object"))?;
    let ion = get_uint(obj, "ion", &path)?;
    if ion >= num_ions {
        return Err(format_err(
            format!("{path}ion"),
            format!("ion {ion} out of range for {num_ions} ions"),
        ));
    }
    let kind_name = get(obj, "kind", &path)?
        .as_str()
        .ok_or_else(|| format_err(format!("{path}kind"), "expected a string"))?;
    let kind = PulseKind::from_name(kind_name).ok_or_else(|| {
        format_err(
            format!("{path}kind"),
            format!("unknown kind '{kind_name}' (expected carrier, blue or red)"),
        )
    })?;
    let order = get_uint(obj, "order", &path)?;
    if (kind == PulseKind::Carrier) != (order == 0) {
        return Err(format_err(
            format!("{path}order"),
            "order must be 0 exactly when kind is carrier",
        ));
    }
    Ok(Pulse {
        ion,
        kind,
        order,
        theta: get_angle(obj, "theta", &path)?,
        phi: get_angle(obj, "phi", &path)?,
    })
}

pub fn schedule_from_str(text: &str) -> Result<Schedule> {
    let root: Value = serde_json::from_str(text).map_err(|e| format_err("document", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| format_err("document", "expected an object"))?;
    let version = get(obj, "version", "")?
        .as_u64()
        .ok_or_else(|| format_err("version", "expected an integer"))?;
    if version != FORMAT_VERSION {
        return Err(format_err(
            "version",
            format!("unsupported version {version}, expected {FORMAT_VERSION}"),
        ));
    }
    let num_ions = get_uint(obj, "num_ions", "")?;
    if num_ions == 0 {
        return Err(format_err("num_ions", "must be at least 1"));
    }
    let cutoff = get_uint(obj, "cutoff", "")?;
    let label = get(obj, "label", "")?
        .as_str()
        .ok_or_else(|| format_err("label", "expected a string"))?
        .to_string();
    let pulses = get(obj, "pulses", "")?
        .as_array()
        .ok_or_else(|| format_err("pulses", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(k, v)| parse_pulse(v, k, num_ions))
        .collect::<Result<Vec<_>>>()?;
    Ok(Schedule {
        num_ions,
        cutoff,
        label,
        pulses,
    })
}

pub fn write_schedule(s: &Schedule, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, schedule_to_string(s))?;
    Ok(())
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<Schedule> {
    schedule_from_str(&std::fs::read_to_string(path)?)
}
