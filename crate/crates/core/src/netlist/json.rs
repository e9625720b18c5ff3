use super::{validate_and_sort, Netlist, NetlistError};

/// Pretty-printed JSON, fields in schema order.
pub fn to_json(n: &Netlist) -> String {
    serde_json::to_string_pretty(n).expect("netlist serialisation cannot fail")
}

/// Parses and validates a netlist document. Syntax errors carry a line and
/// column; structural errors name the offending id.
pub fn from_json(text: &str) -> Result<Netlist, NetlistError> {
    let n: Netlist = serde_json::from_str(text).map_err(|e| NetlistError::Format {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    validate_and_sort(&n).map_err(|e| match e {
        NetlistError::Format { .. } => e,
        other => NetlistError::Format {
            location: other.location(),
            message: other.to_string(),
        },
    })?;
    Ok(n)
}
