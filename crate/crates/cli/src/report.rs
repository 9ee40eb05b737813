use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use potts::instances::format_instance;
use potts::PottsInstance;

/// A check ran to completion and found a violation.
#[derive(Debug)]
pub struct VerificationFailed(pub String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    use potts::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<VerificationFailed>().is_some() {
            return 4;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::BudgetExceeded { .. } => 3,
                E::Parse { .. } | E::Io(_) | E::InvalidInstance(_) | E::InvalidLabeling(_) | E::SizeMismatch { .. } => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

/// SHA-256 of the canonical text serialization.
pub fn instance_hash(instance: &PottsInstance) -> String {
    let digest = Sha256::digest(format_instance(instance).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Prints `{version, command, instance_hash, solver_path, ...body}` as one JSON object.
pub fn emit(command: &str, instance: Option<&PottsInstance>, solver_path: &str, body: impl Serialize) -> anyhow::Result<()> {
    let mut map = Map::new();
    map.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    map.insert("command".into(), command.into());
    map.insert("instance_hash".into(), instance.map(instance_hash).map_or(Value::Null, Value::from));
    map.insert("solver_path".into(), solver_path.into());
    match serde_json::to_value(body)? {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(map))?);
    Ok(())
}

pub fn parse_shape(s: &str) -> Result<(usize, usize), String> {
    let (h, w) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected HxW, got '{s}'"))?;
    let h = h.trim().parse().map_err(|_| format!("bad height in '{s}'"))?;
    let w = w.trim().parse().map_err(|_| format!("bad width in '{s}'"))?;
    Ok((h, w))
}
