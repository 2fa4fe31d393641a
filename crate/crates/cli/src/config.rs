//! Merging a JSON config file under the command-line flags.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// `flags` with every unset field taken from the config file.
///
/// A flag counts as unset when it is absent or, for switches, false. Keys the
/// command does not know are rejected.
pub fn resolve<A: Serialize + DeserializeOwned>(flags: A, config: Option<&Path>) -> Result<A, CliError> {
    let Some(path) = config else { return Ok(flags) };
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{} is not valid JSON: {e}", path.display())))?;
    let Value::Object(mut merged) = file else {
        return Err(CliError::Input(format!("{} must hold a JSON object", path.display())));
    };
    let Value::Object(given) = serde_json::to_value(&flags).expect("arguments serialize") else {
        unreachable!("argument structs serialize as objects")
    };
    if let Some(key) = merged.keys().find(|k| !given.contains_key(*k)) {
        return Err(CliError::Input(format!("unknown key `{key}` in {}", path.display())));
    }
    overlay(&mut merged, given);
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Input(format!("invalid value in {}: {e}", path.display())))
}

fn overlay(base: &mut Map<String, Value>, flags: Map<String, Value>) {
    for (k, v) in flags {
        if !matches!(v, Value::Null | Value::Bool(false)) {
            base.insert(k, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;
    use crate::cli::SolveArgs;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn flags_win_and_gaps_are_filled() {
        let f = file(r#"{"kappa": 3, "eta_s": 1.5, "degenerate": true, "z": 0.5}"#);
        let mut flags = SolveArgs::default();
        flags.params.kappa = Some(2.0);
        let args = resolve(flags, Some(f.path())).unwrap();
        assert_eq!(args.params.kappa, Some(2.0));
        assert_eq!(args.params.eta_s, Some(1.5));
        assert!(args.params.degenerate);
        assert_eq!(args.z, Some(0.5));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let f = file(r#"{"kapa": 3}"#);
        assert!(matches!(resolve(SolveArgs::default(), Some(f.path())), Err(CliError::Input(_))));
        let f = file(r#"{"kappa": "three"}"#);
        assert!(matches!(resolve(SolveArgs::default(), Some(f.path())), Err(CliError::Input(_))));
    }
}
