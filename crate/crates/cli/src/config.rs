//! `--config file.toml`: keys mirror the long flags and are spliced into the
//! argument list right after the subcommand. Flags given explicitly win.

use std::ffi::OsString;
use std::fs;

use toml::Value;

fn flag_name(key: &str) -> String {
    match key {
        "J" | "L" => key.to_string(),
        _ => key.replace('_', "-"),
    }
}

fn value_text(key: &str, v: &Value) -> Result<Option<String>, String> {
    Ok(Some(match v {
        Value::String(s) => s.clone(),
        Value::Integer(i) => i.to_string(),
        Value::Float(x) => format!("{x:?}"),
        Value::Boolean(_) => return Ok(None),
        Value::Array(items) => items
            .iter()
            .map(|i| value_text(key, i)?.ok_or_else(|| format!("config key `{key}`: nested booleans are not allowed")))
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        _ => return Err(format!("config key `{key}` has an unsupported value")),
    }))
}

fn explicit(argv: &[OsString], flag: &str) -> bool {
    let long = format!("--{flag}");
    let eq = format!("--{flag}=");
    argv.iter().any(|a| a.to_str().is_some_and(|a| a == long || a.starts_with(&eq)))
}

/// Config-file arguments converted to flags.
pub fn config_args(text: &str, argv: &[OsString]) -> Result<Vec<OsString>, String> {
    let table: toml::Table = text.parse().map_err(|e| format!("invalid config file: {e}"))?;
    let mut out = Vec::new();
    for (key, v) in &table {
        let flag = flag_name(key);
        if flag == "config" {
            return Err("config files cannot include other config files".into());
        }
        if explicit(argv, &flag) {
            continue;
        }
        match (v, value_text(key, v)?) {
            (Value::Boolean(true), _) => out.push(format!("--{flag}").into()),
            (Value::Boolean(false), _) => {}
            (_, Some(text)) => {
                out.push(format!("--{flag}").into());
                out.push(text.into());
            }
            (_, None) => unreachable!("only booleans have no text"),
        }
    }
    Ok(out)
}

/// Expands `--config PATH` into the flags it names.
pub fn splice_config(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        match a.to_str() {
            Some("--config") => path = argv.get(i + 1).cloned(),
            Some(s) if s.starts_with("--config=") => path = Some(s["--config=".len()..].into()),
            _ => {}
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let extra = config_args(&text, &argv)?;
    if argv.len() < 2 {
        return Ok(argv);
    }
    let mut spliced = argv[..2].to_vec();
    spliced.extend(extra);
    spliced.extend_from_slice(&argv[2..]);
    Ok(spliced)
}
