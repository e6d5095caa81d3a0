//! `key=value` config files, spliced into the command line as flags.

use std::ffi::OsString;
use std::fs;

/// Flags that take no value; `true` turns them on, `false` drops them.
const SWITCHES: &[&str] = &["resolved", "list", "dotted", "doubled", "charge-types"];

/// Parses `key=value` lines (blank lines and `#` comments ignored) into
/// `--key value` arguments.
pub fn parse(text: &str) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() || key == "config" {
            return Err(format!("config line {}: invalid key {key:?}", lineno + 1));
        }
        if SWITCHES.contains(&key.as_str()) {
            match value {
                "true" | "yes" | "1" => out.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => return Err(format!("config line {}: {key} expects true or false", lineno + 1)),
            }
        } else {
            out.push(format!("--{key}").into());
            out.push(value.into());
        }
    }
    Ok(out)
}

/// Removes `--config PATH` / `--config=PATH` from `args` and splices the
/// file's flags in right after the subcommand, so explicit flags win.
pub fn expand(args: Vec<OsString>, subcommands: &[&str]) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy().into_owned();
        if text == "--config" {
            path = Some(
                iter.next()
                    .ok_or("--config needs a path")?
                    .to_string_lossy()
                    .into_owned(),
            );
        } else if let Some(p) = text.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let injected = parse(&text)?;
    let at = rest
        .iter()
        .position(|a| subcommands.contains(&a.to_string_lossy().as_ref()))
        .map(|i| i + 1)
        .unwrap_or(rest.len());
    rest.splice(at..at, injected);
    Ok(rest)
}
