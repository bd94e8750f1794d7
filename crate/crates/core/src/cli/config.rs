//! `key = value` run files merged under command-line flags.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{Error, Result};

/// Parses a run file into `(key, value)` pairs.
///
/// Blank lines and lines starting with `#` are skipped; keys are the long
/// flag names without the leading dashes.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Config(format!(
                "line {}: bad key `{key}`",
                lineno + 1
            )));
        }
        if value.is_empty() {
            return Err(Error::Config(format!(
                "line {}: `{key}` has no value",
                lineno + 1
            )));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Finds `--config <path>` (or `--config=<path>`) after the subcommand,
/// removes it and inserts the file's entries right after the subcommand so
/// that flags given on the command line, which come later, win.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy().into_owned();
        if text == "--config" {
            let value = iter
                .next()
                .ok_or_else(|| Error::Config("--config needs a file path".into()))?;
            path = Some(value);
        } else if let Some(value) = text.strip_prefix("--config=") {
            path = Some(OsString::from(value));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    if rest.len() < 2 {
        return Err(Error::Config("--config must follow a subcommand".into()));
    }
    let entries = read_config(Path::new(&path))?;
    let mut out: Vec<OsString> = rest[..2].to_vec();
    for (k, v) in entries {
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    out.extend(rest.into_iter().skip(2));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let text = "# second-frame run\nv = 0.18\n\n  xi=3  \n--frame = second\n";
        let got = parse_config(text).unwrap();
        assert_eq!(
            got,
            vec![
                ("v".to_string(), "0.18".to_string()),
                ("xi".to_string(), "3".to_string()),
                ("frame".to_string(), "second".to_string()),
            ]
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_config("v 0.3").is_err());
        assert!(parse_config("= 3").is_err());
        assert!(parse_config("v =").is_err());
    }

    #[test]
    fn file_entries_precede_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "v = 0.18\nxi = 3\n").unwrap();
        let args = os(&[
            "fmrabi",
            "params",
            "--v",
            "0.49",
            "--config",
            path.to_str().unwrap(),
        ]);
        let out = expand_config(args).unwrap();
        assert_eq!(
            out,
            os(&["fmrabi", "params", "--v", "0.18", "--xi", "3", "--v", "0.49"])
        );
    }

    #[test]
    fn no_config_is_passthrough() {
        let args = os(&["fmrabi", "params", "--v", "0.49"]);
        assert_eq!(expand_config(args.clone()).unwrap(), args);
    }

    #[test]
    fn missing_file_is_config_error() {
        let args = os(&["fmrabi", "params", "--config=/nonexistent/run.cfg"]);
        assert!(matches!(expand_config(args), Err(Error::Config(_))));
    }
}
