//! `--config path`: a flat `key = value` file whose entries become flags unless
//! the same flag was given on the command line.

use std::fs;

use anyhow::{bail, Context, Result};

fn has_flag(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_eq = format!("--{key}=");
    args.iter().any(|a| *a == flag || a.starts_with(&with_eq))
}

/// Parses the file body into ordered `(key, value)` pairs.
pub fn parse(body: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in body.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", i + 1);
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            bail!("config line {}: bad key {:?}", i + 1, k.trim());
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Expands `--config` into explicit flags appended after the given ones.
pub fn merge(args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().context("--config needs a path")?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let body = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let mut extra = Vec::new();
    for (k, v) in parse(&body)? {
        if has_flag(&rest, &k) {
            continue;
        }
        match v.as_str() {
            "true" => extra.push(format!("--{k}")),
            "false" => {}
            _ => {
                extra.push(format!("--{k}"));
                extra.push(v);
            }
        }
    }
    rest.extend(extra);
    Ok(rest)
}
