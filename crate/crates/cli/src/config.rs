//! `key=value` configuration files whose keys are the long flag names of a
//! subcommand.

use std::fs;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parses the file contents; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str, path: &str) -> Result<Vec<ConfigEntry>, CliError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| CliError::Config {
            path: path.to_string(),
            line,
            message: format!("expected key=value, found '{content}'"),
        })?;
        let key = key.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(CliError::Config {
                path: path.to_string(),
                line,
                message: "empty key".into(),
            });
        }
        entries.push(ConfigEntry {
            line,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn given_on_command_line(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_value = format!("--{key}=");
    args.iter()
        .any(|a| *a == flag || a.starts_with(&with_value))
}

/// Inserts the settings of a `--config` file (if any) after the subcommand
/// name, skipping keys that are also given as flags so that flags win.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(Path::new(&path)).map_err(|e| CliError::Config {
        path: path.clone(),
        line: 0,
        message: e.to_string(),
    })?;
    let entries = parse_config(&text, &path)?;

    let Some(sub_pos) = args
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map(|p| p + 1)
    else {
        return Ok(args);
    };
    let command = Cli::command();
    let Some(sub) = command.find_subcommand(&args[sub_pos]) else {
        return Ok(args);
    };

    let mut inserted = Vec::new();
    for entry in entries {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(entry.key.as_str()) && entry.key != "config")
            .ok_or_else(|| CliError::Config {
                path: path.clone(),
                line: entry.line,
                message: format!("unknown key '{}'", entry.key),
            })?;
        if given_on_command_line(&args, &entry.key) {
            continue;
        }
        if arg.get_action().takes_values() {
            inserted.push(format!("--{}={}", entry.key, entry.value));
        } else {
            match entry.value.as_str() {
                "true" | "yes" | "1" | "" => inserted.push(format!("--{}", entry.key)),
                "false" | "no" | "0" => {}
                other => {
                    return Err(CliError::Config {
                        path: path.clone(),
                        line: entry.line,
                        message: format!("'{}' expects true or false, found '{other}'", entry.key),
                    })
                }
            }
        }
    }
    let mut out = args[..=sub_pos].to_vec();
    out.extend(inserted);
    out.extend_from_slice(&args[sub_pos + 1..]);
    Ok(out)
}
