//! key=value configuration files. Command-line flags win over file values,
//! which win over built-in defaults. Unknown keys are usage errors so typos
//! do not silently fall back to defaults.

use std::collections::BTreeMap;
use std::str::FromStr;

use ldpc_exit::Error;

/// Keys understood by at least one subcommand.
const KNOWN_KEYS: &[&str] = &[
    "seed", "threads", "out", "ensemble", "channel", "points", "grid_min", "grid_max", "bins",
    "l_max", "tol", "max_iter", "p_min", "p_max", "n", "epsilon", "trials", "traces", "list_cap",
    "dump",
];

/// Resolves option values from (CLI flag, config file, default).
#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
}

impl Resolver {
    pub fn load(path: Option<&str>) -> ldpc_exit::Result<Self> {
        match path {
            Some(path) => Self::from_text(&std::fs::read_to_string(path)?),
            None => Ok(Resolver::default()),
        }
    }

    /// Parses configuration text (`key=value` lines, `#` comments).
    pub fn from_text(text: &str) -> ldpc_exit::Result<Self> {
        let mut file = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected key=value, found `{line}`"),
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("unknown configuration key `{key}`"),
                });
            }
            file.insert(key, value.trim().to_string());
        }
        Ok(Resolver { file })
    }

    /// Typed lookup with a default.
    pub fn value<T>(&self, key: &str, cli: Option<T>, default: T) -> ldpc_exit::Result<T>
    where
        T: FromStr,
    {
        if let Some(v) = cli {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(raw) => raw.parse::<T>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("config value for `{key}` does not parse: `{raw}`"),
            }),
            None => Ok(default),
        }
    }

    /// Lookup for options without a default.
    pub fn required_string(&self, key: &str, cli: Option<String>) -> ldpc_exit::Result<String> {
        self.opt_string(key, cli).ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("missing required option `--{key}`"),
        })
    }

    pub fn opt_string(&self, key: &str, cli: Option<String>) -> Option<String> {
        cli.or_else(|| self.file.get(key).cloned())
    }

    /// Boolean config flags (`traces=true`).
    pub fn flag(&self, key: &str) -> bool {
        matches!(
            self.file.get(key).map(String::as_str),
            Some("true") | Some("1") | Some("yes")
        )
    }

}
