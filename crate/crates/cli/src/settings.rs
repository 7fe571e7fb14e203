//! Flag resolution: every subcommand takes its values as raw strings, an
//! optional "key = value" file supplies defaults, and parsing happens only
//! after the merge so an error can name the offending field either way.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use schmidt_games::engine::{GameParams, Variant};
use schmidt_games::rat::Rat;
use schmidt_games::space::Point;

pub enum CliError {
    /// Bad input: unparseable field, missing requirement. Exit 2.
    Parse(String),
    /// A module refused at runtime. Exit 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "{}", m),
            CliError::Runtime(m) => write!(f, "{}", m),
        }
    }
}

pub fn parse_err(field: &str, detail: impl fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {}", field, detail))
}

/// Defaults loaded from a config file. Keys are the long flag names.
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn empty() -> Settings {
        Settings { values: BTreeMap::new() }
    }

    pub fn load(path: Option<&Path>) -> Result<Settings, CliError> {
        let Some(path) = path else { return Ok(Settings::empty()) };
        // an unreadable file is a runtime failure; only bad content is a parse error
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("config: {}: {}", path.display(), e)))?;
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(parse_err(
                    "config",
                    format!("line {}: expected key = value, got {:?}", i + 1, raw.trim()),
                ));
            };
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Settings { values })
    }

    /// The flag wins; the file fills gaps.
    pub fn resolve(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.values.get(key).cloned())
    }

    pub fn need(&self, flag: &Option<String>, key: &str) -> Result<String, CliError> {
        self.resolve(flag, key)
            .ok_or_else(|| parse_err(key, "required (flag or config entry)"))
    }

    pub fn rat(&self, flag: &Option<String>, key: &str) -> Result<Rat, CliError> {
        parse_rat(&self.need(flag, key)?, key)
    }

    pub fn rat_opt(&self, flag: &Option<String>, key: &str) -> Result<Option<Rat>, CliError> {
        self.resolve(flag, key).map(|s| parse_rat(&s, key)).transpose()
    }

    pub fn usize_or(&self, flag: &Option<String>, key: &str, default: usize) -> Result<usize, CliError> {
        match self.resolve(flag, key) {
            None => Ok(default),
            Some(s) => s.trim().parse().map_err(|_| parse_err(key, format!("bad count {:?}", s))),
        }
    }

    pub fn u64_or(&self, flag: &Option<String>, key: &str, default: u64) -> Result<u64, CliError> {
        match self.resolve(flag, key) {
            None => Ok(default),
            Some(s) => s.trim().parse().map_err(|_| parse_err(key, format!("bad seed {:?}", s))),
        }
    }

    pub fn str_or(&self, flag: &Option<String>, key: &str, default: &str) -> String {
        self.resolve(flag, key).unwrap_or_else(|| default.to_string())
    }
}

pub fn parse_rat(s: &str, field: &str) -> Result<Rat, CliError> {
    s.trim().parse().map_err(|e| parse_err(field, e))
}

/// Points accept the bracketed trace syntax and, for convenience, bare
/// coordinates: `0` is the line point [0], `1,2` is planar.
pub fn parse_point(s: &str, field: &str) -> Result<Point, CliError> {
    let t = s.trim();
    let wrapped;
    let bracketed = if t.starts_with('[') {
        t
    } else {
        wrapped = format!("[{}]", t);
        &wrapped
    };
    bracketed.parse().map_err(|e| parse_err(field, e))
}

pub fn parse_variant(s: &str) -> Result<Variant, CliError> {
    match s.trim() {
        "schmidt" => Ok(Variant::Schmidt),
        "non-tangent" => Ok(Variant::NonTangentSchmidt),
        "banach-mazur" => Ok(Variant::BanachMazur),
        other => Err(parse_err(
            "variant",
            format!("unknown variant {:?} (schmidt | non-tangent | banach-mazur)", other),
        )),
    }
}

pub fn build_params(
    variant: Variant,
    alpha: Option<Rat>,
    beta: Option<Rat>,
    rho: Option<Rat>,
) -> Result<GameParams, CliError> {
    let need = |v: Option<Rat>, key: &str| {
        v.ok_or_else(|| parse_err(key, "required for this variant"))
    };
    let built = match variant {
        Variant::Schmidt => GameParams::schmidt(need(alpha, "alpha")?, need(beta, "beta")?, rho),
        Variant::NonTangentSchmidt => {
            GameParams::non_tangent(need(alpha, "alpha")?, need(beta, "beta")?, rho)
        }
        Variant::BanachMazur => GameParams::banach_mazur(rho),
    };
    built.map_err(|e| CliError::Parse(e.to_string()))
}
