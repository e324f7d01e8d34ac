//! Flat `key=value` manifests merged with command-line flags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use randcirc::seed;
use randcirc::worstcase::SignFunction;

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "RANDCIRC_SEED";

/// Every key a manifest may set; flags use the same names with dashes.
pub const KEYS: &[&str] = &[
    "family",
    "n",
    "m",
    "dist",
    "delta_window",
    "delta",
    "eta",
    "trials",
    "seed",
    "out",
    "sign",
    "circuit",
    "grid",
    "d",
    "count",
    "bins",
    "bootstrap",
    "coupling",
    "target",
    "tvd_cap",
    "gates",
];

#[derive(Debug)]
pub struct UsageError(pub String);

impl Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Flags shared by every subcommand. Each overrides the manifest entry of the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Manifest of `key=value` lines
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// QAOA_P1, HAAR or IQP
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    /// uniform, sk, er or er:<p>
    #[arg(long)]
    pub dist: Option<String>,
    /// Sampling window Δ (cap)
    #[arg(long)]
    pub delta_window: Option<String>,
    /// Oracle accuracy δ
    #[arg(long)]
    pub delta: Option<String>,
    /// Oracle failure rate η
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<String>,
    /// constant, parity, random, code:<int> or a sign-table file
    #[arg(long)]
    pub sign: Option<String>,
    /// Circuit file for `simulate`
    #[arg(long)]
    pub circuit: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub count: Option<String>,
    #[arg(long)]
    pub bins: Option<String>,
    #[arg(long)]
    pub bootstrap: Option<String>,
    /// per-query or per-draw
    #[arg(long)]
    pub coupling: Option<String>,
    /// surrogate or exact
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub tvd_cap: Option<String>,
    #[arg(long)]
    pub gates: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("family", &self.family),
            ("n", &self.n),
            ("m", &self.m),
            ("dist", &self.dist),
            ("delta_window", &self.delta_window),
            ("delta", &self.delta),
            ("eta", &self.eta),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("out", &self.out),
            ("sign", &self.sign),
            ("circuit", &self.circuit),
            ("grid", &self.grid),
            ("d", &self.d),
            ("count", &self.count),
            ("bins", &self.bins),
            ("bootstrap", &self.bootstrap),
            ("coupling", &self.coupling),
            ("target", &self.target),
            ("tvd_cap", &self.tvd_cap),
            ("gates", &self.gates),
        ]
    }
}

pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| UsageError(format!("manifest line {}: expected key=value", i + 1)))?;
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(UsageError(format!("manifest line {}: unknown key `{k}`", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

/// Resolved settings: manifest entries overridden by flags.
#[derive(Debug, Clone)]
pub struct Settings {
    values: BTreeMap<String, String>,
    from_manifest: BTreeSet<String>,
    base_dir: PathBuf,
}

impl Settings {
    pub fn resolve(flags: &Flags) -> Result<Self, UsageError> {
        let (mut values, base_dir) = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| UsageError(format!("cannot read manifest {}: {e}", path.display())))?;
                let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
                (parse_manifest(&text)?, dir)
            }
            None => (BTreeMap::new(), PathBuf::new()),
        };
        let mut from_manifest: BTreeSet<String> = values.keys().cloned().collect();
        for (k, v) in flags.pairs() {
            if let Some(v) = v {
                values.insert(k.to_string(), v.clone());
                from_manifest.remove(k);
            }
        }
        Ok(Self { values, from_manifest, base_dir })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, UsageError>
    where
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| UsageError(format!("invalid {key} `{v}`: {e}"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, UsageError>
    where
        T::Err: Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Seed from settings, then the environment, then 0.
    pub fn seed(&self) -> Result<u64, UsageError> {
        if let Some(s) = self.get::<u64>("seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|e| UsageError(format!("invalid {SEED_ENV} `{v}`: {e}"))),
            Err(_) => Ok(0),
        }
    }

    /// Paths in a manifest are relative to the manifest.
    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(|p| {
            let p = PathBuf::from(p);
            if p.is_relative() && self.from_manifest.contains(key) {
                self.base_dir.join(p)
            } else {
                p
            }
        })
    }

    pub fn sign(&self, n: usize) -> Result<SignFunction, UsageError> {
        let spec = self.raw("sign").unwrap_or("constant");
        let f = match spec {
            "constant" => SignFunction::constant(n),
            "parity" | "balanced" => SignFunction::parity(n),
            "random" => SignFunction::random(n, seed::derive(self.seed()?, seed::stream::SIGN, 0)),
            s if s.starts_with("code:") => {
                let code: u64 = s[5..].parse().map_err(|e| UsageError(format!("invalid sign code `{s}`: {e}")))?;
                SignFunction::from_code(n, code)
            }
            _ => {
                let path = self.path("sign").expect("present");
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| UsageError(format!("cannot read sign table {}: {e}", path.display())))?;
                SignFunction::parse(&text).map_err(|e| UsageError(format!("sign table {}: {e}", path.display())))?
            }
        };
        if f.n() != n {
            return Err(UsageError(format!("sign function has arity {} but n = {n}", f.n())));
        }
        Ok(f)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &String)> {
        self.values.iter()
    }
}
