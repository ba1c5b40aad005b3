//! Layered `key = value` settings: flags over a config file over defaults.
//!
//! Every value a command reads is recorded, and the record becomes the run
//! manifest. Replaying a manifest feeds it back as the config file.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use twinreg::kvconfig::KvConfig;

use crate::error::{input, CliResult};

/// Keys a manifest carries that are not settings.
const META_KEYS: [&str; 2] = ["command", "version"];

pub struct Settings {
    given: KvConfig,
    resolved: KvConfig,
    used: BTreeSet<String>,
}

impl Settings {
    /// `flags` override the contents of `config`.
    pub fn new(flags: &KvConfig, config: Option<&Path>) -> CliResult<Self> {
        let mut given = match config {
            Some(p) => KvConfig::from_file(p).map_err(|e| input(format!("config {}: {e}", p.display())))?,
            None => KvConfig::new(),
        };
        for (k, v) in flags.iter() {
            given.set(k, v);
        }
        Ok(Self { given, resolved: KvConfig::new(), used: BTreeSet::new() })
    }

    /// Add keys from `lower` that are not already set.
    pub fn layer_under(&mut self, lower: &KvConfig) {
        for (k, v) in lower.iter() {
            if !self.given.contains(k) {
                self.given.set(k, v);
            }
        }
    }

    pub fn given(&self) -> &KvConfig {
        &self.given
    }

    fn parse<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        self.given.get::<T>(key).map_err(|e| input(format!("setting {key}: {e}")))
    }

    pub fn get<T: FromStr + Display>(&mut self, key: &str, default: T) -> CliResult<T>
    where
        T::Err: Display,
    {
        let v = self.parse(key)?.unwrap_or(default);
        self.record(key, &v);
        Ok(v)
    }

    pub fn opt<T: FromStr + Display>(&mut self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        let v = self.parse::<T>(key)?;
        self.used.insert(key.to_string());
        if let Some(v) = &v {
            self.resolved.set(key, v);
        }
        Ok(v)
    }

    pub fn required<T: FromStr + Display>(&mut self, key: &str) -> CliResult<T>
    where
        T::Err: Display,
    {
        self.opt(key)?.ok_or_else(|| input(format!("missing required setting --{}", key.replace('_', "-"))))
    }

    pub fn list<T: FromStr + Display>(&mut self, key: &str, default: &[T]) -> CliResult<Vec<T>>
    where
        T::Err: Display,
        T: Clone,
    {
        let v = match self.given.get_list::<T>(key).map_err(|e| input(format!("setting {key}: {e}")))? {
            Some(v) => v,
            None => default.to_vec(),
        };
        let joined = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        self.used.insert(key.to_string());
        self.resolved.set(key, joined);
        Ok(v)
    }

    /// Record a derived value in the manifest without reading it.
    pub fn record(&mut self, key: &str, v: &impl Display) {
        self.used.insert(key.to_string());
        self.resolved.set(key, v);
    }

    /// Mark keys as consumed without recording them.
    pub fn ignore(&mut self, keys: &[&str]) {
        self.used.extend(keys.iter().map(|k| k.to_string()));
    }

    /// Fail on unused keys and return the manifest.
    pub fn finish(mut self, command: &str) -> CliResult<KvConfig> {
        if let Some(k) = self.given.keys().find(|k| !self.used.contains(*k) && !META_KEYS.contains(k)) {
            return Err(input(format!("unknown setting {k:?} for command {command}")));
        }
        self.resolved.set("command", command);
        self.resolved.set("version", env!("CARGO_PKG_VERSION"));
        Ok(self.resolved)
    }
}
