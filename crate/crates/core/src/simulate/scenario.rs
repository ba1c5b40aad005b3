use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kvconfig::KvConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientScheme {
    /// Magnitudes uniform on `[0.5, 2]` with random signs.
    UniformMagnitude,
    /// `(-c)^(j-1)` for the `j`-th sampled active index.
    GeometricDecay,
    /// Every active coefficient equals `magnitude` with a random sign.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignKind {
    /// Rows i.i.d. `N(0, Σ)` with `Σ_ij = ρ^|i-j|`.
    Ar1,
    /// Entries i.i.d. `N(0, 1/n)`.
    IidGaussian,
    /// Orthonormal columns, `X'X = I`.
    Orthonormal,
}

macro_rules! kebab_enum {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $t {
            pub fn name(&self) -> &'static str {
                match self { $(Self::$v => $s),* }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($s => Ok(Self::$v),)*
                    other => Err(Error::Parse(format!(
                        concat!("unknown ", stringify!($t), " {:?}; expected one of: ", $($s, " "),*),
                        other
                    ))),
                }
            }
        }
    };
}

kebab_enum!(CoefficientScheme { UniformMagnitude => "uniform-magnitude", GeometricDecay => "geometric-decay", Constant => "constant" });
kebab_enum!(DesignKind { Ar1 => "ar1", IidGaussian => "iid-gaussian", Orthonormal => "orthonormal" });

/// A simulation scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimScenario {
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    pub k: usize,
    pub scheme: CoefficientScheme,
    pub decay_c: f64,
    /// Magnitude for [`CoefficientScheme::Constant`].
    pub magnitude: f64,
    /// Target SNR; infinite means noiseless, and with `sigma` set, ignored.
    pub snr: f64,
    /// Fixed noise level overriding `snr`.
    pub sigma: Option<f64>,
    pub seed: u64,
    pub design_kind: DesignKind,
    pub test_size: usize,
}

impl Default for SimScenario {
    fn default() -> Self {
        Self {
            n: 250,
            p: 1000,
            rho: 0.0,
            k: 25,
            scheme: CoefficientScheme::UniformMagnitude,
            decay_c: 0.8,
            magnitude: 1.0,
            snr: 10.0,
            sigma: None,
            seed: 0,
            design_kind: DesignKind::Ar1,
            test_size: 5000,
        }
    }
}

impl SimScenario {
    pub const KEYS: [&'static str; 12] =
        ["n", "p", "rho", "k", "scheme", "decay_c", "magnitude", "snr", "sigma", "seed", "design", "test_size"];

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if self.n == 0 || self.p == 0 {
            return bad(format!("n and p must be positive, got n={}, p={}", self.n, self.p));
        }
        if self.k == 0 || self.k > self.p {
            return bad(format!("k must satisfy 1 <= k <= p, got k={}, p={}", self.k, self.p));
        }
        if !(self.rho.abs() < 1.0) {
            return bad(format!("rho must lie in (-1, 1), got {}", self.rho));
        }
        if self.scheme == CoefficientScheme::GeometricDecay && !(self.decay_c > 0.0 && self.decay_c < 1.0) {
            return bad(format!("decay_c must lie in (0, 1), got {}", self.decay_c));
        }
        if self.scheme == CoefficientScheme::Constant && !(self.magnitude > 0.0 && self.magnitude.is_finite()) {
            return bad(format!("magnitude must be positive, got {}", self.magnitude));
        }
        match self.sigma {
            Some(s) if !(s >= 0.0 && s.is_finite()) => return bad(format!("sigma must be nonnegative, got {s}")),
            None if !(self.snr > 0.0) => return bad(format!("snr must be positive, got {}", self.snr)),
            _ => {}
        }
        if self.design_kind == DesignKind::Orthonormal && self.p > self.n {
            return bad(format!("orthonormal design requires p <= n, got n={}, p={}", self.n, self.p));
        }
        Ok(())
    }

    /// Copy with the dataset seed of replication `rep`.
    pub fn for_replication(&self, rep: usize) -> Self {
        Self { seed: self.seed.wrapping_add(rep as u64), ..self.clone() }
    }

    /// Overlay scenario keys present in `cfg`; other keys are left alone.
    pub fn apply_kv(&mut self, cfg: &KvConfig) -> Result<()> {
        if let Some(v) = cfg.get("n")? { self.n = v; }
        if let Some(v) = cfg.get("p")? { self.p = v; }
        if let Some(v) = cfg.get("rho")? { self.rho = v; }
        if let Some(v) = cfg.get("k")? { self.k = v; }
        if let Some(v) = cfg.get("scheme")? { self.scheme = v; }
        if let Some(v) = cfg.get("decay_c")? { self.decay_c = v; }
        if let Some(v) = cfg.get("magnitude")? { self.magnitude = v; }
        if let Some(v) = cfg.get("snr")? { self.snr = v; }
        if let Some(v) = cfg.get::<String>("sigma")? {
            self.sigma = if v.is_empty() || v == "none" {
                None
            } else {
                Some(v.parse().map_err(|e| Error::Parse(format!("key \"sigma\": {e}")))?)
            };
        }
        if let Some(v) = cfg.get("seed")? { self.seed = v; }
        if let Some(v) = cfg.get("design")? { self.design_kind = v; }
        if let Some(v) = cfg.get("test_size")? { self.test_size = v; }
        Ok(())
    }

    /// Parse a scenario file; unspecified keys take their defaults.
    pub fn from_kv(cfg: &KvConfig) -> Result<Self> {
        let mut s = Self::default();
        s.apply_kv(cfg)?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_kv(&self) -> KvConfig {
        let mut c = KvConfig::new();
        c.set("n", self.n);
        c.set("p", self.p);
        c.set("rho", self.rho);
        c.set("k", self.k);
        c.set("scheme", self.scheme);
        c.set("decay_c", self.decay_c);
        c.set("magnitude", self.magnitude);
        c.set("snr", self.snr);
        c.set("sigma", self.sigma.map_or_else(|| "none".to_string(), |s| s.to_string()));
        c.set("seed", self.seed);
        c.set("design", self.design_kind);
        c.set("test_size", self.test_size);
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let s = SimScenario { rho: -0.75, scheme: CoefficientScheme::GeometricDecay, sigma: Some(0.5), seed: u64::MAX, ..Default::default() };
        assert_eq!(SimScenario::from_kv(&s.to_kv()).unwrap(), s);
        let d = SimScenario::from_kv(&KvConfig::parse("n = 50\ndesign = orthonormal\np = 20\nk = 3").unwrap()).unwrap();
        assert_eq!((d.n, d.p, d.k, d.design_kind), (50, 20, 3, DesignKind::Orthonormal));
    }

    #[test]
    fn validation() {
        let ok = SimScenario::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SimScenario { k: 0, ..ok.clone() },
            SimScenario { k: 1001, ..ok.clone() },
            SimScenario { rho: 1.0, ..ok.clone() },
            SimScenario { snr: 0.0, ..ok.clone() },
            SimScenario { design_kind: DesignKind::Orthonormal, ..ok.clone() },
            SimScenario { scheme: CoefficientScheme::GeometricDecay, decay_c: 1.0, ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidScenario(_))), "{bad:?}");
        }
        assert!("nope".parse::<DesignKind>().is_err());
    }
}
