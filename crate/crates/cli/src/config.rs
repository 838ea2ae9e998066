//! Sweep configuration: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! quantity = AV_CS
//! gm = 9.36m
//! ro = 14.4k
//! rs = 100
//! rf = 5k
//! swept = rd
//! range = 10, 1M, 121
//! scale = log
//! output = fig1.csv
//! ```
//!
//! Device keys are `gm`, `beta` (bipolar), `gmb` (MOS) and `ro`. Loads are
//! named by their symbol (`re rb rc rf` or `rs rg rd rf`) and default to
//! `inf`. `variants` is a comma-separated list of rows to add as columns.

use std::path::PathBuf;
use std::str::FromStr;

use ampgen::model::{load_role, load_sym, parse_scaled};
use ampgen::{Device, ExtResistance, GenParams, LoadSet, MosParams, Quantity, Variant};
use ampgen_symbolic::Sym;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("`{key}`: {reason}")]
    Field { key: String, reason: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
}

fn field(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub device: Device,
    pub loads: LoadSet,
    pub swept: Sym,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub scale: Scale,
    pub variants: Vec<Variant>,
    /// Standard output when absent.
    pub output: Option<PathBuf>,
}

fn number(key: &str, v: &str) -> Result<f64, ConfigError> {
    parse_scaled(v)
        .filter(|x| !x.is_nan())
        .ok_or_else(|| field(key, format!("`{v}` is not a number")))
}

impl SweepSpec {
    /// Sweep abscissas, starting exactly at `lo` and ending exactly at `hi`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == n - 1 {
                    return self.hi;
                }
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.lo + t * (self.hi - self.lo),
                    Scale::Log => self.lo * (self.hi / self.lo).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut kv: Vec<(String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let k = k.trim().to_ascii_lowercase();
            if kv.iter().any(|(seen, _)| *seen == k) {
                return Err(field(&k, "given twice"));
            }
            kv.push((k, v.trim().to_string()));
        }
        let get = |k: &str| kv.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());

        let quantity: Quantity = get("quantity")
            .ok_or(ConfigError::Missing("quantity"))?
            .parse()
            .map_err(|e| field("quantity", format!("{e}")))?;
        let mos = quantity.is_mos();

        let gm = number("gm", get("gm").ok_or(ConfigError::Missing("gm"))?)?;
        let ro: ExtResistance = match get("ro") {
            Some(v) => v.parse().map_err(|e| field("ro", format!("{e}")))?,
            None => ExtResistance::INF,
        };
        let device = if mos {
            if get("beta").is_some() {
                return Err(field("beta", "not a MOS parameter"));
            }
            let gmb = get("gmb").map(|v| number("gmb", v)).transpose()?.unwrap_or(0.0);
            Device::Mos(MosParams::new(gm, gmb, ro).map_err(|e| field("gm", format!("{e}")))?)
        } else {
            if get("gmb").is_some() {
                return Err(field("gmb", "not a bipolar parameter"));
            }
            let p = match get("beta") {
                Some(v) if v.eq_ignore_ascii_case("inf") => GenParams::bjt_infinite_beta(gm, ro),
                Some(v) => GenParams::bjt(gm, number("beta", v)?, ro),
                None => return Err(ConfigError::Missing("beta")),
            };
            Device::Bjt(p.map_err(|e| field("beta", format!("{e}")))?)
        };

        let mut loads = LoadSet::open();
        for (k, v) in &kv {
            let Ok(s) = k.parse::<Sym>() else { continue };
            let Some(role) = load_role(s) else { continue };
            if load_sym(role, mos) != s {
                return Err(field(k, format!("not a load of {quantity}")));
            }
            loads.set(role, v.parse().map_err(|e| field(k, format!("{e}")))?);
        }

        let swept_raw = get("swept").ok_or(ConfigError::Missing("swept"))?;
        let swept: Sym = swept_raw.parse().map_err(|_| field("swept", format!("unknown symbol `{swept_raw}`")))?;
        if !quantity.load_syms().contains(&swept) {
            return Err(field("swept", format!("{swept} is not a load of {quantity}")));
        }

        let range = get("range").ok_or(ConfigError::Missing("range"))?;
        let parts: Vec<&str> = range.split(',').map(str::trim).collect();
        let [lo, hi, points] = parts[..] else {
            return Err(field("range", "expected `lo, hi, points`"));
        };
        let (lo, hi) = (number("range", lo)?, number("range", hi)?);
        let points: usize = points
            .parse()
            .map_err(|_| field("range", format!("`{points}` is not a point count")))?;
        if lo >= hi || !hi.is_finite() {
            return Err(field("range", "needs finite lo < hi"));
        }
        if lo < 0.0 {
            return Err(field("range", "resistances cannot be negative"));
        }
        if points < 2 {
            return Err(field("range", "needs at least 2 points"));
        }

        let scale = match get("scale").map(str::to_ascii_lowercase).as_deref() {
            None | Some("linear") => Scale::Linear,
            Some("log") => Scale::Log,
            Some(other) => return Err(field("scale", format!("`{other}` is not linear or log"))),
        };
        if scale == Scale::Log && lo <= 0.0 {
            return Err(field("scale", "log scale needs lo > 0"));
        }

        let mut variants = Vec::new();
        if let Some(list) = get("variants") {
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let v: Variant = name.parse().map_err(|e| field("variants", format!("{e}")))?;
                if !quantity.variants().contains(&v) {
                    return Err(field("variants", format!("{quantity} has no {v} row")));
                }
                variants.push(v);
            }
        }

        let known = [
            "quantity", "gm", "beta", "gmb", "ro", "swept", "range", "scale", "variants", "output",
        ];
        for (k, _) in &kv {
            let is_load = k.parse::<Sym>().ok().and_then(load_role).is_some();
            if !known.contains(&k.as_str()) && !is_load {
                return Err(field(k, "unknown key"));
            }
        }

        Ok(SweepSpec {
            quantity,
            device,
            loads,
            swept,
            lo,
            hi,
            points,
            scale,
            variants,
            output: get("output").map(PathBuf::from),
        })
    }
}
