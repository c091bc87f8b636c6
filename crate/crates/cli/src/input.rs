//! Resolving the wiring, Boolean function and polynomials named on the
//! command line or in a `key=value` config file.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use t310::boolpoly::{parse, BoolPoly};
use t310::t310::fixtures::expand_factors;
use t310::t310::{Fixture, Lzs, ZFunc};

/// Keys accepted in a config file.
pub const CONFIG_KEYS: [&str; 6] = ["fixture", "lzs", "z", "seed", "format", "jobs"];

/// Reads `key = value` lines; `#` starts a comment.
pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("{}:{}: expected key=value", path.display(), n + 1))?;
        let k = k.trim().to_ascii_lowercase();
        if !CONFIG_KEYS.contains(&k.as_str()) {
            bail!("{}:{}: unknown key {k:?}", path.display(), n + 1);
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

/// `@path` reads the text from a file.
pub fn text_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {p}")),
        None => Ok(s.to_string()),
    }
}

/// The cipher setup a command works on: a fixture, possibly with its
/// wiring or function replaced.
#[derive(Clone, Debug, Default)]
pub struct Setup {
    pub fixture: Option<Fixture>,
    pub lzs: Option<Lzs>,
    pub z: Option<ZFunc>,
}

impl Setup {
    pub fn resolve(fixture: Option<&str>, lzs: Option<&str>, z: Option<&str>) -> Result<Setup> {
        let fixture = fixture.map(Fixture::get).transpose()?;
        let lzs = match lzs {
            Some(t) => Some(Lzs::parse(&text_arg(t)?)?),
            None => fixture.as_ref().map(|f| f.lzs.clone()),
        };
        let z = match z {
            Some(t) => Some(ZFunc::parse(&text_arg(t)?)?),
            None => fixture.as_ref().map(|f| f.z.clone()),
        };
        Ok(Setup { fixture, lzs, z })
    }

    pub fn lzs(&self) -> Result<&Lzs> {
        self.lzs.as_ref().ok_or_else(|| anyhow!("no wiring: pass --fixture or --lzs"))
    }

    pub fn z(&self) -> Result<&ZFunc> {
        self.z.as_ref().ok_or_else(|| anyhow!("no Boolean function: pass --fixture or --z"))
    }

    pub fn name(&self) -> String {
        self.lzs
            .as_ref()
            .and_then(|l| l.label().map(str::to_string))
            .or_else(|| self.fixture.as_ref().map(|f| f.name.to_string()))
            .unwrap_or_else(|| "custom".into())
    }

    /// A polynomial given either directly or as a product/sum of the
    /// fixture's named factors (`AC+BD`).
    pub fn polynomial(&self, poly: Option<&str>, factors: Option<&str>) -> Result<BoolPoly> {
        match (poly, factors) {
            (Some(p), None) => Ok(parse(&text_arg(p)?)?),
            (None, Some(e)) => {
                let f = self.fixture.as_ref().ok_or_else(|| anyhow!("--factors needs --fixture"))?;
                Ok(expand_factors(&f.factors, e)?)
            }
            (Some(_), Some(_)) => bail!("give either --poly or --factors, not both"),
            (None, None) => bail!("missing polynomial: pass --poly or --factors"),
        }
    }
}
