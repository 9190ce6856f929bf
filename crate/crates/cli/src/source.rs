use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Context;
use vkampen::simplicial::{ComplexFile, SimplicialComplex};

/// Where a complex comes from: the builtin `delta:n:k` or a JSON file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexSource {
    /// `k`-skeleton of the `n`-simplex.
    Delta { n: u32, k: usize },
    File(PathBuf),
}

impl FromStr for ComplexSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let Some(rest) = s.strip_prefix("delta:") else {
            return Ok(ComplexSource::File(PathBuf::from(s)));
        };
        let (n, k) = rest
            .split_once(':')
            .ok_or_else(|| format!("expected delta:n:k, got `{s}`"))?;
        Ok(ComplexSource::Delta {
            n: n.parse().map_err(|_| format!("bad n in `{s}`"))?,
            k: k.parse().map_err(|_| format!("bad k in `{s}`"))?,
        })
    }
}

impl fmt::Display for ComplexSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexSource::Delta { n, k } => write!(f, "delta:{n}:{k}"),
            ComplexSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl ComplexSource {
    /// The complex and its working dimension `k` (its top dimension).
    pub fn load(&self) -> anyhow::Result<(SimplicialComplex, usize)> {
        match self {
            ComplexSource::Delta { n, k } => Ok((SimplicialComplex::simplex_skeleton(*n, *k)?, *k)),
            ComplexSource::File(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let complex = ComplexFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
                let k = complex
                    .dim()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| anyhow::anyhow!("{} has no simplices of positive dimension", path.display()))?;
                Ok((complex, k))
            }
        }
    }
}
