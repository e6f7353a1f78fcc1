//! Parameter families `(l_i, m_i, n_i)`.
//!
//! The built-in family sets `l_i = 2^(2*2^i + 4)`, `m_i = 2^(8*2^i)` and
//! `n_i = 2^(10*2^i)`. Custom families carry explicit tables and are loaded
//! from TOML:
//!
//! ```toml
//! kind = "custom"
//! l = [2, 3, 5]
//! m = [8, 64, 4096]
//! n = [32, 2048, "2^20"]
//! ```
//!
//! Table entries are integers, decimal strings, or powers written `"2^k"`.

use std::path::Path;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest level of the built-in family we agree to evaluate; `n_i` has
/// `10 * 2^i` bits.
pub const PAPER_MAX_LEVEL: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub l: BigUint,
    pub m: BigUint,
    pub n: BigUint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    PaperStar,
    Custom,
}

#[derive(Debug)]
pub struct ParameterFamily {
    kind: FamilyKind,
    name: String,
    table: Vec<Arc<Level>>,
    cache: RwLock<Vec<Arc<Level>>>,
}

fn pow2(exp: usize) -> BigUint {
    BigUint::one() << exp
}

fn paper_level(i: usize) -> Level {
    Level {
        l: pow2(2 * (1usize << i) + 4),
        m: pow2(8 * (1usize << i)),
        n: pow2(10 * (1usize << i)),
    }
}

impl ParameterFamily {
    /// The built-in family with powers of two.
    pub fn paper_star() -> Self {
        ParameterFamily {
            kind: FamilyKind::PaperStar,
            name: "paper_star".into(),
            table: Vec::new(),
            cache: RwLock::new(Vec::new()),
        }
    }

    /// Explicit tables; only positivity and equal lengths are enforced here,
    /// ordering is reported by [`ParameterFamily::validate_structure`] and the
    /// hypothesis checks.
    pub fn custom(l: Vec<BigUint>, m: Vec<BigUint>, n: Vec<BigUint>) -> Result<Self> {
        if l.is_empty() || l.len() != m.len() || l.len() != n.len() {
            return Err(Error::Config(format!(
                "custom tables must be non-empty and of equal length (l: {}, m: {}, n: {})",
                l.len(),
                m.len(),
                n.len()
            )));
        }
        let mut table = Vec::with_capacity(l.len());
        for (i, ((l, m), n)) in l.into_iter().zip(m).zip(n).enumerate() {
            if l.is_zero() || m.is_zero() || n.is_zero() {
                return Err(Error::Structure {
                    level: i,
                    detail: "parameters must be positive".into(),
                });
            }
            table.push(Arc::new(Level { l, m, n }));
        }
        Ok(ParameterFamily {
            kind: FamilyKind::Custom,
            name: "custom".into(),
            table,
            cache: RwLock::new(Vec::new()),
        })
    }

    pub fn custom_u64(l: &[u64], m: &[u64], n: &[u64]) -> Result<Self> {
        let conv = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect();
        Self::custom(conv(l), conv(m), conv(n))
    }

    /// Small six-level family used for materialized checks:
    /// `l = (2, 3, 5, 7, 11, 13)`, `m = (8, 2^6, 2^12, 2^21, 2^32, 2^44)`,
    /// `n = (32, 2^11, 2^20, 2^30, 2^42, 2^56)`.
    pub fn mini() -> Self {
        Self::custom_u64(
            &[2, 3, 5, 7, 11, 13],
            &[8, 1 << 6, 1 << 12, 1 << 21, 1 << 32, 1 << 44],
            &[32, 1 << 11, 1 << 20, 1 << 30, 1 << 42, 1 << 56],
        )
        .expect("static table")
        .with_name("mini")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_paper_star(&self) -> bool {
        self.kind == FamilyKind::PaperStar
    }

    /// Number of levels with parameters.
    pub fn available_levels(&self) -> usize {
        match self.kind {
            FamilyKind::PaperStar => PAPER_MAX_LEVEL + 1,
            FamilyKind::Custom => self.table.len(),
        }
    }

    pub fn level(&self, i: usize) -> Result<Arc<Level>> {
        match self.kind {
            FamilyKind::Custom => self.table.get(i).cloned().ok_or(Error::LevelUnavailable {
                level: i,
                available: self.table.len(),
            }),
            FamilyKind::PaperStar => {
                if i > PAPER_MAX_LEVEL {
                    return Err(Error::LevelUnavailable {
                        level: i,
                        available: PAPER_MAX_LEVEL + 1,
                    });
                }
                if let Some(level) = self.cache.read().expect("level cache poisoned").get(i) {
                    return Ok(level.clone());
                }
                let mut cache = self.cache.write().expect("level cache poisoned");
                while cache.len() <= i {
                    let next = cache.len();
                    cache.push(Arc::new(paper_level(next)));
                }
                Ok(cache[i].clone())
            }
        }
    }

    pub fn l(&self, i: usize) -> Result<BigUint> {
        Ok(self.level(i)?.l.clone())
    }

    pub fn m(&self, i: usize) -> Result<BigUint> {
        Ok(self.level(i)?.m.clone())
    }

    pub fn n(&self, i: usize) -> Result<BigUint> {
        Ok(self.level(i)?.n.clone())
    }

    /// Checks `l_i < m_i < n_i` and strict growth of each sequence for levels
    /// `0..=upto` (all table levels when `upto` is `None`).
    pub fn validate_structure(&self, upto: Option<usize>) -> Result<()> {
        let last = match upto {
            Some(u) => u.min(self.available_levels() - 1),
            None => self.available_levels() - 1,
        };
        let mut prev: Option<Arc<Level>> = None;
        for i in 0..=last {
            let lv = self.level(i)?;
            if lv.l >= lv.m {
                return Err(Error::Structure {
                    level: i,
                    detail: format!("l_{i} = {} is not below m_{i} = {}", lv.l, lv.m),
                });
            }
            if lv.m >= lv.n {
                return Err(Error::Structure {
                    level: i,
                    detail: format!("m_{i} = {} is not below n_{i} = {}", lv.m, lv.n),
                });
            }
            if let Some(p) = &prev {
                for (name, a, b) in [("l", &p.l, &lv.l), ("m", &p.m, &lv.m), ("n", &p.n, &lv.n)] {
                    if a >= b {
                        return Err(Error::Structure {
                            level: i,
                            detail: format!("{name} is not strictly increasing ({a} then {b})"),
                        });
                    }
                }
            }
            prev = Some(lv);
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: FamilyConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("family file: {e}")))?;
        cfg.build()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// `"paper"` / `"paper_star"` and `"mini"` select built-in families; anything else is a file path.
    pub fn from_reference(reference: &str) -> Result<Self> {
        match reference {
            "paper" | "paper_star" => Ok(Self::paper_star()),
            "mini" => Ok(Self::mini()),
            path => Self::load(Path::new(path)),
        }
    }
}

/// A table entry: integer, decimal string or `"2^k"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum IntSpec {
    Int(u64),
    Text(String),
}

impl IntSpec {
    pub fn value(&self) -> Result<BigUint> {
        match self {
            IntSpec::Int(v) => Ok(BigUint::from(*v)),
            IntSpec::Text(s) => parse_big(s),
        }
    }
}

pub fn parse_big(s: &str) -> Result<BigUint> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let base: BigUint = base
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad integer {s:?}")))?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad exponent in {s:?}")))?;
        return Ok(num_traits::pow(base, exp as usize));
    }
    s.parse()
        .map_err(|_| Error::Config(format!("bad integer {s:?}")))
}

/// On-disk family description.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: String,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub l: Vec<IntSpec>,
    #[serde(default)]
    pub m: Vec<IntSpec>,
    #[serde(default)]
    pub n: Vec<IntSpec>,
}

impl FamilyConfig {
    pub fn build(&self) -> Result<ParameterFamily> {
        let fam = match self.kind.as_str() {
            "paper" | "paper_star" => ParameterFamily::paper_star(),
            "custom" => {
                let conv = |v: &[IntSpec]| v.iter().map(IntSpec::value).collect::<Result<Vec<_>>>();
                ParameterFamily::custom(conv(&self.l)?, conv(&self.m)?, conv(&self.n)?)?
            }
            other => return Err(Error::Config(format!("unknown family kind {other:?}"))),
        };
        Ok(match &self.name {
            Some(name) => fam.with_name(name.clone()),
            None => fam,
        })
    }
}
