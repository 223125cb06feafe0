//! Space description files and the resolved run configuration.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// On-disk description of a space. Flat so that the JSON parser can report
/// the line and column of unknown or mistyped fields.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    #[serde(rename = "type")]
    pub kind: String,
    pub m: Option<usize>,
    pub mult_plus: Option<usize>,
    pub mult_minus: Option<usize>,
    /// `"+"` or `"-"`: shorthand for a single irreducible block.
    pub class: Option<String>,
    pub epsilon: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpaceSel {
    DamekRicci { m: usize, mult_plus: usize, mult_minus: usize },
    Cayley { epsilon: i64 },
}

impl SpaceSel {
    /// The 15-dimensional example space, `m = 6` with one irreducible block.
    pub fn example33() -> Self {
        SpaceSel::DamekRicci { m: 6, mult_plus: 1, mult_minus: 0 }
    }
}

fn check_epsilon(eps: i64) -> Result<i64, CliError> {
    if eps == 1 || eps == -1 {
        Ok(eps)
    } else {
        Err(CliError::Config(format!("field `epsilon`: expected 1 or -1, got {eps}")))
    }
}

impl SpaceFile {
    pub fn resolve(self) -> Result<SpaceSel, CliError> {
        let reject = |field: &str, kind: &str| {
            CliError::Config(format!("field `{field}` is not allowed for type \"{kind}\""))
        };
        match self.kind.as_str() {
            "cayley" => {
                for (name, present) in [
                    ("m", self.m.is_some()),
                    ("mult_plus", self.mult_plus.is_some()),
                    ("mult_minus", self.mult_minus.is_some()),
                    ("class", self.class.is_some()),
                ] {
                    if present {
                        return Err(reject(name, "cayley"));
                    }
                }
                let eps = self.epsilon.ok_or_else(|| CliError::Config("missing field `epsilon`".into()))?;
                Ok(SpaceSel::Cayley { epsilon: check_epsilon(eps)? })
            }
            "damek_ricci" => {
                if self.epsilon.is_some() {
                    return Err(reject("epsilon", "damek_ricci"));
                }
                let m = self.m.ok_or_else(|| CliError::Config("missing field `m`".into()))?;
                if !(1..=8).contains(&m) {
                    return Err(CliError::Config(format!("field `m`: unsupported value {m}, expected 1..=8")));
                }
                let (p, q) = match (self.mult_plus, self.mult_minus, self.class.as_deref()) {
                    (None, None, None | Some("+")) => (1, 0),
                    (None, None, Some("-")) => (0, 1),
                    (None, None, Some(other)) => {
                        return Err(CliError::Config(format!("field `class`: expected \"+\" or \"-\", got {other:?}")))
                    }
                    (p, q, None) => (p.unwrap_or(0), q.unwrap_or(0)),
                    (_, _, Some(_)) => {
                        return Err(CliError::Config(
                            "field `class` cannot be combined with `mult_plus`/`mult_minus`".into(),
                        ))
                    }
                };
                if p + q == 0 {
                    return Err(CliError::Config("fields `mult_plus`/`mult_minus`: at least one block needed".into()));
                }
                if q > 0 && !drgeom::clifford::has_two_classes(m) {
                    return Err(CliError::Config(format!(
                        "field `mult_minus`: m = {m} has a single module class, only m = 3 or 7 allow it"
                    )));
                }
                Ok(SpaceSel::DamekRicci { m, mult_plus: p, mult_minus: q })
            }
            other => Err(CliError::Config(format!(
                "field `type`: unknown space type {other:?}, expected \"damek_ricci\" or \"cayley\""
            ))),
        }
    }
}

pub fn load(path: &Path) -> Result<SpaceSel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let file: SpaceFile =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    file.resolve()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Float,
}

/// Everything a suite needs; echoed verbatim at the top of each report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub space: Option<SpaceSel>,
    pub example33: bool,
    pub epsilon: i64,
    /// `None` lets each suite use its own default count.
    pub samples: Option<usize>,
    pub seed: u64,
    pub mode: Mode,
    pub tol: f64,
}

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TOL: f64 = 1e-9;

impl RunConfig {
    pub fn new(
        space: Option<SpaceSel>,
        example33: bool,
        epsilon: Option<i64>,
        samples: Option<usize>,
        seed: Option<u64>,
        mode: Mode,
        tol: Option<f64>,
    ) -> Result<Self, CliError> {
        if samples.is_some() && seed.is_none() {
            return Err(CliError::Config("--samples requires --seed".into()));
        }
        if samples == Some(0) {
            return Err(CliError::Config("--samples must be positive".into()));
        }
        let tol = tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("--tol must be positive, got {tol}")));
        }
        let space = if example33 {
            match space {
                Some(s) if s != SpaceSel::example33() => {
                    return Err(CliError::Config("--space example33 conflicts with the configured space".into()))
                }
                _ => Some(SpaceSel::example33()),
            }
        } else {
            space
        };
        let epsilon = match (epsilon, space) {
            (Some(e), _) => check_epsilon(e)?,
            (None, Some(SpaceSel::Cayley { epsilon })) => epsilon,
            (None, _) => 1,
        };
        Ok(RunConfig { space, example33, epsilon, samples, seed: seed.unwrap_or(DEFAULT_SEED), mode, tol })
    }

    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<SpaceSel, CliError> {
        serde_json::from_str::<SpaceFile>(s).map_err(|e| CliError::Config(e.to_string()))?.resolve()
    }

    #[test]
    fn resolves_descriptors() {
        assert_eq!(parse(r#"{"type":"damek_ricci","m":6}"#).unwrap(), SpaceSel::example33());
        assert_eq!(
            parse(r#"{"type":"damek_ricci","m":3,"mult_plus":1,"mult_minus":1}"#).unwrap(),
            SpaceSel::DamekRicci { m: 3, mult_plus: 1, mult_minus: 1 }
        );
        assert_eq!(
            parse(r#"{"type":"damek_ricci","m":7,"class":"-"}"#).unwrap(),
            SpaceSel::DamekRicci { m: 7, mult_plus: 0, mult_minus: 1 }
        );
        assert_eq!(parse(r#"{"type":"cayley","epsilon":-1}"#).unwrap(), SpaceSel::Cayley { epsilon: -1 });
    }

    #[test]
    fn rejects_bad_descriptors() {
        for s in [
            r#"{"type":"damek_ricci","m":9}"#,
            r#"{"type":"damek_ricci","m":5,"mult_minus":1}"#,
            r#"{"type":"damek_ricci","m":3,"class":"+","mult_plus":2}"#,
            r#"{"type":"cayley","epsilon":2}"#,
            r#"{"type":"cayley","epsilon":1,"m":3}"#,
            r#"{"type":"torus"}"#,
        ] {
            assert!(parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn seed_required_with_samples() {
        assert!(RunConfig::new(None, false, None, Some(10), None, Mode::Exact, None).is_err());
        assert!(RunConfig::new(None, false, None, Some(10), Some(3), Mode::Exact, None).is_ok());
        assert!(RunConfig::new(None, false, None, None, None, Mode::Exact, Some(-1.0)).is_err());
        let c = RunConfig::new(None, true, Some(-1), None, None, Mode::Float, None).unwrap();
        assert_eq!((c.space, c.epsilon), (Some(SpaceSel::example33()), -1));
    }
}
