use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::exact_algebra::poly::default_symbol;
use crate::exact_algebra::{parse_rat, AlgebraError, CoeffDomain, CouplingPoly, Rat};
use crate::planar_oracle::DEFAULT_BUDGET;
use crate::spectral_curve::{ChainModel, PotentialSpec};

use super::ReportError;

/// Model section of a config file. `potentials[k]` lists the coefficients
/// of `V_k'(x) = sum_i a_i x^(i+1)`, quadratic coupling first; `c[k]`
/// couples matrices `k` and `k+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub potentials: Vec<Vec<String>>,
    pub c: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationFile {
    pub h_order: Option<usize>,
    pub nmax: Option<usize>,
    pub vmax: Option<usize>,
    pub g_order: Option<usize>,
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    pub dir: Option<String>,
}

/// On-disk configuration, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: ModelFile,
    #[serde(default)]
    pub truncation: TruncationFile,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub couplings: BTreeMap<String, String>,
    #[serde(default)]
    pub output: OutputFile,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub h_order: Option<usize>,
    pub nmax: Option<usize>,
    pub vmax: Option<usize>,
    pub mode: Option<String>,
    pub couplings: Option<String>,
    pub out: Option<PathBuf>,
    pub budget: Option<u64>,
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Model as given, couplings symbolic where the file says so.
    pub model: ChainModel,
    /// `None` picks a truncation from `vmax`.
    pub h_order: Option<usize>,
    pub nmax: usize,
    pub vmax: usize,
    pub g_order: Option<usize>,
    pub budget: u128,
    pub mode: CoeffDomain,
    /// Values of `g1, g2, ...` in NUM mode.
    pub couplings: BTreeMap<usize, Rat>,
    pub out_dir: PathBuf,
}

fn config_err(msg: impl Into<String>) -> ReportError {
    ReportError::Config(msg.into())
}

fn field_err(field: &str, e: AlgebraError) -> ReportError {
    match e {
        AlgebraError::Parse {
            input,
            position,
            reason,
        } => config_err(format!(
            "{field}: cannot parse {input:?} at position {position}: {reason}"
        )),
        e => config_err(format!("{field}: {e}")),
    }
}

impl ConfigFile {
    /// The three-matrix cubic model with symbolic cubic couplings.
    pub fn cubic_default() -> Self {
        let s = |x: &str| x.to_string();
        ConfigFile {
            model: ModelFile {
                potentials: vec![
                    vec![s("1"), s("g1")],
                    vec![s("3"), s("g2")],
                    vec![s("1"), s("g3")],
                ],
                c: vec![s("1"), s("1")],
            },
            truncation: TruncationFile::default(),
            mode: None,
            couplings: BTreeMap::new(),
            output: OutputFile::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| config_err(format!("config: {e}")))
    }
}

/// `"g1=1/3,g2=-2"` into variable indices and exact values.
pub fn parse_couplings(s: &str) -> Result<BTreeMap<usize, Rat>, ReportError> {
    let mut out = BTreeMap::new();
    let mut offset = 0;
    for part in s.split(',') {
        let here = offset;
        offset += part.len() + 1;
        if part.trim().is_empty() {
            continue;
        }
        let Some((name, value)) = part.split_once('=') else {
            return Err(config_err(format!(
                "couplings: expected name=value at position {here}"
            )));
        };
        let v = default_symbol(name.trim()).ok_or_else(|| {
            config_err(format!(
                "couplings: unknown symbol {:?} at position {here}",
                name.trim()
            ))
        })?;
        let r = parse_rat(value).map_err(|e| match e {
            AlgebraError::Parse {
                input,
                position,
                reason,
            } => config_err(format!(
                "couplings: cannot parse {input:?} at position {}: {reason}",
                here + name.len() + 1 + position
            )),
            e => config_err(format!("couplings: {e}")),
        })?;
        if out.insert(v, r).is_some() {
            return Err(config_err(format!(
                "couplings: {} given twice",
                name.trim()
            )));
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_file(file: &ConfigFile, ov: &Overrides) -> Result<Self, ReportError> {
        let pots = file
            .model
            .potentials
            .iter()
            .enumerate()
            .map(|(k, coeffs)| {
                let cs = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        CouplingPoly::parse(c)
                            .map_err(|e| field_err(&format!("model.potentials[{k}][{i}]"), e))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PotentialSpec::new(cs)
                    .map_err(|e| config_err(format!("model.potentials[{k}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let c = file
            .model
            .c
            .iter()
            .enumerate()
            .map(|(k, s)| parse_rat(s).map_err(|e| field_err(&format!("model.c[{k}]"), e)))
            .collect::<Result<Vec<_>, _>>()?;
        let model = ChainModel::new(pots, c).map_err(|e| config_err(format!("model: {e}")))?;

        let mode_text = ov
            .mode
            .clone()
            .or_else(|| file.mode.clone())
            .unwrap_or_else(|| "poly".into());
        let mode = CoeffDomain::parse(&mode_text).ok_or_else(|| {
            config_err(format!("mode must be poly, frac or num, got {mode_text:?}"))
        })?;

        let mut couplings = BTreeMap::new();
        for (name, value) in &file.couplings {
            let v = default_symbol(name)
                .ok_or_else(|| config_err(format!("couplings: unknown symbol {name:?}")))?;
            couplings.insert(
                v,
                parse_rat(value).map_err(|e| field_err(&format!("couplings.{name}"), e))?,
            );
        }
        if let Some(s) = &ov.couplings {
            couplings.extend(parse_couplings(s)?);
        }
        let nv = model.nvars();
        match mode {
            CoeffDomain::Num => {
                if let Some(missing) = (0..nv).find(|v| !couplings.contains_key(v)) {
                    return Err(config_err(format!(
                        "num mode needs a value for g{}",
                        missing + 1
                    )));
                }
            }
            _ => {
                if !couplings.is_empty() {
                    return Err(config_err("coupling values are only used in num mode"));
                }
            }
        }
        if let Some(v) = couplings.keys().find(|v| **v >= nv) {
            return Err(config_err(format!(
                "g{} does not appear in the model",
                v + 1
            )));
        }

        let t = &file.truncation;
        let vmax = ov.vmax.or(t.vmax).unwrap_or(3);
        let nmax = ov.nmax.or(t.nmax).unwrap_or(4);
        let g_order = t.g_order;
        if let Some(g) = g_order {
            let need = (2 * vmax).saturating_sub(3);
            if g < need {
                return Err(config_err(format!(
                    "g_order {g} is below the coupling degree {need} reached at vmax {vmax}"
                )));
            }
        }
        Ok(RunConfig {
            model,
            h_order: ov.h_order.or(t.h_order),
            nmax,
            vmax,
            g_order,
            budget: ov
                .budget
                .or(t.budget)
                .map(u128::from)
                .unwrap_or(DEFAULT_BUDGET),
            mode,
            couplings,
            out_dir: ov
                .out
                .clone()
                .or_else(|| file.output.dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    /// The model the pipelines run on: numeric in NUM mode, else as given.
    pub fn effective_model(&self) -> ChainModel {
        match self.mode {
            CoeffDomain::Num => {
                let vals: Vec<Rat> = (0..self.model.nvars())
                    .map(|v| self.couplings[&v].clone())
                    .collect();
                self.model.instantiate(&vals)
            }
            _ => self.model.clone(),
        }
    }

    /// Coupling values for checks that need numbers: the NUM values, or
    /// the generic point `g_k = 1/(2k+1)`.
    pub fn numeric_point(&self) -> Vec<Rat> {
        (0..self.model.nvars())
            .map(|v| {
                self.couplings
                    .get(&v)
                    .cloned()
                    .unwrap_or_else(|| Rat::new(1.into(), (2 * v as i64 + 3).into()))
            })
            .collect()
    }

    pub fn numeric_model(&self) -> ChainModel {
        self.model.instantiate(&self.numeric_point())
    }

    /// Truncation order: explicit, or enough for `vmax`.
    pub fn h_order_for(&self, vmax: usize) -> usize {
        self.h_order.unwrap_or(2 * vmax + 6)
    }

    /// Canonical JSON echo used in artifact metadata.
    pub fn echo(&self) -> serde_json::Value {
        let pots: Vec<Vec<String>> = self
            .model
            .potentials()
            .iter()
            .map(|p| p.coeffs().iter().map(|c| c.render()).collect())
            .collect();
        let c: Vec<String> = self
            .model
            .couplings()
            .iter()
            .map(crate::exact_algebra::render_rat)
            .collect();
        let couplings: BTreeMap<String, String> = self
            .couplings
            .iter()
            .map(|(k, v)| (format!("g{}", k + 1), crate::exact_algebra::render_rat(v)))
            .collect();
        serde_json::json!({
            "model": { "potentials": pots, "c": c },
            "mode": self.mode.tag(),
            "couplings": couplings,
            "truncation": {
                "h_order": self.h_order,
                "nmax": self.nmax,
                "vmax": self.vmax,
                "g_order": self.g_order,
                "budget": self.budget.to_string(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    #[test]
    fn default_config_is_the_cubic_chain() {
        let cfg =
            RunConfig::from_file(&ConfigFile::cubic_default(), &Overrides::default()).unwrap();
        assert_eq!(cfg.model, ChainModel::cubic_chain());
        assert_eq!(cfg.mode, CoeffDomain::Poly);
        assert_eq!(cfg.h_order_for(4), 14);
    }

    #[test]
    fn float_literal_is_rejected_with_position() {
        let mut f = ConfigFile::cubic_default();
        f.model.c[0] = "1.5".into();
        let e = RunConfig::from_file(&f, &Overrides::default()).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("position 1"), "{msg}");
        assert!(matches!(e, ReportError::Config(_)));
    }

    #[test]
    fn json_float_is_rejected() {
        let text = r#"{"model": {"potentials": [["1"], ["1"]], "c": [1.5]}}"#;
        let e = ConfigFile::parse(text).unwrap_err();
        assert!(e.to_string().contains("column"), "{e}");
    }

    #[test]
    fn coupling_string() {
        let m = parse_couplings("g1=1/3, g3=-2").unwrap();
        assert_eq!(m[&0], rat(1, 3));
        assert_eq!(m[&2], rat(-2, 1));
        let e = parse_couplings("g1=1/3,g2=0.5").unwrap_err().to_string();
        assert!(e.contains("position 11"), "{e}");
        let e = parse_couplings("g1= 0.5").unwrap_err().to_string();
        assert!(e.contains("position 5"), "{e}");
        assert!(parse_couplings("x=1").is_err());
    }

    #[test]
    fn num_mode_needs_every_value() {
        let ov = Overrides {
            mode: Some("num".into()),
            couplings: Some("g1=1".into()),
            ..Default::default()
        };
        assert!(RunConfig::from_file(&ConfigFile::cubic_default(), &ov).is_err());
        let ov = Overrides {
            mode: Some("num".into()),
            couplings: Some("g1=1,g2=2,g3=3".into()),
            ..Default::default()
        };
        let cfg = RunConfig::from_file(&ConfigFile::cubic_default(), &ov).unwrap();
        assert_eq!(cfg.effective_model().nvars(), 0);
    }
}
