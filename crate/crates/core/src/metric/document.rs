//! TOML/JSON representation of a [`MetricSpec`].
//!
//! ```toml
//! n = 4
//! a = 0.5
//! r0 = 1.0
//! lambda = [1.0, 2.0]
//!
//! [exp_u_hat.terms]
//! "3" = 0.1
//!
//! [exp_v_hat.terms."3"]
//! "0" = [-0.1, 0.0]
//! "1" = [0.02, 0.0]
//!
//! [w_hat.terms."4"."3,4"]
//! "0,1,0" = [0.05, 0.0]
//! ```
//!
//! Orders and Fourier modes are string keys. Torus components use the
//! coordinate labels `3..n`; multi-mode keys list `k_ξ, k_3, …, k_n`.
//! The `w_hat` amplitudes are the coefficients of `ŵ` itself.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::background::BackgroundParams;
use super::fourier::FourierSeries;
use super::spec::MetricSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarTerms {
    #[serde(default)]
    pub terms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngularTerms {
    #[serde(default)]
    pub terms: BTreeMap<String, BTreeMap<String, [f64; 2]>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorTerms {
    #[serde(default)]
    pub terms: BTreeMap<String, BTreeMap<String, BTreeMap<String, [f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricDocument {
    pub n: usize,
    pub a: f64,
    pub r0: f64,
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_period: Option<f64>,
    #[serde(default)]
    pub exp_u_hat: ScalarTerms,
    #[serde(default)]
    pub exp_v_hat: AngularTerms,
    #[serde(default)]
    pub w_hat: TensorTerms,
}

fn parse_order(key: &str) -> Result<u32> {
    key.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("order key {key:?} is not a non-negative integer")))
}

fn parse_ints(key: &str) -> Result<Vec<i32>> {
    key.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("index list {key:?} is not comma-separated integers")))
        })
        .collect()
}

fn join(v: &[i32]) -> String {
    v.iter().map(i32::to_string).collect::<Vec<_>>().join(",")
}

impl MetricDocument {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads a document, choosing the format from the extension
    /// (`.json` for JSON, anything else TOML).
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("document is always representable")
    }

    pub fn to_spec(&self) -> Result<MetricSpec> {
        let bg = BackgroundParams::new(self.n, self.a, self.r0, self.lambda.clone())?;
        let mut spec = MetricSpec::hm_type(bg);
        if let Some(p) = self.xi_period {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::InvalidSpec(format!("xi_period = {p} must be positive")));
            }
            spec.xi_period = p;
        }
        let n = self.n;
        for (k, &c) in &self.exp_u_hat.terms {
            spec.set_u(parse_order(k)?, c);
        }
        for (k, modes) in &self.exp_v_hat.terms {
            let m = parse_order(k)?;
            for (mode, [c, s]) in modes {
                let kk = parse_ints(mode)?;
                if kk.len() != 1 {
                    return Err(Error::Parse(format!(
                        "exp_v_hat mode {mode:?} must be a single integer"
                    )));
                }
                spec.add_v_mode(m, kk[0], *c, *s);
            }
        }
        for (k, comps) in &self.w_hat.terms {
            let m = parse_order(k)?;
            for (comp, modes) in comps {
                let ij = parse_ints(comp)?;
                if ij.len() != 2 || ij.iter().any(|&x| x < 3 || x as usize > n) {
                    return Err(Error::Parse(format!(
                        "w_hat component {comp:?} must be \"i,j\" with 3 <= i,j <= {n}"
                    )));
                }
                for (mode, [c, s]) in modes {
                    let kk = parse_ints(mode)?;
                    if kk.len() != n - 1 {
                        return Err(Error::Parse(format!(
                            "w_hat mode {mode:?} must list {} wavenumbers",
                            n - 1
                        )));
                    }
                    spec.add_w_mode(m, ij[0] as usize - 3, ij[1] as usize - 3, kk, *c, *s)?;
                }
            }
        }
        Ok(spec)
    }

    pub fn from_spec(spec: &MetricSpec) -> Self {
        let bg = &spec.background;
        let exp_u_hat = ScalarTerms {
            terms: spec
                .exp_u_hat
                .terms
                .iter()
                .filter(|(m, c)| !(**m == 0 && **c == 1.0))
                .map(|(m, c)| (m.to_string(), *c))
                .collect(),
        };
        let series_map = |s: &FourierSeries| -> BTreeMap<String, [f64; 2]> {
            s.modes().iter().map(|md| (join(&md.k), [md.cos, md.sin])).collect()
        };
        let exp_v_hat = AngularTerms {
            terms: spec
                .exp_v_hat
                .terms
                .iter()
                .map(|(m, s)| (m.to_string(), series_map(s)))
                .filter(|(_, s)| !s.is_empty())
                .collect(),
        };
        let mut w_terms = BTreeMap::new();
        let msize = spec.n() - 2;
        for (m, t) in &spec.w_hat.terms {
            let mut comps = BTreeMap::new();
            for i in 0..msize {
                for j in i..msize {
                    let modes = series_map(t.component(i, j));
                    if !modes.is_empty() {
                        comps.insert(format!("{},{}", i + 3, j + 3), modes);
                    }
                }
            }
            if !comps.is_empty() {
                w_terms.insert(m.to_string(), comps);
            }
        }
        let xi_period = if (spec.xi_period - bg.beta()).abs() <= 1e-15 * bg.beta() {
            None
        } else {
            Some(spec.xi_period)
        };
        Self {
            n: bg.n(),
            a: bg.a(),
            r0: bg.r0(),
            lambda: bg.torus_periods().to_vec(),
            xi_period,
            exp_u_hat,
            exp_v_hat,
            w_hat: TensorTerms { terms: w_terms },
        }
    }
}

/// Loads a spec from a TOML or JSON file.
pub fn load_spec(path: &Path) -> Result<MetricSpec> {
    MetricDocument::from_path(path)?.to_spec()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
n = 4
a = 0.5
r0 = 1.0
lambda = [1.0, 2.0]

[exp_u_hat.terms]
"3" = 0.1

[exp_v_hat.terms."3"]
"0" = [-0.1, 0.0]
"1" = [0.02, 0.01]

[w_hat.terms."4"."3,4"]
"0,1,0" = [0.05, 0.0]
"#;

    #[test]
    fn toml_round_trip() {
        let doc = MetricDocument::from_toml_str(SAMPLE).unwrap();
        let spec = doc.to_spec().unwrap();
        assert_eq!(spec.u_coeff(3), 0.1);
        assert!((spec.v_coeff(3).mean() + 0.1).abs() < 1e-15);
        let w = spec.w_coeff(4);
        assert_eq!(w.component(0, 1).modes()[0].cos, 0.025);
        let again = MetricDocument::from_spec(&spec);
        assert_eq!(again, doc);
        let text = again.to_toml_string();
        assert_eq!(MetricDocument::from_toml_str(&text).unwrap(), doc);
    }

    #[test]
    fn json_is_accepted() {
        let doc = MetricDocument::from_toml_str(SAMPLE).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(MetricDocument::from_json_str(&json).unwrap(), doc);
    }

    #[test]
    fn bad_component_is_rejected() {
        let bad = SAMPLE.replace("\"3,4\"", "\"2,4\"");
        assert!(MetricDocument::from_toml_str(&bad).unwrap().to_spec().is_err());
    }
}
