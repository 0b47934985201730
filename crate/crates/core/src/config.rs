//! Model and functional configuration files.
//!
//! Unknown keys are rejected and rationals are written as `"p"` or `"p/q"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::element::{BlockKey, Weight};
use crate::error::{Result, VaError};
use crate::fock::FockModel;
use crate::forms::{Form, ScalarFunctional};
use crate::free_va::{make_free_model, SubalgebraModel};
use crate::heisenberg::make_heisenberg;
use crate::lattice::{make_corrupted_lattice_model, make_lattice_model, LocalityMatrix};
use crate::model::{Cutoffs, VertexAlgebra};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisenbergConfig {
    pub k: String,
    pub max_degree: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub generators: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<i64>>,
    pub max_degree: i64,
    pub max_weight_len: usize,
    /// Test fixture: flips the cocycle sign at one ordered pair of lattice
    /// vectors, which breaks the axioms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrupt_cocycle: Option<(Vec<i64>, Vec<i64>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeConfig {
    pub generators: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<i64>>,
    pub max_degree: i64,
    pub max_weight_len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelConfig {
    Heisenberg(HeisenbergConfig),
    Lattice(LatticeConfig),
    Free(FreeConfig),
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| VaError::Config(e.to_string()))
    }

    /// Replaces the cutoffs given on the command line.
    pub fn with_overrides(mut self, max_degree: Option<i64>, max_weight_len: Option<usize>) -> Self {
        match &mut self {
            ModelConfig::Heisenberg(c) => {
                if let Some(d) = max_degree {
                    c.max_degree = d;
                }
            }
            ModelConfig::Lattice(c) => {
                c.max_degree = max_degree.unwrap_or(c.max_degree);
                c.max_weight_len = max_weight_len.unwrap_or(c.max_weight_len);
            }
            ModelConfig::Free(c) => {
                c.max_degree = max_degree.unwrap_or(c.max_degree);
                c.max_weight_len = max_weight_len.unwrap_or(c.max_weight_len);
            }
        }
        self
    }

    pub fn build(&self) -> Result<BuiltModel> {
        match self {
            ModelConfig::Heisenberg(c) => {
                let k = Rational::parse_exact(&c.k).ok_or_else(|| VaError::Config(format!("bad rational k = {:?}", c.k)))?;
                Ok(BuiltModel::Fock(Arc::new(make_heisenberg(k, c.max_degree))))
            }
            ModelConfig::Lattice(c) => {
                let n = LocalityMatrix::new(c.generators.clone(), c.n.clone())?;
                let cut = Cutoffs::new(c.max_degree, c.max_weight_len);
                let m = match &c.corrupt_cocycle {
                    None => make_lattice_model(&n, cut)?,
                    Some((a, b)) => {
                        if a.len() != n.rank() || b.len() != n.rank() {
                            return Err(VaError::Config("corrupt_cocycle vectors must match the rank".into()));
                        }
                        make_corrupted_lattice_model(&n, cut, a.clone(), b.clone())?
                    }
                };
                Ok(BuiltModel::Fock(Arc::new(m)))
            }
            ModelConfig::Free(c) => {
                let n = LocalityMatrix::new(c.generators.clone(), c.n.clone())?;
                Ok(BuiltModel::Free(Arc::new(make_free_model(&n, Cutoffs::new(c.max_degree, c.max_weight_len))?)))
            }
        }
    }
}

/// A model built from a configuration.
pub enum BuiltModel {
    Fock(Arc<FockModel<Rational>>),
    Free(Arc<SubalgebraModel<Rational>>),
}

/// An operation run on any built model.
pub trait ModelVisitor {
    type Output;
    fn visit<M: VertexAlgebra<Rational>>(self, model: &Arc<M>) -> Self::Output;
}

impl BuiltModel {
    pub fn visit<V: ModelVisitor>(&self, v: V) -> V::Output {
        match self {
            BuiltModel::Fock(m) => v.visit(m),
            BuiltModel::Free(m) => v.visit(m),
        }
    }
}

/// One value of an explicit functional: basis state `index` of the
/// degree-zero block of `weight`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalEntry {
    pub weight: Weight,
    pub index: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalConfig {
    pub values: Vec<FunctionalEntry>,
}

/// `canonical` or an explicit table.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum FunctionalSource {
    #[default]
    Canonical,
    Explicit(FunctionalConfig),
}

impl FunctionalSource {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: FunctionalConfig = serde_json::from_str(text).map_err(|e| VaError::Config(e.to_string()))?;
        Ok(FunctionalSource::Explicit(c))
    }

    pub fn form<M: VertexAlgebra<Rational> + ?Sized>(&self, model: &M) -> Result<Form<M::State, Rational>> {
        match self {
            FunctionalSource::Canonical => Form::canonical(model),
            FunctionalSource::Explicit(c) => {
                let mut values = BTreeMap::new();
                for e in &c.values {
                    let key = BlockKey::new(e.weight.clone(), 0);
                    let basis = model.basis(&key);
                    let s = basis.get(e.index).ok_or(VaError::InvalidFunctional(key))?;
                    let v = Rational::parse_exact(&e.value)
                        .ok_or_else(|| VaError::Config(format!("bad rational {:?}", e.value)))?;
                    values.insert(s.clone(), v);
                }
                Ok(Form::Functional(ScalarFunctional::new(model, values)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_model_types() {
        let h = ModelConfig::from_json(r#"{"type":"heisenberg","k":"1/2","max_degree":4}"#).unwrap();
        assert_eq!(h, ModelConfig::Heisenberg(HeisenbergConfig { k: "1/2".into(), max_degree: 4 }));
        let l = r#"{"type":"lattice","generators":["g"],"N":[[-2]],"max_degree":3,"max_weight_len":2}"#;
        assert!(matches!(ModelConfig::from_json(l).unwrap(), ModelConfig::Lattice(_)));
        let f = r#"{"type":"free","generators":["a","b"],"N":[[-2,1],[1,-2]],"max_degree":3,"max_weight_len":2}"#;
        assert!(matches!(ModelConfig::from_json(f).unwrap(), ModelConfig::Free(_)));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ModelConfig::from_json(r#"{"type":"heisenberg","k":"0","max_degree":4,"extra":1}"#).is_err());
        assert!(ModelConfig::from_json(r#"{"type":"torus","k":"0"}"#).is_err());
        let bad_k = ModelConfig::from_json(r#"{"type":"heisenberg","k":"x","max_degree":4}"#).unwrap();
        assert!(matches!(bad_k.build(), Err(VaError::Config(_))));
        let odd = ModelConfig::from_json(r#"{"type":"lattice","generators":["g"],"N":[[1]],"max_degree":3,"max_weight_len":1}"#).unwrap();
        assert!(matches!(odd.build(), Err(VaError::InvalidLocality(_))));
    }

    #[test]
    fn overrides_replace_cutoffs() {
        let c = ModelConfig::from_json(r#"{"type":"heisenberg","k":"0","max_degree":4}"#).unwrap();
        assert_eq!(
            c.with_overrides(Some(7), None),
            ModelConfig::Heisenberg(HeisenbergConfig { k: "0".into(), max_degree: 7 })
        );
    }
}
