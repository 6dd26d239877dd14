//! JSON dataset files.
//!
//! ```json
//! {
//!   "alternatives": ["a", "b", "c"],
//!   "mu": {"a,b": "1/4", "a,c": 0.25, "b,c": "1/4", "a,b,c": "1/4"},
//!   "lambda": {"a": "1/3", "b": "1/3", "c": "1/3"},
//!   "feasible": ["a,b", "a,c", "b,c", "a,b,c"]
//! }
//! ```
//!
//! Probabilities are `"p/q"` strings, decimal strings or JSON numbers; all
//! are read exactly (`0.1` is `1/10`). Alternatives missing from `lambda`
//! or `xi` get probability 0. With `"outside_option": true` the menus are
//! keyed by their part inside `X` and `lambda` may list `"x*"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::availability::AvailabilityVector;
use crate::domain::{ChoiceDistribution, MarginalDataset, Menu, MenuDistribution, Universe};
use crate::ircs::StarDataset;
use crate::rational::{format_rational, parse_rational, zero};
use crate::twostage::FeasibleCollection;
use crate::{Error, Rational, Result};

pub const OUTSIDE_LABEL: &str = "x*";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probability {
    Text(String),
    Number(serde_json::Number),
}

impl Probability {
    fn parse(&self) -> Result<Rational> {
        match self {
            Probability::Text(s) => parse_rational(s),
            Probability::Number(n) => parse_rational(&n.to_string()),
        }
    }

    fn exact(value: &Rational) -> Self {
        Probability::Text(format_rational(value))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub alternatives: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<BTreeMap<String, Probability>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<BTreeMap<String, Probability>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub outside_option: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<BTreeMap<String, Probability>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feasible: Option<Vec<String>>,
}

fn at(field: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::Format(format!("{field}: {e}"))
}

fn missing(field: &str) -> Error {
    Error::Format(format!("{field}: required field is missing"))
}

impl DatasetFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("invalid dataset JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn universe(&self) -> Result<Universe> {
        let labels = self.alternatives.iter().map(String::as_str);
        let universe = Universe::with_limits(labels, crate::domain::Limits::from_env())
            .map_err(at("alternatives"))?;
        if self.outside_option && universe.labels().iter().any(|l| l == OUTSIDE_LABEL) {
            return Err(Error::Format(format!(
                "alternatives: {OUTSIDE_LABEL:?} is implicit and must not be listed"
            )));
        }
        Ok(universe)
    }

    fn menu_distribution(&self, universe: &Universe) -> Result<MenuDistribution> {
        let mu = self.mu.as_ref().ok_or_else(|| missing("mu"))?;
        let mut pairs = Vec::with_capacity(mu.len());
        for (key, p) in mu {
            let field = format!("mu[{key:?}]");
            let text = if self.outside_option {
                strip_outside(key)
            } else {
                key.clone()
            };
            let menu = universe.parse_menu(&text).map_err(at(&field))?;
            pairs.push((menu, p.parse().map_err(at(&field))?));
        }
        MenuDistribution::from_pairs(universe.len(), pairs).map_err(at("mu"))
    }

    fn per_alternative(
        &self,
        universe: &Universe,
        name: &str,
        map: &BTreeMap<String, Probability>,
    ) -> Result<(Vec<Rational>, Option<Rational>)> {
        let mut values = vec![zero(); universe.len()];
        let mut outside = None;
        for (key, p) in map {
            let field = format!("{name}[{key:?}]");
            let value = p.parse().map_err(at(&field))?;
            if self.outside_option && key.trim() == OUTSIDE_LABEL {
                outside = Some(value);
                continue;
            }
            let a = universe.index_of(key).map_err(at(&field))?;
            values[a] = value;
        }
        Ok((values, outside))
    }

    fn lambda_values(&self, universe: &Universe) -> Result<(Vec<Rational>, Option<Rational>)> {
        let lambda = self.lambda.as_ref().ok_or_else(|| missing("lambda"))?;
        self.per_alternative(universe, "lambda", lambda)
    }

    pub fn marginal(&self) -> Result<MarginalDataset> {
        if self.outside_option {
            return Err(Error::Format(
                "outside_option: this command expects a dataset without an outside option".into(),
            ));
        }
        let universe = self.universe()?;
        let mu = self.menu_distribution(&universe)?;
        let (lambda, _) = self.lambda_values(&universe)?;
        let lambda = ChoiceDistribution::new(lambda).map_err(at("lambda"))?;
        MarginalDataset::new(universe, mu, lambda)
    }

    pub fn star(&self) -> Result<StarDataset> {
        if !self.outside_option {
            return Err(Error::Format(
                "outside_option: must be true for a dataset with an outside option".into(),
            ));
        }
        let universe = self.universe()?;
        let mu = self.menu_distribution(&universe)?;
        let (lambda, outside) = self.lambda_values(&universe)?;
        let data = StarDataset::new(universe, mu, lambda).map_err(at("lambda"))?;
        if let Some(outside) = outside {
            if outside != *data.outside() {
                return Err(Error::Format(format!(
                    "lambda[{OUTSIDE_LABEL:?}]: is {}, but the other entries imply {}",
                    format_rational(&outside),
                    format_rational(data.outside())
                )));
            }
        }
        Ok(data)
    }

    pub fn availability(&self) -> Result<(Universe, AvailabilityVector, ChoiceDistribution)> {
        let universe = self.universe()?;
        let xi = self.xi.as_ref().ok_or_else(|| missing("xi"))?;
        let (xi, _) = self.per_alternative(&universe, "xi", xi)?;
        let xi = AvailabilityVector::new(xi).map_err(at("xi"))?;
        let (lambda, _) = self.lambda_values(&universe)?;
        let lambda = ChoiceDistribution::new(lambda).map_err(at("lambda"))?;
        Ok((universe, xi, lambda))
    }

    pub fn collection(&self, universe: &Universe) -> Result<Option<FeasibleCollection>> {
        let Some(menus) = &self.feasible else {
            return Ok(None);
        };
        let parsed = menus
            .iter()
            .map(|m| universe.parse_menu(m).map_err(at(&format!("feasible[{m:?}]"))))
            .collect::<Result<Vec<Menu>>>()?;
        FeasibleCollection::new(universe.len(), parsed)
            .map(Some)
            .map_err(at("feasible"))
    }

    pub fn from_marginal(data: &MarginalDataset) -> Self {
        DatasetFile {
            alternatives: data.universe.labels().to_vec(),
            mu: Some(mu_map(&data.universe, &data.mu)),
            lambda: Some(choice_map(&data.universe, data.lambda.as_slice())),
            ..Default::default()
        }
    }

    pub fn from_star(data: &StarDataset) -> Self {
        let mut lambda = choice_map(&data.universe, data.lambda());
        lambda.insert(OUTSIDE_LABEL.into(), Probability::exact(data.outside()));
        DatasetFile {
            alternatives: data.universe.labels().to_vec(),
            mu: Some(mu_map(&data.universe, &data.mu)),
            lambda: Some(lambda),
            outside_option: true,
            ..Default::default()
        }
    }

    pub fn from_availability(universe: &Universe, xi: &AvailabilityVector, lambda: &ChoiceDistribution) -> Self {
        DatasetFile {
            alternatives: universe.labels().to_vec(),
            lambda: Some(choice_map(universe, lambda.as_slice())),
            xi: Some(choice_map(universe, xi.as_slice())),
            ..Default::default()
        }
    }

    pub fn with_collection(mut self, universe: &Universe, collection: &FeasibleCollection) -> Self {
        self.feasible = Some(collection.menus().map(|m| universe.menu_key(m)).collect());
        self
    }
}

fn strip_outside(key: &str) -> String {
    let inner = key.trim();
    let inner = inner
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(inner);
    inner
        .split(',')
        .filter(|part| part.trim() != OUTSIDE_LABEL)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn mu_map(universe: &Universe, mu: &MenuDistribution) -> BTreeMap<String, Probability> {
    mu.iter()
        .map(|(m, w)| (universe.menu_key(m), Probability::exact(w)))
        .collect()
}

pub fn choice_map(universe: &Universe, values: &[Rational]) -> BTreeMap<String, Probability> {
    universe
        .labels()
        .iter()
        .zip(values)
        .map(|(l, p)| (l.clone(), Probability::exact(p)))
        .collect()
}

/// Parses `"{a};{c};{a,b}"` (menus separated by semicolons).
pub fn parse_collection(universe: &Universe, text: &str) -> Result<FeasibleCollection> {
    let menus = text
        .split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| universe.parse_menu(part))
        .collect::<Result<Vec<Menu>>>()
        .map_err(at("--feasible"))?;
    FeasibleCollection::new(universe.len(), menus).map_err(at("--feasible"))
}
