use std::collections::BTreeMap;

use crate::error::{CliError, Result};

/// Value type of an experiment parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Int,
    Float,
    Text,
    IntList,
    FloatList,
}

impl ParamKind {
    pub fn name(self) -> &'static str {
        match self {
            ParamKind::Int => "integer",
            ParamKind::Float => "number",
            ParamKind::Text => "text",
            ParamKind::IntList => "comma-separated integers",
            ParamKind::FloatList => "comma-separated numbers",
        }
    }
}

/// Declared parameter: name, type, default value and a short description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
    pub help: &'static str,
}

impl ParamSpec {
    pub const fn new(name: &'static str, kind: ParamKind, default: &'static str, help: &'static str) -> Self {
        Self {
            name,
            kind,
            default,
            help,
        }
    }
}

/// Parameters resolved against a schema: every key is declared and every
/// value parses as its declared type.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: BTreeMap<&'static str, String>,
}

fn invalid(key: &str, value: &str, kind: ParamKind) -> CliError {
    CliError::InvalidParam {
        key: key.to_string(),
        value: value.to_string(),
        expected: kind.name(),
    }
}

fn check(spec: &ParamSpec, value: &str) -> Result<()> {
    let ok = match spec.kind {
        ParamKind::Int => value.parse::<u64>().is_ok(),
        ParamKind::Float => value.parse::<f64>().is_ok_and(f64::is_finite),
        ParamKind::Text => !value.is_empty(),
        ParamKind::IntList => split(value).all(|v| v.parse::<u64>().is_ok()) && split(value).count() > 0,
        ParamKind::FloatList => {
            split(value).all(|v| v.parse::<f64>().is_ok_and(f64::is_finite)) && split(value).count() > 0
        }
    };
    if ok {
        Ok(())
    } else {
        Err(invalid(spec.name, value, spec.kind))
    }
}

fn split(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl Params {
    pub fn resolve(experiment: &str, schema: &[ParamSpec], given: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(key) = given.keys().find(|k| !schema.iter().any(|s| s.name == k.as_str())) {
            return Err(CliError::UnknownKey {
                experiment: experiment.to_string(),
                key: key.clone(),
            });
        }
        let mut values = BTreeMap::new();
        for spec in schema {
            let v = given.get(spec.name).cloned().unwrap_or_else(|| spec.default.to_string());
            check(spec, &v)?;
            values.insert(spec.name, v);
        }
        Ok(Self { values })
    }

    /// Resolved `(name, value)` pairs in name order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (*k, v.as_str()))
    }

    fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("parameter '{key}' missing from the experiment schema"))
    }

    pub fn usize(&self, key: &str) -> usize {
        self.raw(key).parse().expect("validated integer")
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("validated number")
    }

    pub fn text(&self, key: &str) -> &str {
        self.raw(key)
    }

    pub fn usize_list(&self, key: &str) -> Vec<usize> {
        split(self.raw(key)).map(|v| v.parse().expect("validated integer")).collect()
    }

    pub fn f64_list(&self, key: &str) -> Vec<f64> {
        split(self.raw(key)).map(|v| v.parse().expect("validated number")).collect()
    }
}
