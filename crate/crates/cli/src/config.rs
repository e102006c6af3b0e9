//! TOML run configuration with line-numbered errors.

use num_rational::Ratio;
use redord_core::arith::FactorialCap;
use redord_core::census::{Decimal, FLaw, FMode};
use redord_core::reduction::AlgebraicNumberSpec;
use serde::Deserialize;
use std::ops::Range;
use toml::Spanned;

/// Default H in h = H! for the C_q count.
pub const DEFAULT_FACTORIAL_CAP: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub seed: Option<u64>,
    pub workers: Option<Spanned<usize>>,
    pub out: Option<String>,
    pub spec: Option<RawSpec>,
    pub specs: Option<Vec<RawSpec>>,
    pub census: Option<RawCensus>,
    pub rough: Option<RawRough>,
    pub smooth: Option<RawSmooth>,
    pub linrec: Option<RawLinrec>,
    pub threshold: Option<RawThreshold>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub coeffs: Spanned<Vec<i64>>,
    pub label: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCensus {
    pub x: Spanned<u64>,
    pub d: Spanned<usize>,
    #[serde(rename = "H")]
    pub factorial_cap: Option<Spanned<u64>>,
    pub h_grid: Option<Spanned<Vec<Number>>>,
    pub f_mode: Option<Spanned<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRough {
    pub poly: Option<Spanned<Vec<i64>>>,
    pub epsilon: Spanned<Vec<Number>>,
    pub c: Spanned<Number>,
    pub x: Spanned<u64>,
    pub over_primes: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSmooth {
    pub x: Spanned<u64>,
    pub d: Spanned<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLinrec {
    pub char_coeffs: Spanned<Vec<i64>>,
    pub initial: Spanned<Vec<Number>>,
    pub x: Spanned<u64>,
    pub budget: Option<Spanned<u64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawThreshold {
    pub k: Spanned<usize>,
    pub epsilon: Spanned<Vec<Number>>,
    pub x: Spanned<u64>,
}

/// A TOML integer, float or string holding a number.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Int(v) => v.to_string(),
            Number::Float(v) => v.to_string(),
            Number::Text(s) => s.clone(),
        }
    }

    fn decimal(&self) -> Result<Decimal, String> {
        match self {
            Number::Int(v) if *v >= 0 => Ok(Decimal::integer(*v as u128)),
            Number::Float(v) => Decimal::from_f64(*v).map_err(|e| e.to_string()),
            Number::Text(s) => s.parse().map_err(|e: redord_core::Error| e.to_string()),
            Number::Int(v) => Err(format!("{v} is negative")),
        }
    }

    fn rational(&self) -> Result<Ratio<i64>, String> {
        match self {
            Number::Int(v) => Ok(Ratio::from_integer(*v)),
            Number::Text(s) => s.trim().parse().map_err(|_| format!("'{s}' is not a rational num/den")),
            Number::Float(v) => Err(format!("{v}: write rationals as \"num/den\"")),
        }
    }
}

/// Parsed file plus the text, for mapping spans to line numbers.
pub struct Config {
    text: String,
    pub raw: RawConfig,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(1);
            ConfigError(format!("config error at line {line}: {}", e.message()))
        })?;
        Ok(Config { text: text.to_string(), raw })
    }

    pub fn error_at(&self, span: Range<usize>, msg: impl std::fmt::Display) -> ConfigError {
        ConfigError(format!("config error at line {}: {msg}", line_of(&self.text, span.start)))
    }

    fn missing(&self, section: &str) -> ConfigError {
        ConfigError(format!("config error: missing [{section}] section"))
    }

    pub fn workers(&self) -> Result<Option<usize>, ConfigError> {
        match &self.raw.workers {
            Some(w) if *w.get_ref() == 0 => Err(self.error_at(w.span(), "workers must be at least 1")),
            Some(w) => Ok(Some(*w.get_ref())),
            None => Ok(None),
        }
    }

    fn spec_from(&self, raw: &RawSpec, seed: u64, default_label: &str) -> Result<AlgebraicNumberSpec, ConfigError> {
        let label = raw.label.clone().unwrap_or_else(|| default_label.to_string());
        AlgebraicNumberSpec::new(raw.coeffs.get_ref().clone(), label)
            .map(|s| s.with_seed(seed))
            .map_err(|e| self.error_at(raw.coeffs.span(), e))
    }

    pub fn spec(&self, seed: u64) -> Result<AlgebraicNumberSpec, ConfigError> {
        let raw = self.raw.spec.as_ref().ok_or_else(|| self.missing("spec"))?;
        self.spec_from(raw, seed, "alpha")
    }

    /// `[[specs]]` entries, or the single `[spec]` when there are none.
    pub fn spec_list(&self, seed: u64) -> Result<Vec<AlgebraicNumberSpec>, ConfigError> {
        match &self.raw.specs {
            Some(list) if !list.is_empty() => list
                .iter()
                .enumerate()
                .map(|(i, r)| self.spec_from(r, seed, &format!("alpha{}", i + 1)))
                .collect(),
            _ => Ok(vec![self.spec(seed)?]),
        }
    }

    pub fn census(&self) -> Result<&RawCensus, ConfigError> {
        self.raw.census.as_ref().ok_or_else(|| self.missing("census"))
    }

    pub fn rough(&self) -> Result<&RawRough, ConfigError> {
        self.raw.rough.as_ref().ok_or_else(|| self.missing("rough"))
    }

    pub fn smooth(&self) -> Result<&RawSmooth, ConfigError> {
        self.raw.smooth.as_ref().ok_or_else(|| self.missing("smooth"))
    }

    pub fn linrec(&self) -> Result<&RawLinrec, ConfigError> {
        self.raw.linrec.as_ref().ok_or_else(|| self.missing("linrec"))
    }

    pub fn threshold(&self) -> Result<&RawThreshold, ConfigError> {
        self.raw.threshold.as_ref().ok_or_else(|| self.missing("threshold"))
    }

    pub fn decimal(&self, n: &Spanned<Number>) -> Result<Decimal, ConfigError> {
        n.get_ref().decimal().map_err(|e| self.error_at(n.span(), e))
    }

    pub fn decimals(&self, list: &Spanned<Vec<Number>>) -> Result<Vec<Decimal>, ConfigError> {
        list.get_ref()
            .iter()
            .map(|n| n.decimal().map_err(|e| self.error_at(list.span(), format!("{}: {e}", n.text()))))
            .collect()
    }

    pub fn rationals(&self, list: &Spanned<Vec<Number>>) -> Result<Vec<Ratio<i64>>, ConfigError> {
        list.get_ref().iter().map(|n| n.rational().map_err(|e| self.error_at(list.span(), e))).collect()
    }

    pub fn factorial_cap(&self, census: &RawCensus) -> Result<FactorialCap, ConfigError> {
        match &census.factorial_cap {
            Some(h) => FactorialCap::new(*h.get_ref()).map_err(|e| self.error_at(h.span(), e)),
            None => Ok(FactorialCap::new(DEFAULT_FACTORIAL_CAP).expect("default cap is valid")),
        }
    }

    pub fn f_mode(&self, census: &RawCensus) -> Result<FMode, ConfigError> {
        let Some(m) = &census.f_mode else { return Ok(FMode::Auto) };
        match m.get_ref().as_str() {
            "auto" => Ok(FMode::Auto),
            "group-order" => Ok(FMode::Fixed(FLaw::GroupOrder)),
            "unit-quadratic" => Ok(FMode::Fixed(FLaw::UnitQuadratic)),
            other => Err(self.error_at(
                m.span(),
                format!("f_mode '{other}' is not one of auto, group-order, unit-quadratic"),
            )),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}
