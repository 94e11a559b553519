//! Resolved run configuration: everything a report needs to be reproduced.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use gaugelab_core::catalog::Params;
use gaugelab_core::gauge::{sequences, GaugeSequence};
use gaugelab_core::{Interval, TagPolicy};

/// A scalar or list parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Scalar(f64),
    List(Vec<f64>),
}

/// Gauge-sequence specification, serialized by kind tag and parameters.
/// Registered kinds plus pointwise-min compositions; arbitrary formulas
/// are out of scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GaugeSpec {
    /// `δ_n = (b − a)/2^n` (the default).
    Halving,
    /// `δ_n = (b − a)/3^n`.
    Thirding,
    /// Mildly position-dependent halving family.
    Sloped,
    /// `δ_n = Dirichlet(eps·2^{1−n}, depth)`; `eps` is the index-1 weight.
    Dirichlet { eps: f64, depth: u64 },
    /// `δ_n(x) = min(2^{−n}, |x|³/scale)` with a fixed gauge at zero.
    CubicNearZero { scale: f64, zero_gauge: f64 },
    /// Quartic variant for faster oscillation.
    QuarticNearZero { scale: f64, zero_gauge: f64 },
    /// Pointwise minimum of two specs.
    Min {
        a: Box<GaugeSpec>,
        b: Box<GaugeSpec>,
    },
}

impl GaugeSpec {
    /// Parses the CLI syntax: a kind name with optional `key=value`
    /// options after a colon, or `min(spec,spec)`.
    ///
    /// Examples: `halving`, `dirichlet`, `dirichlet:eps=0.5,depth=30`,
    /// `cubic:scale=32,zero=0.04`, `min(halving,dirichlet)`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("min(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| format!("unclosed min(...) in `{text}`"))?;
            let split = split_top_level(inner)?;
            return Ok(GaugeSpec::Min {
                a: Box::new(GaugeSpec::parse(split.0)?),
                b: Box::new(GaugeSpec::parse(split.1)?),
            });
        }
        let (name, opts) = match text.split_once(':') {
            Some((n, o)) => (n, parse_opts(o)?),
            None => (text, BTreeMap::new()),
        };
        let get = |key: &str, default: f64| opts.get(key).copied().unwrap_or(default);
        match name {
            "halving" => Ok(GaugeSpec::Halving),
            "thirding" => Ok(GaugeSpec::Thirding),
            "sloped" => Ok(GaugeSpec::Sloped),
            "dirichlet" => Ok(GaugeSpec::Dirichlet {
                eps: get("eps", 1.0),
                depth: get("depth", 30.0) as u64,
            }),
            "cubic" => Ok(GaugeSpec::CubicNearZero {
                scale: get("scale", 32.0),
                zero_gauge: get("zero", 0.04),
            }),
            "quartic" => Ok(GaugeSpec::QuarticNearZero {
                scale: get("scale", 8.0),
                zero_gauge: get("zero", 0.04),
            }),
            other => Err(format!("unknown gauge kind `{other}`")),
        }
    }

    /// Realizes the spec over an interval.
    pub fn to_sequence(&self, interval: Interval) -> GaugeSequence {
        match self {
            GaugeSpec::Halving => sequences::constant_halving(interval),
            GaugeSpec::Thirding => sequences::constant_thirding(interval),
            GaugeSpec::Sloped => sequences::sloped_halving(interval),
            GaugeSpec::Dirichlet { eps, depth } => {
                let (eps, depth) = (*eps, *depth);
                GaugeSequence::new_decreasing(move |n| {
                    gaugelab_core::Gauge::dirichlet(eps * 0.5f64.powi(n as i32 - 1), depth)
                })
            }
            GaugeSpec::CubicNearZero { scale, zero_gauge } => {
                sequences::cubic_near_zero(*scale, *zero_gauge)
            }
            GaugeSpec::QuarticNearZero { scale, zero_gauge } => {
                sequences::quartic_near_zero(*scale, *zero_gauge)
            }
            GaugeSpec::Min { a, b } => {
                let a = a.to_sequence(interval);
                let b = b.to_sequence(interval);
                GaugeSequence::new(move |n| gaugelab_core::Gauge::min(a.at(n), b.at(n)))
            }
        }
    }
}

fn parse_opts(text: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    for piece in text.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{piece}`"))?;
        let v: f64 = v.parse().map_err(|e| format!("bad value in `{piece}`: {e}"))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Splits `a,b` at the top-level comma (commas inside `min(...)` nest).
fn split_top_level(text: &str) -> Result<(&str, &str), String> {
    let mut depth = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => return Ok((&text[..i], &text[i + 1..])),
            _ => {}
        }
    }
    Err(format!("expected two comma-separated specs in `{text}`"))
}

/// Tag-selection policy specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicySpec {
    Midpoint,
    Left,
    Right,
    Random,
    HintRandom,
    HintMidpoint,
}

impl PolicySpec {
    pub fn parse(text: &str) -> Result<Self, String> {
        match text {
            "midpoint" => Ok(PolicySpec::Midpoint),
            "left" => Ok(PolicySpec::Left),
            "right" => Ok(PolicySpec::Right),
            "random" => Ok(PolicySpec::Random),
            "hint-random" => Ok(PolicySpec::HintRandom),
            "hint-midpoint" => Ok(PolicySpec::HintMidpoint),
            other => Err(format!("unknown policy `{other}`")),
        }
    }

    pub fn to_policy(self, seed: u64) -> TagPolicy {
        match self {
            PolicySpec::Midpoint => TagPolicy::Midpoint,
            PolicySpec::Left => TagPolicy::LeftEndpoint,
            PolicySpec::Right => TagPolicy::RightEndpoint,
            PolicySpec::Random => TagPolicy::RandomUniform { seed },
            PolicySpec::HintRandom => {
                TagPolicy::hint_first(TagPolicy::RandomUniform { seed })
            }
            PolicySpec::HintMidpoint => TagPolicy::hint_first(TagPolicy::Midpoint),
        }
    }
}

/// The fully resolved configuration of an `integrate` run, embedded in
/// every report as the audit trail. Unknown keys are rejected on parse and
/// serialization round-trips to the identical value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct IntegrateConfig {
    pub function: String,
    pub params: BTreeMap<String, ParamValue>,
    pub interval: (f64, f64),
    pub gauge: GaugeSpec,
    pub tau: f64,
    pub max_index: u32,
    pub replicates: usize,
    pub policy: PolicySpec,
    pub seed: u64,
}

impl IntegrateConfig {
    pub fn interval(&self) -> Result<Interval, gaugelab_core::Error> {
        Interval::new(self.interval.0, self.interval.1)
    }

    pub fn catalog_params(&self) -> Params {
        let mut params = Params::new();
        for (key, value) in &self.params {
            match value {
                ParamValue::Scalar(v) => params = params.with(key, *v),
                ParamValue::List(vs) => params = params.with_list(key, vs),
            }
        }
        params
    }
}

/// Resolved configuration of a `verify` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct VerifyConfig {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair: Option<String>,
    pub seed: u64,
}

/// Parses `a:b` into an interval pair.
pub fn parse_interval(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got `{text}`"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("bad left endpoint: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("bad right endpoint: {e}"))?;
    Ok((a, b))
}

/// Parses `k=v,k2=v2` scalar params.
pub fn parse_params(text: &str) -> Result<BTreeMap<String, ParamValue>, String> {
    Ok(parse_opts(text)?
        .into_iter()
        .map(|(k, v)| (k, ParamValue::Scalar(v)))
        .collect())
}

/// Parses a comma-separated float list.
pub fn parse_float_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number `{p}`: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_spec_syntax_round_trips() {
        for text in [
            "halving",
            "thirding",
            "dirichlet:eps=0.5,depth=12",
            "cubic:scale=32,zero=0.04",
            "min(halving,dirichlet)",
            "min(min(halving,thirding),sloped)",
        ] {
            assert!(GaugeSpec::parse(text).is_ok(), "{text}");
        }
        assert!(GaugeSpec::parse("bogus").is_err());
        assert!(GaugeSpec::parse("min(halving").is_err());
    }

    #[test]
    fn config_round_trips_and_rejects_unknown_keys() {
        let config = IntegrateConfig {
            function: "poly".into(),
            params: BTreeMap::from([(
                "coeffs".to_string(),
                ParamValue::List(vec![0.0, 4.0, -1.0]),
            )]),
            interval: (0.0, 4.0),
            gauge: GaugeSpec::Halving,
            tau: 1e-6,
            max_index: 40,
            replicates: 3,
            policy: PolicySpec::HintRandom,
            seed: 42,
        };
        let json = serde_json::to_string(&config).unwrap();
        let back: IntegrateConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, config);

        let with_junk = json.replacen('{', "{\"junkKey\":1,", 1);
        assert!(serde_json::from_str::<IntegrateConfig>(&with_junk).is_err());
    }

    #[test]
    fn interval_and_param_parsing() {
        assert_eq!(parse_interval("0:4").unwrap(), (0.0, 4.0));
        assert_eq!(parse_interval("-1.5:2.5").unwrap(), (-1.5, 2.5));
        assert!(parse_interval("12").is_err());
        assert_eq!(parse_float_list("0,4,-1").unwrap(), vec![0.0, 4.0, -1.0]);
        let p = parse_params("k=4,at=0.5").unwrap();
        assert_eq!(p.get("k"), Some(&ParamValue::Scalar(4.0)));
    }

    #[test]
    fn dirichlet_spec_eps_schedule() {
        let spec = GaugeSpec::Dirichlet { eps: 1.0, depth: 5 };
        let seq = spec.to_sequence(Interval::new(0.0, 1.0).unwrap());
        let q1 = gaugelab_core::rational_enumeration(1);
        // eps_n = 2^{1-n}: index 1 weight at q_1 is eps/2 = 0.5.
        assert_eq!(seq.at(1).eval(&q1).unwrap(), 0.5);
        assert_eq!(seq.at(2).eval(&q1).unwrap(), 0.25);
    }
}
