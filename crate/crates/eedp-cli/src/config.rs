//! Run configuration: a single flat TOML document with `${VAR}`
//! environment interpolation for secrets. Command-line flags override
//! file values; unknown keys are rejected.

use serde::{Deserialize, Serialize};

use eedp_harness::HttpClientConfig;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Method names, e.g. `["eedp", "adj-list"]`.
    #[serde(default)]
    pub methods: Option<Vec<String>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub concurrency: Option<usize>,
    #[serde(default)]
    pub requests_per_minute: Option<u32>,
    #[serde(default)]
    pub compress: Option<bool>,
    #[serde(default)]
    pub tokenizer: Option<String>,
    #[serde(default)]
    pub endpoint: Option<EndpointConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    pub base_url: Option<String>,
    pub model: Option<String>,
    pub api_key: Option<String>,
    pub timeout_secs: Option<u64>,
    pub max_retries: Option<u32>,
    pub backoff_ms: Option<u64>,
}

impl EndpointConfig {
    pub fn to_client_config(&self) -> HttpClientConfig {
        let d = HttpClientConfig::default();
        HttpClientConfig {
            base_url: self.base_url.clone().unwrap_or(d.base_url),
            model: self.model.clone().unwrap_or(d.model),
            api_key: self.api_key.clone().or(d.api_key),
            timeout_secs: self.timeout_secs.unwrap_or(d.timeout_secs),
            max_retries: self.max_retries.unwrap_or(d.max_retries),
            backoff_ms: self.backoff_ms.unwrap_or(d.backoff_ms),
        }
    }
}

/// Parse a TOML config, interpolating `${VAR}` in every string value.
pub fn parse_config(text: &str) -> Result<RunConfig, String> {
    let mut value: toml::Value = text.parse().map_err(|e| format!("invalid toml: {e}"))?;
    interpolate(&mut value)?;
    value
        .try_into()
        .map_err(|e| format!("invalid configuration: {e}"))
}

fn interpolate(value: &mut toml::Value) -> Result<(), String> {
    match value {
        toml::Value::String(s) => {
            *s = interpolate_str(s)?;
        }
        toml::Value::Array(items) => {
            for item in items {
                interpolate(item)?;
            }
        }
        toml::Value::Table(table) => {
            for (_, v) in table.iter_mut() {
                interpolate(v)?;
            }
        }
        _ => {}
    }
    Ok(())
}

fn interpolate_str(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        let end = after
            .find('}')
            .ok_or_else(|| format!("unterminated ${{...}} in {s:?}"))?;
        let var = &after[..end];
        let value = std::env::var(var)
            .map_err(|_| format!("environment variable {var:?} is not set"))?;
        out.push_str(&value);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}
