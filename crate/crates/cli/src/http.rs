//! Blocking HTTP client for OpenAI-compatible chat-completions endpoints.
//!
//! The endpoint URL comes from `--endpoint` or `TCPLAN_ENDPOINT`; the bearer
//! credential from `TCPLAN_API_KEY`. Timeouts, 429s and 5xx responses are
//! transient (retried by the runner); everything else is fatal.

use std::time::Duration;

use serde_json::{json, Value};
use tcplan::client::{ClientError, Completion, TextGenClient};

pub const ENDPOINT_ENV: &str = "TCPLAN_ENDPOINT";
pub const API_KEY_ENV: &str = "TCPLAN_API_KEY";

pub struct HttpTextGenClient {
    endpoint: String,
    api_key: Option<String>,
    model: Option<String>,
    client: reqwest::blocking::Client,
}

impl HttpTextGenClient {
    pub fn new(
        endpoint: String,
        model: Option<String>,
        timeout: Duration,
    ) -> Result<HttpTextGenClient, reqwest::Error> {
        Ok(HttpTextGenClient {
            endpoint,
            api_key: std::env::var(API_KEY_ENV).ok(),
            model,
            client: reqwest::blocking::Client::builder()
                .timeout(timeout)
                .build()?,
        })
    }
}

impl TextGenClient for HttpTextGenClient {
    fn complete(&self, prompt: &str, greedy: bool) -> Result<Completion, ClientError> {
        let mut body = json!({
            "messages": [{ "role": "user", "content": prompt }],
        });
        if let Some(model) = &self.model {
            body["model"] = json!(model);
        }
        if greedy {
            body["temperature"] = json!(0.0);
        }

        let mut request = self.client.post(&self.endpoint).json(&body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }

        let response = request.send().map_err(|e| {
            if e.is_timeout() || e.is_connect() {
                ClientError::Transient(e.to_string())
            } else {
                ClientError::Fatal(e.to_string())
            }
        })?;

        let status = response.status();
        let payload: Value = if status.is_success() {
            response
                .json()
                .map_err(|e| ClientError::Fatal(format!("malformed response body: {e}")))?
        } else if status.as_u16() == 429 || status.is_server_error() {
            return Err(ClientError::Transient(format!("HTTP {status}")));
        } else {
            return Err(ClientError::Fatal(format!("HTTP {status}")));
        };

        let text = payload["choices"][0]["message"]["content"]
            .as_str()
            .or_else(|| payload["choices"][0]["text"].as_str())
            .ok_or_else(|| ClientError::Fatal("response carries no completion text".into()))?
            .to_string();
        Ok(Completion {
            text,
            prompt_tokens: payload["usage"]["prompt_tokens"].as_u64(),
            output_tokens: payload["usage"]["completion_tokens"].as_u64(),
        })
    }
}
