//! Answer clients: exact-oracle and random mocks, scripted transcript
//! replay, and an OpenAI-compatible chat-completions client with retries
//! and rate limiting.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use eedp_core::benchmark::{Task, TestCase};
use eedp_core::flatten::FlattenMethod;
use eedp_core::graph::{reachable, shortest_distance, Graph};

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("authentication failed: {0}")]
    Auth(String),

    #[error("timed out after retries: {0}")]
    Timeout(String),

    #[error("transport error: {0}")]
    Transport(String),

    #[error("malformed response: {0}")]
    MalformedResponse(String),

    #[error("client configuration error: {0}")]
    Config(String),
}

/// Everything a client may consult besides the prompt text. Mock clients
/// answer from the case and graph; the HTTP client ignores them.
pub struct QueryContext<'a> {
    pub case: &'a TestCase,
    pub graph: &'a Graph,
    pub method: FlattenMethod,
}

/// A source of raw answer text for prompts.
pub trait AnswerClient: Send + Sync {
    fn name(&self) -> String;
    fn complete(&self, prompt: &str, ctx: &QueryContext) -> Result<String, ClientError>;
}

/// Answers every case from the exact graph oracles. End-to-end runs with
/// this client must grade 100% correct.
#[derive(Debug, Default, Clone, Copy)]
pub struct OracleClient;

impl AnswerClient for OracleClient {
    fn name(&self) -> String {
        "oracle".to_string()
    }

    fn complete(&self, _prompt: &str, ctx: &QueryContext) -> Result<String, ClientError> {
        let case = ctx.case;
        Ok(match case.task {
            Task::EpCp => {
                if reachable(ctx.graph, case.src, case.dst)
                    .map_err(|e| ClientError::Config(e.to_string()))?
                {
                    "yes".to_string()
                } else {
                    "no".to_string()
                }
            }
            Task::EpDp => match shortest_distance(ctx.graph, case.src, case.dst, true)
                .map_err(|e| ClientError::Config(e.to_string()))?
            {
                Some(d) => d.to_string(),
                None => "-1".to_string(),
            },
        })
    }
}

/// The random baseline: uniform yes/no for connectivity, a uniform integer
/// in `[-1, node_count]` for distance. Deterministic per (seed, case,
/// method) so resumed or reordered runs reproduce the same answers.
#[derive(Debug, Clone, Copy)]
pub struct RandomClient {
    pub seed: u64,
}

impl AnswerClient for RandomClient {
    fn name(&self) -> String {
        format!("random(seed={})", self.seed)
    }

    fn complete(&self, _prompt: &str, ctx: &QueryContext) -> Result<String, ClientError> {
        let mut h: u64 = self.seed ^ 0x9e3779b97f4a7c15;
        for b in ctx.case.key().bytes().chain(ctx.method.name().bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(h);
        Ok(match ctx.case.task {
            Task::EpCp => {
                if rng.gen_bool(0.5) {
                    "yes".to_string()
                } else {
                    "no".to_string()
                }
            }
            Task::EpDp => rng
                .gen_range(-1..=ctx.graph.node_count() as i64)
                .to_string(),
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TranscriptLine {
    key: String,
    method: String,
    response: String,
}

/// Replays recorded responses keyed on (case, method); used for offline
/// regression runs.
pub struct ScriptedClient {
    responses: HashMap<(String, String), String>,
    label: String,
}

impl ScriptedClient {
    pub fn from_jsonl_file(path: &Path) -> Result<ScriptedClient, ClientError> {
        let file = std::fs::File::open(path)
            .map_err(|e| ClientError::Config(format!("cannot open transcript: {e}")))?;
        let mut responses = HashMap::new();
        for line in std::io::BufReader::new(file).lines() {
            let line = line.map_err(|e| ClientError::Config(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let t: TranscriptLine = serde_json::from_str(&line)
                .map_err(|e| ClientError::Config(format!("bad transcript line: {e}")))?;
            responses.insert((t.key, t.method), t.response);
        }
        Ok(ScriptedClient {
            responses,
            label: format!("scripted:{}", path.display()),
        })
    }

    pub fn from_pairs(pairs: Vec<((String, String), String)>) -> ScriptedClient {
        ScriptedClient {
            responses: pairs.into_iter().collect(),
            label: "scripted:inline".to_string(),
        }
    }

    /// Serialize one transcript line; the counterpart of the loader.
    pub fn transcript_line(case: &TestCase, method: FlattenMethod, response: &str) -> String {
        serde_json::to_string(&TranscriptLine {
            key: case.key(),
            method: method.name().to_string(),
            response: response.to_string(),
        })
        .expect("transcript line serializes")
    }
}

impl AnswerClient for ScriptedClient {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn complete(&self, _prompt: &str, ctx: &QueryContext) -> Result<String, ClientError> {
        let key = (ctx.case.key(), ctx.method.name().to_string());
        self.responses
            .get(&key)
            .cloned()
            .ok_or_else(|| ClientError::Config(format!("no scripted response for {key:?}")))
    }
}

/// Spaces request starts so a configured requests-per-minute budget is
/// honored across worker threads.
pub struct RateLimiter {
    min_interval: Duration,
    next_slot: Mutex<Instant>,
}

impl RateLimiter {
    pub fn new(requests_per_minute: Option<u32>) -> RateLimiter {
        let min_interval = match requests_per_minute {
            Some(rpm) if rpm > 0 => Duration::from_secs_f64(60.0 / rpm as f64),
            _ => Duration::ZERO,
        };
        RateLimiter {
            min_interval,
            next_slot: Mutex::new(Instant::now()),
        }
    }

    /// Block until a request may start.
    pub fn acquire(&self) {
        if self.min_interval.is_zero() {
            return;
        }
        let wait = {
            let mut slot = self.next_slot.lock().expect("limiter lock");
            let now = Instant::now();
            let at = (*slot).max(now);
            *slot = at + self.min_interval;
            at.saturating_duration_since(now)
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }
}

/// Settings for the OpenAI-compatible chat-completions endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HttpClientConfig {
    /// Base URL, e.g. `https://api.openai.com`.
    pub base_url: String,
    pub model: String,
    /// Bearer token; read from the environment by the CLI.
    pub api_key: Option<String>,
    pub timeout_secs: u64,
    pub max_retries: u32,
    /// Base backoff delay; doubles per attempt.
    pub backoff_ms: u64,
}

impl Default for HttpClientConfig {
    fn default() -> Self {
        HttpClientConfig {
            base_url: "https://api.openai.com".to_string(),
            model: "gpt-4-turbo".to_string(),
            api_key: None,
            timeout_secs: 120,
            max_retries: 5,
            backoff_ms: 500,
        }
    }
}

/// Blocking chat-completions client with temperature 0 and exponential
/// backoff on transient failures.
pub struct HttpClient {
    cfg: HttpClientConfig,
    http: reqwest::blocking::Client,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: Vec<ChatMessage<'a>>,
    temperature: f64,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatResponseMessage,
}

#[derive(Deserialize)]
struct ChatResponseMessage {
    content: Option<String>,
}

impl HttpClient {
    pub fn new(cfg: HttpClientConfig) -> Result<HttpClient, ClientError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_secs))
            .build()
            .map_err(|e| ClientError::Config(e.to_string()))?;
        Ok(HttpClient { cfg, http })
    }

    fn attempt(&self, prompt: &str) -> Result<String, ClientError> {
        let url = format!(
            "{}/v1/chat/completions",
            self.cfg.base_url.trim_end_matches('/')
        );
        let body = ChatRequest {
            model: &self.cfg.model,
            messages: vec![ChatMessage {
                role: "user",
                content: prompt,
            }],
            temperature: 0.0,
        };
        let mut req = self.http.post(&url).json(&body);
        if let Some(key) = &self.cfg.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| {
            if e.is_timeout() {
                ClientError::Timeout(e.to_string())
            } else {
                ClientError::Transport(e.to_string())
            }
        })?;
        let status = resp.status();
        if status.as_u16() == 401 || status.as_u16() == 403 {
            return Err(ClientError::Auth(format!("endpoint returned {status}")));
        }
        if status.as_u16() == 429 || status.is_server_error() {
            return Err(ClientError::Transport(format!("endpoint returned {status}")));
        }
        if !status.is_success() {
            return Err(ClientError::MalformedResponse(format!(
                "endpoint returned {status}"
            )));
        }
        let parsed: ChatResponse = resp
            .json()
            .map_err(|e| ClientError::MalformedResponse(e.to_string()))?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| ClientError::MalformedResponse("no choices in response".to_string()))
    }
}

impl AnswerClient for HttpClient {
    fn name(&self) -> String {
        format!("http:{}/{}", self.cfg.base_url, self.cfg.model)
    }

    fn complete(&self, prompt: &str, _ctx: &QueryContext) -> Result<String, ClientError> {
        let mut last = None;
        for attempt in 0..=self.cfg.max_retries {
            match self.attempt(prompt) {
                Ok(text) => return Ok(text),
                // Auth and malformed responses will not improve on retry.
                Err(e @ (ClientError::Auth(_) | ClientError::MalformedResponse(_))) => {
                    return Err(e)
                }
                Err(e) => last = Some(e),
            }
            if attempt < self.cfg.max_retries {
                let delay = self.cfg.backoff_ms.saturating_mul(1 << attempt.min(10));
                std::thread::sleep(Duration::from_millis(delay));
            }
        }
        Err(last.unwrap_or_else(|| ClientError::Transport("no attempts made".to_string())))
    }
}
