//! Evaluation harness: prompts, endpoint clients, token accounting,
//! threaded benchmark execution with resumable results, and report
//! aggregation in the 1/2/3/>=5-hop table layout.

pub mod client;
pub mod prompt;
pub mod report;
pub mod runner;
pub mod tokenizer;

pub use client::{
    AnswerClient, ClientError, HttpClient, HttpClientConfig, OracleClient, QueryContext,
    RandomClient, RateLimiter, ScriptedClient,
};
pub use prompt::{build_prompt, PromptRecord, TEMPLATE_VERSION};
pub use report::{aggregate, Report, ReportRow};
pub use runner::{
    parse_answer, read_results, run_benchmark, EvalRecord, ParsedAnswer, RunError, RunSettings,
};
pub use tokenizer::{count_tokens, BpeTokenizer, HeuristicTokenizer, TokenCounter, TokenizerError};
