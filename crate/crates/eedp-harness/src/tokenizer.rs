//! Pluggable token counting.
//!
//! The default heuristic divides byte length by four and is clearly labeled
//! approximate. For exact counts a byte-pair-encoding vocabulary in the
//! common `<base64-token> <rank>` line format can be loaded; its merge loop
//! is exact BPE, while pre-tokenization is a close approximation of the
//! reference splitter (good on the ASCII-heavy graph texts counted here).

use std::collections::HashMap;
use std::path::Path;

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use thiserror::Error;

use eedp_core::flatten::heuristic_token_count;

#[derive(Debug, Error)]
pub enum TokenizerError {
    #[error("cannot read vocabulary file: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed vocabulary line {line}: {reason}")]
    MalformedVocab { line: usize, reason: String },
}

/// Counts tokens in a text.
pub trait TokenCounter: Send + Sync {
    fn count(&self, text: &str) -> usize;
    fn name(&self) -> String;
}

/// Byte-length/4 estimate, rounded up.
#[derive(Debug, Default, Clone, Copy)]
pub struct HeuristicTokenizer;

impl TokenCounter for HeuristicTokenizer {
    fn count(&self, text: &str) -> usize {
        heuristic_token_count(text)
    }

    fn name(&self) -> String {
        "heuristic-bytes/4".to_string()
    }
}

/// Byte-pair encoder over a rank table.
pub struct BpeTokenizer {
    ranks: HashMap<Vec<u8>, u32>,
    label: String,
}

impl BpeTokenizer {
    /// Load a vocabulary file with one `<base64 token> <rank>` pair per line.
    pub fn from_vocab_file(path: &Path) -> Result<BpeTokenizer, TokenizerError> {
        let data = std::fs::read_to_string(path)?;
        let mut ranks = HashMap::new();
        for (lineno, line) in data.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (tok, rank) = line
                .split_once(' ')
                .ok_or_else(|| TokenizerError::MalformedVocab {
                    line: lineno + 1,
                    reason: "expected \"<base64> <rank>\"".to_string(),
                })?;
            let bytes = B64
                .decode(tok)
                .map_err(|e| TokenizerError::MalformedVocab {
                    line: lineno + 1,
                    reason: format!("bad base64: {e}"),
                })?;
            let rank: u32 = rank
                .trim()
                .parse()
                .map_err(|_| TokenizerError::MalformedVocab {
                    line: lineno + 1,
                    reason: "bad rank".to_string(),
                })?;
            ranks.insert(bytes, rank);
        }
        Ok(BpeTokenizer {
            ranks,
            label: format!("bpe:{}", path.display()),
        })
    }

    /// Build from an in-memory rank table (used by tests).
    pub fn from_ranks(ranks: HashMap<Vec<u8>, u32>, label: &str) -> BpeTokenizer {
        BpeTokenizer {
            ranks,
            label: label.to_string(),
        }
    }

    /// Number of BPE tokens for one pre-tokenized piece.
    fn count_piece(&self, piece: &[u8]) -> usize {
        if piece.is_empty() {
            return 0;
        }
        if piece.len() == 1 || self.ranks.contains_key(piece) {
            return 1;
        }
        // Start from single bytes, repeatedly merge the lowest-rank pair.
        let mut parts: Vec<Vec<u8>> = piece.iter().map(|&b| vec![b]).collect();
        loop {
            let mut best: Option<(u32, usize)> = None;
            for i in 0..parts.len() - 1 {
                let mut cand = parts[i].clone();
                cand.extend_from_slice(&parts[i + 1]);
                if let Some(&rank) = self.ranks.get(&cand) {
                    if best.map_or(true, |(r, _)| rank < r) {
                        best = Some((rank, i));
                    }
                }
            }
            match best {
                Some((_, i)) => {
                    let right = parts.remove(i + 1);
                    parts[i].extend_from_slice(&right);
                }
                None => break,
            }
        }
        parts.len()
    }
}

impl TokenCounter for BpeTokenizer {
    fn count(&self, text: &str) -> usize {
        pre_tokenize(text).map(|p| self.count_piece(p)).sum()
    }

    fn name(&self) -> String {
        self.label.clone()
    }
}

/// Count tokens with a configured tokenizer.
pub fn count_tokens(text: &str, tokenizer: &dyn TokenCounter) -> usize {
    tokenizer.count(text)
}

/// Approximate GPT-style pre-tokenization: an optional leading space glues
/// to the following letter or digit run; digits split into groups of at
/// most three; punctuation runs keep one leading space; other whitespace
/// splits into its own runs.
fn pre_tokenize(text: &str) -> impl Iterator<Item = &[u8]> {
    let bytes = text.as_bytes();
    let mut pieces = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let mut j = i;
        // A single space may prefix the next run.
        if bytes[j] == b' ' && j + 1 < bytes.len() && !bytes[j + 1].is_ascii_whitespace() {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_alphabetic() {
            while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                j += 1;
            }
            pieces.push(&bytes[start..j]);
        } else if j < bytes.len() && bytes[j].is_ascii_digit() {
            let mut digits = 0;
            while j < bytes.len() && bytes[j].is_ascii_digit() && digits < 3 {
                j += 1;
                digits += 1;
            }
            pieces.push(&bytes[start..j]);
        } else if j < bytes.len() && !bytes[j].is_ascii_whitespace() {
            while j < bytes.len() && !bytes[j].is_ascii_whitespace() && !bytes[j].is_ascii_alphanumeric()
            {
                j += 1;
            }
            pieces.push(&bytes[start..j]);
        } else {
            // Whitespace run (the glued-space case was handled above).
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            pieces.push(&bytes[start..j]);
        }
        i = j;
    }
    pieces.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heuristic_examples() {
        let t = HeuristicTokenizer;
        assert_eq!(t.count(""), 0);
        assert_eq!(t.count(&"a".repeat(400)), 100);
        assert_eq!(t.count("ab"), 1);
    }

    fn tiny_vocab() -> BpeTokenizer {
        let mut ranks = HashMap::new();
        // Ranks control merge order: "ab" merges before "abc" can form.
        ranks.insert(b"ab".to_vec(), 0);
        ranks.insert(b"abc".to_vec(), 1);
        ranks.insert(b" x".to_vec(), 2);
        ranks.insert(b"12".to_vec(), 3);
        BpeTokenizer::from_ranks(ranks, "tiny")
    }

    #[test]
    fn bpe_merges_by_rank() {
        let t = tiny_vocab();
        // "abc" -> [ab, c]: pair (a,b) has rank 0, then (ab,c) has rank 1.
        assert_eq!(t.count("abc"), 1);
        // "abd": ab merges, d stays.
        assert_eq!(t.count("abd"), 2);
        // Unknown bytes stay single.
        assert_eq!(t.count("zq"), 2);
    }

    #[test]
    fn bpe_glues_leading_space() {
        let t = tiny_vocab();
        // " x" is one piece and one known token.
        assert_eq!(t.count(" x"), 1);
    }

    #[test]
    fn bpe_splits_long_digit_runs() {
        let t = tiny_vocab();
        // "1234" -> pieces "123", "4": "12" merges inside the first.
        assert_eq!(t.count("1234"), 3);
    }

    #[test]
    fn vocab_file_round_trip() {
        let dir = std::env::temp_dir().join("eedp-bpe-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tiny.vocab");
        let mut lines = String::new();
        for (tok, rank) in [("ab", 0), ("abc", 1)] {
            lines.push_str(&format!("{} {rank}\n", B64.encode(tok)));
        }
        std::fs::write(&path, lines).unwrap();
        let t = BpeTokenizer::from_vocab_file(&path).unwrap();
        assert_eq!(t.count("abc"), 1);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn missing_vocab_file_errors() {
        let err = BpeTokenizer::from_vocab_file(Path::new("/nonexistent/vocab.bpe"));
        assert!(matches!(err, Err(TokenizerError::Io(_))));
    }

    #[test]
    fn pre_tokenizer_shapes() {
        let pieces: Vec<&[u8]> = pre_tokenize("node 12 -> (1 | 2)").collect();
        let strs: Vec<&str> = pieces
            .iter()
            .map(|p| std::str::from_utf8(p).unwrap())
            .collect();
        assert_eq!(strs, vec!["node", " 12", " ->", " (", "1", " |", " 2", ")"]);
    }
}
