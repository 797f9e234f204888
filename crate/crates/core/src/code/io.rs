use serde::{Deserialize, Serialize};
use std::path::Path;

use super::{Alphabet, Code, Token};
use crate::error::{Error, Result};
use crate::FORMAT_VERSION;

/// On-disk code:
/// `{"format": 1, "q", "alphabet", "n", "k", "linear", "words"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeFile {
    #[serde(default = "default_format")]
    pub format: u32,
    pub q: usize,
    pub alphabet: Vec<Token>,
    pub n: usize,
    pub k: f64,
    #[serde(default)]
    pub linear: Option<bool>,
    pub words: Vec<Vec<Token>>,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

impl CodeFile {
    pub fn from_code(code: &Code) -> Self {
        let symbols = code.alphabet().symbols();
        Self {
            format: FORMAT_VERSION,
            q: code.q(),
            alphabet: symbols.to_vec(),
            n: code.n(),
            k: match code.dimension() {
                Some(k) => k as f64,
                None => code.log_size(),
            },
            linear: Some(code.is_linear()),
            words: code
                .words()
                .iter()
                .map(|w| w.iter().map(|&s| symbols[s as usize].clone()).collect())
                .collect(),
        }
    }

    pub fn into_code(self) -> Result<Code> {
        if self.format != FORMAT_VERSION {
            return Err(Error::InvalidCode(format!("unsupported format {}", self.format)));
        }
        let alphabet = Alphabet::new(self.alphabet)?;
        if alphabet.q() != self.q {
            return Err(Error::InvalidCode(format!(
                "q={} but the alphabet has {} symbols",
                self.q,
                alphabet.q()
            )));
        }
        let words = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                w.iter()
                    .map(|t| {
                        alphabet
                            .index_of(t)
                            .ok_or_else(|| Error::InvalidCode(format!("word {}: unknown symbol {t}", i + 1)))
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let code = Code::new(alphabet, self.n, words, self.linear)?;
        let declared_integral = self.k.fract() == 0.0;
        let consistent = match code.dimension() {
            Some(k) if declared_integral => k as f64 == self.k,
            _ if declared_integral => false,
            _ => (code.log_size() - self.k).abs() < 1e-9,
        };
        if !consistent {
            return Err(Error::InvalidCode(format!(
                "declared k={} but the code has {} words over q={}",
                self.k,
                code.len(),
                code.q()
            )));
        }
        Ok(code)
    }

    pub fn read(path: &Path) -> Result<Code> {
        let raw = std::fs::read_to_string(path)?;
        let file: CodeFile = serde_json::from_str(&raw)?;
        file.into_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let code = Code::binary(3, vec![vec![0, 0, 0], vec![1, 1, 1]], None).unwrap();
        let json = serde_json::to_string(&CodeFile::from_code(&code)).unwrap();
        assert_eq!(
            json,
            r#"{"format":1,"q":2,"alphabet":[0,1],"n":3,"k":1.0,"linear":true,"words":[[0,0,0],[1,1,1]]}"#
        );
        let back: CodeFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_code().unwrap().words(), code.words());
    }

    #[test]
    fn string_tokens_and_missing_format() {
        let json = r#"{"q":3,"alphabet":["a","b","c"],"n":3,"k":1,"linear":null,
                      "words":[["a","b","c"],["b","c","a"],["c","a","b"]]}"#;
        let code = serde_json::from_str::<CodeFile>(json).unwrap().into_code().unwrap();
        assert_eq!(code.q(), 3);
        assert_eq!(code.dimension(), Some(1));
    }

    #[test]
    fn rejects_inconsistent_k() {
        let json = r#"{"q":2,"alphabet":[0,1],"n":2,"k":2,"words":[[0,0],[1,1]]}"#;
        let file: CodeFile = serde_json::from_str(json).unwrap();
        assert!(file.into_code().is_err());
    }

    #[test]
    fn rejects_unknown_symbols_and_versions() {
        let json = r#"{"q":2,"alphabet":[0,1],"n":1,"k":1,"words":[[0],[2]]}"#;
        assert!(serde_json::from_str::<CodeFile>(json).unwrap().into_code().is_err());
        let json = r#"{"format":2,"q":2,"alphabet":[0,1],"n":1,"k":1,"words":[[0],[1]]}"#;
        assert!(serde_json::from_str::<CodeFile>(json).unwrap().into_code().is_err());
    }
}
