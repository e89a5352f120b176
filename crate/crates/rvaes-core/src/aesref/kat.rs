//! Embedded known-answer vector corpus.
//!
//! The corpus lives in `data/kat_vectors.txt` as plain text, one vector
//! per line: `mode keybits key iv plaintext ciphertext`, all hex except
//! the first two fields. `#` starts a comment.

use std::sync::OnceLock;

use crate::config::{AesConfig, AesMode, KeySize};

const RAW: &str = include_str!("../../data/kat_vectors.txt");

#[derive(Debug, Clone)]
pub struct KatVector {
    pub config: AesConfig,
    pub key: Vec<u8>,
    pub iv: [u8; 16],
    pub plaintext: Vec<u8>,
    pub ciphertext: Vec<u8>,
}

fn parse_hex(s: &str) -> Option<Vec<u8>> {
    if !s.len().is_multiple_of(2) {
        return None;
    }
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&s[i..i + 2], 16).ok())
        .collect()
}

fn parse_line(line: &str) -> Option<KatVector> {
    let mut fields = line.split_whitespace();
    let mode = AesMode::parse(fields.next()?)?;
    let bits: u32 = fields.next()?.parse().ok()?;
    let key_size = KeySize::from_bits(bits)?;
    let key = parse_hex(fields.next()?)?;
    let iv: [u8; 16] = parse_hex(fields.next()?)?.try_into().ok()?;
    let plaintext = parse_hex(fields.next()?)?;
    let ciphertext = parse_hex(fields.next()?)?;
    if key.len() != key_size.key_bytes() || plaintext.len() != ciphertext.len() {
        return None;
    }
    Some(KatVector {
        config: AesConfig::new(mode, key_size),
        key,
        iv,
        plaintext,
        ciphertext,
    })
}

/// The embedded corpus: FIPS-197 Appendix C plus the four-block
/// SP 800-38A Appendix F vectors for all twelve combinations.
pub fn corpus() -> &'static [KatVector] {
    static CORPUS: OnceLock<Vec<KatVector>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        RAW.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| parse_line(l).unwrap_or_else(|| panic!("malformed vector line: {l}")))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let vectors = corpus();
        assert_eq!(vectors.len(), 15);
        // Every one of the 12 combinations is covered.
        for cfg in AesConfig::all() {
            assert!(vectors.iter().any(|v| v.config == cfg), "missing {cfg}");
        }
        // The three single-block vectors are ECB.
        assert_eq!(
            vectors.iter().filter(|v| v.plaintext.len() == 16).count(),
            3
        );
    }
}
