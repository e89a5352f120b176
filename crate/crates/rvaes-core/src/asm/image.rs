//! Hex image files: one 32-bit word per line as eight hex digits
//! (an optional `0x` prefix is accepted), `#` comments and blank lines
//! ignored. Word k of the file is the word at IM byte address 4k; the
//! four bytes land in memory little-endian.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ImageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ImageError {}

pub fn parse_image(text: &str) -> Result<Vec<u32>, ImageError> {
    let mut words = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let digits = line
            .strip_prefix("0x")
            .or_else(|| line.strip_prefix("0X"))
            .unwrap_or(line);
        let word = u32::from_str_radix(digits, 16).map_err(|_| ImageError {
            line: idx + 1,
            message: format!("`{line}` is not a 32-bit hex word"),
        })?;
        words.push(word);
    }
    Ok(words)
}

pub fn write_image(words: &[u32]) -> String {
    let mut out = String::new();
    for w in words {
        writeln!(out, "{w:08x}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let words = vec![0x0050_0093, 0xdead_beef, 0, u32::MAX];
        assert_eq!(parse_image(&write_image(&words)).unwrap(), words);
    }

    #[test]
    fn accepts_prefixes_and_comments() {
        let text = "# header\n0x00500093\n\ndeadbeef  # trailing\n";
        assert_eq!(parse_image(text).unwrap(), vec![0x0050_0093, 0xdead_beef]);
    }

    #[test]
    fn rejects_garbage_with_line_number() {
        let e = parse_image("00500093\nnot-hex\n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
