//! Cipher configuration: mode and key size selectors shared by the
//! extension unit, the reference implementation and the tooling.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Block cipher mode of operation supported by the AES unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AesMode {
    Ecb,
    Cbc,
    Ctr,
    Cfb,
}

impl AesMode {
    pub const ALL: [AesMode; 4] = [AesMode::Ecb, AesMode::Cbc, AesMode::Ctr, AesMode::Cfb];

    /// Chained modes feed each block's result into the next block's
    /// cipher input, so blocks cannot overlap in the cipher pipeline.
    pub fn is_chained(self) -> bool {
        matches!(self, AesMode::Cbc | AesMode::Cfb)
    }

    pub fn name(self) -> &'static str {
        match self {
            AesMode::Ecb => "ECB",
            AesMode::Cbc => "CBC",
            AesMode::Ctr => "CTR",
            AesMode::Cfb => "CFB",
        }
    }

    pub fn parse(s: &str) -> Option<AesMode> {
        match s.to_ascii_uppercase().as_str() {
            "ECB" => Some(AesMode::Ecb),
            "CBC" => Some(AesMode::Cbc),
            "CTR" => Some(AesMode::Ctr),
            "CFB" => Some(AesMode::Cfb),
            _ => None,
        }
    }
}

impl fmt::Display for AesMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cipher key size. The round count is derived, never stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KeySize {
    K128,
    K192,
    K256,
}

impl KeySize {
    pub const ALL: [KeySize; 3] = [KeySize::K128, KeySize::K192, KeySize::K256];

    pub fn bits(self) -> u32 {
        match self {
            KeySize::K128 => 128,
            KeySize::K192 => 192,
            KeySize::K256 => 256,
        }
    }

    pub fn key_bytes(self) -> usize {
        self.bits() as usize / 8
    }

    /// Key words (Nk in the standard's terms).
    pub fn key_words(self) -> usize {
        self.key_bytes() / 4
    }

    pub fn rounds(self) -> usize {
        match self {
            KeySize::K128 => 10,
            KeySize::K192 => 12,
            KeySize::K256 => 14,
        }
    }

    pub fn from_bits(bits: u32) -> Option<KeySize> {
        match bits {
            128 => Some(KeySize::K128),
            192 => Some(KeySize::K192),
            256 => Some(KeySize::K256),
            _ => None,
        }
    }
}

impl fmt::Display for KeySize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits())
    }
}

/// A (mode, key size) pair; twelve combinations exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AesConfig {
    pub mode: AesMode,
    pub key_size: KeySize,
}

impl AesConfig {
    pub fn new(mode: AesMode, key_size: KeySize) -> AesConfig {
        AesConfig { mode, key_size }
    }

    pub fn rounds(&self) -> usize {
        self.key_size.rounds()
    }

    /// All twelve mode x key-size combinations, in a fixed order.
    pub fn all() -> impl Iterator<Item = AesConfig> {
        AesMode::ALL
            .into_iter()
            .flat_map(|m| KeySize::ALL.into_iter().map(move |k| AesConfig::new(m, k)))
    }

    /// Label of the form `ECB-128`, accepted back by [`AesConfig::parse`].
    pub fn label(&self) -> String {
        format!("{}-{}", self.mode, self.key_size)
    }

    pub fn parse(s: &str) -> Option<AesConfig> {
        let (mode, bits) = s.split_once('-')?;
        Some(AesConfig::new(
            AesMode::parse(mode)?,
            KeySize::from_bits(bits.parse().ok()?)?,
        ))
    }
}

impl fmt::Display for AesConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.mode, self.key_size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_follow_key_size() {
        assert_eq!(KeySize::K128.rounds(), 10);
        assert_eq!(KeySize::K192.rounds(), 12);
        assert_eq!(KeySize::K256.rounds(), 14);
    }

    #[test]
    fn twelve_combinations() {
        let all: Vec<_> = AesConfig::all().collect();
        assert_eq!(all.len(), 12);
        for c in &all {
            assert_eq!(AesConfig::parse(&c.label()), Some(*c));
        }
    }
}
