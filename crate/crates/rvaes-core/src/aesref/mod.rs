//! Reference AES: a clarity-first software implementation of the cipher,
//! the key schedule and the four supported modes, cross-checked against
//! published known-answer vectors.
//!
//! This module is the correctness oracle for the extension unit and for
//! the generated programs. It deliberately shares no tables or round
//! code with [`crate::ext`]: the S-box here is the published lookup
//! table, the state is an explicit 4x4 grid, and the key schedule works
//! on big-endian 32-bit words, so agreement between the two paths is
//! evidence rather than tautology.

mod kat;

pub use kat::{corpus, KatVector};

use thiserror::Error;

use crate::config::{AesConfig, AesMode};

pub const BLOCK_BYTES: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RefError {
    #[error("plaintext length {0} is not a multiple of the 16-byte block size")]
    Length(usize),
    #[error("key length {got} does not match configured {want}-bit key")]
    KeyLength { got: usize, want: u32 },
}

// FIPS-197 S-box, as published.
#[rustfmt::skip]
pub(crate) const SBOX: [u8; 256] = [
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
];

const RCON: [u8; 10] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

// State grid: grid[col][row], column-major as in the standard.
type Grid = [[u8; 4]; 4];

fn to_grid(block: &[u8; 16]) -> Grid {
    let mut g = [[0u8; 4]; 4];
    for (i, b) in block.iter().enumerate() {
        g[i / 4][i % 4] = *b;
    }
    g
}

fn from_grid(g: &Grid) -> [u8; 16] {
    let mut out = [0u8; 16];
    for (i, b) in out.iter_mut().enumerate() {
        *b = g[i / 4][i % 4];
    }
    out
}

fn sub_word(w: u32, sbox: &[u8; 256]) -> u32 {
    let b = w.to_be_bytes();
    u32::from_be_bytes([
        sbox[b[0] as usize],
        sbox[b[1] as usize],
        sbox[b[2] as usize],
        sbox[b[3] as usize],
    ])
}

fn rot_word(w: u32) -> u32 {
    w.rotate_left(8)
}

/// FIPS-197 key schedule over big-endian words; returns 4*(rounds+1) words.
pub(crate) fn expand_key_words(key: &[u8], rounds: usize, sbox: &[u8; 256]) -> Vec<u32> {
    let nk = key.len() / 4;
    let total = 4 * (rounds + 1);
    let mut w = Vec::with_capacity(total);
    for chunk in key.chunks_exact(4) {
        w.push(u32::from_be_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]));
    }
    for i in nk..total {
        let mut temp = w[i - 1];
        if i % nk == 0 {
            temp = sub_word(rot_word(temp), sbox) ^ u32::from(RCON[i / nk - 1]) << 24;
        } else if nk > 6 && i % nk == 4 {
            temp = sub_word(temp, sbox);
        }
        w.push(w[i - nk] ^ temp);
    }
    w
}

fn add_round_key(g: &mut Grid, w: &[u32]) {
    for (c, col) in g.iter_mut().enumerate() {
        let k = w[c].to_be_bytes();
        for r in 0..4 {
            col[r] ^= k[r];
        }
    }
}

fn sub_bytes(g: &mut Grid, sbox: &[u8; 256]) {
    for col in g.iter_mut() {
        for b in col.iter_mut() {
            *b = sbox[*b as usize];
        }
    }
}

fn shift_rows(g: &mut Grid) {
    for r in 1..4 {
        let row = [g[0][r], g[1][r], g[2][r], g[3][r]];
        for c in 0..4 {
            g[c][r] = row[(c + r) % 4];
        }
    }
}

fn xtime(b: u8) -> u8 {
    (b << 1) ^ if b & 0x80 != 0 { 0x1b } else { 0 }
}

fn mix_columns(g: &mut Grid) {
    for col in g.iter_mut() {
        let [a0, a1, a2, a3] = *col;
        let t = a0 ^ a1 ^ a2 ^ a3;
        col[0] = a0 ^ t ^ xtime(a0 ^ a1);
        col[1] = a1 ^ t ^ xtime(a1 ^ a2);
        col[2] = a2 ^ t ^ xtime(a2 ^ a3);
        col[3] = a3 ^ t ^ xtime(a3 ^ a0);
    }
}

fn cipher_with_sbox(block: [u8; 16], w: &[u32], rounds: usize, sbox: &[u8; 256]) -> [u8; 16] {
    let mut g = to_grid(&block);
    add_round_key(&mut g, &w[0..4]);
    for round in 1..rounds {
        sub_bytes(&mut g, sbox);
        shift_rows(&mut g);
        mix_columns(&mut g);
        add_round_key(&mut g, &w[4 * round..4 * round + 4]);
    }
    sub_bytes(&mut g, sbox);
    shift_rows(&mut g);
    add_round_key(&mut g, &w[4 * rounds..4 * rounds + 4]);
    from_grid(&g)
}

/// Raw block cipher with the standard S-box.
pub fn cipher_block(block: [u8; 16], key: &[u8], rounds: usize) -> [u8; 16] {
    let w = expand_key_words(key, rounds, &SBOX);
    cipher_with_sbox(block, &w, rounds, &SBOX)
}

fn increment_counter(block: &mut [u8; 16]) {
    for b in block.iter_mut().rev() {
        *b = b.wrapping_add(1);
        if *b != 0 {
            break;
        }
    }
}

fn xor_block(a: &[u8; 16], b: &[u8; 16]) -> [u8; 16] {
    let mut out = [0u8; 16];
    for i in 0..16 {
        out[i] = a[i] ^ b[i];
    }
    out
}

/// Incremental mode encryptor. `position` counts processed blocks.
pub struct ModeStream {
    config: AesConfig,
    schedule: Vec<u32>,
    chain: [u8; 16],
    position: u64,
    sbox: &'static [u8; 256],
}

impl ModeStream {
    pub fn new(config: AesConfig, key: &[u8], iv: [u8; 16]) -> Result<ModeStream, RefError> {
        Self::with_sbox(config, key, iv, &SBOX)
    }

    fn with_sbox(
        config: AesConfig,
        key: &[u8],
        iv: [u8; 16],
        sbox: &'static [u8; 256],
    ) -> Result<ModeStream, RefError> {
        if key.len() != config.key_size.key_bytes() {
            return Err(RefError::KeyLength {
                got: key.len(),
                want: config.key_size.bits(),
            });
        }
        Ok(ModeStream {
            config,
            schedule: expand_key_words(key, config.rounds(), sbox),
            chain: iv,
            position: 0,
            sbox,
        })
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    fn cipher(&self, block: [u8; 16]) -> [u8; 16] {
        cipher_with_sbox(block, &self.schedule, self.config.rounds(), self.sbox)
    }

    pub fn process_block(&mut self, pt: &[u8; 16]) -> [u8; 16] {
        let ct = match self.config.mode {
            AesMode::Ecb => self.cipher(*pt),
            AesMode::Cbc => {
                let ct = self.cipher(xor_block(pt, &self.chain));
                self.chain = ct;
                ct
            }
            AesMode::Ctr => {
                let ks = self.cipher(self.chain);
                increment_counter(&mut self.chain);
                xor_block(pt, &ks)
            }
            AesMode::Cfb => {
                let ct = xor_block(pt, &self.cipher(self.chain));
                self.chain = ct;
                ct
            }
        };
        self.position += 1;
        ct
    }
}

/// Mode-correct encryption of whole blocks. Pure; empty input is allowed.
pub fn encrypt(
    config: AesConfig,
    key: &[u8],
    iv: [u8; 16],
    plaintext: &[u8],
) -> Result<Vec<u8>, RefError> {
    if !plaintext.len().is_multiple_of(BLOCK_BYTES) {
        return Err(RefError::Length(plaintext.len()));
    }
    let mut stream = ModeStream::new(config, key, iv)?;
    let mut out = Vec::with_capacity(plaintext.len());
    for chunk in plaintext.chunks_exact(BLOCK_BYTES) {
        let mut block = [0u8; 16];
        block.copy_from_slice(chunk);
        out.extend_from_slice(&stream.process_block(&block));
    }
    Ok(out)
}

/// Outcome of one known-answer vector.
#[derive(Debug, Clone)]
pub struct VectorOutcome {
    pub config: AesConfig,
    pub index: usize,
    pub pass: bool,
    pub expected: Vec<u8>,
    pub actual: Vec<u8>,
}

/// Per-combination grouping of the embedded vector corpus.
#[derive(Debug, Clone)]
pub struct SelfTestReport {
    pub groups: Vec<(AesConfig, Vec<VectorOutcome>)>,
}

impl SelfTestReport {
    pub fn all_passed(&self) -> bool {
        self.groups.iter().all(|(_, v)| v.iter().all(|o| o.pass))
    }

    pub fn vector_count(&self) -> usize {
        self.groups.iter().map(|(_, v)| v.len()).sum()
    }

    pub fn failures(&self) -> usize {
        self.groups
            .iter()
            .flat_map(|(_, v)| v)
            .filter(|o| !o.pass)
            .count()
    }
}

/// Runs the embedded known-answer corpus, grouped by the 12 mode x key
/// size combinations. Failures are report entries, never panics.
pub fn self_test() -> SelfTestReport {
    self_test_with_sbox(&SBOX)
}

fn self_test_with_sbox(sbox: &'static [u8; 256]) -> SelfTestReport {
    let mut groups: Vec<(AesConfig, Vec<VectorOutcome>)> =
        AesConfig::all().map(|c| (c, Vec::new())).collect();
    for (index, vec) in corpus().iter().enumerate() {
        let actual = ModeStream::with_sbox(vec.config, &vec.key, vec.iv, sbox)
            .map(|mut s| {
                let mut out = Vec::new();
                for chunk in vec.plaintext.chunks_exact(BLOCK_BYTES) {
                    let mut b = [0u8; 16];
                    b.copy_from_slice(chunk);
                    out.extend_from_slice(&s.process_block(&b));
                }
                out
            })
            .unwrap_or_default();
        let outcome = VectorOutcome {
            config: vec.config,
            index,
            pass: actual == vec.ciphertext,
            expected: vec.ciphertext.clone(),
            actual,
        };
        let slot = groups.iter_mut().find(|(c, _)| *c == vec.config).unwrap();
        slot.1.push(outcome);
    }
    SelfTestReport { groups }
}
