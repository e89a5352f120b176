//! The 256x32-bit high-bandwidth buffer set and the DM<->buffer
//! transfer operations.
//!
//! Layout (fixed; programs and the AES unit both rely on it):
//!
//! | words    | contents                                   |
//! |----------|--------------------------------------------|
//! | 0..=7    | cipher key, zero-padded for 128/192 bits   |
//! | 8..=11   | IV / initial counter block                 |
//! | 12..=133 | plaintext, up to 30 blocks of 4 words      |
//! | 134..=255| ciphertext, written by the AES unit        |
//!
//! Transfers are steered by two latched parameters: the DM byte address
//! (taken from x8) and the 32-bit word count (taken from x20), captured
//! by the SetParams instruction. LoadGo/StoreGo move `count` words
//! between DM and buffer words `0..count`.

use crate::config::KeySize;
use crate::isa::mem::MemoryImage;
use crate::isa::ExecError;

pub const BUFFER_WORDS: usize = 256;
pub const KEY_BASE: usize = 0;
pub const KEY_WORDS: usize = 8;
pub const IV_BASE: usize = 8;
pub const IV_WORDS: usize = 4;
pub const PT_BASE: usize = 12;
pub const PT_WORDS: usize = 122;
pub const CT_BASE: usize = 134;
pub const CT_WORDS: usize = 122;
/// Words 0..HEADER_WORDS hold key and IV; plaintext follows.
pub const HEADER_WORDS: usize = KEY_WORDS + IV_WORDS;
pub const MAX_BLOCKS: usize = PT_WORDS / 4;

/// Latched transfer parameters (SetParams captures x8 and x20 here).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransferParams {
    pub dm_addr: u32,
    pub word_count: u32,
}

/// The buffer array itself.
#[derive(Clone)]
pub struct BufferSet {
    words: [u32; BUFFER_WORDS],
}

impl Default for BufferSet {
    fn default() -> Self {
        BufferSet {
            words: [0; BUFFER_WORDS],
        }
    }
}

impl BufferSet {
    pub fn word(&self, index: usize) -> u32 {
        self.words[index]
    }

    pub fn set_word(&mut self, index: usize, value: u32) {
        self.words[index] = value;
    }

    pub fn words(&self) -> &[u32; BUFFER_WORDS] {
        &self.words
    }

    /// Key bytes in stream order (little-endian within each word).
    pub fn key_bytes(&self, key_size: KeySize) -> Vec<u8> {
        self.region_bytes(KEY_BASE, key_size.key_bytes())
    }

    pub fn iv_bytes(&self) -> [u8; 16] {
        self.region_bytes(IV_BASE, 16).try_into().unwrap()
    }

    pub fn plaintext_block(&self, index: usize) -> [u8; 16] {
        self.region_bytes(PT_BASE + 4 * index, 16).try_into().unwrap()
    }

    pub fn ciphertext_block(&self, index: usize) -> [u8; 16] {
        self.region_bytes(CT_BASE + 4 * index, 16).try_into().unwrap()
    }

    pub fn set_ciphertext_block(&mut self, index: usize, block: &[u8; 16]) {
        self.set_region_bytes(CT_BASE + 4 * index, block);
    }

    /// Writes a byte string into consecutive words starting at `base`,
    /// little-endian within each word, zero-padding the last word.
    pub fn set_region_bytes(&mut self, base: usize, bytes: &[u8]) {
        for (i, chunk) in bytes.chunks(4).enumerate() {
            let mut word = [0u8; 4];
            word[..chunk.len()].copy_from_slice(chunk);
            self.words[base + i] = u32::from_le_bytes(word);
        }
    }

    fn region_bytes(&self, base: usize, len: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(len);
        for i in 0..len.div_ceil(4) {
            out.extend_from_slice(&self.words[base + i].to_le_bytes());
        }
        out.truncate(len);
        out
    }
}

/// Buffer set plus its latched transfer parameters.
#[derive(Clone, Default)]
pub struct BufferUnit {
    pub set: BufferSet,
    pub params: TransferParams,
}

impl BufferUnit {
    /// Number of plaintext blocks implied by the latched word count:
    /// the load that filled the buffer covered key + IV + plaintext, so
    /// the count beyond the 12 header words must be a positive multiple
    /// of 4 words within the plaintext region.
    pub fn declared_blocks(&self) -> Result<usize, ExecError> {
        let count = self.params.word_count as usize;
        if count < HEADER_WORDS + 4 {
            return Err(ExecError::LayoutFault(format!(
                "latched count {count} leaves no plaintext beyond the {HEADER_WORDS}-word header"
            )));
        }
        let pt_words = count - HEADER_WORDS;
        if !pt_words.is_multiple_of(4) {
            return Err(ExecError::LayoutFault(format!(
                "latched count {count} is not a whole number of blocks"
            )));
        }
        let blocks = pt_words / 4;
        if blocks > MAX_BLOCKS {
            return Err(ExecError::LayoutFault(format!(
                "{blocks} blocks exceed the {MAX_BLOCKS}-block plaintext region"
            )));
        }
        Ok(blocks)
    }

    fn check_transfer(&self, mem: &MemoryImage) -> Result<(), ExecError> {
        let count = self.params.word_count;
        if count as usize > BUFFER_WORDS {
            return Err(ExecError::BufferOverflow { count });
        }
        let addr = self.params.dm_addr;
        if !addr.is_multiple_of(4) {
            return Err(ExecError::dm_fault_unaligned(addr, 4));
        }
        let end = u64::from(addr) + 4 * u64::from(count);
        if end > mem.dm_size() as u64 {
            return Err(ExecError::dm_fault_range(addr, 4 * count));
        }
        Ok(())
    }
}

/// DM -> buffer transfer of the latched word count. Returns the number
/// of words moved; DM is unchanged.
pub fn buffer_load(mem: &MemoryImage, unit: &mut BufferUnit) -> Result<u32, ExecError> {
    unit.check_transfer(mem)?;
    let TransferParams { dm_addr, word_count } = unit.params;
    for i in 0..word_count {
        let w = mem.load_dm_word(dm_addr + 4 * i)?;
        unit.set.set_word(i as usize, w);
    }
    Ok(word_count)
}

/// Buffer -> DM transfer of the latched word count; buffer unchanged.
pub fn buffer_store(unit: &BufferUnit, mem: &mut MemoryImage) -> Result<u32, ExecError> {
    unit.check_transfer(mem)?;
    let TransferParams { dm_addr, word_count } = unit.params;
    for i in 0..word_count {
        mem.store_dm_word(dm_addr + 4 * i, unit.set.word(i as usize))?;
    }
    Ok(word_count)
}
