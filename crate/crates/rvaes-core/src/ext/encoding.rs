//! Extension instruction encodings.
//!
//! The table is loaded from `data/extension_encoding.json`, the
//! machine-readable form of this ISA extension's ABI. Three major
//! opcodes (the standard custom-0/1/2 slots) select the key size of an
//! AES instruction and func3 selects the mode; a fourth opcode
//! (custom-3) carries the buffer-access instructions, with func3
//! distinguishing parameter latch, load-go and store-go.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::config::{AesConfig, AesMode, KeySize};

const ENCODING_JSON: &str = include_str!("../../data/extension_encoding.json");

/// RV32I base major opcodes, used to assert the extension collides with
/// none of them.
pub const BASE_OPCODES: [u8; 11] = [
    0x37, 0x17, 0x6f, 0x67, 0x63, 0x03, 0x23, 0x13, 0x33, 0x0f, 0x73,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BufferOp {
    SetParams,
    LoadGo,
    StoreGo,
}

impl BufferOp {
    pub fn mnemonic(self) -> &'static str {
        match self {
            BufferOp::SetParams => "buf.set",
            BufferOp::LoadGo => "buf.loadgo",
            BufferOp::StoreGo => "buf.storego",
        }
    }
}

#[derive(Deserialize)]
struct RawEncoding {
    version: u32,
    aes_opcodes: BTreeMap<String, String>,
    aes_func3: BTreeMap<String, u8>,
    buffer_opcode: String,
    buffer_func3: BTreeMap<String, u8>,
    buffer_address_reg: u8,
    buffer_count_reg: u8,
}

/// Parsed encoding table.
#[derive(Debug)]
pub struct ExtensionEncoding {
    pub version: u32,
    pub opcode_128: u8,
    pub opcode_192: u8,
    pub opcode_256: u8,
    pub buffer_opcode: u8,
    aes_func3: [(AesMode, u8); 4],
    buffer_func3: [(BufferOp, u8); 3],
    /// Register read by SetParams for the DM byte address (x8).
    pub buffer_address_reg: u8,
    /// Register read by SetParams for the 32-bit word count (x20).
    pub buffer_count_reg: u8,
}

fn opcode_bits(s: &str) -> u8 {
    let v = u8::from_str_radix(s, 2).expect("opcode must be a binary string");
    assert!(v < 0x80 && v & 0b11 == 0b11, "not a 7-bit 32-bit-form opcode");
    v
}

impl ExtensionEncoding {
    /// The crate-wide encoding table.
    pub fn get() -> &'static ExtensionEncoding {
        static TABLE: OnceLock<ExtensionEncoding> = OnceLock::new();
        TABLE.get_or_init(|| {
            let raw: RawEncoding =
                serde_json::from_str(ENCODING_JSON).expect("embedded encoding table is valid");
            let lookup = |bits: &str| opcode_bits(&raw.aes_opcodes[bits]);
            let mode_f3 = |m: AesMode| raw.aes_func3[m.name()];
            let buf_f3 = |name: &str| raw.buffer_func3[name];
            ExtensionEncoding {
                version: raw.version,
                opcode_128: lookup("128"),
                opcode_192: lookup("192"),
                opcode_256: lookup("256"),
                buffer_opcode: opcode_bits(&raw.buffer_opcode),
                aes_func3: [
                    (AesMode::Ecb, mode_f3(AesMode::Ecb)),
                    (AesMode::Cbc, mode_f3(AesMode::Cbc)),
                    (AesMode::Ctr, mode_f3(AesMode::Ctr)),
                    (AesMode::Cfb, mode_f3(AesMode::Cfb)),
                ],
                buffer_func3: [
                    (BufferOp::SetParams, buf_f3("SetParams")),
                    (BufferOp::LoadGo, buf_f3("LoadGo")),
                    (BufferOp::StoreGo, buf_f3("StoreGo")),
                ],
                buffer_address_reg: raw.buffer_address_reg,
                buffer_count_reg: raw.buffer_count_reg,
            }
        })
    }

    pub fn aes_opcode(&self, key: KeySize) -> u8 {
        match key {
            KeySize::K128 => self.opcode_128,
            KeySize::K192 => self.opcode_192,
            KeySize::K256 => self.opcode_256,
        }
    }

    pub fn key_size_for_opcode(&self, opcode: u8) -> Option<KeySize> {
        KeySize::ALL
            .into_iter()
            .find(|k| self.aes_opcode(*k) == opcode)
    }

    pub fn mode_func3(&self, mode: AesMode) -> u8 {
        self.aes_func3.iter().find(|(m, _)| *m == mode).unwrap().1
    }

    pub fn mode_for_func3(&self, func3: u8) -> Option<AesMode> {
        self.aes_func3
            .iter()
            .find(|(_, f)| *f == func3)
            .map(|(m, _)| *m)
    }

    pub fn buffer_func3(&self, op: BufferOp) -> u8 {
        self.buffer_func3.iter().find(|(o, _)| *o == op).unwrap().1
    }

    pub fn buffer_op_for_func3(&self, func3: u8) -> Option<BufferOp> {
        self.buffer_func3
            .iter()
            .find(|(_, f)| *f == func3)
            .map(|(o, _)| *o)
    }

    /// Canonical word for an AES instruction: all register fields zero.
    pub fn encode_aes(&self, config: AesConfig) -> u32 {
        u32::from(self.aes_opcode(config.key_size))
            | (u32::from(self.mode_func3(config.mode)) << 12)
    }

    /// Canonical word for a buffer instruction. SetParams encodes its
    /// two implicit source registers in rs1/rs2 so the pipeline's hazard
    /// logic sees the reads.
    pub fn encode_buffer(&self, op: BufferOp) -> u32 {
        let mut w =
            u32::from(self.buffer_opcode) | (u32::from(self.buffer_func3(op)) << 12);
        if op == BufferOp::SetParams {
            w |= u32::from(self.buffer_address_reg) << 15;
            w |= u32::from(self.buffer_count_reg) << 20;
        }
        w
    }

    /// All fifteen canonical extension words (12 AES + 3 buffer).
    pub fn all_words(&self) -> Vec<u32> {
        let mut words: Vec<u32> = AesConfig::all().map(|c| self.encode_aes(c)).collect();
        words.extend(
            [BufferOp::SetParams, BufferOp::LoadGo, BufferOp::StoreGo]
                .into_iter()
                .map(|op| self.encode_buffer(op)),
        );
        words
    }
}

/// Mnemonic of the form `aes128.ecb`.
pub fn aes_mnemonic(config: AesConfig) -> String {
    format!(
        "aes{}.{}",
        config.key_size.bits(),
        config.mode.name().to_ascii_lowercase()
    )
}
