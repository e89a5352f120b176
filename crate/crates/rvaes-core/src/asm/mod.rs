//! Assembler, disassembler and program generators.
//!
//! The text syntax is the usual one-instruction-per-line form with `#`
//! comments, `label:` definitions, `xN`/ABI register names and
//! `imm(reg)` memory operands, plus the extension mnemonics
//! (`aes128.ecb` .. `aes256.cfb`, `buf.set`, `buf.loadgo`,
//! `buf.storego`) and a `.word` escape hatch. The disassembler emits
//! exactly this syntax, so `assemble(disassemble(w)) == w` for every
//! decodable word.

mod disasm;
mod encode;
pub mod image;
mod parse;

pub mod accelerated;
pub mod baseline;

pub use accelerated::generate_accelerated;
pub use baseline::generate_baseline;
pub use disasm::{disassemble_image, disassemble_word};
pub use parse::{assemble, AsmError};

use crate::config::AesConfig;
use crate::ext::buffer::MAX_BLOCKS;
use crate::isa::state::CoreState;
use crate::isa::ExecError;

/// One encryption task: the inputs a generated program operates on.
#[derive(Clone, Debug)]
pub struct AesJob {
    pub config: AesConfig,
    pub key: Vec<u8>,
    pub iv: [u8; 16],
    pub plaintext: Vec<u8>,
}

impl AesJob {
    pub fn blocks(&self) -> usize {
        self.plaintext.len() / 16
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.key.len() != self.config.key_size.key_bytes() {
            return Err(format!(
                "key is {} bytes, {} needs {}",
                self.key.len(),
                self.config,
                self.config.key_size.key_bytes()
            ));
        }
        if self.plaintext.is_empty() || !self.plaintext.len().is_multiple_of(16) {
            return Err(format!(
                "plaintext must be a positive number of 16-byte blocks, got {} bytes",
                self.plaintext.len()
            ));
        }
        if self.blocks() > MAX_BLOCKS {
            return Err(format!(
                "{} blocks exceed the {MAX_BLOCKS}-block buffer capacity",
                self.blocks()
            ));
        }
        Ok(())
    }
}

/// A ready-to-run program: source text, its assembled image, and the
/// data-memory initialisation it expects.
#[derive(Clone, Debug)]
pub struct GeneratedProgram {
    pub name: String,
    pub source: String,
    pub image: Vec<u32>,
    /// (DM address, bytes) spans written before the program runs.
    pub dm_init: Vec<(u32, Vec<u8>)>,
    /// Where the ciphertext lands in DM when the program halts.
    pub ct_addr: u32,
    pub ct_len: usize,
}

impl GeneratedProgram {
    /// Loads the image into IM and the inputs into DM.
    pub fn install(&self, core: &mut CoreState) -> Result<(), ExecError> {
        core.load_program(&self.image)?;
        for (addr, bytes) in &self.dm_init {
            core.mem.write_dm_bytes(*addr, bytes)?;
        }
        Ok(())
    }

    /// Reads the ciphertext region out of a halted core.
    pub fn read_ciphertext(&self, core: &CoreState) -> Result<Vec<u8>, ExecError> {
        core.mem.read_dm_bytes(self.ct_addr, self.ct_len)
    }
}
