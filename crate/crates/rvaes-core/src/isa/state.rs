//! Architectural state shared by the functional interpreter and the
//! pipeline model.

use crate::ext::{BufferUnit, ExtLatency, SauState};
use crate::isa::mem::{MemoryImage, DEFAULT_DM_BYTES, DEFAULT_IM_BYTES};
use crate::isa::ExecError;

/// The 32 general-purpose registers; x0 is hardwired to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegisterFile {
    regs: [u32; 32],
}

impl RegisterFile {
    pub fn read(&self, r: u8) -> u32 {
        self.regs[r as usize]
    }

    pub fn write(&mut self, r: u8, value: u32) {
        if r != 0 {
            self.regs[r as usize] = value;
        }
    }

    pub fn snapshot(&self) -> [u32; 32] {
        self.regs
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CoreConfig {
    pub im_bytes: usize,
    pub dm_bytes: usize,
    pub latency: ExtLatency,
}

impl Default for CoreConfig {
    fn default() -> Self {
        CoreConfig {
            im_bytes: DEFAULT_IM_BYTES,
            dm_bytes: DEFAULT_DM_BYTES,
            latency: ExtLatency::default(),
        }
    }
}

/// Complete machine state: registers, program counter, memories and the
/// extension-unit state.
#[derive(Clone)]
pub struct CoreState {
    pub regs: RegisterFile,
    pub pc: u32,
    pub mem: MemoryImage,
    pub buffer: BufferUnit,
    pub sau: SauState,
    pub latency: ExtLatency,
    pub halted: bool,
    pub retired: u64,
}

impl CoreState {
    pub fn new(config: CoreConfig) -> CoreState {
        CoreState {
            regs: RegisterFile::default(),
            pc: 0,
            mem: MemoryImage::new(config.im_bytes, config.dm_bytes),
            buffer: BufferUnit::default(),
            sau: SauState::default(),
            latency: config.latency,
            halted: false,
            retired: 0,
        }
    }

    /// Loads an instruction image at IM address 0 and resets the PC.
    pub fn load_program(&mut self, words: &[u32]) -> Result<(), ExecError> {
        for (i, &w) in words.iter().enumerate() {
            self.mem.store_im_word(4 * i as u32, w)?;
        }
        self.pc = 0;
        Ok(())
    }

    /// The observable outcome of a finished run, for cross-checking
    /// execution paths against each other.
    pub fn architectural_state(&self) -> ArchSnapshot {
        ArchSnapshot {
            regs: self.regs.snapshot(),
            pc: self.pc,
            dm_digest: self.mem.dm_digest(),
            retired: self.retired,
            halted: self.halted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchSnapshot {
    pub regs: [u32; 32],
    pub pc: u32,
    pub dm_digest: u64,
    pub retired: u64,
    pub halted: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x0_never_changes() {
        let mut rf = RegisterFile::default();
        rf.write(0, 1234);
        assert_eq!(rf.read(0), 0);
        rf.write(31, 7);
        assert_eq!(rf.read(31), 7);
    }

    #[test]
    fn default_sizes() {
        let core = CoreState::new(CoreConfig::default());
        assert_eq!(core.mem.im_size(), 64 * 1024);
        assert_eq!(core.mem.dm_size(), 128 * 1024);
    }
}
