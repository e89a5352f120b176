//! Harvard memory image: a word-addressed instruction memory and a
//! byte-addressed data memory, both bounds- and alignment-checked.
//! Accesses wider than a byte must be naturally aligned; violations
//! surface as [`ExecError::MemoryFault`].

use crate::isa::{ExecError, FaultKind, MemSpace};

pub const DEFAULT_IM_BYTES: usize = 64 * 1024;
pub const DEFAULT_DM_BYTES: usize = 128 * 1024;

#[derive(Clone)]
pub struct MemoryImage {
    im: Vec<u8>,
    dm: Vec<u8>,
}

fn check(
    addr: u32,
    len: u32,
    size: usize,
    space: MemSpace,
) -> Result<usize, ExecError> {
    if len > 1 && !addr.is_multiple_of(len) {
        return Err(ExecError::MemoryFault {
            addr,
            len,
            space,
            kind: FaultKind::Unaligned,
        });
    }
    let end = addr as u64 + len as u64;
    if end > size as u64 {
        return Err(ExecError::MemoryFault {
            addr,
            len,
            space,
            kind: FaultKind::OutOfRange,
        });
    }
    Ok(addr as usize)
}

impl MemoryImage {
    pub fn new(im_bytes: usize, dm_bytes: usize) -> MemoryImage {
        assert!(im_bytes.is_multiple_of(4) && dm_bytes.is_multiple_of(4));
        MemoryImage {
            im: vec![0; im_bytes],
            dm: vec![0; dm_bytes],
        }
    }

    pub fn im_size(&self) -> usize {
        self.im.len()
    }

    pub fn dm_size(&self) -> usize {
        self.dm.len()
    }

    /// Instruction fetch: whole words only.
    pub fn fetch(&self, addr: u32) -> Result<u32, ExecError> {
        let a = check(addr, 4, self.im.len(), MemSpace::Im)?;
        Ok(u32::from_le_bytes(self.im[a..a + 4].try_into().unwrap()))
    }

    /// Program loading writes straight into IM.
    pub fn store_im_word(&mut self, addr: u32, word: u32) -> Result<(), ExecError> {
        let a = check(addr, 4, self.im.len(), MemSpace::Im)?;
        self.im[a..a + 4].copy_from_slice(&word.to_le_bytes());
        Ok(())
    }

    /// Data load of 1, 2 or 4 bytes; the raw little-endian bits land in
    /// the low end of the result, zero-filled (the caller sign-extends).
    pub fn load_dm(&self, addr: u32, len: u32) -> Result<u32, ExecError> {
        let a = check(addr, len, self.dm.len(), MemSpace::Dm)?;
        let mut bytes = [0u8; 4];
        bytes[..len as usize].copy_from_slice(&self.dm[a..a + len as usize]);
        Ok(u32::from_le_bytes(bytes))
    }

    pub fn store_dm(&mut self, addr: u32, len: u32, value: u32) -> Result<(), ExecError> {
        let a = check(addr, len, self.dm.len(), MemSpace::Dm)?;
        self.dm[a..a + len as usize].copy_from_slice(&value.to_le_bytes()[..len as usize]);
        Ok(())
    }

    pub fn load_dm_word(&self, addr: u32) -> Result<u32, ExecError> {
        self.load_dm(addr, 4)
    }

    pub fn store_dm_word(&mut self, addr: u32, value: u32) -> Result<(), ExecError> {
        self.store_dm(addr, 4, value)
    }

    /// Bulk DM initialisation for test inputs and program data.
    pub fn write_dm_bytes(&mut self, addr: u32, bytes: &[u8]) -> Result<(), ExecError> {
        let a = check(addr, bytes.len().min(1) as u32, self.dm.len(), MemSpace::Dm)?;
        if addr as u64 + bytes.len() as u64 > self.dm.len() as u64 {
            return Err(ExecError::dm_fault_range(addr, bytes.len() as u32));
        }
        self.dm[a..a + bytes.len()].copy_from_slice(bytes);
        Ok(())
    }

    pub fn read_dm_bytes(&self, addr: u32, len: usize) -> Result<Vec<u8>, ExecError> {
        if addr as u64 + len as u64 > self.dm.len() as u64 {
            return Err(ExecError::dm_fault_range(addr, len as u32));
        }
        Ok(self.dm[addr as usize..addr as usize + len].to_vec())
    }

    /// FNV-1a over the whole data memory; used to compare final states
    /// cheaply across execution paths.
    pub fn dm_digest(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for &b in &self.dm {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}
