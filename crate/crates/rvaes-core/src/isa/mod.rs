//! The processor model: instruction decoding, a bit-exact functional
//! interpreter, and a five-stage pipeline cycle model. Both execution
//! paths share decode and memory but apply semantics independently, so
//! they can be checked against each other.

pub mod decode;
pub mod exec;
pub mod mem;
pub mod pipeline;
pub mod state;

pub use decode::{decode, DecodedInstruction, OpKind};
pub use exec::{run_functional, step_functional};
pub use mem::MemoryImage;
pub use pipeline::{run_pipeline, CycleReport, Pipeline};
pub use state::{CoreConfig, CoreState};

use thiserror::Error;

/// Which address space a memory fault occurred in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemSpace {
    Im,
    Dm,
}

impl std::fmt::Display for MemSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MemSpace::Im => "IM",
            MemSpace::Dm => "DM",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultKind {
    Unaligned,
    OutOfRange,
}

impl std::fmt::Display for FaultKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FaultKind::Unaligned => "unaligned",
            FaultKind::OutOfRange => "out of range",
        })
    }
}

/// Every way execution can stop abnormally. Both the functional
/// interpreter and the pipeline raise the same values for the same
/// program, which is what makes them comparable.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExecError {
    #[error("illegal instruction {word:#010x}")]
    IllegalInstruction { word: u32 },
    #[error("{kind} {space} access of {len} bytes at {addr:#010x}")]
    MemoryFault {
        addr: u32,
        len: u32,
        space: MemSpace,
        kind: FaultKind,
    },
    #[error("transfer count {count} exceeds the 256-word buffer")]
    BufferOverflow { count: u32 },
    #[error("bad buffer layout: {0}")]
    LayoutFault(String),
    #[error("no halt within {max} {unit}")]
    CycleBudgetExceeded { max: u64, unit: &'static str },
}

impl ExecError {
    pub fn dm_fault_unaligned(addr: u32, len: u32) -> ExecError {
        ExecError::MemoryFault {
            addr,
            len,
            space: MemSpace::Dm,
            kind: FaultKind::Unaligned,
        }
    }

    pub fn dm_fault_range(addr: u32, len: u32) -> ExecError {
        ExecError::MemoryFault {
            addr,
            len,
            space: MemSpace::Dm,
            kind: FaultKind::OutOfRange,
        }
    }
}
