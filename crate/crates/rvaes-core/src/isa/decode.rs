//! Instruction decoding for the RV32I base set plus the AES extension.
//!
//! Decoding is strict: any word that is not exactly one of the supported
//! encodings (including nonzero don't-care fields in the extension
//! instructions) is an illegal instruction. That keeps decode⁻¹ a true
//! inverse of the assembler's encoder.

use crate::config::AesConfig;
use crate::ext::encoding::ExtensionEncoding;
use crate::ext::BufferOp;
use crate::isa::ExecError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchCond {
    Eq,
    Ne,
    Lt,
    Ge,
    Ltu,
    Geu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadWidth {
    B,
    H,
    W,
    Bu,
    Hu,
}

impl LoadWidth {
    pub fn bytes(self) -> u32 {
        match self {
            LoadWidth::B | LoadWidth::Bu => 1,
            LoadWidth::H | LoadWidth::Hu => 2,
            LoadWidth::W => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StoreWidth {
    B,
    H,
    W,
}

impl StoreWidth {
    pub fn bytes(self) -> u32 {
        match self {
            StoreWidth::B => 1,
            StoreWidth::H => 2,
            StoreWidth::W => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AluOp {
    Add,
    Sub,
    Sll,
    Slt,
    Sltu,
    Xor,
    Srl,
    Sra,
    Or,
    And,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    Lui,
    Auipc,
    Jal,
    Jalr,
    Branch(BranchCond),
    Load(LoadWidth),
    Store(StoreWidth),
    AluImm(AluOp),
    AluReg(AluOp),
    Ebreak,
    AesExec(AesConfig),
    BufferSetParams,
    BufferLoadGo,
    BufferStoreGo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodedInstruction {
    pub kind: OpKind,
    pub rd: u8,
    pub rs1: u8,
    pub rs2: u8,
    pub imm: i32,
    pub raw: u32,
}

impl DecodedInstruction {
    /// Does this instruction produce a register result (before the
    /// rd == x0 check)?
    pub fn writes_rd(&self) -> bool {
        matches!(
            self.kind,
            OpKind::Lui
                | OpKind::Auipc
                | OpKind::Jal
                | OpKind::Jalr
                | OpKind::Load(_)
                | OpKind::AluImm(_)
                | OpKind::AluReg(_)
        ) && self.rd != 0
    }

    pub fn reads_rs1(&self) -> bool {
        matches!(
            self.kind,
            OpKind::Jalr
                | OpKind::Branch(_)
                | OpKind::Load(_)
                | OpKind::Store(_)
                | OpKind::AluImm(_)
                | OpKind::AluReg(_)
                | OpKind::BufferSetParams
        )
    }

    pub fn reads_rs2(&self) -> bool {
        matches!(
            self.kind,
            OpKind::Branch(_) | OpKind::Store(_) | OpKind::AluReg(_) | OpKind::BufferSetParams
        )
    }

    pub fn is_load(&self) -> bool {
        matches!(self.kind, OpKind::Load(_))
    }
}

fn bits(word: u32, hi: u32, lo: u32) -> u32 {
    (word >> lo) & ((1 << (hi - lo + 1)) - 1)
}

fn imm_i(word: u32) -> i32 {
    (word as i32) >> 20
}

fn imm_s(word: u32) -> i32 {
    (((word as i32) >> 20) & !0x1f) | bits(word, 11, 7) as i32
}

fn imm_b(word: u32) -> i32 {
    let sign = (word as i32) >> 31; // all ones if negative
    (sign << 12 & !0xfff)
        | ((bits(word, 7, 7) << 11) | (bits(word, 30, 25) << 5) | (bits(word, 11, 8) << 1)) as i32
}

fn imm_u(word: u32) -> i32 {
    (word & 0xffff_f000) as i32
}

fn imm_j(word: u32) -> i32 {
    let sign = (word as i32) >> 31;
    (sign << 20 & !0xfffff)
        | ((bits(word, 19, 12) << 12)
            | (bits(word, 20, 20) << 11)
            | (bits(word, 30, 21) << 1)) as i32
}

pub fn decode(word: u32) -> Result<DecodedInstruction, ExecError> {
    let opcode = (word & 0x7f) as u8;
    let rd = bits(word, 11, 7) as u8;
    let func3 = bits(word, 14, 12) as u8;
    let rs1 = bits(word, 19, 15) as u8;
    let rs2 = bits(word, 24, 20) as u8;
    let func7 = bits(word, 31, 25) as u8;
    let illegal = Err(ExecError::IllegalInstruction { word });

    let mut inst = DecodedInstruction {
        kind: OpKind::Ebreak, // overwritten below
        rd,
        rs1,
        rs2,
        imm: 0,
        raw: word,
    };

    let enc = ExtensionEncoding::get();
    if let Some(key_size) = enc.key_size_for_opcode(opcode) {
        // AES instruction: every register field must be zero.
        let Some(mode) = enc.mode_for_func3(func3) else {
            return illegal;
        };
        if rd != 0 || rs1 != 0 || rs2 != 0 || func7 != 0 {
            return illegal;
        }
        inst.kind = OpKind::AesExec(AesConfig::new(mode, key_size));
        return Ok(inst);
    }
    if opcode == enc.buffer_opcode {
        let Some(op) = enc.buffer_op_for_func3(func3) else {
            return illegal;
        };
        let (want_rs1, want_rs2) = match op {
            BufferOp::SetParams => (enc.buffer_address_reg, enc.buffer_count_reg),
            BufferOp::LoadGo | BufferOp::StoreGo => (0, 0),
        };
        if rd != 0 || rs1 != want_rs1 || rs2 != want_rs2 || func7 != 0 {
            return illegal;
        }
        inst.kind = match op {
            BufferOp::SetParams => OpKind::BufferSetParams,
            BufferOp::LoadGo => OpKind::BufferLoadGo,
            BufferOp::StoreGo => OpKind::BufferStoreGo,
        };
        return Ok(inst);
    }

    match opcode {
        0x37 => {
            inst.kind = OpKind::Lui;
            inst.imm = imm_u(word);
        }
        0x17 => {
            inst.kind = OpKind::Auipc;
            inst.imm = imm_u(word);
        }
        0x6f => {
            inst.kind = OpKind::Jal;
            inst.imm = imm_j(word);
        }
        0x67 => {
            if func3 != 0 {
                return illegal;
            }
            inst.kind = OpKind::Jalr;
            inst.imm = imm_i(word);
        }
        0x63 => {
            let cond = match func3 {
                0 => BranchCond::Eq,
                1 => BranchCond::Ne,
                4 => BranchCond::Lt,
                5 => BranchCond::Ge,
                6 => BranchCond::Ltu,
                7 => BranchCond::Geu,
                _ => return illegal,
            };
            inst.kind = OpKind::Branch(cond);
            inst.imm = imm_b(word);
        }
        0x03 => {
            let width = match func3 {
                0 => LoadWidth::B,
                1 => LoadWidth::H,
                2 => LoadWidth::W,
                4 => LoadWidth::Bu,
                5 => LoadWidth::Hu,
                _ => return illegal,
            };
            inst.kind = OpKind::Load(width);
            inst.imm = imm_i(word);
        }
        0x23 => {
            let width = match func3 {
                0 => StoreWidth::B,
                1 => StoreWidth::H,
                2 => StoreWidth::W,
                _ => return illegal,
            };
            inst.kind = OpKind::Store(width);
            inst.imm = imm_s(word);
        }
        0x13 => {
            let op = match func3 {
                0 => AluOp::Add,
                1 => {
                    if func7 != 0 {
                        return illegal;
                    }
                    AluOp::Sll
                }
                2 => AluOp::Slt,
                3 => AluOp::Sltu,
                4 => AluOp::Xor,
                5 => match func7 {
                    0x00 => AluOp::Srl,
                    0x20 => AluOp::Sra,
                    _ => return illegal,
                },
                6 => AluOp::Or,
                7 => AluOp::And,
                _ => unreachable!(),
            };
            inst.kind = OpKind::AluImm(op);
            inst.imm = match op {
                // Shift amounts are the five rs2 bits; func7 is coding.
                AluOp::Sll | AluOp::Srl | AluOp::Sra => rs2 as i32,
                _ => imm_i(word),
            };
        }
        0x33 => {
            let op = match (func3, func7) {
                (0, 0x00) => AluOp::Add,
                (0, 0x20) => AluOp::Sub,
                (1, 0x00) => AluOp::Sll,
                (2, 0x00) => AluOp::Slt,
                (3, 0x00) => AluOp::Sltu,
                (4, 0x00) => AluOp::Xor,
                (5, 0x00) => AluOp::Srl,
                (5, 0x20) => AluOp::Sra,
                (6, 0x00) => AluOp::Or,
                (7, 0x00) => AluOp::And,
                _ => return illegal,
            };
            inst.kind = OpKind::AluReg(op);
        }
        0x73 => {
            // Only EBREAK is implemented; ECALL and CSR space decode as
            // illegal on this core.
            if word != 0x0010_0073 {
                return illegal;
            }
            inst.kind = OpKind::Ebreak;
        }
        _ => return illegal,
    }
    Ok(inst)
}
