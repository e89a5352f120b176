//! The functional interpreter: one instruction per step, no timing.
//! This is the semantic reference the pipeline model is checked against.

use crate::ext::buffer::{buffer_load, buffer_store, TransferParams};
use crate::ext::sau;
use crate::isa::decode::{decode, AluOp, BranchCond, LoadWidth, OpKind};
use crate::isa::state::CoreState;
use crate::isa::ExecError;

pub fn alu_eval(op: AluOp, a: u32, b: u32) -> u32 {
    match op {
        AluOp::Add => a.wrapping_add(b),
        AluOp::Sub => a.wrapping_sub(b),
        AluOp::Sll => a << (b & 31),
        AluOp::Slt => u32::from((a as i32) < (b as i32)),
        AluOp::Sltu => u32::from(a < b),
        AluOp::Xor => a ^ b,
        AluOp::Srl => a >> (b & 31),
        AluOp::Sra => ((a as i32) >> (b & 31)) as u32,
        AluOp::Or => a | b,
        AluOp::And => a & b,
    }
}

pub fn branch_taken(cond: BranchCond, a: u32, b: u32) -> bool {
    match cond {
        BranchCond::Eq => a == b,
        BranchCond::Ne => a != b,
        BranchCond::Lt => (a as i32) < (b as i32),
        BranchCond::Ge => (a as i32) >= (b as i32),
        BranchCond::Ltu => a < b,
        BranchCond::Geu => a >= b,
    }
}

pub fn extend_load(width: LoadWidth, raw: u32) -> u32 {
    match width {
        LoadWidth::B => raw as u8 as i8 as i32 as u32,
        LoadWidth::H => raw as u16 as i16 as i32 as u32,
        LoadWidth::W | LoadWidth::Bu | LoadWidth::Hu => raw,
    }
}

/// Executes exactly one instruction. On a fault the machine state is
/// what it was after the last successfully retired instruction, with
/// `pc` still pointing at the faulting one.
pub fn step_functional(core: &mut CoreState) -> Result<(), ExecError> {
    if core.halted {
        return Ok(());
    }
    let pc = core.pc;
    let word = core.mem.fetch(pc)?;
    let inst = decode(word)?;
    let mut next_pc = pc.wrapping_add(4);

    match inst.kind {
        OpKind::Lui => core.regs.write(inst.rd, inst.imm as u32),
        OpKind::Auipc => core.regs.write(inst.rd, pc.wrapping_add(inst.imm as u32)),
        OpKind::Jal => {
            core.regs.write(inst.rd, pc.wrapping_add(4));
            next_pc = pc.wrapping_add(inst.imm as u32);
        }
        OpKind::Jalr => {
            let target = core.regs.read(inst.rs1).wrapping_add(inst.imm as u32) & !1;
            core.regs.write(inst.rd, pc.wrapping_add(4));
            next_pc = target;
        }
        OpKind::Branch(cond) => {
            if branch_taken(cond, core.regs.read(inst.rs1), core.regs.read(inst.rs2)) {
                next_pc = pc.wrapping_add(inst.imm as u32);
            }
        }
        OpKind::Load(width) => {
            let addr = core.regs.read(inst.rs1).wrapping_add(inst.imm as u32);
            let raw = core.mem.load_dm(addr, width.bytes())?;
            core.regs.write(inst.rd, extend_load(width, raw));
        }
        OpKind::Store(width) => {
            let addr = core.regs.read(inst.rs1).wrapping_add(inst.imm as u32);
            core.mem.store_dm(addr, width.bytes(), core.regs.read(inst.rs2))?;
        }
        OpKind::AluImm(op) => {
            let a = core.regs.read(inst.rs1);
            core.regs.write(inst.rd, alu_eval(op, a, inst.imm as u32));
        }
        OpKind::AluReg(op) => {
            let a = core.regs.read(inst.rs1);
            let b = core.regs.read(inst.rs2);
            core.regs.write(inst.rd, alu_eval(op, a, b));
        }
        OpKind::Ebreak => core.halted = true,
        OpKind::AesExec(config) => {
            sau::execute(&mut core.buffer, &mut core.sau, config, &core.latency)?;
        }
        OpKind::BufferSetParams => {
            core.buffer.params = TransferParams {
                dm_addr: core.regs.read(inst.rs1),
                word_count: core.regs.read(inst.rs2),
            };
        }
        OpKind::BufferLoadGo => {
            buffer_load(&core.mem, &mut core.buffer)?;
        }
        OpKind::BufferStoreGo => {
            buffer_store(&core.buffer, &mut core.mem)?;
        }
    }

    core.pc = next_pc;
    core.retired += 1;
    Ok(())
}

/// Runs to the halt instruction; errs if the program faults or fails to
/// halt within `max_steps`. Returns the number of retired instructions.
pub fn run_functional(core: &mut CoreState, max_steps: u64) -> Result<u64, ExecError> {
    let mut steps = 0;
    while !core.halted {
        if steps == max_steps {
            return Err(ExecError::CycleBudgetExceeded {
                max: max_steps,
                unit: "instructions",
            });
        }
        step_functional(core)?;
        steps += 1;
    }
    Ok(core.retired)
}
