//! Five-stage in-order pipeline model: IF, ID, EXE, MEM, WB.
//!
//! Timing rules implemented here:
//!
//! * Register results forward from EXE/MEM to EXE; the write-back stage
//!   writes the register file before EXE reads it in the same cycle, so
//!   MEM/WB forwarding falls out of processing order.
//! * A value loaded from memory is not available to the instruction
//!   immediately after the load; ID inserts exactly one stall cycle
//!   (this also covers store data, which this core reads in EXE).
//! * Branches and jumps resolve in EXE. A taken redirect squashes the
//!   two younger slots and costs two cycles.
//! * Extension instructions occupy EXE for their full latency-model
//!   cost and apply their side effects on the final EXE cycle.
//! * Exceptions are precise: a fault rides its slot to WB and is raised
//!   only when every older instruction has retired; squashed slots never
//!   raise.
//!
//! Each cycle the stages are processed WB -> MEM -> EXE -> ID -> IF, so
//! every stage consumes the latch its predecessor filled on the
//! *previous* cycle.

use crate::ext::buffer::{buffer_load, buffer_store, TransferParams};
use crate::ext::sau;
use crate::isa::decode::{decode, DecodedInstruction, OpKind};
use crate::isa::exec::{alu_eval, branch_taken, extend_load};
use crate::isa::state::CoreState;
use crate::isa::ExecError;

/// Fetched word waiting for decode.
#[derive(Clone, Debug)]
struct FetchSlot {
    pc: u32,
    raw: u32,
    fault: Option<ExecError>,
}

/// Decoded instruction occupying (or waiting on) EXE.
#[derive(Clone, Debug)]
struct ExSlot {
    pc: u32,
    inst: Option<DecodedInstruction>,
    fault: Option<ExecError>,
    started: bool,
    /// EXE cycles still owed after the current one.
    remaining: u64,
    a: u32,
    b: u32,
}

/// Finished EXE, heading into MEM.
#[derive(Clone, Debug)]
struct MemSlot {
    pc: u32,
    inst: Option<DecodedInstruction>,
    fault: Option<ExecError>,
    /// ALU result or effective address.
    alu: u32,
    store_val: u32,
    /// Register result known at EXE (everything except loads).
    wb: Option<(u8, u32)>,
    next_pc: u32,
}

/// Finished MEM, heading into WB.
#[derive(Clone, Debug)]
struct WbSlot {
    pc: u32,
    fault: Option<ExecError>,
    wb: Option<(u8, u32)>,
    halts: bool,
    next_pc: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CycleReport {
    pub cycles: u64,
    pub retired: u64,
    pub stall_cycles: u64,
    pub redirects: u64,
    pub dm_digest: u64,
}

pub struct Pipeline {
    pc: u32,
    if_id: Option<FetchSlot>,
    id_ex: Option<ExSlot>,
    ex_mem: Option<MemSlot>,
    mem_wb: Option<WbSlot>,
    pub cycles: u64,
    pub stall_cycles: u64,
    pub redirects: u64,
}

fn read_operand(
    r: u8,
    forward: Option<(u8, u32)>,
    mem_load_rd: Option<u8>,
    core: &CoreState,
) -> u32 {
    if r == 0 {
        return 0;
    }
    debug_assert_ne!(
        Some(r),
        mem_load_rd,
        "load-use stall was missed: EXE consumes a value its producer load only yields in MEM this cycle"
    );
    if let Some((fr, fv)) = forward {
        if fr == r {
            return fv;
        }
    }
    core.regs.read(r)
}

impl Pipeline {
    pub fn new(start_pc: u32) -> Pipeline {
        Pipeline {
            pc: start_pc,
            if_id: None,
            id_ex: None,
            ex_mem: None,
            mem_wb: None,
            cycles: 0,
            stall_cycles: 0,
            redirects: 0,
        }
    }

    /// Advances the machine by one clock cycle. An `Err` is a precise
    /// architectural fault: `core` holds the state after the last
    /// retired instruction, with `pc` at the faulting one.
    pub fn step_cycle(&mut self, core: &mut CoreState) -> Result<(), ExecError> {
        self.cycles += 1;

        // ---------------- WB ----------------
        if let Some(slot) = self.mem_wb.take() {
            if let Some(fault) = slot.fault {
                core.pc = slot.pc;
                return Err(fault);
            }
            if let Some((rd, val)) = slot.wb {
                core.regs.write(rd, val);
            }
            core.retired += 1;
            core.pc = slot.next_pc;
            if slot.halts {
                core.halted = true;
                return Ok(());
            }
        }

        // ---------------- MEM ----------------
        // Forwarding source for EXE this cycle: the register result the
        // MEM-stage instruction computed back in EXE. Loads deliberately
        // publish nothing here; the ID-stage stall keeps any consumer a
        // cycle away, at which point the write-first register file
        // covers it.
        let mut forward: Option<(u8, u32)> = None;
        let mut mem_load_rd: Option<u8> = None;
        if let Some(mut slot) = self.ex_mem.take() {
            forward = slot.wb;
            if slot.fault.is_none() {
                if let Some(inst) = slot.inst {
                    match inst.kind {
                        OpKind::Load(width) => {
                            mem_load_rd = (inst.rd != 0).then_some(inst.rd);
                            match core.mem.load_dm(slot.alu, width.bytes()) {
                                Ok(raw) => {
                                    if inst.rd != 0 {
                                        slot.wb = Some((inst.rd, extend_load(width, raw)));
                                    }
                                }
                                Err(e) => slot.fault = Some(e),
                            }
                        }
                        OpKind::Store(width) => {
                            if let Err(e) =
                                core.mem.store_dm(slot.alu, width.bytes(), slot.store_val)
                            {
                                slot.fault = Some(e);
                            }
                        }
                        _ => {}
                    }
                }
            }
            self.mem_wb = Some(WbSlot {
                pc: slot.pc,
                fault: slot.fault,
                wb: slot.wb,
                halts: matches!(slot.inst.map(|i| i.kind), Some(OpKind::Ebreak)),
                next_pc: slot.next_pc,
            });
        }

        // ---------------- EXE ----------------
        let mut redirect: Option<u32> = None;
        if let Some(mut slot) = self.id_ex.take() {
            if !slot.started {
                slot.started = true;
                if let Some(inst) = slot.inst {
                    slot.a = if inst.reads_rs1() {
                        read_operand(inst.rs1, forward, mem_load_rd, core)
                    } else {
                        0
                    };
                    slot.b = if inst.reads_rs2() {
                        read_operand(inst.rs2, forward, mem_load_rd, core)
                    } else {
                        0
                    };
                    let cost = match inst.kind {
                        OpKind::BufferLoadGo | OpKind::BufferStoreGo => core
                            .latency
                            .transfer_cost(u64::from(core.buffer.params.word_count)),
                        OpKind::AesExec(config) => match core.buffer.declared_blocks() {
                            Ok(n) => core.latency.sau_cost(config, n as u64),
                            Err(e) => {
                                slot.fault = Some(e);
                                1
                            }
                        },
                        _ => 1,
                    };
                    slot.remaining = cost - 1;
                }
            } else {
                slot.remaining -= 1;
            }

            if slot.remaining > 0 {
                // Multi-cycle extension op still occupying EXE.
                self.id_ex = Some(slot);
            } else {
                let mut out = MemSlot {
                    pc: slot.pc,
                    inst: slot.inst,
                    fault: slot.fault,
                    alu: 0,
                    store_val: 0,
                    wb: None,
                    next_pc: slot.pc.wrapping_add(4),
                };
                if out.fault.is_none() {
                    if let Some(inst) = slot.inst {
                        let (a, b) = (slot.a, slot.b);
                        let pc = slot.pc;
                        let wb = |rd: u8, val: u32| {
                            if rd != 0 {
                                Some((rd, val))
                            } else {
                                None
                            }
                        };
                        match inst.kind {
                            OpKind::Lui => out.wb = wb(inst.rd, inst.imm as u32),
                            OpKind::Auipc => {
                                out.wb = wb(inst.rd, pc.wrapping_add(inst.imm as u32))
                            }
                            OpKind::Jal => {
                                out.wb = wb(inst.rd, pc.wrapping_add(4));
                                out.next_pc = pc.wrapping_add(inst.imm as u32);
                                redirect = Some(out.next_pc);
                            }
                            OpKind::Jalr => {
                                out.wb = wb(inst.rd, pc.wrapping_add(4));
                                out.next_pc = a.wrapping_add(inst.imm as u32) & !1;
                                redirect = Some(out.next_pc);
                            }
                            OpKind::Branch(cond) => {
                                if branch_taken(cond, a, b) {
                                    out.next_pc = pc.wrapping_add(inst.imm as u32);
                                    redirect = Some(out.next_pc);
                                }
                            }
                            OpKind::Load(_) => out.alu = a.wrapping_add(inst.imm as u32),
                            OpKind::Store(_) => {
                                out.alu = a.wrapping_add(inst.imm as u32);
                                out.store_val = b;
                            }
                            OpKind::AluImm(op) => {
                                out.wb = wb(inst.rd, alu_eval(op, a, inst.imm as u32))
                            }
                            OpKind::AluReg(op) => out.wb = wb(inst.rd, alu_eval(op, a, b)),
                            OpKind::Ebreak => {}
                            OpKind::AesExec(config) => {
                                if let Err(e) = sau::execute(
                                    &mut core.buffer,
                                    &mut core.sau,
                                    config,
                                    &core.latency,
                                ) {
                                    out.fault = Some(e);
                                }
                            }
                            OpKind::BufferSetParams => {
                                core.buffer.params = TransferParams {
                                    dm_addr: a,
                                    word_count: b,
                                };
                            }
                            OpKind::BufferLoadGo => {
                                if let Err(e) = buffer_load(&core.mem, &mut core.buffer) {
                                    out.fault = Some(e);
                                }
                            }
                            OpKind::BufferStoreGo => {
                                if let Err(e) = buffer_store(&core.buffer, &mut core.mem) {
                                    out.fault = Some(e);
                                }
                            }
                        }
                    }
                }
                self.ex_mem = Some(out);
            }
        }

        // ---------------- ID ----------------
        if redirect.is_some() {
            // Squash the wrong-path fetch.
            self.if_id = None;
            self.redirects += 1;
        } else if self.id_ex.is_none() {
            if let Some(fslot) = &self.if_id {
                let mut take = true;
                let mut ex = ExSlot {
                    pc: fslot.pc,
                    inst: None,
                    fault: fslot.fault.clone(),
                    started: false,
                    remaining: 0,
                    a: 0,
                    b: 0,
                };
                if ex.fault.is_none() {
                    match decode(fslot.raw) {
                        Ok(inst) => {
                            // Load-use: the producer just finished EXE and
                            // will only have data at the end of its MEM
                            // cycle, one cycle too late for our EXE read.
                            let hazard = self
                                .ex_mem
                                .as_ref()
                                .and_then(|m| m.inst)
                                .is_some_and(|p| {
                                    p.is_load()
                                        && p.rd != 0
                                        && ((inst.reads_rs1() && inst.rs1 == p.rd)
                                            || (inst.reads_rs2() && inst.rs2 == p.rd))
                                });
                            if hazard {
                                take = false;
                                self.stall_cycles += 1;
                            } else {
                                ex.inst = Some(inst);
                            }
                        }
                        Err(e) => ex.fault = Some(e),
                    }
                }
                if take {
                    self.id_ex = Some(ex);
                    self.if_id = None;
                }
            }
        } else if self.if_id.is_some() {
            // EXE is occupied by a multi-cycle op; hold.
            self.stall_cycles += 1;
        }

        // ---------------- IF ----------------
        if let Some(target) = redirect {
            // The redirect reaches the fetch stage at the end of the
            // cycle: update the PC, fetch nothing this cycle.
            self.pc = target;
        } else if self.if_id.is_none() {
            let pc = self.pc;
            self.if_id = Some(match core.mem.fetch(pc) {
                Ok(raw) => FetchSlot {
                    pc,
                    raw,
                    fault: None,
                },
                Err(e) => FetchSlot {
                    pc,
                    raw: 0,
                    fault: Some(e),
                },
            });
            self.pc = pc.wrapping_add(4);
        }

        Ok(())
    }
}

/// Runs a program on the cycle model until it halts, faults or exceeds
/// `max_cycles`.
pub fn run_pipeline(core: &mut CoreState, max_cycles: u64) -> Result<CycleReport, ExecError> {
    let mut pipe = Pipeline::new(core.pc);
    while !core.halted {
        if pipe.cycles == max_cycles {
            return Err(ExecError::CycleBudgetExceeded {
                max: max_cycles,
                unit: "cycles",
            });
        }
        pipe.step_cycle(core)?;
    }
    Ok(CycleReport {
        cycles: pipe.cycles,
        retired: core.retired,
        stall_cycles: pipe.stall_cycles,
        redirects: pipe.redirects,
        dm_digest: core.mem.dm_digest(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AesConfig, AesMode, KeySize};
    use crate::ext::encoding::ExtensionEncoding;
    use crate::ext::BufferOp;
    use crate::isa::exec::run_functional;
    use crate::isa::state::CoreConfig;

    fn addi(rd: u32, rs1: u32, imm: i32) -> u32 {
        ((imm as u32) << 20) | (rs1 << 15) | (rd << 7) | 0x13
    }
    fn add(rd: u32, rs1: u32, rs2: u32) -> u32 {
        (rs2 << 20) | (rs1 << 15) | (rd << 7) | 0x33
    }
    fn lw(rd: u32, rs1: u32, imm: i32) -> u32 {
        ((imm as u32) << 20) | (rs1 << 15) | (2 << 12) | (rd << 7) | 0x03
    }
    fn sw(rs2: u32, rs1: u32, imm: i32) -> u32 {
        let imm = imm as u32;
        ((imm >> 5) << 25) | (rs2 << 20) | (rs1 << 15) | (2 << 12) | ((imm & 0x1f) << 7) | 0x23
    }
    fn beq(rs1: u32, rs2: u32, off: i32) -> u32 {
        let o = off as u32;
        (((o >> 12) & 1) << 31)
            | (((o >> 5) & 0x3f) << 25)
            | (rs2 << 20)
            | (rs1 << 15)
            | (((o >> 1) & 0xf) << 8)
            | (((o >> 11) & 1) << 7)
            | 0x63
    }
    const EBREAK: u32 = 0x0010_0073;

    fn run(program: &[u32], prime: &[(u32, u32)]) -> (CoreState, CycleReport) {
        let mut core = CoreState::new(CoreConfig::default());
        core.load_program(program).unwrap();
        for &(addr, val) in prime {
            core.mem.store_dm_word(addr, val).unwrap();
        }
        let report = run_pipeline(&mut core, 1_000_000).unwrap();
        (core, report)
    }

    /// Same program on the functional interpreter, for state comparison.
    fn run_iss(program: &[u32], prime: &[(u32, u32)]) -> CoreState {
        let mut core = CoreState::new(CoreConfig::default());
        core.load_program(program).unwrap();
        for &(addr, val) in prime {
            core.mem.store_dm_word(addr, val).unwrap();
        }
        run_functional(&mut core, 1_000_000).unwrap();
        core
    }

    #[test]
    fn lone_ebreak_fills_the_pipe() {
        let (core, rep) = run(&[EBREAK], &[]);
        assert_eq!(rep.cycles, 5);
        assert_eq!(rep.retired, 1);
        assert!(core.halted);
    }

    #[test]
    fn straight_line_retires_one_per_cycle() {
        let prog = [
            addi(1, 0, 1),
            addi(2, 0, 2),
            addi(3, 0, 3),
            addi(4, 0, 4),
            addi(5, 0, 5),
            EBREAK,
        ];
        let (core, rep) = run(&prog, &[]);
        assert_eq!(rep.cycles, prog.len() as u64 + 4);
        assert_eq!(rep.stall_cycles, 0);
        assert_eq!(core.regs.read(5), 5);
    }

    #[test]
    fn forwarding_covers_back_to_back_dependencies() {
        let prog = [
            addi(1, 0, 3),
            addi(2, 1, 4),  // needs x1 from EXE/MEM
            add(3, 2, 1),   // needs x2 from EXE/MEM and x1 from regfile
            add(4, 3, 3),
            EBREAK,
        ];
        let (core, rep) = run(&prog, &[]);
        assert_eq!(core.regs.read(3), 10);
        assert_eq!(core.regs.read(4), 20);
        assert_eq!(rep.cycles, prog.len() as u64 + 4); // no stalls
        assert_eq!(rep.stall_cycles, 0);
    }

    #[test]
    fn load_use_costs_exactly_one_stall() {
        let prog = [lw(5, 0, 0x40), add(6, 5, 5), EBREAK];
        let (core, rep) = run(&prog, &[(0x40, 21)]);
        assert_eq!(core.regs.read(6), 42);
        assert_eq!(rep.cycles, prog.len() as u64 + 4 + 1);
        assert_eq!(rep.stall_cycles, 1);
    }

    #[test]
    fn load_then_independent_then_use_needs_no_stall() {
        let prog = [lw(5, 0, 0x40), addi(9, 0, 1), add(6, 5, 5), EBREAK];
        let (core, rep) = run(&prog, &[(0x40, 21)]);
        assert_eq!(core.regs.read(6), 42);
        assert_eq!(rep.stall_cycles, 0);
        assert_eq!(rep.cycles, prog.len() as u64 + 4);
    }

    #[test]
    fn store_data_after_load_also_stalls() {
        let prog = [lw(5, 0, 0x40), sw(5, 0, 0x44), EBREAK];
        let (core, rep) = run(&prog, &[(0x40, 0xabcd)]);
        assert_eq!(core.mem.load_dm_word(0x44).unwrap(), 0xabcd);
        assert_eq!(rep.stall_cycles, 1);
    }

    #[test]
    fn taken_branch_costs_two_cycles() {
        let prog = [
            beq(0, 0, 8),   // taken: skip the next word
            addi(10, 0, 1), // squashed
            EBREAK,
        ];
        let (core, rep) = run(&prog, &[]);
        assert_eq!(core.regs.read(10), 0);
        assert_eq!(rep.retired, 2);
        // two retired instructions + 4 fill + 2 flush
        assert_eq!(rep.cycles, 2 + 4 + 2);
        assert_eq!(rep.redirects, 1);
    }

    #[test]
    fn untaken_branch_is_free() {
        let prog = [addi(1, 0, 1), beq(1, 0, 8), addi(10, 0, 7), EBREAK];
        let (core, rep) = run(&prog, &[]);
        assert_eq!(core.regs.read(10), 7);
        assert_eq!(rep.cycles, prog.len() as u64 + 4);
        assert_eq!(rep.redirects, 0);
    }

    #[test]
    fn transfer_occupies_exe_for_its_full_cost() {
        let enc = ExtensionEncoding::get();
        let prog = [
            addi(8, 0, 0),   // DM address 0
            addi(20, 0, 4),  // four words
            enc.encode_buffer(BufferOp::SetParams),
            enc.encode_buffer(BufferOp::LoadGo),
            EBREAK,
        ];
        let (core, rep) = run(&prog, &[(0, 111), (4, 222)]);
        assert_eq!(core.buffer.set.word(1), 222);
        // Straight-line cost plus (transfer_cost(4) - 1) extra EXE cycles.
        assert_eq!(rep.cycles, prog.len() as u64 + 4 + 4);
    }

    #[test]
    fn aes_instruction_charges_the_latency_model() {
        let enc = ExtensionEncoding::get();
        let cfg = AesConfig::new(AesMode::Ecb, KeySize::K128);
        // One block: key/iv/pt occupy 16 words at DM 0.
        let prog = [
            addi(8, 0, 0),
            addi(20, 0, 16),
            enc.encode_buffer(BufferOp::SetParams),
            enc.encode_buffer(BufferOp::LoadGo),
            enc.encode_aes(cfg),
            EBREAK,
        ];
        let (core, rep) = run(&prog, &[]);
        assert_eq!(core.sau.last_blocks, 1);
        let aes_cost = core.latency.sau_cost(cfg, 1);
        let load_cost = core.latency.transfer_cost(16);
        assert_eq!(
            rep.cycles,
            prog.len() as u64 + 4 + (load_cost - 1) + (aes_cost - 1)
        );
    }

    #[test]
    fn fault_is_precise() {
        // The lw faults (DM is 128 KiB); the older addi must retire, the
        // younger one must not.
        let prog = [
            addi(1, 0, 55),
            lw(2, 0, -4), // address 0xfffffffc: out of range
            addi(3, 0, 77),
            EBREAK,
        ];
        let mut core = CoreState::new(CoreConfig::default());
        core.load_program(&prog).unwrap();
        let err = run_pipeline(&mut core, 1000).unwrap_err();
        assert!(matches!(err, ExecError::MemoryFault { .. }));
        assert_eq!(core.regs.read(1), 55);
        assert_eq!(core.regs.read(3), 0);
        assert_eq!(core.retired, 1);
        assert_eq!(core.pc, 4); // pc of the faulting lw

        // And the interpreter agrees exactly.
        let mut iss = CoreState::new(CoreConfig::default());
        iss.load_program(&prog).unwrap();
        let iss_err = run_functional(&mut iss, 1000).unwrap_err();
        assert_eq!(err, iss_err);
        assert_eq!(core.architectural_state(), iss.architectural_state());
    }

    #[test]
    fn squashed_wrong_path_fault_never_raises() {
        // The taken branch skips a word that would decode to an illegal
        // instruction and a fetch past it.
        let prog = [
            beq(0, 0, 8),
            0xffff_ffff, // wrong path: illegal
            EBREAK,
        ];
        let (_, rep) = run(&prog, &[]);
        assert_eq!(rep.retired, 2);
    }

    #[test]
    fn pipeline_matches_interpreter_on_mixed_program() {
        let prog = [
            addi(1, 0, 10),
            addi(2, 0, 0),
            addi(3, 0, 0x40),
            // loop: x2 += x1; x1 -= 1; store x2; until x1 == 0
            add(2, 2, 1),
            addi(1, 1, -1),
            sw(2, 3, 0),
            beq(1, 0, 8),
            beq(0, 0, -16),
            lw(4, 3, 0),
            EBREAK,
        ];
        let (pipe_core, rep) = run(&prog, &[]);
        let iss_core = run_iss(&prog, &[]);
        assert_eq!(
            pipe_core.architectural_state(),
            iss_core.architectural_state()
        );
        assert_eq!(pipe_core.regs.read(4), 55);
        assert!(rep.cycles > rep.retired);
    }
}
