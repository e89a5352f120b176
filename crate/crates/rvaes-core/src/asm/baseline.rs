//! Generator for the baseline AES program: a straightforward
//! byte-oriented software implementation in pure RV32I, in the style of
//! a small embedded C library compiled without heroics. Every state and
//! round-key byte lives in data memory and is loaded/stored at each
//! use, the S-box is a table lookup through a helper routine, and
//! `xtime` is a shift/mask/branch/xor helper. This is the software cost
//! an application would actually pay on the plain core, and the
//! reference point for the accelerated programs.
//!
//! DM layout (all offsets fit direct `imm(x0)` addressing):
//!
//! | addr    | contents                          |
//! |---------|-----------------------------------|
//! | 0x0000  | S-box table, 256 bytes            |
//! | 0x0100  | round constants, 10 bytes         |
//! | 0x0110  | cipher key (16/24/32 bytes)       |
//! | 0x0130  | IV                                |
//! | 0x0140  | expanded key schedule, ≤240 bytes |
//! | 0x0230  | working state, 16 bytes           |
//! | 0x0240  | chain block (CBC/CTR/CFB)         |
//! | 0x0260  | plaintext, then ciphertext        |

use std::fmt::Write as _;

use crate::aesref;
use crate::asm::{assemble, AesJob, GeneratedProgram};
use crate::config::AesMode;

pub const SBOX_ADDR: u32 = 0x0000;
pub const RCON_ADDR: u32 = 0x0100;
pub const KEY_ADDR: u32 = 0x0110;
pub const IV_ADDR: u32 = 0x0130;
pub const RK_ADDR: u32 = 0x0140;
pub const STATE_ADDR: u32 = 0x0230;
pub const CHAIN_ADDR: u32 = 0x0240;
pub const PT_ADDR: u32 = 0x0260;

const RCON: [u8; 10] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

struct Asm {
    text: String,
}

impl Asm {
    fn new() -> Asm {
        Asm {
            text: String::new(),
        }
    }
    fn op(&mut self, s: impl AsRef<str>) {
        writeln!(self.text, "    {}", s.as_ref()).unwrap();
    }
    fn label(&mut self, s: &str) {
        writeln!(self.text, "{s}:").unwrap();
    }
    fn comment(&mut self, s: &str) {
        writeln!(self.text, "    # {s}").unwrap();
    }
    fn blank(&mut self) {
        self.text.push('\n');
    }
}

/// Emits `dst = sbox[dst]` sequences for the four bytes a1..a4.
fn emit_subword(a: &mut Asm) {
    for r in ["a1", "a2", "a3", "a4"] {
        a.op(format!("mv a0, {r}"));
        a.op("jal a5, sbox_at");
        a.op(format!("mv {r}, a0"));
    }
}

fn emit_key_expand(a: &mut Asm, nk: usize, rounds: usize) {
    let key_bytes = 4 * nk;
    let total_words = 4 * (rounds + 1);
    a.label("key_expand");
    a.comment("schedule[0..Nk) = key");
    a.op("addi t0, x0, 0");
    a.label("key_expand_copy");
    a.op(format!("addi t1, x0, {KEY_ADDR}"));
    a.op("add t1, t1, t0");
    a.op("lbu t2, 0(t1)");
    a.op(format!("addi t1, x0, {RK_ADDR}"));
    a.op("add t1, t1, t0");
    a.op("sb t2, 0(t1)");
    a.op("addi t0, t0, 1");
    a.op(format!("addi t1, x0, {key_bytes}"));
    a.op("blt t0, t1, key_expand_copy");
    a.comment("expand words Nk..4*(rounds+1)");
    a.op(format!("addi s4, x0, {nk}")); // i
    a.op(format!("addi s5, x0, {total_words}"));
    a.op("addi s6, x0, 0"); // i mod Nk
    a.op(format!("addi s7, x0, {RCON_ADDR}"));
    a.label("key_expand_loop");
    a.op("slli t0, s4, 2");
    a.op(format!("addi t1, x0, {RK_ADDR}"));
    a.op("add t1, t1, t0");
    a.op("lbu a1, -4(t1)");
    a.op("lbu a2, -3(t1)");
    a.op("lbu a3, -2(t1)");
    a.op("lbu a4, -1(t1)");
    a.op("bne s6, x0, key_expand_mid");
    a.comment("rotate, substitute, fold in the round constant");
    a.op("mv t2, a1");
    a.op("mv a1, a2");
    a.op("mv a2, a3");
    a.op("mv a3, a4");
    a.op("mv a4, t2");
    emit_subword(a);
    a.op("lbu t2, 0(s7)");
    a.op("addi s7, s7, 1");
    a.op("xor a1, a1, t2");
    a.op("j key_expand_apply");
    a.label("key_expand_mid");
    if nk == 8 {
        a.comment("256-bit keys substitute the middle word too");
        a.op("addi t2, x0, 4");
        a.op("bne s6, t2, key_expand_apply");
        emit_subword(a);
    }
    a.label("key_expand_apply");
    a.op("slli t0, s4, 2");
    a.op(format!("addi t1, x0, {RK_ADDR}"));
    a.op("add t1, t1, t0");
    a.op(format!("addi t3, t1, -{}", 4 * nk));
    for j in 0..4 {
        a.op(format!("lbu t2, {j}(t3)"));
        a.op(format!("xor t2, t2, a{}", j + 1));
        a.op(format!("sb t2, {j}(t1)"));
    }
    a.op("addi s6, s6, 1");
    a.op(format!("addi t2, x0, {nk}"));
    a.op("bne s6, t2, key_expand_next");
    a.op("addi s6, x0, 0");
    a.label("key_expand_next");
    a.op("addi s4, s4, 1");
    a.op("blt s4, s5, key_expand_loop");
    a.op("ret");
}

fn emit_helpers(a: &mut Asm) {
    a.label("memcpy16");
    a.op("addi t0, x0, 16");
    a.label("memcpy16_loop");
    a.op("lbu t1, 0(a0)");
    a.op("sb t1, 0(a1)");
    a.op("addi a0, a0, 1");
    a.op("addi a1, a1, 1");
    a.op("addi t0, t0, -1");
    a.op("bne t0, x0, memcpy16_loop");
    a.op("ret");
    a.blank();

    a.comment("dst = src1 ^ src2, 16 bytes (a0, a1 -> a2)");
    a.label("xor16");
    a.op("addi t0, x0, 16");
    a.label("xor16_loop");
    a.op("lbu t1, 0(a0)");
    a.op("lbu t2, 0(a1)");
    a.op("xor t1, t1, t2");
    a.op("sb t1, 0(a2)");
    a.op("addi a0, a0, 1");
    a.op("addi a1, a1, 1");
    a.op("addi a2, a2, 1");
    a.op("addi t0, t0, -1");
    a.op("bne t0, x0, xor16_loop");
    a.op("ret");
    a.blank();

    a.comment("a0 = sbox[a0]");
    a.label("sbox_at");
    a.op(format!("addi t6, x0, {SBOX_ADDR}"));
    a.op("add t6, t6, a0");
    a.op("lbu a0, 0(t6)");
    a.op("jalr x0, a5, 0");
    a.blank();

    a.comment("a0 = a0 * 2 in GF(2^8)");
    a.label("xtime");
    a.op("slli t6, a0, 1");
    a.op("andi t6, t6, 255");
    a.op("andi a0, a0, 128");
    a.op("beq a0, x0, xtime_done");
    a.op("xori t6, t6, 27");
    a.label("xtime_done");
    a.op("mv a0, t6");
    a.op("jalr x0, a5, 0");
}

fn emit_round_ops(a: &mut Asm) {
    a.comment("state ^= schedule[s5..s5+16); advances s5");
    a.label("add_round_key");
    a.op("addi t0, x0, 0");
    a.label("add_round_key_loop");
    a.op(format!("addi t1, x0, {STATE_ADDR}"));
    a.op("add t1, t1, t0");
    a.op("lbu t2, 0(t1)");
    a.op("add t3, s5, t0");
    a.op("lbu t3, 0(t3)");
    a.op("xor t2, t2, t3");
    a.op("sb t2, 0(t1)");
    a.op("addi t0, t0, 1");
    a.op("addi t1, x0, 16");
    a.op("blt t0, t1, add_round_key_loop");
    a.op("addi s5, s5, 16");
    a.op("jalr x0, s1, 0");
    a.blank();

    a.label("sub_bytes");
    a.op("addi t0, x0, 0");
    a.label("sub_bytes_loop");
    a.op(format!("addi t1, x0, {STATE_ADDR}"));
    a.op("add t1, t1, t0");
    a.op("lbu a0, 0(t1)");
    a.op("jal a5, sbox_at");
    a.op(format!("addi t1, x0, {STATE_ADDR}"));
    a.op("add t1, t1, t0");
    a.op("sb a0, 0(t1)");
    a.op("addi t0, t0, 1");
    a.op("addi t1, x0, 16");
    a.op("blt t0, t1, sub_bytes_loop");
    a.op("jalr x0, s1, 0");
    a.blank();

    a.label("shift_rows");
    for row in 1u32..4 {
        a.comment(&format!("row {row} rotates left by {row}"));
        for c in 0..4u32 {
            a.op(format!("lbu t{c}, {}(x0)", STATE_ADDR + 4 * c + row));
        }
        for c in 0..4u32 {
            let src = (c + row) % 4;
            a.op(format!("sb t{src}, {}(x0)", STATE_ADDR + 4 * c + row));
        }
    }
    a.op("jalr x0, s1, 0");
    a.blank();

    a.comment("column-by-column MixColumns; every byte via memory");
    a.label("mix_columns");
    a.op(format!("addi t5, x0, {STATE_ADDR}"));
    a.op("addi a6, x0, 4");
    a.label("mix_columns_loop");
    a.comment("a7 = s0^s1^s2^s3, a4 = original s0");
    a.op("lbu a1, 0(t5)");
    a.op("lbu a2, 1(t5)");
    a.op("xor a1, a1, a2");
    a.op("lbu a2, 2(t5)");
    a.op("xor a1, a1, a2");
    a.op("lbu a2, 3(t5)");
    a.op("xor a1, a1, a2");
    a.op("mv a7, a1");
    a.op("lbu a4, 0(t5)");
    for j in 0..4u32 {
        a.comment(&format!("s{j} ^= xtime(s{j}^s{}) ^ a7", (j + 1) % 4));
        a.op(format!("lbu a1, {j}(t5)"));
        if j < 3 {
            a.op(format!("lbu a2, {}(t5)", j + 1));
            a.op("xor a0, a1, a2");
        } else {
            a.op("xor a0, a1, a4"); // s3 pairs with the saved original s0
        }
        a.op("jal a5, xtime");
        a.op("xor a0, a0, a7");
        a.op(format!("lbu a1, {j}(t5)"));
        a.op("xor a1, a1, a0");
        a.op(format!("sb a1, {j}(t5)"));
    }
    a.op("addi t5, t5, 4");
    a.op("addi a6, a6, -1");
    a.op("bne a6, x0, mix_columns_loop");
    a.op("jalr x0, s1, 0");
}

fn emit_cipher(a: &mut Asm, rounds: usize) {
    a.comment("one forward cipher over the state block");
    a.label("cipher");
    a.op(format!("addi s5, x0, {RK_ADDR}"));
    a.op("jal s1, add_round_key");
    a.op(format!("addi s4, x0, {}", rounds - 1));
    a.label("cipher_round");
    a.op("jal s1, sub_bytes");
    a.op("jal s1, shift_rows");
    a.op("jal s1, mix_columns");
    a.op("jal s1, add_round_key");
    a.op("addi s4, s4, -1");
    a.op("bne s4, x0, cipher_round");
    a.op("jal s1, sub_bytes");
    a.op("jal s1, shift_rows");
    a.op("jal s1, add_round_key");
    a.op("ret");
}

fn emit_ctr_incr(a: &mut Asm) {
    a.comment("big-endian increment of the chain block");
    a.label("ctr_incr");
    a.op("addi t0, x0, 15");
    a.label("ctr_incr_loop");
    a.op(format!("addi t1, x0, {CHAIN_ADDR}"));
    a.op("add t1, t1, t0");
    a.op("lbu t2, 0(t1)");
    a.op("addi t2, t2, 1");
    a.op("andi t2, t2, 255");
    a.op("sb t2, 0(t1)");
    a.op("bne t2, x0, ctr_incr_done");
    a.op("addi t0, t0, -1");
    a.op("bge t0, x0, ctr_incr_loop");
    a.label("ctr_incr_done");
    a.op("ret");
}

fn emit_main(a: &mut Asm, job: &AesJob, ct_addr: u32) {
    let mode = job.config.mode;
    a.comment(&format!(
        "software {} over {} block(s)",
        job.config,
        job.blocks()
    ));
    a.label("main");
    a.op("jal ra, key_expand");
    if mode != AesMode::Ecb {
        a.op(format!("addi a0, x0, {IV_ADDR}"));
        a.op(format!("addi a1, x0, {CHAIN_ADDR}"));
        a.op("jal ra, memcpy16");
    }
    a.op(format!("addi s0, x0, {}", job.blocks()));
    a.op(format!("addi s2, x0, {PT_ADDR}"));
    a.op(format!("addi s3, x0, {ct_addr}"));
    a.label("block_loop");
    match mode {
        AesMode::Ecb => {
            a.op("mv a0, s2");
            a.op(format!("addi a1, x0, {STATE_ADDR}"));
            a.op("jal ra, memcpy16");
        }
        AesMode::Cbc => {
            a.op("mv a0, s2");
            a.op(format!("addi a1, x0, {CHAIN_ADDR}"));
            a.op(format!("addi a2, x0, {STATE_ADDR}"));
            a.op("jal ra, xor16");
        }
        AesMode::Ctr | AesMode::Cfb => {
            a.op(format!("addi a0, x0, {CHAIN_ADDR}"));
            a.op(format!("addi a1, x0, {STATE_ADDR}"));
            a.op("jal ra, memcpy16");
        }
    }
    a.op("jal ra, cipher");
    match mode {
        AesMode::Ecb => {
            a.op(format!("addi a0, x0, {STATE_ADDR}"));
            a.op("mv a1, s3");
            a.op("jal ra, memcpy16");
        }
        AesMode::Cbc => {
            a.op(format!("addi a0, x0, {STATE_ADDR}"));
            a.op("mv a1, s3");
            a.op("jal ra, memcpy16");
            a.op(format!("addi a0, x0, {STATE_ADDR}"));
            a.op(format!("addi a1, x0, {CHAIN_ADDR}"));
            a.op("jal ra, memcpy16");
        }
        AesMode::Ctr => {
            a.op(format!("addi a0, x0, {STATE_ADDR}"));
            a.op("mv a1, s2");
            a.op("mv a2, s3");
            a.op("jal ra, xor16");
            a.op("jal ra, ctr_incr");
        }
        AesMode::Cfb => {
            a.op(format!("addi a0, x0, {STATE_ADDR}"));
            a.op("mv a1, s2");
            a.op("mv a2, s3");
            a.op("jal ra, xor16");
            a.op("mv a0, s3");
            a.op(format!("addi a1, x0, {CHAIN_ADDR}"));
            a.op("jal ra, memcpy16");
        }
    }
    a.op("addi s2, s2, 16");
    a.op("addi s3, s3, 16");
    a.op("addi s0, s0, -1");
    a.op("bne s0, x0, block_loop");
    a.op("ebreak");
}

pub fn generate_baseline(job: &AesJob) -> Result<GeneratedProgram, String> {
    job.validate()?;
    let key_size = job.config.key_size;
    let rounds = key_size.rounds();
    let ct_addr = PT_ADDR + 16 * job.blocks() as u32;

    let mut a = Asm::new();
    emit_main(&mut a, job, ct_addr);
    a.blank();
    emit_cipher(&mut a, rounds);
    a.blank();
    emit_key_expand(&mut a, key_size.key_words(), rounds);
    a.blank();
    emit_round_ops(&mut a);
    a.blank();
    emit_helpers(&mut a);
    if job.config.mode == AesMode::Ctr {
        a.blank();
        emit_ctr_incr(&mut a);
    }

    let image = assemble(&a.text).map_err(|e| e.to_string())?;

    Ok(GeneratedProgram {
        name: format!("baseline-{}", job.config),
        source: a.text,
        image,
        dm_init: vec![
            (SBOX_ADDR, aesref::SBOX.to_vec()),
            (RCON_ADDR, RCON.to_vec()),
            (KEY_ADDR, job.key.clone()),
            (IV_ADDR, job.iv.to_vec()),
            (PT_ADDR, job.plaintext.clone()),
        ],
        ct_addr,
        ct_len: job.plaintext.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aesref;
    use crate::config::{AesConfig, KeySize};
    use crate::isa::pipeline::run_pipeline;
    use crate::isa::state::{CoreConfig, CoreState};
    use crate::isa::run_functional;

    fn job(config: AesConfig, blocks: usize) -> AesJob {
        AesJob {
            config,
            key: (0..config.key_size.key_bytes())
                .map(|i| (i as u8).wrapping_mul(0x1f).wrapping_add(3))
                .collect(),
            iv: std::array::from_fn(|i| 0x50 ^ (i as u8)),
            plaintext: (0..16 * blocks).map(|i| (i as u8).wrapping_mul(13)).collect(),
        }
    }

    #[test]
    fn matches_reference_for_every_mode_and_key_size() {
        for config in AesConfig::all() {
            for blocks in [1, 3] {
                let j = job(config, blocks);
                let prog = generate_baseline(&j).unwrap();
                let mut core = CoreState::new(CoreConfig::default());
                prog.install(&mut core).unwrap();
                run_functional(&mut core, 10_000_000).unwrap();
                let ct = prog.read_ciphertext(&core).unwrap();
                let want = aesref::encrypt(j.config, &j.key, j.iv, &j.plaintext).unwrap();
                assert_eq!(ct, want, "{config} x{blocks}");
            }
        }
    }

    #[test]
    fn ctr_carry_propagates() {
        // An IV ending in 0xff forces the increment's carry path.
        let mut j = job(AesConfig::new(crate::AesMode::Ctr, KeySize::K128), 3);
        j.iv = [0xff; 16];
        let prog = generate_baseline(&j).unwrap();
        let mut core = CoreState::new(CoreConfig::default());
        prog.install(&mut core).unwrap();
        run_functional(&mut core, 10_000_000).unwrap();
        assert_eq!(
            prog.read_ciphertext(&core).unwrap(),
            aesref::encrypt(j.config, &j.key, j.iv, &j.plaintext).unwrap()
        );
    }

    #[test]
    fn pipeline_agrees_with_interpreter() {
        let j = job(AesConfig::new(crate::AesMode::Cbc, KeySize::K128), 2);
        let prog = generate_baseline(&j).unwrap();

        let mut pipe_core = CoreState::new(CoreConfig::default());
        prog.install(&mut pipe_core).unwrap();
        let report = run_pipeline(&mut pipe_core, 50_000_000).unwrap();

        let mut iss_core = CoreState::new(CoreConfig::default());
        prog.install(&mut iss_core).unwrap();
        run_functional(&mut iss_core, 10_000_000).unwrap();

        assert_eq!(
            pipe_core.architectural_state(),
            iss_core.architectural_state()
        );
        assert!(report.cycles > report.retired);
    }

    #[test]
    fn source_is_deterministic() {
        let j = job(AesConfig::new(crate::AesMode::Cfb, KeySize::K192), 4);
        assert_eq!(
            generate_baseline(&j).unwrap().source,
            generate_baseline(&j).unwrap().source
        );
    }
}
