//! Disassembler. Output is canonical assembler input: numeric `xN`
//! registers, decimal offsets (hex for upper immediates), pc-relative
//! branch/jump targets as plain numbers. Words that do not decode
//! become `.word` directives, so every 32-bit value disassembles to
//! something that reassembles to itself.

use crate::ext::encoding::aes_mnemonic;
use crate::isa::decode::{
    decode, AluOp, BranchCond, DecodedInstruction, LoadWidth, OpKind, StoreWidth,
};

fn alu_name(op: AluOp, imm_form: bool) -> &'static str {
    match (op, imm_form) {
        (AluOp::Add, false) => "add",
        (AluOp::Add, true) => "addi",
        (AluOp::Sub, false) => "sub",
        (AluOp::Sub, true) => unreachable!("no subi"),
        (AluOp::Sll, false) => "sll",
        (AluOp::Sll, true) => "slli",
        (AluOp::Slt, false) => "slt",
        (AluOp::Slt, true) => "slti",
        (AluOp::Sltu, false) => "sltu",
        (AluOp::Sltu, true) => "sltiu",
        (AluOp::Xor, false) => "xor",
        (AluOp::Xor, true) => "xori",
        (AluOp::Srl, false) => "srl",
        (AluOp::Srl, true) => "srli",
        (AluOp::Sra, false) => "sra",
        (AluOp::Sra, true) => "srai",
        (AluOp::Or, false) => "or",
        (AluOp::Or, true) => "ori",
        (AluOp::And, false) => "and",
        (AluOp::And, true) => "andi",
    }
}

fn branch_name(cond: BranchCond) -> &'static str {
    match cond {
        BranchCond::Eq => "beq",
        BranchCond::Ne => "bne",
        BranchCond::Lt => "blt",
        BranchCond::Ge => "bge",
        BranchCond::Ltu => "bltu",
        BranchCond::Geu => "bgeu",
    }
}

fn load_name(width: LoadWidth) -> &'static str {
    match width {
        LoadWidth::B => "lb",
        LoadWidth::H => "lh",
        LoadWidth::W => "lw",
        LoadWidth::Bu => "lbu",
        LoadWidth::Hu => "lhu",
    }
}

fn store_name(width: StoreWidth) -> &'static str {
    match width {
        StoreWidth::B => "sb",
        StoreWidth::H => "sh",
        StoreWidth::W => "sw",
    }
}

fn render(inst: &DecodedInstruction) -> String {
    let DecodedInstruction {
        kind,
        rd,
        rs1,
        rs2,
        imm,
        ..
    } = *inst;
    match kind {
        OpKind::Lui => format!("lui x{rd}, {:#x}", (imm as u32) >> 12),
        OpKind::Auipc => format!("auipc x{rd}, {:#x}", (imm as u32) >> 12),
        OpKind::Jal => format!("jal x{rd}, {imm}"),
        OpKind::Jalr => format!("jalr x{rd}, x{rs1}, {imm}"),
        OpKind::Branch(cond) => format!("{} x{rs1}, x{rs2}, {imm}", branch_name(cond)),
        OpKind::Load(width) => format!("{} x{rd}, {imm}(x{rs1})", load_name(width)),
        OpKind::Store(width) => format!("{} x{rs2}, {imm}(x{rs1})", store_name(width)),
        OpKind::AluImm(op) => format!("{} x{rd}, x{rs1}, {imm}", alu_name(op, true)),
        OpKind::AluReg(op) => format!("{} x{rd}, x{rs1}, x{rs2}", alu_name(op, false)),
        OpKind::Ebreak => "ebreak".to_string(),
        OpKind::AesExec(config) => aes_mnemonic(config),
        OpKind::BufferSetParams => "buf.set".to_string(),
        OpKind::BufferLoadGo => "buf.loadgo".to_string(),
        OpKind::BufferStoreGo => "buf.storego".to_string(),
    }
}

/// One instruction word to one line of assembly.
pub fn disassemble_word(word: u32) -> String {
    match decode(word) {
        Ok(inst) => render(&inst),
        Err(_) => format!(".word {word:#010x}"),
    }
}

/// A whole image, one instruction per line.
pub fn disassemble_image(words: &[u32]) -> String {
    let mut out = String::new();
    for &w in words {
        out.push_str(&disassemble_word(w));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asm::assemble;

    #[test]
    fn canonical_forms() {
        assert_eq!(disassemble_word(0x0050_0093), "addi x1, x0, 5");
        assert_eq!(disassemble_word(0x1234_52b7), "lui x5, 0x12345");
        assert_eq!(disassemble_word(0x0021_a423), "sw x2, 8(x3)");
        assert_eq!(disassemble_word(0xfe00_0ee3), "beq x0, x0, -4");
        assert_eq!(disassemble_word(0x0010_0073), "ebreak");
        // 0xdeadbeef decodes (it is a jal), so use genuinely illegal words.
        assert_eq!(disassemble_word(0x0000_0000), ".word 0x00000000");
        assert_eq!(disassemble_word(0xffff_ffff), ".word 0xffffffff");
    }

    #[test]
    fn disassembly_reassembles_to_the_same_word() {
        let words = [
            0x0050_0093,
            0x1234_52b7,
            0x0021_a423,
            0xfe00_0ee3,
            0xff9f_f06f,
            0x4031_5093,
            0x0010_0073,
            0x0000_0013,
            0xffc1_2503,
            0xdead_beef, // a perfectly legal jal x29, -150038
            0xffff_ffff, // not decodable: .word round-trip
        ];
        for w in words {
            let text = disassemble_word(w);
            let back = assemble(&text).unwrap();
            assert_eq!(back, vec![w], "{text}");
        }
    }
}
