//! Two-pass assembler for the RV32I subset plus extension mnemonics.

use std::collections::HashMap;

use thiserror::Error;

use crate::asm::encode;
use crate::config::AesConfig;
use crate::ext::encoding::{aes_mnemonic, ExtensionEncoding};
use crate::ext::BufferOp;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct AsmError {
    pub line: usize,
    pub message: String,
}

const ABI_NAMES: [&str; 32] = [
    "zero", "ra", "sp", "gp", "tp", "t0", "t1", "t2", "s0", "s1", "a0", "a1", "a2", "a3", "a4",
    "a5", "a6", "a7", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "s9", "s10", "s11", "t3", "t4",
    "t5", "t6",
];

pub(crate) fn parse_reg(s: &str) -> Option<u8> {
    let s = s.trim();
    if let Some(n) = s.strip_prefix('x') {
        let n: u8 = n.parse().ok()?;
        return (n < 32).then_some(n);
    }
    if s == "fp" {
        return Some(8);
    }
    ABI_NAMES.iter().position(|&a| a == s).map(|i| i as u8)
}

pub(crate) fn parse_imm(s: &str) -> Option<i64> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let value = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        i64::from_str_radix(hex, 16).ok()?
    } else {
        body.parse::<i64>().ok()?
    };
    Some(if neg { -value } else { value })
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

struct Item {
    line: usize,
    mnemonic: String,
    operands: Vec<String>,
    addr: u32,
}

/// Assembles source text into instruction words, one per line of code.
pub fn assemble(source: &str) -> Result<Vec<u32>, AsmError> {
    let mut labels: HashMap<String, u32> = HashMap::new();
    let mut items: Vec<Item> = Vec::new();

    for (idx, raw_line) in source.lines().enumerate() {
        let line = idx + 1;
        let mut text = raw_line.split('#').next().unwrap_or("").trim();
        // Any number of leading `name:` labels.
        while let Some(colon) = text.find(':') {
            let (head, tail) = text.split_at(colon);
            let head = head.trim();
            if head.is_empty() || !head.chars().all(is_label_char) {
                break;
            }
            let addr = 4 * items.len() as u32;
            if labels.insert(head.to_string(), addr).is_some() {
                return Err(AsmError {
                    line,
                    message: format!("label `{head}` defined twice"),
                });
            }
            text = tail[1..].trim();
        }
        if text.is_empty() {
            continue;
        }
        let (mnemonic, rest) = match text.split_once(char::is_whitespace) {
            Some((m, r)) => (m, r.trim()),
            None => (text, ""),
        };
        let operands = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(|o| o.trim().to_string()).collect()
        };
        items.push(Item {
            line,
            mnemonic: mnemonic.to_ascii_lowercase(),
            operands,
            addr: 4 * items.len() as u32,
        });
    }

    items
        .iter()
        .map(|item| encode_item(item, &labels))
        .collect()
}

fn err(item: &Item, message: impl Into<String>) -> AsmError {
    AsmError {
        line: item.line,
        message: message.into(),
    }
}

fn need(item: &Item, n: usize) -> Result<(), AsmError> {
    if item.operands.len() != n {
        return Err(err(
            item,
            format!(
                "`{}` takes {n} operand(s), got {}",
                item.mnemonic,
                item.operands.len()
            ),
        ));
    }
    Ok(())
}

fn reg(item: &Item, i: usize) -> Result<u8, AsmError> {
    parse_reg(&item.operands[i])
        .ok_or_else(|| err(item, format!("`{}` is not a register", item.operands[i])))
}

fn imm(item: &Item, i: usize) -> Result<i64, AsmError> {
    parse_imm(&item.operands[i])
        .ok_or_else(|| err(item, format!("`{}` is not a number", item.operands[i])))
}

/// `imm(reg)` memory operand.
fn mem_operand(item: &Item, i: usize) -> Result<(i64, u8), AsmError> {
    let text = &item.operands[i];
    let open = text
        .find('(')
        .ok_or_else(|| err(item, format!("`{text}` is not of the form imm(reg)")))?;
    let close = text
        .rfind(')')
        .filter(|&c| c > open)
        .ok_or_else(|| err(item, format!("`{text}` is missing `)`")))?;
    let off_text = text[..open].trim();
    let offset = if off_text.is_empty() {
        0
    } else {
        parse_imm(off_text).ok_or_else(|| err(item, format!("`{off_text}` is not a number")))?
    };
    let base = parse_reg(&text[open + 1..close])
        .ok_or_else(|| err(item, format!("`{}` is not a register", &text[open + 1..close])))?;
    Ok((offset, base))
}

/// Branch/jump target: a label or a numeric PC-relative offset.
fn target(item: &Item, i: usize, labels: &HashMap<String, u32>) -> Result<i64, AsmError> {
    let text = item.operands[i].trim();
    if let Some(imm) = parse_imm(text) {
        return Ok(imm);
    }
    labels
        .get(text)
        .map(|&addr| i64::from(addr) - i64::from(item.addr))
        .ok_or_else(|| err(item, format!("unknown label `{text}`")))
}

fn encode_item(item: &Item, labels: &HashMap<String, u32>) -> Result<u32, AsmError> {
    let fix = |r: Result<u32, String>| r.map_err(|m| err(item, m));
    let m = item.mnemonic.as_str();

    // R-type ALU ops.
    if let Some((f3, f7)) = match m {
        "add" => Some((0, 0x00)),
        "sub" => Some((0, 0x20)),
        "sll" => Some((1, 0x00)),
        "slt" => Some((2, 0x00)),
        "sltu" => Some((3, 0x00)),
        "xor" => Some((4, 0x00)),
        "srl" => Some((5, 0x00)),
        "sra" => Some((5, 0x20)),
        "or" => Some((6, 0x00)),
        "and" => Some((7, 0x00)),
        _ => None,
    } {
        need(item, 3)?;
        return Ok(encode::r_type(
            0x33,
            f3,
            f7,
            reg(item, 0)?,
            reg(item, 1)?,
            reg(item, 2)?,
        ));
    }

    // I-type ALU ops.
    if let Some(f3) = match m {
        "addi" => Some(0),
        "slti" => Some(2),
        "sltiu" => Some(3),
        "xori" => Some(4),
        "ori" => Some(6),
        "andi" => Some(7),
        _ => None,
    } {
        need(item, 3)?;
        return fix(encode::i_type(
            0x13,
            f3,
            reg(item, 0)?,
            reg(item, 1)?,
            imm(item, 2)?,
        ));
    }

    if let Some((f3, f7)) = match m {
        "slli" => Some((1, 0x00)),
        "srli" => Some((5, 0x00)),
        "srai" => Some((5, 0x20)),
        _ => None,
    } {
        need(item, 3)?;
        return fix(encode::shift_type(
            f3,
            f7,
            reg(item, 0)?,
            reg(item, 1)?,
            imm(item, 2)?,
        ));
    }

    if let Some(f3) = match m {
        "lb" => Some(0),
        "lh" => Some(1),
        "lw" => Some(2),
        "lbu" => Some(4),
        "lhu" => Some(5),
        _ => None,
    } {
        need(item, 2)?;
        let (offset, base) = mem_operand(item, 1)?;
        return fix(encode::i_type(0x03, f3, reg(item, 0)?, base, offset));
    }

    if let Some(f3) = match m {
        "sb" => Some(0),
        "sh" => Some(1),
        "sw" => Some(2),
        _ => None,
    } {
        need(item, 2)?;
        let (offset, base) = mem_operand(item, 1)?;
        return fix(encode::s_type(f3, base, reg(item, 0)?, offset));
    }

    if let Some(f3) = match m {
        "beq" => Some(0),
        "bne" => Some(1),
        "blt" => Some(4),
        "bge" => Some(5),
        "bltu" => Some(6),
        "bgeu" => Some(7),
        _ => None,
    } {
        need(item, 3)?;
        return fix(encode::b_type(
            f3,
            reg(item, 0)?,
            reg(item, 1)?,
            target(item, 2, labels)?,
        ));
    }

    match m {
        "lui" | "auipc" => {
            need(item, 2)?;
            let opcode = if m == "lui" { 0x37 } else { 0x17 };
            fix(encode::u_type(opcode, reg(item, 0)?, imm(item, 1)?))
        }
        "jal" => {
            need(item, 2)?;
            fix(encode::j_type(reg(item, 0)?, target(item, 1, labels)?))
        }
        "jalr" => {
            need(item, 3)?;
            fix(encode::i_type(
                0x67,
                0,
                reg(item, 0)?,
                reg(item, 1)?,
                imm(item, 2)?,
            ))
        }
        "ebreak" => {
            need(item, 0)?;
            Ok(0x0010_0073)
        }
        // Pseudo-instructions; each expands to exactly one word.
        "nop" => {
            need(item, 0)?;
            Ok(0x0000_0013)
        }
        "mv" => {
            need(item, 2)?;
            fix(encode::i_type(0x13, 0, reg(item, 0)?, reg(item, 1)?, 0))
        }
        "li" => {
            need(item, 2)?;
            fix(encode::i_type(0x13, 0, reg(item, 0)?, 0, imm(item, 1)?))
        }
        "j" => {
            need(item, 1)?;
            fix(encode::j_type(0, target(item, 0, labels)?))
        }
        "ret" => {
            need(item, 0)?;
            fix(encode::i_type(0x67, 0, 0, 1, 0))
        }
        ".word" => {
            need(item, 1)?;
            let v = imm(item, 0)?;
            if !(i64::from(i32::MIN)..=i64::from(u32::MAX)).contains(&v) {
                return Err(err(item, format!("`{v}` does not fit in 32 bits")));
            }
            Ok(v as u32)
        }
        "buf.set" | "buf.loadgo" | "buf.storego" => {
            need(item, 0)?;
            let op = match m {
                "buf.set" => BufferOp::SetParams,
                "buf.loadgo" => BufferOp::LoadGo,
                _ => BufferOp::StoreGo,
            };
            Ok(ExtensionEncoding::get().encode_buffer(op))
        }
        _ => {
            if let Some(config) = AesConfig::all().find(|c| aes_mnemonic(*c) == m) {
                need(item, 0)?;
                return Ok(ExtensionEncoding::get().encode_aes(config));
            }
            Err(err(item, format!("unknown mnemonic `{m}`")))
        }
    }
}
