//! Word builders for each RV32I encoding format, with range checks.
//! Errors are plain strings; the parser attaches line numbers.

pub fn r_type(opcode: u32, f3: u32, f7: u32, rd: u8, rs1: u8, rs2: u8) -> u32 {
    (f7 << 25)
        | (u32::from(rs2) << 20)
        | (u32::from(rs1) << 15)
        | (f3 << 12)
        | (u32::from(rd) << 7)
        | opcode
}

pub fn i_type(opcode: u32, f3: u32, rd: u8, rs1: u8, imm: i64) -> Result<u32, String> {
    if !(-2048..=2047).contains(&imm) {
        return Err(format!("immediate {imm} outside [-2048, 2047]"));
    }
    Ok((((imm as u32) & 0xfff) << 20)
        | (u32::from(rs1) << 15)
        | (f3 << 12)
        | (u32::from(rd) << 7)
        | opcode)
}

pub fn shift_type(f3: u32, f7: u32, rd: u8, rs1: u8, shamt: i64) -> Result<u32, String> {
    if !(0..=31).contains(&shamt) {
        return Err(format!("shift amount {shamt} outside [0, 31]"));
    }
    Ok((f7 << 25)
        | ((shamt as u32) << 20)
        | (u32::from(rs1) << 15)
        | (f3 << 12)
        | (u32::from(rd) << 7)
        | 0x13)
}

pub fn s_type(f3: u32, rs1: u8, rs2: u8, imm: i64) -> Result<u32, String> {
    if !(-2048..=2047).contains(&imm) {
        return Err(format!("store offset {imm} outside [-2048, 2047]"));
    }
    let imm = imm as u32;
    Ok((((imm >> 5) & 0x7f) << 25)
        | (u32::from(rs2) << 20)
        | (u32::from(rs1) << 15)
        | (f3 << 12)
        | ((imm & 0x1f) << 7)
        | 0x23)
}

pub fn b_type(f3: u32, rs1: u8, rs2: u8, offset: i64) -> Result<u32, String> {
    if offset % 2 != 0 {
        return Err(format!("branch offset {offset} is odd"));
    }
    if !(-4096..=4094).contains(&offset) {
        return Err(format!("branch offset {offset} outside [-4096, 4094]"));
    }
    let o = offset as u32;
    Ok((((o >> 12) & 1) << 31)
        | (((o >> 5) & 0x3f) << 25)
        | (u32::from(rs2) << 20)
        | (u32::from(rs1) << 15)
        | (f3 << 12)
        | (((o >> 1) & 0xf) << 8)
        | (((o >> 11) & 1) << 7)
        | 0x63)
}

pub fn u_type(opcode: u32, rd: u8, value: i64) -> Result<u32, String> {
    if !(0..=0xfffff).contains(&value) {
        return Err(format!("upper immediate {value:#x} outside [0, 0xfffff]"));
    }
    Ok(((value as u32) << 12) | (u32::from(rd) << 7) | opcode)
}

pub fn j_type(rd: u8, offset: i64) -> Result<u32, String> {
    if offset % 2 != 0 {
        return Err(format!("jump offset {offset} is odd"));
    }
    if !(-(1 << 20)..(1 << 20)).contains(&offset) {
        return Err(format!("jump offset {offset} outside +/-1MiB"));
    }
    let o = offset as u32;
    Ok((((o >> 20) & 1) << 31)
        | (((o >> 1) & 0x3ff) << 21)
        | (((o >> 11) & 1) << 20)
        | (((o >> 12) & 0xff) << 12)
        | (u32::from(rd) << 7)
        | 0x6f)
}
