//! The specialized AES unit: the datapath behind the twelve AES
//! instructions.
//!
//! This implementation is deliberately *not* shared with [`crate::aesref`].
//! The reference module transcribes the published S-box table and works on
//! big-endian key words; here the S-box is derived from first principles
//! (multiplicative inverse in GF(2^8) followed by the affine map) and the
//! whole datapath works on flat 16-byte states in bus order, mirroring how
//! the hardware sees the buffer contents. Agreement between the two is one
//! of the correctness arguments, so they must not share code paths.

use std::sync::OnceLock;

use crate::config::{AesConfig, AesMode, KeySize};
use crate::ext::buffer::BufferUnit;
use crate::ext::ExtLatency;
use crate::isa::ExecError;

/// GF(2^8) multiplication modulo x^8 + x^4 + x^3 + x + 1.
fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        let carry = a & 0x80 != 0;
        a <<= 1;
        if carry {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    acc
}

/// Multiplicative inverse in GF(2^8); 0 maps to 0 by convention.
fn gf_inv(a: u8) -> u8 {
    if a == 0 {
        return 0;
    }
    (1..=255u8).find(|&b| gf_mul(a, b) == 1).unwrap()
}

fn affine(x: u8) -> u8 {
    x ^ x.rotate_left(1) ^ x.rotate_left(2) ^ x.rotate_left(3) ^ x.rotate_left(4) ^ 0x63
}

/// The substitution table, computed once from the field definition.
pub fn sbox() -> &'static [u8; 256] {
    static TABLE: OnceLock<[u8; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u8; 256];
        for (i, slot) in t.iter_mut().enumerate() {
            *slot = affine(gf_inv(i as u8));
        }
        t
    })
}

fn sub(b: u8) -> u8 {
    sbox()[b as usize]
}

/// Key schedule: expands `key` into `rounds + 1` sixteen-byte round keys.
/// Round-constant bytes are generated on the fly by doubling in the field.
pub fn expand_key(key: &[u8], key_size: KeySize) -> Vec<[u8; 16]> {
    assert_eq!(key.len(), key_size.key_bytes());
    let nk = key_size.key_words();
    let rounds = key_size.rounds();
    let total_words = 4 * (rounds + 1);

    let mut w: Vec<[u8; 4]> = Vec::with_capacity(total_words);
    for chunk in key.chunks_exact(4) {
        w.push(chunk.try_into().unwrap());
    }
    let mut rc: u8 = 1;
    for i in nk..total_words {
        let mut temp = w[i - 1];
        if i % nk == 0 {
            temp.rotate_left(1);
            temp = temp.map(sub);
            temp[0] ^= rc;
            rc = gf_mul(rc, 2);
        } else if nk == 8 && i % nk == 4 {
            temp = temp.map(sub);
        }
        let prev = w[i - nk];
        w.push([
            prev[0] ^ temp[0],
            prev[1] ^ temp[1],
            prev[2] ^ temp[2],
            prev[3] ^ temp[3],
        ]);
    }

    w.chunks_exact(4)
        .map(|quad| {
            let mut rk = [0u8; 16];
            for (c, word) in quad.iter().enumerate() {
                rk[4 * c..4 * c + 4].copy_from_slice(word);
            }
            rk
        })
        .collect()
}

// The state is a flat 16-byte array in bus order: byte i of the block sits
// at state[i], so column c occupies state[4c..4c+4] and row r of column c is
// state[4c + r].

fn add_round_key(state: &mut [u8; 16], rk: &[u8; 16]) {
    for (s, k) in state.iter_mut().zip(rk) {
        *s ^= k;
    }
}

fn sub_bytes(state: &mut [u8; 16]) {
    for s in state.iter_mut() {
        *s = sub(*s);
    }
}

fn shift_rows(state: &mut [u8; 16]) {
    let old = *state;
    for r in 1..4 {
        for c in 0..4 {
            state[4 * c + r] = old[4 * ((c + r) % 4) + r];
        }
    }
}

fn mix_single_column(col: [u8; 4]) -> [u8; 4] {
    let [a0, a1, a2, a3] = col;
    [
        gf_mul(a0, 2) ^ gf_mul(a1, 3) ^ a2 ^ a3,
        a0 ^ gf_mul(a1, 2) ^ gf_mul(a2, 3) ^ a3,
        a0 ^ a1 ^ gf_mul(a2, 2) ^ gf_mul(a3, 3),
        gf_mul(a0, 3) ^ a1 ^ a2 ^ gf_mul(a3, 2),
    ]
}

fn mix_columns(state: &mut [u8; 16]) {
    for c in 0..4 {
        let col: [u8; 4] = state[4 * c..4 * c + 4].try_into().unwrap();
        state[4 * c..4 * c + 4].copy_from_slice(&mix_single_column(col));
    }
}

/// One forward cipher over a single block with pre-expanded round keys.
pub fn cipher_block(block: &[u8; 16], round_keys: &[[u8; 16]]) -> [u8; 16] {
    let rounds = round_keys.len() - 1;
    let mut state = *block;
    add_round_key(&mut state, &round_keys[0]);
    for rk in &round_keys[1..rounds] {
        sub_bytes(&mut state);
        shift_rows(&mut state);
        mix_columns(&mut state);
        add_round_key(&mut state, rk);
    }
    sub_bytes(&mut state);
    shift_rows(&mut state);
    add_round_key(&mut state, &round_keys[rounds]);
    state
}

fn xor_block(a: &[u8; 16], b: &[u8; 16]) -> [u8; 16] {
    let mut out = [0u8; 16];
    for i in 0..16 {
        out[i] = a[i] ^ b[i];
    }
    out
}

/// Big-endian increment of a 128-bit counter block.
fn increment_counter(block: &mut [u8; 16]) {
    for byte in block.iter_mut().rev() {
        let (v, carry) = byte.overflowing_add(1);
        *byte = v;
        if !carry {
            break;
        }
    }
}

/// Bookkeeping for the most recent AES instruction; the pipeline model
/// reads the cost to know how long the EXE stage stays occupied.
#[derive(Clone, Copy, Debug, Default)]
pub struct SauState {
    pub ops_completed: u64,
    pub last_config: Option<AesConfig>,
    pub last_blocks: usize,
    pub last_cost: u64,
}

/// Executes one AES instruction against the buffer contents.
///
/// The block count is the one implied by the latched transfer count (the
/// LoadGo that filled the buffer covered key + IV + plaintext). Reads key,
/// IV and plaintext from their fixed buffer regions, writes ciphertext to
/// the ciphertext region and returns the instruction's cycle cost.
pub fn execute(
    unit: &mut BufferUnit,
    sau: &mut SauState,
    config: AesConfig,
    latency: &ExtLatency,
) -> Result<u64, ExecError> {
    let blocks = unit.declared_blocks()?;
    let key = unit.set.key_bytes(config.key_size);
    let round_keys = expand_key(&key, config.key_size);
    let mut chain = unit.set.iv_bytes();

    for i in 0..blocks {
        let pt = unit.set.plaintext_block(i);
        let ct = match config.mode {
            AesMode::Ecb => cipher_block(&pt, &round_keys),
            AesMode::Cbc => {
                let out = cipher_block(&xor_block(&pt, &chain), &round_keys);
                chain = out;
                out
            }
            AesMode::Ctr => {
                let out = xor_block(&cipher_block(&chain, &round_keys), &pt);
                increment_counter(&mut chain);
                out
            }
            AesMode::Cfb => {
                let out = xor_block(&cipher_block(&chain, &round_keys), &pt);
                chain = out;
                out
            }
        };
        unit.set.set_ciphertext_block(i, &ct);
    }

    let cost = latency.sau_cost(config, blocks as u64);
    sau.ops_completed += 1;
    sau.last_config = Some(config);
    sau.last_blocks = blocks;
    sau.last_cost = cost;
    Ok(cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aesref;
    use crate::ext::buffer::{self, TransferParams};

    #[test]
    fn computed_sbox_matches_published_table() {
        assert_eq!(sbox(), &aesref::SBOX);
    }

    #[test]
    fn round_constants_double_in_the_field() {
        let mut rc = 1u8;
        let mut seq = Vec::new();
        for _ in 0..10 {
            seq.push(rc);
            rc = gf_mul(rc, 2);
        }
        assert_eq!(
            seq,
            vec![0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36]
        );
    }

    #[test]
    fn mix_column_known_vector() {
        // Worked single-column example: db 13 53 45 -> 8e 4d a1 bc.
        assert_eq!(
            mix_single_column([0xdb, 0x13, 0x53, 0x45]),
            [0x8e, 0x4d, 0xa1, 0xbc]
        );
    }

    #[test]
    fn shift_rows_moves_rows_not_columns() {
        let mut state: [u8; 16] = std::array::from_fn(|i| i as u8);
        shift_rows(&mut state);
        // Row 0 (indices 0,4,8,12) is unchanged.
        assert_eq!([state[0], state[4], state[8], state[12]], [0, 4, 8, 12]);
        // Row 1 rotates left by one column.
        assert_eq!([state[1], state[5], state[9], state[13]], [5, 9, 13, 1]);
    }

    #[test]
    fn last_round_key_matches_worked_expansion() {
        // Expansion of 2b7e1516 28aed2a6 abf71588 09cf4f3c ends with
        // words d014f9a8 c9ee2589 e13f0cc8 b6630ca6.
        let key: Vec<u8> = (0..16)
            .map(|i| {
                [
                    0x2b, 0x7e, 0x15, 0x16, 0x28, 0xae, 0xd2, 0xa6, 0xab, 0xf7, 0x15, 0x88, 0x09,
                    0xcf, 0x4f, 0x3c,
                ][i]
            })
            .collect();
        let rks = expand_key(&key, KeySize::K128);
        assert_eq!(rks.len(), 11);
        assert_eq!(
            rks[10],
            [
                0xd0, 0x14, 0xf9, 0xa8, 0xc9, 0xee, 0x25, 0x89, 0xe1, 0x3f, 0x0c, 0xc8, 0xb6,
                0x63, 0x0c, 0xa6
            ]
        );
    }

    #[test]
    fn single_block_matches_reference_for_all_key_sizes() {
        let block: [u8; 16] = std::array::from_fn(|i| (i * 0x11) as u8);
        for key_size in KeySize::ALL {
            let key: Vec<u8> = (0..key_size.key_bytes() as u8).collect();
            let rks = expand_key(&key, key_size);
            let here = cipher_block(&block, &rks);
            let there = aesref::cipher_block(block, &key, key_size.rounds());
            assert_eq!(here, there, "{key_size}");
        }
    }

    #[test]
    fn execute_agrees_with_reference_across_modes() {
        for config in AesConfig::all() {
            let key: Vec<u8> = (0..config.key_size.key_bytes())
                .map(|i| (i as u8).wrapping_mul(37).wrapping_add(5))
                .collect();
            let iv: [u8; 16] = std::array::from_fn(|i| 0xf0 ^ i as u8);
            let pt: Vec<u8> = (0..48).map(|i| (i as u8).wrapping_mul(11)).collect();

            let mut unit = BufferUnit::default();
            unit.set.set_region_bytes(buffer::KEY_BASE, &key);
            unit.set.set_region_bytes(buffer::IV_BASE, &iv);
            unit.set.set_region_bytes(buffer::PT_BASE, &pt);
            unit.params = TransferParams {
                dm_addr: 0,
                word_count: (buffer::HEADER_WORDS + pt.len() / 4) as u32,
            };

            let mut sau = SauState::default();
            let cost = execute(&mut unit, &mut sau, config, &ExtLatency::default()).unwrap();
            assert_eq!(cost, ExtLatency::default().sau_cost(config, 3));

            let expected = aesref::encrypt(config, &key, iv, &pt).unwrap();
            let mut got = Vec::new();
            for b in 0..3 {
                got.extend_from_slice(&unit.set.ciphertext_block(b));
            }
            assert_eq!(got, expected, "{config}");
        }
    }

    #[test]
    fn counter_increment_carries_big_endian() {
        let mut c = [0xffu8; 16];
        increment_counter(&mut c);
        assert_eq!(c, [0u8; 16]);
        let mut c = [0u8; 16];
        c[15] = 0xff;
        increment_counter(&mut c);
        assert_eq!(c[14], 1);
        assert_eq!(c[15], 0);
    }
}
