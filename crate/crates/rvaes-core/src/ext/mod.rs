//! The AES extension: high-bandwidth buffer set, buffer-access
//! instructions and the specialized AES unit, exposed to the core as
//! extension instruction semantics plus a deterministic latency model.

pub mod buffer;
pub mod encoding;
pub mod sau;

pub use buffer::{BufferSet, BufferUnit, TransferParams};
pub use encoding::{BufferOp, ExtensionEncoding};
pub use sau::SauState;

use crate::config::AesConfig;

/// Cycle-cost constants for the extension datapath. All latencies are
/// charged while the owning instruction occupies the EXE stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtLatency {
    /// Fixed setup cost of a DM<->buffer transfer.
    pub transfer_setup_cycles: u64,
    /// Per 32-bit word cost of a DM<->buffer transfer.
    pub transfer_cycles_per_word: u64,
    /// Key expansion produces one round key per this many cycles.
    pub key_cycles_per_round_key: u64,
    /// Depth of the cipher pipeline; also the initiation interval for
    /// streaming modes.
    pub cipher_stages: u64,
}

impl Default for ExtLatency {
    fn default() -> Self {
        ExtLatency {
            transfer_setup_cycles: 1,
            transfer_cycles_per_word: 1,
            key_cycles_per_round_key: 1,
            cipher_stages: 4,
        }
    }
}

impl ExtLatency {
    pub fn transfer_cost(&self, words: u64) -> u64 {
        self.transfer_setup_cycles + words * self.transfer_cycles_per_word
    }

    /// Cost of one AES instruction over `n_blocks` buffered blocks.
    ///
    /// Key expansion emits rounds+1 round keys, then each block makes
    /// `rounds` traversals of the `cipher_stages`-deep pipeline. ECB and
    /// CTR stream blocks at one initiation interval apart; CBC and CFB
    /// chain block i's output into block i+1's input and therefore
    /// serialize.
    pub fn sau_cost(&self, config: AesConfig, n_blocks: u64) -> u64 {
        let rounds = config.rounds() as u64;
        let kexp = (rounds + 1) * self.key_cycles_per_round_key;
        let block_latency = rounds * self.cipher_stages;
        if config.mode.is_chained() {
            kexp + n_blocks * block_latency
        } else {
            kexp + block_latency + (n_blocks.saturating_sub(1)) * self.cipher_stages
        }
    }
}
