//! Software model of an RV32I core extended with a multi-mode AES unit.
//!
//! The crate is organised around six pieces:
//!
//! * [`isa`] — bit-exact RV32I interpreter plus a five-stage pipeline
//!   cycle model (the execution substrate for every measured program).
//! * [`ext`] — the AES extension: a 256x32-bit buffer set, the buffer
//!   access instructions and the specialized AES unit with its latency
//!   model.
//! * [`aesref`] — an independent, clarity-first AES implementation used
//!   as the correctness oracle for everything else.
//! * [`asm`] — assembler/disassembler for the RV32I subset plus the
//!   extension mnemonics, and generators for the baseline (pure RV32I)
//!   and accelerated AES programs.
//! * [`system`] — SoC-level model of the ping-pong memory transfer
//!   pipeline (WRITE/EXEC/READ overlap over the two data-memory halves).
//! * [`bench`] — benchmark harness: known-answer tests, random
//!   cross-validation, baseline-vs-accelerated cycle comparisons and the
//!   throughput/efficiency metrics.
//!
//! Simulations are deterministic values; the `parallel` feature (on by
//! default) only parallelises *independent* runs at the harness level
//! via rayon. Disabling it yields a fully sequential build with
//! identical results.

pub mod aesref;
pub mod asm;
pub mod bench;
pub mod config;
pub mod ext;
pub mod isa;
pub mod system;

pub use config::{AesConfig, AesMode, KeySize};
