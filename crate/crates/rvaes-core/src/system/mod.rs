//! System-level ping-pong simulation.
//!
//! A host feeds the core through the two halves of data memory: while
//! the core runs AES over the chunk sitting in one half, a single
//! shared transfer engine writes the next chunk into the other half or
//! reads a finished chunk back out. Phases for chunk `i`:
//!
//! * `Write`  — host moves key/IV/plaintext into half `i % 2`
//! * `Exec`   — core encrypts the chunk in place
//! * `Read`   — host pulls the ciphertext back out
//!
//! One engine serves all writes and reads, in the fixed order
//! `W0, W1, R0, W2, R1, …, W(n-1), R(n-2), R(n-1)`: the next chunk's
//! write is issued ahead of the previous chunk's read-back so the core
//! never starves when transfers are cheap. A write may also have to
//! wait for its half to drain (`R(i-2)` complete), and a read for its
//! exec to finish. The core executes chunks strictly in order.

use std::fmt::Write as _;

use crate::aesref;
use crate::asm::{generate_accelerated, AesJob};
use crate::config::AesConfig;
use crate::ext::buffer::{HEADER_WORDS, MAX_BLOCKS};
use crate::isa::pipeline::run_pipeline;
use crate::isa::state::{CoreConfig, CoreState};
use crate::isa::ExecError;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Write,
    Exec,
    Read,
}

impl Phase {
    pub fn letter(self) -> char {
        match self {
            Phase::Write => 'W',
            Phase::Exec => 'E',
            Phase::Read => 'R',
        }
    }
}

/// One contiguous activity on the timeline, in cycles.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseSpan {
    pub chunk: usize,
    pub half: usize,
    pub phase: Phase,
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemSchedule {
    pub chunks: usize,
    pub spans: Vec<PhaseSpan>,
    pub total_cycles: u64,
    /// Cycles the core spent executing (sum of exec phases).
    pub exec_busy: u64,
    /// Fraction of the total timeline the core was executing.
    pub core_utilization: f64,
    /// True when every exec after the first starts the moment the
    /// previous one retires, i.e. transfers never stall the core.
    pub exec_bound: bool,
}

/// Cost model for the shared transfer engine.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransferModel {
    /// Fixed handshake cost per transfer.
    pub setup_cycles: u64,
    /// Words moved per cycle once streaming (a DMA burst width).
    pub words_per_cycle: u64,
}

impl Default for TransferModel {
    fn default() -> Self {
        TransferModel {
            setup_cycles: 8,
            words_per_cycle: 1,
        }
    }
}

impl TransferModel {
    pub fn cycles(&self, words: u64) -> u64 {
        let rate = self.words_per_cycle.max(1);
        self.setup_cycles + words.div_ceil(rate)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SystemError {
    #[error("chunk of {blocks} blocks exceeds the {MAX_BLOCKS}-block buffer capacity")]
    Capacity { blocks: usize },
    #[error("chunk {chunk}: {source}")]
    Exec {
        chunk: usize,
        #[source]
        source: ExecError,
    },
    #[error("chunk {chunk}: simulated ciphertext disagrees with the reference model")]
    Mismatch { chunk: usize },
    #[error("{0}")]
    Program(String),
}

/// Builds the ping-pong timeline for `n` chunks with per-chunk phase
/// durations. All slices must have length `n`.
fn schedule_phases(writes: &[u64], execs: &[u64], reads: &[u64]) -> SystemSchedule {
    let n = writes.len();
    assert_eq!(n, execs.len());
    assert_eq!(n, reads.len());

    let mut spans = Vec::with_capacity(3 * n);
    let mut w_end = vec![0u64; n];
    let mut e_end = vec![0u64; n];
    let mut r_end = vec![0u64; n];
    let mut engine_free = 0u64;
    let mut exec_posted = 0usize; // execs whose start time is already known

    // Engine op stream: W0, then (W_i, R_{i-1}) pairs, then R_{n-1}.
    // Exec start times become known as their inputs land; we fold them
    // in between engine ops so read waits see final exec end times.
    let post_execs = |upto: usize,
                          spans: &mut Vec<PhaseSpan>,
                          w_end: &[u64],
                          e_end: &mut [u64],
                          exec_posted: &mut usize| {
        while *exec_posted < upto {
            let i = *exec_posted;
            let after_prev = if i == 0 { 0 } else { e_end[i - 1] };
            let start = w_end[i].max(after_prev);
            e_end[i] = start + execs[i];
            spans.push(PhaseSpan {
                chunk: i,
                half: i % 2,
                phase: Phase::Exec,
                start,
                end: e_end[i],
            });
            *exec_posted += 1;
        }
    };

    for i in 0..n {
        // Write chunk i: engine free, and half (i % 2) drained.
        let half_free = if i >= 2 { r_end[i - 2] } else { 0 };
        let start = engine_free.max(half_free);
        w_end[i] = start + writes[i];
        engine_free = w_end[i];
        spans.push(PhaseSpan {
            chunk: i,
            half: i % 2,
            phase: Phase::Write,
            start,
            end: w_end[i],
        });
        post_execs(i + 1, &mut spans, &w_end, &mut e_end, &mut exec_posted);

        // Read chunk i-1 (the canonical order defers it past W_{i}).
        if i >= 1 {
            let j = i - 1;
            let start = engine_free.max(e_end[j]);
            r_end[j] = start + reads[j];
            engine_free = r_end[j];
            spans.push(PhaseSpan {
                chunk: j,
                half: j % 2,
                phase: Phase::Read,
                start,
                end: r_end[j],
            });
        }
    }
    if n >= 1 {
        let j = n - 1;
        let start = engine_free.max(e_end[j]);
        r_end[j] = start + reads[j];
        spans.push(PhaseSpan {
            chunk: j,
            half: j % 2,
            phase: Phase::Read,
            start,
            end: r_end[j],
        });
    }

    let total_cycles = spans.iter().map(|s| s.end).max().unwrap_or(0);
    let exec_busy: u64 = execs.iter().sum();
    let exec_bound = (1..n).all(|i| e_end[i] == e_end[i - 1] + execs[i]);
    SystemSchedule {
        chunks: n,
        spans,
        total_cycles,
        exec_busy,
        core_utilization: if total_cycles == 0 {
            0.0
        } else {
            exec_busy as f64 / total_cycles as f64
        },
        exec_bound,
    }
}

/// Uniform-duration schedule: every chunk costs `write_cycles` to load,
/// `exec_cycles` to encrypt and `read_cycles` to drain.
pub fn schedule(
    chunks: usize,
    write_cycles: u64,
    exec_cycles: u64,
    read_cycles: u64,
) -> SystemSchedule {
    schedule_phases(
        &vec![write_cycles; chunks],
        &vec![exec_cycles; chunks],
        &vec![read_cycles; chunks],
    )
}

#[derive(Debug, Clone)]
pub struct CosimConfig {
    pub aes: AesConfig,
    pub chunks: usize,
    pub blocks_per_chunk: usize,
    pub transfer: TransferModel,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct CosimReport {
    pub config_label: String,
    pub chunks: usize,
    pub blocks_per_chunk: usize,
    pub write_words: u64,
    pub read_words: u64,
    pub write_cycles: u64,
    pub read_cycles: u64,
    /// Measured pipeline cycles for each chunk's accelerated program.
    pub chunk_exec_cycles: Vec<u64>,
    pub verified_chunks: usize,
    pub schedule: SystemSchedule,
}

/// Runs each chunk's accelerated program on the cycle model to get real
/// exec durations, verifies every chunk's ciphertext against the
/// reference model, then lays the measured phases onto the ping-pong
/// timeline.
pub fn cosimulate(cfg: &CosimConfig) -> Result<CosimReport, SystemError> {
    if cfg.blocks_per_chunk == 0 || cfg.blocks_per_chunk > MAX_BLOCKS {
        return Err(SystemError::Capacity {
            blocks: cfg.blocks_per_chunk,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let write_words = (HEADER_WORDS + 4 * cfg.blocks_per_chunk) as u64;
    let read_words = 4 * cfg.blocks_per_chunk as u64;

    let mut exec_cycles = Vec::with_capacity(cfg.chunks);
    let mut verified = 0;
    for chunk in 0..cfg.chunks {
        let job = AesJob {
            config: cfg.aes,
            key: (0..cfg.aes.key_size.key_bytes())
                .map(|_| rng.gen())
                .collect(),
            iv: std::array::from_fn(|_| rng.gen()),
            plaintext: (0..16 * cfg.blocks_per_chunk).map(|_| rng.gen()).collect(),
        };
        let prog = generate_accelerated(&job).map_err(SystemError::Program)?;
        let mut core = CoreState::new(CoreConfig::default());
        prog.install(&mut core)
            .map_err(|source| SystemError::Exec { chunk, source })?;
        let report = run_pipeline(&mut core, 10_000_000)
            .map_err(|source| SystemError::Exec { chunk, source })?;
        let got = prog
            .read_ciphertext(&core)
            .map_err(|source| SystemError::Exec { chunk, source })?;
        let want = aesref::encrypt(job.config, &job.key, job.iv, &job.plaintext)
            .expect("job dimensions were validated");
        if got != want {
            return Err(SystemError::Mismatch { chunk });
        }
        verified += 1;
        exec_cycles.push(report.cycles);
    }

    let w = cfg.transfer.cycles(write_words);
    let r = cfg.transfer.cycles(read_words);
    let schedule = schedule_phases(
        &vec![w; cfg.chunks],
        &exec_cycles,
        &vec![r; cfg.chunks],
    );
    Ok(CosimReport {
        config_label: cfg.aes.label(),
        chunks: cfg.chunks,
        blocks_per_chunk: cfg.blocks_per_chunk,
        write_words,
        read_words,
        write_cycles: w,
        read_cycles: r,
        chunk_exec_cycles: exec_cycles,
        verified_chunks: verified,
        schedule,
    })
}

/// `chunk,half,phase,start,end` rows, ordered by start time.
pub fn schedule_csv(schedule: &SystemSchedule) -> String {
    let mut rows = schedule.spans.clone();
    rows.sort_by_key(|s| (s.start, s.chunk));
    let mut out = String::from("chunk,half,phase,start,end\n");
    for s in rows {
        writeln!(
            out,
            "{},{},{:?},{},{}",
            s.chunk,
            s.half,
            s.phase,
            s.start,
            s.end
        )
        .unwrap();
    }
    out
}

/// Text Gantt chart, one row per chunk, `width` columns of timeline.
pub fn render_gantt(schedule: &SystemSchedule, width: usize) -> String {
    let width = width.max(10);
    let total = schedule.total_cycles.max(1);
    let col = |t: u64| ((t as u128 * width as u128) / total as u128) as usize;
    let mut out = String::new();
    writeln!(
        out,
        "total {} cycles, core busy {} ({:.1}%)",
        schedule.total_cycles,
        schedule.exec_busy,
        schedule.core_utilization * 100.0
    )
    .unwrap();
    for chunk in 0..schedule.chunks {
        let mut row = vec![b'.'; width];
        for s in schedule.spans.iter().filter(|s| s.chunk == chunk) {
            let a = col(s.start);
            let b = col(s.end).max(a + 1).min(width);
            for cell in &mut row[a..b] {
                *cell = s.phase.letter() as u8;
            }
        }
        writeln!(
            out,
            "chunk {:>3} half {} |{}|",
            chunk,
            chunk % 2,
            String::from_utf8(row).unwrap()
        )
        .unwrap();
    }
    out
}
