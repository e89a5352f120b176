//! `rvaes` — harness around the simulator library.
//!
//! Verbs: `kat` (known-answer tests through both paths), `fuzz`
//! (randomized differential testing), `bench` (baseline vs accelerated
//! cycle counts), `cosim` (ping-pong system timeline), `asm`/`disasm`
//! (tooling) and `metrics` (throughput/efficiency formulas).
//!
//! Any oracle mismatch exits nonzero.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use rvaes_core::asm::image::{parse_image, write_image};
use rvaes_core::asm::{assemble, disassemble_image};
use rvaes_core::bench::{
    cross_validate, cross_validate_sequential, run_benchmark_suite, run_kats, MetricInputs,
    MetricReport, SuiteConfig, DEFAULT_FMAX_MHZ,
};
use rvaes_core::system::{cosimulate, render_gantt, schedule_csv, CosimConfig, TransferModel};
use rvaes_core::AesConfig;

#[derive(Parser)]
#[command(
    name = "rvaes",
    version,
    about = "Cycle-approximate RV32I + AES-extension simulator harness"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the frozen known-answer vectors through the reference model
    /// and through full accelerated-program simulations.
    Kat {
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Randomized differential testing of the extension datapath
    /// against the reference model.
    Fuzz {
        /// Random cases per mode/key-size combination.
        #[arg(long, default_value_t = 1000)]
        per_combo: usize,
        #[arg(long, default_value_t = 0xae5)]
        seed: u64,
        /// Run on one thread (default uses the thread pool when built
        /// with the `parallel` feature).
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        json: bool,
    },
    /// Simulate baseline and accelerated programs and report verified
    /// cycle counts and speedups.
    Bench {
        /// Blocks per run.
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        /// Comma-separated labels like `ECB-128,CTR-256`, or `all`.
        #[arg(long, default_value = "all")]
        combos: String,
        #[arg(long, default_value_t = 0xae5)]
        seed: u64,
        /// Clock for Eq. 1 throughput, MHz.
        #[arg(long, default_value_t = DEFAULT_FMAX_MHZ)]
        fmax: f64,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the CSV report here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Fixed timestamp for reproducible reports.
        #[arg(long)]
        timestamp: Option<String>,
    },
    /// Ping-pong system timeline with measured per-chunk exec cycles.
    Cosim {
        #[arg(long, default_value_t = 4)]
        chunks: usize,
        /// Transfer engine streaming rate, words per cycle.
        #[arg(long, default_value_t = 1)]
        dma_rate: u64,
        /// Fixed handshake cost per transfer, cycles.
        #[arg(long, default_value_t = 8)]
        setup: u64,
        /// Blocks per chunk.
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        /// Configuration label like `CTR-128`.
        #[arg(long, default_value = "CTR-128")]
        combo: String,
        #[arg(long, default_value_t = 0xae5)]
        seed: u64,
        /// Write the span table here as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Gantt chart width in columns.
        #[arg(long, default_value_t = 72)]
        width: usize,
    },
    /// Assemble a source file to a hex word image.
    Asm {
        file: PathBuf,
        /// Output path (default stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Disassemble a hex word image back to source.
    Disasm {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the throughput / energy / area formulas.
    Metrics {
        #[arg(long, default_value_t = DEFAULT_FMAX_MHZ)]
        fmax: f64,
        /// Power draw in watts.
        #[arg(long)]
        power: f64,
        /// Occupied slices.
        #[arg(long)]
        slices: f64,
        #[arg(long)]
        cycles_per_block: f64,
        #[arg(long, default_value_t = 128.0)]
        block_bits: f64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_combos(spec: &str) -> Result<Vec<AesConfig>> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(AesConfig::all().collect());
    }
    spec.split(',')
        .map(|s| {
            AesConfig::parse(s.trim())
                .ok_or_else(|| anyhow!("unknown configuration {s:?} (expected e.g. ECB-128)"))
        })
        .collect()
}

fn emit(text: String, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Kat { json } => {
            let rep = run_kats();
            if json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!("{} vectors through the reference model and the cycle model", rep.vectors);
                for f in rep.reference_failures.iter().chain(&rep.simulated_failures) {
                    println!("FAIL {f}");
                }
                if rep.all_passed() {
                    println!("all known-answer tests passed on both paths");
                }
            }
            if !rep.all_passed() {
                bail!("known-answer test failures");
            }
        }
        Cmd::Fuzz {
            per_combo,
            seed,
            sequential,
            json,
        } => {
            let rep = if sequential {
                cross_validate_sequential(per_combo, seed)
            } else {
                cross_validate(per_combo, seed)
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!(
                    "{} cases ({} per combination, seed {:#x}), {} with full program simulation",
                    rep.total_cases, rep.per_combo, rep.seed, rep.full_program_cases
                );
                for f in &rep.failures {
                    println!("FAIL {f}");
                }
                println!("{} mismatches", rep.mismatches);
            }
            if !rep.all_passed() {
                bail!("{} cross-validation mismatches", rep.mismatches);
            }
        }
        Cmd::Bench {
            blocks,
            combos,
            seed,
            fmax,
            json,
            csv,
            timestamp,
        } => {
            let cfg = SuiteConfig {
                combos: parse_combos(&combos)?,
                n_blocks: blocks,
                seed,
                fmax_mhz: fmax,
                timestamp,
                ..SuiteConfig::default()
            };
            let rep = run_benchmark_suite(&cfg)?;
            println!(
                "{:<9} {:>10} {:>8} {:>9} {:>10} {:>9}",
                "config", "baseline", "accel", "speedup", "cyc/blk", "Mbps"
            );
            for r in &rep.results {
                println!(
                    "{:<9} {:>10} {:>8} {:>8.2}x {:>10.1} {:>9.2}",
                    r.config,
                    r.baseline_cycles,
                    r.accel_cycles,
                    r.speedup,
                    r.accel_cycles_per_block,
                    r.throughput_mbps
                );
            }
            println!();
            println!("published reference (4 blocks, 128- to 256-bit keys):");
            for p in &rep.published_reference {
                println!(
                    "{:<4} accel {:>5}..{:<5} baseline {:>7}..{:<7} speedup {:.2}x..{:.2}x",
                    p.mode,
                    p.accel_cycles_min,
                    p.accel_cycles_max,
                    p.baseline_cycles_min,
                    p.baseline_cycles_max,
                    p.speedup_min,
                    p.speedup_max
                );
            }
            if let Some(path) = json {
                fs::write(&path, rep.to_json())
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
            if let Some(path) = csv {
                fs::write(&path, rep.to_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
        }
        Cmd::Cosim {
            chunks,
            dma_rate,
            setup,
            blocks,
            combo,
            seed,
            csv,
            width,
        } => {
            let aes = AesConfig::parse(&combo)
                .ok_or_else(|| anyhow!("unknown configuration {combo:?}"))?;
            let rep = cosimulate(&CosimConfig {
                aes,
                chunks,
                blocks_per_chunk: blocks,
                transfer: TransferModel {
                    setup_cycles: setup,
                    words_per_cycle: dma_rate.max(1),
                },
                seed,
            })?;
            println!(
                "{} x {} chunks of {} blocks; write {} words/{} cycles, read {} words/{} cycles",
                rep.config_label,
                rep.chunks,
                rep.blocks_per_chunk,
                rep.write_words,
                rep.write_cycles,
                rep.read_words,
                rep.read_cycles
            );
            println!(
                "exec {} cycles per chunk (measured); {} chunks verified against the reference model",
                rep.chunk_exec_cycles.first().copied().unwrap_or(0),
                rep.verified_chunks
            );
            println!(
                "{} bound",
                if rep.schedule.exec_bound { "exec" } else { "transfer" }
            );
            print!("{}", render_gantt(&rep.schedule, width));
            if let Some(path) = csv {
                fs::write(&path, schedule_csv(&rep.schedule))
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("wrote {}", path.display());
            }
        }
        Cmd::Asm { file, output } => {
            let source = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let words = assemble(&source)?;
            emit(write_image(&words), output.as_ref())?;
        }
        Cmd::Disasm { file, output } => {
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let words = parse_image(&text)?;
            emit(disassemble_image(&words), output.as_ref())?;
        }
        Cmd::Metrics {
            fmax,
            power,
            slices,
            cycles_per_block,
            block_bits,
            json,
        } => {
            let rep = MetricReport::compute(MetricInputs {
                fmax_mhz: fmax,
                block_bits,
                cycles_per_block,
                power_w: power,
                slices,
            })
            .map_err(|e| anyhow!(e))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!("throughput        {:>12.4} Mbps", rep.throughput_mbps);
                println!("energy efficiency {:>12.4} Mbps/W", rep.energy_eff_mbps_per_w);
                println!("area efficiency   {:>12.6} Mbps/slice", rep.area_eff_mbps_per_slice);
            }
        }
    }
    Ok(())
}
