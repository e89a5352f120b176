//! Generator for the accelerated AES program: stage the inputs into the
//! buffer set, run one AES instruction, stream the results back out.
//!
//! DM layout used by the generated program:
//!
//! * `0x000`: key (zero-padded to 8 words), IV (4 words), plaintext
//!   (4 words per block) — exactly the buffer's own layout, so a single
//!   LoadGo of `12 + 4N` words stages everything.
//! * `0x400`: StoreGo target. The buffer can only be written back from
//!   word 0, so the whole `134 + 4N`-word prefix (key, IV, plaintext and
//!   the ciphertext region) is stored; the ciphertext bytes land at
//!   `0x400 + 4*134`.

use crate::asm::{assemble, AesJob, GeneratedProgram};
use crate::ext::buffer::{CT_BASE, HEADER_WORDS, KEY_WORDS};
use crate::ext::encoding::aes_mnemonic;

pub const INPUT_ADDR: u32 = 0x000;
pub const OUTPUT_ADDR: u32 = 0x400;

pub fn generate_accelerated(job: &AesJob) -> Result<GeneratedProgram, String> {
    job.validate()?;
    let blocks = job.blocks();
    let load_words = HEADER_WORDS + 4 * blocks;
    let store_words = CT_BASE + 4 * blocks;

    let source = format!(
        "# {} over {blocks} block(s), via the AES unit\n\
         addi x8, x0, {INPUT_ADDR}     # input staging area\n\
         addi x20, x0, {load_words}    # key + iv + plaintext words\n\
         buf.set\n\
         buf.loadgo\n\
         {}\n\
         addi x8, x0, {OUTPUT_ADDR}    # write-back area\n\
         addi x20, x0, {store_words}   # prefix through the ciphertext region\n\
         buf.set\n\
         buf.storego\n\
         ebreak\n",
        job.config,
        aes_mnemonic(job.config),
    );
    let image = assemble(&source).map_err(|e| e.to_string())?;

    let mut input = Vec::with_capacity(4 * load_words);
    input.extend_from_slice(&job.key);
    input.resize(4 * KEY_WORDS, 0); // zero-pad the key region
    input.extend_from_slice(&job.iv);
    input.extend_from_slice(&job.plaintext);

    Ok(GeneratedProgram {
        name: format!("accelerated-{}", job.config),
        source,
        image,
        dm_init: vec![(INPUT_ADDR, input)],
        ct_addr: OUTPUT_ADDR + 4 * CT_BASE as u32,
        ct_len: 16 * blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aesref;
    use crate::config::{AesConfig, AesMode, KeySize};
    use crate::isa::pipeline::run_pipeline;
    use crate::isa::state::{CoreConfig, CoreState};
    use crate::isa::{run_functional, ExecError};

    fn job(config: AesConfig, blocks: usize) -> AesJob {
        AesJob {
            config,
            key: (0..config.key_size.key_bytes() as u8).collect(),
            iv: std::array::from_fn(|i| 0xa0 + i as u8),
            plaintext: (0..16 * blocks).map(|i| (i as u8).wrapping_mul(7)).collect(),
        }
    }

    #[test]
    fn program_is_small_and_assembles() {
        for config in AesConfig::all() {
            let prog = generate_accelerated(&job(config, 4)).unwrap();
            assert!(prog.image.len() <= 32, "{config}: {}", prog.image.len());
        }
    }

    #[test]
    fn functional_run_matches_reference() {
        for blocks in [1, 4, 30] {
            let j = job(AesConfig::new(AesMode::Cbc, KeySize::K256), blocks);
            let prog = generate_accelerated(&j).unwrap();
            let mut core = CoreState::new(CoreConfig::default());
            prog.install(&mut core).unwrap();
            run_functional(&mut core, 10_000).unwrap();
            let ct = prog.read_ciphertext(&core).unwrap();
            let want = aesref::encrypt(j.config, &j.key, j.iv, &j.plaintext).unwrap();
            assert_eq!(ct, want, "{blocks} blocks");
        }
    }

    #[test]
    fn pipeline_run_matches_reference_and_charges_latency() {
        let j = job(AesConfig::new(AesMode::Ecb, KeySize::K128), 4);
        let prog = generate_accelerated(&j).unwrap();
        let mut core = CoreState::new(CoreConfig::default());
        prog.install(&mut core).unwrap();
        let report = run_pipeline(&mut core, 100_000).unwrap();
        let ct = prog.read_ciphertext(&core).unwrap();
        let want = aesref::encrypt(j.config, &j.key, j.iv, &j.plaintext).unwrap();
        assert_eq!(ct, want);
        // Lower bound: the two transfers and the AES op alone.
        let lat = core.latency;
        let floor = lat.transfer_cost(12 + 16) + lat.transfer_cost(134 + 16) + 51;
        assert!(report.cycles > floor);
        assert_eq!(core.retired, prog.image.len() as u64);
    }

    #[test]
    fn oversized_job_is_rejected() {
        let mut j = job(AesConfig::new(AesMode::Ecb, KeySize::K128), 31);
        assert!(generate_accelerated(&j).is_err());
        j.plaintext.clear();
        assert!(generate_accelerated(&j).is_err());
    }

    #[test]
    fn step_budget_is_enforced() {
        let j = job(AesConfig::new(AesMode::Ecb, KeySize::K128), 1);
        let prog = generate_accelerated(&j).unwrap();
        let mut core = CoreState::new(CoreConfig::default());
        prog.install(&mut core).unwrap();
        assert!(matches!(
            run_functional(&mut core, 3),
            Err(ExecError::CycleBudgetExceeded { .. })
        ));
    }
}
