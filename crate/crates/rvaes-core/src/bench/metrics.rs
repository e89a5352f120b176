//! Performance metric formulas.
//!
//! Throughput is frequency times block size over cycles per block;
//! energy and area efficiency divide that throughput by power draw and
//! by occupied slices. With frequency in MHz and a 128-bit block the
//! units come out as Mbps, Mbps/W and Mbps/slice, matching the
//! published comparison tables these are cross-checked against.

use serde::Serialize;

/// Published maximum clock of the accelerated core, MHz.
pub const DEFAULT_FMAX_MHZ: f64 = 241.0;
/// AES block size in bits.
pub const BLOCK_BITS: f64 = 128.0;

/// Eq. form: `fmax · block_bits / cycles_per_block`, in Mbps when
/// `fmax` is in MHz.
pub fn throughput_mbps(fmax_mhz: f64, block_bits: f64, cycles_per_block: f64) -> f64 {
    fmax_mhz * block_bits / cycles_per_block
}

/// Mbps per watt.
pub fn energy_efficiency(throughput_mbps: f64, power_w: f64) -> f64 {
    throughput_mbps / power_w
}

/// Mbps per slice.
pub fn area_efficiency(throughput_mbps: f64, slices: f64) -> f64 {
    throughput_mbps / slices
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MetricInputs {
    pub fmax_mhz: f64,
    pub block_bits: f64,
    pub cycles_per_block: f64,
    pub power_w: f64,
    pub slices: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MetricReport {
    pub inputs: MetricInputs,
    pub throughput_mbps: f64,
    pub energy_eff_mbps_per_w: f64,
    pub area_eff_mbps_per_slice: f64,
}

impl MetricReport {
    pub fn compute(inputs: MetricInputs) -> Result<MetricReport, String> {
        for (name, v) in [
            ("fmax_mhz", inputs.fmax_mhz),
            ("block_bits", inputs.block_bits),
            ("cycles_per_block", inputs.cycles_per_block),
            ("power_w", inputs.power_w),
            ("slices", inputs.slices),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be a positive finite number, got {v}"));
            }
        }
        let thr = throughput_mbps(inputs.fmax_mhz, inputs.block_bits, inputs.cycles_per_block);
        Ok(MetricReport {
            inputs,
            throughput_mbps: thr,
            energy_eff_mbps_per_w: energy_efficiency(thr, inputs.power_w),
            area_eff_mbps_per_slice: area_efficiency(thr, inputs.slices),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn within(got: f64, want: f64, rel: f64) -> bool {
        ((got - want) / want).abs() <= rel
    }

    #[test]
    fn matches_published_core_and_soc_figures() {
        // Published operating point: 95.88 Mbps at 241 MHz.
        assert!(within(throughput_mbps(241.0, 128.0, 321.7), 95.88, 0.005));
        // Core / SoC energy efficiency.
        assert!(within(energy_efficiency(95.88, 0.046), 2084.0, 0.005));
        assert!(within(energy_efficiency(95.88, 4.043), 23.7, 0.005));
        // Core / SoC area efficiency.
        assert!(within(area_efficiency(95.88, 1767.0), 0.0543, 0.01));
        assert!(within(area_efficiency(95.88, 8601.0), 0.0111, 0.01));
    }

    #[test]
    fn report_computes_all_three() {
        let rep = MetricReport::compute(MetricInputs {
            fmax_mhz: 241.0,
            block_bits: 128.0,
            cycles_per_block: 321.7,
            power_w: 0.046,
            slices: 1767.0,
        })
        .unwrap();
        assert!(within(rep.throughput_mbps, 95.88, 0.005));
        assert!(within(rep.energy_eff_mbps_per_w, 2084.0, 0.01));
        assert!(within(rep.area_eff_mbps_per_slice, 0.0543, 0.015));
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let mut inputs = MetricInputs {
            fmax_mhz: 241.0,
            block_bits: 128.0,
            cycles_per_block: 0.0,
            power_w: 0.046,
            slices: 1767.0,
        };
        assert!(MetricReport::compute(inputs).is_err());
        inputs.cycles_per_block = f64::NAN;
        assert!(MetricReport::compute(inputs).is_err());
    }
}
