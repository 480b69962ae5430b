//! Type-1 nonuniform FFT: evaluates `S_k = Σ_n c_n e^{-2πi k x_n}` for the
//! modes `k ∈ [-J/2, J/2)` on a twice-oversampled grid with a truncated
//! Gaussian spreading kernel.
//!
//! With half-width `HW` cells and variance `τ = HW/(2√2 π)` in cell units,
//! the truncation and aliasing errors balance at `exp(-π·HW/√2)`; HW = 12
//! gives ~3e-12, plenty for locating extreme-value basins (every reported
//! value is re-evaluated exactly). The Gaussian splits as
//! `exp(-c(δ+j)²) = exp(-cδ²)·r^j·exp(-cj²)`, so spreading one point costs
//! two exponentials and 2·HW multiply-adds.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Kernel half-width in fine-grid cells.
const HW: usize = 12;
/// Kernel exponent scale: 1/(4τ) with τ = HW/(2√2 π) in cell units.
const KERNEL_C: f64 = 1.0 / (4.0 * KERNEL_TAU);
const KERNEL_TAU: f64 = HW as f64 / (2.0 * std::f64::consts::SQRT_2 * std::f64::consts::PI);

pub(crate) struct NufftPlan {
    n_modes: usize,
    n_fine: usize,
    fft: Arc<dyn Fft<f64>>,
    /// `exp(-c j²)` for j = 0..2·HW.
    cell_gauss: [f64; 2 * HW],
    /// `h_fine / ψ̂(k)` for k = -J/2..J/2, indexed by k + J/2.
    deconv: Vec<f64>,
}

impl NufftPlan {
    /// `n_modes` must be a power of two.
    pub fn new(n_modes: usize) -> Self {
        assert!(n_modes.is_power_of_two() && n_modes >= 2 * HW);
        let n_fine = 2 * n_modes;
        let fft = FftPlanner::new().plan_fft_forward(n_fine);
        let mut cell_gauss = [0.0f64; 2 * HW];
        for (j, slot) in cell_gauss.iter_mut().enumerate() {
            *slot = (-KERNEL_C * (j * j) as f64).exp();
        }
        // ψ̂(k) = √(4πτ')·exp(-4π²k²τ') with τ' = τ/n_fine² in x units;
        // the spread sum carries an extra 1/h_fine, hence deconv = h·ψ̂⁻¹.
        let tau_x = KERNEL_TAU / (n_fine * n_fine) as f64;
        let norm = (4.0 * std::f64::consts::PI * KERNEL_TAU).sqrt();
        let mut deconv = Vec::with_capacity(n_modes);
        let four_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        for idx in 0..n_modes {
            let k = idx as f64 - (n_modes / 2) as f64;
            deconv.push((four_pi_sq * k * k * tau_x).exp() / norm);
        }
        Self {
            n_modes,
            n_fine,
            fft,
            cell_gauss,
            deconv,
        }
    }

    /// Computes `out[j] = Σ_n c_n e^{-2πi (j - J/2) x_n}` for j = 0..J.
    /// Points must lie in [0, 1). Fully deterministic (serial spreading).
    pub fn execute(&self, xs: &[f64], cs: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(xs.len(), cs.len());
        assert_eq!(out.len(), self.n_modes);
        let nf = self.n_fine;
        // Padded grid: [HW head | nf cells | HW tail] so spreading never wraps.
        let mut grid = vec![Complex64::new(0.0, 0.0); nf + 2 * HW];
        for (&x, &c) in xs.iter().zip(cs) {
            debug_assert!((0.0..1.0).contains(&x));
            let xf = x * nf as f64;
            let l0 = (xf - HW as f64).ceil();
            let delta = l0 - xf; // in (-HW, -HW + 1]
            let base = (-KERNEL_C * delta * delta).exp();
            let ratio = (-2.0 * KERNEL_C * delta).exp();
            let mut run = base;
            let start = (l0 + HW as f64) as usize; // >= 0 by construction
            for (j, &g) in self.cell_gauss.iter().enumerate() {
                grid[start + j] += c * (run * g);
                run *= ratio;
            }
        }
        // Fold the pads back onto the periodic grid.
        let mut buf: Vec<Complex64> = grid[HW..HW + nf].to_vec();
        for j in 0..HW {
            buf[nf - HW + j] += grid[j];
            buf[j] += grid[nf + HW + j];
        }
        self.fft.process(&mut buf);
        // Mode k sits at DFT bin (k mod nf); deconvolve and reorder.
        let half = self.n_modes / 2;
        for (idx, slot) in out.iter_mut().enumerate() {
            let k = idx as isize - half as isize;
            let bin = k.rem_euclid(nf as isize) as usize;
            *slot = buf[bin] * self.deconv[idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_evaluation() {
        let n_modes = 512;
        let plan = NufftPlan::new(n_modes);
        // Deterministic pseudo-random points and coefficients.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let n_pts = 300;
        let xs: Vec<f64> = (0..n_pts).map(|_| rnd()).collect();
        let cs: Vec<Complex64> = (0..n_pts)
            .map(|_| Complex64::new(rnd() - 0.5, rnd() - 0.5))
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n_modes];
        plan.execute(&xs, &cs, &mut out);

        let scale: f64 = cs.iter().map(|c| c.norm()).sum();
        for idx in (0..n_modes).step_by(37) {
            let k = idx as f64 - (n_modes / 2) as f64;
            let mut direct = Complex64::new(0.0, 0.0);
            for (&x, &c) in xs.iter().zip(&cs) {
                let phase = -2.0 * std::f64::consts::PI * k * x;
                direct += c * Complex64::new(phase.cos(), phase.sin());
            }
            assert!(
                (out[idx] - direct).norm() <= 1e-10 * scale,
                "mode {k}: {} vs {direct}",
                out[idx]
            );
        }
    }

    #[test]
    fn clustered_points_are_fine() {
        // Frequencies of a Dirichlet polynomial cluster near zero.
        let n_modes = 1024;
        let plan = NufftPlan::new(n_modes);
        let xs: Vec<f64> = (1..=200).map(|n| (n as f64).ln() * 1e-3).collect();
        let cs: Vec<Complex64> = (1..=200)
            .map(|n| Complex64::new(1.0 / n as f64, 0.0))
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n_modes];
        plan.execute(&xs, &cs, &mut out);
        for idx in [0usize, 17, 511, 512, 900, 1023] {
            let k = idx as f64 - 512.0;
            let mut direct = Complex64::new(0.0, 0.0);
            for (&x, &c) in xs.iter().zip(&cs) {
                let phase = -2.0 * std::f64::consts::PI * k * x;
                direct += c * Complex64::new(phase.cos(), phase.sin());
            }
            assert!((out[idx] - direct).norm() <= 1e-10 * 6.0);
        }
    }
}
