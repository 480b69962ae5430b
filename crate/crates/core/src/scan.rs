//! Extreme-value search for |ζ^(ℓ)(σ + it)| over a dyadic window [T, 2T]
//! and for |L^(ℓ)(σ, χ)| over the characters mod q, with theorem-shaped
//! envelopes attached for comparison.
//!
//! The coarse grid over [T, 2T] is evaluated either directly (small jobs)
//! or by a segmented type-1 NUFFT: within a segment of equispaced t the
//! Dirichlet polynomial `Σ a_n e^{-it log n}` is a nonuniform-frequency
//! exponential sum, which the NUFFT evaluates in O((N + J) log J) instead
//! of O(N·J). Coarse values only locate candidate basins; every reported
//! value is re-evaluated with the exact truncated-series evaluator, and the
//! basin winner is refined by golden section. All parallel work is split
//! into fixed-size blocks merged in index order, so results are
//! bit-identical for any thread count.

use crate::characters::CharacterGroup;
use crate::dickman::DickmanTable;
use crate::error::{Error, Result};
use crate::evaluators::{l_deriv_truncated, zeta_deriv_truncated, EvalPoint, SeriesTruncation};
use crate::nufft::NufftPlan;
use crate::numeric::unit_phase_neg;
use crate::resonance::sub_one_envelope_factor;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::sync::Arc;

/// Grid jobs up to this many point-terms are evaluated directly; larger
/// ones go through the segmented NUFFT.
const DIRECT_COST_LIMIT: f64 = 2.0e8;
/// Largest NUFFT segment, in grid points.
const SEGMENT_LEN: usize = 1 << 20;
/// Direct-path chunk length, in grid points.
const DIRECT_CHUNK: usize = 1 << 14;
/// Phase-accuracy budget: the evaluator keeps ~1e-10 phase error while
/// t·log n stays below this.
const PHASE_BUDGET: f64 = 1.0e12;

/// `2^{ℓ+1}·C_ℓ(A)·(log log t)^{ℓ+1}` with `C_ℓ(A) = ∫ e^{2Au} u^ℓ ρ(u) du`:
/// the conditional upper envelope for |ζ^(ℓ)(σ + it)| when
/// `1 - A/log log t < σ < 1` (the o(1) term is dropped). At `a = 0` this is
/// the 1-line envelope `2^{ℓ+1}·Y_ℓ·(log log t)^{ℓ+1}`.
pub fn predicted_upper_rh(table: &DickmanTable, ell: u32, a: f64, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 16.0) {
        return Err(Error::InvalidArgument(format!("t must be >= 16, got {t}")));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!("a must be >= 0, got {a}")));
    }
    let c_ell = table.weighted_moment(ell, 2.0 * a)?.value;
    Ok(2f64.powi(ell as i32 + 1) * c_ell * t.ln().ln().powi(ell as i32 + 1))
}

/// `D_ℓ(A)·(log log T)^{ℓ+1}` with `D_ℓ(A) = ∫ e^{Au} u^ℓ ρ(u) du`: the
/// unconditional extreme-value floor attained inside [T, 2T] at
/// `σ = 1 - A/log log T` (asymptotically; the o(1) term is dropped).
pub fn predicted_omega(table: &DickmanTable, ell: u32, a: f64, t_lo: f64) -> Result<f64> {
    if !(t_lo.is_finite() && t_lo >= 16.0) {
        return Err(Error::InvalidArgument(format!(
            "T must be >= 16, got {t_lo}"
        )));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!("a must be >= 0, got {a}")));
    }
    let d_ell = table.weighted_moment(ell, a)?.value;
    Ok(d_ell * t_lo.ln().ln().powi(ell as i32 + 1))
}

/// `exp(e^A/A − A)·(log log T)^{ℓ+1}` with `A = (1-σ)·log log T`: the
/// extreme-value floor for σ bounded away from 1. Requires
/// `1/2 < σ < 1 − 1/log log T` (equivalently A > 1); the implied constant
/// is taken as 1 and the value is heuristic at finite T.
pub fn predicted_subone(ell: u32, sigma: f64, t_lo: f64) -> Result<f64> {
    if !(t_lo.is_finite() && t_lo >= 16.0) {
        return Err(Error::InvalidArgument(format!(
            "T must be >= 16, got {t_lo}"
        )));
    }
    if sigma.is_nan() || sigma <= 0.5 {
        return Err(Error::InvalidArgument(format!(
            "sigma must exceed 1/2, got {sigma}"
        )));
    }
    let log2_t = t_lo.ln().ln();
    if sigma.is_nan() || sigma >= 1.0 - 1.0 / log2_t {
        return Err(Error::Domain(format!(
            "need sigma < 1 - 1/log log T = {}, got {sigma}",
            1.0 - 1.0 / log2_t
        )));
    }
    let a = (1.0 - sigma) * log2_t;
    Ok(sub_one_envelope_factor(a) * log2_t.powi(ell as i32 + 1))
}

/// Configuration of one extreme-value scan over [T, 2T].
#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    t_start: f64,
    sigma: f64,
    a: f64,
    grid_step: f64,
    refine_iters: u32,
    truncation: SeriesTruncation,
}

impl ScanConfig {
    /// `grid_step` defaults to `0.1/log N` (≥ 60 samples per period of the
    /// fastest component); it may not exceed `0.5/log N`.
    pub fn new(
        t_start: f64,
        sigma: f64,
        ell: u32,
        n: u64,
        grid_step: Option<f64>,
        refine_iters: u32,
        epsilon: f64,
    ) -> Result<Self> {
        if !(t_start.is_finite() && t_start >= 1.0e3) {
            return Err(Error::InvalidArgument(format!(
                "T must be >= 1e3, got {t_start}"
            )));
        }
        if !(sigma > 0.5 && sigma <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "sigma must lie in (1/2, 1], got {sigma}"
            )));
        }
        let truncation = SeriesTruncation::new(n, ell, epsilon)?;
        let ln_n = (n as f64).ln();
        let step = grid_step.unwrap_or(0.1 / ln_n);
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidArgument("grid step must be positive".into()));
        }
        if step > 0.5 / ln_n {
            return Err(Error::InvalidArgument(format!(
                "grid step {step} too coarse: must be <= 0.5/log N = {}",
                0.5 / ln_n
            )));
        }
        if 2.0 * t_start * ln_n > PHASE_BUDGET {
            return Err(Error::Capacity(format!(
                "2T·log N = {} exceeds the phase-accuracy budget {PHASE_BUDGET}",
                2.0 * t_start * ln_n
            )));
        }
        Ok(Self {
            t_start,
            sigma,
            a: (1.0 - sigma) * t_start.ln().ln(),
            grid_step: step,
            refine_iters,
            truncation,
        })
    }

    /// CLI convenience: σ from the abscissa parameterization
    /// `σ = 1 − A/log log T`.
    pub fn sigma_from_weight(t_start: f64, a: f64) -> Result<f64> {
        if !(t_start.is_finite() && t_start > std::f64::consts::E) {
            return Err(Error::InvalidArgument(format!(
                "T must exceed e, got {t_start}"
            )));
        }
        Ok(1.0 - a / t_start.ln().ln())
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `A = (1-σ)·log log T`.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn refine_iters(&self) -> u32 {
        self.refine_iters
    }

    pub fn truncation(&self) -> &SeriesTruncation {
        &self.truncation
    }

    fn grid_points(&self) -> u64 {
        (self.t_start / self.grid_step).floor() as u64 + 1
    }
}

/// Result of one scan.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanResult {
    pub t_start: f64,
    pub sigma: f64,
    pub ell: u32,
    pub n: u64,
    pub grid_step: f64,
    /// Location of the refined maximum.
    pub t_star: f64,
    /// `|ζ^(ℓ)(σ + i t_star)|` from the exact evaluator at `t_star`.
    pub value: f64,
    /// `value / (log log T)^{ℓ+1}` for trend tables.
    pub normalized_ratio: f64,
    /// Conditional upper envelope `2^{ℓ+1} C_ℓ(A) (log log T)^{ℓ+1}`.
    pub envelope_upper: f64,
    /// Extreme-value floor `D_ℓ(A) (log log T)^{ℓ+1}`.
    pub envelope_omega: f64,
    /// Sub-one-line floor; absent unless `σ < 1 − 1/log log T`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_subone: Option<f64>,
    pub grid_points: u64,
}

#[derive(Clone)]
struct DirichletCoeffs {
    ln: Arc<Vec<f64>>,
    amp: Arc<Vec<f64>>,
}

impl DirichletCoeffs {
    fn build(sigma: f64, ell: u32, n: u64) -> Self {
        let mut ln = Vec::with_capacity(n as usize);
        let mut amp = Vec::with_capacity(n as usize);
        for k in 1..=n {
            let ln_k = (k as f64).ln();
            ln.push(ln_k);
            amp.push(ln_k.powi(ell as i32) * (-sigma * ln_k).exp());
        }
        Self {
            ln: Arc::new(ln),
            amp: Arc::new(amp),
        }
    }

    /// |Σ a_n e^{-it log n}| with plain summation; used only to rank coarse
    /// grid points.
    fn eval_abs(&self, t: f64) -> f64 {
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for (&ln_n, &a) in self.ln.iter().zip(self.amp.iter()) {
            let z = unit_phase_neg(t, ln_n);
            re += a * z.re;
            im += a * z.im;
        }
        (re * re + im * im).sqrt()
    }
}

/// Per-chunk summary of coarse grid values: boundary samples plus the best
/// interior local maxima.
struct ChunkSummary {
    j_start: u64,
    len: usize,
    v_first: f64,
    v_second: f64,
    v_penult: f64,
    v_last: f64,
    top: Vec<(u64, f64)>,
}

fn cmp_candidates(a: &(u64, f64), b: &(u64, f64)) -> Ordering {
    b.1.partial_cmp(&a.1)
        .expect("grid values are finite")
        .then(a.0.cmp(&b.0))
}

fn summarize_chunk(j_start: u64, values: &[f64]) -> ChunkSummary {
    let len = values.len();
    let mut top: Vec<(u64, f64)> = Vec::new();
    for i in 1..len.saturating_sub(1) {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] {
            top.push((j_start + i as u64, values[i]));
        }
    }
    top.sort_by(cmp_candidates);
    top.truncate(8);
    ChunkSummary {
        j_start,
        len,
        v_first: values[0],
        v_second: if len >= 2 { values[1] } else { f64::NAN },
        v_penult: if len >= 2 { values[len - 2] } else { f64::NAN },
        v_last: values[len - 1],
        top,
    }
}

/// Stitches chunk summaries into the global top-8 candidate list; boundary
/// points are tested against their true neighbors across chunk seams.
fn merge_candidates(summaries: &[ChunkSummary]) -> Vec<(u64, f64)> {
    let mut pool: Vec<(u64, f64)> = Vec::new();
    for (s, cs) in summaries.iter().enumerate() {
        pool.extend(cs.top.iter().copied());
        let left = if s == 0 {
            f64::NEG_INFINITY
        } else {
            summaries[s - 1].v_last
        };
        let right_of_first = if cs.len >= 2 {
            cs.v_second
        } else if s + 1 < summaries.len() {
            summaries[s + 1].v_first
        } else {
            f64::NEG_INFINITY
        };
        if cs.v_first > left && cs.v_first >= right_of_first {
            pool.push((cs.j_start, cs.v_first));
        }
        if cs.len >= 2 {
            let right = if s + 1 < summaries.len() {
                summaries[s + 1].v_first
            } else {
                f64::NEG_INFINITY
            };
            if cs.v_last > cs.v_penult && cs.v_last >= right {
                pool.push((cs.j_start + cs.len as u64 - 1, cs.v_last));
            }
        }
    }
    pool.sort_by(cmp_candidates);
    pool.truncate(8);
    pool
}

fn coarse_candidates_direct(cfg: &ScanConfig, coeffs: &DirichletCoeffs) -> Vec<(u64, f64)> {
    let total = cfg.grid_points();
    let n_chunks = total.div_ceil(DIRECT_CHUNK as u64);
    let summaries: Vec<ChunkSummary> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let j0 = c * DIRECT_CHUNK as u64;
            let len = DIRECT_CHUNK.min((total - j0) as usize);
            let values: Vec<f64> = (0..len)
                .map(|i| coeffs.eval_abs(cfg.t_start + (j0 + i as u64) as f64 * cfg.grid_step))
                .collect();
            summarize_chunk(j0, &values)
        })
        .collect();
    merge_candidates(&summaries)
}

fn coarse_candidates_nufft(cfg: &ScanConfig, coeffs: &DirichletCoeffs) -> Vec<(u64, f64)> {
    let total = cfg.grid_points();
    let seg_len = SEGMENT_LEN
        .min((total as usize).next_power_of_two())
        .max(4096);
    let n_segs = total.div_ceil(seg_len as u64);
    let delta = cfg.grid_step;
    let two_pi = 2.0 * std::f64::consts::PI;
    // Frequencies are segment-independent; only the coefficients pick up a
    // per-segment phase offset.
    let xs: Arc<Vec<f64>> = Arc::new(coeffs.ln.iter().map(|&l| delta * l / two_pi).collect());
    let summaries: Vec<ChunkSummary> = (0..n_segs)
        .into_par_iter()
        .map_init(
            || NufftPlan::new(seg_len),
            |plan, s| {
                let j0 = s * seg_len as u64;
                let len = seg_len.min((total - j0) as usize);
                let t_seg = cfg.t_start + j0 as f64 * delta;
                // Absorb the mode-shift J/2 into the per-term phase.
                let t_phase = t_seg + 0.5 * seg_len as f64 * delta;
                let cs: Vec<num_complex::Complex64> = coeffs
                    .ln
                    .iter()
                    .zip(coeffs.amp.iter())
                    .map(|(&l, &a)| a * unit_phase_neg(t_phase, l))
                    .collect();
                let mut modes = vec![num_complex::Complex64::new(0.0, 0.0); seg_len];
                plan.execute(&xs, &cs, &mut modes);
                let values: Vec<f64> = modes[..len].iter().map(|z| z.norm()).collect();
                summarize_chunk(j0, &values)
            },
        )
        .collect();
    merge_candidates(&summaries)
}

/// Golden-section maximization of `eval` on `[t0 - delta, t0 + delta]`
/// (clamped to `bounds`), tracking the best point seen; ties prefer the
/// smaller t. Iteration k+1 evaluates a superset of iteration k's points,
/// so the result is monotone in `iters`.
fn refine_basin<F: Fn(f64) -> f64>(
    eval: &F,
    t0: f64,
    delta: f64,
    bounds: (f64, f64),
    iters: u32,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut best_t = t0;
    let mut best_v = eval(t0);
    let consider = |t: f64, v: f64, best_t: &mut f64, best_v: &mut f64| {
        if v > *best_v || (v == *best_v && t < *best_t) {
            *best_t = t;
            *best_v = v;
        }
    };
    if iters == 0 {
        return (best_t, best_v);
    }
    let mut a = (t0 - delta).max(bounds.0);
    let mut b = (t0 + delta).min(bounds.1);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    consider(x1, f1, &mut best_t, &mut best_v);
    consider(x2, f2, &mut best_t, &mut best_v);
    for _ in 1..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
            consider(x1, f1, &mut best_t, &mut best_v);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
            consider(x2, f2, &mut best_t, &mut best_v);
        }
    }
    (best_t, best_v)
}

/// Scans [T, 2T] for the maximum of |ζ^(ℓ)(σ + it)|: a coarse grid locates
/// up to eight candidate basins, each is refined by golden section with the
/// exact evaluator, and the best refined point wins (smaller t on ties).
pub fn scan_zeta_max(cfg: &ScanConfig, table: &DickmanTable) -> Result<ScanResult> {
    let ell = cfg.truncation.ell();
    let coeffs = DirichletCoeffs::build(cfg.sigma, ell, cfg.truncation.n());
    let total = cfg.grid_points();
    let direct = (total as f64) * (cfg.truncation.n() as f64) <= DIRECT_COST_LIMIT;
    let candidates = if direct {
        coarse_candidates_direct(cfg, &coeffs)
    } else {
        coarse_candidates_nufft(cfg, &coeffs)
    };

    let exact = |t: f64| -> f64 {
        let pt = EvalPoint::for_scan(cfg.sigma, t, cfg.t_start).expect("validated config");
        zeta_deriv_truncated(&pt, &cfg.truncation).value.norm()
    };
    let bounds = (cfg.t_start, 2.0 * cfg.t_start);
    let refined: Vec<(f64, f64)> = candidates
        .par_iter()
        .map(|&(j, _)| {
            let t0 = cfg.t_start + j as f64 * cfg.grid_step;
            refine_basin(&exact, t0, cfg.grid_step, bounds, cfg.refine_iters)
        })
        .collect();
    let (t_star, value) = refined
        .into_iter()
        .reduce(|best, cand| {
            if cand.1 > best.1 || (cand.1 == best.1 && cand.0 < best.0) {
                cand
            } else {
                best
            }
        })
        .ok_or_else(|| Error::InvalidArgument("empty scan grid".into()))?;

    let log2_t = cfg.t_start.ln().ln();
    let norm_pow = log2_t.powi(ell as i32 + 1);
    let envelope_upper = predicted_upper_rh(table, ell, cfg.a, cfg.t_start)?;
    let envelope_omega = predicted_omega(table, ell, cfg.a, cfg.t_start)?;
    let envelope_subone = predicted_subone(ell, cfg.sigma, cfg.t_start).ok();
    Ok(ScanResult {
        t_start: cfg.t_start,
        sigma: cfg.sigma,
        ell,
        n: cfg.truncation.n(),
        grid_step: cfg.grid_step,
        t_star,
        value,
        normalized_ratio: value / norm_pow,
        envelope_upper,
        envelope_omega,
        envelope_subone,
        grid_points: total,
    })
}

/// Maximum of |L^(ℓ)(σ, χ; N)| over the non-principal characters mod q.
/// Returns the character index (smallest on exact ties) and the modulus.
pub fn scan_l_max(group: &CharacterGroup, ell: u32, sigma: f64, n: u64) -> Result<(usize, f64)> {
    let tr = SeriesTruncation::new(n, ell, 0.25)?;
    let evaluated: Vec<(usize, f64)> = (0..group.phi() as usize)
        .into_par_iter()
        .filter(|&idx| idx != group.principal_index())
        .map(|idx| {
            let chi = group.character(idx).expect("index in range");
            let out = l_deriv_truncated(&chi, sigma, &tr).expect("validated parameters");
            (idx, out.value.norm())
        })
        .collect();
    evaluated
        .into_iter()
        .reduce(|best, cand| if cand.1 > best.1 { cand } else { best })
        .ok_or_else(|| Error::InvalidArgument("no non-principal characters".into()))
}
