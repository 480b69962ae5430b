//! Dickman function tables and exponentially weighted moments.
//!
//! The table stores `log ρ(u)` on a uniform grid with an integral number of
//! cells per unit interval. ρ is seeded by closed forms on [0, 2]
//! (ρ ≡ 1 on [0, 1] and ρ(u) = 1 − log u on [1, 2]) and advanced for u > 2
//! through the delay relation
//!
//! ```text
//!     u·ρ(u) = ∫_{u-1}^{u} ρ(v) dv,
//! ```
//!
//! solved at each grid point with composite Simpson over the whole window
//! (the right endpoint enters implicitly with weight h/3 and the solve is
//! explicit). This integral form is self-stabilizing (relative error is
//! preserved under the window transport), unlike forward integration of
//! `ρ'(u) = −ρ(u−1)/u` or a telescoped one-step recurrence, both of which
//! amplify relative error as ρ collapses. The window sum slides in O(1)
//! per point and is recomputed from scratch once per unit interval so that
//! stale rounding noise cannot outlive the decay of ρ.
//!
//! ρ(200) underflows f64 by hundreds of orders, so the marching values are
//! rescaled by exact powers of two before they can underflow and only
//! `log ρ` is stored.

use crate::error::{Error, Result};
use serde::Serialize;
use std::io::{BufRead, BufReader, Read, Write};

/// Default table depth; covers weights a ≤ 4 and powers ℓ ≤ 5 with the
/// moment tail below 1e-15.
pub const DEFAULT_U_MAX: f64 = 120.0;
/// Default grid spacing.
pub const DEFAULT_STEP: f64 = 1.0 / 1024.0;
/// Largest supported `u_max`.
pub const MAX_U_MAX: f64 = 200.0;
/// Coarsest supported grid spacing.
pub const MAX_STEP: f64 = 1.0 / 256.0;

const RESCALE_THRESHOLD: f64 = 1e-154; // ~2^-512
const RESCALE_FACTOR: f64 = 1.3407807929942597e154; // 2^512
const RESCALE_LOG: f64 = 512.0 * std::f64::consts::LN_2;

/// Tabulated `log ρ(u)` on a uniform grid over `[0, u_max]`.
#[derive(Debug, Clone)]
pub struct DickmanTable {
    u_max: f64,
    step: f64,
    cells_per_unit: usize,
    log_rho: Vec<f64>,
    delay_residual_max: Option<f64>,
}

impl DickmanTable {
    /// Builds the table. `step` is snapped to `1/k` for an even integer k so
    /// that unit intervals contain a whole number of cells.
    pub fn build(u_max: f64, step: f64) -> Result<Self> {
        if !(u_max.is_finite() && u_max >= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "u_max must be >= 2, got {u_max}"
            )));
        }
        if u_max > MAX_U_MAX {
            return Err(Error::Capacity(format!(
                "u_max = {u_max} exceeds the supported bound {MAX_U_MAX}"
            )));
        }
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidArgument("step must be positive".into()));
        }
        if step > MAX_STEP {
            return Err(Error::InvalidArgument(format!(
                "step = {step} too coarse; need step <= 1/256"
            )));
        }
        let mut k = (1.0 / step).round() as usize;
        if k % 2 == 1 {
            k += 1;
        }
        let h = 1.0 / k as f64;
        // Three spare cells beyond u_max keep a full cubic stencil available
        // for queries at the top of the range.
        let n = (u_max * k as f64).ceil() as usize + 3;

        let mut log_rho = vec![0.0f64; n + 1];
        for (i, slot) in log_rho.iter_mut().enumerate().take(2 * k + 1).skip(k + 1) {
            let u = i as f64 * h;
            *slot = (1.0 - u.ln()).ln();
        }

        let residual = march(&mut log_rho, k, h, n)?;

        Ok(Self {
            u_max,
            step: h,
            cells_per_unit: k,
            log_rho,
            delay_residual_max: Some(residual),
        })
    }

    /// Builds the table at the default depth and spacing.
    pub fn with_defaults() -> Result<Self> {
        Self::build(DEFAULT_U_MAX, DEFAULT_STEP)
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Effective grid spacing (after snapping).
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Largest relative residual `|u·ρ(u) − ∫_{u-1}^u ρ| / (u·ρ(u))` seen
    /// when re-checking the delay relation with an independent quadrature
    /// during the build. `None` for tables loaded from CSV.
    pub fn delay_residual_max(&self) -> Option<f64> {
        self.delay_residual_max
    }

    /// `log ρ(u)`; exactly 0 for u ≤ 1, cubic interpolation on the grid
    /// elsewhere. Interpolation stencils never cross an integer u, where ρ
    /// has a derivative kink.
    pub fn log_rho(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::InvalidArgument(format!("u must be >= 0, got {u}")));
        }
        if u > self.u_max {
            return Err(Error::Range(format!(
                "u = {u} exceeds the table range {}",
                self.u_max
            )));
        }
        if u <= 1.0 {
            return Ok(0.0);
        }
        let k = self.cells_per_unit;
        let n = self.log_rho.len() - 1;
        let h = self.step;
        let mut zb = u.floor() as usize;
        if zb * k >= n {
            zb = (n - 1) / k;
        }
        let lo = zb * k;
        let hi = ((zb + 1) * k).min(n);
        let j = (u / h).floor() as usize;
        let base = j.saturating_sub(1).clamp(lo, hi - 3);
        let x = u / h - base as f64;
        let w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
        let w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
        let w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
        let w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
        let v = &self.log_rho[base..base + 4];
        Ok(w0 * v[0] + w1 * v[1] + w2 * v[2] + w3 * v[3])
    }

    /// `ρ(u)`; exactly 1 for u ≤ 1.
    pub fn rho(&self, u: f64) -> Result<f64> {
        Ok(self.log_rho(u)?.exp())
    }

    /// Weighted moment `∫_0^∞ e^{au} u^ℓ ρ(u) du`.
    ///
    /// The integrand is assembled in a single exponent
    /// `exp(a·u + ℓ·log u + log ρ(u))` and integrated block-by-block with
    /// composite Simpson over unit intervals (derivative kinks of ρ sit at
    /// block boundaries). Integration stops at the first unit point U past
    /// the peak with integrand below `1e-15` of the partial integral; the
    /// remaining tail is bounded by an exponential envelope and reported in
    /// [`MomentSpec::tail_bound`]. If no such U exists within the table, the
    /// request is a capacity error and the caller must rebuild with a larger
    /// `u_max`.
    pub fn weighted_moment(&self, ell: u32, a: f64) -> Result<MomentSpec> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weight coefficient must be >= 0, got {a}"
            )));
        }
        if ell > 20 {
            return Err(Error::InvalidArgument(format!(
                "moment power ell = {ell} not supported (max 20)"
            )));
        }
        let k = self.cells_per_unit;
        let n = self.log_rho.len() - 1;
        let h = self.step;
        let g = |idx: usize| -> Result<f64> {
            if idx == 0 {
                return Ok(if ell == 0 { 1.0 } else { 0.0 });
            }
            let u = idx as f64 * h;
            let expo = a * u + f64::from(ell) * u.ln() + self.log_rho[idx];
            if expo > 700.0 {
                return Err(Error::Capacity(format!(
                    "moment integrand overflows at u = {u}; weight a = {a} too large"
                )));
            }
            Ok(expo.exp())
        };

        let mut partial = 0.0f64;
        let mut z = 0usize;
        loop {
            let lo = z * k;
            let hi = (z + 1) * k;
            if hi > n {
                return Err(Error::Capacity(format!(
                    "moment truncation point not reached within u_max = {}; \
                     rebuild the table deeper or reduce the weight a = {a}",
                    self.u_max
                )));
            }
            let mut coef_sum = 0.0f64;
            for idx in lo..=hi {
                let c = if idx == lo || idx == hi {
                    1.0
                } else if (idx - lo) % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                coef_sum += c * g(idx)?;
            }
            partial += coef_sum * h / 3.0;
            z += 1;

            let u_end = z as f64;
            if u_end < 2.0 {
                continue;
            }
            let g_end = g(hi)?;
            let slope = a + f64::from(ell) / u_end + (self.log_rho[hi] - self.log_rho[hi - 1]) / h;
            if slope < 0.0 && g_end < 1e-15 * partial {
                let tail_bound = g_end / (-slope);
                return Ok(MomentSpec {
                    ell,
                    a,
                    value: partial,
                    tail_bound,
                });
            }
        }
    }

    /// Writes the grid as CSV `u,log_rho` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,log_rho")?;
        let h = self.step;
        for (i, lr) in self.log_rho.iter().enumerate() {
            writeln!(w, "{:.16e},{:.16e}", i as f64 * h, lr)?;
        }
        Ok(())
    }

    /// Reads a table written by [`write_csv`](Self::write_csv). The residual
    /// diagnostic is not stored in the file, so `delay_residual_max` is
    /// `None` on the result.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "u,log_rho" => {}
            _ => return Err(Error::InvalidArgument("missing 'u,log_rho' header".into())),
        }
        let mut us: Vec<f64> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, ',');
            let u: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad row: {line}")))?;
            let v: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad row: {line}")))?;
            us.push(u);
            values.push(v);
        }
        if us.len() < 3 || us[0] != 0.0 {
            return Err(Error::InvalidArgument(
                "table too short or not anchored at u = 0".into(),
            ));
        }
        let h = us[1];
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidArgument("non-positive grid spacing".into()));
        }
        let k = (1.0 / h).round() as usize;
        for (i, &u) in us.iter().enumerate() {
            if (u - i as f64 * h).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "non-uniform grid at row {i}"
                )));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite value at row {i}"
                )));
            }
            if i <= k && v != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "log rho must be 0 on [0, 1], found {v} at row {i}"
                )));
            }
            if i > k + 1 && values[i - 1] <= v {
                return Err(Error::InvalidArgument(format!(
                    "log rho must be strictly decreasing for u > 1 (row {i})"
                )));
            }
        }
        let n = values.len() - 1;
        Ok(Self {
            u_max: n as f64 * h,
            step: h,
            cells_per_unit: k,
            log_rho: values,
            delay_residual_max: None,
        })
    }

    /// Raw grid of `log ρ` values at `u = 0, step, 2·step, …` (the grid
    /// extends a few cells past `u_max` to keep interpolation stencils
    /// complete).
    pub fn grid(&self) -> &[f64] {
        &self.log_rho
    }

    /// Number of grid cells per unit interval (`1/step`).
    pub fn cells_per_unit(&self) -> usize {
        self.cells_per_unit
    }
}

/// Logarithmic decay profile `−u(log u + log log(u+2) − 1)`.
///
/// Meant for consistency banding only (it matches `log ρ` up to a relative
/// error that shrinks like `log log u / log u`), never as a ρ substitute.
/// Callers must keep u ≥ 2.
pub fn rho_asymptotic_log(u: f64) -> f64 {
    debug_assert!(u >= 2.0);
    -u * (u.ln() + (u + 2.0).ln().ln() - 1.0)
}

/// One weighted moment `∫_0^∞ e^{au} u^ℓ ρ(u) du`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentSpec {
    pub ell: u32,
    pub a: f64,
    pub value: f64,
    /// Exponential-envelope bound on the truncated tail.
    pub tail_bound: f64,
}

/// Marches the grid for u > 2 and returns the largest relative residual of
/// the delay relation observed by an independent quadrature.
///
/// Values are carried in linear space with an exact power-of-two scale.
/// Each `v_i` solves the implicit composite-Simpson window equation
/// `v_i (u_i − h/3) = S_partial`, where `S_partial` is the Simpson sum over
/// `[u_i − 1, u_i]` without the final point. Two window sums slide (one per
/// parity, since Simpson pairs advance by two cells) and are refreshed
/// directly once per unit interval. The residual for windows ending in
/// (1, 2] is checked against the seeded closed form, and for u > 2 against
/// a streamed endpoint-corrected trapezoid, a different rule than the
/// marching quadrature, so the check is not circular.
fn march(log_rho: &mut [f64], k: usize, h: f64, n: usize) -> Result<f64> {
    let mut residual_max = seed_residual(log_rho, k, h);
    if n <= 2 * k {
        return Ok(residual_max);
    }

    let ring_len = 2 * k + 3;
    let mut ring = vec![0.0f64; ring_len];
    for i in 0..=2 * k {
        ring[i % ring_len] = log_rho[i].exp();
    }
    let mut log_offset = 0.0f64;
    // Sliding Simpson window sums u·ρ(u), one per window parity.
    let mut simpson = [0.0f64; 2];
    // Sliding plain-trapezoid window sum for the residual check.
    let mut trap = 0.0f64;

    let h_3 = h / 3.0;
    let h2_12 = h * h / 12.0;
    for i in 2 * k + 1..=n {
        let u = i as f64 * h;
        let parity = i % 2;

        let s_partial = if i <= 2 * k + 2 || i % k <= 1 {
            // Direct refresh: coefficients 1,4,2,...,2,4 over [i-k, i-1].
            let mut s = 0.0f64;
            for (off, j) in (i - k..i).enumerate() {
                let c = if off == 0 {
                    1.0
                } else if off % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                s += c * ring[j % ring_len];
            }
            s * h_3
        } else {
            simpson[parity] + h_3 * (ring[(i - 2) % ring_len] + 4.0 * ring[(i - 1) % ring_len])
                - h_3
                    * (ring[(i - k - 2) % ring_len]
                        + 4.0 * ring[(i - k - 1) % ring_len]
                        + ring[(i - k) % ring_len])
        };
        let v = s_partial / (u - h_3);
        let v_prev = ring[(i - 1) % ring_len];
        if !(v > 0.0 && v < v_prev) {
            return Err(Error::InvalidArgument(format!(
                "dickman marching lost monotonicity at u = {u}"
            )));
        }
        ring[i % ring_len] = v;
        log_rho[i] = v.ln() + log_offset;
        simpson[parity] = s_partial + h_3 * v;

        // Residual check via the corrected trapezoid; derivative terms come
        // from the delay ODE at known grid points.
        if i <= 2 * k + 1 || i % k == 0 {
            let mut t = 0.5 * (ring[(i - k) % ring_len] + ring[i % ring_len]);
            for j in i - k + 1..i {
                t += ring[j % ring_len];
            }
            trap = t * h;
        } else {
            trap += 0.5 * h * (ring[(i - 1) % ring_len] + ring[i % ring_len])
                - 0.5 * h * (ring[(i - k - 1) % ring_len] + ring[(i - k) % ring_len]);
        }
        let d_b = -ring[(i - k) % ring_len] / u;
        let d_a = -ring[(i - 2 * k) % ring_len] / (u - 1.0);
        let window = trap - h2_12 * (d_b - d_a);
        let lhs = u * v;
        let rel = (lhs - window).abs() / lhs;
        if rel > residual_max {
            residual_max = rel;
        }

        if v < RESCALE_THRESHOLD {
            for slot in ring.iter_mut() {
                *slot *= RESCALE_FACTOR;
            }
            simpson[0] *= RESCALE_FACTOR;
            simpson[1] *= RESCALE_FACTOR;
            trap *= RESCALE_FACTOR;
            log_offset -= RESCALE_LOG;
        }
    }
    Ok(residual_max)
}

/// Residual of the delay relation over the seeded range (1, 2]: the part of
/// the window below u = 1 integrates exactly to 2 − u, the rest is composite
/// quadrature of the closed-form values.
fn seed_residual(log_rho: &[f64], k: usize, h: f64) -> f64 {
    let top = (2 * k).min(log_rho.len() - 1);
    let seeded: Vec<f64> = log_rho[k..=top].iter().map(|lr| lr.exp()).collect();
    let mut worst = 0.0f64;
    for i in k + 1..=top {
        let u = i as f64 * h;
        let exact_head = 2.0 - u;
        // Right-derivative of rho at 1 is -1; at u it is -1/u.
        let tail = composite_closed(&seeded[..=i - k], h, -1.0, -1.0 / u);
        let lhs = u * (1.0 - u.ln());
        let rel = (lhs - (exact_head + tail)).abs() / lhs;
        if rel > worst {
            worst = rel;
        }
    }
    worst
}

/// Composite closed quadrature over uniformly spaced samples: Simpson for an
/// even interval count, a 3/8 opening panel for odd counts, and a
/// derivative-corrected trapezoid for a single interval.
fn composite_closed(vals: &[f64], h: f64, d_start: f64, d_end: f64) -> f64 {
    let l = vals.len() - 1;
    match l {
        0 => 0.0,
        1 => 0.5 * h * (vals[0] + vals[1]) - h * h / 12.0 * (d_end - d_start),
        _ => {
            let mut total = 0.0;
            let mut start = 0;
            if l % 2 == 1 {
                total += 3.0 * h / 8.0 * (vals[0] + 3.0 * vals[1] + 3.0 * vals[2] + vals[3]);
                start = 3;
            }
            let mut a = start;
            let mut s = 0.0;
            while a < l {
                s += vals[a] + 4.0 * vals[a + 1] + vals[a + 2];
                a += 2;
            }
            total + s * h / 3.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form oracle for u in [2, 3]: ρ(u) = 1 − log u + ∫_2^u log(v−1)/v dv,
    /// with the integral done by dense Simpson on a smooth integrand.
    fn rho_oracle_23(u: f64) -> f64 {
        assert!((2.0..=3.0).contains(&u));
        let m = 1 << 14;
        let h = (u - 2.0) / m as f64;
        let g = |v: f64| (v - 1.0).ln() / v;
        let mut s = g(2.0) + g(u);
        for j in 1..m {
            let c = if j % 2 == 1 { 4.0 } else { 2.0 };
            s += c * g(2.0 + j as f64 * h);
        }
        1.0 - u.ln() + s * h / 3.0
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert!(matches!(
            DickmanTable::build(1.5, DEFAULT_STEP),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            DickmanTable::build(300.0, DEFAULT_STEP),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            DickmanTable::build(10.0, 1.0 / 100.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rho_is_one_below_one() {
        let t = DickmanTable::build(4.0, DEFAULT_STEP).unwrap();
        assert_eq!(t.rho(0.0).unwrap(), 1.0);
        assert_eq!(t.rho(0.5).unwrap(), 1.0);
        assert_eq!(t.rho(1.0).unwrap(), 1.0);
    }

    #[test]
    fn rho_matches_closed_forms() {
        let t = DickmanTable::build(4.0, DEFAULT_STEP).unwrap();
        assert!((t.rho(2.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-12);
        assert!((t.rho(1.5).unwrap() - (1.0 - 1.5f64.ln())).abs() < 1e-12);
        assert!(
            (t.rho(2.5).unwrap() - rho_oracle_23(2.5)).abs() < 1e-10,
            "rho(2.5) = {} oracle {}",
            t.rho(2.5).unwrap(),
            rho_oracle_23(2.5)
        );
        assert!(
            (t.rho(3.0).unwrap() - rho_oracle_23(3.0)).abs() < 1e-9,
            "rho(3) = {} oracle {}",
            t.rho(3.0).unwrap(),
            rho_oracle_23(3.0)
        );
    }

    #[test]
    fn rho_agrees_with_refined_grid() {
        let coarse = DickmanTable::build(6.0, DEFAULT_STEP).unwrap();
        let fine = DickmanTable::build(6.0, DEFAULT_STEP / 16.0).unwrap();
        for i in 0..=500 {
            let u = 1.0 + 5.0 * i as f64 / 500.0;
            let a = coarse.rho(u).unwrap();
            let b = fine.rho(u).unwrap();
            assert!((a - b).abs() < 1e-9, "u = {u}: {a} vs {b}");
        }
    }

    #[test]
    fn delay_residual_is_small() {
        let t = DickmanTable::build(40.0, DEFAULT_STEP).unwrap();
        let r = t.delay_residual_max().unwrap();
        assert!(r <= 1e-8, "residual {r}");
    }

    #[test]
    fn grid_strictly_decreasing_beyond_one() {
        let t = DickmanTable::build(30.0, DEFAULT_STEP).unwrap();
        let k = t.cells_per_unit();
        let g = t.grid();
        for i in k + 1..g.len() {
            assert!(g[i] < g[i - 1], "not decreasing at index {i}");
        }
    }

    #[test]
    fn asymptotic_log_banding() {
        let t = DickmanTable::build(60.0, DEFAULT_STEP).unwrap();
        let r20 = t.log_rho(20.0).unwrap() / rho_asymptotic_log(20.0);
        assert!((0.9..=1.1).contains(&r20), "ratio at 20: {r20}");
        let r50 = t.log_rho(50.0).unwrap() / rho_asymptotic_log(50.0);
        assert!((r50 - 1.0).abs() < (r20 - 1.0).abs(), "{r50} vs {r20}");
        // log u = 1 at u = e makes the formula collapse to -e·log log(e+2).
        let e = std::f64::consts::E;
        assert!((rho_asymptotic_log(e) + e * (e + 2.0).ln().ln()).abs() < 1e-12);
    }

    #[test]
    fn query_errors() {
        let t = DickmanTable::build(4.0, DEFAULT_STEP).unwrap();
        assert!(matches!(t.rho(5.0), Err(Error::Range(_))));
        assert!(matches!(t.rho(-0.5), Err(Error::InvalidArgument(_))));
        assert!(t.rho(4.0).is_ok());
    }

    #[test]
    fn moment_matches_euler_gamma() {
        let t = DickmanTable::build(30.0, DEFAULT_STEP).unwrap();
        let y0 = t.weighted_moment(0, 0.0).unwrap();
        let e_gamma = 1.781_072_417_990_198_f64;
        assert!((y0.value - e_gamma).abs() < 1e-6, "Y0 = {}", y0.value);
        assert!(y0.tail_bound < 1e-12);
    }

    #[test]
    fn moment_unit_interval_is_exact() {
        // With ell = 0, a = 0 the first Simpson block integrates the constant
        // 1 over [0, 1] exactly.
        let t = DickmanTable::build(4.0, DEFAULT_STEP).unwrap();
        let k = t.cells_per_unit();
        let h = t.step();
        let mut coef_sum = 0.0f64;
        for idx in 0..=k {
            let c = if idx == 0 || idx == k {
                1.0
            } else if idx % 2 == 1 {
                4.0
            } else {
                2.0
            };
            coef_sum += c;
        }
        assert_eq!(coef_sum * h / 3.0, 1.0);
    }

    #[test]
    fn moment_orderings() {
        let t = DickmanTable::build(60.0, DEFAULT_STEP).unwrap();
        for ell in 0..=3u32 {
            let y = t.weighted_moment(ell, 0.0).unwrap().value;
            for &a in &[0.5f64, 1.0] {
                let d = t.weighted_moment(ell, a).unwrap().value;
                let c = t.weighted_moment(ell, 2.0 * a).unwrap().value;
                assert!(y <= d && d <= c, "ell={ell} a={a}: Y={y} D={d} C={c}");
            }
        }
        // Monotone in the weight coefficient.
        let mut prev = 0.0;
        for i in 0..=8 {
            let a = 0.25 * i as f64;
            let m = t.weighted_moment(1, a).unwrap().value;
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn moment_capacity_errors() {
        let t = DickmanTable::build(10.0, DEFAULT_STEP).unwrap();
        assert!(matches!(t.weighted_moment(0, 3.0), Err(Error::Capacity(_))));
        let t = DickmanTable::build(120.0, 1.0 / 256.0).unwrap();
        assert!(matches!(
            t.weighted_moment(0, 50.0),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = DickmanTable::build(5.0, 1.0 / 512.0).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = DickmanTable::read_csv(&buf[..]).unwrap();
        assert_eq!(t.grid().len(), back.grid().len());
        for (a, b) in t.grid().iter().zip(back.grid()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(back.delay_residual_max().is_none());
        assert!((back.rho(3.5).unwrap() - t.rho(3.5).unwrap()).abs() == 0.0);
    }

    #[test]
    fn deep_table_reaches_two_hundred() {
        let t = DickmanTable::build(200.0, 1.0 / 256.0).unwrap();
        let lr = t.log_rho(200.0).unwrap();
        // log rho(200) is around -1200; it must be finite and ordered.
        assert!(lr.is_finite() && lr < t.log_rho(100.0).unwrap());
        assert!(t.delay_residual_max().unwrap() <= 1e-8);
    }
}
