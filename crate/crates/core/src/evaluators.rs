//! Truncated Dirichlet-series evaluation of ζ^(ℓ), log ζ, and L^(ℓ)(σ, χ),
//! plus raw zeta sums and the friable-approximation discrepancy report.
//!
//! Phases `n^{-it} = exp(-i t log n)` are the accuracy bottleneck: for
//! t up to ~1e9 the raw product t·log n loses ~10 bits in double precision,
//! so every phase is reduced modulo 2π with extended-precision
//! multiplication (see [`crate::numeric::phase_mod_two_pi`]). Partial sums
//! run block-parallel with a deterministic index-ordered reduction.

use crate::arith::{psi_count, psi_weighted, PrimeTable};
use crate::characters::Character;
use crate::error::{Error, Result};
use crate::numeric::{block_sum_complex, unit_phase_neg, CompensatedComplexSum};
use num_complex::Complex64;
use serde::Serialize;

/// Serialization helper for complex values.
pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::ser::SerializeStruct;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &z.re)?;
        st.serialize_field("im", &z.im)?;
        st.end()
    }
}

/// An evaluation point σ + it.
///
/// σ must lie in (1/2, 2]; the range above 1 exists for cross-checks against
/// classical values such as ζ(2). t may be negative (conjugate-symmetry
/// checks use this); scans always pass t ≥ 0.
#[derive(Debug, Clone, Copy)]
pub struct EvalPoint {
    sigma: f64,
    t: f64,
    a_of_t: Option<f64>,
}

impl EvalPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma > 0.5 && sigma <= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "sigma must lie in (1/2, 2], got {sigma}"
            )));
        }
        if !t.is_finite() {
            return Err(Error::InvalidArgument("t must be finite".into()));
        }
        Ok(Self {
            sigma,
            t,
            a_of_t: None,
        })
    }

    /// Point attached to a scan window starting at `t_lo`, carrying
    /// `A(T) = (1-σ)·log log T`.
    pub fn for_scan(sigma: f64, t: f64, t_lo: f64) -> Result<Self> {
        let mut pt = Self::new(sigma, t)?;
        if t_lo <= std::f64::consts::E {
            return Err(Error::InvalidArgument(format!(
                "scan window start must exceed e, got {t_lo}"
            )));
        }
        pt.a_of_t = Some((1.0 - sigma) * t_lo.ln().ln());
        Ok(pt)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `(1-σ)·log log T` when attached to a scan.
    pub fn a_of_t(&self) -> Option<f64> {
        self.a_of_t
    }
}

/// Truncation parameters for the series evaluators.
#[derive(Debug, Clone, Copy)]
pub struct SeriesTruncation {
    n: u64,
    ell: u32,
    epsilon: f64,
}

impl SeriesTruncation {
    pub fn new(n: u64, ell: u32, epsilon: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "truncation length must be >= 2, got {n}"
            )));
        }
        if ell > 10 {
            return Err(Error::InvalidArgument(format!(
                "derivative order must be <= 10, got {ell}"
            )));
        }
        if !(epsilon > 0.0 && epsilon <= 0.25) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0, 1/4], got {epsilon}"
            )));
        }
        Ok(Self { n, ell, epsilon })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// `Σ_{n ≤ x} n^{-it}` by compensated block summation.
pub fn zeta_sum(x: f64, t: f64) -> Result<Complex64> {
    if !(x.is_finite() && x >= 1.0) {
        return Err(Error::InvalidArgument(format!("x must be >= 1, got {x}")));
    }
    if x > 9.0e15 {
        return Err(Error::Capacity(format!("x = {x} too large to enumerate")));
    }
    Ok(block_sum_complex(1, x.floor() as u64, |n| {
        unit_phase_neg(t, (n as f64).ln())
    }))
}

/// Truncated-series approximation to ζ^(ℓ)(σ + it) with its error bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncatedDeriv {
    /// Approximation to ζ^(ℓ) itself (the alternating sign of the series is
    /// already applied).
    #[serde(with = "complex_serde")]
    pub value: Complex64,
    /// Truncation-error magnitude: the `ℓ!·ε^{-ℓ}·N^{σ-ε}`-type term, plus a
    /// rigorous integral tail bound when σ > 1.
    pub error_bound: f64,
    /// True when σ ≤ 1, where the bound's constant is heuristic (taken as 1)
    /// and must not be asserted.
    pub bound_is_heuristic: bool,
}

/// `(-1)^ℓ Σ_{n ≤ N} (log n)^ℓ n^{-σ-it}`, the approximation to ζ^(ℓ)(σ+it).
///
/// The underlying expansion is valid uniformly for t in a dyadic window
/// [N, 6.28N); callers own the choice of window (t is accepted anywhere).
pub fn zeta_deriv_truncated(pt: &EvalPoint, tr: &SeriesTruncation) -> TruncatedDeriv {
    let sigma = pt.sigma;
    let t = pt.t;
    let ell = tr.ell;
    let sum = block_sum_complex(1, tr.n, |n| {
        let ln_n = (n as f64).ln();
        let amp = ln_n.powi(ell as i32) * (-sigma * ln_n).exp();
        amp * unit_phase_neg(t, ln_n)
    });
    let sign = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
    let nf = tr.n as f64;
    let mut bound = factorial(ell) * tr.epsilon.powi(-(ell as i32)) * nf.powf(-sigma + tr.epsilon);
    let heuristic = sigma <= 1.0;
    if !heuristic {
        bound += series_tail_integral(ell, sigma, nf);
    }
    TruncatedDeriv {
        value: sign * sum,
        error_bound: bound,
        bound_is_heuristic: heuristic,
    }
}

/// `∫_N^∞ (log x)^ℓ x^{-σ} dx` for σ > 1, by the exact recursion
/// `I_ℓ = (log N)^ℓ N^{1-σ}/(σ-1) + ℓ/(σ-1)·I_{ℓ-1}`.
fn series_tail_integral(ell: u32, sigma: f64, n: f64) -> f64 {
    let s1 = sigma - 1.0;
    let ln_n = n.ln();
    let mut acc = n.powf(-s1) / s1;
    for m in 1..=ell {
        acc = ln_n.powi(m as i32) * n.powf(-s1) / s1 + f64::from(m) / s1 * acc;
    }
    acc
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product::<f64>().max(1.0)
}

/// Truncated prime-power series for log ζ(σ + it).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogZeta {
    #[serde(with = "complex_serde")]
    pub value: Complex64,
    /// `min(1/2 + 1/log y, σ/2 + 1/4)`, the abscissa entering the error
    /// term `log t · (σ₁ - 1/2)^{-2} · y^{σ₁-σ}` that callers may form.
    pub sigma1: f64,
}

/// `Σ_{2 ≤ n ≤ ⌊y⌋} Λ(n) / (n^{σ+it} log n)`.
///
/// Requires σ ∈ (1/2, 1] and t ≥ y + 3; below that threshold the
/// approximation is not claimed and a domain error is returned.
pub fn log_zeta_truncated(pt: &EvalPoint, y: f64) -> Result<LogZeta> {
    if !(pt.sigma > 0.5 && pt.sigma <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must lie in (1/2, 1], got {}",
            pt.sigma
        )));
    }
    if !(y.is_finite() && y >= 2.0) {
        return Err(Error::InvalidArgument(format!("y must be >= 2, got {y}")));
    }
    if pt.t < y + 3.0 {
        return Err(Error::Domain(format!(
            "need t >= y + 3 (t = {}, y = {y})",
            pt.t
        )));
    }
    let y_floor = y.floor() as u64;
    let table = PrimeTable::build(y_floor.max(2))?;
    let mut acc = CompensatedComplexSum::new();
    for &p in table.primes() {
        if p > y_floor {
            break;
        }
        let ln_p = (p as f64).ln();
        let mut pk = p;
        loop {
            let ln_pk = (pk as f64).ln();
            let amp = ln_p / ln_pk * (-pt.sigma * ln_pk).exp();
            acc.add(amp * unit_phase_neg(pt.t, ln_pk));
            match pk.checked_mul(p) {
                Some(next) if next <= y_floor => pk = next,
                _ => break,
            }
        }
    }
    let sigma1 = (0.5 + 1.0 / y.ln()).min(pt.sigma / 2.0 + 0.25);
    Ok(LogZeta {
        value: acc.value(),
        sigma1,
    })
}

/// Truncated Dirichlet series for L^(ℓ)(σ, χ).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LSeriesTruncated {
    #[serde(with = "complex_serde")]
    pub value: Complex64,
    /// `√q·log q·(log N)^ℓ / N` with the unspecified constant taken as 1.
    pub error_bound: f64,
    /// False for the principal character, whose partial sums are unbounded
    /// and for which the bound does not apply.
    pub bound_valid: bool,
}

/// `Σ_{k ≤ N} χ(k)·(-log k)^ℓ·k^{-σ}`, the finite form L^(ℓ)(σ, χ; N).
pub fn l_deriv_truncated(
    chi: &Character<'_>,
    sigma: f64,
    tr: &SeriesTruncation,
) -> Result<LSeriesTruncated> {
    if !(sigma > 0.5 && sigma <= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must lie in (1/2, 2], got {sigma}"
        )));
    }
    let nf = tr.n as f64;
    if f64::from(tr.ell) > nf.ln() {
        return Err(Error::InvalidArgument(format!(
            "need ell <= log N (ell = {}, N = {})",
            tr.ell, tr.n
        )));
    }
    let q = chi.group().q();
    let values = chi.values_mod_q();
    let ell = tr.ell as i32;
    let sum = block_sum_complex(1, tr.n, |k| {
        let chi_k = values[(k % q) as usize];
        if chi_k.re == 0.0 && chi_k.im == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let ln_k = (k as f64).ln();
        let amp = (-ln_k).powi(ell) * (-sigma * ln_k).exp();
        amp * chi_k
    });
    let qf = q as f64;
    Ok(LSeriesTruncated {
        value: sum,
        error_bound: qf.sqrt() * qf.ln() * nf.ln().powi(ell) / nf,
        bound_valid: !chi.is_principal(),
    })
}

/// Empirical comparison of a raw zeta sum against its friable approximation.
///
/// No inequality is asserted: the underlying approximation theorem is
/// conditional and asymptotic, so the report only records the observed
/// discrepancy.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FriableApproxReport {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    /// `Σ_{n ≤ x} n^{-it}`.
    #[serde(with = "complex_serde")]
    pub zeta_sum: Complex64,
    /// `Ψ(x, y; t) = Σ_{n ≤ x, n y-friable} n^{-it}`.
    #[serde(with = "complex_serde")]
    pub psi_weighted: Complex64,
    pub psi_count: u64,
    /// `|Σ - Ψ(x,y;t)|`.
    pub abs_difference: f64,
    /// `|Σ - Ψ(x,y;t)| / Ψ(x,y)`.
    pub normalized_discrepancy: f64,
}

pub fn friable_approx_report(x: f64, y: f64, t: f64) -> Result<FriableApproxReport> {
    if !(x.is_finite() && x >= 2.0) {
        return Err(Error::InvalidArgument(format!("x must be >= 2, got {x}")));
    }
    let full = zeta_sum(x, t)?;
    let friable = psi_weighted(x, y, |n| unit_phase_neg(t, (n as f64).ln()))?;
    let count = psi_count(x, y)?;
    let diff = (full - friable).norm();
    Ok(FriableApproxReport {
        x,
        y,
        t,
        zeta_sum: full,
        psi_weighted: friable,
        psi_count: count,
        abs_difference: diff,
        normalized_discrepancy: diff / count as f64,
    })
}
