//! Resonator construction, Gál-type weighted sums, and numeric lower-bound
//! certificates.
//!
//! The resonator modulus is `P(y, b) = ∏_{p ≤ y} p^{b-1}`; its divisor set
//! M (the resonator support) has `b^w` elements, `w = π(y)`, and the
//! resonator weight is the characteristic function of M. The central object
//! is the Gál-type weighted sum
//!
//! ```text
//!     (1/|M|) Σ_{n ∈ M} Σ_{k | n} (log k)^ℓ k^{-σ},
//! ```
//!
//! which factors over primes: it equals `(-1)^ℓ F^(ℓ)(σ)` for
//! `F(s) = ∏_{p ≤ y} f_p(s)`, `f_p(s) = Σ_{v < b} (1 - v/b) p^{-vs}`.
//! Derivatives are taken through `G = log F` by the binomial recurrence
//! `F^(m) = Σ_{j<m} C(m-1, j) F^(j) G^(m-j)`, which costs O(w·ℓ²) and never
//! enumerates the b^w divisors; a divisor-enumeration brute force provides
//! the independent cross-check.

use crate::characters::CharacterGroup;
use crate::dickman::DickmanTable;
use crate::error::{Error, Result};
use crate::evaluators::{complex_serde, l_deriv_truncated, SeriesTruncation};
use crate::numeric::CompensatedSum;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Largest resonator support `b^π(y)` the brute-force enumerator accepts.
pub const MAX_BRUTEFORCE_SUPPORT: f64 = 1.0e7;

/// Recipe output: a resonator shape `(y, b)` for a given scale T.
///
/// At desk scale both recipes produce y < 2 (no primes at all); such pairs
/// are flagged degenerate rather than rejected, since the formulas are
/// asymptotic and still useful for trend tables.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResonatorRecipe {
    pub y: f64,
    pub b: u32,
    pub degenerate: bool,
}

/// Recipe for extreme values at `σ = 1 - a/log log T`:
/// `y = log T / (3 (log log T)^{2e^a + 1})`, `b = ⌊(log log T)^{2e^a + 1}⌋`.
pub fn one_line_params(t_lo: f64, a: f64) -> Result<ResonatorRecipe> {
    if !(t_lo.is_finite() && t_lo >= 16.0) {
        return Err(Error::InvalidArgument(format!(
            "T must be >= 16, got {t_lo}"
        )));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!("a must be >= 0, got {a}")));
    }
    let base = t_lo.ln().ln();
    let expo = 2.0 * a.exp() + 1.0;
    let power = base.powf(expo);
    let y = t_lo.ln() / (3.0 * power);
    let b = power.floor().max(1.0) as u32;
    Ok(ResonatorRecipe {
        y,
        b,
        degenerate: y < 2.0,
    })
}

/// Recipe for the range σ strictly below the 1-line:
/// `y = log T / (3 log log T)`, `b = ⌊log log T⌋`.
pub fn sub_one_params(t_lo: f64) -> Result<ResonatorRecipe> {
    if !(t_lo.is_finite() && t_lo >= 16.0) {
        return Err(Error::InvalidArgument(format!(
            "T must be >= 16, got {t_lo}"
        )));
    }
    let base = t_lo.ln().ln();
    let y = t_lo.ln() / (3.0 * base);
    let b = base.floor().max(1.0) as u32;
    Ok(ResonatorRecipe {
        y,
        b,
        degenerate: y < 2.0,
    })
}

/// A non-degenerate resonator: the primes `≤ y` and the exponent bound b.
#[derive(Debug, Clone)]
pub struct Resonator {
    y: f64,
    b: u32,
    primes: Vec<u64>,
    log_modulus: f64,
    support_log: f64,
}

impl Resonator {
    /// Requires y ≥ 2 (at least one prime) and b ≥ 1; degenerate recipe
    /// outputs must not be materialized.
    pub fn new(y: f64, b: u32) -> Result<Self> {
        if !(y.is_finite() && y >= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "degenerate resonator: y must be >= 2, got {y}"
            )));
        }
        if b < 1 {
            return Err(Error::InvalidArgument("b must be >= 1".into()));
        }
        let mut primes = Vec::new();
        let limit = y.floor() as u64;
        let mut is_comp = vec![false; (limit + 1) as usize];
        for i in 2..=limit as usize {
            if !is_comp[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit as usize {
                    is_comp[j] = true;
                    j += i;
                }
            }
        }
        let log_p_sum: f64 = primes.iter().map(|&p| (p as f64).ln()).sum();
        let w = primes.len() as f64;
        Ok(Self {
            y,
            b,
            log_modulus: f64::from(b - 1) * log_p_sum,
            support_log: w * f64::from(b).ln(),
            primes,
        })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// The primes ≤ y (w = π(y) of them).
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `log P(y, b) = (b-1) Σ_{p ≤ y} log p`.
    pub fn log_modulus(&self) -> f64 {
        self.log_modulus
    }

    /// `log |M| = π(y)·log b`.
    pub fn support_log(&self) -> f64 {
        self.support_log
    }

    /// `|M| = b^π(y)`; may overflow to infinity, use [`support_log`](Self::support_log)
    /// for large resonators.
    pub fn support_size(&self) -> f64 {
        self.support_log.exp()
    }
}

fn validate_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.5 && sigma <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must lie in (1/2, 1], got {sigma}"
        )));
    }
    Ok(())
}

/// `∏_{p ≤ y} Σ_{v=0}^{b-1} (1 - v/b) p^{-vσ}`, the mean divisor sum
/// `(1/|M|) Σ_{n ∈ M} Σ_{k|n} k^{-σ}`, accumulated in log space.
pub fn gal_product(res: &Resonator, sigma: f64) -> Result<f64> {
    validate_sigma(sigma)?;
    Ok(log_gal_product(res, sigma).exp())
}

fn log_gal_product(res: &Resonator, sigma: f64) -> f64 {
    let b = f64::from(res.b);
    let mut acc = CompensatedSum::new();
    for &p in &res.primes {
        let ln_p = (p as f64).ln();
        let mut f = 0.0;
        for v in 0..res.b {
            let vf = f64::from(v);
            f += (1.0 - vf / b) * (-vf * sigma * ln_p).exp();
        }
        acc.add(f.ln());
    }
    acc.value()
}

/// The ℓ-weighted Gál sum `(1/|M|) Σ_{n ∈ M} Σ_{k|n} (log k)^ℓ k^{-σ}`,
/// computed as `(-1)^ℓ F^(ℓ)(σ)` by the log-derivative recurrence.
pub fn gal_weighted_sum(res: &Resonator, ell: u32, sigma: f64) -> Result<f64> {
    validate_sigma(sigma)?;
    if ell > 20 {
        return Err(Error::InvalidArgument(format!(
            "ell = {ell} not supported (max 20)"
        )));
    }
    let log_f = log_gal_product(res, sigma);
    if ell == 0 {
        return Ok(log_f.exp());
    }
    let l = ell as usize;
    let b = f64::from(res.b);
    // G^(m) = Σ_p (log f_p)^(m)(σ) for m = 1..=ℓ.
    let mut g_deriv = vec![CompensatedSum::new(); l + 1];
    let mut f_m = vec![0.0f64; l + 1];
    let mut g_m = vec![0.0f64; l + 1];
    let binom = pascal_rows(l);
    for &p in &res.primes {
        let ln_p = (p as f64).ln();
        for (m, slot) in f_m.iter_mut().enumerate() {
            let mut s = 0.0;
            for v in 0..res.b {
                let vf = f64::from(v);
                s += (1.0 - vf / b) * (-vf * ln_p).powi(m as i32) * (-vf * sigma * ln_p).exp();
            }
            *slot = s;
        }
        // Solve f^(m) = Σ_{j=0}^{m-1} C(m-1, j) g^(m-j) f^(j) for g^(m).
        for m in 1..=l {
            let mut rhs = f_m[m];
            for j in 1..m {
                rhs -= binom[m - 1][j] * g_m[m - j] * f_m[j];
            }
            g_m[m] = rhs / f_m[0];
        }
        for m in 1..=l {
            g_deriv[m].add(g_m[m]);
        }
    }
    // H_m = F^(m)/F via F^(m) = Σ_{j<m} C(m-1, j) F^(j) G^(m-j).
    let mut h = vec![0.0f64; l + 1];
    h[0] = 1.0;
    for m in 1..=l {
        let mut s = 0.0;
        for j in 0..m {
            s += binom[m - 1][j] * h[j] * g_deriv[m - j].value();
        }
        h[m] = s;
    }
    let sign = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * h[l] * log_f.exp())
}

fn pascal_rows(max: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(max + 1);
    for m in 0..=max {
        let mut row = vec![1.0; m + 1];
        for j in 1..m {
            row[j] = rows[m - 1][j - 1] + rows[m - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// Exact divisor-set enumeration of the Gál sum, with optional caps on k:
/// `(1/|M|) Σ_{n ∈ M} Σ_{k|n, k ≤ k_cap, Ω(k) ≤ ω_cap} (log k)^ℓ k^{-σ}`.
///
/// Each divisor k of `P(y, b)` is visited once and weighted by the exact
/// density of its multiples in M, `∏_p (1 - v_p(k)/b)`. Divisors are
/// compared against `k_cap` in the log domain, so supports whose elements
/// exceed u64 are still handled.
pub fn gal_bruteforce(
    res: &Resonator,
    ell: u32,
    sigma: f64,
    k_cap: Option<f64>,
    omega_cap: Option<u32>,
) -> Result<f64> {
    validate_sigma(sigma)?;
    if res.support_log() > MAX_BRUTEFORCE_SUPPORT.ln() + 1e-9 {
        return Err(Error::Capacity(format!(
            "resonator support exp({:.2}) exceeds the enumeration bound {MAX_BRUTEFORCE_SUPPORT:.0}",
            res.support_log()
        )));
    }
    let ln_cap = k_cap.map(f64::ln);
    let b = f64::from(res.b);
    let mut acc = CompensatedSum::new();
    // Depth-first over exponent vectors in [0, b-1]^w.
    let mut stack: Vec<(usize, f64, u32, f64)> = vec![(0, 0.0, 0, 1.0)];
    while let Some((idx, ln_k, omega, density)) = stack.pop() {
        if idx == res.primes.len() {
            if let Some(cap) = ln_cap {
                if ln_k > cap + 1e-12 {
                    continue;
                }
            }
            if let Some(oc) = omega_cap {
                if omega > oc {
                    continue;
                }
            }
            let weight = ln_k.powi(ell as i32) * (-sigma * ln_k).exp();
            acc.add(weight * density);
            continue;
        }
        let ln_p = (res.primes[idx] as f64).ln();
        for v in 0..res.b {
            let vf = f64::from(v);
            stack.push((
                idx + 1,
                ln_k + vf * ln_p,
                omega + v,
                density * (1.0 - vf / b),
            ));
        }
    }
    Ok(acc.value())
}

/// Which extreme-value regime a certificate addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateTarget {
    /// σ within O(1/log log T) of 1.
    #[serde(rename = "zeta-1line")]
    ZetaOneLine,
    /// σ bounded away from 1 (A(T) = (1-σ)·log log T above 1).
    #[serde(rename = "zeta-subone")]
    ZetaSubOne,
    /// Dirichlet L-functions over the characters mod q.
    #[serde(rename = "L-char")]
    LChar,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub ell: u32,
    pub sigma: f64,
    /// Resonator shape; absent for the character target, whose resonator
    /// is the weight vector itself.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidityFlag {
    pub name: String,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorTerm {
    pub description: String,
    pub magnitude: f64,
}

/// Per-character data attached to L-function certificates.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterResonanceDetail {
    /// `V₁ = Σ_{χ≠χ₀} |R_χ|²`.
    pub v1: f64,
    /// `V₂ = Σ_{χ≠χ₀} (-1)^ℓ L^(ℓ)(σ, χ; N) |R_χ|²`.
    #[serde(with = "complex_serde")]
    pub v2: Complex64,
    /// `|V₂| / V₁`, the certified lower bound.
    pub ratio: f64,
    /// `max_{χ≠χ₀} |L^(ℓ)(σ, χ; N)|` by direct enumeration.
    pub max_abs_l: f64,
    /// Index of the maximizing character (smallest index on ties).
    pub max_index: usize,
    /// Whether `max_abs_l ≥ ratio` held numerically (it must, up to
    /// rounding: this is an exact finite inequality).
    pub finite_inequality_holds: bool,
    /// Residual of the exact orthogonality identity relating
    /// `Σ_χ (-1)^ℓ L^(ℓ)(σ,χ;N) |R_χ|²` over all characters to the
    /// congruence sum `φ(q) Σ_{km≡n (q)} (log k)^ℓ r(m) r(n) k^{-σ}`.
    pub identity_residual: f64,
    /// Resonator values `R_χ` in character order.
    pub r_chi: Vec<[f64; 2]>,
}

/// A numeric lower-bound certificate together with everything needed to
/// audit it.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub target: CertificateTarget,
    pub parameters: CertificateParams,
    /// The certified quantity: a Gál weighted sum for zeta targets,
    /// `|V₂|/V₁` for the character target.
    pub certificate_value: f64,
    /// Theorem-shaped envelope at these parameters (leading constant from
    /// the Dickman moments; any remaining constant is taken as 1 and the
    /// value is for comparison, not assertion). Absent when the target's
    /// regime hypothesis does not hold (sub-one targets need
    /// `(1-σ)·log log T > 1`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_envelope: Option<f64>,
    pub validity: Vec<ValidityFlag>,
    pub error_terms: Vec<ErrorTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterResonanceDetail>,
}

impl CertificateReport {
    /// True when every validity flag is satisfied.
    pub fn is_valid(&self) -> bool {
        self.validity.iter().all(|f| f.satisfied)
    }
}

/// `exp(e^a/a − a)`, the envelope factor below the 1-line.
pub fn sub_one_envelope_factor(a: f64) -> f64 {
    (a.exp() / a - a).exp()
}

/// Lower-bound certificate for `max_{t ∈ [T, 2T]} |ζ^(ℓ)(σ + it)|`.
///
/// Without a target override the regime is inferred from
/// `A = (1-σ)·log log T`: A ≤ 1 selects the near-1-line recipe and
/// envelope, larger A the sub-one ones. Without parameter overrides the
/// resonator shape comes from the matching recipe; desk-scale T leaves both
/// recipes degenerate (y < 2, support {1}), and the report is still emitted
/// with the `non_degenerate` flag cleared. The `support_fits` flag checks
/// `log P(y,b) ≤ ½ log T`, which is what lets every element of the support
/// participate in the quadratic form over n ≤ √T; a certificate without it
/// does not instantiate the lower-bound machinery.
pub fn zeta_certificate(
    table: &DickmanTable,
    t_lo: f64,
    ell: u32,
    sigma: f64,
    override_params: Option<(f64, u32)>,
    target_override: Option<CertificateTarget>,
) -> Result<CertificateReport> {
    validate_sigma(sigma)?;
    if !(t_lo.is_finite() && t_lo >= 16.0) {
        return Err(Error::InvalidArgument(format!(
            "T must be >= 16, got {t_lo}"
        )));
    }
    if target_override == Some(CertificateTarget::LChar) {
        return Err(Error::InvalidArgument(
            "character certificates come from character_resonance".into(),
        ));
    }
    let log_t = t_lo.ln();
    let log2_t = log_t.ln();
    let a = (1.0 - sigma) * log2_t;
    let target = target_override.unwrap_or(if a <= 1.0 {
        CertificateTarget::ZetaOneLine
    } else {
        CertificateTarget::ZetaSubOne
    });
    let (y, b) = match override_params {
        Some((y, b)) => (y, b),
        None => {
            let recipe = match target {
                CertificateTarget::ZetaOneLine => one_line_params(t_lo, a)?,
                _ => sub_one_params(t_lo)?,
            };
            (recipe.y, recipe.b)
        }
    };

    let degenerate = y < 2.0;
    let (certificate_value, log_modulus) = if degenerate {
        // Support is {1}: the Gál sum collapses to (log 1)^ℓ = [ℓ = 0].
        (if ell == 0 { 1.0 } else { 0.0 }, 0.0)
    } else {
        let res = Resonator::new(y, b)?;
        (gal_weighted_sum(&res, ell, sigma)?, res.log_modulus())
    };

    let support_fits = log_modulus <= 0.5 * log_t;
    let envelope_factor = match target {
        CertificateTarget::ZetaOneLine => Some(table.weighted_moment(ell, a)?.value),
        _ if a > 1.0 => Some(sub_one_envelope_factor(a)),
        _ => None,
    };
    let predicted_envelope = envelope_factor.map(|f| f * log2_t.powi(ell as i32 + 1));

    let mut error_terms = vec![
        ErrorTerm {
            description: "t^(-3/2) (log t)^(ell+1) quadratic-form remainder".into(),
            magnitude: t_lo.powf(-1.5) * log_t.powi(ell as i32 + 1),
        },
        ErrorTerm {
            description: "(log log t)^ell series-truncation remainder".into(),
            magnitude: log2_t.powi(ell as i32),
        },
    ];
    if target == CertificateTarget::ZetaSubOne && !degenerate && sigma < 1.0 {
        // Small-divisor comparison: partial sum over k ≤ √y against the
        // closed bound it is replaced by; recorded, never asserted.
        let mut partial = 0.0;
        let mut k = 1u64;
        while (k as f64) * (k as f64) <= y {
            partial += (k as f64).powf(-sigma);
            k += 1;
        }
        error_terms.push(ErrorTerm {
            description: "sum over k <= sqrt(y) of k^(-sigma)".into(),
            magnitude: partial,
        });
        error_terms.push(ErrorTerm {
            description: "y^((1-sigma)/2) / ((1-sigma) log y) comparison bound".into(),
            magnitude: y.powf(0.5 * (1.0 - sigma)) / ((1.0 - sigma) * y.ln()),
        });
    }

    Ok(CertificateReport {
        target,
        parameters: CertificateParams {
            t_lo: Some(t_lo),
            q: None,
            ell,
            sigma,
            y: Some(y),
            b: Some(b),
            m: None,
            n: None,
        },
        certificate_value,
        predicted_envelope,
        validity: vec![
            ValidityFlag {
                name: "non_degenerate".into(),
                satisfied: !degenerate,
            },
            ValidityFlag {
                name: "support_fits".into(),
                satisfied: support_fits,
            },
            ValidityFlag {
                name: "non_trivial".into(),
                satisfied: !(b == 1 && ell >= 1),
            },
        ],
        error_terms,
        character: None,
    })
}

/// Character resonance certificate: with weights `r(1..=M)` and resonator
/// values `R_χ = Σ_{m ≤ M} χ(m) r(m)`, the ratio `|V₂|/V₁` is an exact
/// finite lower bound for `max_{χ≠χ₀} |L^(ℓ)(σ, χ; N)|`; this is
/// unconditional at finite parameters and is verified by direct enumeration
/// over all characters, along with the full-sum orthogonality identity.
pub fn character_resonance(
    table: &DickmanTable,
    group: &CharacterGroup,
    ell: u32,
    sigma: f64,
    weights: &[f64],
    n: u64,
) -> Result<CertificateReport> {
    if weights.is_empty() {
        return Err(Error::InvalidArgument("weights must be non-empty".into()));
    }
    let m = weights.len() as u64;
    if n < 1 {
        return Err(Error::InvalidArgument("N must be >= 1".into()));
    }
    if n > 10_000_000 || m > 10_000 {
        return Err(Error::Capacity(format!(
            "resonance size N = {n}, M = {m} exceeds feasibility bounds"
        )));
    }
    let tr = SeriesTruncation::new(n.max(2), ell, 0.25)?;
    let q = group.q();

    // Per-character resonator values and truncated series, in index order.
    let per_char: Vec<(Complex64, Complex64)> = (0..group.phi() as usize)
        .into_par_iter()
        .map(|idx| {
            let chi = group.character(idx).expect("index in range");
            let mut r = Complex64::new(0.0, 0.0);
            for (i, &w) in weights.iter().enumerate() {
                r += chi.eval(i as u64 + 1) * w;
            }
            let l_val = l_deriv_truncated(&chi, sigma, &tr)
                .expect("validated parameters")
                .value;
            (r, l_val)
        })
        .collect();

    let sign = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut v1 = CompensatedSum::new();
    let mut v2 = Complex64::new(0.0, 0.0);
    let mut all_chi_sum = Complex64::new(0.0, 0.0);
    let mut max_abs_l = f64::NEG_INFINITY;
    let mut max_index = 0usize;
    for (idx, (r, l_val)) in per_char.iter().enumerate() {
        let weight = r.norm_sqr();
        all_chi_sum += sign * l_val * weight;
        if idx != group.principal_index() {
            v1.add(weight);
            v2 += sign * l_val * weight;
            let abs_l = l_val.norm();
            if abs_l > max_abs_l {
                max_abs_l = abs_l;
                max_index = idx;
            }
        }
    }
    let v1 = v1.value();
    if v1 <= 0.0 {
        return Err(Error::InvalidArgument(
            "degenerate resonator: all non-principal R_chi vanish".into(),
        ));
    }
    let ratio = v2.norm() / v1;

    // Orthogonality identity over all characters:
    // Σ_χ (-1)^ℓ L^(ℓ)(σ,χ;N) |R_χ|² = φ(q) Σ_{km ≡ n (q)} (log k)^ℓ r(m) r(n) k^{-σ}
    // with gcd(kmn, q) = 1, k ≤ N, m, n ≤ M.
    let mut congruence = CompensatedSum::new();
    for k in 1..=n {
        if crate::characters::gcd(k % q, q) != 1 {
            continue;
        }
        let ln_k = (k as f64).ln();
        let k_weight = ln_k.powi(ell as i32) * (-sigma * ln_k).exp();
        for (mi, &wm) in weights.iter().enumerate() {
            let m_val = mi as u64 + 1;
            if wm == 0.0 || crate::characters::gcd(m_val % q, q) != 1 {
                continue;
            }
            let target = (k % q) * (m_val % q) % q;
            let mut n_val = (target + q - 1) % q + 1; // smallest n >= 1 with n ≡ km
            while n_val <= m {
                let wn = weights[(n_val - 1) as usize];
                if wn != 0.0 && crate::characters::gcd(n_val % q, q) == 1 {
                    congruence.add(k_weight * wm * wn);
                }
                n_val += q;
            }
        }
    }
    let rhs = group.phi() as f64 * congruence.value();
    let identity_residual = (all_chi_sum - Complex64::new(rhs, 0.0)).norm();

    let log2_q = (q as f64).ln().ln();
    let a = (1.0 - sigma) * log2_q;
    let envelope_factor = if a <= 1.0 {
        table.weighted_moment(ell, a.max(0.0))?.value
    } else {
        sub_one_envelope_factor(a)
    };
    let predicted_envelope = Some(envelope_factor * log2_q.powi(ell as i32 + 1));
    let finite_inequality_holds = max_abs_l >= ratio - 1e-10;

    Ok(CertificateReport {
        target: CertificateTarget::LChar,
        parameters: CertificateParams {
            t_lo: None,
            q: Some(q),
            ell,
            sigma,
            y: None,
            b: None,
            m: Some(m),
            n: Some(n),
        },
        certificate_value: ratio,
        predicted_envelope,
        validity: vec![
            ValidityFlag {
                name: "v1_positive".into(),
                satisfied: true,
            },
            ValidityFlag {
                name: "finite_inequality_holds".into(),
                satisfied: finite_inequality_holds,
            },
            ValidityFlag {
                name: "identity_residual_small".into(),
                satisfied: identity_residual <= 1e-9,
            },
        ],
        error_terms: vec![
            ErrorTerm {
                description: "(log q)^(ell+1) q^(-3/4) principal-character remainder".into(),
                magnitude: (q as f64).ln().powi(ell as i32 + 1) * (q as f64).powf(-0.75),
            },
            ErrorTerm {
                description: "sqrt(q) log q (log N)^ell / N series truncation".into(),
                magnitude: (q as f64).sqrt() * (q as f64).ln() * (n as f64).ln().powi(ell as i32)
                    / n as f64,
            },
        ],
        character: Some(CharacterResonanceDetail {
            v1,
            v2,
            ratio,
            max_abs_l,
            max_index,
            finite_inequality_holds,
            identity_residual,
            r_chi: per_char.iter().map(|(r, _)| [r.re, r.im]).collect(),
        }),
    })
}
