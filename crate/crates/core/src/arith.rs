//! Prime sieves, multiplicative arithmetic, and friable-number machinery.
//!
//! A positive integer is y-friable (y-smooth) when its largest prime factor
//! is at most y. `psi_count(x, y)` is the number of y-friable integers not
//! exceeding x, `psi_weighted` its f-weighted variant; both take `n ≤ x` to
//! mean `n ≤ ⌊x⌋`.

use crate::dickman::DickmanTable;
use crate::error::{Error, Result};
use crate::numeric::{CompensatedComplexSum, CompensatedSum};
use num_complex::Complex64;

/// Largest sieve limit accepted by [`PrimeTable::build`]. The table stores
/// one 32-bit smallest-factor entry per integer, so this is a memory bound,
/// not an arithmetic one.
pub const MAX_SIEVE_LIMIT: u64 = (1 << 31) - 1;

/// Largest `x` accepted by the friable enumeration; ⌊x⌋ must be exact in f64.
pub const MAX_FRIABLE_X: f64 = 9.0e15;

/// Primes up to a fixed limit together with a smallest-prime-factor table.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    smallest_factor: Vec<u32>,
}

impl PrimeTable {
    /// Linear sieve of every prime `≤ limit`.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::Capacity(format!(
                "sieve limit {limit} exceeds the supported bound {MAX_SIEVE_LIMIT}"
            )));
        }
        let n = limit as usize;
        let mut smallest_factor = Vec::new();
        smallest_factor
            .try_reserve_exact(n + 1)
            .map_err(|_| Error::Capacity(format!("cannot allocate sieve of size {limit}")))?;
        smallest_factor.resize(n + 1, 0u32);
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=n {
            if smallest_factor[i] == 0 {
                smallest_factor[i] = i as u32;
                primes.push(i as u64);
            }
            let spf_i = smallest_factor[i] as usize;
            for &p in &primes {
                let p = p as usize;
                if p > spf_i || i * p > n {
                    break;
                }
                smallest_factor[i * p] = p as u32;
            }
        }
        Ok(Self {
            limit,
            primes,
            smallest_factor,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `≤ limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Smallest prime factor of `n` (equals `n` when `n` is prime).
    pub fn smallest_factor(&self, n: u64) -> Result<u64> {
        if n < 2 || n > self.limit {
            return Err(Error::Capacity(format!(
                "{n} is outside the sieve range 2..={}",
                self.limit
            )));
        }
        Ok(self.smallest_factor[n as usize] as u64)
    }

    /// Prime factorization of `n ≤ limit` by repeated smallest-factor division.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factorize 0".into()));
        }
        if n > self.limit {
            return Err(Error::Capacity(format!(
                "{n} exceeds the sieve limit {}",
                self.limit
            )));
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.smallest_factor[m as usize] as u64;
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization { n, factors })
    }
}

/// Prime factorization `n = ∏ p^e` with factors in ascending prime order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, ascending in the prime; empty for n = 1.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// P₊(n): the largest prime factor, with P₊(1) = 1.
    pub fn largest_prime_factor(&self) -> u64 {
        self.factors.last().map_or(1, |&(p, _)| p)
    }

    /// Ω(n): number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Λ(n): log p on prime powers p^k, zero otherwise.
    pub fn von_mangoldt(&self) -> f64 {
        if self.factors.len() == 1 {
            (self.factors[0].0 as f64).ln()
        } else {
            0.0
        }
    }

    /// φ(n): Euler's totient.
    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product()
    }
}

/// A friable-counting query `(x, y)` with `u = log x / log y`.
#[derive(Debug, Clone, Copy)]
pub struct FriableQuery {
    x: f64,
    y: f64,
    u: f64,
}

impl FriableQuery {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 1.0) {
            return Err(Error::InvalidArgument(format!("x must be >= 1, got {x}")));
        }
        if !(y.is_finite() && y >= 2.0) {
            return Err(Error::InvalidArgument(format!("y must be >= 2, got {y}")));
        }
        Ok(Self {
            x,
            y,
            u: x.ln() / y.ln(),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// `u = log x / log y`; equals 1 exactly when x = y.
    pub fn u(&self) -> f64 {
        self.u
    }
}

fn validate_xy(x: f64, y: f64) -> Result<(u64, f64)> {
    if !(x.is_finite() && x >= 1.0) {
        return Err(Error::InvalidArgument(format!("x must be >= 1, got {x}")));
    }
    if x > MAX_FRIABLE_X {
        return Err(Error::Capacity(format!(
            "x = {x} exceeds the enumeration bound {MAX_FRIABLE_X}"
        )));
    }
    if !(y.is_finite() && y >= 2.0) {
        return Err(Error::InvalidArgument(format!("y must be >= 2, got {y}")));
    }
    Ok((x.floor() as u64, y))
}

/// Depth-first walk over products of primes `≤ y` not exceeding `x_floor`.
/// The running product stays in exact integer arithmetic; a log-domain guard
/// prunes before a multiplication could overflow.
fn friable_walk<F: FnMut(u64)>(primes: &[u64], x_floor: u64, visit: &mut F) {
    let ln_x = (x_floor as f64).ln();
    fn rec<F: FnMut(u64)>(
        primes: &[u64],
        start: usize,
        prod: u64,
        ln_prod: f64,
        x_floor: u64,
        ln_x: f64,
        visit: &mut F,
    ) {
        visit(prod);
        for j in start..primes.len() {
            let p = primes[j];
            let ln_next = ln_prod + (p as f64).ln();
            if ln_next > ln_x + 1e-9 {
                break;
            }
            match prod.checked_mul(p) {
                Some(next) if next <= x_floor => {
                    rec(primes, j, next, ln_next, x_floor, ln_x, visit);
                }
                _ => break,
            }
        }
    }
    rec(primes, 0, 1, 0.0, x_floor, ln_x, visit);
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // Plain Eratosthenes: the friable entry points only need primes <= y.
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Every y-friable `n ≤ x`, ascending; the first element is always 1.
pub fn friable_numbers(x: f64, y: f64) -> Result<Vec<u64>> {
    let (x_floor, y) = validate_xy(x, y)?;
    let primes = primes_up_to(y.floor().min(x_floor as f64) as u64);
    let mut out = Vec::new();
    friable_walk(&primes, x_floor, &mut |n| out.push(n));
    out.sort_unstable();
    Ok(out)
}

/// Ψ(x, y): the number of y-friable integers `≤ x`.
pub fn psi_count(x: f64, y: f64) -> Result<u64> {
    let (x_floor, y) = validate_xy(x, y)?;
    let primes = primes_up_to(y.floor().min(x_floor as f64) as u64);
    let mut count = 0u64;
    friable_walk(&primes, x_floor, &mut |_| count += 1);
    Ok(count)
}

/// Ψ(x, y; f): the f-weighted friable sum, accumulated with compensated
/// summation over the ascending stream.
pub fn psi_weighted<F>(x: f64, y: f64, f: F) -> Result<Complex64>
where
    F: Fn(u64) -> Complex64,
{
    let ns = friable_numbers(x, y)?;
    let mut acc = CompensatedComplexSum::new();
    for n in ns {
        acc.add(f(n));
    }
    Ok(acc.value())
}

/// Leading-order friable count `x·ρ(u)`.
///
/// Only the leading term of the `Ψ(x,y) = x ρ(u) (1 + O(log(u+1)/log y))`
/// asymptotic is returned; `table.log_rho(u)` gives the log form, which is
/// the approximation to `log(Ψ(x,y)/x)`.
pub fn psi_asymptotic(query: &FriableQuery, table: &DickmanTable) -> Result<f64> {
    Ok(query.x() * table.rho(query.u())?)
}

/// `Σ_{p ≤ x} p^{-σ} − σ·log log x − x^{1−σ}/((1−σ)·log x)`.
///
/// The subtracted terms are a proven lower-bound profile for the prime sum
/// when `(1−σ)·log x ≥ 1/2`; the deficit is reported so callers can infer
/// the absolute constant empirically, and no specific constant is asserted.
pub fn prime_sum_deficit(x: f64, sigma: f64, table: &PrimeTable) -> Result<f64> {
    if !(x.is_finite() && x >= 3.0) {
        return Err(Error::InvalidArgument(format!("x must be >= 3, got {x}")));
    }
    if !(sigma > 0.5 && sigma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must lie in (1/2, 1), got {sigma}"
        )));
    }
    if (1.0 - sigma) * x.ln() < 0.5 {
        return Err(Error::Domain(format!(
            "(1-sigma)·log x = {} < 1/2; the bound is not claimed here",
            (1.0 - sigma) * x.ln()
        )));
    }
    if x > table.limit() as f64 {
        return Err(Error::Capacity(format!(
            "x = {x} exceeds the sieve limit {}",
            table.limit()
        )));
    }
    let mut acc = CompensatedSum::new();
    for &p in table.primes() {
        if (p as f64) > x {
            break;
        }
        acc.add((p as f64).powf(-sigma));
    }
    let log_x = x.ln();
    Ok(acc.value() - sigma * log_x.ln() - x.powf(1.0 - sigma) / ((1.0 - sigma) * log_x))
}
