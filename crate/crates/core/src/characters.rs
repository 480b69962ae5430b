//! Exact Dirichlet character groups mod q.
//!
//! The unit group (ℤ/q)* is decomposed by CRT into cyclic factors: odd prime
//! powers contribute one factor generated by a least primitive root, the
//! modulus 4 one factor of order 2, and 2^k (k ≥ 3) the usual pair
//! ⟨−1⟩ × ⟨5⟩. Each factor carries an exact discrete-log table, and
//! character values are assembled as exact rational multiples of 2π before
//! being materialized to complex doubles, so root-of-unity drift never
//! accumulates.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Largest supported modulus (the discrete-log tables are O(q) memory).
pub const MAX_MODULUS: u64 = 1_000_000;

const NO_DLOG: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct CyclicFactor {
    /// The prime-power modulus this factor sits inside.
    modulus: u64,
    /// Order of the cyclic factor.
    order: u64,
    /// Multiplier `lcm_order / order` used to bring exponents to the common
    /// denominator.
    scale: u64,
    /// Discrete log of each residue mod `modulus`; `NO_DLOG` off the units.
    dlog: Vec<u32>,
}

/// The full character group mod q with a stable enumeration order:
/// the principal character has index 0 and index vectors increase
/// lexicographically (last factor fastest).
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    q: u64,
    phi: u64,
    lcm_order: u64,
    factors: Vec<CyclicFactor>,
}

impl CharacterGroup {
    pub fn build(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidArgument(format!(
                "modulus must be at least 3, got {q}"
            )));
        }
        if q > MAX_MODULUS {
            return Err(Error::Capacity(format!(
                "modulus {q} exceeds the supported bound {MAX_MODULUS}"
            )));
        }
        let mut factors = Vec::new();
        let mut m = q;
        let mut p = 2u64;
        while p * p <= m {
            if m.is_multiple_of(p) {
                let mut e = 0u32;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                push_factors(&mut factors, p, e);
            }
            p += 1;
        }
        if m > 1 {
            push_factors(&mut factors, m, 1);
        }
        let phi: u64 = factors.iter().map(|f| f.order).product::<u64>().max(1);
        let lcm_order = factors.iter().fold(1u64, |acc, f| lcm(acc, f.order));
        let mut group = Self {
            q,
            phi,
            lcm_order,
            factors,
        };
        for f in &mut group.factors {
            f.scale = group.lcm_order / f.order;
        }
        Ok(group)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// φ(q), the number of characters.
    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Index of the principal character in the enumeration order.
    pub fn principal_index(&self) -> usize {
        0
    }

    /// The character with the given enumeration index.
    pub fn character(&self, index: usize) -> Result<Character<'_>> {
        if index as u64 >= self.phi {
            return Err(Error::Range(format!(
                "character index {index} out of range 0..{}",
                self.phi
            )));
        }
        let mut digits = vec![0u64; self.factors.len()];
        let mut rest = index as u64;
        for (slot, f) in digits.iter_mut().zip(&self.factors).rev() {
            *slot = rest % f.order;
            rest /= f.order;
        }
        Ok(Character {
            group: self,
            index,
            exponents: digits,
        })
    }

    pub fn principal(&self) -> Character<'_> {
        self.character(0).expect("principal character exists")
    }

    /// All φ(q) characters in enumeration order.
    pub fn characters(&self) -> impl Iterator<Item = Character<'_>> {
        (0..self.phi as usize).map(move |i| self.character(i).expect("index in range"))
    }
}

/// One Dirichlet character, identified by an exponent per cyclic factor.
#[derive(Debug, Clone)]
pub struct Character<'g> {
    group: &'g CharacterGroup,
    index: usize,
    exponents: Vec<u64>,
}

impl Character<'_> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn group(&self) -> &CharacterGroup {
        self.group
    }

    /// Exponent vector over the cyclic factors.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// χ(n): zero off the units mod q, otherwise a root of unity whose
    /// phase is assembled exactly as a rational multiple of 2π.
    pub fn eval(&self, n: u64) -> Complex64 {
        let g = self.group;
        let r = n % g.q;
        if gcd(r, g.q) != 1 {
            return Complex64::new(0.0, 0.0);
        }
        let l = g.lcm_order;
        let mut num: u64 = 0;
        for (f, &a) in g.factors.iter().zip(&self.exponents) {
            let d = f.dlog[(r % f.modulus) as usize];
            debug_assert!(d != NO_DLOG);
            let term = ((a as u128 * d as u128 % l as u128) * f.scale as u128 % l as u128) as u64;
            num = (num + term) % l;
        }
        let theta = 2.0 * std::f64::consts::PI * (num as f64 / l as f64);
        Complex64::new(theta.cos(), theta.sin())
    }

    /// χ on every residue class, indexed by n mod q. Series evaluators use
    /// this to amortize the discrete-log lookups.
    pub fn values_mod_q(&self) -> Vec<Complex64> {
        (0..self.group.q).map(|r| self.eval(r)).collect()
    }
}

fn push_factors(factors: &mut Vec<CyclicFactor>, p: u64, e: u32) {
    let pe = p.pow(e);
    if p == 2 {
        match e {
            1 => {}
            2 => {
                // (ℤ/4)* = ⟨3⟩.
                let mut dlog = vec![NO_DLOG; 4];
                dlog[1] = 0;
                dlog[3] = 1;
                factors.push(CyclicFactor {
                    modulus: 4,
                    order: 2,
                    scale: 1,
                    dlog,
                });
            }
            _ => {
                // (ℤ/2^k)* = ⟨−1⟩ × ⟨5⟩ with 5 of order 2^{k−2}.
                let half = pe / 4;
                let mut sign = vec![NO_DLOG; pe as usize];
                let mut five = vec![NO_DLOG; pe as usize];
                let mut pow = 1u64;
                for t in 0..half {
                    sign[pow as usize] = 0;
                    five[pow as usize] = t as u32;
                    let neg = pe - pow;
                    sign[neg as usize] = 1;
                    five[neg as usize] = t as u32;
                    pow = pow * 5 % pe;
                }
                factors.push(CyclicFactor {
                    modulus: pe,
                    order: 2,
                    scale: 1,
                    dlog: sign,
                });
                factors.push(CyclicFactor {
                    modulus: pe,
                    order: half,
                    scale: 1,
                    dlog: five,
                });
            }
        }
        return;
    }
    let order = pe / p * (p - 1);
    let g = primitive_root(p, e);
    let mut dlog = vec![NO_DLOG; pe as usize];
    let mut pow = 1u64;
    for d in 0..order {
        dlog[pow as usize] = d as u32;
        pow = mul_mod(pow, g, pe);
    }
    factors.push(CyclicFactor {
        modulus: pe,
        order,
        scale: 1,
        dlog,
    });
}

/// Least primitive root mod p, lifted to p^e when needed.
fn primitive_root(p: u64, e: u32) -> u64 {
    if p == 3 && e == 1 {
        return 2;
    }
    let phi = p - 1;
    let mut prime_divisors = Vec::new();
    let mut m = phi;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            prime_divisors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divisors.push(m);
    }
    let mut g = 2u64;
    loop {
        if prime_divisors.iter().all(|&r| pow_mod(g, phi / r, p) != 1) {
            break;
        }
        g += 1;
    }
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        // g generates mod p but not mod p^2; g + p always does.
        g += p;
    }
    g
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut res = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            res = mul_mod(res, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    res
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
