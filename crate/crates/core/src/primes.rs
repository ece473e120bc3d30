//! Primes, the von Mangoldt function and the prime sums of the second moment.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Result};
use crate::kernels::f_weight;

pub use crate::special::{euler_constant, euler_constant_by_bessel, euler_constant_by_harmonic};

/// Default prime cutoff for the infinite prime-power sums.
pub const DEFAULT_P_CUTOFF: u64 = 1_000_000;
/// Default exponent cutoff for the infinite prime-power sums.
pub const DEFAULT_M_CUTOFF: u32 = 64;

/// Primes and prime powers up to `limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    /// (n, Λ(n)) for every prime power n ≤ limit, ascending in n.
    lambda_support: Vec<(u64, f64)>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn lambda_support(&self) -> &[(u64, f64)] {
        &self.lambda_support
    }

    /// Primes p ≤ u.
    pub fn primes_up_to(&self, u: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= u);
        &self.primes[..end]
    }

    /// Prime powers n ≤ u with Λ(n).
    pub fn lambda_up_to(&self, u: u64) -> &[(u64, f64)] {
        let end = self.lambda_support.partition_point(|&(n, _)| n <= u);
        &self.lambda_support[..end]
    }

    /// Λ(n) for 1 ≤ n ≤ limit.
    pub fn lambda(&self, n: u64) -> Result<f64> {
        if n == 0 || n > self.limit {
            return Err(domain(format!("n = {n} outside [1, {}]", self.limit)));
        }
        Ok(self
            .lambda_support
            .binary_search_by_key(&n, |&(m, _)| m)
            .map(|i| self.lambda_support[i].1)
            .unwrap_or(0.0))
    }
}

/// Odd-only sieve of Eratosthenes.
fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // index i stands for 2i + 1
    let size = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; size];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j < size {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2];
    primes.extend(
        composite
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    primes
}

pub fn build_prime_table(x: u64) -> Result<PrimeTable> {
    if x < 4 {
        return Err(domain(format!("prime table needs x >= 4, got {x}")));
    }
    let primes = sieve(x);
    let mut lambda_support = Vec::with_capacity(primes.len() + primes.len() / 8);
    for &p in &primes {
        let log_p = (p as f64).ln();
        let mut pk = p;
        loop {
            lambda_support.push((pk, log_p));
            match pk.checked_mul(p) {
                Some(next) if next <= x => pk = next,
                _ => break,
            }
        }
    }
    lambda_support.sort_unstable_by_key(|&(n, _)| n);
    Ok(PrimeTable {
        limit: x,
        primes,
        lambda_support,
    })
}

/// Σ_{p ≤ u} 1/p.
pub fn mertens_partial(u: f64, table: &PrimeTable) -> Result<f64> {
    if !(2.0..=table.limit as f64).contains(&u) {
        return Err(domain(format!("u = {u} outside [2, {}]", table.limit)));
    }
    Ok(table
        .primes_up_to(u.floor() as u64)
        .iter()
        .rev()
        .map(|&p| 1.0 / p as f64)
        .sum())
}

/// Σ_{m=2}^{M} Σ_{p ≤ P} c(m) p^{−m} and a rigorous bound on the omitted part
/// of the infinite double sum. Requires |c(m)| ≤ 1.
pub fn prime_power_double_sum<C: Fn(u32) -> f64>(
    coeff: C,
    p_cutoff: u64,
    m_cutoff: u32,
) -> Result<(f64, f64)> {
    if p_cutoff < 3 || m_cutoff < 2 {
        return Err(domain("need p_cutoff >= 3 and m_cutoff >= 2"));
    }
    let c: Vec<f64> = (2..=m_cutoff).map(&coeff).collect();
    if c.iter().any(|v| !(v.abs() <= 1.0)) {
        return Err(domain("coefficients must be bounded by 1"));
    }
    let c_max = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let primes = sieve(p_cutoff);
    // largest primes first so that small terms accumulate before large ones
    let mut total = 0.0;
    for &p in primes.iter().rev() {
        let inv = 1.0 / p as f64;
        let mut pow = inv * inv;
        let mut inner = 0.0;
        for &cm in &c {
            if pow == 0.0 {
                break;
            }
            inner += cm * pow;
            pow *= inv;
        }
        total += inner;
    }
    // p > P: Σ_{p>P} 1/(p(p−1)) over odd n = 2j+1 > P is at most Σ_{j ≥ j0} 1/(4j(j−1)).
    let j0 = p_cutoff.div_ceil(2) as f64;
    let prime_tail = 1.0 / (4.0 * (j0 - 1.0));
    // m > M for p ≤ P: Σ_p p^{−M}/(p−1) ≤ 2^{−M} + ½(3^{−M} + 3^{1−M}/(M−1)).
    let m = m_cutoff as f64;
    let power_tail = 2f64.powf(-m) + 0.5 * (3f64.powf(-m) + 3f64.powf(1.0 - m) / (m - 1.0));
    let tail = if c_max == 0.0 {
        0.0
    } else {
        c_max * (prime_tail + power_tail)
    };
    Ok((total, tail))
}

/// The four prime sums S₁..S₄ at cutoff x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeSumBundle {
    pub x: u64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
    /// Rigorous bound on Σ_{m≥2}Σ_p 1/(m²p^m) − S₃.
    pub tail_bound_s3: f64,
}

pub fn prime_sum_terms(x: u64, table: &PrimeTable) -> Result<PrimeSumBundle> {
    if x < 4 || x > table.limit {
        return Err(domain(format!("x = {x} outside [4, {}]", table.limit)));
    }
    let log_x = (x as f64).ln();
    let (mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0);
    for &(n, log_p) in table.lambda_up_to(x).iter().rev() {
        let m = (((n as f64).ln() / log_p).round()) as u32;
        let f = f_weight((n as f64).ln() / log_x);
        let inv_n = 1.0 / n as f64;
        if m == 1 {
            s1 += f * f * inv_n;
            s2 += f * inv_n;
        } else {
            let w = inv_n / (m * m) as f64;
            s3 += w;
            s4 += w * (f - 1.0) * (f - 1.0);
        }
    }
    Ok(PrimeSumBundle {
        x,
        s1,
        s2,
        s3,
        s4,
        tail_bound_s3: s3_tail_bound(x as f64),
    })
}

/// Σ_m (1/m²) Σ_{n > x^{1/m}} n^{−m}, each inner sum bounded by y^{−m} + y^{1−m}/(m−1)
/// with y = max(x^{1/m}, 2).
fn s3_tail_bound(x: f64) -> f64 {
    let mut bound = 0.0;
    for m in 2..=63u32 {
        let mf = m as f64;
        let y = x.powf(1.0 / mf);
        let inner = if y >= 2.0 {
            (1.0 + y / (mf - 1.0)) / x
        } else {
            2f64.powf(-mf) + 2f64.powf(1.0 - mf) / (mf - 1.0)
        };
        bound += inner / (mf * mf);
    }
    bound + 2f64.powi(-63)
}

/// A truncated Euler product with its relative truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSeries {
    pub value: f64,
    pub truncation_error: f64,
}

fn twin_product(cutoff: u64) -> f64 {
    let log: f64 = sieve(cutoff)
        .iter()
        .skip(1)
        .rev()
        .map(|&p| {
            let q = (p - 1) as f64;
            (-1.0 / (q * q)).ln_1p()
        })
        .sum();
    2.0 * log.exp()
}

fn default_twin_product() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| twin_product(DEFAULT_P_CUTOFF))
}

/// 𝔖(d) with the default prime cutoff.
pub fn singular_series(d: i64) -> Result<f64> {
    singular_series_with(d, DEFAULT_P_CUTOFF).map(|s| s.value)
}

/// 𝔖(d) = 2∏_{p>2}(1 − 1/(p−1)²) ∏_{p|d, p>2}(p−1)/(p−2) for even d, 0 for odd d,
/// with the Euler product truncated at `cutoff`.
pub fn singular_series_with(d: i64, cutoff: u64) -> Result<SingularSeries> {
    if d == 0 {
        return Err(domain("singular series undefined at d = 0"));
    }
    if cutoff < 5 {
        return Err(domain("singular series cutoff must be at least 5"));
    }
    if d % 2 != 0 {
        return Ok(SingularSeries {
            value: 0.0,
            truncation_error: 0.0,
        });
    }
    let base = if cutoff == DEFAULT_P_CUTOFF {
        default_twin_product()
    } else {
        twin_product(cutoff)
    };
    let mut rest = d.unsigned_abs();
    while rest % 2 == 0 {
        rest /= 2;
    }
    let mut factor = 1.0;
    let mut p = 3u64;
    while p * p <= rest {
        if rest % p == 0 {
            factor *= (p - 1) as f64 / (p - 2) as f64;
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 2;
    }
    if rest > 1 {
        factor *= (rest - 1) as f64 / (rest - 2) as f64;
    }
    let value = base * factor;
    // −Σ_{p>P} log(1 − 1/(p−1)²) ≤ Σ_{odd n>P} 1/((n−2)n) ≤ 1/(2P − 4)
    let rel = 1.0 / (2.0 * cutoff as f64 - 4.0);
    Ok(SingularSeries {
        value,
        truncation_error: value * rel,
    })
}

/// Σ_{m≥2}Σ_p c(m)p^{−m} at the default cutoffs, value and tail bound.
fn default_double_sum<C: Fn(u32) -> f64>(coeff: C) -> (f64, f64) {
    prime_power_double_sum(coeff, DEFAULT_P_CUTOFF, DEFAULT_M_CUTOFF)
        .expect("default cutoffs are valid")
}

/// Σ_{m≥2}Σ_p 1/(m p^m), cached.
pub fn log_correction_sum() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| default_double_sum(|m| 1.0 / m as f64).0)
}

/// Σ_{m≥2}Σ_p (1/m − 1/m²)/p^m, cached.
pub fn prime_power_constant() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        default_double_sum(|m| {
            let mf = m as f64;
            1.0 / mf - 1.0 / (mf * mf)
        })
        .0
    })
}

/// Σ_{m≥2}Σ_p (−1/m + 1/m²)/p^m, cached. Summed with the negated
/// coefficients of [`prime_power_constant`], so the two are exact negatives.
pub fn signed_prime_power_constant() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        default_double_sum(|m| {
            let mf = m as f64;
            -1.0 / mf + 1.0 / (mf * mf)
        })
        .0
    })
}

/// −log log x + log(π/2) − π²/8 + 1 − C₀ + Σ_{m≥2}Σ_p 1/(m p^m).
pub fn closed_form_s1_minus_2s2(x: f64) -> Result<f64> {
    closed_form_s1_minus_2s2_with(x, euler_constant())
}

/// Same as [`closed_form_s1_minus_2s2`] with Euler's constant supplied.
pub fn closed_form_s1_minus_2s2_with(x: f64, c0: f64) -> Result<f64> {
    if !(x >= 16.0) {
        return Err(domain(format!("closed form needs x >= 16, got {x}")));
    }
    Ok(-x.ln().ln() + (PI / 2.0).ln() - PI * PI / 8.0 + 1.0 - c0 + log_correction_sum())
}
