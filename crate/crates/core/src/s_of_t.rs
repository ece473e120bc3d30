//! S(t) by zero counting and by the explicit formula over primes and zeros,
//! its second moment, and the mean values G(T), H(T) and R.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::kernels::f_weight;
use crate::primes::PrimeTable;
use crate::quadrature::{integrate_partitioned, GaussLegendre, QuadratureSpec};
use crate::zeros::{theta_any, ZeroSet};

/// Zeros with |t − γ| log x beyond this are summed only through a bound.
pub const ZERO_WINDOW: f64 = 50.0;

/// Beyond this, u/sinh u is below 1e-18 and the integral is cut off.
const SINH_CUTOFF: f64 = 45.0;

/// Zero set and prime table used by every S(t) evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SEvaluator<'a> {
    zeros: &'a ZeroSet,
    primes: &'a PrimeTable,
}

/// One Dirichlet-polynomial term Λ(n) n^{-1/2} f(log n/log x)/log n.
#[derive(Debug, Clone, Copy)]
struct PrimeTerm {
    log_n: f64,
    coeff: f64,
}

/// The direct mean values with their sum-formula companions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValues {
    pub g: f64,
    pub h: f64,
    /// (T/2π²) Σ Λ²(n) f²/(n log² n).
    pub g_formula: f64,
    /// −(T/π²) Σ Λ²(n) f/(n log² n).
    pub h_formula: f64,
}

/// ∫_0^∞ u/((u² + v²) sinh u) du.
pub fn sinh_tail_integral(v: f64, spec: &QuadratureSpec) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        return Err(domain("sinh tail integral needs finite v != 0"));
    }
    let v2 = v * v;
    let av = v.abs();
    // the integrand has width |v| near the origin
    let mut breaks = Vec::new();
    let mut b = av;
    while b < SINH_CUTOFF {
        breaks.push(b);
        b *= 4.0;
    }
    integrate_partitioned(
        |u: f64| {
            let r = if u < 1e-8 { 1.0 } else { u / u.sinh() };
            r / (u * u + v2)
        },
        0.0,
        SINH_CUTOFF,
        &breaks,
        f64::INFINITY,
        spec,
    )
    .map(|e| e.value)
}

/// sin(v) I(v), zero at v = 0.
fn zero_term(v: f64, spec: &QuadratureSpec) -> Result<f64> {
    if v == 0.0 {
        return Ok(0.0);
    }
    Ok(v.sin() * sinh_tail_integral(v, spec)?)
}

impl<'a> SEvaluator<'a> {
    pub fn new(zeros: &'a ZeroSet, primes: &'a PrimeTable) -> Self {
        Self { zeros, primes }
    }

    pub fn zeros(&self) -> &ZeroSet {
        self.zeros
    }

    pub fn primes(&self) -> &PrimeTable {
        self.primes
    }

    fn require_complete(&self, t: f64) -> Result<()> {
        self.zeros.require_coverage(t)
    }

    /// N(t) − 1 − θ(t)/π with N counting a zero at t as 1/2.
    fn s_unchecked(&self, t: f64) -> f64 {
        let ords = self.zeros.ordinates();
        let below = ords.partition_point(|&g| g < t);
        let at = ords[below..].iter().take_while(|&&g| g == t).count();
        below as f64 + 0.5 * at as f64 - 1.0 - theta_any(t) / PI
    }

    /// S(t) from the zero count, 10 ≤ t ≤ t_max.
    pub fn s_exact(&self, t: f64) -> Result<f64> {
        if !(t >= 10.0) {
            return Err(domain(format!("S(t) needs t >= 10, got {t}")));
        }
        self.require_complete(t)?;
        Ok(self.s_unchecked(t))
    }

    /// S(t) for 0 ≤ t ≤ t_max, with θ from log-Gamma below 10.
    pub fn s_value(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(domain(format!("S(t) needs t >= 0, got {t}")));
        }
        self.require_complete(t)?;
        Ok(self.s_unchecked(t))
    }

    fn prime_terms(&self, x: f64) -> Result<Vec<PrimeTerm>> {
        if !(x >= 4.0) {
            return Err(domain(format!("x must be at least 4, got {x}")));
        }
        if x.floor() as u64 > self.primes.limit() {
            return Err(domain(format!(
                "prime table reaches {}, x = {x}",
                self.primes.limit()
            )));
        }
        let log_x = x.ln();
        Ok(self
            .primes
            .lambda_up_to(x.floor() as u64)
            .iter()
            .map(|&(n, lam)| {
                let log_n = (n as f64).ln();
                PrimeTerm {
                    log_n,
                    coeff: lam / (n as f64).sqrt() / log_n * f_weight(log_n / log_x),
                }
            })
            .collect())
    }

    /// (1/π) Σ_γ sin((t−γ)L) I((t−γ)L) over zeros ±γ within the window, and
    /// a bound for the omitted zeros.
    fn zero_sum(&self, t: f64, log_x: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
        let window = ZERO_WINDOW / log_x;
        let ords = self.zeros.ordinates();
        let t_max = self.zeros.t_max();
        if t + window > t_max {
            return Err(Error::Coverage {
                needed: t + window,
                available: t_max,
            });
        }
        let mut sum = 0.0;
        let mut omitted = 0.0;
        for &g in ords {
            for d in [t - g, t + g] {
                let v = d * log_x;
                if d.abs() <= window {
                    sum += zero_term(v, spec)?;
                } else {
                    omitted += PI * PI / (4.0 * v * v);
                }
            }
        }
        // zeros above t_max, counted per unit cell by the smooth density plus 2
        let gap = t_max - t - 1.0;
        let a = (t / (2.0 * PI)).ln().max(0.0) / (2.0 * PI) + 2.0;
        let b = 1.0 / (2.0 * PI * t.sqrt());
        omitted += PI * PI / (4.0 * log_x * log_x) * (2.0 * a / gap + 4.0 * b / gap.sqrt());
        Ok((sum / PI, omitted / PI))
    }

    /// S(t) from the explicit formula with truncation x. Returns the value and
    /// an error budget: x^{1/2}/(t² log x) + 1/(t log x) plus the bound for
    /// zeros outside the window.
    pub fn s_explicit(&self, t: f64, x: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
        if !(t >= 10.0) {
            return Err(domain(format!("explicit formula needs t >= 10, got {t}")));
        }
        let terms = self.prime_terms(x)?;
        let log_x = x.ln();
        let prime_part: f64 = terms.iter().map(|p| p.coeff * (t * p.log_n).sin()).sum();
        let (zero_part, omitted) = self.zero_sum(t, log_x, spec)?;
        let budget = x.sqrt() / (t * t * log_x) + 1.0 / (t * log_x) + omitted;
        Ok((-prime_part / PI + zero_part, budget))
    }

    /// Panels on [a, b] split at every ordinate, then to width ≤ `width`.
    fn panels(&self, a: f64, b: f64, width: f64) -> Vec<(f64, f64)> {
        let mut cuts = vec![a];
        cuts.extend(self.zeros.ordinates().iter().copied().filter(|&g| g > a && g < b));
        cuts.push(b);
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let n = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
            let h = (w[1] - w[0]) / n as f64;
            for i in 0..n {
                let lo = w[0] + h * i as f64;
                let hi = if i + 1 == n { w[1] } else { lo + h };
                out.push((lo, hi));
            }
        }
        out
    }

    /// ∫_0^T S(t)^p dt, Gauss–Legendre of the given order on each panel
    /// between consecutive ordinates (S is smooth there). The head below 10
    /// uses θ from log-Gamma.
    fn s_power_integral(&self, lo: f64, t: f64, power: i32, order: usize) -> Result<f64> {
        if !(t >= 10.0) || !(0.0..=10.0).contains(&lo) {
            return Err(domain(format!("need T >= 10 and a lower limit in [0, 10], got T={t}")));
        }
        self.require_complete(t)?;
        let gl = GaussLegendre::new(order);
        let mut panels = self.panels(lo, 10.0, 1.0);
        panels.extend(self.panels(10.0, t, 8.0));
        let mut total = 0.0;
        for (lo, hi) in panels {
            let mid = 0.5 * (lo + hi);
            let n = self.zeros.count_up_to(mid) as f64;
            total += gl.integrate(|s| (n - 1.0 - theta_any(s) / PI).powi(power), lo, hi);
        }
        Ok(total)
    }

    /// ∫_0^T S(t)² dt.
    pub fn second_moment(&self, t: f64) -> Result<f64> {
        self.second_moment_with(t, 10)
    }

    /// As [`second_moment`](Self::second_moment) with a chosen number of nodes per panel.
    pub fn second_moment_with(&self, t: f64, order: usize) -> Result<f64> {
        self.s_power_integral(0.0, t, 2, order)
    }

    /// ∫_1^T S(t)² dt.
    pub fn second_moment_from_one(&self, t: f64) -> Result<f64> {
        self.s_power_integral(1.0, t, 2, 10)
    }

    /// (1/T) ∫_0^T S(t) dt.
    pub fn mean(&self, t: f64) -> Result<f64> {
        Ok(self.s_power_integral(0.0, t, 1, 10)? / t)
    }

    /// G(T) and H(T) by quadrature of their defining integrals over [1, T],
    /// with the sum-formula values alongside. Needs x ≤ √T.
    pub fn g_and_h_direct(&self, t: f64, x: f64) -> Result<MeanValues> {
        if !(t >= 10.0) || !(x * x <= t) {
            return Err(domain(format!("need T >= 10 and x <= sqrt(T), got T={t}, x={x}")));
        }
        self.require_complete(t)?;
        let terms = self.prime_terms(x)?;
        let poly = |s: f64| -> f64 { terms.iter().map(|p| p.coeff * (s * p.log_n).sin()).sum() };
        let gl = GaussLegendre::new(16);
        let mut g = 0.0;
        let mut h = 0.0;
        for (lo, hi) in self.panels(1.0, t, 0.5) {
            let n = self.zeros.count_up_to(0.5 * (lo + hi)) as f64;
            g += gl.integrate(|s| poly(s).powi(2), lo, hi);
            h += gl.integrate(|s| (n - 1.0 - theta_any(s) / PI) * poly(s), lo, hi);
        }
        // Λ²(n)/log² n = 1/m² on n = p^m
        let (mut sf2, mut sf) = (0.0, 0.0);
        let log_x = x.ln();
        for &(n, lam) in self.primes.lambda_up_to(x.floor() as u64) {
            let ln = (n as f64).ln();
            let base = lam * lam / (n as f64 * ln * ln);
            let f = f_weight(ln / log_x);
            sf2 += base * f * f;
            sf += base * f;
        }
        Ok(MeanValues {
            g: g / (PI * PI),
            h: 2.0 * h / PI,
            g_formula: t / (2.0 * PI * PI) * sf2,
            h_formula: -t / (PI * PI) * sf,
        })
    }

    /// R = ∫_1^T |(1/π) Σ_γ sin((t−γ)L) I((t−γ)L)|² dt by quadrature, with
    /// the integrand split at the ordinates where it jumps. Needs zeros up
    /// to T + 50/log x.
    pub fn r_direct(&self, t: f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        if !(t >= 10.0) || !(x >= 4.0) {
            return Err(domain("need T >= 10 and x >= 4"));
        }
        let log_x = x.ln();
        let gl = GaussLegendre::new(12);
        let width = (0.5f64).min(PI / (2.0 * log_x));
        let mut total = 0.0;
        for (lo, hi) in self.panels(1.0, t, width) {
            let h = 0.5 * (hi - lo);
            let c = 0.5 * (hi + lo);
            for (&node, &w) in gl.nodes().iter().zip(gl.weights()) {
                let s = c + h * node;
                let (z, _) = self.zero_sum(s, log_x, spec)?;
                total += w * h * z * z;
            }
        }
        Ok(total)
    }
}
